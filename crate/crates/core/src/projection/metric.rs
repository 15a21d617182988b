use crate::groups::{Element, GroupModel};
use crate::metric_space::{eps_geo, explore_ball, BallOptions, ExploredBall};
use std::fmt;
use std::sync::Arc;

/// Word metric on a group, d(x, y) = |x⁻¹y|, backed by exact norms when the
/// model has them and otherwise by a ball around the identity (the probe).
/// Geodesics are always read off the probe's predecessor DAG and translated.
pub struct WordMetric {
    model: Arc<dyn GroupModel>,
    probe: ExploredBall<Element>,
    exact: bool,
}

impl fmt::Debug for WordMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordMetric")
            .field("model", &self.model.spec())
            .field("reach", &self.reach())
            .field("exact", &self.exact)
            .finish()
    }
}

impl WordMetric {
    pub fn new(model: Arc<dyn GroupModel>, reach: f64) -> Self {
        let probe = explore_ball(&*model, model.identity(), reach, BallOptions::default());
        let exact = model.exact_norm(&model.identity()).is_some();
        WordMetric { model, probe, exact }
    }

    pub fn model(&self) -> &dyn GroupModel {
        &*self.model
    }

    pub fn model_arc(&self) -> &Arc<dyn GroupModel> {
        &self.model
    }

    pub fn probe(&self) -> &ExploredBall<Element> {
        &self.probe
    }

    /// Largest distance the probe certifies.
    pub fn reach(&self) -> f64 {
        self.probe.complete_radius
    }

    /// |g|, or None when g is beyond reach and the model has no exact norm.
    pub fn norm(&self, g: &Element) -> Option<f64> {
        if self.exact {
            return self.model.exact_norm(g);
        }
        self.probe
            .dist_of(g)
            .filter(|&d| d <= self.reach() + eps_geo(self.reach()))
    }

    pub fn dist(&self, x: &Element, y: &Element) -> Option<f64> {
        self.norm(&self.model.multiply(&self.model.inverse(x), y))
    }

    /// Calls `f` with each geodesic from x to y (vertex lists, x first) whose
    /// vertices all satisfy `keep`, pruning as soon as a vertex fails.
    /// Returns None when d(x, y) exceeds the reach, otherwise whether the
    /// cap of `cap` paths cut the enumeration short.
    pub fn for_each_geodesic(
        &self,
        x: &Element,
        y: &Element,
        cap: usize,
        keep: &mut dyn FnMut(&Element) -> bool,
        f: &mut dyn FnMut(&[Element]),
    ) -> Option<bool> {
        let g = self.model.multiply(&self.model.inverse(x), y);
        let target = self.probe.index_of(&g)?;
        if self.probe.dist(target) > self.reach() + eps_geo(self.reach()) {
            return None;
        }
        let end = self.model.multiply(x, self.probe.point(target));
        if !keep(&end) {
            return Some(false);
        }
        let mut stack = vec![(target, end)];
        let mut emitted = 0;
        let mut path = Vec::new();
        Some(self.walk(x, &mut stack, &mut emitted, cap, keep, f, &mut path))
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        x: &Element,
        stack: &mut Vec<(usize, Element)>,
        emitted: &mut usize,
        cap: usize,
        keep: &mut dyn FnMut(&Element) -> bool,
        f: &mut dyn FnMut(&[Element]),
        path: &mut Vec<Element>,
    ) -> bool {
        let v = stack.last().unwrap().0;
        if v == 0 {
            if *emitted >= cap {
                return true;
            }
            path.clear();
            path.extend(stack.iter().rev().map(|(_, e)| e.clone()));
            f(path);
            *emitted += 1;
            return false;
        }
        for &(u, _) in self.probe.preds(v) {
            let e = self.model.multiply(x, self.probe.point(u as usize));
            if !keep(&e) {
                continue;
            }
            stack.push((u as usize, e));
            let stop = self.walk(x, stack, emitted, cap, keep, f, path);
            stack.pop();
            if stop {
                return true;
            }
        }
        false
    }
}
