use super::{classify, Quotient};
use crate::axioms::AxisFamily;
use crate::error::{Error, Result};
use crate::groups::{Element, GroupModel};
use crate::metric_space::eps_geo;
use crate::projection::{closest_point_projection, WordMetric};
use serde::Serialize;
use std::sync::Arc;

const TIE_LIMIT: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct SectionEntry {
    #[serde(skip)]
    pub rep: Element,
    pub word: String,
    pub norm: f64,
    /// Other members of the coset with the same norm, in canonical order.
    pub ties: Vec<String>,
    pub tie_count: usize,
    /// A shorter representative could lie outside the explored ball.
    pub horizon_bound: bool,
}

/// One minimal-norm representative per coset met by the ball, ordered by
/// norm and then canonical element order.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalSectionTable {
    pub quotient: String,
    pub radius: f64,
    pub entries: Vec<SectionEntry>,
    #[serde(skip)]
    model: Option<Arc<dyn GroupModel>>,
}

impl MinimalSectionTable {
    pub fn model(&self) -> &dyn GroupModel {
        &**self.model.as_ref().expect("table built by minimal_section")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Ball points come in canonical order, so the first point met in each
/// coset is its minimal representative. Any shorter representative of a
/// coset whose best norm is ≤ the complete radius would itself be in the
/// ball, so the horizon binds only past that radius.
pub fn minimal_section(q: &Quotient, radius: f64, state_cap: usize) -> Result<MinimalSectionTable> {
    let c = classify(q, radius, state_cap)?;
    let model = q.base().clone();
    let complete = c.ball.complete_radius;
    let mut slot: Vec<Option<usize>> = vec![None; c.norms.len()];
    let mut entries: Vec<SectionEntry> = Vec::with_capacity(c.norms.len());
    for i in 0..c.ball.len() {
        let class = c.class_of[i] as usize;
        let d = c.ball.dist(i);
        match slot[class] {
            None => {
                slot[class] = Some(entries.len());
                let rep = c.ball.point(i).clone();
                entries.push(SectionEntry {
                    word: model.format(&rep),
                    rep,
                    norm: d,
                    ties: Vec::new(),
                    tie_count: 0,
                    horizon_bound: d > complete + eps_geo(complete),
                });
            }
            Some(e) if d <= entries[e].norm + eps_geo(d) => {
                let entry = &mut entries[e];
                entry.tie_count += 1;
                if entry.ties.len() < TIE_LIMIT {
                    entry.ties.push(model.format(c.ball.point(i)));
                }
            }
            Some(_) => {}
        }
    }
    Ok(MinimalSectionTable {
        quotient: q.label(),
        radius,
        entries,
        model: Some(model),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatedNet {
    pub k: f64,
    /// Indices into the section table, identity first.
    pub members: Vec<usize>,
    pub words: Vec<String>,
    /// For every excluded entry, an accepted member closer than K.
    pub blocked_by: Vec<(usize, usize)>,
}

/// Greedy maximal K-separated subset of the section, scanned by norm and
/// then canonical order.
pub fn separated_net(table: &MinimalSectionTable, k: f64) -> Result<SeparatedNet> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Invalid(format!("separation must be positive, got {k}")));
    }
    if table.is_empty() {
        return Err(Error::Invalid("empty section table".into()));
    }
    let model = table.model.clone().expect("table built by minimal_section");
    // Distances ≥ K never need to be known exactly, and no two reps are
    // further apart than twice the largest norm.
    let far = 2.0 * table.entries.iter().map(|e| e.norm).fold(0.0, f64::max);
    let exact = model.exact_norm(&model.identity()).is_some();
    let metric = (!exact).then(|| WordMetric::new(model.clone(), k.min(far)));
    let close = |a: &Element, b: &Element| {
        let d = match &metric {
            Some(m) => m.dist(a, b),
            None => model.exact_norm(&model.multiply(&model.inverse(a), b)),
        };
        d.is_some_and(|d| d < k - eps_geo(k))
    };
    let mut members: Vec<usize> = Vec::new();
    let mut blocked_by = Vec::new();
    for (i, e) in table.entries.iter().enumerate() {
        match members.iter().find(|&&m| close(&table.entries[m].rep, &e.rep)) {
            Some(&m) => blocked_by.push((i, m)),
            None => members.push(i),
        }
    }
    Ok(SeparatedNet {
        k,
        words: members.iter().map(|&m| table.entries[m].word.clone()).collect(),
        members,
        blocked_by,
    })
}

/// Largest parameter diameter of π_Y(o) ∪ π_Y(g·o) over section reps g and
/// family members Y.
pub fn section_projection_bound(metric: &WordMetric, table: &MinimalSectionTable, family: &AxisFamily) -> Result<f64> {
    let o = metric.model().identity();
    let mut worst: f64 = 0.0;
    for y in &family.members {
        let base = closest_point_projection(metric, &y.subset, &o)?;
        for e in &table.entries {
            let p = closest_point_projection(metric, &y.subset, &e.rep)?;
            worst = worst.max(base.joint_diameter(&p));
        }
    }
    Ok(worst)
}
