use super::invariants::{apply_word, permutation_representations, AbelianKey};
use super::PresentationQuotient;
use crate::error::{Error, Result};
use crate::groups::{invert_word, parse_group, product_factors, Element, FreeGroup, GroupModel, Letter, Product};
use crate::metric_space::{group_ball, BallOptions, ExploredBall, SphereCounts};
use crate::par;
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::sync::Arc;

/// A quotient given by a homomorphism onto a model group, each generator
/// mapped to a word in the target.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub label: String,
    pub base: Arc<dyn GroupModel>,
    pub target: Arc<dyn GroupModel>,
    images: Vec<Vec<Letter>>,
}

impl Homomorphism {
    pub fn new(
        label: impl Into<String>,
        base: Arc<dyn GroupModel>,
        target: Arc<dyn GroupModel>,
        images: Vec<Vec<Letter>>,
    ) -> Result<Self> {
        if images.len() != base.rank() {
            return Err(Error::Invalid(format!(
                "{} images for rank {}",
                images.len(),
                base.rank()
            )));
        }
        Ok(Homomorphism {
            label: label.into(),
            base,
            target,
            images,
        })
    }

    /// F_k → F_{k−m} killing the named generators: F_k / ⟨⟨killed⟩⟩.
    pub fn kill(rank: usize, killed: &[&str]) -> Result<Self> {
        let base: Arc<dyn GroupModel> = Arc::new(FreeGroup::new(rank));
        let mut idx = Vec::new();
        for k in killed {
            idx.push(base.label_index(k).ok_or_else(|| Error::UnknownLabel(k.to_string()))?);
        }
        let keep = rank - idx.len();
        if keep == 0 {
            return Err(Error::Invalid(
                "killing every generator leaves the trivial group".into(),
            ));
        }
        let mut next = 0;
        let images = (0..rank)
            .map(|i| {
                if idx.contains(&i) {
                    vec![]
                } else {
                    next += 1;
                    vec![Letter::pos(next - 1)]
                }
            })
            .collect();
        Self::new(
            format!("kill:{}", killed.join(",")),
            base,
            Arc::new(FreeGroup::new(keep)),
            images,
        )
    }

    /// F_k → ℤ^k.
    pub fn abelianization(rank: usize) -> Result<Self> {
        let base: Arc<dyn GroupModel> = Arc::new(FreeGroup::new(rank));
        let labels: Vec<String> = base.generators().iter().map(|g| g.label.clone()).collect();
        let target: Arc<dyn GroupModel> = if rank == 1 {
            Arc::new(FreeGroup::new(1))
        } else {
            let mut edges = Vec::new();
            for i in 0..rank {
                for j in i + 1..rank {
                    edges.push(format!("{}-{}", labels[i], labels[j]));
                }
            }
            parse_group(&format!("raag:{}", edges.join(",")))?
        };
        let images = labels
            .iter()
            .map(|l| {
                target
                    .label_index(l)
                    .map(|i| vec![Letter::pos(i)])
                    .ok_or_else(|| Error::UnknownLabel(l.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new("abelian", base, target, images)
    }

    /// A × B → the chosen factor (1 or 2).
    pub fn factor(product_spec: &str, keep: usize) -> Result<Self> {
        let (x, y) = product_factors(product_spec).ok_or_else(|| Error::UnknownGroup(product_spec.to_string()))?;
        let (left, right) = (parse_group(&x)?, parse_group(&y)?);
        let (nl, nr) = (left.rank(), right.rank());
        let base: Arc<dyn GroupModel> = Arc::new(Product::new(left.clone(), right.clone()));
        let (target, images) = match keep {
            1 => (
                left,
                (0..nl)
                    .map(|i| vec![Letter::pos(i)])
                    .chain((0..nr).map(|_| vec![]))
                    .collect(),
            ),
            2 => (
                right,
                (0..nl)
                    .map(|_| vec![])
                    .chain((0..nr).map(|i| vec![Letter::pos(i)]))
                    .collect(),
            ),
            _ => return Err(Error::Invalid("factor must be 1 or 2".into())),
        };
        Self::new(format!("factor:{keep}"), base, target, images)
    }

    pub fn image(&self, g: &Element) -> Element {
        let word: Vec<Letter> = self
            .base
            .word_of(g)
            .iter()
            .flat_map(|l| {
                let w = &self.images[l.generator()];
                if l.is_inverse() {
                    invert_word(w)
                } else {
                    w.clone()
                }
            })
            .collect();
        self.target.evaluate(&word)
    }
}

#[derive(Clone, Debug)]
pub enum Quotient {
    Presentation {
        base: Arc<dyn GroupModel>,
        presentation: PresentationQuotient,
    },
    Map(Homomorphism),
}

impl Quotient {
    pub fn presentation(p: PresentationQuotient) -> Self {
        Quotient::Presentation {
            base: Arc::new(FreeGroup::new(p.rank)),
            presentation: p,
        }
    }

    /// `kill:<labels>` and `abelian` over `free:<k>`, `factor:<1|2>` over
    /// an l1 product, `relators:<w1>;<w2>;…` over `free:<k>`.
    pub fn from_spec(group: &str, spec: &str) -> Result<Self> {
        let rank = || -> Result<usize> {
            group
                .trim()
                .strip_prefix("free:")
                .and_then(|k| k.trim().parse().ok())
                .ok_or_else(|| Error::Invalid(format!("quotient `{spec}` needs a free:<k> base, got `{group}`")))
        };
        let spec = spec.trim();
        if let Some(labels) = spec.strip_prefix("kill:") {
            let labels: Vec<&str> = labels.split(',').map(str::trim).collect();
            return Ok(Quotient::Map(Homomorphism::kill(rank()?, &labels)?));
        }
        if spec == "abelian" {
            return Ok(Quotient::Map(Homomorphism::abelianization(rank()?)?));
        }
        if let Some(k) = spec.strip_prefix("factor:") {
            let k = k
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad factor `{k}`")))?;
            return Ok(Quotient::Map(Homomorphism::factor(group, k)?));
        }
        if let Some(words) = spec.strip_prefix("relators:") {
            let p = PresentationQuotient::parse(rank()?, &words.replace(';', "\n"))?;
            return Ok(Self::presentation(p));
        }
        Err(Error::Invalid(format!("unknown quotient spec `{spec}`")))
    }

    pub fn base(&self) -> &Arc<dyn GroupModel> {
        match self {
            Quotient::Presentation { base, .. } => base,
            Quotient::Map(h) => &h.base,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Quotient::Presentation { presentation, base } => {
                let rels: Vec<String> = presentation
                    .relators
                    .iter()
                    .map(|r| base.format_word(r.letters()))
                    .collect();
                format!("{} / <<{}>>", base.spec(), rels.join(", "))
            }
            Quotient::Map(h) => format!("{} / {}", h.base.spec(), h.label),
        }
    }

    /// Whether g and h agree in the quotient.
    pub fn equal(&self, g: &Element, h: &Element) -> Result<bool> {
        match self {
            Quotient::Map(m) => Ok(m.image(g) == m.image(h)),
            Quotient::Presentation { base, presentation } => {
                let mut w = invert_word(&base.word_of(g));
                w.extend(base.word_of(h));
                presentation.is_trivial(&w)
            }
        }
    }
}

/// Base ball partitioned into quotient elements.
#[derive(Debug)]
pub struct Classes {
    pub ball: ExploredBall<Element>,
    /// Class of each ball point.
    pub class_of: Vec<u32>,
    /// Minimal norm in each class: the quotient norm when ≤ the radius.
    pub norms: Vec<f64>,
    /// Exact word-problem calls made while merging.
    pub pairs_tested: u64,
    /// Permutation representations used to bucket presentation words.
    pub representations: usize,
}

/// Partitions the base ball of `radius` into quotient elements. Map
/// quotients key points by their image. Presentation quotients Dehn-reduce
/// every word, bucket by permutation-representation images, and merge
/// within a bucket by exact word-problem tests against one representative
/// per class.
pub fn classify(q: &Quotient, radius: f64, state_cap: usize) -> Result<Classes> {
    let base = q.base();
    let ball = group_ball(&**base, radius, BallOptions::counting().with_cap(state_cap));
    let n = ball.len();
    let mut norms: Vec<f64> = Vec::new();
    let mut class_of = vec![0u32; n];
    let mut pairs_tested = 0u64;
    let mut representations = 0;
    match q {
        Quotient::Map(h) => {
            let keys = par::map_range(n, |i| h.image(ball.point(i)));
            let mut ids: FxHashMap<Element, u32> = FxHashMap::default();
            for (i, key) in keys.into_iter().enumerate() {
                let next = ids.len() as u32;
                let id = *ids.entry(key).or_insert(next);
                if id == next {
                    norms.push(ball.dist(i));
                }
                class_of[i] = id;
            }
        }
        Quotient::Presentation { presentation: p, .. } => {
            if !p.pieces.c6 {
                return Err(Error::NotSmallCancellation {
                    max_piece: p.pieces.max_piece,
                    min_len: p.pieces.min_len,
                });
            }
            let abelian = AbelianKey::new(p.rank, &p.exponent_sums());
            let probe: Vec<Vec<Letter>> = ball
                .within(radius.min(5.0))
                .map(|i| base.word_of(ball.point(i)))
                .collect();
            let reps = permutation_representations(p, &abelian, &probe, 12);
            representations = reps.len();
            let keyed = par::map_range(n, |i| {
                let dehn = p.dehn_unchecked(&base.word_of(ball.point(i)));
                let mut key: Vec<i64> = abelian.key(&dehn);
                key.extend(reps.iter().flat_map(|gens| apply_word(gens, &dehn)).map(i64::from));
                (key, dehn)
            });
            // Per bucket: distinct Dehn forms seen, and (representative, class).
            let mut buckets: FxHashMap<Vec<i64>, (FxHashMap<Vec<Letter>, u32>, Vec<(Vec<Letter>, u32)>)> =
                FxHashMap::default();
            for (i, (key, dehn)) in keyed.into_iter().enumerate() {
                let (forms, classes) = buckets.entry(key).or_default();
                let id = if let Some(&id) = forms.get(&dehn) {
                    id
                } else {
                    let inv = invert_word(&dehn);
                    let mut hit = None;
                    for (rep, id) in classes.iter() {
                        pairs_tested += 1;
                        let mut w = inv.clone();
                        w.extend_from_slice(rep);
                        if p.dehn_unchecked(&w).is_empty() {
                            hit = Some(*id);
                            break;
                        }
                    }
                    let id = hit.unwrap_or_else(|| {
                        let id = norms.len() as u32;
                        norms.push(f64::INFINITY);
                        classes.push((dehn.clone(), id));
                        id
                    });
                    forms.insert(dehn, id);
                    id
                };
                class_of[i] = id;
                norms[id as usize] = norms[id as usize].min(ball.dist(i));
            }
        }
    }
    Ok(Classes {
        ball,
        class_of,
        norms,
        pairs_tested,
        representations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientBall {
    pub quotient: String,
    pub radius: f64,
    pub counts: SphereCounts,
    pub base_counts: SphereCounts,
    pub elements: usize,
    pub pairs_tested: u64,
    pub representations: usize,
}

impl Classes {
    pub fn quotient_counts(&self, width: f64) -> SphereCounts {
        let b = &self.ball;
        SphereCounts::from_distances(
            self.norms.iter().copied(),
            width,
            b.radius,
            b.complete_radius,
            b.integral,
        )
    }

    pub fn base_counts(&self, width: f64) -> SphereCounts {
        let b = &self.ball;
        SphereCounts::from_distances(
            b.distances().iter().copied(),
            width,
            b.radius,
            b.complete_radius,
            b.integral,
        )
    }
}

/// Sphere counts of distinct quotient elements by induced norm.
pub fn quotient_ball(q: &Quotient, radius: f64, state_cap: usize) -> Result<QuotientBall> {
    let c = classify(q, radius, state_cap)?;
    let width = if c.ball.integral { 1.0 } else { 0.25 };
    Ok(QuotientBall {
        quotient: q.label(),
        radius,
        counts: c.quotient_counts(width),
        base_counts: c.base_counts(width),
        elements: c.norms.len(),
        pairs_tested: c.pairs_tested,
        representations: c.representations,
    })
}
