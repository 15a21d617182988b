//! Growth exponents, Poincaré series, complementary and conjugacy growth.

mod complementary;
mod conjugacy;
mod fit;
mod poincare;

pub use crate::metric_space::SphereCounts;
pub use complementary::{complementary_count, ComplementaryReport, OrbitSpace};
pub use conjugacy::{conjugacy_growth, ConjugacyReport};
pub use fit::{estimate_exponent, fit_line, least_squares, ExponentEstimate, FitMethod};
pub use poincare::{
    growth_criterion_check, poincare_partial, poincare_partial_with, CriterionCertificate, DivergenceVerdict,
    PoincareEvaluation,
};
