//! Closest-point projections onto realized subsets and the empirical
//! contraction, bounded-geodesic-image, constriction and Morse scans.

mod metric;
mod scans;
mod snowflake;
mod subset;

pub use metric::WordMetric;
pub use scans::{
    bgi_test, constriction_test, contraction_scan, equivalence_check, morse_profile, ContractionCell,
    ContractionProfile, EquivalenceVerdicts, GeodesicScan, PathWitness, Trend,
};
pub use snowflake::{alpha_bgi_scan, beta_projection, beta_witness, AlphaBgiReport, BetaWitness};
pub use subset::{alpha_orbit, beta_orbit, closest_point_projection, Projection, RealizedSubset, TreeLine};
