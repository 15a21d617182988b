//! Combinatorial horoballs and augmented spaces.

mod augmented;
mod space;

pub use augmented::{parabolic_gap_report, AugPoint, AugmentedSpace, GapReport, GapVerdict, Peripheral, PeripheralGap};
pub use space::{
    default_depth, depth_oracle, fit_log_profile, horoball_distance, horoball_sphere_counts, HoroDistance, HoroSpheres,
    HoroballSpace, LogProfile,
};
