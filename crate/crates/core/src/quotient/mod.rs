//! Quotients by normal subgroups: small-cancellation presentations with
//! Dehn's algorithm, built-in homomorphic quotients, quotient growth,
//! minimal sections, separated nets and the φₙ injection experiment.

mod classes;
mod invariants;
mod phi;
mod presentation;
mod section;
mod tightness;

pub use classes::{classify, quotient_ball, Classes, Homomorphism, Quotient, QuotientBall};
pub use phi::{phi_injectivity, PhiCollision, PhiReport};
pub use presentation::{small_cancellation_check, PieceReport, PresentationQuotient};
pub use section::{
    minimal_section, section_projection_bound, separated_net, MinimalSectionTable, SectionEntry, SeparatedNet,
};
pub use tightness::{growth_tightness_report, TightnessReport};
