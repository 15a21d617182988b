//! Finite-scale experiments on the growth and projection geometry of group
//! actions: Cayley-graph balls, horoballs, contracting axes, projection
//! axioms, quasi-trees and quotient growth.

pub mod axioms;
pub mod error;
pub mod groups;
pub mod growth;
pub mod horoball;
pub mod metric_space;
pub mod par;
pub mod projection;
pub mod quotient;

pub use error::{Error, Result};
