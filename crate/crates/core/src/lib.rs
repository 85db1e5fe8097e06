//! Balance-scale schemes that prove the weights of coins weighing `1..=n`
//! grams: construction, exhaustive verification, rearrangement
//! certificates, and exact search for the fewest weighings.

pub mod bounds;
pub mod certificate;
pub mod cli;
pub mod format;
pub mod fourier_motzkin;
pub mod generators;
pub mod model;
pub mod search;
pub mod verifier;

pub use format::{parse_scheme, serialize_scheme, ParseError};
pub use model::{evaluate_weighing, is_consistent, Assignment, Relation, Scheme, Weighing};
