//! Catalan-constant continued fractions.
//!
//! The crate evaluates polynomial continued fractions of the form
//! `a(0) + b(1)/(a(1) + b(2)/(a(2) + ...))` to a few hundred digits, recovers
//! limits of the shape `alpha / (beta + gamma*G)` with lattice reduction, and
//! carries the per-kappa closed forms, the sporadic and family catalogs and
//! the reverse-engineering toolkit (factoring, building-block fitting,
//! P-recurrence guessing, data files).

pub mod cf_engine;
pub mod challenge;
pub mod checks;
pub mod discovery;
pub mod error;
pub mod families;
pub mod kappa_forms;
pub mod lattice;
pub mod numerics;

pub use error::{Error, Result};
pub use numerics::{HPReal, Rational};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 250;
/// Default continued-fraction depth.
pub const DEFAULT_DEPTH: u64 = 12_000;
