//! Tools for reverse-engineering the limit constants: factoring, fitting
//! factorial-type building blocks, guessing P-recurrences and the
//! `{c, kappa, rho, alpha, gamma}` data files.

mod blocks;
mod datafile;
mod factor;
mod recurrence;

pub use blocks::{
    fit_building_blocks, legendre, valuation_of, BlockKind, BlockTemplate, Candidate, SearchSpace,
};
pub use datafile::{
    emit_data_file, parse_data, read_data_file, render_data, render_record, write_atomic,
    DataFormat, DataRecord, CSV_HEADER,
};
pub use factor::{
    factorize, factorize_with_budget, is_probable_prime, FactoredInt, DEFAULT_RHO_BUDGET,
    DEFAULT_SMOOTH_BOUND,
};
pub use recurrence::{guess_p_recurrence, required_points, RecurrenceGuess};

use crate::error::Result;

/// `p`-adic valuation of a template at `c`.
pub fn valuation(template: &BlockTemplate, p: u64, c: i64) -> Result<i64> {
    template.valuation(p, c)
}
