//! Diophantine applications: zero sets of sums of linear recurrences,
//! S-unit equations, and subvarieties meeting commuting matrix groups. Each
//! one reduces to vanishing sets of rational series.

mod matrix;
mod problem;
mod recurrence;
mod sunit;

pub use matrix::{
    charpoly, eval_at_matrix, identity, kron, kron_power, mat_inverse, mat_mul, mat_pow, matrix_intersection, matrix_pattern_series,
    matrix_resolvent, matrix_var_names, Matrix, MatrixProblem, KRONECKER_CEILING,
};
pub use problem::{load_matrix_problem, load_recurrences, load_sunit_problem, DecisionReport, MatrixFile, RecurrenceFile, SUnitFile};
pub use recurrence::{recurrence_series, recurrence_zero_set, LinearRecurrence};
pub use sunit::{sunit_pattern_expsum, sunit_pattern_series, sunit_residual, sunit_solutions, sunit_solutions_with, SUnitProblem};

use rayon::prelude::*;

use crate::automaton::Dfa;
use crate::error::Result;
use crate::signed_groups::{mask_signs, SignedDfa};

/// Builds one orthant automaton per sign pattern of Z^m (in parallel) and
/// assembles them.
fn assemble_patterns<F>(m: usize, build: F) -> Result<SignedDfa>
where
    F: Fn(&[i8]) -> Result<Dfa> + Sync,
{
    let parts: Vec<(Vec<i8>, Dfa)> = (0..1usize << m)
        .into_par_iter()
        .map(|mask| {
            let signs = mask_signs(mask, m);
            build(&signs).map(|a| (signs, a))
        })
        .collect::<Result<_>>()?;
    SignedDfa::assemble(parts)
}
