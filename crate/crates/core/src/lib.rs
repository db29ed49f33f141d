//! Vanishing-coefficient sets of algebraic power series over fields of
//! positive characteristic, computed as p-automatic sets, together with the
//! recurrence, S-unit and matrix-group applications built on them.

pub mod apps;
pub mod automaton;
pub mod bounds;
pub mod coeff_field;
pub mod error;
pub mod kernel;
pub mod ore;
pub mod polyseries;
pub mod signed_groups;

pub use error::{Error, Result};
