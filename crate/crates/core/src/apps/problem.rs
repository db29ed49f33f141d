//! TOML problem files.
//!
//! ```toml
//! [field]
//! spec = "GF(2)(u)"
//!
//! [generators]
//! elements = ["u", "1-u"]
//!
//! [equation]
//! coefficients = ["1", "1"]
//! ```
//!
//! Recurrences use `[[recurrence]]` tables with `coefficients` and
//! `initial`; matrix problems use `[matrices]` (`dim`, `list`) and
//! `[variety]` (`equations` in x11, x12, …).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::{matrix_var_names, Matrix, MatrixProblem};
use super::recurrence::LinearRecurrence;
use super::sunit::SUnitProblem;
use crate::automaton::Dfa;
use crate::coeff_field::parse::{parse_element, parse_field};
use crate::coeff_field::{FieldElement, FieldRef};
use crate::error::{Error, Result};
use crate::polyseries::parse_poly_in;
use crate::signed_groups::SignedDfa;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldSection {
    spec: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceSection {
    pub coefficients: Vec<String>,
    pub initial: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceFile {
    field: FieldSection,
    pub recurrence: Vec<RecurrenceSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorSection {
    elements: Vec<String>,
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationSection {
    coefficients: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SUnitFile {
    field: FieldSection,
    generators: GeneratorSection,
    equation: EquationSection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixSection {
    dim: usize,
    list: Vec<Vec<Vec<String>>>,
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VarietySection {
    equations: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    field: FieldSection,
    matrices: MatrixSection,
    variety: VarietySection,
}

fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(format!("problem file: {e}")))
}

fn field_of(s: &FieldSection) -> Result<FieldRef> {
    Ok(Arc::new(parse_field(&s.spec)?))
}

fn elements(k: &FieldRef, list: &[String]) -> Result<Vec<FieldElement>> {
    list.iter().map(|s| parse_element(k, s)).collect()
}

pub fn load_recurrences(text: &str) -> Result<(FieldRef, Vec<LinearRecurrence>)> {
    let file: RecurrenceFile = from_toml(text)?;
    let k = field_of(&file.field)?;
    let recs = file
        .recurrence
        .iter()
        .map(|r| LinearRecurrence::new(elements(&k, &r.coefficients)?, elements(&k, &r.initial)?))
        .collect::<Result<_>>()?;
    Ok((k, recs))
}

pub fn load_sunit_problem(text: &str) -> Result<(FieldRef, SUnitProblem)> {
    let file: SUnitFile = from_toml(text)?;
    let k = field_of(&file.field)?;
    let gens = elements(&k, &file.generators.elements)?;
    let labels = file.generators.labels.clone().unwrap_or_else(|| file.generators.elements.clone());
    let prob = SUnitProblem::new(elements(&k, &file.equation.coefficients)?, gens, labels)?;
    Ok((k, prob))
}

pub fn load_matrix_problem(text: &str) -> Result<(FieldRef, MatrixProblem)> {
    let file: MatrixFile = from_toml(text)?;
    let k = field_of(&file.field)?;
    let dim = file.matrices.dim;
    let matrices: Vec<Matrix> =
        file.matrices.list.iter().map(|m| m.iter().map(|row| elements(&k, row)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let names = matrix_var_names(dim);
    let polys = file.variety.equations.iter().map(|s| parse_poly_in(s, &k, &names)).collect::<Result<_>>()?;
    let mut prob = MatrixProblem::new(&k, dim, matrices, polys)?;
    if let Some(labels) = &file.matrices.labels {
        if labels.len() != prob.m() {
            return Err(Error::Parameter("one label per matrix".into()));
        }
        prob.labels = labels.clone();
    }
    Ok((k, prob))
}

/// Emptiness, finiteness and the members inside a box.
#[derive(Clone, Debug, Serialize)]
pub struct DecisionReport {
    pub empty: bool,
    pub finite: bool,
    pub witness: Option<Vec<i64>>,
    pub bound: u64,
    pub elements: Vec<Vec<i64>>,
}

impl DecisionReport {
    pub fn of(set: &SignedDfa, bound: u64) -> Self {
        let witness = set.find_member();
        DecisionReport { empty: witness.is_none(), finite: set.is_finite(), witness, bound, elements: set.enumerate(bound) }
    }

    /// Report for a subset of N^d.
    pub fn of_dfa(set: &Dfa, bound: u64) -> Self {
        let signed = |x: Vec<u64>| x.into_iter().map(|v| v as i64).collect::<Vec<_>>();
        DecisionReport {
            empty: set.is_empty(),
            finite: set.is_finite(),
            witness: set.find_member().map(signed),
            bound,
            elements: set.enumerate(bound).into_iter().map(signed).collect(),
        }
    }
}

fn tuple(x: &[i64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for DecisionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "empty: {}", if self.empty { "yes" } else { "no" })?;
        writeln!(f, "finite: {}", if self.finite { "yes" } else { "no" })?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {}", tuple(w))?;
        }
        let list: Vec<String> = self.elements.iter().map(|x| tuple(x)).collect();
        writeln!(f, "elements with all |x_i| <= {}: {}", self.bound, list.len())?;
        for chunk in list.chunks(8) {
            writeln!(f, "  {}", chunk.join(" "))?;
        }
        Ok(())
    }
}
