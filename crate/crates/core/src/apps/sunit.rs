use crate::coeff_field::{CoeffField, FieldElement, Ring};
use crate::error::{Error, Result};
use crate::kernel::{build_zero_automaton_expsum, build_zero_automaton_rational, BuildOptions, ExpSum};
use crate::polyseries::{tconst, TPoly};
use crate::signed_groups::{group_pullback, GroupAutomaticSet, GroupKind, GroupSpec};

use super::assemble_patterns;

/// c₁X₁ + … + c_dX_d = 1 with X_i in Γ = ⟨g₁, …, g_m⟩ ⊆ K*.
///
/// A solution is an exponent vector x ∈ Z^{m·d}, X_i = Π_j g_j^{x[i·m + j]}.
#[derive(Clone, Debug)]
pub struct SUnitProblem {
    pub coeffs: Vec<FieldElement>,
    pub generators: Vec<FieldElement>,
    pub labels: Vec<String>,
}

impl SUnitProblem {
    pub fn new(coeffs: Vec<FieldElement>, generators: Vec<FieldElement>, labels: Vec<String>) -> Result<Self> {
        if coeffs.is_empty() || generators.is_empty() {
            return Err(Error::Parameter("need at least one coefficient and one generator".into()));
        }
        if coeffs.iter().chain(&generators).any(|x| x.is_zero()) {
            return Err(Error::Parameter("coefficients and generators must be nonzero".into()));
        }
        if labels.len() != generators.len() {
            return Err(Error::Parameter("one label per generator".into()));
        }
        Ok(SUnitProblem { coeffs, generators, labels })
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn group_spec(&self) -> GroupSpec {
        let labels = (0..self.d()).flat_map(|i| self.labels.iter().map(move |l| format!("X{}:{l}", i + 1))).collect();
        GroupSpec { labels, kind: GroupKind::Opaque }
    }
}

/// Σ c_i Π_j g_j^{x_ij} − 1, evaluated directly in K.
pub fn sunit_residual(k: &CoeffField, prob: &SUnitProblem, x: &[i64]) -> Result<FieldElement> {
    let m = prob.m();
    let mut acc = k.neg(&k.one());
    for (i, c) in prob.coeffs.iter().enumerate() {
        let mut term = c.clone();
        for (j, g) in prob.generators.iter().enumerate() {
            term = k.mul(&term, &k.pow_elem(g, x[i * m + j])?);
        }
        acc = k.add(&acc, &term);
    }
    Ok(acc)
}

/// A/B whose coefficient at n ∈ N^{m·d} is Σ c_i Π_j g_j^{a_ij n_ij} − 1.
pub fn sunit_pattern_series(k: &CoeffField, prob: &SUnitProblem, signs: &[i8]) -> Result<(TPoly, TPoly)> {
    let (d, m) = (prob.d(), prob.m());
    let nv = d * m;
    if signs.len() != nv {
        return Err(Error::Parameter("sign pattern length must be m·d".into()));
    }
    let one = TPoly::one(nv, k);
    let var = |v: usize| TPoly::var(v, nv, k);
    let lin: Vec<TPoly> = (0..nv).map(|v| one.sub(&var(v), k)).collect();
    let geo: Vec<TPoly> = (0..nv)
        .map(|v| {
            let g = k.pow_elem(&prob.generators[v % m], signs[v] as i64)?;
            Ok(one.sub(&var(v).scale(&g, k), k))
        })
        .collect::<Result<_>>()?;
    let prod = |xs: &mut dyn Iterator<Item = &TPoly>| xs.fold(one.clone(), |acc, x| acc.mul(x, k));
    let b = prod(&mut lin.iter()).mul(&prod(&mut geo.iter()), k);
    let mut a = prod(&mut geo.iter()).neg(k);
    for (i, c) in prob.coeffs.iter().enumerate() {
        let mut term = tconst(c.clone(), nv, k);
        for v in 0..nv {
            let f = if v / m == i { &lin[v] } else { &geo[v] };
            term = term.mul(f, k);
        }
        a = a.add(&term, k);
    }
    Ok((a, b))
}

/// The same coefficients as an exponential sum: −1 plus one term per c_i.
pub fn sunit_pattern_expsum(k: &CoeffField, prob: &SUnitProblem, signs: &[i8]) -> Result<ExpSum> {
    let (d, m) = (prob.d(), prob.m());
    let nv = d * m;
    if signs.len() != nv {
        return Err(Error::Parameter("sign pattern length must be m·d".into()));
    }
    let mut terms = vec![(k.neg(&k.one()), vec![k.one(); nv])];
    for (i, c) in prob.coeffs.iter().enumerate() {
        let theta = (0..nv)
            .map(|v| if v / m == i { k.pow_elem(&prob.generators[v % m], signs[v] as i64) } else { Ok(k.one()) })
            .collect::<Result<_>>()?;
        terms.push((c.clone(), theta));
    }
    Ok(ExpSum { d: nv, terms })
}

/// The solution set as a subset of Γ^d, stored as its preimage in Z^{m·d}.
/// With `via_series` each orthant goes through the rational series instead.
pub fn sunit_solutions_with(k: &CoeffField, prob: &SUnitProblem, opts: &BuildOptions, via_series: bool) -> Result<GroupAutomaticSet> {
    let nv = prob.d() * prob.m();
    let pre = assemble_patterns(nv, |signs| {
        if via_series {
            let (a, b) = sunit_pattern_series(k, prob, signs)?;
            Ok(build_zero_automaton_rational(k, &a, &b, opts)?.dfa)
        } else {
            Ok(build_zero_automaton_expsum(k, &sunit_pattern_expsum(k, prob, signs)?, opts)?.dfa)
        }
    })?;
    group_pullback(prob.group_spec(), pre)
}

pub fn sunit_solutions(k: &CoeffField, prob: &SUnitProblem, opts: &BuildOptions) -> Result<GroupAutomaticSet> {
    sunit_solutions_with(k, prob, opts, false)
}
