//! Orbit closure of f under the combined Cartier/π operators, producing an
//! LSB-first automaton for the vanishing set Z(f).
//!
//! A state is an F_q-subspace of tuples, each tuple standing for one series
//! h; the state's function is "every h in the subspace has h(n) = 0". Digit
//! j sends h to the series n ↦ π_ℓ(h(pn + j)) for every basis index ℓ, and
//! h(pn + j) = 0 exactly when all of those vanish.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::automaton::{alphabet_size, decode, digits_of, Dfa, Direction};
use crate::bounds::{complexity_bound_chain, ChainParams};
use crate::coeff_field::{mpoly, BaseField, BaseScalar, CoeffField, Exps, FieldElement, MPoly, Mono, Ring};
use crate::error::{Error, Result};
use crate::ore::{relation_for, OreRelation};
use crate::polyseries::{AlgebraicInput, InputKind, Mixed, SeriesTrunc, TPoly};

pub const DEFAULT_CEILING: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Abort once more raw states than this have been discovered.
    pub ceiling: usize,
    /// Record a TSV trace of every transition.
    pub trace: bool,
    /// Cross-check outputs against a(n_w) for states whose witness has |n_w|₁ up to this.
    pub witness_check: Option<u32>,
    /// Use the Ore-relation engine even for rational inputs.
    pub force_general: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { ceiling: DEFAULT_CEILING, trace: false, witness_check: None, force_general: false }
    }
}

/// A subspace of tuples in reduced row echelon form. Equality is syntactic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateSet {
    pub members: Vec<Vec<MPoly>>,
}

impl StateSet {
    /// Canonical basis of the span of `tuples` (all of length `width`).
    pub fn span(tuples: impl IntoIterator<Item = Vec<MPoly>>, width: usize, nvars: usize, f: &BaseField) -> StateSet {
        type Row = BTreeMap<(u16, Mono), BaseScalar>;
        let mut basis: Vec<Row> = Vec::new();
        for t in tuples {
            let mut v: Row = BTreeMap::new();
            for (slot, poly) in t.iter().enumerate() {
                for (m, c) in poly.terms() {
                    v.insert((slot as u16, m.clone()), *c);
                }
            }
            for b in &basis {
                let (pk, _) = b.first_key_value().unwrap();
                if let Some(&c) = v.get(pk) {
                    axpy(&mut v, f.neg(c), b, f);
                }
            }
            let Some((pk, &lead)) = v.first_key_value() else { continue };
            let pk = pk.clone();
            let inv = f.inv(lead);
            for c in v.values_mut() {
                *c = f.mul(*c, inv);
            }
            for b in basis.iter_mut() {
                if let Some(&c) = b.get(&pk) {
                    axpy(b, f.neg(c), &v, f);
                }
            }
            basis.push(v);
        }
        basis.sort_by(|a, b| a.first_key_value().unwrap().0.cmp(b.first_key_value().unwrap().0));
        let members = basis
            .into_iter()
            .map(|row| {
                let mut slots: Vec<Vec<(Mono, BaseScalar)>> = vec![Vec::new(); width];
                for ((s, m), c) in row {
                    slots[s as usize].push((m, c));
                }
                slots.into_iter().map(|terms| MPoly::from_terms(nvars, terms, f)).collect()
            })
            .collect();
        StateSet { members }
    }

    /// The zero subspace: the constant-true state.
    pub fn is_trivial(&self) -> bool {
        self.members.is_empty()
    }
}

fn axpy(v: &mut BTreeMap<(u16, Mono), BaseScalar>, a: BaseScalar, w: &BTreeMap<(u16, Mono), BaseScalar>, f: &BaseField) {
    for (k, &c) in w {
        let x = f.mul(a, c);
        match v.get_mut(k) {
            Some(y) => {
                *y = f.add(*y, x);
                if y.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                if !x.is_zero() {
                    v.insert(k.clone(), x);
                }
            }
        }
    }
}

/// The build result. `dfa` is minimized; `raw` keeps the discovered states.
#[derive(Clone, Debug)]
pub struct ZeroAutomatonBuild {
    pub dfa: Dfa,
    pub raw: Dfa,
    pub witnesses: Vec<Vec<u64>>,
    /// Discovered states, indexed like `raw`.
    pub states: Vec<StateSet>,
    pub relation: Option<OreRelation>,
    pub max_members: usize,
    pub trace: Option<String>,
}

impl ZeroAutomatonBuild {
    pub fn raw_states(&self) -> usize {
        self.raw.states()
    }
}

trait Engine {
    fn successors(&mut self, st: &StateSet) -> Result<Vec<StateSet>>;
    fn output(&mut self, st: &StateSet) -> Result<bool>;
}

/// Digit tuples in letter order, as residue prefixes.
fn letters(p: u32, d: usize) -> Vec<Vec<u16>> {
    (0..alphabet_size(p, d)).map(|l| digits_of(l, p, d).into_iter().map(|x| x as u16).collect()).collect()
}

/// Splits every member's transformed tuple by residue and regroups per letter.
fn branch(transformed: &[Vec<MPoly>], letters: &[Vec<u16>], k: &CoeffField, nvars: usize, max_deg: u32, d: usize) -> Result<Vec<StateSet>> {
    let f = k.base();
    let width = transformed.first().map_or(0, |t| t.len());
    let splits: Vec<Vec<FxHashMap<Exps, MPoly>>> =
        transformed.iter().map(|t| t.iter().map(|x| mpoly::residue_split(x, f)).collect()).collect();
    let zero = MPoly::zero(nvars);
    let mut out = Vec::with_capacity(letters.len());
    for j in letters {
        let mut tuples = Vec::new();
        for member in &splits {
            for h in k.pbasis() {
                let mut r: Exps = j.iter().copied().collect();
                r.extend(h.iter().copied());
                let tuple: Vec<MPoly> = member.iter().map(|m| m.get(&r).cloned().unwrap_or_else(|| zero.clone())).collect();
                for x in &tuple {
                    if x.partial_degree(0..d).unwrap_or(0) > max_deg {
                        return Err(Error::Invariant(format!("state degree exceeds the bound {max_deg}")));
                    }
                }
                if tuple.iter().any(|x| !x.is_zero()) {
                    tuples.push(tuple);
                }
            }
        }
        out.push(StateSet::span(tuples, width, nvars, f));
    }
    Ok(out)
}

/// f = A/B: a member C stands for C/B.
struct RationalEngine<'a> {
    k: &'a CoeffField,
    mx: Mixed<'a>,
    bp: MPoly,
    letters: Vec<Vec<u16>>,
    max_deg: u32,
}

impl Engine for RationalEngine<'_> {
    fn successors(&mut self, st: &StateSet) -> Result<Vec<StateSet>> {
        let f = self.k.base();
        let transformed: Vec<Vec<MPoly>> = st.members.iter().map(|m| vec![m[0].mul(&self.bp, f)]).collect();
        branch(&transformed, &self.letters, self.k, self.mx.nvars(), self.max_deg, self.mx.d)
    }

    fn output(&mut self, st: &StateSet) -> Result<bool> {
        Ok(st.members.iter().all(|m| self.mx.at_zero(&m[0]).is_zero()))
    }
}

/// A tuple (P₀..P_{s−1}) stands for Q₀⁻¹·Σ P_i f^{p^i}.
struct OreEngine<'a> {
    k: &'a CoeffField,
    mx: Mixed<'a>,
    s: usize,
    /// Q₀^{p−1}
    a: MPoly,
    /// Q₀^{p−2}·Q_i for i = 1..s
    b: Vec<MPoly>,
    letters: Vec<Vec<u16>>,
    max_deg: u32,
    /// grlex-minimal t-monomial of Q₀ and its coefficient in F_q[u]
    alpha: Vec<u32>,
    q_alpha: FieldElement,
    series: SeriesTrunc,
    frob_cache: FxHashMap<(usize, Vec<u32>), FieldElement>,
}

impl OreEngine<'_> {
    /// Coefficient of t^γ in f^{p^i}.
    fn power_coeff(&mut self, i: usize, gamma: &[u32]) -> Result<FieldElement> {
        let key = (i, gamma.to_vec());
        if let Some(x) = self.frob_cache.get(&key) {
            return Ok(x.clone());
        }
        let pi = self.k.p().pow(i as u32);
        let value = if gamma.iter().all(|g| g % pi == 0) {
            let n: Vec<u32> = gamma.iter().map(|g| g / pi).collect();
            let mut c = self.series.coeff(&n, self.k)?;
            for _ in 0..i {
                c = self.k.frobenius(&c);
            }
            c
        } else {
            self.k.zero()
        };
        self.frob_cache.insert(key, value.clone());
        Ok(value)
    }

    /// q_α·h(0) for the series h of a tuple.
    fn scaled_value(&mut self, tuple: &[MPoly]) -> Result<FieldElement> {
        let d = self.mx.d;
        let k = self.k;
        let mut acc = k.zero();
        for (i, poly) in tuple.iter().enumerate() {
            for (m, c) in poly.terms() {
                let beta = &m.exps()[..d];
                if beta.iter().zip(&self.alpha).any(|(&b, &a)| b as u32 > a) {
                    continue;
                }
                let gamma: Vec<u32> = beta.iter().zip(&self.alpha).map(|(&b, &a)| a - b as u32).collect();
                let fc = self.power_coeff(i, &gamma)?;
                if fc.is_zero() {
                    continue;
                }
                let um = MPoly::from_terms(k.r(), vec![(m.slice(d..self.mx.nvars()), *c)], k.base());
                acc = k.add(&acc, &k.mul(&k.from_poly(um), &fc));
            }
        }
        Ok(acc)
    }
}

impl Engine for OreEngine<'_> {
    fn successors(&mut self, st: &StateSet) -> Result<Vec<StateSet>> {
        let f = self.k.base();
        let transformed: Vec<Vec<MPoly>> = st
            .members
            .iter()
            .map(|p| {
                (1..=self.s)
                    .map(|i| {
                        let head = p[0].mul(&self.b[i - 1], f);
                        match p.get(i) {
                            Some(pi) => pi.mul(&self.a, f).sub(&head, f),
                            None => head.neg(f),
                        }
                    })
                    .collect()
            })
            .collect();
        branch(&transformed, &self.letters, self.k, self.mx.nvars(), self.max_deg, self.mx.d)
    }

    fn output(&mut self, st: &StateSet) -> Result<bool> {
        for m in &st.members {
            if !self.scaled_value(m)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// a(n) = Σ_k λ_k Π_v θ_{k,v}^{n_v} with every θ_{k,v} ≠ 0.
#[derive(Clone, Debug)]
pub struct ExpSum {
    pub d: usize,
    pub terms: Vec<(FieldElement, Vec<FieldElement>)>,
}

impl ExpSum {
    pub fn coeff(&self, k: &CoeffField, n: &[u64]) -> Result<FieldElement> {
        let mut acc = k.zero();
        for (lambda, theta) in &self.terms {
            let mut x = lambda.clone();
            for (t, &e) in theta.iter().zip(n) {
                x = k.mul(&x, &k.pow_elem(t, e as i64)?);
            }
            acc = k.add(&acc, &x);
        }
        Ok(acc)
    }
}

/// Slot k holds μ_k with λ_k = μ_k/Δ_k for a fixed Δ_k; digit j and basis
/// index ℓ send μ_k to π_ℓ(μ_k·w_{k,j}).
struct ExpSumEngine<'a> {
    k: &'a CoeffField,
    /// w[letter][slot]
    w: Vec<Vec<MPoly>>,
    /// Π_{k' ≠ k} Δ_{k'}
    cross: Vec<MPoly>,
    max_deg: u32,
}

impl Engine for ExpSumEngine<'_> {
    fn successors(&mut self, st: &StateSet) -> Result<Vec<StateSet>> {
        let f = self.k.base();
        let r = self.k.r();
        let width = self.cross.len();
        let zero = MPoly::zero(r);
        let mut out = Vec::with_capacity(self.w.len());
        for w in &self.w {
            let mut tuples = Vec::new();
            for mu in &st.members {
                let splits: Vec<FxHashMap<Exps, MPoly>> = mu.iter().zip(w).map(|(m, x)| mpoly::residue_split(&m.mul(x, f), f)).collect();
                for h in self.k.pbasis() {
                    let tuple: Vec<MPoly> = splits.iter().map(|sp| sp.get(h).cloned().unwrap_or_else(|| zero.clone())).collect();
                    if tuple.iter().any(|x| x.total_degree().unwrap_or(0) > self.max_deg) {
                        return Err(Error::Invariant(format!("state degree exceeds the bound {}", self.max_deg)));
                    }
                    if tuple.iter().any(|x| !x.is_zero()) {
                        tuples.push(tuple);
                    }
                }
            }
            out.push(StateSet::span(tuples, width, r, f));
        }
        Ok(out)
    }

    fn output(&mut self, st: &StateSet) -> Result<bool> {
        let f = self.k.base();
        Ok(st.members.iter().all(|mu| {
            let total = mu.iter().zip(&self.cross).fold(MPoly::zero(self.k.r()), |acc, (m, c)| acc.add(&m.mul(c, f), f));
            total.is_zero()
        }))
    }
}

/// Z(a) for an exponential sum, using states of length #terms over F_q[u].
pub fn build_zero_automaton_expsum(k: &CoeffField, e: &ExpSum, opts: &BuildOptions) -> Result<ZeroAutomatonBuild> {
    let (p, d, f) = (k.p(), e.d, k.base());
    if e.terms.iter().any(|(_, th)| th.len() != d || th.iter().any(|t| t.is_zero())) {
        return Err(Error::Parameter("every term needs d nonzero bases".into()));
    }
    let one = MPoly::one(k.r(), f);
    let mut start = Vec::new();
    let mut deltas = Vec::new();
    let mut w = vec![Vec::new(); alphabet_size(p, d)];
    for (lambda, theta) in &e.terms {
        let beta = theta.iter().fold(one.clone(), |acc, t| acc.mul(t.den(), f));
        start.push(lambda.num().mul(&beta, f));
        deltas.push(lambda.den().mul(&beta, f));
        let e_pow = lambda.den().pow(p - 1, f);
        for (l, wl) in w.iter_mut().enumerate() {
            let digits = digits_of(l, p, d);
            let x = theta
                .iter()
                .zip(&digits)
                .fold(e_pow.clone(), |acc, (t, &j)| acc.mul(&t.num().pow(j, f), f).mul(&t.den().pow(p - 1 - j, f), f));
            wl.push(x);
        }
    }
    let cross = (0..deltas.len())
        .map(|i| deltas.iter().enumerate().filter(|(j, _)| *j != i).fold(one.clone(), |acc, (_, x)| acc.mul(x, f)))
        .collect();
    let deg = |x: &MPoly| x.total_degree().unwrap_or(0);
    let w_deg = w.iter().flatten().map(deg).max().unwrap_or(0);
    let max_deg = start.iter().map(deg).max().unwrap_or(0).max(w_deg.div_ceil(p - 1));
    let width = start.len();
    let start = StateSet::span([start], width, k.r(), f);
    let mut engine = ExpSumEngine { k, w, cross, max_deg };
    let (raw, witnesses, states, max_members, trace) = run_bfs(&mut engine, start, p, d, opts, || state_bound(p, d, max_deg, 1))?;
    finish(raw, witnesses, states, None, max_members, trace)
}

fn state_bound(p: u32, d: usize, h: u32, s: usize) -> String {
    let report = complexity_bound_chain(&ChainParams::new(p, d as u32, h.max(1) as u64, s.max(1) as u32));
    format!("N9 = {}", report.n9)
}

fn run_bfs(
    engine: &mut dyn Engine,
    start: StateSet,
    p: u32,
    d: usize,
    opts: &BuildOptions,
    bound: impl Fn() -> String,
) -> Result<(Dfa, Vec<Vec<u64>>, Vec<StateSet>, usize, Option<String>)> {
    let sigma = alphabet_size(p, d);
    let mut index: FxHashMap<StateSet, u32> = FxHashMap::default();
    let mut keys = vec![start.clone()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    index.insert(start, 0);
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut trace = opts.trace.then(|| String::from("state\tdigit\tsuccessor\twitness\n"));
    let mut max_members = 0;
    let mut i = 0;
    while i < keys.len() {
        max_members = max_members.max(keys[i].members.len());
        let succ = engine.successors(&keys[i])?;
        let mut row = Vec::with_capacity(sigma);
        for (l, next) in succ.into_iter().enumerate() {
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if keys.len() >= opts.ceiling {
                        return Err(Error::Resource { states: keys.len() + 1, ceiling: opts.ceiling, bound: bound() });
                    }
                    let id = keys.len() as u32;
                    index.insert(next.clone(), id);
                    keys.push(next);
                    let mut w = words[i].clone();
                    w.push(l);
                    words.push(w);
                    id
                }
            };
            if let Some(t) = trace.as_mut() {
                let digits: Vec<String> = digits_of(l, p, d).iter().map(|x| x.to_string()).collect();
                let n = decode(&words[i], p, d, Direction::Lsb);
                let wit: Vec<String> = n.iter().map(|x| x.to_string()).collect();
                writeln!(t, "{i}\t{}\t{id}\t{}", digits.join(","), wit.join(",")).unwrap();
            }
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let mut accept = Vec::with_capacity(keys.len());
    for st in &keys {
        accept.push(engine.output(st)?);
    }
    let witnesses = words.iter().map(|w| decode(w, p, d, Direction::Lsb)).collect();
    let dfa = Dfa::new(p, d, Direction::Lsb, 0, delta, accept)?;
    Ok((dfa, witnesses, keys, max_members, trace))
}

fn finish(
    raw: Dfa,
    witnesses: Vec<Vec<u64>>,
    states: Vec<StateSet>,
    relation: Option<OreRelation>,
    max_members: usize,
    trace: Option<String>,
) -> Result<ZeroAutomatonBuild> {
    if !raw.is_padding_invariant() {
        return Err(Error::Invariant("zero automaton is not padding invariant".into()));
    }
    Ok(ZeroAutomatonBuild { dfa: raw.minimize(), raw, witnesses, states, relation, max_members, trace })
}

/// Z(A/B) through the rational engine; B(0) must be nonzero.
pub fn build_zero_automaton_rational(k: &CoeffField, a: &TPoly, b: &TPoly, opts: &BuildOptions) -> Result<ZeroAutomatonBuild> {
    let d = b.nvars();
    let p = k.p();
    if b.constant_term(k).is_zero() {
        return Err(Error::Parameter("rational fast path needs B(0) ≠ 0".into()));
    }
    if a.is_zero() {
        let raw = Dfa::constant(p, d, Direction::Lsb, true);
        return finish(raw, vec![vec![0; d]], Vec::new(), None, 0, None);
    }
    let mx = Mixed::new(k, d);
    let cleared = mx.clear_all(&[a.clone(), b.clone()]);
    let (am, bm) = (&cleared[0], &cleared[1]);
    let f = k.base();
    let max_deg = am.partial_degree(0..d).unwrap_or(0).max(bm.partial_degree(0..d).unwrap_or(0));
    let nvars = mx.nvars();
    let mut engine = RationalEngine { k, mx: mx.clone(), bp: bm.pow(p - 1, f), letters: letters(p, d), max_deg };
    let start = StateSet::span([vec![am.clone()]], 1, nvars, f);
    let (raw, witnesses, states, max_members, trace) = run_bfs(&mut engine, start, p, d, opts, || state_bound(p, d, max_deg, 1))?;
    finish(raw, witnesses, states, None, max_members, trace)
}

/// Z(f) for any input. Rational inputs with B(0) ≠ 0 take the rational
/// engine unless `force_general` is set.
pub fn build_zero_automaton(input: &AlgebraicInput, opts: &BuildOptions) -> Result<ZeroAutomatonBuild> {
    let k = &*input.field;
    let d = input.d;
    let p = k.p();
    if let InputKind::Rational { a, b } = &input.kind {
        if !opts.force_general && !b.constant_term(k).is_zero() {
            let out = build_zero_automaton_rational(k, a, b, opts)?;
            return verify_witnesses(input, out, opts);
        }
        if a.is_zero() {
            return build_zero_automaton_rational(k, a, b, opts);
        }
    }
    let rel = relation_for(input)?;
    if rel.s() == 0 {
        let raw = Dfa::constant(p, d, Direction::Lsb, true);
        return finish(raw, vec![vec![0; d]], Vec::new(), Some(rel), 0, None);
    }
    let f = k.base();
    let mx = Mixed::new(k, d);
    let nvars = mx.nvars();
    let q0 = &rel.q[0];
    let s = rel.s();
    let a = q0.pow(p - 1, f);
    let q0p2 = q0.pow(p - 2, f);
    let b: Vec<MPoly> = (1..=s).map(|i| q0p2.mul(&rel.q[i], f)).collect();
    let max_deg = rel.m();
    let q0t = mx.from_mixed(q0);
    let (alpha_mono, q_alpha) = q0t.min_term().map(|(m, c)| (m.clone(), c.clone())).expect("Q0 ≠ 0");
    let alpha: Vec<u32> = alpha_mono.exps().iter().map(|&e| e as u32).collect();
    let series = input.expand(alpha.iter().sum())?;
    let mut engine =
        OreEngine { k, mx: mx.clone(), s, a, b, letters: letters(p, d), max_deg, alpha, q_alpha, series, frob_cache: FxHashMap::default() };
    debug_assert!(!engine.q_alpha.is_zero());
    let mut start_tuple = vec![MPoly::zero(nvars); s];
    start_tuple[0] = q0.clone();
    let start = StateSet::span([start_tuple], s, nvars, f);
    let (raw, witnesses, states, max_members, trace) = run_bfs(&mut engine, start, p, d, opts, || state_bound(p, d, max_deg, s))?;
    let out = finish(raw, witnesses, states, Some(rel), max_members, trace)?;
    verify_witnesses(input, out, opts)
}

/// Checks a(n_w) = 0 ⇔ output for every raw state whose witness is small enough.
fn verify_witnesses(input: &AlgebraicInput, out: ZeroAutomatonBuild, opts: &BuildOptions) -> Result<ZeroAutomatonBuild> {
    let Some(limit) = opts.witness_check else { return Ok(out) };
    let series = input.expand(limit)?;
    let k = &*input.field;
    for (state, w) in out.witnesses.iter().enumerate() {
        if w.iter().sum::<u64>() > limit as u64 {
            continue;
        }
        let n: Vec<u32> = w.iter().map(|&x| x as u32).collect();
        let zero = series.coeff(&n, k)?.is_zero();
        if zero != out.raw.accept[state] {
            return Err(Error::Invariant(format!("state {state} output disagrees with its witness {w:?}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_field::FieldRef;
    use crate::polyseries::parse_tpoly;
    use std::sync::Arc;

    fn field(spec: &str) -> FieldRef {
        Arc::new(crate::coeff_field::parse::parse_field(spec).unwrap())
    }

    fn tp(k: &CoeffField, d: usize, s: &str) -> TPoly {
        parse_tpoly(s, k, d).unwrap()
    }

    fn rational(k: &FieldRef, d: usize, a: &str, b: &str) -> AlgebraicInput {
        AlgebraicInput::rational(k.clone(), tp(k, d, a), tp(k, d, b)).unwrap()
    }

    /// Brute-force zero set of a series on 0..=n.
    fn oracle(input: &AlgebraicInput, n: u32) -> Vec<Vec<u64>> {
        let s = input.expand(n).unwrap();
        (0..=n as u64).filter(|&i| s.coeff(&[i as u32], &input.field).unwrap().is_zero()).map(|i| vec![i]).collect()
    }

    #[test]
    fn geometric_series_has_no_zeros() {
        let k = field("GF(2)");
        let b = build_zero_automaton(&rational(&k, 1, "1", "1 - t"), &BuildOptions::default()).unwrap();
        assert!(b.dfa.is_empty());
    }

    #[test]
    fn parity_of_n_vanishes_on_evens() {
        let k = field("GF(2)");
        let input = rational(&k, 1, "t", "(1 - t)^2");
        let b = build_zero_automaton(&input, &BuildOptions { witness_check: Some(64), ..Default::default() }).unwrap();
        assert_eq!(b.dfa.enumerate(100), oracle(&input, 100));
    }

    #[test]
    fn fibonacci_mod_two() {
        let k = field("GF(2)");
        let input = rational(&k, 1, "1", "1 - t - t^2");
        let b = build_zero_automaton(&input, &BuildOptions::default()).unwrap();
        let z = b.dfa.enumerate(200);
        assert_eq!(z, oracle(&input, 200));
        assert!(z.iter().all(|n| n[0] % 3 == 2));
    }

    #[test]
    fn lech_paths_agree() {
        let k = field("GF(2)(u)");
        let a = "(1 - u*t)*(1 - t) - (1 - (1+u)*t)*(1 - t) - (1 - (1+u)*t)*(1 - u*t)";
        let b = "(1 - (1+u)*t)*(1 - u*t)*(1 - t)";
        let input = rational(&k, 1, a, b);
        let fast = build_zero_automaton(&input, &BuildOptions { witness_check: Some(40), ..Default::default() }).unwrap();
        let general =
            build_zero_automaton(&input, &BuildOptions { force_general: true, witness_check: Some(40), ..Default::default() }).unwrap();
        assert_eq!(fast.dfa.enumerate(20), vec![vec![1], vec![2], vec![4], vec![8], vec![16]]);
        assert!(fast.dfa.are_equal(&general.dfa).unwrap());
    }

    #[test]
    fn span_canonical_form() {
        let f = BaseField::prime(3).unwrap();
        let x = MPoly::var(0, 1, &f);
        let one = MPoly::one(1, &f);
        let a = StateSet::span([vec![x.clone()], vec![x.add(&one, &f)]], 1, 1, &f);
        let b = StateSet::span([vec![one.clone()], vec![x.scale(&f.from_int(2), &f)], vec![x.clone()]], 1, 1, &f);
        assert_eq!(a, b);
        assert_eq!(a.members.len(), 2);
        assert!(StateSet::span(Vec::<Vec<MPoly>>::new(), 1, 1, &f).is_trivial());
    }

    #[test]
    fn trace_has_one_row_per_transition() {
        let k = field("GF(2)");
        let b = build_zero_automaton(&rational(&k, 1, "t", "(1 - t)^2"), &BuildOptions { trace: true, ..Default::default() }).unwrap();
        let rows = b.trace.as_ref().unwrap().lines().count() - 1;
        assert_eq!(rows, b.raw_states() * 2);
    }

    #[test]
    fn ceiling_is_enforced() {
        let k = field("GF(2)");
        let err = build_zero_automaton(&rational(&k, 1, "1", "1 - t - t^2"), &BuildOptions { ceiling: 1, ..Default::default() });
        assert!(matches!(err, Err(Error::Resource { .. })));
    }
}
