//! Sparse multivariate polynomials over a coefficient ring, terms kept in
//! descending graded-lex order.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use std::fmt::Debug;
use std::hash::Hash;

pub type Exps = SmallVec<[u16; 8]>;

/// A monomial. The derived order compares total degree first, then the
/// exponent vectors lexicographically, which is graded-lex with the first
/// variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono {
    deg: u32,
    exps: Exps,
}

impl Mono {
    pub fn new(exps: Exps) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Mono { deg, exps }
    }

    pub fn from_slice(e: &[u32]) -> Self {
        Self::new(e.iter().map(|&x| u16::try_from(x).expect("exponent overflow")).collect())
    }

    pub fn one(nvars: usize) -> Self {
        Mono { deg: 0, exps: smallvec::smallvec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    #[inline]
    pub fn deg(&self) -> u32 {
        self.deg
    }
    #[inline]
    pub fn exps(&self) -> &[u16] {
        &self.exps
    }
    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }
    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: Exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a.checked_add(*b).expect("exponent overflow")).collect();
        Mono { deg: self.deg + other.deg, exps }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn div_into(&self, other: &Mono) -> Mono {
        let exps: Exps = other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Mono { deg: other.deg - self.deg, exps }
    }

    pub fn pow(&self, n: u32) -> Mono {
        let exps: Exps = self.exps.iter().map(|&a| u16::try_from(a as u32 * n).expect("exponent overflow")).collect();
        Mono { deg: self.deg * n, exps }
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Keeps a contiguous range of variables.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Mono {
        Mono::new(self.exps[range].iter().copied().collect())
    }

    pub fn concat(&self, other: &Mono) -> Mono {
        let mut exps = self.exps.clone();
        exps.extend_from_slice(&other.exps);
        Mono { deg: self.deg + other.deg, exps }
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Mono {
        let mut exps = self.exps.clone();
        exps[i] = u16::try_from(e).expect("exponent overflow");
        Mono::new(exps)
    }
}

/// Minimal commutative-ring interface used by [`Poly`].
pub trait Ring {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn from_int(&self, n: i64) -> Self::Elem;
}

impl Ring for super::gf::BaseField {
    type Elem = super::gf::BaseScalar;
    fn zero(&self) -> Self::Elem {
        super::gf::BaseScalar::ZERO
    }
    fn one(&self) -> Self::Elem {
        super::gf::BaseScalar::ONE
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        super::gf::BaseField::add(self, *a, *b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        super::gf::BaseField::neg(self, *a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        super::gf::BaseField::mul(self, *a, *b)
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        super::gf::BaseField::from_int(self, n)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<E> {
    nvars: usize,
    terms: Vec<(Mono, E)>,
}

impl<E: Clone + PartialEq + Eq + Hash + Debug> Poly<E> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Mono, E)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, E)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading (largest) term.
    pub fn lt(&self) -> Option<&(Mono, E)> {
        self.terms.first()
    }

    /// Smallest term in graded-lex order.
    pub fn min_term(&self) -> Option<&(Mono, E)> {
        self.terms.last()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.deg())
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.get(var)).max()
    }

    /// Max total degree over a range of variables.
    pub fn partial_degree(&self, range: std::ops::Range<usize>) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exps()[range.clone()].iter().map(|&e| e as u32).sum()).max()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&E> {
        self.terms.binary_search_by(|(x, _)| m.cmp(x)).ok().map(|i| &self.terms[i].1)
    }

    /// Builds from terms that are already sorted descending, distinct and nonzero.
    pub fn from_sorted_unchecked(nvars: usize, terms: Vec<(Mono, E)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Poly { nvars, terms }
    }

    pub fn constant<R: Ring<Elem = E>>(c: E, nvars: usize, r: &R) -> Self {
        if r.is_zero(&c) {
            Self::zero(nvars)
        } else {
            Poly { nvars, terms: vec![(Mono::one(nvars), c)] }
        }
    }

    pub fn one<R: Ring<Elem = E>>(nvars: usize, r: &R) -> Self {
        Self::constant(r.one(), nvars, r)
    }

    pub fn var<R: Ring<Elem = E>>(i: usize, nvars: usize, r: &R) -> Self {
        Poly { nvars, terms: vec![(Mono::var(nvars, i), r.one())] }
    }

    pub fn monomial<R: Ring<Elem = E>>(m: Mono, c: E, r: &R) -> Self {
        let nvars = m.nvars();
        if r.is_zero(&c) {
            Self::zero(nvars)
        } else {
            Poly { nvars, terms: vec![(m, c)] }
        }
    }

    /// Combines like terms and drops zeros; input order arbitrary.
    pub fn from_terms<R: Ring<Elem = E>>(nvars: usize, terms: Vec<(Mono, E)>, r: &R) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, E)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = r.add(&last.1, &c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !r.is_zero(c));
        Poly { nvars, terms: out }
    }

    pub fn from_map<R: Ring<Elem = E>>(nvars: usize, map: FxHashMap<Mono, E>, r: &R) -> Self {
        let mut terms: Vec<(Mono, E)> = map.into_iter().filter(|(_, c)| !r.is_zero(c)).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { nvars, terms }
    }

    pub fn constant_term<R: Ring<Elem = E>>(&self, r: &R) -> E {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => r.zero(),
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, other: &Self, r: &R) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = r.add(&a[i].1, &b[j].1);
                    if !r.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { nvars: self.nvars.max(other.nvars), terms: out }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), r.neg(c))).collect() }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, other: &Self, r: &R) -> Self {
        self.add(&other.neg(r), r)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, c: &E, r: &R) -> Self {
        if r.is_zero(c) {
            return Self::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, x)| {
                let y = r.mul(x, c);
                (!r.is_zero(&y)).then(|| (m.clone(), y))
            })
            .collect();
        Poly { nvars: self.nvars, terms }
    }

    pub fn mul_mono(&self, m: &Mono) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect() }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, other: &Self, r: &R) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_mono(m).scale(c, r);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_mono(m).scale(c, r);
        }
        let mut acc: FxHashMap<Mono, E> = FxHashMap::default();
        acc.reserve(self.terms.len() * 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = r.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = r.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(self.nvars, acc, r)
    }

    pub fn pow<R: Ring<Elem = E>>(&self, n: u32, r: &R) -> Self {
        let mut result = Self::one(self.nvars, r);
        if n == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base, r);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, r);
            }
        }
        result
    }

    /// Drops all terms of total degree above `t`.
    pub fn truncate(&self, t: u32) -> Self {
        let start = self.terms.partition_point(|(m, _)| m.deg() > t);
        Poly { nvars: self.nvars, terms: self.terms[start..].to_vec() }
    }

    /// Product truncated at total degree `t`.
    pub fn mul_trunc<R: Ring<Elem = E>>(&self, other: &Self, t: u32, r: &R) -> Self {
        let mut acc: FxHashMap<Mono, E> = FxHashMap::default();
        for (ma, ca) in self.terms.iter().rev() {
            if ma.deg() > t {
                break;
            }
            for (mb, cb) in other.terms.iter().rev() {
                if ma.deg() + mb.deg() > t {
                    break;
                }
                let m = ma.mul(mb);
                let c = r.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = r.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(self.nvars, acc, r)
    }

    pub fn map_coeffs<F, R2: Ring>(&self, r2: &R2, f: F) -> Poly<R2::Elem>
    where
        F: Fn(&E) -> R2::Elem,
    {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let y = f(c);
                (!r2.is_zero(&y)).then(|| (m.clone(), y))
            })
            .collect();
        Poly { nvars: self.nvars, terms }
    }

    /// Applies a monomial map that is injective and order-preserving on the
    /// support (e.g. scaling all exponents); re-sorts defensively.
    pub fn map_monos<R: Ring<Elem = E>, F: Fn(&Mono) -> Mono>(&self, nvars: usize, r: &R, f: F) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (f(m), c.clone())).collect();
        Self::from_terms(nvars, terms, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_field::gf::{BaseField, BaseScalar};

    fn x(i: usize, n: usize, f: &BaseField) -> Poly<BaseScalar> {
        Poly::var(i, n, f)
    }

    #[test]
    fn grlex_order() {
        let a = Mono::from_slice(&[1, 0]);
        let b = Mono::from_slice(&[0, 1]);
        let c = Mono::from_slice(&[0, 2]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn char2_square_is_additive() {
        let f = BaseField::prime(2).unwrap();
        let s = x(0, 2, &f).add(&x(1, 2, &f), &f);
        let sq = s.mul(&s, &f);
        let expect = x(0, 2, &f).pow(2, &f).add(&x(1, 2, &f).pow(2, &f), &f);
        assert_eq!(sq, expect);
    }

    #[test]
    fn truncated_product() {
        let f = BaseField::prime(3).unwrap();
        let one = Poly::one(1, &f);
        let g = one.sub(&x(0, 1, &f), &f);
        let h = g.pow(4, &f);
        assert_eq!(g.pow(2, &f).mul_trunc(&g.pow(2, &f), 2, &f), h.truncate(2));
    }
}
