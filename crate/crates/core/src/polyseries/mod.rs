//! Polynomials and truncated power series in t₁..t_d over K, Cartier
//! operators, and conversion to the cleared ring F_q[t, u].

mod input;
mod text;

pub use input::{AlgebraicInput, InputKind, Series};
pub use text::{format_tpoly, parse_input, parse_poly_in, parse_rational, parse_tpoly, t_names, write_input};

use crate::coeff_field::{mpoly, BaseScalar, CoeffField, Exps, FieldElement, MPoly, Mono, Poly, Ring};
use crate::error::{Error, Result};

pub type TPoly = Poly<FieldElement>;

pub fn tconst(c: FieldElement, d: usize, k: &CoeffField) -> TPoly {
    TPoly::constant(c, d, k)
}

/// Homogeneous component of total degree `deg`.
pub fn homogeneous(a: &TPoly, deg: u32) -> TPoly {
    let terms: Vec<_> = a.terms().iter().filter(|(m, _)| m.deg() == deg).cloned().collect();
    TPoly::from_sorted_unchecked(a.nvars(), terms)
}

/// Lowest total degree carrying a nonzero term.
pub fn valuation<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug>(a: &Poly<E>) -> Option<u32> {
    a.min_term().map(|(m, _)| m.deg())
}

/// Exact quotient `a / b` in K[t], or `None` when `b` does not divide `a`.
pub fn div_exact(a: &TPoly, b: &TPoly, k: &CoeffField) -> Option<TPoly> {
    let (lm, lc) = b.lt()?.clone();
    let inv = k.inv_elem(&lc).ok()?;
    let mut rem = a.clone();
    let mut q = Vec::new();
    while let Some((m, c)) = rem.lt().cloned() {
        if !lm.divides(&m) {
            return None;
        }
        let qm = lm.div_into(&m);
        let qc = Ring::mul(k, &c, &inv);
        rem = rem.sub(&b.mul_mono(&qm).scale(&qc, k), k);
        q.push((qm, qc));
    }
    Some(TPoly::from_terms(a.nvars(), q, k))
}

/// `a` with every coefficient raised to p^k and every exponent multiplied by p^k.
pub fn frobenius_power(a: &TPoly, k: u32, field: &CoeffField) -> TPoly {
    let mut out = a.clone();
    for _ in 0..k {
        let p = field.p();
        let terms = out.terms().iter().map(|(m, c)| (m.pow(p), field.frobenius(c))).collect();
        out = TPoly::from_sorted_unchecked(a.nvars(), terms);
    }
    out
}

/// Conversion between K[t] and the cleared ring F_q[t₁..t_d, u₁..u_r].
#[derive(Clone, Debug)]
pub struct Mixed<'a> {
    pub k: &'a CoeffField,
    pub d: usize,
}

impl<'a> Mixed<'a> {
    pub fn new(k: &'a CoeffField, d: usize) -> Self {
        Mixed { k, d }
    }

    pub fn nvars(&self) -> usize {
        self.d + self.k.r()
    }

    /// Embeds a polynomial of F_q[u] (r variables) into the mixed ring.
    pub fn embed_u(&self, a: &MPoly) -> MPoly {
        mpoly::embed(a, self.nvars(), self.d)
    }

    /// Maps a TPoly whose coefficients are all polynomials in u.
    pub fn to_mixed(&self, a: &TPoly) -> Option<MPoly> {
        let f = self.k.base();
        let mut terms = Vec::new();
        for (tm, c) in a.terms() {
            if !c.is_polynomial() {
                return None;
            }
            for (um, x) in c.num().terms() {
                terms.push((tm.concat(um), *x));
            }
        }
        Some(MPoly::from_terms(self.nvars(), terms, f))
    }

    /// Clears denominators: returns (A, D) with a = A / D, D ∈ F_q[u] monic.
    pub fn clear(&self, a: &TPoly) -> (MPoly, MPoly) {
        let f = self.k.base();
        let mut den = MPoly::one(self.k.r(), f);
        for (_, c) in a.terms() {
            if !mpoly::is_constant(c.den()) {
                let g = mpoly::gcd(&den, c.den(), f);
                den = den.mul(&mpoly::div_exact(c.den(), &g, f).expect("gcd divides"), f);
            }
        }
        let mut terms = Vec::new();
        for (tm, c) in a.terms() {
            let mult = mpoly::div_exact(&den, c.den(), f).expect("lcm is a multiple");
            for (um, x) in c.num().mul(&mult, f).terms() {
                terms.push((tm.concat(um), *x));
            }
        }
        (MPoly::from_terms(self.nvars(), terms, f), den)
    }

    /// Clears a list of polynomials with one common denominator.
    pub fn clear_all(&self, list: &[TPoly]) -> Vec<MPoly> {
        let f = self.k.base();
        let cleared: Vec<(MPoly, MPoly)> = list.iter().map(|a| self.clear(a)).collect();
        let mut den = MPoly::one(self.k.r(), f);
        for (_, d) in &cleared {
            let g = mpoly::gcd(&den, d, f);
            den = den.mul(&mpoly::div_exact(d, &g, f).unwrap(), f);
        }
        cleared.into_iter().map(|(a, d)| a.mul(&self.embed_u(&mpoly::div_exact(&den, &d, f).unwrap()), f)).collect()
    }

    pub fn from_mixed(&self, a: &MPoly) -> TPoly {
        let f = self.k.base();
        let mut groups: Vec<(Mono, Vec<(Mono, BaseScalar)>)> = Vec::new();
        let mut index: rustc_hash::FxHashMap<Mono, usize> = Default::default();
        for (m, c) in a.terms() {
            let tm = m.slice(0..self.d);
            let um = m.slice(self.d..self.nvars());
            let i = *index.entry(tm.clone()).or_insert_with(|| {
                groups.push((tm, Vec::new()));
                groups.len() - 1
            });
            groups[i].1.push((um, *c));
        }
        let terms = groups.into_iter().map(|(tm, us)| (tm, self.k.from_poly(MPoly::from_terms(self.k.r(), us, f)))).collect();
        TPoly::from_terms(self.d, terms, self.k)
    }

    /// Value at t = 0, as a polynomial in u.
    pub fn at_zero(&self, a: &MPoly) -> MPoly {
        let terms: Vec<_> = a
            .terms()
            .iter()
            .filter(|(m, _)| m.exps()[..self.d].iter().all(|&e| e == 0))
            .map(|(m, c)| (m.slice(self.d..self.nvars()), *c))
            .collect();
        MPoly::from_terms(self.k.r(), terms, self.k.base())
    }

    /// Combined π_ℓ∘E_j on the mixed ring: residue `j` in t, residue h_ℓ in u.
    pub fn cartier(&self, a: &MPoly, j: &[u16], l: usize) -> MPoly {
        let mut r: Exps = j.iter().copied().collect();
        r.extend(self.k.pbasis()[l].iter().copied());
        mpoly::residue_component(a, &r, self.k.base())
    }
}

/// A power series known exactly through total degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTrunc {
    pub order: u32,
    pub poly: TPoly,
}

impl SeriesTrunc {
    pub fn new(poly: TPoly, order: u32) -> Self {
        SeriesTrunc { poly: poly.truncate(order), order }
    }

    pub fn zero(d: usize, order: u32) -> Self {
        SeriesTrunc { poly: TPoly::zero(d), order }
    }

    pub fn d(&self) -> usize {
        self.poly.nvars()
    }

    pub fn coeff(&self, n: &[u32], k: &CoeffField) -> Result<FieldElement> {
        let deg: u32 = n.iter().sum();
        if deg > self.order {
            return Err(Error::InsufficientPrecision { needed: deg, have: self.order });
        }
        Ok(self.poly.coeff(&Mono::from_slice(n)).cloned().unwrap_or_else(|| k.zero()))
    }

    pub fn mul(&self, other: &SeriesTrunc, k: &CoeffField) -> SeriesTrunc {
        let order = self.order.min(other.order);
        SeriesTrunc { poly: self.poly.mul_trunc(&other.poly, order, k), order }
    }

    pub fn add(&self, other: &SeriesTrunc, k: &CoeffField) -> SeriesTrunc {
        let order = self.order.min(other.order);
        SeriesTrunc { poly: self.poly.add(&other.poly, k).truncate(order), order }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self, k: &CoeffField) -> Result<SeriesTrunc> {
        let c0 = self.poly.constant_term(k);
        let inv0 = k.inv_elem(&c0).map_err(|_| Error::Parameter("series inverse needs a unit constant term".into()))?;
        let d = self.d();
        let parts: Vec<TPoly> = (0..=self.order).map(|i| homogeneous(&self.poly, i)).collect();
        let mut out: Vec<TPoly> = vec![tconst(inv0.clone(), d, k)];
        for n in 1..=self.order {
            let mut acc = TPoly::zero(d);
            for i in 1..=n {
                if !parts[i as usize].is_zero() {
                    acc = acc.add(&parts[i as usize].mul(&out[(n - i) as usize], k), k);
                }
            }
            out.push(acc.scale(&k.neg(&inv0), k));
        }
        let poly = out.into_iter().fold(TPoly::zero(d), |a, b| a.add(&b, k));
        Ok(SeriesTrunc { poly, order: self.order })
    }

    /// `self^(p^k)`, exact through the scaled order.
    pub fn frobenius_power(&self, k: u32, field: &CoeffField) -> SeriesTrunc {
        let scale = field.p().pow(k);
        let order = self.order.saturating_mul(scale).saturating_add(scale - 1);
        SeriesTrunc { poly: frobenius_power(&self.poly, k, field), order }
    }
}

/// π_ℓ-component of E_j applied to a polynomial: Σ π_ℓ(a(pn+j)) tⁿ.
pub fn cartier_poly(g: &TPoly, j: &[u32], l: usize, k: &CoeffField) -> TPoly {
    let p = k.p();
    let terms = g
        .terms()
        .iter()
        .filter(|(m, _)| m.exps().iter().zip(j).all(|(&e, &ji)| e as u32 % p == ji))
        .filter_map(|(m, c)| {
            let x = k.pi_project(c, l);
            (!x.is_zero()).then(|| (Mono::from_slice(&m.exps().iter().map(|&e| e as u32 / p).collect::<Vec<_>>()), x))
        })
        .collect();
    TPoly::from_sorted_unchecked(g.nvars(), terms)
}

/// Series version of [`cartier_poly`]; the result is exact through ⌊(T − |j|)/p⌋.
pub fn cartier(g: &SeriesTrunc, j: &[u32], l: usize, k: &CoeffField) -> Result<SeriesTrunc> {
    let jsum: u32 = j.iter().sum();
    if g.order < jsum {
        return Err(Error::InsufficientPrecision { needed: jsum, have: g.order });
    }
    let order = (g.order - jsum) / k.p();
    Ok(SeriesTrunc { poly: cartier_poly(&g.poly, j, l, k).truncate(order), order })
}

/// All digit tuples of Σ_p^d in alphabet-index order (first coordinate fastest).
pub fn digit_tuples(p: u32, d: usize) -> Vec<Vec<u32>> {
    let n = (p as usize).pow(d as u32);
    (0..n)
        .map(|mut x| {
            (0..d)
                .map(|_| {
                    let r = (x % p as usize) as u32;
                    x /= p as usize;
                    r
                })
                .collect()
        })
        .collect()
}

/// Every component π_ℓ E_j g, keyed by (j, ℓ).
pub fn cartier_components(g: &SeriesTrunc, k: &CoeffField) -> Vec<(Vec<u32>, usize, SeriesTrunc)> {
    let mut out = Vec::new();
    for j in digit_tuples(k.p(), g.d()) {
        for l in 0..k.pbasis().len() {
            if let Ok(c) = cartier(g, &j, l, k) {
                out.push((j.clone(), l, c));
            }
        }
    }
    out
}

/// Σ_j t^j Σ_ℓ h_ℓ·c_{j,ℓ}^p, truncated at `order`.
pub fn cartier_recombine(comps: &[(Vec<u32>, usize, SeriesTrunc)], d: usize, order: u32, k: &CoeffField) -> TPoly {
    let mut acc = TPoly::zero(d);
    for (j, l, c) in comps {
        let h = k.from_poly(MPoly::monomial(Mono::new(k.pbasis()[*l].clone()), BaseScalar::ONE, k.base()));
        let term = frobenius_power(&c.poly, 1, k).mul_mono(&Mono::from_slice(j)).scale(&h, k);
        acc = acc.add(&term, k);
    }
    acc.truncate(order)
}

/// Checks g ≡ Σ_j t^j Σ_ℓ h_ℓ·(π_ℓ E_j g)^p through the order of `g`.
pub fn cartier_decompose_check(g: &SeriesTrunc, k: &CoeffField) -> bool {
    cartier_recombine(&cartier_components(g, k), g.d(), g.order, k) == g.poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_field::CoeffField;

    fn t(d: usize, i: usize, k: &CoeffField) -> TPoly {
        TPoly::var(i, d, k)
    }

    #[test]
    fn cartier_on_monomials() {
        let k = CoeffField::prime(2).unwrap();
        let t2 = t(1, 0, &k).pow(2, &k);
        assert_eq!(cartier_poly(&t2, &[0], 0, &k), t(1, 0, &k));
        assert!(cartier_poly(&t2, &[1], 0, &k).is_zero());
        let g = t(2, 0, &k).mul(&t(2, 1, &k).pow(2, &k), &k);
        assert_eq!(cartier_poly(&g, &[1, 0], 0, &k), t(2, 1, &k));
    }

    #[test]
    fn cartier_of_geometric_series() {
        let k = CoeffField::prime(2).unwrap();
        let ones: Vec<_> = (0..=8u32).map(|n| (Mono::from_slice(&[n]), k.one())).collect();
        let g = SeriesTrunc::new(TPoly::from_terms(1, ones, &k), 8);
        let e0 = cartier(&g, &[0], 0, &k).unwrap();
        assert_eq!(e0.order, 4);
        let expect: Vec<_> = (0..=4u32).map(|n| (Mono::from_slice(&[n]), k.one())).collect();
        assert_eq!(e0.poly, TPoly::from_terms(1, expect, &k));
        assert!(cartier_decompose_check(&g, &k));
    }

    #[test]
    fn decompose_check_and_corrupted_components() {
        let k = CoeffField::rational(3, &["u"]).unwrap();
        let u = k.var(0);
        let g = t(2, 0, &k).scale(&u, &k).add(&t(2, 1, &k).pow(4, &k), &k);
        let s = SeriesTrunc::new(g, 6);
        assert!(cartier_decompose_check(&s, &k));
        let mut comps = cartier_components(&s, &k);
        let victim = comps.iter_mut().find(|(_, _, c)| !c.poly.is_zero()).unwrap();
        victim.2.poly = victim.2.poly.add(&tconst(k.one(), 2, &k), &k);
        assert_ne!(cartier_recombine(&comps, 2, 6, &k), s.poly);
    }

    #[test]
    fn clear_and_restore() {
        let k = CoeffField::rational(2, &["u"]).unwrap();
        let mx = Mixed::new(&k, 1);
        let inv_u = k.inv_elem(&k.var(0)).unwrap();
        let a = t(1, 0, &k).scale(&inv_u, &k).add(&tconst(k.one(), 1, &k), &k);
        let (num, den) = mx.clear(&a);
        assert_eq!(den, MPoly::var(0, 1, k.base()));
        let back = mx.from_mixed(&num);
        let expect = a.scale(&k.var(0), &k);
        assert_eq!(back, expect);
    }

    #[test]
    fn inverse_series() {
        let k = CoeffField::prime(3).unwrap();
        let b = tconst(k.one(), 2, &k).sub(&t(2, 0, &k), &k).sub(&t(2, 1, &k), &k);
        let s = SeriesTrunc::new(b, 6);
        let inv = s.inverse(&k).unwrap();
        let prod = s.mul(&inv, &k);
        assert_eq!(prod.poly, tconst(k.one(), 2, &k));
    }
}
