//! Exact arithmetic in K = F_{p^e}(u_1, ..., u_r).

pub mod gf;
pub mod mpoly;
pub mod parse;
pub mod poly;

use crate::error::{Error, Result};
pub use gf::{BaseField, BaseScalar};
pub use mpoly::MPoly;
pub use poly::{Exps, Mono, Poly, Ring};
use std::fmt;
use std::sync::Arc;

/// A reduced fraction of polynomials in the transcendental variables.
/// The denominator is monic in graded-lex order and zero is `0/1`, so equal
/// elements have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: MPoly,
    den: MPoly,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num.terms(), self.den.terms())
    }
}

impl FieldElement {
    pub fn num(&self) -> &MPoly {
        &self.num
    }
    pub fn den(&self) -> &MPoly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    /// True when the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1 && self.den.terms()[0].0.is_one()
    }
}

/// The field K: a finite base field plus `r` transcendentals, with the
/// monomial p-basis `u^j`, `0 <= j_i < p`, in graded-lex order.
#[derive(Clone, Debug)]
pub struct CoeffField {
    base: BaseField,
    vars: Vec<String>,
    pbasis: Vec<Exps>,
}

impl PartialEq for CoeffField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.vars == other.vars
    }
}
impl Eq for CoeffField {}

pub type FieldRef = Arc<CoeffField>;

impl CoeffField {
    pub fn new(base: BaseField, vars: Vec<String>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Parameter(format!("duplicate variable name {v}")));
            }
            if v.is_empty() || !v.chars().next().unwrap().is_ascii_alphabetic() || v == "a" {
                return Err(Error::Parameter(format!("invalid variable name {v:?}")));
            }
        }
        let r = vars.len();
        let p = base.p() as usize;
        let count = p
            .checked_pow(r as u32)
            .filter(|c| *c <= 1 << 16)
            .ok_or_else(|| Error::Parameter(format!("p-basis of size {p}^{r} is too large")))?;
        let mut pbasis: Vec<Exps> = (0..count)
            .map(|mut idx| {
                let mut e: Exps = smallvec::smallvec![0; r];
                for slot in e.iter_mut() {
                    *slot = (idx % p) as u16;
                    idx /= p;
                }
                e
            })
            .collect();
        pbasis.sort_by_key(|e| Mono::new(e.clone()));
        Ok(CoeffField { base, vars, pbasis })
    }

    /// F_p with no transcendentals.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(BaseField::prime(p)?, Vec::new())
    }

    /// F_p(u_1..u_r) with the given variable names.
    pub fn rational(p: u32, vars: &[&str]) -> Result<Self> {
        Self::new(BaseField::prime(p)?, vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }
    pub fn p(&self) -> u32 {
        self.base.p()
    }
    pub fn r(&self) -> usize {
        self.vars.len()
    }
    pub fn var_names(&self) -> &[String] {
        &self.vars
    }
    pub fn pbasis(&self) -> &[Exps] {
        &self.pbasis
    }

    /// Builds `num/den` in canonical form.
    pub fn fraction(&self, num: MPoly, den: MPoly) -> Result<FieldElement> {
        if den.is_zero() {
            return Err(Error::Parameter("zero denominator".into()));
        }
        Ok(self.reduce(num, den))
    }

    fn reduce(&self, num: MPoly, den: MPoly) -> FieldElement {
        let f = &self.base;
        if num.is_zero() {
            return self.zero_elem();
        }
        let (num, den) = if mpoly::is_constant(&den) {
            (num, den)
        } else {
            let g = mpoly::gcd(&num, &den, f);
            if mpoly::is_constant(&g) {
                (num, den)
            } else {
                (mpoly::div_exact(&num, &g, f).unwrap(), mpoly::div_exact(&den, &g, f).unwrap())
            }
        };
        let c = mpoly::lc(&den);
        if c == BaseScalar::ONE {
            FieldElement { num, den }
        } else {
            let inv = f.inv(c);
            FieldElement { num: num.scale(&inv, f), den: den.scale(&inv, f) }
        }
    }

    fn zero_elem(&self) -> FieldElement {
        FieldElement { num: MPoly::zero(self.r()), den: MPoly::one(self.r(), &self.base) }
    }

    pub fn from_poly(&self, num: MPoly) -> FieldElement {
        let c = FieldElement { num, den: MPoly::one(self.r(), &self.base) };
        debug_assert_eq!(c.num.nvars(), self.r());
        c
    }

    pub fn from_base(&self, c: BaseScalar) -> FieldElement {
        self.from_poly(MPoly::constant(c, self.r(), &self.base))
    }

    pub fn var(&self, i: usize) -> FieldElement {
        self.from_poly(MPoly::var(i, self.r(), &self.base))
    }

    pub fn inv_elem(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::Parameter("inverse of zero".into()));
        }
        Ok(self.reduce(x.den.clone(), x.num.clone()))
    }

    pub fn div_elem(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv_elem(b)?))
    }

    /// x^n for any integer n (x ≠ 0 when n < 0).
    pub fn pow_elem(&self, x: &FieldElement, n: i64) -> Result<FieldElement> {
        let base = if n < 0 { self.inv_elem(x)? } else { x.clone() };
        let k = n.unsigned_abs();
        let k32 = u32::try_from(k).map_err(|_| Error::Parameter("exponent too large".into()))?;
        let f = &self.base;
        Ok(FieldElement { num: base.num.pow(k32, f), den: base.den.pow(k32, f) })
    }

    /// x^p.
    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        let f = &self.base;
        FieldElement { num: mpoly::frobenius(&x.num, f), den: mpoly::frobenius(&x.den, f) }
    }

    /// π_ℓ(x) with respect to the monomial p-basis: x = Σ_ℓ π_ℓ(x)^p h_ℓ.
    pub fn pi_project(&self, x: &FieldElement, l: usize) -> FieldElement {
        let f = &self.base;
        if x.is_zero() {
            return self.zero_elem();
        }
        let g = if x.is_polynomial() { x.num.clone() } else { x.num.mul(&x.den.pow(self.p() - 1, f), f) };
        let comp = mpoly::residue_component(&g, &self.pbasis[l], f);
        self.reduce(comp, x.den.clone())
    }

    /// All π-components in p-basis order.
    pub fn pi_all(&self, x: &FieldElement) -> Vec<FieldElement> {
        (0..self.pbasis.len()).map(|l| self.pi_project(x, l)).collect()
    }

    /// Recombines π-components: Σ_ℓ c_ℓ^p h_ℓ.
    pub fn pi_recombine(&self, comps: &[FieldElement]) -> FieldElement {
        let mut acc = self.zero_elem();
        for (l, c) in comps.iter().enumerate() {
            let h = self.from_poly(MPoly::monomial(Mono::new(self.pbasis[l].clone()), BaseScalar::ONE, &self.base));
            acc = self.add(&acc, &self.mul(&self.frobenius(c), &h));
        }
        acc
    }

    /// Evaluates at a point of F_q^r; `None` when the denominator vanishes.
    pub fn eval_at(&self, x: &FieldElement, point: &[BaseScalar]) -> Option<BaseScalar> {
        let f = &self.base;
        let d = mpoly::eval(&x.den, point, f);
        if d.is_zero() {
            return None;
        }
        Some(f.div(mpoly::eval(&x.num, point, f), d))
    }

    pub fn format(&self, x: &FieldElement) -> String {
        let names: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let n = parse::format_mpoly(&x.num, &names, &self.base);
        if x.is_polynomial() {
            n
        } else {
            format!("({})/({})", n, parse::format_mpoly(&x.den, &names, &self.base))
        }
    }

    /// Canonical text form of the field, parseable by [`parse::parse_field`].
    pub fn spec_string(&self) -> String {
        let mut s = format!("GF({}", self.p());
        if self.base.e() > 1 {
            s.push_str(&format!("^{}; modulus=", self.base.e()));
            let m = self.base.modulus();
            let mut terms = Vec::new();
            for (k, &c) in m.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                let mono = match k {
                    0 => String::new(),
                    1 => "a".into(),
                    _ => format!("a^{k}"),
                };
                terms.push(match (c, k) {
                    (_, 0) => c.to_string(),
                    (1, _) => mono,
                    _ => format!("{c}*{mono}"),
                });
            }
            s.push_str(&terms.join("+"));
        }
        s.push(')');
        if !self.vars.is_empty() {
            s.push_str(&format!("({})", self.vars.join(",")));
        }
        s
    }
}

impl Ring for CoeffField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        self.zero_elem()
    }

    fn one(&self) -> FieldElement {
        self.from_base(BaseScalar::ONE)
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.base;
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            let num = a.num.add(&b.num, f);
            if a.is_polynomial() {
                return if num.is_zero() { self.zero_elem() } else { FieldElement { num, den: a.den.clone() } };
            }
            return self.reduce(num, a.den.clone());
        }
        let num = a.num.mul(&b.den, f).add(&b.num.mul(&a.den, f), f);
        self.reduce(num, a.den.mul(&b.den, f))
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { num: a.num.neg(&self.base), den: a.den.clone() }
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.base;
        if a.is_zero() || b.is_zero() {
            return self.zero_elem();
        }
        if a.is_polynomial() && b.is_polynomial() {
            return FieldElement { num: a.num.mul(&b.num, f), den: a.den.clone() };
        }
        let g1 = mpoly::gcd(&a.num, &b.den, f);
        let g2 = mpoly::gcd(&b.num, &a.den, f);
        let an = mpoly::div_exact(&a.num, &g1, f).unwrap();
        let bd = mpoly::div_exact(&b.den, &g1, f).unwrap();
        let bn = mpoly::div_exact(&b.num, &g2, f).unwrap();
        let ad = mpoly::div_exact(&a.den, &g2, f).unwrap();
        let num = an.mul(&bn, f);
        let den = ad.mul(&bd, f);
        let c = mpoly::lc(&den);
        let inv = f.inv(c);
        FieldElement { num: num.scale(&inv, f), den: den.scale(&inv, f) }
    }

    fn from_int(&self, n: i64) -> FieldElement {
        self.from_base(self.base.from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2u() -> CoeffField {
        CoeffField::rational(2, &["u"]).unwrap()
    }

    #[test]
    fn pi_of_u_cubed() {
        let k = f2u();
        let u = k.var(0);
        let x = k.pow_elem(&u, 3).unwrap();
        // basis order: h_0 = 1, h_1 = u
        assert!(k.pi_project(&x, 0).is_zero());
        assert_eq!(k.pi_project(&x, 1), u);
    }

    #[test]
    fn pi_of_inverse_u() {
        let k = f2u();
        let u = k.var(0);
        let x = k.inv_elem(&u).unwrap();
        assert!(k.pi_project(&x, 0).is_zero());
        assert_eq!(k.pi_project(&x, 1), x);
        assert_eq!(k.pi_recombine(&k.pi_all(&x)), x);
    }

    #[test]
    fn pi_on_finite_field_is_frobenius_inverse() {
        let k = CoeffField::new(BaseField::new(3, 2, None).unwrap(), vec![]).unwrap();
        for c in k.base().elements() {
            let x = k.from_base(c);
            assert_eq!(k.pi_project(&x, 0), k.from_base(k.base().frobenius_inverse(c)));
        }
    }

    #[test]
    fn canonical_forms() {
        let k = f2u();
        let u = k.var(0);
        assert!(k.sub(&k.mul(&u, &u), &k.mul(&u, &u)).is_zero());
        let x = k.div_elem(&u, &u).unwrap();
        assert_eq!(x, k.one());
        assert!(!x.is_zero());
        let one = k.one();
        let y = k.div_elem(&k.add(&u, &one), &u).unwrap();
        assert!(!y.is_zero());
        assert_eq!(k.mul(&y, &u), k.add(&u, &one));
    }

    #[test]
    fn pbasis_order() {
        let k = CoeffField::rational(2, &["x", "y"]).unwrap();
        let b: Vec<Vec<u16>> = k.pbasis().iter().map(|e| e.to_vec()).collect();
        assert_eq!(b, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
