//! Finite fields F_{p^e} with table-driven multiplication.
//!
//! Elements are stored as integers in `0..q` whose base-`p` digits are the
//! coordinates with respect to the power basis `1, a, a^2, ...` of the modulus.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An element of F_{p^e}, encoded by its base-`p` coordinate digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct BaseScalar(pub u32);

impl BaseScalar {
    pub const ZERO: BaseScalar = BaseScalar(0);
    pub const ONE: BaseScalar = BaseScalar(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Largest field order we build tables for.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Clone)]
pub struct BaseField {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients from degree 0 up to degree `e` (empty when e = 1).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    frob_inv: Vec<u32>,
}

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus={:?})", self.p, self.e, self.modulus)
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for BaseField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Remainder of `a` modulo `b` over F_p; both are coefficient vectors (low degree first).
fn poly_rem_fp(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = inv_mod(b[db], p);
    while r.len() > db && !r.is_empty() {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = lead * inv_lead % p;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p * p - c * bi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible_fp(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    for dd in 1..=deg / 2 {
        let count = (p as u64).pow(dd as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(dd + 1);
            let mut x = idx;
            for _ in 0..dd {
                cand.push((x % p as u64) as u32);
                x /= p as u64;
            }
            cand.push(1);
            if poly_rem_fp(modulus, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `e` in lexicographic order of
/// its coefficient vector (constant term least significant).
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for idx in 0..count {
        let mut cand = Vec::with_capacity(e as usize + 1);
        let mut x = idx;
        for _ in 0..e {
            cand.push((x % p as u64) as u32);
            x /= p as u64;
        }
        cand.push(1);
        if is_irreducible_fp(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl BaseField {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Builds F_{p^e}. `modulus` lists the coefficients of a monic polynomial
    /// of degree `e` from the constant term up; `None` picks a default.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Parameter(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Parameter("extension degree must be at least 1".into()));
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(Error::Parameter(format!("field order {p}^{e} exceeds {MAX_ORDER}")));
        }
        let q = q64 as u32;
        let modulus = if e == 1 {
            if let Some(m) = &modulus {
                if m.len() > 2 || (m.len() == 2 && m[1] % p != 1) {
                    return Err(Error::Parameter("modulus of a prime field must be linear and monic".into()));
                }
            }
            Vec::new()
        } else {
            let m = match modulus {
                Some(mut m) => {
                    for c in m.iter_mut() {
                        *c %= p;
                    }
                    while m.last() == Some(&0) {
                        m.pop();
                    }
                    if m.len() != e as usize + 1 {
                        return Err(Error::Parameter(format!("modulus must have degree {e}")));
                    }
                    if *m.last().unwrap() != 1 {
                        let inv = inv_mod(*m.last().unwrap(), p);
                        for c in m.iter_mut() {
                            *c = *c * inv % p;
                        }
                    }
                    if !is_irreducible_fp(&m, p) {
                        return Err(Error::Parameter("modulus is not irreducible over F_p".into()));
                    }
                    m
                }
                None => default_modulus(p, e),
            };
            m
        };
        let mut field = BaseField { p, e, q, modulus, exp: Vec::new(), log: Vec::new(), frob_inv: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        // find a primitive element by brute force
        let mut gen = 0u32;
        'search: for g in 1..self.q {
            let mut x = 1u32;
            for k in 1..q - 1 {
                x = self.mul_slow(x, g);
                if x == 1 && k < q - 1 {
                    continue 'search;
                }
            }
            gen = g;
            break;
        }
        if q == 2 {
            gen = 1;
        }
        let mut exp = vec![0u32; 2 * q];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for k in 0..q - 1 {
            exp[k] = x;
            log[x as usize] = k as u32;
            x = self.mul_slow(x, gen);
        }
        for k in q - 1..2 * q {
            exp[k] = exp[k - (q - 1)];
        }
        self.exp = exp;
        self.log = log;
        // x -> x^{p^{e-1}} inverts Frobenius
        let mut fi = vec![0u32; q];
        let power = (self.p as u64).pow(self.e - 1);
        for v in 0..self.q {
            fi[v as usize] = self.pow_slow(v, power);
        }
        self.frob_inv = fi;
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.e as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem_fp(&prod, &self.modulus, self.p);
        let mut full = r;
        full.resize(self.e as usize, 0);
        self.from_digits(&full)
    }

    fn pow_slow(&self, a: u32, mut n: u64) -> u32 {
        let mut result = 1u32;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul_slow(result, base);
            }
            base = self.mul_slow(base, base);
            n >>= 1;
        }
        result
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: BaseScalar, b: BaseScalar) -> BaseScalar {
        if self.e == 1 {
            let s = a.0 + b.0;
            BaseScalar(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            BaseScalar(a.0 ^ b.0)
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..self.e {
                out += ((x % self.p + y % self.p) % self.p) * place;
                x /= self.p;
                y /= self.p;
                place *= self.p;
            }
            BaseScalar(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: BaseScalar) -> BaseScalar {
        if a.0 == 0 {
            return a;
        }
        if self.e == 1 {
            BaseScalar(self.p - a.0)
        } else if self.p == 2 {
            a
        } else {
            let mut x = a.0;
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..self.e {
                out += ((self.p - x % self.p) % self.p) * place;
                x /= self.p;
                place *= self.p;
            }
            BaseScalar(out)
        }
    }

    #[inline]
    pub fn sub(&self, a: BaseScalar, b: BaseScalar) -> BaseScalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: BaseScalar, b: BaseScalar) -> BaseScalar {
        if a.0 == 0 || b.0 == 0 {
            return BaseScalar::ZERO;
        }
        if self.e == 1 {
            return BaseScalar(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        BaseScalar(self.exp[s as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: BaseScalar) -> BaseScalar {
        assert!(!a.is_zero(), "inverse of zero in {:?}", self);
        if self.e == 1 {
            return BaseScalar(inv_mod(a.0, self.p));
        }
        let l = self.log[a.0 as usize];
        let q1 = self.q - 1;
        BaseScalar(self.exp[((q1 - l) % q1) as usize])
    }

    pub fn div(&self, a: BaseScalar, b: BaseScalar) -> BaseScalar {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: BaseScalar, n: u64) -> BaseScalar {
        if n == 0 {
            return BaseScalar::ONE;
        }
        if a.is_zero() {
            return a;
        }
        let q1 = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        BaseScalar(self.exp[((l * (n % q1)) % q1) as usize])
    }

    /// x^p.
    #[inline]
    pub fn frobenius(&self, a: BaseScalar) -> BaseScalar {
        self.pow(a, self.p as u64)
    }

    /// The unique y with y^p = x.
    #[inline]
    pub fn frobenius_inverse(&self, a: BaseScalar) -> BaseScalar {
        BaseScalar(self.frob_inv[a.0 as usize])
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> BaseScalar {
        BaseScalar(n.rem_euclid(self.p as i64) as u32)
    }

    /// The generator `a` of the power basis (equals 0 * ... in F_p: returns None when e = 1).
    pub fn generator(&self) -> Option<BaseScalar> {
        if self.e == 1 {
            None
        } else {
            Some(BaseScalar(self.p))
        }
    }

    /// Coordinates with respect to `1, a, ..., a^{e-1}`.
    pub fn coords(&self, a: BaseScalar) -> Vec<u32> {
        self.digits(a.0)
    }

    pub fn from_coords(&self, c: &[u32]) -> BaseScalar {
        let mut d: Vec<u32> = c.iter().map(|x| x % self.p).collect();
        d.resize(self.e as usize, 0);
        BaseScalar(self.from_digits(&d))
    }

    pub fn elements(&self) -> impl Iterator<Item = BaseScalar> {
        (0..self.q).map(BaseScalar)
    }

    /// Text form: an integer for prime fields, otherwise a polynomial in `a`.
    pub fn format(&self, x: BaseScalar) -> String {
        if self.e == 1 {
            return x.0.to_string();
        }
        let c = self.coords(x);
        let mut parts = Vec::new();
        for (k, &ck) in c.iter().enumerate().rev() {
            if ck == 0 {
                continue;
            }
            let m = match k {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{k}"),
            };
            parts.push(match (ck, k) {
                (_, 0) => ck.to_string(),
                (1, _) => m,
                _ => format!("{ck}*{m}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_frobenius_inverse_of_generator() {
        let f = BaseField::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        let alpha = f.generator().unwrap();
        let r = f.frobenius_inverse(alpha);
        assert_eq!(r, f.add(alpha, BaseScalar::ONE));
        assert_eq!(f.mul(r, r), alpha);
    }

    #[test]
    fn f2_fixed_point() {
        let f = BaseField::prime(2).unwrap();
        assert_eq!(f.frobenius_inverse(BaseScalar::ONE), BaseScalar::ONE);
    }

    #[test]
    fn frobenius_inverse_exhaustive_small_fields() {
        for (p, e) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)] {
            let f = BaseField::new(p, e, None).unwrap();
            for x in f.elements() {
                assert_eq!(f.frobenius(f.frobenius_inverse(x)), x);
                assert_eq!(f.frobenius_inverse(f.frobenius(x)), x);
                assert_eq!(f.pow(x, f.q() as u64), x);
            }
        }
    }

    #[test]
    fn f9_modulus_a2_plus_1() {
        let f = BaseField::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        for x in f.elements() {
            assert_eq!(f.pow(f.frobenius_inverse(x), 3), x);
        }
        let a = f.generator().unwrap();
        assert_eq!(f.mul(a, a), f.from_int(-1));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, e) in [(2, 2), (3, 2), (5, 1)] {
            let f = BaseField::new(p, e, None).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), BaseScalar::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), BaseScalar::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(BaseField::new(2, 2, Some(vec![1, 0, 1])).is_err());
        assert!(BaseField::new(4, 1, None).is_err());
    }
}
