//! Explicit constants: Ore degree bound, the complexity chain N₀..N₉, the
//! count of automatic sets of bounded complexity and element-size bounds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Values above 2^4096 are kept as power towers.
pub const EXACT_BITS: u64 = 4096;

/// A positive integer, stored exactly or as `base^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Exact(BigUint),
    Pow { base: u64, exp: Box<Magnitude> },
}

impl Magnitude {
    pub fn from_u64(x: u64) -> Self {
        Magnitude::Exact(BigUint::from(x))
    }

    /// base^exp, evaluated exactly when the result has at most [`EXACT_BITS`] bits.
    pub fn pow(base: u64, exp: Magnitude) -> Self {
        if base == 1 {
            return Magnitude::from_u64(1);
        }
        if let Magnitude::Exact(e) = &exp {
            if let Some(e64) = e.to_u64() {
                let bits = e64 as f64 * (base as f64).log2();
                if bits <= EXACT_BITS as f64 {
                    return Magnitude::Exact(BigUint::from(base).pow(e64 as u32));
                }
            }
        }
        Magnitude::Pow { base, exp: Box::new(exp) }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Exact(x) => Some(x),
            Magnitude::Pow { .. } => None,
        }
    }

    /// log₂ log₂ of the value, as a float (−∞ for values ≤ 1).
    pub fn log2_log2(&self) -> f64 {
        match self {
            Magnitude::Exact(x) => biguint_log2(x).log2(),
            Magnitude::Pow { base, exp } => ((*base as f64).log2()).log2() + exp.log2(),
        }
    }

    /// log₂ of the value (may be +∞ for towers).
    pub fn log2(&self) -> f64 {
        match self {
            Magnitude::Exact(x) => biguint_log2(x),
            Magnitude::Pow { base, exp } => exp.approx() * (*base as f64).log2(),
        }
    }

    fn approx(&self) -> f64 {
        match self {
            Magnitude::Exact(x) => x.to_f64().unwrap_or(f64::INFINITY),
            Magnitude::Pow { .. } => self.log2().exp2(),
        }
    }
}

fn biguint_log2(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap().log2()
    } else {
        let shifted = x >> (bits - 64) as usize;
        shifted.to_f64().unwrap().log2() + (bits - 64) as f64
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => Some(a.cmp(b)),
            _ => {
                let (x, y) = (self.log2(), other.log2());
                if x.is_finite() && y.is_finite() {
                    x.partial_cmp(&y)
                } else {
                    self.log2_log2().partial_cmp(&other.log2_log2())
                }
            }
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(x) if x.bits() <= 128 => write!(f, "{x}"),
            Magnitude::Exact(x) => write!(f, "≈2^{:.2}", biguint_log2(x)),
            Magnitude::Pow { base, exp } => write!(f, "{base}^({exp})"),
        }
    }
}

impl Serialize for Magnitude {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Magnitude::Exact(x) => s.serialize_str(&x.to_string()),
            Magnitude::Pow { .. } => s.serialize_str(&self.to_string()),
        }
    }
}

/// Degree bound H·s·p^s for the Ore relation of an annihilator of degree s and height H.
pub fn ore_degree_bound(h: u64, s: u32, p: u32) -> BigUint {
    BigUint::from(h) * s * BigUint::from(p).pow(s)
}

/// Number of p-automatic subsets of N with complexity at most N: N·2^N·N^{pN}.
pub fn automata_count_bound(n: u32, p: u32) -> BigUint {
    BigUint::from(n) * BigUint::from(2u32).pow(n) * BigUint::from(n).pow(p * n)
}

/// The element bound p^{comp−2} (1 when comp < 2).
pub fn element_bounds(comp: u32, p: u32) -> (BigUint, BigUint) {
    let b = if comp < 2 { BigUint::one() } else { BigUint::from(p).pow(comp - 2) };
    (b.clone(), b)
}

/// A bound on the least element of a nonempty set of complexity `comp`
/// that holds for every set: p^{comp−1} − 1.
pub fn min_element_bound(comp: u32, p: u32) -> BigUint {
    BigUint::from(p).pow(comp.saturating_sub(1)) - 1u32
}

/// Parameters for the complexity chain. `s_alg`, `t`, `n2`, `n5` and `n`
/// describe the presentation of the coefficient field; the defaults are
/// those of a purely transcendental field.
#[derive(Clone, Debug, Serialize)]
pub struct ChainParams {
    pub p: u32,
    pub e: u32,
    pub d: u32,
    pub h: u64,
    pub s: u32,
    pub n2: u64,
    pub n5: u64,
    pub s_alg: u64,
    pub t: u64,
    pub r: u64,
    pub n: Option<u64>,
}

impl ChainParams {
    pub fn new(p: u32, d: u32, h: u64, s: u32) -> Self {
        ChainParams { p, e: 1, d, h, s, n2: 1, n5: 1, s_alg: 1, t: 1, r: 0, n: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub params: ChainParams,
    pub ore_degree: Magnitude,
    pub m: Magnitude,
    pub n0: Magnitude,
    pub n1: Magnitude,
    pub n3: Magnitude,
    pub n4: Magnitude,
    pub n: Magnitude,
    pub n6: Magnitude,
    pub m_prime: Magnitude,
    pub k0: Magnitude,
    pub n7: Magnitude,
    pub n8: Magnitude,
    pub n9: Magnitude,
}

fn ex(x: &Magnitude) -> Option<&BigUint> {
    x.exact()
}

fn binomial(n: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Evaluates the chain. Exact wherever the numbers stay below 2^4096.
pub fn complexity_bound_chain(params: &ChainParams) -> BoundReport {
    let p = params.p as u64;
    let s = params.s;
    let pb = BigUint::from(p);
    let ore = ore_degree_bound(params.h, s, params.p);
    // M = H s p^s (p^s − 1)
    let m = &ore * (pb.pow(s) - 1u32);
    // N₀ = (s+1)·C(M+d, d)
    let n0 = BigUint::from(s + 1) * binomial(&(&m + params.d), params.d as u64);
    // N₁ = p^{1 + p^d N₀²}
    let n1 = Magnitude::pow(p, Magnitude::Exact(BigUint::one() + pb.pow(params.d) * &n0 * &n0));
    // N₃ = N₂(2 s^{p−2} + (s^{p−2} − s)/(s − 1)), with the s = 1 limit p − 3
    let sa = params.s_alg as i128;
    let sp2 = (sa).pow(params.p - 2);
    let frac = if sa == 1 { params.p as i128 - 3 } else { (sp2 - sa) / (sa - 1) };
    let n3 = BigUint::from((params.n2 as i128 * (2 * sp2 + frac)).max(1) as u128);
    // N₄ = 2 N₃ s t
    let n4 = BigUint::from(2u32) * &n3 * params.s_alg * params.t;
    // n: number of field generators (X's, a's, λ's and 1)
    let n = params.n.map(BigUint::from).unwrap_or_else(|| BigUint::from(params.r + params.s_alg + 1) + pb.pow(params.d) * &n0 * &n0);
    // N₆ = (N₂ + N₅)(p − 1) n s^{2(p−1)n}
    let n6_base = BigUint::from(params.n2 + params.n5) * (p - 1) * &n;
    let n6 = if params.s_alg <= 1 {
        Magnitude::Exact(n6_base.clone())
    } else {
        let e = BigUint::from(2 * (p - 1)) * &n;
        match Magnitude::pow(params.s_alg, Magnitude::Exact(e)) {
            Magnitude::Exact(x) => Magnitude::Exact(&n6_base * x),
            tower => tower,
        }
    };
    // M' ≤ (N₄ + N₆) s p + p, k₀ = ⌊2(M'+1)p/(p−1)⌋ + 1, N₇ = p^{(n+1)(k₀−1)}
    let (m_prime, k0, n7) = match ex(&n6) {
        Some(n6) => {
            let mp = (&n4 + n6) * params.s_alg * p + p;
            let k0 = (BigUint::from(2u32) * (&mp + 1u32) * p) / (p - 1) + 1u32;
            let n7 = Magnitude::pow(p, Magnitude::Exact((&n + 1u32) * (&k0 - 1u32)));
            (Magnitude::Exact(mp), Magnitude::Exact(k0), n7)
        }
        None => (n6.clone(), n6.clone(), Magnitude::pow(p, n6.clone())),
    };
    // N₈ = N₇^{N₀}, N₉ = 2^{N₈}
    let n8 = match &n7 {
        Magnitude::Exact(x) if x.bits() <= 64 => Magnitude::pow(x.to_u64().unwrap(), Magnitude::Exact(n0.clone())),
        Magnitude::Pow { base, exp } => match exp.as_ref() {
            Magnitude::Exact(e) => Magnitude::pow(*base, Magnitude::Exact(e * &n0)),
            other => Magnitude::Pow { base: *base, exp: Box::new(other.clone()) },
        },
        Magnitude::Exact(x) => {
            // N₇ < 2^bits, so 2^(bits·N₀) is an upper bound
            let bits = x.bits();
            Magnitude::Pow { base: 2, exp: Box::new(Magnitude::Exact(BigUint::from(bits) * &n0)) }
        }
    };
    let n9 = Magnitude::pow(2, n8.clone());
    BoundReport {
        params: params.clone(),
        ore_degree: Magnitude::Exact(ore),
        m: Magnitude::Exact(m),
        n0: Magnitude::Exact(n0),
        n1,
        n3: Magnitude::Exact(n3),
        n4: Magnitude::Exact(n4),
        n: Magnitude::Exact(n),
        n6,
        m_prime,
        k0,
        n7,
        n8,
        n9,
    }
}

impl BoundReport {
    pub fn rows(&self) -> Vec<(&'static str, &Magnitude)> {
        vec![
            ("Hsp^s", &self.ore_degree),
            ("M", &self.m),
            ("N0", &self.n0),
            ("N1", &self.n1),
            ("N3", &self.n3),
            ("N4", &self.n4),
            ("n", &self.n),
            ("N6", &self.n6),
            ("M'", &self.m_prime),
            ("k0", &self.k0),
            ("N7", &self.n7),
            ("N8", &self.n8),
            ("N9", &self.n9),
        ]
    }

    pub fn table(&self) -> String {
        self.rows().iter().map(|(k, v)| format!("{k:<6} {v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_formulas() {
        assert_eq!(ore_degree_bound(1, 2, 2), BigUint::from(8u32));
        assert_eq!(ore_degree_bound(3, 2, 2), BigUint::from(24u32));
        assert_eq!(ore_degree_bound(1, 1, 3), BigUint::from(3u32));
        assert_eq!(automata_count_bound(1, 2), BigUint::from(2u32));
        assert_eq!(automata_count_bound(2, 2), BigUint::from(128u32));
        assert_eq!(element_bounds(3, 2), (BigUint::from(2u32), BigUint::from(2u32)));
        assert_eq!(element_bounds(4, 3).0, BigUint::from(9u32));
        assert_eq!(element_bounds(1, 5).0, BigUint::one());
    }

    #[test]
    fn chain_small_case() {
        let r = complexity_bound_chain(&ChainParams::new(2, 1, 1, 2));
        // M = 1·2·4·(4−1), N₀ = 3·C(25, 1)
        assert_eq!(r.m, Magnitude::from_u64(24));
        assert_eq!(r.n0, Magnitude::from_u64(75));
        assert!(matches!(r.n9, Magnitude::Pow { base: 2, .. }));
        assert!(r.n9 > Magnitude::from_u64(1));
        assert!(r.n9 > r.n8 && r.n8 > r.n7);
    }

    #[test]
    fn n1_of_small_n0() {
        assert_eq!(Magnitude::pow(2, Magnitude::from_u64(1 + 2)), Magnitude::from_u64(8));
    }

    #[test]
    fn monotone_in_h_and_s() {
        for p in [2u32, 3] {
            for s in 1..4u32 {
                for h in 1..4u64 {
                    let a = complexity_bound_chain(&ChainParams::new(p, 1, h, s));
                    let b = complexity_bound_chain(&ChainParams::new(p, 1, h + 1, s));
                    let c = complexity_bound_chain(&ChainParams::new(p, 1, h, s + 1));
                    for (x, y) in a.rows().iter().zip(b.rows()) {
                        assert!(x.1 <= y.1, "{} not monotone in H", x.0);
                    }
                    for (x, y) in a.rows().iter().zip(c.rows()) {
                        assert!(x.1 <= y.1, "{} not monotone in s", x.0);
                    }
                }
            }
        }
    }
}
