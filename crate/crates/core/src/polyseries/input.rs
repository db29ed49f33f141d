use std::sync::Mutex;

use super::{div_exact, homogeneous, valuation, Mixed, SeriesTrunc, TPoly};
use crate::coeff_field::{mpoly, CoeffField, FieldElement, FieldRef, Ring};
use crate::error::{Error, Result};
use crate::ore::OreRelation;

/// How the series f is presented.
#[derive(Clone, Debug)]
pub enum InputKind {
    /// f = A / B.
    Rational { a: TPoly, b: TPoly },
    /// P(f) = 0 with P = Σ P_i X^i; `seed` selects the root.
    Annihilator { p: Vec<TPoly>, seed: SeriesTrunc },
    /// Σ Q_i f^{p^i} = 0; `seed` selects the root.
    Ore { rel: OreRelation, seed: SeriesTrunc },
}

#[derive(Clone, Debug)]
pub struct AlgebraicInput {
    pub field: FieldRef,
    pub d: usize,
    pub kind: InputKind,
}

impl AlgebraicInput {
    /// Loads A/B. When B(0) = 0 the fraction is reduced and must then have a
    /// unit denominator, which certifies that A/B is a power series.
    pub fn rational(field: FieldRef, a: TPoly, b: TPoly) -> Result<Self> {
        let d = b.nvars();
        if b.is_zero() {
            return Err(Error::Parameter("zero denominator".into()));
        }
        let k = &*field;
        let (a, b) = if b.constant_term(k).is_zero() && !a.is_zero() {
            let mx = Mixed::new(k, d);
            let f = k.base();
            let (an, ad) = mx.clear(&a);
            let (bn, bd) = mx.clear(&b);
            let an = an.mul(&mx.embed_u(&bd), f);
            let bn = bn.mul(&mx.embed_u(&ad), f);
            let g = mpoly::gcd(&an, &bn, f);
            let an = mpoly::div_exact(&an, &g, f).expect("gcd divides");
            let bn = mpoly::div_exact(&bn, &g, f).expect("gcd divides");
            if mx.at_zero(&bn).is_zero() {
                return Err(Error::Inconsistent("A/B is not a power series (reduced denominator vanishes at t = 0)".into()));
            }
            (mx.from_mixed(&an), mx.from_mixed(&bn))
        } else {
            (a, b)
        };
        Ok(AlgebraicInput { field, d, kind: InputKind::Rational { a, b } })
    }

    /// Loads an annihilator with a seed; checks consistency and branch isolation.
    pub fn annihilator(field: FieldRef, p: Vec<TPoly>, seed: SeriesTrunc) -> Result<Self> {
        if p.len() < 2 || p.last().unwrap().is_zero() {
            return Err(Error::Parameter("annihilator must have degree ≥ 1 in X".into()));
        }
        let d = seed.d();
        let input = AlgebraicInput { field, d, kind: InputKind::Annihilator { p, seed } };
        if let InputKind::Annihilator { p, seed } = &input.kind {
            annihilator_lowest_derivative(p, seed, &input.field)?;
        }
        Ok(input)
    }

    pub fn ore(field: FieldRef, rel: OreRelation, seed: SeriesTrunc) -> Result<Self> {
        let d = rel.d;
        let input = AlgebraicInput { field, d, kind: InputKind::Ore { rel, seed } };
        input.expand(input.seed_order().unwrap_or(0) + 1)?;
        Ok(input)
    }

    fn seed_order(&self) -> Option<u32> {
        match &self.kind {
            InputKind::Rational { .. } => None,
            InputKind::Annihilator { seed, .. } | InputKind::Ore { seed, .. } => Some(seed.order),
        }
    }

    /// Exact coefficients through total degree `order`.
    pub fn expand(&self, order: u32) -> Result<SeriesTrunc> {
        let k = &*self.field;
        match &self.kind {
            InputKind::Rational { a, b } => expand_rational(a, b, order, k),
            InputKind::Annihilator { p, seed } => expand_annihilator(p, seed, order, k),
            InputKind::Ore { rel, seed } => {
                let mx = Mixed::new(k, self.d);
                let q: Vec<TPoly> = rel.q.iter().map(|x| mx.from_mixed(x)).collect();
                expand_ore(&q, seed, order, k)
            }
        }
    }

    /// Height of an annihilator: the maximal t-degree among its coefficients.
    pub fn height(&self) -> Option<u32> {
        match &self.kind {
            InputKind::Annihilator { p, .. } => Some(p.iter().filter_map(|c| c.total_degree()).max().unwrap_or(0)),
            _ => None,
        }
    }
}

fn expand_rational(a: &TPoly, b: &TPoly, order: u32, k: &CoeffField) -> Result<SeriesTrunc> {
    let d = b.nvars();
    let b0 = b.constant_term(k);
    let inv0 = k.inv_elem(&b0).map_err(|_| Error::Inconsistent("denominator vanishes at t = 0".into()))?;
    let bparts: Vec<TPoly> = (0..=order).map(|i| homogeneous(b, i)).collect();
    let mut parts: Vec<TPoly> = Vec::with_capacity(order as usize + 1);
    for n in 0..=order {
        let mut acc = homogeneous(a, n);
        for i in 1..=n {
            let bi = &bparts[i as usize];
            if !bi.is_zero() {
                acc = acc.sub(&bi.mul(&parts[(n - i) as usize], k), k);
            }
        }
        parts.push(acc.scale(&inv0, k));
    }
    let poly = parts.into_iter().fold(TPoly::zero(d), |x, y| x.add(&y, k));
    Ok(SeriesTrunc { poly, order })
}

/// Σ P_i f^i through total degree `n`.
fn eval_x(p: &[TPoly], f: &TPoly, n: u32, k: &CoeffField) -> TPoly {
    let mut acc = p.last().unwrap().truncate(n);
    for c in p.iter().rev().skip(1) {
        acc = acc.mul_trunc(f, n, k).add(&c.truncate(n), k);
    }
    acc
}

fn derivative_x(p: &[TPoly], k: &CoeffField) -> Vec<TPoly> {
    p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&k.from_int(i as i64), k)).collect()
}

/// Returns the lowest homogeneous part L of P'(f) and its degree v, after
/// checking the seed against P.
fn annihilator_lowest_derivative(p: &[TPoly], seed: &SeriesTrunc, k: &CoeffField) -> Result<(TPoly, u32)> {
    let s = seed.order;
    if !eval_x(p, &seed.poly, s, k).is_zero() {
        return Err(Error::Inconsistent(format!("P(seed) does not vanish through degree {s}")));
    }
    let dp = derivative_x(p, k);
    let dv = if dp.iter().all(|c| c.is_zero()) { TPoly::zero(seed.d()) } else { eval_x(&dp, &seed.poly, s, k) };
    let Some(v) = valuation(&dv) else {
        return Err(Error::Ambiguity { degree: s + 1 });
    };
    Ok((homogeneous(&dv, v), v))
}

fn expand_annihilator(p: &[TPoly], seed: &SeriesTrunc, order: u32, k: &CoeffField) -> Result<SeriesTrunc> {
    if order <= seed.order {
        return Ok(SeriesTrunc::new(seed.poly.clone(), order));
    }
    let (l, v) = annihilator_lowest_derivative(p, seed, k)?;
    if v == 0 {
        return newton(p, seed, order, k);
    }
    let mut f = seed.poly.clone();
    for n in seed.order + 1..=order {
        let r = eval_x(p, &f, n + v, k);
        solve_step(&mut f, &r, &l, n, v, k)?;
    }
    Ok(SeriesTrunc { poly: f, order })
}

/// Given the residual R of the current approximation (exact through degree
/// n − 1), fixes the degree-n part of f from L·f_n = −R_{n+v}.
fn solve_step(f: &mut TPoly, r: &TPoly, l: &TPoly, n: u32, v: u32, k: &CoeffField) -> Result<()> {
    if let Some(w) = valuation(r) {
        if w < n + v {
            return Err(Error::Inconsistent(format!("no power-series root: residual of degree {w} cannot be cancelled")));
        }
    }
    let rhs = homogeneous(r, n + v).neg(k);
    let fnew = div_exact(&rhs, l, k)
        .ok_or_else(|| Error::Inconsistent(format!("no power-series root: degree {n} coefficient equation has no solution")))?;
    *f = f.add(&fnew, k);
    Ok(())
}

fn newton(p: &[TPoly], seed: &SeriesTrunc, order: u32, k: &CoeffField) -> Result<SeriesTrunc> {
    let dp = derivative_x(p, k);
    let mut f = seed.poly.clone();
    let mut prec = seed.order;
    while prec < order {
        let next = (2 * prec + 1).min(order);
        let num = SeriesTrunc { poly: eval_x(p, &f, next, k), order: next };
        let den = SeriesTrunc { poly: eval_x(&dp, &f, next, k), order: next };
        let corr = num.mul(&den.inverse(k)?, k);
        f = f.sub(&corr.poly, k).truncate(next);
        prec = next;
    }
    Ok(SeriesTrunc { poly: f, order })
}

fn expand_ore(q: &[TPoly], seed: &SeriesTrunc, order: u32, k: &CoeffField) -> Result<SeriesTrunc> {
    let Some(v) = valuation(&q[0]) else {
        return Err(Error::Parameter("Ore relation has Q0 = 0".into()));
    };
    let l = homogeneous(&q[0], v);
    let p = k.p();
    if (seed.order + 1) * (p - 1) <= v {
        return Err(Error::Ambiguity { degree: seed.order + 1 });
    }
    let residual = |f: &TPoly, n: u32| -> TPoly {
        let mut acc = TPoly::zero(f.nvars());
        let mut fp = f.truncate(n);
        for qi in q {
            acc = acc.add(&qi.mul_trunc(&fp, n, k), k);
            fp = super::frobenius_power(&fp, 1, k).truncate(n);
        }
        acc
    };
    let r0 = residual(&seed.poly, seed.order + v);
    if !r0.is_zero() {
        return Err(Error::Inconsistent(format!("seed violates the Ore relation below degree {}", seed.order + v + 1)));
    }
    let mut f = seed.poly.truncate(order);
    for n in seed.order + 1..=order {
        let r = residual(&f, n + v);
        solve_step(&mut f, &r, &l, n, v, k)?;
    }
    Ok(SeriesTrunc { poly: f, order: order.max(seed.order.min(order)) })
}

/// An input together with a memo of its expansion; `coeff_at` extends the
/// memo on demand.
#[derive(Debug)]
pub struct Series {
    pub input: AlgebraicInput,
    cache: Mutex<Option<SeriesTrunc>>,
}

impl Series {
    pub fn new(input: AlgebraicInput) -> Self {
        Series { input, cache: Mutex::new(None) }
    }

    pub fn field(&self) -> &CoeffField {
        &self.input.field
    }

    /// Expansion through at least `order`.
    pub fn expand(&self, order: u32) -> Result<SeriesTrunc> {
        let mut guard = self.cache.lock().expect("series memo poisoned");
        if let Some(s) = guard.as_ref() {
            if s.order >= order {
                return Ok(SeriesTrunc::new(s.poly.clone(), order));
            }
        }
        let target = guard.as_ref().map_or(order, |s| order.max(s.order * 2));
        let s = self.input.expand(target)?;
        *guard = Some(s.clone());
        Ok(SeriesTrunc::new(s.poly, order))
    }

    pub fn coeff_at(&self, n: &[u32]) -> Result<FieldElement> {
        let deg: u32 = n.iter().sum();
        {
            let guard = self.cache.lock().expect("series memo poisoned");
            if let Some(s) = guard.as_ref() {
                if s.order >= deg {
                    return s.coeff(n, self.field());
                }
            }
        }
        self.expand(deg)?.coeff(n, self.field())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_field::Mono;
    use crate::polyseries::tconst;
    use std::sync::Arc;

    fn tvar(k: &CoeffField) -> TPoly {
        TPoly::var(0, 1, k)
    }

    #[test]
    fn geometric_rational() {
        let k = Arc::new(CoeffField::prime(2).unwrap());
        let one = tconst(k.one(), 1, &k);
        let b = one.sub(&tvar(&k), &*k);
        let s = AlgebraicInput::rational(k.clone(), one, b).unwrap().expand(5).unwrap();
        let expect: Vec<_> = (0..=5u32).map(|n| (Mono::from_slice(&[n]), k.one())).collect();
        assert_eq!(s.poly, TPoly::from_terms(1, expect, &*k));
    }

    #[test]
    fn artin_schreier_root() {
        // f + f² = t has the root Σ t^{2^k}
        let k = Arc::new(CoeffField::prime(2).unwrap());
        let t = tvar(&k);
        let one = tconst(k.one(), 1, &k);
        let p = vec![t.clone(), one.clone(), one];
        let seed = SeriesTrunc::zero(1, 0);
        let s = AlgebraicInput::annihilator(k.clone(), p, seed).unwrap().expand(8).unwrap();
        let expect: Vec<_> = [1u32, 2, 4, 8].iter().map(|&n| (Mono::from_slice(&[n]), k.one())).collect();
        assert_eq!(s.poly, TPoly::from_terms(1, expect, &*k));
    }

    #[test]
    fn rational_with_removable_pole() {
        let k = Arc::new(CoeffField::prime(3).unwrap());
        let t = tvar(&k);
        let one = tconst(k.one(), 1, &k);
        let a = t.mul(&one.add(&t, &*k), &*k);
        let b = t.clone();
        let s = AlgebraicInput::rational(k.clone(), a, b).unwrap().expand(3).unwrap();
        assert_eq!(s.poly, one.add(&t, &*k));
        assert!(AlgebraicInput::rational(k.clone(), one, t).is_err());
    }

    #[test]
    fn ambiguous_seed_is_reported() {
        // X² − t² over F_3 has roots ±t; the seed a(0) = 0 does not pick one
        let k = Arc::new(CoeffField::prime(3).unwrap());
        let t = tvar(&k);
        let one = tconst(k.one(), 1, &k);
        let p = vec![t.mul(&t, &*k).neg(&*k), TPoly::zero(1), one];
        let err = AlgebraicInput::annihilator(k.clone(), p.clone(), SeriesTrunc::zero(1, 0)).unwrap_err();
        assert_eq!(err, Error::Ambiguity { degree: 1 });
        let seed = SeriesTrunc::new(t.clone(), 1);
        let s = AlgebraicInput::annihilator(k.clone(), p, seed).unwrap().expand(6).unwrap();
        assert_eq!(s.poly, t);
    }

    #[test]
    fn inconsistent_seed_is_reported() {
        let k = Arc::new(CoeffField::prime(2).unwrap());
        let t = tvar(&k);
        let one = tconst(k.one(), 1, &k);
        let p = vec![t, one.clone(), one.clone()];
        let seed = SeriesTrunc::new(one, 0);
        // 1 + 1 = 0 in F_2, so a(0) = 1 is consistent; a(1) must then be 1
        assert!(AlgebraicInput::annihilator(k.clone(), p.clone(), seed).is_ok());
        let bad = SeriesTrunc::new(TPoly::zero(1), 1);
        assert!(matches!(AlgebraicInput::annihilator(k, p, bad), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn memoized_coefficients() {
        let k = Arc::new(CoeffField::rational(2, &["u"]).unwrap());
        let u = k.var(0);
        let t = tvar(&k);
        let one = tconst(k.one(), 1, &k);
        let b = one.sub(&t.scale(&u, &*k), &*k);
        let s = Series::new(AlgebraicInput::rational(k.clone(), one, b).unwrap());
        assert_eq!(s.coeff_at(&[3]).unwrap(), k.pow_elem(&u, 3).unwrap());
        assert_eq!(s.coeff_at(&[1]).unwrap(), u);
    }
}
