//! Algorithms specific to polynomials over F_{p^e}: exact division, gcd,
//! Frobenius, and residue splitting (the monomial form of Cartier operators).

use super::gf::{BaseField, BaseScalar};
use super::poly::{Exps, Mono, Poly};
use rustc_hash::FxHashMap;

pub type MPoly = Poly<BaseScalar>;

/// Leading coefficient (graded-lex).
pub fn lc(a: &MPoly) -> BaseScalar {
    a.lt().map(|(_, c)| *c).unwrap_or(BaseScalar::ZERO)
}

pub fn make_monic(a: &MPoly, f: &BaseField) -> MPoly {
    match a.lt() {
        None => a.clone(),
        Some((_, c)) if *c == BaseScalar::ONE => a.clone(),
        Some((_, c)) => a.scale(&f.inv(*c), f),
    }
}

pub fn is_constant(a: &MPoly) -> bool {
    a.lt().map(|(m, _)| m.is_one()).unwrap_or(true)
}

/// Returns `Some(a / b)` when `b` divides `a` exactly.
pub fn div_exact(a: &MPoly, b: &MPoly, f: &BaseField) -> Option<MPoly> {
    assert!(!b.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return Some(MPoly::zero(a.nvars()));
    }
    let (mb, cb) = b.lt().unwrap().clone();
    let inv = f.inv(cb);
    if b.len() == 1 {
        let mut terms = Vec::with_capacity(a.len());
        for (m, c) in a.terms() {
            if !mb.divides(m) {
                return None;
            }
            terms.push((mb.div_into(m), f.mul(*c, inv)));
        }
        return Some(MPoly::from_sorted_unchecked(a.nvars(), terms));
    }
    let mut r = a.clone();
    let mut q: Vec<(Mono, BaseScalar)> = Vec::new();
    while let Some((m, c)) = r.lt().cloned() {
        if !mb.divides(&m) || m.deg() < mb.deg() {
            return None;
        }
        let tm = mb.div_into(&m);
        let tc = f.mul(c, inv);
        let sub = b.mul_mono(&tm).scale(&tc, f);
        r = r.sub(&sub, f);
        q.push((tm, tc));
    }
    Some(MPoly::from_terms(a.nvars(), q, f))
}

/// Splits `a` as a polynomial in variable `v`: entry k is the coefficient of v^k.
pub fn to_univariate(a: &MPoly, v: usize, f: &BaseField) -> Vec<MPoly> {
    let deg = a.degree_in(v).unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<(Mono, BaseScalar)>> = vec![Vec::new(); deg + 1];
    for (m, c) in a.terms() {
        let k = m.get(v) as usize;
        buckets[k].push((m.with_exp(v, 0), *c));
    }
    buckets.into_iter().map(|t| MPoly::from_terms(a.nvars(), t, f)).collect()
}

pub fn from_univariate(coeffs: &[MPoly], v: usize, nvars: usize, f: &BaseField) -> MPoly {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        for (m, x) in c.terms() {
            terms.push((m.with_exp(v, m.get(v) + k as u32), *x));
        }
    }
    MPoly::from_terms(nvars, terms, f)
}

fn support_vars(a: &MPoly) -> Vec<bool> {
    let mut used = vec![false; a.nvars()];
    for (m, _) in a.terms() {
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                used[i] = true;
            }
        }
    }
    used
}

/// Dense univariate Euclid over F_q; polynomials given by coefficient vectors.
fn univariate_gcd_dense(mut a: Vec<BaseScalar>, mut b: Vec<BaseScalar>, f: &BaseField) -> Vec<BaseScalar> {
    fn trim(v: &mut Vec<BaseScalar>) {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let db = b.len() - 1;
        let inv = f.inv(b[db]);
        while a.len() > db {
            let lead = *a.last().unwrap();
            if !lead.is_zero() {
                let c = f.mul(lead, inv);
                let shift = a.len() - 1 - db;
                for (i, &bi) in b.iter().enumerate() {
                    a[shift + i] = f.sub(a[shift + i], f.mul(c, bi));
                }
            }
            a.pop();
        }
        trim(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = f.inv(l);
        for c in a.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    a
}

/// Monic gcd (graded-lex leading coefficient 1); gcd(0, 0) = 0.
pub fn gcd(a: &MPoly, b: &MPoly, f: &BaseField) -> MPoly {
    let n = a.nvars().max(b.nvars());
    if a.is_zero() {
        return make_monic(b, f);
    }
    if b.is_zero() {
        return make_monic(a, f);
    }
    if is_constant(a) || is_constant(b) {
        return MPoly::one(n, f);
    }
    if a.len() == 1 && b.len() == 1 {
        let (ma, mb) = (&a.terms()[0].0, &b.terms()[0].0);
        let exps: Exps = ma.exps().iter().zip(mb.exps()).map(|(x, y)| *x.min(y)).collect();
        return MPoly::monomial(Mono::new(exps), BaseScalar::ONE, f);
    }
    let ua = support_vars(a);
    let ub = support_vars(b);
    let used: Vec<bool> = ua.iter().zip(&ub).map(|(x, y)| *x || *y).collect();
    let nused = used.iter().filter(|x| **x).count();
    let v = used.iter().position(|x| *x).unwrap();
    if nused == 1 {
        let da = dense_in(a, v, f);
        let db = dense_in(b, v, f);
        let g = univariate_gcd_dense(da, db, f);
        let terms = g.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (Mono::one(n).with_exp(v, k as u32), *c)).collect();
        return MPoly::from_terms(n, terms, f);
    }
    if !ua[v] {
        return gcd(&content_in(b, v, f), a, f);
    }
    if !ub[v] {
        return gcd(&content_in(a, v, f), b, f);
    }
    let ca = to_univariate(a, v, f);
    let cb = to_univariate(b, v, f);
    let conta = content_list(&ca, f);
    let contb = content_list(&cb, f);
    let c = gcd(&conta, &contb, f);
    let mut pa: Vec<MPoly> = ca.iter().map(|x| div_exact(x, &conta, f).unwrap()).collect();
    let mut pb: Vec<MPoly> = cb.iter().map(|x| div_exact(x, &contb, f).unwrap()).collect();
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = loop {
        if pb.len() == 1 {
            break vec![MPoly::one(n, f)];
        }
        let r = pseudo_rem(&pa, &pb, f);
        if r.is_empty() {
            break pb;
        }
        if r.len() == 1 {
            break vec![MPoly::one(n, f)];
        }
        let cr = content_list(&r, f);
        let r: Vec<MPoly> = r.iter().map(|x| div_exact(x, &cr, f).unwrap()).collect();
        pa = pb;
        pb = r;
    };
    let cg = content_list(&g, f);
    let g: Vec<MPoly> = g.iter().map(|x| div_exact(x, &cg, f).unwrap()).collect();
    let g = from_univariate(&g, v, n, f);
    make_monic(&g.mul(&c, f), f)
}

fn dense_in(a: &MPoly, v: usize, f: &BaseField) -> Vec<BaseScalar> {
    let deg = a.degree_in(v).unwrap_or(0) as usize;
    let mut out = vec![BaseScalar::ZERO; deg + 1];
    for (m, c) in a.terms() {
        let k = m.get(v) as usize;
        out[k] = f.add(out[k], *c);
    }
    out
}

/// gcd of the coefficients of `a` viewed as a polynomial in variable `v`.
pub fn content_in(a: &MPoly, v: usize, f: &BaseField) -> MPoly {
    content_list(&to_univariate(a, v, f), f)
}

pub fn content_list(list: &[MPoly], f: &BaseField) -> MPoly {
    let mut g = MPoly::zero(list.first().map(|x| x.nvars()).unwrap_or(0));
    for x in list {
        if x.is_zero() {
            continue;
        }
        g = gcd(&g, x, f);
        if is_constant(&g) {
            break;
        }
    }
    g
}

/// Pseudo-remainder of dense univariate polynomials with polynomial coefficients.
fn pseudo_rem(a: &[MPoly], b: &[MPoly], f: &BaseField) -> Vec<MPoly> {
    let mut r: Vec<MPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        if lr.is_zero() {
            r.pop();
            continue;
        }
        for x in r.iter_mut() {
            *x = x.mul(lb, f);
        }
        for (i, bi) in b.iter().enumerate() {
            let t = bi.mul(&lr, f);
            r[shift + i] = r[shift + i].sub(&t, f);
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
    }
    while r.last().map(|x| x.is_zero()).unwrap_or(false) {
        r.pop();
    }
    r
}

/// a^p: exponents times p, coefficients raised to the p-th power.
pub fn frobenius(a: &MPoly, f: &BaseField) -> MPoly {
    let p = f.p();
    let terms = a.terms().iter().map(|(m, c)| (m.pow(p), f.frobenius(*c))).collect();
    MPoly::from_sorted_unchecked(a.nvars(), terms)
}

/// Splits `a` into components by exponent residue modulo p in every variable:
/// `a = Σ_r x^r · B_r^p`, returning the map r ↦ B_r. This is the combined
/// Cartier/π operator on F_q[x] with the monomial p-basis.
pub fn residue_split(a: &MPoly, f: &BaseField) -> FxHashMap<Exps, MPoly> {
    let p = f.p() as u16;
    let n = a.nvars();
    let mut buckets: FxHashMap<Exps, Vec<(Mono, BaseScalar)>> = FxHashMap::default();
    for (m, c) in a.terms() {
        let res: Exps = m.exps().iter().map(|e| e % p).collect();
        let quo: Exps = m.exps().iter().map(|e| e / p).collect();
        buckets.entry(res).or_default().push((Mono::new(quo), f.frobenius_inverse(*c)));
    }
    buckets.into_iter().map(|(k, t)| (k, MPoly::from_terms(n, t, f))).collect()
}

/// The single component of [`residue_split`] at residue `r`.
pub fn residue_component(a: &MPoly, r: &[u16], f: &BaseField) -> MPoly {
    let p = f.p() as u16;
    let terms: Vec<(Mono, BaseScalar)> = a
        .terms()
        .iter()
        .filter(|(m, _)| m.exps().iter().zip(r).all(|(e, ri)| e % p == *ri))
        .map(|(m, c)| (Mono::new(m.exps().iter().map(|e| e / p).collect()), f.frobenius_inverse(*c)))
        .collect();
    // dividing exponents by p and subtracting a fixed residue preserves order
    MPoly::from_sorted_unchecked(a.nvars(), terms)
}

pub fn eval(a: &MPoly, point: &[BaseScalar], f: &BaseField) -> BaseScalar {
    let mut acc = BaseScalar::ZERO;
    for (m, c) in a.terms() {
        let mut t = *c;
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = f.mul(t, f.pow(point[i], e as u64));
            }
        }
        acc = f.add(acc, t);
    }
    acc
}

/// Embeds a polynomial into a ring with more variables, placing its variables at `offset`.
pub fn embed(a: &MPoly, nvars: usize, offset: usize) -> MPoly {
    let terms = a
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e: Exps = smallvec::smallvec![0; nvars];
            for (i, &x) in m.exps().iter().enumerate() {
                e[offset + i] = x;
            }
            (Mono::new(e), *c)
        })
        .collect();
    // the embedding preserves graded-lex order
    MPoly::from_sorted_unchecked(nvars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_uni(coeffs: &[u32], f: &BaseField) -> MPoly {
        let terms = coeffs.iter().enumerate().map(|(k, &c)| (Mono::from_slice(&[k as u32]), BaseScalar(c))).collect();
        MPoly::from_terms(1, terms, f)
    }

    #[test]
    fn exact_division_roundtrip() {
        let f = BaseField::prime(3).unwrap();
        let x = MPoly::var(0, 2, &f);
        let y = MPoly::var(1, 2, &f);
        let a = x.add(&y, &f).add(&MPoly::one(2, &f), &f);
        let b = x.sub(&y.pow(2, &f), &f);
        let prod = a.mul(&b, &f);
        assert_eq!(div_exact(&prod, &b, &f).unwrap(), a);
        assert!(div_exact(&prod.add(&MPoly::one(2, &f), &f), &b, &f).is_none());
    }

    #[test]
    fn univariate_gcd() {
        let f = BaseField::prime(2).unwrap();
        // (1+x)^3 and (1+x)(x^2+x+1)
        let a = parse_uni(&[1, 1], &f).pow(3, &f);
        let b = parse_uni(&[1, 1], &f).mul(&parse_uni(&[1, 1, 1], &f), &f);
        assert_eq!(gcd(&a, &b, &f), parse_uni(&[1, 1], &f));
    }

    #[test]
    fn multivariate_gcd_recovers_common_factor() {
        let f = BaseField::prime(3).unwrap();
        let n = 3;
        let x = MPoly::var(0, n, &f);
        let y = MPoly::var(1, n, &f);
        let z = MPoly::var(2, n, &f);
        let one = MPoly::one(n, &f);
        let g = x.mul(&y, &f).add(&z, &f).add(&one, &f);
        let a = g.mul(&x.add(&z.pow(2, &f), &f), &f);
        let b = g.mul(&y.sub(&one, &f), &f).mul(&g, &f);
        assert_eq!(gcd(&a, &b, &f), make_monic(&g, &f));
        let c = x.add(&y, &f);
        assert!(is_constant(&gcd(&a, &c, &f)));
    }

    #[test]
    fn residue_split_reassembles() {
        let f = BaseField::new(3, 2, None).unwrap();
        let x = MPoly::var(0, 2, &f);
        let y = MPoly::var(1, 2, &f);
        let a = x.pow(5, &f).add(&x.mul(&y.pow(4, &f), &f).scale(&BaseScalar(4), &f), &f).add(&MPoly::one(2, &f), &f);
        let parts = residue_split(&a, &f);
        let mut sum = MPoly::zero(2);
        for (r, b) in &parts {
            let m = Mono::new(r.clone());
            sum = sum.add(&frobenius(b, &f).mul_mono(&m), &f);
            assert_eq!(&residue_component(&a, r, &f), b);
        }
        assert_eq!(sum, a);
    }
}
