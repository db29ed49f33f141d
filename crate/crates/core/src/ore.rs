//! Homogeneous Frobenius relations Σ Q_i f^{p^i} = 0 with Q₀ ≠ 0.

use crate::coeff_field::{mpoly, CoeffField, MPoly, Ring};
use crate::error::{Error, Result};
use crate::polyseries::{self, AlgebraicInput, InputKind, Mixed, SeriesTrunc, TPoly};

/// A relation Σ Q_i f^{p^i} = 0 stored in the cleared ring F_q[t, u].
#[derive(Clone, Debug, PartialEq)]
pub struct OreRelation {
    pub d: usize,
    /// Q₀..Q_s; Q₀ ≠ 0 and Q_s ≠ 0.
    pub q: Vec<MPoly>,
}

impl OreRelation {
    pub fn new(d: usize, mut q: Vec<MPoly>) -> Result<Self> {
        while q.len() > 1 && q.last().is_some_and(|x| x.is_zero()) {
            q.pop();
        }
        if q.first().is_none_or(|x| x.is_zero()) {
            return Err(Error::Parameter("Ore relation needs Q0 ≠ 0".into()));
        }
        Ok(OreRelation { d, q })
    }

    /// Frobenius order; s = 0 means Q₀·f = 0, so f = 0.
    pub fn s(&self) -> usize {
        self.q.len() - 1
    }

    /// M: the largest t-degree among the Q_i.
    pub fn m(&self) -> u32 {
        self.q.iter().filter_map(|x| x.partial_degree(0..self.d)).max().unwrap_or(0)
    }

    pub fn q_tpoly(&self, k: &CoeffField) -> Vec<TPoly> {
        let mx = Mixed::new(k, self.d);
        self.q.iter().map(|x| mx.from_mixed(x)).collect()
    }

    /// Coefficients Q'_i = −Q_i·Q₀^{p^i−2}, i = 1..s, of the relation for f/Q₀.
    pub fn rewrite(&self, k: &CoeffField) -> Vec<MPoly> {
        let f = k.base();
        let p = k.p();
        (1..=self.s())
            .map(|i| {
                let e = p.pow(i as u32) - 2;
                self.q[i].mul(&self.q[0].pow(e, f), f).neg(f)
            })
            .collect()
    }

    /// Checks Σ Q_i f^{p^i} ≡ 0 through total degree `order`.
    pub fn verify(&self, f: &SeriesTrunc, order: u32, k: &CoeffField) -> Result<bool> {
        if f.order < order {
            return Err(Error::InsufficientPrecision { needed: order, have: f.order });
        }
        let q = self.q_tpoly(k);
        let mut acc = TPoly::zero(self.d);
        let mut fp = f.poly.truncate(order);
        for qi in &q {
            acc = acc.add(&qi.mul_trunc(&fp, order, k), k);
            fp = polyseries::frobenius_power(&fp, 1, k).truncate(order);
        }
        Ok(acc.is_zero())
    }

    /// Text block `ore p=.. s=.. d=..` followed by one `Q<i> = ...` line each.
    pub fn to_text(&self, k: &CoeffField) -> String {
        let names = polyseries::t_names(self.d);
        let mut out = format!("ore p={} s={} d={}\n", k.p(), self.s(), self.d);
        for (i, q) in self.q_tpoly(k).iter().enumerate() {
            out.push_str(&format!("Q{} = {}\n", i, polyseries::format_tpoly(q, k, &names)));
        }
        out
    }
}

/// Characteristic polynomial det(xI − A), coefficients from x^n down to x^0,
/// by Berkowitz's division-free recursion.
pub fn charpoly<R: Ring>(a: &[Vec<R::Elem>], r: &R) -> Vec<R::Elem> {
    let n = a.len();
    if n == 0 {
        return vec![r.one()];
    }
    let sub: Vec<Vec<R::Elem>> = a[1..].iter().map(|row| row[1..].to_vec()).collect();
    let inner = charpoly(&sub, r);
    // Toeplitz column: 1, −a₀₀, −R·C, −R·A₁·C, …
    let row0: Vec<R::Elem> = a[0][1..].to_vec();
    let mut col: Vec<R::Elem> = a[1..].iter().map(|row| row[0].clone()).collect();
    let mut t = vec![r.one(), r.neg(&a[0][0])];
    for _ in 2..=n {
        let dot = row0.iter().zip(&col).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)));
        t.push(r.neg(&dot));
        col = sub.iter().map(|row| row.iter().zip(&col).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)))).collect();
    }
    (0..=n)
        .map(|i| {
            let mut acc = r.zero();
            for j in 0..n.min(i + 1) {
                if i - j < t.len() && j < inner.len() {
                    acc = r.add(&acc, &r.mul(&t[i - j], &inner[j]));
                }
            }
            acc
        })
        .collect()
}

pub fn det<R: Ring>(a: &[Vec<R::Elem>], r: &R) -> R::Elem {
    let cp = charpoly(a, r);
    let last = cp[a.len()].clone();
    if a.len() % 2 == 1 {
        r.neg(&last)
    } else {
        last
    }
}

/// Ring view of the cleared polynomial ring, for generic matrix code.
pub struct MPolyRing<'a> {
    pub field: &'a crate::coeff_field::BaseField,
    pub nvars: usize,
}

impl Ring for MPolyRing<'_> {
    type Elem = MPoly;
    fn zero(&self) -> MPoly {
        MPoly::zero(self.nvars)
    }
    fn one(&self) -> MPoly {
        MPoly::one(self.nvars, self.field)
    }
    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.add(b, self.field)
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        a.neg(self.field)
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.mul(b, self.field)
    }
    fn from_int(&self, n: i64) -> MPoly {
        MPoly::constant(self.field.from_int(n), self.nvars, self.field)
    }
}

/// Fraction-free elimination on the columns of `cols` (each a vector of
/// rows); returns the lexicographically first maximal independent column
/// set and a matching set of independent rows.
fn independent_sets(cols: &[Vec<MPoly>], ring: &MPolyRing) -> (Vec<usize>, Vec<usize>) {
    let f = ring.field;
    let nrows = cols.first().map_or(0, |c| c.len());
    // work on rows × cols
    let mut m: Vec<Vec<MPoly>> = (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut row_ids: Vec<usize> = (0..nrows).collect();
    let mut prev = ring.one();
    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..cols.len() {
        if rank == nrows {
            break;
        }
        let Some(pr) = (rank..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, pr);
        row_ids.swap(rank, pr);
        for i in rank + 1..nrows {
            for j in c + 1..cols.len() {
                let v = m[rank][c].mul(&m[i][j], f).sub(&m[i][c].mul(&m[rank][j], f), f);
                m[i][j] = mpoly::div_exact(&v, &prev, f).expect("Bareiss division is exact");
            }
            m[i][c] = ring.zero();
        }
        prev = m[rank][c].clone();
        pivot_cols.push(c);
        rank += 1;
    }
    let mut rows: Vec<usize> = row_ids[..rank].to_vec();
    rows.sort_unstable();
    (pivot_cols, rows)
}

/// Given s+1 vectors of length s over F_q[t, u], returns Q₀..Q_s, not all
/// zero, with Σ Q_i V_i = 0 and deg Q_i ≤ s·max deg(V).
pub fn find_linear_dependency(v: &[Vec<MPoly>], k: &CoeffField, nvars: usize) -> Result<Vec<MPoly>> {
    let ring = MPolyRing { field: k.base(), nvars };
    if v.is_empty() || v.iter().any(|x| x.len() + 1 != v.len()) {
        return Err(Error::Parameter("need s+1 vectors of length s".into()));
    }
    let (ind, rows) = independent_sets(v, &ring);
    let c = (0..v.len()).find(|i| !ind.contains(i)).expect("s+1 vectors in dimension s are dependent");
    let mut q = vec![ring.zero(); v.len()];
    let minor = |replace: Option<(usize, &Vec<MPoly>)>| -> MPoly {
        let mat: Vec<Vec<MPoly>> = rows
            .iter()
            .map(|&r| {
                ind.iter()
                    .map(|&col| match replace {
                        Some((rc, vec)) if rc == col => vec[r].clone(),
                        _ => v[col][r].clone(),
                    })
                    .collect()
            })
            .collect();
        det(&mat, &ring)
    };
    q[c] = minor(None);
    let neg_c: Vec<MPoly> = v[c].iter().map(|x| x.neg(k.base())).collect();
    for &i in &ind {
        q[i] = minor(Some((i, &neg_c)));
    }
    Ok(q)
}

/// Σ Q_i f^{p^i} = 0 for f annihilated by P = Σ P_i X^i (cleared, P_s ≠ 0).
pub fn effective_ore(p: &[MPoly], d: usize, k: &CoeffField) -> Result<OreRelation> {
    let f = k.base();
    let s = p.len() - 1;
    if s == 0 || p[s].is_zero() {
        return Err(Error::Parameter("annihilator must have degree ≥ 1".into()));
    }
    let nv = p[s].nvars();
    let pk = k.p() as usize;
    let top = pk.pow(s as u32);
    // w_n = P_s^n · (coordinates of f^n in 1, f, …, f^{s−1})
    let mut w: Vec<MPoly> = (0..s).map(|i| if i == 0 { MPoly::one(nv, f) } else { MPoly::zero(nv) }).collect();
    let mut snapshots: Vec<Vec<MPoly>> = Vec::with_capacity(s + 1);
    let mut next_pow = 1usize;
    for n in 0..=top {
        if n == next_pow {
            snapshots.push(w.clone());
            next_pow *= pk;
        }
        if n == top {
            break;
        }
        let last = w[s - 1].clone();
        let mut nw = Vec::with_capacity(s);
        for i in 0..s {
            let shifted = if i == 0 { MPoly::zero(nv) } else { p[s].mul(&w[i - 1], f) };
            nw.push(shifted.sub(&p[i].mul(&last, f), f));
        }
        w = nw;
    }
    let vecs: Vec<Vec<MPoly>> = snapshots
        .iter()
        .enumerate()
        .map(|(j, wj)| {
            let scale = p[s].pow((top - pk.pow(j as u32)) as u32, f);
            wj.iter().map(|x| x.mul(&scale, f)).collect()
        })
        .collect();
    let mut q = find_linear_dependency(&vecs, k, nv)?;
    reduce_content(&mut q, &p[s], k);
    let mx = Mixed::new(k, d);
    while q[0].is_zero() {
        let lo = q.iter().position(|x| !x.is_zero()).expect("dependency is nontrivial");
        let (j, l) = first_nonvanishing_cartier(&q[lo], &mx);
        q = q[1..].iter().map(|x| mx.cartier(x, &j, l)).collect();
    }
    OreRelation::new(d, q)
}

fn first_nonvanishing_cartier(a: &MPoly, mx: &Mixed) -> (Vec<u16>, usize) {
    for j in polyseries::digit_tuples(mx.k.p(), mx.d) {
        let j16: Vec<u16> = j.iter().map(|&x| x as u16).collect();
        for l in 0..mx.k.pbasis().len() {
            if !mx.cartier(a, &j16, l).is_zero() {
                return (j16, l);
            }
        }
    }
    unreachable!("a nonzero polynomial has a nonzero Cartier component")
}

/// Divides the relation by common factors: powers of `hint`, then the full
/// gcd when the ring is small enough for it to be cheap.
fn reduce_content(q: &mut [MPoly], hint: &MPoly, k: &CoeffField) {
    let f = k.base();
    if !mpoly::is_constant(hint) {
        loop {
            let divided: Option<Vec<MPoly>> = q.iter().map(|x| mpoly::div_exact(x, hint, f)).collect();
            match divided {
                Some(v) => q.clone_from_slice(&v),
                None => break,
            }
        }
    }
    if hint.nvars() <= 2 {
        let nz: Vec<MPoly> = q.iter().filter(|x| !x.is_zero()).cloned().collect();
        let g = nz.iter().skip(1).fold(nz[0].clone(), |g, x| mpoly::gcd(&g, x, f));
        if !mpoly::is_constant(&g) {
            for x in q.iter_mut() {
                *x = mpoly::div_exact(x, &g, f).expect("gcd divides");
            }
        }
    }
}

/// The relation (A^{p−1}, −B^{p−1}) satisfied by A/B.
pub fn ore_from_rational(a: &MPoly, b: &MPoly, d: usize, k: &CoeffField) -> Result<OreRelation> {
    if a.is_zero() {
        return Err(Error::Parameter("zero series has no Ore relation with Q0 ≠ 0".into()));
    }
    let f = k.base();
    let e = k.p() - 1;
    OreRelation::new(d, vec![a.pow(e, f), b.pow(e, f).neg(f)])
}

/// The Ore relation of any input (cleared), with the degree data used for bounds.
pub fn relation_for(input: &AlgebraicInput) -> Result<OreRelation> {
    let k = &*input.field;
    let mx = Mixed::new(k, input.d);
    match &input.kind {
        InputKind::Rational { a, b } => {
            let v = mx.clear_all(&[a.clone(), b.clone()]);
            ore_from_rational(&v[0], &v[1], input.d, k)
        }
        InputKind::Annihilator { p, .. } => effective_ore(&mx.clear_all(p), input.d, k),
        InputKind::Ore { rel, .. } => Ok(rel.clone()),
    }
}
