use std::collections::BTreeMap;

use crate::automaton::BoolOp;
use crate::coeff_field::{CoeffField, FieldElement, Mono, Ring};
use crate::error::{Error, Result};
use crate::kernel::{build_zero_automaton_rational, BuildOptions};
use crate::polyseries::TPoly;
use crate::signed_groups::{group_pullback, GroupAutomaticSet, GroupKind, GroupSpec};

use super::assemble_patterns;

/// Row-major square matrix over K.
pub type Matrix = Vec<Vec<FieldElement>>;

/// Largest Kronecker power dimension N (the lift works with N×N matrices).
pub const KRONECKER_CEILING: usize = 64;

pub fn identity(k: &CoeffField, n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect()
}

pub fn mat_mul(k: &CoeffField, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let w = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..w)
                .map(|j| {
                    let mut acc = k.zero();
                    for (l, bl) in b.iter().enumerate() {
                        if !a[i][l].is_zero() && !bl[j].is_zero() {
                            acc = k.add(&acc, &k.mul(&a[i][l], &bl[j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Gauss–Jordan inverse; `None` for a singular matrix.
pub fn mat_inverse(k: &CoeffField, a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Vec<Vec<FieldElement>> = a.iter().zip(identity(k, n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = k.inv_elem(&m[col][col]).ok()?;
        m[col] = m[col].iter().map(|x| k.mul(x, &inv)).collect();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&row) {
                    *x = k.sub(x, &k.mul(&f, y));
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// C^e for any integer e (C invertible when e < 0).
pub fn mat_pow(k: &CoeffField, c: &Matrix, e: i64) -> Result<Matrix> {
    let mut base = if e < 0 { mat_inverse(k, c).ok_or_else(|| Error::Parameter("matrix is singular".into()))? } else { c.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = identity(k, c.len());
    while n > 0 {
        if n & 1 == 1 {
            acc = mat_mul(k, &acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = mat_mul(k, &base, &base);
        }
    }
    Ok(acc)
}

/// A ⊗ B with rows indexed by (i₁, i₂) ↦ i₁·dim B + i₂.
pub fn kron(k: &CoeffField, a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    (0..n * m).map(|i| (0..n * m).map(|j| k.mul(&a[i / m][j / m], &b[i % m][j % m])).collect()).collect()
}

pub fn kron_power(k: &CoeffField, a: &Matrix, g: u32) -> Matrix {
    (0..g).fold(identity(k, 1), |acc, _| kron(k, &acc, a))
}

/// Coefficients c₀ = 1, c₁, …, c_N of det(xI − A) = Σ c_i x^{N−i} (Berkowitz).
pub fn charpoly(k: &CoeffField, a: &Matrix) -> Vec<FieldElement> {
    let mut v = vec![k.one()];
    for r in 0..a.len() {
        // column of the Toeplitz matrix: 1, −a_rr, −R·C, −R·A_r·C, …
        let row: Vec<FieldElement> = a[r][..r].to_vec();
        let mut col: Vec<FieldElement> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut t = vec![k.one(), k.neg(&a[r][r])];
        for _ in 0..r {
            let rc = row.iter().zip(&col).fold(k.zero(), |acc, (x, y)| k.add(&acc, &k.mul(x, y)));
            t.push(k.neg(&rc));
            col = (0..r).map(|i| (0..r).fold(k.zero(), |acc, j| k.add(&acc, &k.mul(&a[i][j], &col[j])))).collect();
        }
        v = (0..r + 2).map(|i| (0..=i.min(r)).fold(k.zero(), |acc, j| k.add(&acc, &k.mul(&t[i - j], &v[j])))).collect();
    }
    v
}

fn poly_matrix_mul(k: &CoeffField, a: &[Vec<TPoly>], b: &[Vec<TPoly>], nv: usize) -> Vec<Vec<TPoly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(TPoly::zero(nv), |acc, l| {
                        if a[i][l].is_zero() || b[l][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][l].mul(&b[l][j], k), k)
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// (adj(I − t·D), det(I − t·D)) in the variable t_var, D = C^sign.
/// Entry (i, j) of adj/det generates n ↦ (C^{sign·n})_{ij}.
pub fn matrix_resolvent(k: &CoeffField, c: &Matrix, sign: i8, var: usize, nvars: usize) -> Result<(Vec<Vec<TPoly>>, TPoly)> {
    let dm = mat_pow(k, c, sign as i64)?;
    if sign > 0 && mat_inverse(k, c).is_none() {
        return Err(Error::Parameter("matrix is singular".into()));
    }
    Ok(resolvent_of(k, &dm, var, nvars))
}

/// Cayley–Hamilton: adj(I − tD) = Σ_{n<N} tⁿ Σ_{i≤n} c_i D^{n−i}.
fn resolvent_of(k: &CoeffField, d: &Matrix, var: usize, nvars: usize) -> (Vec<Vec<TPoly>>, TPoly) {
    let n = d.len();
    let c = charpoly(k, d);
    let t = TPoly::var(var, nvars, k);
    let mut tp = TPoly::one(nvars, k);
    let mut det = TPoly::zero(nvars);
    let mut adj = vec![vec![TPoly::zero(nvars); n]; n];
    let mut s = identity(k, n);
    for (deg, ci) in c.iter().enumerate() {
        det = det.add(&tp.scale(ci, k), k);
        if deg < n {
            if deg > 0 {
                s = mat_mul(k, d, &s);
                for (i, row) in s.iter_mut().enumerate() {
                    row[i] = k.add(&row[i], ci);
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if !s[i][j].is_zero() {
                        adj[i][j] = adj[i][j].add(&tp.scale(&s[i][j], k), k);
                    }
                }
            }
        }
        tp = tp.mul(&t, k);
    }
    (adj, det)
}

/// x11, x12, …: entry (i, j) of a dim×dim matrix (1-based, row-major).
pub fn matrix_var_names(dim: usize) -> Vec<String> {
    let sep = if dim > 9 { "_" } else { "" };
    (1..=dim).flat_map(|i| (1..=dim).map(move |j| format!("x{i}{sep}{j}"))).collect()
}

/// Commuting invertible C₁..C_m and the variety P₁ = … = P_r = 0 in the
/// dim² entry variables.
#[derive(Clone, Debug)]
pub struct MatrixProblem {
    pub dim: usize,
    pub matrices: Vec<Matrix>,
    pub polys: Vec<TPoly>,
    pub labels: Vec<String>,
}

impl MatrixProblem {
    pub fn new(k: &CoeffField, dim: usize, matrices: Vec<Matrix>, polys: Vec<TPoly>) -> Result<Self> {
        if dim == 0 || matrices.is_empty() || polys.is_empty() {
            return Err(Error::Parameter("need a dimension, matrices and defining polynomials".into()));
        }
        if matrices.iter().any(|c| c.len() != dim || c.iter().any(|r| r.len() != dim)) {
            return Err(Error::Parameter(format!("matrices must be {dim}×{dim}")));
        }
        if polys.iter().any(|p| p.nvars() != dim * dim) {
            return Err(Error::Parameter("polynomials must be in the dim² entry variables".into()));
        }
        for (i, c) in matrices.iter().enumerate() {
            if mat_inverse(k, c).is_none() {
                return Err(Error::Inconsistent(format!("matrix C{} is singular", i + 1)));
            }
            for (j, e) in matrices.iter().enumerate().skip(i + 1) {
                if mat_mul(k, c, e) != mat_mul(k, e, c) {
                    return Err(Error::Inconsistent(format!("C{} and C{} do not commute", i + 1, j + 1)));
                }
            }
        }
        let labels = (1..=matrices.len()).map(|i| format!("C{i}")).collect();
        Ok(MatrixProblem { dim, matrices, polys, labels })
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    /// Π_k C_k^{x_k}.
    pub fn element(&self, k: &CoeffField, x: &[i64]) -> Result<Matrix> {
        let mut acc = identity(k, self.dim);
        for (c, &e) in self.matrices.iter().zip(x) {
            acc = mat_mul(k, &acc, &mat_pow(k, c, e)?);
        }
        Ok(acc)
    }
}

/// P evaluated at the entries of M.
pub fn eval_at_matrix(k: &CoeffField, p: &TPoly, m: &Matrix) -> FieldElement {
    let entries: Vec<&FieldElement> = m.iter().flatten().collect();
    let mut acc = k.zero();
    for (mono, c) in p.terms() {
        let mut term = c.clone();
        for (v, &e) in mono.exps().iter().enumerate() {
            for _ in 0..e {
                term = k.mul(&term, entries[v]);
            }
        }
        acc = k.add(&acc, &term);
    }
    acc
}

/// Kronecker (row, column) index of a monomial in the entry variables.
fn lift_index(mono: &Mono, dim: usize) -> (usize, usize) {
    let mut row = 0;
    let mut col = 0;
    for (v, &e) in mono.exps().iter().enumerate() {
        for _ in 0..e {
            row = row * dim + v / dim;
            col = col * dim + v % dim;
        }
    }
    (row, col)
}

/// A/B whose coefficient at n ∈ N^m is P(Π_k C_k^{a_k n_k}).
pub fn matrix_pattern_series(k: &CoeffField, prob: &MatrixProblem, poly: usize, signs: &[i8]) -> Result<(TPoly, TPoly)> {
    let m = prob.m();
    let p = &prob.polys[poly];
    let mut by_degree: BTreeMap<u32, Vec<(Mono, FieldElement)>> = BTreeMap::new();
    for (mono, c) in p.terms() {
        by_degree.entry(mono.deg()).or_default().push((mono.clone(), c.clone()));
    }
    let signed: Vec<Matrix> = prob.matrices.iter().zip(signs).map(|(c, &s)| mat_pow(k, c, s as i64)).collect::<Result<_>>()?;
    let mut parts: Vec<(TPoly, TPoly)> = Vec::new();
    for (g, monos) in by_degree {
        let n = (prob.dim as u64).checked_pow(g).filter(|&n| n as usize <= KRONECKER_CEILING);
        let Some(n) = n else {
            return Err(Error::Resource {
                states: usize::MAX,
                ceiling: KRONECKER_CEILING,
                bound: format!("Kronecker dimension {}^{g}", prob.dim),
            });
        };
        let mut prod: Vec<Vec<TPoly>> =
            (0..n as usize).map(|i| (0..n as usize).map(|j| if i == j { TPoly::one(m, k) } else { TPoly::zero(m) }).collect()).collect();
        let mut den = TPoly::one(m, k);
        for (var, c) in signed.iter().enumerate() {
            let (adj, det) = resolvent_of(k, &kron_power(k, c, g), var, m);
            prod = poly_matrix_mul(k, &prod, &adj, m);
            den = den.mul(&det, k);
        }
        let mut num = TPoly::zero(m);
        for (mono, c) in monos {
            let (i, j) = lift_index(&mono, prob.dim);
            num = num.add(&prod[i][j].scale(&c, k), k);
        }
        parts.push((num, den));
    }
    let b = parts.iter().fold(TPoly::one(m, k), |acc, (_, d)| acc.mul(d, k));
    let mut a = TPoly::zero(m);
    for (i, (num, _)) in parts.iter().enumerate() {
        let other = parts.iter().enumerate().filter(|(j, _)| *j != i).fold(num.clone(), |acc, (_, (_, d))| acc.mul(d, k));
        a = a.add(&other, k);
    }
    Ok((a, b))
}

/// {x ∈ Z^m : P_i(Π C_k^{x_k}) = 0 for all i}, as a subset of Γ.
pub fn matrix_intersection(k: &CoeffField, prob: &MatrixProblem, opts: &BuildOptions) -> Result<GroupAutomaticSet> {
    let pre = assemble_patterns(prob.m(), |signs| {
        let mut acc = None;
        for i in 0..prob.polys.len() {
            let (a, b) = matrix_pattern_series(k, prob, i, signs)?;
            let z = build_zero_automaton_rational(k, &a, &b, opts)?.dfa;
            acc = Some(match acc {
                None => z,
                Some(prev) => crate::automaton::Dfa::combine(&prev, BoolOp::And, &z)?.minimize(),
            });
        }
        Ok(acc.expect("at least one polynomial"))
    })?;
    let spec = GroupSpec { labels: prob.labels.clone(), kind: GroupKind::Opaque };
    group_pullback(spec, pre)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_field::parse::{parse_element, parse_field};

    fn mat(k: &CoeffField, rows: &[&[&str]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|s| parse_element(k, s).unwrap()).collect()).collect()
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let k = parse_field("GF(5)(u)").unwrap();
        let a = mat(&k, &[&["1", "2"], &["3", "u"]]);
        let c = charpoly(&k, &a);
        // x² − (1+u)x + (u − 6)
        assert_eq!(c[1], parse_element(&k, "-(1+u)").unwrap());
        assert_eq!(c[2], parse_element(&k, "u-6").unwrap());
        let b = mat(&k, &[&["1", "2", "0"], &["0", "u", "1"], &["4", "0", "2"]]);
        let c = charpoly(&k, &b);
        // Cayley–Hamilton by Horner: B³ + c₁B² + c₂B + c₃ = 0
        let mut horner = identity(&k, 3);
        for ci in &c[1..] {
            horner = mat_mul(&k, &horner, &b);
            for (i, row) in horner.iter_mut().enumerate() {
                row[i] = k.add(&row[i], ci);
            }
        }
        assert!(horner.iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn resolvent_entries_generate_powers() {
        let k = parse_field("GF(2)").unwrap();
        let c = mat(&k, &[&["1", "1"], &["0", "1"]]);
        let (adj, det) = matrix_resolvent(&k, &c, 1, 0, 1).unwrap();
        // det = (1 − t)², entry (1,2) of adj = t
        assert_eq!(det, crate::polyseries::parse_tpoly("(1-t)^2", &k, 1).unwrap());
        assert_eq!(adj[0][1], crate::polyseries::parse_tpoly("t", &k, 1).unwrap());
        let one = mat(&k, &[&["1"]]);
        let (adj, det) = matrix_resolvent(&k, &one, -1, 0, 1).unwrap();
        assert_eq!(adj[0][0], TPoly::one(1, &k));
        assert_eq!(det, crate::polyseries::parse_tpoly("1-t", &k, 1).unwrap());
    }

    #[test]
    fn singular_and_noncommuting_inputs_are_rejected() {
        let k = parse_field("GF(3)(u)").unwrap();
        let s = mat(&k, &[&["1", "1"], &["1", "1"]]);
        assert!(mat_inverse(&k, &s).is_none());
        let x = vec![crate::polyseries::parse_poly_in("x11", &k, &matrix_var_names(2)).unwrap()];
        assert!(matches!(MatrixProblem::new(&k, 2, vec![s], x.clone()), Err(Error::Inconsistent(_))));
        let a = mat(&k, &[&["1", "1"], &["0", "1"]]);
        let b = mat(&k, &[&["1", "0"], &["1", "1"]]);
        assert!(matches!(MatrixProblem::new(&k, 2, vec![a, b], x), Err(Error::Inconsistent(_))));
    }
}
