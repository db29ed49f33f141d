use crate::coeff_field::{CoeffField, FieldElement, Ring};
use crate::error::{Error, Result};
use crate::kernel::{build_zero_automaton_rational, BuildOptions, ZeroAutomatonBuild};
use crate::polyseries::TPoly;

/// a(n) = c₁a(n−1) + … + c_m a(n−m) with a(0..m−1) given.
#[derive(Clone, Debug)]
pub struct LinearRecurrence {
    pub coeffs: Vec<FieldElement>,
    pub initial: Vec<FieldElement>,
}

impl LinearRecurrence {
    pub fn new(coeffs: Vec<FieldElement>, initial: Vec<FieldElement>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() != initial.len() {
            return Err(Error::Parameter("a recurrence of order m needs m coefficients and m initial terms".into()));
        }
        Ok(LinearRecurrence { coeffs, initial })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// a(0), …, a(n−1) by direct iteration.
    pub fn terms(&self, k: &CoeffField, n: usize) -> Vec<FieldElement> {
        let mut a: Vec<FieldElement> = self.initial.iter().take(n).cloned().collect();
        while a.len() < n {
            let i = a.len();
            let mut x = k.zero();
            for (j, c) in self.coeffs.iter().enumerate() {
                x = k.add(&x, &k.mul(c, &a[i - 1 - j]));
            }
            a.push(x);
        }
        a
    }

    /// (N, Q) with Σ a(n) t_var^n = N/Q, deg N < m.
    pub fn generating_function(&self, k: &CoeffField, var: usize, nvars: usize) -> (TPoly, TPoly) {
        let t = TPoly::var(var, nvars, k);
        let mut q = TPoly::one(nvars, k);
        let mut init = TPoly::zero(nvars);
        let mut tp = TPoly::one(nvars, k);
        for (c, a) in self.coeffs.iter().zip(&self.initial) {
            init = init.add(&tp.scale(a, k), k);
            tp = tp.mul(&t, k);
            q = q.sub(&tp.scale(c, k), k);
        }
        let m = self.order() as u32;
        let full = init.mul(&q, k);
        let terms = full.terms().iter().filter(|(mono, _)| mono.deg() < m).cloned().collect();
        (TPoly::from_terms(nvars, terms, k), q)
    }
}

/// A/B whose coefficient at n is a₁(n₁) + … + a_d(n_d).
pub fn recurrence_series(k: &CoeffField, recs: &[LinearRecurrence]) -> Result<(TPoly, TPoly)> {
    let d = recs.len();
    if d == 0 {
        return Err(Error::Parameter("need at least one recurrence".into()));
    }
    let parts: Vec<(TPoly, TPoly)> = recs.iter().enumerate().map(|(i, r)| r.generating_function(k, i, d)).collect();
    let one = TPoly::one(d, k);
    let ones: Vec<TPoly> = (0..d).map(|i| one.sub(&TPoly::var(i, d, k), k)).collect();
    let mut b = one.clone();
    for (i, (_, q)) in parts.iter().enumerate() {
        b = b.mul(q, k).mul(&ones[i], k);
    }
    let mut a = TPoly::zero(d);
    for (i, (n, _)) in parts.iter().enumerate() {
        let mut term = n.mul(&ones[i], k);
        for (j, (_, q)) in parts.iter().enumerate() {
            if j != i {
                term = term.mul(q, k);
            }
        }
        a = a.add(&term, k);
    }
    Ok((a, b))
}

/// {n ∈ N^d : a₁(n₁) + … + a_d(n_d) = 0}.
pub fn recurrence_zero_set(k: &CoeffField, recs: &[LinearRecurrence], opts: &BuildOptions) -> Result<ZeroAutomatonBuild> {
    let (a, b) = recurrence_series(k, recs)?;
    build_zero_automaton_rational(k, &a, &b, opts)
}
