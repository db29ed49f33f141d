use std::collections::VecDeque;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{alphabet_size, decode, digits_of, explore, BoolOp, Dfa, Direction};
use crate::error::{Error, Result};

/// Ultimately periodic membership: n ≥ `preperiod` ⇒ (n ∈ S ⇔ n + `period` ∈ S).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Periodicity {
    pub preperiod: u64,
    pub period: u64,
}

/// Largest coordinate of a tuple.
pub fn norm(n: &[u64]) -> u64 {
    n.iter().copied().max().unwrap_or(0)
}

impl Dfa {
    /// Automaton of the canonical encodings (no trailing zero letter in LSB
    /// order, no leading zero letter in MSB order).
    pub fn canonical_language(p: u32, d: usize, dir: Direction) -> Dfa {
        let sigma = alphabet_size(p, d);
        let row = |zero: u32, other: u32| -> Vec<u32> { (0..sigma).map(|a| if a == 0 { zero } else { other }).collect() };
        match dir {
            // 0: empty word, 1: last letter nonzero, 2: last letter zero
            Direction::Lsb => Dfa { p, d, dir, start: 0, delta: vec![row(2, 1); 3], accept: vec![true, true, false] },
            // 0: empty word, 1: started with a nonzero letter, 2: leading zero
            Direction::Msb => Dfa { p, d, dir, start: 0, delta: vec![row(2, 1), row(1, 1), row(2, 2)], accept: vec![true, true, false] },
        }
    }

    /// Unminimized intersection with the canonical-encoding language.
    fn canonical_product(&self) -> Dfa {
        let c = Dfa::canonical_language(self.p, self.d, self.dir);
        explore(
            self.p,
            self.d,
            self.dir,
            (self.start as u32, c.start as u32),
            |&(a, b), l| Ok((self.delta[a as usize][l], c.delta[b as usize][l])),
            |&(a, b)| self.accept[a as usize] && c.accept[b as usize],
        )
        .expect("product construction is infallible")
        .0
    }

    /// `None` when the set is empty, otherwise an element with a shortest
    /// encoding (ties broken by letter order).
    pub fn find_member(&self) -> Option<Vec<u64>> {
        let a = self.canonical_product();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; a.states()];
        let mut seen = vec![false; a.states()];
        let mut queue = VecDeque::from([a.start]);
        seen[a.start] = true;
        while let Some(s) = queue.pop_front() {
            if a.accept[s] {
                let mut word = Vec::new();
                let mut cur = s;
                while let Some((prev, l)) = parent[cur] {
                    word.push(l);
                    cur = prev;
                }
                word.reverse();
                return Some(decode(&word, self.p, self.d, self.dir));
            }
            for (l, &t) in a.delta[s].iter().enumerate() {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((s, l));
                    queue.push_back(t as usize);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.find_member().is_none()
    }

    /// `Some(elements)` (sorted) when the set is finite, `None` otherwise.
    pub fn finite_elements(&self) -> Option<Vec<Vec<u64>>> {
        let a = self.canonical_product();
        let reach = a.reachable();
        let co = a.coreachable();
        let useful: Vec<bool> = (0..a.states()).map(|s| reach[s] && co[s]).collect();
        if !useful[a.start] {
            return Some(Vec::new());
        }
        // cycle detection among useful states
        let mut color = vec![0u8; a.states()];
        let mut stack: Vec<(usize, usize)> = vec![(a.start, 0)];
        color[a.start] = 1;
        while let Some((s, i)) = stack.pop() {
            if i < a.sigma() {
                stack.push((s, i + 1));
                let t = a.delta[s][i] as usize;
                if !useful[t] {
                    continue;
                }
                match color[t] {
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                color[s] = 2;
            }
        }
        let mut out = Vec::new();
        let mut word = Vec::new();
        collect_paths(&a, &useful, a.start, &mut word, &mut out);
        let mut elems: Vec<Vec<u64>> = out.iter().map(|w| decode(w, self.p, self.d, self.dir)).collect();
        elems.sort();
        Some(elems)
    }

    pub fn is_finite(&self) -> bool {
        self.finite_elements().is_some()
    }

    pub fn are_equal(&self, other: &Dfa) -> Result<bool> {
        Ok(self.combine(BoolOp::Xor, other)?.is_empty())
    }

    /// p-complexity: states of the minimal LSB automaton.
    pub fn complexity(&self) -> usize {
        self.with_direction(Direction::Lsb).minimize().states()
    }

    /// All members with every coordinate ≤ `bound`, sorted lexicographically.
    pub fn enumerate(&self, bound: u64) -> Vec<Vec<u64>> {
        let len = super::num_digits(bound, self.p);
        let co = self.coreachable();
        let mut out = Vec::new();
        let mut vals = vec![0u64; self.d];
        self.enum_rec(self.start, 0, len, bound, &co, &mut vals, &mut out);
        out.sort();
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enum_rec(&self, s: usize, depth: usize, len: usize, bound: u64, co: &[bool], vals: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !co[s] {
            return;
        }
        if depth == len {
            if self.accept[s] && vals.iter().all(|&v| v <= bound) {
                out.push(vals.clone());
            }
            return;
        }
        let p = self.p as u64;
        for l in 0..self.sigma() {
            let digits = digits_of(l, self.p, self.d);
            let saved = vals.clone();
            let mut ok = true;
            for (v, &x) in vals.iter_mut().zip(&digits) {
                match self.dir {
                    Direction::Lsb => *v += x as u64 * p.pow(depth as u32),
                    Direction::Msb => {
                        *v = *v * p + x as u64;
                        let rest = p.pow((len - depth - 1) as u32);
                        if v.saturating_mul(rest) > bound {
                            ok = false;
                        }
                    }
                }
            }
            if ok {
                self.enum_rec(self.delta[s][l] as usize, depth + 1, len, bound, co, vals, out);
            }
            *vals = saved;
        }
    }

    /// Compares two automata on the box of tuples with coordinates ≤ `bound`.
    pub fn equal_on_box(&self, other: &Dfa, bound: u64) -> bool {
        self.enumerate(bound) == other.enumerate(bound)
    }

    /// Decides ultimate periodicity (d = 1). The returned period is minimal
    /// and the certificate has been checked by automaton equality.
    pub fn eventual_period(&self) -> Result<Option<Periodicity>> {
        if self.d != 1 {
            return Err(Error::Unsupported("periodicity is only decided for d = 1".into()));
        }
        let lsb = self.with_direction(Direction::Lsb).minimize();
        let msb = self.with_direction(Direction::Msb).minimize();
        let p = BigUint::from(self.p);
        let mut candidates: Vec<BigUint> = Vec::new();
        let mut pa = BigUint::from(1u32);
        for _ in 0..lsb.states() {
            for q in 1..=msb.states() as u64 {
                if q.gcd(&(self.p as u64)) == 1 {
                    candidates.push(&pa * q);
                }
            }
            pa *= &p;
        }
        candidates.sort();
        candidates.dedup();
        for q in candidates {
            let diff = difference_automaton(&lsb, &q);
            if let Some(elems) = diff.finite_elements() {
                let preperiod = elems.last().map_or(0, |e| e[0] + 1);
                let period = q.to_u64().ok_or_else(|| Error::Unsupported("period exceeds 64 bits".into()))?;
                let cert = Periodicity { preperiod, period };
                let explicit = periodic_automaton(&lsb, cert)?;
                if !explicit.are_equal(&lsb)? {
                    return Err(Error::Invariant(format!("periodicity certificate {cert:?} failed verification")));
                }
                return Ok(Some(cert));
            }
        }
        Ok(None)
    }
}

fn collect_paths(a: &Dfa, useful: &[bool], s: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if a.accept[s] {
        out.push(word.clone());
    }
    for (l, &t) in a.delta[s].iter().enumerate() {
        if useful[t as usize] {
            word.push(l);
            collect_paths(a, useful, t as usize, word, out);
            word.pop();
        }
    }
}

fn base_digits(x: &BigUint, p: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut x = x.clone();
    let pb = BigUint::from(p);
    while !x.is_zero() {
        let (q, r) = x.div_rem(&pb);
        out.push(r.to_u32().unwrap());
        x = q;
    }
    out
}

/// LSB automaton (d = 1) of {n : χ(n) ≠ χ(n + q)} where χ is the set of `a`
/// (which must read LSB first).
fn difference_automaton(a: &Dfa, q: &BigUint) -> Dfa {
    let p = a.p;
    let qd = base_digits(q, p);
    let m = qd.len();
    let flush = |s: u32, pos: usize, carry: u32| -> usize {
        // feed the digits of (q >> pos) + carry
        let mut st = s as usize;
        let mut c = carry;
        let mut i = pos;
        while i < m || c > 0 {
            let y = qd.get(i).copied().unwrap_or(0) + c;
            st = a.delta[st][(y % p) as usize] as usize;
            c = y / p;
            i += 1;
        }
        st
    };
    explore(
        p,
        1,
        Direction::Lsb,
        (a.start as u32, a.start as u32, 0usize, 0u32),
        |&(s1, s2, pos, carry), x| {
            let y = x as u32 + qd.get(pos).copied().unwrap_or(0) + carry;
            Ok((a.delta[s1 as usize][x], a.delta[s2 as usize][(y % p) as usize], (pos + 1).min(m), y / p))
        },
        |&(s1, s2, pos, carry)| a.accept[s1 as usize] != a.accept[flush(s2, pos, carry)],
    )
    .expect("product construction is infallible")
    .0
}

const PERIODIC_STATE_LIMIT: u64 = 10_000_000;

/// LSB automaton of the ultimately periodic set agreeing with `a` below
/// `preperiod + period` and repeating with the period beyond.
fn periodic_automaton(a: &Dfa, cert: Periodicity) -> Result<Dfa> {
    let Periodicity { preperiod: n0, period: q } = cert;
    if n0.saturating_add(q) > PERIODIC_STATE_LIMIT {
        return Err(Error::Resource { states: (n0 + q) as usize, ceiling: PERIODIC_STATE_LIMIT as usize, bound: "n/a".into() });
    }
    let table: Vec<bool> = (0..n0 + q).map(|n| a.accepts(&[n])).collect();
    let p = a.p as u64;
    let (msb, _) = explore(
        a.p,
        1,
        Direction::Msb,
        (if n0 > 0 { Some(0u64) } else { None }, 0u64),
        |&(exact, r), x| {
            let r2 = (r * p + x as u64) % q;
            let e2 = exact.map(|v| v * p + x as u64).filter(|&v| v < n0);
            Ok((e2, r2))
        },
        |&(exact, r)| match exact {
            Some(v) => table[v as usize],
            None => {
                let rep = n0 + (r + q - n0 % q) % q;
                table[rep as usize]
            }
        },
    )?;
    Ok(msb.reverse_direction())
}
