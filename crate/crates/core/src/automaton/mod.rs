//! Deterministic automata over the digit alphabet Σ_p^d with {0,1} outputs.
//!
//! A letter is a d-tuple of base-p digits, indexed as Σ j_i·p^i (first
//! coordinate fastest). Words are read least-significant digit first (`Lsb`)
//! or most-significant first (`Msb`); languages are padding invariant, so
//! trailing (resp. leading) all-zero letters never change acceptance.

mod decide;
mod io;

pub use decide::{norm, Periodicity};
pub use io::DfaJson;

use std::collections::VecDeque;
use std::hash::Hash;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lsb,
    Msb,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Lsb => Direction::Msb,
            Direction::Msb => Direction::Lsb,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Diff,
    Xor,
}

impl BoolOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Diff => a && !b,
            BoolOp::Xor => a != b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub p: u32,
    pub d: usize,
    pub dir: Direction,
    pub start: usize,
    /// `delta[state][letter]`.
    pub delta: Vec<Vec<u32>>,
    pub accept: Vec<bool>,
}

pub fn alphabet_size(p: u32, d: usize) -> usize {
    (p as usize).pow(d as u32)
}

pub fn letter_of(digits: &[u32], p: u32) -> usize {
    digits.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub fn digits_of(mut letter: usize, p: u32, d: usize) -> Vec<u32> {
    (0..d)
        .map(|_| {
            let x = (letter % p as usize) as u32;
            letter /= p as usize;
            x
        })
        .collect()
}

/// Canonical encoding of a tuple: as many letters as the longest coordinate
/// has base-p digits (the zero tuple is the empty word).
pub fn encode(n: &[u64], p: u32, dir: Direction) -> Vec<usize> {
    let len = n.iter().map(|&x| num_digits(x, p)).max().unwrap_or(0);
    let mut word: Vec<usize> = (0..len)
        .map(|i| {
            let digits: Vec<u32> = n.iter().map(|&x| ((x / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            letter_of(&digits, p)
        })
        .collect();
    if dir == Direction::Msb {
        word.reverse();
    }
    word
}

pub fn decode(word: &[usize], p: u32, d: usize, dir: Direction) -> Vec<u64> {
    let mut n = vec![0u64; d];
    let mut scale = 1u64;
    let mut apply = |letter: usize| {
        for (x, digit) in n.iter_mut().zip(digits_of(letter, p, d)) {
            *x += digit as u64 * scale;
        }
        scale = scale.saturating_mul(p as u64);
    };
    match dir {
        Direction::Lsb => word.iter().for_each(|&l| apply(l)),
        Direction::Msb => word.iter().rev().for_each(|&l| apply(l)),
    }
    n
}

pub fn num_digits(mut x: u64, p: u32) -> usize {
    let mut k = 0;
    while x > 0 {
        x /= p as u64;
        k += 1;
    }
    k
}

/// Breadth-first exploration of an implicitly given automaton. States are
/// numbered in discovery order; returns the automaton and the state keys.
pub fn explore<K, S, O>(p: u32, d: usize, dir: Direction, start: K, mut step: S, output: O) -> Result<(Dfa, Vec<K>)>
where
    K: Hash + Eq + Clone,
    S: FnMut(&K, usize) -> Result<K>,
    O: Fn(&K) -> bool,
{
    let sigma = alphabet_size(p, d);
    let mut index: FxHashMap<K, u32> = FxHashMap::default();
    let mut keys = vec![start.clone()];
    index.insert(start, 0);
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let mut row = Vec::with_capacity(sigma);
        for a in 0..sigma {
            let next = step(&keys[i], a)?;
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = keys.len() as u32;
                    index.insert(next.clone(), id);
                    keys.push(next);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let accept = keys.iter().map(&output).collect();
    Ok((Dfa { p, d, dir, start: 0, delta, accept }, keys))
}

impl Dfa {
    pub fn new(p: u32, d: usize, dir: Direction, start: usize, delta: Vec<Vec<u32>>, accept: Vec<bool>) -> Result<Self> {
        let sigma = alphabet_size(p, d);
        let n = delta.len();
        if n == 0 || accept.len() != n || start >= n {
            return Err(Error::Parameter("automaton needs a start state and one output per state".into()));
        }
        if delta.iter().any(|row| row.len() != sigma || row.iter().any(|&t| t as usize >= n)) {
            return Err(Error::Parameter("transition table must be total over Σ_p^d".into()));
        }
        Ok(Dfa { p, d, dir, start, delta, accept })
    }

    /// The automaton of a constant set (∅ or N^d).
    pub fn constant(p: u32, d: usize, dir: Direction, value: bool) -> Self {
        Dfa { p, d, dir, start: 0, delta: vec![vec![0; alphabet_size(p, d)]], accept: vec![value] }
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn sigma(&self) -> usize {
        alphabet_size(self.p, self.d)
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.start, |s, &a| self.delta[s][a] as usize)
    }

    pub fn accepts_word(&self, word: &[usize]) -> bool {
        self.accept[self.run(word)]
    }

    pub fn accepts(&self, n: &[u64]) -> bool {
        self.accepts_word(&encode(n, self.p, self.dir))
    }

    fn check_compatible(&self, other: &Dfa) -> Result<()> {
        if self.p != other.p || self.d != other.d || self.dir != other.dir {
            return Err(Error::Parameter(format!(
                "automata differ in (p, d, direction): ({}, {}, {:?}) vs ({}, {}, {:?})",
                self.p, self.d, self.dir, other.p, other.d, other.dir
            )));
        }
        Ok(())
    }

    pub fn complement(&self) -> Dfa {
        Dfa { accept: self.accept.iter().map(|&x| !x).collect(), ..self.clone() }
    }

    /// Reachable part of the product automaton, minimized.
    pub fn combine(&self, op: BoolOp, other: &Dfa) -> Result<Dfa> {
        self.check_compatible(other)?;
        let (dfa, _) = explore(
            self.p,
            self.d,
            self.dir,
            (self.start as u32, other.start as u32),
            |&(a, b), l| Ok((self.delta[a as usize][l], other.delta[b as usize][l])),
            |&(a, b)| op.apply(self.accept[a as usize], other.accept[b as usize]),
        )?;
        Ok(dfa.minimize())
    }

    /// Moore partition refinement followed by breadth-first renumbering, so
    /// equal languages give identical automata.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let ids: Vec<usize> = (0..self.states()).filter(|&s| reach[s]).collect();
        let mut class: Vec<u32> = vec![0; self.states()];
        for &s in &ids {
            class[s] = self.accept[s] as u32;
        }
        let mut nclasses = {
            let mut seen = [false; 2];
            ids.iter().for_each(|&s| seen[class[s] as usize] = true);
            seen.iter().filter(|&&x| x).count()
        };
        loop {
            let mut sig_index: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
            let mut next = vec![0u32; self.states()];
            for &s in &ids {
                let mut sig = Vec::with_capacity(self.sigma() + 1);
                sig.push(class[s]);
                sig.extend(self.delta[s].iter().map(|&t| class[t as usize]));
                let n = sig_index.len() as u32;
                next[s] = *sig_index.entry(sig).or_insert(n);
            }
            let count = sig_index.len();
            class = next;
            if count == nclasses {
                break;
            }
            nclasses = count;
        }
        // canonical numbering by BFS over classes
        let mut order: FxHashMap<u32, u32> = FxHashMap::default();
        let mut reps: Vec<usize> = Vec::new();
        let mut queue = VecDeque::new();
        order.insert(class[self.start], 0);
        reps.push(self.start);
        queue.push_back(self.start);
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                let c = class[t as usize];
                if let std::collections::hash_map::Entry::Vacant(e) = order.entry(c) {
                    e.insert(reps.len() as u32);
                    reps.push(t as usize);
                    queue.push_back(t as usize);
                }
            }
        }
        let delta = reps.iter().map(|&s| self.delta[s].iter().map(|&t| order[&class[t as usize]]).collect()).collect();
        let accept = reps.iter().map(|&s| self.accept[s]).collect();
        Dfa { p: self.p, d: self.d, dir: self.dir, start: 0, delta, accept }
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(s) = stack.pop() {
            for &t in &self.delta[s] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t as usize);
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.states()];
        for (s, row) in self.delta.iter().enumerate() {
            for &t in row {
                rev[t as usize].push(s);
            }
        }
        let mut seen = self.accept.clone();
        let mut stack: Vec<usize> = (0..self.states()).filter(|&s| seen[s]).collect();
        while let Some(s) = stack.pop() {
            for &r in &rev[s] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    /// Same set of tuples, read in the other direction: reversal, subset
    /// construction, minimization.
    pub fn reverse_direction(&self) -> Dfa {
        let n = self.states();
        let mut rev: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); self.sigma()]; n];
        for (s, row) in self.delta.iter().enumerate() {
            for (a, &t) in row.iter().enumerate() {
                rev[t as usize][a].push(s as u32);
            }
        }
        let start: Vec<u32> = (0..n as u32).filter(|&s| self.accept[s as usize]).collect();
        let (dfa, _) = explore(
            self.p,
            self.d,
            self.dir.flip(),
            start,
            |set: &Vec<u32>, a| {
                let mut next: Vec<u32> = set.iter().flat_map(|&s| rev[s as usize][a].iter().copied()).collect();
                next.sort_unstable();
                next.dedup();
                Ok(next)
            },
            |set| set.binary_search(&(self.start as u32)).is_ok(),
        )
        .expect("subset construction is infallible");
        dfa.minimize()
    }

    /// Converts to the requested direction (no-op when already there).
    pub fn with_direction(&self, dir: Direction) -> Dfa {
        if self.dir == dir {
            self.clone()
        } else {
            self.reverse_direction()
        }
    }

    /// Trailing (LSB) or leading (MSB) zero letters do not change acceptance.
    pub fn is_padding_invariant(&self) -> bool {
        let m = self.minimize();
        match self.dir {
            Direction::Lsb => (0..m.states()).all(|s| m.accept[m.delta[s][0] as usize] == m.accept[s]),
            Direction::Msb => m.delta[m.start][0] as usize == m.start,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// MSB acceptor of the powers of two: A -1-> B, B -0-> B, B -1-> C (sink).
    pub(crate) fn powers_of_two_msb() -> Dfa {
        Dfa::new(2, 1, Direction::Msb, 0, vec![vec![0, 1], vec![1, 2], vec![2, 2]], vec![false, true, false]).unwrap()
    }

    #[test]
    fn encode_decode_roundtrip() {
        let w = encode(&[3, 5, 0], 2, Direction::Msb);
        let letters: Vec<Vec<u32>> = w.iter().map(|&l| digits_of(l, 2, 3)).collect();
        // (011, 101, 000) read column by column
        assert_eq!(letters, vec![vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 0]]);
        for dir in [Direction::Lsb, Direction::Msb] {
            for n in [[0u64, 0, 0], [3, 5, 0], [14, 3, 0], [1, 0, 8]] {
                assert_eq!(decode(&encode(&n, 3, dir), 3, 3, dir), n.to_vec());
            }
        }
        assert!(encode(&[0, 0], 2, Direction::Lsb).is_empty());
    }

    #[test]
    fn minimize_removes_duplicates() {
        let a =
            Dfa::new(2, 1, Direction::Lsb, 0, vec![vec![1, 2], vec![1, 2], vec![1, 2], vec![3, 3]], vec![true, true, true, false]).unwrap();
        let m = a.minimize();
        assert_eq!(m.states(), 1);
        assert!(m.accept[0]);
    }

    #[test]
    fn powers_of_two_is_minimal_and_reversible() {
        let a = powers_of_two_msb();
        assert_eq!(a.minimize().states(), 3);
        assert!(a.accepts(&[16]));
        assert!(!a.accepts(&[12]));
        let l = a.reverse_direction();
        assert_eq!(l.dir, Direction::Lsb);
        for n in 0..300u64 {
            assert_eq!(l.accepts(&[n]), n.is_power_of_two());
        }
        assert_eq!(l.reverse_direction(), a.minimize());
        assert!(a.is_padding_invariant() && l.is_padding_invariant());
    }

    #[test]
    fn xor_with_itself_is_empty() {
        let a = powers_of_two_msb();
        let x = a.combine(BoolOp::Xor, &a).unwrap();
        assert_eq!(x.states(), 1);
        assert!(!x.accept[0]);
        let e = Dfa::constant(2, 1, Direction::Msb, false);
        assert_eq!(e.combine(BoolOp::Or, &a).unwrap(), a.minimize());
        assert!(a.combine(BoolOp::And, &Dfa::constant(3, 1, Direction::Msb, true)).is_err());
    }
}
