//! Automatic subsets of Z^d as 2^d orthant automata, and subsets of finitely
//! generated abelian groups stored as preimages in Z^m.
//!
//! Orthants are indexed by sign masks: bit i set means coordinate i is
//! negative. The orthant automaton reads the absolute values.

use serde::{Deserialize, Serialize};

use crate::automaton::{alphabet_size, digits_of, explore, BoolOp, Dfa, DfaJson, Direction};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SignedDfa {
    pub p: u32,
    pub d: usize,
    /// `orthants[mask]`.
    pub orthants: Vec<Dfa>,
}

pub fn sign_mask(signs: &[i8]) -> usize {
    signs.iter().enumerate().filter(|(_, &s)| s < 0).map(|(i, _)| 1 << i).sum()
}

pub fn mask_signs(mask: usize, d: usize) -> Vec<i8> {
    (0..d).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()
}

fn mask_of_point(n: &[i64]) -> usize {
    n.iter().enumerate().filter(|(_, &x)| x < 0).map(|(i, _)| 1 << i).sum()
}

/// Automaton of the tuples whose coordinates in `zero_mask` vanish.
fn zero_coordinates(p: u32, d: usize, dir: Direction, zero_mask: usize) -> Dfa {
    let row: Vec<u32> = (0..alphabet_size(p, d))
        .map(|l| {
            let digits = digits_of(l, p, d);
            let ok = (0..d).all(|i| zero_mask >> i & 1 == 0 || digits[i] == 0);
            if ok {
                0
            } else {
                1
            }
        })
        .collect();
    Dfa::new(p, d, dir, 0, vec![row, vec![1; alphabet_size(p, d)]], vec![true, false]).unwrap()
}

impl SignedDfa {
    /// Assembles from (sign vector, automaton) pairs covering every orthant
    /// once; checks that orthants agree on shared boundary points.
    pub fn assemble(parts: Vec<(Vec<i8>, Dfa)>) -> Result<SignedDfa> {
        let Some((s0, a0)) = parts.first() else {
            return Err(Error::Parameter("no orthant automata".into()));
        };
        let (p, d, dir) = (a0.p, a0.d, a0.dir);
        if s0.len() != d {
            return Err(Error::Parameter("sign vector length differs from d".into()));
        }
        let mut slots: Vec<Option<Dfa>> = vec![None; 1 << d];
        for (signs, a) in parts {
            if a.p != p || a.d != d || a.dir != dir || signs.len() != d {
                return Err(Error::Parameter("orthant automata must share p, d and direction".into()));
            }
            let m = sign_mask(&signs);
            if slots[m].replace(a).is_some() {
                return Err(Error::Parameter(format!("orthant {signs:?} given twice")));
            }
        }
        let orthants: Option<Vec<Dfa>> = slots.into_iter().collect();
        let orthants = orthants.ok_or_else(|| Error::Parameter("every orthant needs an automaton".into()))?;
        let s = SignedDfa { p, d, orthants };
        s.check_boundary()?;
        Ok(s)
    }

    /// Same automaton in every orthant: {n : |n| ∈ S}.
    pub fn symmetric(a: &Dfa) -> SignedDfa {
        SignedDfa { p: a.p, d: a.d, orthants: vec![a.clone(); 1 << a.d] }
    }

    pub fn dir(&self) -> Direction {
        self.orthants[0].dir
    }

    /// Exact check: neighbouring orthants agree where the differing coordinate is 0.
    pub fn check_boundary(&self) -> Result<()> {
        for m in 0..self.orthants.len() {
            for i in 0..self.d {
                let other = m | 1 << i;
                if other == m {
                    continue;
                }
                let zero = zero_coordinates(self.p, self.d, self.dir(), 1 << i);
                let diff = self.orthants[m].combine(BoolOp::Xor, &self.orthants[other])?.combine(BoolOp::And, &zero)?;
                if let Some(n) = diff.find_member() {
                    let point = signed_point(&n, m);
                    return Err(Error::Boundary { point });
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, n: &[i64]) -> bool {
        let abs: Vec<u64> = n.iter().map(|x| x.unsigned_abs()).collect();
        self.orthants[mask_of_point(n)].accepts(&abs)
    }

    pub fn combine(&self, op: BoolOp, other: &SignedDfa) -> Result<SignedDfa> {
        if self.orthants.len() != other.orthants.len() {
            return Err(Error::Parameter("signed automata of different dimension".into()));
        }
        let orthants = self.orthants.iter().zip(&other.orthants).map(|(a, b)| a.combine(op, b)).collect::<Result<_>>()?;
        Ok(SignedDfa { p: self.p, d: self.d, orthants })
    }

    pub fn with_direction(&self, dir: Direction) -> SignedDfa {
        SignedDfa { p: self.p, d: self.d, orthants: self.orthants.iter().map(|a| a.with_direction(dir)).collect() }
    }

    pub fn find_member(&self) -> Option<Vec<i64>> {
        self.orthants.iter().enumerate().find_map(|(m, a)| a.find_member().map(|n| signed_point(&n, m)))
    }

    pub fn is_empty(&self) -> bool {
        self.find_member().is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.orthants.iter().all(|a| a.is_finite())
    }

    /// Members with every |n_i| ≤ bound, sorted and without repeats.
    pub fn enumerate(&self, bound: u64) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::new();
        for (m, a) in self.orthants.iter().enumerate() {
            for n in a.enumerate(bound) {
                // boundary points are listed by the orthant with the fewest minus signs
                if (0..self.d).any(|i| m >> i & 1 == 1 && n[i] == 0) {
                    continue;
                }
                out.push(signed_point(&n, m));
            }
        }
        out.sort();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SignedJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<SignedDfa> {
        let j: SignedJson = serde_json::from_str(s).map_err(|e| Error::Parse(format!("signed automaton JSON: {e}")))?;
        let parts = j.orthants.into_iter().map(|o| Ok((o.signs, Dfa::try_from(o.dfa)?))).collect::<Result<Vec<_>>>()?;
        SignedDfa::assemble(parts)
    }
}

fn signed_point(n: &[u64], mask: usize) -> Vec<i64> {
    n.iter().enumerate().map(|(i, &x)| if mask >> i & 1 == 1 { -(x as i64) } else { x as i64 }).collect()
}

#[derive(Serialize, Deserialize)]
struct OrthantJson {
    signs: Vec<i8>,
    dfa: DfaJson,
}

#[derive(Serialize, Deserialize)]
struct SignedJson {
    p: u32,
    d: usize,
    orthants: Vec<OrthantJson>,
}

impl From<&SignedDfa> for SignedJson {
    fn from(s: &SignedDfa) -> Self {
        let orthants =
            s.orthants.iter().enumerate().map(|(m, a)| OrthantJson { signs: mask_signs(m, s.d), dfa: DfaJson::from(a) }).collect();
        SignedJson { p: s.p, d: s.d, orthants }
    }
}

/// Signed words: per coordinate a sign symbol followed by its digits, all
/// padded to a common length (the zero tuple gives signs only).
pub fn signed_words(n: &[i64], p: u32, dir: Direction) -> Vec<String> {
    let len = n.iter().map(|x| crate::automaton::num_digits(x.unsigned_abs(), p)).max().unwrap_or(0);
    n.iter()
        .map(|&x| {
            let mut v = x.unsigned_abs();
            let mut digits: Vec<char> = (0..len)
                .map(|_| {
                    let c = char::from_digit((v % p as u64) as u32, 36).unwrap();
                    v /= p as u64;
                    c
                })
                .collect();
            if dir == Direction::Msb {
                digits.reverse();
            }
            let sign = if x < 0 { '-' } else { '+' };
            std::iter::once(sign).chain(digits).collect()
        })
        .collect()
}

pub fn parse_signed_words(words: &[&str], p: u32, dir: Direction) -> Result<Vec<i64>> {
    words
        .iter()
        .map(|w| {
            let mut chars = w.chars();
            let neg = match chars.next() {
                Some('+') => false,
                Some('-') => true,
                _ => return Err(Error::Parse(format!("signed word {w:?} must start with + or -"))),
            };
            let mut digits: Vec<u32> = chars
                .map(|c| c.to_digit(36).filter(|&x| x < p).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?;
            if dir == Direction::Lsb {
                digits.reverse();
            }
            let v = digits.iter().fold(0i64, |acc, &x| acc * p as i64 + x as i64);
            Ok(if neg { -v } else { v })
        })
        .collect()
}

/// Γ presented by generator images in Z^k × Π Z/t_i, or opaquely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Abelian { free_rank: usize, torsion: Vec<u64>, images: Vec<Vec<i64>> },
    Opaque,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub labels: Vec<String>,
    pub kind: GroupKind,
}

impl GroupSpec {
    pub fn m(&self) -> usize {
        self.labels.len()
    }

    /// Φ(x) in Z^k × Π Z/t_i with torsion coordinates reduced.
    pub fn image(&self, x: &[i64]) -> Option<Vec<i64>> {
        let GroupKind::Abelian { free_rank, torsion, images } = &self.kind else { return None };
        let width = free_rank + torsion.len();
        let mut y = vec![0i64; width];
        for (xi, img) in x.iter().zip(images) {
            for (yj, gj) in y.iter_mut().zip(img) {
                *yj += xi * gj;
            }
        }
        for (j, &t) in torsion.iter().enumerate() {
            y[free_rank + j] = y[free_rank + j].rem_euclid(t as i64);
        }
        Some(y)
    }
}

/// A subset S = F × R of Z^k × Π Z/t_i: F automatic (or all of Z^k when
/// absent) and R a list of allowed torsion parts.
#[derive(Clone, Debug)]
pub struct TargetSet {
    pub free: Option<SignedDfa>,
    pub torsion_residues: Vec<Vec<u64>>,
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct PullKey {
    /// p^position mod lcm(torsion)
    power: u64,
    residues: Vec<u64>,
    /// per target sign pattern: carries and target state
    sims: Vec<(Vec<i64>, u32)>,
}

/// Φ⁻¹(S) ⊆ Z^m for an abelian presentation; every orthant is built by a
/// digit-serial evaluation of Φ with carries.
pub fn pullback_linear(spec: &GroupSpec, target: &TargetSet, p: u32) -> Result<SignedDfa> {
    let GroupKind::Abelian { free_rank: k, torsion, images } = &spec.kind else {
        return Err(Error::Unsupported("pullback needs an abelian presentation".into()));
    };
    let m = spec.m();
    if images.len() != m || images.iter().any(|g| g.len() != k + torsion.len()) {
        return Err(Error::Parameter("generator images do not match the group".into()));
    }
    let free: Vec<Dfa> = match &target.free {
        Some(s) if s.d == *k && s.p == p => s.with_direction(Direction::Lsb).orthants,
        Some(_) => return Err(Error::Parameter("target automaton does not match the free rank".into())),
        None if *k == 0 => Vec::new(),
        None => vec![Dfa::constant(p, *k, Direction::Lsb, true); 1 << k],
    };
    let modulus = torsion.iter().fold(1u64, |a, &t| num_integer::Integer::lcm(&a, &t));
    let pk = p as i64;
    let mut orthants = Vec::with_capacity(1 << m);
    for mask in 0..1usize << m {
        let eps: Vec<i64> = mask_signs(mask, m).iter().map(|&s| s as i64).collect();
        let patterns = if *k == 0 { 1 } else { 1usize << k };
        let coeff = |sigma: usize, l: usize, i: usize| -> i64 {
            let s = if sigma >> l & 1 == 1 { -1 } else { 1 };
            s * images[i][l] * eps[i]
        };
        let start = PullKey {
            power: 1 % modulus,
            residues: vec![0; torsion.len()],
            sims: (0..patterns).map(|sg| (vec![0; *k], if *k == 0 { 0 } else { free[sg].start as u32 })).collect(),
        };
        let step_sim = |sg: usize, carries: &[i64], st: u32, digits: &[i64]| -> (Vec<i64>, u32) {
            let mut out_digits = Vec::with_capacity(*k);
            let mut next = Vec::with_capacity(*k);
            for l in 0..*k {
                let v = carries[l] + (0..m).map(|i| coeff(sg, l, i) * digits[i]).sum::<i64>();
                out_digits.push(v.rem_euclid(pk) as u32);
                next.push(floor_div(v, pk));
            }
            let letter = crate::automaton::letter_of(&out_digits, p);
            (next, free[sg].delta[st as usize][letter])
        };
        let (dfa, _) = explore(
            p,
            m,
            Direction::Lsb,
            start,
            |key: &PullKey, letter| {
                let digits: Vec<i64> = digits_of(letter, p, m).into_iter().map(|x| x as i64).collect();
                let residues = torsion
                    .iter()
                    .enumerate()
                    .map(|(j, &t)| {
                        let add: i64 = (0..m).map(|i| images[i][k + j] * eps[i] * digits[i]).sum::<i64>() * key.power as i64;
                        (key.residues[j] as i64 + add).rem_euclid(t as i64) as u64
                    })
                    .collect();
                let sims = if *k == 0 {
                    key.sims.clone()
                } else {
                    key.sims.iter().enumerate().map(|(sg, (c, st))| step_sim(sg, c, *st, &digits)).collect()
                };
                Ok(PullKey { power: key.power * p as u64 % modulus, residues, sims })
            },
            |key: &PullKey| {
                if !torsion.is_empty() && !target.torsion_residues.contains(&key.residues) {
                    return false;
                }
                if *k == 0 {
                    return true;
                }
                let zeros = vec![0i64; m];
                key.sims.iter().enumerate().any(|(sg, (c, st))| {
                    let (mut c, mut st) = (c.clone(), *st);
                    while c.iter().any(|&x| x != 0 && x != -1) {
                        let (c2, st2) = step_sim(sg, &c, st, &zeros);
                        c = c2;
                        st = st2;
                    }
                    c.iter().all(|&x| x == 0) && free[sg].accept[st as usize]
                })
            },
        )?;
        orthants.push(dfa.minimize());
    }
    Ok(SignedDfa { p, d: m, orthants })
}

/// A subset of Γ stored as its preimage in Z^m.
#[derive(Clone, Debug)]
pub struct GroupAutomaticSet {
    pub spec: GroupSpec,
    pub preimage: SignedDfa,
}

pub fn group_pullback(spec: GroupSpec, preimage: SignedDfa) -> Result<GroupAutomaticSet> {
    if preimage.d != spec.m() {
        return Err(Error::Parameter("preimage dimension differs from the number of generators".into()));
    }
    Ok(GroupAutomaticSet { spec, preimage })
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    spec: GroupSpec,
    preimage: SignedJson,
}

impl GroupAutomaticSet {
    /// `{"spec": …, "preimage": <signed container>}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GroupJson { spec: self.spec.clone(), preimage: SignedJson::from(&self.preimage) }).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<GroupAutomaticSet> {
        let j: GroupJson = serde_json::from_str(s).map_err(|e| Error::Parse(format!("group set JSON: {e}")))?;
        let parts = j.preimage.orthants.into_iter().map(|o| Ok((o.signs, Dfa::try_from(o.dfa)?))).collect::<Result<Vec<_>>>()?;
        group_pullback(j.spec, SignedDfa::assemble(parts)?)
    }

    pub fn contains(&self, exponents: &[i64]) -> bool {
        self.preimage.contains(exponents)
    }

    /// Checks that membership is constant on every fibre of Φ met inside the
    /// box ‖x‖ ≤ bound; returns a violating pair otherwise.
    pub fn saturation_violation(&self, bound: i64) -> Option<(Vec<i64>, Vec<i64>)> {
        use std::collections::HashMap;
        let m = self.spec.m();
        let mut seen: HashMap<Vec<i64>, (Vec<i64>, bool)> = HashMap::new();
        let mut x = vec![-bound; m];
        loop {
            {
                let y = self.spec.image(&x)?;
                let inside = self.contains(&x);
                match seen.get(&y) {
                    Some((w, b)) if *b != inside => return Some((w.clone(), x.clone())),
                    Some(_) => {}
                    None => {
                        seen.insert(y, (x.clone(), inside));
                    }
                }
            }
            let mut i = 0;
            while i < m {
                x[i] += 1;
                if x[i] <= bound {
                    break;
                }
                x[i] = -bound;
                i += 1;
            }
            if i == m {
                return None;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn powers_of_two() -> Dfa {
        Dfa::new(2, 1, Direction::Msb, 0, vec![vec![0, 1], vec![1, 2], vec![2, 2]], vec![false, true, false]).unwrap()
    }

    fn evens() -> SignedDfa {
        let a = Dfa::new(2, 1, Direction::Lsb, 0, vec![vec![1, 2], vec![1, 1], vec![2, 2]], vec![true, true, false]).unwrap();
        SignedDfa::symmetric(&a)
    }

    #[test]
    fn symmetric_powers_of_two() {
        let s = SignedDfa::assemble(vec![(vec![1], powers_of_two()), (vec![-1], powers_of_two())]).unwrap();
        assert!(s.contains(&[-4]) && s.contains(&[4]));
        assert!(!s.contains(&[-3]) && !s.contains(&[0]));
        assert_eq!(s.enumerate(5), vec![vec![-4], vec![-2], vec![-1], vec![1], vec![2], vec![4]]);
        let again = SignedDfa::from_json(&s.to_json()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn boundary_disagreement_is_reported() {
        let all = Dfa::constant(2, 1, Direction::Lsb, true);
        let none = Dfa::constant(2, 1, Direction::Lsb, false);
        let err = SignedDfa::assemble(vec![(vec![1], all), (vec![-1], none)]).unwrap_err();
        assert!(matches!(err, Error::Boundary { point } if point == vec![0]));
    }

    #[test]
    fn signed_word_example() {
        let w = signed_words(&[14, -3, 0], 2, Direction::Msb);
        assert_eq!(w, vec!["+1110", "-0011", "+0000"]);
        let back = parse_signed_words(&w.iter().map(|s| s.as_str()).collect::<Vec<_>>(), 2, Direction::Msb).unwrap();
        assert_eq!(back, vec![14, -3, 0]);
        assert_eq!(signed_words(&[14, -3, 0], 2, Direction::Lsb), vec!["+0111", "-1100", "+0000"]);
    }

    #[test]
    fn pullback_along_two_and_three() {
        let spec = GroupSpec {
            labels: vec!["2".into(), "3".into()],
            kind: GroupKind::Abelian { free_rank: 1, torsion: vec![], images: vec![vec![2], vec![3]] },
        };
        let pre = pullback_linear(&spec, &TargetSet { free: Some(evens()), torsion_residues: vec![] }, 2).unwrap();
        pre.check_boundary().unwrap();
        for a in -9..=9i64 {
            for b in -9..=9i64 {
                assert_eq!(pre.contains(&[a, b]), b % 2 == 0, "({a},{b})");
            }
        }
        let g = group_pullback(spec, pre).unwrap();
        assert!(g.contains(&[1, 2]) && !g.contains(&[0, 1]));
        let again = GroupAutomaticSet::from_json(&g.to_json()).unwrap();
        assert_eq!(again.spec, g.spec);
        assert_eq!(again.preimage, g.preimage);
        assert!(g.saturation_violation(4).is_none());
    }

    #[test]
    fn pullback_of_a_non_symmetric_set() {
        // S = powers of two in the positive orthant only, Φ(a, b) = a − 2b
        let none = Dfa::constant(2, 1, Direction::Msb, false);
        let s = SignedDfa::assemble(vec![(vec![1], powers_of_two()), (vec![-1], none)]).unwrap();
        let spec = GroupSpec {
            labels: vec!["a".into(), "b".into()],
            kind: GroupKind::Abelian { free_rank: 1, torsion: vec![], images: vec![vec![1], vec![-2]] },
        };
        let pre = pullback_linear(&spec, &TargetSet { free: Some(s), torsion_residues: vec![] }, 2).unwrap();
        for a in -20..=20i64 {
            for b in -20..=20i64 {
                let y = a - 2 * b;
                assert_eq!(pre.contains(&[a, b]), y > 0 && (y & (y - 1)) == 0, "({a},{b})");
            }
        }
    }

    #[test]
    fn torsion_and_identity_pullbacks() {
        let spec =
            GroupSpec { labels: vec!["1".into()], kind: GroupKind::Abelian { free_rank: 0, torsion: vec![2], images: vec![vec![1]] } };
        let pre = pullback_linear(&spec, &TargetSet { free: None, torsion_residues: vec![vec![0]] }, 3).unwrap();
        for x in -30..=30i64 {
            assert_eq!(pre.contains(&[x]), x % 2 == 0);
        }
        let id = GroupSpec { labels: vec!["e".into()], kind: GroupKind::Abelian { free_rank: 1, torsion: vec![], images: vec![vec![1]] } };
        let pre = pullback_linear(&id, &TargetSet { free: Some(evens()), torsion_residues: vec![] }, 2).unwrap();
        for x in -30..=30i64 {
            assert_eq!(pre.contains(&[x]), evens().contains(&[x]));
        }
    }
}
