use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{alphabet_size, digits_of, letter_of, Dfa, Direction};
use crate::error::{Error, Result};

/// Serialized automaton. Each transition is `[from, [digit per coordinate], to]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaJson {
    pub p: u32,
    pub d: usize,
    pub dir: Direction,
    pub states: usize,
    pub start: usize,
    pub accept: Vec<usize>,
    pub delta: Vec<(u32, Vec<u32>, u32)>,
}

impl From<&Dfa> for DfaJson {
    fn from(a: &Dfa) -> Self {
        let mut delta = Vec::with_capacity(a.states() * a.sigma());
        for (s, row) in a.delta.iter().enumerate() {
            for (l, &t) in row.iter().enumerate() {
                delta.push((s as u32, digits_of(l, a.p, a.d), t));
            }
        }
        DfaJson {
            p: a.p,
            d: a.d,
            dir: a.dir,
            states: a.states(),
            start: a.start,
            accept: (0..a.states()).filter(|&s| a.accept[s]).collect(),
            delta,
        }
    }
}

impl TryFrom<DfaJson> for Dfa {
    type Error = Error;

    fn try_from(j: DfaJson) -> Result<Dfa> {
        if j.p < 2 || j.d == 0 {
            return Err(Error::Parse("automaton needs p ≥ 2 and d ≥ 1".into()));
        }
        let sigma = alphabet_size(j.p, j.d);
        let mut delta = vec![vec![u32::MAX; sigma]; j.states];
        for (from, digits, to) in &j.delta {
            if digits.len() != j.d || digits.iter().any(|&x| x >= j.p) {
                return Err(Error::Parse(format!("bad digit tuple {digits:?}")));
            }
            let row = delta.get_mut(*from as usize).ok_or_else(|| Error::Parse(format!("transition from unknown state {from}")))?;
            let slot = &mut row[letter_of(digits, j.p)];
            if *slot != u32::MAX && *slot != *to {
                return Err(Error::Parse(format!("nondeterministic transition from state {from} on {digits:?}")));
            }
            *slot = *to;
        }
        if delta.iter().flatten().any(|&t| t == u32::MAX) {
            return Err(Error::Parse("transition table is not total".into()));
        }
        let mut accept = vec![false; j.states];
        for &s in &j.accept {
            *accept.get_mut(s).ok_or_else(|| Error::Parse(format!("accepting state {s} out of range")))? = true;
        }
        Dfa::new(j.p, j.d, j.dir, j.start, delta, accept).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Dfa {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DfaJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Dfa> {
        let j: DfaJson = serde_json::from_str(s).map_err(|e| Error::Parse(format!("automaton JSON: {e}")))?;
        Dfa::try_from(j)
    }

    /// Graphviz rendering. States are labelled `name/output`; parallel edges
    /// are merged into one comma-separated label.
    pub fn to_dot(&self, names: Option<&[String]>) -> String {
        let mut out = String::new();
        let dir = match self.dir {
            Direction::Lsb => "lsb",
            Direction::Msb => "msb",
        };
        writeln!(out, "digraph dfa {{").unwrap();
        writeln!(out, "  rankdir=LR;\n  label=\"p={} d={} {}\";", self.p, self.d, dir).unwrap();
        writeln!(out, "  init [shape=point];\n  init -> s{};", self.start).unwrap();
        for s in 0..self.states() {
            let name = names.and_then(|n| n.get(s)).cloned().unwrap_or_else(|| s.to_string());
            let shape = if self.accept[s] { "doublecircle" } else { "circle" };
            writeln!(out, "  s{s} [shape={shape}, label=\"{name}/{}\"];", self.accept[s] as u8).unwrap();
        }
        for (s, row) in self.delta.iter().enumerate() {
            let mut edges: BTreeMap<u32, Vec<String>> = BTreeMap::new();
            for (l, &t) in row.iter().enumerate() {
                let digits = digits_of(l, self.p, self.d);
                let label = if self.d == 1 {
                    digits[0].to_string()
                } else {
                    format!("({})", digits.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                };
                edges.entry(t).or_default().push(label);
            }
            for (t, labels) in edges {
                writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", labels.join(", ")).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}
