//! Text formats: t-polynomials, rational functions, and input files.
//!
//! ```text
//! field GF(2)(u)
//! rational d=1
//! f = 1/(1-(1+u)*t) - 1/(1-u*t) - 1/(1-t)
//! ```
//!
//! ```text
//! annihilator d=1
//! P = X^2 + X + t
//! seed order=0
//! 0 : 0
//! ```

use std::sync::Arc;

use super::{tconst, AlgebraicInput, InputKind, Mixed, SeriesTrunc, TPoly};
use crate::coeff_field::parse::{base_generator, eval, parse_element, parse_expr, parse_field, Target};
use crate::coeff_field::{CoeffField, FieldElement, FieldRef, Mono, Ring};
use crate::error::{Error, Result};
use crate::ore::OreRelation;

/// `t` for d = 1, otherwise `t1..td`.
pub fn t_names(d: usize) -> Vec<String> {
    if d == 1 {
        vec!["t".into()]
    } else {
        (1..=d).map(|i| format!("t{i}")).collect()
    }
}

fn t_index(name: &str, d: usize) -> Option<usize> {
    if d == 1 && (name == "t" || name == "t1") {
        return Some(0);
    }
    let i: usize = name.strip_prefix('t')?.parse().ok()?;
    (1..=d).contains(&i).then(|| i - 1)
}

fn constant_symbol(k: &CoeffField, name: &str) -> Result<FieldElement> {
    if name == "a" {
        return Ok(k.from_base(base_generator(k.base())?));
    }
    match k.var_names().iter().position(|v| v == name) {
        Some(i) => Ok(k.var(i)),
        None => Err(Error::Parse(format!("unknown symbol {name:?}"))),
    }
}

fn as_constant(a: &TPoly) -> Option<FieldElement> {
    match a.terms() {
        [] => None,
        [(m, c)] if m.is_one() => Some(c.clone()),
        _ => None,
    }
}

/// Polynomials in t over K; division only by nonzero constants.
struct TPolyTarget<'a> {
    k: &'a CoeffField,
    d: usize,
    names: Option<&'a [String]>,
}

impl Target for TPolyTarget<'_> {
    type V = TPoly;
    fn int(&self, n: i64) -> Result<TPoly> {
        Ok(tconst(self.k.from_int(n), self.d, self.k))
    }
    fn name(&self, s: &str) -> Result<TPoly> {
        let index = match self.names {
            Some(names) => names.iter().position(|n| n == s),
            None => t_index(s, self.d),
        };
        match index {
            Some(i) => Ok(TPoly::var(i, self.d, self.k)),
            None => Ok(tconst(constant_symbol(self.k, s)?, self.d, self.k)),
        }
    }
    fn add(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        Ok(a.add(b, self.k))
    }
    fn sub(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        Ok(a.sub(b, self.k))
    }
    fn mul(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        Ok(a.mul(b, self.k))
    }
    fn neg(&self, a: &TPoly) -> Result<TPoly> {
        Ok(a.neg(self.k))
    }
    fn div(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        let c = as_constant(b).ok_or_else(|| Error::Parse("division by a non-constant in a polynomial".into()))?;
        Ok(a.scale(&self.k.inv_elem(&c)?, self.k))
    }
}

pub fn parse_tpoly(s: &str, k: &CoeffField, d: usize) -> Result<TPoly> {
    eval(&parse_expr(s)?, &TPolyTarget { k, d, names: None })
}

/// A polynomial over K in the given variable names.
pub fn parse_poly_in(s: &str, k: &CoeffField, names: &[String]) -> Result<TPoly> {
    eval(&parse_expr(s)?, &TPolyTarget { k, d: names.len(), names: Some(names) })
}

/// Rational functions in t as unreduced (numerator, denominator) pairs.
struct RatTarget<'a> {
    inner: TPolyTarget<'a>,
}

impl Target for RatTarget<'_> {
    type V = (TPoly, TPoly);
    fn int(&self, n: i64) -> Result<(TPoly, TPoly)> {
        Ok((self.inner.int(n)?, self.inner.int(1)?))
    }
    fn name(&self, s: &str) -> Result<(TPoly, TPoly)> {
        Ok((self.inner.name(s)?, self.inner.int(1)?))
    }
    fn add(&self, a: &(TPoly, TPoly), b: &(TPoly, TPoly)) -> Result<(TPoly, TPoly)> {
        let k = self.inner.k;
        if a.1 == b.1 {
            return Ok((a.0.add(&b.0, k), a.1.clone()));
        }
        Ok((a.0.mul(&b.1, k).add(&b.0.mul(&a.1, k), k), a.1.mul(&b.1, k)))
    }
    fn sub(&self, a: &(TPoly, TPoly), b: &(TPoly, TPoly)) -> Result<(TPoly, TPoly)> {
        self.add(a, &self.neg(b)?)
    }
    fn mul(&self, a: &(TPoly, TPoly), b: &(TPoly, TPoly)) -> Result<(TPoly, TPoly)> {
        let k = self.inner.k;
        Ok((a.0.mul(&b.0, k), a.1.mul(&b.1, k)))
    }
    fn neg(&self, a: &(TPoly, TPoly)) -> Result<(TPoly, TPoly)> {
        Ok((a.0.neg(self.inner.k), a.1.clone()))
    }
    fn div(&self, a: &(TPoly, TPoly), b: &(TPoly, TPoly)) -> Result<(TPoly, TPoly)> {
        if b.0.is_zero() {
            return Err(Error::Parse("division by zero".into()));
        }
        let k = self.inner.k;
        Ok((a.0.mul(&b.1, k), a.1.mul(&b.0, k)))
    }
}

pub fn parse_rational(s: &str, k: &CoeffField, d: usize) -> Result<(TPoly, TPoly)> {
    eval(&parse_expr(s)?, &RatTarget { inner: TPolyTarget { k, d, names: None } })
}

/// Polynomials in X with coefficients in K[t].
struct XPolyTarget<'a> {
    inner: TPolyTarget<'a>,
}

impl XPolyTarget<'_> {
    fn trim(mut v: Vec<TPoly>) -> Vec<TPoly> {
        while v.len() > 1 && v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        v
    }
}

impl Target for XPolyTarget<'_> {
    type V = Vec<TPoly>;
    fn int(&self, n: i64) -> Result<Vec<TPoly>> {
        Ok(vec![self.inner.int(n)?])
    }
    fn name(&self, s: &str) -> Result<Vec<TPoly>> {
        if s == "X" {
            return Ok(vec![TPoly::zero(self.inner.d), self.inner.int(1)?]);
        }
        Ok(vec![self.inner.name(s)?])
    }
    fn add(&self, a: &Vec<TPoly>, b: &Vec<TPoly>) -> Result<Vec<TPoly>> {
        let k = self.inner.k;
        let n = a.len().max(b.len());
        let z = TPoly::zero(self.inner.d);
        Ok(Self::trim((0..n).map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z), k)).collect()))
    }
    fn sub(&self, a: &Vec<TPoly>, b: &Vec<TPoly>) -> Result<Vec<TPoly>> {
        self.add(a, &self.neg(b)?)
    }
    fn neg(&self, a: &Vec<TPoly>) -> Result<Vec<TPoly>> {
        Ok(a.iter().map(|x| x.neg(self.inner.k)).collect())
    }
    fn mul(&self, a: &Vec<TPoly>, b: &Vec<TPoly>) -> Result<Vec<TPoly>> {
        let k = self.inner.k;
        let mut out = vec![TPoly::zero(self.inner.d); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y, k), k);
            }
        }
        Ok(Self::trim(out))
    }
    fn div(&self, a: &Vec<TPoly>, b: &Vec<TPoly>) -> Result<Vec<TPoly>> {
        if b.len() != 1 {
            return Err(Error::Parse("division by a polynomial in X".into()));
        }
        a.iter().map(|x| self.inner.div(x, &b[0])).collect()
    }
}

pub fn parse_xpoly(s: &str, k: &CoeffField, d: usize) -> Result<Vec<TPoly>> {
    eval(&parse_expr(s)?, &XPolyTarget { inner: TPolyTarget { k, d, names: None } })
}

pub fn format_tpoly(a: &TPoly, k: &CoeffField, names: &[String]) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = a
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut factors = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let cs = k.format(c);
            let cs = if cs.contains(['+', '/', ' ']) { format!("({cs})") } else { cs };
            if factors.is_empty() {
                cs
            } else if *c == Ring::one(k) {
                factors.join("*")
            } else {
                format!("{}*{}", cs, factors.join("*"))
            }
        })
        .collect();
    parts.join(" + ")
}

fn header_params(line: &str) -> std::collections::BTreeMap<String, String> {
    line.split_whitespace().skip(1).filter_map(|kv| kv.split_once('=').map(|(a, b)| (a.to_string(), b.to_string()))).collect()
}

fn param_usize(map: &std::collections::BTreeMap<String, String>, key: &str) -> Result<usize> {
    map.get(key)
        .ok_or_else(|| Error::Parse(format!("header missing {key}=")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad value for {key}")))
}

fn parse_seed(lines: &[&str], header: &str, k: &CoeffField, d: usize) -> Result<SeriesTrunc> {
    let order = param_usize(&header_params(header), "order")? as u32;
    let mut terms = Vec::new();
    for l in lines {
        let (idx, val) = l.split_once(':').ok_or_else(|| Error::Parse(format!("seed line needs ':' : {l:?}")))?;
        let exps: Vec<u32> = idx
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad seed index {idx:?}"))))
            .collect::<Result<_>>()?;
        if exps.len() != d {
            return Err(Error::Parse(format!("seed index {idx:?} must have {d} entries")));
        }
        if exps.iter().sum::<u32>() > order {
            return Err(Error::Parse(format!("seed index {idx:?} exceeds order {order}")));
        }
        terms.push((Mono::from_slice(&exps), parse_element(k, val.trim())?));
    }
    Ok(SeriesTrunc::new(TPoly::from_terms(d, terms, k), order))
}

fn implicit_d(lines: &[&str]) -> usize {
    lines
        .iter()
        .flat_map(|l| l.split(|c: char| !c.is_ascii_alphanumeric()))
        .filter_map(|w| match w {
            "t" => Some(1),
            _ => w.strip_prefix('t')?.parse::<usize>().ok(),
        })
        .max()
        .unwrap_or(1)
}

fn assignment<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let (lhs, rhs) = line.split_once('=')?;
    (lhs.trim() == key).then(|| rhs.trim())
}

/// Parses an input file. The field comes from a `field` line or from
/// `default_field`; when both are present they must agree.
pub fn parse_input(text: &str, default_field: Option<FieldRef>) -> Result<AlgebraicInput> {
    let lines: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty()).collect();
    let mut field = default_field;
    let mut i = 0;
    if let Some(spec) = lines.first().and_then(|l| l.strip_prefix("field ")) {
        let f = Arc::new(parse_field(spec)?);
        if let Some(g) = &field {
            if **g != *f {
                return Err(Error::Parameter(format!("field {} in file differs from {}", f.spec_string(), g.spec_string())));
            }
        }
        field = Some(f);
        i = 1;
    }
    let field = field.ok_or_else(|| Error::Parameter("no coefficient field given".into()))?;
    let k = &*field;
    let mut header = *lines.get(i).ok_or_else(|| Error::Parse("empty input".into()))?;
    // a bare `f = ...` line is a rational input with d read off the t-names
    let implicit;
    let mut body_start = i + 1;
    if assignment(header, "f").is_some() {
        implicit = format!("rational d={}", implicit_d(&lines[i..]));
        header = &implicit;
        body_start = i;
    }
    let params = header_params(header);
    let d = param_usize(&params, "d")?;
    if d == 0 {
        return Err(Error::Parameter("d must be at least 1".into()));
    }
    for n in t_names(d) {
        if k.var_names().contains(&n) {
            return Err(Error::Parameter(format!("{n} names both a series and a field variable")));
        }
    }
    let body = &lines[body_start..];
    let seed_at = body.iter().position(|l| l.starts_with("seed"));
    let main = &body[..seed_at.unwrap_or(body.len())];
    let seed = |k: &CoeffField| -> Result<SeriesTrunc> {
        let at = seed_at.ok_or_else(|| Error::Parse("missing seed block".into()))?;
        parse_seed(&body[at + 1..], body[at], k, d)
    };
    let kind = header.split_whitespace().next().unwrap_or("");
    match kind {
        "rational" => {
            let (a, b) = if let Some(fx) = main.iter().find_map(|l| assignment(l, "f")) {
                parse_rational(fx, k, d)?
            } else {
                let a = main.iter().find_map(|l| assignment(l, "A")).ok_or_else(|| Error::Parse("missing A = ...".into()))?;
                let b = main.iter().find_map(|l| assignment(l, "B")).ok_or_else(|| Error::Parse("missing B = ...".into()))?;
                (parse_tpoly(a, k, d)?, parse_tpoly(b, k, d)?)
            };
            AlgebraicInput::rational(field.clone(), a, b)
        }
        "annihilator" => {
            let px = main.iter().find_map(|l| assignment(l, "P")).ok_or_else(|| Error::Parse("missing P = ...".into()))?;
            let p = parse_xpoly(px, k, d)?;
            AlgebraicInput::annihilator(field.clone(), p, seed(k)?)
        }
        "ore" => {
            let s = param_usize(&params, "s")?;
            if let Some(p) = params.get("p") {
                if p.parse::<u32>().ok() != Some(k.p()) {
                    return Err(Error::Parameter(format!("ore block for p={p} used with {}", k.spec_string())));
                }
            }
            let q: Vec<TPoly> = (0..=s)
                .map(|j| {
                    let key = format!("Q{j}");
                    let line = main.iter().find_map(|l| assignment(l, &key)).ok_or_else(|| Error::Parse(format!("missing {key}")))?;
                    parse_tpoly(line, k, d)
                })
                .collect::<Result<_>>()?;
            let rel = OreRelation::new(d, Mixed::new(k, d).clear_all(&q))?;
            AlgebraicInput::ore(field.clone(), rel, seed(k)?)
        }
        other => Err(Error::Parse(format!("unknown input kind {other:?}"))),
    }
}

fn write_seed(seed: &SeriesTrunc, k: &CoeffField) -> String {
    let mut out = format!("seed order={}\n", seed.order);
    for (m, c) in seed.poly.terms().iter().rev() {
        let idx: Vec<String> = m.exps().iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("{} : {}\n", idx.join(","), k.format(c)));
    }
    out
}

/// Serializes an input in the format read by [`parse_input`].
pub fn write_input(input: &AlgebraicInput) -> String {
    let k = &*input.field;
    let names = t_names(input.d);
    let mut out = format!("field {}\n", k.spec_string());
    match &input.kind {
        InputKind::Rational { a, b } => {
            out.push_str(&format!("rational d={}\n", input.d));
            out.push_str(&format!("A = {}\nB = {}\n", format_tpoly(a, k, &names), format_tpoly(b, k, &names)));
        }
        InputKind::Annihilator { p, seed } => {
            out.push_str(&format!("annihilator d={}\n", input.d));
            let terms: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    let c = format_tpoly(c, k, &names);
                    match i {
                        0 => format!("({c})"),
                        1 => format!("({c})*X"),
                        _ => format!("({c})*X^{i}"),
                    }
                })
                .collect();
            out.push_str(&format!("P = {}\n", terms.join(" + ")));
            out.push_str(&write_seed(seed, k));
        }
        InputKind::Ore { rel, seed } => {
            out.push_str(&rel.to_text(k));
            out.push_str(&write_seed(seed, k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lech_file_roundtrip() {
        let text = "field GF(2)(u)\nrational d=1\nf = 1/(1-(1+u)*t) - 1/(1-u*t) - 1/(1-t)\n";
        let input = parse_input(text, None).unwrap();
        let s = input.expand(4).unwrap();
        let k = &*input.field;
        let u = k.var(0);
        assert!(s.coeff(&[1], k).unwrap().is_zero());
        assert!(s.coeff(&[2], k).unwrap().is_zero());
        assert_eq!(s.coeff(&[3], k).unwrap(), k.add(&u, &k.mul(&u, &u)));
        assert!(s.coeff(&[4], k).unwrap().is_zero());
        let again = parse_input(&write_input(&input), None).unwrap();
        assert_eq!(again.expand(12).unwrap(), input.expand(12).unwrap());
    }

    #[test]
    fn bare_rational_line() {
        let k: FieldRef = Arc::new(parse_field("GF(3)(u)").unwrap());
        let input = parse_input("f = 1/(1-u*t1) + t2\n", Some(k.clone())).unwrap();
        assert_eq!(input.d, 2);
        let full = parse_input("rational d=2\nf = 1/(1-u*t1) + t2\n", Some(k)).unwrap();
        assert_eq!(input.expand(6).unwrap(), full.expand(6).unwrap());
    }

    #[test]
    fn annihilator_file_roundtrip() {
        let text = "field GF(2)\nannihilator d=1\nP = X^2 + X + t\nseed order=0\n0 : 0\n";
        let input = parse_input(text, None).unwrap();
        let again = parse_input(&write_input(&input), None).unwrap();
        assert_eq!(again.expand(16).unwrap(), input.expand(16).unwrap());
    }

    #[test]
    fn field_mismatch_rejected() {
        let text = "field GF(3)\nrational d=1\nA = 1\nB = 1-t\n";
        let other = Arc::new(CoeffField::prime(2).unwrap());
        assert!(parse_input(text, Some(other)).is_err());
    }
}
