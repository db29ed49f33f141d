#![allow(dead_code)]

use zca_core::automaton::{Dfa, Direction};
use zca_core::polyseries::{parse_input, AlgebraicInput};

/// a(n) = (1+u)^n − u^n − 1 over F_p(u).
pub fn lech(p: u32) -> AlgebraicInput {
    let text = format!("field GF({p})(u)\nrational d=1\nf = 1/(1-(1+u)*t) - 1/(1-u*t) - 1/(1-t)\n");
    parse_input(&text, None).unwrap()
}

/// a(n) = (x+y+z)^n − (x+y)^n − (x+z)^n − (y+z)^n + x^n + y^n + z^n over F_p(x,y,z).
pub fn derksen(p: u32) -> AlgebraicInput {
    let text = format!(
        "field GF({p})(x,y,z)\nrational d=1\n\
         f = 1/(1-(x+y+z)*t) - 1/(1-(x+y)*t) - 1/(1-(x+z)*t) - 1/(1-(y+z)*t) + 1/(1-x*t) + 1/(1-y*t) + 1/(1-z*t)\n"
    );
    parse_input(&text, None).unwrap()
}

/// The root of X² + X + t with a(0) = 0, i.e. Σ t^{2^k}.
pub fn artin_schreier() -> AlgebraicInput {
    parse_input("field GF(2)\nannihilator d=1\nP = X^2 + X + t\nseed order=0\n0 : 0\n", None).unwrap()
}

/// MSB acceptor of the powers of two (three states, last one a sink).
pub fn powers_of_two() -> Dfa {
    Dfa::new(2, 1, Direction::Msb, 0, vec![vec![0, 1], vec![1, 2], vec![2, 2]], vec![false, true, false]).unwrap()
}

/// MSB acceptor of 5N+3, states being residues mod 5.
pub fn five_n_plus_three() -> Dfa {
    let delta = (0..5u32).map(|r| (0..2u32).map(|x| (2 * r + x) % 5).collect()).collect();
    Dfa::new(2, 1, Direction::Msb, 0, delta, (0..5).map(|r| r == 3).collect()).unwrap()
}

/// Indices n with |n|₁ ≤ order whose coefficient vanishes, in lexicographic order.
pub fn zero_oracle(input: &AlgebraicInput, order: u32) -> Vec<Vec<u64>> {
    let s = input.expand(order).unwrap();
    let k = &*input.field;
    let mut out = Vec::new();
    for n in simplex(input.d, order) {
        let idx: Vec<u32> = n.iter().map(|&x| x as u32).collect();
        if s.coeff(&idx, k).unwrap().is_zero() {
            out.push(n);
        }
    }
    out.sort();
    out
}

/// All d-tuples with coordinate sum ≤ order.
pub fn simplex(d: usize, order: u32) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for v in &out {
            let used: u64 = v.iter().sum();
            for x in 0..=(order as u64 - used) {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// A random annihilator P of X-degree ≤ 3 and t-height ≤ 3 over F_p with a
/// seed a(0) = c satisfying P(c)|_{t=0} = 0 and P'(c)|_{t=0} ≠ 0, so the
/// root is isolated by its constant term. Terms are kept sparse.
pub fn random_annihilator(p: u32, d: usize, rng: &mut impl rand::Rng) -> AlgebraicInput {
    use zca_core::polyseries::t_names;
    let names = t_names(d);
    loop {
        let deg = rng.gen_range(1..=3u32);
        let c: u32 = rng.gen_range(0..p);
        // coefficients P_i(0) and their t-parts
        let mut consts: Vec<u32> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
        if consts[deg as usize] == 0 {
            consts[deg as usize] = 1;
        }
        // force P(c)(0) = 0 through the constant coefficient
        let rest: u64 = (1..=deg as usize).map(|i| consts[i] as u64 * (c as u64).pow(i as u32)).sum();
        consts[0] = ((p as u64 - rest % p as u64) % p as u64) as u32;
        let deriv: u64 = (1..=deg as usize).map(|i| i as u64 * consts[i] as u64 * (c as u64).pow(i as u32 - 1)).sum();
        if deriv.is_multiple_of(p as u64) {
            continue;
        }
        let mut terms = Vec::new();
        for i in 0..=deg {
            if consts[i as usize] != 0 {
                terms.push(format!("{}*X^{i}", consts[i as usize]));
            }
            for _ in 0..rng.gen_range(0..=2) {
                let mut mono = Vec::new();
                let mut budget = rng.gen_range(1..=3u32);
                for name in &names {
                    let e = rng.gen_range(0..=budget);
                    budget -= e;
                    if e > 0 {
                        mono.push(format!("{name}^{e}"));
                    }
                }
                if mono.is_empty() {
                    mono.push(names[0].to_string());
                }
                terms.push(format!("{}*{}*X^{i}", rng.gen_range(1..p), mono.join("*")));
            }
        }
        let zero: Vec<String> = vec!["0".into(); d];
        let text = format!("field GF({p})\nannihilator d={d}\nP = {}\nseed order=0\n{} : {c}\n", terms.join(" + "), zero.join(","));
        return parse_input(&text, None).unwrap();
    }
}

/// Named annihilator fixtures, each with the seed a(0) = 0 at a simple root.
pub fn annihilator_fixtures() -> Vec<(&'static str, AlgebraicInput)> {
    [
        ("cubic over F_3", "field GF(3)\nannihilator d=1\nP = X^3 - X + t\nseed order=0\n0 : 0\n"),
        ("quadratic over F_3(u)", "field GF(3)(u)\nannihilator d=1\nP = X^2 + X - u*t\nseed order=0\n0 : 0\n"),
        ("quadratic in two variables", "field GF(2)\nannihilator d=2\nP = X^2 + (1+t1)*X + t1*t2\nseed order=0\n0,0 : 0\n"),
        ("cubic in two variables", "field GF(2)\nannihilator d=2\nP = X^3 + X + t1 + t2^2\nseed order=0\n0,0 : 0\n"),
        ("quadratic over F_5", "field GF(5)\nannihilator d=1\nP = X^2 + 2*X + t + t^2\nseed order=0\n0 : 0\n"),
    ]
    .into_iter()
    .map(|(name, text)| (name, parse_input(text, None).unwrap()))
    .collect()
}
