use num_bigint::BigUint;
use proptest::prelude::*;
use zca_core::automaton::{alphabet_size, decode, encode, BoolOp, Dfa, Direction};
use zca_core::bounds::{complexity_bound_chain, element_bounds, min_element_bound, ChainParams};
use zca_core::coeff_field::parse::{parse_element, parse_field};
use zca_core::coeff_field::{CoeffField, FieldElement, Ring};
use zca_core::polyseries::{cartier_decompose_check, parse_poly_in, t_names, SeriesTrunc};
use zca_core::signed_groups::{parse_signed_words, signed_words, SignedDfa};

/// An MSB automaton whose start state loops on the zero letter, so leading
/// zeros are ignored and the language is a set of tuples.
fn arb_dfa() -> impl Strategy<Value = Dfa> {
    (2u32..=3, 1usize..=2, 1usize..=5).prop_flat_map(|(p, d, n)| {
        let sigma = alphabet_size(p, d);
        (proptest::collection::vec(proptest::collection::vec(0..n as u32, sigma), n), proptest::collection::vec(any::<bool>(), n)).prop_map(
            move |(mut delta, accept)| {
                delta[0][0] = 0;
                Dfa::new(p, d, Direction::Msb, 0, delta, accept).unwrap()
            },
        )
    })
}

fn arb_pair() -> impl Strategy<Value = (Dfa, Dfa)> {
    (2u32..=3, 1usize..=2, 1usize..=4, 1usize..=4).prop_flat_map(|(p, d, n, m)| {
        let sigma = alphabet_size(p, d);
        let one = move |n: usize| {
            (proptest::collection::vec(proptest::collection::vec(0..n as u32, sigma), n), proptest::collection::vec(any::<bool>(), n))
                .prop_map(move |(mut delta, accept)| {
                    delta[0][0] = 0;
                    Dfa::new(p, d, Direction::Msb, 0, delta, accept).unwrap()
                })
        };
        (one(n), one(m))
    })
}

fn grid(d: usize, b: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v: Vec<u64>| (0..=b).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn norm(x: &[u64]) -> u64 {
    x.iter().copied().max().unwrap_or(0)
}

/// Random polynomial text over GF(p)(u) in the variables `names`.
fn poly_text(p: u32, names: &[String], terms: &[(u32, u32, Vec<u32>)]) -> String {
    let mut parts = vec!["0".to_string()];
    for (c, a, e) in terms {
        let mut t = format!("{}*u^{a}", c % p);
        for (name, x) in names.iter().zip(e) {
            t.push_str(&format!("*{name}^{x}"));
        }
        parts.push(t);
    }
    parts.join(" + ")
}

fn arb_elem_text() -> impl Strategy<Value = String> {
    (proptest::collection::vec(0u32..5, 1..5), proptest::collection::vec(0u32..5, 1..4)).prop_map(|(n, d)| {
        let poly = |c: &[u32]| c.iter().enumerate().map(|(i, x)| format!("{x}*u^{i}")).collect::<Vec<_>>().join(" + ");
        format!("({}) / (1 + u*({}))", poly(&n), poly(&d))
    })
}

fn elem(k: &CoeffField, s: &str) -> FieldElement {
    parse_element(k, s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, .. ProptestConfig::default() })]

    #[test]
    fn encode_round_trips(p in 2u32..=5, n in proptest::collection::vec(0u64..100_000, 1..=3)) {
        for dir in [Direction::Lsb, Direction::Msb] {
            let w = encode(&n, p, dir);
            prop_assert_eq!(decode(&w, p, n.len(), dir), n.clone());
            let mut padded = w.clone();
            match dir {
                Direction::Lsb => padded.push(0),
                Direction::Msb => padded.insert(0, 0),
            }
            prop_assert_eq!(decode(&padded, p, n.len(), dir), n.clone());
        }
    }

    #[test]
    fn random_automata_are_padding_invariant(a in arb_dfa()) {
        prop_assert!(a.is_padding_invariant());
        let lsb = a.with_direction(Direction::Lsb);
        prop_assert!(lsb.is_padding_invariant());
        prop_assert!(a.equal_on_box(&lsb, 40));
        prop_assert!(a.are_equal(&a.minimize()).unwrap());
    }

    #[test]
    fn products_stay_within_product_complexity((a, b) in arb_pair()) {
        let (ca, cb) = (a.complexity(), b.complexity());
        for op in [BoolOp::And, BoolOp::Or, BoolOp::Xor, BoolOp::Diff] {
            let c = a.combine(op, &b).unwrap();
            prop_assert!(c.complexity() <= ca * cb);
            for n in grid(a.d, 20) {
                prop_assert_eq!(c.accepts(&n), op.apply(a.accepts(&n), b.accepts(&n)));
            }
        }
        prop_assert!(a.complement().complexity() <= ca);
    }

    #[test]
    fn element_bounds_hold(a in arb_dfa()) {
        let comp = a.complexity() as u32;
        let p = a.p;
        match a.find_member() {
            None => prop_assert!(a.enumerate(60).is_empty()),
            Some(w) => {
                prop_assert!(a.accepts(&w));
                prop_assert!(BigUint::from(norm(&w)) <= min_element_bound(comp, p));
            }
        }
        if a.is_finite() {
            let all = a.finite_elements().unwrap();
            let (_, max) = element_bounds(comp, p);
            for x in &all {
                prop_assert!(a.accepts(x));
                prop_assert!(BigUint::from(norm(x)) <= max);
            }
            let limit = all.iter().map(|x| norm(x)).max().unwrap_or(0) + 20;
            prop_assert_eq!(a.enumerate(limit), all);
        }
    }

    #[test]
    fn signed_membership_routes_by_orthant(a in arb_dfa(), x in proptest::collection::vec(-60i64..=60, 2)) {
        let x = &x[..a.d];
        let s = SignedDfa::symmetric(&a);
        let abs: Vec<u64> = x.iter().map(|v| v.unsigned_abs()).collect();
        prop_assert_eq!(s.contains(x), a.accepts(&abs));
        for dir in [Direction::Lsb, Direction::Msb] {
            let words = signed_words(x, a.p, dir);
            let refs: Vec<&str> = words.iter().map(|w| w.as_str()).collect();
            prop_assert_eq!(parse_signed_words(&refs, a.p, dir).unwrap(), x.to_vec());
        }
    }

    #[test]
    fn cartier_identity(p in 2u32..=3, d in 1usize..=2,
                        terms in proptest::collection::vec((1u32..3, 0u32..4, proptest::collection::vec(0u32..7, 2)), 0..8)) {
        let k = parse_field(&format!("GF({p})(u)")).unwrap();
        let names = t_names(d);
        let poly = parse_poly_in(&poly_text(p, &names, &terms), &k, &names).unwrap();
        let g = SeriesTrunc::new(poly, 10);
        prop_assert!(cartier_decompose_check(&g, &k));
    }

    #[test]
    fn pi_decomposition(a in arb_elem_text(), b in arb_elem_text(), p in 2u32..=3) {
        let k = parse_field(&format!("GF({p})(u)")).unwrap();
        let (a, b) = (elem(&k, &a), elem(&k, &b));
        prop_assert_eq!(k.pi_recombine(&k.pi_all(&b)), b.clone());
        // π_ℓ(a^p·b) = a·π_ℓ(b)
        let ap_b = k.mul(&k.frobenius(&a), &b);
        for (l, c) in k.pi_all(&ap_b).iter().enumerate() {
            prop_assert_eq!(c.clone(), k.mul(&a, &k.pi_project(&b, l)));
        }
    }

    #[test]
    fn bound_chain_is_monotone(p in prop::sample::select(vec![2u32, 3, 5]), d in 1u32..=2, h in 1u64..6, s in 1u32..4) {
        let base = complexity_bound_chain(&ChainParams::new(p, d, h, s));
        let more_h = complexity_bound_chain(&ChainParams::new(p, d, h + 1, s));
        let more_s = complexity_bound_chain(&ChainParams::new(p, d, h, s + 1));
        for ((x, y), z) in base.rows().iter().zip(more_h.rows()).zip(more_s.rows()) {
            prop_assert!(x.1 <= y.1, "{} in H", x.0);
            prop_assert!(x.1 <= z.1, "{} in s", x.0);
        }
    }
}
