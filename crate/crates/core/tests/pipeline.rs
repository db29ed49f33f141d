mod common;

use std::time::Instant;

use common::*;
use zca_core::automaton::BoolOp;
use zca_core::kernel::{build_zero_automaton, BuildOptions};

fn build(input: &zca_core::polyseries::AlgebraicInput) -> zca_core::kernel::ZeroAutomatonBuild {
    build_zero_automaton(input, &BuildOptions::default()).unwrap()
}

#[test]
fn artin_schreier_zeros_are_the_non_powers_of_two() {
    let input = artin_schreier();
    let b = build_zero_automaton(&input, &BuildOptions { witness_check: Some(64), ..Default::default() }).unwrap();
    let complement = powers_of_two().complement();
    assert!(b.dfa.are_equal(&complement.with_direction(b.dfa.dir)).unwrap());
    let oracle: Vec<Vec<u64>> = zero_oracle(&input, 300);
    assert_eq!(b.dfa.enumerate(300), oracle);
}

#[test]
fn lech_small_primes() {
    for p in [2u32, 3, 5] {
        let t = Instant::now();
        let b = build(&lech(p));
        let mut expected = vec![vec![1u64]];
        let mut q = p as u64;
        while q <= 10_000 {
            expected.push(vec![q]);
            q *= p as u64;
        }
        assert_eq!(b.dfa.enumerate(10_000), expected, "p = {p}");
        eprintln!("lech p={p}: {} raw states, {:?}", b.raw_states(), t.elapsed());
    }
}

#[test]
fn derksen_example() {
    for p in [2u32, 3] {
        let t = Instant::now();
        let b = build(&derksen(p));
        let mut expected: Vec<u64> = Vec::new();
        let powers: Vec<u64> = (0..8).map(|k| (p as u64).pow(k)).filter(|&x| x <= 200).collect();
        for &a in &powers {
            expected.push(a);
            for &c in &powers {
                expected.push(a + c);
            }
        }
        expected.retain(|&x| x <= 200);
        expected.sort();
        expected.dedup();
        let expected: Vec<Vec<u64>> = expected.into_iter().map(|x| vec![x]).collect();
        assert_eq!(b.dfa.enumerate(200), expected, "p = {p}");
        eprintln!("derksen p={p}: {} raw states, {} minimal, {:?}", b.raw_states(), b.dfa.states(), t.elapsed());
    }
}

#[test]
fn general_engine_matches_rational_engine() {
    for input in [lech(3), derksen(2)] {
        let fast = build(&input);
        let general = build_zero_automaton(&input, &BuildOptions { force_general: true, ..Default::default() }).unwrap();
        assert!(fast.dfa.combine(BoolOp::Xor, &general.dfa).unwrap().is_empty());
    }
}

#[test]
fn christol_random_small() {
    use rand::SeedableRng;
    for (p, d) in [(2u32, 1usize), (3, 1), (2, 2), (3, 2)] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7 + p as u64 * 10 + d as u64);
        for i in 0..20 {
            let input = random_annihilator(p, d, &mut rng);
            let t = Instant::now();
            let rel = zca_core::ore::relation_for(&input).unwrap();
            let t_ore = t.elapsed();
            let b = build(&input);
            let bound = if d == 1 { 512 } else { 12 };
            let got: Vec<Vec<u64>> = common::simplex(d, bound).into_iter().filter(|n| b.dfa.accepts(n)).collect::<Vec<_>>();
            let mut got = got;
            got.sort();
            assert_eq!(got, zero_oracle(&input, bound), "p={p} d={d} #{i}");
            eprintln!(
                "p={p} d={d} #{i}: s={} M={} ore {:?} total {:?} raw {} min {}",
                rel.s(),
                rel.m(),
                t_ore,
                t.elapsed(),
                b.raw_states(),
                b.dfa.states()
            );
        }
    }
}

#[test]
fn fixture_automata_are_padding_invariant_and_round_trip() {
    use zca_core::automaton::{Dfa, Direction};
    let mut inputs = vec![lech(2), lech(5), derksen(3), artin_schreier()];
    inputs.extend(annihilator_fixtures().into_iter().map(|(_, i)| i));
    for input in &inputs {
        let z = build(input).dfa;
        assert!(z.is_padding_invariant());
        let msb = z.with_direction(Direction::Msb);
        assert!(msb.is_padding_invariant());
        let back = Dfa::from_json(&z.to_json()).unwrap();
        assert!(back.are_equal(&z).unwrap());
        assert_eq!(back.to_json(), z.to_json());
        for n in simplex(input.d, 10) {
            assert_eq!(z.accepts(&n), msb.accepts(&n));
        }
        let order = if input.d == 1 { 64 } else { 16 };
        let got: Vec<Vec<u64>> = simplex(input.d, order).into_iter().filter(|n| z.accepts(n)).collect();
        assert_eq!(got, zero_oracle(input, order));
    }
}
