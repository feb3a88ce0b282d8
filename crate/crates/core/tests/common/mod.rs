//! Shared randomized generators for the integration suites. Everything is
//! seeded, so failures reproduce.
#![allow(dead_code)]

use fliesskit::automaton::{Letter, ShuffleAutomaton};
use fliesskit::commlang::CountConstraint;
use fliesskit::poly::{Monomial, Poly};
use fliesskit::rational::{rat_int, Rat};
use fliesskit::series::TruncatedPowerSeries;
use fliesskit::system::PolynomialSystem;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse random polynomial: up to `max_terms` terms, each a product of at
/// most two variables with total degree <= `max_deg`, integer coefficients
/// with |c| <= 3. Frequently zero, which keeps saturation fast.
pub fn random_poly(r: &mut ChaCha8Rng, nvars: usize, max_terms: usize, max_deg: u32) -> Poly {
    let nterms = r.gen_range(0..=max_terms);
    let mut p = Poly::zero();
    for _ in 0..nterms {
        let c = loop {
            let c: i64 = r.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        let mut pairs: Vec<(usize, u32)> = Vec::new();
        let mut deg = 0;
        for _ in 0..r.gen_range(0..=2usize) {
            if nvars == 0 || deg >= max_deg {
                break;
            }
            let v = r.gen_range(0..nvars);
            let e = r.gen_range(1..=(max_deg - deg));
            deg += e;
            pairs.push((v, e));
        }
        let mono = Monomial::from_pairs(pairs);
        p = p.add(&Poly::term(rat_int(c), mono));
    }
    p
}

pub fn random_automaton(r: &mut ChaCha8Rng) -> ShuffleAutomaton {
    let alphabet_size = r.gen_range(1..=3usize);
    let k = r.gen_range(1..=2usize);
    let names: Vec<String> = (0..k).map(|i| format!("X{}", i)).collect();
    let init = random_poly(r, k, 2, 2);
    let output: Vec<Rat> = (0..k).map(|_| rat_int(r.gen_range(-2..=2))).collect();
    let delta: Vec<Vec<Poly>> = (0..alphabet_size)
        .map(|_| (0..k).map(|_| random_poly(r, k, 1, 2)).collect())
        .collect();
    ShuffleAutomaton::new(alphabet_size, names, init, output, delta).unwrap()
}

/// Random automaton whose configurations stay small under derivation:
/// transitions are affine (quadratic only in the single-nonterminal case),
/// so repeated derivation cannot blow up degrees. Used by the suites that
/// saturate ideals or truncate restricted automata.
pub fn random_tame_automaton(r: &mut ChaCha8Rng) -> ShuffleAutomaton {
    let alphabet_size = r.gen_range(1..=3usize);
    let k = r.gen_range(1..=2usize);
    let delta_deg = if k == 1 { 2 } else { 1 };
    let names: Vec<String> = (0..k).map(|i| format!("X{}", i)).collect();
    let init = random_poly(r, k, 2, 2);
    let output: Vec<Rat> = (0..k).map(|_| rat_int(r.gen_range(-2..=2))).collect();
    let delta: Vec<Vec<Poly>> = (0..alphabet_size)
        .map(|_| (0..k).map(|_| random_poly(r, k, 1, delta_deg)).collect())
        .collect();
    ShuffleAutomaton::new(alphabet_size, names, init, output, delta).unwrap()
}

/// Fully affine transitions, for checks that restrict the support before
/// saturating: restriction multiplies the nonterminal count by the monoid
/// size, and affine transitions keep configuration degrees bounded there.
pub fn random_affine_automaton_with_alphabet(
    r: &mut ChaCha8Rng,
    alphabet_size: usize,
) -> ShuffleAutomaton {
    let k = r.gen_range(1..=2usize);
    let names: Vec<String> = (0..k).map(|i| format!("X{}", i)).collect();
    let init = random_poly(r, k, 2, 2);
    let output: Vec<Rat> = (0..k).map(|_| rat_int(r.gen_range(-2..=2))).collect();
    let delta: Vec<Vec<Poly>> = (0..alphabet_size)
        .map(|_| (0..k).map(|_| random_poly(r, k, 1, 1)).collect())
        .collect();
    ShuffleAutomaton::new(alphabet_size, names, init, output, delta).unwrap()
}

pub fn random_tame_automaton_with_alphabet(
    r: &mut ChaCha8Rng,
    alphabet_size: usize,
) -> ShuffleAutomaton {
    loop {
        let a = random_tame_automaton(r);
        if a.alphabet_size == alphabet_size {
            return a;
        }
    }
}

/// Like `random_automaton` but with a fixed alphabet (needed when two
/// automata must be comparable).
pub fn random_automaton_with_alphabet(r: &mut ChaCha8Rng, alphabet_size: usize) -> ShuffleAutomaton {
    loop {
        let a = random_automaton(r);
        if a.alphabet_size == alphabet_size {
            return a;
        }
    }
}

/// Random system with k <= 3 states, m <= 2 inputs, degree <= 2, coefficient
/// numerators <= 3.
pub fn random_system(r: &mut ChaCha8Rng) -> PolynomialSystem {
    let k = r.gen_range(1..=3usize);
    let m = r.gen_range(1..=2usize);
    let state_names: Vec<String> = (0..k).map(|i| format!("x{}", i + 1)).collect();
    let x0: Vec<Rat> = (0..k).map(|_| rat_int(r.gen_range(-2..=2))).collect();
    let dynamics: Vec<Vec<Poly>> = (0..=m)
        .map(|_| (0..k).map(|_| random_poly(r, k, 2, 2)).collect())
        .collect();
    let output = random_poly(r, k, 2, 2);
    PolynomialSystem { state_names, x0, dynamics, output }
}

/// Random polynomial input: slots are small integers, slot 0 included.
pub fn random_input(r: &mut ChaCha8Rng, order: usize) -> TruncatedPowerSeries {
    let slots: Vec<Rat> = (0..=order).map(|_| rat_int(r.gen_range(-2..=2))).collect();
    TruncatedPowerSeries::from_slots(slots, order)
}

pub fn random_inputs(r: &mut ChaCha8Rng, m: usize, order: usize) -> Vec<TruncatedPowerSeries> {
    (0..m).map(|_| random_input(r, order)).collect()
}

fn random_atom(r: &mut ChaCha8Rng, alphabet_size: usize) -> CountConstraint {
    let a = Letter(r.gen_range(0..alphabet_size));
    match r.gen_range(0..4usize) {
        0 => CountConstraint::AtMost(a, r.gen_range(0..=2)),
        1 => CountConstraint::AtLeast(a, r.gen_range(0..=2)),
        2 => CountConstraint::Exactly(a, r.gen_range(0..=2)),
        _ => {
            let k = r.gen_range(2..=3u32);
            CountConstraint::Mod(a, r.gen_range(0..k), k)
        }
    }
}

/// Random constraint mixing thresholds <= 2 and moduli <= 3, with small
/// boolean structure on top.
pub fn random_constraint(r: &mut ChaCha8Rng, alphabet_size: usize) -> CountConstraint {
    let a = random_atom(r, alphabet_size);
    match r.gen_range(0..4usize) {
        0 => a,
        1 => CountConstraint::Not(Box::new(a)),
        2 => CountConstraint::And(Box::new(a), Box::new(random_atom(r, alphabet_size))),
        _ => CountConstraint::Or(Box::new(a), Box::new(random_atom(r, alphabet_size))),
    }
}
