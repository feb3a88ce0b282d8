//! Randomized cross-checks between the exact constructions and the
//! truncated series oracle. All instances are seeded and reproducible.

mod common;

use common::*;

use fliesskit::automaton::Letter;
use fliesskit::commlang::{compile_constraint, restrict_automaton};
use fliesskit::groebner::{buchberger, GroebnerBasis};
use fliesskit::oracle::{truncate, words_up_to, Side, TruncatedSeries};
use fliesskit::poly::Poly;
use fliesskit::rational::{rat_int, rat_zero};
use fliesskit::series::TruncatedPowerSeries;
use fliesskit::system::fliess_eval;

use proptest::prelude::*;
use rand::Rng;

const DEPTH: usize = 5;

/// Lemma-level semantics of the closure constructions: building an automaton
/// and truncating equals operating on the truncated series directly.
#[test]
fn construction_semantics_match_oracle() {
    let mut r = rng(11);
    for _ in 0..30 {
        let a = random_automaton(&mut r);
        let b = random_automaton_with_alphabet(&mut r, a.alphabet_size);
        let ta = truncate(&a, DEPTH);
        let tb = truncate(&b, DEPTH);

        let c = rat_int(r.gen_range(-3..=3));
        assert_eq!(truncate(&a.scale(&c), DEPTH), ta.scale(&c));
        assert_eq!(truncate(&a.sum(&b), DEPTH), ta.add(&tb).unwrap());
        assert_eq!(truncate(&a.shuffle(&b), DEPTH), ta.shuffle(&tb).unwrap());
        for l in 0..a.alphabet_size {
            let l = Letter(l);
            assert_eq!(
                truncate(&a.left_derivative(l).unwrap(), DEPTH - 1),
                ta.derivative(Side::Left, l).unwrap()
            );
            assert_eq!(
                truncate(&a.right_derivative(l).unwrap(), DEPTH - 1),
                ta.derivative(Side::Right, l).unwrap()
            );
        }
    }
}

/// The Fliess operator is a homomorphism: sums, scalar multiples and shuffle
/// products of series map to sums, multiples and pointwise products of
/// functionals.
#[test]
fn fliess_operator_is_a_homomorphism() {
    let order = 6;
    let mut r = rng(12);
    for _ in 0..20 {
        let a = random_automaton(&mut r);
        let b = random_automaton_with_alphabet(&mut r, a.alphabet_size);
        let m = a.alphabet_size - 1;
        let u = random_inputs(&mut r, m, order);

        let fa = fliess_eval(&a, &u, order).unwrap();
        let fb = fliess_eval(&b, &u, order).unwrap();
        let c = rat_int(r.gen_range(-3..=3));

        assert_eq!(fliess_eval(&a.sum(&b), &u, order).unwrap(), fa.add(&fb));
        assert_eq!(fliess_eval(&a.scale(&c), &u, order).unwrap(), fa.scale(&c));
        assert_eq!(fliess_eval(&a.shuffle(&b), &u, order).unwrap(), fa.mul(&fb));
    }
}

/// Time derivative of an evaluated functional decomposes over left
/// derivatives: (F_g(u))' = sum_j u_j * F_{d_{a_j} g}(u), with u_0 = 1.
#[test]
fn functional_derivative_decomposes_over_left_derivatives() {
    let order = 6;
    let mut r = rng(13);
    for _ in 0..20 {
        let a = random_automaton(&mut r);
        let m = a.alphabet_size - 1;
        let u = random_inputs(&mut r, m, order);

        let lhs = fliess_eval(&a, &u, order).unwrap().differentiate();
        let mut rhs = TruncatedPowerSeries::zero(order - 1);
        for j in 0..a.alphabet_size {
            let du = fliess_eval(&a.left_derivative(Letter(j)).unwrap(), &u, order).unwrap();
            let uj = if j == 0 {
                TruncatedPowerSeries::one(order)
            } else {
                u[j - 1].clone()
            };
            rhs = rhs.add(&uj.mul(&du).truncate(order - 1));
        }
        assert_eq!(lhs, rhs);
    }
}

/// The reachable-configuration ideals form a nondecreasing chain: every
/// generator of the depth-d basis reduces to zero in the depth-(d+1) basis.
#[test]
fn configuration_ideal_chain_is_monotone() {
    let mut r = rng(14);
    for _ in 0..15 {
        let a = random_automaton(&mut r);
        // configurations reachable by words of length <= d
        let mut configs: Vec<Vec<Poly>> = vec![vec![a.init.clone()]];
        for d in 0..3 {
            let mut next = Vec::new();
            for cfg in &configs[d] {
                for l in 0..a.alphabet_size {
                    next.push(a.derive_config(Letter(l), cfg).unwrap());
                }
            }
            configs.push(next);
        }
        let mut bases: Vec<GroebnerBasis> = Vec::new();
        let mut acc: Vec<Poly> = Vec::new();
        for level in &configs {
            acc.extend(level.iter().cloned());
            bases.push(buchberger(&acc));
        }
        for d in 0..bases.len() - 1 {
            for g in bases[d].generators() {
                assert!(
                    bases[d + 1].normal_form(g).is_zero(),
                    "chain not monotone at depth {}",
                    d
                );
            }
        }
    }
}

/// Support restriction: coefficients inside the language are kept verbatim,
/// everything else is zeroed; restricting twice changes nothing; the
/// per-monoid-element restrictions partition the series.
#[test]
fn restriction_soundness_partition_and_idempotence() {
    let mut r = rng(15);
    for _ in 0..20 {
        let a = random_tame_automaton(&mut r);
        let constraint = random_constraint(&mut r, a.alphabet_size);
        let rec = compile_constraint(&constraint, a.alphabet_size).unwrap();
        let restricted = restrict_automaton(&a, &rec);

        let ta = truncate(&a, DEPTH);
        let tr = truncate(&restricted, DEPTH);
        for w in words_up_to(a.alphabet_size, DEPTH) {
            let expected = if rec.member(&w) { ta.get(&w) } else { rat_zero() };
            assert_eq!(tr.get(&w), expected, "restriction unsound on a word");
        }

        // double restriction is the identity on the restricted series
        let twice = restrict_automaton(&restricted, &rec);
        assert_eq!(truncate(&twice, DEPTH), tr);

        // partition identity: summing the restrictions to each monoid
        // element recovers the original series
        if rec.size() <= 24 {
            let mut total = TruncatedSeries::zero(a.alphabet_size, DEPTH);
            for m in 0..rec.size() {
                let part = restrict_automaton(&a, &rec.restrict_to_element(m));
                total = total.add(&truncate(&part, DEPTH)).unwrap();
            }
            assert_eq!(total, ta);
        }
    }
}

// small algebraic property net over the polynomial kernel
proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_laws(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 3, 3, 3);
        let q = random_poly(&mut r, 3, 3, 3);
        let s = random_poly(&mut r, 3, 3, 3);
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&s)), p.mul(&q).add(&p.mul(&s)));
        prop_assert_eq!(p.mul(&q).mul(&s), p.mul(&q.mul(&s)));
        prop_assert_eq!(p.sub(&p), Poly::zero());
    }

    #[test]
    fn partial_derivative_satisfies_leibniz(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 3, 3, 3);
        let q = random_poly(&mut r, 3, 3, 3);
        for v in 0..3 {
            let lhs = p.mul(&q).partial(v);
            let rhs = p.partial(v).mul(&q).add(&p.mul(&q.partial(v)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn normal_form_of_multiples_vanishes(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 2, 2, 2);
        let q = random_poly(&mut r, 2, 2, 2);
        if !p.is_zero() {
            let gb = buchberger(&[p.clone()]);
            prop_assert!(gb.normal_form(&p.mul(&q)).is_zero());
        }
    }

    #[test]
    fn buchberger_is_idempotent(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let gens: Vec<Poly> = (0..2).map(|_| random_poly(&mut r, 2, 2, 2)).collect();
        let gb = buchberger(&gens);
        let again = buchberger(gb.generators());
        prop_assert_eq!(gb.generators(), again.generators());
    }
}

/// Derivatives of coefficients commute with the step rule: deriving a word
/// letter by letter equals deriving it at once.
#[test]
fn word_derivation_is_compositional() {
    let mut r = rng(16);
    for _ in 0..20 {
        let a = random_automaton(&mut r);
        for w in words_up_to(a.alphabet_size, 3) {
            let mut cfg = a.init.clone();
            for &l in &w {
                cfg = a.derive_config(l, &cfg).unwrap();
            }
            assert_eq!(cfg, a.derive_word(&w, &a.init).unwrap());
        }
    }
}

/// Deciding on a fixed automaton twice is deterministic, including witnesses.
#[test]
fn decisions_are_deterministic() {
    let mut r = rng(17);
    for _ in 0..10 {
        let a = random_tame_automaton(&mut r);
        let r1 = fliesskit::decide::zeroness(&a);
        let r2 = fliesskit::decide::zeroness(&a);
        assert_eq!(r1, r2);
    }
    // and witnesses really witness
    let mut r = rng(18);
    for _ in 0..20 {
        let a = random_tame_automaton(&mut r);
        let rep = fliesskit::decide::zeroness(&a);
        if let Some(w) = &rep.witness {
            assert!(!rep.is_zero);
            assert_ne!(a.coeff(w), rat_zero());
            assert!(w.len() <= rep.saturation_depth);
        }
    }
}
