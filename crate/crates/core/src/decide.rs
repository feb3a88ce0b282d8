//! Exact decision procedures: zeroness via ideal-chain saturation, equality,
//! commutative-regular support inclusion, commutativity, and the system-level
//! analyses built on them.

use num::Zero;

use crate::automaton::{Letter, ShuffleAutomaton, Word};
use crate::commlang::{
    compile_constraint, exactly_one_of, none_of, restrict_automaton, CommutativeRecognizer,
    ConstraintError, CountConstraint,
};
use crate::groebner::GroebnerBasis;
use crate::poly::Poly;
use crate::system::{system_to_automaton, PolynomialSystem};

/// Outcome of the ideal-chain saturation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeronessReport {
    pub is_zero: bool,
    /// Depth N at which the chain I_N = I_{N+1} stabilised.
    pub saturation_depth: usize,
    /// Shortest (then lexicographically least) word with nonzero coefficient.
    pub witness: Option<Word>,
    /// Number of ideal generators accumulated at saturation.
    pub generator_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Zero,
    Equivalence,
    Independence,
    Linearity,
    Analyticity,
    Stationarity,
    TimeInvariance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub property: Property,
    pub verdict: bool,
    pub inputs: Vec<usize>,
    pub witness: Option<Word>,
    /// For commutativity: the first letter pair whose check failed.
    pub failing_pair: Option<(Letter, Letter)>,
    pub subreports: Vec<ZeronessReport>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DecideError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("input index {0} out of range 1..={1}")]
    InputOutOfRange(usize, usize),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}

/// Pruning structure for the saturation: the linear span of the accepted
/// configurations when the transitions are affine (configuration degree is
/// then bounded, so the span is finite-dimensional and Gaussian elimination
/// decides membership), and the generated ideal otherwise (termination by
/// Hilbert's basis theorem). Both are sound: the left derivative and the
/// evaluation at the output point are linear in the configuration, so a
/// span that is closed under derivation and evaluates to zero certifies
/// zeroness just like a derivation-closed ideal does.
enum Saturator {
    Span(std::collections::BTreeMap<crate::poly::Monomial, Poly>),
    Ideal(GroebnerBasis),
}

impl Saturator {
    fn for_automaton(a: &ShuffleAutomaton) -> Saturator {
        let affine = a
            .delta
            .iter()
            .flatten()
            .all(|p| p.total_degree() <= 1);
        if affine {
            Saturator::Span(std::collections::BTreeMap::new())
        } else {
            Saturator::Ideal(GroebnerBasis::empty())
        }
    }

    /// Normal form against the echelon rows: eliminate the leading monomial
    /// while some row shares it.
    fn span_reduce(rows: &std::collections::BTreeMap<crate::poly::Monomial, Poly>, p: &Poly) -> Poly {
        let mut work = p.clone();
        while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match rows.get(&lm) {
                Some(row) => work = work.sub(&row.scale(&lc)),
                None => break,
            }
        }
        work
    }

    fn contains(&self, p: &Poly) -> bool {
        match self {
            Saturator::Span(rows) => Saturator::span_reduce(rows, p).is_zero(),
            Saturator::Ideal(basis) => basis.contains(p),
        }
    }

    fn insert(&mut self, p: &Poly) {
        match self {
            Saturator::Span(rows) => {
                let r = Saturator::span_reduce(rows, p);
                if let Some((lm, _)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
                    rows.insert(lm, r.monic());
                }
            }
            Saturator::Ideal(basis) => *basis = basis.extended(p),
        }
    }
}

/// Decide whether the recognised series is zero.
///
/// Saturates the nondecreasing chain of subspaces (affine transitions) or
/// ideals (general transitions) generated by the reachable configurations,
/// breadth-first over words; a configuration already in the closure
/// generates nothing new and is pruned. Afterwards the series is zero iff
/// every accumulated generator vanishes at the output point.
pub fn zeroness(a: &ShuffleAutomaton) -> ZeronessReport {
    // Configurations are visited breadth-first, children in letter order, so
    // accepted configurations appear in shortlex word order. The first one
    // with a nonzero value at the output point is returned immediately: any
    // shortlex-earlier word either was accepted with value zero, or was
    // pruned — and a pruned configuration is a polynomial combination of
    // earlier generators, so its whole coefficient tail is built from
    // shortlex-earlier coefficients and vanishes with them. Hence the early
    // witness is the overall shortest (then lexicographically least) one.
    let mut generator_count = 0usize;
    let mut basis = Saturator::for_automaton(a);
    let mut frontier: Vec<(Word, Poly)> = Vec::new();
    let mut saturation_depth = 0usize;

    let mut accept = |basis: &mut Saturator, w: Word, cfg: Poly, out: &mut Vec<(Word, Poly)>| {
        generator_count += 1;
        if !cfg.eval(&a.output).expect("closed config").is_zero() {
            return Some(w);
        }
        basis.insert(&cfg);
        out.push((w, cfg));
        None
    };

    if !basis.contains(&a.init) {
        if let Some(w) = accept(&mut basis, Vec::new(), a.init.clone(), &mut frontier) {
            return ZeronessReport {
                is_zero: false,
                saturation_depth: 0,
                witness: Some(w),
                generator_count,
            };
        }
    }

    let mut depth = 0usize;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for (w, cfg) in &frontier {
            for l in 0..a.alphabet_size {
                let child = a.derive_config(Letter(l), cfg).expect("valid config");
                if !basis.contains(&child) {
                    let mut ww = w.clone();
                    ww.push(Letter(l));
                    if let Some(witness) = accept(&mut basis, ww, child, &mut next) {
                        return ZeronessReport {
                            is_zero: false,
                            saturation_depth: depth,
                            witness: Some(witness),
                            generator_count,
                        };
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        saturation_depth = depth;
        frontier = next;
    }

    ZeronessReport {
        is_zero: true,
        saturation_depth,
        witness: None,
        generator_count,
    }
}

/// Equality of two recognised series, reduced to zeroness of the difference.
pub fn equal(a: &ShuffleAutomaton, b: &ShuffleAutomaton) -> Result<ZeronessReport, DecideError> {
    if a.alphabet_size != b.alphabet_size {
        return Err(DecideError::AlphabetMismatch(a.alphabet_size, b.alphabet_size));
    }
    Ok(zeroness(&a.sum(&b.scale(&crate::rational::rat_int(-1)))))
}

/// support(A) included in the recognizer's language, by restricting to the
/// complement and testing zeroness.
pub fn support_subset_rec(
    a: &ShuffleAutomaton,
    rec: &CommutativeRecognizer,
    property: Property,
    inputs: Vec<usize>,
) -> AnalysisReport {
    let restricted = restrict_automaton(a, &rec.complement());
    let report = zeroness(&restricted);
    AnalysisReport {
        property,
        verdict: report.is_zero,
        inputs,
        witness: report.witness.clone(),
        failing_pair: None,
        subreports: vec![report],
    }
}

pub fn support_subset(
    a: &ShuffleAutomaton,
    c: &CountConstraint,
) -> Result<AnalysisReport, DecideError> {
    let rec = compile_constraint(c, a.alphabet_size)?;
    Ok(support_subset_rec(a, &rec, Property::Independence, Vec::new()))
}

/// Commutativity in a sub-alphabet. A letter of `gamma` may move across
/// arbitrary letters, so the rotation equation (read the letter now = read it
/// at the very end) must hold under every prefix, not only for the initial
/// series. Each letter is decided by a single zeroness query: extend the
/// automaton with a marker letter whose series at `u # w` is the difference
/// coeff(u·la·w) − coeff(u·w·la), restrict the support to words reading the
/// marker exactly once, and saturate.
pub fn commutative_in(
    a: &ShuffleAutomaton,
    gamma: &[Letter],
) -> Result<AnalysisReport, DecideError> {
    for l in gamma {
        if l.0 >= a.alphabet_size {
            return Err(DecideError::AlphabetMismatch(l.0, a.alphabet_size));
        }
    }
    let mut subreports = Vec::new();
    let marker = Letter(a.alphabet_size);
    for &la in gamma {
        let diff = rotation_difference(a, la);
        let rec = compile_constraint(&CountConstraint::Exactly(marker, 1), diff.alphabet_size)
            .expect("marker constraint is well formed");
        let report = zeroness(&restrict_automaton(&diff, &rec));
        if !report.is_zero {
            // the witness reads the marker once; reading `la` there instead
            // of at the end of the word changes the coefficient
            let witness = report
                .witness
                .clone()
                .map(|w| w.into_iter().map(|l| if l == marker { la } else { l }).collect());
            return Ok(AnalysisReport {
                property: Property::Analyticity,
                verdict: false,
                inputs: Vec::new(),
                witness,
                failing_pair: Some((la, la)),
                subreports: vec![report],
            });
        }
        subreports.push(report);
    }
    Ok(AnalysisReport {
        property: Property::Analyticity,
        verdict: true,
        inputs: Vec::new(),
        witness: None,
        failing_pair: None,
        subreports,
    })
}

/// Extend `a` with a marker letter `#`. Nonterminals are the original X_i
/// plus Y_i tracking the right derivative by `la` (chain rule, as in
/// `right_derivative`); the marker reads as `Δ_la − (X_i ↦ Y_i)`. On a word
/// `u # w` the series is coeff(u·la·w) − coeff(u·w·la).
fn rotation_difference(a: &ShuffleAutomaton, la: Letter) -> ShuffleAutomaton {
    let k = a.num_nonterminals();
    let mut nonterminals = a.nonterminals.clone();
    for n in &a.nonterminals {
        nonterminals.push(format!("{}_r{}", n, la.0));
    }
    let mut output = a.output.clone();
    for i in 0..k {
        output.push(a.delta[la.0][i].eval(&a.output).expect("closed config"));
    }
    let mut delta = Vec::with_capacity(a.alphabet_size + 1);
    for b in 0..a.alphabet_size {
        let mut row = a.delta[b].clone();
        for i in 0..k {
            // Delta_b Y_i = sum_j d(Delta_b X_i)/dX_j * Y_j
            let mut p = Poly::zero();
            for j in 0..k {
                let d = a.delta[b][i].partial(j);
                if !d.is_zero() {
                    p = p.add(&d.mul(&Poly::var(k + j)));
                }
            }
            row.push(p);
        }
        delta.push(row);
    }
    let mut row = Vec::with_capacity(2 * k);
    for i in 0..k {
        row.push(a.delta[la.0][i].sub(&Poly::var(k + i)));
    }
    row.resize(2 * k, Poly::zero());
    delta.push(row);
    ShuffleAutomaton {
        alphabet_size: a.alphabet_size + 1,
        nonterminals,
        init: a.init.clone(),
        output,
        delta,
    }
}

/// The system-level analyses: each reduces to one of the series procedures
/// on the generating series.
#[derive(Clone, Debug)]
pub enum SystemProperty {
    Equivalence(PolynomialSystem),
    Independence(Vec<usize>),
    Linearity(Vec<usize>),
    Analyticity(Vec<usize>),
    Stationarity,
    TimeInvariance,
}

fn letters_of(j: &[usize]) -> Vec<Letter> {
    j.iter().map(|&i| Letter(i)).collect()
}

fn check_inputs(j: &[usize], m: usize) -> Result<(), DecideError> {
    for &i in j {
        if i == 0 || i > m {
            return Err(DecideError::InputOutOfRange(i, m));
        }
    }
    Ok(())
}

pub fn analyze(s: &PolynomialSystem, property: &SystemProperty) -> Result<AnalysisReport, DecideError> {
    let a = system_to_automaton(s);
    analyze_automaton(&a, s.num_inputs(), property)
}

/// Same dispatcher, for callers that already hold an automaton.
pub fn analyze_automaton(
    a: &ShuffleAutomaton,
    m: usize,
    property: &SystemProperty,
) -> Result<AnalysisReport, DecideError> {
    match property {
        SystemProperty::Equivalence(other) => {
            let b = system_to_automaton(other);
            let report = equal(a, &b)?;
            Ok(AnalysisReport {
                property: Property::Equivalence,
                verdict: report.is_zero,
                inputs: Vec::new(),
                witness: report.witness.clone(),
                failing_pair: None,
                subreports: vec![report],
            })
        }
        SystemProperty::Independence(j) => {
            check_inputs(j, m)?;
            let rec = none_of(a.alphabet_size, &letters_of(j));
            Ok(support_subset_rec(a, &rec, Property::Independence, j.clone()))
        }
        SystemProperty::Linearity(j) => {
            check_inputs(j, m)?;
            let rec = exactly_one_of(a.alphabet_size, &letters_of(j));
            Ok(support_subset_rec(a, &rec, Property::Linearity, j.clone()))
        }
        SystemProperty::Analyticity(j) => {
            check_inputs(j, m)?;
            let mut report = commutative_in(a, &letters_of(j))?;
            report.inputs = j.clone();
            Ok(report)
        }
        SystemProperty::Stationarity => {
            let d = a.right_derivative(Letter(0)).expect("drift letter");
            let report = zeroness(&d);
            Ok(AnalysisReport {
                property: Property::Stationarity,
                verdict: report.is_zero,
                inputs: Vec::new(),
                witness: report.witness.clone(),
                failing_pair: None,
                subreports: vec![report],
            })
        }
        SystemProperty::TimeInvariance => {
            let rec = none_of(a.alphabet_size, &[Letter(0)]);
            Ok(support_subset_rec(a, &rec, Property::TimeInvariance, Vec::new()))
        }
    }
}

/// Structural zeroness: the output polynomial is identically zero, so the
/// system is zero for every initial state.
pub fn structurally_zero(s: &PolynomialSystem) -> bool {
    s.output.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::word;
    use crate::rational::{rat_one, rat_zero};

    fn single(delta: Poly, out: crate::rational::Rat) -> ShuffleAutomaton {
        ShuffleAutomaton::new(1, vec!["X".into()], Poly::var(0), vec![out], vec![vec![delta]])
            .unwrap()
    }

    #[test]
    fn zeroness_remark_pair() {
        // x' = 0, y = x: zero for x(0) = 0, nonzero with witness eps for 1
        let zero_case = single(Poly::zero(), rat_zero());
        let r = zeroness(&zero_case);
        assert!(r.is_zero);
        assert_eq!(r.witness, None);

        let nonzero_case = single(Poly::zero(), rat_one());
        let r = zeroness(&nonzero_case);
        assert!(!r.is_zero);
        assert_eq!(r.witness, Some(vec![]));
    }

    #[test]
    fn zeroness_word_automaton() {
        let w = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        let r = zeroness(&w);
        assert!(!r.is_zero);
        assert_eq!(r.witness, Some(word(&[1, 2])));
    }

    #[test]
    fn equal_reflexive_and_exp_square() {
        let exp = single(Poly::var(0), rat_one());
        assert!(equal(&exp, &exp).unwrap().is_zero);

        // shuffle(exp, exp) vs the doubling automaton Delta_a Z = 2Z
        let sq = exp.shuffle(&exp);
        let doubled = single(Poly::var(0).scale(&crate::rational::rat_int(2)), rat_one());
        assert!(equal(&sq, &doubled).unwrap().is_zero);
    }

    #[test]
    fn unequal_words_with_witness() {
        let w12 = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        let w21 = ShuffleAutomaton::word_automaton(3, &word(&[2, 1]));
        let r = equal(&w12, &w21).unwrap();
        assert!(!r.is_zero);
        assert_eq!(r.witness, Some(word(&[1, 2])));
    }

    #[test]
    fn support_subset_examples() {
        let w00 = ShuffleAutomaton::word_automaton(2, &word(&[0, 0]));
        let c = CountConstraint::Exactly(Letter(1), 0);
        assert!(support_subset(&w00, &c).unwrap().verdict);

        let exp = single(Poly::var(0), rat_one());
        let bounded = CountConstraint::AtMost(Letter(0), 2);
        let r = support_subset(&exp, &bounded).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.witness, Some(word(&[0, 0, 0])));

        let z = ShuffleAutomaton::zero(2);
        assert!(support_subset(&z, &c).unwrap().verdict);
    }

    #[test]
    fn commutativity_examples() {
        let w12 = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        let w21 = ShuffleAutomaton::word_automaton(3, &word(&[2, 1]));
        let sym = w12.sum(&w21);
        let gamma = [Letter(1), Letter(2)];
        assert!(commutative_in(&sym, &gamma).unwrap().verdict);

        let r = commutative_in(&w12, &gamma).unwrap();
        assert!(!r.verdict);
        assert!(r.failing_pair.is_some());

        // vacuous quantifier
        assert!(commutative_in(&w12, &[]).unwrap().verdict);
    }

    #[test]
    fn witness_soundness_on_reports() {
        let exp = single(Poly::var(0), rat_one());
        let r = zeroness(&exp);
        let w = r.witness.unwrap();
        assert!(!exp.coeff(&w).is_zero());
    }
}
