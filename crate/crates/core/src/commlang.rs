//! Commutative regular languages as counting constraints, compiled to finite
//! commutative monoids, and the support-restriction construction on shuffle
//! automata.

use std::collections::HashMap;

use num::Zero;

use crate::automaton::{Letter, ShuffleAutomaton};
use crate::poly::Poly;
use crate::rational::Rat;

/// Boolean combinations of threshold and modulo constraints on letter counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountConstraint {
    /// count(letter) >= n
    AtLeast(Letter, u32),
    /// count(letter) <= n
    AtMost(Letter, u32),
    /// count(letter) = n
    Exactly(Letter, u32),
    /// count(letter) = r (mod k), with k >= 1 and 0 <= r < k
    Mod(Letter, u32, u32),
    And(Box<CountConstraint>, Box<CountConstraint>),
    Or(Box<CountConstraint>, Box<CountConstraint>),
    Not(Box<CountConstraint>),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("letter a{0} outside alphabet of size {1}")]
    LetterOutOfRange(usize, usize),
    #[error("modulus must be >= 1")]
    ZeroModulus,
    #[error("residue {0} not below modulus {1}")]
    ResidueOutOfRange(u32, u32),
    #[error("monoid table is not {0}")]
    BadMonoid(&'static str),
}

impl CountConstraint {
    /// Direct evaluation on the letter counts of a word; the reference
    /// semantics the compiled recognizer must agree with.
    pub fn eval_counts(&self, counts: &[u64]) -> bool {
        match self {
            CountConstraint::AtLeast(l, n) => counts[l.0] >= *n as u64,
            CountConstraint::AtMost(l, n) => counts[l.0] <= *n as u64,
            CountConstraint::Exactly(l, n) => counts[l.0] == *n as u64,
            CountConstraint::Mod(l, r, k) => counts[l.0] % *k as u64 == *r as u64,
            CountConstraint::And(a, b) => a.eval_counts(counts) && b.eval_counts(counts),
            CountConstraint::Or(a, b) => a.eval_counts(counts) || b.eval_counts(counts),
            CountConstraint::Not(a) => !a.eval_counts(counts),
        }
    }

    pub fn eval_word(&self, w: &[Letter], alphabet_size: usize) -> bool {
        let mut counts = vec![0u64; alphabet_size];
        for l in w {
            counts[l.0] += 1;
        }
        self.eval_counts(&counts)
    }

    fn validate(&self, alphabet_size: usize) -> Result<(), ConstraintError> {
        match self {
            CountConstraint::AtLeast(l, _)
            | CountConstraint::AtMost(l, _)
            | CountConstraint::Exactly(l, _) => {
                if l.0 >= alphabet_size {
                    return Err(ConstraintError::LetterOutOfRange(l.0, alphabet_size));
                }
                Ok(())
            }
            CountConstraint::Mod(l, r, k) => {
                if l.0 >= alphabet_size {
                    return Err(ConstraintError::LetterOutOfRange(l.0, alphabet_size));
                }
                if *k == 0 {
                    return Err(ConstraintError::ZeroModulus);
                }
                if r >= k {
                    return Err(ConstraintError::ResidueOutOfRange(*r, *k));
                }
                Ok(())
            }
            CountConstraint::And(a, b) | CountConstraint::Or(a, b) => {
                a.validate(alphabet_size)?;
                b.validate(alphabet_size)
            }
            CountConstraint::Not(a) => a.validate(alphabet_size),
        }
    }
}

/// A finite commutative monoid with a letter homomorphism and accepting set:
/// the language is `h^{-1}(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativeRecognizer {
    pub alphabet_size: usize,
    size: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    hom: Vec<usize>,
    accepting: Vec<bool>,
}

impl CommutativeRecognizer {
    pub fn new(
        alphabet_size: usize,
        mul: Vec<Vec<usize>>,
        identity: usize,
        hom: Vec<usize>,
        accepting: Vec<bool>,
    ) -> Result<Self, ConstraintError> {
        let size = mul.len();
        if accepting.len() != size || hom.len() != alphabet_size || identity >= size {
            return Err(ConstraintError::BadMonoid("well-formed"));
        }
        for row in &mul {
            if row.len() != size || row.iter().any(|&e| e >= size) {
                return Err(ConstraintError::BadMonoid("well-formed"));
            }
        }
        if hom.iter().any(|&e| e >= size) {
            return Err(ConstraintError::BadMonoid("well-formed"));
        }
        for x in 0..size {
            if mul[identity][x] != x || mul[x][identity] != x {
                return Err(ConstraintError::BadMonoid("unital"));
            }
        }
        for x in 0..size {
            for y in 0..x {
                if mul[x][y] != mul[y][x] {
                    return Err(ConstraintError::BadMonoid("commutative"));
                }
            }
        }
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]] {
                        return Err(ConstraintError::BadMonoid("associative"));
                    }
                }
            }
        }
        Ok(CommutativeRecognizer {
            alphabet_size,
            size,
            mul,
            identity,
            hom,
            accepting,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x][y]
    }

    pub fn hom(&self, a: Letter) -> usize {
        self.hom[a.0]
    }

    pub fn is_accepting(&self, m: usize) -> bool {
        self.accepting[m]
    }

    pub fn accepting_elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(|&m| self.accepting[m])
    }

    /// Image of a word under the extended homomorphism.
    pub fn hom_word(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.identity, |acc, &a| self.mul[acc][self.hom[a.0]])
    }

    pub fn member(&self, w: &[Letter]) -> bool {
        self.accepting[self.hom_word(w)]
    }

    /// Same monoid, complemented accepting set.
    pub fn complement(&self) -> CommutativeRecognizer {
        let mut out = self.clone();
        out.accepting = out.accepting.iter().map(|&b| !b).collect();
        out
    }

    /// Restriction to the singleton language `h^{-1}{m}`.
    pub fn restrict_to_element(&self, m: usize) -> CommutativeRecognizer {
        let mut out = self.clone();
        out.accepting = (0..self.size).map(|e| e == m).collect();
        out
    }
}

/// Per-letter component of a compiled constraint monoid: a saturating counter
/// up to `threshold` times a modular counter `Z_modulus`.
#[derive(Clone, Copy)]
struct LetterComponent {
    threshold: u32,
    modulus: u32,
}

impl LetterComponent {
    fn size(&self) -> usize {
        (self.threshold as usize + 1) * self.modulus as usize
    }
}

fn gather_bounds(c: &CountConstraint, comp: &mut [LetterComponent]) {
    match c {
        // `<= n` and `= n` must tell n from n+1, so saturate one step later
        CountConstraint::AtLeast(l, n) => {
            comp[l.0].threshold = comp[l.0].threshold.max(*n);
        }
        CountConstraint::AtMost(l, n) | CountConstraint::Exactly(l, n) => {
            comp[l.0].threshold = comp[l.0].threshold.max(n + 1);
        }
        CountConstraint::Mod(l, _, k) => {
            comp[l.0].modulus = num::integer::lcm(comp[l.0].modulus, *k);
        }
        CountConstraint::And(a, b) | CountConstraint::Or(a, b) => {
            gather_bounds(a, comp);
            gather_bounds(b, comp);
        }
        CountConstraint::Not(a) => gather_bounds(a, comp),
    }
}

/// Compile a counting constraint into a recognizing commutative monoid:
/// a product, per letter, of a saturating counter and a modular counter.
pub fn compile_constraint(
    c: &CountConstraint,
    alphabet_size: usize,
) -> Result<CommutativeRecognizer, ConstraintError> {
    c.validate(alphabet_size)?;
    let mut comp = vec![LetterComponent { threshold: 0, modulus: 1 }; alphabet_size];
    gather_bounds(c, &mut comp);

    // mixed-radix encoding of per-letter (saturating, modular) pairs
    let sizes: Vec<usize> = comp.iter().map(|c| c.size()).collect();
    let total: usize = sizes.iter().product();

    let decode = |mut e: usize| -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(alphabet_size);
        for (i, s) in sizes.iter().enumerate() {
            let v = e % s;
            e /= s;
            let modulus = comp[i].modulus as usize;
            out.push(((v / modulus) as u32, (v % modulus) as u32));
        }
        out
    };
    let encode = |vals: &[(u32, u32)]| -> usize {
        let mut e = 0usize;
        for i in (0..alphabet_size).rev() {
            let modulus = comp[i].modulus as usize;
            e = e * sizes[i] + (vals[i].0 as usize * modulus + vals[i].1 as usize);
        }
        e
    };

    let mut mul = vec![vec![0usize; total]; total];
    for x in 0..total {
        let dx = decode(x);
        for y in 0..total {
            let dy = decode(y);
            let combined: Vec<(u32, u32)> = (0..alphabet_size)
                .map(|i| {
                    let sat = (dx[i].0 + dy[i].0).min(comp[i].threshold);
                    let md = (dx[i].1 + dy[i].1) % comp[i].modulus;
                    (sat, md)
                })
                .collect();
            mul[x][y] = encode(&combined);
        }
    }
    let identity = encode(&vec![(0, 0); alphabet_size]);
    let hom: Vec<usize> = (0..alphabet_size)
        .map(|a| {
            let mut vals = vec![(0, 0); alphabet_size];
            vals[a] = (1u32.min(comp[a].threshold), 1 % comp[a].modulus);
            encode(&vals)
        })
        .collect();

    // accepting set: evaluate the constraint on each element, reading the
    // saturating slot as the count (exact below the threshold)
    let eval_on = |e: usize| -> bool {
        let d = decode(e);
        eval_element(c, &d, &comp)
    };
    let accepting: Vec<bool> = (0..total).map(eval_on).collect();

    CommutativeRecognizer::new(alphabet_size, mul, identity, hom, accepting)
}

fn eval_element(c: &CountConstraint, d: &[(u32, u32)], comp: &[LetterComponent]) -> bool {
    match c {
        CountConstraint::AtLeast(l, n) => d[l.0].0 >= *n,
        CountConstraint::AtMost(l, n) => {
            debug_assert!(comp[l.0].threshold > *n);
            d[l.0].0 <= *n
        }
        CountConstraint::Exactly(l, n) => {
            debug_assert!(comp[l.0].threshold > *n);
            d[l.0].0 == *n
        }
        CountConstraint::Mod(l, r, k) => {
            debug_assert!(comp[l.0].modulus % *k == 0);
            d[l.0].1 % *k == *r
        }
        CountConstraint::And(a, b) => eval_element(a, d, comp) && eval_element(b, d, comp),
        CountConstraint::Or(a, b) => eval_element(a, d, comp) || eval_element(b, d, comp),
        CountConstraint::Not(a) => !eval_element(a, d, comp),
    }
}

/// Recognizer for words with no letter from `J` (a joint saturating counter).
pub fn none_of(alphabet_size: usize, j: &[Letter]) -> CommutativeRecognizer {
    joint_counter(alphabet_size, j, 1, &[0])
}

/// Recognizer for words with exactly one occurrence of a letter from `J`.
pub fn exactly_one_of(alphabet_size: usize, j: &[Letter]) -> CommutativeRecognizer {
    joint_counter(alphabet_size, j, 2, &[1])
}

/// Saturating counter over the joint count of letters in `J`.
fn joint_counter(
    alphabet_size: usize,
    j: &[Letter],
    cap: usize,
    accepting: &[usize],
) -> CommutativeRecognizer {
    let size = cap + 1;
    let mut mul = vec![vec![0usize; size]; size];
    for x in 0..size {
        for y in 0..size {
            mul[x][y] = (x + y).min(cap);
        }
    }
    let hom: Vec<usize> = (0..alphabet_size)
        .map(|a| if j.iter().any(|l| l.0 == a) { 1.min(cap) } else { 0 })
        .collect();
    let acc: Vec<bool> = (0..size).map(|e| accepting.contains(&e)).collect();
    CommutativeRecognizer::new(alphabet_size, mul, 0, hom, acc).expect("counter monoid")
}

/// Restrict a configuration polynomial to monoid element `m`: variable
/// `X_i` maps to the indexed family `X_i^{m'}` (index `i * |M| + m'`), a
/// degree-d monomial expands over all length-d factorizations of `m`.
pub fn restrict_config(cfg: &Poly, m: usize, rec: &CommutativeRecognizer) -> Poly {
    let msize = rec.size();
    let mut out = Poly::zero();
    for (mono, coef) in cfg.terms() {
        // flatten the monomial into an ordered factor list
        let mut factors: Vec<usize> = Vec::new();
        for &(v, e) in mono.exponents() {
            for _ in 0..e {
                factors.push(v);
            }
        }
        if factors.is_empty() {
            if m == rec.identity() {
                out = out.add(&Poly::constant(coef.clone()));
            }
            continue;
        }
        // DP over factors: monoid element reached -> accumulated polynomial
        let mut dp: HashMap<usize, Poly> = HashMap::new();
        dp.insert(rec.identity(), Poly::one());
        for &v in &factors {
            let mut next: HashMap<usize, Poly> = HashMap::new();
            for (e, poly) in &dp {
                for x in 0..msize {
                    let target = rec.mul(*e, x);
                    let contrib = poly.mul(&Poly::var(v * msize + x));
                    next.entry(target)
                        .and_modify(|p| *p = p.add(&contrib))
                        .or_insert(contrib);
                }
            }
            dp = next;
        }
        if let Some(p) = dp.get(&m) {
            out = out.add(&p.scale(coef));
        }
    }
    out
}

/// Support restriction of a shuffle automaton to the recognizer's language.
pub fn restrict_automaton(
    a: &ShuffleAutomaton,
    rec: &CommutativeRecognizer,
) -> ShuffleAutomaton {
    assert_eq!(a.alphabet_size, rec.alphabet_size, "alphabet mismatch");
    let k = a.num_nonterminals();
    let msize = rec.size();
    let mut nonterminals = Vec::with_capacity(k * msize);
    let mut output = Vec::with_capacity(k * msize);
    for i in 0..k {
        for m in 0..msize {
            nonterminals.push(format!("{}_m{}", a.nonterminals[i], m));
            output.push(if m == rec.identity() {
                a.output[i].clone()
            } else {
                Rat::zero()
            });
        }
    }
    let mut delta = Vec::with_capacity(a.alphabet_size);
    for letter in 0..a.alphabet_size {
        let ha = rec.hom(Letter(letter));
        let mut row = Vec::with_capacity(k * msize);
        for i in 0..k {
            for m in 0..msize {
                // Delta_a(X_i^m) = sum over m' with m = h(a) * m'
                let mut p = Poly::zero();
                for mp in 0..msize {
                    if rec.mul(ha, mp) == m {
                        p = p.add(&restrict_config(&a.delta[letter][i], mp, rec));
                    }
                }
                row.push(p);
            }
        }
        delta.push(row);
    }
    let mut init = Poly::zero();
    for m in rec.accepting_elements() {
        init = init.add(&restrict_config(&a.init, m, rec));
    }
    ShuffleAutomaton {
        alphabet_size: a.alphabet_size,
        nonterminals,
        init,
        output,
        delta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::word;
    use crate::rational::{rat_int, rat_one, rat_zero};

    fn parity_even() -> CommutativeRecognizer {
        compile_constraint(&CountConstraint::Mod(Letter(0), 0, 2), 1).unwrap()
    }

    #[test]
    fn parity_monoid_shape() {
        let r = parity_even();
        assert_eq!(r.size(), 2);
        assert_eq!(r.hom(Letter(0)), 1 - r.identity());
        assert!(r.member(&word(&[0, 0])));
        assert!(!r.member(&word(&[0])));
        assert!(r.member(&[]));
    }

    #[test]
    fn at_least_one_saturates() {
        let c = CountConstraint::AtLeast(Letter(1), 1);
        let r = compile_constraint(&c, 2).unwrap();
        assert!(r.member(&word(&[0, 1])));
        assert!(r.member(&word(&[1, 1, 1])));
        assert!(!r.member(&word(&[0, 0])));
    }

    #[test]
    fn exact_count_semantics() {
        let c = CountConstraint::Exactly(Letter(0), 1);
        let r = compile_constraint(&c, 1).unwrap();
        assert!(r.member(&word(&[0])));
        assert!(!r.member(&[]));
        assert!(!r.member(&word(&[0, 0])));
    }

    #[test]
    fn none_of_membership() {
        let r = none_of(2, &[Letter(1)]);
        assert!(r.member(&word(&[0, 0])));
        assert!(!r.member(&word(&[0, 1])));
    }

    #[test]
    fn complement_involution_and_membership() {
        let r = parity_even();
        let c = r.complement();
        assert!(c.member(&word(&[0])));
        assert!(!c.member(&word(&[0, 0])));
        assert_eq!(c.complement(), r);
        let n = none_of(2, &[Letter(1)]).complement();
        assert!(n.member(&word(&[0, 1])));
        assert!(!n.member(&word(&[0, 0])));
    }

    #[test]
    fn restrict_config_examples() {
        let r = parity_even();
        // X*Y restricted to even: X^0*Y^0 + X^1*Y^1 (element superscripts)
        let xy = Poly::var(0).mul(&Poly::var(1));
        let restricted = restrict_config(&xy, r.identity(), &r);
        let even = r.identity();
        let odd = 1 - even;
        let expected = Poly::var(0 * 2 + even)
            .mul(&Poly::var(2 + even))
            .add(&Poly::var(odd).mul(&Poly::var(2 + odd)));
        assert_eq!(restricted, expected);
        // constants restrict to the identity component only
        let five = Poly::constant(rat_int(5));
        assert_eq!(restrict_config(&five, r.identity(), &r), five);
        assert!(restrict_config(&five, odd, &r).is_zero());
        // single generator
        assert_eq!(restrict_config(&Poly::var(0), odd, &r), Poly::var(odd));
    }

    #[test]
    fn restrict_exponential_to_parity() {
        // all-ones series over {a}: restriction keeps even-length words
        let exp = ShuffleAutomaton::new(
            1,
            vec!["X".into()],
            Poly::var(0),
            vec![rat_one()],
            vec![vec![Poly::var(0)]],
        )
        .unwrap();
        let res = restrict_automaton(&exp, &parity_even());
        assert_eq!(res.coeff(&word(&[0, 0])), rat_one());
        assert_eq!(res.coeff(&word(&[0, 0, 0])), rat_zero());
        assert_eq!(res.coeff(&[]), rat_one());
        assert_eq!(res.coeff(&word(&[0])), rat_zero());
    }

    #[test]
    fn restrict_to_full_language_is_identity() {
        let exp = ShuffleAutomaton::new(
            1,
            vec!["X".into()],
            Poly::var(0),
            vec![rat_one()],
            vec![vec![Poly::var(0)]],
        )
        .unwrap();
        let mut full = parity_even();
        full = CommutativeRecognizer::new(
            1,
            (0..full.size()).map(|x| (0..full.size()).map(|y| full.mul(x, y)).collect()).collect(),
            full.identity(),
            vec![full.hom(Letter(0))],
            vec![true; full.size()],
        )
        .unwrap();
        let res = restrict_automaton(&exp, &full);
        for n in 0..=6 {
            assert_eq!(res.coeff(&vec![Letter(0); n]), rat_one());
        }
    }

    #[test]
    fn restrict_word_to_excluding_language_is_zero() {
        let w = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        let r = compile_constraint(&CountConstraint::Exactly(Letter(1), 0), 3).unwrap();
        let res = restrict_automaton(&w, &r);
        for test_word in [
            &word(&[])[..],
            &word(&[1, 2]),
            &word(&[2, 1]),
            &word(&[0, 1, 2]),
        ] {
            assert_eq!(res.coeff(test_word), rat_zero());
        }
    }

    #[test]
    fn malformed_constraints_rejected() {
        assert!(compile_constraint(&CountConstraint::Mod(Letter(0), 0, 0), 1).is_err());
        assert!(compile_constraint(&CountConstraint::Mod(Letter(0), 3, 2), 1).is_err());
        assert!(compile_constraint(&CountConstraint::AtLeast(Letter(5), 1), 2).is_err());
    }
}
