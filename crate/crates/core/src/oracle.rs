//! Truncated noncommutative series: the brute-force ground truth every
//! automaton construction and decision procedure is checked against.

use std::collections::{BTreeMap, HashMap};

use num::Zero;

use crate::automaton::{word_to_string, Letter, ShuffleAutomaton, Word};
use crate::commlang::CommutativeRecognizer;
use crate::poly::Poly;
use crate::rational::{rat_to_string, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("cannot take a derivative of a depth-0 series")]
    DepthExhausted,
}

/// Finite table of coefficients for all words of length <= depth.
/// Absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub depth: usize,
    pub alphabet_size: usize,
    coeffs: BTreeMap<Word, Rat>,
}

impl TruncatedSeries {
    pub fn zero(alphabet_size: usize, depth: usize) -> Self {
        TruncatedSeries {
            depth,
            alphabet_size,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(alphabet_size: usize, depth: usize) -> Self {
        let mut s = Self::zero(alphabet_size, depth);
        s.set(Vec::new(), num::One::one());
        s
    }

    pub fn set(&mut self, w: Word, c: Rat) {
        assert!(w.len() <= self.depth, "word exceeds depth");
        assert!(w.iter().all(|l| l.0 < self.alphabet_size));
        if c.is_zero() {
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, c);
        }
    }

    pub fn get(&self, w: &[Letter]) -> Rat {
        self.coeffs.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, OracleError> {
        if self.alphabet_size != other.alphabet_size {
            return Err(OracleError::AlphabetMismatch(
                self.alphabet_size,
                other.alphabet_size,
            ));
        }
        let depth = self.depth.min(other.depth);
        let mut out = TruncatedSeries::zero(self.alphabet_size, depth);
        for w in words_up_to(self.alphabet_size, depth) {
            out.set(w.clone(), self.get(&w) + other.get(&w));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.alphabet_size, self.depth);
        for (w, v) in &self.coeffs {
            out.set(w.clone(), v.clone() * c);
        }
        out
    }

    /// Coinductive shuffle product, computed to the common depth.
    pub fn shuffle(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, OracleError> {
        if self.alphabet_size != other.alphabet_size {
            return Err(OracleError::AlphabetMismatch(
                self.alphabet_size,
                other.alphabet_size,
            ));
        }
        let depth = self.depth.min(other.depth);
        let mut out = TruncatedSeries::zero(self.alphabet_size, depth);
        for w in words_up_to(self.alphabet_size, depth) {
            out.set(w.clone(), shuffle_coeff(self, other, &w));
        }
        Ok(out)
    }

    /// Left (`f(a.w)`) or right (`f(w.a)`) derivative; depth drops by one.
    pub fn derivative(&self, side: Side, a: Letter) -> Result<TruncatedSeries, OracleError> {
        if self.depth == 0 {
            return Err(OracleError::DepthExhausted);
        }
        let mut out = TruncatedSeries::zero(self.alphabet_size, self.depth - 1);
        for w in words_up_to(self.alphabet_size, self.depth - 1) {
            let mut full = w.clone();
            match side {
                Side::Left => full.insert(0, a),
                Side::Right => full.push(a),
            }
            out.set(w, self.get(&full));
        }
        Ok(out)
    }

    /// Sorted `word<TAB>rational` lines, eps for the empty word; bit-exact
    /// for golden tests.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut keys: Vec<&Word> = self.coeffs.keys().collect();
        keys.sort_by_key(|w| (w.len(), w.as_slice().to_vec()));
        for w in keys {
            out.push_str(&format!(
                "{}\t{}\n",
                word_to_string(w),
                rat_to_string(&self.coeffs[w])
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// All words of length <= depth in (length, lex) order.
pub fn words_up_to(alphabet_size: usize, depth: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Vec::new()];
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * alphabet_size);
        for w in &level {
            for a in 0..alphabet_size {
                let mut ww = w.clone();
                ww.push(Letter(a));
                next.push(ww);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Coefficient of `w` in `f sh g` by the step rule: each letter of `w` is
/// consumed by one of the two sides; the base case multiplies the
/// coefficients of the accumulated subwords.
fn shuffle_coeff(f: &TruncatedSeries, g: &TruncatedSeries, w: &[Letter]) -> Rat {
    fn go(f: &TruncatedSeries, g: &TruncatedSeries, fpre: &mut Word, gpre: &mut Word, w: &[Letter]) -> Rat {
        match w.split_first() {
            None => f.get(fpre) * g.get(gpre),
            Some((&a, rest)) => {
                fpre.push(a);
                let left = go(f, g, fpre, gpre, rest);
                fpre.pop();
                gpre.push(a);
                let right = go(f, g, fpre, gpre, rest);
                gpre.pop();
                left + right
            }
        }
    }
    let mut fpre = Vec::new();
    let mut gpre = Vec::new();
    go(f, g, &mut fpre, &mut gpre, w)
}

/// Table of all coefficients of the automaton's series to the given depth,
/// BFS over configurations with memoized per-letter derivations.
pub fn truncate(a: &ShuffleAutomaton, depth: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(a.alphabet_size, depth);
    let mut cache: HashMap<Poly, Vec<Poly>> = HashMap::new();
    let mut level: Vec<(Word, Poly)> = vec![(Vec::new(), a.init.clone())];
    out.set(Vec::new(), a.coeff(&[]));
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * a.alphabet_size);
        for (w, cfg) in &level {
            let children = cache.entry(cfg.clone()).or_insert_with(|| {
                (0..a.alphabet_size)
                    .map(|l| a.derive_config(Letter(l), cfg).expect("valid config"))
                    .collect()
            });
            for (l, child) in children.clone().into_iter().enumerate() {
                let mut ww = w.clone();
                ww.push(Letter(l));
                out.set(ww.clone(), child.eval(&a.output).expect("closed config"));
                next.push((ww, child));
            }
        }
        level = next;
    }
    out
}

/// Bounded-depth referee for the exact decision procedures.
pub mod naive {
    use super::*;

    pub fn is_zero(a: &ShuffleAutomaton, depth: usize) -> bool {
        truncate(a, depth).is_zero()
    }

    pub fn equal(a: &ShuffleAutomaton, b: &ShuffleAutomaton, depth: usize) -> bool {
        truncate(a, depth) == truncate(b, depth)
    }

    pub fn support_subset(
        a: &ShuffleAutomaton,
        rec: &CommutativeRecognizer,
        depth: usize,
    ) -> bool {
        truncate(a, depth)
            .nonzero_entries()
            .all(|(w, _)| rec.member(w))
    }

    /// Coefficients agree on every pair of words related by one adjacent
    /// transposition involving a letter from `gamma`; this generates the
    /// whole commutation relation within the depth bound.
    pub fn commutative_in(a: &ShuffleAutomaton, gamma: &[Letter], depth: usize) -> bool {
        let table = truncate(a, depth);
        for w in words_up_to(a.alphabet_size, depth) {
            for i in 0..w.len().saturating_sub(1) {
                if gamma.contains(&w[i]) || gamma.contains(&w[i + 1]) {
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    if table.get(&w) != table.get(&swapped) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn stationary(a: &ShuffleAutomaton, depth: usize) -> bool {
        truncate(a, depth)
            .derivative(Side::Right, Letter(0))
            .map(|d| d.is_zero())
            .unwrap_or(true)
    }
}
