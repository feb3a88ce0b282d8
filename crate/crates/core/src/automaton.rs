//! Shuffle automata: polynomial configurations, per-letter derivations, and
//! the effective closure constructions (scale, sum, shuffle, left and right
//! derivative).

use num::Zero;

use crate::poly::Poly;
use crate::rational::Rat;

/// A letter of the alphabet {a0, .., am}. Index 0 is the drift letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub usize);

/// A finite word over the alphabet.
pub type Word = Vec<Letter>;

pub fn word(indices: &[usize]) -> Word {
    indices.iter().map(|&i| Letter(i)).collect()
}

pub fn word_to_string(w: &[Letter]) -> String {
    if w.is_empty() {
        "eps".to_string()
    } else {
        w.iter().map(|l| format!("a{}", l.0)).collect()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("letter a{0} outside alphabet of size {1}")]
    LetterOutOfRange(usize, usize),
    #[error("configuration uses nonterminal id {0}, automaton has {1}")]
    ForeignNonterminal(usize, usize),
}

/// A shuffle automaton: alphabet of `alphabet_size` letters, nonterminals
/// X_0..X_{k-1}, an initial configuration, output values per nonterminal,
/// and a transition polynomial per (letter, nonterminal) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleAutomaton {
    pub alphabet_size: usize,
    /// Nonterminal names, for display and file output.
    pub nonterminals: Vec<String>,
    pub init: Poly,
    pub output: Vec<Rat>,
    /// delta[letter][nonterminal]
    pub delta: Vec<Vec<Poly>>,
}

impl ShuffleAutomaton {
    pub fn new(
        alphabet_size: usize,
        nonterminals: Vec<String>,
        init: Poly,
        output: Vec<Rat>,
        delta: Vec<Vec<Poly>>,
    ) -> Result<Self, AutomatonError> {
        let k = nonterminals.len();
        assert_eq!(output.len(), k, "output vector length mismatch");
        assert_eq!(delta.len(), alphabet_size, "delta letter count mismatch");
        for row in &delta {
            assert_eq!(row.len(), k, "delta nonterminal count mismatch");
        }
        let a = ShuffleAutomaton {
            alphabet_size,
            nonterminals,
            init,
            output,
            delta,
        };
        a.check_config(&a.init)?;
        for row in &a.delta {
            for p in row {
                a.check_config(p)?;
            }
        }
        Ok(a)
    }

    pub fn num_nonterminals(&self) -> usize {
        self.nonterminals.len()
    }

    fn check_config(&self, cfg: &Poly) -> Result<(), AutomatonError> {
        if let Some(v) = cfg.max_var() {
            if v >= self.num_nonterminals() {
                return Err(AutomatonError::ForeignNonterminal(v, self.num_nonterminals()));
            }
        }
        Ok(())
    }

    fn check_letter(&self, a: Letter) -> Result<(), AutomatonError> {
        if a.0 >= self.alphabet_size {
            return Err(AutomatonError::LetterOutOfRange(a.0, self.alphabet_size));
        }
        Ok(())
    }

    /// The derivation extension of the transition map: the unique linear map
    /// satisfying Leibniz, computed by the chain rule
    /// `Delta_a p = sum_i dp/dX_i * Delta_a X_i`.
    pub fn derive_config(&self, a: Letter, cfg: &Poly) -> Result<Poly, AutomatonError> {
        self.check_letter(a)?;
        self.check_config(cfg)?;
        let mut out = Poly::zero();
        for i in 0..self.num_nonterminals() {
            let d = cfg.partial(i);
            if d.is_zero() {
                continue;
            }
            out = out.add(&d.mul(&self.delta[a.0][i]));
        }
        Ok(out)
    }

    /// `Delta_w alpha`, reading the word left to right.
    pub fn derive_word(&self, w: &[Letter], cfg: &Poly) -> Result<Poly, AutomatonError> {
        let mut cur = cfg.clone();
        for &a in w {
            cur = self.derive_config(a, &cur)?;
        }
        Ok(cur)
    }

    /// Coefficient of the recognised series at word `w`: evaluate `Delta_w
    /// alpha_I` at the output point.
    pub fn coeff(&self, w: &[Letter]) -> Rat {
        let cfg = self.derive_word(w, &self.init).expect("word over alphabet");
        cfg.eval(&self.output).expect("output assigns all nonterminals")
    }

    /// Scalar multiple: same automaton, initial configuration scaled.
    pub fn scale(&self, c: &Rat) -> ShuffleAutomaton {
        let mut out = self.clone();
        out.init = out.init.scale(c);
        out
    }

    /// Disjoint union of the two automata with the given initial
    /// configuration combiner applied to the (renamed-apart) initial configs.
    fn disjoint_union(
        &self,
        other: &ShuffleAutomaton,
        combine: impl FnOnce(&Poly, &Poly) -> Poly,
    ) -> ShuffleAutomaton {
        assert_eq!(
            self.alphabet_size, other.alphabet_size,
            "alphabet mismatch in automaton union"
        );
        let k = self.num_nonterminals();
        let mut nonterminals = Vec::with_capacity(k + other.num_nonterminals());
        for n in &self.nonterminals {
            nonterminals.push(format!("{}_l", n));
        }
        for n in &other.nonterminals {
            nonterminals.push(format!("{}_r", n));
        }
        let mut output = self.output.clone();
        output.extend(other.output.iter().cloned());
        let mut delta = Vec::with_capacity(self.alphabet_size);
        for a in 0..self.alphabet_size {
            let mut row = self.delta[a].clone();
            row.extend(other.delta[a].iter().map(|p| p.shift_vars(k)));
            delta.push(row);
        }
        let init = combine(&self.init, &other.init.shift_vars(k));
        ShuffleAutomaton {
            alphabet_size: self.alphabet_size,
            nonterminals,
            init,
            output,
            delta,
        }
    }

    /// Sum of series: disjoint union with added initial configurations.
    pub fn sum(&self, other: &ShuffleAutomaton) -> ShuffleAutomaton {
        self.disjoint_union(other, |a, b| a.add(b))
    }

    /// Shuffle product of series: disjoint union with multiplied initial
    /// configurations.
    pub fn shuffle(&self, other: &ShuffleAutomaton) -> ShuffleAutomaton {
        self.disjoint_union(other, |a, b| a.mul(b))
    }

    /// Left derivative: replace the initial configuration by its derivation.
    pub fn left_derivative(&self, a: Letter) -> Result<ShuffleAutomaton, AutomatonError> {
        let mut out = self.clone();
        out.init = self.derive_config(a, &self.init)?;
        Ok(out)
    }

    /// Right derivative. Fresh nonterminals Y_i stand for the right
    /// derivative of the series of X_i; transitions propagate through the
    /// chain rule, and Y_i outputs the letter-`a` coefficient of X_i.
    pub fn right_derivative(&self, a: Letter) -> Result<ShuffleAutomaton, AutomatonError> {
        self.check_letter(a)?;
        let k = self.num_nonterminals();
        let mut nonterminals = self.nonterminals.clone();
        for n in &self.nonterminals {
            nonterminals.push(format!("{}_r{}", n, a.0));
        }
        let mut output = self.output.clone();
        for i in 0..k {
            output.push(self.delta[a.0][i].eval(&self.output).expect("closed config"));
        }
        let mut delta = Vec::with_capacity(self.alphabet_size);
        for b in 0..self.alphabet_size {
            let mut row = self.delta[b].clone();
            for i in 0..k {
                // Delta_b Y_i = sum_j d(Delta_b X_i)/dX_j * Y_j
                let mut p = Poly::zero();
                for j in 0..k {
                    let d = self.delta[b][i].partial(j);
                    if !d.is_zero() {
                        p = p.add(&d.mul(&Poly::var(k + j)));
                    }
                }
                row.push(p);
            }
            delta.push(row);
        }
        let mut init = Poly::zero();
        for j in 0..k {
            let d = self.init.partial(j);
            if !d.is_zero() {
                init = init.add(&d.mul(&Poly::var(k + j)));
            }
        }
        Ok(ShuffleAutomaton {
            alphabet_size: self.alphabet_size,
            nonterminals,
            init,
            output,
            delta,
        })
    }

    /// The automaton recognising the zero series over the given alphabet.
    pub fn zero(alphabet_size: usize) -> ShuffleAutomaton {
        ShuffleAutomaton {
            alphabet_size,
            nonterminals: Vec::new(),
            init: Poly::zero(),
            output: Vec::new(),
            delta: vec![Vec::new(); alphabet_size],
        }
    }

    /// The automaton recognising `1 * epsilon` (the shuffle unit).
    pub fn unit(alphabet_size: usize) -> ShuffleAutomaton {
        ShuffleAutomaton {
            alphabet_size,
            nonterminals: Vec::new(),
            init: Poly::one(),
            output: Vec::new(),
            delta: vec![Vec::new(); alphabet_size],
        }
    }

    /// Chain automaton recognising the single-word series `1 * w`.
    pub fn word_automaton(alphabet_size: usize, w: &[Letter]) -> ShuffleAutomaton {
        for l in w {
            assert!(l.0 < alphabet_size, "letter outside alphabet");
        }
        let n = w.len();
        if n == 0 {
            return ShuffleAutomaton::unit(alphabet_size);
        }
        // W_0 .. W_n, init = W_0, Delta_{w[i]} W_i = W_{i+1}, O W_n = 1
        let nonterminals: Vec<String> = (0..=n).map(|i| format!("W{}", i)).collect();
        let mut output = vec![Rat::zero(); n + 1];
        output[n] = num::One::one();
        let mut delta = vec![vec![Poly::zero(); n + 1]; alphabet_size];
        for (i, l) in w.iter().enumerate() {
            delta[l.0][i] = Poly::var(i + 1);
        }
        ShuffleAutomaton {
            alphabet_size,
            nonterminals,
            init: Poly::var(0),
            output,
            delta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_int, rat_one, rat_zero};

    /// One nonterminal X with Delta_a X given, O X and alpha = X.
    fn single(delta: Poly, out: Rat) -> ShuffleAutomaton {
        ShuffleAutomaton::new(
            1,
            vec!["X".into()],
            Poly::var(0),
            vec![out],
            vec![vec![delta]],
        )
        .unwrap()
    }

    #[test]
    fn derive_config_leibniz_on_square() {
        // Delta_a X = X: derivative of X^2 is 2X^2
        let a = single(Poly::var(0), rat_one());
        let sq = Poly::var(0).mul(&Poly::var(0));
        let d = a.derive_config(Letter(0), &sq).unwrap();
        assert_eq!(d, sq.scale(&rat_int(2)));
    }

    #[test]
    fn derivation_kills_constants() {
        let a = single(Poly::var(0), rat_one());
        let d = a.derive_config(Letter(0), &Poly::constant(rat_int(5))).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn derive_on_nonterminal_is_transition() {
        let a = single(Poly::var(0).mul(&Poly::var(0)), rat_one());
        let d = a.derive_config(Letter(0), &Poly::var(0)).unwrap();
        assert_eq!(d, Poly::var(0).mul(&Poly::var(0)));
    }

    #[test]
    fn coeff_of_squaring_automaton() {
        // Delta_a X = X^2, O X = 1: coeff(aa) = 2, coeff(aaa) = 6
        let a = single(Poly::var(0).mul(&Poly::var(0)), rat_one());
        assert_eq!(a.coeff(&word(&[0, 0])), rat_int(2));
        assert_eq!(a.coeff(&word(&[0, 0, 0])), rat_int(6));
    }

    #[test]
    fn coeff_of_exponential_automaton() {
        let a = single(Poly::var(0), rat_one());
        for n in 0..=5 {
            assert_eq!(a.coeff(&vec![Letter(0); n]), rat_one());
        }
    }

    #[test]
    fn word_automaton_single_word() {
        let a = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        assert_eq!(a.coeff(&word(&[1, 2])), rat_one());
        assert_eq!(a.coeff(&word(&[2, 1])), rat_zero());
        assert_eq!(a.coeff(&word(&[1])), rat_zero());
        assert_eq!(a.coeff(&[]), rat_zero());
    }

    #[test]
    fn coeff_epsilon_is_init_at_output() {
        let a = single(Poly::var(0).mul(&Poly::var(0)), rat_int(3));
        assert_eq!(a.coeff(&[]), rat_int(3));
        assert_eq!(a.init.eval(&a.output).unwrap(), rat_int(3));
    }

    #[test]
    fn scale_examples() {
        let a = single(Poly::var(0).mul(&Poly::var(0)), rat_one());
        let zero = a.scale(&rat_zero());
        assert_eq!(zero.coeff(&word(&[0, 0])), rat_zero());
        let same = a.scale(&rat_one());
        assert_eq!(same.coeff(&word(&[0, 0])), rat_int(2));
        let twice = a.scale(&rat_int(2));
        assert_eq!(twice.coeff(&word(&[0, 0])), rat_int(4));
    }

    #[test]
    fn sum_examples() {
        let a = single(Poly::var(0).mul(&Poly::var(0)), rat_one());
        let cancel = a.sum(&a.scale(&rat_int(-1)));
        for w in [&word(&[])[..], &word(&[0]), &word(&[0, 0])] {
            assert_eq!(cancel.coeff(w), rat_zero());
        }
        let w12 = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        let w21 = ShuffleAutomaton::word_automaton(3, &word(&[2, 1]));
        let s = w12.sum(&w21);
        assert_eq!(s.coeff(&word(&[1, 2])), rat_one());
        assert_eq!(s.coeff(&word(&[2, 1])), rat_one());
        let z = a.sum(&ShuffleAutomaton::zero(1));
        assert_eq!(z.coeff(&word(&[0, 0])), rat_int(2));
    }

    #[test]
    fn shuffle_word_example() {
        // ab sh a = 2*aab + aba over a two-letter alphabet a=a0, b=a1
        let ab = ShuffleAutomaton::word_automaton(2, &word(&[0, 1]));
        let a = ShuffleAutomaton::word_automaton(2, &word(&[0]));
        let sh = ab.shuffle(&a);
        assert_eq!(sh.coeff(&word(&[0, 0, 1])), rat_int(2));
        assert_eq!(sh.coeff(&word(&[0, 1, 0])), rat_int(1));
        assert_eq!(sh.coeff(&word(&[1, 0, 0])), rat_zero());
    }

    #[test]
    fn shuffle_unit_and_exp() {
        let exp = single(Poly::var(0), rat_one());
        let with_unit = exp.shuffle(&ShuffleAutomaton::unit(1));
        for n in 0..=4 {
            assert_eq!(with_unit.coeff(&vec![Letter(0); n]), rat_one());
        }
        let sq = exp.shuffle(&exp);
        for n in 0..=4u32 {
            assert_eq!(
                sq.coeff(&vec![Letter(0); n as usize]),
                rat_int(2i64.pow(n))
            );
        }
    }

    #[test]
    fn left_derivative_examples() {
        let w = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        let d1 = w.left_derivative(Letter(1)).unwrap();
        assert_eq!(d1.coeff(&word(&[2])), rat_one());
        assert_eq!(d1.coeff(&[]), rat_zero());
        let d2 = w.left_derivative(Letter(2)).unwrap();
        for ww in [&word(&[])[..], &word(&[1]), &word(&[2]), &word(&[1, 2])] {
            assert_eq!(d2.coeff(ww), rat_zero());
        }
        let exp = single(Poly::var(0), rat_one());
        let de = exp.left_derivative(Letter(0)).unwrap();
        for n in 0..=4 {
            assert_eq!(de.coeff(&vec![Letter(0); n]), rat_one());
        }
    }

    #[test]
    fn right_derivative_examples() {
        let w = ShuffleAutomaton::word_automaton(3, &word(&[1, 2]));
        let d2 = w.right_derivative(Letter(2)).unwrap();
        assert_eq!(d2.coeff(&word(&[1])), rat_one());
        assert_eq!(d2.coeff(&word(&[1, 2])), rat_zero());
        let d1 = w.right_derivative(Letter(1)).unwrap();
        for ww in [&word(&[])[..], &word(&[1]), &word(&[2])] {
            assert_eq!(d1.coeff(ww), rat_zero());
        }
        let exp = single(Poly::var(0), rat_one());
        let de = exp.right_derivative(Letter(0)).unwrap();
        for n in 0..=5 {
            assert_eq!(de.coeff(&vec![Letter(0); n]), rat_one());
        }
    }

    #[test]
    fn foreign_nonterminal_rejected() {
        let a = single(Poly::var(0), rat_one());
        let err = a.derive_config(Letter(0), &Poly::var(3)).unwrap_err();
        assert_eq!(err, AutomatonError::ForeignNonterminal(3, 1));
    }
}
