//! Polynomial control systems: the data of `x' = sum_j u_j * p_j(x),
//! y = q(x)`, both conversions to and from shuffle automata, truncated Picard
//! simulation, and direct Fliess-operator evaluation.

use crate::automaton::{Letter, ShuffleAutomaton, Word};
use crate::oracle::truncate;
use crate::poly::Poly;
use crate::rational::Rat;
use crate::series::TruncatedPowerSeries;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("non-affine input term: {0}")]
    NonAffine(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("input series order {0} below requested order {1}")]
    OrderTooLow(usize, usize),
    #[error("expected {0} input series, got {1}")]
    InputCount(usize, usize),
}

/// A polynomial system. Dynamics are stored split by input: `dynamics[j][i]`
/// is the coefficient of `u_j` in the right-hand side of `x_i'` (index 0 is
/// the drift, `u_0 = 1`), each over the state variables only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSystem {
    pub state_names: Vec<String>,
    pub x0: Vec<Rat>,
    /// (m+1) x k polynomials over x_1..x_k
    pub dynamics: Vec<Vec<Poly>>,
    pub output: Poly,
}

impl PolynomialSystem {
    pub fn num_inputs(&self) -> usize {
        self.dynamics.len() - 1
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    /// Build from per-state right-hand sides over the combined universe of
    /// k state variables (ids 0..k) followed by m input variables (ids
    /// k..k+m). Rejects any monomial where inputs appear non-affinely.
    pub fn from_affine_dynamics(
        state_names: Vec<String>,
        x0: Vec<Rat>,
        num_inputs: usize,
        rhs: Vec<Poly>,
        output: Poly,
    ) -> Result<Self, SystemError> {
        let k = state_names.len();
        if x0.len() != k || rhs.len() != k {
            return Err(SystemError::Dimension(format!(
                "{} states but {} initial values and {} equations",
                k,
                x0.len(),
                rhs.len()
            )));
        }
        if let Some(v) = output.max_var() {
            if v >= k {
                return Err(SystemError::Dimension(
                    "output polynomial may only use state variables".into(),
                ));
            }
        }
        let mut dynamics = vec![vec![Poly::zero(); k]; num_inputs + 1];
        let mut names = state_names.clone();
        for j in 1..=num_inputs {
            names.push(format!("u{}", j));
        }
        for (i, p) in rhs.iter().enumerate() {
            for (mono, coef) in p.terms() {
                let mut input_var: Option<usize> = None;
                let mut input_deg = 0u32;
                for &(v, e) in mono.exponents() {
                    if v >= k {
                        input_deg += e;
                        input_var = Some(v);
                    }
                }
                if input_deg > 1 {
                    return Err(SystemError::NonAffine(
                        Poly::term(coef.clone(), mono.clone()).display(&names).to_string(),
                    ));
                }
                match input_var {
                    None => {
                        dynamics[0][i] =
                            dynamics[0][i].add(&Poly::term(coef.clone(), mono.clone()));
                    }
                    Some(v) => {
                        let j = v - k + 1;
                        // strip the input factor
                        let stripped = crate::poly::Monomial::from_pairs(
                            mono.exponents()
                                .iter()
                                .filter(|&&(w, _)| w != v)
                                .cloned()
                                .collect(),
                        );
                        dynamics[j][i] = dynamics[j][i].add(&Poly::term(coef.clone(), stripped));
                    }
                }
            }
        }
        Ok(PolynomialSystem {
            state_names,
            x0,
            dynamics,
            output,
        })
    }
}

/// The generating-series automaton of a system: initial configuration is the
/// output polynomial, outputs are the initial state, transitions are the
/// dynamics.
pub fn system_to_automaton(s: &PolynomialSystem) -> ShuffleAutomaton {
    ShuffleAutomaton {
        alphabet_size: s.num_inputs() + 1,
        nonterminals: s.state_names.clone(),
        init: s.output.clone(),
        output: s.x0.clone(),
        delta: s.dynamics.clone(),
    }
}

/// The converse construction: states from nonterminals, initial state from
/// the output function, dynamics from the transitions, output from the
/// initial configuration.
pub fn automaton_to_system(a: &ShuffleAutomaton) -> PolynomialSystem {
    PolynomialSystem {
        state_names: a.nonterminals.clone(),
        x0: a.output.clone(),
        dynamics: a.delta.clone(),
        output: a.init.clone(),
    }
}

fn eval_poly_series(p: &Poly, values: &[TruncatedPowerSeries], order: usize) -> TruncatedPowerSeries {
    let mut acc = TruncatedPowerSeries::zero(order);
    for (mono, coef) in p.terms() {
        let mut term = TruncatedPowerSeries::constant(coef.clone(), order);
        for &(v, e) in mono.exponents() {
            term = term.mul(&values[v].pow(e));
        }
        acc = acc.add(&term);
    }
    acc
}

fn prepare_inputs(
    m: usize,
    u: &[TruncatedPowerSeries],
    order: usize,
) -> Result<Vec<TruncatedPowerSeries>, SystemError> {
    if u.len() != m {
        return Err(SystemError::InputCount(m, u.len()));
    }
    for s in u {
        if s.order() < order {
            return Err(SystemError::OrderTooLow(s.order(), order));
        }
    }
    // u_0 = 1 by convention; not user-suppliable
    let mut all = Vec::with_capacity(m + 1);
    all.push(TruncatedPowerSeries::one(order));
    all.extend(u.iter().map(|s| s.truncate(order)));
    Ok(all)
}

/// Truncated solution of the system by Picard iteration
/// `x <- x0 + integral(sum_j u_j * p_j(x))`. Integration raises the order,
/// so the iteration reaches its fixed point after at most N+1 rounds; that
/// is asserted, not assumed.
pub fn simulate(
    s: &PolynomialSystem,
    u: &[TruncatedPowerSeries],
    order: usize,
) -> Result<TruncatedPowerSeries, SystemError> {
    let all_inputs = prepare_inputs(s.num_inputs(), u, order)?;
    let k = s.num_states();
    let mut x: Vec<TruncatedPowerSeries> = s
        .x0
        .iter()
        .map(|c| TruncatedPowerSeries::constant(c.clone(), order))
        .collect();
    let mut last = x.clone();
    for round in 0..=order + 1 {
        let mut next = Vec::with_capacity(k);
        for i in 0..k {
            let mut rhs = TruncatedPowerSeries::zero(order);
            for (j, uj) in all_inputs.iter().enumerate() {
                let pj = eval_poly_series(&s.dynamics[j][i], &x, order);
                rhs = rhs.add(&uj.mul(&pj));
            }
            next.push(
                TruncatedPowerSeries::constant(s.x0[i].clone(), order).add(&rhs.integrate()),
            );
        }
        if round == order + 1 {
            assert_eq!(next, last, "Picard iteration failed to reach its fixed point");
        }
        last = next.clone();
        x = next;
    }
    Ok(eval_poly_series(&s.output, &x, order))
}

/// The formal iterated integral F_w(u), truncated.
pub fn iterated_integral(
    w: &[Letter],
    u: &[TruncatedPowerSeries],
    m: usize,
    order: usize,
) -> Result<TruncatedPowerSeries, SystemError> {
    let all_inputs = prepare_inputs(m, u, order)?;
    let mut acc = TruncatedPowerSeries::one(order);
    for l in w.iter().rev() {
        acc = all_inputs[l.0].mul(&acc).integrate();
    }
    Ok(acc)
}

/// Truncation of the Fliess operator applied to the automaton's series: sum
/// of `coeff(A, w) * F_w(u)` over all words of length <= order. Words longer
/// than the order only contribute beyond the truncation.
pub fn fliess_eval(
    a: &ShuffleAutomaton,
    u: &[TruncatedPowerSeries],
    order: usize,
) -> Result<TruncatedPowerSeries, SystemError> {
    let m = a.alphabet_size - 1;
    let all_inputs = prepare_inputs(m, u, order)?;
    let table = truncate(a, order);
    let mut acc = TruncatedPowerSeries::zero(order);
    for (w, c) in table.nonzero_entries() {
        let mut f = TruncatedPowerSeries::one(order);
        for l in w.iter().rev() {
            f = all_inputs[l.0].mul(&f).integrate();
        }
        acc = acc.add(&f.scale(c));
    }
    Ok(acc)
}

/// Convenience: the single-word series automaton evaluated as a functional.
pub fn word_functional(
    alphabet_size: usize,
    w: &Word,
    u: &[TruncatedPowerSeries],
    order: usize,
) -> Result<TruncatedPowerSeries, SystemError> {
    iterated_integral(w, u, alphabet_size - 1, order)
}
