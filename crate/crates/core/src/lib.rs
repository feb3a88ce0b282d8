//! Exact analysis of polynomial control systems via shuffle automata.
//!
//! A system x' = p_0(x) + u_1 p_1(x) + ... + u_m p_m(x), y = q(x) is viewed
//! through its generating series of iterated-integral coefficients. The
//! series is represented by a shuffle automaton, a finite syntactic object
//! closed under the operations needed to decide equivalence, zeroness,
//! input independence, linearity, analyticity and stationarity — exactly,
//! over the rationals, with no truncation. A truncated brute-force oracle
//! is provided for cross-checking.

pub mod automaton;
pub mod commlang;
pub mod decide;
pub mod groebner;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod series;
pub mod system;

pub use automaton::{Letter, ShuffleAutomaton, Word};
pub use commlang::{CommutativeRecognizer, CountConstraint};
pub use decide::{analyze, AnalysisReport, Property, SystemProperty, ZeronessReport};
pub use poly::{Monomial, Poly};
pub use rational::Rat;
pub use system::PolynomialSystem;
