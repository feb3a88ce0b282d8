//! Sparse multivariate polynomials over exact rationals.
//!
//! Indeterminates are identified by `usize` ids; naming lives with whatever
//! context owns the polynomial (an automaton's nonterminals, a system's state
//! variables). Monomials are kept in graded reverse lexicographic order, the
//! fixed order used by the Gröbner engine.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::rational::{rat_to_string, Rat};

/// A monomial: sorted sparse exponent vector, no zero exponents stored.
/// The empty vector is the unit monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn exponent_of(&self, v: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut rem = e;
            while j < other.0.len() && other.0[j].0 < v {
                return None; // other has a variable self lacks
            }
            if j < other.0.len() && other.0[j].0 == v {
                if other.0[j].1 > e {
                    return None;
                }
                rem = e - other.0[j].1;
                j += 1;
            }
            if rem > 0 {
                out.push((v, rem));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea.max(eb)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Shift every variable id up by `offset`.
    pub fn shift_vars(&self, offset: usize) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v + offset, e)).collect())
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(v, _)| v)
    }
}

/// Graded reverse lexicographic order: compare total degree first; on ties
/// the monomial with the larger exponent at the highest differing variable
/// is the smaller one.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (self.0.len(), other.0.len());
        loop {
            if i == 0 && j == 0 {
                return Ordering::Equal;
            }
            let va = if i > 0 { Some(self.0[i - 1]) } else { None };
            let vb = if j > 0 { Some(other.0[j - 1]) } else { None };
            match (va, vb) {
                (Some((v1, e1)), Some((v2, e2))) => match v1.cmp(&v2) {
                    Ordering::Greater => return Ordering::Less, // self has higher var
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Equal => {
                        match e1.cmp(&e2) {
                            Ordering::Greater => return Ordering::Less,
                            Ordering::Less => return Ordering::Greater,
                            Ordering::Equal => {}
                        }
                        i -= 1;
                        j -= 1;
                    }
                },
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown indeterminate id {0}")]
    UnknownIndeterminate(usize),
    #[error("no assignment for indeterminate id {0}")]
    MissingAssignment(usize),
}

/// Sparse polynomial in canonical form: no zero coefficients, terms ordered
/// by grevlex (ascending; the leading term is the last entry).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Poly { terms }
    }

    pub fn var(v: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rat::one());
        Poly { terms }
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in pairs {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::unit())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }

    /// Leading (grevlex-greatest) term.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn mul_term(&self, c: &Rat, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc.clone() * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to indeterminate `v`.
    pub fn partial(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e == 0 {
                continue;
            }
            let mut pairs: Vec<(usize, u32)> = m.exponents().to_vec();
            for p in pairs.iter_mut() {
                if p.0 == v {
                    p.1 -= 1;
                }
            }
            out.add_term(Monomial::from_pairs(pairs), c.clone() * Rat::from_integer(e.into()));
        }
        out
    }

    /// Exact evaluation at a point indexed by indeterminate id.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat, PolyError> {
        if let Some(v) = self.max_var() {
            if v >= point.len() {
                return Err(PolyError::MissingAssignment(v));
            }
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.exponents() {
                for _ in 0..e {
                    t *= point[v].clone();
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute polynomials for variables: `values[v]` replaces `X_v`.
    pub fn substitute(&self, values: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for &(v, e) in m.exponents() {
                let base = values.get(v).cloned().unwrap_or_else(Poly::zero);
                t = t.mul(&base.pow(e));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Rename variables: `X_v` becomes `X_{v + offset}`.
    pub fn shift_vars(&self, offset: usize) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.shift_vars(offset), c.clone()))
                .collect(),
        }
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = Rat::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// Render with the given variable names (fallback `x{id}` when unnamed).
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // Print leading term first (descending grevlex) for readability.
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_unit() {
                factors.push(rat_to_string(&abs));
            }
            for &(v, e) in m.exponents() {
                let name = self
                    .names
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| format!("x{}", v));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{}^{}", name, e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn add_inverse_is_zero() {
        assert!(x().add(&x().neg()).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let lhs = x().add(&Poly::one()).mul(&x().sub(&Poly::one()));
        let rhs = x().mul(&x()).sub(&Poly::one());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scale_scalar_action() {
        let p = x().scale(&rat_int(2));
        assert_eq!(p.scale(&rat(3, 2)), x().scale(&rat_int(3)));
    }

    #[test]
    fn partial_power_rule() {
        // d(x^2 y)/dx = 2xy
        let p = x().mul(&x()).mul(&y());
        let expected = x().mul(&y()).scale(&rat_int(2));
        assert_eq!(p.partial(0), expected);
    }

    #[test]
    fn partial_of_constant_is_zero() {
        assert!(Poly::constant(rat_int(7)).partial(0).is_zero());
    }

    #[test]
    fn partial_sum_rule() {
        // d(xy + y^2)/dy = x + 2y
        let p = x().mul(&y()).add(&y().mul(&y()));
        let expected = x().add(&y().scale(&rat_int(2)));
        assert_eq!(p.partial(1), expected);
    }

    #[test]
    fn eval_cases() {
        let p = x().mul(&x()).mul(&y());
        assert_eq!(p.eval(&[rat_int(2), rat_int(3)]).unwrap(), rat_int(12));
        assert_eq!(Poly::zero().eval(&[]).unwrap(), rat_int(0));
        let q = x().sub(&Poly::one());
        assert_eq!(q.eval(&[rat_int(1)]).unwrap(), rat_int(0));
        assert_eq!(q.eval(&[]), Err(PolyError::MissingAssignment(0)));
    }

    #[test]
    fn grevlex_basics() {
        // deg dominates
        assert!(Monomial::from_pairs(vec![(0, 2)]) > Monomial::var(1));
        // same degree: x > y (y carries the higher variable)
        assert!(Monomial::var(0) > Monomial::var(1));
        // classic grevlex: x*z < y^2 with x=0, y=1, z=2
        let xz = Monomial::from_pairs(vec![(0, 1), (2, 1)]);
        let y2 = Monomial::from_pairs(vec![(1, 2)]);
        assert!(xz < y2);
    }

    #[test]
    fn display_round_readable() {
        let p = x().mul(&x()).scale(&rat(3, 2)).sub(&y()).add(&Poly::one());
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.display(&names).to_string(), "3/2*x^2 - y + 1");
    }
}
