//! Truncated univariate power series in exponential convention: the slot `n`
//! coefficient multiplies `t^n / n!`, so integration and differentiation are
//! plain coefficient shifts.

use num::Zero;

use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPowerSeries {
    coeffs: Vec<Rat>,
}

impl TruncatedPowerSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedPowerSeries {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(num::One::one(), order)
    }

    /// From explicit slots, zero-padded or truncated to the order.
    pub fn from_slots(slots: Vec<Rat>, order: usize) -> Self {
        let mut coeffs = slots;
        coeffs.resize(order + 1, Rat::zero());
        coeffs.truncate(order + 1);
        TruncatedPowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn slot(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn slots(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_slots(self.coeffs.clone(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for n in 0..=order {
            out.coeffs[n] = self.slot(n) + other.slot(n);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&crate::rational::rat_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TruncatedPowerSeries {
            coeffs: self.coeffs.iter().map(|k| k.clone() * c).collect(),
        }
    }

    /// Product in exponential convention: slot n is the binomial convolution
    /// `sum_i C(n, i) * u_i * v_{n-i}`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for n in 0..=order {
            let mut acc = Rat::zero();
            for i in 0..=n {
                acc += binomial(n, i) * self.slot(i) * other.slot(n - i);
            }
            out.coeffs[n] = acc;
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.order());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal integral: shifts every slot up by one; the top slot falls off
    /// the truncation.
    pub fn integrate(&self) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for n in 1..=order {
            out.coeffs[n] = self.slot(n - 1);
        }
        out
    }

    /// Formal derivative: shifts slots down; order drops by one.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        TruncatedPowerSeries {
            coeffs: self.coeffs[1..].to_vec(),
        }
    }
}

fn binomial(n: usize, k: usize) -> Rat {
    let mut num = num::BigInt::from(1);
    let mut den = num::BigInt::from(1);
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    Rat::new(num, den)
}
