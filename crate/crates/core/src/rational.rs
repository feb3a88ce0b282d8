//! Exact rational scalars.
//!
//! All coefficient arithmetic in the crate is arbitrary-precision rational;
//! there is no floating point anywhere on a decision path.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    BigRational::zero()
}

pub fn rat_one() -> Rat {
    BigRational::one()
}

/// Canonical text form: `p` for integers, `p/q` otherwise, with the sign on
/// the numerator.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_is_negative(r: &Rat) -> bool {
    r.is_negative()
}
