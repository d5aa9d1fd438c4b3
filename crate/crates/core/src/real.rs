//! Binary floating point with a fixed 128-bit significand, used only where
//! a logarithm rules out exact rationals.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;

use crate::arith::ExactQ;

pub type Real = FBig<HalfEven>;

pub const REAL_PRECISION: usize = 128;

pub fn real_from_int(n: &BigInt) -> Real {
    let i: IBig = n.to_string().parse().expect("decimal integer");
    Real::from(i).with_precision(REAL_PRECISION).value()
}

pub fn real_from_q(q: &ExactQ) -> Real {
    real_from_int(q.numer()) / real_from_int(q.denom())
}

pub fn real_to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}
