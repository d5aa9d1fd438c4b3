//! Exact integer and rational kernel shared by every formula in the crate.
//!
//! `ExactQ` is a reduced big rational, `IntPoly` a dense polynomial with
//! big-integer coefficients. The convention `0^0 = 1` holds everywhere
//! (`BigInt::pow(0)` and the polynomial algebra both honour it).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactQ(BigRational);

impl ExactQ {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        ExactQ(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactQ(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactQ(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactQ(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        ExactQ(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        ExactQ(self.0.recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        ExactQ(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Nearest-representable conversion from `f64`; exact for dyadic inputs.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(ExactQ)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `digits` fractional digits, rounding half to even.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.0.abs() * BigRational::from_integer(scale);
        let mut q = scaled.floor().to_integer();
        let frac = scaled - BigRational::from_integer(q.clone());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        match frac.cmp(&half) {
            Ordering::Greater => q += 1,
            Ordering::Equal if q.is_odd() => q += 1,
            _ => {}
        }
        let mut s = q.to_string();
        if digits > 0 {
            if s.len() <= digits {
                s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
            }
            s.insert(s.len() - digits, '.');
        }
        if self.0.is_negative() && s.chars().any(|c| c != '0' && c != '.') {
            s.insert(0, '-');
        }
        s
    }

    /// `num/den` form (`num` alone when the denominator is one).
    pub fn to_exact_string(&self) -> String {
        if self.0.denom().is_one() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }

    /// Floor of the base-10 logarithm of a positive value.
    pub fn decimal_exponent(&self) -> Option<i64> {
        if !self.0.is_positive() {
            return None;
        }
        let ten = BigRational::from_integer(BigInt::from(10));
        let numer_digits = self.0.numer().to_string().len() as i64;
        let denom_digits = self.0.denom().to_string().len() as i64;
        let mut e = numer_digits - denom_digits;
        // Adjust the digit-count estimate so that 10^e <= x < 10^(e+1).
        loop {
            let lo = pow10(&ten, e);
            if self.0 < lo {
                e -= 1;
                continue;
            }
            if self.0 >= pow10(&ten, e + 1) {
                e += 1;
                continue;
            }
            return Some(e);
        }
    }
}

fn pow10(ten: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(ten.clone(), e as usize)
    } else {
        num_traits::pow(ten.clone(), (-e) as usize).recip()
    }
}

impl fmt::Debug for ExactQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl fmt::Display for ExactQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl FromStr for ExactQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(ExactQ::new(n, d))
            }
            None => {
                if let Some((int, frac)) = s.split_once('.') {
                    let neg = int.starts_with('-');
                    let digits = format!("{}{}", int.trim_start_matches('-'), frac);
                    let n: BigInt = digits.parse().map_err(|_| bad())?;
                    let d = BigInt::from(10u32).pow(frac.len() as u32);
                    let q = ExactQ::new(n, d);
                    Ok(if neg { -q } else { q })
                } else {
                    Ok(ExactQ::from_integer(
                        s.parse::<BigInt>().map_err(|_| bad())?,
                    ))
                }
            }
        }
    }
}

impl Serialize for ExactQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_exact_string())
    }
}

impl<'de> Deserialize<'de> for ExactQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<BigInt> for ExactQ {
    fn from(n: BigInt) -> Self {
        ExactQ::from_integer(n)
    }
}

impl From<BigUint> for ExactQ {
    fn from(n: BigUint) -> Self {
        ExactQ::from_integer(BigInt::from(n))
    }
}

impl From<i64> for ExactQ {
    fn from(n: i64) -> Self {
        ExactQ::from_integer(n)
    }
}

impl From<u64> for ExactQ {
    fn from(n: u64) -> Self {
        ExactQ::from_integer(n)
    }
}

impl From<BigRational> for ExactQ {
    fn from(r: BigRational) -> Self {
        ExactQ(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<ExactQ> for ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: ExactQ) -> ExactQ {
                ExactQ(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactQ> for ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: &'a ExactQ) -> ExactQ {
                ExactQ(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<ExactQ> for &'a ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: ExactQ) -> ExactQ {
                ExactQ((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b ExactQ> for &'a ExactQ {
            type Output = ExactQ;
            fn $method(self, rhs: &'b ExactQ) -> ExactQ {
                ExactQ((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactQ {
    type Output = ExactQ;
    fn neg(self) -> ExactQ {
        ExactQ(-self.0)
    }
}

impl AddAssign<&ExactQ> for ExactQ {
    fn add_assign(&mut self, rhs: &ExactQ) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for ExactQ {
    fn add_assign(&mut self, rhs: ExactQ) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&ExactQ> for ExactQ {
    fn sub_assign(&mut self, rhs: &ExactQ) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactQ> for ExactQ {
    fn mul_assign(&mut self, rhs: &ExactQ) {
        self.0 *= &rhs.0;
    }
}

impl Sum for ExactQ {
    fn sum<I: Iterator<Item = ExactQ>>(iter: I) -> ExactQ {
        iter.fold(ExactQ::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactQ> for ExactQ {
    fn sum<I: Iterator<Item = &'a ExactQ>>(iter: I) -> ExactQ {
        iter.fold(ExactQ::zero(), |acc, x| acc + x)
    }
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// `C(top, k)` for a big (possibly negative) upper argument, as a falling
/// factorial over `k!`. Zero when `0 <= top < k`; `k < 0` gives zero.
pub fn binomial_big(top: &BigInt, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if !top.is_negative() && *top < BigInt::from(k) {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= top - t;
        acc /= t + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, t| acc * t)
}

/// `n! / prod(parts_i!)`; rejects compositions that do not sum to `n`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigInt> {
    let total: u64 = parts.iter().sum();
    if total != n {
        return Err(Error::InvalidArgument(format!(
            "multinomial parts sum to {total}, expected {n}"
        )));
    }
    let mut acc = BigInt::one();
    let mut remaining = n;
    for &p in parts {
        acc *= binomial(remaining, p as i64);
        remaining -= p;
    }
    Ok(acc)
}

/// Dense polynomial with big-integer coefficients; index = degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c * z^deg`.
    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        IntPoly::new(coeffs)
    }

    /// `(c0 + c1 z)^e` expanded by the binomial theorem.
    pub fn linear_pow(c0: &BigInt, c1: &BigInt, e: u32) -> Self {
        let coeffs = (0..=e)
            .map(|t| binomial(e as u64, t as i64) * c0.pow(e - t) * c1.pow(t))
            .collect();
        IntPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    pub fn shift(&self, by: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); by];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}z")?,
                _ => write!(f, "{c}z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        poly_mul(self, rhs)
    }
}

/// Exact schoolbook product.
pub fn poly_mul(p: &IntPoly, q: &IntPoly) -> IntPoly {
    if p.is_zero() || q.is_zero() {
        return IntPoly::zero();
    }
    let mut out = vec![BigInt::zero(); p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    IntPoly::new(out)
}

/// Eulerian polynomial `A_k`, normalized so that
/// `sum_{r>=0} r^k z^r = A_k(z) / (1-z)^(k+1)`.
///
/// `A_0 = 1`; for `k >= 1` the coefficient of `z^i` counts permutations of
/// `k` elements with `i - 1` descents.
pub fn eulerian_poly(k: usize) -> IntPoly {
    if k == 0 {
        return IntPoly::one();
    }
    // row[d] = number of permutations of `len` elements with d descents
    let mut row = vec![BigInt::one()];
    for len in 2..=k {
        let mut next = vec![BigInt::zero(); len];
        for (d, e) in row.iter().enumerate() {
            // inserting the new maximum keeps d descents in d+1 slots,
            // creates one more in the remaining len-1-d slots
            next[d] += e * (d + 1);
            next[d + 1] += e * (len - 1 - d);
        }
        row = next;
    }
    IntPoly::new(std::iter::once(BigInt::zero()).chain(row).collect())
}

/// Eulerian polynomials `A_0..=A_max`, built once and reused.
#[derive(Clone, Debug)]
pub struct EulerianTable {
    polys: Vec<IntPoly>,
}

impl EulerianTable {
    pub fn new(max: usize) -> Self {
        EulerianTable {
            polys: (0..=max).map(eulerian_poly).collect(),
        }
    }

    pub fn get(&self, k: usize) -> &IntPoly {
        &self.polys[k]
    }
}

/// `sum_{k=1}^{upto} k^e` (with `0^0 = 1`, so `e = 0` gives `upto`), via the
/// hockey-stick form of Worpitzky's identity. Cost is independent of `upto`.
pub fn power_sum(e: usize, upto: &BigInt, table: &EulerianTable) -> BigInt {
    if upto.sign() != Sign::Plus {
        return BigInt::zero();
    }
    if e == 0 {
        return upto.clone();
    }
    let a = table.get(e);
    a.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c * binomial_big(&(upto - i + e + 1), e as i64 + 1))
        .sum()
}

/// `sum_{k=1}^{upto} p(k)` for an integer polynomial `p`.
pub fn sum_poly_range(p: &IntPoly, upto: &BigInt, table: &EulerianTable) -> BigInt {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| c * power_sum(e, upto, table))
        .sum()
}

/// Converts a non-negative `u64`-sized big integer, if it fits.
pub fn small(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial_big(&BigInt::from(4), 2), BigInt::from(6));
        assert_eq!(binomial_big(&BigInt::from(1), 2), BigInt::zero());
        // C(-1, 3) = -1
        assert_eq!(binomial_big(&BigInt::from(-1), 3), BigInt::from(-1));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(4, &[2, 2]).unwrap(), BigInt::from(6));
        assert_eq!(multinomial(3, &[1, 1, 1]).unwrap(), BigInt::from(6));
        assert_eq!(multinomial(52, &[26, 26]).unwrap(), binomial(52, 26));
        assert!(multinomial(5, &[2, 2]).is_err());
    }

    #[test]
    fn eulerian_examples() {
        assert_eq!(eulerian_poly(0), IntPoly::one());
        assert_eq!(eulerian_poly(1), IntPoly::from_i64(&[0, 1]));
        assert_eq!(eulerian_poly(3), IntPoly::from_i64(&[0, 1, 4, 1]));
        assert_eq!(eulerian_poly(4), IntPoly::from_i64(&[0, 1, 11, 11, 1]));
        for k in 1..=12 {
            let a = eulerian_poly(k);
            assert_eq!(a.degree(), Some(k));
            let total: BigInt = a.coeffs().iter().sum();
            assert_eq!(total, factorial(k as u64));
        }
    }

    #[test]
    fn poly_mul_examples() {
        let z = IntPoly::from_i64(&[0, 1]);
        assert_eq!(poly_mul(&z, &z), IntPoly::from_i64(&[0, 0, 1]));
        let p = IntPoly::from_i64(&[1, 1]);
        let q = IntPoly::from_i64(&[1, -1]);
        assert_eq!(poly_mul(&p, &q), IntPoly::from_i64(&[1, 0, -1]));
        let a2 = eulerian_poly(2);
        assert_eq!(poly_mul(&a2, &a2), IntPoly::from_i64(&[0, 0, 1, 2, 1]));
        assert!(poly_mul(&IntPoly::zero(), &p).is_zero());
    }

    #[test]
    fn power_sums_match_direct() {
        let table = EulerianTable::new(12);
        for e in 0..=12usize {
            for upto in 0..=20u64 {
                let direct: BigInt = (1..=upto).map(|k| BigInt::from(k).pow(e as u32)).sum();
                assert_eq!(
                    power_sum(e, &BigInt::from(upto), &table),
                    direct,
                    "e={e} upto={upto}"
                );
            }
        }
    }

    #[test]
    fn decimal_rounding_half_even() {
        assert_eq!(ExactQ::new(1, 8).to_decimal(2), "0.12");
        assert_eq!(ExactQ::new(3, 8).to_decimal(2), "0.38");
        assert_eq!(ExactQ::new(1, 3).to_decimal(3), "0.333");
        assert_eq!(ExactQ::new(2, 3).to_decimal(3), "0.667");
        assert_eq!(ExactQ::new(-1, 3).to_decimal(3), "-0.333");
        assert_eq!(ExactQ::new(-1, 3000).to_decimal(2), "0.00");
        assert_eq!(ExactQ::from_integer(25).to_decimal(1), "25.0");
        assert_eq!(ExactQ::new(5, 2).to_decimal(0), "2");
        assert_eq!(ExactQ::new(7, 2).to_decimal(0), "4");
    }

    #[test]
    fn parse_and_exponent() {
        assert_eq!("3/6".parse::<ExactQ>().unwrap(), ExactQ::new(1, 2));
        assert_eq!("0.25".parse::<ExactQ>().unwrap(), ExactQ::new(1, 4));
        assert_eq!("-1.5".parse::<ExactQ>().unwrap(), ExactQ::new(-3, 2));
        assert!("1/0".parse::<ExactQ>().is_err());
        assert_eq!(ExactQ::from_integer(1000).decimal_exponent(), Some(3));
        assert_eq!(ExactQ::from_integer(999).decimal_exponent(), Some(2));
        assert_eq!(ExactQ::new(1, 1000).decimal_exponent(), Some(-3));
        assert_eq!(ExactQ::new(11, 10000).decimal_exponent(), Some(-3));
        assert_eq!(ExactQ::zero().decimal_exponent(), None);
    }
}
