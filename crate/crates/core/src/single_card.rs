//! Where a single card goes under a-shuffles: the n×n transition matrix,
//! its eigenstructure, exact distances from any starting position, and the
//! separation and total variation brackets for a card starting at the bottom.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, power_sum, sum_poly_range, EulerianTable, ExactQ, IntPoly};
use crate::deck::ShuffleParam;
use crate::distance::{distance_from_classes, DistanceReport, FiniteDist};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::real::{real_from_int, real_from_q, real_to_f64, Real};

/// Largest deck for which [`eigen_check`] runs.
pub const EIGEN_CHECK_MAX_N: usize = 10;

fn check_indices(n: usize, i: usize, j: usize) -> Result<()> {
    if n == 0 || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidArgument(format!(
            "positions must satisfy 1 <= i, j <= n = {n}, got ({i}, {j})"
        )));
    }
    Ok(())
}

fn check_packets(a: &BigInt) -> Result<()> {
    if !a.is_positive() {
        return Err(Error::InvalidArgument("packet count must be >= 1".into()));
    }
    Ok(())
}

/// Power tables and Eulerian polynomials for one `(n, a)`, shared by all
/// entries of the matrix.
struct Engine {
    n: usize,
    a: BigInt,
    a_n: BigInt,
    direct: Option<u64>,
    eulerian: EulerianTable,
    k: Vec<IntPoly>,
    k_minus_1: Vec<IntPoly>,
    a_minus_k: Vec<IntPoly>,
    a_minus_k_plus_1: Vec<IntPoly>,
}

impl Engine {
    fn new(n: usize, a: &BigInt) -> Self {
        let pows = |c0: BigInt, c1: i64| -> Vec<IntPoly> {
            (0..n as u32)
                .map(|e| IntPoly::linear_pow(&c0, &BigInt::from(c1), e))
                .collect()
        };
        // Summing over k directly is cheaper than the polynomial route while
        // a stays below roughly n^2 terms.
        let direct = a.to_u64().filter(|&a| a <= (n * n).max(64) as u64);
        Engine {
            n,
            a: a.clone(),
            a_n: a.pow(n as u32),
            direct,
            eulerian: EulerianTable::new(n),
            k: pows(BigInt::zero(), 1),
            k_minus_1: pows(BigInt::from(-1), 1),
            a_minus_k: pows(a.clone(), -1),
            a_minus_k_plus_1: pows(a + 1, -1),
        }
    }

    fn r_range(&self, i: usize, j: usize) -> std::ops::RangeInclusive<usize> {
        let lo = (i + j).saturating_sub(self.n + 1);
        let hi = (i - 1).min(j - 1);
        lo..=hi
    }

    /// `a^n P_a(i, j)` by summing over the packet `k` of the tracked card.
    fn numerator_direct(&self, i: usize, j: usize, a: u64) -> BigInt {
        let n = self.n;
        let mut total = BigInt::zero();
        for r in self.r_range(i, j) {
            let c =
                binomial((j - 1) as u64, r as i64) * binomial((n - j) as u64, (i - r - 1) as i64);
            if c.is_zero() {
                continue;
            }
            let mut s = BigInt::zero();
            for k in 1..=a {
                let term = BigInt::from(k).pow(r as u32)
                    * BigInt::from(a - k).pow((j - 1 - r) as u32)
                    * BigInt::from(k - 1).pow((i - 1 - r) as u32)
                    * BigInt::from(a - k + 1).pow((n + r + 1 - i - j) as u32);
                s += term;
            }
            total += c * s;
        }
        total
    }

    /// Same numerator: the summand is a polynomial in `k` of degree `n - 1`,
    /// summed over `1..=a` with Eulerian power sums.
    fn numerator_poly(&self, i: usize, j: usize) -> BigInt {
        let n = self.n;
        let mut p = IntPoly::zero();
        for r in self.r_range(i, j) {
            let c =
                binomial((j - 1) as u64, r as i64) * binomial((n - j) as u64, (i - r - 1) as i64);
            if c.is_zero() {
                continue;
            }
            let left = &self.k[r] * &self.k_minus_1[i - 1 - r];
            let right = &self.a_minus_k[j - 1 - r] * &self.a_minus_k_plus_1[n + r + 1 - i - j];
            p = &p + &(&left * &right).scale(&c);
        }
        sum_poly_range(&p, &self.a, &self.eulerian)
    }

    fn numerator(&self, i: usize, j: usize) -> BigInt {
        match self.direct {
            Some(a) => self.numerator_direct(i, j, a),
            None => self.numerator_poly(i, j),
        }
    }

    fn entry(&self, i: usize, j: usize) -> ExactQ {
        ExactQ::new(self.numerator(i, j), self.a_n.clone())
    }

    fn row(&self, i: usize) -> Vec<ExactQ> {
        (1..=self.n)
            .into_par_iter()
            .map(|j| self.entry(i, j))
            .collect()
    }
}

/// `P_a(i, j)`: chance that the card at position `i` moves to position `j`.
pub fn transition_entry(n: usize, a: &BigInt, i: usize, j: usize) -> Result<ExactQ> {
    check_indices(n, i, j)?;
    check_packets(a)?;
    Ok(Engine::new(n, a).entry(i, j))
}

/// [`transition_entry`] forced through the summation over `k`.
pub fn transition_entry_direct(n: usize, a: u64, i: usize, j: usize) -> Result<ExactQ> {
    check_indices(n, i, j)?;
    check_packets(&BigInt::from(a))?;
    let e = Engine::new(n, &BigInt::from(a));
    Ok(ExactQ::new(e.numerator_direct(i, j, a), e.a_n.clone()))
}

/// [`transition_entry`] forced through the polynomial power-sum route.
pub fn transition_entry_poly(n: usize, a: &BigInt, i: usize, j: usize) -> Result<ExactQ> {
    check_indices(n, i, j)?;
    check_packets(a)?;
    let e = Engine::new(n, a);
    Ok(ExactQ::new(e.numerator_poly(i, j), e.a_n.clone()))
}

/// Closed form of `P_2(i, j)`. Below the diagonal the binomial is
/// `C(n-j, i-j)`; the often-quoted `C(n-j, i-1)` agrees only in column 1.
pub fn transition_entry_a2(n: usize, i: usize, j: usize) -> Result<ExactQ> {
    check_indices(n, i, j)?;
    let two_pow = |e: usize| BigInt::one() << e;
    Ok(match i.cmp(&j) {
        std::cmp::Ordering::Equal => ExactQ::new(two_pow(i - 1) + two_pow(n - i), two_pow(n)),
        std::cmp::Ordering::Greater => {
            ExactQ::new(binomial((n - j) as u64, (i - j) as i64), two_pow(n - j + 1))
        }
        std::cmp::Ordering::Less => return transition_entry_a2(n, n - i + 1, n - j + 1),
    })
}

/// The full single-card transition matrix of an a-shuffle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardMatrix {
    n: usize,
    a: BigInt,
    entries: QMatrix,
}

impl CardMatrix {
    pub fn new(n: usize, a: &BigInt) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "deck must hold at least one card".into(),
            ));
        }
        check_packets(a)?;
        let e = Engine::new(n, a);
        let entries = QMatrix::from_fn(n, n, |i, j| e.entry(i + 1, j + 1));
        Ok(CardMatrix {
            n,
            a: a.clone(),
            entries,
        })
    }

    pub fn from_param(n: usize, param: &ShuffleParam) -> Result<Self> {
        CardMatrix::new(n, param.a())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// 1-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &ExactQ {
        self.entries.get(i - 1, j - 1)
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.entries
    }

    pub fn is_cross_symmetric(&self) -> bool {
        let n = self.n;
        (1..=n).all(|i| (1..=n).all(|j| self.get(i, j) == self.get(n - i + 1, n - j + 1)))
    }
}

/// Row `i_start` of the transition matrix, computed on its own.
pub fn transition_row(n: usize, a: &BigInt, i_start: usize) -> Result<Vec<ExactQ>> {
    check_indices(n, i_start, 1)?;
    check_packets(a)?;
    Ok(Engine::new(n, a).row(i_start))
}

/// Law of the position of the card that started at the bottom.
pub fn bottom_card_dist(n: usize, a: &BigInt) -> Result<FiniteDist<usize>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "deck must hold at least one card".into(),
        ));
    }
    check_packets(a)?;
    let eulerian = EulerianTable::new(n);
    let a_n = a.pow(n as u32);
    let masses = (1..=n)
        .into_par_iter()
        .map(|j| {
            let p = &IntPoly::linear_pow(&BigInt::from(-1), &BigInt::one(), (n - j) as u32)
                * &IntPoly::monomial(BigInt::one(), j - 1);
            ExactQ::new(sum_poly_range(&p, a, &eulerian), a_n.clone())
        })
        .collect();
    FiniteDist::new((1..=n).collect(), masses)
}

/// `1 - n Q_a(1)`: separation for a card starting at the bottom.
pub fn bottom_card_sep(n: usize, a: &BigInt) -> Result<ExactQ> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "deck must hold at least one card".into(),
        ));
    }
    check_packets(a)?;
    let eulerian = EulerianTable::new(n);
    let q1 = ExactQ::new(power_sum(n - 1, &(a - 1), &eulerian), a.pow(n as u32));
    Ok(ExactQ::one() - ExactQ::from(n as u64) * q1)
}

/// Distances of the card that started at `i_start` from uniform on `n`
/// positions.
pub fn single_card_report(
    n: usize,
    i_start: usize,
    param: &ShuffleParam,
) -> Result<DistanceReport> {
    let row = transition_row(n, param.a(), i_start)?;
    row_report(&row)
}

pub(crate) fn row_report(row: &[ExactQ]) -> Result<DistanceReport> {
    let u = ExactQ::new(1, row.len() as u64);
    distance_from_classes(row.iter().map(|p| (BigInt::one(), p.clone(), u.clone())))
}

/// Outcome of testing one candidate right eigenvector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenMode {
    /// The vector is tested against eigenvalue `a^-m`.
    pub m: usize,
    /// `(i-1)^(i-1) C(m-1, i-1) + (-1)^(n-i+m) C(m-1, n-i)`.
    pub literal: bool,
    /// `(-1)^(i-1) C(m-1, i-1) + (-1)^(n-i+m) C(m-1, n-i)`.
    pub sign_variant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenReport {
    pub n: usize,
    pub a: String,
    /// Rows sum to one, so the all-ones vector has eigenvalue 1.
    pub ones_vector: bool,
    pub modes: Vec<EigenMode>,
}

impl EigenReport {
    pub fn literal_holds(&self) -> bool {
        self.modes.iter().all(|m| m.literal)
    }

    pub fn variant_holds(&self) -> bool {
        self.modes.iter().all(|m| m.literal || m.sign_variant)
    }

    /// Name of the form that passes for every `m`, if any.
    pub fn resolved(&self) -> Option<&'static str> {
        if !self.ones_vector {
            None
        } else if self.literal_holds() {
            Some("literal")
        } else if self.modes.iter().all(|m| m.sign_variant) {
            Some("sign-variant")
        } else if self.variant_holds() {
            Some("mixed")
        } else {
            None
        }
    }
}

fn eigen_vector(n: usize, m: usize, literal: bool) -> Vec<ExactQ> {
    (1..=n)
        .map(|i| {
            let lead = if literal {
                // 0^0 = 1
                BigInt::from(i as u64 - 1).pow(i as u32 - 1)
            } else if (i - 1) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let sign = if (n - i + m).is_multiple_of(2) {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let v = lead * binomial(m as u64 - 1, i as i64 - 1)
                + sign * binomial(m as u64 - 1, (n - i) as i64);
            ExactQ::from(v)
        })
        .collect()
}

fn is_eigenvector(p: &QMatrix, v: &[ExactQ], lambda: &ExactQ) -> bool {
    if v.iter().all(ExactQ::is_zero) {
        return false;
    }
    let pv = p.mul_vec(v).expect("square");
    pv.iter().zip(v).all(|(x, y)| *x == lambda * y)
}

/// Tests the candidate right eigenvectors `V_m`, `m = 1..n-1`, against
/// eigenvalues `a^-m`, together with the sign variant.
pub fn eigen_check(n: usize, a: &BigInt) -> Result<EigenReport> {
    if !(2..=EIGEN_CHECK_MAX_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "eigen check runs for 2 <= n <= {EIGEN_CHECK_MAX_N}"
        )));
    }
    let p = CardMatrix::new(n, a)?;
    let ones = vec![ExactQ::one(); n];
    let ones_vector = is_eigenvector(p.matrix(), &ones, &ExactQ::one());
    let modes = (1..n)
        .map(|m| {
            let lambda = ExactQ::new(BigInt::one(), a.pow(m as u32));
            let literal = is_eigenvector(p.matrix(), &eigen_vector(n, m, true), &lambda);
            let sign_variant = is_eigenvector(p.matrix(), &eigen_vector(n, m, false), &lambda);
            EigenMode {
                m,
                literal,
                sign_variant,
            }
        })
        .collect();
    Ok(EigenReport {
        n,
        a: a.to_string(),
        ones_vector,
        modes,
    })
}

fn alpha(a: &BigInt) -> Result<ExactQ> {
    if *a < BigInt::from(2) {
        return Err(Error::InvalidArgument("bounds need a >= 2".into()));
    }
    Ok(ExactQ::new(a - 1, a.clone()))
}

/// `(lower, upper)` bracket on the bottom-card separation.
pub fn sep_bounds(n: usize, a: &BigInt) -> Result<(ExactQ, ExactQ)> {
    if n < 2 {
        return Err(Error::InvalidArgument("bounds need n >= 2".into()));
    }
    let al = alpha(a)?;
    let n_over_a = ExactQ::new(n as u64, a.clone());
    let one = ExactQ::one();
    let an = al.pow(n as u32);
    let an1 = al.pow(n as u32 - 1);
    let upper = &one - &n_over_a * &an / (&one - &an);
    let lower = &one - &n_over_a * &an1 / (&one - &an1);
    Ok((lower, upper))
}

/// `n / (2a)`, the large-`a` form of the separation.
pub fn sep_heuristic(n: usize, a: &BigInt) -> ExactQ {
    ExactQ::new(n as u64, a * 2)
}

/// Limit of the separation at `a = C n`.
pub fn sep_limit(c: f64) -> f64 {
    let x = (-1.0 / c).exp();
    1.0 - x / (c * (1.0 - x))
}

#[derive(Clone, Debug)]
pub struct RealBracket {
    pub lower: Real,
    pub upper: Real,
}

impl RealBracket {
    pub fn lower_f64(&self) -> f64 {
        real_to_f64(&self.lower)
    }

    pub fn upper_f64(&self) -> f64 {
        real_to_f64(&self.upper)
    }

    /// True when `x` lies in the bracket widened by `tol` on each side.
    pub fn contains(&self, x: &ExactQ, tol: f64) -> bool {
        let x = real_from_q(x);
        let t = real_from_q(&ExactQ::from_f64(tol).expect("finite tolerance"));
        x >= &self.lower - &t && x <= &self.upper + &t
    }
}

/// `(lower, upper)` bracket on the bottom-card total variation, evaluated
/// with 128-bit floats.
pub fn tv_bounds(n: usize, a: &BigInt) -> Result<RealBracket> {
    if n < 2 {
        return Err(Error::InvalidArgument("bounds need n >= 2".into()));
    }
    let al = alpha(a)?;
    let one = ExactQ::one();
    let nq = ExactQ::from(n as u64);
    let aq = ExactQ::from(a.clone());
    let an = al.pow(n as u32);
    let an1 = al.pow(n as u32 - 1);
    let an_plus = al.pow(n as u32 + 1);

    let ln_inv_alpha = real_from_q(&al.recip()).ln();
    let scale = Real::ONE / (real_from_int(&BigInt::from(n)) * ln_inv_alpha);

    let upper_rational =
        &an_plus / (&one - &an) - &aq * &al * &al * (&one - &an1) / (&nq * (&one - &an));
    let upper_log_arg = &aq / &nq * (&one - &an) / &an_plus;
    let upper = real_from_q(&upper_rational) + &scale * real_from_q(&upper_log_arg).ln();

    let lower_rational = &an / (&one - &an1) - &aq * (&one - &an) / (&nq * &al * (&one - &an1));
    let lower_log_arg = &aq / &nq * (&one - &an1) / &an1;
    let lower = real_from_q(&lower_rational) + &scale * real_from_q(&lower_log_arg).ln();

    Ok(RealBracket { lower, upper })
}

/// Limit of the bottom-card total variation at `a = C n`:
/// `C log(C(e^{1/C} - 1)) + 1/(e^{1/C} - 1) - C`.
pub fn tv_limit(c: f64) -> f64 {
    let em1 = (1.0 / c).exp_m1();
    c * (c * em1).ln() + 1.0 / em1 - c
}

/// The limit expression in its uncorrected form,
/// `C log(C(e^{1/C} - 1)) + (1 - C log(e^{1/C} - 1))/(e^{1/C} - 1)`;
/// kept for comparison with [`tv_limit`], which it does not match.
pub fn tv_limit_uncorrected(c: f64) -> f64 {
    let em1 = (1.0 / c).exp_m1();
    c * (c * em1).ln() + (1.0 - c * em1.ln()) / em1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(a: u64) -> BigInt {
        BigInt::from(a)
    }

    #[test]
    fn two_card_matrix() {
        for a in 1..8u64 {
            let m = CardMatrix::new(2, &big(a)).unwrap();
            let d = 2 * a as i64;
            assert_eq!(*m.get(1, 1), ExactQ::new(a as i64 + 1, d));
            assert_eq!(*m.get(1, 2), ExactQ::new(a as i64 - 1, d));
            assert_eq!(*m.get(2, 2), ExactQ::new(a as i64 + 1, d));
        }
    }

    #[test]
    fn three_card_matrix() {
        for a in 1..8i64 {
            let m = CardMatrix::new(3, &big(a as u64)).unwrap();
            let d = 6 * a * a;
            assert_eq!(*m.get(1, 1), ExactQ::new((a + 1) * (2 * a + 1), d));
            assert_eq!(*m.get(1, 2), ExactQ::new(2 * (a * a - 1), d));
            assert_eq!(*m.get(1, 3), ExactQ::new((a - 1) * (2 * a - 1), d));
            assert_eq!(*m.get(2, 2), ExactQ::new(2 * (a * a + 2), d));
        }
    }

    #[test]
    fn routes_agree() {
        for n in 1..9 {
            for a in [1u64, 2, 3, 5, 9] {
                for i in 1..=n {
                    for j in 1..=n {
                        let d = transition_entry_direct(n, a, i, j).unwrap();
                        let p = transition_entry_poly(n, &big(a), i, j).unwrap();
                        assert_eq!(d, p, "n={n} a={a} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn two_packet_closed_form() {
        assert_eq!(transition_entry_a2(2, 1, 1).unwrap(), ExactQ::new(3, 4));
        assert_eq!(transition_entry_a2(4, 3, 1).unwrap(), ExactQ::new(3, 16));
        for n in 1..=20 {
            let m = CardMatrix::new(n, &big(2)).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(transition_entry_a2(n, i, j).unwrap(), *m.get(i, j));
                }
            }
        }
    }

    #[test]
    fn lower_binomial_index() {
        // C(n-j, i-1) in place of C(n-j, i-j) breaks off the first column
        let n = 5;
        let wrong = ExactQ::new(binomial(3, 3), BigInt::from(16));
        assert_ne!(transition_entry(n, &big(2), 4, 2).unwrap(), wrong);
        assert_eq!(
            transition_entry(n, &big(2), 4, 2).unwrap(),
            ExactQ::new(3, 16)
        );
    }

    #[test]
    fn rejects_bad_positions() {
        assert!(transition_entry(3, &big(2), 0, 1).is_err());
        assert!(transition_entry(3, &big(2), 1, 4).is_err());
        assert!(transition_entry(3, &big(0), 1, 1).is_err());
        assert!(sep_bounds(52, &big(1)).is_err());
        assert!(tv_bounds(52, &big(1)).is_err());
    }

    #[test]
    fn one_packet_leaves_bottom_card() {
        let d = bottom_card_dist(6, &big(1)).unwrap();
        assert_eq!(d.prob(&6), ExactQ::one());
    }

    #[test]
    fn bottom_row_matches_closed_form() {
        for n in 1..10 {
            for a in 1..7u64 {
                let m = CardMatrix::new(n, &big(a)).unwrap();
                let d = bottom_card_dist(n, &big(a)).unwrap();
                for j in 1..=n {
                    assert_eq!(d.prob(&j), *m.get(n, j));
                    assert_eq!(d.prob(&j), *m.get(1, n - j + 1));
                }
            }
        }
    }

    #[test]
    fn small_eigen_case() {
        let r = eigen_check(2, &big(2)).unwrap();
        assert!(r.ones_vector);
        assert_eq!(r.modes.len(), 1);
        assert!(r.resolved().is_some());
    }

    #[test]
    fn limits() {
        // at C = 1 the derived limit is about 0.123; the other form is not
        assert!((tv_limit(1.0) - 0.1233).abs() < 1e-3);
        assert!((tv_limit_uncorrected(1.0) - 0.808).abs() < 1e-3);
        assert!(tv_limit(64.0) < 1e-2);
        assert!(sep_limit(64.0) < 1e-2);
    }

    #[test]
    fn heuristic_value() {
        assert_eq!(sep_heuristic(52, &big(1024)), ExactQ::new(26, 1024));
    }
}
