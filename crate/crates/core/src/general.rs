//! Separation for arbitrary deck compositions, the full-deck rising-sequence
//! law, decks of distinct cards over a block of identical ones, the rule of
//! thumb, and Poisson-summation estimates for power sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    binomial, binomial_big, factorial, multinomial, sum_poly_range, EulerianTable, ExactQ, IntPoly,
};
use crate::deck::{DeckSpec, Word};
use crate::distance::{distance_from_classes, DistanceReport};
use crate::error::{Error, Result};
use crate::simulate::DEFAULT_ENUM_BUDGET;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SepMethod {
    DirectSum,
    GeneratingFunction,
    RuleOfThumb,
    CvFormula,
    BayerDiaconis,
}

impl SepMethod {
    pub fn name(self) -> &'static str {
        match self {
            SepMethod::DirectSum => "direct-sum",
            SepMethod::GeneratingFunction => "generating-function",
            SepMethod::RuleOfThumb => "rule-of-thumb",
            SepMethod::CvFormula => "cv-formula",
            SepMethod::BayerDiaconis => "bayer-diaconis",
        }
    }
}

impl fmt::Display for SepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A separation value and how it was obtained. `eta_bound` is set only for
/// the rule of thumb, whose `sep` is the `eta = 0` estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SepResult {
    pub sep: ExactQ,
    pub method: SepMethod,
    pub eta_bound: Option<ExactQ>,
}

impl SepResult {
    fn exact(sep: ExactQ, method: SepMethod) -> Self {
        SepResult {
            sep,
            method,
            eta_bound: None,
        }
    }
}

fn check_a(a: &BigInt) -> Result<()> {
    if *a < BigInt::one() {
        return Err(Error::InvalidArgument("packet count must be >= 1".into()));
    }
    Ok(())
}

fn deck_multinomial(spec: &DeckSpec) -> BigInt {
    let parts: Vec<u64> = spec.multiplicities().iter().map(|&d| d as u64).collect();
    multinomial(spec.n() as u64, &parts).expect("parts sum to n")
}

fn sep_from_weight(spec: &DeckSpec, weight: BigInt, a: &BigInt) -> ExactQ {
    let q = ExactQ::new(weight, a.pow(spec.n() as u32));
    ExactQ::one() - ExactQ::from(deck_multinomial(spec)) * q
}

/// Number of `(k_1 < ... < k_{m-1})` tuples the direct sum visits.
pub fn direct_work(spec: &DeckSpec, a: &BigInt) -> BigInt {
    binomial_big(&(a - 1), spec.types() as i64 - 1)
}

/// `a^n Q_a(reverse)` as the sum over `0 = k_0 < k_1 < ... < k_{m-1} < a` of
/// `(a - k_{m-1})^{D_m} prod_j ((k_j - k_{j-1})^{D_j} - (k_j - k_{j-1} - 1)^{D_j})`.
pub fn reverse_weight_direct(spec: &DeckSpec, a: &BigInt, budget: u64) -> Result<BigInt> {
    check_a(a)?;
    let work = direct_work(spec, a);
    if work > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            work: work.to_string(),
            budget,
            hint: "use sep_genfun".into(),
        });
    }
    let a = a.to_u64().expect("within budget");
    let d = spec.multiplicities();
    let m = d.len();
    if m == 1 {
        return Ok(BigInt::from(a).pow(d[0] as u32));
    }
    // step[j][g] = g^D - (g-1)^D for a gap g between consecutive k's
    let step: Vec<Vec<BigInt>> = d[..m - 1]
        .iter()
        .map(|&dj| {
            (0..=a)
                .map(|g| {
                    if g == 0 {
                        BigInt::zero()
                    } else {
                        BigInt::from(g).pow(dj as u32) - BigInt::from(g - 1).pow(dj as u32)
                    }
                })
                .collect()
        })
        .collect();
    let last: Vec<BigInt> = (0..=a)
        .map(|g| BigInt::from(g).pow(d[m - 1] as u32))
        .collect();

    fn walk(
        level: usize,
        prev: u64,
        prefix: &BigInt,
        a: u64,
        step: &[Vec<BigInt>],
        last: &[BigInt],
    ) -> BigInt {
        if level == step.len() {
            return prefix * &last[(a - prev) as usize];
        }
        let remaining = (step.len() - level - 1) as u64;
        let mut total = BigInt::zero();
        for k in prev + 1..a - remaining {
            let p = prefix * &step[level][(k - prev) as usize];
            total += walk(level + 1, k, &p, a, step, last);
        }
        total
    }

    let remaining = (m - 2) as u64;
    if a <= remaining + 1 {
        return Ok(BigInt::zero());
    }
    Ok((1..a - remaining)
        .into_par_iter()
        .map(|k1| walk(1, k1, &step[0][k1 as usize], a, &step, &last))
        .sum())
}

/// Separation after an a-shuffle by the direct sum over packet boundaries.
pub fn sep_direct(spec: &DeckSpec, a: &BigInt, budget: u64) -> Result<SepResult> {
    let w = reverse_weight_direct(spec, a, budget)?;
    Ok(SepResult::exact(
        sep_from_weight(spec, w, a),
        SepMethod::DirectSum,
    ))
}

/// Coefficients of `prod_j A_{D_j}(z)`.
pub fn eulerian_product(spec: &DeckSpec) -> IntPoly {
    let table = EulerianTable::new(spec.multiplicities().iter().copied().max().unwrap_or(0));
    spec.multiplicities()
        .iter()
        .fold(IntPoly::one(), |acc, &d| &acc * table.get(d))
}

/// `T(x) = [z^x] P(z) / (1-z)^{n+1} = sum_i p_i C(x - i + n, n)`.
fn coefficient_t(p: &IntPoly, n: usize, x: &BigInt) -> BigInt {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c * binomial_big(&(x - i + n), n as i64))
        .sum()
}

/// `a^n Q_a(reverse)` by coefficient extraction; cost does not grow with `a`.
pub fn reverse_weight_genfun(spec: &DeckSpec, a: &BigInt) -> Result<BigInt> {
    check_a(a)?;
    Ok(coefficient_t(&eulerian_product(spec), spec.n(), a))
}

/// Separation after an a-shuffle via the generating function.
pub fn sep_genfun(spec: &DeckSpec, a: &BigInt) -> Result<SepResult> {
    let w = reverse_weight_genfun(spec, a)?;
    Ok(SepResult::exact(
        sep_from_weight(spec, w, a),
        SepMethod::GeneratingFunction,
    ))
}

/// Probability that an a-shuffle leaves the sorted deck sorted: `a^n Q_a` is
/// `T(a + m - 1)` with the same coefficient function as the reverse word.
pub fn sorted_prob_genfun(spec: &DeckSpec, a: &BigInt) -> Result<ExactQ> {
    check_a(a)?;
    let shifted = a + (spec.types() - 1);
    let w = coefficient_t(&eulerian_product(spec), spec.n(), &shifted);
    Ok(ExactQ::new(w, a.pow(spec.n() as u32)))
}

/// SEP and the l-infinity distance from the two extreme words: the reverse
/// word is least likely, the sorted word most likely.
pub fn extremes(spec: &DeckSpec, a: &BigInt) -> Result<(ExactQ, ExactQ)> {
    let sep = sep_genfun(spec, a)?.sep;
    let top = ExactQ::from(deck_multinomial(spec)) * sorted_prob_genfun(spec, a)? - ExactQ::one();
    let linf = sep.clone().max(top);
    Ok((sep, linf))
}

/// Rule-of-thumb main term for `T(a)`:
/// `prod D_j! / (n+m-1)! * sum_j (-1)^j C(m-1, j) (a - j)^{n+m-1}`.
pub fn rot_main_weight(spec: &DeckSpec, a: &BigInt) -> ExactQ {
    let n = spec.n();
    let m = spec.types();
    let e = (n + m - 1) as u32;
    let mut s = BigInt::zero();
    for j in 0..m {
        let term = binomial((m - 1) as u64, j as i64) * (a - j).pow(e);
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    let fact: BigInt = spec
        .multiplicities()
        .iter()
        .map(|&d| factorial(d as u64))
        .product();
    ExactQ::new(fact * s, factorial((n + m - 1) as u64))
}

/// `(1 + n^2 / (3 (d-2) (a-m+1)^2))^{m-1} - 1`, `d` the smallest multiplicity.
pub fn rot_eta_bound(spec: &DeckSpec, a: &BigInt) -> Result<ExactQ> {
    check_rot(spec, a)?;
    let n = spec.n() as u64;
    let m = spec.types();
    let d = spec.min_multiplicity() as u64;
    let gap = a - (m - 1);
    let inner =
        ExactQ::one() + ExactQ::new(BigInt::from(n * n), BigInt::from(3 * (d - 2)) * &gap * &gap);
    Ok(inner.pow((m - 1) as u32) - ExactQ::one())
}

fn check_rot(spec: &DeckSpec, a: &BigInt) -> Result<()> {
    if spec.min_multiplicity() < 3 {
        return Err(Error::Hypothesis(format!(
            "the rule of thumb needs every card type to appear at least 3 times; {spec} has a type with {}",
            spec.min_multiplicity()
        )));
    }
    if *a <= BigInt::from(spec.types() - 1) {
        return Err(Error::Hypothesis(format!(
            "the rule of thumb needs a > m - 1 = {}",
            spec.types() - 1
        )));
    }
    Ok(())
}

/// Rule-of-thumb separation (the `eta = 0` estimate) with its error bound.
pub fn rule_of_thumb(spec: &DeckSpec, a: &BigInt) -> Result<SepResult> {
    check_rot(spec, a)?;
    Ok(SepResult {
        sep: rot_estimate(spec, a)?,
        method: SepMethod::RuleOfThumb,
        eta_bound: Some(rot_eta_bound(spec, a)?),
    })
}

/// The `eta = 0` estimate alone. Only `a > m - 1` is required, so it can be
/// evaluated for decks with fewer than 3 cards of a type, where no error
/// bound is available.
pub fn rot_estimate(spec: &DeckSpec, a: &BigInt) -> Result<ExactQ> {
    if *a <= BigInt::from(spec.types() - 1) {
        return Err(Error::Hypothesis(format!(
            "the rule of thumb needs a > m - 1 = {}",
            spec.types() - 1
        )));
    }
    let main = rot_main_weight(spec, a);
    Ok(ExactQ::one()
        - ExactQ::from(deck_multinomial(spec)) * main / ExactQ::from(a.pow(spec.n() as u32)))
}

/// `T(a) / main - 1`: the relative error the rule of thumb actually makes.
pub fn rot_eta_exact(spec: &DeckSpec, a: &BigInt) -> Result<ExactQ> {
    check_rot(spec, a)?;
    let t = ExactQ::from(reverse_weight_genfun(spec, a)?);
    Ok(t / rot_main_weight(spec, a) - ExactQ::one())
}

/// Separation by the requested method; `Auto` is the generating function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SepRoute {
    Auto,
    Direct,
    Genfun,
    RuleOfThumb,
}

impl FromStr for SepRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SepRoute::Auto),
            "direct" => Ok(SepRoute::Direct),
            "genfun" => Ok(SepRoute::Genfun),
            "rot" => Ok(SepRoute::RuleOfThumb),
            other => Err(Error::Parse(format!(
                "unknown method {other:?} (auto|direct|genfun|rot)"
            ))),
        }
    }
}

pub fn separation(spec: &DeckSpec, a: &BigInt, route: SepRoute, budget: u64) -> Result<SepResult> {
    match route {
        SepRoute::Auto | SepRoute::Genfun => sep_genfun(spec, a),
        SepRoute::Direct => sep_direct(spec, a, budget),
        SepRoute::RuleOfThumb => rule_of_thumb(spec, a),
    }
}

/// Distances of an a-shuffle of `n` distinct cards from uniform, aggregated
/// over the number of rising sequences: `Q_a = C(n + a - r, n) / a^n`.
pub fn bd_full_deck(n: usize, a: &BigInt) -> Result<DistanceReport> {
    check_a(a)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "deck must have at least one card".into(),
        ));
    }
    let eulerian = crate::arith::eulerian_poly(n);
    let a_n = a.pow(n as u32);
    let u = ExactQ::new(BigInt::one(), factorial(n as u64));
    let classes: Vec<(BigInt, ExactQ, ExactQ)> = (1..=n)
        .map(|r| {
            let q = ExactQ::new(binomial_big(&(a + n - r), n as i64), a_n.clone());
            (eulerian.coeff(r), q, u.clone())
        })
        .collect();
    distance_from_classes(classes)
}

/// Same separation as [`bd_full_deck`], tagged with its method.
pub fn bd_sep(n: usize, a: &BigInt) -> Result<SepResult> {
    Ok(SepResult::exact(
        bd_full_deck(n, a)?.sep,
        SepMethod::BayerDiaconis,
    ))
}

/// `(r, l)` for an arrangement of the deck `1, ..., h` plus `n_x` copies of
/// `x` whose start is `1, ..., h, x, ..., x`: `r` counts card 1 and every
/// card `c` with card `c - 1` below it; `l` counts the x's above card `h`.
pub fn cv_statistics(w: &Word, h: usize) -> Result<(usize, usize)> {
    let spec = w.spec();
    let m = spec.multiplicities();
    if h == 0 || m.len() != h + 1 || m[..h].iter().any(|&c| c != 1) {
        return Err(Error::DeckMismatch(format!(
            "expected {h} distinct cards followed by a block of identical cards, got {spec}"
        )));
    }
    let mut pos = vec![0usize; h];
    for (p, &l) in w.labels().iter().enumerate() {
        if (l as usize) < h {
            pos[l as usize] = p;
        }
    }
    let r = 1 + (1..h).filter(|&c| pos[c - 1] > pos[c]).count();
    let l = w.labels()[..pos[h - 1]]
        .iter()
        .filter(|&&x| x as usize == h)
        .count();
    Ok((r, l))
}

/// `(1/a^{n+h}) sum_{m=r-1}^{a-1} C(m-r+h, h-1) (a-m-1)^l (a-m)^{n-l}`.
pub fn cv_formula(h: usize, n_x: usize, a: u64, r: usize, l: usize) -> Result<ExactQ> {
    if h == 0 || r == 0 || r > h || l > n_x || a == 0 {
        return Err(Error::InvalidArgument(format!(
            "need h >= 1, 1 <= r <= h, l <= n and a >= 1; got h={h}, r={r}, l={l}, a={a}"
        )));
    }
    let mut total = BigInt::zero();
    for m in (r as u64 - 1)..a {
        total += binomial(m + h as u64 - r as u64, h as i64 - 1)
            * BigInt::from(a - m - 1).pow(l as u32)
            * BigInt::from(a - m).pow((n_x - l) as u32);
    }
    Ok(ExactQ::new(total, BigInt::from(a).pow((n_x + h) as u32)))
}

/// `1 - ((n+h)...(n+1) / a^{n+h}) sum_{k=h-1}^{a-1} C(k, h-1) (a-1-k)^n`.
pub fn cv_sep(h: usize, n_x: usize, a: &BigInt) -> Result<SepResult> {
    check_a(a)?;
    if h == 0 {
        return Err(Error::InvalidArgument(
            "need at least one distinct card".into(),
        ));
    }
    let n = n_x;
    let sum = match a.to_u64().filter(|&a| a <= 1 << 16) {
        Some(a) => {
            let mut s = BigInt::zero();
            for k in (h as u64 - 1)..a {
                s += binomial(k, h as i64 - 1) * BigInt::from(a - 1 - k).pow(n as u32);
            }
            s
        }
        None => {
            // (h-1)! C(k, h-1) is the falling factorial k (k-1) ... (k-h+2)
            let one = BigInt::one();
            let falling = (0..h - 1).fold(IntPoly::one(), |acc, i| {
                &acc * &IntPoly::linear_pow(&BigInt::from(-(i as i64)), &one, 1)
            });
            let p = &falling * &IntPoly::linear_pow(&(a - 1), &-&one, n as u32);
            let table = EulerianTable::new(p.degree().unwrap_or(0));
            let mut s = sum_poly_range(&p, &(a - 1), &table) + p.eval(&BigInt::zero());
            s /= factorial(h as u64 - 1);
            s
        }
    };
    let rising: BigInt = ((n + 1)..=(n + h)).map(BigInt::from).product();
    let q = ExactQ::new(rising * sum, a.pow((n + h) as u32));
    Ok(SepResult::exact(ExactQ::one() - q, SepMethod::CvFormula))
}

/// Main term and error radius of a Poisson-summation estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoissonEstimate {
    pub main_term: ExactQ,
    pub error_radius: ExactQ,
}

impl PoissonEstimate {
    pub fn contains(&self, x: &ExactQ) -> bool {
        (x - &self.main_term).abs() <= self.error_radius
    }
}

fn check_xi(xi: &ExactQ) -> Result<()> {
    if xi.is_negative() || *xi > ExactQ::one() {
        return Err(Error::InvalidArgument(format!(
            "xi must lie in [0, 1], got {xi}"
        )));
    }
    Ok(())
}

/// `a r! s! / (r+s+1)!` with radius `(1/(6a)) (r! s! / (r+s-1)!) (1/(r-1) + 1/(s-1))`.
pub fn poisson_estimate(a: &ExactQ, xi: &ExactQ, r: usize, s: usize) -> Result<PoissonEstimate> {
    if r < 2 || s < 2 {
        return Err(Error::Hypothesis(format!(
            "exponents must be at least 2, got r={r}, s={s}"
        )));
    }
    if a.is_negative() || a.is_zero() {
        return Err(Error::InvalidArgument("a must be positive".into()));
    }
    check_xi(xi)?;
    let rs = ExactQ::from(factorial(r as u64) * factorial(s as u64));
    let main_term = a * &rs / ExactQ::from(factorial((r + s + 1) as u64));
    let error_radius = &rs / ExactQ::from(factorial((r + s - 1) as u64)) / (ExactQ::from(6i64) * a)
        * (ExactQ::new(1, r as u64 - 1) + ExactQ::new(1, s as u64 - 1));
    Ok(PoissonEstimate {
        main_term,
        error_radius,
    })
}

/// `(1/a^{r+s}) sum_{0 <= k <= a - xi} (k+xi)^r (a-k-xi)^s`, exactly.
pub fn poisson_exact(a: &ExactQ, xi: &ExactQ, r: usize, s: usize) -> Result<ExactQ> {
    check_xi(xi)?;
    let top = (a - xi).floor();
    let mut total = ExactQ::zero();
    let mut k = BigInt::zero();
    while k <= top {
        let x = ExactQ::from(k.clone()) + xi;
        total += x.pow(r as u32) * (a - &x).pow(s as u32);
        k += 1;
    }
    Ok(total / a.pow((r + s) as u32))
}

/// Estimate of `sum_{a_1 + ... + a_m = a} prod_j (a_j + xi_j)^{r_j}` with
/// radius `r_1! ... r_m! sum_{j>=1} C(m-1, j) (1/(3(r-1)))^j A^{R+m-1-2j} / (R+m-1-2j)!`,
/// where `A = a + sum xi`, `R = sum r_j` and `r = min r_j`.
pub fn poisson_multi(a: u64, xis: &[ExactQ], rs: &[usize]) -> Result<PoissonEstimate> {
    let m = rs.len();
    if m < 2 || xis.len() != m {
        return Err(Error::InvalidArgument(
            "need m >= 2 exponents and as many offsets".into(),
        ));
    }
    if let Some(&bad) = rs.iter().find(|&&r| r < 2) {
        return Err(Error::Hypothesis(format!(
            "exponents must be at least 2, got {bad}"
        )));
    }
    for xi in xis {
        check_xi(xi)?;
    }
    let r_min = *rs.iter().min().expect("m >= 2");
    let big_r: usize = rs.iter().sum();
    let big_a = ExactQ::from(a) + xis.iter().sum::<ExactQ>();
    let fact = ExactQ::from(rs.iter().map(|&r| factorial(r as u64)).product::<BigInt>());
    let e = big_r + m - 1;
    let main_term = &fact * big_a.pow(e as u32) / ExactQ::from(factorial(e as u64));
    let ratio = ExactQ::new(1, 3 * (r_min as u64 - 1));
    let mut radius = ExactQ::zero();
    for j in 1..m {
        let Some(ej) = e.checked_sub(2 * j) else {
            break;
        };
        radius += ExactQ::from(binomial((m - 1) as u64, j as i64))
            * ratio.pow(j as u32)
            * big_a.pow(ej as u32)
            / ExactQ::from(factorial(ej as u64));
    }
    Ok(PoissonEstimate {
        main_term,
        error_radius: fact * radius,
    })
}

/// The sum estimated by [`poisson_multi`], by walking every composition of
/// `a` into `m` non-negative parts.
pub fn poisson_multi_exact(a: u64, xis: &[ExactQ], rs: &[usize]) -> Result<ExactQ> {
    let m = rs.len();
    if m == 0 || xis.len() != m {
        return Err(Error::InvalidArgument(
            "need as many offsets as exponents".into(),
        ));
    }
    let work = binomial(a + m as u64 - 1, m as i64 - 1);
    if work > BigInt::from(DEFAULT_ENUM_BUDGET) {
        return Err(Error::BudgetExceeded {
            work: work.to_string(),
            budget: DEFAULT_ENUM_BUDGET,
            hint: "use poisson_multi".into(),
        });
    }
    let powers: Vec<Vec<ExactQ>> = (0..m)
        .map(|j| {
            (0..=a)
                .map(|k| (ExactQ::from(k) + &xis[j]).pow(rs[j] as u32))
                .collect()
        })
        .collect();

    fn walk(j: usize, left: u64, prefix: &ExactQ, powers: &[Vec<ExactQ>]) -> ExactQ {
        if j + 1 == powers.len() {
            return prefix * &powers[j][left as usize];
        }
        (0..=left)
            .map(|k| walk(j + 1, left - k, &(prefix * &powers[j][k as usize]), powers))
            .sum()
    }
    Ok(walk(0, a, &ExactQ::one(), &powers))
}
