//! Two-colour decks: the exact a-shuffle law from reds-over-blacks, the law
//! of one 2-shuffle, separation asymptotics, the alternating start, and a
//! Monte Carlo estimator of total variation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, sum_poly_range, EulerianTable, ExactQ, IntPoly};
use crate::deck::{blacks_above, head_tail, DeckSpec, Word};
use crate::distance::{distance_from_classes, DistanceReport, FiniteDist};
use crate::error::{Error, Result};

/// Largest half-deck for which the alternating-start law is materialised.
pub const ALTERNATING_MAX_HALF: usize = 12;

fn check_rb(r: usize, b: usize) -> Result<()> {
    if r == 0 || b == 0 {
        return Err(Error::InvalidArgument(
            "need at least one red and one black card".into(),
        ));
    }
    Ok(())
}

fn check_word(r: usize, b: usize, w: &Word) -> Result<()> {
    let spec = DeckSpec::red_black(r, b)?;
    if w.spec() != spec {
        return Err(Error::DeckMismatch(format!(
            "word {w} is not an arrangement of {spec}"
        )));
    }
    Ok(())
}

/// `Z[j][b] = sum_k (k-1)^(R-1-j) k^j (a-k)^b (a-k+1)^(B-b)` for `j < R`,
/// `b <= B`, so that `a^n Q_a(w) = sum_j Z[j][b(j)]`.
#[derive(Clone, Debug)]
pub struct RedBlackLaw {
    r: usize,
    b: usize,
    a: BigInt,
    a_n: BigInt,
    z: Vec<Vec<BigInt>>,
}

impl RedBlackLaw {
    pub fn new(r: usize, b: usize, a: &BigInt) -> Result<Self> {
        check_rb(r, b)?;
        if *a < BigInt::one() {
            return Err(Error::InvalidArgument("packet count must be >= 1".into()));
        }
        let n = r + b;
        let small = a.to_u64().filter(|&a| a as usize <= (n * n).max(64));
        let z = match small {
            Some(a) => Self::table_direct(r, b, a),
            None => Self::table_poly(r, b, a),
        };
        Ok(RedBlackLaw {
            r,
            b,
            a: a.clone(),
            a_n: a.pow(n as u32),
            z,
        })
    }

    fn table_direct(r: usize, b: usize, a: u64) -> Vec<Vec<BigInt>> {
        let mut z = vec![vec![BigInt::zero(); b + 1]; r];
        for k in 1..=a {
            let km1: Vec<BigInt> = pow_table(k - 1, r);
            let kk: Vec<BigInt> = pow_table(k, r);
            let amk: Vec<BigInt> = pow_table(a - k, b);
            let amk1: Vec<BigInt> = pow_table(a - k + 1, b);
            for (j, row) in z.iter_mut().enumerate() {
                let red = &km1[r - 1 - j] * &kk[j];
                if red.is_zero() {
                    continue;
                }
                for (bb, cell) in row.iter_mut().enumerate() {
                    *cell += &red * &amk[bb] * &amk1[b - bb];
                }
            }
        }
        z
    }

    fn table_poly(r: usize, b: usize, a: &BigInt) -> Vec<Vec<BigInt>> {
        let n = r + b;
        let eulerian = EulerianTable::new(n);
        let lin =
            |c0: BigInt, c1: i64, e: usize| IntPoly::linear_pow(&c0, &BigInt::from(c1), e as u32);
        let blacks: Vec<IntPoly> = (0..=b)
            .map(|bb| &lin(a.clone(), -1, bb) * &lin(a + 1, -1, b - bb))
            .collect();
        (0..r)
            .into_par_iter()
            .map(|j| {
                let red = &lin(BigInt::from(-1), 1, r - 1 - j) * &lin(BigInt::zero(), 1, j);
                blacks
                    .iter()
                    .map(|bp| sum_poly_range(&(&red * bp), a, &eulerian))
                    .collect()
            })
            .collect()
    }

    pub fn reds(&self) -> usize {
        self.r
    }

    pub fn blacks(&self) -> usize {
        self.b
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// `a^n Q_a(w)` as an integer.
    pub fn weight(&self, w: &Word) -> Result<BigInt> {
        check_word(self.r, self.b, w)?;
        let bs = blacks_above(w)?;
        Ok(bs.iter().enumerate().map(|(j, &bj)| &self.z[j][bj]).sum())
    }

    pub fn prob(&self, w: &Word) -> Result<ExactQ> {
        Ok(ExactQ::new(self.weight(w)?, self.a_n.clone()))
    }

    /// `C(n, R) Z[j][b] / a^n` in floating point, for the sampler.
    fn scaled_table(&self) -> Vec<Vec<f64>> {
        let c = binomial((self.r + self.b) as u64, self.r as i64);
        self.z
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| ExactQ::new(v * &c, self.a_n.clone()).to_f64())
                    .collect()
            })
            .collect()
    }
}

fn pow_table(base: u64, max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = BigInt::one();
    for _ in 0..=max {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

/// Probability that an a-shuffle of `R` reds over `B` blacks yields `w`.
pub fn word_prob(r: usize, b: usize, a: &BigInt, w: &Word) -> Result<ExactQ> {
    RedBlackLaw::new(r, b, a)?.prob(w)
}

/// [`word_prob`] evaluated term by term as a double sum over `k` and `j`.
pub fn word_prob_direct(r: usize, b: usize, a: u64, w: &Word) -> Result<ExactQ> {
    check_rb(r, b)?;
    check_word(r, b, w)?;
    let bs = blacks_above(w)?;
    let mut total = BigInt::zero();
    for k in 1..=a {
        for (j0, &bj) in bs.iter().enumerate() {
            let j = j0 + 1;
            total += BigInt::from(k - 1).pow((r - j) as u32)
                * BigInt::from(k).pow((j - 1) as u32)
                * BigInt::from(a - k).pow(bj as u32)
                * BigInt::from(a - k + 1).pow((b - bj) as u32);
        }
    }
    Ok(ExactQ::new(total, BigInt::from(a).pow((r + b) as u32)))
}

/// `(Q_a(sorted), Q_a(reversed))` for reds over blacks.
pub fn sorted_and_reverse_prob(r: usize, b: usize, a: &BigInt) -> Result<(ExactQ, ExactQ)> {
    check_rb(r, b)?;
    if *a < BigInt::one() {
        return Err(Error::InvalidArgument("packet count must be >= 1".into()));
    }
    let n = r + b;
    let eulerian = EulerianTable::new(n);
    let one = BigInt::one();
    let red = &IntPoly::linear_pow(&BigInt::zero(), &one, r as u32)
        - &IntPoly::linear_pow(&-&one, &one, r as u32);
    let identity = &red * &IntPoly::linear_pow(&(a + 1), &-&one, b as u32);
    // the k = a term of the reverse sum vanishes because B >= 1
    let reverse = &red * &IntPoly::linear_pow(a, &-&one, b as u32);
    let a_n = a.pow(n as u32);
    Ok((
        ExactQ::new(sum_poly_range(&identity, a, &eulerian), a_n.clone()),
        ExactQ::new(sum_poly_range(&reverse, a, &eulerian), a_n),
    ))
}

/// Separation after an a-shuffle of reds over blacks.
pub fn redblack_sep(r: usize, b: usize, a: &BigInt) -> Result<ExactQ> {
    let (_, rev) = sorted_and_reverse_prob(r, b, a)?;
    Ok(ExactQ::one() - ExactQ::from(binomial((r + b) as u64, r as i64)) * rev)
}

/// `(2^h + 2^t - 1) / 2^n`.
pub fn two_shuffle_word_prob(r: usize, b: usize, w: &Word) -> Result<ExactQ> {
    check_rb(r, b)?;
    check_word(r, b, w)?;
    let (h, t) = head_tail(w)?;
    let num = (BigInt::one() << h) + (BigInt::one() << t) - 1;
    Ok(ExactQ::new(num, BigInt::one() << (r + b)))
}

/// Total variation after one 2-shuffle of `n` reds over `n` blacks, as a
/// double sum over head and tail run lengths.
pub fn two_shuffle_tv(n_half: usize) -> Result<ExactQ> {
    if n_half == 0 {
        return Err(Error::InvalidArgument(
            "need at least one card of each colour".into(),
        ));
    }
    let n = n_half;
    let u = ExactQ::new(BigInt::one(), binomial(2 * n as u64, n as i64));
    let denom = BigInt::one() << (2 * n);
    let mut total = ExactQ::new((BigInt::one() << (n + 1)) - 1, denom.clone()) - &u;
    for i in 0..n {
        for j in 0..n {
            let q = ExactQ::new(
                (BigInt::one() << i) + (BigInt::one() << j) - 1,
                denom.clone(),
            );
            let count = binomial((2 * n - (i + j + 2)) as u64, (n - (i + 1)) as i64);
            total += ExactQ::from(count) * (q - &u).abs();
        }
    }
    Ok(total / ExactQ::from(2i64))
}

/// Full distance report after one 2-shuffle, aggregated over `(h, t)`.
pub fn two_shuffle_report(r: usize, b: usize) -> Result<DistanceReport> {
    check_rb(r, b)?;
    let n = r + b;
    let u = ExactQ::new(BigInt::one(), binomial(n as u64, r as i64));
    let denom = BigInt::one() << n;
    let q = |h: usize, t: usize| {
        ExactQ::new(
            (BigInt::one() << h) + (BigInt::one() << t) - 1,
            denom.clone(),
        )
    };
    let mut classes = vec![(BigInt::one(), q(r, b), u.clone())];
    for h in 0..r {
        for t in 0..b {
            // h reds, a black, a middle block, a red, t blacks
            let middle = n as i64 - (h + t + 2) as i64;
            if middle < 0 {
                continue;
            }
            let count = binomial(middle as u64, (r - h - 1) as i64);
            classes.push((count, q(h, t), u.clone()));
        }
    }
    distance_from_classes(classes)
}

/// Main term and error radius of an asymptotic separation estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SepEstimate {
    pub estimate: ExactQ,
    pub radius: ExactQ,
}

impl SepEstimate {
    pub fn contains(&self, x: &ExactQ) -> bool {
        (x - &self.estimate).abs() <= self.radius
    }
}

/// `1 - (a/(2n+1))(1 - alpha^(2n+1))` with radius
/// `(2/(3a)) (n/(n-2)) (1 - alpha^(2n-1))`, `alpha = 1 - 1/a`.
pub fn redblack_asymptotic_sep(n_half: usize, a: &BigInt) -> Result<SepEstimate> {
    if n_half < 3 {
        return Err(Error::InvalidArgument("the error term needs n >= 3".into()));
    }
    if *a < BigInt::one() {
        return Err(Error::InvalidArgument("packet count must be >= 1".into()));
    }
    let n = n_half as u64;
    let one = ExactQ::one();
    let aq = ExactQ::from(a.clone());
    let alpha = ExactQ::new(a - 1, a.clone());
    let estimate = &one - &aq / ExactQ::from(2 * n + 1) * (&one - alpha.pow(2 * n as u32 + 1));
    let radius =
        ExactQ::new(2, 3) / &aq * ExactQ::new(n, n - 2) * (&one - alpha.pow(2 * n as u32 - 1));
    Ok(SepEstimate { estimate, radius })
}

/// `1 - 2^c (1 - e^{-2^{-c}})`, the limit at `a = 2n 2^c`.
pub fn redblack_sep_limit(c: f64) -> f64 {
    let cc = c.exp2();
    1.0 - cc * -(-1.0 / cc).exp_m1()
}

/// Law of one 2-shuffle of the alternating deck, with its class sizes.
#[derive(Clone, Debug)]
pub struct AlternatingLaw {
    pub n_half: usize,
    /// Patterns reachable from a cut with both piles odd.
    pub odd_patterns: BigInt,
    /// Patterns reachable from a cut with both piles even.
    pub even_patterns: BigInt,
    pub report: DistanceReport,
    /// Present when `n_half` is within the materialisation bound.
    pub dist: Option<FiniteDist<Word>>,
}

/// Whether every pair of positions `(2i-1, 2i)` holds one card of each colour.
pub fn in_odd_class(w: &Word) -> bool {
    w.labels().chunks(2).all(|p| p.len() == 2 && p[0] != p[1])
}

/// Every pattern obtainable by cutting the alternating deck with both piles
/// of the given parity and riffling the piles together.
pub fn cut_and_riffle_patterns(n_half: usize, odd: bool) -> BTreeSet<Word> {
    let deck = Word::alternating(n_half);
    let labels = deck.labels();
    let len = labels.len();
    let mut out = BTreeSet::new();
    for cut in 0..=len {
        if (cut % 2 == 1) != odd {
            continue;
        }
        let (top, bottom) = labels.split_at(cut);
        // breadth-first over (cards used from top, partial word), deduplicated
        let mut layer: BTreeSet<(usize, Vec<u8>)> = BTreeSet::from([(0, Vec::new())]);
        for step in 0..len {
            let mut next = BTreeSet::new();
            for (i, prefix) in layer {
                let j = step - i;
                if i < top.len() {
                    let mut p = prefix.clone();
                    p.push(top[i]);
                    next.insert((i + 1, p));
                }
                if j < bottom.len() {
                    let mut p = prefix;
                    p.push(bottom[j]);
                    next.insert((i, p));
                }
            }
            layer = next;
        }
        out.extend(
            layer
                .into_iter()
                .map(|(_, w)| Word::from_labels(w).expect("both colours")),
        );
    }
    out
}

/// One 2-shuffle of red, black, red, black, ...: `2^{2n} Q_2(w)` is
/// `2^{n-1} + 2^n` at the start, `2^{n-1}` on the rest of the odd class,
/// `2^n` on the rest of the even class and zero elsewhere.
pub fn alternating_two_shuffle(n_half: usize) -> Result<AlternatingLaw> {
    if n_half == 0 {
        return Err(Error::InvalidArgument(
            "need at least one card of each colour".into(),
        ));
    }
    let n = n_half;
    let w0 = Word::alternating(n);
    let denom = BigInt::one() << (2 * n);
    let total = binomial(2 * n as u64, n as i64);
    let u = ExactQ::new(BigInt::one(), total.clone());
    let q_w0 = ExactQ::new(
        (BigInt::one() << (n - 1)) + (BigInt::one() << n),
        denom.clone(),
    );
    let q_odd = ExactQ::new(BigInt::one() << (n - 1), denom.clone());
    let q_even = ExactQ::new(BigInt::one() << n, denom.clone());

    let (odd_patterns, even_patterns, dist) = if n <= ALTERNATING_MAX_HALF {
        let even = cut_and_riffle_patterns(n, false);
        let odd: BTreeSet<Word> = Word::all(&DeckSpec::red_black(n, n)?)
            .into_iter()
            .filter(in_odd_class)
            .collect();
        let mut support = Vec::new();
        let mut mass = Vec::new();
        for w in odd.union(&even) {
            support.push(w.clone());
            mass.push(if *w == w0 {
                q_w0.clone()
            } else if odd.contains(w) {
                q_odd.clone()
            } else {
                q_even.clone()
            });
        }
        (
            BigInt::from(odd.len()),
            BigInt::from(even.len()),
            Some(FiniteDist::new(support, mass)?),
        )
    } else {
        (BigInt::one() << n, BigInt::one() << (n - 1), None)
    };

    let one = BigInt::one();
    let unreached = &total - (&odd_patterns + &even_patterns - &one);
    let report = distance_from_classes(vec![
        (one.clone(), q_w0, u.clone()),
        (&odd_patterns - &one, q_odd, u.clone()),
        (&even_patterns - &one, q_even, u.clone()),
        (unreached, ExactQ::zero(), u),
    ])?;
    Ok(AlternatingLaw {
        n_half,
        odd_patterns,
        even_patterns,
        report,
        dist,
    })
}

/// `1 - (2^n + 2^{n-1} - 1) / C(2n, n)`: the total variation of one
/// 2-shuffle from the alternating start, valid once every reachable pattern
/// is at least uniformly likely (`n >= 3`).
pub fn alternating_tv_closed(n_half: usize) -> Result<ExactQ> {
    if n_half < 3 {
        return Err(Error::InvalidArgument("closed form needs n >= 3".into()));
    }
    let n = n_half;
    let reached = (BigInt::one() << n) + (BigInt::one() << (n - 1)) - 1;
    Ok(ExactQ::one() - ExactQ::new(reached, binomial(2 * n as u64, n as i64)))
}

/// The uncorrected form of [`alternating_tv_closed`], which carries an extra
/// factor of one half.
pub fn alternating_tv_uncorrected(n_half: usize) -> Result<ExactQ> {
    Ok(alternating_tv_closed(n_half)? / ExactQ::from(2i64))
}

/// Monte Carlo estimate of a total variation with a normal-approximation
/// confidence interval.
#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Samples per independent random stream.
pub const MC_CHUNK: u64 = 16_384;

/// Estimates TV after `k` 2-shuffles of `n` reds over `n` blacks as
/// `E_{w ~ Q}[(1 - U/Q(w))^+]` with exact pointwise `Q`.
///
/// Chunk `c` of [`MC_CHUNK`] samples draws from `ChaCha8Rng` seeded with
/// `seed` on stream `c`; for each sample one digit in `0..2^k` is drawn per
/// position, top to bottom. Chunk sums are added in chunk order, so the
/// result depends only on `(seed, samples)`.
pub fn montecarlo_tv_redblack(
    n_half: usize,
    k_shuffles: u32,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if k_shuffles == 0 || k_shuffles > 63 {
        return Err(Error::InvalidArgument(
            "shuffle count must be in 1..=63".into(),
        ));
    }
    check_rb(n_half, n_half)?;
    let r = n_half;
    let n = 2 * n_half;
    let a: u64 = 1 << k_shuffles;
    let law = RedBlackLaw::new(r, r, &BigInt::from(a))?;
    let y = law.scaled_table();
    let chunks = samples.div_ceil(MC_CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut digits = vec![0u64; n];
            let mut order: Vec<usize> = (0..n).collect();
            let mut colour = vec![0u8; n];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for d in digits.iter_mut() {
                    *d = rng.gen_range(0..a);
                }
                order.sort_by_key(|&p| digits[p]);
                for (t, &pos) in order.iter().enumerate() {
                    colour[pos] = u8::from(t >= r);
                }
                let mut blacks = 0;
                let mut red = 0;
                let mut q = 0.0;
                for &col in &colour {
                    if col == 0 {
                        q += y[red][blacks];
                        red += 1;
                    } else {
                        blacks += 1;
                    }
                }
                let v = (1.0 - 1.0 / q).max(0.0);
                s += v;
                s2 += v * v;
                order.sort_unstable();
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums
        .iter()
        .fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let m = samples as f64;
    let mean = s / m;
    let var = if samples > 1 {
        ((s2 - m * mean * mean) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    let se = (var / m).sqrt();
    Ok(McEstimate {
        estimate: mean,
        std_error: se,
        ci_low: mean - 1.96 * se,
        ci_high: mean + 1.96 * se,
        samples,
        seed,
    })
}

/// Exact TV of an a-shuffle of reds over blacks by summing over all words.
pub fn exact_tv_redblack(r: usize, b: usize, a: &BigInt) -> Result<ExactQ> {
    let law = RedBlackLaw::new(r, b, a)?;
    let words = Word::all(&DeckSpec::red_black(r, b)?);
    let u = ExactQ::new(BigInt::one(), binomial((r + b) as u64, r as i64));
    let classes = words
        .iter()
        .map(|w| Ok((BigInt::one(), law.prob(w)?, u.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(distance_from_classes(classes)?.tv)
}
