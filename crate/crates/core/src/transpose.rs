//! Random transpositions: the walk of one card, and the red-black deck as
//! a walk on `S_N / (S_n x S_n)`.
//!
//! One step picks positions `i` and `j` independently and uniformly and
//! swaps them, so the identity has mass `1/N` and each transposition `2/N^2`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, ExactQ};
use crate::deck::{DeckSpec, Word};
use crate::distance::{distance_from_classes, DistanceReport, FiniteDist};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::simulate::CosetChain;

/// Largest number of words for which the red-black chain is built densely.
pub const DENSE_STATES_MAX: usize = 5000;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two cards".into()));
    }
    Ok(())
}

fn q(num: u64, den: u64) -> ExactQ {
    ExactQ::new(num, den)
}

/// Diagonal of the one-card step matrix: `1/n + (n-1)(n-2)/n^2`.
pub fn step_diagonal(n: usize) -> ExactQ {
    let n = n as u64;
    q(1, n) + q((n - 1) * (n - 2), n * n)
}

/// The uncorrected diagonal `1/n + (n-2)(n-3)/n^2`, whose rows sum to
/// `(n^2 - 2n + 4)/n^2`.
pub fn step_diagonal_uncorrected(n: usize) -> ExactQ {
    let n = n as u64;
    q(1, n) + q((n - 2) * n.saturating_sub(3), n * n)
}

/// Position of one card after a single random transposition.
pub fn transposition_step_matrix(n: usize) -> Result<QMatrix> {
    check_n(n)?;
    let diag = step_diagonal(n);
    let off = q(2, (n * n) as u64);
    Ok(QMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag.clone()
        } else {
            off.clone()
        }
    }))
}

/// `P^l(i, j)`: `1/n + (1-2/n)^l (1-1/n)` on the diagonal, `1/n - (1-2/n)^l / n` off it.
pub fn transposition_power_entry(n: usize, l: u32, same: bool) -> ExactQ {
    let nn = n as u64;
    let lam = q(nn - 2, nn).pow(l);
    if same {
        q(1, nn) + lam * q(nn - 1, nn)
    } else {
        q(1, nn) - lam / ExactQ::from(nn)
    }
}

/// Law of the position (1-based) of the card that started at `start`.
pub fn transposition_single_card(n: usize, l: u32, start: usize) -> Result<FiniteDist<usize>> {
    check_n(n)?;
    if start == 0 || start > n {
        return Err(Error::InvalidArgument(format!(
            "start position must be in 1..={n}"
        )));
    }
    let masses = (1..=n)
        .map(|j| transposition_power_entry(n, l, j == start))
        .collect();
    FiniteDist::new((1..=n).collect(), masses)
}

/// `SEP = (1-2/n)^l`, `TV = (1-2/n)^l (1-1/n)`.
pub fn transposition_single_card_report(n: usize, l: u32) -> Result<DistanceReport> {
    check_n(n)?;
    let u = q(1, n as u64);
    distance_from_classes([
        (
            BigInt::one(),
            transposition_power_entry(n, l, true),
            u.clone(),
        ),
        (
            BigInt::from(n - 1),
            transposition_power_entry(n, l, false),
            u,
        ),
    ])
}

/// Eigenvalues and multiplicities of the red-black chain on `N = 2n` cards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRB {
    pub big_n: usize,
    pub eigenvalues: Vec<ExactQ>,
    #[serde(serialize_with = "decimal_strings")]
    pub multiplicities: Vec<BigInt>,
}

fn decimal_strings<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `beta_j = 1/N + ((N-j)^2 - (N-j) + j^2 - 3j)/N^2`.
pub fn beta(big_n: usize, j: usize) -> ExactQ {
    let nn = big_n as i64;
    let j = j as i64;
    let num = (nn - j) * (nn - j) - (nn - j) + j * j - 3 * j;
    ExactQ::new(1, nn) + ExactQ::new(num, nn * nn)
}

/// Dimension of the irreducible `S^{(N-j, j)}`: `C(N, j) - C(N, j-1)`.
pub fn multiplicity(big_n: usize, j: usize) -> BigInt {
    binomial(big_n as u64, j as i64) - binomial(big_n as u64, j as i64 - 1)
}

/// The uncorrected multiplicity `C(N-1, j)`; it does not sum to `C(N, n)`.
pub fn multiplicity_uncorrected(big_n: usize, j: usize) -> BigInt {
    binomial(big_n as u64 - 1, j as i64)
}

pub fn gelfand_spectrum(n: usize) -> Result<SpectrumRB> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "need at least one card of each colour".into(),
        ));
    }
    let big_n = 2 * n;
    Ok(SpectrumRB {
        big_n,
        eigenvalues: (0..=n).map(|j| beta(big_n, j)).collect(),
        multiplicities: (0..=n).map(|j| multiplicity(big_n, j)).collect(),
    })
}

/// Kernel entries of the red-black chain: `2/N^2` between words that differ
/// by swapping a red and a black card, `1/N + 2n(n-1)/N^2` on the diagonal.
pub fn lumped_entries(n: usize) -> (ExactQ, ExactQ) {
    let nn = (2 * n) as u64;
    let n = n as u64;
    (q(1, nn) + q(2 * n * (n - 1), nn * nn), q(2, nn * nn))
}

/// The uncorrected entries `(1/N + (n(n-1))^2/N^2, 1/N^2)`.
pub fn lumped_entries_uncorrected(n: usize) -> (ExactQ, ExactQ) {
    let nn = (2 * n) as u64;
    let n = n as u64;
    (q(1, nn) + q((n * (n - 1)).pow(2), nn * nn), q(1, nn * nn))
}

/// The red-black chain as a dense matrix over words in lexicographic order.
pub fn lumped_kernel(n: usize) -> Result<CosetChain> {
    let spec = DeckSpec::red_black(n, n)?;
    let states = Word::all(&spec);
    if states.len() > DENSE_STATES_MAX {
        return Err(Error::BudgetExceeded {
            work: states.len().to_string(),
            budget: DENSE_STATES_MAX as u64,
            hint: "use redblack_transposition_report".into(),
        });
    }
    let (diag, off) = lumped_entries(n);
    let mut kernel = QMatrix::zeros(states.len(), states.len());
    for (x, w) in states.iter().enumerate() {
        kernel.set(x, x, diag.clone());
        for y in swap_neighbours(w) {
            let yi = states.binary_search(&y).expect("word of the deck");
            kernel.set(x, yi, off.clone());
        }
    }
    Ok(CosetChain { states, kernel })
}

fn swap_neighbours(w: &Word) -> Vec<Word> {
    let labels = w.labels();
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels[i] != labels[j] {
                let mut v = labels.to_vec();
                v.swap(i, j);
                out.push(Word::from_labels(v).expect("two colours"));
            }
        }
    }
    out
}

/// Exact distances after `l` steps from reds over blacks, by evolving the
/// law on all `C(2n, n)` words with integer weights.
pub fn redblack_transposition_report(n: usize, l: u32) -> Result<DistanceReport> {
    let spec = DeckSpec::red_black(n, n)?;
    let states = Word::all(&spec);
    let neighbours: Vec<Vec<usize>> = states
        .iter()
        .map(|w| {
            swap_neighbours(w)
                .iter()
                .map(|y| states.binary_search(y).expect("word of the deck"))
                .collect()
        })
        .collect();
    let nn = (2 * n) as u64;
    // N^2 K has N + 2n(n-1) on the diagonal and 2 off it
    let stay = BigInt::from(nn + 2 * (n as u64) * (n as u64 - 1));
    let mut w = vec![BigInt::zero(); states.len()];
    let start = states
        .binary_search(&Word::sorted(&spec))
        .expect("sorted word");
    w[start] = BigInt::one();
    for _ in 0..l {
        let mut next: Vec<BigInt> = w.iter().map(|x| x * &stay).collect();
        for (x, wx) in w.iter().enumerate() {
            if wx.is_zero() {
                continue;
            }
            let moved = wx * 2u32;
            for &y in &neighbours[x] {
                next[y] += &moved;
            }
        }
        w = next;
    }
    let denom = BigInt::from(nn * nn).pow(l);
    let u = ExactQ::new(BigInt::one(), BigInt::from(states.len()));
    distance_from_classes(
        w.into_iter()
            .map(|x| (BigInt::one(), ExactQ::new(x, denom.clone()), u.clone())),
    )
}

/// L2 bound on total variation after `l` steps of the red-black chain.
#[derive(Clone, Debug, Serialize)]
pub struct L2Bound {
    /// `sum_{j>=1} m_j beta_j^{2l}`; the bound is half its square root.
    pub sum: ExactQ,
    pub bound: f64,
    /// `(N-1)(1-2/N)^{2l}`.
    pub lead_term: ExactQ,
}

pub fn l2_mixing_bound(n: usize, l: u32) -> Result<L2Bound> {
    check_n(n)?;
    let spec = gelfand_spectrum(n)?;
    let sum: ExactQ = spec.eigenvalues[1..]
        .iter()
        .zip(&spec.multiplicities[1..])
        .map(|(b, m)| ExactQ::from(m.clone()) * b.pow(2 * l))
        .sum();
    let big_n = spec.big_n as u64;
    let lead_term = ExactQ::from(big_n - 1) * q(big_n - 2, big_n).pow(2 * l);
    Ok(L2Bound {
        bound: 0.5 * sum.to_f64().sqrt(),
        sum,
        lead_term,
    })
}

/// Smallest whole number of steps at or above `(N/4)(log N + c)`.
pub fn cutoff_steps(big_n: usize, c: f64) -> u32 {
    let x = big_n as f64 / 4.0 * ((big_n as f64).ln() + c);
    x.ceil().max(0.0) as u32
}
