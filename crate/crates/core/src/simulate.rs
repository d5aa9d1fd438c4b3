//! Ground truth for the closed formulas: GSR sampling, exhaustive
//! enumeration of a-shuffles, convolution on small symmetric groups and the
//! quotient walk on words.
//!
//! A permutation is stored as an arrangement `perm[p]` = card at position `p`.
//! Performing shuffle `pi` on a deck `x` gives `x[pi[p]]` at position `p`, so
//! performing `pi` and then `rho` is the arrangement `pi[rho[p]]`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::ExactQ;
use crate::deck::{next_permutation, DeckSpec, Word};
use crate::distance::FiniteDist;
use crate::error::{Error, Result};
use crate::matrix::QMatrix;

/// Default ceiling on `a^n` for exhaustive enumeration.
pub const DEFAULT_ENUM_BUDGET: u64 = 100_000_000;
/// Largest `n` for dense work on the symmetric group.
pub const EXHAUSTIVE_MAX_N: usize = 7;

pub type Perm = Vec<u8>;

pub fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

pub fn inverse(p: &[u8]) -> Perm {
    let mut inv = vec![0u8; p.len()];
    for (pos, &c) in p.iter().enumerate() {
        inv[c as usize] = pos as u8;
    }
    inv
}

/// `first` performed, then `then`.
pub fn compose(first: &[u8], then: &[u8]) -> Perm {
    then.iter().map(|&p| first[p as usize]).collect()
}

pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur = identity(n);
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Arrangement produced by an a-shuffle whose final positions carry the
/// given packet digits: the cards of packet `d` land, in order, on the
/// positions labelled `d`.
pub fn shuffle_from_digits(digits: &[u64]) -> Perm {
    let n = digits.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&p| digits[p]);
    let mut pi = vec![0u8; n];
    for (t, &pos) in order.iter().enumerate() {
        pi[pos] = t as u8;
    }
    pi
}

/// One GSR a-shuffle of `deck`.
pub fn gsr_sample<T: Clone, R: Rng + ?Sized>(deck: &[T], a: u64, rng: &mut R) -> Result<Vec<T>> {
    if a == 0 {
        return Err(Error::InvalidArgument("packet count must be >= 1".into()));
    }
    if deck.len() > u8::MAX as usize {
        return Err(Error::InvalidArgument("deck too large for sampling".into()));
    }
    let digits: Vec<u64> = (0..deck.len()).map(|_| rng.gen_range(0..a)).collect();
    let pi = shuffle_from_digits(&digits);
    Ok(pi.iter().map(|&p| deck[p as usize].clone()).collect())
}

/// Seeded convenience wrapper around [`gsr_sample`].
pub fn gsr_sample_seeded<T: Clone>(deck: &[T], a: u64, seed: u64) -> Result<Vec<T>> {
    gsr_sample(deck, a, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn check_budget(n: usize, a: u64, budget: u64) -> Result<u64> {
    let work = BigInt::from(a).pow(n as u32);
    match work.to_u64() {
        Some(w) if w <= budget => Ok(w),
        _ => Err(Error::BudgetExceeded {
            work: format!("{a}^{n} digit sequences"),
            budget,
            hint: "use the closed formulas for this size".into(),
        }),
    }
}

/// Exact law of an a-shuffle applied to the arrangement `start`, by walking
/// all `a^n` digit sequences (each with mass `a^-n`).
pub fn enumerate_exact(start: &[u8], a: u64, budget: u64) -> Result<FiniteDist<Vec<u8>>> {
    let n = start.len();
    if a == 0 {
        return Err(Error::InvalidArgument("packet count must be >= 1".into()));
    }
    let total = check_budget(n, a, budget)?;
    if n == 0 {
        return FiniteDist::new(vec![Vec::new()], vec![ExactQ::one()]);
    }
    let counts = (0..a)
        .into_par_iter()
        .map(|first| {
            let mut local: HashMap<Vec<u8>, u64> = HashMap::new();
            let mut digits = vec![0u64; n];
            digits[0] = first;
            loop {
                let pi = shuffle_from_digits(&digits);
                let arr: Vec<u8> = pi.iter().map(|&p| start[p as usize]).collect();
                *local.entry(arr).or_insert(0) += 1;
                // odometer over positions 1..n
                let mut p = n - 1;
                loop {
                    if p == 0 {
                        return local;
                    }
                    digits[p] += 1;
                    if digits[p] < a {
                        break;
                    }
                    digits[p] = 0;
                    p -= 1;
                }
            }
        })
        .reduce(HashMap::new, |mut acc, other| {
            for (k, v) in other {
                *acc.entry(k).or_insert(0) += v;
            }
            acc
        });
    let map: BTreeMap<Vec<u8>, ExactQ> = counts
        .into_iter()
        .map(|(k, c)| (k, ExactQ::new(c, total)))
        .collect();
    FiniteDist::from_map(map)
}

/// Exact a-shuffle law on the words of `spec`, from the sorted start.
pub fn enumerate_words(spec: &DeckSpec, a: u64, budget: u64) -> Result<FiniteDist<Word>> {
    let start = Word::sorted(spec);
    let d = enumerate_exact(start.labels(), a, budget)?;
    let (support, mass): (Vec<Word>, Vec<ExactQ>) = d
        .iter()
        .map(|(w, m)| (Word::from_labels(w.clone()).expect("valid word"), m.clone()))
        .unzip();
    FiniteDist::new(support, mass)
}

/// A probability measure on the symmetric group of `n` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMeasure {
    n: usize,
    mass: BTreeMap<Perm, ExactQ>,
}

impl GroupMeasure {
    pub fn new(n: usize, mass: BTreeMap<Perm, ExactQ>) -> Result<Self> {
        if n > EXHAUSTIVE_MAX_N {
            return Err(Error::InvalidArgument(format!(
                "group measures are limited to n <= {EXHAUSTIVE_MAX_N}"
            )));
        }
        let total: ExactQ = mass.values().sum();
        if total != ExactQ::one() {
            return Err(Error::InvalidArgument(format!(
                "measure has total mass {total}"
            )));
        }
        if mass
            .keys()
            .any(|p| p.len() != n || inverse(p).len() != n || !is_perm(p))
        {
            return Err(Error::InvalidArgument(
                "support contains a non-permutation".into(),
            ));
        }
        let mass = mass.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(GroupMeasure { n, mass })
    }

    pub fn delta(n: usize, at: Perm) -> Result<Self> {
        GroupMeasure::new(n, BTreeMap::from([(at, ExactQ::one())]))
    }

    /// The GSR a-shuffle law by enumeration.
    pub fn gsr(n: usize, a: u64) -> Result<Self> {
        let d = enumerate_exact(&identity(n), a, DEFAULT_ENUM_BUDGET)?;
        GroupMeasure::new(n, d.to_map())
    }

    /// Random transposition: identity with mass `1/n`, each transposition
    /// with mass `2/n^2`.
    pub fn random_transposition(n: usize) -> Result<Self> {
        let nn = n as i64;
        let mut mass = BTreeMap::from([(identity(n), ExactQ::new(1, nn))]);
        for i in 0..n {
            for j in i + 1..n {
                let mut p = identity(n);
                p.swap(i, j);
                mass.insert(p, ExactQ::new(2, nn * nn));
            }
        }
        GroupMeasure::new(n, mass)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, p: &[u8]) -> ExactQ {
        self.mass.get(p).cloned().unwrap_or_else(ExactQ::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Perm, &ExactQ)> {
        self.mass.iter()
    }

    /// Pushforward to words of `spec` from its sorted start.
    pub fn to_words(&self, spec: &DeckSpec) -> Result<BTreeMap<Word, ExactQ>> {
        if spec.n() != self.n {
            return Err(Error::DeckMismatch(format!("deck {spec} on S_{}", self.n)));
        }
        let start = Word::sorted(spec);
        let mut out = BTreeMap::new();
        for (p, m) in &self.mass {
            let w: Vec<u8> = p.iter().map(|&c| start.labels()[c as usize]).collect();
            *out.entry(Word::from_labels(w)?)
                .or_insert_with(ExactQ::zero) += m;
        }
        Ok(out)
    }

    pub fn convolution_power(&self, l: u32) -> Result<GroupMeasure> {
        let mut acc = GroupMeasure::delta(self.n, identity(self.n))?;
        for _ in 0..l {
            acc = convolve(&acc, self)?;
        }
        Ok(acc)
    }
}

fn is_perm(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&c| {
        let c = c as usize;
        c < seen.len() && !std::mem::replace(&mut seen[c], true)
    })
}

/// `(p * q)(s) = sum_t p(t) q(t^-1 s)`: a p-shuffle followed by a q-shuffle.
pub fn convolve(p: &GroupMeasure, q: &GroupMeasure) -> Result<GroupMeasure> {
    if p.n != q.n {
        return Err(Error::InvalidArgument(
            "convolving measures on different groups".into(),
        ));
    }
    let mut mass: BTreeMap<Perm, ExactQ> = BTreeMap::new();
    for (t, pt) in &p.mass {
        for (r, qr) in &q.mass {
            *mass.entry(compose(t, r)).or_insert_with(ExactQ::zero) += &(pt * qr);
        }
    }
    GroupMeasure::new(p.n, mass)
}

/// The quotient walk of a group measure on the words of a deck.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetChain {
    pub states: Vec<Word>,
    pub kernel: QMatrix,
}

impl CosetChain {
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.states.binary_search(w).ok()
    }
}

/// `K(x, y) = Q(s_x^-1 H s_y)`: a sum over the Young subgroup `H` of the
/// deck, with `s_x` any permutation whose word is `x`.
pub fn lump(measure: &GroupMeasure, spec: &DeckSpec) -> Result<CosetChain> {
    let n = measure.n;
    if spec.n() != n {
        return Err(Error::DeckMismatch(format!("deck {spec} on S_{n}")));
    }
    let states = Word::all(spec);
    let labels = Word::sorted(spec).labels().to_vec();
    let young: Vec<Perm> = all_perms(n)
        .into_iter()
        .filter(|h| {
            h.iter()
                .enumerate()
                .all(|(c, &d)| labels[c] == labels[d as usize])
        })
        .collect();
    let reps: Vec<Perm> = states.iter().map(|w| representative(&labels, w)).collect();
    let kernel = QMatrix::from_fn(states.len(), states.len(), |x, y| {
        let sx_inv = inverse(&reps[x]);
        young
            .iter()
            .map(|h| measure.prob(&compose(&sx_inv, &compose(h, &reps[y]))))
            .sum()
    });
    Ok(CosetChain { states, kernel })
}

/// Same kernel, computed as the law of the word `x` after one shuffle.
pub fn lump_by_pushforward(measure: &GroupMeasure, spec: &DeckSpec) -> Result<CosetChain> {
    if spec.n() != measure.n {
        return Err(Error::DeckMismatch(format!(
            "deck {spec} on S_{}",
            measure.n
        )));
    }
    let states = Word::all(spec);
    let mut kernel = QMatrix::zeros(states.len(), states.len());
    for (x, wx) in states.iter().enumerate() {
        for (pi, m) in measure.iter() {
            let y: Vec<u8> = pi.iter().map(|&p| wx.labels()[p as usize]).collect();
            let yi = states
                .binary_search(&Word::from_labels(y)?)
                .expect("word of deck");
            let v = kernel.get(x, yi) + m;
            kernel.set(x, yi, v);
        }
    }
    Ok(CosetChain { states, kernel })
}

/// A permutation of the sorted deck's cards realising word `w`.
fn representative(labels: &[u8], w: &Word) -> Perm {
    let mut next: Vec<usize> = Vec::new();
    let types = w.types();
    for t in 0..types {
        next.push(labels.iter().position(|&l| l as usize == t).unwrap());
    }
    w.labels()
        .iter()
        .map(|&l| {
            let c = next[l as usize];
            next[l as usize] += 1;
            c as u8
        })
        .collect()
}

/// Counts with total `a^n` per word, for tests that want integers.
pub fn word_counts(spec: &DeckSpec, a: u64, budget: u64) -> Result<BTreeMap<Word, BigInt>> {
    let total = BigInt::from(a).pow(spec.n() as u32);
    let d = enumerate_words(spec, a, budget)?;
    Ok(d.iter()
        .map(|(w, m)| {
            let c = m.numer() * (&total / m.denom());
            (w.clone(), c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cards_two_packets() {
        let d = enumerate_exact(&identity(2), 2, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d.prob(&vec![0, 1]), ExactQ::new(3, 4));
        assert_eq!(d.prob(&vec![1, 0]), ExactQ::new(1, 4));
    }

    #[test]
    fn budget_is_enforced() {
        let e = enumerate_exact(&identity(52), 2, DEFAULT_ENUM_BUDGET).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn one_packet_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(gsr_sample(&identity(6), 1, &mut rng).unwrap(), identity(6));
        }
    }

    #[test]
    fn delta_is_unit_for_convolution() {
        let q = GroupMeasure::gsr(4, 2).unwrap();
        let id = GroupMeasure::delta(4, identity(4)).unwrap();
        assert_eq!(convolve(&q, &id).unwrap(), q);
        assert_eq!(convolve(&id, &q).unwrap(), q);
    }

    #[test]
    fn two_shuffles_make_a_four_shuffle() {
        let q2 = GroupMeasure::gsr(4, 2).unwrap();
        let q4 = GroupMeasure::gsr(4, 4).unwrap();
        assert_eq!(convolve(&q2, &q2).unwrap(), q4);
        let q3 = GroupMeasure::gsr(4, 3).unwrap();
        assert_eq!(
            convolve(&q2, &q3).unwrap(),
            GroupMeasure::gsr(4, 6).unwrap()
        );
    }

    #[test]
    fn lumping_routes_agree() {
        let spec = DeckSpec::new(vec![2, 2]).unwrap();
        for q in [
            GroupMeasure::gsr(4, 2).unwrap(),
            GroupMeasure::random_transposition(4).unwrap(),
        ] {
            let a = lump(&q, &spec).unwrap();
            let b = lump_by_pushforward(&q, &spec).unwrap();
            assert_eq!(a, b);
            assert!(a.kernel.row_sums().iter().all(|s| *s == ExactQ::one()));
        }
        let id = GroupMeasure::delta(4, identity(4)).unwrap();
        assert_eq!(lump(&id, &spec).unwrap().kernel, QMatrix::identity(6));
    }
}
