//! Deck compositions, arrangements of decks with repeated cards, and the
//! word statistics the closed formulas consume.
//!
//! Positions are 0-based in code and 1-based in every user-facing formula;
//! position 0 is the top of the deck. Type labels are 0-based in code
//! (`0` is printed as `'1'`). For two-type decks, type 0 is red and sits on
//! top of the sorted start.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, multinomial};
use crate::error::{Error, Result};

/// Multiplicities `(D_1, ..., D_m)` of the card types.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DeckSpec {
    multiplicities: Vec<usize>,
}

impl DeckSpec {
    pub fn new(multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.is_empty() {
            return Err(Error::InvalidArgument(
                "deck needs at least one type".into(),
            ));
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "every multiplicity must be positive: {multiplicities:?}"
            )));
        }
        if multiplicities.len() > ALPHABET.len() {
            return Err(Error::InvalidArgument(format!(
                "at most {} card types are supported",
                ALPHABET.len()
            )));
        }
        Ok(DeckSpec { multiplicities })
    }

    pub fn red_black(reds: usize, blacks: usize) -> Result<Self> {
        DeckSpec::new(vec![reds, blacks])
    }

    /// `n` distinct cards.
    pub fn distinct(n: usize) -> Result<Self> {
        DeckSpec::new(vec![1; n])
    }

    /// Named decks used by the tables: `full` (52 distinct), `blackjack`,
    /// `suits`, `ace` (ace of spades plus 51 others), `redblack`, `zener`.
    pub fn named(name: &str) -> Option<Self> {
        let m = match name {
            "full" | "bd92" => vec![1; 52],
            "blackjack" => {
                let mut v = vec![4; 9];
                v.push(16);
                v
            }
            "suits" => vec![13; 4],
            "ace" | "ace-of-spades" => vec![1, 51],
            "redblack" => vec![26, 26],
            "zener" => vec![5; 5],
            _ => return None,
        };
        DeckSpec::new(m).ok()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn types(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn n(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn min_multiplicity(&self) -> usize {
        *self.multiplicities.iter().min().expect("non-empty")
    }

    /// Number of distinct arrangements, `n! / prod D_i!`.
    pub fn arrangements(&self) -> BigInt {
        let parts: Vec<u64> = self.multiplicities.iter().map(|&d| d as u64).collect();
        multinomial(self.n() as u64, &parts).expect("parts sum to n")
    }

    /// Enumerates every composition of `n` into positive parts.
    pub fn compositions(n: usize) -> Vec<DeckSpec> {
        if n == 0 {
            return Vec::new();
        }
        (0..1u64 << (n - 1))
            .map(|mask| {
                let mut parts = Vec::new();
                let mut run = 1;
                for bit in 0..n - 1 {
                    if mask >> bit & 1 == 1 {
                        parts.push(run);
                        run = 1;
                    } else {
                        run += 1;
                    }
                }
                parts.push(run);
                DeckSpec {
                    multiplicities: parts,
                }
            })
            .collect()
    }
}

impl TryFrom<Vec<usize>> for DeckSpec {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        DeckSpec::new(v)
    }
}

impl From<DeckSpec> for Vec<usize> {
    fn from(d: DeckSpec) -> Self {
        d.multiplicities
    }
}

impl fmt::Display for DeckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for DeckSpec {
    type Err = Error;

    /// Comma-separated multiplicities such as `13,13,13,13`, or a named deck.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(d) = DeckSpec::named(s.trim()) {
            return Ok(d);
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad multiplicity {p:?} in deck {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DeckSpec::new(parts)
    }
}

/// Shuffle strength: `a` packets, optionally recorded as `k` two-shuffles
/// with `a = 2^k` (`Q_2^{*k} = Q_{2^k}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleParam {
    packets: BigInt,
    doublings: Option<u32>,
}

impl ShuffleParam {
    pub fn packets(a: impl Into<BigInt>) -> Result<Self> {
        let packets = a.into();
        if packets < BigInt::one() {
            return Err(Error::InvalidArgument("packet count must be >= 1".into()));
        }
        Ok(ShuffleParam {
            packets,
            doublings: None,
        })
    }

    /// `k` successive 2-shuffles, i.e. `a = 2^k` exactly.
    pub fn two_shuffles(k: u32) -> Self {
        ShuffleParam {
            packets: BigInt::one() << k,
            doublings: Some(k),
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.packets
    }

    pub fn doublings(&self) -> Option<u32> {
        self.doublings
    }
}

impl fmt::Display for ShuffleParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.doublings {
            Some(k) => write!(f, "a=2^{k}"),
            None => write!(f, "a={}", self.packets),
        }
    }
}

const ALPHABET: &[u8] = b"123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// An arrangement of a deck: `labels[p]` is the type of the card at position
/// `p` from the top. Every type in `0..m` occurs at least once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    labels: Vec<u8>,
}

impl Word {
    pub fn from_labels(labels: Vec<u8>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        let m = *labels.iter().max().unwrap() as usize + 1;
        let mut seen = vec![false; m];
        for &l in &labels {
            seen[l as usize] = true;
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "type {} missing from word",
                t + 1
            )));
        }
        Ok(Word { labels })
    }

    /// Checks the word against a deck composition.
    pub fn for_deck(spec: &DeckSpec, labels: Vec<u8>) -> Result<Self> {
        let w = Word::from_labels(labels)?;
        if w.spec() != *spec {
            return Err(Error::DeckMismatch(format!(
                "word {w} has composition {}, expected {spec}",
                w.spec()
            )));
        }
        Ok(w)
    }

    /// 1's on top through m's at the bottom.
    pub fn sorted(spec: &DeckSpec) -> Self {
        let labels = spec
            .multiplicities()
            .iter()
            .enumerate()
            .flat_map(|(t, &d)| std::iter::repeat_n(t as u8, d))
            .collect();
        Word { labels }
    }

    /// m's on top through 1's at the bottom.
    pub fn reversed(spec: &DeckSpec) -> Self {
        let mut w = Word::sorted(spec);
        w.labels.reverse();
        w
    }

    /// Red, black, red, black, ... with `half` cards of each colour.
    pub fn alternating(half: usize) -> Self {
        Word {
            labels: (0..2 * half).map(|p| (p % 2) as u8).collect(),
        }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn types(&self) -> usize {
        *self.labels.iter().max().unwrap() as usize + 1
    }

    pub fn spec(&self) -> DeckSpec {
        let mut counts = vec![0usize; self.types()];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        DeckSpec {
            multiplicities: counts,
        }
    }

    pub fn reverse(&self) -> Word {
        let mut labels = self.labels.clone();
        labels.reverse();
        Word { labels }
    }

    /// Every arrangement of `spec`, in lexicographic order of labels.
    pub fn all(spec: &DeckSpec) -> Vec<Word> {
        let mut current = Word::sorted(spec).labels;
        let mut out = vec![Word {
            labels: current.clone(),
        }];
        while next_permutation(&mut current) {
            out.push(Word {
                labels: current.clone(),
            });
        }
        out
    }

    fn require_two_types(&self) -> Result<()> {
        if self.types() != 2 {
            return Err(Error::InvalidArgument(format!(
                "red-black statistic needs a two-type word, got {} types",
                self.types()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .labels
            .iter()
            .map(|&l| ALPHABET[l as usize] as char)
            .collect();
        write!(f, "{s}")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Compact string with type 1 as `'1'`; two-type words may use `R`/`B`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let labels: Vec<u8> = if !s.is_empty() && s.chars().all(|c| c == 'R' || c == 'B') {
            s.chars().map(|c| u8::from(c == 'B')).collect()
        } else {
            s.bytes()
                .map(|b| {
                    ALPHABET
                        .iter()
                        .position(|&x| x == b)
                        .map(|p| p as u8)
                        .ok_or_else(|| Error::Parse(format!("bad card symbol {:?}", b as char)))
                })
                .collect::<Result<_>>()?
        };
        Word::from_labels(labels)
    }
}

/// Lexicographic successor; false once the last arrangement is reached.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Number of rising sequences of an arrangement `perm` of `0..n`
/// (`perm[p]` is the card at position `p`): one more than the number of
/// descents of the inverse permutation.
pub fn rising_sequences(perm: &[usize]) -> Result<usize> {
    let n = perm.len();
    let mut inverse = vec![usize::MAX; n];
    for (p, &card) in perm.iter().enumerate() {
        if card >= n || inverse[card] != usize::MAX {
            return Err(Error::InvalidArgument(format!(
                "not a permutation: {perm:?}"
            )));
        }
        inverse[card] = p;
    }
    if n == 0 {
        return Ok(0);
    }
    Ok(1 + inverse.windows(2).filter(|w| w[0] > w[1]).count())
}

/// `b(j)` for each red card `j`: the number of black cards above it.
pub fn blacks_above(w: &Word) -> Result<Vec<usize>> {
    w.require_two_types()?;
    let mut blacks = 0;
    let mut out = Vec::new();
    for &l in w.labels() {
        if l == 0 {
            out.push(blacks);
        } else {
            blacks += 1;
        }
    }
    Ok(out)
}

/// `(h, t)`: reds before the first black, blacks after the last red.
pub fn head_tail(w: &Word) -> Result<(usize, usize)> {
    w.require_two_types()?;
    let labels = w.labels();
    let h = labels.iter().take_while(|&&l| l == 0).count();
    let t = labels.iter().rev().take_while(|&&l| l == 1).count();
    Ok((h, t))
}

/// Number of subsequences consisting of `x` reds followed by `y` blacks,
/// counted by the last red used: `sum_j C(j-1, x-1) C(B - b(j), y)`.
pub fn rising_subword_count(w: &Word, x: usize, y: usize) -> Result<BigInt> {
    let b = blacks_above(w)?;
    let reds = b.len();
    let blacks = w.len() - reds;
    if x == 0 || x > reds || y == 0 || y > blacks {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= x <= {reds} and 1 <= y <= {blacks}, got ({x}, {y})"
        )));
    }
    let mut total = BigInt::zero();
    for (j, &bj) in b.iter().enumerate() {
        total += binomial(j as u64, x as i64 - 1) * binomial((blacks - bj) as u64, y as i64);
    }
    Ok(total)
}
