//! Named cross-validation suites: closed formulas against brute force, the
//! rule-of-thumb error bound, and the eigenvector forms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::ExactQ;
use crate::deck::{DeckSpec, Word};
use crate::distance::{distance_from_classes, DistanceReport};
use crate::error::{Error, Result};
use crate::general::{
    bd_full_deck, cv_formula, cv_statistics, extremes, rot_eta_bound, rot_eta_exact, sep_direct,
    sorted_prob_genfun,
};
use crate::redblack::word_prob;
use crate::simulate::{
    enumerate_exact, enumerate_words, identity, lump, GroupMeasure, DEFAULT_ENUM_BUDGET,
};
use crate::single_card::{eigen_check, transition_entry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    OracleSmall,
    EtaBound,
    Eigen,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::OracleSmall, Suite::EtaBound, Suite::Eigen];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleSmall => "oracle-small",
            Suite::EtaBound => "eta-bound",
            Suite::Eigen => "eigen",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown suite {s:?} (oracle-small|eta-bound|eigen)"
                ))
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, failures: Vec<String>) -> Self {
        let passed = failures.is_empty();
        let detail = (!passed).then(|| {
            let shown: Vec<_> = failures.iter().take(5).cloned().collect();
            format!("{} counterexample(s): {}", failures.len(), shown.join("; "))
        });
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }

    fn note(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: Some(detail),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Grid sizes for the suites.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub packets: Vec<u64>,
    /// Largest number of words for which a quotient kernel is built.
    pub lump_max_states: usize,
    pub eigen_max_n: usize,
    pub eta_max_n: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 7,
            packets: vec![2, 3, 4],
            lump_max_states: 210,
            eigen_max_n: 8,
            eta_max_n: 30,
        }
    }
}

pub fn run_verify(suite: Suite, config: &VerifyConfig) -> Result<VerifyReport> {
    let checks = match suite {
        Suite::OracleSmall => oracle_small(config)?,
        Suite::EtaBound => vec![eta_bound(config)?],
        Suite::Eigen => eigen(config)?,
    };
    Ok(VerifyReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn uniform_report(
    spec: &DeckSpec,
    law: &crate::distance::FiniteDist<Word>,
) -> Result<DistanceReport> {
    let u = ExactQ::new(BigInt::one(), spec.arrangements());
    distance_from_classes(
        Word::all(spec)
            .into_iter()
            .map(|w| (BigInt::one(), law.prob(&w), u.clone())),
    )
}

fn oracle_small(config: &VerifyConfig) -> Result<Vec<Check>> {
    let cases: Vec<(DeckSpec, u64)> = (2..=config.max_n)
        .flat_map(DeckSpec::compositions)
        .filter(|s| s.types() >= 2)
        .flat_map(|s| config.packets.iter().map(move |&a| (s.clone(), a)))
        .collect();

    let results: Vec<[Vec<String>; 4]> = cases
        .par_iter()
        .map(|(spec, a)| -> Result<[Vec<String>; 4]> {
            let mut out: [Vec<String>; 4] = Default::default();
            let big_a = BigInt::from(*a);
            let law = enumerate_words(spec, *a, DEFAULT_ENUM_BUDGET)?;
            let tag = |w: &Word| format!("deck {spec}, a={a}, word {w}");

            if spec.types() == 2 {
                let (r, b) = (spec.multiplicities()[0], spec.multiplicities()[1]);
                for w in Word::all(spec) {
                    if word_prob(r, b, &big_a, &w)? != law.prob(&w) {
                        out[0].push(tag(&w));
                    }
                }
            }

            let report = uniform_report(spec, &law)?;
            let (sep, linf) = extremes(spec, &big_a)?;
            let direct = sep_direct(spec, &big_a, DEFAULT_ENUM_BUDGET)?.sep;
            let sorted = Word::sorted(spec);
            if report.sep != sep
                || direct != sep
                || report.linf != linf
                || law.prob(&sorted) != sorted_prob_genfun(spec, &big_a)?
            {
                out[1].push(format!("deck {spec}, a={a}"));
            }

            let m = spec.multiplicities();
            let h = m.len() - 1;
            if m[..h].iter().all(|&c| c == 1) {
                let n_x = m[h];
                for w in Word::all(spec) {
                    let (r, l) = cv_statistics(&w, h)?;
                    if cv_formula(h, n_x, *a, r, l)? != law.prob(&w) {
                        out[2].push(tag(&w));
                    }
                }
            }

            if spec.arrangements() <= BigInt::from(config.lump_max_states) {
                let measure = GroupMeasure::gsr(spec.n(), *a)?;
                let chain = lump(&measure, spec)?;
                for (x, start) in chain.states.iter().enumerate() {
                    let d = enumerate_exact(start.labels(), *a, DEFAULT_ENUM_BUDGET)?;
                    for (y, w) in chain.states.iter().enumerate() {
                        if *chain.kernel.get(x, y) != d.prob(&w.labels().to_vec()) {
                            out[3].push(format!("deck {spec}, a={a}, K({start}, {w})"));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut merged: [Vec<String>; 4] = Default::default();
    for r in results {
        for (m, x) in merged.iter_mut().zip(r) {
            m.extend(x);
        }
    }
    let [two_type, extreme, cv, kernels] = merged;

    let mut single = Vec::new();
    let mut full = Vec::new();
    for n in 2..=config.max_n {
        for &a in &config.packets {
            let big_a = BigInt::from(a);
            let law = enumerate_exact(&identity(n), a, DEFAULT_ENUM_BUDGET)?;
            for i in 1..=n {
                for j in 1..=n {
                    let p: ExactQ = law
                        .iter()
                        .filter(|(arr, _)| arr[j - 1] as usize == i - 1)
                        .map(|(_, m)| m)
                        .sum();
                    if transition_entry(n, &big_a, i, j)? != p {
                        single.push(format!("n={n}, a={a}, P({i},{j})"));
                    }
                }
            }
            let spec = DeckSpec::distinct(n)?;
            let words = enumerate_words(&spec, a, DEFAULT_ENUM_BUDGET)?;
            if uniform_report(&spec, &words)? != bd_full_deck(n, &big_a)? {
                full.push(format!("n={n}, a={a}"));
            }
        }
    }

    Ok(vec![
        Check::new("two-colour word law equals enumeration", two_type),
        Check::new(
            "separation and l-infinity extremes equal enumeration",
            extreme,
        ),
        Check::new("distinct-over-identical formula equals enumeration", cv),
        Check::new("quotient kernel equals shuffled-word law", kernels),
        Check::new("single-card matrix equals enumeration", single),
        Check::new("rising-sequence distances equal enumeration", full),
    ])
}

fn eta_bound(config: &VerifyConfig) -> Result<Check> {
    // every composition with parts >= 3 up to a modest size, plus a few larger decks
    let mut decks: Vec<DeckSpec> = (6..=15.min(config.eta_max_n))
        .flat_map(DeckSpec::compositions)
        .filter(|s| s.types() >= 2 && s.min_multiplicity() >= 3)
        .collect();
    for m in [
        vec![10, 10, 10],
        vec![15, 15],
        vec![3; 10],
        vec![5, 7, 9, 9],
    ] {
        let spec = DeckSpec::new(m)?;
        if spec.n() <= config.eta_max_n {
            decks.push(spec);
        }
    }
    let failures: Vec<String> = decks
        .par_iter()
        .map(|spec| -> Result<Vec<String>> {
            let m = spec.types() as u64;
            let mut bad = Vec::new();
            let mut a = 2 * m;
            while a <= 1 << 14 {
                let big_a = BigInt::from(a);
                let eta = rot_eta_exact(spec, &big_a)?;
                let bound = rot_eta_bound(spec, &big_a)?;
                if eta.abs() > bound {
                    bad.push(format!(
                        "deck {spec}, a={a}: |eta| = {} > {}",
                        eta.abs().to_decimal(6),
                        bound.to_decimal(6)
                    ));
                }
                a = if a < 64 { a + 1 } else { a * 2 };
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Check::new(
        format!(
            "rule-of-thumb error within its bound ({} decks, a from 2m)",
            decks.len()
        ),
        failures,
    ))
}

fn eigen(config: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 2..=config.eigen_max_n {
        for &a in &config.packets {
            let r = eigen_check(n, &BigInt::from(a))?;
            let resolved = r.resolved();
            checks.push(Check::note(
                format!("n={n}, a={a}"),
                resolved.is_some(),
                format!(
                    "literal form {}, resolved as {}",
                    if r.literal_holds() { "holds" } else { "fails" },
                    resolved.unwrap_or("neither")
                ),
            ));
        }
    }
    Ok(checks)
}
