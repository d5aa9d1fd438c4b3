//! Regeneration of the standard 52-card tables.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::ExactQ;
use crate::deck::{DeckSpec, ShuffleParam};
use crate::error::{Error, Result};
use crate::general::{
    bd_full_deck, direct_work, rot_estimate, rule_of_thumb, sep_direct, sep_genfun,
};
use crate::redblack::{alternating_two_shuffle, montecarlo_tv_redblack, two_shuffle_tv};
use crate::single_card::single_card_report;
use crate::transpose::{l2_mixing_bound, transposition_single_card_report};

pub const DECK_SIZE: usize = 52;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableId {
    Thumb,
    Bd92,
    SingleBottom,
    SingleMiddle,
    Sep,
    Alternating,
    Transpose,
    RedblackTv,
}

impl TableId {
    pub const ALL: [TableId; 8] = [
        TableId::Thumb,
        TableId::Bd92,
        TableId::SingleBottom,
        TableId::SingleMiddle,
        TableId::Sep,
        TableId::Alternating,
        TableId::Transpose,
        TableId::RedblackTv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Thumb => "thumb",
            TableId::Bd92 => "bd92",
            TableId::SingleBottom => "single-bottom",
            TableId::SingleMiddle => "single-middle",
            TableId::Sep => "sep",
            TableId::Alternating => "alternating",
            TableId::Transpose => "transpose",
            TableId::RedblackTv => "redblack-tv",
        }
    }

    pub fn default_range(self) -> RangeInclusive<u32> {
        match self {
            TableId::SingleMiddle => 1..=4,
            TableId::RedblackTv => 1..=4,
            _ => 1..=12,
        }
    }

    fn title(self) -> &'static str {
        match self {
            TableId::Thumb => {
                "Rule of thumb for the separation distance for k shuffles of 52 cards"
            }
            TableId::Bd92 => "Distance to uniformity for a deck of 52 distinct cards",
            TableId::SingleBottom => {
                "Distance to uniformity for a single card starting at the bottom of a 52 card deck"
            }
            TableId::SingleMiddle => {
                "Distance to uniformity for a single card starting at the middle of a 52 card deck"
            }
            TableId::Sep => "Separation distance for k shuffles of 52 cards",
            TableId::Alternating => {
                "One 2-shuffle of the alternating deck of n red and n black cards"
            }
            TableId::Transpose => "Random transpositions on 52 cards after l = 26k steps",
            TableId::RedblackTv => "Total variation for k shuffles of 26 red and 26 black cards",
        }
    }

    fn column_name(self) -> &'static str {
        match self {
            TableId::Alternating => "n",
            _ => "k",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown table {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct TableRequest {
    pub id: TableId,
    pub k_range: RangeInclusive<u32>,
    /// Starting position for the middle-card table.
    pub middle: usize,
    pub samples: Option<u64>,
    pub seed: u64,
    pub budget: u64,
}

impl TableRequest {
    pub fn new(id: TableId) -> Self {
        TableRequest {
            id,
            k_range: id.default_range(),
            middle: DECK_SIZE / 2,
            samples: None,
            seed: 0,
            budget: crate::simulate::DEFAULT_ENUM_BUDGET,
        }
    }
}

/// One table entry. Exact cells keep their rational value; sampled cells
/// carry a confidence interval.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CellValue {
    Exact {
        value: ExactQ,
    },
    Sampled {
        estimate: f64,
        ci_low: f64,
        ci_high: f64,
    },
    Float {
        value: f64,
    },
    Count {
        value: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    #[serde(flatten)]
    pub value: CellValue,
    pub method: String,
}

impl Cell {
    fn exact(value: ExactQ, method: &str) -> Self {
        Cell {
            value: CellValue::Exact { value },
            method: method.to_string(),
        }
    }

    pub fn exact_value(&self) -> Option<&ExactQ> {
        match &self.value {
            CellValue::Exact { value } => Some(value),
            _ => None,
        }
    }

    /// Decimal rendering: `precision` decimals, or three significant figures
    /// in scientific form for values of 1000 and above.
    pub fn render(&self, precision: usize) -> String {
        match &self.value {
            CellValue::Exact { value } => render_exact(value, precision),
            CellValue::Sampled { estimate, .. } => format!("{estimate:.precision$}"),
            CellValue::Float { value } => format!("{value:.precision$}"),
            CellValue::Count { value } => value.clone(),
        }
    }
}

pub fn render_exact(q: &ExactQ, precision: usize) -> String {
    if q.abs() < ExactQ::from(1000i64) {
        return q.to_decimal(precision);
    }
    let e = q.abs().decimal_exponent().expect("positive");
    let mantissa = q / ExactQ::from(BigInt::from(10).pow(e as u32));
    let m = mantissa.to_decimal(2);
    if m.trim_start_matches('-') == "10.00" {
        let sign = if q.is_negative() { "-" } else { "" };
        return format!("{sign}1.00e{}", e + 1);
    }
    format!("{m}e{e}")
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub id: TableId,
    pub title: String,
    pub column_name: String,
    pub columns: Vec<u32>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn row(&self, label: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.label == label)
    }
}

fn param(k: u32) -> ShuffleParam {
    ShuffleParam::two_shuffles(k)
}

fn two_pow(k: u32) -> BigInt {
    BigInt::from(1) << k
}

/// Named decks in table order.
pub const DECK_ROWS: [(&str, &str); 6] = [
    ("distinct", "full"),
    ("blackjack", "blackjack"),
    ("suits", "suits"),
    ("ace", "ace"),
    ("redblack", "redblack"),
    ("zener", "zener"),
];

fn deck(name: &str) -> DeckSpec {
    DeckSpec::named(name).expect("known deck")
}

/// The thumb table: the rule-of-thumb estimate wherever `a > m - 1`
/// (without an error bound when some type has fewer than 3 cards), and the
/// exact value where the estimate is undefined.
fn thumb_cell(spec: &DeckSpec, k: u32) -> Result<Cell> {
    let a = two_pow(k);
    if let Ok(r) = rule_of_thumb(spec, &a) {
        return Ok(Cell::exact(r.sep, "rule-of-thumb"));
    }
    if let Ok(sep) = rot_estimate(spec, &a) {
        return Ok(Cell::exact(sep, "rule-of-thumb (no eta bound)"));
    }
    Ok(Cell::exact(
        sep_genfun(spec, &a)?.sep,
        "generating-function (a <= m - 1)",
    ))
}

fn sep_cell(spec: &DeckSpec, k: u32, budget: u64) -> Result<Cell> {
    let a = two_pow(k);
    let g = sep_genfun(spec, &a)?;
    if direct_work(spec, &a) <= BigInt::from(budget) {
        let d = sep_direct(spec, &a, budget)?;
        if d.sep != g.sep {
            return Err(Error::Hypothesis(format!(
                "direct sum and generating function disagree for {spec} at a = {a}"
            )));
        }
        return Ok(Cell::exact(
            g.sep,
            "generating-function, direct-sum checked",
        ));
    }
    Ok(Cell::exact(g.sep, "generating-function"))
}

fn deck_rows(
    req: &TableRequest,
    decks: &[(&str, &str)],
    f: impl Fn(&DeckSpec, u32) -> Result<Cell> + Sync,
) -> Result<Vec<Row>> {
    let ks: Vec<u32> = req.k_range.clone().collect();
    decks
        .par_iter()
        .map(|(label, name)| {
            let spec = deck(name);
            let cells = ks
                .par_iter()
                .map(|&k| f(&spec, k))
                .collect::<Result<Vec<_>>>()?;
            Ok(Row {
                label: label.to_string(),
                cells,
            })
        })
        .collect()
}

fn report_rows(
    ks: &[u32],
    f: impl Fn(u32) -> Result<crate::distance::DistanceReport> + Sync,
    method: &str,
) -> Result<Vec<Row>> {
    let reports = ks.par_iter().map(|&k| f(k)).collect::<Result<Vec<_>>>()?;
    Ok(["TV", "SEP", "linf"]
        .iter()
        .map(|label| Row {
            label: label.to_string(),
            cells: reports
                .iter()
                .map(|r| {
                    let v = match *label {
                        "TV" => r.tv.clone(),
                        "SEP" => r.sep.clone(),
                        _ => r.linf.clone(),
                    };
                    Cell::exact(v, method)
                })
                .collect(),
        })
        .collect())
}

pub fn run_table(req: &TableRequest) -> Result<Table> {
    let (lo, hi) = (*req.k_range.start(), *req.k_range.end());
    if lo < 1 || hi > 64 || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "k-range {lo}..={hi} must lie within 1..=64"
        )));
    }
    let ks: Vec<u32> = req.k_range.clone().collect();
    let rows = match req.id {
        TableId::Thumb => {
            let decks: Vec<_> = DECK_ROWS
                .iter()
                .copied()
                .filter(|(l, _)| *l != "ace")
                .collect();
            deck_rows(req, &decks, thumb_cell)?
        }
        TableId::Sep => deck_rows(req, &DECK_ROWS, |spec, k| sep_cell(spec, k, req.budget))?,
        TableId::Bd92 => report_rows(
            &ks,
            |k| bd_full_deck(DECK_SIZE, &two_pow(k)),
            "rising-sequences",
        )?,
        TableId::SingleBottom => report_rows(
            &ks,
            |k| single_card_report(DECK_SIZE, DECK_SIZE, &param(k)),
            "single-card",
        )?,
        TableId::SingleMiddle => {
            if req.middle == 0 || req.middle > DECK_SIZE {
                return Err(Error::InvalidArgument(format!(
                    "start position must be in 1..={DECK_SIZE}"
                )));
            }
            report_rows(
                &ks,
                |k| single_card_report(DECK_SIZE, req.middle, &param(k)),
                "single-card",
            )?
        }
        TableId::Alternating => {
            let laws = ks
                .par_iter()
                .map(|&n| alternating_two_shuffle(n as usize))
                .collect::<Result<Vec<_>>>()?;
            let mut rows: Vec<Row> = ["TV", "SEP", "linf"]
                .iter()
                .map(|label| Row {
                    label: label.to_string(),
                    cells: laws
                        .iter()
                        .map(|l| {
                            let v = match *label {
                                "TV" => l.report.tv.clone(),
                                "SEP" => l.report.sep.clone(),
                                _ => l.report.linf.clone(),
                            };
                            Cell::exact(v, "class law")
                        })
                        .collect(),
                })
                .collect();
            for (label, odd) in [("odd patterns", true), ("even patterns", false)] {
                rows.push(Row {
                    label: label.to_string(),
                    cells: laws
                        .iter()
                        .map(|l| Cell {
                            value: CellValue::Count {
                                value: if odd {
                                    &l.odd_patterns
                                } else {
                                    &l.even_patterns
                                }
                                .to_string(),
                            },
                            method: "cut-and-riffle".into(),
                        })
                        .collect(),
                });
            }
            rows
        }
        TableId::Transpose => {
            let half = (DECK_SIZE / 2) as u32;
            let single = ks
                .par_iter()
                .map(|&k| transposition_single_card_report(DECK_SIZE, half * k))
                .collect::<Result<Vec<_>>>()?;
            let l2 = ks
                .par_iter()
                .map(|&k| l2_mixing_bound(DECK_SIZE / 2, half * k))
                .collect::<Result<Vec<_>>>()?;
            vec![
                Row {
                    label: "single TV".into(),
                    cells: single
                        .iter()
                        .map(|r| Cell::exact(r.tv.clone(), "closed form"))
                        .collect(),
                },
                Row {
                    label: "single SEP".into(),
                    cells: single
                        .iter()
                        .map(|r| Cell::exact(r.sep.clone(), "closed form"))
                        .collect(),
                },
                Row {
                    label: "redblack L2 bound".into(),
                    cells: l2
                        .iter()
                        .map(|b| Cell {
                            value: CellValue::Float { value: b.bound },
                            method: "spectrum".into(),
                        })
                        .collect(),
                },
                Row {
                    label: "redblack lead term".into(),
                    cells: l2
                        .iter()
                        .map(|b| Cell::exact(b.lead_term.clone(), "spectrum"))
                        .collect(),
                },
            ]
        }
        TableId::RedblackTv => {
            let samples = req.samples;
            let cells = ks
                .iter()
                .map(|&k| {
                    if k == 1 {
                        return Ok(Cell::exact(
                            two_shuffle_tv(DECK_SIZE / 2)?,
                            "run-length sum",
                        ));
                    }
                    let samples = samples.ok_or_else(|| {
                        Error::InvalidArgument("sampled cells need an explicit --samples".into())
                    })?;
                    let m = montecarlo_tv_redblack(DECK_SIZE / 2, k, samples, req.seed)?;
                    Ok(Cell {
                        value: CellValue::Sampled {
                            estimate: m.estimate,
                            ci_low: m.ci_low,
                            ci_high: m.ci_high,
                        },
                        method: format!("monte-carlo ({samples} samples, seed {})", req.seed),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            vec![Row {
                label: "TV".into(),
                cells,
            }]
        }
    };
    Ok(Table {
        id: req.id,
        title: req.id.title().to_string(),
        column_name: req.id.column_name().to_string(),
        columns: ks,
        rows,
    })
}
