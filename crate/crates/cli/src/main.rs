use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use riffle_core::deck::Word;
use riffle_core::general::{separation, SepRoute};
use riffle_core::redblack::{
    alternating_tv_closed, alternating_two_shuffle, exact_tv_redblack, montecarlo_tv_redblack,
    sorted_and_reverse_prob, two_shuffle_tv,
};
use riffle_core::simulate::{enumerate_exact, enumerate_words, identity};
use riffle_core::single_card::single_card_report;
use riffle_core::tables::{render_exact, run_table, CellValue, TableId, TableRequest};
use riffle_core::transpose::{
    l2_mixing_bound, redblack_transposition_report, transposition_single_card_report,
};
use riffle_core::verify::{run_verify, Suite, VerifyConfig};
use riffle_core::{binomial, DeckSpec, DistanceReport, Error, ExactQ, Metric, ShuffleParam};

mod output;

use output::{Format, Report};

/// Exact distances to uniformity for riffle shuffles of decks with repeated cards.
#[derive(Parser, Debug)]
#[command(name = "riffle", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for sampled quantities.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of Monte Carlo samples; sampled output is refused without it.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Work limit for direct sums and enumeration.
    #[arg(long, global = true, default_value_t = riffle_core::simulate::DEFAULT_ENUM_BUDGET)]
    budget: u64,
    /// Decimal places in rendered values.
    #[arg(long, global = true, default_value_t = 3)]
    precision: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct Shuffles {
    /// Number of successive 2-shuffles (a = 2^k).
    #[arg(long)]
    shuffles: Option<u32>,
    /// Packet count a of a single a-shuffle.
    #[arg(long)]
    packets: Option<BigInt>,
}

impl Shuffles {
    fn param(&self) -> Result<ShuffleParam, Error> {
        match (self.shuffles, &self.packets) {
            (Some(k), _) => Ok(ShuffleParam::two_shuffles(k)),
            (None, Some(a)) => ShuffleParam::packets(a.clone()),
            (None, None) => unreachable!("clap requires one of the two"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance of one tracked card's position from uniform.
    SingleCard {
        #[arg(long, default_value_t = 52)]
        n: usize,
        /// top, bottom, middle, or a 1-based position.
        #[arg(long, default_value = "bottom")]
        start: String,
        #[command(flatten)]
        shuffles: Shuffles,
        /// tv, sep, linf or all.
        #[arg(long, default_value = "all")]
        metric: String,
    },
    /// Reds over blacks: separation, and total variation exactly or by sampling.
    Redblack {
        #[arg(long, default_value_t = 26)]
        r: usize,
        #[arg(long, default_value_t = 26)]
        b: usize,
        #[command(flatten)]
        shuffles: Shuffles,
        /// Compute total variation exactly (the default).
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Estimate total variation by Monte Carlo (needs --samples).
        #[arg(long)]
        mc: bool,
    },
    /// One 2-shuffle of the alternating deck.
    Alternating {
        /// Cards of each colour.
        #[arg(long, default_value_t = 26)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        shuffles: u32,
    },
    /// Separation for any deck composition.
    Sep {
        /// Multiplicities such as 13,13,13,13, or a deck name.
        #[arg(long)]
        deck: DeckSpec,
        #[command(flatten)]
        shuffles: Shuffles,
        /// auto, direct, genfun or rot.
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Regenerates one of the standard tables.
    Table {
        /// thumb, bd92, single-bottom, single-middle, sep, alternating, transpose or redblack-tv.
        #[arg(long)]
        name: String,
        /// First column (k, or n for the alternating table).
        #[arg(long)]
        from: Option<u32>,
        /// Last column.
        #[arg(long)]
        to: Option<u32>,
        /// Start position for single-middle.
        #[arg(long, default_value_t = 26)]
        middle: usize,
    },
    /// Random transpositions.
    Transpose {
        #[arg(long, default_value_t = 52)]
        n: usize,
        #[arg(long)]
        steps: u32,
        #[arg(long, value_enum, default_value_t = TransposeMode::SingleCard)]
        mode: TransposeMode,
    },
    /// Dumps the exact a-shuffle law of a small deck by enumeration.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u64,
        /// Multiplicities; omit for distinct cards.
        #[arg(long)]
        deck: Option<DeckSpec>,
    },
    /// Runs a cross-validation suite.
    Verify {
        /// oracle-small, eta-bound or eigen.
        #[arg(long)]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TransposeMode {
    SingleCard,
    Redblack,
}

/// Words beyond this count are not summed over for exact total variation.
const EXACT_TV_WORDS: u64 = 200_000;

fn exact_cell(q: &ExactQ, precision: usize) -> Value {
    json!({ "decimal": q.to_decimal(precision), "exact": q.to_exact_string() })
}

fn report_json(r: &DistanceReport, precision: usize) -> Value {
    r.to_json(precision)
}

fn report_rows(r: &DistanceReport, metrics: &[Metric], precision: usize) -> Vec<Vec<String>> {
    metrics
        .iter()
        .map(|&m| {
            vec![
                m.name().to_string(),
                r.get(m).to_decimal(precision),
                r.get(m).to_exact_string(),
            ]
        })
        .collect()
}

fn parse_start(start: &str, n: usize) -> Result<usize, Error> {
    match start {
        "top" => Ok(1),
        "bottom" => Ok(n),
        "middle" => Ok(n / 2),
        s => s.parse::<usize>().map_err(|_| {
            Error::Parse(format!(
                "start must be top, bottom, middle or a position, got {s:?}"
            ))
        }),
    }
}

fn single_card(
    g: &Global,
    n: usize,
    start: &str,
    shuffles: &Shuffles,
    metric: &str,
) -> Result<Report, Error> {
    let param = shuffles.param()?;
    let i = parse_start(start, n)?;
    let r = single_card_report(n, i, &param)?;
    let metrics: Vec<Metric> = if metric == "all" {
        Metric::ALL.to_vec()
    } else {
        vec![metric.parse()?]
    };
    let mut body = serde_json::Map::new();
    for &m in &metrics {
        body.insert(m.name().into(), exact_cell(r.get(m), g.precision));
    }
    Ok(Report::rows(
        json!({ "n": n, "start": i, "shuffle": param.to_string(), "distances": body }),
        vec!["metric", "value", "exact"],
        report_rows(&r, &metrics, g.precision),
    ))
}

fn redblack(
    g: &Global,
    r: usize,
    b: usize,
    shuffles: &Shuffles,
    mc: bool,
) -> Result<Report, Error> {
    let param = shuffles.param()?;
    let a = param.a();
    let (identity_p, reverse) = sorted_and_reverse_prob(r, b, a)?;
    let sep = ExactQ::one() - ExactQ::from(binomial((r + b) as u64, r as i64)) * &reverse;
    let mut rows = vec![
        vec![
            "sep".to_string(),
            sep.to_decimal(g.precision),
            "exact".into(),
        ],
        vec![
            "identity".to_string(),
            identity_p.to_decimal(g.precision),
            "exact".into(),
        ],
        vec![
            "reverse".to_string(),
            render_exact(&reverse, g.precision),
            "exact".into(),
        ],
    ];
    let mut body = json!({
        "r": r, "b": b, "shuffle": param.to_string(),
        "sep": exact_cell(&sep, g.precision),
        "identity_prob": identity_p.to_exact_string(),
        "reverse_prob": reverse.to_exact_string(),
    });
    if mc {
        let samples = g
            .samples
            .ok_or_else(|| Error::InvalidArgument("--mc needs --samples".into()))?;
        if r != b {
            return Err(Error::InvalidArgument(
                "the sampler covers equal numbers of reds and blacks".into(),
            ));
        }
        let k = param
            .doublings()
            .ok_or_else(|| Error::InvalidArgument("--mc needs --shuffles".into()))?;
        let est = montecarlo_tv_redblack(r, k, samples, g.seed)?;
        rows.push(vec![
            "tv".into(),
            format!("{:.*}", g.precision, est.estimate),
            format!(
                "monte-carlo, 95% CI [{:.5}, {:.5}]",
                est.ci_low, est.ci_high
            ),
        ]);
        body["tv"] = serde_json::to_value(&est).expect("serialisable");
    } else {
        let tv = if r == b && param.doublings() == Some(1) {
            Some(two_shuffle_tv(r)?)
        } else if binomial((r + b) as u64, r as i64) <= BigInt::from(EXACT_TV_WORDS) {
            Some(exact_tv_redblack(r, b, a)?)
        } else {
            None
        };
        match tv {
            Some(tv) => {
                rows.push(vec![
                    "tv".into(),
                    tv.to_decimal(g.precision),
                    "exact".into(),
                ]);
                body["tv"] = exact_cell(&tv, g.precision);
            }
            None => {
                rows.push(vec![
                    "tv".into(),
                    "-".into(),
                    "too many words; use --mc".into(),
                ]);
                body["tv"] = Value::Null;
            }
        }
    }
    Ok(Report::rows(
        body,
        vec!["quantity", "value", "method"],
        rows,
    ))
}

fn alternating(g: &Global, n: usize, shuffles: u32) -> Result<Report, Error> {
    if shuffles != 1 {
        return Err(Error::InvalidArgument(
            "only a single 2-shuffle of the alternating deck is covered".into(),
        ));
    }
    let law = alternating_two_shuffle(n)?;
    let mut rows = report_rows(&law.report, &Metric::ALL, g.precision);
    rows.push(vec![
        "odd patterns".into(),
        law.odd_patterns.to_string(),
        String::new(),
    ]);
    rows.push(vec![
        "even patterns".into(),
        law.even_patterns.to_string(),
        String::new(),
    ]);
    let closed = alternating_tv_closed(n).ok();
    Ok(Report::rows(
        json!({
            "n": n,
            "distances": report_json(&law.report, g.precision),
            "odd_patterns": law.odd_patterns.to_string(),
            "even_patterns": law.even_patterns.to_string(),
            "tv_closed_form": closed.map(|q| q.to_exact_string()),
            "materialised": law.dist.is_some(),
        }),
        vec!["quantity", "value", "exact"],
        rows,
    ))
}

fn sep(g: &Global, deck: &DeckSpec, shuffles: &Shuffles, method: &str) -> Result<Report, Error> {
    let param = shuffles.param()?;
    let route: SepRoute = method.parse()?;
    let r = separation(deck, param.a(), route, g.budget)?;
    let mut rows = vec![vec![
        "sep".to_string(),
        r.sep.to_decimal(g.precision),
        r.method.to_string(),
    ]];
    if let Some(eta) = &r.eta_bound {
        rows.push(vec![
            "eta bound".into(),
            render_exact(eta, g.precision),
            String::new(),
        ]);
    }
    Ok(Report::rows(
        json!({
            "deck": deck.to_string(),
            "shuffle": param.to_string(),
            "sep": exact_cell(&r.sep, g.precision),
            "method": r.method.name(),
            "eta_bound": r.eta_bound.as_ref().map(|e| e.to_exact_string()),
        }),
        vec!["quantity", "value", "method"],
        rows,
    ))
}

fn table(
    g: &Global,
    name: &str,
    from: Option<u32>,
    to: Option<u32>,
    middle: usize,
) -> Result<Report, Error> {
    let id: TableId = name.parse()?;
    let mut req = TableRequest::new(id);
    let lo = from.unwrap_or(*req.k_range.start());
    let hi = to.unwrap_or(*req.k_range.end());
    req.k_range = lo..=hi;
    req.middle = middle;
    req.samples = g.samples;
    req.seed = g.seed;
    req.budget = g.budget;
    let t = run_table(&req)?;
    let rows = t
        .rows
        .iter()
        .flat_map(|row| {
            t.columns.iter().zip(&row.cells).map(move |(k, c)| {
                let exact = match &c.value {
                    CellValue::Exact { value } => value.to_exact_string(),
                    CellValue::Sampled {
                        ci_low, ci_high, ..
                    } => format!("95% CI [{ci_low:.5}, {ci_high:.5}]"),
                    _ => String::new(),
                };
                vec![
                    row.label.clone(),
                    k.to_string(),
                    c.render(g.precision),
                    c.method.clone(),
                    exact,
                ]
            })
        })
        .collect();
    let grid: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|row| {
            std::iter::once(row.label.clone())
                .chain(row.cells.iter().map(|c| c.render(g.precision)))
                .collect()
        })
        .collect();
    let header: Vec<String> = std::iter::once(t.column_name.clone())
        .chain(t.columns.iter().map(|k| k.to_string()))
        .collect();
    let mut body = serde_json::to_value(&t).expect("serialisable");
    // rendered decimals alongside the exact cells
    for (ri, row) in t.rows.iter().enumerate() {
        for (ci, c) in row.cells.iter().enumerate() {
            body["rows"][ri]["cells"][ci]["decimal"] = Value::String(c.render(g.precision));
        }
    }
    Ok(Report {
        json: body,
        csv_header: ["row", &t.column_name, "value", "method", "exact"]
            .map(String::from)
            .to_vec(),
        csv_rows: rows,
        text: output::grid(&t.title, &header, &grid),
    })
}

fn transpose(g: &Global, n: usize, steps: u32, mode: TransposeMode) -> Result<Report, Error> {
    match mode {
        TransposeMode::SingleCard => {
            let r = transposition_single_card_report(n, steps)?;
            Ok(Report::rows(
                json!({ "n": n, "steps": steps, "mode": "single-card", "distances": report_json(&r, g.precision) }),
                vec!["metric", "value", "exact"],
                report_rows(&r, &Metric::ALL, g.precision),
            ))
        }
        TransposeMode::Redblack => {
            if !n.is_multiple_of(2) {
                return Err(Error::InvalidArgument(
                    "the red-black walk needs an even deck".into(),
                ));
            }
            let half = n / 2;
            let bound = l2_mixing_bound(half, steps)?;
            let mut rows = vec![
                vec![
                    "l2 bound".into(),
                    format!("{:.*}", g.precision, bound.bound),
                    "spectrum".into(),
                ],
                vec![
                    "lead term".into(),
                    render_exact(&bound.lead_term, g.precision),
                    "spectrum".into(),
                ],
            ];
            let mut body = json!({
                "n": n, "steps": steps, "mode": "redblack",
                "l2_bound": bound.bound,
                "lead_term": bound.lead_term.to_decimal(g.precision.max(12)),
            });
            if binomial(n as u64, half as i64) <= BigInt::from(EXACT_TV_WORDS) {
                let r = redblack_transposition_report(half, steps)?;
                rows.push(vec![
                    "tv".into(),
                    r.tv.to_decimal(g.precision),
                    "exact".into(),
                ]);
                body["tv"] = exact_cell(&r.tv, g.precision);
            }
            Ok(Report::rows(
                body,
                vec!["quantity", "value", "method"],
                rows,
            ))
        }
    }
}

fn oracle(g: &Global, n: usize, a: u64, deck: Option<DeckSpec>) -> Result<Report, Error> {
    let (entries, label): (Vec<(String, ExactQ)>, String) = match deck {
        Some(spec) => {
            if spec.n() != n {
                return Err(Error::DeckMismatch(format!(
                    "deck {spec} has {} cards, not {n}",
                    spec.n()
                )));
            }
            let d = enumerate_words(&spec, a, g.budget)?;
            let entries = Word::all(&spec)
                .into_iter()
                .map(|w| {
                    let p = d.prob(&w);
                    (w.to_string(), p)
                })
                .collect();
            (entries, spec.to_string())
        }
        None => {
            let d = enumerate_exact(&identity(n), a, g.budget)?;
            let entries = d
                .iter()
                .map(|(p, m)| {
                    let s: Vec<String> = p.iter().map(|c| (c + 1).to_string()).collect();
                    (s.join(" "), m.clone())
                })
                .collect();
            (entries, format!("{n} distinct cards"))
        }
    };
    let law: serde_json::Map<String, Value> = entries
        .iter()
        .map(|(k, p)| (k.clone(), Value::String(p.to_exact_string())))
        .collect();
    let rows = entries
        .iter()
        .map(|(k, p)| vec![k.clone(), p.to_decimal(g.precision), p.to_exact_string()])
        .collect();
    Ok(Report::rows(
        json!({ "deck": label, "a": a, "law": law }),
        vec!["arrangement", "probability", "exact"],
        rows,
    ))
}

fn verify(suite: &str) -> Result<(Report, bool), Error> {
    let suite: Suite = suite.parse()?;
    let r = run_verify(suite, &VerifyConfig::default())?;
    let rows = r
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                if c.passed { "pass" } else { "FAIL" }.into(),
                c.detail.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let body = serde_json::to_value(&r).expect("serialisable");
    Ok((
        Report::rows(body, vec!["check", "result", "detail"], rows),
        r.passed,
    ))
}

fn run(cli: &Cli) -> Result<(Report, bool), Error> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::SingleCard {
            n,
            start,
            shuffles,
            metric,
        } => single_card(g, *n, start, shuffles, metric)?,
        Command::Redblack {
            r, b, shuffles, mc, ..
        } => redblack(g, *r, *b, shuffles, *mc)?,
        Command::Alternating { n, shuffles } => alternating(g, *n, *shuffles)?,
        Command::Sep {
            deck,
            shuffles,
            method,
        } => sep(g, deck, shuffles, method)?,
        Command::Table {
            name,
            from,
            to,
            middle,
        } => table(g, name, *from, *to, *middle)?,
        Command::Transpose { n, steps, mode } => transpose(g, *n, *steps, *mode)?,
        Command::Oracle { n, a, deck } => oracle(g, *n, *a, deck.clone())?,
        Command::Verify { suite } => return verify(suite),
    };
    Ok((report, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, passed)) => {
            if let Err(e) = report.print(cli.global.format) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
