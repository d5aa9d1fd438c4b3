//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Reference values are three-decimal table cells. A cell matches when the
//! exact value is within one unit of its last digit (the reference tables mix
//! rounding and truncation); cells given as powers of ten are compared by
//! order of magnitude. Mismatches listed in `KNOWN` are reported as
//! `FAIL (known)` and do not fail the run; anything else does.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;

use riffle_core::distance::distance_from_classes;
use riffle_core::general::{
    poisson_estimate, poisson_exact, poisson_multi, poisson_multi_exact, rot_eta_bound,
    rot_eta_exact, rule_of_thumb,
};
use riffle_core::redblack::{
    alternating_tv_closed, alternating_tv_uncorrected, alternating_two_shuffle,
    cut_and_riffle_patterns, in_odd_class, montecarlo_tv_redblack, redblack_asymptotic_sep,
    redblack_sep, two_shuffle_tv,
};
use riffle_core::simulate::{enumerate_exact, lump, GroupMeasure, DEFAULT_ENUM_BUDGET};
use riffle_core::single_card::{
    bottom_card_sep, sep_bounds, single_card_report, tv_bounds, CardMatrix,
};
use riffle_core::tables::{run_table, Table, TableId, TableRequest};
use riffle_core::transpose::{
    beta, gelfand_spectrum, lumped_entries_uncorrected, lumped_kernel, multiplicity,
    multiplicity_uncorrected, step_diagonal, step_diagonal_uncorrected, transposition_power_entry,
    transposition_step_matrix,
};
use riffle_core::verify::{run_verify, Suite, VerifyConfig};
use riffle_core::{binomial, DeckSpec, ExactQ, ShuffleParam, Word};

/// Mismatches that are analysed in the decisions log.
const KNOWN: &[(u32, &str)] = &[
    (1, "linf k=7"),
    (4, "distinct k=8"),
    (4, "distinct k=9"),
    (4, "distinct k=10"),
    (4, "distinct k=11"),
    (11, "uncorrected TV formula n=3"),
    (11, "uncorrected TV formula n=4"),
    (11, "uncorrected TV formula n=5"),
    (11, "uncorrected TV formula n=6"),
];

const TABLE1: &[(&str, [&str; 12])] = &[
    (
        "distinct",
        [
            "1.00", "1.00", "1.00", "1.00", "1.00", "1.00", "1.00", ".995", ".928", ".729", ".478",
            ".278",
        ],
    ),
    (
        "blackjack",
        [
            "1.00", "1.00", "1.00", "1.00", ".999", ".970", ".834", ".596", ".366", ".204", ".108",
            ".056",
        ],
    ),
    (
        "suits",
        [
            "1.00", "1.00", ".997", ".976", ".884", ".683", ".447", ".260", ".140", ".073", ".037",
            ".019",
        ],
    ),
    (
        "redblack",
        [
            ".962", ".925", ".849", ".708", ".508", ".317", ".179", ".095", ".049", ".025", ".013",
            ".006",
        ],
    ),
    (
        "zener",
        [
            "1.00", "1.00", ".993", ".943", ".778", ".536", ".321", ".177", ".093", ".048", ".024",
            ".012",
        ],
    ),
];

const TABLE2: &[(&str, [&str; 12])] = &[
    (
        "TV",
        [
            "1.00", "1.00", "1.00", "1.00", ".924", ".614", ".334", ".167", ".085", ".043", ".021",
            ".010",
        ],
    ),
    (
        "SEP",
        [
            "1.00", "1.00", "1.00", "1.00", "1.00", "1.00", "1.00", ".996", ".931", ".732", ".479",
            ".278",
        ],
    ),
    (
        "linf",
        [
            "1e53", "1e41", "1e29", "1e19", "1e12", "1e7", "1e5", "128", "11.3", "2.57", ".900",
            ".380",
        ],
    ),
];

const TABLE3: &[(&str, [&str; 12])] = &[
    (
        "TV",
        [
            ".873", ".752", ".577", ".367", ".200", ".103", ".052", ".026", ".013", ".007", ".003",
            ".002",
        ],
    ),
    (
        "SEP",
        [
            "1.00", "1.00", ".993", ".875", ".605", ".353", ".190", ".098", ".050", ".025", ".013",
            ".006",
        ],
    ),
    (
        "linf",
        [
            "25.0", "12.0", "5.51", "2.37", "1.02", ".460", ".217", ".105", ".052", ".026", ".013",
            ".006",
        ],
    ),
];

const TABLE4: &[(&str, [&str; 4])] = &[
    ("TV", [".494", ".152", ".001", ".000"]),
    ("SEP", ["1.00", ".487", ".003", ".000"]),
    ("linf", ["1.92", ".487", ".003", ".000"]),
];

const TABLE5: &[(&str, [&str; 12])] = &[
    (
        "distinct",
        [
            "1.00", "1.00", "1.00", "1.00", "1.00", "1.00", "1.00", ".995", ".928", ".729", ".478",
            ".278",
        ],
    ),
    (
        "blackjack",
        [
            "1.00", "1.00", "1.00", "1.00", ".999", ".970", ".834", ".596", ".366", ".204", ".108",
            ".056",
        ],
    ),
    (
        "suits",
        [
            "1.00", ".997", ".997", ".976", ".884", ".683", ".447", ".260", ".140", ".073", ".037",
            ".019",
        ],
    ),
    (
        "ace",
        [
            "1.00", "1.00", ".993", ".875", ".605", ".353", ".190", ".098", ".050", ".025", ".013",
            ".006",
        ],
    ),
    (
        "redblack",
        [
            ".890", ".890", ".849", ".708", ".508", ".317", ".179", ".095", ".049", ".025", ".013",
            ".006",
        ],
    ),
    (
        "zener",
        [
            "1.00", "1.00", ".993", ".943", ".778", ".536", ".321", ".177", ".093", ".048", ".024",
            ".012",
        ],
    ),
];

#[derive(Default)]
struct Outcome {
    mismatches: Vec<String>,
    notes: Vec<String>,
    /// Time of the part the runtime limit applies to, when not the whole run.
    timed: Option<Duration>,
}

impl Outcome {
    fn check(&mut self, ok: bool, label: impl Into<String>) {
        if !ok {
            self.mismatches.push(label.into());
        }
    }
}

#[derive(PartialEq)]
enum Match {
    Rounded,
    WithinUnit,
    No,
}

/// Compares an exact value with a reference cell.
fn compare(exact: &ExactQ, shown: &str) -> Match {
    if let Some(e) = shown.strip_prefix("1e") {
        let e: i64 = e.parse().unwrap();
        return if exact.decimal_exponent() == Some(e) {
            Match::Rounded
        } else {
            Match::No
        };
    }
    let decimals = shown.split_once('.').map_or(0, |(_, f)| f.len());
    if exact.to_decimal(decimals).trim_start_matches('0') == shown.trim_start_matches('0') {
        return Match::Rounded;
    }
    let value: ExactQ = shown.parse().unwrap();
    let unit = ExactQ::new(BigInt::one(), BigInt::from(10).pow(decimals as u32));
    if (exact - &value).abs() < unit {
        Match::WithinUnit
    } else {
        Match::No
    }
}

/// Checks every row of `shown` against `table`, returning the number of
/// cells that equal the half-even rounding.
fn compare_table<const K: usize>(
    out: &mut Outcome,
    table: &Table,
    shown: &[(&str, [&str; K])],
) -> usize {
    let mut rounded = 0;
    for (label, cells) in shown {
        let row = table
            .row(label)
            .unwrap_or_else(|| panic!("row {label} missing"));
        for (k, p) in cells.iter().enumerate() {
            let exact = row.cells[k].exact_value().expect("exact cell");
            match compare(exact, p) {
                Match::Rounded => rounded += 1,
                Match::WithinUnit => {}
                Match::No => out.mismatches.push(format!("{label} k={}", k + 1)),
            }
        }
    }
    rounded
}

fn table(id: TableId, k_hi: u32, middle: usize) -> Table {
    let mut req = TableRequest::new(id);
    req.k_range = 1..=k_hi;
    req.middle = middle;
    run_table(&req).expect("table")
}

fn cells<const K: usize>(shown: &[(&str, [&str; K])]) -> usize {
    shown.len() * K
}

fn criterion_1(out: &mut Outcome) {
    let t = table(TableId::Bd92, 12, 26);
    let rounded = compare_table(out, &t, TABLE2);
    out.notes.push(format!(
        "{rounded}/{} cells equal the rounded exact value",
        cells(TABLE2)
    ));
    let sep = t.row("SEP").unwrap();
    let differ: Vec<String> = (8..=11)
        .filter(|&k| {
            compare(sep.cells[k - 1].exact_value().unwrap(), TABLE5[0].1[k - 1]) == Match::No
        })
        .map(|k| k.to_string())
        .collect();
    out.notes.push(format!(
        "the separation table's copy of this row differs at k={}; exact values side with this table",
        differ.join(",")
    ));
}

fn criterion_2(out: &mut Outcome) {
    let t = table(TableId::SingleBottom, 12, 26);
    let rounded = compare_table(out, &t, TABLE3);
    out.notes.push(format!(
        "{rounded}/{} cells equal the rounded exact value",
        cells(TABLE3)
    ));
    let sep = t.row("SEP").unwrap();
    for k in 1..=12u32 {
        let a = BigInt::one() << k;
        out.check(
            bottom_card_sep(52, &a).unwrap() == *sep.cells[k as usize - 1].exact_value().unwrap(),
            format!("bottom-card SEP closed form k={k}"),
        );
    }
}

fn criterion_3(out: &mut Outcome) {
    let mut matching = Vec::new();
    for i in [26, 27] {
        let t = table(TableId::SingleMiddle, 4, i);
        let mut o = Outcome::default();
        compare_table(&mut o, &t, TABLE4);
        if o.mismatches.is_empty() {
            matching.push(i.to_string());
        }
    }
    out.check(!matching.is_empty(), "no middle index matches");
    out.notes
        .push(format!("matching start index: {}", matching.join(" and ")));
}

fn criterion_4(out: &mut Outcome) {
    // the table cross-checks every cell against the direct sum where it fits the budget
    let t = table(TableId::Sep, 12, 26);
    let rounded = compare_table(out, &t, TABLE5);
    let checked = t
        .rows
        .iter()
        .flat_map(|r| &r.cells)
        .filter(|c| c.method.contains("direct-sum checked"))
        .count();
    out.notes.push(format!(
        "{rounded}/{} cells equal the rounded exact value; {checked} cells cross-checked by the direct sum",
        cells(TABLE5)
    ));
}

fn criterion_5(out: &mut Outcome) {
    let start = Instant::now();
    let t = table(TableId::Thumb, 12, 26);
    out.timed = Some(start.elapsed());
    let rounded = compare_table(out, &t, TABLE1);
    out.notes.push(format!(
        "{rounded}/{} cells equal the rounded estimate",
        cells(TABLE1)
    ));
    let mut bounded = 0;
    for (label, name) in [
        ("blackjack", "blackjack"),
        ("suits", "suits"),
        ("redblack", "redblack"),
        ("zener", "zener"),
    ] {
        let spec = DeckSpec::named(name).unwrap();
        for k in 1..=12u32 {
            let a = BigInt::one() << k;
            if rule_of_thumb(&spec, &a).is_ok() {
                let eta = rot_eta_exact(&spec, &a).unwrap();
                let bound = rot_eta_bound(&spec, &a).unwrap();
                out.check(
                    eta.abs() <= bound,
                    format!("{label} k={k} eta outside bound"),
                );
                bounded += 1;
            }
        }
    }
    out.notes.push(format!(
        "exact error within the eta bound for {bounded} cells with min multiplicity >= 3"
    ));
}

fn criterion_6(out: &mut Outcome) {
    let tv = two_shuffle_tv(26).unwrap();
    out.check(
        tv.to_decimal(3) == "0.579",
        format!("k=1 exact TV {}", tv.to_decimal(6)),
    );
    let mut line = format!("k=1 {}", tv.to_decimal(5));
    for (k, target) in [(2u32, 0.360), (3, 0.208), (4, 0.105)] {
        let mc = montecarlo_tv_redblack(26, k, 1_000_000, 1).unwrap();
        out.check(
            (mc.estimate - target).abs() <= 0.01,
            format!("k={k} estimate {:.4}", mc.estimate),
        );
        line.push_str(&format!(
            ", k={k} {:.4} (se {:.4})",
            mc.estimate, mc.std_error
        ));
    }
    out.notes.push(line);
}

fn criterion_7(out: &mut Outcome) {
    let config = VerifyConfig::default();
    let r = run_verify(Suite::OracleSmall, &config).unwrap();
    for c in &r.checks {
        out.check(
            c.passed,
            format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()),
        );
    }
    let decks: usize = (2..=config.max_n)
        .map(|n| DeckSpec::compositions(n).len())
        .sum();
    out.notes.push(format!(
        "{} checks over {decks} compositions x a in {:?}",
        r.checks.len(),
        config.packets
    ));
}

fn criterion_8(out: &mut Outcome) {
    for n in 2..=8 {
        for a in 1..=4u64 {
            let pa = CardMatrix::new(n, &BigInt::from(a)).unwrap();
            out.check(
                pa.is_cross_symmetric(),
                format!("cross-symmetry n={n} a={a}"),
            );
            for b in 1..=4u64 {
                let pb = CardMatrix::new(n, &BigInt::from(b)).unwrap();
                let pab = CardMatrix::new(n, &BigInt::from(a * b)).unwrap();
                out.check(
                    pa.matrix().mul(pb.matrix()).unwrap() == *pab.matrix(),
                    format!("P_a P_b = P_ab at n={n} a={a} b={b}"),
                );
            }
        }
    }
    let r = run_verify(Suite::Eigen, &VerifyConfig::default()).unwrap();
    let mut forms = BTreeSet::new();
    for c in &r.checks {
        out.check(c.passed, format!("eigenvectors {}", c.name));
        forms.insert(
            c.detail
                .clone()
                .unwrap_or_default()
                .rsplit(' ')
                .next()
                .unwrap_or("")
                .to_string(),
        );
    }
    out.notes.push(format!(
        "eigenvector form resolved as: {}",
        forms.into_iter().collect::<Vec<_>>().join(", ")
    ));
}

fn criterion_9(out: &mut Outcome) {
    for k in 2..=12u32 {
        let a = BigInt::one() << k;
        let sep = bottom_card_sep(52, &a).unwrap();
        let (lo, hi) = sep_bounds(52, &a).unwrap();
        out.check(lo <= sep && sep <= hi, format!("SEP bracket k={k}"));
        let tv = single_card_report(52, 52, &ShuffleParam::two_shuffles(k))
            .unwrap()
            .tv;
        out.check(
            tv_bounds(52, &a).unwrap().contains(&tv, 0.0),
            format!("TV bracket k={k}"),
        );
    }

    let mut grid = 0;
    for a in 5..=100i64 {
        for xi in ["0", "1/2", "1"] {
            let xi: ExactQ = xi.parse().unwrap();
            for (r, s) in [(2, 2), (2, 3), (3, 3), (2, 5), (4, 3)] {
                let aq = ExactQ::from(a);
                let est = poisson_estimate(&aq, &xi, r, s).unwrap();
                let exact = poisson_exact(&aq, &xi, r, s).unwrap();
                out.check(
                    est.contains(&exact),
                    format!("two-factor sum a={a} xi={xi} r={r} s={s}"),
                );
                grid += 1;
            }
        }
    }
    let zero = ExactQ::from(0i64);
    let xis = vec![zero.clone(), zero.clone(), zero];
    let est = poisson_multi(10, &xis, &[2, 2, 2]).unwrap();
    let exact = poisson_multi_exact(10, &xis, &[2, 2, 2]).unwrap();
    out.check(est.contains(&exact), "three-factor sum a=10 r=(2,2,2)");

    let a = BigInt::from(16);
    let approx = redblack_asymptotic_sep(26, &a).unwrap();
    let exact = redblack_sep(26, 26, &a).unwrap();
    let err = (&approx.estimate - &exact).abs().to_f64();
    out.check(
        (7e-13..=7e-11).contains(&err),
        format!("red-black asymptotic error {err:.3e}"),
    );
    out.notes.push(format!(
        "{grid} two-factor grid points; red-black asymptotic error at (26, 16) = {err:.3e}"
    ));
}

fn criterion_10(out: &mut Outcome) {
    // closed form against the exact powers of the step matrix, one row at a time
    for n in 2..=50usize {
        let p = transposition_step_matrix(n).unwrap();
        out.check(
            p.row_sums().iter().all(|s| *s == ExactQ::one()),
            format!("step matrix rows sum to 1 at n={n}"),
        );
        if n >= 4 {
            let shown =
                step_diagonal_uncorrected(n) + ExactQ::new(2 * (n as u64 - 1), (n * n) as u64);
            out.check(
                shown != ExactQ::one(),
                format!("uncorrected diagonal unexpectedly stochastic at n={n}"),
            );
        }
        out.check(step_diagonal(n) == *p.get(0, 0), format!("diagonal n={n}"));
        // first column of (n^2 P)^l in integers; P^l = (n^2 P)^l / n^(2l)
        let scale = ExactQ::from((n * n) as u64);
        let m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (p.get(i, j) * &scale).numer().clone())
                    .collect()
            })
            .collect();
        let mut v = vec![BigInt::from(0); n];
        v[0] = BigInt::one();
        let mut den = BigInt::one();
        for l in 1..=100u32 {
            v = m
                .iter()
                .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum())
                .collect();
            den *= (n * n) as u64;
            let entry = |i: usize| ExactQ::new(v[i].clone(), den.clone());
            out.check(
                entry(0) == transposition_power_entry(n, l, true),
                format!("same-position entry n={n} l={l}"),
            );
            out.check(
                entry(n - 1) == transposition_power_entry(n, l, false),
                format!("moved entry n={n} l={l}"),
            );
        }
    }

    // eigenvalues of the 6-card red-black chain with their multiplicities
    let chain = lumped_kernel(3).unwrap();
    let spec = DeckSpec::red_black(3, 3).unwrap();
    let dense = lump(&GroupMeasure::random_transposition(6).unwrap(), &spec).unwrap();
    out.check(
        chain.kernel == dense.kernel,
        "closed-form kernel equals the lumped group walk at N=6",
    );
    let (diag, _) = lumped_entries_uncorrected(3);
    out.check(
        diag != *dense.kernel.get(0, 0),
        "uncorrected kernel entries agree with the lumped walk",
    );
    let states = dense.states.len();
    for j in 0..=3 {
        let nullity = states - dense.kernel.sub_scaled_identity(&beta(6, j)).rank();
        out.check(
            BigInt::from(nullity) == multiplicity(6, j),
            format!(
                "eigenvalue beta_{j}: nullity {nullity}, multiplicity {}",
                multiplicity(6, j)
            ),
        );
    }

    for n in 1..=200usize {
        let total: BigInt = gelfand_spectrum(n).unwrap().multiplicities.iter().sum();
        out.check(
            total == binomial(2 * n as u64, n as i64),
            format!("multiplicities sum at n={n}"),
        );
    }
    let shown: BigInt = (0..=3).map(|j| multiplicity_uncorrected(6, j)).sum();
    out.check(
        shown != BigInt::from(20),
        "uncorrected multiplicities unexpectedly sum to C(6,3)",
    );
    out.notes
        .push("step matrix powers n<=50, l<=100; N=6 spectrum; multiplicity sums n<=200".into());
}

fn criterion_11(out: &mut Outcome) {
    for n in 1..=6usize {
        let odd = cut_and_riffle_patterns(n, true);
        let even = cut_and_riffle_patterns(n, false);
        out.check(
            odd.len() == 1 << n,
            format!("odd class size n={n}: {}", odd.len()),
        );
        out.check(
            even.len() == 1 << (n - 1),
            format!("even class size n={n}: {}", even.len()),
        );
        out.check(odd.iter().all(in_odd_class), format!("odd predicate n={n}"));

        let start = Word::alternating(n);
        let law = enumerate_exact(start.labels(), 2, DEFAULT_ENUM_BUDGET).unwrap();
        let support: BTreeSet<Word> = law
            .iter()
            .map(|(w, _)| Word::from_labels(w.clone()).unwrap())
            .collect();
        let classes: BTreeSet<Word> = odd.union(&even).cloned().collect();
        out.check(
            support == classes,
            format!("support equals the two pattern classes n={n}"),
        );

        let spec = DeckSpec::red_black(n, n).unwrap();
        let u = ExactQ::new(BigInt::one(), spec.arrangements());
        let report = distance_from_classes(
            Word::all(&spec)
                .into_iter()
                .map(|w| (BigInt::one(), law.prob(&w.labels().to_vec()), u.clone())),
        )
        .unwrap();
        let computed = alternating_two_shuffle(n).unwrap().report;
        out.check(
            computed == report,
            format!("class law equals enumeration n={n}"),
        );
        if n >= 2 {
            out.check(report.sep == ExactQ::one(), format!("SEP = 1 at n={n}"));
        }
        if n >= 3 {
            out.check(
                alternating_tv_closed(n).unwrap() == report.tv,
                format!("closed TV formula n={n}"),
            );
            out.check(
                alternating_tv_uncorrected(n).unwrap() == report.tv,
                format!("uncorrected TV formula n={n}"),
            );
        }
    }
    out.notes.push(format!(
        "TV at n=3: enumeration {}, uncorrected formula {}",
        alternating_tv_closed(3).unwrap(),
        alternating_tv_uncorrected(3).unwrap()
    ));
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<u64>,
    run: fn(&mut Outcome),
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "52 distinct cards (TV, SEP, l-infinity)",
        limit: Some(5),
        run: criterion_1,
    },
    Criterion {
        id: 2,
        title: "single card from the bottom",
        limit: Some(1),
        run: criterion_2,
    },
    Criterion {
        id: 3,
        title: "single card from the middle",
        limit: Some(1),
        run: criterion_3,
    },
    Criterion {
        id: 4,
        title: "separation for five deck types",
        limit: Some(30),
        run: criterion_4,
    },
    Criterion {
        id: 5,
        title: "rule of thumb",
        limit: Some(1),
        run: criterion_5,
    },
    Criterion {
        id: 6,
        title: "red-black total variation",
        limit: Some(60),
        run: criterion_6,
    },
    Criterion {
        id: 7,
        title: "exact formulas equal brute-force enumeration",
        limit: None,
        run: criterion_7,
    },
    Criterion {
        id: 8,
        title: "single-card eigenstructure",
        limit: None,
        run: criterion_8,
    },
    Criterion {
        id: 9,
        title: "bounds containment",
        limit: None,
        run: criterion_9,
    },
    Criterion {
        id: 10,
        title: "random transpositions",
        limit: None,
        run: criterion_10,
    },
    Criterion {
        id: 11,
        title: "alternating deck",
        limit: None,
        run: criterion_11,
    },
];

fn main() -> ExitCode {
    let mut unexpected = 0;
    for &Criterion {
        id,
        title,
        limit,
        run,
    } in CRITERIA
    {
        let mut out = Outcome::default();
        let start = Instant::now();
        run(&mut out);
        let timed = out.timed.unwrap_or_else(|| start.elapsed());
        if let Some(limit) = limit {
            out.check(
                timed.as_secs() < limit,
                format!(
                    "runtime {:.2}s over the {}s limit",
                    timed.as_secs_f64(),
                    limit
                ),
            );
        }
        let known: Vec<&String> = out
            .mismatches
            .iter()
            .filter(|m| KNOWN.contains(&(id, m.as_str())))
            .collect();
        let other: Vec<&String> = out
            .mismatches
            .iter()
            .filter(|m| !KNOWN.contains(&(id, m.as_str())))
            .collect();
        let status = if !other.is_empty() {
            unexpected += 1;
            "FAIL"
        } else if !known.is_empty() {
            "FAIL (known)"
        } else {
            "PASS"
        };
        println!(
            "criterion {id}: {title}: {status} [{:.2}s]",
            timed.as_secs_f64()
        );
        for note in &out.notes {
            println!("    {note}");
        }
        if !known.is_empty() {
            println!(
                "    known discrepancies: {}",
                known
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join("; ")
            );
        }
        for m in other.iter().take(10) {
            println!("    unexpected: {m}");
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion(s) failed unexpectedly");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
