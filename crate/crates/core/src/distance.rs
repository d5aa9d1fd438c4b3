//! Total variation, separation and l∞ distances between finite laws.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::ExactQ;
use crate::error::{Error, Result};

/// A probability law on finitely many states, stored in support order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDist<S> {
    support: Vec<S>,
    mass: Vec<ExactQ>,
}

impl<S: Ord + Clone + fmt::Debug> FiniteDist<S> {
    /// Builds a law, checking non-negativity, distinct states and unit total.
    pub fn new(support: Vec<S>, mass: Vec<ExactQ>) -> Result<Self> {
        if support.len() != mass.len() {
            return Err(Error::InvalidArgument(format!(
                "{} states but {} masses",
                support.len(),
                mass.len()
            )));
        }
        if let Some(m) = mass.iter().find(|m| m.is_negative()) {
            return Err(Error::InvalidArgument(format!("negative mass {m}")));
        }
        let total: ExactQ = mass.iter().sum();
        if total != ExactQ::one() {
            return Err(Error::InvalidArgument(format!(
                "masses sum to {total}, not 1"
            )));
        }
        let mut seen: Vec<&S> = support.iter().collect();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("repeated state in support".into()));
        }
        Ok(FiniteDist { support, mass })
    }

    pub fn from_map(map: BTreeMap<S, ExactQ>) -> Result<Self> {
        let (support, mass) = map.into_iter().unzip();
        FiniteDist::new(support, mass)
    }

    pub fn uniform(support: Vec<S>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidArgument("uniform law on an empty set".into()));
        }
        let u = ExactQ::new(1, support.len() as u64);
        let mass = vec![u; support.len()];
        FiniteDist::new(support, mass)
    }

    pub fn point_mass(support: Vec<S>, at: &S) -> Result<Self> {
        let mass = support
            .iter()
            .map(|s| {
                if s == at {
                    ExactQ::one()
                } else {
                    ExactQ::zero()
                }
            })
            .collect();
        FiniteDist::new(support, mass)
    }

    pub fn support(&self) -> &[S] {
        &self.support
    }

    pub fn masses(&self) -> &[ExactQ] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &ExactQ)> {
        self.support.iter().zip(self.mass.iter())
    }

    pub fn prob(&self, s: &S) -> ExactQ {
        self.iter()
            .find(|(t, _)| *t == s)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(ExactQ::zero)
    }

    pub fn to_map(&self) -> BTreeMap<S, ExactQ> {
        self.iter().map(|(s, m)| (s.clone(), m.clone())).collect()
    }
}

/// Exact `(TV, SEP, l∞)` of a law against a reference (usually uniform).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub tv: ExactQ,
    pub sep: ExactQ,
    pub linf: ExactQ,
}

impl DistanceReport {
    pub fn zero() -> Self {
        DistanceReport {
            tv: ExactQ::zero(),
            sep: ExactQ::zero(),
            linf: ExactQ::zero(),
        }
    }

    pub fn get(&self, metric: Metric) -> &ExactQ {
        match metric {
            Metric::Tv => &self.tv,
            Metric::Sep => &self.sep,
            Metric::Linf => &self.linf,
        }
    }

    /// JSON object with decimal and exact renderings of each metric.
    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        let cell = |q: &ExactQ| serde_json::json!({ "decimal": q.to_decimal(digits), "exact": q.to_exact_string() });
        serde_json::json!({
            "tv": cell(&self.tv),
            "sep": cell(&self.sep),
            "linf": cell(&self.linf),
        })
    }
}

impl Serialize for DistanceReport {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let mut map = s.serialize_map(Some(3))?;
        for metric in Metric::ALL {
            let q = self.get(metric);
            let mut cell = BTreeMap::new();
            cell.insert("decimal", q.to_decimal(3));
            cell.insert("exact", q.to_exact_string());
            map.serialize_entry(metric.name(), &cell)?;
        }
        map.end()
    }
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tv={} sep={} linf={}",
            self.tv.to_decimal(3),
            self.sep.to_decimal(3),
            self.linf.to_decimal(3)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Tv,
    Sep,
    Linf,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Tv, Metric::Sep, Metric::Linf];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Tv => "tv",
            Metric::Sep => "sep",
            Metric::Linf => "linf",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tv" => Ok(Metric::Tv),
            "sep" => Ok(Metric::Sep),
            "linf" => Ok(Metric::Linf),
            _ => Err(Error::Parse(format!("unknown metric {s:?}"))),
        }
    }
}

/// Distances of `p` from `u`. Both laws must list the same states.
pub fn distance_report<S: Ord + Clone + fmt::Debug>(
    p: &FiniteDist<S>,
    u: &FiniteDist<S>,
) -> Result<DistanceReport> {
    let pm = p.to_map();
    let um = u.to_map();
    if pm.len() != um.len() || pm.keys().zip(um.keys()).any(|(a, b)| a != b) {
        return Err(Error::SupportMismatch(format!(
            "{} states against {} states",
            pm.len(),
            um.len()
        )));
    }
    distance_from_classes(
        pm.values()
            .zip(um.values())
            .map(|(pv, uv)| (BigInt::one(), pv.clone(), uv.clone())),
    )
}

/// Distances from classes of states sharing a probability: each item is
/// `(number of states, p-mass of one state, u-mass of one state)`.
pub fn distance_from_classes(
    classes: impl IntoIterator<Item = (BigInt, ExactQ, ExactQ)>,
) -> Result<DistanceReport> {
    let mut l1 = ExactQ::zero();
    let mut sep: Option<ExactQ> = None;
    let mut linf = ExactQ::zero();
    for (count, p, u) in classes {
        if count.is_zero() {
            continue;
        }
        if u.is_zero() {
            return Err(Error::InvalidArgument(
                "reference law has a zero-mass state".into(),
            ));
        }
        let dev = ExactQ::one() - &p / &u;
        l1 += ExactQ::from(count) * (&p - &u).abs();
        linf = linf.max(dev.abs());
        sep = Some(match sep {
            Some(s) => s.max(dev),
            None => dev,
        });
    }
    let sep = sep.ok_or_else(|| Error::InvalidArgument("no states".into()))?;
    Ok(DistanceReport {
        tv: l1 / ExactQ::from(2i64),
        sep,
        linf,
    })
}
