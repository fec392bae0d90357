//! Parity sequences, circular autocorrelation and the band structure of
//! partition counts.

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

use crate::partitions::PartitionCensus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("census is empty")]
    EmptyCensus,
    #[error("census has no entry for n = {0}")]
    MissingCensus(u64),
}

/// Which count of a [`PartitionCensus`] a sequence is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountKind {
    /// `g(n)`, every Goldbach triple.
    Unrestricted,
    /// `t(n)`, triangular triples only.
    Triangular,
}

impl CountKind {
    pub fn select(self, census: &PartitionCensus) -> u64 {
        match self {
            CountKind::Unrestricted => census.g,
            CountKind::Triangular => census.t,
        }
    }
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountKind::Unrestricted => "g",
            CountKind::Triangular => "t",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceOrigin {
    pub kind: CountKind,
    pub first_n: u64,
    pub last_n: u64,
}

/// A non-empty sequence over `{+1, -1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipolarSequence {
    values: Vec<i8>,
    origin: Option<SequenceOrigin>,
}

impl BipolarSequence {
    /// Returns `None` for an empty input or any element other than `±1`.
    pub fn new(values: Vec<i8>) -> Option<Self> {
        if values.is_empty() || values.iter().any(|&v| v != 1 && v != -1) {
            return None;
        }
        Some(Self {
            values,
            origin: None,
        })
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn origin(&self) -> Option<SequenceOrigin> {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `+1` where the selected count is odd, `-1` where it is even.
pub fn parity_sequence(
    census: &[PartitionCensus],
    kind: CountKind,
) -> Result<BipolarSequence, SeqError> {
    let (first, last) = match (census.first(), census.last()) {
        (Some(f), Some(l)) => (f.n, l.n),
        _ => return Err(SeqError::EmptyCensus),
    };
    let values = census
        .iter()
        .map(|c| crate::partitions::parity_code(kind.select(c)))
        .collect();
    Ok(BipolarSequence {
        values,
        origin: Some(SequenceOrigin {
            kind,
            first_n: first,
            last_n: last,
        }),
    })
}

/// Circular autocorrelation stored exactly: `C(k) = sums[k] / period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutocorrelationResult {
    period: usize,
    sums: Vec<i64>,
}

impl AutocorrelationResult {
    pub fn period(&self) -> usize {
        self.period
    }

    /// Integer numerators `Σ_j a_j a_{(j+k) mod n}` for `k = 0..n`.
    pub fn numerators(&self) -> &[i64] {
        &self.sums
    }

    pub fn value(&self, k: usize) -> f64 {
        self.sums[k] as f64 / self.period as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.period).map(|k| self.value(k)).collect()
    }

    /// Largest `|C(k)|` over `1 <= k < n/2`, or `None` when that range is empty.
    pub fn max_off_peak(&self) -> Option<f64> {
        let half = self.period.div_ceil(2);
        self.sums
            .get(1..half)?
            .iter()
            .map(|&s| (s as f64 / self.period as f64).abs())
            .reduce(f64::max)
    }
}

/// `C(k) = (1/n) Σ_{j} a_j a_{(j+k) mod n}` for `k = 0..n-1`.
pub fn autocorrelation(seq: &BipolarSequence) -> AutocorrelationResult {
    let a = &seq.values;
    let n = a.len();
    let sums = (0..n)
        .map(|k| {
            a.iter()
                .zip(a.iter().cycle().skip(k))
                .map(|(&x, &y)| i64::from(x * y))
                .sum()
        })
        .collect();
    AutocorrelationResult { period: n, sums }
}

/// Which of the two band inequalities failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandRule {
    /// `g(6k+3) <= g(6k+7)`
    LowNotAboveNextHigh,
    /// `g(6k+5) >= g(6k+3)`
    HighNotBelowLow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandViolation {
    pub k: u64,
    pub rule: BandRule,
    /// `(n, g(n))` for the lower-band term `6k+3`.
    pub low: (u64, u64),
    /// `(n, g(n))` for the term it was compared with.
    pub other: (u64, u64),
}

impl fmt::Display for BandViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rule {
            BandRule::LowNotAboveNextHigh => "<=",
            BandRule::HighNotBelowLow => ">=",
        };
        let (lhs, rhs) = match self.rule {
            BandRule::LowNotAboveNextHigh => (self.low, self.other),
            BandRule::HighNotBelowLow => (self.other, self.low),
        };
        write!(
            f,
            "k={}: g({})={} {op} g({})={} fails",
            self.k, lhs.0, lhs.1, rhs.0, rhs.1
        )
    }
}

fn g_lookup(census: &[PartitionCensus]) -> BTreeMap<u64, u64> {
    census.iter().map(|c| (c.n, c.g)).collect()
}

/// Checks `g(6k+3) <= g(6k+7)` and `g(6k+5) >= g(6k+3)` for every `k > k_min`
/// whose three terms fall inside the census span.
pub fn check_band_inequalities(
    census: &[PartitionCensus],
    k_min: u64,
) -> Result<Vec<BandViolation>, SeqError> {
    let g = g_lookup(census);
    let (Some(&lo), Some(&hi)) = (g.keys().next(), g.keys().next_back()) else {
        return Ok(Vec::new());
    };
    let fetch = |n: u64| g.get(&n).copied().ok_or(SeqError::MissingCensus(n));
    let mut violations = Vec::new();
    let first_k = (k_min + 1).max(lo.saturating_sub(3).div_ceil(6));
    for k in first_k.. {
        let (n3, n5, n7) = (6 * k + 3, 6 * k + 5, 6 * k + 7);
        if n7 > hi {
            break;
        }
        let (g3, g5, g7) = (fetch(n3)?, fetch(n5)?, fetch(n7)?);
        if g3 > g7 {
            violations.push(BandViolation {
                k,
                rule: BandRule::LowNotAboveNextHigh,
                low: (n3, g3),
                other: (n7, g7),
            });
        }
        if g5 < g3 {
            violations.push(BandViolation {
                k,
                rule: BandRule::HighNotBelowLow,
                low: (n3, g3),
                other: (n5, g5),
            });
        }
    }
    Ok(violations)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extrema {
    pub minima: Vec<u64>,
    pub maxima: Vec<u64>,
}

/// Strict interior local minima and maxima of `g` over a contiguous census.
/// Plateaus produce neither.
pub fn local_extrema(census: &[PartitionCensus]) -> Extrema {
    let mut out = Extrema::default();
    for w in census.windows(3) {
        let (prev, here, next) = (w[0].g, w[1].g, w[2].g);
        if here < prev && here < next {
            out.minima.push(w[1].n);
        } else if here > prev && here > next {
            out.maxima.push(w[1].n);
        }
    }
    out
}

/// Statistics of `g` over one residue class of `n mod 6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueBand {
    pub residue: u64,
    pub count: usize,
    pub mean: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandSummary {
    /// Present classes in residue order (a subset of 1, 3, 5).
    pub classes: Vec<ResidueBand>,
}

impl BandSummary {
    pub fn class(&self, residue: u64) -> Option<&ResidueBand> {
        self.classes.iter().find(|c| c.residue == residue)
    }
}

pub fn band_summary(census: &[PartitionCensus]) -> Result<BandSummary, SeqError> {
    if census.is_empty() {
        return Err(SeqError::EmptyCensus);
    }
    let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for c in census {
        groups.entry(c.n % 6).or_default().push(c.g);
    }
    let classes = groups
        .into_iter()
        .map(|(residue, gs)| ResidueBand {
            residue,
            count: gs.len(),
            mean: gs.iter().sum::<u64>() as f64 / gs.len() as f64,
            min: *gs.iter().min().unwrap(),
            max: *gs.iter().max().unwrap(),
        })
        .collect();
    Ok(BandSummary { classes })
}
