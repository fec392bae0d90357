//! Three-prime (Goldbach) partitions of odd numbers.
//!
//! Partitions are unordered multisets: repetition is allowed and the prime 2
//! participates, so `9` has the two partitions `2+2+5` and `3+3+3`.

use rayon::prelude::*;
use std::fmt;
use thiserror::Error;

use crate::primes::PrimeTable;

/// Smallest odd number that is a sum of three primes (`2+2+3`).
pub const MIN_ODD: u64 = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("{0} is even; Goldbach triples are defined for odd numbers")]
    Even(u64),
    #[error("{0} is below the minimum odd number {MIN_ODD}")]
    BelowMinimum(u64),
    #[error("prime table limit {limit} is smaller than {n}")]
    TableTooSmall { n: u64, limit: u64 },
    #[error("empty range: {lo} > {hi}")]
    EmptyRange { lo: u64, hi: u64 },
}

/// A sorted triple `p1 <= p2 <= p3` of primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoldbachTriple {
    p1: u64,
    p2: u64,
    p3: u64,
}

impl GoldbachTriple {
    /// Sorts the three primes and checks they form a triple of an odd number.
    pub fn new(a: u64, b: u64, c: u64, table: &PrimeTable) -> Option<Self> {
        let mut parts = [a, b, c];
        parts.sort_unstable();
        let [p1, p2, p3] = parts;
        let n = p1.checked_add(p2)?.checked_add(p3)?;
        let all_prime = parts.iter().all(|&p| table.is_prime(p).unwrap_or(false));
        (all_prime && n % 2 == 1).then_some(Self { p1, p2, p3 })
    }

    pub fn parts(&self) -> [u64; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn n(&self) -> u64 {
        self.p1 + self.p2 + self.p3
    }

    /// Whether the three primes can be the sides of a triangle: the largest
    /// is strictly less than the sum of the other two.
    pub fn is_triangular(&self) -> bool {
        self.p3 < self.p1 + self.p2
    }
}

impl fmt::Display for GoldbachTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}+{}", self.p1, self.p2, self.p3)
    }
}

pub fn is_triangular(triple: &GoldbachTriple) -> bool {
    triple.is_triangular()
}

fn check_n(n: u64, table: &PrimeTable) -> Result<(), PartitionError> {
    if n.is_multiple_of(2) {
        return Err(PartitionError::Even(n));
    }
    if n < MIN_ODD {
        return Err(PartitionError::BelowMinimum(n));
    }
    if table.limit() < n {
        return Err(PartitionError::TableTooSmall {
            n,
            limit: table.limit(),
        });
    }
    Ok(())
}

/// Calls `visit` for every triple of `n` in lexicographic order.
fn for_each_triple(n: u64, table: &PrimeTable, mut visit: impl FnMut(GoldbachTriple)) {
    let primes = table.primes();
    for (i, &p1) in primes.iter().enumerate() {
        if 3 * p1 > n {
            break;
        }
        let rest = n - p1;
        for &p2 in &primes[i..] {
            if 2 * p2 > rest {
                break;
            }
            let p3 = rest - p2;
            if table.contains(p3) {
                visit(GoldbachTriple { p1, p2, p3 });
            }
        }
    }
}

/// Every Goldbach triple of `n`, each multiset once, in lexicographic order.
pub fn enumerate_triples(
    n: u64,
    table: &PrimeTable,
) -> Result<Vec<GoldbachTriple>, PartitionError> {
    check_n(n, table)?;
    let mut out = Vec::new();
    for_each_triple(n, table, |t| out.push(t));
    Ok(out)
}

/// Triangular subset of [`enumerate_triples`].
pub fn enumerate_triangular(
    n: u64,
    table: &PrimeTable,
) -> Result<Vec<GoldbachTriple>, PartitionError> {
    check_n(n, table)?;
    let mut out = Vec::new();
    for_each_triple(n, table, |t| {
        if t.is_triangular() {
            out.push(t)
        }
    });
    Ok(out)
}

/// Number of Goldbach triples of `n`.
///
/// Counts pairs with a two-pointer sweep over the prime list for each
/// smallest element instead of materializing triples.
pub fn count_triples(n: u64, table: &PrimeTable) -> Result<u64, PartitionError> {
    check_n(n, table)?;
    Ok(count_with(n, table, |_, _| true))
}

/// Number of triangular Goldbach triples of `n`.
pub fn count_triangular(n: u64, table: &PrimeTable) -> Result<u64, PartitionError> {
    check_n(n, table)?;
    // p3 < p1 + p2
    Ok(count_with(n, table, |p1, p2| n - p1 - p2 < p1 + p2))
}

/// Two-pointer count of `p1 <= p2 <= p3`, `p1 + p2 + p3 = n`, filtered by
/// `keep(p1, p2)`.
fn count_with(n: u64, table: &PrimeTable, keep: impl Fn(u64, u64) -> bool) -> u64 {
    let primes = table.primes_up_to(n);
    let mut count = 0;
    for (i, &p1) in primes.iter().enumerate() {
        if 3 * p1 > n {
            break;
        }
        let target = n - p1;
        let (mut lo, mut hi) = (i, primes.len() - 1);
        while lo <= hi {
            let sum = primes[lo] + primes[hi];
            if sum == target {
                if keep(p1, primes[lo]) {
                    count += 1;
                }
                lo += 1;
                if hi == 0 {
                    break;
                }
                hi -= 1;
            } else if sum < target {
                lo += 1;
            } else {
                if hi == 0 {
                    break;
                }
                hi -= 1;
            }
        }
    }
    count
}

/// Partition counts for one odd number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionCensus {
    pub n: u64,
    /// Unrestricted triple count.
    pub g: u64,
    /// Triangular triple count.
    pub t: u64,
    pub parity_g: i8,
    pub parity_t: i8,
}

/// `+1` for an odd count, `-1` for an even one.
pub fn parity_code(count: u64) -> i8 {
    if count % 2 == 1 {
        1
    } else {
        -1
    }
}

impl PartitionCensus {
    pub fn compute(n: u64, table: &PrimeTable) -> Result<Self, PartitionError> {
        let g = count_triples(n, table)?;
        let t = count_triangular(n, table)?;
        Ok(Self {
            n,
            g,
            t,
            parity_g: parity_code(g),
            parity_t: parity_code(t),
        })
    }
}

/// Census of every odd `n` in `[lo, hi]`, ascending.
pub fn census_range(
    lo: u64,
    hi: u64,
    table: &PrimeTable,
) -> Result<Vec<PartitionCensus>, PartitionError> {
    if lo > hi {
        return Err(PartitionError::EmptyRange { lo, hi });
    }
    check_n(lo, table)?;
    check_n(hi, table)?;
    (lo..=hi)
        .step_by(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| PartitionCensus::compute(n, table))
        .collect()
}
