use std::fmt;

use goldbach_gtp::partitions::MIN_ODD;

/// Inclusive range of odd numbers parsed from `lo..hi` or a single `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddRange {
    pub lo: u64,
    pub hi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeError(pub String);

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn parse_bound(s: &str) -> Result<u64, RangeError> {
    s.trim()
        .parse()
        .map_err(|_| RangeError(format!("invalid number {s:?}")))
}

impl OddRange {
    /// Parses and snaps the bounds inward to odd numbers `>= 7`, returning a
    /// warning for each adjusted bound.
    pub fn parse(s: &str) -> Result<(Self, Vec<String>), RangeError> {
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse_bound(a)?, parse_bound(b.trim_start_matches('='))?),
            None => {
                let n = parse_bound(s)?;
                (n, n)
            }
        };
        let mut warnings = Vec::new();
        let mut snapped_lo = lo.max(MIN_ODD);
        if snapped_lo % 2 == 0 {
            snapped_lo += 1;
        }
        let snapped_hi = if hi % 2 == 0 { hi.saturating_sub(1) } else { hi };
        if snapped_lo != lo {
            warnings.push(format!("lower bound {lo} snapped to {snapped_lo}"));
        }
        if snapped_hi != hi {
            warnings.push(format!("upper bound {hi} snapped to {snapped_hi}"));
        }
        if snapped_lo > snapped_hi {
            return Err(RangeError(format!("range {s:?} contains no odd number >= {MIN_ODD}")));
        }
        Ok((
            Self {
                lo: snapped_lo,
                hi: snapped_hi,
            },
            warnings,
        ))
    }
}
