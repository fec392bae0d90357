//! Sieve of Eratosthenes and primality lookups.
//!
//! A [`PrimeTable`] is built once for an inclusive limit and is immutable
//! afterwards, so it can be shared freely between threads.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("query {value} exceeds prime table limit {limit}")]
    OutOfRange { value: u64, limit: u64 },
}

/// Primes up to an inclusive limit, with constant-time membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    composite: Vec<bool>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Ascending list of every prime `<= limit`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primality of `q`. Queries above the table limit are an error rather
    /// than a silent `false`.
    pub fn is_prime(&self, q: u64) -> Result<bool, PrimeError> {
        if q > self.limit {
            return Err(PrimeError::OutOfRange {
                value: q,
                limit: self.limit,
            });
        }
        Ok(self.contains(q))
    }

    /// Unchecked membership for callers that already validated the range.
    #[inline]
    pub(crate) fn contains(&self, q: u64) -> bool {
        q >= 2 && q <= self.limit && !self.composite[q as usize]
    }

    /// Primes `<= bound` (clamped to the table limit).
    pub fn primes_up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }
}

/// Builds the table of primes `<= limit`.
pub fn sieve_up_to(limit: u64) -> PrimeTable {
    let size = limit as usize + 1;
    let mut composite = vec![false; size];
    composite[0] = true;
    if size > 1 {
        composite[1] = true;
    }
    let mut i = 2usize;
    while i * i < size {
        if !composite[i] {
            for multiple in (i * i..size).step_by(i) {
                composite[multiple] = true;
            }
        }
        i += 1;
    }
    let primes = composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(q, _)| q as u64)
        .collect();
    PrimeTable {
        limit,
        primes,
        composite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(q: u64) -> bool {
        if q < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= q {
            if q.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn tiny_limits_have_no_primes() {
        assert!(sieve_up_to(0).is_empty());
        assert!(sieve_up_to(1).is_empty());
        assert_eq!(sieve_up_to(2).primes(), &[2]);
    }

    #[test]
    fn primes_to_ten() {
        assert_eq!(sieve_up_to(10).primes(), &[2, 3, 5, 7]);
    }

    #[test]
    fn primes_to_hundred() {
        let table = sieve_up_to(100);
        let oracle: Vec<u64> = (0..=100).filter(|&q| trial_division(q)).collect();
        assert_eq!(table.len(), 25);
        assert_eq!(table.primes().last(), Some(&97));
        assert_eq!(table.primes(), oracle.as_slice());
    }

    #[test]
    fn membership_queries() {
        let t10 = sieve_up_to(10);
        assert_eq!(t10.is_prime(2), Ok(true));
        assert_eq!(t10.is_prime(9), Ok(false));
        assert_eq!(t10.is_prime(0), Ok(false));
        assert_eq!(t10.is_prime(1), Ok(false));
        assert_eq!(sieve_up_to(100).is_prime(97), Ok(true));
    }

    #[test]
    fn out_of_range_is_reported() {
        assert_eq!(
            sieve_up_to(10).is_prime(11),
            Err(PrimeError::OutOfRange { value: 11, limit: 10 })
        );
    }

    #[test]
    fn agrees_with_trial_division_to_1e5() {
        let table = sieve_up_to(100_000);
        for q in 0..=100_000 {
            assert_eq!(table.is_prime(q).unwrap(), trial_division(q), "q = {q}");
        }
    }

    #[test]
    fn primes_up_to_clamps() {
        let t = sieve_up_to(30);
        assert_eq!(t.primes_up_to(12), &[2, 3, 5, 7, 11]);
        assert_eq!(t.primes_up_to(1), &[] as &[u64]);
        assert_eq!(t.primes_up_to(1000).len(), t.len());
    }

    proptest! {
        #[test]
        fn smaller_sieve_is_prefix(a in 0u64..5000, b in 0u64..5000) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let small = sieve_up_to(lo);
            let large = sieve_up_to(hi);
            prop_assert!(large.primes().starts_with(small.primes()));
        }
    }
}
