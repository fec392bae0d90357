//! Goldbach triples of odd numbers and a key-distribution protocol built on
//! them.
//!
//! - [`primes`]: sieve and primality lookups.
//! - [`partitions`]: enumeration and counting of three-prime partitions,
//!   including the triangular subset.
//! - [`seqanalysis`]: parity sequences, circular autocorrelation, band
//!   inequalities and local extrema of the partition counts.
//! - [`protocol`]: the pure CA/party operations of the Goldbach Triples
//!   Protocol.
//! - [`harness`]: seeded end-to-end sessions, frame codec and audit log.

pub mod harness;
pub mod partitions;
pub mod primes;
pub mod protocol;
pub mod seqanalysis;

pub use partitions::{
    census_range, count_triangular, count_triples, enumerate_triangular, enumerate_triples,
    is_triangular, GoldbachTriple, PartitionCensus, PartitionError,
};
pub use primes::{sieve_up_to, PrimeError, PrimeTable};
