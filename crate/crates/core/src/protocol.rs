//! The Goldbach Triples key-distribution protocol.
//!
//! A certification authority (CA) holds a hash `h(K)` of each party's secret
//! key. To connect an initiator and a responder it splits a random odd `N`
//! into three primes `P1 + P2 + P3 = N` and sends:
//!
//! | step | to initiator | to responder |
//! |------|--------------|--------------|
//! | 1    | `P1 ^ h(Ka)` | `P2 ^ h(Kb)` |
//! | 2    | `P1 ^ P3`    | `P2 ^ P3`    |
//!
//! Each party XORs its two messages with its own `h(K)` to recover `P3`, the
//! session key. An eavesdropper holding both step-2 messages only learns
//! `P1 ^ P2`.
//!
//! `h(K)` is reused as an XOR pad in every session a party takes part in.
//! Anyone who learns one session key together with that session's step-1
//! message recovers the pad, so this module models the protocol and makes
//! no stronger security claim.
//!
//! Every function here is pure. Randomness comes from a caller-supplied
//! [`rand::Rng`] so sessions are reproducible under a seed.

use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

use crate::partitions::{enumerate_triples, PartitionError, MIN_ODD};
use crate::primes::PrimeTable;

/// Widest supported word.
pub const MAX_WIDTH: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: u32, right: u32 },
    #[error("invalid width {0}; must be 1..={MAX_WIDTH}")]
    InvalidWidth(u32),
    #[error("value {value} does not fit in {width} bits")]
    ValueTooWide { value: u64, width: u32 },
    #[error("hash of {bits} bits is shorter than requested width {width}")]
    HashTooShort { bits: usize, width: u32 },
    #[error("party {0} is not registered")]
    Unregistered(PartyId),
    #[error("party {0} is already registered")]
    DuplicateParty(PartyId),
    #[error("invalid party id {0:?}")]
    InvalidPartyId(String),
    #[error("initiator and responder are both {0}")]
    SameParty(PartyId),
    #[error("{0} has no Goldbach triple")]
    NoTriple(u64),
    #[error("shares {shares:?} are not a Goldbach triple of {n}")]
    NotATriple { n: u64, shares: [u64; 3] },
    #[error("range [{lo}, {hi}] contains no odd number >= {MIN_ODD}")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("width override {requested} is smaller than the {required} bits the shares need")]
    WidthTooSmall { requested: u32, required: u32 },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Number of bits needed to write `value` (at least 1).
pub fn bit_length(value: u64) -> u32 {
    (u64::BITS - value.leading_zeros()).max(1)
}

/// A fixed-width unsigned word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitWord {
    value: u64,
    width: u32,
}

impl BitWord {
    pub fn new(value: u64, width: u32) -> Result<Self, ProtocolError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(ProtocolError::InvalidWidth(width));
        }
        if width < MAX_WIDTH && value >> width != 0 {
            return Err(ProtocolError::ValueTooWide { value, width });
        }
        Ok(Self { value, width })
    }

    pub fn zero(width: u32) -> Result<Self, ProtocolError> {
        Self::new(0, width)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Same value with bit `bit` (0 = least significant) inverted.
    pub fn flip_bit(&self, bit: u32) -> Option<Self> {
        (bit < self.width).then(|| Self {
            value: self.value ^ (1 << bit),
            width: self.width,
        })
    }

    pub fn xor(&self, other: &BitWord) -> Result<BitWord, ProtocolError> {
        xor_mask(*self, *other)
    }
}

/// Zero-padded binary at the word's width, most significant bit first.
impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width as usize)
    }
}

/// Bitwise XOR of two equal-width words.
pub fn xor_mask(a: BitWord, b: BitWord) -> Result<BitWord, ProtocolError> {
    if a.width != b.width {
        return Err(ProtocolError::WidthMismatch {
            left: a.width,
            right: b.width,
        });
    }
    Ok(BitWord {
        value: a.value ^ b.value,
        width: a.width,
    })
}

/// The low `width` bits of `full_hash`, reading the byte string as a
/// big-endian integer (the last byte holds the least significant bits).
pub fn truncate_hash(full_hash: &[u8], width: u32) -> Result<BitWord, ProtocolError> {
    if width == 0 || width > MAX_WIDTH {
        return Err(ProtocolError::InvalidWidth(width));
    }
    let bits = full_hash.len() * 8;
    if bits < width as usize {
        return Err(ProtocolError::HashTooShort { bits, width });
    }
    let tail = &full_hash[full_hash.len().saturating_sub(8)..];
    let value = tail.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b));
    let mask = if width == MAX_WIDTH {
        u64::MAX
    } else {
        (1 << width) - 1
    };
    BitWord::new(value & mask, width)
}

/// Hash applied to a party's key material at registration.
pub trait KeyHasher {
    fn hash_key(&self, key: &[u8]) -> Vec<u8>;
}

/// SHA-256, the default key hash.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sha256Hasher;

impl KeyHasher for Sha256Hasher {
    fn hash_key(&self, key: &[u8]) -> Vec<u8> {
        Sha256::digest(key).to_vec()
    }
}

/// Party identifier. Restricted to `[A-Za-z0-9_.-]` so it can be written
/// unescaped into audit log lines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartyId(String);

impl PartyId {
    pub fn new(id: impl Into<String>) -> Result<Self, ProtocolError> {
        let id = id.into();
        let valid = !id.is_empty()
            && id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'));
        if valid {
            Ok(Self(id))
        } else {
            Err(ProtocolError::InvalidPartyId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A party's registered key hash, kept at full length and truncated to the
/// session width when used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registration {
    pub party_id: PartyId,
    key_hash: Vec<u8>,
}

impl Registration {
    pub fn key_hash_bytes(&self) -> &[u8] {
        &self.key_hash
    }

    pub fn hash_at(&self, width: u32) -> Result<BitWord, ProtocolError> {
        truncate_hash(&self.key_hash, width)
    }
}

/// Key hashes the CA holds, keyed by party.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<PartyId, Registration>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `key` hashed with `hasher`.
    pub fn register_key(
        &mut self,
        party: PartyId,
        key: &[u8],
        hasher: &impl KeyHasher,
    ) -> Result<(), ProtocolError> {
        let hash = hasher.hash_key(key);
        self.register_hash(party, hash)
    }

    /// Registers a precomputed key hash.
    pub fn register_hash(&mut self, party: PartyId, key_hash: Vec<u8>) -> Result<(), ProtocolError> {
        if self.entries.contains_key(&party) {
            return Err(ProtocolError::DuplicateParty(party));
        }
        self.entries.insert(
            party.clone(),
            Registration {
                party_id: party,
                key_hash,
            },
        );
        Ok(())
    }

    pub fn get(&self, party: &PartyId) -> Result<&Registration, ProtocolError> {
        self.entries
            .get(party)
            .ok_or_else(|| ProtocolError::Unregistered(party.clone()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Where the CA gets `N` from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NSource {
    Explicit(u64),
    /// Uniform over the odd numbers `>= 7` in `[lo, hi]`.
    Random { lo: u64, hi: u64 },
}

impl NSource {
    /// Largest `N` this source can produce.
    pub fn upper_bound(&self) -> u64 {
        match *self {
            NSource::Explicit(n) => n,
            NSource::Random { hi, .. } => hi,
        }
    }

    fn resolve(&self, rng: &mut impl Rng) -> Result<u64, ProtocolError> {
        match *self {
            NSource::Explicit(n) => Ok(n),
            NSource::Random { lo, hi } => {
                let lo_odd = lo.max(MIN_ODD) | 1;
                let hi_odd = if hi % 2 == 0 { hi.saturating_sub(1) } else { hi };
                if lo_odd > hi_odd {
                    return Err(ProtocolError::EmptyRange { lo, hi });
                }
                let slots = (hi_odd - lo_odd) / 2;
                Ok(lo_odd + 2 * rng.random_range(0..=slots))
            }
        }
    }
}

/// How the CA picks and orders the three shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShareChoice {
    /// Uniform triple of `N`, then a uniform assignment of its primes to
    /// the `P1`, `P2`, `P3` roles.
    Random,
    /// Shares in role order `[P1, P2, P3]`; must be a triple of `N`.
    Fixed([u64; 3]),
}

/// Everything the CA needs to open a session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionRequest {
    pub session_id: u64,
    pub initiator: PartyId,
    pub responder: PartyId,
    pub n_source: NSource,
    pub shares: ShareChoice,
    pub width_override: Option<u32>,
    pub nonce: Option<u64>,
    pub timestamp: u64,
}

/// The CA's private view of a session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionSetup {
    pub session_id: u64,
    pub n: u64,
    /// Initiator's cover prime.
    pub p1: BitWord,
    /// Responder's cover prime.
    pub p2: BitWord,
    /// Session key.
    pub p3: BitWord,
    pub width: u32,
    pub initiator: PartyId,
    pub responder: PartyId,
    pub nonce: Option<u64>,
}

impl SessionSetup {
    pub fn shares(&self) -> [u64; 3] {
        [self.p1.value, self.p2.value, self.p3.value]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// CA to initiator: `P1 ^ h(Ka)`.
    OneA,
    /// CA to responder: `P2 ^ h(Kb)`.
    OneB,
    /// CA to initiator: `P1 ^ P3`.
    TwoA,
    /// CA to responder: `P2 ^ P3`.
    TwoB,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::OneA, Step::OneB, Step::TwoA, Step::TwoB];

    pub fn code(self) -> u8 {
        match self {
            Step::OneA => 0x1A,
            Step::OneB => 0x1B,
            Step::TwoA => 0x2A,
            Step::TwoB => 0x2B,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Step::ALL.into_iter().find(|s| s.code() == code)
    }

    pub fn label(self) -> &'static str {
        match self {
            Step::OneA => "1a",
            Step::OneB => "1b",
            Step::TwoA => "2a",
            Step::TwoB => "2b",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Step::ALL
            .into_iter()
            .find(|s| s.label().eq_ignore_ascii_case(label))
    }

    /// Whether the message goes to the initiator.
    pub fn to_initiator(self) -> bool {
        matches!(self, Step::OneA | Step::TwoA)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GtpMessage {
    pub session_id: u64,
    pub step: Step,
    pub payload: BitWord,
    pub nonce: Option<u64>,
}

/// The stored record tying a session key to the partition it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRecord {
    pub session_id: u64,
    pub n: u64,
    pub p1: u64,
    pub p2: u64,
    pub p3: u64,
    pub width: u32,
    pub initiator: PartyId,
    pub responder: PartyId,
    pub timestamp: u64,
}

fn is_triple_of(n: u64, shares: [u64; 3], table: &PrimeTable) -> bool {
    shares.iter().try_fold(0u64, |acc, &p| acc.checked_add(p)) == Some(n)
        && shares.iter().all(|&p| table.is_prime(p).unwrap_or(false))
}

/// Opens a session: resolves `N`, picks the shares and fixes the width.
///
/// `table` must cover the largest `N` the request can resolve to.
pub fn ca_create_session(
    request: &SessionRequest,
    registry: &Registry,
    table: &PrimeTable,
    rng: &mut impl Rng,
) -> Result<(SessionSetup, AuditRecord), ProtocolError> {
    registry.get(&request.initiator)?;
    registry.get(&request.responder)?;
    if request.initiator == request.responder {
        return Err(ProtocolError::SameParty(request.initiator.clone()));
    }
    let n = request.n_source.resolve(rng)?;
    let shares = match request.shares {
        ShareChoice::Fixed(shares) => {
            if n % 2 == 0 || !is_triple_of(n, shares, table) {
                return Err(ProtocolError::NotATriple { n, shares });
            }
            shares
        }
        ShareChoice::Random => {
            let triples = enumerate_triples(n, table)?;
            if triples.is_empty() {
                return Err(ProtocolError::NoTriple(n));
            }
            let mut shares = triples[rng.random_range(0..triples.len())].parts();
            shares.shuffle(rng);
            shares
        }
    };
    let required = shares.iter().map(|&p| bit_length(p)).max().unwrap_or(1);
    let width = match request.width_override {
        Some(w) if w < required => {
            return Err(ProtocolError::WidthTooSmall {
                requested: w,
                required,
            })
        }
        Some(w) => w,
        None => required,
    };
    let [p1, p2, p3] = shares;
    let setup = SessionSetup {
        session_id: request.session_id,
        n,
        p1: BitWord::new(p1, width)?,
        p2: BitWord::new(p2, width)?,
        p3: BitWord::new(p3, width)?,
        width,
        initiator: request.initiator.clone(),
        responder: request.responder.clone(),
        nonce: request.nonce,
    };
    let record = AuditRecord {
        session_id: request.session_id,
        n,
        p1,
        p2,
        p3,
        width,
        initiator: request.initiator.clone(),
        responder: request.responder.clone(),
        timestamp: request.timestamp,
    };
    Ok((setup, record))
}

fn message(setup: &SessionSetup, step: Step, payload: BitWord) -> GtpMessage {
    GtpMessage {
        session_id: setup.session_id,
        step,
        payload,
        nonce: setup.nonce,
    }
}

/// Step 1: each party's cover prime masked with its key hash.
pub fn ca_step1(
    setup: &SessionSetup,
    registry: &Registry,
) -> Result<(GtpMessage, GtpMessage), ProtocolError> {
    let ha = registry.get(&setup.initiator)?.hash_at(setup.width)?;
    let hb = registry.get(&setup.responder)?.hash_at(setup.width)?;
    Ok((
        message(setup, Step::OneA, xor_mask(setup.p1, ha)?),
        message(setup, Step::OneB, xor_mask(setup.p2, hb)?),
    ))
}

/// Step 2: the session key masked with each party's cover prime.
pub fn ca_step2(setup: &SessionSetup) -> Result<(GtpMessage, GtpMessage), ProtocolError> {
    Ok((
        message(setup, Step::TwoA, xor_mask(setup.p1, setup.p3)?),
        message(setup, Step::TwoB, xor_mask(setup.p2, setup.p3)?),
    ))
}

/// `m1 ^ m2 ^ h(K)`, which is `P3` for honest messages.
pub fn party_derive_key(
    m_step1: BitWord,
    m_step2: BitWord,
    own_key_hash: BitWord,
) -> Result<BitWord, ProtocolError> {
    xor_mask(xor_mask(m_step1, m_step2)?, own_key_hash)
}

/// What a passive listener on both links gets from the step-2 messages:
/// `P1 ^ P2`, with no dependence on `P3`.
pub fn eavesdropper_combine(m2a: BitWord, m2b: BitWord) -> Result<BitWord, ProtocolError> {
    xor_mask(m2a, m2b)
}

/// A reason an audit record fails verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditIssue {
    EvenN(u64),
    SumMismatch { sum: u128, n: u64 },
    NotPrime { role: &'static str, value: u64 },
    /// Value is above the prime table used for checking.
    Unverifiable { role: &'static str, value: u64 },
    InvalidWidth(u32),
    ShareTooWide { role: &'static str, value: u64, width: u32 },
}

impl fmt::Display for AuditIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditIssue::EvenN(n) => write!(f, "n even ({n})"),
            AuditIssue::SumMismatch { sum, n } => write!(f, "sum mismatch: p1+p2+p3={sum} != n={n}"),
            AuditIssue::NotPrime { role, value } => write!(f, "{role}={value} not prime"),
            AuditIssue::Unverifiable { role, value } => {
                write!(f, "{role}={value} beyond prime table")
            }
            AuditIssue::InvalidWidth(w) => write!(f, "invalid width {w}"),
            AuditIssue::ShareTooWide { role, value, width } => {
                write!(f, "{role}={value} does not fit in {width} bits")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditVerdict {
    pub issues: Vec<AuditIssue>,
}

impl AuditVerdict {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks that the recorded shares are primes summing to an odd `n` and fit
/// the recorded width.
pub fn verify_audit(record: &AuditRecord, table: &PrimeTable) -> AuditVerdict {
    let mut issues = Vec::new();
    if record.n.is_multiple_of(2) {
        issues.push(AuditIssue::EvenN(record.n));
    }
    let sum = u128::from(record.p1) + u128::from(record.p2) + u128::from(record.p3);
    if sum != u128::from(record.n) {
        issues.push(AuditIssue::SumMismatch { sum, n: record.n });
    }
    let width_ok = (1..=MAX_WIDTH).contains(&record.width);
    if !width_ok {
        issues.push(AuditIssue::InvalidWidth(record.width));
    }
    for (role, value) in [("p1", record.p1), ("p2", record.p2), ("p3", record.p3)] {
        match table.is_prime(value) {
            Ok(true) => {}
            Ok(false) => issues.push(AuditIssue::NotPrime { role, value }),
            Err(_) => issues.push(AuditIssue::Unverifiable { role, value }),
        }
        if width_ok && BitWord::new(value, record.width).is_err() {
            issues.push(AuditIssue::ShareTooWide {
                role,
                value,
                width: record.width,
            });
        }
    }
    AuditVerdict { issues }
}
