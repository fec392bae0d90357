//! End-to-end session runs: CA, two parties, a passive eavesdropper and an
//! optional in-transit tamperer, all driven from one seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::rc::Rc;
use std::time::{SystemTime, UNIX_EPOCH};
use thiserror::Error;

use super::codec::{decode_message, encode_message, CodecError};
use super::transport::{Link, LinkHook, MemoryTransport, TapSet, Transport};
use crate::primes::PrimeTable;
use crate::protocol::{
    ca_create_session, ca_step1, ca_step2, eavesdropper_combine, party_derive_key, truncate_hash,
    AuditRecord, BitWord, GtpMessage, NSource, PartyId, ProtocolError, Registry, SessionRequest,
    SessionSetup, ShareChoice, Step,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("frame on {link} failed to decode: {error}")]
    Codec { link: Link, error: CodecError },
    #[error("nonce mismatch on step {step}: expected {expected:#x}, got {got:?}")]
    NonceMismatch {
        step: Step,
        expected: u64,
        got: Option<u64>,
    },
    #[error("{party} did not expect step {step}")]
    UnexpectedMessage { party: PartyId, step: Step },
    #[error("message for session {got}, expected {expected}")]
    SessionMismatch { expected: u64, got: u64 },
    #[error("{party} never received step {step}")]
    MissingMessage { party: PartyId, step: Step },
    #[error("eavesdropper combination {got} differs from P1^P2 = {expected}")]
    EavesdropperIdentity { expected: BitWord, got: BitWord },
}

/// Source of audit timestamps (seconds since the Unix epoch).
pub trait Clock {
    fn now(&self) -> u64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> u64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FixedClock(pub u64);

impl Clock for FixedClock {
    fn now(&self) -> u64 {
        self.0
    }
}

/// An in-transit modification of one step's frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tamper {
    /// Invert payload bit `bit` (0 = least significant).
    FlipPayloadBit { step: Step, bit: u32 },
    /// Rewrite the nonce TLV (adding one if absent).
    ReplaceNonce { step: Step, nonce: u64 },
}

impl Tamper {
    fn step(&self) -> Step {
        match *self {
            Tamper::FlipPayloadBit { step, .. } | Tamper::ReplaceNonce { step, .. } => step,
        }
    }

    fn apply(&self, frame: &mut Vec<u8>) {
        let Ok(mut m) = decode_message(frame) else {
            return;
        };
        match *self {
            Tamper::FlipPayloadBit { bit, .. } => {
                if let Some(p) = m.payload.flip_bit(bit) {
                    m.payload = p;
                }
            }
            Tamper::ReplaceNonce { nonce, .. } => m.nonce = Some(nonce),
        }
        *frame = encode_message(&m);
    }
}

struct TamperHook(Vec<Tamper>);

impl LinkHook for TamperHook {
    fn on_frame(&mut self, _: Link, frame: &mut Vec<u8>) {
        let Some(step) = frame.get(10).copied().and_then(Step::from_code) else {
            return;
        };
        for t in self.0.iter().filter(|t| t.step() == step) {
            t.apply(frame);
        }
    }
}

struct TapHook {
    links: TapSet,
    captured: Rc<RefCell<Vec<(Link, Vec<u8>)>>>,
}

impl LinkHook for TapHook {
    fn on_frame(&mut self, link: Link, frame: &mut Vec<u8>) {
        if self.links.covers(link) {
            self.captured.borrow_mut().push((link, frame.clone()));
        }
    }
}

/// Party-side state machine. Step-1 and step-2 messages may arrive in either
/// order; the key is derived once both are in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartyState {
    Waiting {
        masked_cover: Option<BitWord>,
        masked_key: Option<BitWord>,
    },
    Established(BitWord),
}

#[derive(Debug, Clone)]
pub struct Party {
    id: PartyId,
    is_initiator: bool,
    key_hash: Vec<u8>,
    session_id: u64,
    expected_nonce: Option<u64>,
    state: PartyState,
}

impl Party {
    pub fn new(
        id: PartyId,
        is_initiator: bool,
        key_hash: Vec<u8>,
        session_id: u64,
        expected_nonce: Option<u64>,
    ) -> Self {
        Self {
            id,
            is_initiator,
            key_hash,
            session_id,
            expected_nonce,
            state: PartyState::Waiting {
                masked_cover: None,
                masked_key: None,
            },
        }
    }

    pub fn state(&self) -> &PartyState {
        &self.state
    }

    pub fn session_key(&self) -> Option<BitWord> {
        match self.state {
            PartyState::Established(k) => Some(k),
            PartyState::Waiting { .. } => None,
        }
    }

    fn unexpected(&self, step: Step) -> HarnessError {
        HarnessError::UnexpectedMessage {
            party: self.id.clone(),
            step,
        }
    }

    pub fn receive(&mut self, m: &GtpMessage) -> Result<(), HarnessError> {
        if m.session_id != self.session_id {
            return Err(HarnessError::SessionMismatch {
                expected: self.session_id,
                got: m.session_id,
            });
        }
        if m.step.to_initiator() != self.is_initiator {
            return Err(self.unexpected(m.step));
        }
        if let Some(expected) = self.expected_nonce {
            if m.nonce != Some(expected) {
                return Err(HarnessError::NonceMismatch {
                    step: m.step,
                    expected,
                    got: m.nonce,
                });
            }
        }
        let PartyState::Waiting {
            masked_cover,
            masked_key,
        } = &mut self.state
        else {
            return Err(self.unexpected(m.step));
        };
        let slot = match m.step {
            Step::OneA | Step::OneB => &mut *masked_cover,
            Step::TwoA | Step::TwoB => &mut *masked_key,
        };
        if slot.is_some() {
            return Err(HarnessError::UnexpectedMessage {
                party: self.id.clone(),
                step: m.step,
            });
        }
        *slot = Some(m.payload);
        if let (Some(cover), Some(key)) = (*masked_cover, *masked_key) {
            let own = truncate_hash(&self.key_hash, cover.width())?;
            self.state = PartyState::Established(party_derive_key(cover, key, own)?);
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub session_id: u64,
    pub initiator: PartyId,
    pub responder: PartyId,
    pub n_source: NSource,
    pub shares: ShareChoice,
    pub seed: u64,
    pub width: Option<u32>,
    pub nonce_required: bool,
    pub tap: TapSet,
    pub tamper: Vec<Tamper>,
}

impl SessionConfig {
    /// Honest, untapped, nonce-free session with random shares.
    pub fn new(initiator: PartyId, responder: PartyId, n_source: NSource, seed: u64) -> Self {
        Self {
            session_id: seed,
            initiator,
            responder,
            n_source,
            shares: ShareChoice::Random,
            seed,
            width: None,
            nonce_required: false,
            tap: TapSet::NONE,
            tamper: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub link: Link,
    pub message: GtpMessage,
    /// Frame as delivered to the party.
    pub frame: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    /// Both derived keys equal each other and `P3`.
    pub keys_match: bool,
    pub derived_key_a: BitWord,
    pub derived_key_b: BitWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub session_id: u64,
    pub entries: Vec<TranscriptEntry>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn message(&self, step: Step) -> Option<&GtpMessage> {
        self.entries
            .iter()
            .map(|e| &e.message)
            .find(|m| m.step == step)
    }
}

/// What the eavesdropper saw, taken before any tampering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EveView {
    pub links: TapSet,
    pub captured: Vec<(Link, GtpMessage)>,
    /// `m2a ^ m2b` when both step-2 messages were captured.
    pub step2_combination: Option<BitWord>,
}

impl EveView {
    pub fn payload(&self, step: Step) -> Option<BitWord> {
        self.captured
            .iter()
            .find(|(_, m)| m.step == step)
            .map(|(_, m)| m.payload)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionRun {
    pub setup: SessionSetup,
    pub transcript: Transcript,
    pub audit: AuditRecord,
    pub eve: EveView,
}

fn deliver(
    transport: &mut MemoryTransport,
    link: Link,
    party: &mut Party,
    entries: &mut Vec<TranscriptEntry>,
) -> Result<(), HarnessError> {
    while let Some(frame) = transport.recv(link) {
        let message = decode_message(&frame).map_err(|error| HarnessError::Codec { link, error })?;
        party.receive(&message)?;
        entries.push(TranscriptEntry {
            link,
            message,
            frame,
        });
    }
    Ok(())
}

/// Runs one full session. Output is a pure function of `config`, the
/// registry and the clock reading.
pub fn run_session(
    config: &SessionConfig,
    registry: &Registry,
    table: &PrimeTable,
    clock: &impl Clock,
) -> Result<SessionRun, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let nonce = config.nonce_required.then(|| rng.random::<u64>());
    let request = SessionRequest {
        session_id: config.session_id,
        initiator: config.initiator.clone(),
        responder: config.responder.clone(),
        n_source: config.n_source,
        shares: config.shares,
        width_override: config.width,
        nonce,
        timestamp: clock.now(),
    };
    let (setup, audit) = ca_create_session(&request, registry, table, &mut rng)?;

    let captured = Rc::new(RefCell::new(Vec::new()));
    let mut transport = MemoryTransport::new()
        .with_hook(TapHook {
            links: config.tap,
            captured: captured.clone(),
        })
        .with_hook(TamperHook(config.tamper.clone()));

    let hash_of = |id: &PartyId| registry.get(id).map(|r| r.key_hash_bytes().to_vec());
    let mut alice = Party::new(
        setup.initiator.clone(),
        true,
        hash_of(&setup.initiator)?,
        setup.session_id,
        nonce,
    );
    let mut bob = Party::new(
        setup.responder.clone(),
        false,
        hash_of(&setup.responder)?,
        setup.session_id,
        nonce,
    );

    let (m1a, m1b) = ca_step1(&setup, registry)?;
    let (m2a, m2b) = ca_step2(&setup)?;
    let mut entries = Vec::with_capacity(4);
    for m in [m1a, m1b, m2a, m2b] {
        let link = Link::for_step(m.step);
        transport.send(link, encode_message(&m));
        let party = if m.step.to_initiator() {
            &mut alice
        } else {
            &mut bob
        };
        deliver(&mut transport, link, party, &mut entries)?;
    }

    let key_of = |party: &Party, step: Step| {
        party.session_key().ok_or_else(|| HarnessError::MissingMessage {
            party: party.id.clone(),
            step,
        })
    };
    let derived_key_a = key_of(&alice, Step::TwoA)?;
    let derived_key_b = key_of(&bob, Step::TwoB)?;
    let transcript = Transcript {
        session_id: setup.session_id,
        entries,
        outcome: Outcome {
            keys_match: derived_key_a == derived_key_b && derived_key_a == setup.p3,
            derived_key_a,
            derived_key_b,
        },
    };

    let captured: Vec<(Link, GtpMessage)> = captured
        .take()
        .into_iter()
        .filter_map(|(link, frame)| decode_message(&frame).ok().map(|m| (link, m)))
        .collect();
    let find = |step: Step| captured.iter().find(|(_, m)| m.step == step).map(|(_, m)| m.payload);
    let step2_combination = match (find(Step::TwoA), find(Step::TwoB)) {
        (Some(a), Some(b)) => Some(eavesdropper_combine(a, b)?),
        _ => None,
    };
    if let Some(got) = step2_combination {
        let expected = setup.p1.xor(&setup.p2)?;
        if got != expected {
            return Err(HarnessError::EavesdropperIdentity { expected, got });
        }
    }
    let eve = EveView {
        links: config.tap,
        captured,
        step2_combination,
    };

    Ok(SessionRun {
        setup,
        transcript,
        audit,
        eve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_up_to;

    fn pid(s: &str) -> PartyId {
        PartyId::new(s).unwrap()
    }

    fn fixture() -> (Registry, SessionConfig) {
        let mut reg = Registry::new();
        reg.register_hash(pid("alice"), vec![47]).unwrap();
        reg.register_hash(pid("bob"), vec![99]).unwrap();
        let mut cfg = SessionConfig::new(pid("alice"), pid("bob"), NSource::Explicit(181), 1);
        cfg.shares = ShareChoice::Fixed([31, 67, 83]);
        cfg.width = Some(7);
        (reg, cfg)
    }

    #[test]
    fn worked_example_transcript() {
        let (reg, cfg) = fixture();
        let table = sieve_up_to(200);
        let run = run_session(&cfg, &reg, &table, &FixedClock(0)).unwrap();
        let payloads: Vec<String> = run
            .transcript
            .entries
            .iter()
            .map(|e| e.message.payload.to_string())
            .collect();
        assert_eq!(payloads, ["0110000", "0100000", "1001100", "0010000"]);
        assert!(run.transcript.outcome.keys_match);
        assert_eq!(run.transcript.outcome.derived_key_a.to_string(), "1010011");
        assert_eq!(run.transcript.outcome.derived_key_b.to_string(), "1010011");
        assert_eq!(run.eve.step2_combination, None);
        assert_eq!((run.audit.n, run.audit.p1, run.audit.p2, run.audit.p3), (181, 31, 67, 83));
    }

    #[test]
    fn tampered_step2_breaks_agreement() {
        let (reg, mut cfg) = fixture();
        cfg.tamper = vec![Tamper::FlipPayloadBit { step: Step::TwoA, bit: 3 }];
        cfg.tap = TapSet::BOTH;
        let table = sieve_up_to(200);
        let run = run_session(&cfg, &reg, &table, &FixedClock(0)).unwrap();
        let out = run.transcript.outcome;
        assert!(!out.keys_match);
        assert_eq!(out.derived_key_a.value(), 83 ^ 8);
        assert_eq!(out.derived_key_b.value(), 83);
        // eve taps before the tamperer
        assert_eq!(run.eve.step2_combination.unwrap().value(), 31 ^ 67);
    }

    #[test]
    fn nonce_echo_and_mismatch() {
        let (reg, mut cfg) = fixture();
        cfg.nonce_required = true;
        let table = sieve_up_to(200);
        let run = run_session(&cfg, &reg, &table, &FixedClock(0)).unwrap();
        let nonce = run.setup.nonce.unwrap();
        assert!(run.transcript.entries.iter().all(|e| e.message.nonce == Some(nonce)));
        assert!(run.transcript.outcome.keys_match);

        cfg.tamper = vec![Tamper::ReplaceNonce { step: Step::OneB, nonce: nonce ^ 1 }];
        assert_eq!(
            run_session(&cfg, &reg, &table, &FixedClock(0)),
            Err(HarnessError::NonceMismatch { step: Step::OneB, expected: nonce, got: Some(nonce ^ 1) })
        );
    }

    #[test]
    fn registry_miss_and_width_conflict() {
        let (reg, mut cfg) = fixture();
        let table = sieve_up_to(200);
        cfg.responder = pid("carol");
        assert_eq!(
            run_session(&cfg, &reg, &table, &FixedClock(0)),
            Err(HarnessError::Protocol(ProtocolError::Unregistered(pid("carol"))))
        );
        let (reg, mut cfg) = fixture();
        cfg.width = Some(5);
        assert!(matches!(
            run_session(&cfg, &reg, &table, &FixedClock(0)),
            Err(HarnessError::Protocol(ProtocolError::WidthTooSmall { .. }))
        ));
    }

    #[test]
    fn party_accepts_either_order_and_rejects_extras() {
        let w = |v| BitWord::new(v, 7).unwrap();
        let msg = |step, v| GtpMessage { session_id: 1, step, payload: w(v), nonce: None };
        let mut a = Party::new(pid("alice"), true, vec![47], 1, None);
        a.receive(&msg(Step::TwoA, 0b1101100)).unwrap();
        assert_eq!(a.session_key(), None);
        a.receive(&msg(Step::OneA, 0b0010000)).unwrap();
        assert_eq!(a.session_key(), Some(w(83)));
        assert!(matches!(
            a.receive(&msg(Step::TwoA, 0)),
            Err(HarnessError::UnexpectedMessage { .. })
        ));

        let mut b = Party::new(pid("bob"), false, vec![99], 1, None);
        assert!(matches!(
            b.receive(&msg(Step::OneA, 0)),
            Err(HarnessError::UnexpectedMessage { .. })
        ));
        b.receive(&msg(Step::OneB, 1)).unwrap();
        assert!(matches!(
            b.receive(&msg(Step::OneB, 1)),
            Err(HarnessError::UnexpectedMessage { .. })
        ));
        let mut other = msg(Step::TwoB, 1);
        other.session_id = 2;
        assert_eq!(
            b.receive(&other),
            Err(HarnessError::SessionMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn deterministic_under_seed() {
        let mut reg = Registry::new();
        reg.register_key(pid("alice"), b"ka", &crate::protocol::Sha256Hasher).unwrap();
        reg.register_key(pid("bob"), b"kb", &crate::protocol::Sha256Hasher).unwrap();
        let table = sieve_up_to(999);
        let mut cfg = SessionConfig::new(pid("alice"), pid("bob"), NSource::Random { lo: 101, hi: 999 }, 42);
        cfg.nonce_required = true;
        cfg.tap = TapSet::BOTH;
        let a = run_session(&cfg, &reg, &table, &FixedClock(7)).unwrap();
        let b = run_session(&cfg, &reg, &table, &FixedClock(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.transcript.outcome.keys_match);
        assert_eq!(a.audit.timestamp, 7);
    }
}
