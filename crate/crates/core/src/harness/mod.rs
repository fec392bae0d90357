//! Session orchestration over in-memory links, wire encoding and the audit
//! log.

pub mod audit_log;
pub mod codec;
pub mod session;
pub mod transport;

pub use audit_log::{append_audit, load_audit, load_audit_from, AuditLog, LoadedAudit};
pub use codec::{decode_message, encode_message, CodecError};
pub use session::{
    run_session, Clock, EveView, FixedClock, HarnessError, Outcome, Party, PartyState,
    SessionConfig, SessionRun, SystemClock, Tamper, Transcript, TranscriptEntry,
};
pub use transport::{Link, LinkHook, MemoryTransport, TapSet, Transport};
