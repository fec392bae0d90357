//! Append-only audit log, one record per line:
//!
//! ```text
//! session_id=1 n=181 p1=31 p2=67 p3=83 width=7 parties=alice,bob timestamp=0
//! ```

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;
use thiserror::Error;

use crate::primes::sieve_up_to;
use crate::protocol::{verify_audit, AuditIssue, AuditRecord, PartyId};

/// Largest value `load_audit` will sieve up to when checking primality.
/// Records above it are reported as unverifiable.
pub const VERIFY_LIMIT: u64 = 10_000_000;

const FIELDS: [&str; 8] = [
    "session_id",
    "n",
    "p1",
    "p2",
    "p3",
    "width",
    "parties",
    "timestamp",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("token {0:?} is not key=value")]
    NotKeyValue(String),
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("duplicate field {0:?}")]
    DuplicateField(&'static str),
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("bad value for {field}: {value:?}")]
    BadValue { field: &'static str, value: String },
}

pub fn format_record(r: &AuditRecord) -> String {
    format!(
        "session_id={} n={} p1={} p2={} p3={} width={} parties={},{} timestamp={}",
        r.session_id, r.n, r.p1, r.p2, r.p3, r.width, r.initiator, r.responder, r.timestamp
    )
}

pub fn parse_record(line: &str) -> Result<AuditRecord, ParseError> {
    let mut values: [Option<&str>; 8] = [None; 8];
    for token in line.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| ParseError::NotKeyValue(token.to_string()))?;
        let idx = FIELDS
            .iter()
            .position(|&f| f == key)
            .ok_or_else(|| ParseError::UnknownField(key.to_string()))?;
        if values[idx].replace(value).is_some() {
            return Err(ParseError::DuplicateField(FIELDS[idx]));
        }
    }
    let get = |idx: usize| values[idx].ok_or(ParseError::MissingField(FIELDS[idx]));
    fn num<T: FromStr>(field: &'static str, value: &str) -> Result<T, ParseError> {
        value.parse().map_err(|_| ParseError::BadValue {
            field,
            value: value.to_string(),
        })
    }
    let parties = get(6)?;
    let bad_parties = || ParseError::BadValue {
        field: "parties",
        value: parties.to_string(),
    };
    let (a, b) = parties.split_once(',').ok_or_else(bad_parties)?;
    Ok(AuditRecord {
        session_id: num("session_id", get(0)?)?,
        n: num("n", get(1)?)?,
        p1: num("p1", get(2)?)?,
        p2: num("p2", get(3)?)?,
        p3: num("p3", get(4)?)?,
        width: num("width", get(5)?)?,
        initiator: PartyId::new(a).map_err(|_| bad_parties())?,
        responder: PartyId::new(b).map_err(|_| bad_parties())?,
        timestamp: num("timestamp", get(7)?)?,
    })
}

/// Writes one record line.
pub fn append_audit(record: &AuditRecord, log: &mut impl Write) -> io::Result<()> {
    writeln!(log, "{}", format_record(record))
}

/// File-backed log. Appends are serialized through a mutex so concurrent
/// sessions can share one writer.
pub struct AuditLog {
    file: Mutex<File>,
}

impl AuditLog {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            file: Mutex::new(file),
        })
    }

    pub fn append(&self, record: &AuditRecord) -> io::Result<()> {
        let mut file = self.file.lock().unwrap_or_else(|e| e.into_inner());
        append_audit(record, &mut *file)?;
        file.flush()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Corruption {
    Unparseable(ParseError),
    Invalid(Vec<AuditIssue>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptLine {
    /// 1-based.
    pub line: usize,
    pub reason: Corruption,
}

impl std::fmt::Display for CorruptLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.reason {
            Corruption::Unparseable(e) => write!(f, "line {}: unparseable: {e}", self.line),
            Corruption::Invalid(issues) => {
                let reasons: Vec<String> = issues.iter().map(|i| i.to_string()).collect();
                write!(f, "line {}: invalid: {}", self.line, reasons.join("; "))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadedAudit {
    /// Valid records with their 1-based line numbers, in append order.
    pub records: Vec<(usize, AuditRecord)>,
    pub corrupt: Vec<CorruptLine>,
}

impl LoadedAudit {
    pub fn is_clean(&self) -> bool {
        self.corrupt.is_empty()
    }
}

/// Reads every line, verifying each parsed record. Blank lines are skipped.
pub fn load_audit_from(reader: impl BufRead) -> io::Result<LoadedAudit> {
    let mut parsed = Vec::new();
    let mut out = LoadedAudit::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(&line) {
            Ok(r) => parsed.push((idx + 1, r)),
            Err(e) => out.corrupt.push(CorruptLine {
                line: idx + 1,
                reason: Corruption::Unparseable(e),
            }),
        }
    }
    let bound = parsed
        .iter()
        .flat_map(|(_, r)| [r.n, r.p1, r.p2, r.p3])
        .max()
        .unwrap_or(0)
        .min(VERIFY_LIMIT);
    let table = sieve_up_to(bound);
    for (line, record) in parsed {
        let verdict = verify_audit(&record, &table);
        if verdict.is_valid() {
            out.records.push((line, record));
        } else {
            out.corrupt.push(CorruptLine {
                line,
                reason: Corruption::Invalid(verdict.issues),
            });
        }
    }
    out.corrupt.sort_by_key(|c| c.line);
    Ok(out)
}

pub fn load_audit(path: impl AsRef<Path>) -> io::Result<LoadedAudit> {
    load_audit_from(BufReader::new(File::open(path)?))
}
