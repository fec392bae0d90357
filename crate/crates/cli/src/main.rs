mod demo;
mod range;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use goldbach_gtp::harness::{
    load_audit, run_session, AuditLog, FixedClock, SessionConfig, SystemClock, TapSet, Tamper,
};
use goldbach_gtp::partitions::{census_range, count_triples, enumerate_triangular, enumerate_triples};
use goldbach_gtp::primes::sieve_up_to;
use goldbach_gtp::protocol::{NSource, PartyId, Registry, Sha256Hasher, ShareChoice, Step};
use goldbach_gtp::seqanalysis::{autocorrelation, parity_sequence, CountKind};

use range::OddRange;

#[derive(Parser)]
#[command(name = "gtp", version, about = "Goldbach triples and the Goldbach Triples key-distribution protocol")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count Goldbach triples for each odd n in a range (TSV).
    Count {
        /// `n` or inclusive `lo..hi`
        range: String,
        /// Count only triangular triples.
        #[arg(long)]
        triangular: bool,
    },
    /// List the Goldbach triples of one odd number.
    Enumerate {
        n: u64,
        #[arg(long)]
        triangular: bool,
    },
    /// Census or parity-sequence autocorrelation over a range.
    Seq {
        range: String,
        /// Count used for the parity sequence.
        #[arg(long, value_enum, default_value_t = Which::G)]
        which: Which,
        /// Emit `k,c_k` instead of the census.
        #[arg(long)]
        autocorr: bool,
        /// Write CSV to this file instead of TSV to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run one protocol session and print every intermediate word.
    Demo(DemoArgs),
    /// Audit log tools.
    Audit {
        #[command(subcommand)]
        action: AuditAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    G,
    T,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tap {
    None,
    A,
    B,
    Both,
}

#[derive(Subcommand)]
enum AuditAction {
    /// Check every record of an audit log.
    Verify { path: PathBuf },
}

#[derive(clap::Args)]
struct DemoArgs {
    /// Explicit odd N.
    #[arg(long, conflicts_with = "range")]
    n: Option<u64>,
    /// Draw N uniformly from the odd numbers in `lo..hi`.
    #[arg(long)]
    range: Option<String>,
    /// Shares in role order `P1,P2,P3`.
    #[arg(long, requires = "n")]
    triple: Option<String>,
    /// Initiator key hash as an integer (replaces SHA-256 of --key-a).
    #[arg(long)]
    hash_a: Option<u64>,
    #[arg(long)]
    hash_b: Option<u64>,
    #[arg(long, default_value = "alice-secret-key")]
    key_a: String,
    #[arg(long, default_value = "bob-secret-key")]
    key_b: String,
    #[arg(long)]
    width: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// In-transit payload bit flip, `STEP:bitN` (e.g. `2a:bit3`). Repeatable.
    #[arg(long)]
    tamper: Vec<String>,
    /// Carry and check a session nonce.
    #[arg(long)]
    nonce: bool,
    #[arg(long, value_enum, default_value_t = Tap::None)]
    tap: Tap,
    /// Append the session's audit record to this log.
    #[arg(long)]
    audit_log: Option<PathBuf>,
    /// Fixed audit timestamp (seconds since the epoch).
    #[arg(long)]
    timestamp: Option<u64>,
}

/// A failure reported as one `error: <kind>: <message>` line.
#[derive(Debug)]
struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl fmt::Display) -> Self {
        Self {
            kind,
            message: message.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::new("io", e)
    }
}

type CliResult = Result<(), CliError>;

fn parse_range(s: &str) -> Result<OddRange, CliError> {
    let (r, warnings) = OddRange::parse(s).map_err(|e| CliError::new("range", e))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(r)
}

fn cmd_count(range: &str, triangular: bool, out: &mut impl Write) -> CliResult {
    let r = parse_range(range)?;
    let table = sieve_up_to(r.hi);
    if triangular {
        writeln!(out, "n\tt")?;
        for c in census_range(r.lo, r.hi, &table).map_err(|e| CliError::new("partition", e))? {
            writeln!(out, "{}\t{}", c.n, c.t)?;
        }
    } else {
        writeln!(out, "n\tg")?;
        for n in (r.lo..=r.hi).step_by(2) {
            let g = count_triples(n, &table).map_err(|e| CliError::new("partition", e))?;
            writeln!(out, "{n}\t{g}")?;
        }
    }
    Ok(())
}

fn cmd_enumerate(n: u64, triangular: bool, out: &mut impl Write) -> CliResult {
    let table = sieve_up_to(n);
    let triples = if triangular {
        enumerate_triangular(n, &table)
    } else {
        enumerate_triples(n, &table)
    }
    .map_err(|e| CliError::new("partition", e))?;
    for t in triples {
        writeln!(out, "{n}={t}")?;
    }
    Ok(())
}

fn cmd_seq(range: &str, which: Which, autocorr: bool, csv: Option<PathBuf>, stdout: &mut impl Write) -> CliResult {
    let r = parse_range(range)?;
    let census = census_range(r.lo, r.hi, &sieve_up_to(r.hi)).map_err(|e| CliError::new("partition", e))?;
    let sep = if csv.is_some() { "," } else { "\t" };
    let mut rows = Vec::new();
    if autocorr {
        let kind = match which {
            Which::G => CountKind::Unrestricted,
            Which::T => CountKind::Triangular,
        };
        let seq = parity_sequence(&census, kind).map_err(|e| CliError::new("sequence", e))?;
        rows.push(format!("k{sep}c_k"));
        for (k, c) in autocorrelation(&seq).values().iter().enumerate() {
            rows.push(format!("{k}{sep}{c:.15}"));
        }
    } else {
        rows.push(["n", "g", "t", "parity_g", "parity_t"].join(sep));
        for c in &census {
            rows.push(format!("{}{sep}{}{sep}{}{sep}{}{sep}{}", c.n, c.g, c.t, c.parity_g, c.parity_t));
        }
    }
    match csv {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            for row in rows {
                writeln!(f, "{row}")?;
            }
            f.flush()?;
        }
        None => {
            for row in rows {
                writeln!(stdout, "{row}")?;
            }
        }
    }
    Ok(())
}

fn parse_tamper(s: &str) -> Result<Tamper, CliError> {
    let bad = || CliError::new("tamper", format!("expected STEP:bitN, got {s:?}"));
    let (step, bit) = s.split_once(':').ok_or_else(bad)?;
    let step = Step::from_label(step).ok_or_else(bad)?;
    let bit = bit.strip_prefix("bit").unwrap_or(bit).parse().map_err(|_| bad())?;
    Ok(Tamper::FlipPayloadBit { step, bit })
}

fn parse_triple(s: &str) -> Result<[u64; 3], CliError> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::new("triple", format!("invalid triple {s:?}")))?;
    parts
        .try_into()
        .map_err(|_| CliError::new("triple", format!("expected three primes, got {s:?}")))
}

fn cmd_demo(args: DemoArgs, out: &mut impl Write) -> CliResult {
    let alice = PartyId::new("alice").expect("valid id");
    let bob = PartyId::new("bob").expect("valid id");
    let mut registry = Registry::new();
    let protocol_err = |e| CliError::new("protocol", e);
    match args.hash_a {
        Some(h) => registry.register_hash(alice.clone(), h.to_be_bytes().to_vec()),
        None => registry.register_key(alice.clone(), args.key_a.as_bytes(), &Sha256Hasher),
    }
    .map_err(protocol_err)?;
    match args.hash_b {
        Some(h) => registry.register_hash(bob.clone(), h.to_be_bytes().to_vec()),
        None => registry.register_key(bob.clone(), args.key_b.as_bytes(), &Sha256Hasher),
    }
    .map_err(protocol_err)?;

    let n_source = match (args.n, &args.range) {
        (Some(n), _) => NSource::Explicit(n),
        (None, Some(r)) => {
            let r = parse_range(r)?;
            NSource::Random { lo: r.lo, hi: r.hi }
        }
        (None, None) => NSource::Random { lo: 101, hi: 999 },
    };
    let mut config = SessionConfig::new(alice.clone(), bob.clone(), n_source, args.seed);
    if let Some(t) = &args.triple {
        config.shares = ShareChoice::Fixed(parse_triple(t)?);
    }
    config.width = args.width;
    config.nonce_required = args.nonce;
    config.tap = match args.tap {
        Tap::None => TapSet::NONE,
        Tap::A => TapSet { initiator: true, responder: false },
        Tap::B => TapSet { initiator: false, responder: true },
        Tap::Both => TapSet::BOTH,
    };
    config.tamper = args.tamper.iter().map(|t| parse_tamper(t)).collect::<Result<_, _>>()?;

    let table = sieve_up_to(n_source.upper_bound().max(7));
    let run = match args.timestamp {
        Some(ts) => run_session(&config, &registry, &table, &FixedClock(ts)),
        None => run_session(&config, &registry, &table, &SystemClock),
    }
    .map_err(|e| CliError::new("session", e))?;

    let hash_a = registry.get(&alice).and_then(|r| r.hash_at(run.setup.width)).map_err(protocol_err)?;
    let hash_b = registry.get(&bob).and_then(|r| r.hash_at(run.setup.width)).map_err(protocol_err)?;
    let partitions = count_triples(run.setup.n, &table).map_err(|e| CliError::new("partition", e))?;
    write!(out, "{}", demo::render(&run, hash_a, hash_b, partitions))?;

    if let Some(path) = &args.audit_log {
        AuditLog::open(path)?.append(&run.audit)?;
    }
    let o = run.transcript.outcome;
    if !o.keys_match {
        return Err(CliError::new(
            "key_mismatch",
            format!("initiator {} responder {} expected {}", o.derived_key_a, o.derived_key_b, run.setup.p3),
        ));
    }
    Ok(())
}

fn cmd_audit_verify(path: PathBuf, out: &mut impl Write) -> CliResult {
    let loaded = load_audit(&path)?;
    for c in &loaded.corrupt {
        writeln!(out, "CORRUPT {c}")?;
    }
    writeln!(out, "{} valid record(s), {} corrupt line(s)", loaded.records.len(), loaded.corrupt.len())?;
    if loaded.is_clean() {
        Ok(())
    } else {
        let lines: Vec<String> = loaded.corrupt.iter().map(|c| c.line.to_string()).collect();
        Err(CliError::new("audit_corrupt", format!("lines {}", lines.join(","))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Count { range, triangular } => cmd_count(&range, triangular, &mut out),
        Command::Enumerate { n, triangular } => cmd_enumerate(n, triangular, &mut out),
        Command::Seq { range, which, autocorr, csv } => cmd_seq(&range, which, autocorr, csv, &mut out),
        Command::Demo(args) => cmd_demo(args, &mut out),
        Command::Audit { action: AuditAction::Verify { path } } => cmd_audit_verify(path, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.kind, e.message.replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
