//! Annotated walk-through of one protocol session.

use std::fmt::Write as _;

use goldbach_gtp::harness::{SessionRun, Transcript};
use goldbach_gtp::protocol::{BitWord, Step};

struct Column<'a> {
    label: &'a str,
    lines: Vec<String>,
}

fn two_columns(out: &mut String, left: Column<'_>, right: Column<'_>) {
    const PAD: usize = 34;
    let _ = writeln!(out, "{:<PAD$}{}", left.label, right.label);
    for (l, r) in left.lines.iter().zip(&right.lines) {
        let _ = writeln!(out, "{l:<PAD$}{r}");
    }
}

fn received(t: &Transcript, step: Step) -> BitWord {
    t.message(step).expect("completed transcript").payload
}

/// Renders the session as the three step tables, each ending in its
/// numbered result word.
pub fn render(run: &SessionRun, hash_a: BitWord, hash_b: BitWord, partitions: u64) -> String {
    let s = &run.setup;
    let t = &run.transcript;
    let (m1a, m1b) = (received(t, Step::OneA), received(t, Step::OneB));
    let (m2a, m2b) = (received(t, Step::TwoA), received(t, Step::TwoB));
    let r5 = m1a.xor(&m2a).expect("same width");
    let r6 = m1b.xor(&m2b).expect("same width");
    let (ka, kb) = (t.outcome.derived_key_a, t.outcome.derived_key_b);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "N = {} = {} + {} + {} ({} prime partitions), session {}, width {}",
        s.n,
        s.p1.value(),
        s.p2.value(),
        s.p3.value(),
        partitions,
        s.session_id,
        s.width
    );
    for (name, w) in [("P1", s.p1), ("P2", s.p2), ("P3", s.p3), ("h(Ka)", hash_a), ("h(Kb)", hash_b)] {
        let _ = writeln!(out, "{name:<6} = {:>6} = {w}", w.value());
    }
    if let Some(nonce) = s.nonce {
        let _ = writeln!(out, "nonce  = {nonce:#018x}");
    }

    let _ = writeln!(out, "\nStep 1:");
    two_columns(
        &mut out,
        Column {
            label: &format!("{}: P1 xor h(Ka)", s.initiator),
            lines: vec![s.p1.to_string(), hash_a.to_string(), format!("{m1a} -> Result1")],
        },
        Column {
            label: &format!("{}: P2 xor h(Kb)", s.responder),
            lines: vec![s.p2.to_string(), hash_b.to_string(), format!("{m1b} -> Result2")],
        },
    );

    let _ = writeln!(out, "\nStep 2:");
    two_columns(
        &mut out,
        Column {
            label: &format!("{}: P1 xor P3", s.initiator),
            lines: vec![s.p1.to_string(), s.p3.to_string(), format!("{m2a} -> Result3")],
        },
        Column {
            label: &format!("{}: P2 xor P3", s.responder),
            lines: vec![s.p2.to_string(), s.p3.to_string(), format!("{m2b} -> Result4")],
        },
    );
    let _ = writeln!(out);
    two_columns(
        &mut out,
        Column {
            label: &format!("{}: Result1 xor Result3", s.initiator),
            lines: vec![m1a.to_string(), m2a.to_string(), format!("{r5} -> Result5")],
        },
        Column {
            label: &format!("{}: Result2 xor Result4", s.responder),
            lines: vec![m1b.to_string(), m2b.to_string(), format!("{r6} -> Result6")],
        },
    );

    let _ = writeln!(out, "\nStep 3:");
    two_columns(
        &mut out,
        Column {
            label: &format!("{}: h(Ka) xor Result5", s.initiator),
            lines: vec![hash_a.to_string(), r5.to_string(), format!("{ka} -> Final Key")],
        },
        Column {
            label: &format!("{}: h(Kb) xor Result6", s.responder),
            lines: vec![hash_b.to_string(), r6.to_string(), format!("{kb} -> Final Key")],
        },
    );

    if let Some(c) = run.eve.step2_combination {
        let _ = writeln!(out, "\neavesdropper: Result3 xor Result4 (as sent) = {c} = P1 xor P2");
    } else if !run.eve.captured.is_empty() {
        let _ = writeln!(out, "\neavesdropper: {} message(s) captured on one link", run.eve.captured.len());
    }
    let verdict = if t.outcome.keys_match {
        format!("keys match: {ka} = {}", ka.value())
    } else {
        format!("keys MISMATCH: {} / {} (P3 = {})", ka, kb, s.p3)
    };
    let _ = writeln!(out, "\n{verdict}");
    out
}
