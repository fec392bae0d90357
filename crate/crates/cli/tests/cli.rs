use std::fs;
use std::process::{Command, Output};

fn gtp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtp"))
        .args(args)
        .output()
        .expect("run gtp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(text: &str) -> Vec<(u64, u64)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once('\t').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn count_small_range() {
    let o = gtp(&["count", "9..37"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n\tg\n"));
    let expected = [
        (9, 2), (11, 2), (13, 2), (15, 3), (17, 4), (19, 3), (21, 5), (23, 5),
        (25, 5), (27, 7), (29, 7), (31, 6), (33, 9), (35, 8), (37, 9),
    ];
    assert_eq!(rows(&text), expected);
}

#[test]
fn count_large_range_has_every_odd() {
    let o = gtp(&["count", "1925..1999"]);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 38);
    assert_eq!(r[0].0, 1925);
    assert_eq!(r[37].0, 1999);
}

#[test]
fn count_triangular_header() {
    let o = gtp(&["count", "971..=999", "--triangular"]);
    let text = stdout(&o);
    assert!(text.starts_with("n\tt\n"));
    assert_eq!(rows(&text).len(), 15);
}

#[test]
fn snapped_bounds_warn_on_stderr() {
    let o = gtp(&["count", "4..14"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning:"));
    let r = rows(&stdout(&o));
    assert_eq!(r.first().unwrap().0, 7);
    assert_eq!(r.last().unwrap().0, 13);
}

#[test]
fn enumerate_lists_sorted_triples() {
    let o = gtp(&["enumerate", "21"]);
    assert_eq!(
        stdout(&o),
        "21=2+2+17\n21=3+5+13\n21=3+7+11\n21=5+5+11\n21=7+7+7\n"
    );
    assert_eq!(stdout(&gtp(&["enumerate", "7"])), "7=2+2+3\n");
}

#[test]
fn enumerate_triangular_filters() {
    let text = stdout(&gtp(&["enumerate", "49", "--triangular"]));
    for line in text.lines() {
        let parts: Vec<u64> = line.split_once('=').unwrap().1.split('+').map(|p| p.parse().unwrap()).collect();
        assert!(parts[2] < parts[0] + parts[1], "{line}");
    }
    assert!(text.contains("49=13+17+19\n"));
}

#[test]
fn even_input_is_an_error() {
    let o = gtp(&["enumerate", "10"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error: partition: "));
    let o = gtp(&["count", "9..7"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error: range: "));
}

#[test]
fn seq_census_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.csv");
    let o = gtp(&["seq", "9..21", "--csv", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,g,t,parity_g,parity_t"));
    assert_eq!(lines.next(), Some("9,2,1,-1,1"));
    assert_eq!(lines.clone().count(), 6);
}

#[test]
fn seq_autocorr_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ac.csv");
    let o = gtp(&["seq", "9..207", "--autocorr", "--which", "t", "--csv", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,c_k");
    assert_eq!(lines[1], "0,1.000000000000000");
    assert_eq!(lines.len(), 101);
    let c: Vec<f64> = lines[1..].iter().map(|l| l.split_once(',').unwrap().1.parse().unwrap()).collect();
    for k in 1..c.len() {
        assert!((c[k] - c[c.len() - k]).abs() < 1e-12);
    }
}

const WORKED: &[&str] = &[
    "demo", "--n", "181", "--triple", "31,67,83", "--hash-a", "47", "--hash-b", "99", "--width", "7", "--tap", "both",
];

#[test]
fn demo_worked_example() {
    let o = gtp(WORKED);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("(80 prime partitions)"));
    for tag in ["Result1", "Result2", "Result3", "Result4", "Result5", "Result6"] {
        assert!(text.contains(&format!("-> {tag}")), "{tag}");
    }
    assert!(text.contains("0100000 -> Result2"));
    assert!(text.contains("0010000 -> Result4"));
    assert!(text.contains("1111100 -> Result5"));
    assert!(text.contains("0110000 -> Result6"));
    assert_eq!(text.matches("1010011 -> Final Key").count(), 2);
    assert!(text.contains("eavesdropper: Result3 xor Result4 (as sent) = 1011100"));
    assert!(text.contains("keys match: 1010011 = 83"));
}

#[test]
fn demo_random_session_succeeds() {
    let o = gtp(&["demo", "--seed", "1", "--range", "101..999", "--nonce"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("keys match"));
    assert!(text.contains("nonce  = 0x"));
    // same seed, same session
    assert_eq!(stdout(&gtp(&["demo", "--seed", "1", "--range", "101..999", "--nonce"])), text);
}

#[test]
fn demo_tamper_reports_mismatch() {
    let o = gtp(&["demo", "--seed", "1", "--tamper", "2a:bit3"]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("keys MISMATCH"));
    assert!(stderr(&o).starts_with("error: key_mismatch: "));
    let o = gtp(&["demo", "--seed", "1", "--tamper", "3c:bit0"]);
    assert!(stderr(&o).starts_with("error: tamper: "));
}

#[test]
fn audit_log_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("audit.log");
    let log_s = log.to_str().unwrap();
    for seed in ["1", "2", "3"] {
        let o = gtp(&["demo", "--seed", seed, "--audit-log", log_s, "--timestamp", "100"]);
        assert!(o.status.success());
    }
    let o = gtp(&["audit", "verify", log_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("3 valid record(s), 0 corrupt line(s)"));

    let text = fs::read_to_string(&log).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let tampered = lines[1].replace("p3=", "p3=1");
    fs::write(&log, format!("{}\n{}\nnot a record\n{}\n", lines[0], tampered, lines[2])).unwrap();
    let o = gtp(&["audit", "verify", log_s]);
    assert!(!o.status.success());
    let out = stdout(&o);
    assert!(out.contains("line 2: invalid"), "{out}");
    assert!(out.contains("line 3: "), "{out}");
    assert!(stderr(&o).starts_with("error: audit_corrupt: lines 2,3"));
}
