use std::process::{Command, Output};

use semihom_cli::{CohomologyDoc, EulerDoc, ResolveDoc, VerifyDoc};
use semihom_core::nash::ValuationReport;
use semihom_core::spectral::{FloerReport, ScatterPoint};

fn semihom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semihom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn resolve_lists_chain() {
    let o = semihom(&["resolve", "--n", "3", "--d", "2", "--m", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: ResolveDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.chain.divisors.len(), 4);
    assert_eq!(doc.m_divisors.entries.len(), 3);

    let o = semihom(&["resolve", "--n", "3", "--d", "5", "--m", "4", "--format", "json"]);
    let doc: ResolveDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.chain.divisors.len(), 2);
}

#[test]
fn resolve_rejects_small_n() {
    let o = semihom(&["resolve", "--n", "1", "--d", "2", "--m", "4"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("n must be ≥ 2"));
}

#[test]
fn cohomology_tables() {
    let o = semihom(&["cohomology", "--n", "3", "--d", "5", "--m", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("H_c^26 = Z^64"));
    assert!(text.contains("H_c^28 = Z\n"));

    let o = semihom(&["cohomology", "--n", "3", "--d", "5", "--m", "4", "--format", "json"]);
    let doc: CohomologyDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc.cohomology.is_zero());
    assert!(doc.note.unwrap().contains("m < d"));

    let o = semihom(&["cohomology", "--n", "3", "--d", "1", "--m", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("requires d ≥ 2"));
}

#[test]
fn floer_verdicts() {
    let o = semihom(&["floer", "--n", "3", "--d", "5", "--m", "5", "--format", "json"]);
    let r: FloerReport = serde_json::from_str(&stdout(&o)).unwrap();
    let hf = r.cohomology.unwrap();
    assert_eq!(hf.get(4).rank().to_string(), "64");
    assert_eq!(hf.get(6).rank().to_string(), "1");

    let o = semihom(&["floer", "--n", "3", "--d", "3", "--m", "9"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("not determined"));

    let o = semihom(&["floer", "--n", "3", "--d", "5", "--m", "4"]);
    assert!(stdout(&o).contains("HF^*(phi^m, +) = 0"));
}

#[test]
fn nash_counts() {
    for (args, counts) in [
        (["3", "2", "4"], (0, 1, 2)),
        (["3", "4", "8"], (2, 2, 2)),
        (["3", "2", "1"], (0, 0, 0)),
    ] {
        let o = semihom(&[
            "nash", "--n", args[0], "--d", args[1], "--m", args[2], "--format", "json",
        ]);
        let r: ValuationReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r.counts(), counts);
    }
}

#[test]
fn scatter_csv_grid() {
    let o = semihom(&["scatter", "--nmax", "40", "--dmax", "40", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,d,class"));
    let rows: Vec<(u32, u32, String)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string())
        })
        .collect();
    assert_eq!(rows.len(), 38 * 39);
    for (n, d, class) in &rows {
        if *d > 2 * n - 2 {
            assert_eq!(class, "blue", "({n},{d})");
        }
    }
    assert!(rows.contains(&(3, 3, "pink".to_string())));
}

#[test]
fn scatter_svg_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.svg");
    let o = semihom(&["scatter", "--nmax", "10", "--dmax", "12", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<title>").count(), 8 * 11);

    let o = semihom(&["scatter", "--nmax", "201", "--dmax", "12"]);
    assert_eq!(code(&o), 2);

    let o = semihom(&["scatter", "--nmax", "5", "--dmax", "5", "--format", "json"]);
    let pts: Vec<ScatterPoint> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(pts.len(), 12);
}

#[test]
fn verify_runs_oracle() {
    let o = semihom(&["verify", "--f", "x0^2 + x1^2 + x2^2", "--m", "3", "--primes", "3,5", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: VerifyDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc.all_match);
    assert_eq!(doc.reports.len(), 2);
    assert_eq!(doc.reports[0].by_order[&1], 8 * 3u64.pow(5));

    let o = semihom(&["verify", "--f", "x0^2 + x1^2 + x2^2", "--m", "4", "--primes", "5", "--budget", "1000"]);
    assert_eq!(code(&o), 3);

    let o = semihom(&["verify", "--f", "x0*x1", "--m", "3"]);
    assert_eq!(code(&o), 2);

    let o = semihom(&["verify", "--f", "x0^2 + x1^2", "--m", "3", "--primes", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_reads_document_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(
        &path,
        r#"{"n":3,"terms":[{"exps":[3,0,0],"coeff":1},{"exps":[0,3,0],"coeff":1},{"exps":[0,0,3],"coeff":1}]}"#,
    )
    .unwrap();
    let o = semihom(&["verify", "--f", path.to_str().unwrap(), "--m", "4", "--primes", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("all strata match"));
}

#[test]
fn euler_examples() {
    for (args, v) in [(["3", "2", "4"], 2), (["3", "2", "3"], 0), (["4", "3", "6"], -15)] {
        let o = semihom(&["euler", "--n", args[0], "--d", args[1], "--m", args[2], "--format", "json"]);
        assert_eq!(code(&o), 0);
        let doc: EulerDoc = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(doc.matches);
        assert_eq!(doc.contact_euler, v.into());
    }
}

#[test]
fn structured_output_is_deterministic() {
    for args in [
        vec!["cohomology", "--n", "4", "--d", "3", "--m", "9", "--format", "json"],
        vec!["scatter", "--nmax", "12", "--dmax", "12", "--format", "json"],
        vec!["verify", "--f", "x0^2 + x1^2 + x2^2 + x0^3", "--m", "4", "--primes", "3,5", "--format", "json"],
    ] {
        assert_eq!(stdout(&semihom(&args)), stdout(&semihom(&args)));
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&semihom(&["resolve", "--n", "3", "--d", "2"])), 2);
    assert_eq!(code(&semihom(&["resolve", "--n", "3", "--d", "2", "--m", "4", "--format", "csv"])), 2);
    assert_eq!(code(&semihom(&["frobnicate"])), 2);
}
