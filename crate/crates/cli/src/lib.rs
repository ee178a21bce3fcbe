//! Subcommands of the `semihom` binary. Each command renders to a string
//! and reports an exit status; `main` only does I/O.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use semihom_core::contact::{
    contact_class, contact_cohomology, contact_euler, contact_euler_closed_form, graded_pieces,
    piece_compact_cohomology, GradedPiece, MotivicClass,
};
use semihom_core::nash::{valuation_report, ValuationReport};
use semihom_core::oracle::{count_contact_jets, JetCountReport, SparseIntPoly, DEFAULT_BUDGET};
use semihom_core::resolution::{build_minimal_resolution, m_divisors, MDivisorList, ResolutionChain};
use semihom_core::spectral::{floer_report, scatter_csv, scatter_grid, scatter_svg, FloerReport, ScatterPoint};
use semihom_core::{Error, GradedGroup};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "semihom", version, about = "Invariants of semihomogeneous singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Params {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub m: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal m-separating resolution chain and its m-divisors.
    Resolve(Params),
    /// Compactly supported cohomology of the restricted contact locus.
    Cohomology(Params),
    /// Degeneration conditions and Floer cohomology of the monodromy iterate.
    Floer(Params),
    /// dlt, contact and essential m-valuations.
    Nash(Params),
    /// Classification of (n, d) pairs.
    Scatter {
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        dmax: u32,
    },
    /// Finite-field jet counts against the stratification prediction.
    Verify {
        /// Polynomial: inline (`x0^2 + x1^2 + 2*x2^3`) or a JSON document,
        /// given literally or as a path to a file.
        #[arg(long)]
        f: String,
        #[arg(long)]
        m: u32,
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Euler characteristic of the contact locus against the Lefschetz number.
    Euler(Params),
}

/// Rendered output plus exit status.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, code: EXIT_OK }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            Error::Internal(_) => CliError::Mismatch(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveDoc {
    pub chain: ResolutionChain,
    pub m_divisors: MDivisorList,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub piece: GradedPiece,
    pub cohomology: GradedGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDoc {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub cohomology: GradedGroup,
    pub pieces: Vec<PieceDoc>,
    pub motivic_class: MotivicClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub f: SparseIntPoly,
    pub m: u32,
    pub reports: Vec<JetCountReport>,
    pub all_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerDoc {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    #[serde(with = "decimal")]
    pub contact_euler: num_bigint::BigInt,
    #[serde(with = "decimal")]
    pub lefschetz_number: num_bigint::BigInt,
    pub matches: bool,
}

/// Big integers as JSON strings, so documents never lose precision.
mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

fn format_or(cli_format: Option<Format>, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = cli_format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Validation(format!(
            "format {f:?} is not available for this command"
        )))
    }
}

fn graded_table(out: &mut String, g: &GradedGroup, label: &str) {
    for (k, grp) in g.iter() {
        let _ = writeln!(out, "  {label}^{k} = {grp}");
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    use Format::*;
    match &cli.command {
        Command::Resolve(p) => {
            let fmt = format_or(cli.format, Text, &[Text, Json])?;
            let chain = build_minimal_resolution(p.n, p.d, p.m)?;
            let doc = ResolveDoc {
                m_divisors: m_divisors(&chain)?,
                chain,
            };
            if fmt == Json {
                return Ok(Outcome::ok(json(&doc)));
            }
            let mut out = format!(
                "minimal resolution for n = {}, d = {}, m = {}: {} divisors\n",
                p.n,
                p.d,
                p.m,
                doc.chain.divisors.len()
            );
            let _ = writeln!(out, "  {:>10}  {:>6}  {:>6}  kind", "(kappa,r)", "N", "nu");
            for dv in &doc.chain.divisors {
                let _ = writeln!(
                    out,
                    "  {:>10}  {:>6}  {:>6}  {:?}",
                    dv.pair().to_string(),
                    dv.multiplicity,
                    dv.log_discrepancy,
                    dv.kind
                );
            }
            out.push_str("m-divisors:\n");
            for e in &doc.m_divisors.entries {
                let _ = writeln!(
                    out,
                    "  E_{} = {}  N = {}{}",
                    e.index,
                    e.divisor.pair(),
                    e.divisor.multiplicity,
                    if e.exceptional { "" } else { "  (strict transform)" }
                );
            }
            Ok(Outcome::ok(out))
        }
        Command::Cohomology(p) => {
            let fmt = format_or(cli.format, Text, &[Text, Json])?;
            let cohomology = contact_cohomology(p.n, p.d, p.m)?;
            let pieces = graded_pieces(p.n, p.d, p.m)?
                .into_iter()
                .map(|piece| {
                    Ok(PieceDoc {
                        cohomology: piece_compact_cohomology(&piece, p.n, p.d)?,
                        piece,
                    })
                })
                .collect::<semihom_core::Result<Vec<_>>>()?;
            let doc = CohomologyDoc {
                n: p.n,
                d: p.d,
                m: p.m,
                cohomology,
                motivic_class: contact_class(p.n, p.d, p.m)?,
                note: (p.m < p.d).then(|| "m < d: the contact locus is empty".to_string()),
                pieces,
            };
            if fmt == Json {
                return Ok(Outcome::ok(json(&doc)));
            }
            let mut out = format!("H^*_c(X_m) for n = {}, d = {}, m = {}\n", p.n, p.d, p.m);
            if let Some(note) = &doc.note {
                let _ = writeln!(out, "  (empty; {note})");
            }
            graded_table(&mut out, &doc.cohomology, "H_c");
            for piece in &doc.pieces {
                let _ = writeln!(
                    out,
                    "order {} ({:?}, fibre dimension {}):",
                    piece.piece.rho, piece.piece.base_kind, piece.piece.fiber_dim
                );
                graded_table(&mut out, &piece.cohomology, "H_c");
            }
            let _ = writeln!(out, "class: {}", doc.motivic_class);
            Ok(Outcome::ok(out))
        }
        Command::Floer(p) => {
            let fmt = format_or(cli.format, Text, &[Text, Json])?;
            let report: FloerReport = floer_report(p.n, p.d, p.m)?;
            if fmt == Json {
                return Ok(Outcome::ok(json(&report)));
            }
            let mut out = format!("n = {}, d = {}, m = {}\n", p.n, p.d, p.m);
            for (name, c) in [("degeneration", &report.degeneration), ("filtration", &report.filtration)] {
                let _ = writeln!(
                    out,
                    "  {name} condition: {}{}",
                    if c.holds { "holds" } else { "fails" },
                    if c.holds { String::new() } else { format!(" (k = {:?})", c.violating_k) }
                );
            }
            match &report.cohomology {
                Some(hf) if hf.is_zero() => out.push_str("HF^*(phi^m, +) = 0\n"),
                Some(hf) => {
                    let _ = writeln!(out, "HF^*(phi^m, +) = H_c^(* + {})(X_m):", report.shift);
                    graded_table(&mut out, hf, "HF");
                }
                None => out.push_str("HF^*(phi^m, +): not determined (a condition fails)\n"),
            }
            Ok(Outcome::ok(out))
        }
        Command::Nash(p) => {
            let fmt = format_or(cli.format, Text, &[Text, Json])?;
            let report: ValuationReport = valuation_report(p.n, p.d, p.m)?;
            if fmt == Json {
                return Ok(Outcome::ok(json(&report)));
            }
            let mut out = format!("n = {}, d = {}, m = {}\n", p.n, p.d, p.m);
            let list = |v: &[semihom_core::resolution::MDivisor]| {
                let names = v
                    .iter()
                    .map(|e| format!("E_{} {}", e.index, e.divisor.pair()))
                    .collect::<Vec<_>>()
                    .join(", ");
                if names.is_empty() {
                    "none".to_string()
                } else {
                    names
                }
            };
            let _ = writeln!(out, "  essential ({}): {}", report.essential.len(), list(&report.essential));
            let _ = writeln!(out, "  contact   ({}): {}", report.contact.len(), list(&report.contact));
            let _ = writeln!(out, "  dlt       ({}): {}", report.dlt.len(), list(&report.dlt));
            for (i, c) in &report.codims {
                let _ = writeln!(out, "  codim X_(m,{i}) = {c}");
            }
            if let Some(note) = &report.note {
                let _ = writeln!(out, "  note: {note}");
            }
            Ok(Outcome::ok(out))
        }
        Command::Scatter { nmax, dmax } => {
            let default = match &cli.out {
                Some(path) if path.extension().is_some_and(|e| e == "svg") => Svg,
                _ => Csv,
            };
            let fmt = format_or(cli.format, default, &[Csv, Svg, Json, Text])?;
            if !(3..=200).contains(nmax) || !(2..=200).contains(dmax) {
                return Err(CliError::Validation(
                    "scatter needs 3 ≤ nmax ≤ 200 and 2 ≤ dmax ≤ 200".into(),
                ));
            }
            let grid: Vec<ScatterPoint> = scatter_grid(3..=*nmax, 2..=*dmax)?;
            Ok(Outcome::ok(match fmt {
                Svg => scatter_svg(&grid),
                Json => json(&grid),
                _ => scatter_csv(&grid),
            }))
        }
        Command::Verify { f, m, primes, budget } => {
            let fmt = format_or(cli.format, Text, &[Text, Json])?;
            let poly = read_poly(f)?;
            if primes.is_empty() {
                return Err(CliError::Validation("no primes given".into()));
            }
            let reports = primes
                .iter()
                .map(|&p| count_contact_jets(&poly, *m, p, *budget))
                .collect::<semihom_core::Result<Vec<_>>>()?;
            let all_match = reports.iter().all(JetCountReport::matches);
            let doc = VerifyDoc {
                f: poly,
                m: *m,
                reports,
                all_match,
            };
            let code = if all_match { EXIT_OK } else { EXIT_MISMATCH };
            if fmt == Json {
                return Ok(Outcome { output: json(&doc), code });
            }
            let mut out = format!("f = {}, m = {}\n", doc.f, doc.m);
            let _ = writeln!(out, "  {:>3}  {:>5}  {:>14}  {:>14}  result", "p", "order", "count", "predicted");
            for r in &doc.reports {
                let orders: std::collections::BTreeSet<u32> =
                    r.by_order.keys().chain(r.predicted_by_order.keys()).copied().collect();
                if orders.is_empty() {
                    let _ = writeln!(out, "  {:>3}  {:>5}  {:>14}  {:>14}  ok", r.p, "-", 0, 0);
                }
                for rho in orders {
                    let got = r.by_order.get(&rho).copied().unwrap_or(0);
                    let want = r.predicted_by_order.get(&rho).copied().unwrap_or(0);
                    let _ = writeln!(
                        out,
                        "  {:>3}  {:>5}  {:>14}  {:>14}  {}",
                        r.p,
                        rho,
                        got,
                        want,
                        if got == want { "ok" } else { "MISMATCH" }
                    );
                }
            }
            let _ = writeln!(out, "{}", if all_match { "all strata match" } else { "mismatch found" });
            Ok(Outcome { output: out, code })
        }
        Command::Euler(p) => {
            let fmt = format_or(cli.format, Text, &[Text, Json])?;
            let chi = contact_euler(p.n, p.d, p.m)?;
            let lambda = contact_euler_closed_form(p.n, p.d, p.m);
            let doc = EulerDoc {
                n: p.n,
                d: p.d,
                m: p.m,
                matches: chi == lambda,
                contact_euler: chi,
                lefschetz_number: lambda,
            };
            let code = if doc.matches { EXIT_OK } else { EXIT_MISMATCH };
            let output = if fmt == Json {
                json(&doc)
            } else {
                format!(
                    "chi_c(X_m) = {}\nLefschetz(phi^m) = {}\n{}\n",
                    doc.contact_euler,
                    doc.lefschetz_number,
                    if doc.matches { "match" } else { "MISMATCH" }
                )
            };
            Ok(Outcome { output, code })
        }
    }
}

/// A literal polynomial, or a path to a file holding one.
fn read_poly(arg: &str) -> CliResult<SparseIntPoly> {
    let path = std::path::Path::new(arg);
    let text = if !arg.trim_start().starts_with('{') && path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    Ok(SparseIntPoly::parse(text.trim())?)
}
