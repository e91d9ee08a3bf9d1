//! The `qgforge` command line.
//!
//! Construction commands (`product`, `smash`, `skew-smash`, `quotient`)
//! write a canonical JSON magma file with provenance metadata, to
//! `--output` or standard output. Report commands print human-readable
//! text, or with `--json` a JSON document carrying `schema_version`.
//!
//! Exit status: 0 success, 1 verification failures, 2 input or
//! validation errors, 3 capacity or budget exhaustion.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{QgError, Result};
use crate::identities::{self, IdentityConfig, IdentityReport, BASIC_IDS};
use crate::io::{self, FactorsFile, FORMAT_VERSION};
use crate::magma::FiniteMagma;
use crate::products::{direct_product, skew_smashed_product, smashed_product, validate_skew_factors, ValidationReport};
use crate::search::{count_latin_squares, run_search, SearchOutcome, SearchResult, SearchTarget, SearchTask, Witness};
use crate::structure::{fan_certificate, quotient, structure_report};
use crate::subset::ElementSubset;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "qgforge",
    version,
    about = "Finite quasigroups and fan quasigroups as Cayley tables"
)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Axioms, units, nuclei, center and fan of a magma.
    Analyze { file: PathBuf },
    /// Direct product of one or more magmas.
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the plain text format instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Smashed product of two left quasigroups.
    Smash {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        factors: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        text: bool,
    },
    /// Skew smashed product of two fan quasigroups.
    SkewSmash {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        factors: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        text: bool,
    },
    /// Quotient of a fan quasigroup by a normal subgroup.
    Quotient {
        file: PathBuf,
        /// Comma-separated elements, or one of `fan`, `nucleus`, `center`.
        #[arg(long)]
        subgroup: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        text: bool,
    },
    /// Exhaustively checks the identity suite.
    Verify {
        file: PathBuf,
        /// Selection such as `70-79,82-94,60-65,80-81`; default all.
        #[arg(long)]
        identities: Option<String>,
        /// Four-variable identities are skipped above this order.
        #[arg(long, default_value_t = IdentityConfig::default().quartic_max_order)]
        quartic_max_order: usize,
        /// Failing tuples recorded per identity.
        #[arg(long, default_value_t = IdentityConfig::default().max_recorded_failures)]
        max_failures: usize,
    },
    /// Seeded search for witnesses.
    Search {
        #[arg(long)]
        target: SearchTarget,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        order_a: usize,
        #[arg(long, default_value_t = 1)]
        order_b: usize,
        /// Order of the shared normal subgroup for the skew targets.
        #[arg(long)]
        n_order: Option<usize>,
        /// Where to write the replayable result file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Counts Latin squares of one order.
    Census {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        reduced: bool,
    },
    /// Re-verifies a search result file from scratch.
    Replay {
        file: PathBuf,
        /// Also rerun the recorded task and compare the results.
        #[arg(long)]
        rerun: bool,
    },
}

/// A search result as written to disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub result: SearchResult,
}

struct Outcome {
    code: i32,
    human: String,
    json: Value,
}

impl Outcome {
    fn ok(human: String, json: Value) -> Self {
        Outcome { code: 0, human, json }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one invocation, writing reports to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    let json = cli.json;
    match dispatch(cli.command, out) {
        Ok(outcome) => {
            let text = if json && !outcome.json.is_null() {
                io::to_canonical_json(&outcome.json).expect("reports serialize")
            } else if json {
                String::new()
            } else {
                outcome.human
            };
            let _ = out.write_all(text.as_bytes());
            outcome.code
        }
        Err(e) => {
            if json {
                let body = json!({
                    "schema_version": SCHEMA_VERSION,
                    "error": {"kind": error_kind(&e), "message": e.to_string()},
                });
                let _ = out.write_all(io::to_canonical_json(&body).expect("errors serialize").as_bytes());
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn error_kind(e: &QgError) -> &'static str {
    match e {
        QgError::Construction { .. } => "construction",
        QgError::AxiomViolation(_) => "axiom-violation",
        QgError::Precondition(_) => "precondition",
        QgError::Capacity(_) => "capacity",
        QgError::SearchExhausted(_) => "search-exhausted",
        QgError::Internal(_) => "internal",
        QgError::Parse(_) => "parse",
        QgError::Io(_) => "io",
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QGFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| QgError::Parse(format!("QGFORGE_THREADS must be a positive integer, got '{raw}'")))?;
    // A second call in the same process finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Analyze { file } => analyze(&file),
        Command::Product { files, output, text } => {
            let magmas = files.iter().map(|f| io::read_magma(f)).collect::<Result<Vec<_>>>()?;
            let m = direct_product(&magmas)?;
            let meta = json!({"operation": "product", "inputs": paths(&files)});
            emit(&m, meta, output.as_deref(), text, out)
        }
        Command::Smash {
            a,
            b,
            factors,
            output,
            text,
        } => {
            let (ma, mb) = (io::read_magma(&a)?, io::read_magma(&b)?);
            let file = io::read_factors(&factors)?;
            let FactorsFile::Smash(sf) = &file else {
                return Err(QgError::Parse(format!(
                    "{}: expected kind \"smash\"",
                    factors.display()
                )));
            };
            let f = sf.to_factors()?;
            let m = smashed_product(&ma, &mb, &f)?;
            let meta = json!({
                "operation": "smash",
                "inputs": paths(&[a, b]),
                "right_quasigroup": m.is_right_quasigroup(),
                "factors": serde_json::to_value(&file)?,
            });
            emit(&m, meta, output.as_deref(), text, out)
        }
        Command::SkewSmash {
            a,
            b,
            factors,
            output,
            text,
        } => {
            let (ma, mb) = (io::read_magma(&a)?, io::read_magma(&b)?);
            let file = io::read_factors(&factors)?;
            let FactorsFile::Skew(sf) = &file else {
                return Err(QgError::Parse(format!("{}: expected kind \"skew\"", factors.display())));
            };
            let f = sf.to_factors()?;
            let report = validate_skew_factors(&ma, &mb, &f);
            if !report.is_valid() {
                return Ok(Outcome {
                    code: 2,
                    human: validation_text(&report),
                    json: json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": "skew-smash",
                        "valid": false,
                        "validation": report,
                    }),
                });
            }
            let g = skew_smashed_product(&ma, &mb, &f)?;
            let meta = json!({
                "operation": "skew-smash",
                "inputs": paths(&[a, b]),
                "fan": g.certificate.fan().to_vec(),
                "factors": serde_json::to_value(&file)?,
            });
            emit(&g.magma, meta, output.as_deref(), text, out)
        }
        Command::Quotient {
            file,
            subgroup,
            output,
            text,
        } => {
            let m = io::read_magma(&file)?;
            let n1 = parse_subgroup(&m, &subgroup)?;
            let q = quotient(&m, &n1)?;
            let meta = json!({
                "operation": "quotient",
                "inputs": paths(&[file]),
                "subgroup": q.subgroup.to_vec(),
                "cosets": q.cosets,
                "projection": q.projection,
            });
            emit(&q.quotient, meta, output.as_deref(), text, out)
        }
        Command::Verify {
            file,
            identities,
            quartic_max_order,
            max_failures,
        } => {
            let m = io::read_magma(&file)?;
            let config = IdentityConfig {
                quartic_max_order,
                max_recorded_failures: max_failures,
            };
            let ids = match &identities {
                Some(sel) => identities::parse_identity_selection(sel)?,
                None => identities::all_identity_ids(),
            };
            verify(&m, &ids, &config)
        }
        Command::Search {
            target,
            seed,
            budget,
            order_a,
            order_b,
            n_order,
            output,
        } => {
            let task = SearchTask {
                target,
                order_a,
                order_b,
                n_order,
                seed,
                budget,
            };
            search(task, output.as_deref())
        }
        Command::Census { order, reduced } => {
            let count = count_latin_squares(order, reduced)?;
            Ok(Outcome::ok(
                format!("{count}\n"),
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "census",
                    "order": order,
                    "reduced": reduced,
                    "count": count,
                }),
            ))
        }
        Command::Replay { file, rerun } => replay(&file, rerun),
    }
}

fn paths(files: &[PathBuf]) -> Vec<String> {
    files.iter().map(|p| p.display().to_string()).collect()
}

fn emit(m: &FiniteMagma, metadata: Value, output: Option<&Path>, text: bool, out: &mut dyn Write) -> Result<Outcome> {
    let body = if text {
        io::to_text(m)
    } else {
        io::magma_to_json(m, Some(metadata.clone()))
    };
    let operation = metadata["operation"].clone();
    match output {
        Some(path) => {
            std::fs::write(path, &body)?;
            Ok(Outcome::ok(
                format!("wrote {} (order {})\n", path.display(), m.order()),
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": operation,
                    "output": path.display().to_string(),
                    "order": m.order(),
                }),
            ))
        }
        None => {
            out.write_all(body.as_bytes())?;
            // The file itself is the report; nothing more to print.
            Ok(Outcome {
                code: 0,
                human: String::new(),
                json: Value::Null,
            })
        }
    }
}

fn parse_elements(order: usize, spec: &str) -> Result<ElementSubset> {
    let elems = spec
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| QgError::Parse(format!("'{s}' is not an element")))
        })
        .collect::<Result<Vec<_>>>()?;
    ElementSubset::from_elements(order, elems)
}

fn parse_subgroup(m: &FiniteMagma, spec: &str) -> Result<ElementSubset> {
    match spec.trim() {
        "fan" | "nucleus" | "center" => {
            let cert = fan_certificate(m)
                .ok_or_else(|| QgError::Precondition("quotients are taken of fan quasigroups only".into()))?;
            Ok(match spec.trim() {
                "fan" => cert.fan().clone(),
                "nucleus" => cert.nucleus().clone(),
                _ => cert.center().clone(),
            })
        }
        other => parse_elements(m.order(), other),
    }
}

fn fmt_set(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn analyze(file: &Path) -> Result<Outcome> {
    let m = io::read_magma(file)?;
    let r = structure_report(&m);
    let cert = fan_certificate(&m);
    let fan = cert.as_ref().map(|c| c.fan().to_vec());
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "order": m.order(),
        "left_quasigroup": m.is_left_quasigroup(),
        "right_quasigroup": m.is_right_quasigroup(),
        "associative": m.is_associative(),
        "commutative": m.is_commutative(),
        "unit": r.unit,
        "left_units": r.left_units,
        "right_units": r.right_units,
        "commutant": r.com.to_vec(),
        "left_nucleus": r.n_l.to_vec(),
        "middle_nucleus": r.n_m.to_vec(),
        "right_nucleus": r.n_r.to_vec(),
        "nucleus": r.nucleus.to_vec(),
        "center": r.center.to_vec(),
        "fan_quasigroup": cert.is_some(),
        "fan": fan,
    });
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut h = String::new();
    h += &format!("order            {}\n", m.order());
    h += &format!("left quasigroup  {}\n", yn(m.is_left_quasigroup()));
    h += &format!("right quasigroup {}\n", yn(m.is_right_quasigroup()));
    h += &format!("associative      {}\n", yn(m.is_associative()));
    h += &format!("commutative      {}\n", yn(m.is_commutative()));
    h += &format!("unit             {}\n", r.unit.map_or("none".into(), |u| u.to_string()));
    h += &format!("left units       {}\n", fmt_set(&r.left_units));
    h += &format!("right units      {}\n", fmt_set(&r.right_units));
    h += &format!("commutant        {}\n", r.com);
    h += &format!("left nucleus     {}\n", r.n_l);
    h += &format!("middle nucleus   {}\n", r.n_m);
    h += &format!("right nucleus    {}\n", r.n_r);
    h += &format!("nucleus          {}\n", r.nucleus);
    h += &format!("center           {}\n", r.center);
    match &cert {
        Some(c) => h += &format!("fan quasigroup   yes, fan {}\n", c.fan()),
        None => h += "fan quasigroup   no\n",
    }
    Ok(Outcome::ok(h, json))
}

fn verify(m: &FiniteMagma, ids: &[&str], config: &IdentityConfig) -> Result<Outcome> {
    let cert = fan_certificate(m);
    let (runnable, unavailable): (Vec<&str>, Vec<&str>) =
        ids.iter().partition(|id| cert.is_some() || BASIC_IDS.contains(id));
    let reports: Vec<IdentityReport> = identities::verify(m, cert.as_ref(), &runnable, config)?;
    let failures: u64 = reports.iter().map(|r| r.failure_count).sum();
    let skipped: Vec<&str> = reports
        .iter()
        .filter(|r| r.skipped.is_some())
        .map(|r| r.identity_id.as_str())
        .collect();
    let passed = failures == 0 && unavailable.is_empty();
    let mut h = String::new();
    if !unavailable.is_empty() {
        h += &format!(
            "not a fan quasigroup; {} identities cannot be evaluated: {}\n",
            unavailable.len(),
            unavailable.join(", ")
        );
    }
    for r in &reports {
        let status = match (&r.skipped, r.failure_count) {
            (Some(why), _) => format!("skipped ({why})"),
            (None, 0) => format!("ok ({} cases)", r.domain_size),
            (None, k) => format!("FAILED {k} of {} cases", r.domain_size),
        };
        h += &format!("{:<5} {status}\n", r.identity_id);
        for f in &r.failures {
            h += &format!("      args {:?}: lhs {} rhs {}\n", f.args, f.lhs, f.rhs);
        }
    }
    h += &format!(
        "{} identities, {failures} failures, {} skipped\n",
        reports.len() + unavailable.len(),
        skipped.len()
    );
    Ok(Outcome {
        code: if passed { 0 } else { 1 },
        human: h,
        json: json!({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "order": m.order(),
            "fan_quasigroup": cert.is_some(),
            "passed": passed,
            "total_failures": failures,
            "unavailable": unavailable,
            "reports": reports,
        }),
    })
}

fn witness_summary(w: &Witness) -> String {
    match w {
        Witness::LeftNotRight {
            candidate,
            product,
            failure,
            ..
        } => format!(
            "candidate {candidate}: order {} left quasigroup, column {:?} takes {:?} with {} solutions\n",
            product.order(),
            failure.column,
            failure.target,
            failure.solutions.len()
        ),
        Witness::NontrivialFan {
            candidate,
            product,
            fan,
            ..
        } => {
            format!(
                "candidate {candidate}: order {} fan quasigroup with fan {}\n",
                product.order(),
                fmt_set(fan)
            )
        }
        Witness::OneSidedInverseGap {
            candidate,
            product,
            gap_count,
            gaps,
            ..
        } => {
            let mut s = format!(
                "candidate {candidate}: order {} fan quasigroup with {gap_count} elements a where e/a != a\\e\n",
                product.order()
            );
            for g in gaps.iter().take(8) {
                s += &format!(
                    "  a = {}: e/a = {}, a\\e = {}\n",
                    g.element, g.right_quotient, g.left_quotient
                );
            }
            s
        }
        Witness::LatinSquareCensus { order, reduced, total } => {
            format!("order {order}: {reduced} reduced, {total} total Latin squares\n")
        }
    }
}

fn search(task: SearchTask, output: Option<&Path>) -> Result<Outcome> {
    let result = run_search(&task)?;
    let file = SearchFile {
        format_version: FORMAT_VERSION,
        result,
    };
    let canonical = io::to_canonical_json(&file)?;
    if let Some(path) = output {
        std::fs::write(path, &canonical)?;
    }
    let r = &file.result;
    let mut h = format!(
        "{} seed {} budget {}: {} candidates tried\n",
        r.task.target, r.task.seed, r.task.budget, r.stats.candidates_tried
    );
    for (why, k) in &r.stats.rejections {
        h += &format!("  rejected {k}: {why}\n");
    }
    let code = match &r.outcome {
        SearchOutcome::Found { witness } => {
            h += &witness_summary(witness);
            0
        }
        SearchOutcome::Exhausted => {
            h += "budget exhausted without a witness\n";
            3
        }
    };
    if let Some(path) = output {
        h += &format!("wrote {}\n", path.display());
    }
    Ok(Outcome {
        code,
        human: h,
        json: serde_json::to_value(&file)?,
    })
}

fn replay(path: &Path, rerun: bool) -> Result<Outcome> {
    let file: SearchFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if file.format_version != FORMAT_VERSION {
        return Err(QgError::Parse(format!(
            "unsupported format_version {}",
            file.format_version
        )));
    }
    let mut problems = match &file.result.outcome {
        SearchOutcome::Found { witness } => witness.reverify()?,
        SearchOutcome::Exhausted => Vec::new(),
    };
    if rerun && run_search(&file.result.task)? != file.result {
        problems.push("rerunning the recorded task gives a different result".into());
    }
    let found = matches!(file.result.outcome, SearchOutcome::Found { .. });
    let code = match (problems.is_empty(), found) {
        (false, _) => 1,
        (true, true) => 0,
        (true, false) => 3,
    };
    let mut h = String::new();
    if !found {
        h += "result records an exhausted search; nothing to re-verify\n";
    }
    for p in &problems {
        h += &format!("problem: {p}\n");
    }
    if code == 0 {
        h += "witness re-verified\n";
    }
    Ok(Outcome {
        code,
        human: h,
        json: json!({
            "schema_version": SCHEMA_VERSION,
            "command": "replay",
            "found": found,
            "verified": problems.is_empty() && found,
            "problems": problems,
        }),
    })
}

fn validation_text(report: &ValidationReport) -> String {
    let mut h = format!("skew factors fail validation: {} issue(s)\n", report.issue_count);
    for issue in &report.issues {
        h += &format!("  {issue:?}\n");
    }
    h
}
