//! `antichain` command-line tool.
//!
//! Exit codes: 0 feasible / achieved / verified, 1 infeasible / refuted /
//! failed verification, 2 unknown (budget exhausted).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use antichain::bounds::{bounds_report, construction_applicability, Applicability};
use antichain::cert::{
    read_certificate_file, regenerate_corpus, to_text, verify_certificate, Certificate,
    CorpusConfig, Provenance,
};
use antichain::construct::build_construction;
use antichain::search::{
    certify_threshold_range_with, feasible_exact_profile_with, g_exact_with, parse_level_spec,
    symmetry_prune_config, CertifyStatus, GmaxOutcome, Outcome, ProfileInstance, SearchBudget,
    SearchStats, Verdict,
};

#[derive(Debug, Parser)]
#[command(name = "antichain", version)]
#[command(about = "Construct, search and verify antichains with many well-populated levels")]
struct Cli {
    /// Machine-readable report on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check certificate files.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Build the explicit construction reaching n - 3 levels.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value = "strict")]
        mode: Mode,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Search(SearchCommand),
    /// Closed-form bounds for r, optionally at a given n.
    Bounds {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Regenerate the certificate corpus.
    Corpus {
        #[arg(long)]
        out: PathBuf,
        /// Also attempt n = 2r + 5 for r up to 11.
        #[arg(long)]
        heavy: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    /// Only when the logarithmic threshold holds.
    Strict,
    /// Also when only the construction's prerequisites hold.
    BestEffort,
}

#[derive(Debug, Subcommand)]
enum SearchCommand {
    /// Decide one exact level profile.
    Profile {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: usize,
        /// Levels such as `2..6,8`.
        #[arg(long)]
        levels: String,
        #[command(flatten)]
        common: SearchArgs,
    },
    /// Maximum number of levels for (n, r).
    Gmax {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        common: SearchArgs,
    },
    /// Try to reach n - 3 levels for every n in a range.
    Certify {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[command(flatten)]
        common: SearchArgs,
    },
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long, env = "ANTICHAIN_BUDGET_SECS")]
    budget_secs: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget> {
        let wall_time = match self.budget_secs {
            Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => bail!("--budget-secs must be a nonnegative number, got {s}"),
            None => None,
        };
        Ok(SearchBudget {
            max_nodes: self.budget_nodes,
            wall_time,
            threads: self.threads.max(1),
        })
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    no_symmetry: bool,
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Print search statistics as JSON.
    #[arg(long)]
    stats_json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Verify { files } => verify(&files, json),
        Command::Construct { n, r, mode, out } => construct(n, r, mode, out.as_deref(), json),
        Command::Search(cmd) => search(cmd, json),
        Command::Bounds { r, n } => {
            let report = bounds_report(r, n)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("r = {}", report.r);
                if let (Some(n), Some(g)) = (report.n, report.g_upper) {
                    println!("g({n}, {}) <= {g}", report.r);
                }
                match report.n0_exact {
                    Some(v) => println!("n0 = {v}"),
                    None => println!("{} <= n0 <= {}", report.n0_lower, report.n0_upper),
                }
                for (k, v) in &report.notes {
                    println!("{k}: {v}");
                }
            }
            Ok(0)
        }
        Command::Corpus { out, heavy, budget } => {
            let mut config = if heavy {
                CorpusConfig::heavy()
            } else {
                CorpusConfig::default()
            };
            if budget.budget_nodes.is_some() || budget.budget_secs.is_some() {
                config.budget = budget.budget()?;
            }
            config.budget.threads = budget.threads.max(1);
            let manifest = regenerate_corpus(&out, &config)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&manifest)?);
            } else {
                for e in &manifest.entries {
                    println!(
                        "r={} n={} {:?} {:?} {} ms",
                        e.r, e.n, e.method, e.status, e.elapsed_ms
                    );
                }
                println!("wrote {} files to {}", manifest.files.len(), out.display());
            }
            Ok(if manifest.unknown.is_empty() { 0 } else { 2 })
        }
    }
}

fn verify(files: &[PathBuf], json: bool) -> Result<u8> {
    let mut reports = Vec::new();
    let mut ok = true;
    for path in files {
        let certs =
            read_certificate_file(path).with_context(|| format!("reading {}", path.display()))?;
        for (i, c) in certs.iter().enumerate() {
            let report = verify_certificate(c);
            ok &= report.all_ok();
            if !json {
                println!(
                    "{} #{} n={} r={} levels={} {}",
                    path.display(),
                    i + 1,
                    c.n(),
                    c.r,
                    report.num_levels,
                    if report.all_ok() { "ok" } else { "FAILED" }
                );
            }
            reports.push(json!({
                "file": path.display().to_string(),
                "index": i,
                "n": c.n(),
                "r": c.r,
                "provenance": c.provenance,
                "report": report,
            }));
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    }
    Ok(if ok { 0 } else { 1 })
}

fn emit(certs: &[Certificate], out: Option<&Path>, json: bool) -> Result<Option<String>> {
    let mut text = String::new();
    for c in certs {
        text.push_str(&to_text(c)?);
    }
    match out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(None)
        }
        None if json => Ok(Some(text)),
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}

fn construct(n: u32, r: u32, mode: Mode, out: Option<&Path>, json: bool) -> Result<u8> {
    let applicability = construction_applicability(n, r);
    let allowed = matches!(
        (&applicability, mode),
        (Applicability::Strict(_), _) | (Applicability::Relaxed(_), Mode::BestEffort)
    );
    if !allowed {
        let why = match &applicability {
            Applicability::Inapplicable(v) => v.to_string(),
            _ => "below the threshold; --mode best-effort accepts it".to_string(),
        };
        if json {
            println!(
                "{}",
                json!({ "n": n, "r": r, "applicability": applicability })
            );
        } else {
            eprintln!("construction does not apply to n = {n}, r = {r}: {why}");
        }
        return Ok(1);
    }
    let c = build_construction(n, r)?;
    let tier = c.tier();
    let cert = Certificate::new(c.family, r as usize, tier.into());
    let text = emit(std::slice::from_ref(&cert), out, json)?;
    if json {
        println!(
            "{}",
            json!({
                "n": n,
                "r": r,
                "provenance": cert.provenance,
                "report": verify_certificate(&cert),
                "certificate": text,
            })
        );
    }
    Ok(0)
}

fn print_stats(stats: &SearchStats, wanted: bool) -> Result<()> {
    if wanted {
        println!("{}", serde_json::to_string(stats)?);
    }
    Ok(())
}

fn search(cmd: SearchCommand, json: bool) -> Result<u8> {
    match cmd {
        SearchCommand::Profile {
            n,
            r,
            levels,
            common,
        } => {
            let levels = parse_level_spec(&levels)?;
            let inst = ProfileInstance::new(n, r, levels)?;
            let config = symmetry_prune_config(!common.no_symmetry);
            let out = feasible_exact_profile_with(&inst, &common.budget.budget()?, &config);
            let verdict = out.verdict();
            let certs: Vec<Certificate> = match &out.outcome {
                Outcome::Feasible(f) => vec![Certificate::new(f.clone(), r, Provenance::Search)],
                _ => Vec::new(),
            };
            if !json {
                println!("{}", verdict_word(verdict));
            }
            let text = emit(&certs, common.out.as_deref(), json)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "n": n,
                        "r": r,
                        "levels": inst.levels,
                        "verdict": verdict,
                        "stats": out.stats,
                        "certificate": text,
                    })
                );
            } else {
                print_stats(&out.stats, common.stats_json)?;
            }
            Ok(verdict_code(verdict))
        }
        SearchCommand::Gmax { n, r, common } => {
            if !(1..=64).contains(&n) || r == 0 {
                bail!("gmax needs 1 <= n <= 64 and r >= 1");
            }
            let config = symmetry_prune_config(!common.no_symmetry);
            let rep = g_exact_with(n, r, &common.budget.budget()?, &config);
            let (lo, hi) = rep.outcome.range();
            let (kind, code) = match rep.outcome {
                GmaxOutcome::Exact { .. } => ("exact", 0),
                GmaxOutcome::LowerBound { .. } => ("lower-bound", 2),
                GmaxOutcome::Interval { .. } => ("interval", 2),
            };
            let certs: Vec<Certificate> = rep
                .outcome
                .witness()
                .map(|w| Certificate::new(w.clone(), r, Provenance::Search))
                .into_iter()
                .collect();
            if !json {
                if lo == hi {
                    println!("g({n}, {r}) = {lo}");
                } else {
                    println!("{lo} <= g({n}, {r}) <= {hi}");
                }
            }
            let text = emit(&certs, common.out.as_deref(), json)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "n": n,
                        "r": r,
                        "outcome": kind,
                        "lo": lo,
                        "hi": hi,
                        "instances": rep.instances,
                        "stats": rep.stats,
                        "certificate": text,
                    })
                );
            } else {
                print_stats(&rep.stats, common.stats_json)?;
            }
            Ok(code)
        }
        SearchCommand::Certify {
            r,
            from,
            to,
            common,
        } => {
            let config = symmetry_prune_config(!common.no_symmetry);
            let entries =
                certify_threshold_range_with(r, from, to, &common.budget.budget()?, &config)?;
            let mut certs = Vec::new();
            let mut rows: Vec<Value> = Vec::new();
            let (mut refuted, mut unknown) = (false, false);
            for e in &entries {
                let (status, range) = match &e.status {
                    CertifyStatus::Achieved(f) => {
                        certs.push(Certificate::new(f.clone(), r, Provenance::Search));
                        ("achieved", None)
                    }
                    CertifyStatus::Refuted { best } => {
                        refuted = true;
                        ("refuted", Some(best.range()))
                    }
                    CertifyStatus::Unknown { best } => {
                        unknown = true;
                        ("unknown", best.as_ref().map(|b| b.range()))
                    }
                };
                if !json {
                    match range {
                        Some((lo, hi)) => println!("n={} {status} (g in {lo}..={hi})", e.n),
                        None => println!("n={} {status}", e.n),
                    }
                    print_stats(&e.stats, common.stats_json)?;
                }
                rows.push(json!({ "n": e.n, "status": status, "range": range, "stats": e.stats }));
            }
            let text = emit(&certs, common.out.as_deref(), json)?;
            if json {
                println!(
                    "{}",
                    json!({ "r": r, "entries": rows, "certificates": text })
                );
            }
            Ok(if unknown {
                2
            } else if refuted {
                1
            } else {
                0
            })
        }
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Feasible => "feasible",
        Verdict::Infeasible => "infeasible",
        Verdict::Unknown => "unknown",
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Feasible => 0,
        Verdict::Infeasible => 1,
        Verdict::Unknown => 2,
    }
}
