use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use radhom_core::algebra::BoundQuiverAlgebra;
use radhom_core::linalg::Field;
use radhom_core::rep::Rep;
use radhom_core::resolve::{Homology, Limits, DEFAULT_BOUND, DEFAULT_MAX_DIM};
use radhom_core::verify::{run_sweep, CheckName, Family, GeneratorSpec, Subject, SweepConfig, Verdict, VerdictReport};

const USAGE_ERROR: u8 = 2;
const FAIL: u8 = 3;
const CANDIDATE: u8 = 4;

#[derive(Parser)]
#[command(name = "radhom", version, about = "Homological dimensions of bound quiver algebras")]
struct Cli {
    /// Resolution bound B.
    #[arg(long, global = true, env = "RADHOM_BOUND", default_value_t = DEFAULT_BOUND,
          value_parser = positive)]
    bound: usize,
    /// Largest dimension of a single projective term.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
    /// Field override: a prime or Q.
    #[arg(long, global = true)]
    field: Option<Field>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dimension profile of an algebra.
    Dims { path: PathBuf },
    /// Run theorem checks on an algebra.
    Check {
        path: PathBuf,
        /// Comma-separated check names; all checks by default.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
    /// Generate algebras and run checks over all of them.
    Sweep {
        /// Families as name:count, e.g. nakayama:1000,monomial:500.
        #[arg(long, value_delimiter = ',', default_value = "nakayama:1000,monomial:1000,truncated:500,local:300")]
        families: Vec<String>,
        /// JSON file with a list of generator specs; replaces --families.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
    /// Dimensions of one module given as a literal.
    Module {
        path: PathBuf,
        /// e.g. "MODULE left 1 1 ; ARROWMAT a = [[1]]"
        #[arg(long)]
        module: String,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let limits = Limits { bound: cli.bound, max_dim: cli.max_dim };
    match &cli.command {
        Command::Dims { path } => {
            let h = Homology::new(load(path, cli.field)?, limits);
            let p = h.profile();
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&p)? + "\n",
                Format::Table | Format::Csv => {
                    let v = serde_json::to_value(&p)?;
                    let rows: Vec<(String, String)> =
                        v.as_object().expect("object").iter().map(|(k, v)| (k.clone(), plain(v))).collect();
                    if cli.format == Format::Table {
                        key_values(&rows)
                    } else {
                        let (k, v): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
                        format!("{}\n{}\n", k.join(","), v.iter().map(|s| csv_field(s)).collect::<Vec<_>>().join(","))
                    }
                }
            };
            emit(cli, &text)?;
            Ok(0)
        }
        Command::Check { path, checks } => {
            let checks = parse_checks(checks)?;
            let subject = Subject::new(load(path, cli.field)?, limits);
            let reports = subject.run_all(&checks);
            emit(cli, &render_reports(cli.format, &reports)?)?;
            Ok(exit_code(reports.iter().map(|r| r.verdict)))
        }
        Command::Sweep { families, config, checks } => {
            let checks = parse_checks(checks)?;
            let seed = cli.seed.ok_or_else(|| anyhow!("sweep needs --seed"))?;
            let mut specs: Vec<GeneratorSpec> = match config {
                Some(p) => serde_json::from_str(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)
                    .with_context(|| format!("parsing {}", p.display()))?,
                None => families
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let (name, count) = f.split_once(':').ok_or_else(|| anyhow!("expected family:count, got {f:?}"))?;
                        let family: Family = name.parse().map_err(|e: String| anyhow!(e))?;
                        let count: usize = count.parse().with_context(|| format!("bad count in {f:?}"))?;
                        Ok(GeneratorSpec::new(family, count, seed.wrapping_add(i as u64)))
                    })
                    .collect::<Result<_>>()?,
            };
            if let Some(field) = cli.field {
                specs.iter_mut().for_each(|s| s.field = field);
            }
            let sweep = SweepConfig { specs, checks, limits, seed, workers: cli.workers };
            let outcome = run_sweep(&sweep);
            let summary = &outcome.summary;
            let text = match cli.format {
                Format::Json => summary.to_json(true) + "\n",
                Format::Table => {
                    let mut s = format!("{} algebras, bound {}, seed {}\n", summary.algebras, summary.bound, seed);
                    s.push_str(&format!(
                        "{:<20} {:>7} {:>13} {:>12} {:>6} {:>14} {:>10}\n",
                        "check", "pass", "pass_at_bound", "inconclusive", "fail", "not_applicable", "candidates"
                    ));
                    for c in &summary.checks {
                        s.push_str(&format!(
                            "{:<20} {:>7} {:>13} {:>12} {:>6} {:>14} {:>10}\n",
                            c.name,
                            c.pass,
                            c.pass_at_bound,
                            c.inconclusive,
                            c.fail,
                            c.not_applicable,
                            c.candidates.len()
                        ));
                    }
                    let _ = writeln!(s, "wall time {:.1}s", summary.timing.wall_time_s);
                    s
                }
                Format::Csv => {
                    let mut s = "check,pass,pass_at_bound,inconclusive,fail,not_applicable,candidates\n".to_string();
                    for c in &summary.checks {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            c.name,
                            c.pass,
                            c.pass_at_bound,
                            c.inconclusive,
                            c.fail,
                            c.not_applicable,
                            c.candidates.len()
                        );
                    }
                    s
                }
            };
            emit(cli, &text)?;
            let dir = cli.out.as_deref().and_then(Path::parent).unwrap_or(Path::new("."));
            for r in outcome.flagged() {
                let file = persist_witness(dir, r)?;
                eprintln!("{} on {}: witness written to {}", r.verdict, r.check, file.display());
            }
            Ok(exit_code(outcome.reports.iter().map(|r| r.verdict)))
        }
        Command::Module { path, module } => {
            let a = load(path, cli.field)?;
            let m = Rep::parse_literal(a.clone(), module).context("parsing module")?;
            let h = Homology::new(a, limits);
            let rows = vec![
                ("side".to_string(), m.side().to_string()),
                ("dims".to_string(), format!("{:?}", m.dims())),
                ("proj_dim".to_string(), h.proj_dim(&m).to_string()),
                ("inj_dim".to_string(), h.inj_dim(&m).to_string()),
                ("dom_dim".to_string(), h.dominant_dimension(&m).to_string()),
                ("codom_dim".to_string(), h.codominant_dimension(&m).to_string()),
                ("projective_injective".to_string(), h.is_projective_injective(&m).to_string()),
            ];
            let text = match cli.format {
                Format::Table => key_values(&rows),
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> =
                        rows.into_iter().map(|(k, v)| (k, serde_json::Value::String(v))).collect();
                    serde_json::to_string_pretty(&map)? + "\n"
                }
                Format::Csv => {
                    let (k, v): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
                    format!("{}\n{}\n", k.join(","), v.iter().map(|s| csv_field(s)).collect::<Vec<_>>().join(","))
                }
            };
            emit(cli, &text)?;
            Ok(0)
        }
    }
}

fn load(path: &Path, field: Option<Field>) -> Result<Arc<BoundQuiverAlgebra>> {
    let mut text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Some(f) = field {
        text = text
            .lines()
            .map(|l| if l.trim_start().starts_with("FIELD") { format!("FIELD {f}") } else { l.to_string() })
            .collect::<Vec<_>>()
            .join("\n");
    }
    let a = BoundQuiverAlgebra::parse(&text).with_context(|| format!("{}", path.display()))?;
    Ok(Arc::new(a))
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_checks(names: &[String]) -> Result<Vec<CheckName>> {
    if names.is_empty() {
        return Ok(CheckName::ALL.to_vec());
    }
    names.iter().map(|n| n.trim().parse::<CheckName>().map_err(|e| anyhow!(e))).collect()
}

fn exit_code(verdicts: impl Iterator<Item = Verdict>) -> u8 {
    match verdicts.max() {
        Some(Verdict::CounterexampleCandidate) => CANDIDATE,
        Some(Verdict::Fail) => FAIL,
        _ => 0,
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_reports(format: Format, reports: &[VerdictReport]) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(reports)? + "\n",
        Format::Table => {
            let mut s = String::new();
            for r in reports {
                let _ = writeln!(s, "{:<20} {:<24} {}", r.check, r.verdict, r.detail);
            }
            s
        }
        Format::Csv => {
            let mut s = "fingerprint,check,verdict,bound,elapsed_ms,detail\n".to_string();
            for r in reports {
                let _ = writeln!(s, "{},{},{},{},{},{}", r.fingerprint, r.check, r.verdict, r.bound, r.elapsed_ms, csv_field(&r.detail));
            }
            s
        }
    })
}

/// Algebra file with the witness as comment lines, so that it can be fed
/// back to `radhom check`.
fn persist_witness(dir: &Path, r: &VerdictReport) -> Result<PathBuf> {
    let w = r.witness.as_ref().ok_or_else(|| anyhow!("{} report without witness", r.verdict))?;
    let mut text = format!("# {} {} at bound {}\n# {}\n", r.check, r.verdict, r.bound, w.note);
    if !w.values.is_empty() {
        let _ = writeln!(text, "# values: {}", w.values.join(" vs "));
    }
    for m in &w.modules {
        let _ = writeln!(text, "# module: {m}");
    }
    text.push_str(&w.algebra);
    let file = dir.join(format!("witness-{}-{}.alg", &r.fingerprint[..16], r.check));
    fs::write(&file, text).with_context(|| format!("writing {}", file.display()))?;
    Ok(file)
}

fn key_values(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn plain(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
