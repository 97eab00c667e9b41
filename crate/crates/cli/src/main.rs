use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rhlab::catalog::list_catalog;
use rhlab::runner::{init_threads, run_scenario, to_json, to_markdown, write_outputs, RunReport, Scenario, CHECKS};
use rhlab::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "rhlab", version, about = "Run Ricci-Hessian verification scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Override the sampling seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of sample points.
        #[arg(long)]
        samples: Option<usize>,
        /// Tolerance override `check=value` or `check.residual=value`; repeatable.
        #[arg(long = "tol", value_name = "NAME=VALUE", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
        /// Directory for report files. Each scenario writes its declared
        /// outputs here, or `<name>.json` when it declares none.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the full JSON report instead of the summary table.
        #[arg(long)]
        json: bool,
    },
    /// List catalog entries with their expected verdicts.
    ListCatalog {
        /// Only entries carrying this tag.
        #[arg(long)]
        tag: Option<String>,
    },
    /// List the checks a scenario may request.
    ListChecks,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::UnknownEntry(_)
            | Error::BadParams(_)
            | Error::IncompatiblePair(_)
            | Error::CaseMismatch(_)
            | Error::Io(_)
    )
}

struct Overrides<'a> {
    seed: Option<u64>,
    samples: Option<usize>,
    tol: &'a [(String, f64)],
}

fn load(path: &Path, o: &Overrides) -> rhlab::Result<Scenario> {
    let mut s = Scenario::load(path)?;
    if let Some(seed) = o.seed {
        s.samples.seed = seed;
    }
    if let Some(n) = o.samples {
        s.samples.count = n;
    }
    for (k, v) in o.tol {
        s.tolerances.insert(k.clone(), *v);
    }
    s.validate()?;
    Ok(s)
}

fn emit(report: &RunReport, out: Option<&Path>) -> rhlab::Result<()> {
    let Some(dir) = out else { return Ok(()) };
    if report.scenario.outputs.is_empty() {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{}.json", report.scenario.name));
        std::fs::write(&path, to_json(report)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    } else {
        write_outputs(report, dir)?;
    }
    Ok(())
}

fn run(files: &[PathBuf], o: &Overrides, out: Option<&Path>, json: bool) -> u8 {
    let threads = init_threads();
    eprintln!("rhlab: {} worker threads", threads);
    let mut code = 0u8;
    for path in files {
        let result = load(path, o).and_then(|s| {
            let r = run_scenario(&s)?;
            emit(&r, out)?;
            Ok(r)
        });
        match result {
            Ok(report) => {
                if json {
                    match to_json(&report) {
                        Ok(j) => println!("{j}"),
                        Err(e) => {
                            eprintln!("error: {e}");
                            code = code.max(EXIT_RUNTIME);
                        }
                    }
                } else {
                    println!("{}", to_markdown(&report));
                }
                if !report.overall.is_pass() {
                    code = code.max(EXIT_MISMATCH);
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                code = code.max(if is_config_error(&e) { EXIT_CONFIG } else { EXIT_RUNTIME });
            }
        }
    }
    code
}

fn list_catalog_cmd(tag: Option<&str>) {
    for e in list_catalog().into_iter().filter(|e| tag.is_none_or(|t| e.has_tag(t))) {
        let expected: Vec<String> = e.expected.iter().map(|(k, v)| format!("{k}={v:?}").to_lowercase()).collect();
        println!("{:<28} {:<40} [{}]", e.name, e.note, e.tags.join(", "));
        println!("{:<28} expects {}", "", expected.join(" "));
    }
}

fn list_checks_cmd() {
    for c in CHECKS {
        let types: Vec<&str> = c.applies_to.iter().map(|t| t.name()).collect();
        println!("{:<22} {:<10} tol {:<8.0e} {}", c.name, types.join(","), c.default_tol, c.summary);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { files, seed, samples, tol, out, json } => {
            run(&files, &Overrides { seed, samples, tol: &tol }, out.as_deref(), json)
        }
        Command::ListCatalog { tag } => {
            list_catalog_cmd(tag.as_deref());
            0
        }
        Command::ListChecks => {
            list_checks_cmd();
            0
        }
    };
    ExitCode::from(code)
}
