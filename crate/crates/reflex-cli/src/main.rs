//! `reflex` — exact verification of lattice datasets from the command
//! line. Exit codes: 0 all checks pass, 1 at least one check failed,
//! 2 input or usage error.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use reflex::dataset::{load_dataset, load_table1, resolve_dataset, LatticeDataset};
use reflex::exact::{Int, Rat};
use reflex::report::VerificationReport;
use reflex::verify::{
    enumerate_json, lattice_info_json, starsets_report, table1_report, verify_dataset,
};
use serde_json::Value;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "reflex", version, about = "Exact lattice dataset verification")]
struct Cli {
    /// Directory holding the dataset files (falls back to ./data)
    #[arg(long, global = true, env = "REFLEX_DATA_DIR", default_value = "data")]
    data_dir: PathBuf,

    /// Output format (only the JSON form is contract-stable)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for graph construction; never changes results
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print rank, signature, invariant factors, and group order
    LatticeInfo { dataset: String },
    /// List discriminant-group cosets, filtered by order and norm
    Enumerate {
        dataset: String,
        /// Keep only cosets of exactly this order
        #[arg(long)]
        order: Option<u64>,
        /// Keep only cosets of exactly this norm (e.g. 1/2)
        #[arg(long)]
        norm: Option<String>,
        /// Group the listing into {v, -v} classes
        #[arg(long)]
        pm: bool,
    },
    /// Run every recorded check of a dataset
    Verify { dataset: String },
    /// Run only the graph checks: star graph, exceptional classes, cliques
    Starsets { dataset: String },
    /// Check every row of the weight table
    Table1,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // A second initialization (e.g. in tests) is harmless.
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    match run(&cli) {
        Ok((output, all_passed)) => {
            write_stdout(&output);
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Write the final output, tolerating a consumer that stopped reading
/// (e.g. `reflex enumerate … | head`). The exit code still reflects
/// the verification outcome.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(e) => {
            eprintln!("error: cannot write to stdout: {e}");
            std::process::exit(2);
        }
    }
}

fn run(cli: &Cli) -> Result<(String, bool)> {
    match &cli.command {
        Command::LatticeInfo { dataset } => {
            let ds = load(cli, dataset)?;
            let payload = lattice_info_json(&ds);
            let output = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&payload)?),
                Format::Text => {
                    let mut out = String::new();
                    writeln!(out, "dataset: {}", payload["dataset"].as_str().unwrap_or("?"))?;
                    writeln!(out, "lattice: {}", payload["lattice"].as_str().unwrap_or("?"))?;
                    writeln!(out, "rank: {}", payload["rank"])?;
                    writeln!(
                        out,
                        "signature: ({}, {})",
                        payload["signature"][0], payload["signature"][1]
                    )?;
                    let factors: Vec<String> = payload["invariant_factors"]
                        .as_array()
                        .map(|a| a.iter().map(Value::to_string).collect())
                        .unwrap_or_default();
                    writeln!(out, "invariant factors: {}", factors.join(", "))?;
                    writeln!(out, "group order: {}", payload["disc_order"])?;
                    writeln!(out, "candidates: {}", payload["candidates"])?;
                    out
                }
            };
            Ok((output, true))
        }
        Command::Enumerate { dataset, order, norm, pm } => {
            let ds = load(cli, dataset)?;
            let order = order.map(Int::from);
            let norm = norm
                .as_deref()
                .map(|n| Rat::from_str(n).with_context(|| format!("invalid norm '{n}'")))
                .transpose()?;
            let payload = enumerate_json(&ds, order.as_ref(), norm.as_ref(), *pm)
                .context("enumeration failed")?;
            let output = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&payload)?),
                Format::Text => {
                    let mut out = String::new();
                    let noun = if *pm { "classes" } else { "cosets" };
                    let filter = |v: &Value| match v {
                        Value::Null => "any".to_string(),
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    writeln!(
                        out,
                        "dataset {} — {} {} (order {}, norm {})",
                        payload["dataset"].as_str().unwrap_or("?"),
                        payload["count"],
                        noun,
                        filter(&payload["order"]),
                        filter(&payload["norm"]),
                    )?;
                    if *pm {
                        for class in payload["classes"].as_array().into_iter().flatten() {
                            let rep = coords_text(&class["rep"]);
                            match class["partner"].as_array() {
                                Some(_) => writeln!(
                                    out,
                                    "({rep}) ~ ({})",
                                    coords_text(&class["partner"])
                                )?,
                                None => writeln!(out, "({rep})")?,
                            }
                        }
                    } else {
                        for coset in payload["cosets"].as_array().into_iter().flatten() {
                            writeln!(out, "({})", coords_text(coset))?;
                        }
                    }
                    out
                }
            };
            Ok((output, true))
        }
        Command::Verify { dataset } => {
            let ds = load(cli, dataset)?;
            let report = verify_dataset(&ds).context("verification could not run")?;
            Ok(render(cli, &report))
        }
        Command::Starsets { dataset } => {
            let ds = load(cli, dataset)?;
            let report = starsets_report(&ds).context("verification could not run")?;
            Ok(render(cli, &report))
        }
        Command::Table1 => {
            let path = cli.data_dir.join("table1.json");
            let rows = load_table1(&path)?;
            let report = table1_report(&rows);
            Ok(render(cli, &report))
        }
    }
}

fn load(cli: &Cli, dataset: &str) -> Result<LatticeDataset> {
    let path = resolve_dataset(dataset, &cli.data_dir);
    Ok(load_dataset(&path)?)
}

fn render(cli: &Cli, report: &VerificationReport) -> (String, bool) {
    let output = match cli.format {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Text => report.to_text(),
    };
    (output, report.passed())
}

fn coords_text(coords: &Value) -> String {
    let parts: Vec<String> = coords
        .as_array()
        .map(|a| {
            a.iter()
                .map(|c| c.as_str().unwrap_or("?").to_string())
                .collect()
        })
        .unwrap_or_default();
    parts.join(", ")
}
