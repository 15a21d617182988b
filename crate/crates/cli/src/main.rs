//! `growthlab`: run one experiment, from a manifest file or from flags, and
//! emit a JSON or CSV report.
//!
//! Exit codes: 0 success, 1 error, 2 finished but a state cap made the
//! results partial.

mod manifest;
mod ops;
mod report;

use clap::{Args, Parser, Subcommand};
use manifest::{Manifest, ManifestError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Lib(#[from] growthlab::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser)]
#[command(
    name = "growthlab",
    version,
    about = "Finite-scale growth and projection experiments on group actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a manifest file; flags override its keys.
    Run {
        manifest: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Balls and distances in a Cayley graph.
    Group {
        #[arg(value_parser = ["ball", "distance"])]
        op: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Growth exponents, Poincaré series, complementary and conjugacy growth.
    Growth {
        #[arg(value_parser = ["fit", "poincare", "comp", "conjugacy"])]
        op: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Contraction, bounded geodesic image, constriction and Morse scans.
    Contract {
        #[arg(value_parser = ["scan", "bgi", "constrict", "morse"])]
        op: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Projection axioms, quasi-trees and elements of normal closures.
    Axioms {
        #[arg(value_parser = ["audit", "quasitree", "bottleneck", "normalclosure"])]
        op: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Combinatorial horoballs and augmented spaces.
    Horoball {
        #[arg(value_parser = ["distance", "spheres", "fit", "gap"])]
        op: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Quotients: pieces, Dehn reduction, balls, sections, nets, tightness.
    Quotient {
        #[arg(value_parser = ["pieces", "dehn", "ball", "section", "net", "phi", "tightness"])]
        op: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Snowflake group distances and geodesic words.
    Snowflake {
        #[arg(value_parser = ["distance", "geodesic"])]
        op: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Default)]
struct Flags {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    /// Poincaré tail tolerance.
    #[arg(long)]
    eps: Option<String>,
    /// State cap for searches.
    #[arg(long)]
    cap: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Axis word, `line:<word>`, `alpha` or `beta`.
    #[arg(long)]
    axis: Option<String>,
    /// Horoball base: `line` or a group spec.
    #[arg(long)]
    base: Option<String>,
    /// Horoball parameter a.
    #[arg(long)]
    param: Option<String>,
    /// Horoball truncation depth.
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long = "C")]
    c: Option<String>,
    #[arg(long = "K")]
    k: Option<String>,
    /// Relator file, one word per line.
    #[arg(long)]
    relators: Option<PathBuf>,
    /// Any other manifest key, as key=value. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Flags {
    fn apply(&self, m: &mut Manifest) -> Result<(), CliError> {
        let pairs = [
            ("group", &self.group),
            ("radius", &self.radius),
            ("eps", &self.eps),
            ("cap", &self.cap),
            ("seed", &self.seed),
            ("format", &self.format),
            ("axis", &self.axis),
            ("base", &self.base),
            ("a", &self.param),
            ("depth", &self.depth),
            ("xi", &self.xi),
            ("c", &self.c),
            ("k", &self.k),
        ];
        for (key, v) in pairs {
            if let Some(v) = v {
                m.set(key, v.clone());
            }
        }
        if let Some(p) = &self.out {
            m.set("out", p.display().to_string());
        }
        if let Some(p) = &self.relators {
            m.set("relators", p.display().to_string());
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{kv}`")))?;
            m.set(k.trim(), v.trim());
        }
        Ok(())
    }
}

/// Builds, validates and runs the manifest; returns the exit code.
fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let (mut m, flags, dir) = match cli.command {
        Command::Run { manifest, flags } => {
            let text =
                std::fs::read_to_string(&manifest).map_err(|e| CliError::Io(format!("{}: {e}", manifest.display())))?;
            let dir = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
            (Manifest::parse(&text)?, flags, dir)
        }
        Command::Group { op, flags } => (with_op("group", &op), flags, PathBuf::from(".")),
        Command::Growth { op, flags } => (with_op("growth", &op), flags, PathBuf::from(".")),
        Command::Contract { op, flags } => (with_op("contract", &op), flags, PathBuf::from(".")),
        Command::Axioms { op, flags } => (with_op("axioms", &op), flags, PathBuf::from(".")),
        Command::Horoball { op, flags } => (with_op("horoball", &op), flags, PathBuf::from(".")),
        Command::Quotient { op, flags } => (with_op("quotient", &op), flags, PathBuf::from(".")),
        Command::Snowflake { op, flags } => (with_op("snowflake", &op), flags, PathBuf::from(".")),
    };
    flags.apply(&mut m)?;
    m.validate()?;

    let start = Instant::now();
    let outcome = ops::dispatch(&m, &dir)?;
    let report = report::build(&m, &outcome, start.elapsed());

    let text = match m.get("format").unwrap_or("json") {
        "csv" => outcome
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage(format!("{} has no CSV form; use --format json", m.op())))?,
        _ => report::render_json(&report),
    };
    match m.get("out") {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => print!("{text}"),
    }
    if outcome.partial {
        eprintln!("growthlab: a state cap was hit; results are partial");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn with_op(area: &str, op: &str) -> Manifest {
    let mut m = Manifest::default();
    m.set("op", format!("{area}.{op}"));
    m
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("growthlab: {e}");
            ExitCode::FAILURE
        }
    }
}
