use std::fs::File;
use std::io::{BufWriter, Write};
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::Utc;
use clap::{Parser, Subcommand, ValueEnum};
use descent_cli::manifest::RunManifest;
use descent_cli::ops::{self, Failure, MonkRequest};
use descent_cli::service;
use descent_core::dc::{DcMove, Goal};
use descent_core::witness::FieldKind;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "dc", version, about = "Descent-cycling on Schubert problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lengths, descents, vertex check, dc-triviality and legal moves.
    Analyze { u: String, v: String, w: String },
    /// Applies one move `COL FROM TO` (arguments numbered 1..3).
    Move { u: String, v: String, w: String, col: usize, from: usize, to: usize },
    /// Symmetric Schubert number, or the double-mode structure constants.
    Number {
        u: String,
        v: String,
        w: String,
        #[arg(long)]
        double: bool,
    },
    /// Components of the Schubert problem graph of degree N.
    Graph {
        n: usize,
        /// Write the JSON report here (and a manifest next to it).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write little-endian u32 component labels here.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
        /// Components containing a dc-trivial vertex to spot-check with the oracle.
        #[arg(long, default_value_t = 200)]
        trivial_samples: usize,
        /// Exit with status 1 if the counts differ from the reference figures.
        #[arg(long)]
        check: bool,
    },
    /// Shortest descent-cycling path to `(id, id, w0)` or to a dc-trivial problem.
    Path {
        u: String,
        v: String,
        w: String,
        #[arg(long, value_enum, default_value = "easy")]
        goal: GoalArg,
    },
    /// Monk instance `(pi, s_i, sigma)` with its descent-cycling proof.
    Monk { pi: String, i: usize, sigma: String },
    /// Reconstructs the intersection flag for a dc-easy problem.
    Witness {
        u: String,
        v: String,
        w: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "p")]
        field: FieldArg,
    },
    /// Embeds a problem of degree n into degree n + 1.
    Stabilize { u: String, v: String, w: String },
    /// Runs the local JSON service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Address to bind; loopback unless given.
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalArg {
    Easy,
    Trivial,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    P,
    Rational,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// One compact JSON object per line on stdout.
fn print<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    let written = serde_json::to_writer(&mut out, value).map_err(std::io::Error::from).and_then(|_| writeln!(out));
    match written {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(io_failure),
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Resource(format!("i/o error: {e}"))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { u, v, w } => print(&ops::analyze(&ops::parse_problem(&u, &v, &w)?)),
        Command::Move { u, v, w, col, from, to } => {
            print(&ops::apply_move(&ops::parse_problem(&u, &v, &w)?, DcMove::new(col, from, to))?)
        }
        Command::Number { u, v, w, double } => print(&ops::number(&ops::parse_problem(&u, &v, &w)?, double)?),
        Command::Path { u, v, w, goal } => {
            let goal = match goal {
                GoalArg::Easy => Goal::Easy,
                GoalArg::Trivial => Goal::Trivial,
            };
            print(&ops::path(&ops::parse_problem(&u, &v, &w)?, goal)?)
        }
        Command::Monk { pi, i, sigma } => print(&ops::monk(MonkRequest { pi: pi.parse()?, i, sigma: sigma.parse()? })?),
        Command::Witness { u, v, w, seed, field } => {
            let field = match field {
                FieldArg::P => FieldKind::Prime,
                FieldArg::Rational => FieldKind::Rational,
            };
            print(&ops::witness(&ops::parse_problem(&u, &v, &w)?, seed, field)?)
        }
        Command::Stabilize { u, v, w } => print(&ops::stabilize(&ops::parse_problem(&u, &v, &w)?)?),
        Command::Graph { n, out, labels, threads, trivial_samples, check } => {
            graph(n, out, labels, threads, trivial_samples, check)
        }
        Command::Serve { port, host } => {
            let runtime = tokio::runtime::Runtime::new().map_err(io_failure)?;
            runtime.block_on(service::serve(SocketAddr::new(host, port))).map_err(io_failure)
        }
    }
}

fn graph(
    n: usize,
    out: Option<PathBuf>,
    labels: Option<PathBuf>,
    threads: usize,
    trivial_samples: usize,
    check: bool,
) -> Result<(), Failure> {
    let started = Utc::now();
    let (run, report, elapsed) = ops::graph(n, threads, trivial_samples)?;
    eprintln!("built Γ_{n} in {elapsed:.2} s");
    let mut artifacts = Vec::new();
    match &out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path).map_err(io_failure)?);
            serde_json::to_writer_pretty(&mut f, &run).expect("report serializes");
            writeln!(f).and_then(|_| f.flush()).map_err(io_failure)?;
            artifacts.push(path.clone());
        }
        None => print(&run)?,
    }
    if let Some(path) = &labels {
        let f = BufWriter::new(File::create(path).map_err(io_failure)?);
        report.write_labels(f).map_err(io_failure)?;
        artifacts.push(path.clone());
    }
    if let Some(path) = &out {
        let mut manifest = RunManifest::new("graph", std::env::args().skip(1).collect(), None, started);
        manifest.artifacts = artifacts;
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(RunManifest::path_for(path), text + "\n").map_err(io_failure)?;
    }
    let differences = ops::compare_with_expected(&run);
    for d in &differences {
        eprintln!("differs from reference figure: {d}");
    }
    if check && !differences.is_empty() {
        return Err(Failure::Mismatch(format!("{} reference figure(s) not reproduced", differences.len())));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
