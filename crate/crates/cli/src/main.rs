mod plot;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sharpsob::constants::constants_table;
use sharpsob::exactnum::{fmt_rational, parse_rational};
use sharpsob::kernel::{NodeSet, SignMode};
use sharpsob::verify::{run_suite, Suite, VerifyOptions, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "sharpsob", version, about = "Exact checks of the sharp W^{k,2}_0 -> L^1 embedding constant")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format (default: csv for tables, json for reports)
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Significant digits for decimal columns
    #[arg(long, global = true, env = "SHARPSOB_DIGITS", default_value_t = 12,
          value_parser = clap::value_parser!(u32).range(1..=1000))]
    digits: u32,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random node sets and probes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of sharp constants with every cross-check applied
    Constants {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=60))]
        kmax: u32,
    },
    /// Run a verification suite and print its report
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        k: u32,
        /// Comma-separated rational nodes, e.g. -1/2,1/2
        #[arg(long, allow_hyphen_values = true)]
        nodes: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Basis size for the galerkin and bvp suites
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=16))]
        size: u32,
    },
    /// Write an SVG diagnostic
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10))]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        nodes: Option<String>,
        /// Largest basis size for the convergence plot
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=16))]
        size: u32,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SuiteArg {
    Kernel,
    Lemma,
    Galerkin,
    Bvp,
    All,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    #[value(name = "kernel_heatmap", alias = "kernel-heatmap")]
    KernelHeatmap,
    Landau,
    Convergence,
}

enum Failure {
    Usage(String),
    Check(String),
}

#[derive(Serialize)]
struct CsvRow {
    k: u32,
    c_exact: String,
    c_squared: String,
    c_decimal: String,
    landau_l1: String,
    landau_deriv_l2_sq: String,
    kalyabin_lower: String,
    kalyabin_upper_decimal: String,
    galerkin_check: String,
}

#[derive(Serialize)]
struct CaseRow<'a> {
    id: &'a str,
    status: &'static str,
    exact: bool,
    witness: &'a str,
}

/// Parses a comma-separated node list; decimals are converted exactly and noted.
fn parse_nodes(list: &str) -> Result<(NodeSet, Vec<String>), Failure> {
    let mut nodes = Vec::new();
    let mut notes = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (value, converted) = parse_rational(item).map_err(|e| Failure::Usage(e.to_string()))?;
        if converted {
            notes.push(format!("node {item} read as {}", fmt_rational(&value)));
        }
        nodes.push(value);
    }
    let set = NodeSet::new(nodes).map_err(|e| Failure::Usage(format!("invalid --nodes: {e}")))?;
    Ok((set, notes))
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| Failure::Check(format!("cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_err(e: impl std::fmt::Display) -> Failure {
    Failure::Check(format!("write failed: {e}"))
}

fn cmd_constants(g: &Global, kmax: u32) -> Result<(), Failure> {
    let rows = constants_table(kmax, g.digits as usize).map_err(|e| Failure::Check(e.to_string()))?;
    let mut w = sink(&g.out)?;
    match g.format.unwrap_or(Format::Csv) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &rows).map_err(io_err)?;
            writeln!(w).map_err(io_err)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for r in rows {
                csv.serialize(CsvRow {
                    k: r.k,
                    c_exact: r.c_exact.to_string(),
                    c_squared: fmt_rational(&r.c_squared),
                    c_decimal: r.c_decimal,
                    landau_l1: fmt_rational(&r.landau_l1),
                    landau_deriv_l2_sq: fmt_rational(&r.landau_deriv_l2_sq),
                    kalyabin_lower: r.kalyabin_lower.to_string(),
                    kalyabin_upper_decimal: r.kalyabin_upper_decimal,
                    galerkin_check: fmt_rational(&r.galerkin_check),
                })
                .map_err(io_err)?;
            }
            csv.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

fn write_report(g: &Global, report: &VerifyReport) -> Result<(), Failure> {
    let mut w = sink(&g.out)?;
    match g.format.unwrap_or(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, report).map_err(io_err)?;
            writeln!(w).map_err(io_err)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for c in &report.cases {
                csv.serialize(CaseRow {
                    id: &c.id,
                    status: if c.passed() { "pass" } else { "fail" },
                    exact: c.exact,
                    witness: c.witness.as_deref().unwrap_or(""),
                })
                .map_err(io_err)?;
            }
            csv.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

fn cmd_verify(g: &Global, suite: SuiteArg, k: u32, nodes: Option<&str>, mode: ModeArg, size: u32) -> Result<(), Failure> {
    let mut opts = VerifyOptions::new(k);
    opts.seed = g.seed;
    opts.size = size as usize;
    opts.mode = match mode {
        ModeArg::Exact => SignMode::Exact,
        ModeArg::Sampled => SignMode::Sampled,
    };
    let mut notes = Vec::new();
    if let Some(list) = nodes {
        let (set, n) = parse_nodes(list)?;
        if set.len() != k as usize {
            return Err(Failure::Usage(format!("--k {k} needs {k} nodes, got {}", set.len())));
        }
        opts.nodes = Some(set);
        notes = n;
    }
    let suite = match suite {
        SuiteArg::Kernel => Suite::Kernel,
        SuiteArg::Lemma => Suite::Lemma,
        SuiteArg::Galerkin => Suite::Galerkin,
        SuiteArg::Bvp => Suite::Bvp,
        SuiteArg::All => Suite::All,
    };
    let mut report = run_suite(suite, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
    notes.append(&mut report.notes);
    report.notes = notes;
    write_report(g, &report)?;
    eprintln!(
        "{}: {} of {} cases passed in {:.2?}",
        suite.name(),
        report.cases.iter().filter(|c| c.passed()).count(),
        report.cases.len(),
        report.elapsed
    );
    if report.pass {
        Ok(())
    } else {
        let ids: Vec<_> = report.failures().map(|c| c.id.as_str()).collect();
        Err(Failure::Check(format!("failed: {}", ids.join(", "))))
    }
}

fn cmd_plot(g: &Global, kind: PlotKind, k: u32, nodes: Option<&str>, size: u32) -> Result<(), Failure> {
    let Some(out) = &g.out else {
        return Err(Failure::Usage("plot needs --out PATH".into()));
    };
    let nodes = match nodes {
        Some(list) => {
            let (set, notes) = parse_nodes(list)?;
            for n in notes {
                eprintln!("note: {n}");
            }
            if set.len() != k as usize {
                return Err(Failure::Usage(format!("--k {k} needs {k} nodes, got {}", set.len())));
            }
            Some(set)
        }
        None => None,
    };
    let svg = match kind {
        PlotKind::KernelHeatmap => {
            let set = match nodes {
                Some(s) => s,
                None => NodeSet::new(
                    sharpsob::poly::legendre_roots(k, g.digits as usize).map_err(|e| Failure::Check(e.to_string()))?,
                )
                .map_err(|e| Failure::Check(e.to_string()))?,
            };
            plot::kernel_heatmap(set)
        }
        PlotKind::Landau => plot::landau(k),
        PlotKind::Convergence => plot::convergence(k, size as usize).map_err(|e| Failure::Check(e.to_string()))?,
    };
    std::fs::write(out, svg).map_err(|e| Failure::Check(format!("cannot write {}: {e}", out.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Constants { kmax } => cmd_constants(g, *kmax),
        Command::Verify {
            suite,
            k,
            nodes,
            mode,
            size,
        } => cmd_verify(g, *suite, *k, nodes.as_deref(), *mode, *size),
        Command::Plot { kind, k, nodes, size } => cmd_plot(g, *kind, *k, nodes.as_deref(), *size),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: sharpsob [--format csv|json] [--digits N] [--out PATH] [--seed N] <constants|verify|plot> ...");
            ExitCode::from(2)
        }
    }
}
