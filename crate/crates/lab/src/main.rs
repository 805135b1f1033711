use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hecke_lab::report::emit_report;
use hecke_lab::selfcheck::selfcheck;
use hecke_lab::{parse_config, run, Command, LabError, RunOptions};

#[derive(Parser)]
#[command(name = "hecke-lab", version, about = "Verification runs for Dirichlet series on Hecke groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Functional-equation residual on a grid.
    VerifyFe(Flags),
    /// Riesz sum against the Bessel-series side.
    VerifyFirst(Flags),
    /// Laplace-transformed identity against its resolvent side.
    VerifySecond(Flags),
    /// Closed-form residue sums against contour integrals.
    Residues(Flags),
    /// Closed forms of the proof kernels against quadrature.
    Kernels(Flags),
    /// Built-in suite; ignores --config.
    Selfcheck(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the configured tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Cap on coefficients and Bessel terms.
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

fn options(f: &Flags) -> RunOptions {
    let mut o = RunOptions { out: f.out.clone(), tol: f.tol, max_terms: f.max_terms, seed: f.seed, ..Default::default() };
    if let Some(t) = f.threads {
        o.threads = t.max(1);
    }
    o
}

fn execute(cli: Cli) -> Result<i32, LabError> {
    let (cmd, flags) = match &cli.command {
        Cmd::VerifyFe(f) => (Command::VerifyFe, f),
        Cmd::VerifyFirst(f) => (Command::VerifyFirst, f),
        Cmd::VerifySecond(f) => (Command::VerifySecond, f),
        Cmd::Residues(f) => (Command::Residues, f),
        Cmd::Kernels(f) => (Command::Kernels, f),
        Cmd::Selfcheck(f) => (Command::Selfcheck, f),
    };
    let opts = options(flags);
    if cmd == Command::Selfcheck {
        let seed = opts.seed.unwrap_or(0);
        let rep = selfcheck(seed, opts.threads)?;
        for row in &rep.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render()).collect();
            println!("{}", cells.join("  "));
        }
        let (csv, _) = emit_report(&rep, None, Some(seed), &opts.out, "selfcheck")?;
        println!("wrote {}", csv.display());
        return Ok(if rep.passed() { 0 } else { 2 });
    }
    let path = flags.config.as_ref().ok_or_else(|| LabError::Invalid(format!("{} needs --config", cmd.name())))?;
    let cfg = parse_config(&fs::read_to_string(path)?)?;
    let out = run(cmd, &cfg, &opts)?;
    println!(
        "{}: {} rows, {} outside tolerance {:e}; wrote {}",
        cmd.name(),
        out.report.rows.len(),
        out.report.breaches,
        out.report.tol,
        out.csv.display()
    );
    Ok(out.exit_code())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
