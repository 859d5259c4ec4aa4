//! sliceprov: provision network slices and compare against direct SFC embedding.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sliceprov_cli::experiment::comparison_rows;
use sliceprov_cli::{check_solution, compare_embedding, load_scenario, run_experiment, write_comparison, write_experiment};
use sliceprov_core::provisioning::{ProvisioningSolution, Variant};

#[derive(Parser)]
#[command(name = "sliceprov", version, about = "Coverage-aware network slice provisioning")]
#[command(after_help = "The solver backend is read from SLICEPROV_SOLVER (highs or brute-force).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Provision every slice of a scenario with the selected variants
    Provision {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated variants, e.g. JRN,JR-JN; defaults to the scenario's list
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<Variant>>,
        /// Rate discount, overrides the scenario value
        #[arg(long)]
        lambda: Option<f64>,
        /// Bisect on a demand multiplier when the full demand does not fit
        #[arg(long)]
        delta_scaling: bool,
        /// Output directory; defaults to the scenario's output.dir
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare provisioning-then-embedding against direct embedding
    CompareEmbedding {
        #[arg(long)]
        scenario: PathBuf,
        /// `a..b` (inclusive), `a..b:step` or a comma-separated list
        #[arg(long, value_parser = parse_counts)]
        sfc_counts: Option<Counts>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a serialized solution against its scenario
    Check {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Debug)]
struct Counts(Vec<usize>);

fn parse_counts(s: &str) -> Result<Counts, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let counts = if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, step)) => (num(b)?, num(step)?),
            None => (num(rest)?, 1),
        };
        if step == 0 {
            return Err("step must be positive".into());
        }
        (num(a)?..=b).step_by(step).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if counts.is_empty() || counts.contains(&0) {
        return Err(format!("{s:?}: counts must be positive and non-empty"));
    }
    Ok(Counts(counts))
}

fn out_dir(flag: Option<PathBuf>, scenario: Option<&PathBuf>) -> Result<PathBuf> {
    match flag.or_else(|| scenario.cloned()) {
        Some(d) => Ok(d),
        None => bail!("no output directory: pass --out or set output.dir in the scenario"),
    }
}

fn provision(path: &Path, variants: Option<Vec<Variant>>, lambda: Option<f64>, delta: bool, out: Option<PathBuf>) -> Result<bool> {
    let mut scn = load_scenario(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(v) = variants {
        scn.variants = v;
    }
    if let Some(l) = lambda {
        if !(l.is_finite() && l >= 0.0) {
            bail!("--lambda must be finite and >= 0");
        }
        scn.lambda = l;
    }
    scn.delta_scaling |= delta;
    let dir = out_dir(out, scn.output_dir.as_ref())?;
    let output = run_experiment(&scn);
    for path in write_experiment(&dir, &output)? {
        log::info!("wrote {}", path.display());
    }
    for m in &output.report.variants {
        let cost = m.metrics.map(|x| format!("{:.6}", x.c_tot)).unwrap_or_else(|| "-".into());
        println!("{:<6} {:<10} c_tot = {cost}", m.variant.name(), m.status);
    }
    Ok(output.report.all_acceptable())
}

fn compare(path: &Path, counts: Option<Counts>, out: Option<PathBuf>) -> Result<bool> {
    let scn = load_scenario(path).with_context(|| format!("loading {}", path.display()))?;
    let dir = out_dir(out, scn.output_dir.as_ref())?;
    let rows = compare_embedding(&scn, counts.as_ref().map(|c| c.0.as_slice()))?;
    let file = write_comparison(&dir, &rows)?;
    log::info!("wrote {}", file.display());
    for r in comparison_rows(&rows) {
        let cost = r.cost.map(|c| format!("{c:.6}")).unwrap_or_else(|| "-".into());
        println!("{:<15} {:>3} {cost:>12} {:>9.3}s {}", r.method, r.sfc_count, r.time_s, r.status);
    }
    Ok(rows.iter().all(|r| r.status == "ok" || r.status == "infeasible"))
}

fn check(solution: &Path, scenario: &Path, tol: f64) -> Result<bool> {
    let scn = load_scenario(scenario).with_context(|| format!("loading {}", scenario.display()))?;
    let text = std::fs::read_to_string(solution).with_context(|| format!("reading {}", solution.display()))?;
    let sol: ProvisioningSolution = serde_json::from_str(&text).with_context(|| format!("parsing {}", solution.display()))?;
    let report = check_solution(&scn, &sol, tol)?;
    if report.is_empty() {
        println!("{}: {} solution is feasible", solution.display(), sol.variant);
        return Ok(true);
    }
    for v in &report.violations {
        println!("{v:?}");
    }
    println!("{} violations, max {:.3e}", report.violations.len(), report.max_violation());
    Ok(false)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Provision { scenario, variants, lambda, delta_scaling, out } => provision(&scenario, variants, lambda, delta_scaling, out),
        Command::CompareEmbedding { scenario, sfc_counts, out } => compare(&scenario, sfc_counts, out),
        Command::Check { solution, scenario, tol } => check(&solution, &scenario, tol),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
