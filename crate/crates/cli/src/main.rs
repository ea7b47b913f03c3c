use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prodsat_core::{random_instance, solve, QsatInstance, SolveError, SolverConfig, Verdict, DEFAULT_EPS};

const EXIT_MAYBE: u8 = 10;
const EXIT_UNPRODSAT: u8 = 20;

#[derive(Parser)]
#[command(name = "prodsat", version, about = "Refute product-state solutions of quantum k-SAT instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Write random instances with seeds `seed, seed+1, ...`.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a grid of random instances and write one CSV row per run.
    Bench {
        /// Qubit counts, e.g. `3` or `3..=5`.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        /// Constraint counts; defaults to `1..=n+1` for each `n`.
        #[arg(long, value_parser = parse_range)]
        m: Option<RangeInclusive<usize>>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 13)]
        trials: u64,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        opts: SolveOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Cdcl,
}

#[derive(Args)]
struct SolveOpts {
    #[arg(long, default_value_t = 8)]
    depth: u32,
    #[arg(long, default_value_t = 4)]
    precision_factor: u32,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Seed for instance generation in `bench`, or for a random initial
    /// assignment in `solve`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "cdcl")]
    backend: Backend,
    #[arg(long)]
    max_iterations: Option<u64>,
    /// Wall-clock limit per run, in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Energy threshold enabling SAT-CERTIFIED answers.
    #[arg(long)]
    e0: Option<f64>,
    #[arg(long)]
    incremental_recheck: bool,
}

impl SolveOpts {
    fn config(&self, initial_seed: Option<u64>) -> Result<SolverConfig, String> {
        if self.depth == 0 || self.precision_factor == 0 {
            return Err("--depth and --precision-factor must be at least 1".into());
        }
        let timeout = match self.timeout {
            Some(t) => Some(Duration::try_from_secs_f64(t).map_err(|e| format!("--timeout: {e}"))?),
            None => None,
        };
        let Backend::Cdcl = self.backend;
        Ok(SolverConfig {
            depth: self.depth,
            precision_factor: self.precision_factor,
            eps: self.eps,
            e0: self.e0,
            max_iterations: self.max_iterations,
            timeout,
            incremental_recheck: self.incremental_recheck,
            initial_seed,
            ..SolverConfig::default()
        })
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..=").or_else(|| s.split_once('-')) {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..=b)
        }
        None => num(s).map(|v| v..=v),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { file, opts } => cmd_solve(&file, &opts),
        Command::Generate { n, k, m, seed, count, out } => cmd_generate(n, k, m, seed, count, &out),
        Command::Bench { n, m, k, trials, out, opts } => cmd_bench(n, m, k, trials, out.as_deref(), &opts),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<QsatInstance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let inst = QsatInstance::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    inst.validate().map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_solve(path: &Path, opts: &SolveOpts) -> Result<ExitCode, String> {
    let inst = load(path)?;
    let config = opts.config(opts.seed)?;
    let outcome = solve(&inst, &config).map_err(|e| e.to_string())?;
    // a closed pipe (`prodsat solve f | head -1`) is not an error
    let mut stdout = io::stdout().lock();
    let _ = writeln!(stdout, "{}\n{}", outcome.verdict, outcome.metrics);
    Ok(ExitCode::from(match outcome.verdict {
        Verdict::UnProdsat => EXIT_UNPRODSAT,
        _ => EXIT_MAYBE,
    }))
}

fn instance_file_name(n: usize, k: usize, m: usize, seed: u64) -> String {
    format!("n{n}_k{k}_m{m}_seed{seed}.json")
}

fn cmd_generate(n: usize, k: usize, m: usize, seed: u64, count: u64, out: &Path) -> Result<ExitCode, String> {
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    for i in 0..count {
        let s = seed + i;
        let inst = random_instance(n, k, m, s).map_err(|e| e.to_string())?;
        let path = out.join(instance_file_name(n, k, m, s));
        fs::write(&path, inst.to_json()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    ns: RangeInclusive<usize>,
    ms: Option<RangeInclusive<usize>>,
    k: usize,
    trials: u64,
    out: Option<&Path>,
    opts: &SolveOpts,
) -> Result<ExitCode, String> {
    let config = opts.config(None)?;
    let base = opts.seed.unwrap_or(0);
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?),
        None => Box::new(io::stdout()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    let io_err = |e: csv::Error| e.to_string();
    csv.write_record([
        "n",
        "m",
        "seed",
        "verdict",
        "A",
        "rho",
        "blocking_clauses",
        "theory_calls",
        "iterations",
        "wall_time_ms",
    ])
    .map_err(io_err)?;
    csv.flush().map_err(|e| e.to_string())?;

    for n in ns {
        let cells = ms.clone().unwrap_or(1..=n + 1);
        for m in cells {
            let mut refuted = 0;
            for i in 0..trials {
                let seed = base + i;
                let inst = random_instance(n, k, m, seed).map_err(|e| e.to_string())?;
                let (label, area, rho, metrics) = match solve(&inst, &config) {
                    Ok(o) => {
                        let (label, area, rho) = match o.verdict {
                            Verdict::UnProdsat => ("UN-PRODSAT", String::new(), String::new()),
                            Verdict::Maybe { area, rho } => ("MAYBE", area.to_string(), rho.to_string()),
                            Verdict::SatCertified { area, rho } => ("SAT-CERTIFIED", area.to_string(), rho.to_string()),
                        };
                        (label, area, rho, o.metrics)
                    }
                    Err(SolveError::ResourceLimitExceeded { metrics, .. }) => {
                        ("LIMIT", String::new(), String::new(), metrics)
                    }
                    Err(e) => return Err(format!("n={n} m={m} seed={seed}: {e}")),
                };
                if label == "UN-PRODSAT" {
                    refuted += 1;
                }
                csv.write_record([
                    n.to_string(),
                    m.to_string(),
                    seed.to_string(),
                    label.to_string(),
                    area,
                    rho,
                    metrics.blocking_clauses.to_string(),
                    metrics.theory_calls.to_string(),
                    metrics.iterations.to_string(),
                    format!("{:.3}", metrics.wall_time.as_secs_f64() * 1e3),
                ])
                .map_err(io_err)?;
                // keep partial results if the run is interrupted
                csv.flush().map_err(|e| e.to_string())?;
            }
            eprintln!("n={n} m={m}: {refuted}/{trials} UN-PRODSAT");
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert_eq!(parse_range("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_range("1-4").unwrap(), 1..=4);
        assert!(parse_range("5..=3").is_err());
        assert!(parse_range("x").is_err());
    }
}
