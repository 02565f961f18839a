use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use trigbash::{cmd_check, cmd_corpus, load_scene, render_svg, resolve_seed, CliError, Schedule, EXIT_PASS, EXIT_USAGE, SEED_ENV};
use trigbash_core::verify::RunConfig;
use trigbash_core::TolerancePolicy;

/// Randomized numerical verification of plane-geometry scenes.
#[derive(Parser)]
#[command(name = "trigbash", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify one scene file.
    Check {
        scene: PathBuf,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Overrides TRIGBASH_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Relative tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Verify every scene in the corpus directory.
    Corpus {
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
        /// Run entries and trials on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Draw one sample of a scene as SVG.
    Render {
        scene: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn config(trials: u64, seed: Option<u64>, rel_eps: Option<f64>) -> Result<RunConfig, CliError> {
    let env = std::env::var(SEED_ENV).ok();
    let mut cfg = RunConfig::with_seed(resolve_seed(seed, env.as_deref())?);
    cfg.trials = trials as usize;
    if let Some(t) = rel_eps {
        cfg.tol = TolerancePolicy::new(t, cfg.tol.abs_floor.min(t * 1e-3)).map_err(|e| CliError::Usage(format!("--tol: {e}")))?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Check { scene, trials, seed, tol, report } => {
            let cfg = config(trials, seed, Some(tol))?;
            let mut out = String::new();
            let code = cmd_check(&scene, &cfg, report.as_deref(), &mut out)?;
            print!("{out}");
            Ok(code)
        }
        Cmd::Corpus { filter, trials, seed, dir, serial } => {
            let cfg = config(trials, seed, None)?;
            let schedule = if serial { Schedule::Serial } else { Schedule::Parallel };
            let (code, summary) = cmd_corpus(&dir, filter.as_deref(), &cfg, schedule)?;
            print!("{summary}");
            Ok(code)
        }
        Cmd::Render { scene, seed, out } => {
            let env = std::env::var(SEED_ENV).ok();
            let seed = resolve_seed(seed, env.as_deref())?;
            let s = load_scene(&scene)?;
            let svg = render_svg(&s, seed)?;
            std::fs::write(&out, svg).map_err(|source| CliError::Io { path: out.clone(), source })?;
            Ok(EXIT_PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("trigbash: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
