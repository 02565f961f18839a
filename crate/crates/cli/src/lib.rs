//! Command implementations behind the `trigbash` binary.

mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;
use trigbash_core::dsl::{self, ParseError, Scene};
use trigbash_core::verify::{self, Report, RunConfig, Verdict};

pub use svg::{render_svg, RenderError, MAX_RENDER_ATTEMPTS};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

pub const SEED_ENV: &str = "TRIGBASH_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Render(#[from] RenderError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Render(_) => EXIT_INCONCLUSIVE,
            CliError::Io { .. } | CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

/// Flag, then `TRIGBASH_SEED`, then 0.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned 64-bit integer"))),
        (None, None) => Ok(0),
    }
}

pub fn load_scene(path: &Path) -> Result<Scene, CliError> {
    let src = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    dsl::load(&src).map_err(|err| CliError::Parse { path: path.to_owned(), err })
}

pub struct CheckOutcome {
    pub report: Report,
    pub summary: String,
}

pub fn check(scene: &Scene, cfg: &RunConfig) -> CheckOutcome {
    let report = verify::run(scene, cfg);
    let mut summary = String::new();
    for a in &report.assertions {
        let _ = writeln!(
            summary,
            "line {:>3}  {:<14} pass {:>4}  fail {:>4}  excluded {:>4}  worst {:.3e}",
            a.line,
            a.kind.name(),
            a.pass_count,
            a.fail_count,
            a.excluded,
            a.worst_residual
        );
        if a.fail_count > 0 {
            if let Some(w) = &a.witness {
                let _ = writeln!(summary, "          witness: trial {} seed {} bindings {}", w.trial, w.seed, &w.digest[..16]);
            }
        }
    }
    let _ = writeln!(
        summary,
        "verdict: {} ({} trials, {} degenerate, {} gray discards)",
        report.verdict.as_str(),
        report.config.trials,
        report.degenerate_count,
        report.gray_discards
    );
    CheckOutcome { report, summary }
}

/// Verifies one scene file. Returns the exit code; the report is written to
/// `report_path` when given.
pub fn cmd_check(path: &Path, cfg: &RunConfig, report_path: Option<&Path>, out: &mut String) -> Result<i32, CliError> {
    let scene = load_scene(path)?;
    let o = check(&scene, cfg);
    out.push_str(&o.summary);
    if let Some(rp) = report_path {
        fs::write(rp, o.report.to_json()).map_err(|source| CliError::Io { path: rp.to_owned(), source })?;
    }
    Ok(exit_code(o.report.verdict))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub title: String,
    pub paper_anchor: String,
    pub expected_verdict: Verdict,
}

impl CorpusEntry {
    fn matches(&self, filter: &str) -> bool {
        self.title.contains(filter) || self.paper_anchor.contains(filter) || self.path.to_string_lossy().contains(filter)
    }
}

/// Every `*.geo` file in `dir`, sorted by path. Titles come from `# title:`,
/// anchors from `# source:`.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>, CliError> {
    let io = |source| CliError::Io { path: dir.to_owned(), source };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "geo"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let scene = load_scene(&path)?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(CorpusEntry {
                title: scene.meta("title").unwrap_or(&stem).to_string(),
                paper_anchor: scene.meta("source").unwrap_or("").to_string(),
                expected_verdict: Verdict::Pass,
                path,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    Parallel,
    Serial,
}

/// Runs the filtered corpus and returns the exit code and the summary, one
/// line per entry in path order.
pub fn cmd_corpus(dir: &Path, filter: Option<&str>, cfg: &RunConfig, schedule: Schedule) -> Result<(i32, String), CliError> {
    let entries: Vec<CorpusEntry> = load_corpus(dir)?
        .into_iter()
        .filter(|e| filter.is_none_or(|f| e.matches(f)))
        .collect();
    if entries.is_empty() {
        return Err(CliError::Usage(match filter {
            Some(f) => format!("no corpus entry matches {f:?}"),
            None => format!("no .geo files in {}", dir.display()),
        }));
    }
    let verify_one = |e: &CorpusEntry| -> Report {
        let scene = load_scene(&e.path).expect("loaded above");
        match schedule {
            Schedule::Parallel => verify::run(&scene, cfg),
            Schedule::Serial => verify::run_serial(&scene, cfg),
        }
    };
    let reports: Vec<Report> = match schedule {
        Schedule::Parallel => entries.par_iter().map(verify_one).collect(),
        Schedule::Serial => entries.iter().map(verify_one).collect(),
    };
    let mut summary = String::new();
    let mut code = EXIT_PASS;
    for (e, r) in entries.iter().zip(&reports) {
        let name = e.path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let worst = r.assertions.iter().map(|a| a.worst_residual).fold(0.0, f64::max);
        let _ = writeln!(
            summary,
            "{:<13} {:<28} {:<40} worst {:.2e}  degenerate {}/{}",
            r.verdict.as_str().to_uppercase(),
            name,
            e.paper_anchor,
            worst,
            r.degenerate_count,
            r.config.trials
        );
        if r.verdict != e.expected_verdict {
            code = match (code, r.verdict) {
                (EXIT_FAIL, _) | (_, Verdict::Fail) => EXIT_FAIL,
                _ => EXIT_INCONCLUSIVE,
            };
        }
    }
    let passed = reports.iter().filter(|r| r.verdict == Verdict::Pass).count();
    let _ = writeln!(summary, "{passed}/{} entries pass", reports.len());
    Ok((code, summary))
}
