//! Randomized verification of scene assertions.
//!
//! Trial `i` uses `seed_i = mix(cfg.seed, i)`; resampling attempt `j` of that
//! trial evaluates with `mix(seed_i, j)`. `mix` is
//! `splitmix64(seed + index · 0x9E3779B97F4A7C15)` with wrapping arithmetic.

pub mod sample;

use rayon::prelude::*;
use serde::Serialize;

use crate::construct;
use crate::dsl::eval::{evaluate_with, EvalOptions, Value};
use crate::dsl::resolve::{AssertKind, Assertion, Scene};
use crate::geom::{self, bbox_center, bbox_diameter, concyclic_offset, Point, TolerancePolicy};
use sample::mix;

/// Stream index for the pinned frame of scenes with `fixed` assertions.
const FRAME_STREAM: u64 = 0xF1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub trials: usize,
    pub seed: u64,
    pub tol: TolerancePolicy,
    pub max_degenerate_ratio: f64,
    /// Residuals in `[lo·thr, hi·thr]` discard the attempt.
    pub gray_band: (f64, f64),
    /// Attempts per trial before the trial counts as degenerate.
    pub max_attempts: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            trials: 200,
            seed: 0,
            tol: TolerancePolicy::default(),
            max_degenerate_ratio: 0.95,
            gray_band: (0.1, 10.0),
            max_attempts: 16,
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        RunConfig { seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertionReport {
    pub kind: AssertKind,
    pub line: usize,
    pub text: String,
    pub pass_count: usize,
    pub fail_count: usize,
    /// Trials where this assertion was not judged: degenerate samples and
    /// argument errors.
    pub excluded: usize,
    pub worst_residual: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub trials: usize,
    pub seed: u64,
    pub rel_eps: f64,
    pub abs_floor: f64,
    pub max_degenerate_ratio: f64,
    pub gray_band: [f64; 2],
    pub max_attempts: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub config: ConfigEcho,
    pub assertions: Vec<AssertionReport>,
    pub degenerate_count: usize,
    pub gray_discards: usize,
    pub verdict: Verdict,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Residual of an assertion at one sample, or why it cannot be judged.
/// `scale` is the bounding-box diameter of the scene's points.
pub fn residual(kind: AssertKind, args: &[Value], points: &[Point], scale: f64) -> Result<f64, String> {
    let pt = |k: usize| args[k].as_point().expect("typed");
    let ln = |k: usize| args[k].as_line().expect("typed");
    let ci = |k: usize| args[k].as_circle().expect("typed");
    let num = |k: usize| args[k].as_number().expect("typed");
    let r = match kind {
        AssertKind::Collinear => {
            let ps: Vec<Point> = args.iter().map(|v| v.as_point().expect("typed")).collect();
            let mut far = (0, 1, -1.0);
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    let d = geom::dist(ps[i], ps[j]);
                    if d > far.2 {
                        far = (i, j, d);
                    }
                }
            }
            let line = geom::Line::through(ps[far.0], ps[far.1]).map_err(|e| e.to_string())?;
            ps.iter().map(|p| line.signed_dist(*p).abs()).fold(0.0, f64::max) / scale
        }
        AssertKind::Concyclic => {
            let ps = [pt(0), pt(1), pt(2), pt(3)];
            for i in 0..4 {
                for j in i + 1..4 {
                    if geom::dist(ps[i], ps[j]) <= 1e-12 * scale {
                        return Err("coincident points".into());
                    }
                }
            }
            match concyclic_offset(ps) {
                Some(off) => off / scale,
                None => 1.0,
            }
        }
        AssertKind::Concurrent => {
            geom::concurrency_residual([&ln(0), &ln(1), &ln(2)], bbox_center(points), scale)
        }
        AssertKind::Perpendicular => ln(0).normal().dot(ln(1).normal()).abs(),
        AssertKind::Parallel => ln(0).normal().cross(ln(1).normal()).abs(),
        AssertKind::OnCircle => ci(1).power_gap(pt(0)).abs() / scale,
        AssertKind::OnLine => ln(1).signed_dist(pt(0)).abs() / scale,
        AssertKind::Tangent => {
            let c = ci(1);
            match args[0] {
                Value::Line(l) => (l.signed_dist(c.center).abs() - c.radius).abs() / scale,
                Value::Circle(c1) => {
                    let d = geom::dist(c1.center, c.center);
                    (d - (c1.radius + c.radius)).abs().min((d - (c1.radius - c.radius).abs()).abs()) / scale
                }
                _ => unreachable!("typed"),
            }
        }
        AssertKind::EqualLength => (geom::dist(pt(0), pt(1)) - geom::dist(pt(2), pt(3))).abs() / scale,
        AssertKind::EqualAngle => (num(0) - num(1)).abs(),
        AssertKind::RatioEquals => relative_gap(num(0), num(1)),
        AssertKind::MidpointOf => geom::dist(pt(0), construct::midpoint(pt(1), pt(2))) / scale,
        AssertKind::Fixed => unreachable!("fixed is judged across trials"),
    };
    if r.is_finite() {
        Ok(r)
    } else {
        Err("non-finite residual".into())
    }
}

fn relative_gap(x: f64, y: f64) -> f64 {
    let m = x.abs().max(y.abs());
    if m == 0.0 {
        0.0
    } else {
        (x - y).abs() / m
    }
}

fn fixed_residual(reference: &Value, v: &Value, scale: f64) -> f64 {
    match (reference, v) {
        (Value::Point(p), Value::Point(q)) => geom::dist(*p, *q) / scale,
        (Value::Angle(a), Value::Angle(b)) => (a - b).abs(),
        (Value::Scalar(a), Value::Scalar(b)) => relative_gap(*a, *b),
        _ => unreachable!("typed"),
    }
}

fn threshold(tol: &TolerancePolicy, scale: f64) -> f64 {
    tol.rel_eps.max(tol.abs_floor / scale)
}

#[derive(Debug, Clone)]
enum Judged {
    Residual(f64),
    /// Value of a `fixed` expression, judged after all trials.
    Fixed(Value),
    Excluded,
}

#[derive(Debug, Clone)]
struct Trial {
    seed: u64,
    digest: String,
    scale: f64,
    judged: Vec<Judged>,
    gray: usize,
    degenerate: bool,
}

fn run_trial(scene: &Scene, assertions: &[&Assertion], cfg: &RunConfig, index: usize) -> Trial {
    let trial_seed = mix(cfg.seed, index as u64);
    let pinned = scene.has_fixed().then(|| mix(cfg.seed, FRAME_STREAM));
    let mut gray = 0;
    let mut last_seed = trial_seed;
    for j in 0..cfg.max_attempts {
        let seed = mix(trial_seed, j);
        last_seed = seed;
        let opts = EvalOptions {
            seed,
            frame_seed: pinned.unwrap_or(seed),
            tol: cfg.tol,
        };
        let Ok(b) = evaluate_with(scene, &opts) else {
            return Trial { seed, digest: String::new(), scale: 1.0, judged: Vec::new(), gray, degenerate: true };
        };
        let points = b.points();
        let scale = bbox_diameter(&points);
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let thr = threshold(&cfg.tol, scale);
        let (lo, hi) = (cfg.gray_band.0 * thr, cfg.gray_band.1 * thr);
        let judged: Vec<Judged> = assertions
            .iter()
            .zip(&b.assertion_args)
            .map(|(a, args)| match args {
                Err(_) => Judged::Excluded,
                Ok(vals) if a.kind == AssertKind::Fixed => Judged::Fixed(vals[0]),
                Ok(vals) => match residual(a.kind, vals, &points, scale) {
                    Ok(r) => Judged::Residual(r),
                    Err(_) => Judged::Excluded,
                },
            })
            .collect();
        if judged.iter().any(|j| matches!(j, Judged::Residual(r) if *r >= lo && *r <= hi)) {
            gray += 1;
            continue;
        }
        return Trial { seed, digest: b.digest(scene), scale, judged, gray, degenerate: false };
    }
    Trial { seed: last_seed, digest: String::new(), scale: 1.0, judged: Vec::new(), gray, degenerate: true }
}

/// Runs `cfg.trials` trials in parallel; the report does not depend on
/// scheduling.
pub fn run(scene: &Scene, cfg: &RunConfig) -> Report {
    let assertions: Vec<&Assertion> = scene.assertions().collect();
    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(scene, &assertions, cfg, i))
        .collect();
    aggregate(scene, cfg, trials)
}

/// Single-threaded equivalent of [`run`].
pub fn run_serial(scene: &Scene, cfg: &RunConfig) -> Report {
    let assertions: Vec<&Assertion> = scene.assertions().collect();
    let trials: Vec<Trial> = (0..cfg.trials).map(|i| run_trial(scene, &assertions, cfg, i)).collect();
    aggregate(scene, cfg, trials)
}

fn aggregate(scene: &Scene, cfg: &RunConfig, mut trials: Vec<Trial>) -> Report {
    let assertions: Vec<&Assertion> = scene.assertions().collect();
    // fixed values become residuals against the first judged trial
    for (k, _) in assertions.iter().enumerate().filter(|(_, a)| a.kind == AssertKind::Fixed) {
        let reference = trials.iter().find_map(|t| match t.judged.get(k) {
            Some(Judged::Fixed(v)) => Some(*v),
            _ => None,
        });
        for t in trials.iter_mut() {
            if let (Some(r), Some(Judged::Fixed(v))) = (reference.as_ref(), t.judged.get(k)) {
                t.judged[k] = Judged::Residual(fixed_residual(r, v, t.scale));
            }
        }
    }
    let degenerate_count = trials.iter().filter(|t| t.degenerate).count();
    let gray_discards = trials.iter().map(|t| t.gray).sum();
    let mut reports: Vec<AssertionReport> = assertions
        .iter()
        .map(|a| AssertionReport {
            kind: a.kind,
            line: a.line,
            text: a.text.clone(),
            pass_count: 0,
            fail_count: 0,
            excluded: 0,
            worst_residual: 0.0,
            witness: None,
        })
        .collect();
    for (i, t) in trials.iter().enumerate() {
        let thr = threshold(&cfg.tol, t.scale);
        for (k, rep) in reports.iter_mut().enumerate() {
            match t.judged.get(k) {
                Some(Judged::Residual(r)) => {
                    if *r <= thr {
                        rep.pass_count += 1;
                    } else {
                        rep.fail_count += 1;
                    }
                    if rep.witness.is_none() || *r > rep.worst_residual {
                        rep.worst_residual = *r;
                        rep.witness = Some(Witness { trial: i, seed: t.seed, digest: t.digest.clone() });
                    }
                }
                _ => rep.excluded += 1,
            }
        }
    }
    let verdict = if reports.iter().any(|r| r.fail_count > 0) {
        Verdict::Fail
    } else if degenerate_count as f64 / cfg.trials as f64 > cfg.max_degenerate_ratio
        || reports.iter().any(|r| r.pass_count == 0)
    {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: ConfigEcho {
            trials: cfg.trials,
            seed: cfg.seed,
            rel_eps: cfg.tol.rel_eps,
            abs_floor: cfg.tol.abs_floor,
            max_degenerate_ratio: cfg.max_degenerate_ratio,
            gray_band: [cfg.gray_band.0, cfg.gray_band.1],
            max_attempts: cfg.max_attempts,
        },
        assertions: reports,
        degenerate_count,
        gray_discards,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load;

    fn cfg(seed: u64) -> RunConfig {
        RunConfig::with_seed(seed)
    }

    #[test]
    fn midpoint_is_collinear() {
        let s = load("free triangle A B C\nassert collinear(A, B, midpoint(A, B))").unwrap();
        let r = run(&s, &cfg(1));
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.assertions[0].fail_count, 0);
        assert_eq!(r.assertions[0].pass_count + r.assertions[0].excluded, 200);
    }

    #[test]
    fn false_perpendicularity_fails_with_witness() {
        let s = load("free triangle A B C\nassert perpendicular(line(A, B), line(A, C))").unwrap();
        let r = run(&s, &cfg(2));
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.assertions[0].witness.as_ref().unwrap();
        assert_eq!(w.digest.len(), 64);
        assert!(r.assertions[0].worst_residual > 1e-3);
    }

    #[test]
    fn counts_add_up_to_trials() {
        let s = load("free triangle A B C\nfree point P on ray(B, C)\nrequire directed_ratio(P, B, C) > 0\nassert on_line(P, line(B, C))").unwrap();
        let r = run(&s, &cfg(3));
        let a = &r.assertions[0];
        assert_eq!(a.pass_count + a.fail_count + a.excluded, r.config.trials);
        assert!(r.degenerate_count > 0);
        assert!(a.excluded >= r.degenerate_count);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let s = load("free triangle A B C { acute }\nlet H = triangle_center(A, B, C, orthocenter)\nlet O = triangle_center(A, B, C, circumcenter)\nlet G = triangle_center(A, B, C, centroid)\nassert collinear(O, G, H)").unwrap();
        let c = cfg(4);
        assert_eq!(run(&s, &c).to_json(), run_serial(&s, &c).to_json());
        assert_eq!(run(&s, &c).to_json(), run(&s, &c).to_json());
    }

    #[test]
    fn all_degenerate_is_inconclusive() {
        let s = load("free triangle A B C\nrequire dist(A, B) < 0\nassert collinear(A, B, midpoint(A, B))").unwrap();
        let r = run(&s, &cfg(5));
        assert_eq!(r.degenerate_count, 200);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn fixed_point_detected() {
        // the circumcenter does not move with P; the midpoint of AP does
        let good = load("free triangle A B C\nfree point P on circumcircle(A, B, C)\nlet O = triangle_center(A, B, C, circumcenter)\nassert fixed(O, P)").unwrap();
        assert_eq!(run(&good, &cfg(6)).verdict, Verdict::Pass);
        let bad = load("free triangle A B C\nfree point P on circumcircle(A, B, C)\nlet M = midpoint(A, P)\nassert fixed(M, P)").unwrap();
        assert_eq!(run(&bad, &cfg(6)).verdict, Verdict::Fail);
    }

    #[test]
    fn gray_band_residuals_are_discarded() {
        // equal_length(A,B,A,B) is exact; widen the band to swallow zero
        let s = load("free triangle A B C\nassert equal_length(A, B, A, B)").unwrap();
        let mut c = cfg(7);
        c.gray_band = (0.0, 10.0);
        let r = run(&s, &c);
        assert_eq!(r.gray_discards, 200 * 16);
        assert_eq!(r.degenerate_count, 200);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn residual_kinds() {
        let p = |x, y| Value::Point(Point::new(x, y));
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        assert_eq!(residual(AssertKind::Collinear, &[p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.5)], &pts, 1.0).unwrap(), 0.5);
        assert_eq!(residual(AssertKind::Concyclic, &[p(1.0, 0.0), p(0.0, 1.0), p(-1.0, 0.0), p(0.0, -1.0)], &pts, 2.0).unwrap(), 0.0);
        assert_eq!(residual(AssertKind::Concyclic, &[p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(3.0, 0.0)], &pts, 3.0).unwrap(), 1.0);
        assert!(residual(AssertKind::Concyclic, &[p(0.0, 0.0), p(0.0, 0.0), p(2.0, 0.0), p(3.0, 1.0)], &pts, 3.0).is_err());
        assert_eq!(residual(AssertKind::RatioEquals, &[Value::Scalar(2.0), Value::Scalar(1.0)], &pts, 1.0).unwrap(), 0.5);
        let c = geom::Circle::new(Point::new(0.0, 0.0), 1.0).unwrap();
        let c2 = geom::Circle::new(Point::new(3.0, 0.0), 2.0).unwrap();
        assert_eq!(residual(AssertKind::Tangent, &[Value::Circle(c2), Value::Circle(c)], &pts, 1.0).unwrap(), 0.0);
        let l = geom::Line::through(Point::new(0.0, 1.0), Point::new(1.0, 1.0)).unwrap();
        assert!(residual(AssertKind::Tangent, &[Value::Line(l), Value::Circle(c)], &pts, 1.0).unwrap() < 1e-15);
    }
}
