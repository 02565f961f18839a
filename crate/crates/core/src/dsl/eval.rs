use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::resolve::{NodeKind, Op, Scene, TExpr, TGuard};
use crate::construct::{self, Curve, IncircleResult, MixtilinearResult, Orientation, Through, Vertex};
use crate::error::GeomError;
use crate::geom::{self, bbox_center, bbox_diameter, Circle, Line, Point, TolerancePolicy};
use crate::lemmas;
use crate::verify::sample::{mix, sample_triangle};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathValue {
    Segment(Point, Point),
    Ray(Point, Point),
    /// Counterclockwise from the first point to the second.
    Arc(Circle, Point, Point),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Point(Point),
    Line(Line),
    Circle(Circle),
    Scalar(f64),
    Angle(f64),
    Bool(bool),
    Path(PathValue),
    Region([Point; 3]),
    Incircle(IncircleResult),
    Mixtilinear(MixtilinearResult),
    Kind(construct::CenterKind),
    Mode(Through),
}

impl Value {
    pub fn as_point(&self) -> Option<Point> {
        match self {
            Value::Point(p) => Some(*p),
            _ => None,
        }
    }

    pub fn as_line(&self) -> Option<Line> {
        match self {
            Value::Line(l) => Some(*l),
            _ => None,
        }
    }

    pub fn as_circle(&self) -> Option<Circle> {
        match self {
            Value::Circle(c) => Some(*c),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Scalar(x) | Value::Angle(x) => Some(*x),
            _ => None,
        }
    }

    fn bits(&self, out: &mut Vec<u8>) {
        let mut put = |xs: &[f64]| {
            for x in xs {
                out.extend_from_slice(&x.to_bits().to_le_bytes());
            }
        };
        match self {
            Value::Point(p) => put(&[p.x, p.y]),
            Value::Line(l) => put(&[l.nx, l.ny, l.d]),
            Value::Circle(c) => put(&[c.center.x, c.center.y, c.radius]),
            Value::Scalar(x) | Value::Angle(x) => put(&[*x]),
            Value::Bool(b) => put(&[f64::from(u8::from(*b))]),
            Value::Path(PathValue::Segment(p, q)) | Value::Path(PathValue::Ray(p, q)) => put(&[p.x, p.y, q.x, q.y]),
            Value::Path(PathValue::Arc(c, p, q)) => put(&[c.center.x, c.center.y, c.radius, p.x, p.y, q.x, q.y]),
            Value::Region(v) => put(&[v[0].x, v[0].y, v[1].x, v[1].y, v[2].x, v[2].y]),
            Value::Incircle(r) => put(&[r.circle.center.x, r.circle.center.y, r.circle.radius]),
            Value::Mixtilinear(r) => put(&[r.circle.center.x, r.circle.center.y, r.circle.radius]),
            Value::Kind(_) | Value::Mode(_) => {}
        }
    }

    fn is_finite(&self) -> bool {
        let mut b = Vec::new();
        self.bits(&mut b);
        b.chunks(8)
            .all(|c| f64::from_bits(u64::from_le_bytes(c.try_into().expect("8 bytes"))).is_finite())
    }
}

/// Values of every named slot for one sample, plus the evaluated arguments
/// of each assertion (an `Err` excludes that assertion for this sample).
#[derive(Debug, Clone, PartialEq)]
pub struct Bindings {
    pub values: Vec<Value>,
    pub assertion_args: Vec<Result<Vec<Value>, String>>,
}

impl Bindings {
    pub fn get(&self, scene: &Scene, name: &str) -> Option<Value> {
        scene.slot(name).map(|s| self.values[s])
    }

    pub fn points(&self) -> Vec<Point> {
        self.values.iter().filter_map(Value::as_point).collect()
    }

    /// SHA-256 over slot names and the bit patterns of their values.
    pub fn digest(&self, scene: &Scene) -> String {
        let mut bytes = Vec::new();
        for (info, v) in scene.slots.iter().zip(&self.values) {
            bytes.extend_from_slice(info.name.as_bytes());
            bytes.push(0);
            v.bits(&mut bytes);
        }
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("degenerate sample at line {line}: {reason}")]
pub struct DegenerateSample {
    pub node: usize,
    pub line: usize,
    pub reason: String,
}

/// Seeds for one evaluation. Free triangles draw from `frame_seed`, free
/// points from `seed`; the two streams are split so that pinning the frame
/// leaves the point draws independent.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub seed: u64,
    pub frame_seed: u64,
    pub tol: TolerancePolicy,
}

impl EvalOptions {
    pub fn new(seed: u64) -> Self {
        EvalOptions {
            seed,
            frame_seed: seed,
            tol: TolerancePolicy::default(),
        }
    }
}

pub fn evaluate(scene: &Scene, seed: u64) -> Result<Bindings, DegenerateSample> {
    evaluate_with(scene, &EvalOptions::new(seed))
}

struct Ctx<'a> {
    values: &'a [Value],
    tol: TolerancePolicy,
    candidate: Option<Point>,
}

fn geom_err(e: GeomError) -> String {
    e.to_string()
}

pub fn evaluate_with(scene: &Scene, opts: &EvalOptions) -> Result<Bindings, DegenerateSample> {
    let mut frame_rng = ChaCha8Rng::seed_from_u64(mix(opts.frame_seed, 1));
    let mut point_rng = ChaCha8Rng::seed_from_u64(mix(opts.seed, 2));
    let mut values: Vec<Value> = Vec::with_capacity(scene.slots.len());
    let mut assertion_args = Vec::new();
    for (idx, node) in scene.nodes.iter().enumerate() {
        let degenerate = |reason: String| DegenerateSample {
            node: idx,
            line: node.span.line,
            reason,
        };
        let points: Vec<Point> = values.iter().filter_map(Value::as_point).collect();
        let tol = opts.tol.for_points(&points);
        match &node.kind {
            NodeKind::FreeTriangle { constraints, .. } => {
                let t = sample_triangle(constraints, &mut frame_rng).map_err(|e| degenerate(e.to_string()))?;
                values.extend(t.vertices().map(Value::Point));
            }
            NodeKind::FreePoint { locus, .. } => {
                let ctx = Ctx { values: &values, tol, candidate: None };
                let locus = eval(locus, &ctx).map_err(degenerate)?;
                let p = sample_on(&locus, &points, &mut point_rng).map_err(degenerate)?;
                values.push(Value::Point(p));
            }
            NodeKind::Let { expr, .. } => {
                let ctx = Ctx { values: &values, tol, candidate: None };
                let v = eval(expr, &ctx).map_err(degenerate)?;
                values.push(v);
            }
            NodeKind::Require(guard) => {
                let ctx = Ctx { values: &values, tol, candidate: None };
                let ok = match guard {
                    TGuard::Predicate(e) => matches!(eval(e, &ctx).map_err(&degenerate)?, Value::Bool(true)),
                    TGuard::Compare { lhs, op, rhs } => {
                        let l = eval(lhs, &ctx).map_err(&degenerate)?.as_number().expect("typed");
                        let r = eval(rhs, &ctx).map_err(&degenerate)?.as_number().expect("typed");
                        op.holds(l, r)
                    }
                };
                if !ok {
                    return Err(degenerate("guard failed".into()));
                }
            }
            NodeKind::Assert(a) => {
                let ctx = Ctx { values: &values, tol, candidate: None };
                assertion_args.push(a.args.iter().map(|e| eval(e, &ctx)).collect());
            }
        }
    }
    Ok(Bindings { values, assertion_args })
}

fn sample_on(locus: &Value, points: &[Point], rng: &mut ChaCha8Rng) -> Result<Point, String> {
    Ok(match locus {
        Value::Path(PathValue::Segment(p, q)) => p.lerp(*q, rng.gen_range(0.0..1.0)),
        Value::Path(PathValue::Ray(p, q)) => p.lerp(*q, rng.gen_range(0.0..3.0)),
        Value::Path(PathValue::Arc(c, p, q)) => {
            let (a0, a1) = ((*p - c.center), (*q - c.center));
            let start = a0.y.atan2(a0.x);
            let span = (a1.y.atan2(a1.x) - start).rem_euclid(2.0 * PI);
            c.point_at(start + span * rng.gen_range(0.0..1.0))
        }
        Value::Circle(c) => c.point_at(rng.gen_range(0.0..2.0 * PI)),
        Value::Line(l) => {
            let scale = bbox_diameter(points).max(1.0);
            let anchor = construct::foot(bbox_center(points), l);
            anchor + l.direction() * (scale * rng.gen_range(-1.0..1.0))
        }
        Value::Region([a, b, c]) => {
            let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            *a + (*b - *a) * u + (*c - *a) * v
        }
        other => return Err(format!("{other:?} is not a locus")),
    })
}

fn curve_of(v: &Value) -> Result<Curve, String> {
    match v {
        Value::Path(PathValue::Segment(p, q)) | Value::Path(PathValue::Ray(p, q)) => Ok(Curve::Segment { start: *p, end: *q }),
        Value::Circle(c) => Ok(Curve::Circle(*c)),
        Value::Line(l) => Ok(Curve::Line(*l)),
        _ => Err("solve_on_curve needs a segment, ray, line or circle".into()),
    }
}

fn is_convex(pts: &[Point]) -> bool {
    let n = pts.len();
    let mut sign = 0.0;
    let mut turning = 0.0;
    for i in 0..n {
        let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        let cross = (b - a).cross(c - b);
        if cross == 0.0 || (sign != 0.0 && cross.signum() != sign) {
            return false;
        }
        sign = cross.signum();
        let (u, w) = (b - a, c - b);
        turning += u.cross(w).atan2(u.dot(w));
    }
    // a star polygon turns by a multiple of 2π other than ±2π
    (turning.abs() - 2.0 * PI).abs() < 1e-6
}

fn eval(e: &TExpr, ctx: &Ctx) -> Result<Value, String> {
    let v = eval_inner(e, ctx)?;
    if !v.is_finite() {
        return Err(geom_err(GeomError::NonFinite));
    }
    Ok(v)
}

fn eval_inner(e: &TExpr, ctx: &Ctx) -> Result<Value, String> {
    let (op, args, span) = match e {
        TExpr::Slot(s) => return Ok(ctx.values[*s]),
        TExpr::Placeholder => return ctx.candidate.map(Value::Point).ok_or_else(|| "placeholder outside solve".to_string()),
        TExpr::Scalar(x) => return Ok(Value::Scalar(*x)),
        TExpr::Angle(x) => return Ok(Value::Angle(*x)),
        TExpr::Kind(k) => return Ok(Value::Kind(*k)),
        TExpr::Mode(m) => return Ok(Value::Mode(*m)),
        TExpr::Call { op, args, span } => (*op, args, span),
    };
    if op == Op::SolveOnCurve {
        let curve = curve_of(&eval(&args[0], ctx)?)?;
        let lo = eval(&args[2], ctx)?.as_number().expect("typed");
        let hi = eval(&args[3], ctx)?.as_number().expect("typed");
        let f = |p: Point| -> Result<f64, GeomError> {
            let inner = Ctx { values: ctx.values, tol: ctx.tol, candidate: Some(p) };
            eval(&args[1], &inner)
                .map(|v| v.as_number().expect("typed"))
                .map_err(|_| GeomError::NonFinite)
        };
        return construct::solve_on_curve(&curve, f, (lo, hi), &ctx.tol)
            .map(Value::Point)
            .map_err(|err| format!("{} at column {}: {err}", op.name(), span.column));
    }
    let vals: Vec<Value> = args.iter().map(|a| eval(a, ctx)).collect::<Result<_, _>>()?;
    let pt = |k: usize| vals[k].as_point().expect("typed");
    let ln = |k: usize| vals[k].as_line().expect("typed");
    let ci = |k: usize| vals[k].as_circle().expect("typed");
    let num = |k: usize| vals[k].as_number().expect("typed");
    let pts = || -> Vec<Point> { vals.iter().filter_map(Value::as_point).collect() };
    let wrap = |r: Result<Value, GeomError>| r.map_err(|err| format!("{}: {err}", op.name()));
    wrap(match op {
        Op::Midpoint => Ok(Value::Point(construct::midpoint(pt(0), pt(1)))),
        Op::Foot => Ok(Value::Point(construct::foot(pt(0), &ln(1)))),
        Op::Reflect => Ok(Value::Point(construct::reflect(pt(0), &ln(1)))),
        Op::Antipode => construct::antipode(pt(0), &ci(1)).map(Value::Point),
        Op::LineLineIntersect => construct::line_line_intersect(&ln(0), &ln(1)).map(Value::Point),
        Op::SecondIntersection => construct::second_intersection(&ln(0), &ci(1), pt(2)).map(|r| Value::Point(r.point)),
        Op::TriangleCenter => match vals[3] {
            Value::Kind(k) => construct::triangle_center(pt(0), pt(1), pt(2), k).map(Value::Point),
            _ => unreachable!("typed"),
        },
        Op::ArcMidpoint => construct::arc_midpoint(&ci(0), pt(1), pt(2), pt(3)).map(Value::Point),
        Op::TangentsFrom => construct::tangents_from(&ci(0), pt(1))
            .map(|(a, b)| Value::Point(if num(2) == 1.0 { a } else { b })),
        Op::SecondTangentPoint => construct::second_tangent_point(&ci(0), pt(1), pt(2)).map(Value::Point),
        Op::SolveOnCurve => unreachable!("handled above"),
        Op::Center => Ok(Value::Point(ci(0).center)),
        Op::TouchD | Op::TouchE | Op::TouchF => match vals[0] {
            Value::Incircle(r) => Ok(Value::Point(match op {
                Op::TouchD => r.touch_d,
                Op::TouchE => r.touch_e,
                _ => r.touch_f,
            })),
            _ => unreachable!("typed"),
        },
        Op::TouchK | Op::TouchL | Op::TouchM => match vals[0] {
            Value::Mixtilinear(r) => Ok(Value::Point(match op {
                Op::TouchK => r.touch_k,
                Op::TouchL => r.touch_l,
                _ => r.touch_m,
            })),
            _ => unreachable!("typed"),
        },
        Op::Line => Line::through(pt(0), pt(1)).map(Value::Line),
        Op::TangentLine => construct::tangent_line(&ci(0), pt(1)).map(Value::Line),
        Op::Through => match vals[2] {
            Value::Mode(m) => Ok(Value::Line(construct::through(pt(0), &ln(1), m))),
            _ => unreachable!("typed"),
        },
        Op::IsogonalLine => construct::isogonal_line(pt(0), pt(1), pt(2), &ln(3)).map(Value::Line),
        Op::RotateRay => {
            let o = if num(3) > 0.0 { Orientation::Ccw } else { Orientation::Cw };
            construct::rotate_ray(pt(0), pt(1), num(2), o).map(Value::Line)
        }
        Op::Circumcircle => construct::circumcircle(pt(0), pt(1), pt(2)).map(Value::Circle),
        Op::Circle => Circle::through(pt(0), pt(1)).map(Value::Circle),
        Op::CircleOf => match vals[0] {
            Value::Incircle(r) => Ok(Value::Circle(r.circle)),
            Value::Mixtilinear(r) => Ok(Value::Circle(r.circle)),
            _ => unreachable!("typed"),
        },
        Op::Incircle => construct::incircle(pt(0), pt(1), pt(2)).map(Value::Incircle),
        Op::Excircle => {
            let v = pt(3);
            let vertex = if v == pt(0) {
                Ok(Vertex::A)
            } else if v == pt(1) {
                Ok(Vertex::B)
            } else if v == pt(2) {
                Ok(Vertex::C)
            } else {
                Err(GeomError::NotAVertex)
            };
            vertex.and_then(|vx| construct::excircle(pt(0), pt(1), pt(2), vx).map(Value::Incircle))
        }
        Op::Mixtilinear => construct::mixtilinear_incircle(pt(0), pt(1), pt(2)).map(Value::Mixtilinear),
        Op::Dist => Ok(Value::Scalar(geom::dist(pt(0), pt(1)))),
        Op::Radius => Ok(Value::Scalar(ci(0).radius)),
        Op::DirectedRatio => geom::directed_ratio(pt(0), pt(1), pt(2)).map(Value::Scalar),
        Op::SignedArea => Ok(Value::Scalar(geom::signed_area(pt(0), pt(1), pt(2)))),
        Op::AngleAt => geom::angle_at(pt(0), pt(1), pt(2)).map(|a| Value::Angle(a.0)),
        Op::Diff => Ok(Value::Scalar(num(0) - num(1))),
        Op::Segment => Ok(Value::Path(PathValue::Segment(pt(0), pt(1)))),
        Op::Ray => Ok(Value::Path(PathValue::Ray(pt(0), pt(1)))),
        Op::Arc => Ok(Value::Path(PathValue::Arc(ci(0), pt(1), pt(2)))),
        Op::Interior => Ok(Value::Region([pt(0), pt(1), pt(2)])),
        Op::IsCollinear => Ok(Value::Bool(geom::is_collinear(&pts(), &ctx.tol))),
        Op::IsConcyclic => geom::is_concyclic([pt(0), pt(1), pt(2), pt(3)], &ctx.tol).map(Value::Bool),
        Op::IsPerpendicular => Ok(Value::Bool(geom::is_perpendicular(&ln(0), &ln(1), &ctx.tol))),
        Op::IsParallel => Ok(Value::Bool(geom::is_parallel(&ln(0), &ln(1), &ctx.tol))),
        Op::Convex => Ok(Value::Bool(is_convex(&pts()))),
        Op::Inside => {
            let all = pts();
            Ok(Value::Bool(lemmas::strictly_inside(&all[1..], all[0])))
        }
    })
}
