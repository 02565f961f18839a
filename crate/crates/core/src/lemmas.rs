//! Classical triangle theorems as numeric residuals, predicates and solvers.

use serde::Serialize;

use crate::construct::{
    angle, circumcircle, isogonal_line, line_line_intersect, midpoint, tangent_line,
    triangle_center, CenterKind, MAX_BISECTIONS,
};
use crate::error::GeomError;
use crate::geom::{
    bbox_center, bbox_diameter, coincident, cross3, directed_ratio, dist, homogeneous_line,
    is_parallel, is_perpendicular, normalized_det, signed_area, Angle, Line, Point,
    TolerancePolicy, Triangle, DEFAULT_REL_EPS,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSet {
    pub values: Vec<(String, f64)>,
    pub max_abs: f64,
}

impl ResidualSet {
    pub fn new(values: Vec<(String, f64)>) -> Self {
        let max_abs = values.iter().fold(0.0f64, |m, (_, r)| m.max(r.abs()));
        ResidualSet { values, max_abs }
    }

    fn from_pairs<const N: usize>(pairs: [(&str, f64); N]) -> Self {
        ResidualSet::new(pairs.iter().map(|(l, r)| (l.to_string(), *r)).collect())
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.values.iter().find(|(l, _)| l == label).map(|(_, r)| *r)
    }
}

/// Points on the side lines `BC`, `CA`, `AB`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CevianTriple {
    pub d: Point,
    pub e: Point,
    pub f: Point,
}

/// Reading of a signed Ceva/Menelaus product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CevaReading {
    /// Product `+1`: the cevians `AD`, `BE`, `CF` are concurrent.
    Concurrent,
    /// Product `-1`: `D`, `E`, `F` are collinear.
    Collinear,
    Neither,
}

pub fn interpret_ceva(product: f64, tol: f64) -> CevaReading {
    if (product - 1.0).abs() <= tol {
        CevaReading::Concurrent
    } else if (product + 1.0).abs() <= tol {
        CevaReading::Collinear
    } else {
        CevaReading::Neither
    }
}

pub fn law_of_sines_residuals(t: &Triangle) -> Result<ResidualSet, GeomError> {
    let two_r = 2.0 * circumcircle(t.a, t.b, t.c)?.radius;
    Ok(ResidualSet::from_pairs([
        ("a/sinA-2R", t.side_a() / t.angle_a().sin() - two_r),
        ("b/sinB-2R", t.side_b() / t.angle_b().sin() - two_r),
        ("c/sinC-2R", t.side_c() / t.angle_c().sin() - two_r),
    ]))
}

pub fn law_of_cosines_residuals(t: &Triangle) -> Result<ResidualSet, GeomError> {
    let (a, b, c) = (t.side_a(), t.side_b(), t.side_c());
    let rule = |x: f64, y: f64, z: f64, ang: f64| x * x - y * y - z * z + 2.0 * y * z * ang.cos();
    Ok(ResidualSet::from_pairs([
        ("a", rule(a, b, c, t.angle_a())),
        ("b", rule(b, c, a, t.angle_b())),
        ("c", rule(c, a, b, t.angle_c())),
    ]))
}

/// Double-angle and addition formulas. Both forms of the cosine
/// double-angle formula share one entry (the larger defect).
pub fn trig_identity_residuals(x: f64, y: f64) -> ResidualSet {
    let (sx, cx, sy, cy) = (x.sin(), x.cos(), y.sin(), y.cos());
    let cos2 = (2.0 * x).cos();
    let cos2_defect = (cos2 - (2.0 * cx * cx - 1.0))
        .abs()
        .max((cos2 - (1.0 - 2.0 * sx * sx)).abs());
    ResidualSet::from_pairs([
        ("sin2x", (2.0 * x).sin() - 2.0 * sx * cx),
        ("cos2x", cos2_defect),
        ("sin(x+y)", (x + y).sin() - (sx * cy + cx * sy)),
        ("sin(x-y)", (x - y).sin() - (sx * cy - cx * sy)),
        ("cos(x+y)", (x + y).cos() - (cx * cy - sx * sy)),
        ("cos(x-y)", (x - y).cos() - (cx * cy + sx * sy)),
    ])
}

/// Parameter of `x` along `p → q`, after checking that `x` is on that line.
fn carrier_param(x: Point, p: Point, q: Point) -> Result<f64, GeomError> {
    if coincident(p, q) {
        return Err(GeomError::CoincidentPoints);
    }
    let pq = q - p;
    let offset = pq.cross(x - p).abs() / pq.norm();
    if offset > DEFAULT_REL_EPS * bbox_diameter(&[x, p, q]) {
        return Err(GeomError::OffCarrier { offset });
    }
    Ok((x - p).dot(pq) / pq.norm_sq())
}

fn check_not_vertex(x: Point, p: Point, q: Point) -> Result<(), GeomError> {
    if coincident(x, p) || coincident(x, q) {
        return Err(GeomError::AtVertex);
    }
    Ok(())
}

fn check_inside_side(x: Point, p: Point, q: Point) -> Result<(), GeomError> {
    check_not_vertex(x, p, q)?;
    let t = carrier_param(x, p, q)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(GeomError::OutsideSide);
    }
    Ok(())
}

/// Relative defect of `BM/MC = (AB/AC)·(sin BAM / sin MAC)`.
pub fn ratio_lemma_residual(a: Point, b: Point, c: Point, m: Point) -> Result<f64, GeomError> {
    Triangle::new(a, b, c)?;
    check_inside_side(m, b, c)?;
    let lhs = dist(b, m) / dist(m, c);
    let rhs = dist(a, b) / dist(a, c) * (angle(a, b, m)?.sin() / angle(a, m, c)?.sin());
    Ok((lhs - rhs).abs() / lhs)
}

/// `(AB² − AD²) − (BC² − CD²)` and whether `AC ⟂ BD`.
pub fn perpendicularity_criterion(
    a: Point,
    b: Point,
    c: Point,
    d: Point,
    tol: &TolerancePolicy,
) -> Result<(f64, bool), GeomError> {
    let ac = Line::through(a, c)?;
    let bd = Line::through(b, d)?;
    let sq = |p: Point, q: Point| (p - q).norm_sq();
    let gap = (sq(a, b) - sq(a, d)) - (sq(b, c) - sq(c, d));
    Ok((gap, is_perpendicular(&ac, &bd, tol)))
}

/// Relative defect of `(BD/DC)·(BE/EC) = AB²/AC²` for isogonal cevians
/// `AD`, `AE`.
pub fn steiner_residual(a: Point, b: Point, c: Point, d: Point, e: Point) -> Result<f64, GeomError> {
    let ad = Line::through(a, d)?;
    let ae = Line::through(a, e)?;
    let iso = isogonal_line(a, b, c, &ad)?;
    let defect = iso.normal().cross(ae.normal()).abs();
    if defect > DEFAULT_REL_EPS {
        return Err(GeomError::NotIsogonal { defect });
    }
    let target = (dist(a, b) / dist(a, c)).powi(2);
    let product = directed_ratio(d, b, c)? * directed_ratio(e, b, c)?;
    Ok((product - target).abs() / target)
}

/// With `X` the meet of the tangents at `B`, `C`, `T` the meet of line `AX`
/// with `BC` and `M` the midpoint of `BC`: `∠BAT − ∠CAM`, `∠CAT − ∠BAM`,
/// and `BT/TC − (AB/AC)²`. Angles are taken towards `T` because `X` lies
/// on the far side of `A` when `A` is obtuse.
pub fn symmedian_checks(a: Point, b: Point, c: Point) -> Result<ResidualSet, GeomError> {
    let omega = circumcircle(a, b, c)?;
    let tb = tangent_line(&omega, b)?;
    let tc = tangent_line(&omega, c)?;
    let x = line_line_intersect(&tb, &tc).map_err(|_| GeomError::ParallelTangents)?;
    let m = midpoint(b, c);
    let foot = line_line_intersect(&Line::through(a, x)?, &Line::through(b, c)?)?;
    Ok(ResidualSet::from_pairs([
        ("BAX-CAM", angle(a, b, foot)? - angle(a, c, m)?),
        ("CAX-BAM", angle(a, c, foot)? - angle(a, b, m)?),
        ("BT/TC-(AB/AC)^2", directed_ratio(foot, b, c)? - (dist(a, b) / dist(a, c)).powi(2)),
    ]))
}

/// The unique `α ∈ (0, t)` with `sin α / sin(t − α) = r`.
pub fn solve_ratio_angle(t: Angle, r: f64) -> Result<Angle, GeomError> {
    let t = t.radians();
    if !(t > 0.0 && t < std::f64::consts::PI) {
        return Err(GeomError::InvalidAngle(t));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(GeomError::NonPositiveRatio(r));
    }
    // sin x − r·sin(t − x) has the sign of f(x) − r and no poles on (0, t)
    let g = |x: f64| x.sin() - r * (t - x).sin();
    let (mut lo, mut hi) = (0.0, t);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Angle(0.5 * (lo + hi)))
}

pub fn ratio_angle_function(t: f64, x: f64) -> f64 {
    x.sin() / (t - x).sin()
}

fn check_triple(a: Point, b: Point, c: Point, triple: &CevianTriple) -> Result<(), GeomError> {
    for (x, p, q) in [(triple.d, b, c), (triple.e, c, a), (triple.f, a, b)] {
        check_not_vertex(x, p, q)?;
        carrier_param(x, p, q)?;
    }
    Ok(())
}

/// `(BD/DC)·(CE/EA)·(AF/FB)` with signed ratios, positive for interior
/// points.
pub fn ceva_product(a: Point, b: Point, c: Point, triple: &CevianTriple) -> Result<f64, GeomError> {
    Triangle::new(a, b, c)?;
    check_triple(a, b, c, triple)?;
    Ok(directed_ratio(triple.d, b, c)? * directed_ratio(triple.e, c, a)? * directed_ratio(triple.f, a, b)?)
}

pub fn trig_ceva_product(a: Point, b: Point, c: Point, triple: &CevianTriple) -> Result<f64, GeomError> {
    Triangle::new(a, b, c)?;
    for (x, p, q) in [(triple.d, b, c), (triple.e, c, a), (triple.f, a, b)] {
        check_inside_side(x, p, q)?;
    }
    let (d, e, f) = (triple.d, triple.e, triple.f);
    let sine_ratio = |v: Point, x: Point, p: Point, q: Point| -> Result<f64, GeomError> {
        Ok(angle(v, x, p)?.sin() / angle(v, x, q)?.sin())
    };
    Ok(sine_ratio(a, d, b, c)? * sine_ratio(b, e, c, a)? * sine_ratio(c, f, a, b)?)
}

/// For `E` on `AB` and `F` on `AC`: whether `EF ∥ BC` and whether the
/// cevians `AM`, `BF`, `CE` (with `M` the midpoint of `BC`) concur.
pub fn median_parallel_equiv(
    a: Point,
    b: Point,
    c: Point,
    e: Point,
    f: Point,
    tol: &TolerancePolicy,
) -> Result<(bool, bool), GeomError> {
    let t = Triangle::new(a, b, c)?;
    check_inside_side(e, a, b)?;
    check_inside_side(f, a, c)?;
    let parallel = is_parallel(&Line::through(e, f)?, &Line::through(b, c)?, tol);
    let am = Line::through(a, midpoint(b, c))?;
    let bf = Line::through(b, f)?;
    let ce = Line::through(c, e)?;
    let pts = t.vertices();
    let defect = crate::geom::concurrency_residual([&am, &bf, &ce], bbox_center(&pts), t.scale());
    Ok((parallel, defect <= tol.rel_eps))
}

/// Central perspectivity (vertex joins concur) and axial perspectivity
/// (side-pair meets collinear, points at infinity allowed).
pub fn desargues_check(
    t1: &Triangle,
    t2: &Triangle,
    tol: &TolerancePolicy,
) -> Result<(bool, bool), GeomError> {
    let (v1, v2) = (t1.vertices(), t2.vertices());
    let all: Vec<Point> = v1.iter().chain(v2.iter()).copied().collect();
    let (center, scale) = (bbox_center(&all), bbox_diameter(&all));
    let mut joins = Vec::with_capacity(3);
    for i in 0..3 {
        if coincident(v1[i], v2[i]) {
            return Err(GeomError::CoincidentPoints);
        }
        joins.push(homogeneous_line(&Line::through(v1[i], v2[i])?, center, scale));
    }
    let central = normalized_det([joins[0], joins[1], joins[2]]).abs() <= tol.rel_eps;
    let mut meets = [[0.0; 3]; 3];
    for (i, meet) in meets.iter_mut().enumerate() {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let s1 = homogeneous_line(&Line::through(v1[j], v1[k])?, center, scale);
        let s2 = homogeneous_line(&Line::through(v2[j], v2[k])?, center, scale);
        *meet = cross3(s1, s2);
    }
    let axial = normalized_det(meets).abs() <= tol.rel_eps;
    Ok((central, axial))
}

/// `|MX − MY| / |XY|` for chords `AB`, `CD` through the midpoint `M` of
/// chord `PQ`, with `X = AD ∩ PQ` and `Y = BC ∩ PQ`.
#[allow(clippy::too_many_arguments)]
pub fn butterfly_residual(
    c: &crate::geom::Circle,
    p: Point,
    q: Point,
    a: Point,
    b: Point,
    cc: Point,
    d: Point,
) -> Result<f64, GeomError> {
    let m = midpoint(p, q);
    let scale = 2.0 * c.radius;
    for (u, v) in [(a, b), (cc, d)] {
        if Line::through(u, v)?.signed_dist(m).abs() > DEFAULT_REL_EPS * scale {
            return Err(GeomError::ChordMissesMidpoint);
        }
    }
    let pq = Line::through(p, q)?;
    let x = line_line_intersect(&Line::through(a, d)?, &pq)?;
    let y = line_line_intersect(&Line::through(b, cc)?, &pq)?;
    let xy = dist(x, y);
    if xy <= DEFAULT_REL_EPS * scale {
        return Ok(0.0);
    }
    Ok((dist(m, x) - dist(m, y)).abs() / xy)
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let o = |a: Point, b: Point, c: Point| signed_area(a, b, c);
    let (d1, d2) = (o(q1, q2, p1), o(q1, q2, p2));
    let (d3, d4) = (o(p1, p2, q1), o(p1, p2, q2));
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}

fn winding_inside(vertices: &[Point], k: Point) -> bool {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let (u, v) = (vertices[i], vertices[(i + 1) % n]);
        if (u.y > k.y) != (v.y > k.y) {
            let x = u.x + (k.y - u.y) * (v.x - u.x) / (v.y - u.y);
            if k.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Even-odd test; points on the boundary may land either way.
pub fn strictly_inside(vertices: &[Point], k: Point) -> bool {
    winding_inside(vertices, k)
}

/// `Π sin∠(K A_{i+1} A_i) / sin∠(K A_{i+1} A_{i+2})` over a simple polygon
/// with `K` strictly inside.
pub fn polygon_sine_product(vertices: &[Point], k: Point) -> Result<f64, GeomError> {
    let n = vertices.len();
    if n < 3 {
        return Err(GeomError::DegenerateTriangle { area: 0.0 });
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (p1, p2) = (vertices[i], vertices[(i + 1) % n]);
            let (q1, q2) = (vertices[j], vertices[(j + 1) % n]);
            if segments_cross(p1, p2, q1, q2) {
                return Err(GeomError::SelfIntersecting);
            }
        }
    }
    if !winding_inside(vertices, k) {
        return Err(GeomError::OutsidePolygon);
    }
    let scale = bbox_diameter(vertices);
    for i in 0..n {
        let seg = Line::through(vertices[i], vertices[(i + 1) % n])?;
        if seg.signed_dist(k).abs() <= DEFAULT_REL_EPS * scale {
            return Err(GeomError::OutsidePolygon);
        }
    }
    let mut product = 1.0;
    for i in 0..n {
        let (prev, cur, next) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
        product *= angle(cur, k, prev)?.sin() / angle(cur, k, next)?.sin();
    }
    Ok(product)
}

/// Perpendicularity defects in the configuration where `E` on ray `BA` and
/// `F` on ray `CA` lie at the semiperimeter from `B` and `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiperimeterPoints {
    pub e: Point,
    pub f: Point,
    /// `|cos|` of the angle between `EF` and `OI`.
    pub ef_oi: f64,
    /// Same against `DI`, `D` the antipode of `A`.
    pub ef_di: f64,
}

pub fn semiperimeter_points(a: Point, b: Point, c: Point) -> Result<SemiperimeterPoints, GeomError> {
    let t = Triangle::new(a, b, c)?;
    let s = 0.5 * (t.side_a() + t.side_b() + t.side_c());
    let e = b + (a - b) * (s / t.side_c());
    let f = c + (a - c) * (s / t.side_b());
    let omega = circumcircle(a, b, c)?;
    let i = triangle_center(a, b, c, CenterKind::Incenter)?;
    let d = crate::construct::antipode(a, &omega)?;
    let ef = (f - e).normalized().ok_or(GeomError::CoincidentPoints)?;
    let oi = (i - omega.center).normalized().ok_or(GeomError::CoincidentPoints)?;
    let di = (i - d).normalized().ok_or(GeomError::CoincidentPoints)?;
    Ok(SemiperimeterPoints {
        e,
        f,
        ef_oi: ef.dot(oi).abs(),
        ef_di: ef.dot(di).abs(),
    })
}
