//! Deterministic constructions: intersections, circles attached to a
//! triangle, classical centers, tangents, reflections, isogonals and the
//! numerically solved mixtilinear incircle.

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::geom::{
    angle_at, bbox_diameter, coincident, dist, Circle, Line, Point, TolerancePolicy,
    Triangle, DEFAULT_ABS_FLOOR, DEFAULT_REL_EPS,
};

/// Upper bound on bisection steps for every 1-D solve in this module.
pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CenterKind {
    Centroid,
    Circumcenter,
    Incenter,
    Orthocenter,
    ExcenterA,
    ExcenterB,
    ExcenterC,
    SymmedianPoint,
}

impl CenterKind {
    pub const ALL: [CenterKind; 8] = [
        CenterKind::Centroid,
        CenterKind::Circumcenter,
        CenterKind::Incenter,
        CenterKind::Orthocenter,
        CenterKind::ExcenterA,
        CenterKind::ExcenterB,
        CenterKind::ExcenterC,
        CenterKind::SymmedianPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CenterKind::Centroid => "centroid",
            CenterKind::Circumcenter => "circumcenter",
            CenterKind::Incenter => "incenter",
            CenterKind::Orthocenter => "orthocenter",
            CenterKind::ExcenterA => "excenter_A",
            CenterKind::ExcenterB => "excenter_B",
            CenterKind::ExcenterC => "excenter_C",
            CenterKind::SymmedianPoint => "symmedian_point",
        }
    }

    pub fn from_name(name: &str) -> Option<CenterKind> {
        CenterKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// One of the three vertices of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vertex {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Through {
    Parallel,
    Perpendicular,
}

/// Sense of rotation; `Ccw` is the mathematically positive one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }
}

/// A circle tangent to the three side lines, with its touch points on
/// `BC`, `CA`, `AB` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncircleResult {
    pub circle: Circle,
    pub touch_d: Point,
    pub touch_e: Point,
    pub touch_f: Point,
}

/// The A-mixtilinear incircle: tangent to `AB` at `touch_k`, to `AC` at
/// `touch_l`, and internally to the circumcircle at `touch_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtilinearResult {
    pub circle: Circle,
    pub touch_k: Point,
    pub touch_l: Point,
    pub touch_m: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondIntersection {
    pub point: Point,
    /// Set when the line touches the circle at the known point.
    pub tangent: bool,
}

/// A parameterized curve for [`solve_on_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    /// `anchor + s·direction`, anchored at the foot of the origin.
    Line(Line),
    /// `center + r·(cos s, sin s)`.
    Circle(Circle),
    /// `start + s·(end - start)`.
    Segment { start: Point, end: Point },
}

impl Curve {
    pub fn point_at(&self, s: f64) -> Point {
        match self {
            Curve::Line(l) => l.point_at(s),
            Curve::Circle(c) => c.point_at(s),
            Curve::Segment { start, end } => start.lerp(*end, s),
        }
    }
}

pub fn midpoint(p: Point, q: Point) -> Point {
    Point::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
}

pub fn foot(p: Point, l: &Line) -> Point {
    p - l.normal() * l.signed_dist(p)
}

pub fn reflect(p: Point, l: &Line) -> Point {
    p - l.normal() * (2.0 * l.signed_dist(p))
}

fn on_circle_tol(c: &Circle) -> f64 {
    DEFAULT_REL_EPS * 2.0 * c.radius
}

fn check_on_circle(p: Point, c: &Circle) -> Result<(), GeomError> {
    let offset = c.power_gap(p).abs();
    if offset > on_circle_tol(c) {
        return Err(GeomError::NotOnCircle { offset });
    }
    Ok(())
}

pub fn antipode(p: Point, c: &Circle) -> Result<Point, GeomError> {
    check_on_circle(p, c)?;
    Ok(c.center * 2.0 - p)
}

pub fn through(p: Point, l: &Line, mode: Through) -> Line {
    let dir = match mode {
        Through::Parallel => l.direction(),
        Through::Perpendicular => l.normal(),
    };
    Line::from_point_dir(p, dir).expect("unit direction")
}

pub fn line_line_intersect(l1: &Line, l2: &Line) -> Result<Point, GeomError> {
    let det = l1.nx * l2.ny - l1.ny * l2.nx;
    if det.abs() <= DEFAULT_REL_EPS {
        return Err(GeomError::ParallelLines {
            angle: det.abs().asin(),
        });
    }
    let x = (l1.d * l2.ny - l2.d * l1.ny) / det;
    let y = (l1.nx * l2.d - l2.nx * l1.d) / det;
    Ok(Point::new(x, y))
}

/// The other intersection of `l` with `c`, given one intersection `known`.
pub fn second_intersection(
    l: &Line,
    c: &Circle,
    known: Point,
) -> Result<SecondIntersection, GeomError> {
    check_on_circle(known, c)?;
    let scale = 2.0 * c.radius;
    let off_line = l.signed_dist(known).abs();
    if off_line > DEFAULT_REL_EPS * scale.max(bbox_diameter(&[known, c.center])) {
        return Err(GeomError::NotOnLine { offset: off_line });
    }
    // The chord's midpoint is the foot of the center; the other end is the
    // mirror of `known` through it.
    let mid = foot(c.center, l);
    let half = known - mid;
    if half.norm_sq() < (1e-10 * scale).powi(2) {
        return Ok(SecondIntersection {
            point: known,
            tangent: true,
        });
    }
    Ok(SecondIntersection {
        point: mid - half,
        tangent: false,
    })
}

pub fn circumcircle(a: Point, b: Point, c: Point) -> Result<Circle, GeomError> {
    Triangle::new(a, b, c)?;
    let (bp, cp) = (b - a, c - a);
    let d = 2.0 * bp.cross(cp);
    let (b2, c2) = (bp.norm_sq(), cp.norm_sq());
    let u = Point::new((cp.y * b2 - bp.y * c2) / d, (bp.x * c2 - cp.x * b2) / d);
    Circle::new(a + u, u.norm())
}

fn touch_points(center: Point, t: &Triangle) -> Result<(Point, Point, Point), GeomError> {
    let bc = Line::through(t.b, t.c)?;
    let ca = Line::through(t.c, t.a)?;
    let ab = Line::through(t.a, t.b)?;
    Ok((foot(center, &bc), foot(center, &ca), foot(center, &ab)))
}

pub fn incircle(a: Point, b: Point, c: Point) -> Result<IncircleResult, GeomError> {
    let t = Triangle::new(a, b, c)?;
    let (la, lb, lc) = (t.side_a(), t.side_b(), t.side_c());
    let per = la + lb + lc;
    let center = (a * la + b * lb + c * lc) * (1.0 / per);
    let r = 2.0 * t.signed_area().abs() / per;
    let (touch_d, touch_e, touch_f) = touch_points(center, &t)?;
    Ok(IncircleResult {
        circle: Circle::new(center, r)?,
        touch_d,
        touch_e,
        touch_f,
    })
}

/// The excircle opposite `vertex`.
pub fn excircle(a: Point, b: Point, c: Point, vertex: Vertex) -> Result<IncircleResult, GeomError> {
    let t = Triangle::new(a, b, c)?;
    let (la, lb, lc) = (t.side_a(), t.side_b(), t.side_c());
    let (wa, wb, wc) = match vertex {
        Vertex::A => (-la, lb, lc),
        Vertex::B => (la, -lb, lc),
        Vertex::C => (la, lb, -lc),
    };
    let w = wa + wb + wc;
    let center = (a * wa + b * wb + c * wc) * (1.0 / w);
    let area = t.signed_area().abs();
    // r_a = area / (s - a) and 2(s - a) = -a + b + c = w
    let r = 2.0 * area / w;
    let (touch_d, touch_e, touch_f) = touch_points(center, &t)?;
    Ok(IncircleResult {
        circle: Circle::new(center, r)?,
        touch_d,
        touch_e,
        touch_f,
    })
}

pub fn triangle_center(a: Point, b: Point, c: Point, kind: CenterKind) -> Result<Point, GeomError> {
    let t = Triangle::new(a, b, c)?;
    let (la, lb, lc) = (t.side_a(), t.side_b(), t.side_c());
    let weighted = |wa: f64, wb: f64, wc: f64| (a * wa + b * wb + c * wc) * (1.0 / (wa + wb + wc));
    Ok(match kind {
        CenterKind::Centroid => weighted(1.0, 1.0, 1.0),
        CenterKind::Circumcenter => circumcircle(a, b, c)?.center,
        CenterKind::Incenter => weighted(la, lb, lc),
        CenterKind::Orthocenter => {
            let alt_a = through(a, &Line::through(b, c)?, Through::Perpendicular);
            let alt_b = through(b, &Line::through(c, a)?, Through::Perpendicular);
            line_line_intersect(&alt_a, &alt_b)?
        }
        CenterKind::ExcenterA => excircle(a, b, c, Vertex::A)?.circle.center,
        CenterKind::ExcenterB => excircle(a, b, c, Vertex::B)?.circle.center,
        CenterKind::ExcenterC => excircle(a, b, c, Vertex::C)?.circle.center,
        CenterKind::SymmedianPoint => weighted(la * la, lb * lb, lc * lc),
    })
}

/// The midpoint of the arc `PQ` of `c` that contains `side_witness`.
pub fn arc_midpoint(c: &Circle, p: Point, q: Point, side_witness: Point) -> Result<Point, GeomError> {
    if coincident(p, q) {
        return Err(GeomError::CoincidentPoints);
    }
    check_on_circle(p, c)?;
    check_on_circle(q, c)?;
    check_on_circle(side_witness, c)?;
    let chord = q - p;
    let n = chord.perp().normalized().ok_or(GeomError::CoincidentPoints)?;
    let side = chord.cross(side_witness - p);
    if side.abs() <= DEFAULT_ABS_FLOOR * chord.norm() * c.radius {
        return Err(GeomError::CoincidentPoints);
    }
    let first = c.center + n * c.radius;
    let second = c.center - n * c.radius;
    if chord.cross(first - p).signum() == side.signum() {
        Ok(first)
    } else {
        Ok(second)
    }
}

pub fn tangent_line(c: &Circle, p: Point) -> Result<Line, GeomError> {
    check_on_circle(p, c)?;
    Line::from_point_normal(p, p - c.center)
}

/// Touch points of the two tangents from an external point, the
/// counterclockwise one (seen from the center, relative to the direction
/// towards `p`) first.
pub fn tangents_from(c: &Circle, p: Point) -> Result<(Point, Point), GeomError> {
    let d = dist(c.center, p);
    if d <= c.radius * (1.0 + DEFAULT_REL_EPS) {
        return Err(GeomError::InsideCircle);
    }
    let u = (p - c.center) * (1.0 / d);
    let phi = (c.radius / d).acos();
    Ok((
        c.center + u.rotate(phi) * c.radius,
        c.center + u.rotate(-phi) * c.radius,
    ))
}

/// The tangency point of the tangent from `p` that is not the one at
/// `known` (the nearer of the two is excluded).
pub fn second_tangent_point(c: &Circle, p: Point, known: Point) -> Result<Point, GeomError> {
    let (t1, t2) = tangents_from(c, p)?;
    Ok(if dist(t1, known) <= dist(t2, known) { t2 } else { t1 })
}

/// Reflection of `l` (a line through `a`) across the internal bisector of
/// angle `BAC`.
pub fn isogonal_line(a: Point, b: Point, c: Point, l: &Line) -> Result<Line, GeomError> {
    let t = Triangle::new(a, b, c)?;
    if l.signed_dist(a).abs() > DEFAULT_REL_EPS * t.scale() {
        return Err(GeomError::LineMissesVertex);
    }
    let ub = (b - a).normalized().ok_or(GeomError::CoincidentPoints)?;
    let uc = (c - a).normalized().ok_or(GeomError::CoincidentPoints)?;
    let w = (ub + uc).normalized().ok_or(GeomError::DegenerateTriangle {
        area: t.signed_area(),
    })?;
    let v = l.direction();
    let mirrored = w * (2.0 * v.dot(w)) - v;
    Line::from_point_dir(a, mirrored)
}

/// Line through `origin` whose direction is `origin → through` turned by
/// `theta` in the given sense.
pub fn rotate_ray(
    origin: Point,
    through: Point,
    theta: f64,
    orientation: Orientation,
) -> Result<Line, GeomError> {
    if coincident(origin, through) {
        return Err(GeomError::CoincidentPoints);
    }
    Line::from_point_dir(origin, (through - origin).rotate(orientation.sign() * theta))
}

/// The A-mixtilinear incircle, located by bisection on the internal
/// bisector of angle `A`.
///
/// At bisector distance `t` the candidate circle has radius `t·sin(A/2)`;
/// the tangency gap `(R - ρ) - |O - X|` is positive near `A` and negative
/// where the bisector leaves the circumcircle.
pub fn mixtilinear_incircle(a: Point, b: Point, c: Point) -> Result<MixtilinearResult, GeomError> {
    let t = Triangle::new(a, b, c)?;
    let omega = circumcircle(a, b, c)?;
    let ub = (b - a).normalized().ok_or(GeomError::CoincidentPoints)?;
    let uc = (c - a).normalized().ok_or(GeomError::CoincidentPoints)?;
    let u = (ub + uc).normalized().ok_or(GeomError::DegenerateTriangle {
        area: t.signed_area(),
    })?;
    let half_sin = (0.5 * t.angle_a()).sin();
    let gap = |s: f64| {
        let x = a + u * s;
        (omega.radius - s * half_sin) - dist(omega.center, x)
    };

    let exit = -2.0 * u.dot(a - omega.center);
    let (mut lo, mut hi) = (exit * 1e-6, exit);
    if !(gap(lo) > 0.0 && gap(hi) < 0.0) {
        return Err(GeomError::Bracketing { lo, hi });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let center = a + u * s;
    let circle = Circle::new(center, s * half_sin)?;
    let touch_k = foot(center, &Line::through(a, b)?);
    let touch_l = foot(center, &Line::through(a, c)?);
    let outward = (center - omega.center)
        .normalized()
        .ok_or(GeomError::CoincidentPoints)?;
    let touch_m = omega.center + outward * omega.radius;
    Ok(MixtilinearResult {
        circle,
        touch_k,
        touch_l,
        touch_m,
    })
}

/// Bisection for a zero of `f` along `curve` between two parameters.
///
/// Returns the point once the bracket can no longer shrink, provided
/// `|f| ≤ abs_floor·scale` there.
pub fn solve_on_curve<F>(
    curve: &Curve,
    mut f: F,
    bracket: (f64, f64),
    tol: &TolerancePolicy,
) -> Result<Point, GeomError>
where
    F: FnMut(Point) -> Result<f64, GeomError>,
{
    let (mut lo, mut hi) = bracket;
    let mut f_lo = f(curve.point_at(lo))?;
    let f_hi = f(curve.point_at(hi))?;
    if !(f_lo.is_finite() && f_hi.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    if f_lo == 0.0 {
        return Ok(curve.point_at(lo));
    }
    if f_hi == 0.0 {
        return Ok(curve.point_at(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(GeomError::NoSignChange { lo, hi });
    }
    let threshold = tol.abs_floor * tol.scale;
    let mut best = (f_lo.abs(), lo);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(curve.point_at(mid))?;
        if !f_mid.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if f_mid.abs() < best.0 {
            best = (f_mid.abs(), mid);
        }
        if f_mid == 0.0 {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if best.0 > threshold {
        return Err(GeomError::MaxIterations { residual: best.0 });
    }
    Ok(curve.point_at(best.1))
}


/// Angle at `vertex`, unwrapped to a plain radian value.
pub(crate) fn angle(vertex: Point, p: Point, q: Point) -> Result<f64, GeomError> {
    angle_at(vertex, p, q).map(|a| a.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::signed_area;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn random_triangle(rng: &mut ChaCha8Rng) -> Triangle {
        loop {
            let pts: Vec<Point> = (0..3)
                .map(|_| p(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                .collect();
            if let Ok(t) = Triangle::new(pts[0], pts[1], pts[2]) {
                if t.min_angle() > 10f64.to_radians() {
                    return t;
                }
            }
        }
    }

    fn x_axis() -> Line {
        Line::through(p(0.0, 0.0), p(1.0, 0.0)).unwrap()
    }

    fn unit() -> Circle {
        Circle::new(Point::ORIGIN, 1.0).unwrap()
    }

    #[test]
    fn line_line_intersect_examples() {
        let y_axis = Line::through(p(0.0, 0.0), p(0.0, 1.0)).unwrap();
        let o = line_line_intersect(&x_axis(), &y_axis).unwrap();
        assert!(o.norm() < 1e-15);
        let l1 = Line::through(p(0.0, 0.0), p(1.0, 1.0)).unwrap();
        let l2 = Line::through(p(0.0, 2.0), p(2.0, 0.0)).unwrap();
        let x = line_line_intersect(&l1, &l2).unwrap();
        assert!(dist(x, p(1.0, 1.0)) < 1e-15);
        let y3 = Line::through(p(0.0, 3.0), p(1.0, 3.0)).unwrap();
        assert!(matches!(
            line_line_intersect(&x_axis(), &y3),
            Err(GeomError::ParallelLines { .. })
        ));
    }

    #[test]
    fn line_line_intersect_satisfies_both_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let q: Vec<Point> = (0..4)
                .map(|_| p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
                .collect();
            let (l1, l2) = (Line::through(q[0], q[1]).unwrap(), Line::through(q[2], q[3]).unwrap());
            if l1.normal().cross(l2.normal()).abs() < 0.05 {
                continue;
            }
            let x = line_line_intersect(&l1, &l2).unwrap();
            // two-point form of each line, independent of the normal form
            let on = |a: Point, b: Point| (b - a).cross(x - a) / (b - a).norm();
            assert!(on(q[0], q[1]).abs() < 1e-12 * (1.0 + x.norm()));
            assert!(on(q[2], q[3]).abs() < 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn second_intersection_examples() {
        let r = second_intersection(&x_axis(), &unit(), p(1.0, 0.0)).unwrap();
        assert!(!r.tangent);
        assert!(dist(r.point, p(-1.0, 0.0)) < 1e-15);
        let x1 = Line::through(p(1.0, 0.0), p(1.0, 1.0)).unwrap();
        let r = second_intersection(&x1, &unit(), p(1.0, 0.0)).unwrap();
        assert!(r.tangent);
        assert_eq!(r.point, p(1.0, 0.0));
        assert!(matches!(
            second_intersection(&x_axis(), &unit(), p(0.5, 0.0)),
            Err(GeomError::NotOnCircle { .. })
        ));
        assert!(matches!(
            second_intersection(&x_axis(), &unit(), p(0.0, 1.0)),
            Err(GeomError::NotOnLine { .. })
        ));
    }

    #[test]
    fn second_intersection_matches_quadratic_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let c = Circle::new(p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), rng.gen_range(0.5..3.0)).unwrap();
            let known = c.point_at(rng.gen_range(0.0..2.0 * PI));
            let theta: f64 = rng.gen_range(0.0..PI);
            let dir = p(theta.cos(), theta.sin());
            let l = Line::from_point_dir(known, dir).unwrap();
            // |known + s·dir - center|² = r², one root is 0, the other -2·dir·(known-center)
            let (qa, qb, qc) = (1.0, 2.0 * dir.dot(known - c.center), (known - c.center).norm_sq() - c.radius * c.radius);
            let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
            let roots = [(-qb + disc) / 2.0, (-qb - disc) / 2.0];
            let s = if roots[0].abs() > roots[1].abs() { roots[0] } else { roots[1] };
            if s.abs() < 1e-3 {
                continue;
            }
            let r = second_intersection(&l, &c, known).unwrap();
            assert!(!r.tangent);
            assert!(dist(r.point, known + dir * s) < 1e-11 * c.radius);
            assert!(c.power_gap(r.point).abs() < 1e-11 * c.radius);
            assert!(l.signed_dist(r.point).abs() < 1e-11 * c.radius);
        }
    }

    #[test]
    fn circumcircle_examples() {
        let c = circumcircle(p(0.0, 0.0), p(4.0, 0.0), p(0.0, 3.0)).unwrap();
        assert!(dist(c.center, p(2.0, 1.5)) < 1e-15);
        assert!((c.radius - 2.5).abs() < 1e-15);
        let c = circumcircle(p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)).unwrap();
        assert!((c.radius - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            circumcircle(p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0)),
            Err(GeomError::DegenerateTriangle { .. })
        ));
    }

    #[test]
    fn circumradius_matches_law_of_sines() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let t = random_triangle(&mut rng);
            let c = circumcircle(t.a, t.b, t.c).unwrap();
            let oracle = t.side_a() / (2.0 * t.angle_a().sin());
            assert!((c.radius - oracle).abs() <= 1e-10 * oracle);
            for v in t.vertices() {
                assert!(c.power_gap(v).abs() < 1e-11 * t.scale());
            }
        }
    }

    #[test]
    fn incircle_examples() {
        let ic = incircle(p(0.0, 0.0), p(4.0, 0.0), p(0.0, 3.0)).unwrap();
        assert!((ic.circle.radius - 1.0).abs() < 1e-15);
        assert!(dist(ic.circle.center, p(1.0, 1.0)) < 1e-15);
        let eq = [p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)];
        let ic = incircle(eq[0], eq[1], eq[2]).unwrap();
        let g = triangle_center(eq[0], eq[1], eq[2], CenterKind::Centroid).unwrap();
        assert!(dist(ic.circle.center, g) < 1e-15);
    }

    #[test]
    fn incircle_equidistant_from_side_lines() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let t = random_triangle(&mut rng);
            let ic = incircle(t.a, t.b, t.c).unwrap();
            let sides = [(t.b, t.c), (t.c, t.a), (t.a, t.b)];
            for (u, v) in sides {
                let d = (v - u).cross(ic.circle.center - u).abs() / (v - u).norm();
                assert!((d - ic.circle.radius).abs() < 1e-11 * t.scale());
            }
            for touch in [ic.touch_d, ic.touch_e, ic.touch_f] {
                assert!(ic.circle.power_gap(touch).abs() < 1e-10 * t.scale());
            }
        }
    }

    #[test]
    fn excircle_touch_lengths_equal_semiperimeter() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..300 {
            let t = random_triangle(&mut rng);
            let s = 0.5 * (t.side_a() + t.side_b() + t.side_c());
            let ex = excircle(t.a, t.b, t.c, Vertex::A).unwrap();
            assert!((dist(t.a, ex.touch_f) - s).abs() < 1e-10 * t.scale());
            assert!((dist(t.a, ex.touch_e) - s).abs() < 1e-10 * t.scale());
            // tangent to all three side lines
            for touch in [ex.touch_d, ex.touch_e, ex.touch_f] {
                assert!(ex.circle.power_gap(touch).abs() < 1e-10 * t.scale());
            }
            // opposite A: separated from A by line BC
            let bc = Line::through(t.b, t.c).unwrap();
            assert!(bc.signed_dist(t.a).signum() != bc.signed_dist(ex.circle.center).signum());
        }
    }

    #[test]
    fn triangle_center_examples() {
        let g = triangle_center(p(0.0, 0.0), p(3.0, 0.0), p(0.0, 3.0), CenterKind::Centroid).unwrap();
        assert!(dist(g, p(1.0, 1.0)) < 1e-15);
        let o = triangle_center(p(0.0, 0.0), p(4.0, 0.0), p(0.0, 3.0), CenterKind::Circumcenter).unwrap();
        assert!(dist(o, p(2.0, 1.5)) < 1e-15);
        let eq = [p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)];
        let k = triangle_center(eq[0], eq[1], eq[2], CenterKind::SymmedianPoint).unwrap();
        let g = triangle_center(eq[0], eq[1], eq[2], CenterKind::Centroid).unwrap();
        assert!(dist(k, g) < 1e-15);
    }

    #[test]
    fn center_kind_names_round_trip() {
        for k in CenterKind::ALL {
            assert_eq!(CenterKind::from_name(k.name()), Some(k));
        }
        assert_eq!(CenterKind::from_name("nagel"), None);
    }

    #[test]
    fn arc_midpoint_examples() {
        let c = unit();
        let m = arc_midpoint(&c, p(1.0, 0.0), p(-1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert!(dist(m, p(0.0, 1.0)) < 1e-15);
        let m = arc_midpoint(&c, p(1.0, 0.0), p(-1.0, 0.0), p(0.0, -1.0)).unwrap();
        assert!(dist(m, p(0.0, -1.0)) < 1e-15);
        assert!(matches!(
            arc_midpoint(&c, p(1.0, 0.0), p(-1.0, 0.0), p(0.0, 0.5)),
            Err(GeomError::NotOnCircle { .. })
        ));
        assert_eq!(
            arc_midpoint(&c, p(1.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)),
            Err(GeomError::CoincidentPoints)
        );
    }

    #[test]
    fn arc_midpoint_on_bisector_and_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300 {
            let c = Circle::new(p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), rng.gen_range(0.5..3.0)).unwrap();
            let (a0, a1, a2) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI));
            let (pp, qq, w) = (c.point_at(a0), c.point_at(a1), c.point_at(a2));
            if dist(pp, qq) < 0.1 || dist(w, pp) < 0.05 || dist(w, qq) < 0.05 {
                continue;
            }
            let m = arc_midpoint(&c, pp, qq, w).unwrap();
            assert!((dist(m, pp) - dist(m, qq)).abs() < 1e-11 * c.radius);
            assert!(c.power_gap(m).abs() < 1e-11 * c.radius);
            let chord = qq - pp;
            assert_eq!(chord.cross(m - pp).signum(), chord.cross(w - pp).signum());
        }
    }

    #[test]
    fn tangent_line_examples() {
        let l = tangent_line(&unit(), p(1.0, 0.0)).unwrap();
        assert!(l.signed_dist(p(1.0, 5.0)).abs() < 1e-15);
        let l = tangent_line(&unit(), p(0.0, 1.0)).unwrap();
        assert!(l.signed_dist(p(-3.0, 1.0)).abs() < 1e-15);
        assert!(tangent_line(&unit(), p(0.0, 0.0)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let c = Circle::new(p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), rng.gen_range(0.5..3.0)).unwrap();
            let q = c.point_at(rng.gen_range(0.0..2.0 * PI));
            let l = tangent_line(&c, q).unwrap();
            assert!((l.signed_dist(c.center).abs() - c.radius).abs() < 1e-12 * c.radius.max(1.0));
        }
    }

    #[test]
    fn tangents_from_examples() {
        let (t1, t2) = tangents_from(&unit(), p(2.0, 0.0)).unwrap();
        // tangent length sqrt(3): touch points at 60 degrees from the x-axis
        assert!(dist(t1, p(0.5, 3f64.sqrt() / 2.0)) < 1e-15);
        assert!(dist(t2, p(0.5, -(3f64.sqrt()) / 2.0)) < 1e-15);
        assert!((t1.x - t2.x).abs() < 1e-15 && (t1.y + t2.y).abs() < 1e-15);
        let s = 2f64.sqrt();
        let dir = p(1.0, 1.0).normalized().unwrap();
        let (t1, t2) = tangents_from(&unit(), dir * s).unwrap();
        for t in [t1, t2] {
            let a = angle_at(Point::ORIGIN, t, dir).unwrap().0;
            assert!((a - PI / 4.0).abs() < 1e-14);
            assert!((dist(t, dir * s) - 1.0).abs() < 1e-14);
        }
        assert_eq!(tangents_from(&unit(), p(0.5, 0.0)), Err(GeomError::InsideCircle));
        assert_eq!(tangents_from(&unit(), p(1.0, 0.0)), Err(GeomError::InsideCircle));
    }

    #[test]
    fn second_tangent_excludes_known() {
        let (t1, t2) = tangents_from(&unit(), p(2.0, 0.0)).unwrap();
        assert_eq!(second_tangent_point(&unit(), p(2.0, 0.0), t1).unwrap(), t2);
        assert_eq!(second_tangent_point(&unit(), p(2.0, 0.0), t2).unwrap(), t1);
    }

    #[test]
    fn foot_reflect_midpoint_antipode() {
        assert_eq!(foot(p(0.0, 1.0), &x_axis()), p(0.0, 0.0));
        assert_eq!(reflect(p(1.0, 1.0), &x_axis()), p(1.0, -1.0));
        assert_eq!(antipode(p(1.0, 0.0), &unit()).unwrap(), p(-1.0, 0.0));
        assert!(antipode(p(0.2, 0.0), &unit()).is_err());
        assert_eq!(midpoint(p(0.0, 0.0), p(2.0, 4.0)), p(1.0, 2.0));
        let l = Line::through(p(0.3, -1.0), p(2.0, 0.7)).unwrap();
        let q = p(-0.4, 2.2);
        assert!(dist(reflect(reflect(q, &l), &l), q) < 1e-14);
    }

    #[test]
    fn through_examples() {
        let l = through(p(0.0, 1.0), &x_axis(), Through::Parallel);
        assert!(l.signed_dist(p(7.0, 1.0)).abs() < 1e-15);
        let l = through(p(2.0, 0.0), &x_axis(), Through::Perpendicular);
        assert!(l.signed_dist(p(2.0, -4.0)).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let q = p(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let base = Line::through(p(rng.gen_range(-3.0..3.0), 0.0), p(0.0, rng.gen_range(0.5..3.0))).unwrap();
            let par = through(q, &base, Through::Parallel);
            let per = through(q, &base, Through::Perpendicular);
            assert!(par.signed_dist(q).abs() < 1e-12 && per.signed_dist(q).abs() < 1e-12);
            assert!(par.normal().cross(base.normal()).abs() < 1e-12);
            assert!(per.normal().dot(base.normal()).abs() < 1e-12);
        }
    }

    #[test]
    fn isogonal_of_bisector_is_itself() {
        let (a, b, c) = (p(0.0, 0.0), p(4.0, 0.5), p(1.0, 3.0));
        let i = triangle_center(a, b, c, CenterKind::Incenter).unwrap();
        let bis = Line::through(a, i).unwrap();
        let iso = isogonal_line(a, b, c, &bis).unwrap();
        assert!(iso.normal().cross(bis.normal()).abs() < 1e-14);
        let off = Line::through(b, c).unwrap();
        assert_eq!(isogonal_line(a, b, c, &off), Err(GeomError::LineMissesVertex));
    }

    #[test]
    fn isogonal_of_median_is_symmedian() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let t = random_triangle(&mut rng);
            let med = Line::through(t.a, midpoint(t.b, t.c)).unwrap();
            let sym = isogonal_line(t.a, t.b, t.c, &med).unwrap();
            let foot_t = line_line_intersect(&sym, &Line::through(t.b, t.c).unwrap()).unwrap();
            let ratio = crate::geom::directed_ratio(foot_t, t.b, t.c).unwrap();
            let expect = (t.side_c() / t.side_b()).powi(2);
            assert!((ratio - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn isogonal_angles_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..300 {
            let t = random_triangle(&mut rng);
            let d = t.b.lerp(t.c, rng.gen_range(0.05..0.95));
            let cev = Line::through(t.a, d).unwrap();
            let iso = isogonal_line(t.a, t.b, t.c, &cev).unwrap();
            let e = line_line_intersect(&iso, &Line::through(t.b, t.c).unwrap()).unwrap();
            let lhs = angle_at(t.a, t.b, d).unwrap().0;
            let rhs = angle_at(t.a, t.c, e).unwrap().0;
            assert!((lhs - rhs).abs() < 1e-10);
            let back = isogonal_line(t.a, t.b, t.c, &iso).unwrap();
            assert!(back.normal().cross(cev.normal()).abs() < 1e-10);
        }
    }

    #[test]
    fn rotate_ray_examples() {
        let l = rotate_ray(Point::ORIGIN, p(1.0, 0.0), PI / 2.0, Orientation::Ccw).unwrap();
        assert!(l.signed_dist(p(0.0, 3.0)).abs() < 1e-15);
        assert!(l.direction().y > 0.0);
        let l = rotate_ray(p(1.0, 1.0), p(3.0, 2.0), 0.0, Orientation::Cw).unwrap();
        let base = Line::through(p(1.0, 1.0), p(3.0, 2.0)).unwrap();
        assert!(l.normal().cross(base.normal()).abs() < 1e-15);
        assert_eq!(
            rotate_ray(Point::ORIGIN, Point::ORIGIN, 1.0, Orientation::Ccw),
            Err(GeomError::CoincidentPoints)
        );
    }

    #[test]
    fn rotate_ray_builds_equal_angle_at_b() {
        // the ray from B making angle C with BA, turned towards C
        let (a, b, c) = (p(0.0, 0.0), p(5.0, 0.0), p(1.5, 3.5));
        let gamma = angle_at(c, a, b).unwrap().0;
        let orient = if signed_area(b, a, c) > 0.0 { Orientation::Ccw } else { Orientation::Cw };
        let l = rotate_ray(b, a, gamma, orient).unwrap();
        let probe = b + l.direction();
        assert!((angle_at(b, probe, a).unwrap().0 - gamma).abs() < 1e-10);
        // and it turns towards C
        assert_eq!(signed_area(b, a, probe).signum(), signed_area(b, a, c).signum());
    }

    #[test]
    fn mixtilinear_equilateral_touches_arc_midpoint() {
        let eq = [p(0.0, 0.0), p(2.0, 0.0), p(1.0, 3f64.sqrt())];
        let m = mixtilinear_incircle(eq[0], eq[1], eq[2]).unwrap();
        let omega = circumcircle(eq[0], eq[1], eq[2]).unwrap();
        let far = antipode(eq[0], &omega).unwrap();
        assert!(dist(m.touch_m, far) < 1e-12);
    }

    #[test]
    fn mixtilinear_radius_matches_closed_form() {
        // independent oracle: rho = r / cos²(A/2)
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..300 {
            let t = random_triangle(&mut rng);
            let m = mixtilinear_incircle(t.a, t.b, t.c).unwrap();
            let r = incircle(t.a, t.b, t.c).unwrap().circle.radius;
            let oracle = r / (0.5 * t.angle_a()).cos().powi(2);
            assert!((m.circle.radius - oracle).abs() < 1e-10 * t.scale());
            let omega = circumcircle(t.a, t.b, t.c).unwrap();
            let gap = dist(omega.center, m.circle.center) - (omega.radius - m.circle.radius);
            assert!(gap.abs() < 1e-9 * t.scale());
            for q in [m.touch_k, m.touch_l, m.touch_m] {
                assert!(m.circle.power_gap(q).abs() < 1e-9 * t.scale());
            }
        }
    }

    #[test]
    fn mixtilinear_incenter_is_midpoint_of_kl() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..300 {
            let t = random_triangle(&mut rng);
            let m = mixtilinear_incircle(t.a, t.b, t.c).unwrap();
            let i = triangle_center(t.a, t.b, t.c, CenterKind::Incenter).unwrap();
            assert!(dist(midpoint(m.touch_k, m.touch_l), i) < 1e-9 * t.scale());
        }
    }

    #[test]
    fn mixtilinear_touch_incenter_line_hits_arc_bac_midpoint() {
        // the circumcircle touch point, the incenter and the arc-BAC midpoint
        // are collinear
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..300 {
            let t = random_triangle(&mut rng);
            let m = mixtilinear_incircle(t.a, t.b, t.c).unwrap();
            let i = triangle_center(t.a, t.b, t.c, CenterKind::Incenter).unwrap();
            let omega = circumcircle(t.a, t.b, t.c).unwrap();
            let n = arc_midpoint(&omega, t.b, t.c, t.a).unwrap();
            let l = Line::through(m.touch_m, i).unwrap();
            assert!(l.signed_dist(n).abs() < 1e-9 * t.scale());
        }
    }

    #[test]
    fn solve_on_curve_linear_and_radial() {
        let tol = TolerancePolicy::default();
        let crossing = Line::through(p(0.7, -1.0), p(0.7, 1.0)).unwrap();
        let x = solve_on_curve(&Curve::Line(x_axis()), |q| Ok(crossing.signed_dist(q)), (-3.0, 4.0), &tol).unwrap();
        assert!(dist(x, p(0.7, 0.0)) < 1e-12);
        let x = solve_on_curve(&Curve::Line(x_axis()), |q| Ok(q.norm() - 1.0), (0.0, 2.0), &tol).unwrap();
        assert!(dist(x, p(1.0, 0.0)) < 1e-12);
        assert!(matches!(
            solve_on_curve(&Curve::Line(x_axis()), |q| Ok(q.norm() - 1.0), (2.0, 3.0), &tol),
            Err(GeomError::NoSignChange { .. })
        ));
        // a jump looks like a sign change but never converges
        assert!(matches!(
            solve_on_curve(&Curve::Line(x_axis()), |q| Ok(if q.x < 0.5 { -1.0 } else { 1.0 }), (0.0, 1.3), &tol),
            Err(GeomError::MaxIterations { .. })
        ));
        let circ = Curve::Circle(unit());
        let y = solve_on_curve(&circ, |q| Ok(q.y - 0.5), (0.0, PI / 2.0), &tol).unwrap();
        assert!(dist(y, p(3f64.sqrt() / 2.0, 0.5)) < 1e-12);
    }

    #[test]
    fn solve_on_curve_equal_angle_against_grid_scan() {
        // find A on a probe segment with angle ABT = angle TEA
        let (b, t, e) = (p(-1.0, 0.2), p(0.1, -0.6), p(1.3, 0.4));
        let (s0, s1) = (p(-0.5, 3.0), p(1.2, 2.0));
        let f = |a: Point| -> Result<f64, GeomError> { Ok(angle(b, a, t)? - angle(e, t, a)?) };
        let curve = Curve::Segment { start: s0, end: s1 };
        let n = 200_000;
        let mut grid_root = None;
        let mut prev = f(s0).unwrap();
        for k in 1..=n {
            let s = k as f64 / n as f64;
            let v = f(s0.lerp(s1, s)).unwrap();
            if v.signum() != prev.signum() {
                grid_root = Some(s);
                break;
            }
            prev = v;
        }
        let grid_root = grid_root.expect("sign change on probe");
        let tol = TolerancePolicy::default().for_points(&[b, t, e, s0, s1]);
        let a = solve_on_curve(&curve, f, (0.0, 1.0), &tol).unwrap();
        assert!(f(a).unwrap().abs() <= 1e-11);
        assert!(dist(a, s0.lerp(s1, grid_root)) <= dist(s0, s1) / n as f64 * 1.01);
    }
    #[test]
    fn center_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let t = random_triangle(&mut rng);
            let (a, b, c) = (t.a, t.b, t.c);
            let sc = t.scale();
            let o = triangle_center(a, b, c, CenterKind::Circumcenter).unwrap();
            let (da, db, dc) = (dist(o, a), dist(o, b), dist(o, c));
            assert!((da - db).abs() < 1e-11 * sc && (da - dc).abs() < 1e-11 * sc);
            let h = triangle_center(a, b, c, CenterKind::Orthocenter).unwrap();
            for (v, p1, p2) in [(a, b, c), (b, c, a), (c, a, b)] {
                if dist(v, h) > 1e-6 * sc {
                    let u = (h - v).normalized().unwrap();
                    let w = (p2 - p1).normalized().unwrap();
                    assert!(u.dot(w).abs() < 1e-9);
                }
            }
            let g = triangle_center(a, b, c, CenterKind::Centroid).unwrap();
            assert_eq!(g, (a + b + c) * (1.0 / 3.0));
            let i = triangle_center(a, b, c, CenterKind::Incenter).unwrap();
            let d: Vec<f64> = [(b, c), (c, a), (a, b)]
                .iter()
                .map(|&(p1, p2)| Line::through(p1, p2).unwrap().signed_dist(i).abs())
                .collect();
            assert!((d[0] - d[1]).abs() < 1e-11 * sc && (d[0] - d[2]).abs() < 1e-11 * sc);
            let k = triangle_center(a, b, c, CenterKind::SymmedianPoint).unwrap();
            for (v, p1, p2) in [(a, b, c), (b, c, a), (c, a, b)] {
                let med = Line::through(v, midpoint(p1, p2)).unwrap();
                let sym = isogonal_line(v, p1, p2, &med).unwrap();
                assert!(sym.signed_dist(k).abs() < 1e-10 * sc);
            }
            // Euler line: G between O and H with OG : GH = 1 : 2
            let og = dist(o, g);
            if og > 1e-6 * sc {
                let r = crate::geom::directed_ratio(g, o, h).unwrap();
                assert!((r - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn second_intersection_on_both_carriers() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..1000 {
            let t = random_triangle(&mut rng);
            let w = circumcircle(t.a, t.b, t.c).unwrap();
            let q = t.b.lerp(t.c, rng.gen_range(0.05..0.95));
            let l = Line::through(t.a, q).unwrap();
            let r = second_intersection(&l, &w, t.a).unwrap();
            assert!(!r.tangent && dist(r.point, t.a) > 1e-6 * t.scale());
            assert!(w.power_gap(r.point).abs() < 1e-11 * t.scale());
            assert!(l.signed_dist(r.point).abs() < 1e-11 * t.scale());
        }
    }
}
