//! Primitive plane values and the numeric predicates the rest of the crate
//! builds on.
//!
//! Everything here is plain `f64`. Tolerances are relative to a
//! configuration `scale` (the diameter of the bounding box of the points
//! involved) so that verdicts do not change under similarity transforms.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

pub const DEFAULT_REL_EPS: f64 = 1e-9;
pub const DEFAULT_ABS_FLOOR: f64 = 1e-12;

/// A location in the affine plane (also used as a free vector).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotate(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(Point::new(self.x / n, self.y / n))
        } else {
            None
        }
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An unsigned angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle(pub f64);

impl Angle {
    pub fn from_degrees(deg: f64) -> Self {
        Angle(deg.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

/// An infinite line `{p : n·p = d}` with unit normal `n`.
///
/// The direction of travel is the normal turned clockwise, so a line built
/// from `p` to `q` points from `p` towards `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub nx: f64,
    pub ny: f64,
    pub d: f64,
}

impl Line {
    pub fn through(p: Point, q: Point) -> Result<Line, GeomError> {
        if coincident(p, q) {
            return Err(GeomError::CoincidentPoints);
        }
        Line::from_point_dir(p, q - p)
    }

    pub fn from_point_dir(p: Point, dir: Point) -> Result<Line, GeomError> {
        let u = dir.normalized().ok_or(GeomError::CoincidentPoints)?;
        let n = u.perp();
        Ok(Line {
            nx: n.x,
            ny: n.y,
            d: n.dot(p),
        })
    }

    pub fn from_point_normal(p: Point, normal: Point) -> Result<Line, GeomError> {
        Line::from_point_dir(p, Point::new(normal.y, -normal.x))
    }

    pub fn normal(&self) -> Point {
        Point::new(self.nx, self.ny)
    }

    /// Unit direction vector.
    pub fn direction(&self) -> Point {
        Point::new(self.ny, -self.nx)
    }

    /// The foot of the perpendicular from the origin.
    pub fn anchor(&self) -> Point {
        self.normal() * self.d
    }

    pub fn signed_dist(&self, p: Point) -> f64 {
        self.normal().dot(p) - self.d
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.anchor() + self.direction() * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Circle, GeomError> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(GeomError::InvalidRadius(radius));
        }
        Ok(Circle { center, radius })
    }

    /// Circle centered at `center` passing through `through`.
    pub fn through(center: Point, through: Point) -> Result<Circle, GeomError> {
        Circle::new(center, dist(center, through))
    }

    /// `|center - p| - radius`; positive outside.
    pub fn power_gap(&self, p: Point) -> f64 {
        dist(self.center, p) - self.radius
    }

    pub fn point_at(&self, theta: f64) -> Point {
        self.center + Point::new(theta.cos(), theta.sin()) * self.radius
    }
}

/// Relative tolerance, absolute floor, and the configuration scale they are
/// measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub rel_eps: f64,
    pub abs_floor: f64,
    pub scale: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rel_eps: DEFAULT_REL_EPS,
            abs_floor: DEFAULT_ABS_FLOOR,
            scale: 1.0,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rel_eps: f64, abs_floor: f64) -> Result<Self, GeomError> {
        if !(rel_eps > abs_floor && abs_floor > 0.0) {
            return Err(GeomError::InvalidTolerance { rel_eps, abs_floor });
        }
        Ok(TolerancePolicy {
            rel_eps,
            abs_floor,
            scale: 1.0,
        })
    }

    pub fn with_scale(self, scale: f64) -> Self {
        let scale = if scale > 0.0 && scale.is_finite() {
            scale
        } else {
            1.0
        };
        TolerancePolicy { scale, ..self }
    }

    /// Policy whose scale is the bounding-box diameter of `points`.
    pub fn for_points(self, points: &[Point]) -> Self {
        self.with_scale(bbox_diameter(points))
    }

    pub fn length_tol(&self) -> f64 {
        self.rel_eps * self.scale
    }

    pub fn area_tol(&self) -> f64 {
        self.rel_eps * self.scale * self.scale
    }
}

/// Diameter of the axis-aligned bounding box of `points` (0 for fewer than
/// two distinct points).
pub fn bbox_diameter(points: &[Point]) -> f64 {
    let mut it = points.iter().filter(|p| p.is_finite());
    let Some(first) = it.next() else {
        return 0.0;
    };
    let (mut lo, mut hi) = (*first, *first);
    for p in it {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    dist(lo, hi)
}

pub(crate) fn coincident(p: Point, q: Point) -> bool {
    let mag = 1.0 + p.norm().max(q.norm());
    dist(p, q) <= DEFAULT_ABS_FLOOR * mag
}

/// A nondegenerate triangle. Side `a` is opposite vertex `a`, i.e. `|BC|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Triangle, GeomError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let area = signed_area(a, b, c);
        let scale = bbox_diameter(&[a, b, c]);
        if area.abs() <= DEFAULT_ABS_FLOOR * scale * scale || scale == 0.0 {
            return Err(GeomError::DegenerateTriangle { area });
        }
        Ok(Triangle { a, b, c })
    }

    pub fn vertices(&self) -> [Point; 3] {
        [self.a, self.b, self.c]
    }

    /// `|BC|`
    pub fn side_a(&self) -> f64 {
        dist(self.b, self.c)
    }

    /// `|CA|`
    pub fn side_b(&self) -> f64 {
        dist(self.c, self.a)
    }

    /// `|AB|`
    pub fn side_c(&self) -> f64 {
        dist(self.a, self.b)
    }

    pub fn angle_a(&self) -> f64 {
        raw_angle(self.a, self.b, self.c)
    }

    pub fn angle_b(&self) -> f64 {
        raw_angle(self.b, self.c, self.a)
    }

    pub fn angle_c(&self) -> f64 {
        raw_angle(self.c, self.a, self.b)
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(self.a, self.b, self.c)
    }

    pub fn scale(&self) -> f64 {
        bbox_diameter(&self.vertices())
    }

    pub fn min_angle(&self) -> f64 {
        self.angle_a().min(self.angle_b()).min(self.angle_c())
    }
}

pub fn dist(p: Point, q: Point) -> f64 {
    (q - p).norm()
}

/// Twice-halved cross product: positive for counterclockwise `a, b, c`.
pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * (b - a).cross(c - a)
}

fn raw_angle(vertex: Point, p: Point, q: Point) -> f64 {
    let u = p - vertex;
    let v = q - vertex;
    // atan2 form stays accurate near 0 and pi where acos loses digits.
    u.cross(v).abs().atan2(u.dot(v))
}

/// The unsigned angle at `vertex` between rays towards `p` and `q`.
pub fn angle_at(vertex: Point, p: Point, q: Point) -> Result<Angle, GeomError> {
    if coincident(vertex, p) || coincident(vertex, q) {
        return Err(GeomError::CoincidentPoints);
    }
    Ok(Angle(raw_angle(vertex, p, q)))
}

/// Signed ratio `PX / XQ` of directed lengths along line `PQ`.
///
/// Positive iff `x` lies strictly between `p` and `q`.
pub fn directed_ratio(x: Point, p: Point, q: Point) -> Result<f64, GeomError> {
    if coincident(p, q) {
        return Err(GeomError::CoincidentPoints);
    }
    let pq = q - p;
    let len = pq.norm();
    let scale = bbox_diameter(&[x, p, q]);
    let offset = pq.cross(x - p).abs() / len;
    if offset > DEFAULT_REL_EPS * scale {
        return Err(GeomError::NotCollinear { offset });
    }
    let t = (x - p).dot(pq) / (len * len);
    let rest = 1.0 - t;
    if rest.abs() * len <= DEFAULT_ABS_FLOOR * (1.0 + scale) {
        return Err(GeomError::AtSegmentEnd);
    }
    Ok(t / rest)
}

/// True iff every point lies within `rel_eps·scale²` (as a triangle area)
/// of every other pair.
pub fn is_collinear(points: &[Point], tol: &TolerancePolicy) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if signed_area(points[i], points[j], points[k]).abs() > tol.area_tol() {
                    return false;
                }
            }
        }
    }
    true
}

/// Circle through the best-conditioned triple among four points, and the
/// offset of the remaining point from it. `None` when all triples are
/// (numerically) collinear.
pub fn concyclic_offset(pts: [Point; 4]) -> Option<f64> {
    let triples = [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0)];
    let scale = bbox_diameter(&pts);
    let best = triples
        .iter()
        .copied()
        .max_by(|x, y| {
            let ax = signed_area(pts[x.0], pts[x.1], pts[x.2]).abs();
            let ay = signed_area(pts[y.0], pts[y.1], pts[y.2]).abs();
            ax.total_cmp(&ay)
        })
        .expect("four triples");
    let area = signed_area(pts[best.0], pts[best.1], pts[best.2]).abs();
    if area <= 1e-9 * scale * scale {
        return None;
    }
    let circle = crate::construct::circumcircle(pts[best.0], pts[best.1], pts[best.2]).ok()?;
    Some(circle.power_gap(pts[best.3]).abs())
}

pub fn is_concyclic(pts: [Point; 4], tol: &TolerancePolicy) -> Result<bool, GeomError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if coincident(pts[i], pts[j]) {
                return Err(GeomError::CoincidentPoints);
            }
        }
    }
    Ok(match concyclic_offset(pts) {
        Some(off) => off <= tol.length_tol(),
        None => false,
    })
}

pub fn is_perpendicular(l1: &Line, l2: &Line, tol: &TolerancePolicy) -> bool {
    l1.normal().dot(l2.normal()).abs() <= tol.rel_eps
}

pub fn is_parallel(l1: &Line, l2: &Line, tol: &TolerancePolicy) -> bool {
    l1.normal().cross(l2.normal()).abs() <= tol.rel_eps
}

/// Homogeneous coordinates of `l` in the frame translated to `center` and
/// shrunk by `scale`.
pub fn homogeneous_line(l: &Line, center: Point, scale: f64) -> [f64; 3] {
    [l.nx, l.ny, (l.normal().dot(center) - l.d) / scale]
}

pub fn cross3(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Determinant of three row vectors after scaling each to unit length.
/// Zero iff the rows are linearly dependent; a zero row gives 0.
pub fn normalized_det(rows: [[f64; 3]; 3]) -> f64 {
    let mut r = rows;
    for row in r.iter_mut() {
        let n = (row[0] * row[0] + row[1] * row[1] + row[2] * row[2]).sqrt();
        if n == 0.0 {
            return 0.0;
        }
        for x in row.iter_mut() {
            *x /= n;
        }
    }
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// Projective concurrency defect of three lines; parallel triples count as
/// meeting at infinity.
pub fn concurrency_residual(lines: [&Line; 3], center: Point, scale: f64) -> f64 {
    normalized_det(lines.map(|l| homogeneous_line(l, center, scale))).abs()
}

pub fn bbox_center(points: &[Point]) -> Point {
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y))
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn concurrency_residual_examples() {
        let l = |a: (f64, f64), b: (f64, f64)| Line::through(Point::new(a.0, a.1), Point::new(b.0, b.1)).unwrap();
        let (a, b, c) = (l((0.0, 0.0), (1.0, 1.0)), l((0.0, 2.0), (2.0, 0.0)), l((1.0, -4.0), (1.0, 5.0)));
        assert!(concurrency_residual([&a, &b, &c], Point::ORIGIN, 1.0) < 1e-15);
        let c2 = l((1.1, -4.0), (1.1, 5.0));
        assert!(concurrency_residual([&a, &b, &c2], Point::ORIGIN, 1.0) > 1e-3);
        let (p1, p2, p3) = (l((0.0, 0.0), (1.0, 0.0)), l((0.0, 1.0), (1.0, 1.0)), l((0.0, 5.0), (3.0, 5.0)));
        assert!(concurrency_residual([&p1, &p2, &p3], Point::ORIGIN, 1.0) < 1e-15);
        // translation and scaling of the frame do not change the verdict
        let shifted = concurrency_residual([&a, &b, &c2], Point::new(0.5, 0.5), 2.0);
        assert!(shifted > 1e-3);
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        assert_eq!(dist(Point::new(1.0, 1.0), Point::new(1.0, 1.0)), 0.0);
        let (p, q) = (Point::new(0.3, 0.7), Point::new(-1.2, 2.5));
        let oracle = ((-1.2f64 - 0.3).powi(2) + (2.5f64 - 0.7).powi(2)).sqrt();
        assert!((dist(p, q) - oracle).abs() < 1e-12);
    }

    #[test]
    fn signed_area_examples() {
        let o = Point::ORIGIN;
        assert_eq!(signed_area(o, Point::new(1.0, 0.0), Point::new(0.0, 1.0)), 0.5);
        assert_eq!(signed_area(o, Point::new(0.0, 1.0), Point::new(1.0, 0.0)), -0.5);
        assert_eq!(signed_area(o, Point::new(1.0, 1.0), Point::new(2.0, 2.0)), 0.0);
    }

    #[test]
    fn angle_at_examples() {
        let eq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 3f64.sqrt() / 2.0),
        ];
        for i in 0..3 {
            let a = angle_at(eq[i], eq[(i + 1) % 3], eq[(i + 2) % 3]).unwrap();
            assert!((a.0 - PI / 3.0).abs() < 1e-15);
        }
        let r = angle_at(Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.0, 1.0)).unwrap();
        assert!((r.0 - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(
            angle_at(Point::ORIGIN, Point::ORIGIN, Point::new(1.0, 0.0)),
            Err(GeomError::CoincidentPoints)
        );
    }

    #[test]
    fn angle_at_matches_arccos_oracle() {
        let (a, b, c) = (Point::new(0.2, -0.4), Point::new(2.1, 0.3), Point::new(-0.7, 1.9));
        let (u, v) = (b - a, c - a);
        let oracle = (u.dot(v) / (u.norm() * v.norm())).acos();
        assert!((angle_at(a, b, c).unwrap().0 - oracle).abs() < 1e-12);
    }

    #[test]
    fn directed_ratio_examples() {
        let (p, q) = (Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert_eq!(directed_ratio(Point::new(0.5, 0.0), p, q).unwrap(), 1.0);
        assert_eq!(directed_ratio(Point::new(2.0, 0.0), p, q).unwrap(), -2.0);
        assert_eq!(directed_ratio(Point::new(-1.0, 0.0), p, q).unwrap(), -0.5);
        assert_eq!(directed_ratio(q, p, q), Err(GeomError::AtSegmentEnd));
        assert!(matches!(
            directed_ratio(Point::new(0.5, 0.1), p, q),
            Err(GeomError::NotCollinear { .. })
        ));
    }

    #[test]
    fn collinear_examples() {
        let t = tol();
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0)];
        assert!(is_collinear(&pts, &t.for_points(&pts)));
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!(!is_collinear(&pts, &t.for_points(&pts)));
        // on a line, perturbed well below tolerance
        let base = Point::new(0.37, -1.1);
        let dir = Point::new(0.8, 0.6);
        let mut pts: Vec<Point> = [0.0, 1.3, 2.9].iter().map(|s| base + dir * *s).collect();
        let scale = bbox_diameter(&pts);
        pts[1] = pts[1] + dir.perp() * (1e-13 * scale);
        assert!(is_collinear(&pts, &t.for_points(&pts)));
    }

    #[test]
    fn concyclic_examples() {
        let t = tol().with_scale(2.0);
        let on = |deg: f64| Point::new(deg.to_radians().cos(), deg.to_radians().sin());
        assert!(is_concyclic([on(0.0), on(90.0), on(180.0), on(250.0)], &t).unwrap());
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert!(is_concyclic(sq, &t).unwrap());
        assert!(!is_concyclic([on(0.0), on(90.0), on(180.0), Point::ORIGIN], &t).unwrap());
        let line = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(3.0, 0.0),
        ];
        assert!(!is_concyclic(line, &t).unwrap());
        assert!(is_concyclic([on(0.0), on(0.0), on(90.0), on(180.0)], &t).is_err());
    }

    #[test]
    fn perpendicular_parallel_examples() {
        let t = tol();
        let x_axis = Line::through(Point::ORIGIN, Point::new(1.0, 0.0)).unwrap();
        let y_axis = Line::through(Point::ORIGIN, Point::new(0.0, 1.0)).unwrap();
        let y3 = Line::through(Point::new(0.0, 3.0), Point::new(1.0, 3.0)).unwrap();
        assert!(is_perpendicular(&x_axis, &y_axis, &t));
        assert!(is_parallel(&x_axis, &y3, &t));
        let l45 = Line::from_point_dir(Point::ORIGIN, Point::new(1.0, 1.0)).unwrap();
        let d46 = 46f64.to_radians();
        let l46 = Line::from_point_dir(Point::ORIGIN, Point::new(d46.cos(), d46.sin())).unwrap();
        // normals at 135 and 136 degrees: dot = cos 1deg, cross = sin 1deg
        assert!((l45.normal().dot(l46.normal()) - 1f64.to_radians().cos()).abs() < 1e-15);
        assert!(!is_perpendicular(&l45, &l46, &t));
        assert!(!is_parallel(&l45, &l46, &t));
    }

    #[test]
    fn line_through_coincident_fails() {
        assert_eq!(
            Line::through(Point::new(1.0, 1.0), Point::new(1.0, 1.0)),
            Err(GeomError::CoincidentPoints)
        );
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let r = Triangle::new(Point::ORIGIN, Point::new(1.0, 1.0), Point::new(2.0, 2.0));
        assert!(matches!(r, Err(GeomError::DegenerateTriangle { .. })));
    }

    #[test]
    fn tolerance_policy_validates() {
        assert!(TolerancePolicy::new(1e-9, 1e-12).is_ok());
        assert!(TolerancePolicy::new(1e-12, 1e-9).is_err());
        assert!(TolerancePolicy::new(1e-9, 0.0).is_err());
    }
}
