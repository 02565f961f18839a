//! Seeded sampling of free objects.

use std::f64::consts::PI;

use rand::Rng;
use thiserror::Error;

use crate::geom::{Point, Triangle};

/// Upper bound on angle-space rejection attempts per triangle.
pub const MAX_TRIANGLE_ATTEMPTS: usize = 10_000;

/// Minimum relative side difference for `scalene`.
pub const SCALENE_GAP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TriangleConstraint {
    Acute,
    Scalene,
    /// Vertex index 0, 1 or 2.
    ObtuseAt(usize),
    Isosceles { apex: usize },
    /// Radians.
    MinAngle(f64),
    /// Sides given by their vertex-index pairs.
    Order { shorter: (usize, usize), longer: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("no triangle satisfied the constraints in {0} attempts")]
    Unsatisfiable(usize),
}

/// `splitmix64` finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of stream `index` from `seed`:
/// `splitmix64(seed + index · 0x9E3779B97F4A7C15)` (wrapping).
pub fn mix(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn side_len(angles: &[f64; 3], i: usize, j: usize) -> f64 {
    // law of sines with 2R = 1: the side between i and j faces the third vertex
    angles[3 - i - j].sin()
}

fn satisfies(angles: &[f64; 3], cs: &[TriangleConstraint]) -> bool {
    cs.iter().all(|c| match *c {
        TriangleConstraint::Acute => angles.iter().all(|&a| a < PI / 2.0),
        TriangleConstraint::ObtuseAt(v) => angles[v] > PI / 2.0,
        TriangleConstraint::MinAngle(m) => angles.iter().all(|&a| a >= m),
        TriangleConstraint::Scalene => {
            let s = [side_len(angles, 1, 2), side_len(angles, 0, 2), side_len(angles, 0, 1)];
            let max = s.iter().cloned().fold(0.0, f64::max);
            (s[0] - s[1]).abs() >= SCALENE_GAP * max
                && (s[0] - s[2]).abs() >= SCALENE_GAP * max
                && (s[1] - s[2]).abs() >= SCALENE_GAP * max
        }
        TriangleConstraint::Isosceles { apex } => {
            let (j, k) = ((apex + 1) % 3, (apex + 2) % 3);
            (angles[j] - angles[k]).abs() <= 1e-12
        }
        TriangleConstraint::Order { shorter, longer } => {
            side_len(angles, shorter.0, shorter.1) < side_len(angles, longer.0, longer.1)
        }
    })
}

fn draw_angles<R: Rng>(cs: &[TriangleConstraint], rng: &mut R) -> [f64; 3] {
    let apex = cs.iter().find_map(|c| match c {
        TriangleConstraint::Isosceles { apex } => Some(*apex),
        _ => None,
    });
    match apex {
        Some(v) => {
            let top = rng.gen_range(0.0..PI);
            let base = 0.5 * (PI - top);
            let mut a = [base; 3];
            a[v] = top;
            a
        }
        None => {
            let (u, w): (f64, f64) = (rng.gen(), rng.gen());
            let (lo, hi) = if u < w { (u, w) } else { (w, u) };
            [PI * lo, PI * (hi - lo), PI * (1.0 - hi)]
        }
    }
}

/// Draws a counterclockwise triangle by rejection in angle space: the
/// vertices are placed at `(0,0)`, `(1,0)` and at angle `A` with
/// `|AC| = sin B / sin C`, then moved by a random rotation, a scale in
/// `[0.5, 2]` and a translation in `[-1, 1]²`.
pub fn sample_triangle<R: Rng>(cs: &[TriangleConstraint], rng: &mut R) -> Result<Triangle, SampleError> {
    for _ in 0..MAX_TRIANGLE_ATTEMPTS {
        let angles = draw_angles(cs, rng);
        if angles.iter().any(|&a| a <= 0.0) || !satisfies(&angles, cs) {
            continue;
        }
        let b_len = angles[1].sin() / angles[2].sin();
        let raw = [
            Point::ORIGIN,
            Point::new(1.0, 0.0),
            Point::new(angles[0].cos(), angles[0].sin()) * b_len,
        ];
        let phi = rng.gen_range(0.0..2.0 * PI);
        let scale = rng.gen_range(0.5..2.0);
        let shift = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let place = |p: Point| p.rotate(phi) * scale + shift;
        if let Ok(t) = Triangle::new(place(raw[0]), place(raw[1]), place(raw[2])) {
            return Ok(t);
        }
    }
    Err(SampleError::Unsatisfiable(MAX_TRIANGLE_ATTEMPTS))
}
