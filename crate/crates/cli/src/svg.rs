use std::fmt::Write as _;

use thiserror::Error;
use trigbash_core::dsl::{evaluate, Bindings, Scene, Value};
use trigbash_core::geom::{bbox_diameter, Line, Point};
use trigbash_core::verify::sample::mix;

pub const MAX_RENDER_ATTEMPTS: u64 = 1_000;

const SIZE: f64 = 800.0;
const PAD: f64 = 0.15;

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("scene stayed degenerate for {0} attempts")]
    Degenerate(u64),
}

struct Frame {
    lo: Point,
    hi: Point,
    k: f64,
}

impl Frame {
    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.lo.x) * self.k, (self.hi.y - p.y) * self.k)
    }

    /// Part of `l` inside the padded box, by Liang-Barsky clipping.
    fn clip(&self, l: &Line) -> Option<(Point, Point)> {
        let dir = l.direction();
        let base = l.anchor();
        let reach = 2.0 * (bbox_diameter(&[self.lo, self.hi]) + base.norm());
        let (mut t0, mut t1) = (-reach, reach);
        for (p, q) in [
            (-dir.x, base.x - self.lo.x),
            (dir.x, self.hi.x - base.x),
            (-dir.y, base.y - self.lo.y),
            (dir.y, self.hi.y - base.y),
        ] {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else if p < 0.0 {
                t0 = t0.max(q / p);
            } else {
                t1 = t1.min(q / p);
            }
        }
        (t0 < t1).then(|| (base + dir * t0, base + dir * t1))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draws the first non-degenerate sample among seeds `mix(seed, k)`.
pub fn render_svg(scene: &Scene, seed: u64) -> Result<String, RenderError> {
    let b = (0..MAX_RENDER_ATTEMPTS)
        .find_map(|k| evaluate(scene, mix(seed, k)).ok())
        .ok_or(RenderError::Degenerate(MAX_RENDER_ATTEMPTS))?;
    Ok(draw(scene, &b))
}

fn draw(scene: &Scene, b: &Bindings) -> String {
    let pts = b.points();
    let d = bbox_diameter(&pts).max(1e-9);
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo = lo - Point::new(PAD * d, PAD * d);
    hi = hi + Point::new(PAD * d, PAD * d);
    let k = SIZE / (hi.x - lo.x).max(hi.y - lo.y);
    let f = Frame { lo, hi, k };
    let (w, h) = ((hi.x - lo.x) * k, (hi.y - lo.y) * k);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    if let Some(t) = scene.meta("title") {
        let _ = writeln!(s, "  <title>{}</title>", escape(t));
    }
    let _ = writeln!(s, r#"  <rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#);
    let _ = writeln!(s, r##"  <g fill="none" stroke="#888" stroke-width="1">"##);
    for (info, v) in scene.slots.iter().zip(&b.values) {
        match v {
            Value::Line(l) => {
                if let Some((p, q)) = f.clip(l) {
                    let ((x1, y1), (x2, y2)) = (f.map(p), f.map(q));
                    let _ = writeln!(
                        s,
                        r#"    <line id="{}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#,
                        escape(&info.name)
                    );
                }
            }
            Value::Circle(c) => {
                let (cx, cy) = f.map(c.center);
                let _ = writeln!(s, r#"    <circle id="{}" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, escape(&info.name), c.radius * k);
            }
            Value::Incircle(r) => {
                let (cx, cy) = f.map(r.circle.center);
                let _ = writeln!(s, r#"    <circle id="{}" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, escape(&info.name), r.circle.radius * k);
            }
            Value::Mixtilinear(r) => {
                let (cx, cy) = f.map(r.circle.center);
                let _ = writeln!(s, r#"    <circle id="{}" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, escape(&info.name), r.circle.radius * k);
            }
            _ => {}
        }
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, r#"  <g font-family="sans-serif" font-size="16">"#);
    for (info, v) in scene.slots.iter().zip(&b.values) {
        if let Value::Point(p) = v {
            let (x, y) = f.map(*p);
            let _ = writeln!(s, r#"    <circle cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#);
            let _ = writeln!(s, r#"    <text x="{:.3}" y="{:.3}">{}</text>"#, x + 5.0, y - 5.0, escape(&info.name));
        }
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    s
}
