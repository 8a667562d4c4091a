//! Minimal hand-written SVG output.

use std::fmt::Write;

use crate::dynamics::{BilliardTrajectory, Segment};
use crate::garage::Garage;
use crate::geometry::Vec2;
use crate::surface::TranslationSurface;

const STROKE: f64 = 0.01;

struct Canvas {
    body: String,
    min: Vec2,
    max: Vec2,
}

impl Canvas {
    fn new() -> Canvas {
        Canvas {
            body: String::new(),
            min: Vec2::new(f64::INFINITY, f64::INFINITY),
            max: Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn grow(&mut self, p: Vec2) {
        self.min = Vec2::new(self.min.x.min(p.x), self.min.y.min(p.y));
        self.max = Vec2::new(self.max.x.max(p.x), self.max.y.max(p.y));
    }

    fn polygon(&mut self, pts: &[Vec2], fill: &str) {
        pts.iter().for_each(|&p| self.grow(p));
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.6},{:.6}", p.x, -p.y)).collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="{STROKE}"/>"#,
            coords.join(" ")
        );
    }

    fn polyline(&mut self, pts: &[Vec2], color: &str) {
        pts.iter().for_each(|&p| self.grow(p));
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.6},{:.6}", p.x, -p.y)).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{STROKE}"/>"#,
            coords.join(" ")
        );
    }

    fn label(&mut self, at: Vec2, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.6}" y="{:.6}" font-size="0.08" text-anchor="middle">{text}</text>"#,
            at.x, -at.y
        );
    }

    fn finish(self) -> String {
        let pad = 0.05 * (self.max - self.min).norm().max(1e-9);
        let (x, y) = (self.min.x - pad, -self.max.y - pad);
        let (w, h) = (self.max.x - self.min.x + 2.0 * pad, self.max.y - self.min.y + 2.0 * pad);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x:.6} {y:.6} {w:.6} {h:.6}\">\n{}</svg>\n",
            self.body
        )
    }
}

fn centroid(pts: &[Vec2]) -> Vec2 {
    pts.iter().fold(Vec2::ZERO, |a, &b| a + b) * (1.0 / pts.len() as f64)
}

/// The tiles of a garage in the plane, with a billiard path on top.
pub fn garage_svg(g: &Garage, path: Option<&BilliardTrajectory>) -> String {
    let mut c = Canvas::new();
    for t in 0..g.tile_count() {
        let v = g.tile_vertices(t);
        c.polygon(&v, "#eef");
        c.label(centroid(&v), &t.to_string());
    }
    if let Some(p) = path {
        c.polyline(&p.points, "red");
    }
    c.finish()
}

/// Faces laid out left to right, each in its own chart, with trajectory
/// segments drawn in the chart of their face.
pub fn surface_svg(s: &TranslationSurface, paths: &[&[Segment]]) -> String {
    let mut shifts = Vec::with_capacity(s.face_count());
    let mut x = 0.0;
    for f in s.faces() {
        let lo = f.vertices.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let hi = f.vertices.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        shifts.push(Vec2::new(x - lo, 0.0));
        x += hi - lo + 0.2;
    }
    let mut c = Canvas::new();
    for (i, f) in s.faces().iter().enumerate() {
        let v: Vec<Vec2> = f.vertices.iter().map(|&p| p + shifts[i]).collect();
        c.polygon(&v, "#efe");
        c.label(centroid(&v), &i.to_string());
    }
    let colors = ["red", "blue", "darkorange", "purple", "teal"];
    for (k, segs) in paths.iter().enumerate() {
        for seg in segs.iter() {
            let sh = shifts[seg.face];
            c.polyline(&[seg.start + sh, seg.end + sh], colors[k % colors.len()]);
        }
    }
    c.finish()
}
