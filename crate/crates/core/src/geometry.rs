//! Small plane-geometry toolkit shared by the garage and dynamics code.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Rotation by +90°.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn apply(m: &[[f64; 2]; 2], v: Vec2) -> Vec2 {
        Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

pub type Mat2 = [[f64; 2]; 2];

pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Twice the signed area (positive for counter-clockwise).
pub fn signed_area2(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum()
}

pub fn polygon_area(pts: &[Vec2]) -> f64 {
    signed_area2(pts).abs() / 2.0
}

/// Interior angle at each vertex of a counter-clockwise polygon, in radians.
pub fn interior_angles(pts: &[Vec2]) -> Vec<f64> {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let prev = pts[(i + n - 1) % n];
            let next = pts[(i + 1) % n];
            let a = prev - pts[i];
            let b = next - pts[i];
            // angle swept counter-clockwise from `b` to `a`
            let t = b.cross(a).atan2(b.dot(a));
            if t <= 0.0 {
                t + 2.0 * std::f64::consts::PI
            } else {
                t
            }
        })
        .collect()
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let e = b - a;
    let l2 = e.norm2();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(e) / l2).clamp(0.0, 1.0);
    p.dist(a + e * t)
}

/// Parameters `(s, t)` with `p + s·(q-p) = a + t·(b-a)`, if not parallel.
pub fn segment_intersection_params(p: Vec2, q: Vec2, a: Vec2, b: Vec2) -> Option<(f64, f64)> {
    let r = q - p;
    let e = b - a;
    let den = r.cross(e);
    if den.abs() <= 1e-300 {
        return None;
    }
    let w = a - p;
    Some((w.cross(e) / den, w.cross(r) / den))
}

/// Proper intersection test for two closed segments, ignoring contacts
/// closer than `eps` to the endpoints of either.
pub fn segments_cross(p: Vec2, q: Vec2, a: Vec2, b: Vec2, eps: f64) -> bool {
    match segment_intersection_params(p, q, a, b) {
        Some((s, t)) => {
            let ls = (q - p).norm();
            let lt = (b - a).norm();
            s * ls > eps && (1.0 - s) * ls > eps && t * lt > eps && (1.0 - t) * lt > eps
        }
        None => false,
    }
}

/// True when no two non-adjacent edges of the closed polygon meet.
pub fn is_simple_polygon(pts: &[Vec2], eps: f64) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if adjacent {
                continue;
            }
            if segments_cross(a, b, c, d, -eps) {
                return false;
            }
            if point_segment_distance(a, c, d) < eps
                || point_segment_distance(c, a, b) < eps
            {
                return false;
            }
        }
    }
    true
}

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
/// Returns index triples, each counter-clockwise.
pub fn triangulate(pts: &[Vec2]) -> Vec<[usize; 3]> {
    let n = pts.len();
    if n == 3 {
        return vec![[0, 1, 2]];
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n - 2);
    let scale = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let tol = 1e-12 * scale * scale;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (i0, i1, i2) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (pts[i0], pts[i1], pts[i2]);
            if (b - a).cross(c - b) <= tol {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == i0 || j == i1 || j == i2 {
                    return false;
                }
                let p = pts[j];
                (b - a).cross(p - a) >= -tol && (c - b).cross(p - b) >= -tol && (a - c).cross(p - c) >= -tol
            });
            if blocked {
                continue;
            }
            out.push([i0, i1, i2]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            // degenerate input; fall back to a fan so callers still get a cover
            let first = idx[0];
            for w in idx[1..].windows(2) {
                out.push([first, w[0], w[1]]);
            }
            return out;
        }
    }
    out.push([idx[0], idx[1], idx[2]]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_angles_and_area() {
        let sq = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        for a in interior_angles(&sq) {
            assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        }
        assert!((polygon_area(&sq) - 1.0).abs() < 1e-15);
        assert!(is_simple_polygon(&sq, 1e-9));
        assert_eq!(triangulate(&sq).len(), 2);
    }

    #[test]
    fn reflex_angle_and_bowtie() {
        let dart = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 1.0), Vec2::new(0.0, 2.0), Vec2::new(1.0, 1.0)];
        let ang = interior_angles(&dart);
        assert!(ang[3] > std::f64::consts::PI);
        let tris = triangulate(&dart);
        assert_eq!(tris.len(), 2);
        let area: f64 = tris.iter().map(|t| polygon_area(&[dart[t[0]], dart[t[1]], dart[t[2]]])).sum();
        assert!((area - polygon_area(&dart)).abs() < 1e-12);
        let bowtie = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(!is_simple_polygon(&bowtie, 1e-9));
    }
}
