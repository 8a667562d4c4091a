//! Cylinder decompositions in a fixed direction.

use crate::geometry::{segment_intersection_params, Vec2};
use crate::surface::TranslationSurface;

use super::flow::{trace_mesh, Cursor, Outcome};
use super::triangulation::{Mesh, SurfacePoint};
use super::{unit, DynamicsError, Termination, Tolerances};

/// A maximal family of parallel closed leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct Cylinder {
    pub direction: Vec2,
    pub circumference: f64,
    pub height: f64,
    /// A point on the core leaf.
    pub core: SurfacePoint,
    /// Lengths of the saddle connections seen on the lower boundary.
    pub boundary: Vec<f64>,
}

impl Cylinder {
    pub fn area(&self) -> f64 {
        self.circumference * self.height
    }
}

/// A saddle connection in the decomposition direction, as triangle pieces.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Separatrix {
    pub from: usize,
    pub to: usize,
    pub length: f64,
    pub pieces: Vec<(usize, Vec2, Vec2)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub direction: Vec2,
    pub cylinders: Vec<Cylinder>,
    /// Lengths of all saddle connections in the direction.
    pub saddle_lengths: Vec<f64>,
    pub surface_area: f64,
}

impl Decomposition {
    pub fn total_area(&self) -> f64 {
        self.cylinders.iter().map(Cylinder::area).sum()
    }
}

/// Saddle-connection pieces indexed by triangle, for perpendicular shots.
pub(crate) struct Walls {
    pub by_tri: Vec<Vec<(Vec2, Vec2, usize)>>,
}

impl Walls {
    fn new(mesh: &Mesh, seps: &[Separatrix]) -> Walls {
        let mut by_tri = vec![Vec::new(); mesh.tris.len()];
        let eps = 1e-11 * mesh.scale;
        for (i, s) in seps.iter().enumerate() {
            for &(t, a, b) in &s.pieces {
                by_tri[t].push((a, b, i));
                let tri = &mesh.tris[t];
                for k in 0..3 {
                    let (p, q) = (tri.pts[k], tri.pts[(k + 1) % 3]);
                    let e = (q - p).normalized();
                    if e.cross(a - p).abs() <= eps && e.cross(b - p).abs() <= eps {
                        let l = tri.nbr[k];
                        by_tri[l.tri].push((a + l.offset, b + l.offset, i));
                    }
                }
            }
        }
        Walls { by_tri }
    }

    /// Distance along `n` from `cur` to the first wall or stop point.
    pub(crate) fn shoot(&self, mesh: &Mesh, mut cur: Cursor, n: Vec2, stop: &[bool], tol: &Tolerances, budget: f64) -> Option<(f64, Vec<(usize, Vec2, Vec2)>)> {
        let min = 1e-9 * mesh.scale;
        let mut len = 0.0;
        let mut path = Vec::new();
        loop {
            let (step, out) = mesh.advance(&mut cur, n, stop, tol.eps_sing, budget - len);
            let mut best: Option<f64> = None;
            if step.len > 0.0 {
                for &(a, b, _) in &self.by_tri[step.tri] {
                    if let Some((s, t)) = segment_intersection_params(step.from, step.to, a, b) {
                        let along = s * step.len;
                        if (-1e-9..=1.0 + 1e-9).contains(&t) && along + len > min && (-1e-12..=step.len + 1e-12).contains(&along) {
                            best = Some(best.map_or(along, |x: f64| x.min(along)));
                        }
                    }
                }
            }
            if let Some(d) = best {
                path.push((step.tri, step.from, step.from + n * d));
                return Some((len + d, path));
            }
            path.push((step.tri, step.from, step.to));
            len += step.len;
            match out {
                Outcome::Hit(_) => return Some((len, path)),
                Outcome::Exhausted => return None,
                Outcome::Crossed(_) | Outcome::Passed => {}
            }
        }
    }
}

/// Corners of stop points whose half-open sector contains `u`.
fn outgoing(mesh: &Mesh, stop: &[bool], u: Vec2) -> Vec<(usize, usize, usize)> {
    let tol = 1e-12;
    let mut out = Vec::new();
    for (class, corners) in mesh.class_corners.iter().enumerate() {
        if !stop[class] {
            continue;
        }
        for &(t, c) in corners {
            let (r, l) = mesh.corner_edges(t, c);
            if r.normalized().cross(u) >= -tol && u.cross(l.normalized()) > tol {
                out.push((class, t, c));
            }
        }
    }
    out
}

pub(crate) struct Decomp {
    pub result: Decomposition,
    pub walls: Walls,
}

pub(crate) fn decompose(mesh: &Mesh, dir: Vec2, budget: f64, tol: &Tolerances) -> Result<Decomp, DynamicsError> {
    let u = unit(dir)?;
    let stop = mesh.source_mask();
    let mut seps = Vec::new();
    for (class, t, c) in outgoing(mesh, &stop, u) {
        let mut cur = Cursor {
            tri: t,
            p: mesh.tris[t].pts[c],
            corner: Some(c),
        };
        let mut pieces = Vec::new();
        let mut len = 0.0;
        loop {
            let (step, out) = mesh.advance(&mut cur, u, &stop, tol.eps_sing, budget - len);
            if step.len > 0.0 {
                pieces.push((step.tri, step.from, step.to));
            }
            len += step.len;
            match out {
                Outcome::Hit(to) => {
                    seps.push(Separatrix {
                        from: class,
                        to,
                        length: len,
                        pieces,
                    });
                    break;
                }
                Outcome::Exhausted => return Err(DynamicsError::BudgetExhausted { class, budget }),
                Outcome::Crossed(_) | Outcome::Passed => {}
            }
        }
    }
    if seps.is_empty() {
        return Err(DynamicsError::NoDecomposition("no outgoing separatrix".into()));
    }
    let walls = Walls::new(mesh, &seps);
    let n = u.perp();
    let frac = 0.381_966_011_250_105;
    let mut cylinders: Vec<Cylinder> = Vec::new();
    let mut cores: Vec<Vec<super::Segment>> = Vec::new();
    let member_eps = 1e-7 * mesh.scale;
    for sep in &seps {
        // generic point on the separatrix
        let target = sep.length * frac;
        let mut acc = 0.0;
        let mut start = None;
        for &(t, a, b) in &sep.pieces {
            let l = a.dist(b);
            if acc + l >= target {
                start = Some((t, a + u * (target - acc)));
                break;
            }
            acc += l;
        }
        let (t, p) = start.expect("point on separatrix");
        let cur = Cursor { tri: t, p, corner: None };
        let (h, path) = walls
            .shoot(mesh, cur, n, &stop, tol, budget)
            .ok_or_else(|| DynamicsError::NoDecomposition("perpendicular shot found no boundary".into()))?;
        if h <= 1e-9 * mesh.scale {
            return Err(DynamicsError::NoDecomposition("zero-height cylinder".into()));
        }
        // core point at half height
        let mut acc = 0.0;
        let mut core = None;
        for &(t, a, b) in &path {
            let l = a.dist(b);
            if acc + l >= h / 2.0 {
                core = Some(SurfacePoint {
                    face: mesh.tris[t].face,
                    pos: a + n * (h / 2.0 - acc),
                });
                break;
            }
            acc += l;
        }
        let core = core.expect("core point on shot");
        let known = cores.iter().position(|segs| {
            segs.iter().any(|s| {
                s.face == core.face && crate::geometry::point_segment_distance(core.pos, s.start, s.end) <= member_eps
            })
        });
        if let Some(i) = known {
            cylinders[i].boundary.push(sep.length);
            continue;
        }
        let leaf = trace_mesh(mesh, core, u, budget, tol, &stop)?;
        if leaf.termination != Termination::Closed {
            return Err(DynamicsError::NoDecomposition(format!(
                "core leaf at height {h} does not close ({:?})",
                leaf.termination
            )));
        }
        cylinders.push(Cylinder {
            direction: u,
            circumference: leaf.length,
            height: h,
            core,
            boundary: vec![sep.length],
        });
        cores.push(leaf.segments);
    }
    let result = Decomposition {
        direction: u,
        cylinders,
        saddle_lengths: seps.iter().map(|s| s.length).collect(),
        surface_area: mesh.area,
    };
    let total = result.total_area();
    if (total - mesh.area).abs() > 1e-6 * mesh.area {
        return Err(DynamicsError::NoDecomposition(format!(
            "cylinder areas sum to {total}, surface area is {}",
            mesh.area
        )));
    }
    Ok(Decomp { result, walls })
}

/// Decompose the surface into cylinders in direction `dir`, tracing each
/// separatrix for at most `budget` length.
pub fn cylinder_decomposition(s: &TranslationSurface, dir: Vec2, budget: f64, tol: &Tolerances) -> Result<Decomposition, DynamicsError> {
    decompose(&Mesh::new(s), dir, budget, tol).map(|d| d.result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::surface::unfold;

    #[test]
    fn torus_horizontal() {
        let d = cylinder_decomposition(&TranslationSurface::unit_torus(), Vec2::new(1.0, 0.0), 10.0, &Tolerances::default()).unwrap();
        assert_eq!(d.cylinders.len(), 1);
        assert!((d.cylinders[0].circumference - 1.0).abs() < 1e-12);
        assert!((d.cylinders[0].height - 1.0).abs() < 1e-12);
    }

    #[test]
    fn torus_rational_slope() {
        let d = cylinder_decomposition(&TranslationSurface::unit_torus(), Vec2::new(3.0, 2.0), 10.0, &Tolerances::default()).unwrap();
        assert_eq!(d.cylinders.len(), 1);
        assert!((d.cylinders[0].circumference - 13f64.sqrt()).abs() < 1e-9);
        assert!((d.cylinders[0].height - 1.0 / 13f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn torus_irrational_slope() {
        let err = cylinder_decomposition(&TranslationSurface::unit_torus(), Vec2::new(1.0, 2f64.sqrt()), 50.0, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, DynamicsError::BudgetExhausted { .. }));
    }

    #[test]
    fn double_pentagon_edge_direction() {
        let s = unfold(&catalog::generate("veech-isosceles", Some(5), None).unwrap());
        // the base edge of the triangle is horizontal
        let d = cylinder_decomposition(&s, Vec2::new(1.0, 0.0), 100.0, &Tolerances::default()).unwrap();
        assert_eq!(d.cylinders.len(), 2);
        assert!((d.total_area() - s.area()).abs() < 1e-9 * s.area());
    }
}
