//! Billiard flow inside a garage, traced in the plane tile by tile.

use crate::garage::Garage;
use crate::geometry::{self, point_segment_distance, transpose, Vec2};
use crate::surface::TranslationSurface;

use super::triangulation::SurfacePoint;
use super::{unit, DynamicsError, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Across {
    Tri(usize, usize),
    Wall,
}

#[derive(Debug, Clone)]
struct PlaneTri {
    tile: usize,
    pts: [Vec2; 3],
    /// +1 for counter-clockwise, -1 for clockwise.
    orient: f64,
    nbr: [Across; 3],
}

struct PlaneMesh {
    tris: Vec<PlaneTri>,
}

impl PlaneMesh {
    fn new(g: &Garage) -> PlaneMesh {
        let base = g.base();
        let m = base.len();
        let pattern = geometry::triangulate(base.vertices());
        let per_tile = pattern.len();
        let mut tris = Vec::with_capacity(per_tile * g.tile_count());
        // (tile, base edge) → (tri, edge)
        let mut on_edge = vec![vec![(0usize, 0usize); m]; g.tile_count()];
        for t in 0..g.tile_count() {
            let verts = g.tile_vertices(t);
            let orient = if g.tiles()[t].linear.det() > 0 { 1.0 } else { -1.0 };
            for (j, idx) in pattern.iter().enumerate() {
                let id = t * per_tile + j;
                let mut nbr = [Across::Wall; 3];
                for k in 0..3 {
                    let (a, b) = (idx[k], idx[(k + 1) % 3]);
                    if b == (a + 1) % m {
                        on_edge[t][a] = (id, k);
                    } else if a == (b + 1) % m {
                        on_edge[t][b] = (id, k);
                    } else {
                        let (j2, k2) = pattern
                            .iter()
                            .enumerate()
                            .find_map(|(j2, o)| (0..3).find(|&k2| o[k2] == b && o[(k2 + 1) % 3] == a).map(|k2| (j2, k2)))
                            .expect("diagonal shared by two triangles");
                        nbr[k] = Across::Tri(t * per_tile + j2, k2);
                    }
                }
                tris.push(PlaneTri {
                    tile: t,
                    pts: idx.map(|i| verts[i]),
                    orient,
                    nbr,
                });
            }
        }
        for t in 0..g.tile_count() {
            for e in 0..m {
                if let Some(slot) = g.partner(t, e) {
                    let (id, k) = on_edge[t][e];
                    let (id2, k2) = on_edge[slot.tile][slot.edge];
                    tris[id].nbr[k] = Across::Tri(id2, k2);
                }
            }
        }
        PlaneMesh { tris }
    }

    fn locate(&self, p: Vec2, eps: f64) -> Option<(usize, Option<usize>)> {
        let mut best: Option<(usize, Option<usize>)> = None;
        for (i, t) in self.tris.iter().enumerate() {
            let mut inside = true;
            let mut on = None;
            for k in 0..3 {
                let (a, b) = (t.pts[k], t.pts[(k + 1) % 3]);
                let d = t.orient * (b - a).normalized().cross(p - a);
                if d < -eps {
                    inside = false;
                    break;
                }
                if d <= eps {
                    on = Some(k);
                }
            }
            if inside {
                if on.is_none() {
                    return Some((i, None));
                }
                best = best.or(Some((i, on)));
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BilliardTermination {
    BounceBudget,
    LengthBudget,
    /// Came within `eps_sing` of a corner of the given tile.
    Corner { tile: usize, point: Vec2 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilliardTrajectory {
    /// Start, every bounce point, and the final point.
    pub points: Vec<Vec2>,
    /// Arc length at each entry of `points`.
    pub arc: Vec<f64>,
    pub bounces: u64,
    pub length: f64,
    pub termination: BilliardTermination,
}

/// Trace the billiard in `g` from a plane point, reflecting at unglued edges.
pub fn billiard_trace(
    g: &Garage,
    start: Vec2,
    dir: Vec2,
    max_bounces: u64,
    max_len: f64,
    tol: &Tolerances,
) -> Result<BilliardTrajectory, DynamicsError> {
    let mesh = PlaneMesh::new(g);
    let mut u = unit(dir)?;
    let (mut tri, on) = mesh.locate(start, tol.eps_len).ok_or(DynamicsError::StartOutside)?;
    if let Some(k) = on {
        match mesh.tris[tri].nbr[k] {
            Across::Wall => return Err(DynamicsError::StartOnBoundary),
            Across::Tri(t2, _) => {
                let t = &mesh.tris[tri];
                let e = t.pts[(k + 1) % 3] - t.pts[k];
                if t.orient * e.cross(u) < 0.0 {
                    tri = t2;
                }
            }
        }
    }
    let mut p = start;
    let mut skip: Option<usize> = None;
    let mut points = vec![start];
    let mut arc = vec![0.0];
    let mut length = 0.0;
    let mut bounces = 0;
    let mut steps = 0u64;
    let termination = loop {
        let t = &mesh.tris[tri];
        let mut exit: Option<(usize, f64)> = None;
        for k in 0..3 {
            if skip == Some(k) {
                continue;
            }
            let a = t.pts[k];
            let e = t.pts[(k + 1) % 3] - a;
            if -t.orient * e.cross(u) / e.norm() <= 1e-15 {
                continue;
            }
            let s = ((a - p).cross(e) / u.cross(e)).max(0.0);
            if exit.is_none_or(|(_, b)| s < b) {
                exit = Some((k, s));
            }
        }
        let Some((k, s)) = exit else {
            break BilliardTermination::LengthBudget;
        };
        let q = p + u * s;
        if let Some(&w) = t.pts.iter().find(|&&w| point_segment_distance(w, p, q) <= tol.eps_sing) {
            let sigma = (w - p).dot(u).clamp(0.0, s);
            if length + sigma <= max_len {
                let end = p + u * sigma;
                length += sigma;
                points.push(end);
                arc.push(length);
                break BilliardTermination::Corner { tile: t.tile, point: w };
            }
        }
        if length + s > max_len {
            let end = p + u * (max_len - length);
            length = max_len;
            points.push(end);
            arc.push(length);
            break BilliardTermination::LengthBudget;
        }
        length += s;
        p = q;
        steps += 1;
        match t.nbr[k] {
            Across::Tri(t2, k2) => {
                tri = t2;
                skip = Some(k2);
            }
            Across::Wall => {
                let e = (t.pts[(k + 1) % 3] - t.pts[k]).normalized();
                u = e * (2.0 * u.dot(e)) - u;
                skip = Some(k);
                bounces += 1;
                points.push(p);
                arc.push(length);
                if bounces >= max_bounces {
                    break BilliardTermination::BounceBudget;
                }
            }
        }
        if steps >= tol.max_crossings {
            points.push(p);
            arc.push(length);
            break BilliardTermination::LengthBudget;
        }
    };
    Ok(BilliardTrajectory {
        points,
        arc,
        bounces,
        length,
        termination,
    })
}

/// The unfolded-surface point over a plane point of the garage, in the
/// identity copy of the first tile containing it.
pub fn lift_to_surface(g: &Garage, s: &TranslationSurface, x: Vec2, eps: f64) -> Option<SurfacePoint> {
    let mesh = PlaneMesh::new(g);
    let (tri, _) = mesh.locate(x, eps)?;
    let t = mesh.tris[tri].tile;
    let id = g.base().group().identity();
    let face = s.find_face(id, t)?;
    Some(SurfacePoint {
        face,
        pos: x - g.tiles()[t].translation,
    })
}

/// Project a point of the unfolded surface of `g` back to the plane.
pub fn project_to_garage(g: &Garage, s: &TranslationSurface, sp: SurfacePoint) -> Vec2 {
    let o = s.face(sp.face).origin.as_ref().expect("unfolded surface");
    let base_pt = Vec2::apply(&transpose(&g.base().world_matrix(o.element)), sp.pos);
    Vec2::apply(&g.tile_matrix(o.tile), base_pt) + g.tiles()[o.tile].translation
}
