//! Saddle-connection enumeration by corridor development.
//!
//! From every corner of every source point a wedge of directions is pushed
//! through the triangles it meets, developing them into the source chart.
//! When a new vertex falls strictly inside the wedge the wedge splits there;
//! a vertex that is a source ends a saddle connection, a transparent one is
//! crossed by continuing that single ray with the flow.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::geometry::{point_segment_distance, Vec2};
use crate::surface::TranslationSurface;

use super::flow::Outcome;
use super::triangulation::Mesh;
use super::Tolerances;

/// A saddle-connection holonomy with the number of saddle connections sharing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyVector {
    pub dx: f64,
    pub dy: f64,
    pub multiplicity: u32,
}

impl HolonomyVector {
    pub fn vec(&self) -> Vec2 {
        Vec2::new(self.dx, self.dy)
    }

    pub fn length(&self) -> f64 {
        self.vec().norm()
    }
}

/// Relative tolerance on the sine of the angle between a vertex and a wedge ray.
const WEDGE_TOL: f64 = 1e-12;

struct Window {
    tri: usize,
    edge: usize,
    /// developed = chart + shift
    shift: Vec2,
    right: Vec2,
    left: Vec2,
}

/// Saddle connections of length at most `max_len` leaving one corner.
fn from_corner(mesh: &Mesh, tri: usize, corner: usize, max_len: f64, stop: &[bool], tol: &Tolerances) -> Vec<Vec2> {
    let mut found = Vec::new();
    let t = &mesh.tris[tri];
    let w = t.pts[corner];
    let reach = max_len * (1.0 + 1e-12) + tol.eps_len;

    let ray = |found: &mut Vec<Vec2>, v: Vec2, class: usize| {
        let d = v.norm();
        if d > reach {
            return;
        }
        if stop[class] {
            found.push(v);
            return;
        }
        let u = v * (1.0 / d);
        let mut cur = mesh.cursor_at_vertex(class, u);
        let mut len = d;
        loop {
            let (step, out) = mesh.advance(&mut cur, u, stop, tol.eps_sing, reach - len);
            len += step.len;
            match out {
                Outcome::Hit(_) => {
                    found.push(u * len);
                    return;
                }
                Outcome::Exhausted => return,
                Outcome::Crossed(_) | Outcome::Passed => {}
            }
        }
    };

    let (r, l) = mesh.corner_edges(tri, corner);
    let right_vertex = (corner + 1) % 3;
    ray(&mut found, r, t.class[right_vertex]);

    let mut stack = vec![Window {
        tri,
        edge: right_vertex,
        shift: Vec2::ZERO,
        right: r.normalized(),
        left: l.normalized(),
    }];
    while let Some(win) = stack.pop() {
        if win.right.cross(win.left) <= WEDGE_TOL {
            continue;
        }
        let cur = &mesh.tris[win.tri];
        let a = cur.pts[win.edge] + win.shift;
        let b = cur.pts[(win.edge + 1) % 3] + win.shift;
        if point_segment_distance(w, a, b) > reach {
            continue;
        }
        let link = cur.nbr[win.edge];
        let next = &mesh.tris[link.tri];
        let shift = win.shift - link.offset;
        let xi = (link.edge + 2) % 3;
        let x = next.pts[xi] + shift;
        let v = x - w;
        let vn = v.normalized();
        let cr = win.right.cross(vn);
        let cl = vn.cross(win.left);
        if cr > WEDGE_TOL && cl > WEDGE_TOL {
            ray(&mut found, v, next.class[xi]);
            stack.push(Window {
                tri: link.tri,
                edge: (link.edge + 1) % 3,
                shift,
                right: win.right,
                left: vn,
            });
            stack.push(Window {
                tri: link.tri,
                edge: (link.edge + 2) % 3,
                shift,
                right: vn,
                left: win.left,
            });
        } else if cr <= WEDGE_TOL {
            stack.push(Window {
                tri: link.tri,
                edge: (link.edge + 2) % 3,
                shift,
                right: win.right,
                left: win.left,
            });
        } else {
            stack.push(Window {
                tri: link.tri,
                edge: (link.edge + 1) % 3,
                shift,
                right: win.right,
                left: win.left,
            });
        }
    }
    found
}

/// Merge holonomies that agree within `eps`, counting multiplicity.
pub(crate) fn merge_holonomies(vs: Vec<Vec2>, eps: f64) -> Vec<HolonomyVector> {
    let cell = eps.max(1e-12) * 4.0;
    let key = |v: Vec2| ((v.x / cell).round() as i64, (v.y / cell).round() as i64);
    let mut out: Vec<HolonomyVector> = Vec::new();
    let mut grid: HashMap<(i64, i64), usize> = HashMap::new();
    for v in vs {
        let (kx, ky) = key(v);
        let mut hit = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(&i) = grid.get(&(kx + dx, ky + dy)) {
                    if out[i].vec().dist(v) <= cell {
                        hit = Some(i);
                        break 'search;
                    }
                }
            }
        }
        match hit {
            Some(i) => out[i].multiplicity += 1,
            None => {
                grid.insert((kx, ky), out.len());
                out.push(HolonomyVector {
                    dx: v.x,
                    dy: v.y,
                    multiplicity: 1,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.length()
            .total_cmp(&b.length())
            .then(a.dy.atan2(a.dx).total_cmp(&b.dy.atan2(b.dx)))
    });
    out
}

pub(crate) fn saddle_connections_mesh(mesh: &Mesh, max_len: f64, tol: &Tolerances) -> Vec<HolonomyVector> {
    let stop = mesh.source_mask();
    let corners: Vec<(usize, usize)> = mesh
        .sources()
        .into_iter()
        .flat_map(|c| mesh.class_corners[c].iter().copied())
        .collect();
    let found: Vec<Vec<Vec2>> = corners
        .par_iter()
        .map(|&(t, c)| from_corner(mesh, t, c, max_len, &stop, tol))
        .collect();
    let all: Vec<Vec2> = found.into_iter().flatten().collect();
    let eps = tol.eps_len.max(1e-12 * mesh.scale) * (1.0 + max_len);
    merge_holonomies(all, eps.min(1e-6))
}

/// All saddle connections with holonomy length at most `max_len`.
///
/// Endpoints are the cone points; on a surface without cone points every
/// marked point is an endpoint instead (so the marked torus yields the
/// primitive lattice vectors).
pub fn saddle_connections(s: &TranslationSurface, max_len: f64, tol: &Tolerances) -> Vec<HolonomyVector> {
    if !(max_len > 0.0) {
        return Vec::new();
    }
    saddle_connections_mesh(&Mesh::new(s), max_len, tol)
}
