//! Triangle mesh over a translation surface.

use std::collections::HashMap;

use crate::geometry::{self, Vec2};
use crate::surface::TranslationSurface;

/// Neighbour across one triangle edge. A chart point `x` on the shared edge
/// has coordinates `x + offset` in the neighbour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub tri: usize,
    pub edge: usize,
    pub offset: Vec2,
    /// True when the edge is a face edge (as opposed to a diagonal).
    pub face_edge: bool,
}

/// Counter-clockwise triangle in its face's chart. Edge `k` runs from
/// `pts[k]` to `pts[k+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tri {
    pub face: usize,
    pub pts: [Vec2; 3],
    pub class: [usize; 3],
    pub nbr: [Link; 3],
    pub area: f64,
}

/// A point given in the chart of one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub face: usize,
    pub pos: Vec2,
}

/// Where a point sits relative to the mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Place {
    Interior(usize),
    Edge(usize, usize),
    Vertex { tri: usize, corner: usize, class: usize },
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub tris: Vec<Tri>,
    pub face_tris: Vec<Vec<usize>>,
    /// Vertex class → `(triangle, corner)` pairs.
    pub class_corners: Vec<Vec<(usize, usize)>>,
    /// Cone angle of each vertex class, in multiples of 2π.
    pub cone: Vec<u64>,
    /// Largest chart coordinate magnitude; sets absolute tolerances.
    pub scale: f64,
    pub area: f64,
}

impl Mesh {
    pub fn new(s: &TranslationSurface) -> Mesh {
        let mut tris = Vec::new();
        let mut face_tris = Vec::with_capacity(s.face_count());
        // (face, from vertex, to vertex) → (tri, edge)
        let mut directed: HashMap<(usize, usize, usize), (usize, usize)> = HashMap::new();
        for (f, face) in s.faces().iter().enumerate() {
            let mut ids = Vec::new();
            for t in geometry::triangulate(&face.vertices) {
                let id = tris.len();
                let pts = t.map(|i| face.vertices[i]);
                let class = t.map(|i| s.corner_class(f, i));
                for k in 0..3 {
                    directed.insert((f, t[k], t[(k + 1) % 3]), (id, k));
                }
                let dummy = Link {
                    tri: usize::MAX,
                    edge: 0,
                    offset: Vec2::ZERO,
                    face_edge: false,
                };
                tris.push(Tri {
                    face: f,
                    pts,
                    class,
                    nbr: [dummy; 3],
                    area: geometry::polygon_area(&pts),
                });
                ids.push(id);
            }
            face_tris.push(ids);
        }
        for (&(f, a, b), &(id, k)) in &directed {
            let n = s.face(f).len();
            let link = if b == (a + 1) % n {
                let p = s.pair(f, a);
                let m = s.face(p.face).len();
                let (tri, edge) = directed[&(p.face, p.edge, (p.edge + 1) % m)];
                Link {
                    tri,
                    edge,
                    offset: s.crossing_offset(f, a),
                    face_edge: true,
                }
            } else {
                let (tri, edge) = directed[&(f, b, a)];
                Link {
                    tri,
                    edge,
                    offset: Vec2::ZERO,
                    face_edge: false,
                }
            };
            tris[id].nbr[k] = link;
        }
        let mut class_corners = vec![Vec::new(); s.classes().len()];
        for (i, t) in tris.iter().enumerate() {
            for c in 0..3 {
                class_corners[t.class[c]].push((i, c));
            }
        }
        let scale = s
            .faces()
            .iter()
            .flat_map(|f| f.vertices.iter())
            .map(|v| v.norm())
            .fold(1.0, f64::max);
        let area = tris.iter().map(|t| t.area).sum();
        Mesh {
            tris,
            face_tris,
            class_corners,
            cone: s.classes().iter().map(|c| c.cone).collect(),
            scale,
            area,
        }
    }

    pub fn is_singular(&self, class: usize) -> bool {
        self.cone[class] >= 2
    }

    /// Endpoints for saddle connections: the cone points, or every marked
    /// point when the surface has no cone points.
    pub fn sources(&self) -> Vec<usize> {
        let sing: Vec<usize> = (0..self.cone.len()).filter(|&c| self.is_singular(c)).collect();
        if sing.is_empty() {
            (0..self.cone.len()).collect()
        } else {
            sing
        }
    }

    pub fn source_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.cone.len()];
        for c in self.sources() {
            mask[c] = true;
        }
        mask
    }

    pub fn singular_mask(&self) -> Vec<bool> {
        (0..self.cone.len()).map(|c| self.is_singular(c)).collect()
    }

    /// Right and left edge vectors of a corner; the corner's sector runs
    /// counter-clockwise from the first to the second.
    pub fn corner_edges(&self, tri: usize, corner: usize) -> (Vec2, Vec2) {
        let p = &self.tris[tri].pts;
        let w = p[corner];
        (p[(corner + 1) % 3] - w, p[(corner + 2) % 3] - w)
    }

    /// The corner of `class` whose half-open sector `[right, left)` contains `u`.
    pub fn corner_for_direction(&self, class: usize, u: Vec2) -> (usize, usize) {
        let tol = 1e-12;
        let mut best = (f64::NEG_INFINITY, self.class_corners[class][0]);
        for &(t, c) in &self.class_corners[class] {
            let (r, l) = self.corner_edges(t, c);
            let cr = r.normalized().cross(u);
            let cl = u.cross(l.normalized());
            if cr >= -tol && cl > tol {
                return (t, c);
            }
            let score = cr.min(cl);
            if score > best.0 {
                best = (score, (t, c));
            }
        }
        best.1
    }

    /// Classify a chart point of a face with absolute tolerance `eps`.
    pub fn place(&self, p: SurfacePoint, eps: f64) -> Option<Place> {
        let tris = self.face_tris.get(p.face)?;
        for &t in tris {
            let pts = &self.tris[t].pts;
            for c in 0..3 {
                if pts[c].dist(p.pos) <= eps {
                    return Some(Place::Vertex {
                        tri: t,
                        corner: c,
                        class: self.tris[t].class[c],
                    });
                }
            }
        }
        let mut edge_hit = None;
        for &t in tris {
            let pts = &self.tris[t].pts;
            let mut inside = true;
            let mut on = None;
            for k in 0..3 {
                let (a, b) = (pts[k], pts[(k + 1) % 3]);
                let d = (b - a).normalized().cross(p.pos - a);
                if d < -eps {
                    inside = false;
                    break;
                }
                if d <= eps {
                    on = Some(k);
                }
            }
            if inside {
                match on {
                    None => return Some(Place::Interior(t)),
                    Some(k) => edge_hit = edge_hit.or(Some(Place::Edge(t, k))),
                }
            }
        }
        edge_hit
    }

    /// Face-local location of a vertex class: its first corner.
    pub fn class_point(&self, class: usize) -> SurfacePoint {
        let (t, c) = self.class_corners[class][0];
        SurfacePoint {
            face: self.tris[t].face,
            pos: self.tris[t].pts[c],
        }
    }
}
