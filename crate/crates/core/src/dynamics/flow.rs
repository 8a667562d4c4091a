//! Straight-line flow.

use crate::geometry::{point_segment_distance, Vec2};
use crate::surface::TranslationSurface;

use super::triangulation::{Mesh, Place, SurfacePoint};
use super::{unit, DynamicsError, Tolerances};

/// Position of a moving point: a triangle, chart coordinates, and the corner
/// it sits on if it was just placed on a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cursor {
    pub tri: usize,
    pub p: Vec2,
    pub corner: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Outcome {
    /// Crossed into a neighbour; flag says whether a face edge was crossed.
    Crossed(bool),
    /// Passed exactly through a transparent vertex.
    Passed,
    /// Reached a stopping vertex class.
    Hit(usize),
    /// Ran out of length inside the triangle.
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Step {
    pub tri: usize,
    pub from: Vec2,
    pub to: Vec2,
    pub len: f64,
}

/// Relative tolerance for treating an exact vertex hit on a transparent vertex.
const PASS_REL: f64 = 1e-12;

impl Mesh {
    /// Place a moving point at `sp` with direction `u`. Errors if the point
    /// is a stopping vertex.
    pub(crate) fn cursor_at(&self, sp: SurfacePoint, u: Vec2, stop: &[bool], eps_stop: f64) -> Result<Cursor, DynamicsError> {
        let eps = (PASS_REL * self.scale).max(1e-15);
        if let Some(Place::Vertex { class, .. }) = self.place(sp, eps_stop) {
            if stop[class] {
                return Err(DynamicsError::StartAtSingularity);
            }
        }
        match self.place(sp, eps).ok_or(DynamicsError::StartOutside)? {
            Place::Interior(t) => Ok(Cursor {
                tri: t,
                p: sp.pos,
                corner: None,
            }),
            Place::Edge(t, k) => {
                let pts = &self.tris[t].pts;
                let e = pts[(k + 1) % 3] - pts[k];
                if e.cross(u) > 0.0 {
                    Ok(Cursor {
                        tri: t,
                        p: sp.pos,
                        corner: None,
                    })
                } else {
                    let l = self.tris[t].nbr[k];
                    Ok(Cursor {
                        tri: l.tri,
                        p: sp.pos + l.offset,
                        corner: None,
                    })
                }
            }
            Place::Vertex { class, .. } => Ok(self.cursor_at_vertex(class, u)),
        }
    }

    pub(crate) fn cursor_at_vertex(&self, class: usize, u: Vec2) -> Cursor {
        let (t, c) = self.corner_for_direction(class, u);
        Cursor {
            tri: t,
            p: self.tris[t].pts[c],
            corner: Some(c),
        }
    }

    /// Move from `cur` in direction `u` to the next event, at most `max_len`.
    pub(crate) fn advance(&self, cur: &mut Cursor, u: Vec2, stop: &[bool], eps_stop: f64, max_len: f64) -> (Step, Outcome) {
        let tri = &self.tris[cur.tri];
        let p = cur.p;
        let mut exit: Option<(usize, f64)> = None;
        let mut fallback = (0, f64::NEG_INFINITY, 0.0);
        for k in 0..3 {
            if let Some(c) = cur.corner {
                if k == c || k == (c + 2) % 3 {
                    continue;
                }
            }
            let a = tri.pts[k];
            let e = tri.pts[(k + 1) % 3] - a;
            let out = -e.cross(u) / e.norm();
            let s = (a - p).cross(e) / u.cross(e);
            if out > fallback.1 {
                fallback = (k, out, s);
            }
            if out <= 1e-15 {
                continue;
            }
            let s = s.max(0.0);
            if exit.is_none_or(|(_, best)| s < best) {
                exit = Some((k, s));
            }
        }
        let (k, s) = exit.unwrap_or((fallback.0, fallback.2.max(0.0)));
        let q = p + u * s;

        let eps_pass = PASS_REL * self.scale;
        let mut vertex: Option<(usize, f64)> = None;
        for c in 0..3 {
            if cur.corner == Some(c) {
                continue;
            }
            let w = tri.pts[c];
            let thr = if stop[tri.class[c]] { eps_stop } else { eps_pass };
            if point_segment_distance(w, p, q) <= thr {
                let sigma = (w - p).dot(u).clamp(0.0, s);
                if vertex.is_none_or(|(_, best)| sigma < best) {
                    vertex = Some((c, sigma));
                }
            }
        }
        if let Some((c, sigma)) = vertex {
            if sigma > max_len {
                return self.exhaust(cur, u, max_len);
            }
            let class = tri.class[c];
            let to = p + u * sigma;
            let step = Step {
                tri: cur.tri,
                from: p,
                to,
                len: sigma,
            };
            if stop[class] {
                cur.p = to;
                return (step, Outcome::Hit(class));
            }
            *cur = self.cursor_at_vertex(class, u);
            return (step, Outcome::Passed);
        }
        if s > max_len {
            return self.exhaust(cur, u, max_len);
        }
        let step = Step {
            tri: cur.tri,
            from: p,
            to: q,
            len: s,
        };
        let link = tri.nbr[k];
        *cur = Cursor {
            tri: link.tri,
            p: q + link.offset,
            corner: None,
        };
        (step, Outcome::Crossed(link.face_edge))
    }

    fn exhaust(&self, cur: &mut Cursor, u: Vec2, len: f64) -> (Step, Outcome) {
        let to = cur.p + u * len;
        let step = Step {
            tri: cur.tri,
            from: cur.p,
            to,
            len,
        };
        cur.p = to;
        cur.corner = None;
        (step, Outcome::Exhausted)
    }

    /// Copies of a surface point in every triangle it touches.
    pub(crate) fn point_copies(&self, sp: SurfacePoint, eps: f64) -> Vec<(usize, Vec2)> {
        match self.place(sp, eps) {
            Some(Place::Interior(t)) => vec![(t, sp.pos)],
            Some(Place::Edge(t, k)) => {
                let l = self.tris[t].nbr[k];
                vec![(t, sp.pos), (l.tri, sp.pos + l.offset)]
            }
            Some(Place::Vertex { class, .. }) => self.class_corners[class]
                .iter()
                .map(|&(t, c)| (t, self.tris[t].pts[c]))
                .collect(),
            None => Vec::new(),
        }
    }
}

/// A maximal piece of trajectory inside one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub face: usize,
    pub start: Vec2,
    pub end: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    BudgetExhausted,
    Closed,
    SaddleHit { class: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub direction: Vec2,
    pub segments: Vec<Segment>,
    pub length: f64,
    pub termination: Termination,
    pub face_crossings: u64,
}

impl Trajectory {
    /// Position at arc length `t` along the trajectory, as a face point.
    pub fn point_at(&self, t: f64) -> Option<SurfacePoint> {
        let mut acc = 0.0;
        for s in &self.segments {
            let l = s.start.dist(s.end);
            if t <= acc + l {
                return Some(SurfacePoint {
                    face: s.face,
                    pos: s.start + self.direction * (t - acc),
                });
            }
            acc += l;
        }
        None
    }
}

pub(crate) fn trace_mesh(
    mesh: &Mesh,
    start: SurfacePoint,
    dir: Vec2,
    max_len: f64,
    tol: &Tolerances,
    stop: &[bool],
) -> Result<Trajectory, DynamicsError> {
    let u = unit(dir)?;
    let mut cur = mesh.cursor_at(start, u, stop, tol.eps_sing)?;
    let starts = mesh.point_copies(start, PASS_REL * mesh.scale);
    let min_close = 1e-6 * mesh.scale;
    let mut segments: Vec<Segment> = Vec::new();
    let mut length = 0.0;
    let mut crossings = 0u64;
    let push = |segments: &mut Vec<Segment>, face: usize, a: Vec2, b: Vec2| {
        if let Some(last) = segments.last_mut() {
            if last.face == face && last.end.dist(a) <= 1e-12 * mesh.scale {
                last.end = b;
                return;
            }
        }
        segments.push(Segment { face, start: a, end: b });
    };
    loop {
        let (step, outcome) = mesh.advance(&mut cur, u, stop, tol.eps_sing, max_len - length);
        let face = mesh.tris[step.tri].face;
        for &(t, x) in &starts {
            if t != step.tri {
                continue;
            }
            let sigma = (x - step.from).dot(u);
            if sigma < -tol.eps_close || sigma > step.len + tol.eps_close || length + sigma < min_close {
                continue;
            }
            if point_segment_distance(x, step.from, step.to) <= tol.eps_close {
                let sigma = sigma.clamp(0.0, step.len);
                push(&mut segments, face, step.from, step.from + u * sigma);
                return Ok(Trajectory {
                    direction: u,
                    segments,
                    length: length + sigma,
                    termination: Termination::Closed,
                    face_crossings: crossings,
                });
            }
        }
        push(&mut segments, face, step.from, step.to);
        length += step.len;
        match outcome {
            Outcome::Crossed(face_edge) => {
                if face_edge {
                    crossings += 1;
                }
            }
            Outcome::Passed => {}
            Outcome::Hit(class) => {
                return Ok(Trajectory {
                    direction: u,
                    segments,
                    length,
                    termination: Termination::SaddleHit { class },
                    face_crossings: crossings,
                })
            }
            Outcome::Exhausted => break,
        }
        if crossings >= tol.max_crossings {
            break;
        }
    }
    Ok(Trajectory {
        direction: u,
        segments,
        length,
        termination: Termination::BudgetExhausted,
        face_crossings: crossings,
    })
}

/// Trace the straight-line flow from `start` in direction `dir` for at most
/// `max_len`. Regular marked points are passed through; cone points stop
/// the trajectory.
pub fn flow_trace(
    s: &TranslationSurface,
    start: SurfacePoint,
    dir: Vec2,
    max_len: f64,
    tol: &Tolerances,
) -> Result<Trajectory, DynamicsError> {
    let mesh = Mesh::new(s);
    let stop = mesh.singular_mask();
    trace_mesh(&mesh, start, dir, max_len, tol, &stop)
}
