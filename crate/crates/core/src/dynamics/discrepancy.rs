//! Equidistribution statistic for long trajectories.
//!
//! Each triangle of the mesh is cut into `m²` congruent sub-triangles by
//! lines of constant barycentric coordinate, with `m` chosen so that the
//! whole surface has about `k²` cells of roughly equal area. The
//! discrepancy of a set of orbits is the largest gap between the fraction of
//! time spent in a cell and the cell's share of the area.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geometry::Vec2;
use crate::surface::TranslationSurface;

use super::flow::{Cursor, Outcome};
use super::triangulation::Mesh;
use super::{unit, DynamicsError, Tolerances};

#[derive(Debug, Clone)]
pub struct DiscrepancyGrid {
    /// Subdivision order of each triangle.
    order: Vec<usize>,
    /// Start of each triangle's cell block.
    offset: Vec<usize>,
    /// Area share of one cell of each triangle.
    cell_share: Vec<f64>,
    len: usize,
}

impl DiscrepancyGrid {
    pub fn new(mesh: &Mesh, k: usize) -> DiscrepancyGrid {
        let mut order = Vec::with_capacity(mesh.tris.len());
        let mut offset = Vec::with_capacity(mesh.tris.len());
        let mut cell_share = Vec::with_capacity(mesh.tris.len());
        let mut len = 0;
        for t in &mesh.tris {
            let m = ((k as f64) * (t.area / mesh.area).sqrt()).round().max(1.0) as usize;
            order.push(m);
            offset.push(len);
            cell_share.push(t.area / mesh.area / (m * m) as f64);
            len += 2 * m * m;
        }
        DiscrepancyGrid {
            order,
            offset,
            cell_share,
            len,
        }
    }

    pub fn histogram(&self) -> Vec<f64> {
        vec![0.0; self.len]
    }

    pub fn cell_count(&self) -> usize {
        self.order.iter().map(|m| m * m).sum()
    }

    fn cell(&self, tri: usize, lam: [f64; 3]) -> usize {
        let m = self.order[tri];
        let mf = m as f64;
        let idx = lam.map(|l| ((l * mf).floor().max(0.0) as usize).min(m - 1));
        let (mut i0, mut i1) = (idx[0], idx[1]);
        let up = idx[0] + idx[1] + idx[2] >= m - 1;
        let limit = if up { m - 1 } else { m.saturating_sub(2) };
        while i0 + i1 > limit {
            if i0 >= i1 {
                i0 -= 1;
            } else {
                i1 -= 1;
            }
        }
        self.offset[tri] + 2 * (i0 * m + i1) + usize::from(!up)
    }

    /// Add the time spent on the chart segment `a → b` of a triangle.
    pub(crate) fn accumulate(&self, mesh: &Mesh, hist: &mut [f64], tri: usize, a: Vec2, b: Vec2) {
        let len = a.dist(b);
        if len <= 0.0 {
            return;
        }
        let m = self.order[tri];
        let pts = &mesh.tris[tri].pts;
        let bary = |p: Vec2| {
            let d = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
            let l1 = (p - pts[0]).cross(pts[2] - pts[0]) / d;
            let l2 = (pts[1] - pts[0]).cross(p - pts[0]) / d;
            [1.0 - l1 - l2, l1, l2]
        };
        if m == 1 {
            hist[self.offset[tri]] += len;
            return;
        }
        let (la, lb) = (bary(a), bary(b));
        let mut cuts = vec![0.0, 1.0];
        for i in 0..3 {
            let d = lb[i] - la[i];
            if d.abs() < 1e-15 {
                continue;
            }
            for j in 1..m {
                let s = (j as f64 / m as f64 - la[i]) / d;
                if s > 0.0 && s < 1.0 {
                    cuts.push(s);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let piece = w[1] - w[0];
            if piece <= 0.0 {
                continue;
            }
            let mid = (w[0] + w[1]) / 2.0;
            let lam = [0, 1, 2].map(|i| la[i] + (lb[i] - la[i]) * mid);
            hist[self.cell(tri, lam)] += piece * len;
        }
    }

    /// Largest gap between time share and area share over all cells.
    pub fn discrepancy(&self, hist: &[f64]) -> f64 {
        let total: f64 = hist.iter().sum();
        if total <= 0.0 {
            return 1.0;
        }
        let mut worst: f64 = 0.0;
        for (t, &m) in self.order.iter().enumerate() {
            for i0 in 0..m {
                for i1 in 0..m - i0 {
                    let up = self.offset[t] + 2 * (i0 * m + i1);
                    worst = worst.max((hist[up] / total - self.cell_share[t]).abs());
                    if i0 + i1 + 2 <= m {
                        worst = worst.max((hist[up + 1] / total - self.cell_share[t]).abs());
                    }
                }
            }
        }
        worst
    }
}

fn random_point(mesh: &Mesh, rng: &mut ChaCha8Rng) -> (usize, Vec2) {
    let mut r = rng.gen::<f64>() * mesh.area;
    let mut tri = mesh.tris.len() - 1;
    for (i, t) in mesh.tris.iter().enumerate() {
        if r < t.area {
            tri = i;
            break;
        }
        r -= t.area;
    }
    let (mut s, mut t) = (rng.gen::<f64>(), rng.gen::<f64>());
    if s + t > 1.0 {
        (s, t) = (1.0 - s, 1.0 - t);
    }
    let p = &mesh.tris[tri].pts;
    (tri, p[0] + (p[1] - p[0]) * s + (p[2] - p[0]) * t)
}

/// Histogram snapshots of one orbit at the given face-crossing counts.
fn orbit_snapshots(mesh: &Mesh, grid: &DiscrepancyGrid, u: Vec2, checkpoints: &[u64], seed: u64, tol: &Tolerances) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stop = mesh.singular_mask();
    let mut hist = grid.histogram();
    let mut out = Vec::with_capacity(checkpoints.len());
    let (tri, p) = random_point(mesh, &mut rng);
    let mut cur = Cursor { tri, p, corner: None };
    let mut crossings = 0u64;
    let mut next = 0;
    while next < checkpoints.len() {
        let (step, outcome) = mesh.advance(&mut cur, u, &stop, tol.eps_sing, f64::INFINITY);
        grid.accumulate(mesh, &mut hist, step.tri, step.from, step.to);
        match outcome {
            Outcome::Crossed(true) => crossings += 1,
            Outcome::Hit(_) | Outcome::Exhausted => {
                let (tri, p) = random_point(mesh, &mut rng);
                cur = Cursor { tri, p, corner: None };
            }
            _ => {}
        }
        while next < checkpoints.len() && crossings >= checkpoints[next] {
            out.push(hist.clone());
            next += 1;
        }
    }
    out
}

pub(crate) fn discrepancy_mesh(
    mesh: &Mesh,
    dir: Vec2,
    checkpoints: &[u64],
    k: usize,
    orbits: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<(u64, f64)>, DynamicsError> {
    let u = unit(dir)?;
    if checkpoints.windows(2).any(|w| w[0] > w[1]) || k == 0 || orbits == 0 {
        return Err(DynamicsError::InvalidArgument("checkpoints must ascend; grid and orbit counts positive".into()));
    }
    let grid = DiscrepancyGrid::new(mesh, k);
    let runs: Vec<Vec<Vec<f64>>> = (0..orbits)
        .into_par_iter()
        .map(|i| orbit_snapshots(mesh, &grid, u, checkpoints, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64), tol))
        .collect();
    Ok(checkpoints
        .iter()
        .enumerate()
        .map(|(c, &b)| {
            let mut pooled = grid.histogram();
            for run in &runs {
                for (x, y) in pooled.iter_mut().zip(&run[c]) {
                    *x += y;
                }
            }
            (b, grid.discrepancy(&pooled))
        })
        .collect())
}

/// Pooled discrepancy of `orbits` random orbits in direction `dir`, on a
/// grid of about `k²` cells, at each face-crossing checkpoint.
pub fn discrepancy_sequence(
    s: &TranslationSurface,
    dir: Vec2,
    checkpoints: &[u64],
    k: usize,
    orbits: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<(u64, f64)>, DynamicsError> {
    discrepancy_mesh(&Mesh::new(s), dir, checkpoints, k, orbits, seed, tol)
}
