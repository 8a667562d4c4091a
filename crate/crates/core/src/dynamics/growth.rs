//! Counting cylinders by circumference and fitting the growth exponent.

use rayon::prelude::*;

use crate::geometry::Vec2;
use crate::surface::TranslationSurface;

use super::cylinders::decompose;
use super::saddle::saddle_connections_mesh;
use super::triangulation::Mesh;
use super::{DynamicsError, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthSource {
    /// Cylinders of circumference at most T.
    Cylinders,
    /// Saddle connections of length at most T, used when some direction
    /// failed to decompose.
    SaddleConnections,
}

impl GrowthSource {
    pub fn name(self) -> &'static str {
        match self {
            GrowthSource::Cylinders => "cylinders",
            GrowthSource::SaddleConnections => "saddle-connections",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// (T, N(T)) pairs.
    pub table: Vec<(f64, u64)>,
    /// Least-squares slope of log N against log T.
    pub exponent: f64,
    pub source: GrowthSource,
}

/// Least-squares slope of `log y` against `log x` over entries with `y > 0`.
pub fn loglog_slope(points: &[(f64, u64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1 > 0 && p.0 > 0.0)
        .map(|&(x, y)| (x.ln(), (y as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Saddle-connection directions up to sign, one representative each.
pub fn directions_up_to_sign(hol: &[Vec2]) -> Vec<Vec2> {
    let mut dirs: Vec<Vec2> = hol
        .iter()
        .map(|&v| {
            let u = v.normalized();
            if u.y < -1e-15 || (u.y.abs() <= 1e-15 && u.x < 0.0) {
                -u
            } else {
                u
            }
        })
        .collect();
    dirs.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
    let mut out: Vec<Vec2> = Vec::new();
    for d in dirs {
        if out.last().is_none_or(|l: &Vec2| l.cross(d).abs() > 1e-10 || l.dot(d) < 0.0) {
            out.push(d);
        }
    }
    // horizontal leaves both ends of the angle range
    if out.len() > 1 && out[0].cross(out[out.len() - 1]).abs() <= 1e-10 {
        out.pop();
    }
    out
}

/// Count N(T) for each T and fit the growth exponent.
pub fn growth_count(s: &TranslationSurface, t_values: &[f64], tol: &Tolerances) -> Result<GrowthReport, DynamicsError> {
    if t_values.len() < 4 || t_values.iter().any(|t| !(t.is_finite() && *t > 0.0)) || t_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DynamicsError::InvalidArgument("need at least 4 ascending positive T values".into()));
    }
    let mesh = Mesh::new(s);
    let t_max = *t_values.last().unwrap();
    let hol = saddle_connections_mesh(&mesh, t_max, tol);
    let vecs: Vec<Vec2> = hol.iter().map(|h| h.vec()).collect();
    let dirs = directions_up_to_sign(&vecs);
    let budget = 10.0 * t_max;
    let per_dir: Result<Vec<Vec<f64>>, DynamicsError> = dirs
        .par_iter()
        .map(|&d| decompose(&mesh, d, budget, tol).map(|r| r.result.cylinders.iter().map(|c| c.circumference).collect()))
        .collect();
    let (lengths, source) = match per_dir {
        Ok(c) => (c.into_iter().flatten().collect::<Vec<f64>>(), GrowthSource::Cylinders),
        Err(DynamicsError::BudgetExhausted { .. } | DynamicsError::NoDecomposition(_)) => {
            let mut l = Vec::new();
            for h in &hol {
                l.extend(std::iter::repeat_n(h.length(), h.multiplicity as usize));
            }
            (l, GrowthSource::SaddleConnections)
        }
        Err(e) => return Err(e),
    };
    let slack = 1e-9 * t_max;
    let table: Vec<(f64, u64)> = t_values
        .iter()
        .map(|&t| (t, lengths.iter().filter(|&&l| l <= t + slack).count() as u64))
        .collect();
    let exponent = loglog_slope(&table).unwrap_or(f64::NAN);
    Ok(GrowthReport { table, exponent, source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn torus_counts_match_lattice() {
        let t = TranslationSurface::unit_torus();
        let ts = [3.0, 5.0, 8.0, 12.0];
        let r = growth_count(&t, &ts, &Tolerances::default()).unwrap();
        assert_eq!(r.source, GrowthSource::Cylinders);
        for &(t, n) in &r.table {
            let m = t as i64;
            let mut count = 0;
            for x in -m..=m {
                for y in -m..=m {
                    if (x, y) != (0, 0) && x.gcd(&y) == 1 && ((x * x + y * y) as f64) <= t * t {
                        count += 1;
                    }
                }
            }
            // one cylinder per primitive direction up to sign
            assert_eq!(n, count / 2, "T = {t}");
        }
    }

    #[test]
    fn scaling_halves_counts() {
        let t = TranslationSurface::unit_torus();
        let big = t.scaled(2.0);
        let a = growth_count(&t, &[2.0, 3.0, 4.0, 5.0], &Tolerances::default()).unwrap();
        let b = growth_count(&big, &[4.0, 6.0, 8.0, 10.0], &Tolerances::default()).unwrap();
        let na: Vec<u64> = a.table.iter().map(|p| p.1).collect();
        let nb: Vec<u64> = b.table.iter().map(|p| p.1).collect();
        assert_eq!(na, nb);
    }

    #[test]
    fn rejects_short_lists() {
        let t = TranslationSurface::unit_torus();
        assert!(growth_count(&t, &[1.0, 2.0, 3.0], &Tolerances::default()).is_err());
        assert!(growth_count(&t, &[1.0, 3.0, 2.0, 4.0], &Tolerances::default()).is_err());
    }
}
