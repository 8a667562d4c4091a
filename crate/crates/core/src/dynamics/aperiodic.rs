//! Height-split heuristic for aperiodic points.
//!
//! In a periodic direction a point sits at some height inside its cylinder.
//! If the ratio of that height to the cylinder height is irrational, the
//! point is not periodic under the affine symmetries fixing that direction.
//! This is evidence only: rationality is judged from a floating-point
//! continued fraction.

use crate::geometry::Vec2;
use crate::surface::TranslationSurface;

use super::cylinders::decompose;
use super::triangulation::{Mesh, SurfacePoint};
use super::{unit, DynamicsError, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Class(usize),
    Point(SurfacePoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RationalityVerdict {
    /// A partial quotient exceeded the cap (or the expansion ended) at this convergent.
    AppearsRational { num: u64, den: u64 },
    AppearsIrrational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeightSplitReport {
    pub direction: Vec2,
    /// Distance from the point down to the lower cylinder boundary.
    pub height_below: f64,
    pub height: f64,
    pub ratio: f64,
    pub verdict: RationalityVerdict,
    pub partial_quotients: Vec<u64>,
}

/// Continued-fraction rationality heuristic on `x ∈ [0, 1)`.
pub fn continued_fraction_verdict(x: f64, depth: usize, cap: f64) -> (RationalityVerdict, Vec<u64>) {
    let mut quotients = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut y = x;
    for _ in 0..=depth {
        let a = y.floor();
        if a > cap {
            return (RationalityVerdict::AppearsRational { num: p1, den: q1 }, quotients);
        }
        let ai = a as u64;
        quotients.push(ai);
        let (p2, q2) = (ai.saturating_mul(p1).saturating_add(p0), ai.saturating_mul(q1).saturating_add(q0));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a;
        if frac <= 1e-15 {
            return (RationalityVerdict::AppearsRational { num: p1, den: q1 }, quotients);
        }
        y = 1.0 / frac;
    }
    (RationalityVerdict::AppearsIrrational, quotients)
}

/// Locate a point inside its cylinder in direction `dir` and judge the
/// rationality of its relative height. Labelled heuristic.
pub fn aperiodicity_evidence(
    s: &TranslationSurface,
    at: Location,
    dir: Vec2,
    budget: f64,
    depth: usize,
    cap: f64,
    tol: &Tolerances,
) -> Result<HeightSplitReport, DynamicsError> {
    let mesh = Mesh::new(s);
    let u = unit(dir)?;
    let d = decompose(&mesh, u, budget, tol).map_err(|e| match e {
        DynamicsError::BudgetExhausted { .. } | DynamicsError::NoDecomposition(_) => {
            DynamicsError::NoDecomposition(format!("no cylinder decomposition in direction ({}, {}): {e}", u.x, u.y))
        }
        other => other,
    })?;
    let stop = mesh.source_mask();
    let n = u.perp();
    let cursor = |v: Vec2| match at {
        Location::Class(c) => {
            if stop[c] {
                Err(DynamicsError::PointOnBoundary)
            } else {
                Ok(mesh.cursor_at_vertex(c, v))
            }
        }
        Location::Point(p) => mesh.cursor_at(p, v, &stop, tol.eps_sing).map_err(|_| DynamicsError::PointOnBoundary),
    };
    let (up, _) = d
        .walls
        .shoot(&mesh, cursor(n)?, n, &stop, tol, budget)
        .ok_or_else(|| DynamicsError::NoDecomposition("upward shot found no boundary".into()))?;
    let (down, _) = d
        .walls
        .shoot(&mesh, cursor(-n)?, -n, &stop, tol, budget)
        .ok_or_else(|| DynamicsError::NoDecomposition("downward shot found no boundary".into()))?;
    let floor = 1e-9 * mesh.scale;
    if up <= floor || down <= floor {
        return Err(DynamicsError::PointOnBoundary);
    }
    let height = up + down;
    let ratio = down / height;
    let (verdict, partial_quotients) = continued_fraction_verdict(ratio, depth, cap);
    Ok(HeightSplitReport {
        direction: u,
        height_below: down,
        height,
        ratio,
        verdict,
        partial_quotients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert!(matches!(
            continued_fraction_verdict(0.5, 40, 1e6).0,
            RationalityVerdict::AppearsRational { num: 1, den: 2 }
        ));
        assert!(matches!(
            continued_fraction_verdict(3.0 / 7.0, 40, 1e6).0,
            RationalityVerdict::AppearsRational { num: 3, den: 7 }
        ));
        assert_eq!(continued_fraction_verdict(2f64.sqrt() / 2.0, 40, 1e6).0, RationalityVerdict::AppearsIrrational);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let (v, q) = continued_fraction_verdict(golden, 40, 1e6);
        assert_eq!(v, RationalityVerdict::AppearsIrrational);
        assert!(q[1..10].iter().all(|&a| a == 1));
    }

    #[test]
    fn torus_heights() {
        let t = TranslationSurface::unit_torus();
        let at = |y: f64| {
            Location::Point(SurfacePoint {
                face: 0,
                pos: Vec2::new(0.3, y),
            })
        };
        let tol = Tolerances::default();
        let r = aperiodicity_evidence(&t, at(0.5), Vec2::new(1.0, 0.0), 10.0, 40, 1e6, &tol).unwrap();
        assert!((r.ratio - 0.5).abs() < 1e-12);
        assert!(matches!(r.verdict, RationalityVerdict::AppearsRational { .. }));
        let r = aperiodicity_evidence(&t, at(2f64.sqrt() / 2.0), Vec2::new(1.0, 0.0), 10.0, 40, 1e6, &tol).unwrap();
        assert!((r.ratio - 2f64.sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(r.verdict, RationalityVerdict::AppearsIrrational);
        let err = aperiodicity_evidence(&t, at(0.3), Vec2::new(1.0, 2f64.sqrt()), 10.0, 40, 1e6, &tol).unwrap_err();
        assert!(matches!(err, DynamicsError::NoDecomposition(_)));
    }
}
