//! Direction classification: periodic evidence from a cylinder
//! decomposition, otherwise equidistribution evidence from discrepancy.

use crate::geometry::Vec2;
use crate::surface::TranslationSurface;

use super::cylinders::{decompose, Cylinder};
use super::discrepancy::discrepancy_mesh;
use super::triangulation::Mesh;
use super::{unit, DynamicsError, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOptions {
    /// Length budget for each separatrix in the decomposition attempt.
    pub separatrix_budget: f64,
    /// Face crossings per test orbit.
    pub crossings: u64,
    /// Grid parameter: about `k²` cells.
    pub grid: usize,
    pub orbits: usize,
    pub seed: u64,
    /// Crossing counts at which the discrepancy is sampled; defaults to
    /// a tenth of the budget and the full budget.
    pub checkpoints: Option<Vec<u64>>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            separatrix_budget: 100.0,
            crossings: 100_000,
            grid: 20,
            orbits: 8,
            seed: 0,
            checkpoints: None,
        }
    }
}

impl ClassifyOptions {
    pub fn checkpoints(&self) -> Vec<u64> {
        match &self.checkpoints {
            Some(c) => c.clone(),
            None => vec![(self.crossings / 10).max(1), self.crossings.max(1)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    PeriodicEvidence,
    MinimalEvidence,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::PeriodicEvidence => "periodic-evidence",
            Verdict::MinimalEvidence => "minimal-evidence",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionReport {
    pub direction: Vec2,
    pub verdict: Verdict,
    /// Filled for periodic evidence.
    pub cylinders: Vec<Cylinder>,
    /// (face crossings, discrepancy) pairs, filled when no decomposition was found.
    pub discrepancy: Vec<(u64, f64)>,
    /// Why the decomposition attempt failed, if it did.
    pub note: Option<String>,
}

pub(crate) fn classify_mesh(mesh: &Mesh, dir: Vec2, opts: &ClassifyOptions, tol: &Tolerances) -> Result<DirectionReport, DynamicsError> {
    let u = unit(dir)?;
    let note = match decompose(mesh, u, opts.separatrix_budget, tol) {
        Ok(d) => {
            return Ok(DirectionReport {
                direction: u,
                verdict: Verdict::PeriodicEvidence,
                cylinders: d.result.cylinders,
                discrepancy: Vec::new(),
                note: None,
            })
        }
        Err(e @ (DynamicsError::BudgetExhausted { .. } | DynamicsError::NoDecomposition(_))) => e.to_string(),
        Err(e) => return Err(e),
    };
    let seq = discrepancy_mesh(mesh, u, &opts.checkpoints(), opts.grid, opts.orbits, opts.seed, tol)?;
    let decreasing = seq.len() >= 2 && seq.last().map(|l| l.1) < seq.first().map(|f| f.1);
    Ok(DirectionReport {
        direction: u,
        verdict: if decreasing { Verdict::MinimalEvidence } else { Verdict::Inconclusive },
        cylinders: Vec::new(),
        discrepancy: seq,
        note: Some(note),
    })
}

/// Classify the flow in direction `dir`. Verdicts are evidence only.
pub fn classify_direction(s: &TranslationSurface, dir: Vec2, opts: &ClassifyOptions, tol: &Tolerances) -> Result<DirectionReport, DynamicsError> {
    classify_mesh(&Mesh::new(s), dir, opts, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_directions() {
        let t = TranslationSurface::unit_torus();
        let tol = Tolerances::default();
        let r = classify_direction(&t, Vec2::new(1.0, 0.0), &ClassifyOptions::default(), &tol).unwrap();
        assert_eq!(r.verdict, Verdict::PeriodicEvidence);
        assert_eq!(r.cylinders.len(), 1);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r = classify_direction(&t, Vec2::new(1.0, phi), &ClassifyOptions::default(), &tol).unwrap();
        assert_eq!(r.verdict, Verdict::MinimalEvidence);
        assert!(r.discrepancy.last().unwrap().1 < 0.02, "{:?}", r.discrepancy);
    }
}
