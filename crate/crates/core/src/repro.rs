//! Reproduction scripts: run the whole pipeline on a family and check each
//! claim with exact expected values.

use std::collections::BTreeSet;
use std::fmt::{Display, Write};

use crate::catalog;
use crate::covers::{branch_point_count, certify_tiling, cover_analysis, q_vertex_images, suitability_screen, CHECK_NAMES};
use crate::garage::{garage_group, GarageError};

pub const SCRIPTS: [&str; 2] = ["thm3", "ward-impossibility"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproOutcome {
    pub script: String,
    pub n: u32,
    pub claims: Vec<Claim>,
}

impl ReproOutcome {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.passed).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "script = {} {}", self.script, self.n);
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{} {}: expected {}, got {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.expected,
                c.actual
            );
        }
        let _ = writeln!(out, "result = {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    fn claim<T: Display + PartialEq>(&mut self, name: &str, expected: T, actual: T) {
        self.claims.push(Claim {
            name: name.into(),
            passed: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    fn fail(&mut self, name: &str, expected: &str, actual: impl Display) {
        self.claims.push(Claim {
            name: name.into(),
            expected: expected.into(),
            actual: actual.to_string(),
            passed: false,
        });
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReproError {
    #[error("unknown script {0:?}; expected one of thm3, ward-impossibility")]
    UnknownScript(String),
    #[error(transparent)]
    Garage(#[from] GarageError),
}

fn set<T: Display>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

/// Run a script. Parameter violations are errors; everything after the
/// garage is built is reported as claims.
pub fn run(script: &str, n: u32) -> Result<ReproOutcome, ReproError> {
    match script {
        "thm3" => thm3(n),
        "ward-impossibility" => ward(n),
        other => Err(ReproError::UnknownScript(other.into())),
    }
}

fn thm3(n: u32) -> Result<ReproOutcome, ReproError> {
    let q = catalog::generate("thm3", Some(n), None)?;
    let p = catalog::generate_base("thm3", Some(n))?;
    let mut out = ReproOutcome {
        script: "thm3".into(),
        n,
        claims: Vec::new(),
    };
    let cert = match certify_tiling(&p, &q) {
        Ok(c) => c,
        Err(e) => {
            out.fail("tiling certificate", "valid", e);
            return Ok(out);
        }
    };
    out.claim("tiles", 4, q.tile_count());
    let r = cover_analysis(&cert);
    out.claim("G_P", format!("D_{n}"), format!("D_{}", r.group_p));
    out.claim("G_Q", format!("D_{n}"), format!("D_{}", garage_group(&q).order_n()));
    out.claim("degree", 4, r.degree);
    // base vertex 1 carries the angle pi/n on the short side: the 2/n vertices of Q
    out.claim("branch set (base vertices)", set([1]), set(&r.branch_set));
    let k3: Vec<_> = r.fibers.iter().filter(|f| f.entries.iter().any(|e| e.k == 3)).collect();
    out.claim("k=3 vertex present", true, !k3.is_empty());
    out.claim("k=3 vertex unbranched", false, k3.iter().any(|f| f.branched_cone));
    for f in &r.fibers {
        out.claim(
            &format!("branch tests agree at base vertex {}", f.base_vertex),
            f.branched_arithmetic,
            f.branched_cone,
        );
    }
    out.claim("branch points on M_P", 1, branch_point_count(&cert).len());
    out.claim("Riemann-Hurwitz", r.chi_q, r.degree as i64 * r.chi_p - r.ramification_total);
    out.claim("N_Q odd", true, garage_group(&q).order_n() % 2 == 1);
    let v = suitability_screen(&cert, catalog::is_lattice_family("veech-isosceles"));
    for (i, name) in CHECK_NAMES.iter().enumerate().skip(1) {
        let c = v.check(name).expect("check present");
        out.claim(&format!("screen {} {name}", i + 1), true, c.passed);
    }
    Ok(out)
}

fn ward(n: u32) -> Result<ReproOutcome, ReproError> {
    let p = catalog::generate_base("ward-stage", Some(n))?;
    let q1 = catalog::generate("ward-stage", Some(n), Some("q1"))?;
    let q2 = catalog::generate("ward-stage", Some(n), Some("q2"))?;
    let mut out = ReproOutcome {
        script: "ward-impossibility".into(),
        n,
        claims: Vec::new(),
    };
    let (c1, c2) = match (certify_tiling(&p, &q1), certify_tiling(&p, &q2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            out.fail("tiling certificates", "valid", e);
            return Ok(out);
        }
    };
    let r1 = cover_analysis(&c1);
    // base vertex 1 is x2, the corner with angle pi/(2n)
    out.claim("Q1 branches over x2", true, r1.branch_set.contains(&1));
    out.claim("Q1 Riemann-Hurwitz", r1.chi_q, r1.degree as i64 * r1.chi_p - r1.ramification_total);

    let r2 = cover_analysis(&c2);
    out.claim("Q2 Riemann-Hurwitz", r2.chi_q, r2.degree as i64 * r2.chi_p - r2.ramification_total);
    let doubled: Vec<usize> = c2
        .q
        .vertex_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.base_vertex == 0 && c.boundary && c.k == 2)
        .map(|(i, _)| i)
        .collect();
    out.claim("Q2 boundary x1 vertices with k=2", 2, doubled.len());
    if doubled.len() == 2 {
        let images: Vec<BTreeSet<usize>> = doubled.iter().map(|&v| q_vertex_images(&c2, v)).collect();
        out.claim("u lies over one M_P point", 1, images[0].len());
        out.claim("v lies over one M_P point", 1, images[1].len());
        out.claim("c1 != c2", true, images[0] != images[1]);
        let branched = branch_point_count(&c2);
        let both = images.iter().all(|s| s.iter().all(|pt| branched.contains_key(pt)));
        out.claim("c1 and c2 are branch points", true, both);
    }
    let v = suitability_screen(&c2, true);
    out.claim("Q2 single-branch-point screen", false, v.check("single-branch-point").expect("check present").passed);
    Ok(out)
}
