//! Stable `key = value` text reports.
//!
//! Keys are sorted; list entries carry zero-padded indices so that the
//! order of lines never depends on hashing or thread scheduling.

use std::collections::BTreeMap;
use std::fmt::{Display, Write};

use crate::covers::{CoverReport, Overall, SuitabilityVerdict};
use crate::dynamics::{
    BilliardTermination, BilliardTrajectory, Decomposition, DirectionReport, GrowthReport, HeightSplitReport, HolonomyVector,
    RationalityVerdict, Termination, Trajectory,
};
use crate::garage::Garage;
use crate::surface::TranslationSurface;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: BTreeMap<String, String>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.entries.insert(key.into(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Copy all entries of `other` under `prefix.`.
    pub fn merge(&mut self, prefix: &str, other: &Report) -> &mut Self {
        for (k, v) in &other.entries {
            self.entries.insert(format!("{prefix}.{k}"), v.clone());
        }
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

fn idx(i: usize) -> String {
    format!("{i:04}")
}

fn num(x: f64) -> String {
    format!("{x:.12}")
}

fn list<T: Display>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(","))
}

pub fn garage_report(g: &Garage) -> Report {
    let mut r = Report::new();
    let base = g.base();
    r.set("base.angles", list(base.angles()));
    r.set("base.vertices", base.len());
    r.set("base.area", num(base.area()));
    r.set("tiles", g.tile_count());
    r.set("gluings", g.gluings().len());
    r.set("embedded", g.is_embedded());
    r.set("group", format!("D_{}", crate::garage::garage_group(g).order_n()));
    if let Some(f) = g.family() {
        r.set("family", &f.name);
        r.set("family.n", f.n);
        if let Some(s) = &f.stage {
            r.set("family.stage", s);
        }
    }
    for (i, v) in g.vertex_classes().iter().enumerate() {
        let key = format!("vertex.{}", idx(i));
        r.set(format!("{key}.base_vertex"), v.base_vertex);
        r.set(format!("{key}.angle"), v.angle);
        r.set(format!("{key}.k"), v.k);
        r.set(format!("{key}.boundary"), v.boundary);
    }
    r
}

pub fn surface_report(s: &TranslationSurface) -> Report {
    let mut r = Report::new();
    r.set("faces", s.face_count());
    r.set("edges", s.edge_count());
    r.set("vertices", s.classes().len());
    r.set("euler_characteristic", s.euler_characteristic());
    r.set("genus", s.genus());
    r.set("area", num(s.area()));
    r.set("gauss_bonnet", s.gauss_bonnet_holds());
    let sing = s.singularities();
    r.set("singularities", sing.len());
    for (i, x) in sing.iter().enumerate() {
        let key = format!("singularity.{}", idx(i));
        r.set(format!("{key}.class"), x.class);
        r.set(format!("{key}.cone_angle"), format!("{}pi", 2 * x.multiplicity));
        if let Some(b) = s.classes()[x.class].base_vertex {
            r.set(format!("{key}.base_vertex"), b);
        }
    }
    r
}

pub fn cover_report(c: &CoverReport) -> Report {
    let mut r = Report::new();
    r.set("degree", c.degree);
    r.set("index", c.index);
    r.set("tiles", c.tile_count);
    r.set("group_p", format!("D_{}", c.group_p));
    r.set("group_q", format!("D_{}", c.group_q));
    r.set("branch_set", list(&c.branch_set));
    r.set("chi_p", c.chi_p);
    r.set("chi_q", c.chi_q);
    r.set("ramification_total", c.ramification_total);
    r.set("riemann_hurwitz", c.rh_consistent);
    for f in &c.fibers {
        let key = format!("fiber.{}", idx(f.base_vertex));
        r.set(format!("{key}.angle"), f.angle);
        r.set(format!("{key}.k"), list(f.entries.iter().map(|e| e.k)));
        r.set(format!("{key}.ramification"), list(f.entries.iter().map(|e| e.ramification)));
        r.set(format!("{key}.branched_arithmetic"), f.branched_arithmetic);
        r.set(format!("{key}.branched_cone"), f.branched_cone);
    }
    let branched: Vec<_> = c.point_fibers.iter().filter(|p| p.is_branched()).collect();
    r.set("branch_points", branched.len());
    for p in branched {
        let key = format!("branch_point.{}", idx(p.p_point));
        if let Some(b) = p.base_vertex {
            r.set(format!("{key}.base_vertex"), b);
        }
        r.set(format!("{key}.ramification"), list(p.preimages.iter().map(|x| x.1)));
    }
    r
}

pub fn verdict_report(v: &SuitabilityVerdict) -> Report {
    let mut r = Report::new();
    for (i, c) in v.checks.iter().enumerate() {
        let key = format!("check.{}.{}", i + 1, c.name);
        r.set(format!("{key}.passed"), c.passed);
        r.set(format!("{key}.evidence"), &c.evidence);
    }
    match &v.overall {
        Overall::SuitableCandidate(note) => r.set("overall", "suitable-candidate").set("overall.note", note),
        Overall::Rejected(why) => r.set("overall", "rejected").set("overall.failed", why),
    };
    r
}

pub fn trajectory_report(t: &Trajectory) -> Report {
    let mut r = Report::new();
    r.set("direction", format!("{},{}", num(t.direction.x), num(t.direction.y)));
    r.set("length", num(t.length));
    r.set("segments", t.segments.len());
    r.set("face_crossings", t.face_crossings);
    r.set(
        "termination",
        match t.termination {
            Termination::BudgetExhausted => "budget".to_string(),
            Termination::Closed => "closed".to_string(),
            Termination::SaddleHit { class } => format!("saddle-hit class {class}"),
        },
    );
    if let Some(last) = t.segments.last() {
        r.set("end.face", last.face);
        r.set("end.point", format!("{},{}", num(last.end.x), num(last.end.y)));
    }
    r
}

pub fn billiard_report(t: &BilliardTrajectory) -> Report {
    let mut r = Report::new();
    r.set("length", num(t.length));
    r.set("bounces", t.bounces);
    r.set(
        "termination",
        match t.termination {
            BilliardTermination::BounceBudget => "bounce-budget".to_string(),
            BilliardTermination::LengthBudget => "length-budget".to_string(),
            BilliardTermination::Corner { tile, point } => format!("corner tile {tile} at {},{}", num(point.x), num(point.y)),
        },
    );
    if let Some(p) = t.points.last() {
        r.set("end.point", format!("{},{}", num(p.x), num(p.y)));
    }
    r
}

pub fn decomposition_report(d: &Decomposition) -> Report {
    let mut r = Report::new();
    r.set("direction", format!("{},{}", num(d.direction.x), num(d.direction.y)));
    r.set("cylinders", d.cylinders.len());
    r.set("area.total", num(d.total_area()));
    r.set("area.surface", num(d.surface_area));
    for (i, c) in d.cylinders.iter().enumerate() {
        let key = format!("cylinder.{}", idx(i));
        r.set(format!("{key}.circumference"), num(c.circumference));
        r.set(format!("{key}.height"), num(c.height));
        r.set(format!("{key}.modulus"), num(c.height / c.circumference));
    }
    r
}

pub fn direction_report(d: &DirectionReport) -> Report {
    let mut r = Report::new();
    r.set("direction", format!("{},{}", num(d.direction.x), num(d.direction.y)));
    r.set("verdict", d.verdict);
    r.set("cylinders", d.cylinders.len());
    for (i, c) in d.cylinders.iter().enumerate() {
        let key = format!("cylinder.{}", idx(i));
        r.set(format!("{key}.circumference"), num(c.circumference));
        r.set(format!("{key}.height"), num(c.height));
    }
    for (b, x) in &d.discrepancy {
        r.set(format!("discrepancy.{b:012}"), num(*x));
    }
    if let Some(n) = &d.note {
        r.set("note", n);
    }
    r
}

pub fn saddle_report(h: &[HolonomyVector], max_len: f64) -> Report {
    let mut r = Report::new();
    r.set("max_length", num(max_len));
    r.set("holonomies", h.len());
    r.set("saddle_connections", h.iter().map(|v| v.multiplicity as u64).sum::<u64>());
    for (i, v) in h.iter().enumerate() {
        r.set(
            format!("holonomy.{}", idx(i)),
            format!("{},{} x{}", num(v.dx), num(v.dy), v.multiplicity),
        );
    }
    r
}

pub fn growth_report(g: &GrowthReport) -> Report {
    let mut r = Report::new();
    r.set("source", g.source.name());
    r.set("exponent", format!("{:.6}", g.exponent));
    for (i, (t, n)) in g.table.iter().enumerate() {
        r.set(format!("count.{}", idx(i)), format!("T={} N={n}", num(*t)));
    }
    r
}

pub fn height_split_report(h: &HeightSplitReport) -> Report {
    let mut r = Report::new();
    r.set("heuristic", true);
    r.set("height", num(h.height));
    r.set("height_below", num(h.height_below));
    r.set("ratio", num(h.ratio));
    r.set(
        "verdict",
        match h.verdict {
            RationalityVerdict::AppearsRational { num, den } => format!("appears-rational {num}/{den}"),
            RationalityVerdict::AppearsIrrational => "appears-irrational".into(),
        },
    );
    r.set("partial_quotients", list(&h.partial_quotients));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_stable() {
        let mut r = Report::new();
        r.set("b", 2).set("a", 1).set("c.0001", "x");
        assert_eq!(r.render(), "a = 1\nb = 2\nc.0001 = x\n");
        let s = surface_report(&TranslationSurface::unit_torus());
        assert_eq!(s.get("genus"), Some("1"));
        assert_eq!(s.render(), surface_report(&TranslationSurface::unit_torus()).render());
    }
}
