//! Built-in garage families.
//!
//! | name              | base angles (vertex order)         | tiles |
//! |-------------------|------------------------------------|-------|
//! | `square`          | 1/2, 1/2, 1/2, 1/2                 | 1     |
//! | `rectangle n`     | 1×n rectangle                      | 1     |
//! | `veech-isosceles n` | 1/n, 1/n, (n−2)/n                | 1     |
//! | `veech-right n`   | 1/2, 1/n, (n−2)/(2n)               | 1     |
//! | `ward n`          | 1/n, 1/(2n), (2n−3)/(2n)           | 1     |
//! | `thm3 n`          | veech-isosceles(n) base            | 4     |
//! | `ward-stage n q0\|q1\|q2` | ward(n) base               | 2/4/6 |
//!
//! Vertices are named `x1, x2, x3` in the order above; edge `i` joins vertex
//! `i` to vertex `i+1`. Triangles are scaled to unit shortest edge.

use crate::exact::Angle;
use crate::garage::{build_garage, BasePolygon, EdgeSlot, FamilyTag, Garage, GarageError, Gluing};
use crate::geometry::Vec2;

pub const FAMILY_NAMES: [&str; 7] = [
    "square",
    "rectangle",
    "veech-isosceles",
    "veech-right",
    "ward",
    "thm3",
    "ward-stage",
];

pub const WARD_STAGES: [&str; 3] = ["q0", "q1", "q2"];

/// Families whose unfoldings are known lattice surfaces. This is a curated
/// list, not a computation.
pub fn is_lattice_family(name: &str) -> bool {
    matches!(name, "square" | "rectangle" | "veech-isosceles" | "veech-right" | "ward")
}

/// Whether a family takes a stage argument.
pub fn has_stages(name: &str) -> bool {
    name == "ward-stage"
}

/// The single-tile family whose base polygon the given family is tiled by.
pub fn base_family(name: &str) -> &str {
    match name {
        "thm3" => "veech-isosceles",
        "ward-stage" => "ward",
        other => other,
    }
}

fn angle(num: i64, den: i64) -> Angle {
    Angle::new(num, den).expect("catalog angles are positive")
}

/// Triangle with the given angles, vertex 0 at the origin, edge 0 along the
/// positive x-axis, scaled to unit shortest edge.
pub fn triangle_from_angles(angles: [Angle; 3]) -> BasePolygon {
    let s = angles.map(|a| a.radians().sin());
    // side opposite vertex i is proportional to sin(α_i)
    let shortest = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let len01 = s[2] / shortest;
    let len02 = s[1] / shortest;
    let a0 = angles[0].radians();
    let verts = vec![Vec2::ZERO, Vec2::new(len01, 0.0), Vec2::from_angle(a0) * len02];
    BasePolygon::new(verts, angles.to_vec()).expect("catalog triangle is valid")
}

fn rectangle(w: f64) -> BasePolygon {
    let verts = vec![Vec2::ZERO, Vec2::new(w, 0.0), Vec2::new(w, 1.0), Vec2::new(0.0, 1.0)];
    BasePolygon::new(verts, vec![angle(1, 2); 4]).expect("rectangle is valid")
}

fn violated(family: &str, constraint: &str) -> GarageError {
    GarageError::ParameterConstraintViolated {
        family: family.to_string(),
        constraint: constraint.to_string(),
    }
}

pub fn veech_isosceles(n: u32) -> Result<BasePolygon, GarageError> {
    if n < 3 {
        return Err(violated("veech-isosceles", "n must be at least 3"));
    }
    let n = n as i64;
    Ok(triangle_from_angles([angle(1, n), angle(1, n), angle(n - 2, n)]))
}

pub fn veech_right(n: u32) -> Result<BasePolygon, GarageError> {
    if n < 3 {
        return Err(violated("veech-right", "n must be at least 3"));
    }
    let n = n as i64;
    Ok(triangle_from_angles([angle(1, 2), angle(1, n), angle(n - 2, 2 * n)]))
}

pub fn ward_triangle(n: u32) -> Result<BasePolygon, GarageError> {
    if n < 3 {
        return Err(violated("ward", "n must be at least 3"));
    }
    let n = n as i64;
    Ok(triangle_from_angles([angle(1, n), angle(1, 2 * n), angle(2 * n - 3, 2 * n)]))
}

fn glue(a: (usize, usize), b: (usize, usize)) -> Gluing {
    Gluing {
        a: EdgeSlot { tile: a.0, edge: a.1 },
        b: EdgeSlot { tile: b.0, edge: b.1 },
    }
}

/// Tile words and gluings of the four-tile garage over the isosceles triangle:
/// `Y` (identity) with `X` across edge 1 and `Z` across edge 2, and `W` the
/// reflection of `Z` across its edge 0.
pub fn thm3_tiling() -> (Vec<Vec<usize>>, Vec<Gluing>) {
    let words = vec![vec![], vec![1], vec![2], vec![2, 0]];
    let gluings = vec![glue((0, 1), (1, 1)), glue((0, 2), (2, 2)), glue((2, 0), (3, 0))];
    (words, gluings)
}

/// Tile words and gluings of the Ward construction stages.
pub fn ward_stage_tiling(stage: &str) -> Option<(Vec<Vec<usize>>, Vec<Gluing>)> {
    let mut words: Vec<Vec<usize>> = vec![vec![], vec![1]];
    let mut gluings = vec![glue((0, 1), (1, 1))];
    let depth = WARD_STAGES.iter().position(|s| *s == stage)?;
    if depth >= 1 {
        words.extend([vec![0], vec![0, 1]]);
        gluings.extend([glue((0, 0), (2, 0)), glue((2, 1), (3, 1))]);
    }
    if depth >= 2 {
        words.extend([vec![1, 0], vec![1, 0, 1]]);
        gluings.extend([glue((1, 0), (4, 0)), glue((4, 1), (5, 1))]);
    }
    Some((words, gluings))
}

/// Build a catalog garage.
pub fn generate(name: &str, n: Option<u32>, stage: Option<&str>) -> Result<Garage, GarageError> {
    let need_n = || n.ok_or_else(|| violated(name, "parameter n is required"));
    if stage.is_some() && !has_stages(name) {
        return Err(violated(name, "family takes no stage"));
    }
    let mut g = match name {
        "square" => build_garage(rectangle(1.0), &[vec![]], &[])?,
        "rectangle" => {
            let w = need_n()?;
            if w == 0 {
                return Err(violated(name, "n must be at least 1"));
            }
            build_garage(rectangle(w as f64), &[vec![]], &[])?
        }
        "veech-isosceles" => build_garage(veech_isosceles(need_n()?)?, &[vec![]], &[])?,
        "veech-right" => build_garage(veech_right(need_n()?)?, &[vec![]], &[])?,
        "ward" => build_garage(ward_triangle(need_n()?)?, &[vec![]], &[])?,
        "thm3" => {
            let n = need_n()?;
            if n % 2 == 0 || n % 3 != 0 {
                return Err(violated(name, "n must be odd and divisible by 3"));
            }
            if n < 9 {
                return Err(violated(name, "n must be at least 9"));
            }
            let (words, gluings) = thm3_tiling();
            build_garage(veech_isosceles(n)?, &words, &gluings)?
        }
        "ward-stage" => {
            let n = need_n()?;
            if n < 5 {
                return Err(violated(name, "n must be at least 5"));
            }
            let st = stage.ok_or_else(|| violated(name, "stage q0, q1 or q2 is required"))?;
            let (words, gluings) = ward_stage_tiling(st).ok_or_else(|| violated(name, "stage must be q0, q1 or q2"))?;
            build_garage(ward_triangle(n)?, &words, &gluings)?
        }
        other => return Err(GarageError::UnknownFamily(other.to_string())),
    };
    g.set_family(FamilyTag {
        name: name.to_string(),
        n: n.unwrap_or(1),
        stage: stage.map(str::to_string),
    });
    Ok(g)
}

/// The base polygon of a family as a one-tile garage.
pub fn generate_base(name: &str, n: Option<u32>) -> Result<Garage, GarageError> {
    let base = base_family(name);
    // thm3 and ward-stage constraints are on the tiled garage, not its base
    generate(base, n, None)
}

/// Every catalog instance with parameter at most `max_n`, as `(name, n, stage)`.
pub fn instances(max_n: u32) -> Vec<(String, Option<u32>, Option<String>)> {
    let mut out = vec![("square".to_string(), None, None)];
    for w in 1..=3.min(max_n) {
        out.push(("rectangle".into(), Some(w), None));
    }
    for n in 3..=max_n {
        for fam in ["veech-isosceles", "veech-right", "ward"] {
            out.push((fam.into(), Some(n), None));
        }
        if n >= 9 && n % 2 == 1 && n % 3 == 0 {
            out.push(("thm3".into(), Some(n), None));
        }
        if n >= 5 {
            for st in WARD_STAGES {
                out.push(("ward-stage".into(), Some(n), Some(st.into())));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garage::{boundary_angles, garage_group, garage_group_from_angles};

    #[test]
    fn shortest_edge_is_unit() {
        for n in 3..12 {
            for p in [veech_isosceles(n).unwrap(), veech_right(n).unwrap(), ward_triangle(n).unwrap()] {
                let shortest = (0..3).map(|e| p.edge_length(e)).fold(f64::INFINITY, f64::min);
                assert!((shortest - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn thm3_constraint_message() {
        let err = generate("thm3", Some(8), None).unwrap_err();
        assert!(err.to_string().contains("n must be odd and divisible by 3"));
        assert!(generate("thm3", Some(3), None).is_err());
        assert!(generate("thm3", Some(15), None).is_ok());
    }

    #[test]
    fn boundary_angles_match_geometry() {
        // accumulate the float corner angles of each class and compare with k·α
        for (name, n, st) in instances(15) {
            let g = generate(&name, n, st.as_deref()).unwrap();
            let measured = crate::geometry::interior_angles(g.base().vertices());
            for b in boundary_angles(&g) {
                let total: f64 = g.vertex_classes()[b.class].corners.iter().map(|&(_, v)| measured[v]).sum();
                assert!((total - b.angle.radians()).abs() < 1e-9, "{name} {n:?} {st:?}");
            }
        }
    }

    #[test]
    fn subgroup_divides_base_group() {
        for (name, n, st) in instances(15) {
            let g = generate(&name, n, st.as_deref()).unwrap();
            let nq = garage_group(&g).order_n();
            assert_eq!(nq, garage_group_from_angles(&g).order_n(), "{name} {n:?} {st:?}");
            assert_eq!(g.base().group().order_n() % nq, 0);
        }
    }

    #[test]
    fn veech_isosceles_five() {
        let g = generate("veech-isosceles", Some(5), None).unwrap();
        let a: Vec<String> = g.base().angles().iter().map(|a| a.to_string()).collect();
        assert_eq!(a, ["1/5", "1/5", "3/5"]);
    }
}
