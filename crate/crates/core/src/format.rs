//! Line-oriented garage file format.
//!
//! ```text
//! # comment
//! family thm3 9            # catalog form; stage follows n for ward-stage
//! ```
//! or
//! ```text
//! base
//! v 0 0
//! v 1 0
//! v 0 1
//! angle 0 1/2
//! angle 1 1/4
//! angle 2 1/4
//! tile 0 word
//! tile 1 word 0
//! glue 0.0 1.0
//! ```

use std::fmt::Write as _;

use crate::exact::Angle;
use crate::garage::{EdgeSlot, Garage, GarageError, GarageSpec};
use crate::geometry::Vec2;

fn perr(line: usize, msg: impl Into<String>) -> GarageError {
    GarageError::Parse { line, msg: msg.into() }
}

fn parse_slot(tok: &str, line: usize) -> Result<EdgeSlot, GarageError> {
    let (t, e) = tok
        .split_once('.')
        .ok_or_else(|| perr(line, format!("expected tile.edge, got {tok:?}")))?;
    let tile = t.parse().map_err(|_| perr(line, format!("bad tile index {t:?}")))?;
    let edge = e.parse().map_err(|_| perr(line, format!("bad edge index {e:?}")))?;
    Ok(EdgeSlot { tile, edge })
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64, GarageError> {
    let tok = tok.ok_or_else(|| perr(line, "missing coordinate"))?;
    let x: f64 = tok.parse().map_err(|_| perr(line, format!("bad number {tok:?}")))?;
    if !x.is_finite() {
        return Err(perr(line, format!("non-finite coordinate {tok:?}")));
    }
    Ok(x)
}

/// Parse a garage file into a specification. Validation is separate.
pub fn parse_garage_spec(text: &str) -> Result<GarageSpec, GarageError> {
    let mut family: Option<GarageSpec> = None;
    let mut explicit = false;
    let mut vertices = Vec::new();
    let mut angles = Vec::new();
    let mut tiles = Vec::new();
    let mut gluings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let kw = toks.next().unwrap_or_default();
        if kw == "family" {
            if family.is_some() || explicit {
                return Err(perr(line, "family line must be the only garage description"));
            }
            let name = toks.next().ok_or_else(|| perr(line, "family needs a name"))?.to_string();
            let n = match toks.next() {
                Some(t) => Some(t.parse::<u32>().map_err(|_| perr(line, format!("bad parameter {t:?}")))?),
                None => None,
            };
            let stage = toks.next().map(str::to_string);
            if let Some(extra) = toks.next() {
                return Err(perr(line, format!("unexpected token {extra:?}")));
            }
            family = Some(GarageSpec::Family { name, n, stage });
            continue;
        }
        if family.is_some() {
            return Err(perr(line, "explicit data after a family line"));
        }
        explicit = true;
        match kw {
            "base" => {}
            "v" => {
                let x = parse_f64(toks.next(), line)?;
                let y = parse_f64(toks.next(), line)?;
                vertices.push(Vec2::new(x, y));
            }
            "angle" => {
                let i: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr(line, "angle needs a vertex index"))?;
                let a: Angle = toks
                    .next()
                    .ok_or_else(|| perr(line, "angle needs num/den"))?
                    .parse()
                    .map_err(|e: crate::exact::ExactError| perr(line, e.to_string()))?;
                angles.push((i, a));
            }
            "tile" => {
                let id: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr(line, "tile needs an id"))?;
                if toks.next() != Some("word") {
                    return Err(perr(line, "expected `tile <id> word e1 e2 ...`"));
                }
                let word = toks
                    .map(|t| t.parse::<usize>().map_err(|_| perr(line, format!("bad edge index {t:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                tiles.push((id, word));
                continue;
            }
            "glue" => {
                let a = parse_slot(toks.next().ok_or_else(|| perr(line, "glue needs two slots"))?, line)?;
                let b = parse_slot(toks.next().ok_or_else(|| perr(line, "glue needs two slots"))?, line)?;
                gluings.push((a, b));
            }
            other => return Err(perr(line, format!("unknown keyword {other:?}"))),
        }
        if let Some(extra) = toks.next() {
            return Err(perr(line, format!("unexpected token {extra:?}")));
        }
    }
    if let Some(f) = family {
        return Ok(f);
    }
    if vertices.is_empty() {
        return Err(perr(0, "no garage description found"));
    }
    if tiles.is_empty() {
        tiles.push((0, Vec::new()));
    }
    Ok(GarageSpec::Explicit {
        vertices,
        angles,
        tiles,
        gluings,
    })
}

/// Parse and validate.
pub fn read_garage(text: &str) -> Result<Garage, GarageError> {
    crate::garage::validate_garage(&parse_garage_spec(text)?)
}

/// Explicit serialization of a validated garage.
pub fn write_garage(g: &Garage) -> String {
    let mut out = String::new();
    if let Some(f) = g.family() {
        let _ = write!(out, "# family {} {}", f.name, f.n);
        if let Some(s) = &f.stage {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
    }
    out.push_str("base\n");
    for v in g.base().vertices() {
        let _ = writeln!(out, "v {:.17e} {:.17e}", v.x, v.y);
    }
    for (i, a) in g.base().angles().iter().enumerate() {
        let _ = writeln!(out, "angle {i} {a}");
    }
    for (i, t) in g.tiles().iter().enumerate() {
        let _ = write!(out, "tile {i} word");
        for e in &t.word {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    for gl in g.gluings() {
        let _ = writeln!(out, "glue {}.{} {}.{}", gl.a.tile, gl.a.edge, gl.b.tile, gl.b.edge);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::garage::boundary_angles;

    #[test]
    fn family_line() {
        let spec = parse_garage_spec("# hi\nfamily ward-stage 5 q1\n").unwrap();
        assert_eq!(
            spec,
            GarageSpec::Family {
                name: "ward-stage".into(),
                n: Some(5),
                stage: Some("q1".into())
            }
        );
        let g = read_garage("family thm3 9").unwrap();
        assert_eq!(g.tile_count(), 4);
    }

    #[test]
    fn explicit_square() {
        let text = "base\nv 0 0\nv 1 0\nv 1 1\nv 0 1\nangle 0 1/2\nangle 1 2/4\nangle 2 1/2\nangle 3 1/2\ntile 0 word\n";
        let g = read_garage(text).unwrap();
        assert_eq!(g.tile_count(), 1);
        assert_eq!(boundary_angles(&g).len(), 4);
    }

    #[test]
    fn errors_are_located() {
        let err = parse_garage_spec("base\nv 0 0\nv 1 zero\n").unwrap_err();
        assert!(matches!(err, GarageError::Parse { line: 3, .. }), "{err}");
        let err = parse_garage_spec("family square\nv 0 0\n").unwrap_err();
        assert!(matches!(err, GarageError::Parse { line: 2, .. }));
        let err = parse_garage_spec("glue 0 1.1\n").unwrap_err();
        assert!(matches!(err, GarageError::Parse { line: 1, .. }));
    }

    #[test]
    fn round_trip_is_isomorphic() {
        for (name, n, st) in catalog::instances(11) {
            let g = catalog::generate(&name, n, st.as_deref()).unwrap();
            let h = read_garage(&write_garage(&g)).unwrap();
            assert_eq!(g.tiles(), h.tiles());
            assert_eq!(g.gluings(), h.gluings());
            assert_eq!(g.base().angles(), h.base().angles());
            for (a, b) in g.base().vertices().iter().zip(h.base().vertices()) {
                assert_eq!(a, b, "coordinates survive exactly");
            }
            let ga: Vec<_> = boundary_angles(&g).iter().map(|b| (b.angle, b.k)).collect();
            let gb: Vec<_> = boundary_angles(&h).iter().map(|b| (b.angle, b.k)).collect();
            assert_eq!(ga, gb);
        }
    }
}
