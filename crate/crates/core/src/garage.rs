//! Rational polygons and parking garages as reflection-tiling complexes.
//!
//! A [`Garage`] is a base polygon `P` together with tiles, each the image of
//! `P` under a word of edge reflections, and gluings between tile edges.
//! Coordinates of tiles are derived from the words; every combinatorial
//! question (gluing legality, vertex multiplicities, the reflection group)
//! is answered with exact arithmetic.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::exact::{generated_subgroup, group_from_angles, Angle, DihedralElement, DihedralGroup, ExactError};
use crate::geometry::{self, interior_angles, mat_mul, rotation, signed_area2, transpose, Mat2, Vec2};

/// Default angle tolerance in radians.
pub const EPS_ANGLE: f64 = 1e-9;
/// Default length tolerance in plane units.
pub const EPS_LEN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GarageError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("base polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("base polygon must be listed counter-clockwise")]
    NotCounterClockwise,
    #[error("base polygon is not simple")]
    NotSimple,
    #[error("base polygon is degenerate at vertex {0} (collinear neighbours)")]
    Degenerate(usize),
    #[error("vertex {vertex}: no declared angle")]
    MissingAngle { vertex: usize },
    #[error("vertex {vertex}: measured angle {measured:.12} rad does not match declared {declared} (π units)")]
    NonRationalAngle { vertex: usize, measured: f64, declared: Angle },
    #[error("declared angles sum to {sum}π, expected {expected}π")]
    AngleSum { sum: Ratio<i64>, expected: i64 },
    #[error("tile {tile}: edge index {edge} out of range")]
    InvalidEdgeIndex { tile: usize, edge: usize },
    #[error("tile ids must be 0..{count} without gaps, got {id}")]
    InvalidTileId { id: usize, count: usize },
    #[error("gluing {a_tile}.{a_edge} ~ {b_tile}.{b_edge}: edge lengths {len_a} and {len_b} differ")]
    EdgeLengthMismatch {
        a_tile: usize,
        a_edge: usize,
        b_tile: usize,
        b_edge: usize,
        len_a: f64,
        len_b: f64,
    },
    #[error("gluing {a_tile}.{a_edge} ~ {b_tile}.{b_edge}: {reason}")]
    GluingMismatch {
        a_tile: usize,
        a_edge: usize,
        b_tile: usize,
        b_edge: usize,
        reason: String,
    },
    #[error("tile complex is disconnected ({components} components)")]
    DisconnectedComplex { components: usize },
    #[error("complex is not a surface with boundary: {0}")]
    NonManifold(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("parameter constraint violated for {family}: {constraint}")]
    ParameterConstraintViolated { family: String, constraint: String },
}

/// The base polygon `P` with exact vertex angles.
#[derive(Debug, Clone)]
pub struct BasePolygon {
    vertices: Vec<Vec2>,
    angles: Vec<Angle>,
    group: DihedralGroup,
    /// Edge `i` lies on a line at angle `frame + edge_line[i]·π/N`.
    edge_line: Vec<u32>,
    frame: f64,
}

impl BasePolygon {
    pub fn new(vertices: Vec<Vec2>, angles: Vec<Angle>) -> Result<Self, GarageError> {
        let m = vertices.len();
        if m < 3 {
            return Err(GarageError::TooFewVertices(m));
        }
        if angles.len() != m {
            return Err(GarageError::MissingAngle { vertex: angles.len().min(m) });
        }
        if signed_area2(&vertices) <= 0.0 {
            return Err(GarageError::NotCounterClockwise);
        }
        let measured = interior_angles(&vertices);
        for (i, &t) in measured.iter().enumerate() {
            if (t - std::f64::consts::PI).abs() < EPS_ANGLE {
                return Err(GarageError::Degenerate(i));
            }
        }
        if !geometry::is_simple_polygon(&vertices, EPS_LEN) {
            return Err(GarageError::NotSimple);
        }
        for (i, (&t, &a)) in measured.iter().zip(&angles).enumerate() {
            if (t - a.radians()).abs() > EPS_ANGLE {
                return Err(GarageError::NonRationalAngle {
                    vertex: i,
                    measured: t,
                    declared: a,
                });
            }
        }
        let sum: Ratio<i64> = angles.iter().map(|a| a.ratio()).sum();
        if sum != Ratio::from_integer(m as i64 - 2) {
            return Err(GarageError::AngleSum {
                sum,
                expected: m as i64 - 2,
            });
        }
        let group = group_from_angles(&angles)?;
        let n = group.order_n() as i64;
        // line of edge i+1 = line of edge i turned by π - α_{i+1}, i.e. -α_{i+1} mod π
        let mut edge_line = vec![0u32; m];
        for i in 0..m - 1 {
            let a = angles[i + 1].ratio() * n;
            debug_assert!(a.is_integer());
            edge_line[i + 1] = (edge_line[i] as i64 - a.to_integer()).rem_euclid(n) as u32;
        }
        let frame = (vertices[1] - vertices[0]).angle();
        Ok(BasePolygon {
            vertices,
            angles,
            group,
            edge_line,
            frame,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `G_P = D_N`.
    pub fn group(&self) -> DihedralGroup {
        self.group
    }

    pub fn edge(&self, e: usize) -> (Vec2, Vec2) {
        (self.vertices[e], self.vertices[(e + 1) % self.len()])
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let (a, b) = self.edge(e);
        a.dist(b)
    }

    /// Endpoints of edge `e` as vertex indices.
    pub fn edge_vertices(&self, e: usize) -> (usize, usize) {
        (e, (e + 1) % self.len())
    }

    /// Linear part of the reflection in edge `e`.
    pub fn edge_reflection(&self, e: usize) -> DihedralElement {
        DihedralElement::new(self.group.order_n(), self.edge_line[e] as i64, true)
    }

    /// Matrix of a group element in plane coordinates.
    pub fn world_matrix(&self, g: DihedralElement) -> Mat2 {
        let r = rotation(self.frame);
        mat_mul(&mat_mul(&r, &g.matrix()), &transpose(&r))
    }

    pub fn area(&self) -> f64 {
        geometry::polygon_area(&self.vertices)
    }
}

/// An image of the base polygon: `x ↦ M(linear)·x + translation`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub word: Vec<usize>,
    pub linear: DihedralElement,
    pub translation: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSlot {
    pub tile: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub a: EdgeSlot,
    pub b: EdgeSlot,
}

/// A class of identified tile corners.
#[derive(Debug, Clone)]
pub struct GarageVertex {
    pub base_vertex: usize,
    /// `(tile, base vertex)` pairs.
    pub corners: Vec<(usize, usize)>,
    /// Multiplicity relative to the base vertex angle.
    pub k: u64,
    pub angle: Angle,
    pub boundary: bool,
}

/// One boundary vertex as reported by [`boundary_angles`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryVertex {
    pub class: usize,
    pub angle: Angle,
    pub k: u64,
    pub base_vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTag {
    pub name: String,
    pub n: u32,
    pub stage: Option<String>,
}

/// File-level description of a garage, before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum GarageSpec {
    Family {
        name: String,
        n: Option<u32>,
        stage: Option<String>,
    },
    Explicit {
        vertices: Vec<Vec2>,
        angles: Vec<(usize, Angle)>,
        tiles: Vec<(usize, Vec<usize>)>,
        gluings: Vec<(EdgeSlot, EdgeSlot)>,
    },
}

#[derive(Debug, Clone)]
pub struct Garage {
    base: BasePolygon,
    tiles: Vec<Tile>,
    gluings: Vec<Gluing>,
    partner: Vec<Vec<Option<EdgeSlot>>>,
    corner_class: Vec<Vec<usize>>,
    vertices: Vec<GarageVertex>,
    boundary_cycles: Vec<Vec<usize>>,
    subgroup: Vec<DihedralElement>,
    family: Option<FamilyTag>,
}

impl Garage {
    pub fn base(&self) -> &BasePolygon {
        &self.base
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    /// `ℓ`, the number of tiles.
    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn partner(&self, tile: usize, edge: usize) -> Option<EdgeSlot> {
        self.partner[tile][edge]
    }

    pub fn corner_class(&self, tile: usize, vertex: usize) -> usize {
        self.corner_class[tile][vertex]
    }

    pub fn vertex_classes(&self) -> &[GarageVertex] {
        &self.vertices
    }

    /// Boundary vertex classes, one list per boundary component, in walking order.
    pub fn boundary_cycles(&self) -> &[Vec<usize>] {
        &self.boundary_cycles
    }

    pub fn family(&self) -> Option<&FamilyTag> {
        self.family.as_ref()
    }

    pub fn set_family(&mut self, tag: FamilyTag) {
        self.family = Some(tag);
    }

    /// `G_Q` as a subgroup of `G_P`, sorted.
    pub fn reflection_subgroup(&self) -> &[DihedralElement] {
        &self.subgroup
    }

    pub fn tile_matrix(&self, t: usize) -> Mat2 {
        self.base.world_matrix(self.tiles[t].linear)
    }

    /// Plane coordinates of the tile's copy of each base vertex.
    pub fn tile_vertices(&self, t: usize) -> Vec<Vec2> {
        let m = self.tile_matrix(t);
        let tr = self.tiles[t].translation;
        self.base
            .vertices()
            .iter()
            .map(|&v| Vec2::apply(&m, v) + tr)
            .collect()
    }

    /// Reflection in the boundary edge `(tile, edge)`: `g_t ρ_e g_t⁻¹`.
    pub fn boundary_reflection(&self, tile: usize, edge: usize) -> DihedralElement {
        let g = self.tiles[tile].linear;
        g * self.base.edge_reflection(edge) * g.inverse()
    }

    pub fn external_edges(&self) -> impl Iterator<Item = EdgeSlot> + '_ {
        (0..self.tiles.len()).flat_map(move |t| {
            (0..self.base.len()).filter_map(move |e| self.partner[t][e].is_none().then_some(EdgeSlot { tile: t, edge: e }))
        })
    }

    pub fn area(&self) -> f64 {
        self.base.area() * self.tiles.len() as f64
    }

    /// Whether the immersion is an embedding, i.e. the garage is a polygon.
    pub fn is_embedded(&self) -> bool {
        if self.boundary_cycles.len() != 1 || self.vertices.iter().any(|v| !v.boundary) {
            return false;
        }
        let pts: Vec<Vec2> = self.boundary_cycles[0]
            .iter()
            .map(|&c| {
                let (t, v) = self.vertices[c].corners[0];
                self.tile_vertices(t)[v]
            })
            .collect();
        if !geometry::is_simple_polygon(&pts, EPS_LEN) {
            return false;
        }
        let scale = self.area().max(1.0);
        (geometry::polygon_area(&pts) - self.area()).abs() < 1e-9 * scale
    }
}

/// Validate a garage specification, resolving families through the catalog.
pub fn validate_garage(spec: &GarageSpec) -> Result<Garage, GarageError> {
    match spec {
        GarageSpec::Family { name, n, stage } => crate::catalog::generate(name, *n, stage.as_deref()),
        GarageSpec::Explicit {
            vertices,
            angles,
            tiles,
            gluings,
        } => {
            let mut by_vertex: BTreeMap<usize, Angle> = BTreeMap::new();
            for &(i, a) in angles {
                by_vertex.insert(i, a);
            }
            let mut ordered = Vec::with_capacity(vertices.len());
            for i in 0..vertices.len() {
                ordered.push(*by_vertex.get(&i).ok_or(GarageError::MissingAngle { vertex: i })?);
            }
            let base = BasePolygon::new(vertices.clone(), ordered)?;
            let mut words = vec![None; tiles.len()];
            for (id, word) in tiles {
                if *id >= tiles.len() || words[*id].is_some() {
                    return Err(GarageError::InvalidTileId { id: *id, count: tiles.len() });
                }
                words[*id] = Some(word.clone());
            }
            let words: Vec<Vec<usize>> = words.into_iter().map(|w| w.unwrap_or_default()).collect();
            let gl: Vec<Gluing> = gluings.iter().map(|&(a, b)| Gluing { a, b }).collect();
            build_garage(base, &words, &gl)
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Assemble and validate a garage from reflection words and gluings.
pub fn build_garage(base: BasePolygon, words: &[Vec<usize>], gluings: &[Gluing]) -> Result<Garage, GarageError> {
    let m = base.len();
    if words.is_empty() {
        return Err(GarageError::DisconnectedComplex { components: 0 });
    }
    let group = base.group();
    let mut tiles = Vec::with_capacity(words.len());
    for (t, word) in words.iter().enumerate() {
        let mut linear = group.identity();
        let mut translation = Vec2::ZERO;
        for &e in word {
            if e >= m {
                return Err(GarageError::InvalidEdgeIndex { tile: t, edge: e });
            }
            // T ∘ σ_e with σ_e(x) = R_e x + (p_e - R_e p_e)
            let p = base.vertices()[e];
            let r = base.world_matrix(base.edge_reflection(e));
            let shift = p - Vec2::apply(&r, p);
            translation = Vec2::apply(&base.world_matrix(linear), shift) + translation;
            linear = linear * base.edge_reflection(e);
        }
        tiles.push(Tile {
            word: word.clone(),
            linear,
            translation,
        });
    }
    let mut g = Garage {
        base,
        tiles,
        gluings: gluings.to_vec(),
        partner: vec![vec![None; m]; words.len()],
        corner_class: Vec::new(),
        vertices: Vec::new(),
        boundary_cycles: Vec::new(),
        subgroup: Vec::new(),
        family: None,
    };
    g.check_gluings()?;
    g.check_connected()?;
    g.build_vertex_classes()?;
    g.build_boundary_cycles()?;
    let gens: Vec<DihedralElement> = g.external_edges().map(|s| g.boundary_reflection(s.tile, s.edge)).collect();
    g.subgroup = generated_subgroup(&group, &gens);
    Ok(g)
}

impl Garage {
    fn check_gluings(&mut self) -> Result<(), GarageError> {
        let m = self.base.len();
        let n_tiles = self.tiles.len();
        for gl in self.gluings.clone() {
            let (a, b) = (gl.a, gl.b);
            for s in [a, b] {
                if s.tile >= n_tiles {
                    return Err(GarageError::InvalidTileId { id: s.tile, count: n_tiles });
                }
                if s.edge >= m {
                    return Err(GarageError::InvalidEdgeIndex { tile: s.tile, edge: s.edge });
                }
            }
            let mismatch = |reason: String| GarageError::GluingMismatch {
                a_tile: a.tile,
                a_edge: a.edge,
                b_tile: b.tile,
                b_edge: b.edge,
                reason,
            };
            if a == b {
                return Err(mismatch("edge glued to itself".into()));
            }
            let (la, lb) = (self.base.edge_length(a.edge), self.base.edge_length(b.edge));
            if (la - lb).abs() > EPS_LEN {
                return Err(GarageError::EdgeLengthMismatch {
                    a_tile: a.tile,
                    a_edge: a.edge,
                    b_tile: b.tile,
                    b_edge: b.edge,
                    len_a: la,
                    len_b: lb,
                });
            }
            if a.edge != b.edge {
                return Err(mismatch(format!(
                    "tiles must share the same base edge, got {} and {}",
                    a.edge, b.edge
                )));
            }
            let ga = self.tiles[a.tile].linear;
            let gb = self.tiles[b.tile].linear;
            let witness = ga.inverse() * gb;
            let rho = self.base.edge_reflection(a.edge);
            if witness != rho {
                return Err(mismatch(format!(
                    "g_a⁻¹·g_b = {witness} is not the reflection {rho} in edge {}",
                    a.edge
                )));
            }
            let (va, wa) = self.base.edge_vertices(a.edge);
            let pa = self.tile_vertices(a.tile);
            let pb = self.tile_vertices(b.tile);
            if pa[va].dist(pb[va]) > EPS_LEN || pa[wa].dist(pb[wa]) > EPS_LEN {
                return Err(mismatch("tile edges do not coincide in the plane".into()));
            }
            for s in [a, b] {
                if self.partner[s.tile][s.edge].is_some() {
                    return Err(GarageError::NonManifold(format!("edge {}.{} glued twice", s.tile, s.edge)));
                }
            }
            self.partner[a.tile][a.edge] = Some(b);
            self.partner[b.tile][b.edge] = Some(a);
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), GarageError> {
        let n = self.tiles.len();
        let mut parent: Vec<usize> = (0..n).collect();
        for gl in &self.gluings {
            union(&mut parent, gl.a.tile, gl.b.tile);
        }
        let components = (0..n).filter(|&i| find(&mut parent, i) == i).count();
        if components != 1 {
            return Err(GarageError::DisconnectedComplex { components });
        }
        Ok(())
    }

    fn build_vertex_classes(&mut self) -> Result<(), GarageError> {
        let m = self.base.len();
        let n = self.tiles.len();
        let id = |t: usize, v: usize| t * m + v;
        let mut parent: Vec<usize> = (0..n * m).collect();
        for gl in &self.gluings {
            let (v0, v1) = self.base.edge_vertices(gl.a.edge);
            union(&mut parent, id(gl.a.tile, v0), id(gl.b.tile, v0));
            union(&mut parent, id(gl.a.tile, v1), id(gl.b.tile, v1));
        }
        let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut corner_class = vec![vec![0; m]; n];
        let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
        for t in 0..n {
            for v in 0..m {
                let r = find(&mut parent, id(t, v));
                let c = *class_of_root.entry(r).or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                corner_class[t][v] = c;
                classes[c].push((t, v));
            }
        }
        let mut external_count = vec![0usize; classes.len()];
        for t in 0..n {
            for e in 0..m {
                if self.partner[t][e].is_none() {
                    let (v0, v1) = self.base.edge_vertices(e);
                    external_count[corner_class[t][v0]] += 1;
                    external_count[corner_class[t][v1]] += 1;
                }
            }
        }
        let mut vertices = Vec::with_capacity(classes.len());
        for (c, corners) in classes.into_iter().enumerate() {
            let base_vertex = corners[0].1;
            let k = corners.len() as u64;
            let angle = self.base.angles()[base_vertex].times(k);
            let boundary = match external_count[c] {
                0 => false,
                2 => true,
                x => {
                    return Err(GarageError::NonManifold(format!(
                        "vertex class {c} meets {x} boundary edges"
                    )))
                }
            };
            if !boundary && angle.ratio() != Ratio::from_integer(2) {
                return Err(GarageError::NonManifold(format!(
                    "interior vertex class {c} has total angle {angle}π, not 2π"
                )));
            }
            vertices.push(GarageVertex {
                base_vertex,
                corners,
                k,
                angle,
                boundary,
            });
        }
        self.corner_class = corner_class;
        self.vertices = vertices;
        Ok(())
    }

    fn build_boundary_cycles(&mut self) -> Result<(), GarageError> {
        let ext: Vec<EdgeSlot> = self.external_edges().collect();
        let mut at_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let ends = |s: &EdgeSlot| {
            let (v0, v1) = self.base.edge_vertices(s.edge);
            (self.corner_class[s.tile][v0], self.corner_class[s.tile][v1])
        };
        for (i, s) in ext.iter().enumerate() {
            let (c0, c1) = ends(s);
            at_class.entry(c0).or_default().push(i);
            at_class.entry(c1).or_default().push(i);
        }
        let mut used = vec![false; ext.len()];
        let mut cycles = Vec::new();
        for start in 0..ext.len() {
            if used[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let (first_class, mut cur_class) = ends(&ext[start]);
            let mut cur_edge = start;
            used[start] = true;
            cycle.push(first_class);
            while cur_class != first_class {
                cycle.push(cur_class);
                let next = at_class[&cur_class]
                    .iter()
                    .copied()
                    .find(|&e| e != cur_edge && !used[e])
                    .ok_or_else(|| GarageError::NonManifold(format!("boundary walk stuck at vertex class {cur_class}")))?;
                used[next] = true;
                let (c0, c1) = ends(&ext[next]);
                cur_class = if c0 == cur_class { c1 } else { c0 };
                cur_edge = next;
            }
            cycles.push(cycle);
        }
        self.boundary_cycles = cycles;
        Ok(())
    }
}

/// Boundary vertex classes in walking order with their exact angles.
pub fn boundary_angles(g: &Garage) -> Vec<BoundaryVertex> {
    g.boundary_cycles()
        .iter()
        .flatten()
        .map(|&c| {
            let v = &g.vertex_classes()[c];
            BoundaryVertex {
                class: c,
                angle: v.angle,
                k: v.k,
                base_vertex: v.base_vertex,
            }
        })
        .collect()
}

/// `G_Q`, the group generated by the reflections in the boundary edges.
pub fn garage_group(g: &Garage) -> DihedralGroup {
    DihedralGroup::new((g.reflection_subgroup().len() / 2) as u32).expect("subgroup contains the identity")
}

/// `D_N` with `N` the lcm of the reduced boundary-angle denominators.
pub fn garage_group_from_angles(g: &Garage) -> DihedralGroup {
    let angles: Vec<Angle> = boundary_angles(g).iter().map(|b| b.angle).collect();
    if angles.is_empty() {
        return DihedralGroup::new(1).expect("positive");
    }
    group_from_angles(&angles).expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn angle(n: i64, d: i64) -> Angle {
        Angle::new(n, d).unwrap()
    }

    fn unit_square() -> BasePolygon {
        BasePolygon::new(
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)],
            vec![angle(1, 2); 4],
        )
        .unwrap()
    }

    #[test]
    fn square_is_a_one_tile_garage() {
        let g = build_garage(unit_square(), &[vec![]], &[]).unwrap();
        assert_eq!(g.tile_count(), 1);
        let b = boundary_angles(&g);
        assert_eq!(b.len(), 4);
        assert!(b.iter().all(|v| v.angle == angle(1, 2) && v.k == 1));
        assert_eq!(garage_group(&g).order_n(), 2);
        assert!(g.is_embedded());
    }

    #[test]
    fn edge_reflections_match_geometry() {
        let p = catalog::ward_triangle(5).unwrap();
        for e in 0..3 {
            let (a, b) = p.edge(e);
            let dir = (b - a).normalized();
            let m = p.world_matrix(p.edge_reflection(e));
            let img = Vec2::apply(&m, dir);
            assert!(img.dist(dir) < 1e-12, "edge {e} direction is fixed by its reflection");
            let nrm = dir.perp();
            assert!(Vec2::apply(&m, nrm).dist(-nrm) < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_angles_and_orientation() {
        let pts = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let err = BasePolygon::new(pts.clone(), vec![angle(1, 2), angle(1, 3), angle(1, 6)]).unwrap_err();
        assert!(matches!(err, GarageError::NonRationalAngle { vertex: 1, .. }));
        let mut cw = pts.clone();
        cw.reverse();
        assert_eq!(
            BasePolygon::new(cw, vec![angle(1, 4), angle(1, 4), angle(1, 2)]).unwrap_err(),
            GarageError::NotCounterClockwise
        );
        let collinear = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(matches!(
            BasePolygon::new(collinear, vec![angle(1, 4), angle(1, 1), angle(1, 4), angle(1, 2)]),
            Err(GarageError::Degenerate(1))
        ));
    }

    #[test]
    fn different_edge_lengths_cannot_be_glued() {
        // right triangle with legs 1 and 2: edges 0 and 2 have different lengths
        let theta = (0.5f64).atan();
        let _ = theta;
        let p = catalog::triangle_from_angles([angle(1, 2), angle(1, 6), angle(1, 3)]);
        let err = build_garage(
            p,
            &[vec![], vec![0]],
            &[Gluing {
                a: EdgeSlot { tile: 0, edge: 1 },
                b: EdgeSlot { tile: 1, edge: 0 },
            }],
        )
        .unwrap_err();
        assert!(matches!(err, GarageError::EdgeLengthMismatch { .. }), "{err}");
    }

    #[test]
    fn reflection_condition_is_checked_exactly() {
        let p = catalog::triangle_from_angles([angle(1, 3); 3]);
        // tile 1 is the reflection in edge 0 but is glued along edge 1
        let err = build_garage(
            p.clone(),
            &[vec![], vec![0]],
            &[Gluing {
                a: EdgeSlot { tile: 0, edge: 1 },
                b: EdgeSlot { tile: 1, edge: 1 },
            }],
        )
        .unwrap_err();
        assert!(matches!(err, GarageError::GluingMismatch { .. }), "{err}");
        let err = build_garage(p, &[vec![], vec![0]], &[]).unwrap_err();
        assert_eq!(err, GarageError::DisconnectedComplex { components: 2 });
    }

    #[test]
    fn thm3_boundary_in_cyclic_order() {
        let g = catalog::generate("thm3", Some(9), None).unwrap();
        assert_eq!(g.tile_count(), 4);
        let seq: Vec<String> = boundary_angles(&g).iter().map(|b| b.angle.to_string()).collect();
        let expected: Vec<String> = ["1/9", "2/9", "1/3", "7/9", "2/9", "7/3"].iter().map(|s| s.to_string()).collect();
        assert!(
            cyclic_match(&seq, &expected),
            "boundary {seq:?} is not a rotation/reflection of {expected:?}"
        );
        assert!(!g.is_embedded());
        assert_eq!(garage_group(&g).order_n(), 9);
        assert_eq!(garage_group_from_angles(&g).order_n(), 9);
    }

    #[test]
    fn thm3_multiplicities() {
        let g = catalog::generate("thm3", Some(9), None).unwrap();
        let mut small: Vec<u64> = Vec::new();
        let mut apex: Vec<u64> = Vec::new();
        for b in boundary_angles(&g) {
            if b.base_vertex == 2 {
                apex.push(b.k);
            } else {
                small.push(b.k);
            }
        }
        small.sort();
        apex.sort();
        assert_eq!(small, vec![1, 2, 2, 3]);
        assert_eq!(apex, vec![1, 3]);
    }

    #[test]
    fn ward_stage_angles() {
        let q0 = catalog::generate("ward-stage", Some(5), Some("q0")).unwrap();
        let x3: Vec<_> = boundary_angles(&q0).into_iter().filter(|b| b.base_vertex == 2).collect();
        assert_eq!(x3.len(), 1);
        assert_eq!(x3[0].k, 2);
        assert_eq!(x3[0].angle, angle(7, 5));
        let q1 = catalog::generate("ward-stage", Some(5), Some("q1")).unwrap();
        assert_eq!(q1.tile_count(), 4);
        assert_eq!(garage_group(&q1).order_n(), 5);
        assert_eq!(garage_group_from_angles(&q1).order_n(), 5);
        assert!(q0.is_embedded() && q1.is_embedded());
    }

    fn cyclic_match(a: &[String], b: &[String]) -> bool {
        let n = a.len();
        if n != b.len() {
            return false;
        }
        let mut rev = a.to_vec();
        rev.reverse();
        (0..n).any(|s| (0..n).all(|i| a[(i + s) % n] == b[i]) || (0..n).all(|i| rev[(i + s) % n] == b[i]))
    }
}
