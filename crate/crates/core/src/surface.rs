//! Translation surfaces and the unfolding of a garage.
//!
//! A [`TranslationSurface`] is a list of planar faces, each in its own chart,
//! with an involution pairing oriented face edges. Paired edges are parallel,
//! of equal length and opposite orientation, so the gluing is a translation.
//! Vertex classes carry exact cone angles.

use std::collections::HashMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::exact::{Angle, DihedralElement};
use crate::garage::{Garage, EPS_LEN};
use crate::geometry::{self, Vec2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("vertex class {0} out of range")]
    IndexError(usize),
    #[error("edge {face}.{edge} is not paired")]
    Unpaired { face: usize, edge: usize },
    #[error("pairing is not an involution at {face}.{edge}")]
    NotInvolution { face: usize, edge: usize },
    #[error("paired edges {face}.{edge} do not match by translation")]
    HolonomyMismatch { face: usize, edge: usize },
    #[error("vertex class {class} has total angle {angle}π, not a multiple of 2π")]
    NonIntegerCone { class: usize, angle: Ratio<i64> },
    #[error("Euler characteristic {0} gives a non-integer genus")]
    NonIntegerGenus(i64),
    #[error("face {face} has {angles} angles for {vertices} vertices")]
    FaceShape { face: usize, angles: usize, vertices: usize },
}

/// Where an unfolded face comes from: copy `h ∈ G_Q` of tile `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceOrigin {
    pub copy: DihedralElement,
    pub tile: usize,
    /// Linear part `h·g_t` taking the base polygon to this face.
    pub element: DihedralElement,
    /// Base vertex at each face vertex.
    pub base_vertex: Vec<usize>,
    /// Base edge at each face edge.
    pub base_edge: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    /// Counter-clockwise chart coordinates.
    pub vertices: Vec<Vec2>,
    /// Exact interior angle at each vertex.
    pub angles: Vec<Angle>,
    pub origin: Option<FaceOrigin>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, j: usize) -> (Vec2, Vec2) {
        (self.vertices[j], self.vertices[(j + 1) % self.len()])
    }

    pub fn area(&self) -> f64 {
        geometry::polygon_area(&self.vertices)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub face: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexClass {
    /// `(face, vertex)` corners, sorted.
    pub corners: Vec<(usize, usize)>,
    /// Cone angle as a multiple of 2π.
    pub cone: u64,
    /// Garage vertex class this point lies over, for unfolded surfaces.
    pub garage_vertex: Option<usize>,
    pub base_vertex: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Singularity {
    pub class: usize,
    /// Cone angle is `2π·multiplicity`.
    pub multiplicity: u64,
}

#[derive(Debug, Clone)]
pub struct TranslationSurface {
    faces: Vec<Face>,
    pairing: Vec<Vec<EdgeRef>>,
    corner_class: Vec<Vec<usize>>,
    classes: Vec<VertexClass>,
    edge_count: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl TranslationSurface {
    /// Assemble a surface from faces and an edge pairing, checking the
    /// translation structure and computing vertex classes.
    pub fn new(faces: Vec<Face>, pairing: Vec<Vec<EdgeRef>>) -> Result<Self, SurfaceError> {
        for (f, face) in faces.iter().enumerate() {
            if face.angles.len() != face.vertices.len() {
                return Err(SurfaceError::FaceShape {
                    face: f,
                    angles: face.angles.len(),
                    vertices: face.vertices.len(),
                });
            }
        }
        let scale = faces
            .iter()
            .flat_map(|f| f.vertices.iter())
            .map(|v| v.norm())
            .fold(1.0, f64::max);
        let mut edge_count = 0;
        for (f, face) in faces.iter().enumerate() {
            if pairing.get(f).map(Vec::len) != Some(face.len()) {
                return Err(SurfaceError::Unpaired { face: f, edge: 0 });
            }
            for j in 0..face.len() {
                let p = pairing[f][j];
                if p.face >= faces.len() || p.edge >= faces[p.face].len() {
                    return Err(SurfaceError::Unpaired { face: f, edge: j });
                }
                if pairing[p.face][p.edge] != (EdgeRef { face: f, edge: j }) || p == (EdgeRef { face: f, edge: j }) {
                    return Err(SurfaceError::NotInvolution { face: f, edge: j });
                }
                let (a, b) = face.edge(j);
                let (c, d) = faces[p.face].edge(p.edge);
                if ((b - a) + (d - c)).norm() > EPS_LEN * scale {
                    return Err(SurfaceError::HolonomyMismatch { face: f, edge: j });
                }
                edge_count += 1;
            }
        }
        edge_count /= 2;

        let offsets: Vec<usize> = faces
            .iter()
            .scan(0, |acc, f| {
                let o = *acc;
                *acc += f.len();
                Some(o)
            })
            .collect();
        let total: usize = faces.iter().map(Face::len).sum();
        let mut parent: Vec<usize> = (0..total).collect();
        let id = |f: usize, j: usize| offsets[f] + j;
        for (f, face) in faces.iter().enumerate() {
            let n = face.len();
            for j in 0..n {
                let p = pairing[f][j];
                let m = faces[p.face].len();
                // edge j runs v_j → v_{j+1}; its partner runs the other way
                for (x, y) in [(id(f, j), id(p.face, (p.edge + 1) % m)), (id(f, (j + 1) % n), id(p.face, p.edge))] {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    if rx != ry {
                        parent[rx.max(ry)] = rx.min(ry);
                    }
                }
            }
        }
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut corner_class: Vec<Vec<usize>> = faces.iter().map(|f| vec![0; f.len()]).collect();
        let mut corners: Vec<Vec<(usize, usize)>> = Vec::new();
        for (f, face) in faces.iter().enumerate() {
            for j in 0..face.len() {
                let r = find(&mut parent, id(f, j));
                let c = *class_of_root.entry(r).or_insert_with(|| {
                    corners.push(Vec::new());
                    corners.len() - 1
                });
                corner_class[f][j] = c;
                corners[c].push((f, j));
            }
        }
        let mut classes = Vec::with_capacity(corners.len());
        for (c, cs) in corners.into_iter().enumerate() {
            let angle: Ratio<i64> = cs.iter().map(|&(f, j)| faces[f].angles[j].ratio()).sum();
            let half = angle / 2;
            if !half.is_integer() {
                return Err(SurfaceError::NonIntegerCone { class: c, angle });
            }
            let (f0, j0) = cs[0];
            let base_vertex = faces[f0].origin.as_ref().map(|o| o.base_vertex[j0]);
            classes.push(VertexClass {
                corners: cs,
                cone: half.to_integer() as u64,
                garage_vertex: None,
                base_vertex,
            });
        }
        let s = TranslationSurface {
            faces,
            pairing,
            corner_class,
            classes,
            edge_count,
        };
        let chi = s.euler_characteristic();
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(SurfaceError::NonIntegerGenus(chi));
        }
        Ok(s)
    }

    /// A single polygon whose parallel sides are glued: a unit square gives
    /// the flat torus with one marked point.
    pub fn unit_torus() -> Self {
        let sq = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        let half = Angle::new(1, 2).expect("valid");
        let face = Face {
            vertices: sq,
            angles: vec![half; 4],
            origin: None,
        };
        let e = |edge| EdgeRef { face: 0, edge };
        TranslationSurface::new(vec![face], vec![vec![e(2), e(3), e(0), e(1)]]).expect("torus is valid")
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn pair(&self, face: usize, edge: usize) -> EdgeRef {
        self.pairing[face][edge]
    }

    /// Vector added to chart coordinates when crossing `face.edge` into its partner.
    pub fn crossing_offset(&self, face: usize, edge: usize) -> Vec2 {
        let p = self.pairing[face][edge];
        let f = &self.faces[face];
        let g = &self.faces[p.face];
        g.vertices[p.edge] - f.vertices[(edge + 1) % f.len()]
    }

    pub fn edge_holonomy(&self, face: usize, edge: usize) -> Vec2 {
        let (a, b) = self.faces[face].edge(edge);
        b - a
    }

    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn corner_class(&self, face: usize, vertex: usize) -> usize {
        self.corner_class[face][vertex]
    }

    /// Cone angle of a vertex class as a multiple of 2π.
    pub fn cone_angle(&self, class: usize) -> Result<u64, SurfaceError> {
        self.classes.get(class).map(|c| c.cone).ok_or(SurfaceError::IndexError(class))
    }

    pub fn is_singular(&self, class: usize) -> bool {
        self.classes[class].cone >= 2
    }

    /// Vertex classes with cone angle above 2π, by multiplicity then id.
    pub fn singularities(&self) -> Vec<Singularity> {
        let mut out: Vec<Singularity> = self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.cone >= 2)
            .map(|(i, c)| Singularity {
                class: i,
                multiplicity: c.cone,
            })
            .collect();
        out.sort_by_key(|s| (s.multiplicity, s.class));
        out
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.classes.len() as i64 - self.edge_count as i64 + self.faces.len() as i64
    }

    pub fn genus(&self) -> u64 {
        ((2 - self.euler_characteristic()) / 2) as u64
    }

    /// `Σ (k − 1) = −χ` over all classes, i.e. Gauss–Bonnet in units of 2π.
    pub fn gauss_bonnet_holds(&self) -> bool {
        let defect: i64 = self.classes.iter().map(|c| c.cone as i64 - 1).sum();
        defect == -self.euler_characteristic()
    }

    pub fn area(&self) -> f64 {
        self.faces.iter().map(Face::area).sum()
    }

    /// Chart coordinates of a corner.
    pub fn corner_position(&self, face: usize, vertex: usize) -> Vec2 {
        self.faces[face].vertices[vertex]
    }

    /// The same surface with every chart scaled by `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for f in &mut out.faces {
            for v in &mut f.vertices {
                *v = *v * s;
            }
        }
        out
    }

    /// Face index for copy `h` of tile `t` in an unfolded surface.
    pub fn find_face(&self, copy: DihedralElement, tile: usize) -> Option<usize> {
        self.faces
            .iter()
            .position(|f| f.origin.as_ref().is_some_and(|o| o.copy == copy && o.tile == tile))
    }
}

/// Unfold a garage into its translation surface `M_Q`.
///
/// Faces are indexed `copy_index · ℓ + tile` with copies `h` running over
/// `G_Q` in sorted order; face `(h, t)` is the base polygon under `h·g_t`.
pub fn unfold(g: &Garage) -> TranslationSurface {
    let base = g.base();
    let m = base.len();
    let copies = g.reflection_subgroup();
    let ell = g.tile_count();
    let index: HashMap<DihedralElement, usize> = copies.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    let mut faces = Vec::with_capacity(copies.len() * ell);
    for &h in copies {
        for (t, tile) in g.tiles().iter().enumerate() {
            let element = h * tile.linear;
            let mat = base.world_matrix(element);
            let (base_vertex, base_edge): (Vec<usize>, Vec<usize>) = if element.det() > 0 {
                ((0..m).collect(), (0..m).collect())
            } else {
                ((0..m).map(|j| (m - j) % m).collect(), (0..m).map(|j| (2 * m - j - 1) % m).collect())
            };
            let vertices = base_vertex.iter().map(|&v| Vec2::apply(&mat, base.vertices()[v])).collect();
            let angles = base_vertex.iter().map(|&v| base.angles()[v]).collect();
            faces.push(Face {
                vertices,
                angles,
                origin: Some(FaceOrigin {
                    copy: h,
                    tile: t,
                    element,
                    base_vertex,
                    base_edge,
                }),
            });
        }
    }
    // face edge index holding base edge e, per orientation
    let local_edge = |det: i32, e: usize| if det > 0 { e } else { (2 * m - e - 1) % m };
    let mut pairing = vec![vec![EdgeRef { face: 0, edge: 0 }; m]; faces.len()];
    for (hi, &h) in copies.iter().enumerate() {
        for t in 0..ell {
            let f = hi * ell + t;
            let det = faces[f].origin.as_ref().expect("unfolded").element.det();
            for e in 0..m {
                let (hj, t2) = match g.partner(t, e) {
                    Some(slot) => (hi, slot.tile),
                    None => (index[&(h * g.boundary_reflection(t, e))], t),
                };
                let f2 = hj * ell + t2;
                let det2 = -det;
                pairing[f][local_edge(det, e)] = EdgeRef {
                    face: f2,
                    edge: local_edge(det2, e),
                };
            }
        }
    }
    let mut s = TranslationSurface::new(faces, pairing).expect("unfolding of a valid garage is a translation surface");
    for c in 0..s.classes.len() {
        let (f, j) = s.classes[c].corners[0];
        let o = s.faces[f].origin.as_ref().expect("unfolded");
        s.classes[c].garage_vertex = Some(g.corner_class(o.tile, o.base_vertex[j]));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn surface(name: &str, n: Option<u32>) -> TranslationSurface {
        unfold(&catalog::generate(name, n, None).unwrap())
    }

    #[test]
    fn square_unfolds_to_torus() {
        let s = surface("square", None);
        assert_eq!(s.face_count(), 4);
        assert_eq!(s.genus(), 1);
        assert!(s.singularities().is_empty());
        assert_eq!(s.classes().len(), 4);
        let r = surface("rectangle", Some(2));
        assert_eq!(r.genus(), 1);
        assert!(r.singularities().is_empty());
    }

    #[test]
    fn double_pentagon() {
        let s = surface("veech-isosceles", Some(5));
        assert_eq!(s.face_count(), 10);
        assert_eq!(s.genus(), 2);
        let sing = s.singularities();
        assert_eq!(sing.len(), 1);
        assert_eq!(sing[0].multiplicity, 3);
        assert!(s.gauss_bonnet_holds());
    }

    #[test]
    fn double_nonagon() {
        let s = surface("veech-isosceles", Some(9));
        assert_eq!(s.face_count(), 18);
        assert_eq!(s.genus(), 4);
        let sing = s.singularities();
        assert_eq!(sing.len(), 1);
        assert_eq!(sing[0].multiplicity, 7);
    }

    #[test]
    fn cone_angle_formula() {
        // 2π·k·m/gcd(k,n) for a vertex of angle m/n with multiplicity k
        let g = catalog::generate("thm3", Some(9), None).unwrap();
        let s = unfold(&g);
        for c in s.classes() {
            let v = &g.vertex_classes()[c.garage_vertex.unwrap()];
            let a = g.base().angles()[v.base_vertex];
            let (m, n, k) = (a.num(), a.den(), v.k);
            let expected = if v.boundary { k * m / num_integer::gcd(k, n) } else { 1 };
            assert_eq!(c.cone, expected);
        }
        assert!(s.cone_angle(s.classes().len()).is_err());
    }

    #[test]
    fn catalog_surfaces_are_consistent() {
        for (name, n, st) in catalog::instances(15) {
            let g = catalog::generate(&name, n, st.as_deref()).unwrap();
            let s = unfold(&g);
            assert_eq!(s.face_count(), 2 * crate::garage::garage_group(&g).order_n() as usize * g.tile_count());
            assert!(s.gauss_bonnet_holds(), "{name} {n:?} {st:?}");
            for f in 0..s.face_count() {
                for e in 0..s.face(f).len() {
                    let p = s.pair(f, e);
                    assert_ne!(p, EdgeRef { face: f, edge: e });
                    let d = s.edge_holonomy(f, e) + s.edge_holonomy(p.face, p.edge);
                    assert!(d.norm() < 1e-9);
                }
            }
            assert!((s.area() - g.area() * (s.face_count() / g.tile_count()) as f64).abs() < 1e-9 * s.area());
        }
    }

    #[test]
    fn unit_torus() {
        let t = TranslationSurface::unit_torus();
        assert_eq!(t.classes().len(), 1);
        assert_eq!(t.genus(), 1);
        assert_eq!(t.crossing_offset(0, 0), Vec2::new(0.0, 1.0));
        assert_eq!(t.crossing_offset(0, 1), Vec2::new(-1.0, 0.0));
    }
}
