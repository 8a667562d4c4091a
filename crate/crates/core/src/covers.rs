//! Covers `M_Q → M_P` induced by a polygon `P` tiling a garage `Q` by
//! reflections: degree, fibres, branch points and the suitability screen.
//!
//! Everything here is exact: group elements are compared as integer pairs and
//! ramification indices are ratios of integer cone angles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_integer::Integer;
use thiserror::Error;

use crate::exact::{Angle, DihedralElement};
use crate::garage::{garage_group, EdgeSlot, Garage, EPS_LEN};
use crate::geometry::Vec2;
use crate::surface::{unfold, TranslationSurface};

pub use crate::dynamics::aperiodic::{aperiodicity_evidence, HeightSplitReport, RationalityVerdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("P must be a single untransformed tile, got {0} tiles")]
    BaseNotPolygon(usize),
    #[error("Q is not tiled by copies of P: {0}")]
    GeometryMismatch(String),
    #[error("reflection condition fails at tile {tile} edge {edge}: {detail}")]
    ReflectionConditionViolated { tile: usize, edge: usize, detail: String },
    #[error("cone angle {upper} over {lower} is not an integer multiple")]
    NonIntegralRamification { upper: u64, lower: u64 },
}

/// One internal edge of `Q` with its exact witness `g_a⁻¹·g_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacency {
    pub a: EdgeSlot,
    pub b: EdgeSlot,
    pub witness: DihedralElement,
}

/// Surface-level data of the cover: which `M_P` face and point each `M_Q`
/// face and point lies over.
#[derive(Debug, Clone)]
pub struct CoverMap {
    pub mp: TranslationSurface,
    pub mq: TranslationSurface,
    /// `M_Q` face → `M_P` face.
    pub face_map: Vec<usize>,
    /// `M_Q` vertex class → `M_P` vertex class.
    pub point_map: Vec<usize>,
    /// Ramification index of each `M_Q` vertex class.
    pub ramification: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct TilingCertificate {
    pub p: Garage,
    pub q: Garage,
    /// `g_1, …, g_ℓ ∈ G_P`.
    pub elements: Vec<DihedralElement>,
    pub adjacency: Vec<Adjacency>,
    pub map: CoverMap,
}

/// Check that `q` is tiled by reflected copies of the polygon `p`.
pub fn certify_tiling(p: &Garage, q: &Garage) -> Result<TilingCertificate, CoverError> {
    if p.tile_count() != 1 || !p.tiles()[0].word.is_empty() {
        return Err(CoverError::BaseNotPolygon(p.tile_count()));
    }
    let pb = p.base();
    let qb = q.base();
    if pb.len() != qb.len() {
        return Err(CoverError::GeometryMismatch(format!(
            "P has {} vertices, Q's tiles have {}",
            pb.len(),
            qb.len()
        )));
    }
    if pb.angles() != qb.angles() {
        return Err(CoverError::GeometryMismatch("vertex angles differ".into()));
    }
    for (i, (a, b)) in pb.vertices().iter().zip(qb.vertices()).enumerate() {
        if a.dist(*b) > EPS_LEN {
            return Err(CoverError::GeometryMismatch(format!("vertex {i} differs")));
        }
    }
    let elements: Vec<DihedralElement> = q.tiles().iter().map(|t| t.linear).collect();
    let mut adjacency = Vec::new();
    for gl in q.gluings() {
        let (a, b) = (gl.a, gl.b);
        let witness = elements[a.tile].inverse() * elements[b.tile];
        if a.edge != b.edge || witness != pb.edge_reflection(a.edge) {
            return Err(CoverError::ReflectionConditionViolated {
                tile: a.tile,
                edge: a.edge,
                detail: format!("g⁻¹·g' = {witness}, reflection in edge is {}", pb.edge_reflection(a.edge)),
            });
        }
        adjacency.push(Adjacency { a, b, witness });
    }
    // tile images must be P moved by an isometry with linear part g_j
    for (t, &g) in elements.iter().enumerate() {
        let m = pb.world_matrix(g);
        let img = q.tile_vertices(t);
        let shift = img[0] - Vec2::apply(&m, pb.vertices()[0]);
        for (v, &x) in pb.vertices().iter().enumerate() {
            if (Vec2::apply(&m, x) + shift).dist(img[v]) > EPS_LEN * 10.0 {
                return Err(CoverError::GeometryMismatch(format!("tile {t} is not a copy of P with linear part {g}")));
            }
        }
    }
    let map = build_cover_map(p, q)?;
    Ok(TilingCertificate {
        p: p.clone(),
        q: q.clone(),
        elements,
        adjacency,
        map,
    })
}

fn build_cover_map(p: &Garage, q: &Garage) -> Result<CoverMap, CoverError> {
    let mp = unfold(p);
    let mq = unfold(q);
    let p_face: HashMap<DihedralElement, usize> = mp
        .faces()
        .iter()
        .enumerate()
        .map(|(i, f)| (f.origin.as_ref().expect("unfolded").element, i))
        .collect();
    let face_map: Vec<usize> = mq
        .faces()
        .iter()
        .map(|f| p_face[&f.origin.as_ref().expect("unfolded").element])
        .collect();
    let mut point_map = vec![usize::MAX; mq.classes().len()];
    let mut ramification = vec![0; mq.classes().len()];
    for (c, class) in mq.classes().iter().enumerate() {
        let (f, j) = class.corners[0];
        let bv = mq.face(f).origin.as_ref().expect("unfolded").base_vertex[j];
        let pf = face_map[f];
        let local = mp
            .face(pf)
            .origin
            .as_ref()
            .expect("unfolded")
            .base_vertex
            .iter()
            .position(|&v| v == bv)
            .expect("same base polygon");
        let pc = mp.corner_class(pf, local);
        point_map[c] = pc;
        let (upper, lower) = (class.cone, mp.classes()[pc].cone);
        if upper % lower != 0 {
            return Err(CoverError::NonIntegralRamification { upper, lower });
        }
        ramification[c] = upper / lower;
    }
    Ok(CoverMap {
        mp,
        mq,
        face_map,
        point_map,
        ramification,
    })
}

/// A `Q` vertex class lying over a base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberEntry {
    pub q_class: usize,
    pub k: u64,
    /// `k / gcd(k, n)` for boundary vertices; 1 for interior ones.
    pub ramification: u64,
    pub boundary: bool,
}

/// All `Q` vertex classes over one vertex of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub base_vertex: usize,
    pub angle: Angle,
    pub entries: Vec<FiberEntry>,
    /// Arithmetic test: some boundary `k ∤ n`.
    pub branched_arithmetic: bool,
    /// Cone test: some point above has a larger cone angle than below.
    pub branched_cone: bool,
}

/// Preimages of one point of `M_P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFiber {
    pub p_point: usize,
    pub base_vertex: Option<usize>,
    /// `(M_Q point, ramification index)`.
    pub preimages: Vec<(usize, u64)>,
}

impl PointFiber {
    pub fn is_branched(&self) -> bool {
        self.preimages.iter().any(|&(_, e)| e > 1)
    }

    pub fn ramification_sum(&self) -> u64 {
        self.preimages.iter().map(|&(_, e)| e).sum()
    }
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub degree: u64,
    pub index: u64,
    pub tile_count: u64,
    pub group_p: u32,
    pub group_q: u32,
    pub fibers: Vec<Fiber>,
    /// Base vertices over which the cover branches.
    pub branch_set: Vec<usize>,
    pub point_fibers: Vec<PointFiber>,
    pub chi_p: i64,
    pub chi_q: i64,
    /// `Σ (e_p − 1)` over points of `M_Q`.
    pub ramification_total: i64,
    pub rh_consistent: bool,
}

pub fn cover_analysis(cert: &TilingCertificate) -> CoverReport {
    let (p, q, map) = (&cert.p, &cert.q, &cert.map);
    let group_p = p.base().group().order_n();
    let group_q = garage_group(q).order_n();
    let index = (group_p / group_q) as u64;
    let tile_count = q.tile_count() as u64;
    debug_assert_eq!(tile_count % index, 0);
    let degree = tile_count / index;

    let mut fibers = Vec::new();
    for (v, &angle) in p.base().angles().iter().enumerate() {
        let n = angle.den();
        let entries: Vec<FiberEntry> = q
            .vertex_classes()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.base_vertex == v)
            .map(|(i, c)| FiberEntry {
                q_class: i,
                k: c.k,
                ramification: if c.boundary { c.k / c.k.gcd(&n) } else { 1 },
                boundary: c.boundary,
            })
            .collect();
        let branched_arithmetic = entries.iter().any(|e| e.boundary && n % e.k != 0);
        let branched_cone = map
            .mq
            .classes()
            .iter()
            .enumerate()
            .any(|(c, class)| class.base_vertex == Some(v) && map.ramification[c] > 1);
        fibers.push(Fiber {
            base_vertex: v,
            angle,
            entries,
            branched_arithmetic,
            branched_cone,
        });
    }
    let branch_set = fibers.iter().filter(|f| f.branched_cone).map(|f| f.base_vertex).collect();
    let point_fibers = point_fibers(map);
    let ramification_total: i64 = map.ramification.iter().map(|&e| e as i64 - 1).sum();
    let chi_p = map.mp.euler_characteristic();
    let chi_q = map.mq.euler_characteristic();
    CoverReport {
        degree,
        index,
        tile_count,
        group_p,
        group_q,
        fibers,
        branch_set,
        point_fibers,
        chi_p,
        chi_q,
        ramification_total,
        rh_consistent: chi_q == degree as i64 * chi_p - ramification_total,
    }
}

fn point_fibers(map: &CoverMap) -> Vec<PointFiber> {
    let mut out: Vec<PointFiber> = map
        .mp
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| PointFiber {
            p_point: i,
            base_vertex: c.base_vertex,
            preimages: Vec::new(),
        })
        .collect();
    for (c, &pc) in map.point_map.iter().enumerate() {
        out[pc].preimages.push((c, map.ramification[c]));
    }
    out
}

/// Branched points of `M_P`, each with its preimages.
pub fn branch_point_count(cert: &TilingCertificate) -> BTreeMap<usize, PointFiber> {
    point_fibers(&cert.map)
        .into_iter()
        .filter(PointFiber::is_branched)
        .map(|f| (f.p_point, f))
        .collect()
}

/// The `M_P` point each vertex of `Q` lies over. A boundary vertex of `Q`
/// unfolds to several points of `M_Q`; all of them lie over one `M_P` point
/// only when the image is well defined, so the full set is returned.
pub fn q_vertex_images(cert: &TilingCertificate, q_class: usize) -> BTreeSet<usize> {
    let map = &cert.map;
    map.mq
        .classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.garage_vertex == Some(q_class))
        .map(|(i, _)| map.point_map[i])
        .collect()
}

/// Whether the affine action of `g ∈ G_P` on `M_P` lifts to `M_Q`.
pub fn lifts(cert: &TilingCertificate, g: DihedralElement) -> bool {
    let map = &cert.map;
    let mq = &map.mq;
    let label = |f: usize| mq.face(f).origin.as_ref().expect("unfolded").element;
    let target = g * label(0);
    let mut by_label: HashMap<DihedralElement, Vec<usize>> = HashMap::new();
    for f in 0..mq.face_count() {
        by_label.entry(label(f)).or_default().push(f);
    }
    let base_edge = |f: usize, j: usize| mq.face(f).origin.as_ref().expect("unfolded").base_edge[j];
    let local_edge = |f: usize, e: usize| {
        mq.face(f)
            .origin
            .as_ref()
            .expect("unfolded")
            .base_edge
            .iter()
            .position(|&x| x == e)
            .expect("edge present")
    };
    'candidates: for &start in by_label.get(&target).map(Vec::as_slice).unwrap_or(&[]) {
        let mut image = vec![usize::MAX; mq.face_count()];
        image[0] = start;
        let mut queue = VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            for j in 0..mq.face(f).len() {
                let e = base_edge(f, j);
                let nb = mq.pair(f, j).face;
                let nb_img = mq.pair(image[f], local_edge(image[f], e)).face;
                if image[nb] == usize::MAX {
                    image[nb] = nb_img;
                    queue.push_back(nb);
                } else if image[nb] != nb_img {
                    continue 'candidates;
                }
            }
        }
        return true;
    }
    false
}

/// `{g ∈ G_P : g·M_Q = M_Q}`, sorted.
pub fn stabilizer(cert: &TilingCertificate) -> Vec<DihedralElement> {
    let group = cert.p.base().group();
    group.elements().filter(|&g| lifts(cert, g)).collect()
}

/// Image of an `M_P` point under the affine automorphism with derivative `g`.
pub fn act_on_point(mp: &TranslationSurface, g: DihedralElement, point: usize) -> usize {
    let (f, j) = mp.classes()[point].corners[0];
    let o = mp.face(f).origin.as_ref().expect("unfolded");
    let target = g * o.element;
    let bv = o.base_vertex[j];
    let tf = mp
        .faces()
        .iter()
        .position(|x| x.origin.as_ref().is_some_and(|y| y.element == target))
        .expect("G_P acts on the faces of M_P");
    let local = mp.face(tf).origin.as_ref().expect("unfolded").base_vertex.iter().position(|&v| v == bv).expect("vertex");
    mp.corner_class(tf, local)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreenCheck {
    pub name: &'static str,
    pub passed: bool,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Overall {
    SuitableCandidate(String),
    Rejected(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuitabilityVerdict {
    pub checks: Vec<ScreenCheck>,
    pub overall: Overall,
}

impl SuitabilityVerdict {
    pub fn check(&self, name: &str) -> Option<&ScreenCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_NAMES: [&str; 5] = [
    "lattice-base",
    "single-branch-point",
    "odd-group-order",
    "odd-angle-denominators",
    "branch-point-fixed",
];

/// Run the five screens independently and combine them.
pub fn suitability_screen(cert: &TilingCertificate, lattice_flag: bool) -> SuitabilityVerdict {
    let branch = branch_point_count(cert);
    let nq = garage_group(&cert.q).order_n();
    let mut checks = Vec::with_capacity(5);

    checks.push(ScreenCheck {
        name: CHECK_NAMES[0],
        passed: lattice_flag,
        evidence: if lattice_flag {
            "caller asserts P is in the lattice catalog".into()
        } else {
            "P not asserted to be a lattice polygon".into()
        },
    });

    let points: Vec<String> = branch.keys().map(|p| p.to_string()).collect();
    checks.push(ScreenCheck {
        name: CHECK_NAMES[1],
        passed: branch.len() == 1,
        evidence: format!("{} branch point(s) on M_P: [{}]", branch.len(), points.join(",")),
    });

    checks.push(ScreenCheck {
        name: CHECK_NAMES[2],
        passed: nq % 2 == 1,
        evidence: format!("G_Q = D_{nq}, -Id {} G_Q", if nq.is_multiple_of(2) { "in" } else { "not in" }),
    });

    let even: Vec<String> = cert
        .q
        .vertex_classes()
        .iter()
        .filter(|v| v.boundary && v.angle.den() % 2 == 0)
        .map(|v| v.angle.to_string())
        .collect();
    checks.push(ScreenCheck {
        name: CHECK_NAMES[3],
        passed: even.is_empty(),
        evidence: if even.is_empty() {
            "all reduced boundary angle denominators odd".into()
        } else {
            format!("even denominators at angles [{}]", even.join(","))
        },
    });

    let stab = stabilizer(cert);
    let moved: Vec<String> = branch
        .keys()
        .filter(|&&pt| stab.iter().any(|&g| act_on_point(&cert.map.mp, g, pt) != pt))
        .map(|p| p.to_string())
        .collect();
    checks.push(ScreenCheck {
        name: CHECK_NAMES[4],
        passed: moved.is_empty(),
        evidence: format!(
            "stabilizer of M_Q has order {}; moved branch points [{}]",
            stab.len(),
            moved.join(",")
        ),
    });

    let overall = match checks.iter().find(|c| !c.passed) {
        Some(c) => Overall::Rejected(c.name.to_string()),
        None => Overall::SuitableCandidate("aperiodicity of the branch point not decided; heuristic evidence available".into()),
    };
    SuitabilityVerdict { checks, overall }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cert(name: &str, n: u32, stage: Option<&str>) -> TilingCertificate {
        let q = catalog::generate(name, Some(n), stage).unwrap();
        let p = catalog::generate_base(name, Some(n)).unwrap();
        certify_tiling(&p, &q).unwrap()
    }

    #[test]
    fn identity_tiling() {
        let p = catalog::generate("veech-isosceles", Some(7), None).unwrap();
        let c = certify_tiling(&p, &p).unwrap();
        let r = cover_analysis(&c);
        assert_eq!(r.degree, 1);
        assert!(r.branch_set.is_empty());
        assert!(branch_point_count(&c).is_empty());
        assert!(r.rh_consistent);
    }

    #[test]
    fn thm3_nine() {
        let c = cert("thm3", 9, None);
        let r = cover_analysis(&c);
        assert_eq!((r.degree, r.index, r.tile_count), (4, 1, 4));
        assert_eq!((r.group_p, r.group_q), (9, 9));
        assert_eq!(r.branch_set, vec![1]);
        assert_eq!(r.chi_p, -6);
        assert_eq!(r.chi_q, 4 * -6 - 2);
        assert!(r.rh_consistent);
        let bp = branch_point_count(&c);
        assert_eq!(bp.len(), 1);
        let v = suitability_screen(&c, true);
        assert!(v.checks.iter().all(|c| c.passed), "{v:?}");
        assert!(matches!(v.overall, Overall::SuitableCandidate(_)));
    }

    #[test]
    fn branch_tests_agree() {
        for (name, n, st) in catalog::instances(15) {
            if catalog::base_family(&name) == name {
                continue;
            }
            let c = cert(&name, n.unwrap(), st.as_deref());
            let r = cover_analysis(&c);
            assert!(r.rh_consistent, "{name} {n:?} {st:?}");
            for f in &r.fibers {
                assert_eq!(f.branched_arithmetic, f.branched_cone, "{name} {n:?} {st:?} vertex {}", f.base_vertex);
            }
            for pf in &r.point_fibers {
                assert_eq!(pf.ramification_sum(), r.degree);
            }
        }
    }

    #[test]
    fn ward_stages() {
        for n in [5, 7] {
            let c1 = cert("ward-stage", n, Some("q1"));
            let r1 = cover_analysis(&c1);
            assert!(r1.branch_set.contains(&1));
            let c2 = cert("ward-stage", n, Some("q2"));
            let v = suitability_screen(&c2, true);
            assert!(!v.check("single-branch-point").unwrap().passed);
            // the two doubled x1 vertices u, v
            let doubled: Vec<usize> = c2
                .q
                .vertex_classes()
                .iter()
                .enumerate()
                .filter(|(_, c)| c.base_vertex == 0 && c.boundary && c.k == 2)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(doubled.len(), 2);
            let iu = q_vertex_images(&c2, doubled[0]);
            let iv = q_vertex_images(&c2, doubled[1]);
            assert_eq!(iu.len(), 1);
            assert_eq!(iv.len(), 1);
            assert_ne!(iu, iv);
        }
    }

    #[test]
    fn rejects_foreign_base() {
        let q = catalog::generate("thm3", Some(9), None).unwrap();
        let p = catalog::generate("veech-isosceles", Some(7), None).unwrap();
        assert!(matches!(certify_tiling(&p, &q), Err(CoverError::GeometryMismatch(_))));
    }
}
