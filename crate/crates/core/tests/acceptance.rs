//! Acceptance criteria 1-10, run in sequence with one status line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use garage_core::catalog;
use garage_core::covers::{
    branch_point_count, certify_tiling, cover_analysis, q_vertex_images, suitability_screen, TilingCertificate,
};
use garage_core::dynamics::billiard::{lift_to_surface, project_to_garage};
use garage_core::dynamics::growth::directions_up_to_sign;
use garage_core::dynamics::{
    aperiodicity_evidence, billiard_trace, classify_direction, flow_trace, growth_count, saddle_connections,
    BilliardTermination, ClassifyOptions, Location, RationalityVerdict, SurfacePoint, Termination, Tolerances, Verdict,
};
use garage_core::garage::garage_group;
use garage_core::repro;
use garage_core::surface::unfold;
use garage_core::{Garage, TranslationSurface, Vec2};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cert(name: &str, n: u32, stage: Option<&str>) -> TilingCertificate {
    let q = catalog::generate(name, Some(n), stage).unwrap();
    let p = catalog::generate_base(name, Some(n)).unwrap();
    certify_tiling(&p, &q).unwrap()
}

fn c1() -> Outcome {
    let o = repro::run("thm3", 9).map_err(|e| e.to_string())?;
    if !o.passed() {
        return Err(format!("repro claims failed: {:?}", o.failed()));
    }
    let c = cert("thm3", 9, None);
    let r = cover_analysis(&c);
    ensure(c.q.tile_count() == 4, "tile count")?;
    ensure(r.group_p == 9 && garage_group(&c.q).order_n() == 9, "groups not D_9")?;
    ensure(r.degree == 4, format!("degree {}", r.degree))?;
    ensure(r.branch_set == vec![1], format!("branch set {:?}", r.branch_set))?;
    // the branched fiber is the 2/n vertices (k = 2); the k = 3 vertex is not branched
    let f1 = &r.fibers[1];
    ensure(f1.entries.iter().all(|e| e.k == 2), "branched fiber is not the 2/n vertices")?;
    let k3: Vec<_> = r.fibers.iter().filter(|f| f.entries.iter().any(|e| e.k == 3)).collect();
    ensure(!k3.is_empty() && k3.iter().all(|f| !f.branched_cone), "k=3 vertex branched")?;
    ensure(branch_point_count(&c).len() == 1, "branch point count")?;
    let v = suitability_screen(&c, true);
    for name in ["single-branch-point", "odd-group-order", "odd-angle-denominators", "branch-point-fixed"] {
        ensure(v.check(name).is_some_and(|c| c.passed), format!("screen {name} failed"))?;
    }
    Ok(format!("{} claims, degree 4, one branch point", o.claims.len()))
}

fn c2() -> Outcome {
    for n in [5, 7] {
        let r1 = cover_analysis(&cert("ward-stage", n, Some("q1")));
        // base vertex 1 is x2 (angle pi/(2n))
        ensure(r1.branch_set.contains(&1), format!("n={n}: q1 does not branch over x2"))?;
        let c2 = cert("ward-stage", n, Some("q2"));
        let doubled: Vec<usize> = c2
            .q
            .vertex_classes()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.base_vertex == 0 && v.boundary && v.k == 2)
            .map(|(i, _)| i)
            .collect();
        ensure(doubled.len() == 2, format!("n={n}: {} doubled x1 vertices", doubled.len()))?;
        let cu = q_vertex_images(&c2, doubled[0]);
        let cv = q_vertex_images(&c2, doubled[1]);
        ensure(cu.len() == 1 && cv.len() == 1, format!("n={n}: images not single points"))?;
        ensure(cu != cv, format!("n={n}: c1 == c2"))?;
        let bp = branch_point_count(&c2);
        ensure(cu.union(&cv).all(|p| bp.contains_key(p)), format!("n={n}: c1, c2 not both branched"))?;
        ensure(bp.len() >= 2, format!("n={n}: q2 has {} branch points", bp.len()))?;
        let o = repro::run("ward-impossibility", n).map_err(|e| e.to_string())?;
        ensure(o.passed(), format!("n={n}: repro failed"))?;
    }
    Ok("q1 branches over x2; q2 over two distinct points, n = 5, 7".into())
}

fn c3() -> Outcome {
    let mut even = 0;
    let mut thm3 = 0;
    for (name, n, stage) in catalog::instances(15) {
        let q = catalog::generate(&name, n, stage.as_deref()).unwrap();
        let p = catalog::generate_base(&name, n).unwrap();
        let c = certify_tiling(&p, &q).map_err(|e| format!("{name} {n:?}: {e}"))?;
        let v = suitability_screen(&c, catalog::is_lattice_family(catalog::base_family(&name)));
        let ok3 = v.check("odd-group-order").unwrap().passed;
        let ok4 = v.check("odd-angle-denominators").unwrap().passed;
        let has_even = q.vertex_classes().iter().any(|x| x.boundary && x.angle.den() % 2 == 0);
        if has_even {
            even += 1;
            ensure(!ok3 || !ok4, format!("{name} {n:?} {stage:?}: even denominator but checks 3, 4 pass"))?;
        }
        if name == "thm3" {
            thm3 += 1;
            ensure(ok3 && ok4, format!("thm3 {n:?}: checks 3/4 fail"))?;
            ensure(garage_group(&q).order_n() == n.unwrap(), "thm3 N_Q != n")?;
        }
    }
    Ok(format!("{even} garages with an even denominator rejected; {thm3} thm3 instances pass"))
}

/// Euler characteristic of the unfolding counted from the garage alone:
/// a boundary vertex of angle p/q contributes N/q points, an interior one
/// 2N; each glued edge pair 2N edges and each free edge N.
fn euler_oracle(g: &Garage) -> i64 {
    let n = garage_group(g).order_n() as i64;
    let m = g.base().len() as i64;
    let tiles = g.tile_count() as i64;
    let glued = g.gluings().len() as i64;
    let free = tiles * m - 2 * glued;
    let v: i64 = g
        .vertex_classes()
        .iter()
        .map(|x| if x.boundary { n / x.angle.den() as i64 } else { 2 * n })
        .sum();
    v - (2 * n * glued + n * free) + 2 * n * tiles
}

fn c4() -> Outcome {
    let torus = unfold(&catalog::generate("square", None, None).unwrap());
    ensure(torus.genus() == 1 && torus.singularities().is_empty(), "square is not a flat torus")?;
    for (n, cone, genus) in [(5, 3, 2), (9, 7, 4)] {
        let s = unfold(&catalog::generate("veech-isosceles", Some(n), None).unwrap());
        let sing = s.singularities();
        ensure(s.genus() == genus, format!("veech-isosceles({n}) genus {}", s.genus()))?;
        ensure(
            sing.len() == 1 && sing[0].multiplicity == cone,
            format!("veech-isosceles({n}) singularities {sing:?}"),
        )?;
    }
    let mut count = 0;
    for (name, n, stage) in catalog::instances(15) {
        let g = catalog::generate(&name, n, stage.as_deref()).unwrap();
        let s = unfold(&g);
        let chi = euler_oracle(&g);
        ensure(s.euler_characteristic() == chi, format!("{name} {n:?} {stage:?}: chi {} vs {chi}", s.euler_characteristic()))?;
        // Gauss-Bonnet: sum of (k - 1) over cone points is 2g - 2
        let excess: i64 = s.singularities().iter().map(|x| x.multiplicity as i64 - 1).sum();
        ensure(excess == -chi && s.gauss_bonnet_holds(), format!("{name} {n:?} {stage:?}: Gauss-Bonnet"))?;
        count += 1;
    }
    Ok(format!("{count} catalog surfaces match the Euler oracle"))
}

fn c5() -> Outcome {
    let mut cases = vec![("thm3", 9, None), ("thm3", 15, None)];
    for n in 5..=15 {
        for st in catalog::WARD_STAGES {
            cases.push(("ward-stage", n, Some(st)));
        }
    }
    for (name, n, st) in &cases {
        let r = cover_analysis(&cert(name, *n, *st));
        ensure(
            r.chi_q == r.degree as i64 * r.chi_p - r.ramification_total,
            format!("{name} {n} {st:?}: {} != {}*{} - {}", r.chi_q, r.degree, r.chi_p, r.ramification_total),
        )?;
    }
    Ok(format!("{} covers satisfy Riemann-Hurwitz", cases.len()))
}

fn random_start(g: &Garage, rng: &mut ChaCha8Rng) -> Vec2 {
    let t = rng.gen_range(0..g.tile_count());
    let v = g.tile_vertices(t);
    // interior of a triangular tile, away from its edges
    let mut w: [f64; 3] = [rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0)];
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    v[0] * w[0] + v[1] * w[1] + v[2] * w[2]
}

/// Largest distance between billiard bounce points and the projected flow.
fn billiard_gap(g: &Garage, s: &TranslationSurface, start: Vec2, dir: Vec2, tol: &Tolerances) -> Result<f64, String> {
    let b = billiard_trace(g, start, dir, 1000, f64::INFINITY, tol).map_err(|e| e.to_string())?;
    let sp = lift_to_surface(g, s, start, 1e-12).ok_or("lift failed")?;
    let f = flow_trace(s, sp, dir, b.length, tol).map_err(|e| e.to_string())?;
    let corner = matches!(b.termination, BilliardTermination::Corner { .. });
    if f.length < b.length - 1e-9 && !(corner || matches!(f.termination, Termination::SaddleHit { .. })) {
        return Err(format!("flow stopped at {} before billiard length {}", f.length, b.length));
    }
    let mut worst: f64 = 0.0;
    let (mut seg, mut acc) = (0, 0.0);
    for (p, &t) in b.points.iter().zip(&b.arc) {
        if t > f.length {
            break;
        }
        while seg + 1 < f.segments.len() && acc + f.segments[seg].start.dist(f.segments[seg].end) < t {
            acc += f.segments[seg].start.dist(f.segments[seg].end);
            seg += 1;
        }
        let s0 = &f.segments[seg];
        let q = project_to_garage(
            g,
            s,
            SurfacePoint {
                face: s0.face,
                pos: s0.start + f.direction * (t - acc),
            },
        );
        worst = worst.max(q.dist(*p));
    }
    Ok(worst)
}

fn c6() -> Outcome {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    let mut bounces = 0;
    for (name, n) in [("veech-isosceles", 9), ("veech-right", 5), ("thm3", 9)] {
        let g = catalog::generate(name, Some(n), None).unwrap();
        let s = unfold(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for seed in 0..100 {
            let start = random_start(&g, &mut rng);
            let dir = Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
            let gap = billiard_gap(&g, &s, start, dir, &tol).map_err(|e| format!("{name}({n}) seed {seed}: {e}"))?;
            ensure(gap <= 1e-9, format!("{name}({n}) seed {seed}: gap {gap:e}"))?;
            worst = worst.max(gap);
            bounces += 1;
        }
    }
    Ok(format!("{bounces} runs of 1000 bounces, worst gap {worst:.2e}"))
}

fn primitive_vectors(max: i64) -> BTreeSet<(i64, i64)> {
    let mut out = BTreeSet::new();
    for x in -max..=max {
        for y in -max..=max {
            if (x, y) != (0, 0) && x.gcd(&y) == 1 && x * x + y * y <= max * max {
                out.insert((x, y));
            }
        }
    }
    out
}

fn c7() -> Outcome {
    let h = saddle_connections(&TranslationSurface::unit_torus(), 50.0, &Tolerances::default());
    let mut got = BTreeSet::new();
    for v in &h {
        let (x, y) = (v.dx.round(), v.dy.round());
        ensure((v.dx - x).abs() < 1e-9 && (v.dy - y).abs() < 1e-9, format!("non-integer holonomy {v:?}"))?;
        ensure(v.multiplicity == 1, format!("multiplicity {} at {v:?}", v.multiplicity))?;
        got.insert((x as i64, y as i64));
    }
    let want = primitive_vectors(50);
    ensure(got.len() == h.len(), "duplicate holonomies")?;
    ensure(got == want, format!("{} found, {} expected", got.len(), want.len()))?;
    Ok(format!("{} holonomies equal the primitive lattice vectors", want.len()))
}

fn c8() -> Outcome {
    let tol = Tolerances::default();
    let t = growth_count(&TranslationSurface::unit_torus(), &[10.0, 20.0, 40.0, 80.0], &tol).map_err(|e| e.to_string())?;
    ensure((t.exponent - 2.0).abs() <= 0.1, format!("torus exponent {}", t.exponent))?;
    let s = unfold(&catalog::generate("veech-isosceles", Some(5), None).unwrap());
    let p = growth_count(&s, &[7.5, 15.0, 30.0, 60.0], &tol).map_err(|e| e.to_string())?;
    ensure((1.8..=2.2).contains(&p.exponent), format!("double pentagon exponent {} ({:?})", p.exponent, p.table))?;
    Ok(format!(
        "torus slope {:.4} ({}), double pentagon slope {:.4} ({})",
        t.exponent,
        t.source.name(),
        p.exponent,
        p.source.name()
    ))
}

fn c9() -> Outcome {
    let tol = Tolerances::default();
    let s = unfold(&catalog::generate("thm3", Some(9), None).unwrap());
    let area = s.area();
    let hol: Vec<Vec2> = saddle_connections(&s, 4.0, &tol).iter().map(|h| h.vec()).collect();
    let mut dirs = directions_up_to_sign(&hol);
    // shortest first
    dirs.sort_by(|a, b| {
        let la = hol.iter().filter(|v| v.normalized().cross(*a).abs() < 1e-9).map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let lb = hol.iter().filter(|v| v.normalized().cross(*b).abs() < 1e-9).map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        la.total_cmp(&lb)
    });
    ensure(dirs.len() >= 20, format!("only {} saddle-connection directions", dirs.len()))?;
    let periodic_opts = ClassifyOptions {
        separatrix_budget: 200.0,
        ..ClassifyOptions::default()
    };
    for d in &dirs[..20] {
        let r = classify_direction(&s, *d, &periodic_opts, &tol).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::PeriodicEvidence, format!("direction {d:?}: {} ({:?})", r.verdict, r.note))?;
        let total: f64 = r.cylinders.iter().map(|c| c.area()).sum();
        ensure((total - area).abs() <= 1e-6 * area, format!("direction {d:?}: area {total} vs {area}"))?;
    }
    let generic_opts = ClassifyOptions {
        separatrix_budget: 30.0,
        crossings: 100_000,
        checkpoints: Some(vec![10_000, 100_000]),
        ..ClassifyOptions::default()
    };
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let theta = std::f64::consts::PI * ((i as f64 + 0.5) / 20.0 + 0.013 * 2f64.sqrt());
        let d = Vec2::from_angle(theta);
        let r = classify_direction(&s, d, &generic_opts, &tol).map_err(|e| e.to_string())?;
        ensure(r.discrepancy.len() == 2, format!("direction {theta}: {} ({:?})", r.verdict, r.note))?;
        let (d0, d1) = (r.discrepancy[0].1, r.discrepancy[1].1);
        ensure(d1 < d0 && d1 < 0.05, format!("direction {theta}: D {d0} -> {d1}"))?;
        worst = worst.max(d1);
    }
    Ok(format!("20 periodic directions; 20 generic directions with D(1e5) <= {worst:.4}"))
}

fn c10() -> Outcome {
    let tol = Tolerances::default();
    let s = unfold(&catalog::generate("veech-isosceles", Some(5), None).unwrap());
    // the base vertex with angle pi/5 at the origin is a pentagon centre
    let c = s.classes().iter().position(|c| c.base_vertex == Some(0)).ok_or("no centre class")?;
    let r = aperiodicity_evidence(&s, Location::Class(c), Vec2::new(0.0, 1.0), 100.0, 40, 1e6, &tol).map_err(|e| e.to_string())?;
    // centre to the two vertical walls: cos 36 and cos 72 degrees
    let expected = (5.0 + 5f64.sqrt()) / 10.0;
    ensure((r.ratio - expected).abs() <= 1e-9, format!("ratio {} vs {expected}", r.ratio))?;
    ensure(r.verdict == RationalityVerdict::AppearsIrrational, format!("verdict {:?}", r.verdict))?;
    let t = TranslationSurface::unit_torus();
    let at = Location::Point(SurfacePoint {
        face: 0,
        pos: Vec2::new(0.3, 0.5),
    });
    let h = aperiodicity_evidence(&t, at, Vec2::new(1.0, 0.0), 10.0, 40, 1e6, &tol).map_err(|e| e.to_string())?;
    ensure(
        matches!(h.verdict, RationalityVerdict::AppearsRational { num: 1, den: 2 }),
        format!("torus verdict {:?}", h.verdict),
    )?;
    Ok(format!("ratio {:.12} irrational; torus y=1/2 rational", r.ratio))
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Outcome, u64); 10] = [
        (1, "thm3 reproduction", c1, 1),
        (2, "ward impossibility steps", c2, 1),
        (3, "-Id screen", c3, 1),
        (4, "unfolding topology", c4, 5),
        (5, "Riemann-Hurwitz", c5, 1),
        (6, "billiard/unfolding equivalence", c6, 30),
        (7, "torus saddle connections", c7, 10),
        (8, "quadratic growth", c8, 120),
        (9, "optimal-dynamics corroboration", c9, 300),
        (10, "aperiodicity heuristic", c10, 1),
    ];
    let mut failed = Vec::new();
    for (id, name, f, limit) in criteria {
        let t0 = Instant::now();
        let res = f();
        let dt = t0.elapsed();
        let over = dt > Duration::from_secs(limit);
        let line = match (&res, over) {
            (Ok(msg), false) => format!("PASS criterion {id} ({name}): {msg} [{:.2}s]", dt.as_secs_f64()),
            (Ok(msg), true) => format!("FAIL criterion {id} ({name}): {msg} but took {:.2}s > {limit}s", dt.as_secs_f64()),
            (Err(msg), _) => format!("FAIL criterion {id} ({name}): {msg} [{:.2}s]", dt.as_secs_f64()),
        };
        println!("{line}");
        if res.is_err() || over {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
