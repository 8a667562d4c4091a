use proptest::prelude::*;

use garage_core::catalog;
use garage_core::dynamics::{
    classify_direction, cylinder_decomposition, flow_trace, saddle_connections, ClassifyOptions, SurfacePoint, Termination,
    Tolerances, Verdict,
};
use garage_core::surface::unfold;
use garage_core::{TranslationSurface, Vec2};

fn double_pentagon() -> TranslationSurface {
    unfold(&catalog::generate("veech-isosceles", Some(5), None).unwrap())
}

#[test]
fn double_pentagon_systoles() {
    // legs of unit length make the pentagon circumradius 1; the shortest
    // connections are the five glued sides, 2 sin 36 degrees long, in both
    // orientations
    let side = 2.0 * 36f64.to_radians().sin();
    let h = saddle_connections(&double_pentagon(), 1.1 * side, &Tolerances::default());
    assert_eq!(h.len(), 10);
    for v in &h {
        assert!((v.length() - side).abs() < 1e-9);
        assert_eq!(v.multiplicity, 1);
        let deg = v.dy.atan2(v.dx).to_degrees().rem_euclid(36.0);
        assert!((deg - 18.0).abs() < 1e-6, "{v:?}");
    }
}

#[test]
fn core_leaf_closes_at_circumference() {
    let s = double_pentagon();
    let tol = Tolerances::default();
    let d = cylinder_decomposition(&s, Vec2::new(0.0, 1.0), 100.0, &tol).unwrap();
    assert_eq!(d.cylinders.len(), 2);
    for c in &d.cylinders {
        let t = flow_trace(&s, c.core, Vec2::new(0.0, 1.0), 10.0 * c.circumference, &tol).unwrap();
        assert_eq!(t.termination, Termination::Closed);
        assert!((t.length - c.circumference).abs() < 1e-9);
    }
    // widths cos 36 + cos 72 and 1 - cos 72 of the two vertical strips
    let mut widths: Vec<f64> = d.cylinders.iter().map(|c| c.height).collect();
    widths.sort_by(f64::total_cmp);
    let (c36, c72) = (36f64.to_radians().cos(), 72f64.to_radians().cos());
    assert!((widths[0] - (1.0 - c72)).abs() < 1e-9, "{widths:?}");
    assert!((widths[1] - (c36 + c72)).abs() < 1e-9, "{widths:?}");
}

#[test]
fn lifted_systole_direction_is_periodic_upstairs() {
    let tol = Tolerances::default();
    let mp = unfold(&catalog::generate("veech-isosceles", Some(9), None).unwrap());
    let mq = unfold(&catalog::generate("thm3", Some(9), None).unwrap());
    let h = saddle_connections(&mp, 2.0, &tol);
    let shortest = h.iter().min_by(|a, b| a.length().total_cmp(&b.length())).unwrap();
    let r = classify_direction(&mq, shortest.vec(), &ClassifyOptions::default(), &tol).unwrap();
    assert_eq!(r.verdict, Verdict::PeriodicEvidence);
    let total: f64 = r.cylinders.iter().map(|c| c.area()).sum();
    assert!((total - mq.area()).abs() < 1e-6 * mq.area());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_preserves_direction_and_reverses(theta in 0.0..std::f64::consts::TAU, x in 0.05..0.95f64, y in 0.02..0.3f64) {
        let s = double_pentagon();
        let tol = Tolerances::default();
        let u = Vec2::from_angle(theta);
        let start = SurfacePoint { face: 0, pos: Vec2::new(x, y * x) };
        let t = flow_trace(&s, start, u, 20.0, &tol).unwrap();
        for seg in &t.segments {
            let d = seg.end - seg.start;
            if d.norm() > 1e-6 {
                prop_assert!(d.normalized().cross(u).abs() < 1e-12 && d.dot(u) > 0.0);
            }
        }
        if t.termination == Termination::BudgetExhausted {
            let end = SurfacePoint { face: t.segments.last().unwrap().face, pos: t.segments.last().unwrap().end };
            let back = flow_trace(&s, end, -u, t.length, &tol).unwrap();
            let last = back.segments.last().unwrap();
            prop_assert_eq!(last.face, start.face);
            prop_assert!(last.end.dist(start.pos) < 1e-9);
        }
    }

    #[test]
    fn saddle_connections_monotone_in_length(l1 in 0.5..3.0f64, extra in 0.0..2.0f64) {
        let s = double_pentagon();
        let tol = Tolerances::default();
        let a = saddle_connections(&s, l1, &tol);
        let b = saddle_connections(&s, l1 + extra, &tol);
        for v in &a {
            prop_assert!(b.iter().any(|w| w.vec().dist(v.vec()) < 1e-9 && w.multiplicity == v.multiplicity));
        }
        for v in &b {
            prop_assert!(b.iter().any(|w| (w.vec() + v.vec()).norm() < 1e-9));
        }
    }
}
