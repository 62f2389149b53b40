use super::*;
use crate::point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_near(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn assert_point_near(a: Point, b: Point, tol: f64) {
    for k in 0..3 {
        assert_near(a[k], b[k], tol);
    }
}

#[test]
fn circle_radial_projection() {
    let s = Surface::unit_circle();
    let r = s.closest_point([2.0, 0.0, 0.0]).unwrap();
    assert_point_near(r.cp, [1.0, 0.0, 0.0], 1e-14);
    assert_near(r.dist, 1.0, 1e-14);
}

#[test]
fn torus_tube_axis_ray() {
    let s = Surface::torus([0.0; 3], 1.2, 0.6);
    let r = s.closest_point([2.4, 0.0, 0.0]).unwrap();
    assert_point_near(r.cp, [1.8, 0.0, 0.0], 1e-14);
    assert_near(r.dist, 0.6, 1e-14);
}

#[test]
fn dziuk_point_on_surface() {
    let s = Surface::dziuk();
    let r = s.closest_point([1.0, 0.0, 0.0]).unwrap();
    assert_point_near(r.cp, [1.0, 0.0, 0.0], 1e-9);
    assert!(r.dist <= 1e-9);
}

#[test]
fn medial_axis_errors() {
    assert!(matches!(
        Surface::unit_circle().closest_point([0.0; 3]),
        Err(crate::Error::MedialAxis { .. })
    ));
    assert!(matches!(
        Surface::unit_sphere().closest_point([0.0; 3]),
        Err(crate::Error::MedialAxis { .. })
    ));
    let torus = Surface::torus([0.0; 3], 1.2, 0.6);
    assert!(matches!(torus.closest_point([0.0, 0.0, 0.3]), Err(crate::Error::MedialAxis { .. })));
    assert!(matches!(torus.closest_point([1.2, 0.0, 0.0]), Err(crate::Error::MedialAxis { .. })));
}

/// Random points in a tube around the surface, by param + normal offset.
fn tube_points(surface: &Surface, n: usize, reach: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = surface.samples(4096);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (p, _) = samples[rng.gen_range(0..samples.len())];
        let delta = rng.gen_range(-reach..reach);
        let nrm = match surface.normal(p) {
            Ok(v) => v,
            Err(_) => {
                // Spline curves: offset along the in-plane normal of the tangent.
                let Surface::SplineCurve { spline, .. } = surface else { unreachable!() };
                let t = spline.wrap(rng.gen_range(0.0..spline.period()));
                let (_, d1, _) = spline.eval(t);
                let g = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
                [-d1[1] / g, d1[0] / g, 0.0]
            }
        };
        out.push(point::add(p, point::scale(nrm, delta)));
    }
    out
}

#[test]
fn closest_point_is_idempotent() {
    let surfaces: Vec<(Surface, f64)> = vec![
        (Surface::unit_circle(), 0.4),
        (Surface::unit_sphere(), 0.4),
        (Surface::torus([0.0; 3], 1.2, 0.6), 0.25),
        (bean_curve(), 0.2),
        (Surface::dziuk(), 0.2),
    ];
    for (surface, reach) in surfaces {
        for x in tube_points(&surface, 1000, reach, 42) {
            let r1 = surface.closest_point(x).unwrap();
            let r2 = surface.closest_point(r1.cp).unwrap();
            assert!(
                point::dist(r1.cp, r2.cp) <= 1e-10,
                "idempotence failed at {x:?} on {surface:?}"
            );
            // dist really is the Euclidean distance to cp.
            assert_near(r1.dist, point::dist(x, r1.cp), 1e-13);
        }
    }
}

#[test]
fn closest_point_minimality_brute_force() {
    for (surface, reach) in [(bean_curve(), 0.2), (Surface::dziuk(), 0.2)] {
        let dense = surface.samples(10_000);
        for x in tube_points(&surface, 200, reach, 7) {
            let r = surface.closest_point(x).unwrap();
            let brute =
                dense.iter().map(|(p, _)| point::dist(x, *p)).fold(f64::INFINITY, f64::min);
            assert!(r.dist <= brute + 1e-8, "dist {} > brute {} at {:?}", r.dist, brute, x);
        }
    }
}

#[test]
fn analytic_surfaces_match_closed_form_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sphere = Surface::sphere([0.3, -0.2, 0.1], 0.8);
    let torus = Surface::torus([0.0; 3], 1.2, 0.6);
    for _ in 0..1000 {
        let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        if let Ok(r) = sphere.closest_point(x) {
            let d = point::sub(x, [0.3, -0.2, 0.1]);
            let expect = point::add([0.3, -0.2, 0.1], point::scale(d, 0.8 / point::norm(d)));
            assert!(point::dist(r.cp, expect) <= 1e-14);
        }
        if let Ok(r) = torus.closest_point(x) {
            let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
            let ring = [1.2 * x[0] / rho, 1.2 * x[1] / rho, 0.0];
            let tube = point::sub(x, ring);
            let expect = point::add(ring, point::scale(tube, 0.6 / point::norm(tube)));
            assert!(point::dist(r.cp, expect) <= 1e-14);
        }
    }
}

#[test]
fn normals() {
    let sphere = Surface::unit_sphere();
    assert_point_near(sphere.normal([0.0, 0.0, 1.0]).unwrap(), [0.0, 0.0, 1.0], 1e-15);
    let dziuk = Surface::dziuk();
    assert_point_near(dziuk.normal([1.0, 0.0, 0.0]).unwrap(), [1.0, 0.0, 0.0], 1e-15);
    let torus = Surface::torus([0.0; 3], 1.2, 0.6);
    assert_point_near(torus.normal([1.8, 0.0, 0.0]).unwrap(), [1.0, 0.0, 0.0], 1e-15);
    assert!(matches!(
        bean_curve().normal([1.0, 0.0, 0.0]),
        Err(crate::Error::Unsupported(_))
    ));
    // Unit length on random surface points.
    for surface in [&sphere, &dziuk, &torus] {
        for (p, _) in surface.samples(500) {
            assert_near(point::norm(surface.normal(p).unwrap()), 1.0, 1e-12);
        }
    }
}

#[test]
fn samples_lie_on_surfaces() {
    let circle = Surface::unit_circle();
    let got = circle.samples(4);
    let expect = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]];
    for (g, e) in got.iter().zip(expect) {
        assert_point_near(g.0, e, 1e-12);
    }
    for (p, _) in Surface::unit_sphere().samples(777) {
        assert!(Surface::unit_sphere().defining_residual(p) <= 1e-12);
    }
    for (p, _) in Surface::dziuk().samples(777) {
        assert!(dziuk_phi(p).abs() <= 1e-10);
    }
    // Deterministic.
    let a = Surface::dziuk().samples(100);
    let b = Surface::dziuk().samples(100);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.0, y.0);
    }
}

#[test]
fn bean_curvature_leaves_room_for_bands() {
    // The band builder needs a clear tube of width sqrt(13)·dx at dx = 0.1.
    let Surface::SplineCurve { spline, .. } = bean_curve() else { unreachable!() };
    let mut min_radius = f64::INFINITY;
    for i in 0..4000 {
        let t = spline.period() * i as f64 / 4000.0;
        let (_, d1, d2) = spline.eval(t);
        let speed2 = d1[0] * d1[0] + d1[1] * d1[1];
        let cross = (d1[0] * d2[1] - d1[1] * d2[0]).abs();
        if cross > 1e-12 {
            min_radius = min_radius.min(speed2 * speed2.sqrt() / cross);
        }
    }
    assert!(
        min_radius > 13.0f64.sqrt() * 0.1,
        "bean minimum curvature radius {min_radius} too small"
    );
}

#[test]
fn spline_control_points_from_file() {
    let dir = std::env::temp_dir().join("cpm_spline_file_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pts.txt");
    let mut text = String::from("# bean control polygon\n");
    for p in BEAN_CONTROL_POINTS {
        text.push_str(&format!("{} {}\n", p[0], p[1]));
    }
    std::fs::write(&path, text).unwrap();
    let loaded = SplineCurve::from_points_file(&path).unwrap();
    let Surface::SplineCurve { spline, .. } = bean_curve() else { unreachable!() };
    assert_eq!(loaded.control_points(), spline.control_points());
    assert_near(loaded.period(), spline.period(), 1e-15);
}

#[test]
fn concurrent_queries_are_safe() {
    let surface = std::sync::Arc::new(Surface::dziuk());
    let mut handles = Vec::new();
    for tid in 0..4 {
        let s = surface.clone();
        handles.push(std::thread::spawn(move || {
            let pts = tube_points(&s, 50, 0.2, tid);
            pts.iter().map(|x| s.closest_point(*x).unwrap().dist).sum::<f64>()
        }));
    }
    let sums: Vec<f64> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert!(sums.iter().all(|s| s.is_finite()));
}
