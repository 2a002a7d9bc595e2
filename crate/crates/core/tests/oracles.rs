//! Reference values computed offline at 30 digits (mpmath) and independent
//! in-test oracles: a stratified Monte-Carlo integral and plain Simpson rules.

use idcm::lp::{iterated_lp_body, lp_intersection_body, PolytopeLp};
use idcm::measure::{ip_measure, ip_measure_via_transform, MeasureOptions};
use idcm::{Body, LpParams, SphericalGrid, StarBody, SymmetricPolytope, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn dir(theta: f64) -> Vec3 {
    Vec3::new(theta.cos(), theta.sin(), 0.0)
}

// ρ_{I_p B^n}, ((1−p)/2 · ω_{n−1} B((1−p)/2, (n+1)/2))^{1/p}
const BALL: [(usize, f64, f64); 8] = [
    (2, -2.0, 0.92131773192356127804),
    (2, -0.5, 0.48375136447419335388),
    (2, 0.3, 5.5298435756856057238),
    (2, 0.7, 2.3844892401278058135),
    (3, -2.0, 0.89206205807638555727),
    (3, -0.5, 0.31029612490465942505),
    (3, 0.3, 16.700149052187039685),
    (3, 0.7, 4.2024533709024199809),
];

#[test]
fn ball_radius_matches_frozen_values() {
    for (n, p, want) in BALL {
        let grid = SphericalGrid::shared(n, if n == 2 { 180 } else { 16 }).unwrap();
        let ball = Body::Star(StarBody::ball(grid.clone(), 1.0).unwrap());
        let ip = lp_intersection_body(&ball, LpParams::new(n, p).unwrap(), &grid).unwrap();
        for v in ip.values() {
            assert!(rel(*v, want) < 1e-10, "n = {n}, p = {p}: {v} vs {want}");
        }
    }
}

#[test]
fn square_volume_and_mass_match_frozen_values() {
    let sq = SymmetricPolytope::cube(2).unwrap();
    let o = MeasureOptions::new(SphericalGrid::shared(2, 720).unwrap());
    for (p, volume, total) in [
        (0.5, 60.035395279215490638, 360.21237167529294383),
        (-1.0, 0.82844984105855446265, 4.9706990463513267759),
    ] {
        let ev = o.evaluate(&sq, LpParams::new(2, p).unwrap()).unwrap();
        assert!(rel(ev.volume, volume) < 1e-10, "{p}: {}", ev.volume);
        assert!(rel(ev.total(), total) < 1e-10, "{p}: {}", ev.total());
        let direct = ip_measure(&sq, LpParams::new(2, p).unwrap(), &o).unwrap();
        for w in direct.weights() {
            assert!(rel(w, total / 4.0) < 1e-5, "{p}: {w}");
        }
    }
}

#[test]
fn square_radial_matches_frozen_values() {
    let sq = SymmetricPolytope::cube(2).unwrap();
    let lp = PolytopeLp::new(&sq, LpParams::new(2, 0.5).unwrap()).unwrap();
    for (theta, want) in [(0.0, 4.0), (PI / 8.0, 4.2657708450348424176), (PI / 5.0, 4.7023838868741839595)] {
        assert!(rel(lp.radial(&dir(theta)), want) < 1e-12);
    }
}

#[test]
fn iterated_square_matches_frozen_value() {
    let sq = Body::Polytope(SymmetricPolytope::cube(2).unwrap());
    let grid = SphericalGrid::shared(2, 720).unwrap();
    let ii = iterated_lp_body(&sq, LpParams::new(2, -1.0).unwrap(), &grid).unwrap();
    assert!(rel(ii.radial(&Vec3::x()), 5.5041459113398517987) < 1e-6);
}

/// `∫_{[−1,1]²} |x·u|^{−p} dx` with one jittered sample per cell of an
/// `m × m` grid.
fn stratified_square(u: &Vec3, p: f64, m: usize, rng: &mut ChaCha8Rng) -> f64 {
    let h = 2.0 / m as f64;
    let mut sum = 0.0;
    for i in 0..m {
        let mut row = 0.0;
        for j in 0..m {
            let x = -1.0 + h * (i as f64 + rng.random::<f64>());
            let y = -1.0 + h * (j as f64 + rng.random::<f64>());
            row += (x * u.x + y * u.y).abs().powf(-p);
        }
        sum += row;
    }
    sum * h * h
}

#[test]
fn square_against_stratified_monte_carlo() {
    let sq = SymmetricPolytope::cube(2).unwrap();
    let p = 0.5;
    let lp = PolytopeLp::new(&sq, LpParams::new(2, p).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..16 {
        let u = dir(PI * (k as f64 + 0.37) / 16.0);
        let mc = (1.0 - p) / 2.0 * stratified_square(&u, p, 3163, &mut rng);
        let want = mc.powf(1.0 / p);
        assert!(rel(lp.radial(&u), want) < 5e-3, "{k}: {} vs {want}", lp.radial(&u));
    }
}

/// Composite Simpson on `[a, b]` with `m` (even) panels.
fn simpson(a: f64, b: f64, m: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn iterated_square_against_two_step_quadrature() {
    // ρ_{I_p²K}(u)^p = (1−p)/2 ∫_{S¹} |u·θ| ρ_{I_pK}(θ)^3 / 3 dθ at p = −1
    let sq = SymmetricPolytope::cube(2).unwrap();
    let params = LpParams::new(2, -1.0).unwrap();
    let lp = PolytopeLp::new(&sq, params).unwrap();
    let grid = SphericalGrid::shared(2, 720).unwrap();
    let ii = iterated_lp_body(&Body::Polytope(sq.clone()), params, &grid).unwrap();
    for phi in [0.0, 0.3, PI / 4.0, 1.1] {
        let u = dir(phi);
        let inner = |t: f64| (u.dot(&dir(t))).abs() * lp.radial(&dir(t)).powi(3) / 3.0;
        let cuts = [phi + PI / 2.0, phi + 3.0 * PI / 2.0, PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0];
        let mut pts: Vec<f64> = cuts.iter().map(|c| c.rem_euclid(2.0 * PI)).collect();
        pts.extend([0.0, 2.0 * PI]);
        pts.sort_by(f64::total_cmp);
        let integral: f64 = pts.windows(2).map(|w| simpson(w[0], w[1], 2000, inner)).sum();
        let want = (integral).powf(-1.0);
        assert!(rel(ii.radial(&u), want) < 1e-6, "{phi}: {} vs {want}", ii.radial(&u));
    }
}

#[test]
fn elongated_box_routes_agree() {
    let b = SymmetricPolytope::cuboid(&[3.0, 1.0]).unwrap();
    let o = MeasureOptions::new(SphericalGrid::shared(2, 720).unwrap());
    let params = LpParams::new(2, 0.5).unwrap();
    let a = ip_measure(&b, params, &o).unwrap();
    let t = ip_measure_via_transform(&b, params, &o).unwrap();
    assert!(a.compare(&t).max_relative < 1e-3);
}
