use rand::Rng;

use super::{CheckReport, CheckSpec, Context, Suite, ToleranceSchedule as Tol};
use crate::body::random::{self, rng};
use crate::body::{Body, StarBody, SymmetricPolytope};
use crate::error::{Error, Result};
use crate::geom::{rotation2, Mat3, Vec3};
use crate::lp::{
    i0_body, intersection_body, iterated_lp_body, lp_intersection_body, normalize_volume_two, sandwich_check,
    LpParams, PolytopeLp,
};
use crate::measure::{
    cone_volume_measure, cone_volume_quadrature, intersection_limit_measure, ip_measure, ip_measure_via_transform,
    subspace_concentration, total_mass_solid, ConcentrationBound, DiscreteSphericalMeasure, MeasureOptions,
};
use crate::solver::{solve, Objective, SolverOptions, SolverStatus};
use crate::special::beta;
use crate::sphere::{EvenSphericalFunction, SingularOrders};
use crate::transform::{limit_consistency_check, p_cosine_transform, radon_transform};

/// p values of the body and measure sweeps.
pub const SWEEP_P: [f64; 4] = [-2.0, -0.5, 0.3, 0.7];
/// p values of the concentration sweep.
pub const CONCENTRATION_P: [f64; 3] = [0.25, 0.5, 0.75];
pub const BOX_LENGTHS: [f64; 4] = [1.0, 4.0, 16.0, 64.0];

const SANDWICH: &str = "sandwich inequality between I_pK and IK";
const CONTRAVARIANCE: &str = "affine contra-variance";
const VARIATION: &str = "variational formula for log Wulff families";
const TWO_ROUTES: &str = "two forms of the p-affine dual curvature measure";
const SOLID: &str = "total mass as a solid integral of rho_{I_p^2K}^p";
const P_TO_ONE: &str = "p -> 1 limit";
const P_TO_ZERO: &str = "p -> 0 limit";
const CONCENTRATION: &str = "subspace concentration bound dim/(n-p)";
const STATIONARITY: &str = "stationary points solve the Minkowski problem";

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn min_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, f64::min)
}

fn try_max(xs: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut m = f64::NEG_INFINITY;
    for x in xs {
        let x = x?;
        if x.is_nan() {
            return Ok(f64::NAN);
        }
        m = m.max(x);
    }
    Ok(m)
}

fn try_min(xs: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut m = f64::INFINITY;
    for x in xs {
        let x = x?;
        if x.is_nan() {
            return Ok(f64::NAN);
        }
        m = m.min(x);
    }
    Ok(m)
}

fn params(dim: usize, p: f64) -> LpParams {
    LpParams::new(dim, p).expect("sweep parameters are admissible")
}

/// `count` polygons with 6 to 12 vertices.
pub fn random_polygons(seed: u64, count: usize) -> Result<Vec<SymmetricPolytope>> {
    let mut r = rng(seed);
    (0..count).map(|i| random::random_polygon(&mut r, 3 + i % 4)).collect()
}

/// `count` polytopes in ℝ³ from 4 to 6 point pairs.
pub fn random_polytopes3(seed: u64, count: usize) -> Result<Vec<SymmetricPolytope>> {
    let mut r = rng(seed);
    (0..count).map(|i| random::random_polytope3(&mut r, 4 + i % 3)).collect()
}

/// Shears `[[1, s], [0, 1]]` with `s` uniform in `[−1, 1]`.
pub fn random_shears(seed: u64, count: usize) -> Vec<Mat3> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let mut m = Mat3::identity();
            m[(0, 1)] = r.random_range(-1.0..1.0);
            m
        })
        .collect()
}

fn hexagon(ctx: &Context, i: u64) -> SymmetricPolytope {
    random::random_hexagon(ctx.seed.wrapping_mul(31).wrapping_add(i))
}

/// Both bodies of the route sweep: 20 polygons, seeded.
fn sweep_polygons(ctx: &Context) -> Result<Vec<SymmetricPolytope>> {
    random_polygons(ctx.seed ^ 0x5eed, 20)
}

// ---------------------------------------------------------------- transforms

pub fn transform_checks(ctx: &Context) -> Vec<CheckReport> {
    let s = Suite::Transforms;
    let mut out = Vec::new();

    out.push(
        CheckSpec::new(s, "cosine_constant_circle", "p-cosine transform")
            .inputs("f = 1, n = 2, p = 0.5; exact 2B(3/4, 1/2)")
            .at_most(Tol::fixed(1e-8))
            .run(ctx, |c| {
                let one = EvenSphericalFunction::constant(c.sphere(2)?, 1.0);
                let exact = 2.0 * beta(0.75, 0.5);
                Ok(max_of(p_cosine_transform(&one, 0.5)?.values.iter().map(|v| rel(*v, exact))))
            }),
    );

    out.push(
        CheckSpec::new(s, "cosine_constant_sphere", "p-cosine transform")
            .inputs("f = 1, n = 3, p = -0.5; exact 4π/(p+1)")
            .at_most(Tol::fixed(1e-8))
            .run(ctx, |c| {
                let one = EvenSphericalFunction::constant(c.sphere(3)?, 1.0);
                let exact = 4.0 * std::f64::consts::PI / 0.5;
                Ok(max_of(p_cosine_transform(&one, -0.5)?.values.iter().map(|v| rel(*v, exact))))
            }),
    );

    out.push(
        CheckSpec::new(s, "cosine_quadratic_circle", "p-cosine transform")
            .inputs("f = v1², n = 2, p = -0.5 at every node; closed form in beta functions")
            .at_most(Tol::fixed(1e-6))
            .run(ctx, |c| {
                let p = -0.5;
                let g = c.sphere(2)?;
                let f = EvenSphericalFunction::from_fn(g.clone(), |v| v.x * v.x);
                let a0 = 2.0 * beta((p + 1.0) / 2.0, 0.5);
                let a2 = 4.0 * beta((p + 3.0) / 2.0, 0.5) - a0;
                let t = p_cosine_transform(&f, p)?;
                Ok(max_of(g.nodes().iter().zip(&t.values).map(|(u, v)| {
                    let c2 = u.x * u.x - u.y * u.y;
                    rel(*v, 0.5 * a0 + 0.5 * c2 * a2)
                })))
            }),
    );

    out.push(
        CheckSpec::new(s, "cosine_rotation_equivariance", "p-cosine transform")
            .inputs("n = 2, p = 0.5, f = 1 + v1²/2 + 0.3 v1 v2, rotation by 0.37")
            .at_most(Tol::new(1e-5, 2.0))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                let f = |v: &Vec3| 1.0 + 0.5 * v.x * v.x + 0.3 * v.x * v.y;
                let rot = rotation2(0.37);
                let inv = rot.transpose();
                let tf = p_cosine_transform(&EvenSphericalFunction::from_fn(g.clone(), f), 0.5)?;
                let tf = EvenSphericalFunction::new(g.clone(), tf.values)?.interpolant();
                let trot = p_cosine_transform(&EvenSphericalFunction::from_fn(g.clone(), |v| f(&(inv * v))), 0.5)?;
                Ok(max_of(g.nodes().iter().zip(&trot.values).map(|(u, v)| rel(*v, tf.eval(&(inv * u))))))
            }),
    );

    out.push(
        CheckSpec::new(s, "cosine_positive_even", "p-cosine transform")
            .inputs("n = 3, p = 0.3, f = 0.2 + v3⁴; min value over max")
            .at_least(f64::MIN_POSITIVE)
            .run(ctx, |c| {
                let g = c.sphere(3)?;
                let t = p_cosine_transform(&EvenSphericalFunction::from_fn(g.clone(), |v| 0.2 + v.z.powi(4)), 0.3)?;
                let even = (0..g.len()).all(|i| t.values[i] == t.values[g.antipode(i)]);
                let lo = min_of(t.values.iter().cloned());
                Ok(if even { lo / t.max_abs() } else { -1.0 })
            }),
    );

    out.push(
        CheckSpec::new(s, "radon_constant_sphere", "spherical Radon transform")
            .inputs("f = 1, n = 3; exact 2π")
            .at_most(Tol::fixed(1e-10))
            .run(ctx, |c| {
                let r = radon_transform(&EvenSphericalFunction::constant(c.sphere(3)?, 1.0));
                Ok(max_of(r.values.iter().map(|v| rel(*v, 2.0 * std::f64::consts::PI))))
            }),
    );

    out.push(
        CheckSpec::new(s, "radon_circle_quarter_turn", "spherical Radon transform")
            .inputs("n = 2, f = 1 + v1²/2 + 0.3 v1 v2; Rf(u) = 2f(u rotated by π/2)")
            .at_most(Tol::fixed(1e-10))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                let f = |v: &Vec3| 1.0 + 0.5 * v.x * v.x + 0.3 * v.x * v.y;
                let r = radon_transform(&EvenSphericalFunction::from_fn(g.clone(), f));
                Ok(max_of(g.nodes().iter().zip(&r.values).map(|(u, v)| rel(*v, 2.0 * f(&Vec3::new(-u.y, u.x, 0.0))))))
            }),
    );
    out
}

// ---------------------------------------------------------------- bodies

/// `ρ_{I_pB^n}` on the sampled unit ball against the closed form.
pub fn ball_oracle(ctx: &Context, dim: usize, p: f64) -> CheckReport {
    CheckSpec::new(Suite::Bodies, format!("ball_oracle_n{dim}_p{p}"), "L_p intersection body of the ball")
        .inputs(format!("unit ball, n = {dim}, p = {p}"))
        .at_most(Tol::fixed(1e-4))
        .run(ctx, |c| {
            let lp = params(dim, p);
            let ball = StarBody::ball(c.sphere(dim)?, 1.0)?;
            let ip = lp_intersection_body(&Body::Star(ball), lp, &c.sphere(dim)?)?;
            let exact = lp.ball_radius();
            Ok(max_of(ip.values().iter().map(|v| rel(*v, exact))))
        })
}

pub fn homogeneity(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Bodies, "homogeneity", "homogeneity of I_p")
        .inputs("random hexagon, c in {0.5, 2}, p in {-1, 0.5}")
        .at_most(Tol::fixed(1e-8))
        .run(ctx, |c| {
            let hex = hexagon(c, 0);
            let g = c.sphere(2)?;
            let mut worst = 0.0f64;
            for p in [-1.0, 0.5] {
                let lp = params(2, p);
                let base = lp_intersection_body(&Body::Polytope(hex.clone()), lp, &g)?;
                for s in [0.5, 2.0] {
                    let scaled = lp_intersection_body(&Body::Polytope(hex.scaled(s)?), lp, &g)?;
                    let f = s.powf((2.0 - p) / p);
                    for (a, b) in scaled.values().iter().zip(base.values()) {
                        worst = worst.max(rel(*a, f * b));
                    }
                }
            }
            Ok(worst)
        })
}

/// Minimum sandwich margin over 10 polygons and 10 polytopes in ℝ³.
pub fn sandwich_sweep(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Bodies, "sandwich_sweep", SANDWICH)
        .inputs("10 random polygons + 10 random polytopes in R^3, p in {-2, -0.5, 0.3, 0.7}; min margin")
        .margin(Tol::fixed(1e-3))
        .run(ctx, |c| {
            let mut bodies = random_polygons(c.seed ^ 0x5a, 10)?;
            bodies.extend(random_polytopes3(c.seed ^ 0x5b, 10)?);
            try_min(bodies.iter().flat_map(|k| {
                SWEEP_P.iter().map(move |&p| {
                    let m = sandwich_check(&Body::Polytope(k.clone()), params(k.dim(), p), &c.sphere(k.dim())?)?;
                    Ok(m.lower.min(m.upper))
                })
            }))
        })
}

/// `d_R(I_p(φK), φ^{-t} I_pK) / max ρ` over seeded shears of a hexagon.
pub fn contravariance_body(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Bodies, "contravariance_body", CONTRAVARIANCE)
        .inputs("random hexagon, 5 shears, p in {-1, 0.5}")
        .at_most(Tol::fixed(1e-3))
        .run(ctx, |c| {
            let hex = hexagon(c, 1);
            let g = c.sphere(2)?;
            let mut worst = 0.0f64;
            for p in [-1.0, 0.5] {
                let lp = params(2, p);
                let exact = PolytopeLp::new(&hex, lp)?;
                for phi in random_shears(c.seed ^ 0xc0, 5) {
                    let img = lp_intersection_body(&Body::Polytope(hex.affine_image(&phi)?), lp, &g)?;
                    let pt = phi.transpose();
                    let d = img.radial_distance(|u| exact.radial(&(pt * u)));
                    worst = worst.max(d / img.max_radial());
                }
            }
            Ok(worst)
        })
}

pub fn body_checks(ctx: &Context) -> Vec<CheckReport> {
    let s = Suite::Bodies;
    let mut out = Vec::new();
    for dim in [2, 3] {
        for p in SWEEP_P {
            out.push(ball_oracle(ctx, dim, p));
        }
    }
    out.push(homogeneity(ctx));
    out.push(sandwich_sweep(ctx));
    out.push(contravariance_body(ctx));

    out.push(
        CheckSpec::new(s, "intersection_body_cube", "intersection body")
            .inputs("cube [-1,1]^3, u = e3; exact 4")
            .at_most(Tol::fixed(1e-12))
            .run(ctx, |_| Ok(rel(SymmetricPolytope::cube(3)?.section_volume(&Vec3::z()), 4.0))),
    );

    out.push(
        CheckSpec::new(s, "intersection_body_ball", "intersection body")
            .inputs("unit ball in R^3; exact π")
            .at_most(Tol::fixed(1e-10))
            .run(ctx, |c| {
                let g = c.sphere(3)?;
                let ik = intersection_body(&Body::Star(StarBody::ball(g.clone(), 1.0)?), &g)?;
                Ok(max_of(ik.values().iter().map(|v| rel(*v, std::f64::consts::PI))))
            }),
    );

    out.push(
        CheckSpec::new(s, "iterated_ball", "iterated L_p intersection body")
            .inputs("unit disc, p = 0.5; exact r^{(n-p)/p} r")
            .at_most(Tol::fixed(1e-4))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                let lp = params(2, 0.5);
                let r = lp.ball_radius();
                let exact = r.powf(1.5 / 0.5) * r;
                let i2 = iterated_lp_body(&Body::Star(StarBody::ball(g.clone(), 1.0)?), lp, &g)?;
                Ok(max_of(i2.values().iter().map(|v| rel(*v, exact))))
            }),
    );

    out.push(
        CheckSpec::new(s, "convexity", "convexity of I_pK")
            .inputs("random hexagon, p in {-1, 0.5, 0.9}; min turning of the sampled boundary")
            .margin(Tol::fixed(1e-12))
            .run(ctx, |c| {
                let hex = hexagon(c, 2);
                let g = c.sphere(2)?;
                try_min([-1.0, 0.5, 0.9].map(|p| {
                    let ip = lp_intersection_body(&Body::Polytope(hex.clone()), params(2, p), &g)?;
                    let pts: Vec<Vec3> = g.nodes().iter().zip(ip.values()).map(|(u, r)| u * *r).collect();
                    let n = pts.len();
                    let scale = ip.max_radial().powi(2);
                    Ok(min_of((0..n).map(|i| {
                        let a = pts[(i + n - 1) % n];
                        let b = pts[i];
                        let d = pts[(i + 1) % n];
                        ((b - a).x * (d - b).y - (b - a).y * (d - b).x) / scale
                    })))
                }))
            }),
    );

    out.push(
        CheckSpec::new(s, "i0_affine_invariance", "affine invariance of V(I_0K)")
            .inputs("volume-2 hexagon, 3 shears")
            .at_most(Tol::new(1e-3, 2.0))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                let k = normalize_volume_two(&Body::Polytope(hexagon(c, 3)))?;
                let base = i0_body(&k, &g)?.volume();
                try_max(random_shears(c.seed ^ 0x10, 3).iter().map(|phi| {
                    Ok(rel(i0_body(&k.affine_image(phi)?, &g)?.volume(), base))
                }))
            }),
    );
    out
}

// ---------------------------------------------------------------- measures

/// Per-atom relative difference of the two routes over the sweep.
pub fn route_agreement(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Measures, "route_agreement", TWO_ROUTES)
        .inputs("20 random polygons x p in {-2, -0.5, 0.3, 0.7}; max per-atom relative difference")
        .at_most(Tol::new(1e-3, 2.0))
        .run(ctx, |c| {
            let o = MeasureOptions::new(c.sphere(2)?);
            let bodies = sweep_polygons(c)?;
            try_max(bodies.iter().flat_map(|k| {
                let o = o.clone();
                SWEEP_P.iter().map(move |&p| {
                    let lp = params(2, p);
                    let a = ip_measure_via_transform(k, lp, &o)?;
                    let b = ip_measure(k, lp, &o)?;
                    Ok(b.compare(&a).max_relative)
                })
            }))
        })
}

/// Total mass of the facet form against the solid integral.
pub fn total_mass_solid_check(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Measures, "total_mass_solid", SOLID)
        .inputs("20 random polygons x p in {-2, -0.5, 0.3, 0.7}; radial-shell quadrature")
        .at_most(Tol::new(1e-3, 2.0))
        .run(ctx, |c| {
            let g = c.sphere(2)?;
            let o = MeasureOptions::new(g.clone());
            let bodies = sweep_polygons(c)?;
            try_max(bodies.iter().flat_map(|k| {
                let (o, g) = (o.clone(), g.clone());
                SWEEP_P.iter().map(move |&p| {
                    let lp = params(2, p);
                    let total = ip_measure(k, lp, &o)?.total();
                    Ok(rel(total_mass_solid(k, lp, &g, SingularOrders::default())?, total))
                })
            }))
        })
}

/// `𝓘_p(φK,·)` against `φ^{-t}𝓘_p(K,·)`, both on unwarped rules.
pub fn contravariance_measure(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Measures, "contravariance_measure", CONTRAVARIANCE)
        .inputs("random hexagon, 5 shears, p in {-1, 0.5}; per-atom relative difference")
        .at_most(Tol::new(1e-3, 2.0))
        .run(ctx, |c| {
            let hex = hexagon(c, 1);
            let o = MeasureOptions::new(c.sphere(2)?).unwarped();
            let mut worst = 0.0f64;
            for p in [-1.0, 0.5] {
                let lp = params(2, p);
                let mu = ip_measure_via_transform(&hex, lp, &o)?;
                for phi in random_shears(c.seed ^ 0xc0, 5) {
                    let inv_t = phi.try_inverse().ok_or(Error::NotUnimodular(0.0))?.transpose();
                    let lhs = ip_measure_via_transform(&hex.affine_image(&phi)?, lp, &o)?;
                    let rhs = mu.affine_image(&inv_t)?;
                    let cmp = lhs.compare(&rhs);
                    if cmp.max_direction > 1e-12 {
                        return Err(Error::Invalid(format!("atom directions differ by {}", cmp.max_direction)));
                    }
                    worst = worst.max(cmp.max_relative);
                }
            }
            Ok(worst)
        })
}

/// Centered difference of `V(I_p[h e^{tf}])` against `sgn(p) Σ f_j 𝓘_p({u_j})`.
pub fn variational_formula(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Measures, "variational_formula", VARIATION)
        .inputs("square and random hexagon, 10 random even f each, p in {-1, 0.5}, t = ±1e-3")
        .at_most(Tol::fixed(1e-2))
        .run(ctx, |c| {
            let o = MeasureOptions::new(c.sphere(2)?);
            let mut r = rng(c.seed ^ 0xf1);
            let mut worst = 0.0f64;
            for k in [SymmetricPolytope::cube(2)?, hexagon(c, 4)] {
                for p in [-1.0, 0.5] {
                    let lp = params(2, p);
                    let ev = o.evaluate(&k, lp)?;
                    let m = k.pairs();
                    for _ in 0..10 {
                        let f: Vec<f64> = (0..m).map(|_| r.random_range(-1.0..1.0)).collect();
                        let fam = crate::body::LogWulffFamily::new(k.clone(), f.clone());
                        let t = 1e-3;
                        let fd = (o.evaluate(&fam.member(t)?, lp)?.volume - o.evaluate(&fam.member(-t)?, lp)?.volume)
                            / (2.0 * t);
                        let formula: f64 =
                            p.signum() * (0..m).map(|j| f[j] * (ev.atoms[j] + ev.atoms[j + m])).sum::<f64>();
                        worst = worst.max(rel(fd, formula));
                    }
                }
            }
            Ok(worst)
        })
}

pub fn measure_checks(ctx: &Context) -> Vec<CheckReport> {
    let s = Suite::Measures;
    let mut out = vec![
        route_agreement(ctx),
        total_mass_solid_check(ctx),
        contravariance_measure(ctx),
        variational_formula(ctx),
    ];

    out.push(
        CheckSpec::new(s, "route_agreement_n3", TWO_ROUTES)
            .inputs("cube and 2 random polytopes in R^3, p in {-1, 0.5}")
            .at_most(Tol::new(2e-3, 2.0))
            .run(ctx, |c| {
                let o = MeasureOptions::new(c.sphere(3)?);
                let mut bodies = vec![SymmetricPolytope::cube(3)?];
                bodies.extend(random_polytopes3(c.seed ^ 0x33, 2)?);
                try_max(bodies.iter().flat_map(|k| {
                    let o = o.clone();
                    [-1.0, 0.5].map(move |p| {
                        let lp = params(3, p);
                        Ok(ip_measure(k, lp, &o)?.compare(&ip_measure_via_transform(k, lp, &o)?).max_relative)
                    })
                }))
            }),
    );

    out.push(
        CheckSpec::new(s, "square_atoms_equal", "dihedral symmetry of the square")
            .inputs("square, p in {-1, 0.5}; max |w - total/4| / w")
            .at_most(Tol::fixed(1e-10))
            .run(ctx, |c| {
                let o = MeasureOptions::new(c.sphere(2)?);
                let sq = SymmetricPolytope::cube(2)?;
                try_max([-1.0, 0.5].map(|p| {
                    let mu = ip_measure_via_transform(&sq, params(2, p), &o)?;
                    Ok(max_of(mu.weights().iter().map(|w| rel(mu.total() / 4.0, *w))))
                }))
            }),
    );

    out.push(
        CheckSpec::new(s, "total_mass_volume", "total mass n(n-p)/|p| V(I_pK)")
            .inputs("random hexagon, p in {-1, 0.5}; direct-route total vs volume of the sampled I_pK")
            .at_most(Tol::new(1e-3, 2.0))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                let o = MeasureOptions::new(g.clone());
                let hex = hexagon(c, 5);
                try_max([-1.0, 0.5].map(|p| {
                    let lp = params(2, p);
                    let v = lp_intersection_body(&Body::Polytope(hex.clone()), lp, &g)?.volume();
                    Ok(rel(ip_measure(&hex, lp, &o)?.total(), 2.0 * (2.0 - p) / p.abs() * v))
                }))
            }),
    );

    out.push(
        CheckSpec::new(s, "cone_volume_quadrature", "cone-volume measure")
            .inputs("5 random polygons; quadrature vs exact h|F|/n")
            .at_most(Tol::new(1e-6, 4.0))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                try_max(random_polygons(c.seed ^ 0xcc, 5)?.iter().map(|k| {
                    Ok(cone_volume_quadrature(k, &g)?.compare(&cone_volume_measure(k)?).max_relative)
                }))
            }),
    );

    out.push(
        CheckSpec::new(s, "perturbation_continuity", "continuity of the measure")
            .inputs("random hexagon, support perturbed by 0.1%, p = 0.5")
            .at_most(Tol::fixed(1e-2))
            .run(ctx, |c| {
                let o = MeasureOptions::new(c.sphere(2)?);
                let hex = hexagon(c, 6);
                let h: Vec<f64> = hex.half_support().iter().enumerate().map(|(i, h)| h * (1.0 + 1e-3 * (-1f64).powi(i as i32))).collect();
                let lp = params(2, 0.5);
                let a = ip_measure_via_transform(&hex, lp, &o)?;
                let b = ip_measure_via_transform(&hex.with_support(&h)?, lp, &o)?;
                Ok(b.compare(&a).max_relative)
            }),
    );
    out
}

// ---------------------------------------------------------------- limits

/// `d_R(I_pK, IK) / max ρ_{IK}` at p = 0.99.
pub fn intersection_limit_body(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Limits, "intersection_limit_body", P_TO_ONE)
        .inputs("disc, square, random hexagon at p = 0.99")
        .at_most(Tol::fixed(0.05))
        .run(ctx, |c| {
            let g = c.sphere(2)?;
            let bodies = [
                Body::Star(StarBody::ball(g.clone(), 1.0)?),
                Body::Polytope(SymmetricPolytope::cube(2)?),
                Body::Polytope(hexagon(c, 7)),
            ];
            try_max(bodies.iter().map(|k| {
                let ip = lp_intersection_body(k, params(2, 0.99), &g)?;
                let ik = intersection_body(k, &g)?;
                let ii = ik.samples().interpolant();
                Ok(ip.radial_distance(|u| ii.eval(u).max(0.0)) / ik.max_radial())
            }))
        })
}

fn p_to_one_gap(k: &SymmetricPolytope, p: f64, o: &MeasureOptions) -> Result<f64> {
    let a = ip_measure_via_transform(k, params(2, p), o)?;
    let l = intersection_limit_measure(k, o.facet_order)?;
    Ok(a.compare(&l).max_relative)
}

/// Atoms of `𝓘_p` at p = 0.99 against the limit measure.
pub fn p_to_one_measure(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Limits, "p_to_one_measure", P_TO_ONE)
        .inputs("square and random hexagon at p = 0.99; per-atom relative difference")
        .at_most(Tol::fixed(0.05))
        .run(ctx, |c| {
            let o = MeasureOptions::new(c.sphere(2)?);
            try_max([SymmetricPolytope::cube(2)?, hexagon(c, 8)].iter().map(|k| p_to_one_gap(k, 0.99, &o)))
        })
}

/// `2|p|𝓘_p / (n² V(I_pK))` against the cone volumes of the volume-2 square.
pub fn p_to_zero_measure(ctx: &Context) -> CheckReport {
    CheckSpec::new(Suite::Limits, "p_to_zero_measure", P_TO_ZERO)
        .inputs("volume-2 square, p = ±0.02; per-atom relative difference to cone volumes")
        .at_most(Tol::fixed(0.05))
        .run(ctx, |c| {
            let o = MeasureOptions::new(c.sphere(2)?);
            let sq = normalize_volume_two(&Body::Polytope(SymmetricPolytope::cube(2)?))?;
            let sq = sq.as_polytope().ok_or_else(|| Error::Invalid("expected a polytope".into()))?;
            let cv = cone_volume_measure(sq)?;
            try_max([-0.02, 0.02].map(|p| {
                let ev = o.evaluate(sq, params(2, p))?;
                let w: Vec<f64> = ev.atoms.iter().map(|a| 2.0 * f64::abs(p) * a / (4.0 * ev.volume)).collect();
                let mu = DiscreteSphericalMeasure::on_facets(sq, w)?;
                Ok(mu.compare(&cv).max_relative)
            }))
        })
}

pub fn limit_checks(ctx: &Context) -> Vec<CheckReport> {
    let s = Suite::Limits;
    let mut out = vec![intersection_limit_body(ctx), p_to_one_measure(ctx), p_to_zero_measure(ctx)];

    for dim in [2, 3] {
        out.push(
            CheckSpec::new(s, format!("radon_limit_n{dim}"), P_TO_ONE)
                .inputs(format!("f = 1, n = {dim}, p = 0.99; (1-p)/2 T_(-p) f vs R f"))
                .at_most(Tol::fixed(0.02))
                .run(ctx, |c| limit_consistency_check(&EvenSphericalFunction::constant(c.sphere(dim)?, 1.0), 0.99)),
        );
    }

    out.push(
        CheckSpec::new(s, "radon_limit_monotone", P_TO_ONE)
            .inputs("f = 1, n = 2; deviation at p = 0.999 minus deviation at p = 0.99")
            .below(0.0)
            .run(ctx, |c| {
                let one = EvenSphericalFunction::constant(c.sphere(2)?, 1.0);
                Ok(limit_consistency_check(&one, 0.999)? - limit_consistency_check(&one, 0.99)?)
            }),
    );

    out.push(
        CheckSpec::new(s, "radon_limit_disc", P_TO_ONE)
            .inputs("f = rho_disc^(n-1), n = 2, p = 0.999")
            .at_most(Tol::fixed(0.01))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                let disc = StarBody::ball(g.clone(), 1.0)?;
                limit_consistency_check(disc.samples(), 0.999)
            }),
    );

    out.push(
        CheckSpec::new(s, "p_to_one_measure_rate", P_TO_ONE)
            .inputs("square and random hexagon; gap at p = 0.999 minus gap at p = 0.99")
            .below(0.0)
            .run(ctx, |c| {
                let o = MeasureOptions::new(c.sphere(2)?);
                try_max([SymmetricPolytope::cube(2)?, hexagon(c, 8)].iter().map(|k| {
                    Ok(p_to_one_gap(k, 0.999, &o)? - p_to_one_gap(k, 0.99, &o)?)
                }))
            }),
    );

    out.push(
        CheckSpec::new(s, "i0_limit", P_TO_ZERO)
            .inputs("volume-2 square, p = ±0.01; node-wise relative difference of I_pK and I_0K")
            .at_most(Tol::fixed(0.01))
            .run(ctx, |c| {
                let g = c.sphere(2)?;
                let sq = normalize_volume_two(&Body::Polytope(SymmetricPolytope::cube(2)?))?;
                let i0 = i0_body(&sq, &g)?;
                try_max([-0.01, 0.01].map(|p| {
                    let ip = lp_intersection_body(&sq, params(2, p), &g)?;
                    Ok(max_of(ip.values().iter().zip(i0.values()).map(|(a, b)| rel(*a, *b))))
                }))
            }),
    );
    out
}

// ---------------------------------------------------------------- solver

/// Outcome of the hexagon round trips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTrip {
    pub max_gradient: f64,
    pub max_iterations: usize,
    pub max_residual: f64,
    pub max_gradient_sum: f64,
    /// Smallest objective increase between accepted iterates.
    pub min_increase: f64,
    pub all_converged: bool,
}

/// `μ = 𝓘_p(K,·)` for 5 seeded hexagons fed back to the solver at p ∈ {−1, 0.5}.
pub fn round_trip(ctx: &Context) -> Result<RoundTrip> {
    let g = ctx.sphere(2)?;
    let o = MeasureOptions::new(g.clone());
    let opts = SolverOptions::new(g);
    let mut out = RoundTrip {
        max_gradient: 0.0,
        max_iterations: 0,
        max_residual: 0.0,
        max_gradient_sum: 0.0,
        min_increase: f64::INFINITY,
        all_converged: true,
    };
    for i in 0..5 {
        let hex = hexagon(ctx, 10 + i);
        for p in [-1.0, 0.5] {
            let lp = params(2, p);
            let mu = ip_measure_via_transform(&hex, lp, &o)?;
            let sol = solve(&mu, lp, &opts)?;
            out.all_converged &= sol.status == SolverStatus::Converged;
            out.max_gradient = out.max_gradient.max(max_of(sol.state.gradient.iter().map(|x| x.abs())));
            out.max_gradient_sum = out.max_gradient_sum.max(sol.state.gradient.iter().sum::<f64>().abs());
            out.max_iterations = out.max_iterations.max(sol.state.iteration);
            out.max_residual = out.max_residual.max(sol.residual);
            for w in sol.state.trace.windows(2) {
                out.min_increase = out.min_increase.min(w[1].objective - w[0].objective);
            }
        }
    }
    Ok(out)
}

pub fn solver_checks(ctx: &Context) -> Vec<CheckReport> {
    let s = Suite::Solver;
    let mut out = Vec::new();
    let inputs = "mu = I_p(K,.) for 5 random hexagons, p in {-1, 0.5}";
    let rt = |f: fn(&RoundTrip) -> f64| move |c: &Context| round_trip(c).map(|r| f(&r));

    out.push(
        CheckSpec::new(s, "round_trip_gradient", STATIONARITY)
            .inputs(inputs)
            .below(1e-6)
            .run(ctx, rt(|r| if r.all_converged { r.max_gradient } else { f64::INFINITY })),
    );
    out.push(
        CheckSpec::new(s, "round_trip_iterations", STATIONARITY)
            .inputs(inputs)
            .at_most(Tol::fixed(500.0))
            .run(ctx, rt(|r| r.max_iterations as f64)),
    );
    out.push(
        CheckSpec::new(s, "round_trip_residual", STATIONARITY)
            .inputs(inputs)
            .at_most(Tol::fixed(0.02))
            .run(ctx, rt(|r| r.max_residual)),
    );
    out.push(
        CheckSpec::new(s, "gradient_sum_zero", "zero-homogeneity of the objective")
            .inputs(inputs)
            .at_most(Tol::fixed(1e-6))
            .run(ctx, rt(|r| r.max_gradient_sum)),
    );
    out.push(
        CheckSpec::new(s, "objective_monotone", "plumbing")
            .inputs(inputs)
            .at_least(0.0)
            .run(ctx, rt(|r| r.min_increase)),
    );

    out.push(
        CheckSpec::new(s, "gradient_finite_difference", "first variation of the objective")
            .inputs("cone-volume measure of a random hexagon, p in {-1, 0.5}, step 1e-4")
            .at_most(Tol::fixed(1e-2))
            .run(ctx, |c| {
                let hex = hexagon(c, 20);
                let mu = cone_volume_measure(&hex)?;
                let mut r = rng(c.seed ^ 0x9d);
                let l: Vec<f64> = (0..hex.pairs()).map(|_| r.random_range(-0.1..0.1)).collect();
                let mut worst = 0.0f64;
                for p in [-1.0, 0.5] {
                    let obj = Objective::new(&mu, params(2, p), &SolverOptions::new(c.sphere(2)?))?;
                    let ev = obj.evaluate(&l)?;
                    for k in 0..l.len() {
                        let (mut a, mut b) = (l.clone(), l.clone());
                        a[k] += 1e-4;
                        b[k] -= 1e-4;
                        let fd = (obj.value(&a)? - obj.value(&b)?) / 2e-4;
                        worst = worst.max((fd - ev.gradient[k]).abs() / fd.abs().max(1e-6));
                    }
                }
                Ok(worst)
            }),
    );

    out.push(
        CheckSpec::new(s, "wulff_dominance", "objective increases under Wulff hull")
            .inputs("cone-volume measure of an octagon, 20 random positive f, p = 0.5; min Φ([f]) - Φ(f)")
            .margin(Tol::fixed(1e-12))
            .run(ctx, |c| {
                let oct = SymmetricPolytope::regular_polygon(4, 0.0)?;
                let mu = cone_volume_measure(&oct)?;
                let obj = Objective::new(&mu, params(2, 0.5), &SolverOptions::new(c.sphere(2)?))?;
                let mut r = rng(c.seed ^ 0x1d);
                try_min((0..20).map(|_| {
                    let l: Vec<f64> = (0..4).map(|_| r.random_range(-0.8..0.8)).collect();
                    let hull = obj.body(&l)?;
                    let lh: Vec<f64> = obj.normals.iter().map(|u| hull.support_fn(u).ln()).collect();
                    Ok(obj.value(&lh)? - obj.value(&l)?)
                }))
            }),
    );

    out.push(
        CheckSpec::new(s, "uniform_octagon_stationary", "plumbing")
            .inputs("uniform measure on 8 directions, p = 0.3, h = 1")
            .at_most(Tol::fixed(1e-10))
            .run(ctx, |c| {
                let oct = SymmetricPolytope::regular_polygon(4, 0.1)?;
                let mu = DiscreteSphericalMeasure::on_facets(&oct, vec![1.0; 8])?;
                let obj = Objective::new(&mu, params(2, 0.3), &SolverOptions::new(c.sphere(2)?))?;
                Ok(max_of(obj.evaluate(&[0.0; 4])?.gradient.iter().map(|g| g.abs())))
            }),
    );

    out.push(
        CheckSpec::new(s, "square_from_four_atoms", STATIONARITY)
            .inputs("equal atoms at ±e1, ±e2, p = -1; residual")
            .at_most(Tol::fixed(1e-2))
            .run(ctx, |c| {
                let mu = DiscreteSphericalMeasure::from_pairs(2, &[Vec3::x(), Vec3::y()], &[1.0, 1.0])?;
                let sol = solve(&mu, params(2, -1.0), &SolverOptions::new(c.sphere(2)?))?;
                Ok(if sol.status == SolverStatus::Converged { sol.residual } else { f64::INFINITY })
            }),
    );

    out.push(
        CheckSpec::new(s, "degenerate_measure_alarm", "plumbing")
            .inputs("90% of the mass on ±e1, p = 0.5; final log-support spread")
            .at_least(30.0)
            .run(ctx, |c| {
                let mu = DiscreteSphericalMeasure::from_pairs(
                    2,
                    &[Vec3::x(), Vec3::new(0.5, 1.0, 0.0), Vec3::new(-0.5, 1.0, 0.0)],
                    &[0.9, 0.05, 0.05],
                )?;
                let sol = solve(&mu, params(2, 0.5), &SolverOptions::new(c.sphere(2)?))?;
                let l = &sol.state.log_h;
                Ok(max_of(l.iter().cloned()) - min_of(l.iter().cloned()))
            }),
    );
    out
}

// ---------------------------------------------------------------- concentration

/// Largest `ratio / bound` over the lines (and, in ℝ³, planes) spanned by atoms.
pub fn worst_concentration(mu: &DiscreteSphericalMeasure, p: f64) -> Result<f64> {
    let dirs = mu.directions();
    let m = mu.pairs();
    let mut subspaces: Vec<Vec<Vec3>> = (0..m).map(|k| vec![dirs[k]]).collect();
    if mu.dim() == 3 {
        for i in 0..m {
            for j in i + 1..m {
                if dirs[i].cross(&dirs[j]).norm() > 1e-9 {
                    subspaces.push(vec![dirs[i], dirs[j]]);
                }
            }
        }
    }
    try_max(subspaces.iter().map(|b| {
        let c = subspace_concentration(mu, b, 1e-9, ConcentrationBound::Ip, Some(p))?;
        Ok(c.ratio / c.bound)
    }))
}

fn ip_of(k: &SymmetricPolytope, p: f64, ctx: &Context) -> Result<DiscreteSphericalMeasure> {
    ip_measure_via_transform(k, params(k.dim(), p), &MeasureOptions::new(ctx.sphere(k.dim())?))
}

/// `[−t, t] × [−1, 1]^{n−1}`.
pub fn long_box(dim: usize, t: f64) -> Result<SymmetricPolytope> {
    let mut w = vec![1.0; dim];
    w[0] = t;
    SymmetricPolytope::cuboid(&w)
}

/// Share of `𝓘_p(box,·)` on `span(e2)` in the plane, `span(e2, e3)` in
/// space, and the bound it must stay below.
pub fn box_ratio(dim: usize, t: f64, p: f64, ctx: &Context) -> Result<(f64, f64)> {
    let mu = ip_of(&long_box(dim, t)?, p, ctx)?;
    let basis: Vec<Vec3> = if dim == 2 { vec![Vec3::y()] } else { vec![Vec3::y(), Vec3::z()] };
    let c = subspace_concentration(&mu, &basis, 1e-9, ConcentrationBound::Ip, Some(p))?;
    Ok((c.ratio, c.bound))
}

/// Named bodies of the concentration sweep.
pub fn concentration_bodies(ctx: &Context) -> Result<Vec<(String, SymmetricPolytope)>> {
    let mut v = vec![
        ("square".to_string(), SymmetricPolytope::cube(2)?),
        ("cross_polytope".to_string(), SymmetricPolytope::cross_polytope3()?),
    ];
    for t in BOX_LENGTHS {
        v.push((format!("box_n3_t{t}"), long_box(3, t)?));
    }
    for (i, k) in random_polygons(ctx.seed ^ 0xb0, 10)?.into_iter().enumerate() {
        v.push((format!("polygon{i:02}"), k));
    }
    Ok(v)
}

pub fn concentration_checks(ctx: &Context) -> Vec<CheckReport> {
    let s = Suite::Concentration;
    let mut out = Vec::new();
    let bodies = match concentration_bodies(ctx) {
        Ok(b) => b,
        Err(e) => {
            return vec![CheckSpec::new(s, "bodies", "plumbing").below(0.0).run(ctx, |_| Err(Error::Invalid(e.to_string())))]
        }
    };
    for (name, k) in &bodies {
        for p in CONCENTRATION_P {
            out.push(
                CheckSpec::new(s, format!("bound_{name}_p{p}"), CONCENTRATION)
                    .inputs(format!("{name}, p = {p}; max ratio/bound over atom-spanned subspaces"))
                    .below(1.0)
                    .run(ctx, |c| worst_concentration(&ip_of(k, p, c)?, p)),
            );
        }
    }
    for dim in [2, 3] {
        for p in CONCENTRATION_P {
            let bound = if dim == 2 { 1.0 / (2.0 - p) } else { 2.0 / (3.0 - p) };
            for t in BOX_LENGTHS {
                out.push(
                    CheckSpec::new(s, format!("box_sweep_n{dim}_p{p}_t{t:02}"), CONCENTRATION)
                        .inputs(format!("[-t,t]x[-1,1]^{}, t = {t}, p = {p}; ratio vs bound", dim - 1))
                        .below(bound)
                        .run(ctx, |c| box_ratio(dim, t, p, c).map(|r| r.0)),
                );
            }
            out.push(
                CheckSpec::new(s, format!("box_sweep_n{dim}_p{p}_monotone"), CONCENTRATION)
                    .inputs("smallest increase of the ratio between consecutive t")
                    .margin(Tol::fixed(1e-9))
                    .run(ctx, |c| {
                        let r: Vec<f64> = BOX_LENGTHS.iter().map(|&t| box_ratio(dim, t, p, c).map(|r| r.0)).collect::<Result<_>>()?;
                        Ok(min_of(r.windows(2).map(|w| w[1] - w[0])))
                    }),
            );
        }
    }
    out
}
