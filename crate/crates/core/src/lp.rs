//! L_p intersection bodies, the intersection body, the iterated body
//! `I_p² K`, the limit body `I_0 K` and the sandwich bounds between `I_p K`
//! and `I K`.
//!
//! For a polytope `K` with facets `F_j` at distance `h_j`,
//! `ρ_{I_pK}(u)^p = c Σ_j h_j ∫_{F_j} |u·y|^{-p} dσ(y)` with
//! `c = (1−p)/(2(n−p))`; the facet integrals are exact
//! (see [`crate::body::moments`]), so the only discretization left is the
//! outer sphere grid on which the result is sampled.

use std::sync::Arc;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::body::moments::{facet_integral, Kernel};
use crate::body::{Body, StarBody, SymmetricPolytope};
use crate::error::{Error, Result};
use crate::geom::{check_dim, Vec3};
use crate::par::map_indexed;
use crate::special::{ball_volume, ln_beta};
use crate::sphere::{singular_axis_log, singular_axis_quadrature, Parity, SingularOrders, SphericalGrid};
use crate::transform::radon_at;

/// `|p|` below this triggers a conditioning warning: `1/p` amplifies quadrature error.
pub const SMALL_P: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpParams {
    pub p: f64,
    pub dim: usize,
}

impl LpParams {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        check_dim(dim)?;
        if !p.is_finite() || p == 0.0 || p >= 1.0 {
            return Err(Error::InvalidP(p));
        }
        if p.abs() < SMALL_P {
            warn!("|p| = {} is small: errors are amplified by 1/|p|", p.abs());
        }
        Ok(Self { p, dim })
    }

    pub fn n(&self) -> f64 {
        self.dim as f64
    }

    /// `(1−p)/(2(n−p))`.
    pub fn moment_constant(&self) -> f64 {
        (1.0 - self.p) / (2.0 * (self.n() - self.p))
    }

    /// Homogeneity degree `n(n−p)/p` of `K ↦ V(I_p K)`.
    pub fn volume_degree(&self) -> f64 {
        self.n() * (self.n() - self.p) / self.p
    }

    /// `ρ_{I_p B^n}`.
    pub fn ball_radius(&self) -> f64 {
        crate::special::lp_ball_radius(self.dim, self.p)
    }
}

/// Exact evaluation of `ρ_{I_pK}` for a polytope.
#[derive(Debug, Clone)]
pub struct PolytopeLp<'a> {
    pub body: &'a SymmetricPolytope,
    pub params: LpParams,
}

impl<'a> PolytopeLp<'a> {
    pub fn new(body: &'a SymmetricPolytope, params: LpParams) -> Result<Self> {
        if body.dim() != params.dim {
            return Err(Error::Invalid("body and parameter dimensions differ".into()));
        }
        Ok(Self { body, params })
    }

    /// `M_k(u) = h_k ∫_{F_k} |u·y|^{-p} dσ` for one facet of each pair;
    /// the antipodal facet has the same moment.
    pub fn pair_moments(&self, u: &Vec3) -> Vec<f64> {
        let k = Kernel::Power(-self.params.p);
        let m = self.body.pairs();
        (0..m)
            .map(|j| self.body.support()[j] * facet_integral(k, self.body.dim(), &self.body.facets()[j], u))
            .collect()
    }

    /// `ρ_{I_pK}(u)^p` from precomputed pair moments.
    pub fn pow_from_moments(&self, moments: &[f64]) -> f64 {
        2.0 * self.params.moment_constant() * crate::par::pairwise_sum(moments)
    }

    /// `ρ_{I_pK}(u)^p` for a unit vector.
    pub fn rho_pow(&self, u: &Vec3) -> f64 {
        self.pow_from_moments(&self.pair_moments(u))
    }

    /// `ρ_{I_pK}(x)`, homogeneous of degree −1.
    pub fn radial(&self, x: &Vec3) -> f64 {
        let r = x.norm();
        (self.rho_pow(&(x / r)).ln() / self.params.p).exp() / r
    }

    /// `ρ_{I_p²K}(u)^p = c ∫ |u·v|^{-p} ρ_{I_pK}(v)^{n−p} dv`, with the inner
    /// body evaluated exactly.
    pub fn iterated_pow(&self, u: &Vec3, orders: SingularOrders) -> Result<f64> {
        let p = self.params.p;
        let e = (self.params.n() - p) / p;
        let integral = singular_axis_quadrature(
            self.params.dim,
            u,
            -p,
            |v| self.rho_pow(v).powf(e),
            Parity::Even,
            orders,
        )?;
        Ok(self.params.moment_constant() * integral)
    }
}

fn sample_log<F>(grid: &Arc<SphericalGrid>, f: F) -> Result<StarBody>
where
    F: Fn(&Vec3) -> Result<f64> + Sync + Send,
{
    let half = grid.half();
    let first: Vec<f64> = map_indexed(half, |i| f(grid.node(i))).into_iter().collect::<Result<_>>()?;
    let mut logs = vec![0.0; grid.len()];
    for (i, v) in first.into_iter().enumerate() {
        logs[i] = v;
        logs[grid.antipode(i)] = v;
    }
    StarBody::from_log_values(Arc::clone(grid), logs)
}

/// `I_p K` sampled on `grid`, computed as `log ρ = (1/p) log ρ^p`.
pub fn lp_intersection_body(body: &Body, params: LpParams, grid: &Arc<SphericalGrid>) -> Result<StarBody> {
    if body.dim() != params.dim || grid.dim() != params.dim {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    let p = params.p;
    match body {
        Body::Polytope(poly) => {
            let lp = PolytopeLp::new(poly, params)?;
            sample_log(grid, |u| Ok(lp.rho_pow(u).ln() / p))
        }
        Body::Star(star) => {
            let e = params.n() - p;
            let c = params.moment_constant();
            sample_log(grid, |u| {
                let integral = singular_axis_quadrature(
                    params.dim,
                    u,
                    -p,
                    |v| star.radial_pow(v, e),
                    Parity::Even,
                    SingularOrders::default(),
                )?;
                Ok((c * integral).ln() / p)
            })
        }
    }
}

/// `I K`: `ρ(u) = V_{n−1}(K ∩ u^⊥)`, exact for polytopes and by the Radon
/// transform of `ρ^{n−1}/(n−1)` for star bodies.
pub fn intersection_body(body: &Body, grid: &Arc<SphericalGrid>) -> Result<StarBody> {
    match body {
        Body::Polytope(poly) => sample_log(grid, |u| Ok(poly.section_volume(u).ln())),
        Body::Star(star) => {
            let n = star.dim();
            let k = (n - 1) as i32;
            sample_log(grid, |u| {
                Ok((radon_at(n, u, |v| star.radial(v).powi(k)) / k as f64).ln())
            })
        }
    }
}

/// `I_p² K = I_p(I_p K)`. Polytope inputs use the exact inner body; star
/// inputs go through the sampled `I_p K` and its interpolant.
pub fn iterated_lp_body(body: &Body, params: LpParams, grid: &Arc<SphericalGrid>) -> Result<StarBody> {
    match body {
        Body::Polytope(poly) => {
            let lp = PolytopeLp::new(poly, params)?;
            sample_log(grid, |u| Ok(lp.iterated_pow(u, SingularOrders::default())?.ln() / params.p))
        }
        Body::Star(_) => {
            let inner = lp_intersection_body(body, params, grid)?;
            lp_intersection_body(&Body::Star(inner), params, grid)
        }
    }
}

/// `∫_K ln|u·x| dx`.
pub fn log_moment(body: &Body, u: &Vec3) -> Result<f64> {
    match body {
        Body::Polytope(poly) => {
            let n = poly.dim() as f64;
            let m = poly.pairs();
            let terms: Vec<f64> = (0..m)
                .map(|j| {
                    let f = &poly.facets()[j];
                    if !f.active {
                        return 0.0;
                    }
                    let h = poly.support()[j];
                    h / n * (facet_integral(Kernel::Log, poly.dim(), f, u) - f.area / n)
                })
                .collect();
            Ok(2.0 * crate::par::pairwise_sum(&terms))
        }
        Body::Star(star) => {
            // ∫_S ρ^n/n (ln|u·v| + ln ρ − 1/n) dv
            let n = star.dim();
            let nf = n as f64;
            let g = star.grid();
            let a = singular_axis_log(n, u, |v| star.radial(v).powi(n as i32) / nf, Parity::Even, SingularOrders::default())?;
            let terms: Vec<f64> = star
                .values()
                .iter()
                .map(|r| r.powi(n as i32) / nf * (r.ln() - 1.0 / nf))
                .collect();
            Ok(a + g.integrate_values(&terms))
        }
    }
}

/// `I_0 K` for `V(K) = 2`: `ρ(u) = exp(−½ ∫_K ln|u·x| dx − 1)`.
pub fn i0_body(body: &Body, grid: &Arc<SphericalGrid>) -> Result<StarBody> {
    let v = body.volume();
    if (v - 2.0).abs() > 1e-6 {
        return Err(Error::VolumeNotTwo(v));
    }
    sample_log(grid, |u| Ok(-0.5 * log_moment(body, u)? - 1.0))
}

/// Scales a body to volume 2.
pub fn normalize_volume_two(body: &Body) -> Result<Body> {
    let n = body.dim() as f64;
    body.scaled((2.0 / body.volume()).powf(1.0 / n))
}

/// Constants of `c V^{(1−p)/p} ρ_{IK} ≤ ρ_{I_pK} ≤ 2^{(p−1)/p} V^{(1−p)/p} ρ_{IK}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichConstants {
    pub lower: f64,
    pub upper: f64,
}

impl SandwichConstants {
    pub fn new(params: LpParams) -> Self {
        let p = params.p;
        let n = params.n();
        let ln2 = std::f64::consts::LN_2;
        let ln_upper = (p - 1.0) / p * ln2;
        let ln_lower = ln_upper + ((1.0 - p).ln() + ln_beta(1.0 - p, n) + (1.0 - p) * n.ln()) / p;
        Self { lower: ln_lower.exp(), upper: ln_upper.exp() }
    }
}

/// Relative slack of both sandwich inequalities, minimized over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichMargins {
    /// `min ρ_{I_pK} / lower bound − 1`.
    pub lower: f64,
    /// `min upper bound / ρ_{I_pK} − 1`.
    pub upper: f64,
}

pub fn sandwich_check(body: &Body, params: LpParams, grid: &Arc<SphericalGrid>) -> Result<SandwichMargins> {
    let ip = lp_intersection_body(body, params, grid)?;
    let ik = intersection_body(body, grid)?;
    let consts = SandwichConstants::new(params);
    let scale = body.volume().powf((1.0 - params.p) / params.p);
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for (a, b) in ip.values().iter().zip(ik.values()) {
        lower = lower.min(a / (consts.lower * scale * b) - 1.0);
        upper = upper.min(consts.upper * scale * b / a - 1.0);
    }
    Ok(SandwichMargins { lower, upper })
}

/// `ρ_{I K}` of the unit ball, `ω_{n−1}`.
pub fn ball_section(dim: usize) -> f64 {
    ball_volume(dim - 1)
}
