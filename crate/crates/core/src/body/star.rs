use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{check_unimodular, Mat3, Vec3};
use crate::sphere::{EvenSphericalFunction, Interpolant, SphericalGrid};

/// Star body given by samples of its radial function, interpolated in `log ρ`.
#[derive(Debug, Clone)]
pub struct StarBody {
    radial: EvenSphericalFunction,
    log_interp: Interpolant,
}

impl StarBody {
    pub fn new(radial: EvenSphericalFunction) -> Result<Self> {
        if let Some(&bad) = radial.values().iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::NonPositiveRadial(bad));
        }
        let logs: Vec<f64> = radial.values().iter().map(|v| v.ln()).collect();
        let log_interp = Interpolant::new(radial.grid(), &logs);
        Ok(Self { radial, log_interp })
    }

    /// Samples `ρ(u)` on the grid.
    pub fn from_fn<F>(grid: Arc<SphericalGrid>, rho: F) -> Result<Self>
    where
        F: Fn(&Vec3) -> f64 + Sync + Send,
    {
        Self::new(EvenSphericalFunction::from_fn(grid, rho))
    }

    /// Samples given as `ln ρ`; avoids the round trip through `exp` for
    /// bodies computed in the log domain.
    pub fn from_log_values(grid: Arc<SphericalGrid>, logs: Vec<f64>) -> Result<Self> {
        let vals: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
        let radial = EvenSphericalFunction::new(Arc::clone(&grid), vals)?;
        if let Some(&bad) = radial.values().iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::NonPositiveRadial(bad));
        }
        let log_interp = Interpolant::new(&grid, &logs);
        Ok(Self { radial, log_interp })
    }

    pub fn ball(grid: Arc<SphericalGrid>, r: f64) -> Result<Self> {
        Self::new(EvenSphericalFunction::constant(grid, r))
    }

    pub fn dim(&self) -> usize {
        self.radial.grid().dim()
    }

    pub fn grid(&self) -> &Arc<SphericalGrid> {
        self.radial.grid()
    }

    pub fn samples(&self) -> &EvenSphericalFunction {
        &self.radial
    }

    pub fn values(&self) -> &[f64] {
        self.radial.values()
    }

    /// `ρ(x)`, homogeneous of degree −1.
    pub fn radial(&self, x: &Vec3) -> f64 {
        let r = x.norm();
        self.log_interp.eval(&(x / r)).exp() / r
    }

    /// `ρ(x)^e` without forming `ρ(x)`.
    pub fn radial_pow(&self, x: &Vec3, e: f64) -> f64 {
        let r = x.norm();
        (e * (self.log_interp.eval(&(x / r)) - r.ln())).exp()
    }

    pub fn volume(&self) -> f64 {
        let n = self.dim() as i32;
        self.radial.map(|r| r.powi(n)).integrate() / n as f64
    }

    /// `ρ_{φK}(x) = ρ_K(φ^{-1}x)`.
    pub fn affine_image(&self, phi: &Mat3) -> Result<Self> {
        check_unimodular(phi)?;
        let inv = phi.try_inverse().ok_or(Error::NotUnimodular(0.0))?;
        Self::from_fn(Arc::clone(self.grid()), |u| self.radial(&(inv * u)))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.radial.map(|r| r * c))
    }

    /// `max_i |ρ_a(u_i) − ρ_b(u_i)|` over the grid of `self`.
    pub fn radial_distance<F: Fn(&Vec3) -> f64>(&self, other: F) -> f64 {
        self.grid()
            .nodes()
            .iter()
            .zip(self.values())
            .map(|(u, r)| (r - other(u)).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_radial(&self) -> f64 {
        self.values().iter().cloned().fold(0.0, f64::max)
    }
}
