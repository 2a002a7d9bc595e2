//! Quadrature on S¹ and S², singular axial integrals and even sample containers.

pub mod gauss;
mod grid;
mod interp;
mod singular;

use std::sync::Arc;

pub use grid::{default_resolution, GridDescriptor, GridRule, QuadratureRule, SphericalGrid};
pub use interp::Interpolant;
pub use singular::{singular_axis_log, singular_axis_quadrature, Parity, SingularOrders};

use crate::error::{Error, Result};
use crate::geom::Vec3;

/// Samples of an even function on a grid, with `values[i] == values[antipode(i)]`.
#[derive(Debug, Clone)]
pub struct EvenSphericalFunction {
    grid: Arc<SphericalGrid>,
    values: Vec<f64>,
}

impl EvenSphericalFunction {
    /// Checks exact evenness.
    pub fn new(grid: Arc<SphericalGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Invalid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        for i in 0..grid.half() {
            if values[i] != values[grid.antipode(i)] {
                return Err(Error::NotEven(i));
            }
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` on the first half of the grid and mirrors, so the result is
    /// even by construction.
    pub fn from_fn<F>(grid: Arc<SphericalGrid>, f: F) -> Self
    where
        F: Fn(&Vec3) -> f64 + Sync + Send,
    {
        let half = grid.half();
        let first = crate::par::map_indexed(half, |i| f(grid.node(i)));
        let mut values = vec![0.0; grid.len()];
        for (i, v) in first.into_iter().enumerate() {
            values[i] = v;
            values[grid.antipode(i)] = v;
        }
        Self { grid, values }
    }

    pub fn constant(grid: Arc<SphericalGrid>, c: f64) -> Self {
        let values = vec![c; grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<SphericalGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0 && v.is_finite())
    }

    pub fn interpolant(&self) -> Interpolant {
        Interpolant::new(&self.grid, &self.values)
    }

    pub fn integrate(&self) -> f64 {
        integrate(self)
    }
}

/// `Σ w_i f(u_i)`.
pub fn integrate(f: &EvenSphericalFunction) -> f64 {
    f.grid.integrate_values(&f.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_coordinate_squares() {
        let g2 = SphericalGrid::shared(2, 720).unwrap();
        let f = EvenSphericalFunction::from_fn(g2.clone(), |u| u.x * u.x);
        assert!((f.integrate() - PI).abs() < 1e-13);
        assert!((EvenSphericalFunction::constant(g2, 1.0).integrate() - 2.0 * PI).abs() < 1e-13);
        let g3 = SphericalGrid::shared(3, 64).unwrap();
        let f = EvenSphericalFunction::from_fn(g3, |u| u.x * u.x);
        assert!((f.integrate() - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_odd_samples() {
        let g = SphericalGrid::shared(2, 8).unwrap();
        let mut v = vec![1.0; 8];
        v[1] = 2.0;
        assert!(matches!(EvenSphericalFunction::new(g, v), Err(Error::NotEven(1))));
    }

    #[test]
    fn singular_with_zero_exponent_matches_plain() {
        for (dim, res) in [(2, 720), (3, 64)] {
            let g = SphericalGrid::shared(dim, res).unwrap();
            let h = |u: &Vec3| (0.4 * u.x + 0.3 * u.y * u.y + 0.2 * u.z * u.z).cos() + u.x * u.x;
            let f = EvenSphericalFunction::from_fn(g, h);
            let s = singular_axis_quadrature(dim, &Vec3::new(0.6, 0.8, 0.0), 0.0, h, Parity::General, Default::default())
                .unwrap();
            assert!((s - f.integrate()).abs() < 1e-6, "{dim}: {s} {}", f.integrate());
        }
    }
}
