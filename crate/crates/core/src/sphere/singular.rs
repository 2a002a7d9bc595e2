use std::f64::consts::PI;

use super::gauss::cached_jacobi;
use crate::error::{Error, Result};
use crate::geom::{check_dim, frame3, perp2, Vec3};

/// Orders of the product rule used by [`singular_axis_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularOrders {
    /// Gauss–Jacobi points in `t = pole·v` on `[0, 1]`.
    pub polar: usize,
    /// Uniform azimuth points (S² only).
    pub azimuth: usize,
}

impl Default for SingularOrders {
    fn default() -> Self {
        Self { polar: 64, azimuth: 64 }
    }
}

/// Whether `g(-v) = g(v)` may be assumed, halving the evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    General,
}

const LOG_STEP: f64 = 1e-3;

/// `∫_{S^{n-1}} |pole·v|^exponent g(v) dv`.
///
/// The polar variable `t = |pole·v|` is integrated by Gauss–Jacobi with the
/// weight `t^exponent` (and `(1-t)^{-1/2}` on S¹, from the arc-length
/// density), so the kernel singularity costs nothing.
pub fn singular_axis_quadrature<G>(
    dim: usize,
    pole: &Vec3,
    exponent: f64,
    g: G,
    parity: Parity,
    orders: SingularOrders,
) -> Result<f64>
where
    G: Fn(&Vec3) -> f64,
{
    check_dim(dim)?;
    if !(exponent > -1.0) || !exponent.is_finite() {
        return Err(Error::NonIntegrableKernel(exponent));
    }
    let pole = pole.normalize();
    let both = |v: Vec3| match parity {
        Parity::Even => 2.0 * g(&v),
        Parity::General => g(&v) + g(&-v),
    };
    if dim == 2 {
        let w = perp2(&pole);
        let rule = cached_jacobi(orders.polar, -0.5, exponent);
        let mut acc = 0.0;
        for (t, wt) in rule.on_unit_interval() {
            let s = (1.0 - t * t).max(0.0).sqrt();
            let f = both(pole * t + w * s) + both(pole * t - w * s);
            acc += wt * f / (1.0 + t).sqrt();
        }
        Ok(acc)
    } else {
        let (a, b) = frame3(&pole);
        let rule = cached_jacobi(orders.polar, 0.0, exponent);
        let m = orders.azimuth;
        let dphi = 2.0 * PI / m as f64;
        let trig: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let phi = dphi * (k as f64 + 0.5);
                (phi.cos(), phi.sin())
            })
            .collect();
        let mut acc = 0.0;
        for (t, wt) in rule.on_unit_interval() {
            let s = (1.0 - t * t).max(0.0).sqrt();
            let mut ring = 0.0;
            for (c, sn) in &trig {
                ring += both(pole * t + (a * *c + b * *sn) * s);
            }
            acc += wt * ring * dphi;
        }
        Ok(acc)
    }
}

/// `∫_{S^{n-1}} ln|pole·v| g(v) dv`, as the exponent derivative of
/// [`singular_axis_quadrature`] at 0 (central difference).
pub fn singular_axis_log<G>(
    dim: usize,
    pole: &Vec3,
    g: G,
    parity: Parity,
    orders: SingularOrders,
) -> Result<f64>
where
    G: Fn(&Vec3) -> f64,
{
    let hi = singular_axis_quadrature(dim, pole, LOG_STEP, &g, parity, orders)?;
    let lo = singular_axis_quadrature(dim, pole, -LOG_STEP, &g, parity, orders)?;
    Ok((hi - lo) / (2.0 * LOG_STEP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;

    fn one(_: &Vec3) -> f64 {
        1.0
    }

    #[test]
    fn circle_constant() {
        let p = Vec3::new(0.3, -0.8, 0.0).normalize();
        let v = singular_axis_quadrature(2, &p, -0.5, one, Parity::Even, Default::default()).unwrap();
        assert!((v - 2.0 * beta(0.25, 0.5)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn sphere_first_moment() {
        let p = Vec3::new(0.2, 0.1, 0.9).normalize();
        let v = singular_axis_quadrature(3, &p, 1.0, one, Parity::Even, Default::default()).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn zero_function_and_bad_exponent() {
        let p = Vec3::x();
        let z = singular_axis_quadrature(3, &p, -0.7, |_| 0.0, Parity::General, Default::default());
        assert_eq!(z.unwrap(), 0.0);
        assert!(matches!(
            singular_axis_quadrature(2, &p, -1.0, one, Parity::Even, Default::default()),
            Err(Error::NonIntegrableKernel(_))
        ));
    }

    #[test]
    fn general_parity_matches_even_for_even_input() {
        let p = Vec3::new(1.0, 2.0, 2.0) / 3.0;
        let g = |v: &Vec3| 1.0 + v.x * v.x + 0.5 * v.y * v.z;
        let a = singular_axis_quadrature(3, &p, -0.4, g, Parity::Even, Default::default()).unwrap();
        let b = singular_axis_quadrature(3, &p, -0.4, g, Parity::General, Default::default()).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
        // odd part integrates to zero
        let odd = |v: &Vec3| v.x;
        let c = singular_axis_quadrature(3, &p, -0.4, odd, Parity::General, Default::default()).unwrap();
        assert!(c.abs() < 1e-13);
    }

    #[test]
    fn log_kernel_on_circle() {
        // ∫_{S¹} ln|cos θ| dθ = -2π ln 2
        let v = singular_axis_log(2, &Vec3::y(), one, Parity::Even, Default::default()).unwrap();
        assert!((v + 2.0 * PI * 2f64.ln()).abs() < 1e-5, "{v}");
    }
}
