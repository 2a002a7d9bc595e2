//! The p-cosine transform `T_p f(u) = ∫ f(v)|u·v|^p dv` and the spherical
//! Radon transform.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{frame3, perp2, Vec3};
use crate::par::{map_indexed, pairwise_sum};
use crate::sphere::{
    singular_axis_quadrature, EvenSphericalFunction, Interpolant, Parity, SingularOrders, SphericalGrid,
};

/// Points per great circle in the S² Radon transform.
pub const RADON_CIRCLE_POINTS: usize = 256;

#[derive(Debug, Clone)]
pub struct TransformResult {
    pub grid: Arc<SphericalGrid>,
    pub values: Vec<f64>,
    /// `p` for `T_p`, `None` for the Radon transform.
    pub kernel_exponent: Option<f64>,
}

impl TransformResult {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `T_p f` at every grid node. The kernel `|t|^p` is absorbed into a
/// Gauss–Jacobi axial rule with `f` interpolated; only even integer `p`
/// (a polynomial kernel) uses the grid rule directly.
pub fn p_cosine_transform(f: &EvenSphericalFunction, p: f64) -> Result<TransformResult> {
    if !(p > -1.0) {
        return Err(Error::NonIntegrableKernel(p));
    }
    let grid = Arc::clone(f.grid());
    let dim = grid.dim();
    let half = grid.half();
    let polynomial = p >= 0.0 && p.fract() == 0.0 && (p as i64) % 2 == 0;
    let first: Vec<f64> = if !polynomial {
        let it = f.interpolant();
        let out = map_indexed(half, |i| {
            singular_axis_quadrature(dim, grid.node(i), p, |v| it.eval(v), Parity::Even, SingularOrders::default())
        });
        out.into_iter().collect::<Result<_>>()?
    } else {
        let w = grid.weights();
        let vals = f.values();
        map_indexed(half, |i| {
            let u = grid.node(i);
            let terms: Vec<f64> = grid
                .nodes()
                .iter()
                .zip(w)
                .zip(vals)
                .map(|((v, wi), fi)| wi * fi * u.dot(v).abs().powf(p))
                .collect();
            pairwise_sum(&terms)
        })
    };
    Ok(TransformResult { values: mirror(&grid, first), grid, kernel_exponent: Some(p) })
}

fn mirror(grid: &SphericalGrid, first: Vec<f64>) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    for (i, v) in first.into_iter().enumerate() {
        out[i] = v;
        out[grid.antipode(i)] = v;
    }
    out
}

/// `∫_{S^{n-1} ∩ u^⊥} g` for a function of a direction.
pub fn radon_at<G: Fn(&Vec3) -> f64>(dim: usize, u: &Vec3, g: G) -> f64 {
    if dim == 2 {
        let v = perp2(u);
        return g(&v) + g(&-v);
    }
    let (a, b) = frame3(&u.normalize());
    let m = RADON_CIRCLE_POINTS;
    let d = 2.0 * PI / m as f64;
    let terms: Vec<f64> = (0..m)
        .map(|k| {
            let phi = d * (k as f64 + 0.5);
            g(&(a * phi.cos() + b * phi.sin()))
        })
        .collect();
    pairwise_sum(&terms) * d
}

/// `Rf` at every grid node, through the interpolant of `f`.
pub fn radon_transform(f: &EvenSphericalFunction) -> TransformResult {
    let grid = Arc::clone(f.grid());
    let it: Interpolant = f.interpolant();
    let first = map_indexed(grid.half(), |i| radon_at(grid.dim(), grid.node(i), |v| it.eval(v)));
    TransformResult { values: mirror(&grid, first), grid, kernel_exponent: None }
}

/// `max_u |(1−p)/2 · T_{−p}f(u) − Rf(u)| / Rf(u)`.
pub fn limit_consistency_check(f: &EvenSphericalFunction, p: f64) -> Result<f64> {
    let t = p_cosine_transform(f, -p)?;
    let r = radon_transform(f);
    let c = (1.0 - p) / 2.0;
    Ok(t.values
        .iter()
        .zip(&r.values)
        .map(|(a, b)| (c * a - b).abs() / b.abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;

    fn grid(dim: usize, res: usize) -> Arc<SphericalGrid> {
        SphericalGrid::shared(dim, res).unwrap()
    }

    #[test]
    fn constant_transforms() {
        let g = grid(2, 720);
        let one = EvenSphericalFunction::constant(g.clone(), 1.0);
        let t = p_cosine_transform(&one, 0.5).unwrap();
        let exact = 2.0 * beta(0.75, 0.5);
        assert!(t.values.iter().all(|v| (v - exact).abs() < 1e-10 * exact));
        let t = p_cosine_transform(&one, -0.5).unwrap();
        let exact = 2.0 * beta(0.25, 0.5);
        assert!(t.values.iter().all(|v| (v - exact).abs() < 1e-10 * exact));
        let zero = EvenSphericalFunction::constant(g, 0.0);
        assert!(p_cosine_transform(&zero, -0.3).unwrap().max_abs() == 0.0);
        assert!(p_cosine_transform(&one, -1.0).is_err());
    }

    #[test]
    fn singular_transform_of_coordinate_square() {
        // T_{-1/2}(v1²)(e1) = ∫ cos²θ |cosθ|^{-1/2} dθ = 2 B(5/4, 1/2)
        let g = grid(2, 720);
        let f = EvenSphericalFunction::from_fn(g, |v| v.x * v.x);
        let t = p_cosine_transform(&f, -0.5).unwrap();
        let it = Interpolant::new(&t.grid, &t.values);
        let exact = 2.0 * beta(1.25, 0.5);
        assert!((it.eval(&Vec3::x()) - exact).abs() < 1e-6, "{}", it.eval(&Vec3::x()));
    }

    #[test]
    fn radon_basics() {
        let g = grid(3, 16);
        let one = EvenSphericalFunction::constant(g.clone(), 1.0);
        assert!(radon_transform(&one).values.iter().all(|v| (v - 2.0 * PI).abs() < 1e-12));
        let f = EvenSphericalFunction::from_fn(grid(3, 32), |v| v.z * v.z);
        let it = f.interpolant();
        let r = radon_at(3, &Vec3::z(), |v| it.eval(v));
        assert!(r.abs() < 1e-3, "{r}");
        let g2 = grid(2, 64);
        let f = EvenSphericalFunction::from_fn(g2.clone(), |v| 1.0 + v.x * v.x);
        let r = radon_transform(&f);
        for (u, val) in g2.nodes().iter().zip(&r.values) {
            let w = perp2(u);
            assert!((val - 2.0 * (1.0 + w.x * w.x)).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_towards_radon() {
        let g = grid(2, 720);
        let one = EvenSphericalFunction::constant(g, 1.0);
        let d99 = limit_consistency_check(&one, 0.99).unwrap();
        let d999 = limit_consistency_check(&one, 0.999).unwrap();
        assert!(d99 <= 0.02 && d999 < d99, "{d99} {d999}");
        let g3 = grid(3, 16);
        let one = EvenSphericalFunction::constant(g3, 1.0);
        assert!(limit_consistency_check(&one, 0.99).unwrap() <= 0.02);
    }

    #[test]
    fn rotation_equivariance() {
        let g = grid(2, 360);
        let f = |v: &Vec3| 1.0 + 0.5 * v.x * v.x + 0.2 * v.x * v.y;
        let rot = crate::geom::rotation2(0.4);
        let inv = rot.transpose();
        let a = p_cosine_transform(&EvenSphericalFunction::from_fn(g.clone(), f), -0.4).unwrap();
        let b = p_cosine_transform(&EvenSphericalFunction::from_fn(g.clone(), |v| f(&(inv * v))), -0.4).unwrap();
        let ia = Interpolant::new(&g, &a.values);
        for (u, bv) in g.nodes().iter().zip(&b.values) {
            assert!((ia.eval(&(inv * u)) - bv).abs() < 1e-5 * bv);
        }
    }
}
