//! Small fixed-size linear algebra shared by both supported dimensions.
//!
//! Points of R² are stored as `Vec3` with a zero third coordinate and linear
//! maps of R² as `Mat3` with `[2][2] = 1`, so every formula below is written
//! once for n = 2 and n = 3.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

pub fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

pub fn vec_from_slice(dim: usize, xs: &[f64]) -> Result<Vec3> {
    if xs.len() != dim {
        return Err(Error::Invalid(format!(
            "expected a {dim}-vector, got {} components",
            xs.len()
        )));
    }
    let mut v = Vec3::zeros();
    for (i, x) in xs.iter().enumerate() {
        v[i] = *x;
    }
    Ok(v)
}

pub fn vec_to_vec(dim: usize, v: &Vec3) -> Vec<f64> {
    (0..dim).map(|i| v[i]).collect()
}

/// `x / |x|`; vectors already unit to rounding come back untouched, so
/// normalizing twice (or after a JSON round trip) is lossless.
pub fn unit(v: &Vec3) -> Vec3 {
    let r = v.norm();
    if (r - 1.0).abs() <= 2.0 * f64::EPSILON {
        *v
    } else {
        v / r
    }
}

/// Embeds an n×n row-major matrix.
pub fn mat_from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Mat3> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Invalid(format!("expected a {dim}x{dim} matrix")));
    }
    let mut m = Mat3::identity();
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = rows[i][j];
        }
    }
    Ok(m)
}

/// Rejects maps that are not in SL(n) up to `1e-10`.
pub fn check_unimodular(phi: &Mat3) -> Result<()> {
    let dev = (phi.determinant() - 1.0).abs();
    if dev < 1e-10 {
        Ok(())
    } else {
        Err(Error::NotUnimodular(dev))
    }
}

/// A unit vector orthogonal to `u` (n = 2: rotation by +π/2).
pub fn perp2(u: &Vec3) -> Vec3 {
    Vec3::new(-u.y, u.x, 0.0)
}

/// Orthonormal `(a, b)` with `a × b = u` for a unit `u` in R³.
pub fn frame3(u: &Vec3) -> (Vec3, Vec3) {
    // Branch-free construction (Duff et al.), stable for every unit u.
    let sign = 1f64.copysign(u.z);
    let a = -1.0 / (sign + u.z);
    let b = u.x * u.y * a;
    let e1 = Vec3::new(1.0 + sign * u.x * u.x * a, sign * b, -sign * u.x);
    let e2 = Vec3::new(b, sign + u.y * u.y * a, -u.y);
    (e1, e2)
}

/// Rotation of R² by `angle`, embedded in a `Mat3`.
pub fn rotation2(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Rotation of R³ about a unit axis.
pub fn rotation3(axis: &Vec3, angle: f64) -> Mat3 {
    let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(*axis), angle);
    *rot.matrix()
}

/// Symmetric inverse square root of a positive definite `dim`×`dim` block,
/// rescaled to determinant one.
pub fn unimodular_inv_sqrt(dim: usize, cov: &Mat3) -> Mat3 {
    let mut m = *cov;
    if dim == 2 {
        m[(2, 2)] = 1.0;
        m[(0, 2)] = 0.0;
        m[(1, 2)] = 0.0;
        m[(2, 0)] = 0.0;
        m[(2, 1)] = 0.0;
    }
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut d = Mat3::zeros();
    for i in 0..3 {
        d[(i, i)] = 1.0 / eig.eigenvalues[i].max(f64::MIN_POSITIVE).sqrt();
    }
    let mut a = eig.eigenvectors * d * eig.eigenvectors.transpose();
    let det = a.determinant();
    let s = det.powf(-1.0 / dim as f64);
    for i in 0..dim {
        for j in 0..dim {
            a[(i, j)] *= s;
        }
    }
    if dim == 2 {
        a[(2, 2)] = 1.0;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal_and_oriented() {
        for u in [
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.0, -1.0),
            unit(&Vec3::new(0.3, -0.2, 0.9)),
            unit(&Vec3::new(-1.0, 2.0, -0.1)),
        ] {
            let (a, b) = frame3(&u);
            assert!((a.norm() - 1.0).abs() < 1e-14);
            assert!((b.norm() - 1.0).abs() < 1e-14);
            assert!(a.dot(&b).abs() < 1e-14);
            assert!((a.cross(&b) - u).norm() < 1e-14);
        }
    }

    #[test]
    fn inv_sqrt_whitens() {
        let cov = Mat3::new(4.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0);
        let a = unimodular_inv_sqrt(2, &cov);
        assert!((a.determinant() - 1.0).abs() < 1e-12);
        let w = a * cov * a.transpose();
        // A Cov Aᵗ is a multiple of the identity on the 2x2 block.
        assert!((w[(0, 0)] - w[(1, 1)]).abs() < 1e-12);
        assert!(w[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn unimodular_check() {
        assert!(check_unimodular(&rotation2(0.3)).is_ok());
        let m = Mat3::new(2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(check_unimodular(&m), Err(Error::NotUnimodular(_))));
    }
}
