use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::gauss::cached_legendre;
use crate::error::{Error, Result};
use crate::geom::{check_dim, Mat3, Vec3};
use crate::par::pairwise_sum;
use crate::special::sphere_area;

/// Quadrature rule family, as written in grid descriptors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridRule {
    /// `N` equally spaced angles on S¹ offset by half a step.
    UniformOffset,
    /// Gauss–Legendre in the polar cosine times `2N` offset longitudes on S².
    GaussLatlong,
}

/// `{"dim": n, "resolution": N, "rule": ...}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub dim: usize,
    pub resolution: usize,
    pub rule: GridRule,
}

impl GridDescriptor {
    pub fn build(&self) -> Result<SphericalGrid> {
        let expected = match self.dim {
            2 => GridRule::UniformOffset,
            _ => GridRule::GaussLatlong,
        };
        if self.rule != expected {
            return Err(Error::Invalid(format!(
                "rule {:?} is not available in dimension {}",
                self.rule, self.dim
            )));
        }
        SphericalGrid::new(self.dim, self.resolution)
    }
}

/// Antipodally symmetric quadrature grid on `S^{n-1}`, n ∈ {2, 3}.
///
/// For n = 2, `resolution` is the number of nodes. For n = 3 it is the number
/// of polar (Gauss–Legendre) rings; each ring carries `2·resolution`
/// longitudes. Nodes in the second half of the index range are exact
/// negations of the first half.
#[derive(Debug, Clone)]
pub struct SphericalGrid {
    dim: usize,
    resolution: usize,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    antipode: Vec<usize>,
    /// n = 3 only: polar cosines of the rings (ascending) and ring count/longitudes.
    rings: Vec<f64>,
    longitudes: usize,
}

/// Default resolutions: 720 nodes on S¹, 64 rings × 128 longitudes on S².
pub fn default_resolution(dim: usize) -> usize {
    if dim == 2 {
        720
    } else {
        64
    }
}

impl SphericalGrid {
    pub fn new(dim: usize, resolution: usize) -> Result<Self> {
        check_dim(dim)?;
        if resolution == 0 || resolution % 2 == 1 {
            return Err(Error::InvalidResolution(resolution));
        }
        Ok(if dim == 2 {
            Self::circle(resolution)
        } else {
            Self::latlong(resolution)
        })
    }

    pub fn shared(dim: usize, resolution: usize) -> Result<Arc<Self>> {
        Self::new(dim, resolution).map(Arc::new)
    }

    fn circle(n: usize) -> Self {
        let half = n / 2;
        let mut nodes = Vec::with_capacity(n);
        for j in 0..half {
            let theta = PI * (2 * j + 1) as f64 / n as f64;
            nodes.push(Vec3::new(theta.cos(), theta.sin(), 0.0));
        }
        for j in 0..half {
            nodes.push(-nodes[j]);
        }
        let antipode = (0..n).map(|i| (i + half) % n).collect();
        Self {
            dim: 2,
            resolution: n,
            nodes,
            weights: vec![2.0 * PI / n as f64; n],
            antipode,
            rings: Vec::new(),
            longitudes: n,
        }
    }

    fn latlong(rings: usize) -> Self {
        let gl = cached_legendre(rings);
        let lon = 2 * rings;
        let total = rings * lon;
        let mut nodes = vec![Vec3::zeros(); total];
        let mut weights = vec![0.0; total];
        let mut antipode = vec![0; total];
        let dphi = 2.0 * PI / lon as f64;
        for k in 0..rings {
            let z = gl.nodes[k];
            let s = (1.0 - z * z).sqrt();
            for m in 0..lon {
                let i = k * lon + m;
                let j = (rings - 1 - k) * lon + (m + lon / 2) % lon;
                antipode[i] = j;
                weights[i] = gl.weights[k] * dphi;
                if k < rings / 2 {
                    let phi = dphi * (m as f64 + 0.5);
                    nodes[i] = Vec3::new(s * phi.cos(), s * phi.sin(), z);
                }
            }
        }
        for k in rings / 2..rings {
            for m in 0..lon {
                let i = k * lon + m;
                nodes[i] = -nodes[antipode[i]];
                weights[i] = weights[antipode[i]];
            }
        }
        Self {
            dim: 3,
            resolution: rings,
            nodes,
            weights,
            antipode,
            rings: gl.nodes.clone(),
            longitudes: lon,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            dim: self.dim,
            resolution: self.resolution,
            rule: if self.dim == 2 {
                GridRule::UniformOffset
            } else {
                GridRule::GaussLatlong
            },
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Vec3 {
        &self.nodes[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    /// Indices whose antipodes lie in the second half: one representative per pair.
    pub fn half(&self) -> usize {
        self.nodes.len() / 2
    }

    pub(crate) fn ring_cosines(&self) -> &[f64] {
        &self.rings
    }

    pub(crate) fn longitudes(&self) -> usize {
        self.longitudes
    }

    /// Surface measure of the sphere, `2π` or `4π`.
    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.dim)
    }

    /// `Σ w_i f(u_i)` with pairwise accumulation.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len());
        crate::par::pairwise_dot(&self.weights, values)
    }

    pub fn weight_sum(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn rule(&self) -> QuadratureRule {
        QuadratureRule {
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
        }
    }

    /// Pushes the rule forward under `w ↦ ⟨A w⟩`, with Jacobian
    /// `|det A| / |A w|^n`. The result integrates the same functions as the
    /// base grid but concentrates nodes where `A` stretches.
    pub fn warped(&self, a: &Mat3) -> QuadratureRule {
        let det = a.determinant().abs();
        let n = self.dim as i32;
        let mut nodes = Vec::with_capacity(self.len());
        let mut weights = Vec::with_capacity(self.len());
        for (u, w) in self.nodes.iter().zip(&self.weights) {
            let aw = a * u;
            let r = aw.norm();
            nodes.push(aw / r);
            weights.push(w * det / r.powi(n));
        }
        QuadratureRule { nodes, weights }
    }
}

/// Plain node/weight list on the sphere, e.g. a warped grid.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Vec3>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_grid_basics() {
        let g = SphericalGrid::new(2, 8).unwrap();
        assert_eq!(g.len(), 8);
        for (j, u) in g.nodes().iter().enumerate() {
            let theta = PI * (2 * j + 1) as f64 / 8.0;
            assert!((u.x - theta.cos()).abs() < 1e-15 && (u.y - theta.sin()).abs() < 1e-15);
            assert!((g.weights()[j] - PI / 4.0).abs() < 1e-16);
        }
        let g = SphericalGrid::new(2, 720).unwrap();
        assert_eq!(g.weight_sum(), 2.0 * PI);
    }

    #[test]
    fn latlong_weights_sum_to_area() {
        let g = SphericalGrid::new(3, 64).unwrap();
        assert_eq!(g.len(), 64 * 128);
        assert!((g.weight_sum() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn antipode_is_exact_involution() {
        for (dim, res) in [(2, 30), (3, 10)] {
            let g = SphericalGrid::new(dim, res).unwrap();
            for i in 0..g.len() {
                let j = g.antipode(i);
                assert_eq!(g.antipode(j), i);
                assert_eq!(*g.node(j), -*g.node(i));
                assert_eq!(g.weights()[i], g.weights()[j]);
                assert!((g.node(i).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(SphericalGrid::new(2, 7), Err(Error::InvalidResolution(7))));
        assert!(matches!(SphericalGrid::new(4, 8), Err(Error::UnsupportedDimension(4))));
        assert!(SphericalGrid::new(2, 0).is_err());
    }

    #[test]
    fn warped_rule_keeps_total_measure() {
        let g = SphericalGrid::new(2, 720).unwrap();
        let a = Mat3::new(3.0, 0.5, 0.0, 0.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 1.0);
        let r = g.warped(&a);
        let s: f64 = pairwise_sum(&r.weights);
        assert!((s - 2.0 * PI).abs() < 1e-10, "{s}");
        let g = SphericalGrid::new(3, 48).unwrap();
        let r = 0.5f64.sqrt();
        let a = Mat3::new(2.0, 0.0, 0.0, 0.0, r, 0.0, 0.0, 0.0, r);
        let r = g.warped(&a);
        let s: f64 = pairwise_sum(&r.weights);
        assert!((s - 4.0 * PI).abs() < 1e-8, "{s}");
    }
}
