//! Origin-symmetric convex bodies and star bodies.

pub mod moments;
mod polytope;
pub mod random;
mod star;

pub use polytope::{Facet, SymmetricPolytope};
pub(crate) use polytope::fan;
pub use star::StarBody;

use crate::error::Result;
use crate::geom::{Mat3, Vec3};

/// Either representation, as read from a body file.
#[derive(Debug, Clone)]
pub enum Body {
    Polytope(SymmetricPolytope),
    Star(StarBody),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Polytope(p) => p.dim(),
            Body::Star(s) => s.dim(),
        }
    }

    pub fn radial(&self, x: &Vec3) -> f64 {
        match self {
            Body::Polytope(p) => p.radial(x),
            Body::Star(s) => s.radial(x),
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Body::Polytope(p) => p.volume(),
            Body::Star(s) => s.volume(),
        }
    }

    pub fn affine_image(&self, phi: &Mat3) -> Result<Self> {
        Ok(match self {
            Body::Polytope(p) => Body::Polytope(p.affine_image(phi)?),
            Body::Star(s) => Body::Star(s.affine_image(phi)?),
        })
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Ok(match self {
            Body::Polytope(p) => Body::Polytope(p.scaled(c)?),
            Body::Star(s) => Body::Star(s.scaled(c)?),
        })
    }

    pub fn as_polytope(&self) -> Option<&SymmetricPolytope> {
        match self {
            Body::Polytope(p) => Some(p),
            Body::Star(_) => None,
        }
    }
}

impl From<SymmetricPolytope> for Body {
    fn from(p: SymmetricPolytope) -> Self {
        Body::Polytope(p)
    }
}

impl From<StarBody> for Body {
    fn from(s: StarBody) -> Self {
        Body::Star(s)
    }
}

/// `[h e^{t f}]` on the normals of `base`, `f` given per antipodal pair.
#[derive(Debug, Clone)]
pub struct LogWulffFamily {
    pub base: SymmetricPolytope,
    pub direction: Vec<f64>,
}

impl LogWulffFamily {
    pub fn new(base: SymmetricPolytope, direction: Vec<f64>) -> Self {
        assert_eq!(direction.len(), base.pairs());
        Self { base, direction }
    }

    pub fn member(&self, t: f64) -> Result<SymmetricPolytope> {
        if t == 0.0 {
            return Ok(self.base.clone());
        }
        let h: Vec<f64> = self
            .base
            .half_support()
            .iter()
            .zip(&self.direction)
            .map(|(h, f)| h * (t * f).exp())
            .collect();
        self.base.with_support(&h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SphericalGrid;
    use std::f64::consts::PI;

    fn bisect_radial(p: &SymmetricPolytope, u: &Vec3) -> f64 {
        let inside = |x: &Vec3| p.normals().iter().zip(p.support()).all(|(v, h)| x.dot(v) <= *h);
        let (mut lo, mut hi) = (0.0, 1.0);
        while inside(&(u * hi)) {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if inside(&(u * mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn radial_matches_ray_march() {
        let hex = random::random_hexagon(11);
        let mut r = random::rng(5);
        use rand::Rng;
        for _ in 0..100 {
            let a: f64 = r.random_range(0.0..2.0 * PI);
            let u = Vec3::new(a.cos(), a.sin(), 0.0);
            assert!((hex.radial(&u) - bisect_radial(&hex, &u)).abs() < 1e-10);
        }
    }

    #[test]
    fn partition_counts() {
        let g = SphericalGrid::new(2, 720).unwrap();
        let count = |p: &SymmetricPolytope| {
            let part = p.reverse_image_partition(&g);
            let mut c = vec![0usize; p.len()];
            for j in part {
                c[j] += 1;
            }
            c
        };
        assert!(count(&SymmetricPolytope::cube(2).unwrap()).iter().all(|&c| c == 180));
        let hex = SymmetricPolytope::regular_polygon(3, 0.0).unwrap();
        assert!(count(&hex).iter().all(|&c| c == 120));
        let boxp = SymmetricPolytope::cuboid(&[3.0, 1.0]).unwrap();
        let c = count(&boxp);
        // facet x = 3 sees the angle 2·atan(1/3)
        let exact = 2.0 * (1.0f64 / 3.0).atan() / (2.0 * PI / 720.0);
        assert!((c[0] as f64 - exact).abs() <= 1.0, "{c:?} {exact}");
        assert_eq!(c[0] + c[1], 360);
    }

    #[test]
    fn gauss_map_consistency_and_duality() {
        let g = SphericalGrid::new(2, 360).unwrap();
        let hex = random::random_hexagon(2);
        for u in g.nodes() {
            let j = hex.radial_gauss_map(u);
            let rho = hex.radial(u);
            assert!((rho * u.dot(&hex.normals()[j]) - hex.support()[j]).abs() < 1e-10);
            assert!((rho * hex.gauge(u) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn log_wulff_family() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let fam = LogWulffFamily::new(sq.clone(), vec![0.5, -0.2]);
        assert_eq!(fam.member(0.0).unwrap(), sq);
        let m = fam.member(0.1).unwrap();
        assert!((m.support()[0] - (0.05f64).exp()).abs() < 1e-15);
        assert!((m.support()[3] - (-0.02f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn polygon_volume_matches_shoelace() {
        for seed in 0..5 {
            let p = random::random_hexagon(seed);
            let v = p.vertices();
            let c: Vec3 = Vec3::zeros();
            let mut ang: Vec<(f64, Vec3)> = v.iter().map(|x| ((x - c).y.atan2(x.x), *x)).collect();
            ang.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut s = 0.0;
            for i in 0..ang.len() {
                let (a, b) = (ang[i].1, ang[(i + 1) % ang.len()].1);
                s += a.x * b.y - a.y * b.x;
            }
            assert!((0.5 * s - p.volume()).abs() < 1e-12);
        }
    }
}
