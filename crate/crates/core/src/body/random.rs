//! Seeded random symmetric polytopes.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SymmetricPolytope;
use crate::error::{Error, Result};
use crate::geom::Vec3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Convex hull of `±x_1, ..., ±x_k` in the plane, in facet form.
pub fn hull2(points: &[Vec3]) -> Result<SymmetricPolytope> {
    let mut pts: Vec<Vec3> = points.iter().flat_map(|p| [*p, -*p]).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let cross = |o: &Vec3, a: &Vec3, b: &Vec3| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut hull: Vec<Vec3> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec3>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 1e-14 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() < 4 {
        return Err(Error::NotSpanning(1));
    }
    let mut normals = Vec::new();
    let mut support = Vec::new();
    for i in 0..hull.len() {
        let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
        let e = b - a;
        let v = Vec3::new(e.y, -e.x, 0.0).normalize();
        normals.push(v);
        support.push(v.dot(&a));
    }
    SymmetricPolytope::from_normals(2, &normals, &support)
}

/// Convex hull of `±x_1, ..., ±x_k` in space (points in general position).
pub fn hull3(points: &[Vec3]) -> Result<SymmetricPolytope> {
    let pts: Vec<Vec3> = points.iter().flat_map(|p| [*p, -*p]).collect();
    let n = pts.len();
    let mut normals: Vec<Vec3> = Vec::new();
    let mut support = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut v = (pts[j] - pts[i]).cross(&(pts[k] - pts[i]));
                let r = v.norm();
                if r < 1e-12 {
                    continue;
                }
                v /= r;
                let mut h = v.dot(&pts[i]);
                if h < 0.0 {
                    v = -v;
                    h = -h;
                }
                if h < 1e-12 {
                    continue;
                }
                let outside = pts.iter().any(|p| v.dot(p) > h + 1e-10);
                let dup = normals.iter().any(|w: &Vec3| (w - v).norm() < 1e-9);
                if !outside && !dup {
                    normals.push(v);
                    support.push(h);
                }
            }
        }
    }
    SymmetricPolytope::from_normals(3, &normals, &support)?.pruned()
}

/// Random symmetric polygon with exactly `2k` vertices: directions jittered
/// around a uniform fan, radii in `[0.6, 1.4]`, resampled until convex
/// position holds.
pub fn random_polygon<R: Rng>(rng: &mut R, k: usize) -> Result<SymmetricPolytope> {
    for _ in 0..10_000 {
        let pts: Vec<Vec3> = (0..k)
            .map(|i| {
                let a = std::f64::consts::PI * (i as f64 + rng.random_range(-0.3..0.3)) / k as f64;
                let r = rng.random_range(0.6..1.4);
                Vec3::new(r * a.cos(), r * a.sin(), 0.0)
            })
            .collect();
        let p = hull2(&pts)?;
        if p.pairs() == k && p.facets().iter().all(|f| f.active) {
            return Ok(p);
        }
    }
    Err(Error::Invalid("could not sample a convex polygon".into()))
}

/// Random symmetric polygon from `k` point pairs drawn uniformly from the annulus
/// `0.5 ≤ |x| ≤ 1.5`; the vertex count may be below `2k`.
pub fn random_hull2<R: Rng>(rng: &mut R, k: usize) -> Result<SymmetricPolytope> {
    let pts: Vec<Vec3> = (0..k)
        .map(|_| {
            let a = rng.random_range(0.0..std::f64::consts::PI);
            let r = rng.random_range(0.5..1.5);
            Vec3::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect();
    hull2(&pts)
}

/// Random symmetric polytope in ℝ³ from `k ≥ 3` point pairs.
pub fn random_polytope3<R: Rng>(rng: &mut R, k: usize) -> Result<SymmetricPolytope> {
    for _ in 0..1000 {
        let pts: Vec<Vec3> = (0..k)
            .map(|_| {
                let z: f64 = rng.random_range(-1.0..1.0);
                let a = rng.random_range(0.0..2.0 * std::f64::consts::PI);
                let s = (1.0 - z * z).sqrt();
                Vec3::new(s * a.cos(), s * a.sin(), z) * rng.random_range(0.6..1.4)
            })
            .collect();
        if let Ok(p) = hull3(&pts) {
            if p.volume() > 0.2 {
                return Ok(p);
            }
        }
    }
    Err(Error::Invalid("could not sample a polytope".into()))
}

/// Random symmetric hexagon.
pub fn random_hexagon(seed: u64) -> SymmetricPolytope {
    random_polygon(&mut rng(seed), 3).expect("hexagon sampling")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagons_have_six_active_facets() {
        for seed in 0..20 {
            let h = random_hexagon(seed);
            assert_eq!(h.len(), 6);
            assert!(h.facets().iter().all(|f| f.active));
        }
    }

    #[test]
    fn hull3_of_octahedron_points() {
        let p = hull3(&[Vec3::x(), Vec3::y(), Vec3::z()]);
        // the octahedron: all triangles, 8 facets
        let p = p.unwrap();
        assert_eq!(p.len(), 8);
        assert!((p.volume() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_polytopes_are_valid() {
        let mut r = rng(3);
        for _ in 0..5 {
            let p = random_polytope3(&mut r, 5).unwrap();
            let area: f64 = p.facets().iter().map(|f| f.area).sum();
            assert!(area > 0.0);
            for v in p.vertices() {
                assert!((p.radial(&v) - 1.0).abs() < 1e-9);
            }
        }
    }
}
