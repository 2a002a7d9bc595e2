use log::warn;

use crate::error::{Error, Result};
use crate::geom::{check_dim, check_unimodular, frame3, perp2, Mat3, Vec3};
use crate::sphere::SphericalGrid;

const PAIR_TOL: f64 = 1e-9;

/// Boundary piece of a polytope on the hyperplane `x·v = h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Whether the hyperplane actually touches the Wulff shape in a facet.
    pub active: bool,
    /// (n−1)-dimensional measure: edge length (n = 2) or polygon area (n = 3).
    pub area: f64,
    /// Endpoints in counter-clockwise order (n = 2), or polygon vertices
    /// counter-clockwise when seen from outside (n = 3).
    pub vertices: Vec<Vec3>,
}

/// Origin-symmetric polytope `{x : x·v_i ≤ h_i}` with `v_{i+m} = −v_i` and
/// `h_{i+m} = h_i`, where `m` is the number of pairs.
#[derive(Debug, Clone)]
pub struct SymmetricPolytope {
    dim: usize,
    normals: Vec<Vec3>,
    support: Vec<f64>,
    facets: Vec<Facet>,
}

impl PartialEq for SymmetricPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.normals == other.normals && self.support == other.support
    }
}

impl SymmetricPolytope {
    /// Wulff shape of one normal per antipodal pair, `half_normals[i]` with
    /// support `half_support[i]`. Normals are normalized; facets that do not
    /// touch the shape are kept and flagged inactive.
    pub fn from_pairs(dim: usize, half_normals: &[Vec3], half_support: &[f64]) -> Result<Self> {
        check_dim(dim)?;
        if half_normals.len() != half_support.len() {
            return Err(Error::Invalid("normals and support differ in length".into()));
        }
        let m = half_normals.len();
        let mut normals = Vec::with_capacity(2 * m);
        let mut support = Vec::with_capacity(2 * m);
        for (v, &h) in half_normals.iter().zip(half_support) {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::NonPositiveSupport(h));
            }
            let mut v = *v;
            if dim == 2 {
                v.z = 0.0;
            }
            let r = v.norm();
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::Invalid("zero facet normal".into()));
            }
            normals.push(crate::geom::unit(&v));
            support.push(h);
        }
        for k in 0..m {
            normals.push(-normals[k]);
            support.push(support[k]);
        }
        let facets = wulff_geometry(dim, &normals, &support)?;
        Ok(Self { dim, normals, support, facets })
    }

    /// Accepts an arbitrary normal list. Antipodal partners are matched up to
    /// `1e-9`; unpaired normals get a mirrored copy (with a warning), and
    /// paired supports must agree to the same tolerance.
    pub fn from_normals(dim: usize, normals: &[Vec3], support: &[f64]) -> Result<Self> {
        if normals.len() != support.len() {
            return Err(Error::Invalid("normals and support differ in length".into()));
        }
        let units: Vec<Vec3> = normals
            .iter()
            .map(|v| {
                let mut v = *v;
                if dim == 2 {
                    v.z = 0.0;
                }
                crate::geom::unit(&v)
            })
            .collect();
        let mut used = vec![false; units.len()];
        let mut half_n = Vec::new();
        let mut half_h = Vec::new();
        let mut unpaired = 0;
        for i in 0..units.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let partner = (i + 1..units.len()).find(|&j| !used[j] && (units[j] + units[i]).norm() < PAIR_TOL);
            let h = match partner {
                Some(j) => {
                    used[j] = true;
                    let (a, b) = (support[i], support[j]);
                    if (a - b).abs() > PAIR_TOL * a.abs().max(b.abs()) {
                        return Err(Error::Invalid(format!(
                            "supports {a} and {b} on antipodal normals differ"
                        )));
                    }
                    0.5 * (a + b)
                }
                None => {
                    unpaired += 1;
                    support[i]
                }
            };
            half_n.push(units[i]);
            half_h.push(h);
        }
        if unpaired > 0 {
            warn!("{unpaired} facet normal(s) had no antipodal partner; mirrored copies added");
        }
        Self::from_pairs(dim, &half_n, &half_h)
    }

    /// `[-a_1, a_1] × ... × [-a_n, a_n]`.
    pub fn cuboid(half_widths: &[f64]) -> Result<Self> {
        let dim = half_widths.len();
        check_dim(dim)?;
        let normals: Vec<Vec3> = (0..dim).map(|i| Vec3::ith(i, 1.0)).collect();
        Self::from_pairs(dim, &normals, half_widths)
    }

    pub fn cube(dim: usize) -> Result<Self> {
        Self::cuboid(&vec![1.0; dim])
    }

    /// Regular `2m`-gon circumscribed about the unit circle, with a facet normal at angle `offset`.
    pub fn regular_polygon(m: usize, offset: f64) -> Result<Self> {
        let normals: Vec<Vec3> = (0..m)
            .map(|k| {
                let a = offset + std::f64::consts::PI * k as f64 / m as f64;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        Self::from_pairs(2, &normals, &vec![1.0; m])
    }

    /// `{x : Σ|x_i| ≤ 1}` in ℝ³.
    pub fn cross_polytope3() -> Result<Self> {
        let s = 1.0 / 3f64.sqrt();
        let normals = [
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, 1.0, -1.0),
            Vec3::new(1.0, -1.0, 1.0),
            Vec3::new(-1.0, 1.0, 1.0),
        ];
        Self::from_pairs(3, &normals, &[s; 4])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of antipodal pairs `m`; there are `2m` facets.
    pub fn pairs(&self) -> usize {
        self.normals.len() / 2
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn antipode(&self, k: usize) -> usize {
        let m = self.pairs();
        (k + m) % (2 * m)
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn half_support(&self) -> &[f64] {
        &self.support[..self.pairs()]
    }

    pub fn half_normals(&self) -> &[Vec3] {
        &self.normals[..self.pairs()]
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_active(&self, k: usize) -> bool {
        self.facets[k].active
    }

    /// Same normals, new supports (one per pair).
    pub fn with_support(&self, half_support: &[f64]) -> Result<Self> {
        Self::from_pairs(self.dim, self.half_normals(), half_support)
    }

    /// Drops inactive facets.
    pub fn pruned(&self) -> Result<Self> {
        let m = self.pairs();
        let keep: Vec<usize> = (0..m).filter(|&k| self.facets[k].active).collect();
        let n: Vec<Vec3> = keep.iter().map(|&k| self.normals[k]).collect();
        let h: Vec<f64> = keep.iter().map(|&k| self.support[k]).collect();
        Self::from_pairs(self.dim, &n, &h)
    }

    /// `max_i (u·v_i)/h_i`, the gauge of `u`.
    pub fn gauge(&self, u: &Vec3) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for (v, h) in self.normals.iter().zip(&self.support) {
            let r = u.dot(v) / h;
            if r > best {
                best = r;
            }
        }
        best
    }

    /// `ρ(u) = min{h_i/(u·v_i) : u·v_i > 0}`, homogeneous of degree −1.
    pub fn radial(&self, u: &Vec3) -> f64 {
        1.0 / self.gauge(u)
    }

    pub fn try_radial(&self, u: &Vec3) -> Result<f64> {
        let g = self.gauge(u);
        if g > 0.0 {
            Ok(1.0 / g)
        } else {
            Err(Error::Unbounded([u.x, u.y, u.z]))
        }
    }

    /// Radial Gauss map: the facet hit by the ray through `u`, ties to the lowest index.
    pub fn radial_gauss_map(&self, u: &Vec3) -> usize {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for (k, (v, h)) in self.normals.iter().zip(&self.support).enumerate() {
            let r = u.dot(v) / h;
            if r > best {
                best = r;
                arg = k;
            }
        }
        arg
    }

    /// Facet index of every grid node.
    pub fn reverse_image_partition(&self, grid: &SphericalGrid) -> Vec<usize> {
        crate::par::map_indexed(grid.len(), |i| self.radial_gauss_map(grid.node(i)))
    }

    /// `h_K(x) = max over vertices of x·y`.
    pub fn support_fn(&self, x: &Vec3) -> f64 {
        self.vertices().iter().map(|y| x.dot(y)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Exact cone volumes `h_j·area_j/n` (zero on inactive facets).
    pub fn cone_volumes(&self) -> Vec<f64> {
        let n = self.dim as f64;
        self.facets
            .iter()
            .zip(&self.support)
            .map(|(f, h)| if f.active { h * f.area / n } else { 0.0 })
            .collect()
    }

    pub fn volume(&self) -> f64 {
        crate::par::pairwise_sum(&self.cone_volumes())
    }

    /// Distinct vertices.
    pub fn vertices(&self) -> Vec<Vec3> {
        let scale = self.support.iter().cloned().fold(0.0, f64::max);
        let mut out: Vec<Vec3> = Vec::new();
        for f in self.facets.iter().filter(|f| f.active) {
            for y in &f.vertices {
                if !out.iter().any(|z| (z - y).norm() <= 1e-9 * scale) {
                    out.push(*y);
                }
            }
        }
        out
    }

    /// `K* = {y : x·y ≤ 1 ∀x ∈ K}`: normals along the vertices, supports `1/|vertex|`.
    pub fn polar(&self) -> Result<Self> {
        let verts = self.vertices();
        let normals: Vec<Vec3> = verts.iter().map(|x| x / x.norm()).collect();
        let support: Vec<f64> = verts.iter().map(|x| 1.0 / x.norm()).collect();
        Self::from_normals(self.dim, &normals, &support)
    }

    /// `φK` for `det φ = 1`: normals `⟨φ^{-t}v⟩`, supports `h/|φ^{-t}v|`.
    pub fn affine_image(&self, phi: &Mat3) -> Result<Self> {
        check_unimodular(phi)?;
        let inv_t = phi
            .try_inverse()
            .ok_or_else(|| Error::NotUnimodular(0.0))?
            .transpose();
        let m = self.pairs();
        let mut normals = Vec::with_capacity(m);
        let mut support = Vec::with_capacity(m);
        for k in 0..m {
            let w = inv_t * self.normals[k];
            let r = w.norm();
            normals.push(w / r);
            support.push(self.support[k] / r);
        }
        Self::from_pairs(self.dim, &normals, &support)
    }

    /// `cK`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let h: Vec<f64> = self.half_support().iter().map(|h| h * c).collect();
        self.with_support(&h)
    }

    /// `∫_K x xᵗ dx`, exact by simplicial decomposition of the facet cones.
    pub fn second_moment(&self) -> Mat3 {
        let n = self.dim;
        let mut acc = Mat3::zeros();
        let factor = 1.0 / ((n + 1) * (n + 2)) as f64;
        for (f, h) in self.facets.iter().zip(&self.support) {
            if !f.active {
                continue;
            }
            for (tri, area) in simplices(n, f) {
                let vol = h * area / n as f64;
                let mut s = Vec3::zeros();
                let mut m = Mat3::zeros();
                for a in &tri {
                    s += a;
                    m += a * a.transpose();
                }
                acc += (m + s * s.transpose()) * (vol * factor);
            }
        }
        if n == 2 {
            acc[(2, 2)] = 0.0;
        }
        acc
    }

    /// Cross-section `K ∩ u^⊥` for n = 3, as a planar polytope in the frame of [`frame3`].
    pub fn central_section(&self, u: &Vec3) -> Result<Self> {
        if self.dim != 3 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let (a, b) = frame3(&u.normalize());
        let mut normals = Vec::new();
        let mut support = Vec::new();
        for k in 0..self.pairs() {
            let v = self.normals[k];
            let w = Vec3::new(v.dot(&a), v.dot(&b), 0.0);
            let r = w.norm();
            if r > 1e-12 {
                normals.push(w / r);
                support.push(self.support[k] / r);
            }
        }
        Self::from_pairs(2, &normals, &support)
    }

    /// `ρ_{IK}(u) = V_{n−1}(K ∩ u^⊥)`, exact.
    pub fn section_volume(&self, u: &Vec3) -> f64 {
        match self.dim {
            2 => 2.0 * self.radial(&perp2(u)),
            _ => self
                .central_section(u)
                .map(|s| s.volume())
                .unwrap_or(f64::NAN),
        }
    }
}

/// Triangulation of the cone over a facet into simplices `(0, y_1, ..)`;
/// each entry holds the non-origin vertices and the facet-piece area.
pub(crate) fn simplices(n: usize, f: &Facet) -> Vec<(Vec<Vec3>, f64)> {
    if n == 2 {
        return vec![(f.vertices.clone(), f.area)];
    }
    let v = &f.vertices;
    (1..v.len().saturating_sub(1))
        .map(|i| {
            let area = 0.5 * (v[i] - v[0]).cross(&(v[i + 1] - v[0])).norm();
            (vec![v[0], v[i], v[i + 1]], area)
        })
        .collect()
}

/// Fan triangles `(y_0, y_i, y_{i+1})` of a facet polygon with their areas.
pub(crate) fn fan(f: &Facet) -> impl Iterator<Item = ([Vec3; 3], f64)> + '_ {
    let v = &f.vertices;
    (1..v.len().saturating_sub(1)).map(move |i| {
        let area = 0.5 * (v[i] - v[0]).cross(&(v[i + 1] - v[0])).norm();
        ([v[0], v[i], v[i + 1]], area)
    })
}

fn spanning_bound(dim: usize, normals: &[Vec3], support: &[f64]) -> Result<f64> {
    // Pick a well-conditioned basis among the normals to bound |x| on the body.
    let mut basis: Vec<usize> = vec![0];
    for _ in 1..dim {
        let mut best = (0.0, usize::MAX);
        for (k, v) in normals.iter().enumerate() {
            let score = match basis.len() {
                1 => v.cross(&normals[basis[0]]).norm(),
                _ => v.dot(&normals[basis[0]].cross(&normals[basis[1]])).abs(),
            };
            if score > best.0 {
                best = (score, k);
            }
        }
        if best.0 < 1e-12 {
            return Err(Error::NotSpanning(basis.len()));
        }
        basis.push(best.1);
    }
    let mut m = Mat3::identity();
    for (r, &k) in basis.iter().enumerate() {
        for c in 0..3 {
            m[(r, c)] = normals[k][c];
        }
    }
    if dim == 2 {
        m[(2, 0)] = 0.0;
        m[(2, 1)] = 0.0;
        m[(2, 2)] = 1.0;
    }
    let inv = m.try_inverse().ok_or(Error::NotSpanning(dim - 1))?;
    let hn: f64 = basis.iter().map(|&k| support[k] * support[k]).sum::<f64>().sqrt();
    Ok(2.0 * inv.norm() * hn + 1.0)
}

fn wulff_geometry(dim: usize, normals: &[Vec3], support: &[f64]) -> Result<Vec<Facet>> {
    let bound = spanning_bound(dim, normals, support)?;
    Ok((0..normals.len())
        .map(|k| {
            if dim == 2 {
                facet2(k, normals, support)
            } else {
                facet3(k, normals, support, bound)
            }
        })
        .collect())
}

fn dominated(k: usize, i: usize, normals: &[Vec3], support: &[f64]) -> bool {
    // duplicate normal: the tighter (or lower-index) copy wins
    normals[i].dot(&normals[k]) > 1.0 - 1e-15
        && (support[i] < support[k] || (support[i] == support[k] && i < k))
}

fn inactive() -> Facet {
    Facet { active: false, area: 0.0, vertices: Vec::new() }
}

fn facet2(k: usize, normals: &[Vec3], support: &[f64]) -> Facet {
    let v = normals[k];
    let h = support[k];
    let t = perp2(&v);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (i, (w, &hi_sup)) in normals.iter().zip(support).enumerate() {
        if i == k {
            continue;
        }
        if dominated(k, i, normals, support) {
            return inactive();
        }
        let a = t.dot(w);
        let rhs = hi_sup - h * v.dot(w);
        if a > 1e-15 {
            hi = hi.min(rhs / a);
        } else if a < -1e-15 {
            lo = lo.max(rhs / a);
        } else if rhs < 0.0 {
            return inactive();
        }
    }
    let scale = h.max(1e-300);
    if !(hi - lo > 1e-12 * scale) {
        return inactive();
    }
    Facet {
        active: true,
        area: hi - lo,
        vertices: vec![v * h + t * lo, v * h + t * hi],
    }
}

#[derive(Clone, Copy)]
struct Line {
    a: f64,
    b: f64,
    c: f64,
}

fn facet3(k: usize, normals: &[Vec3], support: &[f64], bound: f64) -> Facet {
    let v = normals[k];
    let h = support[k];
    let (ea, eb) = frame3(&v);
    // half-planes a s + b t <= c in facet coordinates; indices >= normals.len() are the box
    let mut lines: Vec<Line> = Vec::with_capacity(normals.len() + 4);
    for (i, (w, &hw)) in normals.iter().zip(support).enumerate() {
        if i != k && dominated(k, i, normals, support) {
            return inactive();
        }
        lines.push(Line { a: ea.dot(w), b: eb.dot(w), c: hw - h * v.dot(w) });
    }
    let nbox = lines.len();
    lines.push(Line { a: 1.0, b: 0.0, c: bound });
    lines.push(Line { a: 0.0, b: 1.0, c: bound });
    lines.push(Line { a: -1.0, b: 0.0, c: bound });
    lines.push(Line { a: 0.0, b: -1.0, c: bound });
    // ccw box; edge i leaves vertex i
    let mut poly: Vec<([f64; 2], usize)> = vec![
        ([bound, -bound], nbox),
        ([bound, bound], nbox + 1),
        ([-bound, bound], nbox + 2),
        ([-bound, -bound], nbox + 3),
    ];
    let tol = 1e-12 * bound;
    for (i, l) in lines.iter().enumerate().take(nbox) {
        if i == k {
            continue;
        }
        if l.a.abs() + l.b.abs() < 1e-15 {
            if l.c < 0.0 {
                return inactive();
            }
            continue;
        }
        let side = |p: &[f64; 2]| l.a * p[0] + l.b * p[1] - l.c;
        if poly.iter().all(|(p, _)| side(p) <= tol) {
            continue;
        }
        let mut out = Vec::with_capacity(poly.len() + 1);
        for j in 0..poly.len() {
            let (p, lab) = poly[j];
            let (q, _) = poly[(j + 1) % poly.len()];
            let (sp, sq) = (side(&p), side(&q));
            let pin = sp <= tol;
            let qin = sq <= tol;
            let cross = |p: [f64; 2], q: [f64; 2]| {
                let t = sp / (sp - sq);
                [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
            };
            match (pin, qin) {
                (true, true) => out.push((p, lab)),
                (true, false) => {
                    out.push((p, lab));
                    if sp < -tol {
                        out.push((cross(p, q), i));
                    } else {
                        // p itself is on the clip line: the new edge starts here
                        let last = out.len() - 1;
                        out[last].1 = i;
                    }
                }
                (false, true) => {
                    if sq < -tol {
                        out.push((cross(p, q), lab));
                    }
                }
                (false, false) => {}
            }
        }
        poly = out;
        if poly.len() < 3 {
            return inactive();
        }
    }
    // Snap vertices to exact line intersections.
    let len = poly.len();
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(len);
    for j in 0..len {
        let l1 = lines[poly[(j + len - 1) % len].1];
        let l2 = lines[poly[j].1];
        let det = l1.a * l2.b - l1.b * l2.a;
        if det.abs() > 1e-14 {
            pts.push([(l1.c * l2.b - l1.b * l2.c) / det, (l1.a * l2.c - l1.c * l2.a) / det]);
        } else {
            pts.push(poly[j].0);
        }
    }
    let touches_box = poly.iter().any(|(_, lab)| *lab >= nbox);
    let mut clean: Vec<[f64; 2]> = Vec::with_capacity(len);
    let eps = 1e-12 * h.max(1e-300);
    for p in pts {
        if clean.last().map_or(true, |q: &[f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]) > eps) {
            clean.push(p);
        }
    }
    while clean.len() > 1 {
        let (f, l) = (clean[0], clean[clean.len() - 1]);
        if (f[0] - l[0]).hypot(f[1] - l[1]) <= eps {
            clean.pop();
        } else {
            break;
        }
    }
    if clean.len() < 3 {
        return inactive();
    }
    let mut area = 0.0;
    for j in 0..clean.len() {
        let (p, q) = (clean[j], clean[(j + 1) % clean.len()]);
        area += p[0] * q[1] - p[1] * q[0];
    }
    area *= 0.5;
    if !(area > 1e-14 * h * h) {
        return inactive();
    }
    if touches_box {
        // positively spanning normals never leave the box on an active facet
        return inactive();
    }
    Facet {
        active: true,
        area,
        vertices: clean.iter().map(|p| v * h + ea * p[0] + eb * p[1]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_geometry() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        assert_eq!(sq.len(), 4);
        assert!((sq.volume() - 4.0).abs() < 1e-14);
        assert!(sq.facets().iter().all(|f| f.active && (f.area - 2.0).abs() < 1e-14));
        assert!((sq.radial(&Vec3::x()) - 1.0).abs() < 1e-15);
        let d = Vec3::new(1.0, 1.0, 0.0).normalize();
        assert!((sq.radial(&d) - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(sq.radial_gauss_map(&Vec3::new(0.9, 0.1, 0.0).normalize()), 0);
        assert_eq!(sq.radial_gauss_map(&d), 0);
    }

    #[test]
    fn cube_geometry() {
        let c = SymmetricPolytope::cube(3).unwrap();
        assert!((c.volume() - 8.0).abs() < 1e-12);
        assert_eq!(c.vertices().len(), 8);
        for f in c.facets() {
            assert_eq!(f.vertices.len(), 4);
            assert!((f.area - 4.0).abs() < 1e-12);
        }
        let x = SymmetricPolytope::cross_polytope3().unwrap();
        assert!((x.volume() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(x.vertices().len(), 6);
    }

    #[test]
    fn facets_are_outward_ccw() {
        let c = SymmetricPolytope::cuboid(&[2.0, 1.0, 0.5]).unwrap();
        for (f, v) in c.facets().iter().zip(c.normals()) {
            let y = &f.vertices;
            let n = (y[1] - y[0]).cross(&(y[2] - y[0]));
            assert!(n.dot(v) > 0.0);
        }
    }

    #[test]
    fn octagon_and_inactive_facets() {
        let oct = SymmetricPolytope::regular_polygon(4, PI / 8.0).unwrap();
        let side = 2.0 * (PI / 8.0).tan();
        assert!(oct.facets().iter().all(|f| (f.area - side).abs() < 1e-13));
        // a loose extra facet at 45° is inactive
        let p = SymmetricPolytope::from_pairs(
            2,
            &[Vec3::x(), Vec3::y(), Vec3::new(1.0, 1.0, 0.0)],
            &[1.0, 1.0, 2.0],
        )
        .unwrap();
        assert!(!p.is_active(2) && !p.is_active(5));
        assert!((p.volume() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn unbounded_is_rejected() {
        let r = SymmetricPolytope::from_pairs(2, &[Vec3::x()], &[1.0]);
        assert!(matches!(r, Err(Error::NotSpanning(_))));
        let r = SymmetricPolytope::from_pairs(3, &[Vec3::x(), Vec3::y()], &[1.0, 1.0]);
        assert!(matches!(r, Err(Error::NotSpanning(_))));
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let p = sq.polar().unwrap();
        assert_eq!(p.pairs(), 2);
        assert!((p.volume() - 2.0).abs() < 1e-14);
        assert!((p.radial(&Vec3::x()) - 1.0).abs() < 1e-14);
        let pp = p.polar().unwrap();
        assert!((pp.volume() - 4.0).abs() < 1e-13);
        let c = SymmetricPolytope::cube(3).unwrap().polar().unwrap();
        assert!((c.volume() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn affine_image_of_square() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let phi = Mat3::new(2.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 1.0);
        let r = sq.affine_image(&phi).unwrap();
        assert!((r.radial(&Vec3::x()) - 2.0).abs() < 1e-14);
        assert!((r.radial(&Vec3::y()) - 0.5).abs() < 1e-14);
        assert!(sq.affine_image(&(phi * 2.0)).is_err());
    }

    #[test]
    fn second_moment_of_cube() {
        let c = SymmetricPolytope::cube(3).unwrap();
        let m = c.second_moment();
        // ∫_{[-1,1]^3} x² = 8/3
        assert!((m - Mat3::identity() * (8.0 / 3.0)).norm() < 1e-12);
        let s = SymmetricPolytope::cuboid(&[3.0, 1.0]).unwrap();
        let m = s.second_moment();
        assert!((m[(0, 0)] - 36.0).abs() < 1e-10, "{}", m[(0, 0)]);
        assert!((m[(1, 1)] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cube_sections() {
        let c = SymmetricPolytope::cube(3).unwrap();
        assert!((c.section_volume(&Vec3::z()) - 4.0).abs() < 1e-12);
        let d = Vec3::new(1.0, 1.0, 0.0).normalize();
        assert!((c.section_volume(&d) - 4.0 * 2f64.sqrt()).abs() < 1e-12);
    }
}
