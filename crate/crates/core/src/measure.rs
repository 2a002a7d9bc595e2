//! Discrete even measures on the sphere and the measure `𝓘_p(K,·)` of a
//! polytope.
//!
//! Two routes are implemented:
//!
//! - [`ip_measure_via_transform`]: atom `j` equals
//!   `(1−p)/(2|p|) ∫_S ρ_{I_pK}(u)^{n−p} M_j(u) du`, where
//!   `M_j(u) = ∫_{cell j} ρ_K^{n−p}|u·v|^{-p} dv` is exact. The same outer
//!   rule gives `V(I_pK)`, so the atoms are exactly the first variation of the
//!   discrete volume.
//! - [`ip_measure`]: atom `j` equals `((n−p)/|p|) h_j ∫_{F_j} ρ_{I_p²K}(y)^p dσ`
//!   with the iterated body evaluated by the singular axial rule.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::body::{fan, SymmetricPolytope};
use crate::error::{Error, Result};
use crate::geom::{check_unimodular, Mat3, Vec3};
use crate::lp::{LpParams, PolytopeLp};
use crate::par::{map_indexed, pairwise_sum};
use crate::sphere::gauss::{cached_jacobi, cached_legendre};
use crate::sphere::{QuadratureRule, SingularOrders, SphericalGrid};

/// One atom `w δ_u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub u: Vec3,
    pub w: f64,
}

/// Finite measure with finitely many atoms. Even measures store
/// `atoms[k + m] = (−u_k, w_k)` for `k < m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSphericalMeasure {
    dim: usize,
    atoms: Vec<Atom>,
    even: bool,
    total: f64,
}

impl DiscreteSphericalMeasure {
    /// Arbitrary atoms; directions are normalized, weights must be ≥ 0.
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        crate::geom::check_dim(dim)?;
        let mut out = Vec::with_capacity(atoms.len());
        for a in atoms {
            if !(a.w >= 0.0) || !a.w.is_finite() {
                return Err(Error::InvalidMeasure(format!("weight {} is not a nonnegative number", a.w)));
            }
            let mut u = a.u;
            if dim == 2 {
                u.z = 0.0;
            }
            let r = u.norm();
            if !(r > 0.0) {
                return Err(Error::InvalidMeasure("zero atom direction".into()));
            }
            out.push(Atom { u: crate::geom::unit(&u), w: a.w });
        }
        let even = is_even_layout(&out);
        let total = pairwise_sum(&out.iter().map(|a| a.w).collect::<Vec<_>>());
        Ok(Self { dim, atoms: out, even, total })
    }

    /// Even measure from one atom per antipodal pair; each of `±u_k` gets `w_k`.
    pub fn from_pairs(dim: usize, half_u: &[Vec3], half_w: &[f64]) -> Result<Self> {
        if half_u.len() != half_w.len() {
            return Err(Error::InvalidMeasure("directions and weights differ in length".into()));
        }
        let mut atoms: Vec<Atom> = half_u.iter().zip(half_w).map(|(u, w)| Atom { u: *u, w: *w }).collect();
        let neg: Vec<Atom> = atoms.iter().map(|a| Atom { u: -a.u, w: a.w }).collect();
        atoms.extend(neg);
        Self::new(dim, atoms)
    }

    /// Atoms on the normals of `poly` with the given per-facet weights.
    pub fn on_facets(poly: &SymmetricPolytope, weights: Vec<f64>) -> Result<Self> {
        let atoms = poly.normals().iter().zip(weights).map(|(u, w)| Atom { u: *u, w }).collect();
        Self::new(poly.dim(), atoms)
    }

    /// Reorders an arbitrary even measure into the paired layout, merging
    /// antipodal partners within `1e-9`.
    pub fn symmetrized(&self) -> Result<Self> {
        if self.even {
            return Ok(self.clone());
        }
        let mut used = vec![false; self.atoms.len()];
        let mut half_u = Vec::new();
        let mut half_w = Vec::new();
        for i in 0..self.atoms.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let a = self.atoms[i];
            let j = (i + 1..self.atoms.len())
                .find(|&j| !used[j] && (self.atoms[j].u + a.u).norm() < 1e-9)
                .ok_or_else(|| Error::InvalidMeasure(format!("atom {i} has no antipodal partner")))?;
            used[j] = true;
            let b = self.atoms[j];
            if (a.w - b.w).abs() > 1e-9 * a.w.max(b.w) {
                return Err(Error::InvalidMeasure(format!("atoms {i} and {j} are antipodal with unequal weights")));
            }
            half_u.push(a.u);
            half_w.push(0.5 * (a.w + b.w));
        }
        Self::from_pairs(self.dim, &half_u, &half_w)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.w).collect()
    }

    pub fn directions(&self) -> Vec<Vec3> {
        self.atoms.iter().map(|a| a.u).collect()
    }

    /// Number of antipodal pairs of an even measure.
    pub fn pairs(&self) -> usize {
        self.atoms.len() / 2
    }

    /// `μ({±u_k})` for each pair.
    pub fn pair_weights(&self) -> Vec<f64> {
        let m = self.pairs();
        (0..m).map(|k| self.atoms[k].w + self.atoms[k + m].w).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let atoms = self.atoms.iter().map(|a| Atom { u: a.u, w: a.w * c }).collect();
        Self { dim: self.dim, atoms, even: self.even, total: self.total * c }
    }

    /// Pushforward `φμ(η) = μ(⟨φ^{-1}η⟩)`: atom `(u, w) ↦ (⟨φu⟩, w)`.
    pub fn affine_image(&self, phi: &Mat3) -> Result<Self> {
        check_unimodular(phi)?;
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let v = phi * a.u;
                Atom { u: v / v.norm(), w: a.w }
            })
            .collect();
        Self::new(self.dim, atoms)
    }

    /// `max_k |w_k − w'_k| / w'_k` over atoms with the same index, together
    /// with the largest direction mismatch.
    pub fn compare(&self, reference: &Self) -> MeasureComparison {
        let mut rel = 0.0f64;
        let mut angle = 0.0f64;
        for (a, b) in self.atoms.iter().zip(&reference.atoms) {
            if b.w > 0.0 {
                rel = rel.max((a.w - b.w).abs() / b.w);
            } else if a.w > 0.0 {
                rel = f64::INFINITY;
            }
            angle = angle.max((a.u - b.u).norm());
        }
        if self.atoms.len() != reference.atoms.len() {
            rel = f64::INFINITY;
        }
        MeasureComparison { max_relative: rel, max_direction: angle }
    }
}

fn is_even_layout(atoms: &[Atom]) -> bool {
    if atoms.len() % 2 == 1 {
        return false;
    }
    let m = atoms.len() / 2;
    (0..m).all(|k| atoms[k + m].u == -atoms[k].u && atoms[k + m].w == atoms[k].w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureComparison {
    pub max_relative: f64,
    pub max_direction: f64,
}

/// Outer rule and inner orders used when evaluating `𝓘_p`.
#[derive(Debug, Clone)]
pub struct MeasureOptions {
    pub grid: Arc<SphericalGrid>,
    /// Evaluate on the isotropic image `AK`, `A = Cov(K)^{-1/2}` scaled to
    /// determinant one. Volumes and atom weights are SL(n) invariant, so this
    /// only changes where the quadrature error lands.
    pub warp: bool,
    /// Gauss points per segment, or per direction of the conical triangle rule.
    pub facet_order: usize,
    pub singular: SingularOrders,
}

impl MeasureOptions {
    pub fn new(grid: Arc<SphericalGrid>) -> Self {
        let facet_order = if grid.dim() == 2 { 24 } else { 10 };
        Self { grid, warp: true, facet_order, singular: SingularOrders::default() }
    }

    pub fn unwarped(mut self) -> Self {
        self.warp = false;
        self
    }

    /// Body actually integrated over: `poly` itself or its isotropic image.
    pub fn working_body(&self, poly: &SymmetricPolytope) -> Result<SymmetricPolytope> {
        if self.warp {
            let a = crate::geom::unimodular_inv_sqrt(poly.dim(), &poly.second_moment());
            poly.affine_image(&a)
        } else {
            Ok(poly.clone())
        }
    }

    /// Outer rule for `body`: graded Gauss–Legendre on the arcs between kinks
    /// of the integrand (n = 2), the plain grid (n = 3).
    pub fn rule_for(&self, body: &SymmetricPolytope) -> QuadratureRule {
        if body.dim() == 2 {
            arc_rule(body, self.grid.resolution())
        } else {
            self.grid.rule()
        }
    }

    /// `V(I_pK)` and atoms.
    pub fn evaluate(&self, poly: &SymmetricPolytope, params: LpParams) -> Result<IpEvaluation> {
        let body = self.working_body(poly)?;
        IpEvaluation::compute(&body, params, &self.rule_for(&body))
    }
}

/// On S¹ the integrands `ρ_{I_pK}^{n−p} M_j` are analytic except where `u` is
/// orthogonal to a vertex, where they behave like `|θ − θ_0|^{1−p}`. Each arc
/// between such directions gets its own Gauss–Legendre rule after the
/// substitution `x = 10t³ − 15t⁴ + 6t⁵`, which flattens both endpoints.
/// About `budget` nodes are spread over the circle in proportion to arc length.
pub fn arc_rule(body: &SymmetricPolytope, budget: usize) -> QuadratureRule {
    let mut breaks: Vec<f64> = body
        .vertices()
        .iter()
        .map(|y| (y.y.atan2(y.x) + 0.5 * PI).rem_euclid(PI))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if breaks.is_empty() {
        breaks.push(0.0);
    }
    let start = breaks[0];
    let mut ends = breaks.clone();
    ends.push(start + PI);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in ends.windows(2) {
        let (a, len) = (w[0], w[1] - w[0]);
        if len <= 0.0 {
            continue;
        }
        let q = ((budget as f64 * len / (2.0 * PI)).ceil() as usize).max(12);
        for (t, wt) in cached_legendre(q).on_unit_interval() {
            let x = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
            let dx = 30.0 * t * t * (1.0 - t) * (1.0 - t);
            let th = a + len * x;
            nodes.push(Vec3::new(th.cos(), th.sin(), 0.0));
            weights.push(len * dx * wt);
        }
    }
    let neg: Vec<Vec3> = nodes.iter().map(|u| -u).collect();
    nodes.extend(neg);
    weights.extend(weights.clone());
    QuadratureRule { nodes, weights }
}

/// `V(I_pK)` and the atoms of `𝓘_p(K,·)` from one pass over an outer rule.
#[derive(Debug, Clone)]
pub struct IpEvaluation {
    pub params: LpParams,
    pub volume: f64,
    /// One weight per facet, antipodal facets equal.
    pub atoms: Vec<f64>,
}

impl IpEvaluation {
    /// Requires an antipodally closed rule whose second half negates the first.
    pub fn compute(poly: &SymmetricPolytope, params: LpParams, rule: &QuadratureRule) -> Result<Self> {
        let lp = PolytopeLp::new(poly, params)?;
        let half = rule.len() / 2;
        let m = poly.pairs();
        let n = params.n();
        let p = params.p;
        // per node: (w ρ^n, w ρ^{n−p} M_k for each pair)
        let rows: Vec<(f64, Vec<f64>)> = map_indexed(half, |i| {
            let u = &rule.nodes[i];
            let w = rule.weights[i];
            let mom = lp.pair_moments(u);
            let pow = lp.pow_from_moments(&mom);
            let ln_rho = pow.ln() / p;
            let vol = w * (n * ln_rho).exp();
            let s = w * ((n - p) * ln_rho).exp();
            (vol, mom.into_iter().map(|x| s * x).collect())
        });
        let vols: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let volume = 2.0 / n * pairwise_sum(&vols);
        let scale = (1.0 - p) / (2.0 * p.abs()) * 2.0;
        let mut half_atoms = Vec::with_capacity(m);
        let mut col = vec![0.0; half];
        for k in 0..m {
            for (c, r) in col.iter_mut().zip(&rows) {
                *c = r.1[k];
            }
            half_atoms.push(if poly.is_active(k) { scale * pairwise_sum(&col) } else { 0.0 });
        }
        let mut atoms = half_atoms.clone();
        atoms.extend(half_atoms);
        Ok(Self { params, volume, atoms })
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(&self.atoms)
    }
}

/// `V(I_pK)`.
pub fn lp_volume(poly: &SymmetricPolytope, params: LpParams, opts: &MeasureOptions) -> Result<f64> {
    Ok(opts.evaluate(poly, params)?.volume)
}

/// `𝓘_p(K,·)` by the transform route.
pub fn ip_measure_via_transform(
    poly: &SymmetricPolytope,
    params: LpParams,
    opts: &MeasureOptions,
) -> Result<DiscreteSphericalMeasure> {
    DiscreteSphericalMeasure::on_facets(poly, opts.evaluate(poly, params)?.atoms)
}

/// `∫_F g dσ` over an active facet by Gauss–Legendre on segments (n = 2) or the
/// conical product rule on fan triangles (n = 3).
pub fn facet_quadrature<G>(dim: usize, facet: &crate::body::Facet, order: usize, g: G) -> Result<f64>
where
    G: Fn(&Vec3) -> Result<f64> + Sync + Send,
{
    if !facet.active {
        return Ok(0.0);
    }
    if dim == 2 {
        let rule = cached_legendre(order).on_unit_interval();
        let (a, b) = (facet.vertices[0], facet.vertices[1]);
        let vals: Vec<f64> = map_indexed(rule.len(), |i| g(&(a + (b - a) * rule[i].0)))
            .into_iter()
            .collect::<Result<_>>()?;
        let terms: Vec<f64> = vals.iter().zip(&rule).map(|(v, (_, w))| v * w).collect();
        return Ok(facet.area * pairwise_sum(&terms));
    }
    let radial = cached_jacobi(order, 0.0, 1.0).on_unit_interval();
    let angular = cached_legendre(order).on_unit_interval();
    let mut pts = Vec::new();
    for (tri, area) in fan(facet) {
        for &(s, ws) in &radial {
            for &(t, wt) in &angular {
                let y = tri[0] + ((tri[1] - tri[0]) * (1.0 - t) + (tri[2] - tri[0]) * t) * s;
                pts.push((y, 2.0 * area * ws * wt));
            }
        }
    }
    let vals: Vec<f64> = map_indexed(pts.len(), |i| g(&pts[i].0)).into_iter().collect::<Result<_>>()?;
    let terms: Vec<f64> = vals.iter().zip(&pts).map(|(v, (_, w))| v * w).collect();
    Ok(pairwise_sum(&terms))
}

/// `𝓘_p(K,·)` by the direct route through `ρ_{I_p²K}`.
pub fn ip_measure(poly: &SymmetricPolytope, params: LpParams, opts: &MeasureOptions) -> Result<DiscreteSphericalMeasure> {
    let lp = PolytopeLp::new(poly, params)?;
    let p = params.p;
    let m = poly.pairs();
    let mut half = Vec::with_capacity(m);
    for k in 0..m {
        let f = &poly.facets()[k];
        let integral = facet_quadrature(poly.dim(), f, opts.facet_order, |y| {
            let r = y.norm();
            Ok(lp.iterated_pow(&(y / r), opts.singular)? * r.powf(-p))
        })?;
        half.push((params.n() - p) / p.abs() * poly.support()[k] * integral);
    }
    let mut w = half.clone();
    w.extend(half);
    DiscreteSphericalMeasure::on_facets(poly, w)
}

/// `((n−p)²/|p|) ∫_K ρ_{I_p²K}(x)^p dx` with the solid integral done on
/// radial shells: for every grid direction the radius is integrated by a
/// Gauss–Jacobi rule carrying `r^{n−1−p}`.
pub fn total_mass_solid(poly: &SymmetricPolytope, params: LpParams, grid: &SphericalGrid, orders: SingularOrders) -> Result<f64> {
    let lp = PolytopeLp::new(poly, params)?;
    let p = params.p;
    let n = params.n();
    let shells = cached_jacobi(8, 0.0, n - 1.0 - p).on_unit_interval();
    let half = grid.half();
    let vals: Vec<f64> = map_indexed(half, |i| {
        let v = grid.node(i);
        let rho = poly.radial(v);
        let inner = lp.iterated_pow(v, orders)?;
        // ∫_0^ρ (r^{-p} inner) r^{n−1} dr = ρ^{n−p} ∫_0^1 t^{n−1−p} inner dt
        let shell: f64 = shells.iter().map(|(_, w)| w * inner).sum();
        Ok(grid.weights()[i] * rho.powf(n - p) * shell)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok((n - p).powi(2) / p.abs() * 2.0 * pairwise_sum(&vals))
}

/// Cone-volume measure: atom `j` is `h_j |F_j| / n`.
pub fn cone_volume_measure(poly: &SymmetricPolytope) -> Result<DiscreteSphericalMeasure> {
    DiscreteSphericalMeasure::on_facets(poly, poly.cone_volumes())
}

/// Cone volumes by quadrature of `(1/n) ∫_{cell j} ρ^n`. On S¹ each cell is
/// the arc between the directions of the facet's endpoints and gets a
/// Gauss–Legendre rule; on S² grid nodes are assigned whole to the cell of
/// their radial Gauss image.
pub fn cone_volume_quadrature(poly: &SymmetricPolytope, grid: &SphericalGrid) -> Result<DiscreteSphericalMeasure> {
    let n = poly.dim();
    if n == 2 {
        let w = poly
            .facets()
            .iter()
            .map(|f| {
                if !f.active {
                    return 0.0;
                }
                let (ta, tb) = (f.vertices[0].y.atan2(f.vertices[0].x), f.vertices[1].y.atan2(f.vertices[1].x));
                let d = (tb - ta).rem_euclid(2.0 * PI);
                let (start, len) = if d > PI { (tb, 2.0 * PI - d) } else { (ta, d) };
                let q = ((grid.resolution() as f64 * len / (2.0 * PI)).ceil() as usize).max(8);
                let terms: Vec<f64> = cached_legendre(q)
                    .on_unit_interval()
                    .into_iter()
                    .map(|(t, wt)| {
                        let th = start + len * t;
                        wt * len * poly.radial(&Vec3::new(th.cos(), th.sin(), 0.0)).powi(2) / 2.0
                    })
                    .collect();
                pairwise_sum(&terms)
            })
            .collect();
        return DiscreteSphericalMeasure::on_facets(poly, w);
    }
    let part = poly.reverse_image_partition(grid);
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); poly.len()];
    for (i, j) in part.into_iter().enumerate() {
        let u = grid.node(i);
        buckets[j].push(grid.weights()[i] * poly.radial(u).powi(n as i32) / n as f64);
    }
    DiscreteSphericalMeasure::on_facets(poly, buckets.iter().map(|b| pairwise_sum(b)).collect())
}

/// Limit `p → 1⁻`: atom `j` is `(n−1) ∫_{cell j} ρ_K^{n−1} ρ_{I²K} dv`
/// `= (n−1) h_j ∫_{F_j} ρ_{I(IK)}(y) dσ`.
pub fn intersection_limit_measure(poly: &SymmetricPolytope, facet_order: usize) -> Result<DiscreteSphericalMeasure> {
    let n = poly.dim();
    let rho_iik = |u: &Vec3| -> f64 {
        let r = u.norm();
        let u = u / r;
        let v = if n == 2 {
            4.0 * poly.radial(&u)
        } else {
            crate::transform::radon_at(3, &u, |w| poly.section_volume(w).powi(2)) / 2.0
        };
        v / r
    };
    let m = poly.pairs();
    let mut half = Vec::with_capacity(m);
    for k in 0..m {
        let integral = facet_quadrature(n, &poly.facets()[k], facet_order, |y| Ok(rho_iik(y)))?;
        half.push((n - 1) as f64 * poly.support()[k] * integral);
    }
    let mut w = half.clone();
    w.extend(half);
    DiscreteSphericalMeasure::on_facets(poly, w)
}

/// Which bound [`subspace_concentration`] compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConcentrationBound {
    /// `dim ξ / n`, the hypothesis on input measures.
    Input,
    /// `dim ξ / (n − p)`, satisfied by every `𝓘_p(K,·)`.
    Ip,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Concentration {
    pub ratio: f64,
    pub bound: f64,
    pub strict: bool,
}

/// Orthonormalizes the rows of `basis`; rejects `{0}` and the whole space.
pub fn subspace_basis(dim: usize, basis: &[Vec3]) -> Result<Vec<Vec3>> {
    let mut out: Vec<Vec3> = Vec::new();
    for b in basis {
        let mut v = *b;
        if dim == 2 {
            v.z = 0.0;
        }
        for e in &out {
            v -= e * e.dot(&v);
        }
        let r = v.norm();
        if r > 1e-12 {
            out.push(v / r);
        }
    }
    if out.is_empty() || out.len() >= dim {
        return Err(Error::InvalidSubspace(format!(
            "dimension {} is not strictly between 0 and {dim}",
            out.len()
        )));
    }
    Ok(out)
}

/// Share of `μ` carried by atoms within `angular_tol` of `ξ ∩ S^{n−1}`.
pub fn subspace_concentration(
    mu: &DiscreteSphericalMeasure,
    basis: &[Vec3],
    angular_tol: f64,
    bound: ConcentrationBound,
    p: Option<f64>,
) -> Result<Concentration> {
    let e = subspace_basis(mu.dim(), basis)?;
    let mut inside = Vec::new();
    for a in mu.atoms() {
        let proj: Vec3 = e.iter().map(|b| b * b.dot(&a.u)).sum();
        if (a.u - proj).norm() <= angular_tol {
            inside.push(a.w);
        }
    }
    let ratio = pairwise_sum(&inside) / mu.total();
    let k = e.len() as f64;
    let n = mu.dim() as f64;
    let b = match bound {
        ConcentrationBound::Input => k / n,
        ConcentrationBound::Ip => {
            let p = p.ok_or_else(|| Error::Invalid("the 𝓘_p bound needs p".into()))?;
            k / (n - p)
        }
    };
    Ok(Concentration { ratio, bound: b, strict: ratio < b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::random;
    use crate::lp::lp_intersection_body;
    use crate::Body;

    fn opts(dim: usize, res: usize) -> MeasureOptions {
        MeasureOptions::new(SphericalGrid::shared(dim, res).unwrap())
    }

    #[test]
    fn square_atoms_equal_and_routes_agree() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let o = opts(2, 720);
        for p in [-1.0, 0.5] {
            let params = LpParams::new(2, p).unwrap();
            let a = ip_measure_via_transform(&sq, params, &o).unwrap();
            let b = ip_measure(&sq, params, &o).unwrap();
            let w = a.weights();
            assert!(w.iter().all(|x| (x - w[0]).abs() < 1e-10 * w[0]));
            assert!((w[0] - a.total() / 4.0).abs() < 1e-10 * w[0]);
            let c = b.compare(&a);
            assert!(c.max_relative < 1e-3, "{p}: {c:?}");
        }
    }

    #[test]
    fn total_mass_matches_volume() {
        let hex = random::random_hexagon(1);
        let params = LpParams::new(2, 0.3).unwrap();
        let o = opts(2, 720);
        let ev = o.evaluate(&hex, params).unwrap();
        let n = 2.0;
        assert!((ev.total() - n * (n - 0.3) / 0.3 * ev.volume).abs() < 1e-10 * ev.total());
        let star = lp_intersection_body(&Body::Polytope(hex.clone()), params, &o.grid).unwrap();
        assert!((star.volume() / ev.volume - 1.0).abs() < 1e-4);
    }

    #[test]
    fn solid_integral_total() {
        let hex = random::random_hexagon(2);
        let params = LpParams::new(2, -0.5).unwrap();
        let o = opts(2, 720);
        let a = ip_measure(&hex, params, &o).unwrap().total();
        let b = total_mass_solid(&hex, params, &o.grid, SingularOrders::default()).unwrap();
        assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");
    }

    #[test]
    fn cone_volumes() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        assert_eq!(cone_volume_measure(&sq).unwrap().weights(), vec![1.0; 4]);
        let c = SymmetricPolytope::cube(3).unwrap();
        let w = cone_volume_measure(&c).unwrap().weights();
        assert!(w.iter().all(|x| (x - 4.0 / 3.0).abs() < 1e-12));
        let g = SphericalGrid::new(2, 720).unwrap();
        let hex = random::random_hexagon(3);
        let a = cone_volume_measure(&hex).unwrap();
        let b = cone_volume_quadrature(&hex, &g).unwrap();
        // node-to-cell assignment is first order in the grid step
        assert!(b.compare(&a).max_relative < 1e-6);
    }

    #[test]
    fn affine_images_of_measures() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let mu = cone_volume_measure(&sq).unwrap();
        assert_eq!(mu.affine_image(&Mat3::identity()).unwrap(), mu);
        let r = mu.affine_image(&crate::geom::rotation2(std::f64::consts::FRAC_PI_2)).unwrap();
        for a in r.atoms() {
            assert!(mu.atoms().iter().any(|b| (b.u - a.u).norm() < 1e-15 && b.w == a.w));
        }
        assert!(mu.affine_image(&(Mat3::identity() * 2.0)).is_err());
    }

    #[test]
    fn concentration_examples() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let params = LpParams::new(2, 0.5).unwrap();
        let mu = ip_measure_via_transform(&sq, params, &opts(2, 180)).unwrap();
        let c = subspace_concentration(&mu, &[Vec3::x()], 1e-9, ConcentrationBound::Ip, Some(0.5)).unwrap();
        assert!((c.ratio - 0.5).abs() < 1e-12 && (c.bound - 2.0 / 3.0).abs() < 1e-15 && c.strict);
        let x = SymmetricPolytope::cross_polytope3().unwrap();
        let cv = cone_volume_measure(&x).unwrap();
        let c = subspace_concentration(&cv, &[Vec3::x()], 1e-9, ConcentrationBound::Input, None).unwrap();
        assert_eq!(c.ratio, 0.0);
        assert!(subspace_concentration(&cv, &[Vec3::x(), Vec3::y(), Vec3::z()], 1e-9, ConcentrationBound::Input, None).is_err());
    }

    #[test]
    fn symmetrize_reorders() {
        let atoms = vec![
            Atom { u: Vec3::x(), w: 1.0 },
            Atom { u: -Vec3::x(), w: 1.0 },
            Atom { u: Vec3::y(), w: 2.0 },
            Atom { u: -Vec3::y(), w: 2.0 },
        ];
        let mu = DiscreteSphericalMeasure::new(2, atoms).unwrap();
        assert!(!mu.is_even());
        let s = mu.symmetrized().unwrap();
        assert!(s.is_even());
        assert_eq!(s.pair_weights(), vec![2.0, 4.0]);
    }
}
