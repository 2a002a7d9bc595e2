//! Even Minkowski problem for `𝓘_p`: maximize
//! `Φ(h) = p/(n(n−p)) log V(I_p[h]) − (1/|μ|) Σ μ_j log h_j`
//! over log-supports on the atoms of `μ`, then rescale.

use std::sync::Arc;

use log::{debug, warn};
use serde::Serialize;

use crate::body::SymmetricPolytope;
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::lp::LpParams;
use crate::measure::{
    ip_measure_via_transform, subspace_concentration, ConcentrationBound, DiscreteSphericalMeasure,
    MeasureOptions,
};
use crate::par::pairwise_sum;
use crate::sphere::SphericalGrid;

/// `−(1/|μ|) Σ μ_j log h_j`, with `h` given per atom.
pub fn entropy(mu: &DiscreteSphericalMeasure, h: &[f64]) -> Result<f64> {
    if h.len() != mu.len() {
        return Err(Error::Invalid("one support value per atom is required".into()));
    }
    if let Some(&bad) = h.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::NonPositiveSupport(bad));
    }
    let terms: Vec<f64> = mu.atoms().iter().zip(h).map(|(a, x)| a.w * x.ln()).collect();
    Ok(-pairwise_sum(&terms) / mu.total())
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub grid: Arc<SphericalGrid>,
    pub grad_tol: f64,
    pub max_iter: usize,
    pub armijo: f64,
    pub shrink: f64,
    pub initial_step: f64,
    /// Trial step of each iteration is this factor times the last accepted step.
    pub step_growth: f64,
    pub max_step: f64,
    /// Largest change of any `log h_k` in one iteration.
    pub max_log_move: f64,
    /// Divergence alarm threshold on `max log h − min log h`.
    pub spread_limit: f64,
    /// Extra candidate normals (one per pair) carrying no mass.
    pub spare_normals: Vec<Vec3>,
}

impl SolverOptions {
    pub fn new(grid: Arc<SphericalGrid>) -> Self {
        Self {
            grid,
            grad_tol: 1e-7,
            max_iter: 500,
            armijo: 1e-4,
            shrink: 0.5,
            initial_step: 0.5,
            step_growth: 2.0,
            max_step: 1e4,
            max_log_move: 2.0,
            spread_limit: 30.0,
            spare_normals: Vec::new(),
        }
    }
}

/// `Φ_{μ,p}` on a fixed normal set.
#[derive(Debug, Clone)]
pub struct Objective {
    pub params: LpParams,
    pub normals: Vec<Vec3>,
    /// `μ({±u_k})`.
    pub pair_mass: Vec<f64>,
    pub total: f64,
    measure: MeasureOptions,
}

/// Value, gradient and the ingredients they came from.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub objective: f64,
    pub gradient: Vec<f64>,
    pub volume: f64,
    pub pair_atoms: Vec<f64>,
    pub body: SymmetricPolytope,
}

impl Objective {
    pub fn new(mu: &DiscreteSphericalMeasure, params: LpParams, opts: &SolverOptions) -> Result<Self> {
        if mu.dim() != params.dim || opts.grid.dim() != params.dim {
            return Err(Error::Invalid("dimension mismatch".into()));
        }
        if mu.total() <= 0.0 {
            return Err(Error::InvalidMeasure("measure is zero".into()));
        }
        let mu = mu.symmetrized()?;
        check_concentration(&mu);
        let m = mu.pairs();
        let mut normals: Vec<Vec3> = mu.directions()[..m].to_vec();
        let mut pair_mass = mu.pair_weights();
        for v in &opts.spare_normals {
            normals.push(v.normalize());
            pair_mass.push(0.0);
        }
        Ok(Self { params, normals, pair_mass, total: mu.total(), measure: MeasureOptions::new(opts.grid.clone()) })
    }

    pub fn pairs(&self) -> usize {
        self.normals.len()
    }

    pub fn body(&self, log_h: &[f64]) -> Result<SymmetricPolytope> {
        let h: Vec<f64> = log_h.iter().map(|x| x.exp()).collect();
        SymmetricPolytope::from_pairs(self.params.dim, &self.normals, &h)
    }

    fn entropy_pairs(&self, log_h: &[f64]) -> f64 {
        let t: Vec<f64> = self.pair_mass.iter().zip(log_h).map(|(m, l)| m * l).collect();
        -pairwise_sum(&t) / self.total
    }

    pub fn value(&self, log_h: &[f64]) -> Result<f64> {
        let body = self.body(log_h)?;
        let ev = self.measure.evaluate(&body, self.params)?;
        let deg = self.params.volume_degree();
        Ok(ev.volume.ln() / deg + self.entropy_pairs(log_h))
    }

    pub fn evaluate(&self, log_h: &[f64]) -> Result<Evaluation> {
        let body = self.body(log_h)?;
        let ev = self.measure.evaluate(&body, self.params)?;
        let m = self.pairs();
        let pair_atoms: Vec<f64> = (0..m).map(|k| ev.atoms[k] + ev.atoms[k + m]).collect();
        let p = self.params.p;
        let a = p.abs() / (self.params.n() * (self.params.n() - p));
        let gradient = pair_atoms
            .iter()
            .zip(&self.pair_mass)
            .map(|(at, mu)| a * at / ev.volume - mu / self.total)
            .collect();
        Ok(Evaluation {
            objective: ev.volume.ln() / self.params.volume_degree() + self.entropy_pairs(log_h),
            gradient,
            volume: ev.volume,
            pair_atoms,
            body,
        })
    }
}

fn check_concentration(mu: &DiscreteSphericalMeasure) {
    let m = mu.pairs();
    let dirs = mu.directions();
    let n = mu.dim();
    let mut subspaces: Vec<Vec<Vec3>> = (0..m).map(|k| vec![dirs[k]]).collect();
    if n == 3 {
        for i in 0..m {
            for j in i + 1..m {
                if dirs[i].cross(&dirs[j]).norm() > 1e-9 {
                    subspaces.push(vec![dirs[i], dirs[j]]);
                }
            }
        }
    }
    for b in subspaces {
        if let Ok(c) = subspace_concentration(mu, &b, 1e-9, ConcentrationBound::Input, None) {
            if !c.strict {
                warn!(
                    "measure violates strict subspace concentration: ratio {} ≥ {} on a {}-dimensional subspace",
                    c.ratio,
                    c.bound,
                    b.len()
                );
                return;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Converged,
    MaxIterations,
    /// `log h` spread exceeded the limit: the body degenerates.
    Diverged,
    /// Line search could not improve the objective by a move larger than 1e-12.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub log_h: Vec<f64>,
    pub objective: f64,
    pub gradient: Vec<f64>,
    pub iteration: usize,
    pub step: f64,
    pub trace: Vec<TraceRow>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolverStatus,
    pub state: SolverState,
    /// Maximizer `K₀ = [exp(log h)]`.
    pub body: SymmetricPolytope,
    /// Scaling with `V(I_p(cK₀)) = |p||μ|/(n(n−p))`.
    pub c: f64,
    /// `cK₀`.
    pub scaled_body: SymmetricPolytope,
    /// `max_k |𝓘_p(cK₀,{±u_k}) − μ({±u_k})| / μ({±u_k})`.
    pub residual: f64,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

fn centered(mut v: Vec<f64>) -> Vec<f64> {
    let mean = pairwise_sum(&v) / v.len() as f64;
    for x in &mut v {
        *x -= mean;
    }
    v
}

/// Gradient ascent with Armijo backtracking from `h ≡ 1`. The trial step is
/// the Barzilai–Borwein length `s·s / (−s·y)`; without negative curvature,
/// or when that length collapses (a facet appearing or vanishing), it is the
/// last accepted step times `step_growth`.
pub fn solve(mu: &DiscreteSphericalMeasure, params: LpParams, opts: &SolverOptions) -> Result<Solution> {
    let obj = Objective::new(mu, params, opts)?;
    let mut log_h = vec![0.0; obj.pairs()];
    let mut ev = obj.evaluate(&log_h)?;
    let mut trace = vec![TraceRow { iteration: 0, objective: ev.objective, grad_norm: max_abs(&ev.gradient), step: 0.0 }];
    let mut step = opts.initial_step;
    let mut status = SolverStatus::MaxIterations;
    let mut iteration = 0;
    let mut bb: Option<f64> = None;
    loop {
        if max_abs(&ev.gradient) < opts.grad_tol {
            status = SolverStatus::Converged;
            break;
        }
        if iteration >= opts.max_iter {
            break;
        }
        iteration += 1;
        let g2: f64 = ev.gradient.iter().map(|g| g * g).sum();
        let reach = opts.max_log_move / max_abs(&ev.gradient);
        let mut trial = match bb {
            _ if iteration == 1 => opts.initial_step,
            Some(t) if t >= 1e-3 * step => t.min(opts.max_step),
            _ => (step * opts.step_growth).min(opts.max_step),
        }
        .min(reach);
        let accepted = loop {
            let cand = centered(log_h.iter().zip(&ev.gradient).map(|(l, g)| l + trial * g).collect());
            match obj.evaluate(&cand) {
                Ok(e) if e.objective >= ev.objective + opts.armijo * trial * g2 => break Some((cand, e)),
                _ => {}
            }
            trial *= opts.shrink;
            if trial * max_abs(&ev.gradient) < 1e-12 {
                break None;
            }
        };
        let Some((cand, e)) = accepted else {
            warn!("line search stalled at iteration {iteration}, log-support spread {:.1}", spread(&log_h));
            status = SolverStatus::Stalled;
            break;
        };
        step = trial;
        let (ss, sy) = cand.iter().zip(&log_h).zip(e.gradient.iter().zip(&ev.gradient)).fold(
            (0.0, 0.0),
            |(ss, sy), ((a, b), (ga, gb))| (ss + (a - b) * (a - b), sy + (a - b) * (ga - gb)),
        );
        bb = (sy < 0.0 && ss > 0.0).then(|| ss / -sy);
        log_h = cand;
        ev = e;
        trace.push(TraceRow { iteration, objective: ev.objective, grad_norm: max_abs(&ev.gradient), step });
        debug!("iter {iteration}: Φ = {} |g| = {:e} step {step}", ev.objective, max_abs(&ev.gradient));
        if spread(&log_h) > opts.spread_limit {
            warn!("log-support spread exceeded {}: body degenerating", opts.spread_limit);
            status = SolverStatus::Diverged;
            break;
        }
    }
    let target = params.p.abs() * obj.total / (params.n() * (params.n() - params.p));
    let c = (target / ev.volume).powf(1.0 / params.volume_degree());
    let scaled_body = ev.body.scaled(c)?;
    let check = ip_measure_via_transform(&scaled_body, params, &MeasureOptions::new(Arc::clone(&opts.grid)))?;
    let m = obj.pairs();
    let got = check.pair_weights();
    let residual = (0..m)
        .filter(|&k| obj.pair_mass[k] > 0.0)
        .map(|k| (got[k] - obj.pair_mass[k]).abs() / obj.pair_mass[k])
        .fold(0.0, f64::max);
    let state = SolverState {
        objective: ev.objective,
        gradient: ev.gradient.clone(),
        iteration,
        step,
        trace,
        log_h,
    };
    Ok(Solution { status, state, body: ev.body, c, scaled_body, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::cone_volume_measure;

    fn grid() -> Arc<SphericalGrid> {
        SphericalGrid::shared(2, 180).unwrap()
    }

    #[test]
    fn entropy_values() {
        let sq = SymmetricPolytope::cube(2).unwrap();
        let mu = cone_volume_measure(&sq).unwrap();
        assert_eq!(entropy(&mu, &[1.0; 4]).unwrap(), 0.0);
        assert!((entropy(&mu, &[3.0; 4]).unwrap() + 3f64.ln()).abs() < 1e-15);
        assert!(entropy(&mu, &[1.0, 0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn objective_is_shift_invariant() {
        let hex = crate::body::random::random_hexagon(9);
        let mu = cone_volume_measure(&hex).unwrap();
        let params = LpParams::new(2, 0.5).unwrap();
        let obj = Objective::new(&mu, params, &SolverOptions::new(grid())).unwrap();
        let l = vec![0.1, -0.3, 0.2];
        let shifted: Vec<f64> = l.iter().map(|x| x + 0.7).collect();
        let a = obj.value(&l).unwrap();
        let b = obj.value(&shifted).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} {b}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let hex = crate::body::random::random_hexagon(5);
        let mu = cone_volume_measure(&hex).unwrap();
        for p in [-1.0, 0.5] {
            let params = LpParams::new(2, p).unwrap();
            let obj = Objective::new(&mu, params, &SolverOptions::new(grid())).unwrap();
            let l = vec![0.05, -0.1, 0.02];
            let ev = obj.evaluate(&l).unwrap();
            assert!(pairwise_sum(&ev.gradient).abs() < 1e-10);
            for k in 0..3 {
                let mut a = l.clone();
                let mut b = l.clone();
                a[k] += 1e-4;
                b[k] -= 1e-4;
                let fd = (obj.value(&a).unwrap() - obj.value(&b).unwrap()) / 2e-4;
                assert!((fd - ev.gradient[k]).abs() <= 1e-2 * fd.abs().max(1e-6), "{k}: {fd} {}", ev.gradient[k]);
            }
        }
    }

    #[test]
    fn uniform_octagon_measure_is_stationary_at_constant_h() {
        let oct = SymmetricPolytope::regular_polygon(4, 0.1).unwrap();
        let mu = DiscreteSphericalMeasure::on_facets(&oct, vec![1.0; 8]).unwrap();
        let obj = Objective::new(&mu, LpParams::new(2, 0.3).unwrap(), &SolverOptions::new(grid())).unwrap();
        let ev = obj.evaluate(&[0.0; 4]).unwrap();
        assert!(max_abs(&ev.gradient) < 1e-10, "{:?}", ev.gradient);
    }

    #[test]
    fn square_from_four_atoms() {
        let mu = DiscreteSphericalMeasure::from_pairs(2, &[Vec3::x(), Vec3::y()], &[1.0, 1.0]).unwrap();
        let sol = solve(&mu, LpParams::new(2, -1.0).unwrap(), &SolverOptions::new(grid())).unwrap();
        assert_eq!(sol.status, SolverStatus::Converged);
        assert!(sol.residual < 1e-2);
        let h = sol.body.support();
        assert!((h[0] - h[1]).abs() < 1e-9);
    }

    #[test]
    fn concentrated_measure_diverges() {
        let mu = DiscreteSphericalMeasure::from_pairs(
            2,
            &[Vec3::x(), Vec3::new(0.5, 1.0, 0.0), Vec3::new(-0.5, 1.0, 0.0)],
            &[0.9, 0.05, 0.05],
        )
        .unwrap();
        let sol = solve(&mu, LpParams::new(2, 0.5).unwrap(), &SolverOptions::new(grid())).unwrap();
        assert_eq!(sol.status, SolverStatus::Diverged);
    }
}
