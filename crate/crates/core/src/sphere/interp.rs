use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::SphericalGrid;
use crate::geom::Vec3;

/// Interpolant through values on a [`SphericalGrid`].
///
/// On S¹ this is the trigonometric interpolant (exact for band-limited data).
/// On S² it is a local tensor-product cubic in (polar angle, longitude).
#[derive(Debug, Clone)]
pub enum Interpolant {
    Trig(TrigInterp),
    LatLong(LatLongInterp),
}

impl Interpolant {
    pub fn new(grid: &SphericalGrid, values: &[f64]) -> Self {
        assert_eq!(values.len(), grid.len());
        if grid.dim() == 2 {
            Interpolant::Trig(TrigInterp::new(values))
        } else {
            Interpolant::LatLong(LatLongInterp::new(grid, values))
        }
    }

    pub fn eval(&self, u: &Vec3) -> f64 {
        match self {
            Interpolant::Trig(t) => t.eval(u.y.atan2(u.x)),
            Interpolant::LatLong(l) => l.eval(u),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrigInterp {
    n: usize,
    /// `c_0, c_1, ..., c_{N/2}`; the Nyquist coefficient is real.
    coeffs: Vec<Complex64>,
    even_only: bool,
}

impl TrigInterp {
    /// Values at `θ_j = π(2j+1)/N`.
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let coeffs: Vec<Complex64> = buf[..=n / 2].iter().map(|c| c * scale).collect();
        let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let even_only = coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(|c| c.norm() <= 1e-14 * peak);
        Self { n, coeffs, even_only }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let n = self.n;
        let psi = theta - PI / n as f64;
        let half = n / 2;
        let mut acc = self.coeffs[0].re;
        let (step, base) = if self.even_only { (2, 2.0 * psi) } else { (1, psi) };
        let rot = Complex64::new(base.cos(), base.sin());
        let mut z = rot;
        let mut k = step;
        while k < half {
            acc += 2.0 * (self.coeffs[k] * z).re;
            z *= rot;
            k += step;
            if k % 64 == 0 {
                let a = k as f64 * psi;
                z = Complex64::new(a.cos(), a.sin());
            }
        }
        if half > 0 && k == half {
            acc += self.coeffs[half].re * (half as f64 * psi).cos();
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct LatLongInterp {
    /// Polar angles of rings in increasing order (ring index reversed from the grid).
    angles: Vec<f64>,
    lon: usize,
    /// `values[r * lon + m]` with `r` in increasing polar angle.
    values: Vec<f64>,
    /// Four-ring stencil for each interval between polar angles, indexed by
    /// the ring below plus one.
    stencils: Vec<Stencil>,
}

#[derive(Debug, Clone, Copy)]
struct Stencil {
    angles: [f64; 4],
    /// Row offset into `values` and longitude shift of each ring.
    rows: [(usize, usize); 4],
    /// Reciprocal Lagrange denominators.
    inv: [f64; 4],
}

impl LatLongInterp {
    fn new(grid: &SphericalGrid, values: &[f64]) -> Self {
        let rings = grid.resolution();
        let lon = grid.longitudes();
        let cos = grid.ring_cosines();
        let mut angles = Vec::with_capacity(rings);
        let mut vals = Vec::with_capacity(values.len());
        for r in 0..rings {
            let k = rings - 1 - r;
            angles.push(cos[k].clamp(-1.0, 1.0).acos());
            vals.extend_from_slice(&values[k * lon..(k + 1) * lon]);
        }
        // rings past a pole are read half a turn further on
        let ring = |r: isize| -> (f64, usize, usize) {
            let n = rings as isize;
            if r < 0 {
                let j = (-1 - r) as usize;
                (-angles[j], j * lon, lon / 2)
            } else if r >= n {
                let j = (2 * n - 1 - r) as usize;
                (2.0 * PI - angles[j], j * lon, lon / 2)
            } else {
                (angles[r as usize], r as usize * lon, 0)
            }
        };
        let stencils = (-1..rings as isize)
            .map(|idx| {
                let mut st = Stencil { angles: [0.0; 4], rows: [(0, 0); 4], inv: [0.0; 4] };
                for o in 0..4 {
                    let (a, row, shift) = ring(idx - 1 + o as isize);
                    st.angles[o] = a;
                    st.rows[o] = (row, shift);
                }
                for i in 0..4 {
                    let mut d = 1.0;
                    for j in 0..4 {
                        if i != j {
                            d *= st.angles[i] - st.angles[j];
                        }
                    }
                    st.inv[i] = 1.0 / d;
                }
                st
            })
            .collect();
        Self { angles, lon, values: vals, stencils }
    }

    fn eval(&self, u: &Vec3) -> f64 {
        let r = u.norm();
        let theta = (u.z / r).clamp(-1.0, 1.0).acos();
        let phi = u.y.atan2(u.x).rem_euclid(2.0 * PI);
        let st = &self.stencils[self.angles.partition_point(|&a| a <= theta)];
        // longitudes are uniform and even in number, so one set of cubic
        // weights serves every ring
        let lon = self.lon;
        let x = phi * lon as f64 / (2.0 * PI) - 0.5;
        let base = x.floor();
        let w = cubic_uniform(x - base);
        let b = (base as isize - 1).rem_euclid(lon as isize) as usize;
        let d = st.angles.map(|a| theta - a);
        let mut acc = 0.0;
        for o in 0..4 {
            let (row, shift) = st.rows[o];
            let vals = &self.values[row..row + lon];
            let mut f = 0.0;
            for (k, wk) in w.iter().enumerate() {
                let m = b + k + shift;
                f += wk * vals[if m >= lon { m - lon } else { m }];
            }
            let mut l = st.inv[o];
            for (j, dj) in d.iter().enumerate() {
                if j != o {
                    l *= dj;
                }
            }
            acc += l * f;
        }
        acc
    }
}

fn cubic_uniform(f: f64) -> [f64; 4] {
    // nodes at -1, 0, 1, 2
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}
