//! Exact facet integrals of `k(u·y)` for `k(s) = |s|^q` or `ln|s|`.
//!
//! The integrand depends on `y` only through the linear form `s = u·y`, so
//! over a segment or triangle it reduces to one-dimensional antiderivatives.

use super::polytope::{fan, Facet};
use crate::geom::Vec3;
use crate::sphere::gauss::cached_legendre;

/// Kernel in the scalar variable `s = u·y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `|s|^q` with `q > −1`.
    Power(f64),
    /// `ln|s|`.
    Log,
}

impl Kernel {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Kernel::Power(q) => s.abs().powf(q),
            Kernel::Log => s.abs().ln(),
        }
    }

    /// `J0' = k`, `J0(0) = 0`.
    fn j0(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        match *self {
            Kernel::Power(q) => s.signum() * s.abs().powf(q + 1.0) / (q + 1.0),
            Kernel::Log => s * s.abs().ln() - s,
        }
    }

    /// `J1' = s·k`, `J1(0) = 0`.
    fn j1(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        match *self {
            Kernel::Power(q) => s.abs().powf(q + 2.0) / (q + 2.0),
            Kernel::Log => 0.5 * s * s * s.abs().ln() - 0.25 * s * s,
        }
    }
}

const NEAR: f64 = 0.25;

fn gauss16<F: Fn(f64) -> f64>(f: F) -> f64 {
    let rule = cached_legendre(16);
    rule.on_unit_interval().into_iter().map(|(t, w)| w * f(t)).sum()
}

/// `∫_0^1 k(a + λ(b − a)) dλ`.
pub fn segment_mean(k: Kernel, a: f64, b: f64) -> f64 {
    let d = b - a;
    if d.abs() <= NEAR * a.abs().max(b.abs()) {
        return gauss16(|t| k.eval(a + t * d));
    }
    (k.j0(b) - k.j0(a)) / d
}

/// `∫_0^1 λ k(a + λ(b − a)) dλ`.
pub fn ramp_mean(k: Kernel, a: f64, b: f64) -> f64 {
    let d = b - a;
    if d.abs() <= NEAR * a.abs().max(b.abs()) {
        return gauss16(|t| t * k.eval(a + t * d));
    }
    ((k.j1(b) - k.j1(a)) - a * (k.j0(b) - k.j0(a))) / (d * d)
}

/// `∫_T k(u·y) dσ(y)` over a triangle of area `area` with vertex values `s`.
pub fn triangle_integral(k: Kernel, s: [f64; 3], area: f64) -> f64 {
    let mut s = s;
    s.sort_by(f64::total_cmp);
    let span = s[2] - s[0];
    if span <= 1e-15 * s[0].abs().max(s[2].abs()) {
        return area * k.eval(0.5 * (s[0] + s[2]));
    }
    let wa = (s[1] - s[0]) / span;
    let wb = (s[2] - s[1]) / span;
    let mut acc = 0.0;
    if wa > 0.0 {
        acc += wa * ramp_mean(k, s[0], s[1]);
    }
    if wb > 0.0 {
        acc += wb * ramp_mean(k, s[2], s[1]);
    }
    2.0 * area * acc
}

/// `∫_F k(u·y) dσ(y)` over an active facet.
pub fn facet_integral(k: Kernel, dim: usize, f: &Facet, u: &Vec3) -> f64 {
    if !f.active {
        return 0.0;
    }
    if dim == 2 {
        let a = u.dot(&f.vertices[0]);
        let b = u.dot(&f.vertices[1]);
        return f.area * segment_mean(k, a, b);
    }
    fan(f)
        .map(|(t, area)| triangle_integral(k, [u.dot(&t[0]), u.dot(&t[1]), u.dot(&t[2])], area))
        .sum()
}
