//! Gamma/beta helpers and unit-ball constants.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

/// `ln B(a, b)` through log-gamma differences.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// Volume `ω_k` of the k-dimensional unit ball.
pub fn ball_volume(k: usize) -> f64 {
    let h = k as f64 / 2.0;
    (h * PI.ln() - ln_gamma(h + 1.0)).exp()
}

/// Surface measure `n ω_n` of `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * ball_volume(n)
}

/// `ρ_{I_p B^n}`: `((1-p)/2 · ω_{n-1} B((1-p)/2, (n+1)/2))^{1/p}`.
pub fn lp_ball_radius(n: usize, p: f64) -> f64 {
    let ln_moment = ((1.0 - p) / 2.0).ln()
        + ball_volume(n - 1).ln()
        + ln_beta((1.0 - p) / 2.0, (n as f64 + 1.0) / 2.0);
    (ln_moment / p).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_constants() {
        assert!((ball_volume(1) - 2.0).abs() < 1e-14);
        assert!((ball_volume(2) - PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn beta_values() {
        assert!((beta(1.0, 1.0) - 1.0).abs() < 1e-14);
        assert!((beta(0.5, 0.5) - PI).abs() < 1e-12);
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn lp_ball_radius_approaches_central_section() {
        // p -> 1-: ρ_{I_p B^n} -> ω_{n-1}.
        assert!((lp_ball_radius(2, 0.99999) - 2.0).abs() < 1e-3);
        assert!((lp_ball_radius(3, 0.99999) - PI).abs() < 1e-3);
    }
}
