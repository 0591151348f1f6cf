//! Stochastic primitives: uniform and Gaussian vectors, the Heaviside gate,
//! and Lévy-flight steps.
//!
//! Lévy steps use Mantegna's construction: `step = u / |v|^(1/λ)` with
//! `u ~ N(0, σ_u²)` and `v ~ N(0, 1)`, where
//!
//! ```text
//! σ_u = [ Γ(1+λ) sin(πλ/2) / ( Γ((1+λ)/2) λ 2^((λ-1)/2) ) ]^(1/λ)
//! ```
//!
//! The magnitude of such steps has a power-law tail `P(|s| > x) ~ x^(-λ)`,
//! i.e. density tail exponent `1 + λ`.
//!
//! Draw order per Lévy step: the normal for `u`, then the normal for `v`
//! (redrawn while exactly zero).

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub fn uniform_vector(dim: usize, lo: f64, hi: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    if !(lo <= hi) {
        return Err(Error::InvalidArgument(format!(
            "uniform range [{lo}, {hi}] is empty"
        )));
    }
    Ok((0..dim).map(|_| rng.uniform(lo, hi)).collect())
}

pub fn gaussian_vector(dim: usize, mean: f64, sigma: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "standard deviation must be non-negative, got {sigma}"
        )));
    }
    Ok((0..dim)
        .map(|_| mean + sigma * rng.standard_normal())
        .collect())
}

/// Unit step with `H(0) = 1`. Returns exactly `0.0` or `1.0`.
pub fn heaviside(u: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::numeric(format!("heaviside of non-finite value {u}")));
    }
    Ok(if u >= 0.0 { 1.0 } else { 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    lambda: f64,
    scale: f64,
}

impl LevyParams {
    /// `lambda` must lie in `(0, 2)`; `scale` must be non-negative.
    pub fn new(lambda: f64, scale: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 2.0) {
            return Err(Error::InvalidArgument(format!(
                "levy exponent must lie in (0, 2), got {lambda}"
            )));
        }
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "levy scale must be finite and non-negative, got {scale}"
            )));
        }
        Ok(Self { lambda, scale })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn sigma_u(&self) -> f64 {
        mantegna_sigma(self.lambda)
    }
}

/// Standard deviation of the numerator normal in Mantegna's scheme.
pub fn mantegna_sigma(lambda: f64) -> f64 {
    let num = gamma(1.0 + lambda) * (PI * lambda / 2.0).sin();
    let den = gamma((1.0 + lambda) / 2.0) * lambda * 2f64.powf((lambda - 1.0) / 2.0);
    (num / den).powf(1.0 / lambda)
}

/// One unscaled Lévy step.
pub fn levy_step(params: &LevyParams, rng: &mut RngStream) -> f64 {
    levy_raw(params.lambda, params.sigma_u(), rng)
}

fn levy_raw(lambda: f64, sigma_u: f64, rng: &mut RngStream) -> f64 {
    let u = sigma_u * rng.standard_normal();
    let mut v = rng.standard_normal();
    while v == 0.0 {
        v = rng.standard_normal();
    }
    u / v.abs().powf(1.0 / lambda)
}

/// `dim` independent Lévy steps, each multiplied by `params.scale()`.
pub fn levy_vector(dim: usize, params: &LevyParams, rng: &mut RngStream) -> Vec<f64> {
    let sigma_u = params.sigma_u();
    (0..dim)
        .map(|_| params.scale * levy_raw(params.lambda, sigma_u, rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_uniform_interval() {
        let v = uniform_vector(5, 0.7, 0.7, &mut RngStream::new(1)).unwrap();
        assert!(v.iter().all(|x| *x == 0.7));
    }

    #[test]
    fn uniform_rejects_inverted_range() {
        let err = uniform_vector(3, 1.0, 0.0, &mut RngStream::new(1)).unwrap_err();
        assert_eq!(err.kind(), "invalid-argument");
    }

    #[test]
    fn uniform_mean_is_one_half() {
        let v = uniform_vector(100_000, 0.0, 1.0, &mut RngStream::new(2)).unwrap();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn gaussian_zero_sigma_and_negative_sigma() {
        let v = gaussian_vector(4, 3.25, 0.0, &mut RngStream::new(1)).unwrap();
        assert!(v.iter().all(|x| *x == 3.25));
        assert!(gaussian_vector(4, 0.0, -1.0, &mut RngStream::new(1)).is_err());
    }

    #[test]
    fn gaussian_unit_variance() {
        let v = gaussian_vector(100_000, 0.0, 1.0, &mut RngStream::new(3)).unwrap();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn heaviside_values() {
        assert_eq!(heaviside(0.5).unwrap(), 1.0);
        assert_eq!(heaviside(-0.2).unwrap(), 0.0);
        assert_eq!(heaviside(0.0).unwrap(), 1.0);
        assert!(heaviside(f64::NAN).is_err());
    }

    #[test]
    fn levy_rejects_exponent_outside_open_interval() {
        for bad in [0.0, 2.0, 2.5, -1.0, f64::NAN] {
            assert!(LevyParams::new(bad, 1.0).is_err(), "lambda {bad}");
        }
        assert!(LevyParams::new(1.5, -1.0).is_err());
    }

    #[test]
    fn sigma_u_at_three_halves() {
        let s = mantegna_sigma(1.5);
        assert!((s - 0.6966).abs() < 5e-5, "{s}");
    }

    #[test]
    fn zero_scale_gives_zero_vector() {
        let p = LevyParams::new(1.5, 0.0).unwrap();
        assert!(levy_vector(6, &p, &mut RngStream::new(4))
            .iter()
            .all(|x| *x == 0.0));
    }

    #[test]
    fn one_dimensional_vector_is_scaled_step() {
        let p = LevyParams::new(1.3, 2.5).unwrap();
        let v = levy_vector(1, &p, &mut RngStream::new(5));
        let s = levy_step(&p, &mut RngStream::new(5));
        assert_eq!(v[0], 2.5 * s);
    }

    #[test]
    fn smaller_exponent_has_heavier_tail() {
        let count_big = |lambda: f64| {
            let p = LevyParams::new(lambda, 1.0).unwrap();
            let mut rng = RngStream::new(11);
            (0..1_000_000)
                .filter(|_| levy_step(&p, &mut rng).abs() > 10.0)
                .count()
        };
        let light = count_big(1.95);
        let heavy = count_big(1.2);
        assert!(light < heavy, "{light} vs {heavy}");
    }
}
