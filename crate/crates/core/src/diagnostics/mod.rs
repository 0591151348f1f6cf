//! Analysis tools: PSO eigenvalue bifurcation, population diversity,
//! sub-swarm detection and empirical Markov-chain spectra.

mod chain;
mod subswarm;

pub use chain::{
    cell_index, discretize_positions, empirical_transition_matrix, leading_eigenvalue,
    second_eigenvalue, state_count, ChainModel, SPECTRAL_MAX_ITER, SPECTRAL_TOL,
};
pub use subswarm::{cluster_positions, count_subswarms, default_threshold, SubswarmReport};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::population::Population;

/// Roots `1 − γ/2 ± √(γ² − 4γ)/2` of the mean PSO recurrence at `γ = α + β`.
///
/// Complex (unit modulus) for `0 < γ < 4`, a double root at `γ = 0` and
/// `γ = 4`, real and distinct otherwise.
pub fn pso_eigenvalues(gamma: f64) -> Result<(Complex64, Complex64)> {
    if !gamma.is_finite() {
        return Err(Error::numeric(format!("non-finite gamma {gamma}")));
    }
    let centre = 1.0 - gamma / 2.0;
    let disc = gamma * (gamma - 4.0);
    if disc >= 0.0 {
        let h = disc.sqrt() / 2.0;
        Ok((
            Complex64::new(centre + h, 0.0),
            Complex64::new(centre - h, 0.0),
        ))
    } else {
        let h = (-disc).sqrt() / 2.0;
        Ok((Complex64::new(centre, h), Complex64::new(centre, -h)))
    }
}

/// Mean over dimensions of the per-dimension population variance (divisor N).
pub fn diversity_variance(pop: &Population) -> Result<f64> {
    position_variance(&pop.positions())
}

pub fn position_variance(positions: &[Vec<f64>]) -> Result<f64> {
    let Some(first) = positions.first() else {
        return Err(Error::InvalidArgument("population is empty".into()));
    };
    let n = positions.len() as f64;
    let d = first.len();
    if d == 0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for k in 0..d {
        let mean = positions.iter().map(|p| p[k]).sum::<f64>() / n;
        total += positions.iter().map(|p| (p[k] - mean).powi(2)).sum::<f64>() / n;
    }
    Ok(total / d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pop(points: Vec<Vec<f64>>) -> Population {
        Population::from_positions(points, false)
    }

    #[test]
    fn eigenvalues_at_zero_are_one() {
        let (a, b) = pso_eigenvalues(0.0).unwrap();
        assert_eq!(a, Complex64::new(1.0, 0.0));
        assert_eq!(b, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn eigenvalues_at_four_are_minus_one() {
        let (a, b) = pso_eigenvalues(4.0).unwrap();
        assert_eq!(a, Complex64::new(-1.0, 0.0));
        assert_eq!(b, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn eigenvalues_at_two_are_plus_minus_i() {
        let (a, b) = pso_eigenvalues(2.0).unwrap();
        assert!((a - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((b - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn eigenvalues_reject_nan() {
        assert_eq!(
            pso_eigenvalues(f64::NAN).unwrap_err().kind(),
            "numeric-error"
        );
    }

    #[test]
    fn diversity_examples() {
        assert_eq!(
            diversity_variance(&pop(vec![vec![3.0, 1.0]; 5])).unwrap(),
            0.0
        );
        assert_eq!(
            diversity_variance(&pop(vec![vec![0.0], vec![2.0]])).unwrap(),
            1.0
        );
        assert!(diversity_variance(&pop(vec![])).is_err());
    }

    #[test]
    fn diversity_is_translation_invariant() {
        let a = pop(vec![vec![0.0, 1.0], vec![2.0, -1.0], vec![0.5, 0.25]]);
        let b = pop(a
            .positions()
            .iter()
            .map(|p| p.iter().map(|v| v + 0.5).collect())
            .collect());
        let (va, vb) = (
            diversity_variance(&a).unwrap(),
            diversity_variance(&b).unwrap(),
        );
        assert!((va - vb).abs() < 1e-14);
    }
}
