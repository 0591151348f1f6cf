//! Empirical Markov chains over a discretized search space and their
//! subdominant eigenvalue.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::SearchSpace;
use crate::trace::Snapshot;

/// Iteration cap for the spectral power iterations.
pub const SPECTRAL_MAX_ITER: usize = 100_000;
/// Convergence tolerance for the subdominant eigenvalue estimate.
pub const SPECTRAL_TOL: f64 = 1e-10;

const ROW_SUM_TOL: f64 = 1e-9;

/// Row-stochastic transition matrix, stored row-major, with the raw
/// transition counts it was estimated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    n_states: usize,
    transition: Vec<f64>,
    counts: Vec<u64>,
}

impl ChainModel {
    /// Wrap an explicit transition matrix (counts are all zero).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "transition matrix must be square and non-empty".into(),
            ));
        }
        let chain = Self {
            n_states: n,
            transition: rows.iter().flatten().copied().collect(),
            counts: vec![0; n * n],
        };
        chain.check_stochastic()?;
        Ok(chain)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.transition[i * self.n_states..(i + 1) * self.n_states]
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.transition[i * self.n_states + j]
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.n_states + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_states).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn check_stochastic(&self) -> Result<()> {
        for i in 0..self.n_states {
            let row = self.row(i);
            if let Some(bad) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has entry {bad} outside [0, 1]"
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidArgument(format!(
                    "row {i} sums to {s}, not 1"
                )));
            }
        }
        Ok(())
    }

    /// `y = P x`.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(p, v)| p * v).sum();
        }
    }

    /// `y = πᵀ P` (row vector times matrix).
    fn apply_left(&self, pi: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, w) in pi.iter().enumerate() {
            for (yj, p) in y.iter_mut().zip(self.row(i)) {
                *yj += w * p;
            }
        }
    }

    /// Stationary distribution by power iteration on the lazy chain `(P + I)/2`,
    /// which shares it and is aperiodic.
    pub fn stationary(&self) -> Vec<f64> {
        let n = self.n_states;
        let mut pi = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        for _ in 0..SPECTRAL_MAX_ITER {
            self.apply_left(&pi, &mut next);
            let mut change = 0.0;
            for (nx, p) in next.iter_mut().zip(&pi) {
                *nx = 0.5 * (*nx + p);
                change += (*nx - p).abs();
            }
            let total: f64 = next.iter().sum();
            next.iter_mut().for_each(|v| *v /= total);
            std::mem::swap(&mut pi, &mut next);
            if change < 1e-15 {
                break;
            }
        }
        pi
    }
}

/// Count observed `i → j` transitions across all trajectories and normalize
/// rows. States never left get a uniform row.
pub fn empirical_transition_matrix(
    trajectories: &[Vec<usize>],
    n_states: usize,
) -> Result<ChainModel> {
    if n_states == 0 {
        return Err(Error::InvalidArgument(
            "chain needs at least one state".into(),
        ));
    }
    let mut counts = vec![0u64; n_states * n_states];
    for (t, traj) in trajectories.iter().enumerate() {
        if let Some(bad) = traj.iter().find(|s| **s >= n_states) {
            return Err(Error::InvalidArgument(format!(
                "trajectory {t} visits state {bad}, but there are only {n_states} states"
            )));
        }
        for w in traj.windows(2) {
            counts[w[0] * n_states + w[1]] += 1;
        }
    }
    let mut transition = vec![0.0; n_states * n_states];
    for i in 0..n_states {
        let row = &counts[i * n_states..(i + 1) * n_states];
        let total: u64 = row.iter().sum();
        let out = &mut transition[i * n_states..(i + 1) * n_states];
        if total == 0 {
            out.iter_mut().for_each(|p| *p = 1.0 / n_states as f64);
        } else {
            for (p, c) in out.iter_mut().zip(row) {
                *p = *c as f64 / total as f64;
            }
        }
    }
    Ok(ChainModel {
        n_states,
        transition,
        counts,
    })
}

/// Rayleigh-quotient estimate of the leading eigenvalue at the stationary vector.
pub fn leading_eigenvalue(chain: &ChainModel) -> Result<f64> {
    chain.check_stochastic()?;
    let pi = chain.stationary();
    let mut y = vec![0.0; pi.len()];
    chain.apply_left(&pi, &mut y);
    Ok(dot(&y, &pi) / dot(&pi, &pi))
}

/// Modulus of the second-largest eigenvalue of a row-stochastic matrix.
///
/// The unit eigenvalue is removed by Wielandt deflation `B = P − 1πᵀ` with
/// the stationary vector `π`, then `B` is power-iterated. Each sweep fits the
/// two-term recurrence `B²x ≈ a·Bx + b·x`; the largest root modulus of
/// `z² − a z − b` follows a dominant real eigenvalue and also a dominant
/// complex-conjugate pair. When `Bx` and `x` become parallel the plain norm
/// ratio is used. Three distinct eigenvalues sharing the subdominant modulus
/// can defeat the fit, which then surfaces as a non-convergence error.
pub fn second_eigenvalue(chain: &ChainModel) -> Result<f64> {
    let lead = leading_eigenvalue(chain)?;
    if (lead - 1.0).abs() > 1e-9 {
        return Err(Error::numeric(format!(
            "leading eigenvalue estimate {lead} is not 1"
        )));
    }
    let n = chain.n_states();
    if n == 1 {
        return Ok(0.0);
    }
    let pi = chain.stationary();
    let deflated = |x: &[f64], out: &mut [f64]| {
        chain.apply(x, out);
        let s = dot(&pi, x);
        out.iter_mut().for_each(|v| *v -= s);
    };

    // Golden-angle start vector: generic enough to overlap every eigenvector.
    let mut x: Vec<f64> = (0..n)
        .map(|i| (1.0 + 2.399_963_229_728_653 * i as f64).sin())
        .collect();
    normalize(&mut x);
    let mut w1 = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let mut previous = f64::NAN;
    let mut stable = 0;
    for _ in 0..SPECTRAL_MAX_ITER {
        deflated(&x, &mut w1);
        let n1 = norm(&w1);
        if n1 <= 1e-14 {
            return Ok(0.0);
        }
        deflated(&w1, &mut w2);
        let estimate = recurrence_modulus(&x, &w1, &w2);
        if (estimate - previous).abs() <= SPECTRAL_TOL * estimate.max(1.0) {
            stable += 1;
            if stable >= 3 {
                return Ok(estimate);
            }
        } else {
            stable = 0;
        }
        previous = estimate;
        x.iter_mut().zip(&w1).for_each(|(xi, wi)| *xi = wi / n1);
    }
    Err(Error::numeric(format!(
        "second eigenvalue did not converge within {SPECTRAL_MAX_ITER} iterations"
    )))
}

fn recurrence_modulus(x: &[f64], w1: &[f64], w2: &[f64]) -> f64 {
    let g11 = dot(w1, w1);
    let g12 = dot(w1, x);
    let g22 = dot(x, x);
    let det = g11 * g22 - g12 * g12;
    if det <= 1e-10 * g11 * g22 {
        return norm(w2) / g11.sqrt();
    }
    let r1 = dot(w1, w2);
    let r2 = dot(x, w2);
    let a = (r1 * g22 - g12 * r2) / det;
    let b = (g11 * r2 - g12 * r1) / det;
    let disc = a * a + 4.0 * b;
    if disc >= 0.0 {
        let s = disc.sqrt();
        ((a + s) / 2.0).abs().max(((a - s) / 2.0).abs())
    } else {
        (-b).sqrt()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    a.iter_mut().for_each(|v| *v /= n);
}

/// Flattened row-major index of the uniform grid cell containing `position`.
/// A coordinate equal to the upper bound falls in the last bin.
pub fn cell_index(position: &[f64], space: &SearchSpace, bins_per_dim: usize) -> Result<usize> {
    if !space.contains(position) {
        return Err(Error::InvalidArgument(format!(
            "position {position:?} lies outside the search space"
        )));
    }
    let mut idx = 0usize;
    for (k, v) in position.iter().enumerate() {
        let (lo, hi) = (space.lower()[k], space.upper()[k]);
        let cell = (((v - lo) / (hi - lo)) * bins_per_dim as f64).floor() as usize;
        idx = idx * bins_per_dim + cell.min(bins_per_dim - 1);
    }
    Ok(idx)
}

/// Number of grid cells, `bins^dim`, if it fits in `usize`.
pub fn state_count(space: &SearchSpace, bins_per_dim: usize) -> Result<usize> {
    bins_per_dim
        .checked_pow(space.dim() as u32)
        .ok_or_else(|| Error::InvalidArgument("state count overflows".into()))
}

/// Map snapshots (in iteration order) to one state sequence per agent.
pub fn discretize_positions(
    snapshots: &[Snapshot],
    space: &SearchSpace,
    bins_per_dim: usize,
) -> Result<Vec<Vec<usize>>> {
    if bins_per_dim == 0 {
        return Err(Error::InvalidArgument(
            "bins_per_dim must be at least 1".into(),
        ));
    }
    state_count(space, bins_per_dim)?;
    let agents = snapshots.first().map_or(0, |s| s.positions.len());
    let mut trajectories = vec![Vec::with_capacity(snapshots.len()); agents];
    for snap in snapshots {
        if snap.positions.len() != agents {
            return Err(Error::InvalidArgument(format!(
                "snapshot at iteration {} has {} agents, expected {agents}",
                snap.iteration,
                snap.positions.len()
            )));
        }
        for (traj, p) in trajectories.iter_mut().zip(&snap.positions) {
            traj.push(cell_index(p, space, bins_per_dim)?);
        }
    }
    Ok(trajectories)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_single_trajectory() {
        let c = empirical_transition_matrix(&[vec![0, 0, 0, 0]], 2).unwrap();
        assert_eq!(c.row(0), &[1.0, 0.0]);
        assert_eq!(c.row(1), &[0.5, 0.5]);
        assert_eq!(c.count(0, 0), 3);
    }

    #[test]
    fn alternating_trajectory() {
        let c = empirical_transition_matrix(&[vec![0, 1, 0, 1]], 2).unwrap();
        assert_eq!(c.row(0), &[0.0, 1.0]);
        assert_eq!(c.row(1), &[1.0, 0.0]);
    }

    #[test]
    fn out_of_range_state() {
        assert!(empirical_transition_matrix(&[vec![0, 3]], 2).is_err());
    }

    #[test]
    fn identity_has_unit_second_eigenvalue() {
        let c = ChainModel::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((second_eigenvalue(&c).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_rank_one_has_zero_second_eigenvalue() {
        let rows = vec![vec![0.25; 4]; 4];
        let c = ChainModel::from_rows(&rows).unwrap();
        assert!(second_eigenvalue(&c).unwrap().abs() < 1e-9);
    }

    #[test]
    fn two_state_closed_form() {
        let (p, q) = (0.3, 0.2);
        let c = ChainModel::from_rows(&[vec![1.0 - p, p], vec![q, 1.0 - q]]).unwrap();
        assert!((second_eigenvalue(&c).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn periodic_chain_has_modulus_one() {
        let c = ChainModel::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((second_eigenvalue(&c).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_with_complex_pair() {
        // Cyclic 3-state shift mixed with the identity: eigenvalues 1 and
        // 0.5 + 0.5·e^{±2πi/3}, modulus 0.5.
        let rows = vec![
            vec![0.5, 0.5, 0.0],
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
        ];
        let c = ChainModel::from_rows(&rows).unwrap();
        assert!((second_eigenvalue(&c).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn non_stochastic_is_rejected() {
        assert!(ChainModel::from_rows(&[vec![0.5, 0.4], vec![0.0, 1.0]]).is_err());
        assert!(ChainModel::from_rows(&[vec![1.5, -0.5], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn grid_cells() {
        let s = SearchSpace::cube(1, 0.0, 1.0).unwrap();
        assert_eq!(cell_index(&[0.25], &s, 2).unwrap(), 0);
        assert_eq!(cell_index(&[0.75], &s, 2).unwrap(), 1);
        assert_eq!(cell_index(&[1.0], &s, 2).unwrap(), 1);
        assert_eq!(cell_index(&[0.9], &s, 1).unwrap(), 0);
        assert!(cell_index(&[1.1], &s, 2).is_err());
        let s2 = SearchSpace::cube(2, 0.0, 1.0).unwrap();
        assert_eq!(cell_index(&[0.75, 0.25], &s2, 2).unwrap(), 2);
    }
}
