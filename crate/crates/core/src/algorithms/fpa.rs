use super::{
    global_best_position, greedy_replace, AlgorithmParams, FpaParams, Optimizer, StepContext,
};
use crate::error::Result;
use crate::population::Population;
use crate::samplers::{levy_vector, LevyParams};

/// Biotic move `x + γ·L⊙(g − x)`.
pub fn fpa_global_move(x: &[f64], best: &[f64], gamma: f64, levy: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(best.iter().zip(levy))
        .map(|(x, (g, l))| x + gamma * l * (g - x))
        .collect()
}

/// Abiotic move `x + U·(xj − xk)`.
pub fn fpa_local_move(x: &[f64], xj: &[f64], xk: &[f64], u: f64) -> Vec<f64> {
    x.iter()
        .zip(xj.iter().zip(xk))
        .map(|(x, (a, b))| x + u * (a - b))
        .collect()
}

/// Flower pollination.
///
/// Candidates are built synchronously from the positions at the start of the
/// iteration and the tracked global best, then evaluated; each replaces its
/// flower only if strictly better.
#[derive(Debug, Clone)]
pub struct Fpa {
    params: FpaParams,
}

impl Fpa {
    pub fn new(params: FpaParams) -> Self {
        Self { params }
    }
}

impl Optimizer for Fpa {
    fn params(&self) -> AlgorithmParams {
        AlgorithmParams::Fpa(self.params)
    }

    fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let mut p = self.params();
        p.set(name, value)?;
        if let AlgorithmParams::Fpa(p) = p {
            self.params = p;
        }
        Ok(())
    }

    // Draw order per flower: the branch uniform; then either 2d normals
    // (global) or the (j, k) permutation draw followed by U (local).
    fn transition(&mut self, pop: &mut Population, ctx: &mut StepContext<'_, '_>) -> Result<()> {
        let n = pop.len();
        let d = pop.dim();
        let best = global_best_position(pop)?;
        let levy = LevyParams::new(self.params.lambda, 1.0)?;
        let snapshot = pop.positions();

        let mut candidates = Vec::with_capacity(n);
        for (i, x) in snapshot.iter().enumerate() {
            let mut cand = if ctx.rng.unit() < self.params.p_switch {
                let l = levy_vector(d, &levy, ctx.rng);
                fpa_global_move(x, &best, self.params.gamma, &l)
            } else {
                let (j, k) = ctx.rng.distinct_pair_excluding(n, i);
                let u = ctx.rng.unit();
                fpa_local_move(x, &snapshot[j], &snapshot[k], u)
            };
            ctx.space.clamp_in_place(&mut cand)?;
            candidates.push((i, cand));
        }
        greedy_replace(pop, candidates, ctx.eval)
    }
}
