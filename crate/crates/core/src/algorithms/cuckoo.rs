use super::{greedy_replace, AlgorithmParams, CuckooParams, Optimizer, StepContext};
use crate::error::Result;
use crate::population::Population;
use crate::samplers::{heaviside, levy_vector, LevyParams};

/// Local-walk candidate `x + α·s·H(pa − ε)·(xj − xk)`.
pub fn cuckoo_local_move(
    x: &[f64],
    xj: &[f64],
    xk: &[f64],
    alpha_local: f64,
    step: f64,
    pa: f64,
    eps: f64,
) -> Result<Vec<f64>> {
    let gate = heaviside(pa - eps)?;
    Ok(x.iter()
        .zip(xj.iter().zip(xk))
        .map(|(x, (a, b))| x + alpha_local * step * gate * (a - b))
        .collect())
}

/// Cuckoo search.
///
/// Global phase: every nest proposes `x + α·L` with a per-dimension Lévy
/// vector, which replaces that nest if strictly better.
/// Local phase: per nest, two other nests `j ≠ k` are drawn by permutation and
/// the Heaviside-gated differential walk is proposed, kept only if strictly
/// better. Replacement is always greedy, so the best nest survives every
/// iteration. The tracked global best is never read.
#[derive(Debug, Clone)]
pub struct Cuckoo {
    params: CuckooParams,
}

impl Cuckoo {
    pub fn new(params: CuckooParams) -> Self {
        Self { params }
    }
}

impl Optimizer for Cuckoo {
    fn params(&self) -> AlgorithmParams {
        AlgorithmParams::Cuckoo(self.params)
    }

    fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let mut p = self.params();
        p.set(name, value)?;
        if let AlgorithmParams::Cuckoo(p) = p {
            self.params = p;
        }
        Ok(())
    }

    // Draw order: global phase, 2d normals per nest; local phase, per nest
    // the (j, k) permutation draw, ε, then s.
    fn transition(&mut self, pop: &mut Population, ctx: &mut StepContext<'_, '_>) -> Result<()> {
        let n = pop.len();
        let d = pop.dim();
        let p = self.params;
        let levy = LevyParams::new(p.lambda, p.alpha_levy)?;

        let mut proposals = Vec::with_capacity(n);
        for (i, agent) in pop.agents.iter().enumerate() {
            let step = levy_vector(d, &levy, ctx.rng);
            let mut cand: Vec<f64> = agent
                .position
                .iter()
                .zip(step)
                .map(|(x, s)| x + s)
                .collect();
            ctx.space.clamp_in_place(&mut cand)?;
            proposals.push((i, cand));
        }
        greedy_replace(pop, proposals, ctx.eval)?;

        let snapshot = pop.positions();
        let mut local = Vec::new();
        for (i, x) in snapshot.iter().enumerate() {
            let (j, k) = ctx.rng.distinct_pair_excluding(n, i);
            let eps = ctx.rng.unit();
            let s = ctx.rng.unit();
            if heaviside(p.pa - eps)? == 0.0 {
                continue;
            }
            let mut cand =
                cuckoo_local_move(x, &snapshot[j], &snapshot[k], p.alpha_local, s, p.pa, eps)?;
            ctx.space.clamp_in_place(&mut cand)?;
            local.push((i, cand));
        }
        greedy_replace(pop, local, ctx.eval)
    }
}
