use super::{AlgorithmParams, FireflyParams, Optimizer, StepContext};
use crate::error::Result;
use crate::population::Population;
use crate::samplers::gaussian_vector;

/// Attractiveness `β0·e^{−γ r²}` at squared distance `r2`.
pub fn attraction(beta0: f64, gamma: f64, r2: f64) -> f64 {
    beta0 * (-gamma * r2).exp()
}

/// Move firefly `xi` toward a brighter `xj`: `xi + β0 e^{−γ r²}(xj − xi) + α ε`.
pub fn firefly_move(
    xi: &[f64],
    xj: &[f64],
    params: &FireflyParams,
    alpha: f64,
    eps: &[f64],
) -> Vec<f64> {
    let r2: f64 = xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
    let beta = attraction(params.beta0, params.gamma, r2);
    xi.iter()
        .zip(xj)
        .zip(eps)
        .map(|((a, b), e)| a + beta * (b - a) + alpha * e)
        .collect()
}

/// Firefly algorithm with an in-place sweep.
///
/// Agents are visited in index order; agent `i` moves toward every agent `j`
/// (in index order) whose fitness at the start of the iteration is strictly
/// better, using `j`'s current position. An agent with no brighter neighbour
/// takes a pure random walk `α ε`. The walk scale is `α·decay^t`. All agents
/// are re-evaluated after the sweep. The tracked global best is never read.
#[derive(Debug, Clone)]
pub struct Firefly {
    params: FireflyParams,
}

impl Firefly {
    pub fn new(params: FireflyParams) -> Self {
        Self { params }
    }
}

impl Optimizer for Firefly {
    fn params(&self) -> AlgorithmParams {
        AlgorithmParams::Firefly(self.params)
    }

    fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let mut p = self.params();
        p.set(name, value)?;
        if let AlgorithmParams::Firefly(p) = p {
            self.params = p;
        }
        Ok(())
    }

    // Draw order: d normals per move, in sweep order.
    fn transition(&mut self, pop: &mut Population, ctx: &mut StepContext<'_, '_>) -> Result<()> {
        let n = pop.len();
        let d = pop.dim();
        let alpha = self.params.alpha * self.params.alpha_decay.powi(pop.iteration as i32);
        let brightness: Vec<f64> = pop.agents.iter().map(|a| a.fitness_or_inf()).collect();

        for i in 0..n {
            let mut moved = false;
            for j in 0..n {
                if brightness[j] < brightness[i] {
                    let eps = gaussian_vector(d, 0.0, 1.0, ctx.rng)?;
                    let mut next = firefly_move(
                        &pop.agents[i].position,
                        &pop.agents[j].position,
                        &self.params,
                        alpha,
                        &eps,
                    );
                    ctx.space.clamp_in_place(&mut next)?;
                    pop.agents[i].position = next;
                    moved = true;
                }
            }
            if !moved {
                let eps = gaussian_vector(d, 0.0, 1.0, ctx.rng)?;
                let agent = &mut pop.agents[i];
                for (x, e) in agent.position.iter_mut().zip(eps) {
                    *x += alpha * e;
                }
                ctx.space.clamp_in_place(&mut agent.position)?;
            }
        }

        let values = ctx.eval.evaluate_batch(&pop.positions())?;
        for (i, f) in values.into_iter().enumerate() {
            pop.set_fitness(i, f);
        }
        Ok(())
    }
}
