use super::{global_best_position, AlgorithmParams, Optimizer, PsoParams, StepContext};
use crate::error::{Error, Result};
use crate::population::{evaluate_and_update_bests, Population};
use crate::samplers::uniform_vector;

#[derive(Debug, Clone)]
pub struct Pso {
    params: PsoParams,
}

impl Pso {
    pub fn new(params: PsoParams) -> Self {
        Self { params }
    }
}

/// One particle update with explicit random vectors.
///
/// Returns `(v', x')` with `v' = w·v + α·ε1⊙(g − x) + β·ε2⊙(p − x)` and
/// `x' = x + v'`, before any bound handling.
pub fn pso_update(
    x: &[f64],
    v: &[f64],
    global_best: &[f64],
    personal_best: &[f64],
    eps1: &[f64],
    eps2: &[f64],
    params: &PsoParams,
) -> (Vec<f64>, Vec<f64>) {
    let mut v_new = Vec::with_capacity(x.len());
    let mut x_new = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let vk = params.inertia * v[k]
            + params.alpha * eps1[k] * (global_best[k] - x[k])
            + params.beta * eps2[k] * (personal_best[k] - x[k]);
        v_new.push(vk);
        x_new.push(x[k] + vk);
    }
    (v_new, x_new)
}

impl Optimizer for Pso {
    fn params(&self) -> AlgorithmParams {
        AlgorithmParams::Pso(self.params)
    }

    fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let mut p = self.params();
        p.set(name, value)?;
        if let AlgorithmParams::Pso(p) = p {
            self.params = p;
        }
        Ok(())
    }

    // Draw order: for each particle, ε1 (d uniforms) then ε2 (d uniforms).
    fn transition(&mut self, pop: &mut Population, ctx: &mut StepContext<'_, '_>) -> Result<()> {
        let g = global_best_position(pop)?;
        let d = pop.dim();
        for agent in pop.agents.iter_mut() {
            let (Some(v), Some(pb)) = (agent.velocity.as_ref(), agent.personal_best.as_ref())
            else {
                return Err(Error::Contract(
                    "pso requires a velocity and personal best on every particle".into(),
                ));
            };
            let eps1 = uniform_vector(d, 0.0, 1.0, ctx.rng)?;
            let eps2 = uniform_vector(d, 0.0, 1.0, ctx.rng)?;
            let (v_new, mut x_new) = pso_update(
                &agent.position,
                v,
                &g,
                &pb.position,
                &eps1,
                &eps2,
                &self.params,
            );
            ctx.space.clamp_in_place(&mut x_new)?;
            agent.velocity = Some(v_new);
            agent.position = x_new;
        }
        evaluate_and_update_bests(pop, ctx.eval)
    }
}
