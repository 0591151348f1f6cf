//! The five population transition rules behind one step contract.
//!
//! A step takes the population at iteration `t`, draws from the run's random
//! stream in a fixed documented order, evaluates every candidate it creates
//! (in agent index order, possibly in parallel), updates the tracked bests and
//! leaves the population at `t + 1`. All candidates are clamped to the search
//! space before evaluation.

mod bat;
mod cuckoo;
mod firefly;
mod fpa;
pub mod params;
mod pso;

pub use bat::{bat_schedules, Bat};
pub use cuckoo::{cuckoo_local_move, Cuckoo};
pub use firefly::{attraction, firefly_move, Firefly};
pub use fpa::{fpa_global_move, fpa_local_move, Fpa};
pub use params::{
    AlgorithmKind, AlgorithmParams, BatParams, Bound, CuckooParams, FireflyParams, FpaParams,
    ParamSpec, PsoParams,
};
pub use pso::{pso_update, Pso};

use crate::error::{Error, Result};
use crate::population::{Evaluator, Population};
use crate::rng::RngStream;
use crate::space::SearchSpace;

/// Everything a step needs besides the population.
pub struct StepContext<'a, 'o> {
    pub space: &'a SearchSpace,
    pub eval: &'a mut Evaluator<'o>,
    pub rng: &'a mut RngStream,
}

pub trait Optimizer: Send {
    fn params(&self) -> AlgorithmParams;

    /// Replace one named parameter, e.g. for stochastic parameter control.
    fn set_param(&mut self, name: &str, value: f64) -> Result<()>;

    /// Algorithm-specific transition from `t` to `t + 1`.
    fn transition(&mut self, pop: &mut Population, ctx: &mut StepContext<'_, '_>) -> Result<()>;

    fn kind(&self) -> AlgorithmKind {
        self.params().kind()
    }

    /// Check preconditions, run the transition and advance the iteration counter.
    fn step(&mut self, pop: &mut Population, ctx: &mut StepContext<'_, '_>) -> Result<()> {
        let kind = self.kind();
        if pop.len() < kind.min_population() {
            return Err(Error::InvalidArgument(format!(
                "{kind} needs at least {} agents, population has {}",
                kind.min_population(),
                pop.len()
            )));
        }
        if pop.agents.iter().any(|a| a.fitness.is_none()) {
            return Err(Error::Contract(
                "every agent must be evaluated before a step".into(),
            ));
        }
        self.transition(pop, ctx)?;
        pop.iteration += 1;
        Ok(())
    }
}

impl AlgorithmParams {
    pub fn build(self) -> Result<Box<dyn Optimizer>> {
        self.validate()?;
        Ok(match self {
            AlgorithmParams::Pso(p) => Box::new(Pso::new(p)),
            AlgorithmParams::Bat(p) => Box::new(Bat::new(p)),
            AlgorithmParams::Firefly(p) => Box::new(Firefly::new(p)),
            AlgorithmParams::Cuckoo(p) => Box::new(Cuckoo::new(p)),
            AlgorithmParams::Fpa(p) => Box::new(Fpa::new(p)),
        })
    }
}

/// Evaluate `candidates[i]` for agent `i` and keep it only where it strictly
/// improves that agent. Every evaluation still reaches the global best.
pub(crate) fn greedy_replace(
    pop: &mut Population,
    candidates: Vec<(usize, Vec<f64>)>,
    eval: &mut Evaluator<'_>,
) -> Result<()> {
    let positions: Vec<Vec<f64>> = candidates.iter().map(|(_, c)| c.clone()).collect();
    let values = eval.evaluate_batch(&positions)?;
    for ((i, cand), f) in candidates.into_iter().zip(values) {
        if f < pop.agents[i].fitness_or_inf() {
            pop.place(i, cand, f);
        } else {
            pop.observe(&cand, f);
        }
    }
    Ok(())
}

pub(crate) fn global_best_position(pop: &Population) -> Result<Vec<f64>> {
    pop.global_best
        .as_ref()
        .map(|b| b.position.clone())
        .ok_or_else(|| Error::Contract("population has no global best yet".into()))
}
