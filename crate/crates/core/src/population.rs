//! Agents, populations and objective evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::space::SearchSpace;

/// A scalar objective to be minimized.
///
/// Any `Fn(&[f64]) -> f64 + Sync` closure is an objective.
pub trait Objective: Sync {
    fn value(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// A position together with its fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Best {
    pub position: Vec<f64>,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub position: Vec<f64>,
    pub velocity: Option<Vec<f64>>,
    pub personal_best: Option<Best>,
    /// `None` until the agent has been evaluated.
    pub fitness: Option<f64>,
}

impl Agent {
    pub fn new(position: Vec<f64>, with_velocity: bool) -> Self {
        let velocity = with_velocity.then(|| vec![0.0; position.len()]);
        Self {
            position,
            velocity,
            personal_best: None,
            fitness: None,
        }
    }

    /// Fitness, treating an unevaluated agent as infinitely bad.
    pub fn fitness_or_inf(&self) -> f64 {
        self.fitness.unwrap_or(f64::INFINITY)
    }

    fn record(&mut self, fitness: f64) {
        self.fitness = Some(fitness);
        let improves = self
            .personal_best
            .as_ref()
            .is_none_or(|pb| fitness < pb.fitness);
        if improves {
            self.personal_best = Some(Best {
                position: self.position.clone(),
                fitness,
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub agents: Vec<Agent>,
    pub global_best: Option<Best>,
    pub iteration: usize,
}

impl Population {
    pub fn from_positions(positions: Vec<Vec<f64>>, with_velocity: bool) -> Self {
        Self {
            agents: positions
                .into_iter()
                .map(|p| Agent::new(p, with_velocity))
                .collect(),
            global_best: None,
            iteration: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.agents.first().map_or(0, |a| a.position.len())
    }

    pub fn positions(&self) -> Vec<Vec<f64>> {
        self.agents.iter().map(|a| a.position.clone()).collect()
    }

    pub fn best_fitness(&self) -> Option<f64> {
        self.global_best.as_ref().map(|b| b.fitness)
    }

    /// Offer an evaluated point to the global best; replaces it only on strict improvement.
    pub fn observe(&mut self, position: &[f64], fitness: f64) {
        let improves = self
            .global_best
            .as_ref()
            .is_none_or(|gb| fitness < gb.fitness);
        if improves {
            self.global_best = Some(Best {
                position: position.to_vec(),
                fitness,
            });
        }
    }

    /// Move agent `i` to an already-evaluated position and update all bests.
    pub fn place(&mut self, i: usize, position: Vec<f64>, fitness: f64) {
        let agent = &mut self.agents[i];
        agent.position = position;
        agent.record(fitness);
        let pos = self.agents[i].position.clone();
        self.observe(&pos, fitness);
    }

    /// Record a fitness for agent `i` at its current position.
    pub fn set_fitness(&mut self, i: usize, fitness: f64) {
        self.agents[i].record(fitness);
        let pos = self.agents[i].position.clone();
        self.observe(&pos, fitness);
    }

    /// Index of the agent with the lowest current fitness (first on ties).
    pub fn best_agent_index(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, a) in self.agents.iter().enumerate() {
            let f = a.fitness_or_inf();
            if best.is_none_or(|(_, bf)| f < bf) {
                best = Some((i, f));
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Sample `n` agents uniformly in `space`, coordinate by coordinate in agent order.
pub fn initialize_population(
    space: &SearchSpace,
    n: usize,
    with_velocity: bool,
    rng: &mut RngStream,
) -> Result<Population> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "population size must be at least 1".into(),
        ));
    }
    let positions = (0..n)
        .map(|_| {
            space
                .lower()
                .iter()
                .zip(space.upper())
                .map(|(lo, hi)| rng.uniform(*lo, *hi))
                .collect()
        })
        .collect();
    Ok(Population::from_positions(positions, with_velocity))
}

/// Counts and performs objective evaluations.
///
/// Batches may be evaluated on the rayon pool; results always come back in
/// input order, so parallelism never changes a run.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    parallel: bool,
    evaluations: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, parallel: bool) -> Self {
        Self {
            objective,
            parallel,
            evaluations: 0,
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        checked(self.objective.value(x), x)
    }

    pub fn evaluate_batch(&mut self, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.evaluations += xs.len() as u64;
        let obj = self.objective;
        let values: Vec<f64> = if self.parallel && xs.len() > 1 {
            xs.par_iter().map(|x| obj.value(x)).collect()
        } else {
            xs.iter().map(|x| obj.value(x)).collect()
        };
        for (v, x) in values.iter().zip(xs) {
            checked(*v, x)?;
        }
        Ok(values)
    }
}

fn checked(value: f64, x: &[f64]) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric {
            message: format!("objective returned {value}"),
            position: Some(x.to_vec()),
            iteration: None,
        })
    }
}

/// Evaluate every agent at its current position and update personal and global bests.
pub fn evaluate_and_update_bests(pop: &mut Population, eval: &mut Evaluator<'_>) -> Result<()> {
    let values = eval.evaluate_batch(&pop.positions())?;
    for (i, v) in values.into_iter().enumerate() {
        pop.set_fitness(i, v);
    }
    Ok(())
}
