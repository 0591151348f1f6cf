//! The end-to-end run pipeline: initialize, then step, evaluate and record
//! for the iteration budget.

use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgorithmKind, AlgorithmParams, StepContext};
use crate::diagnostics::diversity_variance;
use crate::error::{Error, Result};
use crate::population::{evaluate_and_update_bests, initialize_population, Evaluator, Objective};
use crate::rng::RngStream;
use crate::space::SearchSpace;
use crate::trace::{ControlEvent, Snapshot, Trace, TraceRecord, TraceSink};
use crate::tuning::{stochastic_parameter_control, ControlMode, ParamRange};

/// Everything that determines a run, apart from the objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: AlgorithmParams,
    pub space: SearchSpace,
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Store agent positions every `snapshot_every` iterations (and at 0); 0 disables.
    pub snapshot_every: usize,
    /// Evaluate each batch on the rayon pool. Never changes results.
    pub parallel: bool,
    /// Parameters redrawn uniformly from their range before every iteration.
    pub controlled: Vec<ParamRange>,
}

impl RunConfig {
    /// Defaults: 30 agents, 1000 iterations, seed 0, algorithm default parameters.
    pub fn new(kind: AlgorithmKind, space: SearchSpace) -> Self {
        Self {
            params: AlgorithmParams::defaults(kind, &space),
            space,
            population: 30,
            iterations: 1000,
            seed: 0,
            snapshot_every: 0,
            parallel: false,
            controlled: Vec::new(),
        }
    }

    /// Like [`RunConfig::new`] but resolves the algorithm by name.
    pub fn named(algorithm: &str, space: SearchSpace) -> Result<Self> {
        Ok(Self::new(algorithm.parse()?, space))
    }

    pub fn kind(&self) -> AlgorithmKind {
        self.params.kind()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, population: usize, iterations: usize) -> Self {
        self.population = population;
        self.iterations = iterations;
        self
    }

    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        self.params.set(name, value)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iteration budget must be at least 1".into()));
        }
        let kind = self.kind();
        if self.population < kind.min_population() {
            return Err(Error::Config(format!(
                "{kind} needs a population of at least {}, got {}",
                kind.min_population(),
                self.population
            )));
        }
        self.params.validate()?;
        for range in &self.controlled {
            if range.mode != ControlMode::StochasticControl {
                return Err(Error::Config(format!(
                    "parameter `{}` is listed for run-time control but has mode fixed-grid",
                    range.name
                )));
            }
            let spec = kind.param_spec(&range.name)?;
            range.validate()?;
            if !spec.admits(range.lo) || !spec.admits(range.hi) {
                return Err(Error::Config(format!(
                    "control range [{}, {}] for `{}` leaves {}",
                    range.lo,
                    range.hi,
                    range.name,
                    spec.interval()
                )));
            }
        }
        Ok(())
    }
}

pub fn run_optimization(config: &RunConfig, objective: &dyn Objective) -> Result<Trace> {
    let mut sink = Vec::new();
    run_with_sink(config, objective, &mut sink)
}

/// Run and hand every record to `sink` as soon as its iteration completes.
pub fn run_with_sink(
    config: &RunConfig,
    objective: &dyn Objective,
    sink: &mut dyn TraceSink,
) -> Result<Trace> {
    config.validate()?;
    let kind = config.kind();
    let mut rng = RngStream::new(config.seed);
    let mut pop = initialize_population(
        &config.space,
        config.population,
        kind.uses_velocity(),
        &mut rng,
    )?;
    let mut eval = Evaluator::new(objective, config.parallel);
    evaluate_and_update_bests(&mut pop, &mut eval).map_err(|e| e.at_iteration(0))?;
    let mut optimizer = config.params.build()?;

    let mut records = Vec::with_capacity(config.iterations);
    let mut snapshots = Vec::new();
    let mut controls = Vec::new();
    if config.snapshot_every > 0 {
        snapshots.push(Snapshot {
            iteration: 0,
            positions: pop.positions(),
        });
    }

    for t in 1..=config.iterations {
        for range in &config.controlled {
            let value = stochastic_parameter_control(range, &mut rng)?;
            optimizer.set_param(&range.name, value)?;
            controls.push(ControlEvent {
                iteration: t,
                name: range.name.clone(),
                value,
            });
        }
        let mut ctx = StepContext {
            space: &config.space,
            eval: &mut eval,
            rng: &mut rng,
        };
        optimizer
            .step(&mut pop, &mut ctx)
            .map_err(|e| e.at_iteration(t))?;
        let record = TraceRecord {
            iteration: t,
            best_fitness: pop.best_fitness().expect("evaluated population has a best"),
            diversity: diversity_variance(&pop)?,
            evaluations: eval.evaluations(),
        };
        sink.record(&record)?;
        records.push(record);
        if config.snapshot_every > 0 && t % config.snapshot_every == 0 {
            snapshots.push(Snapshot {
                iteration: t,
                positions: pop.positions(),
            });
        }
    }

    Ok(Trace {
        algorithm: kind,
        records,
        snapshots,
        controls,
        best: pop
            .global_best
            .clone()
            .expect("evaluated population has a best"),
        final_positions: pop.positions(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn config() -> RunConfig {
        RunConfig::new(
            AlgorithmKind::Pso,
            SearchSpace::cube(2, -5.12, 5.12).unwrap(),
        )
        .with_budget(20, 100)
        .with_seed(42)
    }

    #[test]
    fn pso_on_sphere_records_every_iteration() {
        let trace = run_optimization(&config(), &sphere).unwrap();
        assert_eq!(trace.records.len(), 100);
        assert!(trace
            .records
            .windows(2)
            .all(|w| w[1].best_fitness <= w[0].best_fitness));
        assert_eq!(trace.records[99].evaluations, 20 * 101);
    }

    #[test]
    fn zero_budget_is_a_config_error() {
        let cfg = config().with_budget(20, 0);
        assert_eq!(
            run_optimization(&cfg, &sphere).unwrap_err().kind(),
            "config-error"
        );
    }

    #[test]
    fn unknown_algorithm_is_a_config_error() {
        let err = RunConfig::named("acofoo", SearchSpace::cube(1, 0.0, 1.0).unwrap()).unwrap_err();
        assert_eq!(err.kind(), "config-error");
    }

    #[test]
    fn runs_are_reproducible() {
        assert_eq!(
            run_optimization(&config(), &sphere).unwrap(),
            run_optimization(&config(), &sphere).unwrap()
        );
    }

    #[test]
    fn numeric_errors_carry_the_iteration() {
        let counter = std::sync::atomic::AtomicUsize::new(0);
        let f = |x: &[f64]| {
            if counter.fetch_add(1, std::sync::atomic::Ordering::SeqCst) >= 20 * 3 {
                f64::NAN
            } else {
                sphere(x)
            }
        };
        match run_optimization(&config(), &f) {
            Err(Error::Numeric { iteration, .. }) => assert_eq!(iteration, Some(3)),
            other => panic!("expected numeric error, got {other:?}"),
        }
    }

    #[test]
    fn snapshots_follow_the_period() {
        let mut cfg = config().with_budget(5, 10);
        cfg.snapshot_every = 4;
        let trace = run_optimization(&cfg, &sphere).unwrap();
        let its: Vec<usize> = trace.snapshots.iter().map(|s| s.iteration).collect();
        assert_eq!(its, vec![0, 4, 8]);
    }
}
