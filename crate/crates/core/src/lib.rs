//! Swarm-intelligence optimizers with shared population machinery,
//! convergence diagnostics and parameter tuning.
//!
//! ```
//! use swarmlab::{benchmarks::registry_lookup, run_optimization, AlgorithmKind, RunConfig};
//!
//! let f = registry_lookup("sphere", 5).unwrap();
//! let cfg = RunConfig::new(AlgorithmKind::Fpa, f.bounds().clone())
//!     .with_budget(20, 50)
//!     .with_seed(1);
//! let trace = run_optimization(&cfg, &f).unwrap();
//! assert_eq!(trace.records.len(), 50);
//! ```

// `!(a <= b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod benchmarks;
pub mod diagnostics;
pub mod error;
pub mod population;
pub mod rng;
pub mod run;
pub mod samplers;
pub mod space;
pub mod trace;
pub mod tuning;

pub use algorithms::{AlgorithmKind, AlgorithmParams, Optimizer, StepContext};
pub use error::{Error, Result};
pub use population::{
    evaluate_and_update_bests, initialize_population, Agent, Best, Evaluator, Objective, Population,
};
pub use rng::RngStream;
pub use run::{run_optimization, run_with_sink, RunConfig};
pub use space::SearchSpace;
pub use trace::{Trace, TraceRecord};
