//! TOML configuration files for the `run`, `compare` and `tune` commands.
//!
//! A run config:
//!
//! ```toml
//! algorithm = "pso"        # pso | bat | firefly | cuckoo | fpa   (required)
//! function = "sphere"      # sphere | rosenbrock | rastrigin | ackley | four_peaks (required)
//! dim = 10                 # required
//! seed = 1                 # default 0
//! population = 30          # default 30
//! iterations = 1000        # default 1000
//! snapshot_every = 0       # default 0 (no position snapshots)
//! parallel = false         # parallel objective evaluation; never changes results
//! output = "trace.csv"     # optional trace path
//!
//! [params]                 # optional overrides of algorithm defaults
//! alpha = 1.2
//!
//! [[control]]              # optional: redraw a parameter uniformly every iteration
//! name = "beta"
//! lo = 1.0
//! hi = 2.0
//! ```
//!
//! A compare config holds `threshold` (default 1e-3), an optional `output`,
//! and one `[[runs]]` table per run config. A tune config is a run config
//! plus `seeds`, `points_per_range`, one `[[ranges]]` table per parameter
//! (`name`, `lo`, `hi`, `mode = "fixed-grid" | "stochastic-control"`) and an
//! optional `[self_tune]` table (`algorithm`, `population`, `iterations`,
//! `seed`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use swarmlab::benchmarks::{registry_lookup, BenchmarkFunction};
use swarmlab::tuning::{ControlMode, ParamRange};
use swarmlab::{AlgorithmKind, Error, Result, RunConfig};

pub const DEFAULT_POPULATION: usize = 30;
pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawControl {
    name: String,
    lo: f64,
    hi: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    algorithm: String,
    function: String,
    dim: usize,
    seed: Option<u64>,
    population: Option<usize>,
    iterations: Option<usize>,
    snapshot_every: Option<usize>,
    parallel: Option<bool>,
    output: Option<PathBuf>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    control: Vec<RawControl>,
}

/// A fully validated run description with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub algorithm: AlgorithmKind,
    pub function: String,
    pub dim: usize,
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    pub params: BTreeMap<String, f64>,
    pub control: Vec<ParamRange>,
    pub snapshot_every: usize,
    pub parallel: bool,
    pub output: Option<PathBuf>,
}

impl RunSpec {
    pub fn benchmark(&self) -> Result<BenchmarkFunction> {
        registry_lookup(&self.function, self.dim)
    }

    /// Build the library run configuration; this is where every value is checked.
    pub fn run_config(&self) -> Result<RunConfig> {
        let f = self.benchmark()?;
        let mut cfg = RunConfig::new(self.algorithm, f.bounds().clone())
            .with_budget(self.population, self.iterations)
            .with_seed(self.seed);
        cfg.snapshot_every = self.snapshot_every;
        cfg.parallel = self.parallel;
        for (name, value) in &self.params {
            cfg.set_param(name, *value)?;
        }
        cfg.controlled = self.control.clone();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn label(&self) -> String {
        format!("{}/{}/d{}", self.algorithm, self.function, self.dim)
    }
}

fn toml_error(e: toml::de::Error) -> Error {
    Error::Config(e.message().replace('\n', " "))
}

impl TryFrom<RawRun> for RunSpec {
    type Error = Error;

    fn try_from(raw: RawRun) -> Result<Self> {
        let spec = RunSpec {
            algorithm: raw.algorithm.parse()?,
            function: raw.function,
            dim: raw.dim,
            population: raw.population.unwrap_or(DEFAULT_POPULATION),
            iterations: raw.iterations.unwrap_or(DEFAULT_ITERATIONS),
            seed: raw.seed.unwrap_or(0),
            params: raw.params,
            control: raw
                .control
                .into_iter()
                .map(|c| ParamRange::control(&c.name, c.lo, c.hi))
                .collect(),
            snapshot_every: raw.snapshot_every.unwrap_or(0),
            parallel: raw.parallel.unwrap_or(false),
            output: raw.output,
        };
        spec.run_config()?;
        Ok(spec)
    }
}

/// Parse and validate a run config.
pub fn parse_config(text: &str) -> Result<RunSpec> {
    let raw: RawRun = toml::from_str(text).map_err(toml_error)?;
    raw.try_into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompare {
    threshold: Option<f64>,
    output: Option<PathBuf>,
    runs: Vec<RawRun>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareSpec {
    pub runs: Vec<RunSpec>,
    pub threshold: f64,
    pub output: Option<PathBuf>,
}

/// Parse a compare config. A plain run config is accepted as a single run.
pub fn parse_compare_config(text: &str) -> Result<CompareSpec> {
    let value: toml::Table = toml::from_str(text).map_err(toml_error)?;
    if !value.contains_key("runs") {
        return Ok(CompareSpec {
            runs: vec![parse_config(text)?],
            threshold: DEFAULT_THRESHOLD,
            output: None,
        });
    }
    let raw: RawCompare = toml::from_str(text).map_err(toml_error)?;
    if raw.runs.is_empty() {
        return Err(Error::Config(
            "compare needs at least one [[runs]] entry".into(),
        ));
    }
    let threshold = raw.threshold.unwrap_or(DEFAULT_THRESHOLD);
    if !threshold.is_finite() {
        return Err(Error::Config("`threshold` must be finite".into()));
    }
    Ok(CompareSpec {
        runs: raw
            .runs
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                RunSpec::try_from(r).map_err(|e| Error::Config(format!("runs[{i}]: {e}")))
            })
            .collect::<Result<_>>()?,
        threshold,
        output: raw.output,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    name: String,
    lo: f64,
    hi: f64,
    mode: Option<ControlMode>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfTuneSpec {
    pub algorithm: String,
    pub population: Option<usize>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTune {
    #[serde(flatten)]
    run: RawRun,
    seeds: Vec<u64>,
    points_per_range: usize,
    ranges: Vec<RawRange>,
    self_tune: Option<SelfTuneSpec>,
}

#[derive(Debug, Clone)]
pub struct TuneSpec {
    pub base: RunSpec,
    pub seeds: Vec<u64>,
    pub points_per_range: usize,
    pub ranges: Vec<ParamRange>,
    pub self_tune: Option<SelfTuneSpec>,
}

pub fn parse_tune_config(text: &str) -> Result<TuneSpec> {
    let raw: RawTune = toml::from_str(text).map_err(toml_error)?;
    let base: RunSpec = raw.run.try_into()?;
    if raw.seeds.is_empty() {
        return Err(Error::Config("`seeds` must list at least one seed".into()));
    }
    if raw.points_per_range == 0 {
        return Err(Error::Config(
            "`points_per_range` must be at least 1".into(),
        ));
    }
    if raw.ranges.is_empty() {
        return Err(Error::Config(
            "tune needs at least one [[ranges]] entry".into(),
        ));
    }
    let ranges: Vec<ParamRange> = raw
        .ranges
        .into_iter()
        .map(|r| ParamRange {
            name: r.name,
            lo: r.lo,
            hi: r.hi,
            mode: r.mode.unwrap_or(ControlMode::FixedGrid),
        })
        .collect();
    for r in &ranges {
        let spec = base.algorithm.param_spec(&r.name)?;
        r.validate().map_err(|e| Error::Config(e.to_string()))?;
        for v in [r.lo, r.hi] {
            spec.check(v)?;
        }
    }
    if let Some(st) = &raw.self_tune {
        st.algorithm.parse::<AlgorithmKind>()?;
    }
    Ok(TuneSpec {
        base,
        seeds: raw.seeds,
        points_per_range: raw.points_per_range,
        ranges,
        self_tune: raw.self_tune,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let spec = parse_config("algorithm = \"pso\"\nfunction = \"sphere\"\ndim = 10\nseed = 1\n")
            .unwrap();
        assert_eq!(spec.algorithm, AlgorithmKind::Pso);
        assert_eq!(spec.population, 30);
        assert_eq!(spec.iterations, 1000);
        assert_eq!(spec.seed, 1);
        assert_eq!(spec.snapshot_every, 0);
        assert!(!spec.parallel);
    }

    #[test]
    fn unknown_algorithm_lists_valid_names() {
        let err =
            parse_config("algorithm = \"acofoo\"\nfunction = \"sphere\"\ndim = 2\n").unwrap_err();
        assert_eq!(err.kind(), "config-error");
        assert!(
            err.to_string().contains("pso, bat, firefly, cuckoo, fpa"),
            "{err}"
        );
    }

    #[test]
    fn out_of_range_parameter_names_bound() {
        let text = "algorithm = \"cuckoo\"\nfunction = \"sphere\"\ndim = 2\n[params]\npa = 1.5\n";
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.kind(), "config-error");
        assert!(err.to_string().contains("[0, 1]"), "{err}");
    }

    #[test]
    fn unknown_field_is_named() {
        let err = parse_config("algorithm = \"pso\"\nfunction = \"sphere\"\ndim = 2\ncolour = 3\n")
            .unwrap_err();
        assert_eq!(err.kind(), "config-error");
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn unknown_parameter_is_named() {
        let text = "algorithm = \"pso\"\nfunction = \"sphere\"\ndim = 2\n[params]\npa = 0.5\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("`pa`"), "{err}");
    }

    #[test]
    fn control_ranges_are_checked() {
        let text = "algorithm = \"fpa\"\nfunction = \"sphere\"\ndim = 2\n[[control]]\nname = \"p_switch\"\nlo = 0.5\nhi = 1.5\n";
        assert_eq!(parse_config(text).unwrap_err().kind(), "config-error");
    }

    #[test]
    fn compare_accepts_runs_table() {
        let text = r#"
threshold = 0.01
[[runs]]
algorithm = "pso"
function = "sphere"
dim = 2
[[runs]]
algorithm = "fpa"
function = "sphere"
dim = 2
"#;
        let spec = parse_compare_config(text).unwrap();
        assert_eq!(spec.runs.len(), 2);
        assert_eq!(spec.threshold, 0.01);
    }

    #[test]
    fn tune_config_parses_ranges() {
        let text = r#"
algorithm = "pso"
function = "sphere"
dim = 2
seeds = [1, 2]
points_per_range = 3
[[ranges]]
name = "alpha"
lo = 0.5
hi = 2.0
[[ranges]]
name = "beta"
lo = 1.0
hi = 2.0
mode = "stochastic-control"
"#;
        let spec = parse_tune_config(text).unwrap();
        assert_eq!(spec.ranges[0].mode, ControlMode::FixedGrid);
        assert_eq!(spec.ranges[1].mode, ControlMode::StochasticControl);
    }
}
