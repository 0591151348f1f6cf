//! Offline parameter tuning (grid parametric studies) and online parameter
//! control (uniform redraw within a range every iteration).

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Objective;
use crate::rng::RngStream;
use crate::run::{run_optimization, RunConfig};
use crate::space::SearchSpace;
use crate::trace::fmt_real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlMode {
    FixedGrid,
    StochasticControl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub mode: ControlMode,
}

impl ParamRange {
    pub fn grid(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            lo,
            hi,
            mode: ControlMode::FixedGrid,
        }
    }

    pub fn control(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            lo,
            hi,
            mode: ControlMode::StochasticControl,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(Error::InvalidArgument(format!(
                "range for `{}` is empty: [{}, {}]",
                self.name, self.lo, self.hi
            )));
        }
        Ok(())
    }

    /// Grid values: evenly spaced from `lo` to `hi` inclusive; the midpoint
    /// when `points == 1`; a single value when `lo == hi`.
    pub fn grid_values(&self, points: usize) -> Vec<f64> {
        if self.lo == self.hi {
            return vec![self.lo];
        }
        if points == 1 {
            return vec![0.5 * (self.lo + self.hi)];
        }
        (0..points)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (points - 1) as f64)
            .collect()
    }
}

/// One uniform draw in `[lo, hi]` for a stochastically controlled parameter.
pub fn stochastic_parameter_control(range: &ParamRange, rng: &mut RngStream) -> Result<f64> {
    if range.mode != ControlMode::StochasticControl {
        return Err(Error::Contract(format!(
            "parameter `{}` is not under stochastic control",
            range.name
        )));
    }
    range.validate()?;
    Ok(rng.uniform(range.lo, range.hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub assignment: Vec<(String, f64)>,
    pub median_best: f64,
    /// Interquartile range of the per-seed best fitness.
    pub dispersion: f64,
    pub best_per_seed: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningReport {
    pub grid_points: Vec<GridPoint>,
    pub winner: usize,
    pub runs: usize,
}

impl TuningReport {
    pub fn winner_point(&self) -> &GridPoint {
        &self.grid_points[self.winner]
    }

    /// CSV with columns `point,<param...>,median_best,iqr,winner`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let names: Vec<&str> = self
            .grid_points
            .first()
            .map(|g| g.assignment.iter().map(|(n, _)| n.as_str()).collect())
            .unwrap_or_default();
        let mut header = vec!["point"];
        header.extend(&names);
        header.extend(["median_best", "iqr", "winner"]);
        writeln!(out, "{}", header.join(","))?;
        for (i, g) in self.grid_points.iter().enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(g.assignment.iter().map(|(_, v)| fmt_real(*v)));
            row.push(fmt_real(g.median_best));
            row.push(fmt_real(g.dispersion));
            row.push(u8::from(i == self.winner).to_string());
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Linear-interpolation quantile of unsorted data.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

pub fn iqr(values: &[f64]) -> f64 {
    quantile(values, 0.75) - quantile(values, 0.25)
}

/// Index of the best row: lowest median, then lowest dispersion, then first.
pub fn select_winner(points: &[GridPoint]) -> usize {
    let mut best = 0;
    for (i, g) in points.iter().enumerate().skip(1) {
        let b = &points[best];
        if g.median_best < b.median_best
            || (g.median_best == b.median_best && g.dispersion < b.dispersion)
        {
            best = i;
        }
    }
    best
}

/// Run the full Cartesian grid of the fixed-grid ranges for every seed.
///
/// Stochastic-control ranges are attached to every run instead of being
/// gridded. Cells may run concurrently; the report is assembled in grid order
/// (first range varies slowest).
pub fn grid_parametric_study(
    base: &RunConfig,
    ranges: &[ParamRange],
    points_per_range: usize,
    objective: &dyn Objective,
    seeds: &[u64],
) -> Result<TuningReport> {
    if ranges.is_empty() {
        return Err(Error::InvalidArgument("no parameter ranges given".into()));
    }
    if points_per_range == 0 {
        return Err(Error::InvalidArgument(
            "points_per_range must be at least 1".into(),
        ));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one seed is required".into(),
        ));
    }
    let kind = base.kind();
    for r in ranges {
        r.validate()?;
        kind.param_spec(&r.name)?;
    }

    let mut template = base.clone();
    template.controlled.extend(
        ranges
            .iter()
            .filter(|r| r.mode == ControlMode::StochasticControl)
            .cloned(),
    );
    let grid: Vec<&ParamRange> = ranges
        .iter()
        .filter(|r| r.mode == ControlMode::FixedGrid)
        .collect();

    let mut assignments: Vec<Vec<(String, f64)>> = vec![Vec::new()];
    for r in &grid {
        let values = r.grid_values(points_per_range);
        assignments = assignments
            .into_iter()
            .flat_map(|a| {
                values.iter().map(move |v| {
                    let mut next = a.clone();
                    next.push((r.name.clone(), *v));
                    next
                })
            })
            .collect();
    }

    let mut configs = Vec::with_capacity(assignments.len());
    for a in &assignments {
        let mut cfg = template.clone();
        for (name, v) in a {
            cfg.set_param(name, *v)?;
        }
        cfg.validate()?;
        configs.push(cfg);
    }

    let cells: Vec<(usize, u64)> = (0..configs.len())
        .flat_map(|p| seeds.iter().map(move |s| (p, *s)))
        .collect();
    let results: Vec<Result<f64>> = cells
        .par_iter()
        .map(|(p, seed)| {
            let cfg = configs[*p].clone().with_seed(*seed);
            run_optimization(&cfg, objective).map(|t| t.best_fitness())
        })
        .collect();

    let mut grid_points = Vec::with_capacity(configs.len());
    let mut it = results.into_iter();
    for a in assignments {
        let best: Vec<f64> = (&mut it).take(seeds.len()).collect::<Result<_>>()?;
        grid_points.push(GridPoint {
            assignment: a,
            median_best: median(&best),
            dispersion: iqr(&best),
            best_per_seed: best,
        });
    }
    Ok(TuningReport {
        winner: select_winner(&grid_points),
        runs: cells.len(),
        grid_points,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTuneResult {
    pub assignment: Vec<(String, f64)>,
    pub median_best: f64,
    pub meta_evaluations: u64,
}

/// Search the parameter box with another optimizer run (`meta`), scoring each
/// parameter vector by the median best fitness of `base` over `seeds`.
///
/// Only fixed-grid ranges with `lo < hi` span the box. `meta` supplies the
/// outer algorithm, budget and seed; the outer algorithm runs with its
/// defaults for the parameter box.
pub fn self_tune(
    meta: &RunConfig,
    base: &RunConfig,
    ranges: &[ParamRange],
    objective: &dyn Objective,
    seeds: &[u64],
) -> Result<SelfTuneResult> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one seed is required".into(),
        ));
    }
    let tuned: Vec<&ParamRange> = ranges
        .iter()
        .filter(|r| r.mode == ControlMode::FixedGrid)
        .collect();
    if tuned.is_empty() {
        return Err(Error::InvalidArgument(
            "no fixed-grid ranges to tune".into(),
        ));
    }
    for r in &tuned {
        base.kind().param_spec(&r.name)?;
    }
    let space = SearchSpace::new(
        tuned.iter().map(|r| r.lo).collect(),
        tuned.iter().map(|r| r.hi).collect(),
    )?;
    let score = |p: &[f64]| -> f64 {
        let mut cfg = base.clone();
        for (r, v) in tuned.iter().zip(p) {
            if cfg.set_param(&r.name, *v).is_err() {
                return f64::NAN;
            }
        }
        let best: Result<Vec<f64>> = seeds
            .iter()
            .map(|s| {
                run_optimization(&cfg.clone().with_seed(*s), objective).map(|t| t.best_fitness())
            })
            .collect();
        best.map(|b| median(&b)).unwrap_or(f64::NAN)
    };
    let mut outer = meta.clone();
    outer.params = crate::algorithms::AlgorithmParams::defaults(meta.kind(), &space);
    outer.space = space;
    let trace = run_optimization(&outer, &score)?;
    Ok(SelfTuneResult {
        assignment: tuned
            .iter()
            .zip(&trace.best.position)
            .map(|(r, v)| (r.name.clone(), *v))
            .collect(),
        median_best: trace.best.fitness,
        meta_evaluations: trace.evaluations(),
    })
}
