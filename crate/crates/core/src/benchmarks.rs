//! Standard continuous test objectives.
//!
//! | name        | f(x)                                                             | bounds              | minimum |
//! |-------------|------------------------------------------------------------------|---------------------|---------|
//! | sphere      | Σ x_k²                                                           | [−5.12, 5.12]^d     | 0 at 0  |
//! | rosenbrock  | Σ_{k<d} 100(x_{k+1} − x_k²)² + (1 − x_k)²                        | [−5, 10]^d, d ≥ 2   | 0 at 1  |
//! | rastrigin   | 10d + Σ (x_k² − 10 cos 2πx_k)                                    | [−5.12, 5.12]^d     | 0 at 0  |
//! | ackley      | −20 exp(−0.2 √(Σx_k²/d)) − exp(Σ cos(2πx_k)/d) + 20 + e          | [−32.768, 32.768]^d | 0 at 0  |
//! | four_peaks  | −Σ_{c ∈ {±2}²} exp(−‖x − c‖² / 0.5)                              | [−5, 5]², d = 2     | ≈ −1 at each c |
//!
//! `four_peaks` has four basins of equal depth, one per quadrant.

use std::f64::consts::{E, PI};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::population::{Best, Objective};
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Ackley,
    FourPeaks,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 5] = [
        BenchmarkKind::Sphere,
        BenchmarkKind::Rosenbrock,
        BenchmarkKind::Rastrigin,
        BenchmarkKind::Ackley,
        BenchmarkKind::FourPeaks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Sphere => "sphere",
            BenchmarkKind::Rosenbrock => "rosenbrock",
            BenchmarkKind::Rastrigin => "rastrigin",
            BenchmarkKind::Ackley => "ackley",
            BenchmarkKind::FourPeaks => "four_peaks",
        }
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown function `{s}`; valid names: sphere, rosenbrock, rastrigin, ackley, four_peaks"
                ))
            })
    }
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub const FOUR_PEAKS_CENTERS: [[f64; 2]; 4] = [[2.0, 2.0], [-2.0, 2.0], [-2.0, -2.0], [2.0, -2.0]];

fn four_peaks_unchecked(x: &[f64]) -> f64 {
    -FOUR_PEAKS_CENTERS
        .iter()
        .map(|c| {
            let d2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2);
            (-d2 / 0.5).exp()
        })
        .sum::<f64>()
}

/// Four equal Gaussian wells centred at `(±2, ±2)`; defined on `[−5, 5]²`.
pub fn four_peaks(x: &[f64]) -> Result<f64> {
    if x.len() != 2 || x.iter().any(|v| !(-5.0..=5.0).contains(v)) {
        return Err(Error::InvalidArgument(format!(
            "four_peaks is defined on [-5, 5]^2, got {x:?}"
        )));
    }
    Ok(four_peaks_unchecked(x))
}

#[derive(Debug, Clone)]
pub struct BenchmarkFunction {
    kind: BenchmarkKind,
    bounds: SearchSpace,
    known_minimum: Best,
}

impl BenchmarkFunction {
    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &SearchSpace {
        &self.bounds
    }

    pub fn known_minimum(&self) -> &Best {
        &self.known_minimum
    }

    /// Evaluate with a domain check.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if !self.bounds.contains(x) {
            return Err(Error::InvalidArgument(format!(
                "{} evaluated outside its bounds at {x:?}",
                self.name()
            )));
        }
        Ok(self.raw(x))
    }

    fn raw(&self, x: &[f64]) -> f64 {
        match self.kind {
            BenchmarkKind::Sphere => sphere(x),
            BenchmarkKind::Rosenbrock => rosenbrock(x),
            BenchmarkKind::Rastrigin => rastrigin(x),
            BenchmarkKind::Ackley => ackley(x),
            BenchmarkKind::FourPeaks => four_peaks_unchecked(x),
        }
    }
}

/// Optimizers only ever evaluate clamped points, so the run path skips the
/// domain check.
impl Objective for BenchmarkFunction {
    fn value(&self, x: &[f64]) -> f64 {
        self.raw(x)
    }
}

pub fn registry_lookup(name: &str, dim: usize) -> Result<BenchmarkFunction> {
    let kind: BenchmarkKind = name.parse()?;
    if dim == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    let (bounds, min_pos) = match kind {
        BenchmarkKind::Sphere | BenchmarkKind::Rastrigin => {
            (SearchSpace::cube(dim, -5.12, 5.12)?, vec![0.0; dim])
        }
        BenchmarkKind::Rosenbrock => {
            if dim < 2 {
                return Err(Error::Config(
                    "rosenbrock needs dimension at least 2".into(),
                ));
            }
            (SearchSpace::cube(dim, -5.0, 10.0)?, vec![1.0; dim])
        }
        BenchmarkKind::Ackley => (SearchSpace::cube(dim, -32.768, 32.768)?, vec![0.0; dim]),
        BenchmarkKind::FourPeaks => {
            if dim != 2 {
                return Err(Error::Config(format!(
                    "four_peaks is two-dimensional, got dim {dim}"
                )));
            }
            (SearchSpace::cube(2, -5.0, 5.0)?, vec![2.0, 2.0])
        }
    };
    let mut f = BenchmarkFunction {
        kind,
        bounds,
        known_minimum: Best {
            position: min_pos,
            fitness: f64::NAN,
        },
    };
    let value = match kind {
        BenchmarkKind::FourPeaks => f.raw(&f.known_minimum.position),
        _ => 0.0,
    };
    let check = f.raw(&f.known_minimum.position);
    if (check - value).abs() > 1e-12 {
        return Err(Error::numeric(format!(
            "{name}: known minimum evaluates to {check}, expected {value}"
        )));
    }
    f.known_minimum.fitness = value;
    Ok(f)
}
