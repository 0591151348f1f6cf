//! Parameter sets for the five algorithms, with named access and range checks.
//!
//! Every tunable parameter has a name and a documented admissible range; the
//! same table backs config validation, stochastic parameter control and grid
//! studies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Pso,
    Bat,
    Firefly,
    Cuckoo,
    Fpa,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] = [
        AlgorithmKind::Pso,
        AlgorithmKind::Bat,
        AlgorithmKind::Firefly,
        AlgorithmKind::Cuckoo,
        AlgorithmKind::Fpa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Pso => "pso",
            AlgorithmKind::Bat => "bat",
            AlgorithmKind::Firefly => "firefly",
            AlgorithmKind::Cuckoo => "cuckoo",
            AlgorithmKind::Fpa => "fpa",
        }
    }

    pub fn uses_velocity(self) -> bool {
        matches!(self, AlgorithmKind::Pso | AlgorithmKind::Bat)
    }

    pub fn min_population(self) -> usize {
        match self {
            AlgorithmKind::Cuckoo | AlgorithmKind::Fpa => 3,
            _ => 1,
        }
    }

    pub fn param_specs(self) -> &'static [ParamSpec] {
        match self {
            AlgorithmKind::Pso => PSO_SPECS,
            AlgorithmKind::Bat => BAT_SPECS,
            AlgorithmKind::Firefly => FIREFLY_SPECS,
            AlgorithmKind::Cuckoo => CUCKOO_SPECS,
            AlgorithmKind::Fpa => FPA_SPECS,
        }
    }

    pub fn param_spec(self, name: &str) -> Result<&'static ParamSpec> {
        self.param_specs()
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| {
                let valid: Vec<_> = self.param_specs().iter().map(|s| s.name).collect();
                Error::Config(format!(
                    "unknown parameter `{name}` for {}; valid parameters: {}",
                    self.name(),
                    valid.join(", ")
                ))
            })
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pso" => Ok(AlgorithmKind::Pso),
            "bat" | "ba" => Ok(AlgorithmKind::Bat),
            "firefly" | "fa" => Ok(AlgorithmKind::Firefly),
            "cuckoo" | "cs" => Ok(AlgorithmKind::Cuckoo),
            "fpa" | "flower" => Ok(AlgorithmKind::Fpa),
            _ => Err(Error::Config(format!(
                "unknown algorithm `{s}`; valid names: pso, bat, firefly, cuckoo, fpa"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Open(f64),
    Closed(f64),
    Unbounded,
}

/// Name and admissible interval of one algorithm parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub lower: Bound,
    pub upper: Bound,
}

impl ParamSpec {
    const fn new(name: &'static str, lower: Bound, upper: Bound) -> Self {
        Self { name, lower, upper }
    }

    pub fn admits(&self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        let lo_ok = match self.lower {
            Bound::Open(b) => v > b,
            Bound::Closed(b) => v >= b,
            Bound::Unbounded => true,
        };
        let hi_ok = match self.upper {
            Bound::Open(b) => v < b,
            Bound::Closed(b) => v <= b,
            Bound::Unbounded => true,
        };
        lo_ok && hi_ok
    }

    pub fn interval(&self) -> String {
        let lo = match self.lower {
            Bound::Open(b) => format!("({b}"),
            Bound::Closed(b) => format!("[{b}"),
            Bound::Unbounded => "(-inf".to_string(),
        };
        let hi = match self.upper {
            Bound::Open(b) => format!("{b})"),
            Bound::Closed(b) => format!("{b}]"),
            Bound::Unbounded => "inf)".to_string(),
        };
        format!("{lo}, {hi}")
    }

    pub fn check(&self, v: f64) -> Result<()> {
        if self.admits(v) {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "parameter `{}` = {v} is outside {}",
                self.name,
                self.interval()
            )))
        }
    }
}

use Bound::{Closed, Open, Unbounded};

const PSO_SPECS: &[ParamSpec] = &[
    ParamSpec::new("alpha", Closed(0.0), Unbounded),
    ParamSpec::new("beta", Closed(0.0), Unbounded),
    ParamSpec::new("inertia", Closed(0.0), Closed(1.0)),
];

const BAT_SPECS: &[ParamSpec] = &[
    ParamSpec::new("f_min", Unbounded, Unbounded),
    ParamSpec::new("f_max", Unbounded, Unbounded),
    ParamSpec::new("alpha", Open(0.0), Open(1.0)),
    ParamSpec::new("gamma", Open(0.0), Unbounded),
    ParamSpec::new("a0", Open(0.0), Unbounded),
    ParamSpec::new("r0", Closed(0.0), Closed(1.0)),
];

const FIREFLY_SPECS: &[ParamSpec] = &[
    ParamSpec::new("beta0", Open(0.0), Unbounded),
    ParamSpec::new("gamma", Closed(0.0), Unbounded),
    ParamSpec::new("alpha", Closed(0.0), Unbounded),
    ParamSpec::new("alpha_decay", Open(0.0), Closed(1.0)),
];

const CUCKOO_SPECS: &[ParamSpec] = &[
    ParamSpec::new("pa", Closed(0.0), Closed(1.0)),
    ParamSpec::new("alpha_levy", Closed(0.0), Unbounded),
    ParamSpec::new("alpha_local", Closed(0.0), Unbounded),
    ParamSpec::new("lambda", Open(0.0), Open(2.0)),
];

const FPA_SPECS: &[ParamSpec] = &[
    ParamSpec::new("p_switch", Closed(0.0), Closed(1.0)),
    ParamSpec::new("gamma", Open(0.0), Unbounded),
    ParamSpec::new("lambda", Open(0.0), Open(2.0)),
];

/// Particle swarm learning parameters.
///
/// Velocity update: `v' = w·v + α·ε1⊙(g − x) + β·ε2⊙(p − x)`, `x' = x + v'`.
/// With `inertia = 1` this is the inertia-free textbook form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub alpha: f64,
    pub beta: f64,
    pub inertia: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        // Clerc-Kennedy constriction coefficients.
        Self {
            alpha: 1.49618,
            beta: 1.49618,
            inertia: 0.7298,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatParams {
    pub f_min: f64,
    pub f_max: f64,
    /// Loudness decay factor, `A ← α·A`.
    pub alpha: f64,
    /// Pulse-rate growth, `r_t = r0·(1 − e^{−γt})`.
    pub gamma: f64,
    pub a0: f64,
    pub r0: f64,
}

impl Default for BatParams {
    fn default() -> Self {
        Self {
            f_min: 0.0,
            f_max: 2.0,
            alpha: 0.9,
            gamma: 0.9,
            a0: 1.0,
            r0: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FireflyParams {
    pub beta0: f64,
    /// Light absorption coefficient.
    pub gamma: f64,
    /// Random-walk scale at iteration 0.
    pub alpha: f64,
    /// Per-iteration multiplier on `alpha`; 1 keeps it constant.
    pub alpha_decay: f64,
}

impl FireflyParams {
    /// Domain-relative defaults: `γ = 1/w²`, `α = 0.1·w` for mean width `w`.
    pub fn for_space(space: &SearchSpace) -> Self {
        let w = space.mean_width();
        Self {
            beta0: 1.0,
            gamma: 1.0 / (w * w),
            alpha: 0.1 * w,
            alpha_decay: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuckooParams {
    /// Discovery (switching) probability.
    pub pa: f64,
    pub alpha_levy: f64,
    pub alpha_local: f64,
    pub lambda: f64,
}

impl CuckooParams {
    /// Lévy scale defaults to 1% of the mean domain width.
    pub fn for_space(space: &SearchSpace) -> Self {
        Self {
            pa: 0.25,
            alpha_levy: 0.01 * space.mean_width(),
            alpha_local: 1.0,
            lambda: 1.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpaParams {
    /// Probability of the global (Lévy, best-guided) branch.
    pub p_switch: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl Default for FpaParams {
    fn default() -> Self {
        Self {
            p_switch: 0.8,
            gamma: 0.1,
            lambda: 1.5,
        }
    }
}

/// Parameters for any one of the five algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum AlgorithmParams {
    Pso(PsoParams),
    Bat(BatParams),
    Firefly(FireflyParams),
    Cuckoo(CuckooParams),
    Fpa(FpaParams),
}

impl AlgorithmParams {
    pub fn defaults(kind: AlgorithmKind, space: &SearchSpace) -> Self {
        match kind {
            AlgorithmKind::Pso => AlgorithmParams::Pso(PsoParams::default()),
            AlgorithmKind::Bat => AlgorithmParams::Bat(BatParams::default()),
            AlgorithmKind::Firefly => AlgorithmParams::Firefly(FireflyParams::for_space(space)),
            AlgorithmKind::Cuckoo => AlgorithmParams::Cuckoo(CuckooParams::for_space(space)),
            AlgorithmKind::Fpa => AlgorithmParams::Fpa(FpaParams::default()),
        }
    }

    pub fn kind(&self) -> AlgorithmKind {
        match self {
            AlgorithmParams::Pso(_) => AlgorithmKind::Pso,
            AlgorithmParams::Bat(_) => AlgorithmKind::Bat,
            AlgorithmParams::Firefly(_) => AlgorithmKind::Firefly,
            AlgorithmParams::Cuckoo(_) => AlgorithmKind::Cuckoo,
            AlgorithmParams::Fpa(_) => AlgorithmKind::Fpa,
        }
    }

    fn slot(&mut self, name: &str) -> Result<&mut f64> {
        let kind = self.kind();
        let missing = || kind.param_spec(name).map(|_| ()).unwrap_err();
        Ok(match self {
            AlgorithmParams::Pso(p) => match name {
                "alpha" => &mut p.alpha,
                "beta" => &mut p.beta,
                "inertia" => &mut p.inertia,
                _ => return Err(missing()),
            },
            AlgorithmParams::Bat(p) => match name {
                "f_min" => &mut p.f_min,
                "f_max" => &mut p.f_max,
                "alpha" => &mut p.alpha,
                "gamma" => &mut p.gamma,
                "a0" => &mut p.a0,
                "r0" => &mut p.r0,
                _ => return Err(missing()),
            },
            AlgorithmParams::Firefly(p) => match name {
                "beta0" => &mut p.beta0,
                "gamma" => &mut p.gamma,
                "alpha" => &mut p.alpha,
                "alpha_decay" => &mut p.alpha_decay,
                _ => return Err(missing()),
            },
            AlgorithmParams::Cuckoo(p) => match name {
                "pa" => &mut p.pa,
                "alpha_levy" => &mut p.alpha_levy,
                "alpha_local" => &mut p.alpha_local,
                "lambda" => &mut p.lambda,
                _ => return Err(missing()),
            },
            AlgorithmParams::Fpa(p) => match name {
                "p_switch" => &mut p.p_switch,
                "gamma" => &mut p.gamma,
                "lambda" => &mut p.lambda,
                _ => return Err(missing()),
            },
        })
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        let mut copy = *self;
        copy.slot(name).map(|v| *v)
    }

    /// Set one parameter by name after checking its admissible range.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        self.kind().param_spec(name)?.check(value)?;
        *self.slot(name)? = value;
        if let AlgorithmParams::Bat(p) = self {
            if p.f_min > p.f_max {
                return Err(Error::InvalidArgument(format!(
                    "bat frequency range is empty: f_min {} > f_max {}",
                    p.f_min, p.f_max
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for spec in self.kind().param_specs() {
            spec.check(self.get(spec.name)?)?;
        }
        if let AlgorithmParams::Bat(p) = self {
            if p.f_min > p.f_max {
                return Err(Error::InvalidArgument(format!(
                    "bat frequency range is empty: f_min {} > f_max {}",
                    p.f_min, p.f_max
                )));
            }
        }
        Ok(())
    }
}
