use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Box-bounded continuous search domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::InvalidSpace(format!(
                "lower has {} coordinates but upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        for (k, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidSpace(format!(
                    "non-finite bound in coordinate {k}"
                )));
            }
            if lo >= hi {
                return Err(Error::InvalidSpace(format!(
                    "coordinate {k}: lower {lo} is not below upper {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The hypercube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Mean coordinate width, used to scale domain-relative defaults.
    pub fn mean_width(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .sum::<f64>()
            / self.dim() as f64
    }

    pub fn diagonal(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Project `position` onto the box. Interior coordinates are returned unchanged.
    pub fn clamp(&self, position: &[f64]) -> Result<Vec<f64>> {
        let mut out = position.to_vec();
        self.clamp_in_place(&mut out)?;
        Ok(out)
    }

    pub fn clamp_in_place(&self, position: &mut [f64]) -> Result<()> {
        if position.len() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "position has {} coordinates, space has {}",
                position.len(),
                self.dim()
            )));
        }
        if position.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric {
                message: "non-finite coordinate".into(),
                position: Some(position.to_vec()),
                iteration: None,
            });
        }
        for (v, (lo, hi)) in position.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
        Ok(())
    }
}
