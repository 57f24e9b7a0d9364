use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classical effective energy `-ln(W) / beta` of a quasiprobability value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum EffectiveHamiltonian {
    Finite(f64),
    /// `W <= 0`: no real effective energy reproduces this weight.
    NonPositiveQuasiprobability,
}

impl EffectiveHamiltonian {
    pub fn is_defined(&self) -> bool {
        matches!(self, EffectiveHamiltonian::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            EffectiveHamiltonian::Finite(v) => Some(v),
            EffectiveHamiltonian::NonPositiveQuasiprobability => None,
        }
    }
}

pub fn heff_from_density(density: f64, beta: f64) -> Result<EffectiveHamiltonian> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    if density.is_nan() {
        return Err(Error::InvalidArgument("density is NaN".into()));
    }
    if density > 0.0 {
        Ok(EffectiveHamiltonian::Finite(-density.ln() / beta))
    } else {
        Ok(EffectiveHamiltonian::NonPositiveQuasiprobability)
    }
}
