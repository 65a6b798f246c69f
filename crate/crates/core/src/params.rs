use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of the nonlinearity power relative to the dispersion, `k` vs `2β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// Dispersion exponent `beta` and nonlinearity power `k` of
/// `u_t - D^beta u_x + (u^{k+1})_x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    beta: f64,
    k: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    beta: f64,
    k: u32,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.beta, raw.k)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            beta: p.beta,
            k: p.k,
        }
    }
}

impl ModelParams {
    pub fn new(beta: f64, k: u32) -> Result<Self> {
        if !(1.0..=2.0).contains(&beta) {
            return Err(Error::InvalidParams(format!(
                "beta must lie in [1, 2], got {beta}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidParams("k must be a positive integer".into()));
        }
        Ok(Self { beta, k })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kf(&self) -> f64 {
        f64::from(self.k)
    }

    pub fn regime(&self) -> Regime {
        let gap = self.kf() - 2.0 * self.beta;
        if gap.abs() <= 1e-12 {
            Regime::Critical
        } else if gap > 0.0 {
            Regime::Supercritical
        } else {
            Regime::Subcritical
        }
    }

    pub fn is_supercritical(&self) -> bool {
        self.regime() == Regime::Supercritical
    }

    /// `2 + (k+2)(beta-1)`, the exponent combination that recurs in the
    /// Gagliardo-Nirenberg inequality and the ground-state identities.
    pub fn gn_weight(&self) -> f64 {
        2.0 + (self.kf() + 2.0) * (self.beta - 1.0)
    }
}
