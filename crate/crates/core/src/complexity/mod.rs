//! d-fold tensor products: information complexity for arbitrary linear
//! information, minimal errors, decay and QPT exponents, and the tractability
//! decision table.

mod counting;
mod tractability;

pub use counting::{
    brute_force_count, count_info_complexity_all, en_all, information_complexity, BRUTE_FORCE_LIMIT,
};
pub use tractability::{
    check_goodcase, check_goodcase_sobolev_min, classify, estimate_decay, initial_error_ratio_integration,
    integration_initial_error_sq, qpt_exponent, AllClass, InitialErrors, StdClass, TractabilityReport, DEFAULT_DECAY_WINDOW,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfoClass {
    /// Arbitrary continuous linear functionals.
    All,
    /// Function values only.
    Std,
}

/// `(eps, d, class)` asking for `n(eps, S_d, class)` under the normalized error criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityQuery {
    pub eps: f64,
    pub d: usize,
    pub info_class: InfoClass,
}

impl ComplexityQuery {
    pub fn new(eps: f64, d: usize, info_class: InfoClass) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie strictly inside (0, 1), got {eps}")));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("dimension d must be at least 1".into()));
        }
        Ok(Self { eps, d, info_class })
    }

    pub fn all(eps: f64, d: usize) -> Result<Self> {
        Self::new(eps, d, InfoClass::All)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    DirectEnum,
    DfsMultiset,
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    Exact,
    /// For function values only a lower bound follows from the eigenvalues.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityResult {
    pub count: u64,
    pub kind: CountKind,
    /// Set when the true count exceeds `2^63 - 1`; `count` then holds that cap.
    pub saturated: bool,
    /// Number of univariate eigenvalues that can appear in a counted product.
    pub truncation_index: usize,
    pub tie_tolerance: f64,
    pub method: CountMethod,
}

/// Saturation cap for counts.
pub const COUNT_CAP: u64 = i64::MAX as u64;
