//! Shared domain types: kernels, eigenvalue sequences and eigenpairs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::special::PeriodicZeta;
use crate::{Error, Result, REL_TIE};

/// Univariate reproducing kernel on `[0, 1]` (or on a finite point set).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum KernelSpec {
    /// `1 + min(x, y)`: first-order Sobolev space anchored at 0.
    SobolevMin,
    /// `cosh(1 - max(x, y)) cosh(min(x, y)) / sinh(1)`: unanchored H^1.
    SobolevCosh,
    /// `1 + 2 beta sum_k cos(2 pi k (x - y)) / k^{2 alpha}`.
    Korobov { alpha: f64, beta: f64 },
    /// `1 + (|x - a| + |y - a| - |x - y|) / 2`, anchored at `a`.
    SobolevDistance { anchor: f64 },
    /// `min(x, y)`.
    BrownianMin,
    /// Arbitrary kernel on a finite point set, given by its Gram matrix (row-major).
    Discrete { points: Vec<f64>, gram: Vec<f64> },
}

impl KernelSpec {
    pub fn korobov(alpha: f64, beta: f64) -> Result<Self> {
        let spec = KernelSpec::Korobov { alpha, beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Korobov { alpha, beta } => {
                if !(alpha > 0.5) || !alpha.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "korobov smoothness alpha must exceed 1/2, got {alpha}"
                    )));
                }
                if !(beta > 0.0 && beta <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "korobov weight beta must lie in (0, 1], got {beta}"
                    )));
                }
            }
            KernelSpec::SobolevDistance { anchor } => {
                if !(0.0..=1.0).contains(&anchor) {
                    return Err(Error::InvalidParameter(format!(
                        "anchor must lie in [0, 1], got {anchor}"
                    )));
                }
            }
            KernelSpec::Discrete { ref points, ref gram } => {
                let m = points.len();
                if m == 0 || gram.len() != m * m {
                    return Err(Error::InvalidParameter(format!(
                        "discrete kernel needs an {m}x{m} gram matrix, got {} entries",
                        gram.len()
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::SobolevMin => "sobolev-min",
            KernelSpec::SobolevCosh => "sobolev-cosh",
            KernelSpec::Korobov { .. } => "korobov",
            KernelSpec::SobolevDistance { .. } => "sobolev-distance",
            KernelSpec::BrownianMin => "brownian-min",
            KernelSpec::Discrete { .. } => "discrete",
        }
    }

    /// Validates parameters and precomputes whatever the family needs for
    /// repeated evaluation.
    pub fn prepare(&self) -> Result<PreparedKernel<'_>> {
        self.validate()?;
        let series = match *self {
            KernelSpec::Korobov { alpha, .. } => Some(PeriodicZeta::new(2.0 * alpha)),
            _ => None,
        };
        Ok(PreparedKernel { spec: self, series })
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KernelSpec::Korobov { alpha, beta } => write!(f, "korobov(alpha={alpha}, beta={beta})"),
            KernelSpec::SobolevDistance { anchor } => write!(f, "sobolev-distance(a={anchor})"),
            KernelSpec::Discrete { ref points, .. } => write!(f, "discrete({} points)", points.len()),
            _ => f.write_str(self.name()),
        }
    }
}

/// A kernel ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct PreparedKernel<'a> {
    spec: &'a KernelSpec,
    series: Option<PeriodicZeta>,
}

impl PreparedKernel<'_> {
    pub fn spec(&self) -> &KernelSpec {
        self.spec
    }

    fn check_unit(x: f64) -> Result<()> {
        if (0.0..=1.0).contains(&x) {
            Ok(())
        } else {
            Err(Error::Domain { value: x, domain: "[0, 1]".into() })
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if let KernelSpec::Discrete { points, gram } = self.spec {
            let locate = |v: f64| {
                points.iter().position(|&p| p == v).ok_or_else(|| Error::Domain {
                    value: v,
                    domain: format!("finite set of {} points", points.len()),
                })
            };
            let (i, j) = (locate(x)?, locate(y)?);
            return Ok(gram[i * points.len() + j]);
        }
        Self::check_unit(x)?;
        Self::check_unit(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    /// Evaluation without the domain check; `x`, `y` must lie in `[0, 1]`.
    pub(crate) fn eval_unchecked(&self, x: f64, y: f64) -> f64 {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        match *self.spec {
            KernelSpec::SobolevMin => 1.0 + lo,
            KernelSpec::SobolevCosh => (1.0 - hi).cosh() * lo.cosh() / 1f64.sinh(),
            KernelSpec::Korobov { beta, .. } => {
                let series = self.series.as_ref().expect("prepared korobov kernel");
                1.0 + 2.0 * beta * series.eval(hi - lo)
            }
            KernelSpec::SobolevDistance { anchor } => {
                1.0 + 0.5 * ((x - anchor).abs() + (y - anchor).abs() - (hi - lo))
            }
            KernelSpec::BrownianMin => lo,
            KernelSpec::Discrete { .. } => unreachable!("discrete kernels are looked up by point"),
        }
    }
}

/// `K_1(x, y)` for the given family.
pub fn kernel_eval(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    spec.prepare()?.eval(x, y)
}

/// Product kernel `K_d(x, y) = prod_j K_1(x_j, y_j)`.
pub fn tensor_kernel_eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), got: y.len() });
    }
    let kernel = spec.prepare()?;
    x.iter().zip(y).try_fold(1.0, |acc, (&a, &b)| Ok(acc * kernel.eval(a, b)?))
}

/// Where an eigenvalue sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    AnalyticRule,
    Numeric,
    UserSupplied,
}

/// Nonincreasing, nonnegative eigenvalues `lambda_1 >= lambda_2 >= ...` of `W = S*S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSequence {
    values: Vec<f64>,
    source: SpectrumSource,
    exact_decay: Option<f64>,
    is_exhaustive: bool,
}

impl EigenSequence {
    pub fn new(
        values: Vec<f64>,
        source: SpectrumSource,
        exact_decay: Option<f64>,
        is_exhaustive: bool,
    ) -> Result<Self> {
        let first = *values
            .first()
            .ok_or_else(|| Error::InvalidInput("eigenvalue sequence is empty".into()))?;
        if !(first > 0.0) || !first.is_finite() {
            return Err(Error::InvalidInput(format!(
                "largest eigenvalue must be positive and finite, got {first}"
            )));
        }
        for (j, pair) in values.windows(2).enumerate() {
            if !(pair[1] >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "eigenvalue {} is negative or NaN: {}",
                    j + 2,
                    pair[1]
                )));
            }
            if pair[1] > pair[0] {
                return Err(Error::InvalidInput(format!(
                    "eigenvalues must be nonincreasing: lambda_{} = {} < lambda_{} = {}",
                    j + 1,
                    pair[0],
                    j + 2,
                    pair[1]
                )));
            }
        }
        if !is_exhaustive && values.contains(&0.0) {
            return Err(Error::InvalidInput(
                "zero eigenvalues are only allowed in exhaustive sequences".into(),
            ));
        }
        if let Some(decay) = exact_decay {
            if !(decay >= 0.0) {
                return Err(Error::InvalidInput(format!("decay must be nonnegative, got {decay}")));
            }
        }
        Ok(Self { values, source, exact_decay, is_exhaustive })
    }

    /// Sorts arbitrary nonnegative values into a user-supplied sequence.
    pub fn from_unsorted(mut values: Vec<f64>, is_exhaustive: bool) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidInput("eigenvalues contain NaN".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values, SpectrumSource::UserSupplied, None, is_exhaustive)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn exact_decay(&self) -> Option<f64> {
        self.exact_decay
    }

    pub fn is_exhaustive(&self) -> bool {
        self.is_exhaustive
    }

    pub fn lambda1(&self) -> f64 {
        self.values[0]
    }

    /// `lambda_j` for 1-based `j`; beyond an exhaustive list this is zero.
    pub fn get(&self, j: usize) -> Option<f64> {
        match self.values.get(j.checked_sub(1)?) {
            Some(&v) => Some(v),
            None if self.is_exhaustive => Some(0.0),
            None => None,
        }
    }

    pub fn lambda2(&self) -> Option<f64> {
        self.get(2)
    }

    /// Number of leading eigenvalues equal to `lambda_1` within [`REL_TIE`].
    pub fn multiplicity_of_top(&self) -> usize {
        let top = self.values[0];
        self.values.iter().take_while(|&&v| v >= top * (1.0 - REL_TIE)).count()
    }

    /// Uniformly rescaled copy `c * lambda_j`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {factor}")));
        }
        Self::new(
            self.values.iter().map(|v| v * factor).collect(),
            self.source,
            self.exact_decay,
            self.is_exhaustive,
        )
    }
}

/// Closed-form eigenfunction on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Eigenfunction {
    /// `beta cos(alpha x - alpha)`.
    ShiftedCosine { alpha: f64, beta: f64 },
    /// `scale cos(omega x)`.
    Cosine { omega: f64, scale: f64 },
    /// `scale sin(omega x)`.
    Sine { omega: f64, scale: f64 },
    /// `a (1 + min(x, t))`, a scaled kernel section of the min-kernel space.
    KernelSection { a: f64, t: f64 },
    Constant { value: f64 },
}

impl Eigenfunction {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Eigenfunction::ShiftedCosine { alpha, beta } => beta * (alpha * x - alpha).cos(),
            Eigenfunction::Cosine { omega, scale } => scale * (omega * x).cos(),
            Eigenfunction::Sine { omega, scale } => scale * (omega * x).sin(),
            Eigenfunction::KernelSection { a, t } => a * (1.0 + x.min(t)),
            Eigenfunction::Constant { value } => value,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Eigenfunction::ShiftedCosine { alpha, beta } => -alpha * beta * (alpha * x - alpha).sin(),
            Eigenfunction::Cosine { omega, scale } => -omega * scale * (omega * x).sin(),
            Eigenfunction::Sine { omega, scale } => omega * scale * (omega * x).cos(),
            Eigenfunction::KernelSection { a, t } => {
                if x < t {
                    a
                } else {
                    0.0
                }
            }
            Eigenfunction::Constant { .. } => 0.0,
        }
    }
}

/// `W eta_j = lambda_j eta_j` with `eta_j` normalized in the source space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub index: usize,
    pub value: f64,
    pub eigenfunction: Eigenfunction,
}
