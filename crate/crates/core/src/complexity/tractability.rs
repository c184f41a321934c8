use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::roots::solve_cot_root;
use crate::quadrature::simpson;
use crate::spectra::{EigenSequence, Eigenfunction, KernelSpec};
use crate::{Error, Result, REL_TIE};

pub const DEFAULT_DECAY_WINDOW: RangeInclusive<usize> = 20..=200;

/// Least-squares estimate of the polynomial decay rate: minus the slope of
/// `ln lambda_n` against `ln n` over the 1-based index `window`.
pub fn estimate_decay(eigs: &EigenSequence, window: RangeInclusive<usize>) -> Result<f64> {
    let (lo, hi) = (*window.start(), *window.end());
    if lo == 0 || hi < lo || hi - lo + 1 < 8 {
        return Err(Error::InvalidParameter(format!(
            "decay window {lo}..={hi} must be 1-based with at least 8 indices"
        )));
    }
    if hi > eigs.len() {
        return Err(Error::InvalidParameter(format!(
            "decay window ends at {hi} but only {} eigenvalues are available",
            eigs.len()
        )));
    }
    let points: Vec<(f64, f64)> = window
        .map(|n| {
            let v = eigs.values()[n - 1];
            if v > 0.0 {
                Ok(((n as f64).ln(), v.ln()))
            } else {
                Err(Error::InvalidInput(format!("eigenvalue {n} in the decay window is zero")))
            }
        })
        .collect::<Result<_>>()?;
    let count = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / count;
    let my = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// Exponent of quasi-polynomial tractability,
/// `max(2 / decay, 2 / ln(lambda1 / lambda2))`, and `0` when `lambda2 = 0`.
pub fn qpt_exponent(lambda1: f64, lambda2: f64, decay: f64) -> Result<f64> {
    if !(lambda1 > 0.0) {
        return Err(Error::Precondition(format!("lambda1 must be positive, got {lambda1}")));
    }
    if !(lambda2 >= 0.0) {
        return Err(Error::Precondition(format!("lambda2 must be nonnegative, got {lambda2}")));
    }
    if lambda2 >= lambda1 {
        return Err(Error::Precondition(format!(
            "lambda2 = {lambda2} >= lambda1 = {lambda1}: no quasi-polynomial tractability"
        )));
    }
    if !(decay > 0.0) {
        return Err(Error::Precondition(format!("decay must be positive, got {decay}")));
    }
    if lambda2 == 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 / decay).max(2.0 / (lambda1 / lambda2).ln()))
}

/// Shape test for `eta != a (1 + min(., t))`.
///
/// For each `t` on a grid of 1001 points, the only candidate scale is
/// `a = eta(0)`; `t` is rejected when `eta` deviates from `a (1 + min(x, t))` by
/// more than `1e-9` at some of 1001 test points. Returns `true` when every `t`
/// is rejected.
pub fn check_goodcase(eta: impl Fn(f64) -> f64) -> bool {
    const GRID: usize = 1000;
    const TOL: f64 = 1e-9;
    let samples: Vec<f64> = (0..=GRID).map(|i| eta(i as f64 / GRID as f64)).collect();
    let a = samples[0];
    (0..=GRID).all(|ti| {
        let t = ti as f64 / GRID as f64;
        samples.iter().enumerate().any(|(xi, &value)| {
            let x = xi as f64 / GRID as f64;
            (value - a * (1.0 + x.min(t))).abs() > TOL
        })
    })
}

/// [`check_goodcase`] for a top eigenfunction of the min-kernel Sobolev space.
pub fn check_goodcase_sobolev_min(eta1: &Eigenfunction) -> bool {
    check_goodcase(|x| eta1.eval(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllClass {
    Curse,
    QptNotPt,
    /// `lambda2 = 0`: each `S_d` is a functional and one functional suffices.
    QptTrivialFunctional,
    /// `0 < lambda2 < lambda1` with zero polynomial decay.
    NotQpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StdClass {
    Curse,
    /// Not settled by the available results.
    Unknown,
    /// A scaled point evaluation: one function value suffices.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TractabilityReport {
    pub lambda1: f64,
    pub lambda2: f64,
    /// May be `f64::INFINITY` (serialized as `null`).
    pub decay: f64,
    pub qpt_exponent: Option<f64>,
    pub classification_all: AllClass,
    pub classification_std: StdClass,
    pub goodcase_holds: Option<bool>,
}

/// Tractability decision table for unweighted tensor products.
///
/// * `lambda2 = lambda1` (within [`REL_TIE`]): curse for both classes.
/// * `lambda2 < lambda1`, `decay > 0`: QPT for linear information, not PT when
///   `lambda2 > 0`; `decay = 0`: not QPT.
/// * `lambda2 < lambda1` and the top eigenfunction is not a scaled kernel
///   section (`goodcase = Some(true)`): curse for function values. Otherwise the
///   function-value case is reported as unknown, except the rank-one case
///   `lambda2 = 0` with `goodcase = Some(false)`, which is a point evaluation.
pub fn classify(lambda1: f64, lambda2: f64, decay: f64, goodcase: Option<bool>) -> Result<TractabilityReport> {
    if !(lambda1 > 0.0) || !(lambda2 >= 0.0) || decay.is_nan() || decay < 0.0 {
        return Err(Error::Precondition(format!(
            "need lambda1 > 0, lambda2 >= 0, decay >= 0; got {lambda1}, {lambda2}, {decay}"
        )));
    }
    let tied = lambda2 >= lambda1 * (1.0 - REL_TIE);
    if lambda2 > lambda1 * (1.0 + REL_TIE) {
        return Err(Error::Precondition(format!("lambda2 = {lambda2} exceeds lambda1 = {lambda1}")));
    }
    let report = |all, std, qpt| TractabilityReport {
        lambda1,
        lambda2,
        decay,
        qpt_exponent: qpt,
        classification_all: all,
        classification_std: std,
        goodcase_holds: goodcase,
    };
    if tied {
        return Ok(report(AllClass::Curse, StdClass::Curse, None));
    }
    let std = match goodcase {
        Some(true) => StdClass::Curse,
        Some(false) if lambda2 == 0.0 => StdClass::Trivial,
        _ => StdClass::Unknown,
    };
    if lambda2 == 0.0 {
        return Ok(report(AllClass::QptTrivialFunctional, std, Some(0.0)));
    }
    if decay > 0.0 {
        let t = qpt_exponent(lambda1, lambda2, decay)?;
        Ok(report(AllClass::QptNotPt, std, Some(t)))
    } else {
        Ok(report(AllClass::NotQpt, std, None))
    }
}

/// Initial errors of integration and L2 approximation on the min-kernel
/// Sobolev space in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialErrors {
    pub integration: f64,
    pub approximation: f64,
    /// `approximation / integration = (lambda1 / (4/3))^{d/2}`.
    pub ratio: f64,
}

/// `e_0(INT_1)^2 = int int K(x, y) dx dy` by composite Simpson, integrating
/// each row separately on both sides of the diagonal where kernels may kink.
pub fn integration_initial_error_sq(spec: &KernelSpec, intervals: usize) -> Result<f64> {
    let kernel = spec.prepare()?;
    if matches!(spec, KernelSpec::Discrete { .. }) {
        return Err(Error::InvalidParameter("integration needs a kernel on [0, 1]".into()));
    }
    let row = |x: f64| {
        simpson(|y| kernel.eval_unchecked(x, y), 0.0, x, intervals)
            + simpson(|y| kernel.eval_unchecked(x, y), x, 1.0, intervals)
    };
    Ok(simpson(row, 0.0, 1.0, intervals))
}

pub fn initial_error_ratio_integration(d: usize) -> Result<InitialErrors> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension d must be at least 1".into()));
    }
    let lambda1 = solve_cot_root(1)?.powi(-2);
    let half_d = d as f64 / 2.0;
    Ok(InitialErrors {
        integration: (4.0f64 / 3.0).powf(half_d),
        approximation: lambda1.powf(half_d),
        ratio: (lambda1 * 0.75).powf(half_d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{
        korobov_eigenvalues, sobolev_cosh_eigenvalues, sobolev_min_eigenpair, sobolev_min_eigenvalues,
    };
    use crate::spectra::SpectrumSource;
    use proptest::prelude::*;

    #[test]
    fn decay_of_exact_power_law() {
        let eigs = EigenSequence::new(
            (1..=100).map(|j| (j as f64).powi(-2)).collect(),
            SpectrumSource::UserSupplied,
            None,
            false,
        )
        .unwrap();
        assert!((estimate_decay(&eigs, 10..=100).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn decay_of_analytic_families() {
        let min = sobolev_min_eigenvalues(200).unwrap();
        assert!((estimate_decay(&min, DEFAULT_DECAY_WINDOW).unwrap() - 2.0).abs() < 0.05);
        let kor = korobov_eigenvalues(1.5, 0.5, 200).unwrap();
        assert!((estimate_decay(&kor, 10..=200).unwrap() - 3.0).abs() < 0.05);
        let cosh = sobolev_cosh_eigenvalues(200).unwrap();
        assert!((estimate_decay(&cosh, DEFAULT_DECAY_WINDOW).unwrap() - 2.0).abs() < 0.05);
    }

    #[test]
    fn decay_window_errors() {
        let eigs = sobolev_min_eigenvalues(30).unwrap();
        assert!(estimate_decay(&eigs, 1..=5).is_err());
        assert!(estimate_decay(&eigs, 20..=40).is_err());
        let finite = EigenSequence::new(vec![1.0; 5].into_iter().chain([0.0; 10]).collect(), SpectrumSource::UserSupplied, None, true)
            .unwrap();
        assert!(matches!(estimate_decay(&finite, 1..=10), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn qpt_exponent_cases() {
        let l1: f64 = 1.35103388;
        let l2 = 0.08521617;
        assert!(2.0 / (l1 / l2).ln() < 0.73);
        assert_eq!(qpt_exponent(l1, l2, 2.0).unwrap(), 1.0);
        assert_eq!(qpt_exponent(1.0, 0.0, 2.0).unwrap(), 0.0);
        let beta = (-1.0f64).exp();
        assert!((qpt_exponent(1.0, beta, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(qpt_exponent(1.0, 1.0, 2.0).is_err());
        assert!(qpt_exponent(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn goodcase_examples() {
        let eta1 = sobolev_min_eigenpair(1).unwrap().eigenfunction;
        assert!(check_goodcase_sobolev_min(&eta1));
        for t in [0.0, 0.25, 0.5, 1.0] {
            let section = Eigenfunction::KernelSection { a: 0.7, t };
            assert!(!check_goodcase_sobolev_min(&section), "t = {t}");
        }
        assert!(!check_goodcase_sobolev_min(&Eigenfunction::Constant { value: 1.0 }));
        assert!(!check_goodcase(|x| (1.0 + x.min(0.5)) / 1.5f64.sqrt()));
    }

    #[test]
    fn classification_table() {
        let l1 = sobolev_min_eigenvalues(2).unwrap();
        let (a, b) = (l1.values()[0], l1.values()[1]);
        let r = classify(a, b, 2.0, Some(true)).unwrap();
        assert_eq!(r.classification_all, AllClass::QptNotPt);
        assert_eq!(r.qpt_exponent, Some(1.0));
        assert_eq!(r.classification_std, StdClass::Curse);

        let r = classify(1.0, 1.0, 2.0, Some(false)).unwrap();
        assert_eq!((r.classification_all, r.classification_std), (AllClass::Curse, StdClass::Curse));

        let r = classify(1.0, 0.0, f64::INFINITY, None).unwrap();
        assert_eq!(r.classification_all, AllClass::QptTrivialFunctional);
        assert_eq!(r.classification_std, StdClass::Unknown);
        assert_eq!(classify(1.0, 0.0, f64::INFINITY, Some(false)).unwrap().classification_std, StdClass::Trivial);
        assert_eq!(classify(1.0, 0.0, f64::INFINITY, Some(true)).unwrap().classification_std, StdClass::Curse);

        let r = classify(1.0, 0.5, 2.0, Some(false)).unwrap();
        assert_eq!(r.classification_std, StdClass::Unknown);
        assert_eq!(classify(1.0, 0.5, 0.0, None).unwrap().classification_all, AllClass::NotQpt);

        assert!(classify(1.0, 1.5, 2.0, None).is_err());
        assert!(classify(0.0, 0.0, 2.0, None).is_err());
    }

    #[test]
    fn initial_errors() {
        let e = initial_error_ratio_integration(1).unwrap();
        assert!((e.integration - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((e.integration - 1.1547).abs() < 1e-4);
        let e = initial_error_ratio_integration(2).unwrap();
        assert!((e.ratio - 1.35103388 / (4.0 / 3.0)).abs() < 1e-7);
        assert!((e.ratio - e.approximation / e.integration).abs() < 1e-14);
        assert!(initial_error_ratio_integration(0).is_err());
    }

    proptest! {
        #[test]
        fn classification_is_scale_free(l2_ratio in 0.0f64..1.0, decay in 0.1f64..5.0, scale in 1e-3f64..1e3, good in proptest::option::of(any::<bool>())) {
            let base = classify(1.0, l2_ratio, decay, good).unwrap();
            let scaled = classify(scale, scale * l2_ratio, decay, good).unwrap();
            prop_assert_eq!(base.classification_all, scaled.classification_all);
            prop_assert_eq!(base.classification_std, scaled.classification_std);
            match (base.qpt_exponent, scaled.qpt_exponent) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0)),
                (a, b) => prop_assert_eq!(a, b),
            }
        }
    }
}
