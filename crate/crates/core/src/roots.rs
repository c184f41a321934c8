//! Analytic univariate spectra.
//!
//! * min-kernel Sobolev space: `lambda_j = alpha_j^{-2}` with `alpha_j` the root
//!   of `cot x = x` in `((j-1) pi, j pi)`;
//! * cosh-kernel Sobolev space: `lambda_j = 1 / (1 + pi^2 (j-1)^2)`;
//! * Korobov space: `{1} ∪ {beta k^{-2 alpha}, twice}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::spectra::{EigenSequence, Eigenfunction, Eigenpair, KernelSpec, SpectrumSource};
use crate::{Error, Result};

/// Offset from the poles of `cot` used for the initial bracket.
const BRACKET_OFFSET: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-13;

/// Unique root `alpha_j` of `cot x = x` in `((j-1) pi, j pi)`.
pub fn solve_cot_root(j: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidParameter("root index j must be at least 1".into()));
    }
    let residual = |x: f64| x.cos() / x.sin() - x;
    let mut lo = (j - 1) as f64 * PI + BRACKET_OFFSET;
    let mut hi = j as f64 * PI - BRACKET_OFFSET;
    if !(residual(lo) > 0.0 && residual(hi) < 0.0) {
        return Err(Error::Internal(format!("cot x - x does not change sign on bracket {j}")));
    }
    for _ in 0..200 {
        if hi - lo <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Polish on the pole-free form x sin x - cos x, which has the same roots.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..2 {
        let g = x * x.sin() - x.cos();
        let dg = 2.0 * x.sin() + x * x.cos();
        let next = x - g / dg;
        if next > lo - ROOT_TOL && next < hi + ROOT_TOL {
            x = next;
        }
    }
    Ok(x)
}

/// `beta_j` normalizing `beta cos(alpha x - alpha)` to unit norm under
/// `<f, h> = f(0) h(0) + int f' h'`.
pub fn sobolev_min_normalizer(alpha: f64) -> f64 {
    let c = alpha.cos();
    (c * c + 0.5 * alpha * (alpha - 0.5 * (2.0 * alpha).sin())).powf(-0.5)
}

pub fn sobolev_min_eigenpair(j: usize) -> Result<Eigenpair> {
    let alpha = solve_cot_root(j)?;
    Ok(Eigenpair {
        index: j,
        value: alpha.powi(-2),
        eigenfunction: Eigenfunction::ShiftedCosine { alpha, beta: sobolev_min_normalizer(alpha) },
    })
}

pub fn sobolev_min_eigenvalues(count: usize) -> Result<EigenSequence> {
    check_count(count)?;
    let values = (1..=count).map(|j| Ok(solve_cot_root(j)?.powi(-2))).collect::<Result<Vec<_>>>()?;
    EigenSequence::new(values, SpectrumSource::AnalyticRule, Some(2.0), false)
}

pub fn sobolev_cosh_eigenvalues(count: usize) -> Result<EigenSequence> {
    check_count(count)?;
    let values = (0..count).map(|i| cosh_value(i + 1)).collect();
    EigenSequence::new(values, SpectrumSource::AnalyticRule, Some(2.0), false)
}

fn cosh_value(j: usize) -> f64 {
    let n = (j - 1) as f64;
    1.0 / (1.0 + PI * PI * n * n)
}

/// `cos(pi (j-1) x)` scaled to unit norm under `int f g + int f' g'`.
pub fn sobolev_cosh_eigenpair(j: usize) -> Result<Eigenpair> {
    check_count(j)?;
    let omega = PI * (j - 1) as f64;
    let scale = if j == 1 { 1.0 } else { (0.5 * (1.0 + omega * omega)).powf(-0.5) };
    Ok(Eigenpair { index: j, value: cosh_value(j), eigenfunction: Eigenfunction::Cosine { omega, scale } })
}

pub fn korobov_eigenvalues(alpha: f64, beta: f64, count: usize) -> Result<EigenSequence> {
    KernelSpec::korobov(alpha, beta)?;
    check_count(count)?;
    let values = (0..count).map(|i| korobov_value(alpha, beta, i + 1)).collect();
    EigenSequence::new(values, SpectrumSource::AnalyticRule, Some(2.0 * alpha), false)
}

/// Frequency `k` of the `j`-th Korobov eigenvalue (`0` for the constant).
fn korobov_frequency(j: usize) -> usize {
    j / 2
}

fn korobov_value(alpha: f64, beta: f64, j: usize) -> f64 {
    match korobov_frequency(j) {
        0 => 1.0,
        k => beta * (k as f64).powf(-2.0 * alpha),
    }
}

/// `1`, then `sqrt(2 beta) k^{-alpha}` times `cos(2 pi k x)` and `sin(2 pi k x)`.
pub fn korobov_eigenpair(alpha: f64, beta: f64, j: usize) -> Result<Eigenpair> {
    KernelSpec::korobov(alpha, beta)?;
    check_count(j)?;
    let k = korobov_frequency(j);
    let eigenfunction = if k == 0 {
        Eigenfunction::Constant { value: 1.0 }
    } else {
        let omega = 2.0 * PI * k as f64;
        let scale = (2.0 * beta).sqrt() * (k as f64).powf(-alpha);
        if j.is_multiple_of(2) {
            Eigenfunction::Cosine { omega, scale }
        } else {
            Eigenfunction::Sine { omega, scale }
        }
    };
    Ok(Eigenpair { index: j, value: korobov_value(alpha, beta, j), eigenfunction })
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    Ok(())
}

/// First `count` analytic eigenvalues of `family`.
pub fn analytic_eigenvalues(family: &KernelSpec, count: usize) -> Result<EigenSequence> {
    match *family {
        KernelSpec::SobolevMin => sobolev_min_eigenvalues(count),
        KernelSpec::SobolevCosh => sobolev_cosh_eigenvalues(count),
        KernelSpec::Korobov { alpha, beta } => korobov_eigenvalues(alpha, beta, count),
        _ => Err(Error::InvalidParameter(format!("no closed-form spectrum for {family}"))),
    }
}

pub fn analytic_eigenpair(family: &KernelSpec, j: usize) -> Result<Eigenpair> {
    match *family {
        KernelSpec::SobolevMin => sobolev_min_eigenpair(j),
        KernelSpec::SobolevCosh => sobolev_cosh_eigenpair(j),
        KernelSpec::Korobov { alpha, beta } => korobov_eigenpair(alpha, beta, j),
        _ => Err(Error::InvalidParameter(format!("no closed-form eigenpairs for {family}"))),
    }
}

/// Analytic eigenvalues up to and including the first one `<= floor`, so the
/// returned list provably contains every eigenvalue above `floor`.
pub fn analytic_eigenvalues_above(family: &KernelSpec, floor: f64, max_len: usize) -> Result<EigenSequence> {
    if !(floor > 0.0) {
        return Err(Error::InvalidParameter(format!("floor must be positive, got {floor}")));
    }
    if let Some(known) = count_above_lower_bound(family, floor) {
        if known > max_len as f64 {
            return Err(Error::ResourceLimit(format!(
                "more than {max_len} univariate eigenvalues exceed {floor:e}"
            )));
        }
    }
    let mut values = Vec::new();
    let mut j = 1;
    loop {
        if j > max_len {
            return Err(Error::ResourceLimit(format!(
                "more than {max_len} univariate eigenvalues exceed {floor:e}"
            )));
        }
        let v = match *family {
            KernelSpec::SobolevMin => solve_cot_root(j)?.powi(-2),
            KernelSpec::SobolevCosh => cosh_value(j),
            KernelSpec::Korobov { alpha, beta } => {
                KernelSpec::korobov(alpha, beta)?;
                korobov_value(alpha, beta, j)
            }
            _ => return Err(Error::InvalidParameter(format!("no closed-form spectrum for {family}"))),
        };
        values.push(v);
        // Korobov values come in equal pairs; stop only after the pair is complete.
        let pair_open = matches!(family, KernelSpec::Korobov { .. }) && j % 2 == 0;
        if v <= floor && !pair_open {
            break;
        }
        j += 1;
    }
    let exact_decay = analytic_decay(family);
    EigenSequence::new(values, SpectrumSource::AnalyticRule, exact_decay, false)
}

/// A number of indices known to have eigenvalues above `floor`, from
/// closed-form bounds, without evaluating them.
fn count_above_lower_bound(family: &KernelSpec, floor: f64) -> Option<f64> {
    match *family {
        // alpha_j < j pi, so lambda_j > 1 / (j pi)^2.
        KernelSpec::SobolevMin => Some((PI * floor.sqrt()).recip().floor()),
        KernelSpec::SobolevCosh => Some(((floor.recip() - 1.0).max(0.0).sqrt() / PI).floor()),
        KernelSpec::Korobov { alpha, beta } => Some(2.0 * ((beta / floor).powf(0.5 / alpha).ceil() - 1.0).max(0.0)),
        _ => None,
    }
}

pub fn analytic_decay(family: &KernelSpec) -> Option<f64> {
    match *family {
        KernelSpec::SobolevMin | KernelSpec::SobolevCosh => Some(2.0),
        KernelSpec::Korobov { alpha, .. } => Some(2.0 * alpha),
        _ => None,
    }
}

/// Spectrum plus leading eigenpairs of an analytic family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpectrum {
    pub family: KernelSpec,
    pub eigensequence: EigenSequence,
    pub eigenpairs: Vec<Eigenpair>,
    pub multiplicity_of_top: usize,
}

pub fn family_spectrum(family: &KernelSpec, count: usize, pairs: usize) -> Result<FamilySpectrum> {
    let eigensequence = analytic_eigenvalues(family, count.max(pairs).max(1))?;
    let eigenpairs = (1..=pairs.max(1)).map(|j| analytic_eigenpair(family, j)).collect::<Result<Vec<_>>>()?;
    let multiplicity_of_top = eigensequence.multiplicity_of_top();
    Ok(FamilySpectrum { family: family.clone(), eigensequence, eigenpairs, multiplicity_of_top })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::simpson;
    use approx::assert_relative_eq;

    /// Plain bisection with no polishing, as an independent reference.
    fn bisect_root(j: usize) -> f64 {
        let f = |x: f64| x.cos() / x.sin() - x;
        let (mut lo, mut hi) = ((j - 1) as f64 * PI + 1e-9, j as f64 * PI - 1e-9);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn first_roots() {
        let a1 = solve_cot_root(1).unwrap();
        assert!((a1 - bisect_root(1)).abs() < 1e-13);
        assert!((a1 - 0.86033358901938).abs() < 1e-13);
        assert!((a1.powi(-2) - 1.35103388).abs() < 1e-8);
        assert!((solve_cot_root(2).unwrap().powi(-2) - 0.08521617).abs() < 1e-8);
        assert!(solve_cot_root(0).is_err());
    }

    #[test]
    fn roots_interlace_and_solve() {
        let mut previous = 0.0;
        for j in 1..=50 {
            let a = solve_cot_root(j).unwrap();
            assert!(a > (j - 1) as f64 * PI && a < j as f64 * PI);
            assert!(a > previous);
            // The residual's slope is about -(1 + a^2), so scale it away.
            assert!((a.cos() / a.sin() - a).abs() / (1.0 + a * a) < 1e-13, "residual at j = {j}");
            assert!((a - bisect_root(j)).abs() < 1e-12);
            previous = a;
        }
    }

    #[test]
    fn large_index_asymptotics() {
        let lambda = sobolev_min_eigenpair(50).unwrap().value;
        // alpha_j = (j - 1) pi + 1 / ((j - 1) pi) + O(j^-3).
        let product = lambda * (49.0 * PI).powi(2);
        assert!(product > 0.999 && product < 1.0, "{product}");
    }

    fn f1_inner(a: &Eigenfunction, b: &Eigenfunction) -> f64 {
        a.eval(0.0) * b.eval(0.0) + simpson(|x| a.derivative(x) * b.derivative(x), 0.0, 1.0, 4096)
    }

    #[test]
    fn min_kernel_eigenfunctions_are_orthonormal() {
        let pairs: Vec<_> = (1..=5).map(|j| sobolev_min_eigenpair(j).unwrap()).collect();
        assert!((f1_inner(&pairs[0].eigenfunction, &pairs[0].eigenfunction) - 1.0).abs() < 1e-9);
        for (i, a) in pairs.iter().enumerate() {
            for (j, b) in pairs.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((f1_inner(&a.eigenfunction, &b.eigenfunction) - expected).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn cosh_rule() {
        let s = sobolev_cosh_eigenvalues(3).unwrap();
        assert_eq!(s.values()[0], 1.0);
        assert!((s.values()[1] - 0.091999668).abs() < 1e-9);
        assert_relative_eq!(s.values()[2], 1.0 / (1.0 + 4.0 * PI * PI));
        assert!((s.values()[2] - 0.0247045).abs() < 1e-6);
        assert_eq!(s.exact_decay(), Some(2.0));
    }

    #[test]
    fn cosh_eigenfunctions_have_unit_h1_norm() {
        for j in 1..=4 {
            let p = sobolev_cosh_eigenpair(j).unwrap().eigenfunction;
            let norm = simpson(|x| p.eval(x).powi(2) + p.derivative(x).powi(2), 0.0, 1.0, 2048);
            assert_relative_eq!(norm, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn korobov_sequences() {
        let s = korobov_eigenvalues(3.0, 0.5, 3).unwrap();
        assert_eq!(s.values(), &[1.0, 0.5, 0.5]);
        assert_eq!(s.multiplicity_of_top(), 1);
        let s = korobov_eigenvalues(1.0, 1.0, 3).unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0]);
        assert!(s.multiplicity_of_top() >= 3);
        let s = korobov_eigenvalues(1.0, 0.5, 7).unwrap();
        let mut sorted = s.values().to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(sorted, s.values());
        assert_eq!((s.values()[3], s.values()[4]), (0.125, 0.125));
        assert_eq!(s.exact_decay(), Some(2.0));
        assert!(korobov_eigenvalues(0.4, 0.5, 3).is_err());
        assert!(korobov_eigenvalues(1.0, 1.5, 3).is_err());
    }

    #[test]
    fn sequence_above_floor_is_complete() {
        let s = analytic_eigenvalues_above(&KernelSpec::Korobov { alpha: 1.0, beta: 0.5 }, 0.125, 100).unwrap();
        assert_eq!(s.values(), &[1.0, 0.5, 0.5, 0.125, 0.125]);
        let s = analytic_eigenvalues_above(&KernelSpec::SobolevMin, 0.01, 100).unwrap();
        let last = *s.values().last().unwrap();
        assert!(last <= 0.01 && s.values()[s.len() - 2] > 0.01);
    }

    #[test]
    fn family_spectrum_consistency() {
        let fs = family_spectrum(&KernelSpec::SobolevMin, 10, 3).unwrap();
        assert_eq!(fs.eigensequence.values()[0], fs.eigenpairs[0].value);
        assert_eq!(fs.multiplicity_of_top, 1);
        assert!(family_spectrum(&KernelSpec::BrownianMin, 3, 1).is_err());
    }
}
