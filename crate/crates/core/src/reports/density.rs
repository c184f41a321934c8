use serde::{Deserialize, Serialize};

use super::svg::{line_plot_svg, PlotSpec};
use super::tables::{format_number, Tabular};
use crate::quadrature::simpson;
use crate::roots::sobolev_min_eigenpair;
use crate::spectra::{Eigenfunction, KernelSpec};
use crate::{Error, Result};

/// Simpson intervals for the normalization check (1025 nodes).
pub const DENSITY_QUADRATURE_INTERVALS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    None,
}

/// Density `g_1 = lambda_1^{-1/2} eta_1` for which `||I_g|| = ||APP_1||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub lambda1: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub samples: Vec<(f64, f64)>,
    /// `int_0^1 g_1^2` by composite Simpson.
    pub l2_norm_sq: f64,
    /// Direction read off the sampled differences.
    pub monotonicity: Monotonicity,
    pub end_ratio: f64,
}

#[derive(Serialize)]
struct Sample {
    x: f64,
    g: f64,
}

impl Tabular for (f64, f64) {
    fn header() -> Vec<&'static str> {
        vec!["x", "g"]
    }

    fn record(&self) -> Vec<String> {
        vec![format_number(self.0), format_number(self.1)]
    }
}

fn monotonicity(samples: &[(f64, f64)]) -> Monotonicity {
    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1].1 - w[0].1).collect();
    if diffs.iter().all(|&d| d > 0.0) {
        Monotonicity::Increasing
    } else if diffs.iter().all(|&d| d < 0.0) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::None
    }
}

pub fn density_curve(family: &KernelSpec, samples: usize) -> Result<DensityCurve> {
    if *family != KernelSpec::SobolevMin {
        return Err(Error::InvalidParameter(format!("density plot is defined for sobolev-min, not {family}")));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {samples}")));
    }
    let pair = sobolev_min_eigenpair(1)?;
    let Eigenfunction::ShiftedCosine { alpha, beta } = pair.eigenfunction else {
        return Err(Error::Internal("unexpected eigenfunction shape".into()));
    };
    let scale = pair.value.sqrt().recip();
    let g = |x: f64| scale * pair.eigenfunction.eval(x);
    let points: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let x = i as f64 / (samples - 1) as f64;
            (x, g(x))
        })
        .collect();
    Ok(DensityCurve {
        lambda1: pair.value,
        alpha1: alpha,
        beta1: beta,
        l2_norm_sq: simpson(|x| g(x).powi(2), 0.0, 1.0, DENSITY_QUADRATURE_INTERVALS),
        monotonicity: monotonicity(&points),
        end_ratio: g(1.0) / g(0.0),
        samples: points,
    })
}

impl DensityCurve {
    pub fn to_csv(&self) -> Result<String> {
        super::to_csv(&self.samples)
    }

    pub fn to_svg(&self) -> String {
        let spec = PlotSpec {
            title: "Density g with ||I_g|| = ||APP_1||".into(),
            x_label: "x".into(),
            y_label: "g(x)".into(),
            ..PlotSpec::default()
        };
        line_plot_svg(&self.samples, &spec)
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Report {
            lambda1: f64,
            alpha1: f64,
            beta1: f64,
            l2_norm_sq: f64,
            monotonicity: Monotonicity,
            end_ratio: f64,
            samples: Vec<Sample>,
        }
        let report = Report {
            lambda1: self.lambda1,
            alpha1: self.alpha1,
            beta1: self.beta1,
            l2_norm_sq: self.l2_norm_sq,
            monotonicity: self.monotonicity,
            end_ratio: self.end_ratio,
            samples: self.samples.iter().map(|&(x, g)| Sample { x, g }).collect(),
        };
        serde_json::to_string_pretty(&report).map_err(|e| Error::Internal(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_and_increasing() {
        let c = density_curve(&KernelSpec::SobolevMin, 201).unwrap();
        assert!((c.l2_norm_sq - 1.0).abs() < 1e-6);
        // Brute-force sign check on a finer grid decides the direction.
        let fine = density_curve(&KernelSpec::SobolevMin, 5001).unwrap();
        let rising = fine.samples.windows(2).filter(|w| w[1].1 > w[0].1).count();
        let expected = if rising == 5000 { Monotonicity::Increasing } else { Monotonicity::Decreasing };
        assert_eq!(c.monotonicity, expected);
        assert!((c.end_ratio - 1.0 / c.alpha1.cos()).abs() < 1e-12);
        assert!((c.end_ratio - 1.5334).abs() < 1e-4);
    }

    #[test]
    fn guards() {
        assert!(density_curve(&KernelSpec::SobolevCosh, 10).is_err());
        assert!(density_curve(&KernelSpec::SobolevMin, 1).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let c = density_curve(&KernelSpec::SobolevMin, 17).unwrap();
        let (_, rows) = super::super::parse_csv(&c.to_csv().unwrap()).unwrap();
        for (row, &(x, g)) in rows.iter().zip(&c.samples) {
            assert_eq!(row[0].parse::<f64>().unwrap(), x);
            assert_eq!(row[1].parse::<f64>().unwrap(), g);
        }
    }
}
