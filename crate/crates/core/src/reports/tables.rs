use serde::{Deserialize, Serialize};

use crate::complexity::{
    check_goodcase_sobolev_min, classify, count_info_complexity_all, en_all, ComplexityQuery, ComplexityResult,
    TractabilityReport,
};
use crate::nystrom::{nystrom_spectrum, richardson_refine};
use crate::quadrature::QuadratureGrid;
use crate::roots::{analytic_decay, analytic_eigenpair, analytic_eigenvalues, analytic_eigenvalues_above};
use crate::spectra::{Eigenfunction, KernelSpec};
use crate::{Error, Result};

/// 17 significant digits, enough to round-trip every `f64`.
pub fn format_number(value: f64) -> String {
    format!("{value:.16e}")
}

fn format_optional(value: Option<f64>) -> String {
    value.map(format_number).unwrap_or_default()
}

/// A row type with a fixed CSV header.
pub trait Tabular {
    fn header() -> Vec<&'static str>;
    fn record(&self) -> Vec<String>;
}

pub fn to_csv<T: Tabular>(rows: &[T]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    writer.write_record(T::header()).map_err(io)?;
    for row in rows {
        writer.write_record(row.record()).map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// Header and records of a CSV table.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(String::from).collect()).map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<_>>()?;
    Ok((header, rows))
}

/// `alpha` and `beta` are filled for the min-kernel family, where
/// `eta_j = beta_j cos(alpha_j x - alpha_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub j: usize,
    pub alpha: Option<f64>,
    pub lambda: f64,
    pub beta: Option<f64>,
}

impl Tabular for EigenRow {
    fn header() -> Vec<&'static str> {
        vec!["j", "alpha", "lambda", "beta"]
    }

    fn record(&self) -> Vec<String> {
        vec![self.j.to_string(), format_optional(self.alpha), format_number(self.lambda), format_optional(self.beta)]
    }
}

pub fn eigs_table(family: &KernelSpec, count: usize) -> Result<Vec<EigenRow>> {
    let values = analytic_eigenvalues(family, count)?;
    (1..=count)
        .map(|j| {
            let pair = analytic_eigenpair(family, j)?;
            let (alpha, beta) = match pair.eigenfunction {
                Eigenfunction::ShiftedCosine { alpha, beta } => (Some(alpha), Some(beta)),
                _ => (None, None),
            };
            Ok(EigenRow { j, alpha, lambda: values.values()[j - 1], beta })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub j: usize,
    pub nystrom: f64,
    pub extrapolated: Option<f64>,
    pub error_estimate: Option<f64>,
    pub analytic: Option<f64>,
    pub relative_error: Option<f64>,
}

impl Tabular for OracleRow {
    fn header() -> Vec<&'static str> {
        vec!["j", "nystrom", "extrapolated", "error_estimate", "analytic", "relative_error"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.j.to_string(),
            format_number(self.nystrom),
            format_optional(self.extrapolated),
            format_optional(self.error_estimate),
            format_optional(self.analytic),
            format_optional(self.relative_error),
        ]
    }
}

/// Nyström eigenvalues on a midpoint grid of `m` nodes, optionally sharpened by
/// Richardson extrapolation from grids `m/4`, `m/2`, `m`, and compared with the
/// closed form when one exists.
pub fn oracle_table(family: &KernelSpec, m: usize, count: usize, extrapolate: bool) -> Result<Vec<OracleRow>> {
    let best = |raw: f64, extra: Option<f64>| extra.unwrap_or(raw);
    let (raw, richardson) = if extrapolate {
        if m < 8 {
            return Err(Error::InvalidParameter("extrapolation needs at least 8 nodes".into()));
        }
        let r = richardson_refine(family, count, &[m / 4, m / 2, m])?;
        (r.levels.last().expect("three levels").1.clone(), Some(r))
    } else {
        (nystrom_spectrum(family, &QuadratureGrid::midpoint(m)?, count)?.values().to_vec(), None)
    };
    let analytic = analytic_eigenvalues(family, count).ok();
    Ok(raw
        .iter()
        .enumerate()
        .map(|(i, &nystrom)| {
            let extrapolated = richardson.as_ref().map(|r| r.estimates[i]);
            let exact = analytic.as_ref().map(|a| a.values()[i]);
            OracleRow {
                j: i + 1,
                nystrom,
                extrapolated,
                error_estimate: richardson.as_ref().map(|r| r.error_estimates[i]),
                analytic: exact,
                relative_error: exact.map(|e| (best(nystrom, extrapolated) - e).abs() / e),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub family: String,
    pub d: usize,
    pub eps: f64,
    pub result: ComplexityResult,
    /// `e_n(S_d, all) / e_0(S_d)` at the returned `n`.
    pub normalized_error: f64,
}

impl Tabular for ComplexityRow {
    fn header() -> Vec<&'static str> {
        vec!["family", "d", "eps", "count", "saturated", "truncation_index", "normalized_error"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            self.d.to_string(),
            format_number(self.eps),
            self.result.count.to_string(),
            self.result.saturated.to_string(),
            self.result.truncation_index.to_string(),
            format_number(self.normalized_error),
        ]
    }
}

/// Largest univariate list the CLI will generate for one counting query.
const MAX_UNIVARIATE: usize = 1_000_000;

/// `n(eps, S_d, all)` for each `d` in `dims`.
pub fn complexity_report(family: &KernelSpec, eps: f64, dims: &[usize]) -> Result<Vec<ComplexityRow>> {
    dims.iter()
        .map(|&d| {
            let query = ComplexityQuery::all(eps, d)?;
            let lambda1 = analytic_eigenvalues(family, 1)?.lambda1();
            let eigs = analytic_eigenvalues_above(family, eps * eps * lambda1, MAX_UNIVARIATE)?;
            let result = count_info_complexity_all(&eigs, &query)?;
            let normalized_error =
                if result.saturated { f64::NAN } else { normalized_en(family, d, result.count, eps * eps * lambda1)? };
            Ok(ComplexityRow { family: family.to_string(), d, eps, result, normalized_error })
        })
        .collect()
}

/// `e_n(S_d) / e_0(S_d)`, deepening the univariate list until the
/// `(n+1)`-th product is resolved. `NaN` if it never is within the limits.
fn normalized_en(family: &KernelSpec, d: usize, n: u64, start_floor: f64) -> Result<f64> {
    let mut floor = start_floor;
    for _ in 0..8 {
        let eigs = analytic_eigenvalues_above(family, floor, MAX_UNIVARIATE)?;
        match en_all(&eigs, d, n) {
            Ok(e) => return Ok(e / eigs.lambda1().powf(d as f64 / 2.0)),
            Err(Error::Truncation { .. }) => floor *= 0.25,
            Err(Error::ResourceLimit(_)) => return Ok(f64::NAN),
            Err(e) => return Err(e),
        }
    }
    Ok(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub family: String,
    #[serde(flatten)]
    pub report: TractabilityReport,
}

impl Tabular for ClassificationRow {
    fn header() -> Vec<&'static str> {
        vec!["family", "lambda1", "lambda2", "decay", "qpt_exponent", "all", "std", "goodcase"]
    }

    fn record(&self) -> Vec<String> {
        let r = &self.report;
        vec![
            self.family.clone(),
            format_number(r.lambda1),
            format_number(r.lambda2),
            format_number(r.decay),
            format_optional(r.qpt_exponent),
            label(&r.classification_all),
            label(&r.classification_std),
            r.goodcase_holds.map(|g| g.to_string()).unwrap_or_default(),
        ]
    }
}

/// Serialized name of a unit enum variant.
fn label<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

/// Decision-table classification of an analytic family. The shape condition on
/// the top eigenfunction is evaluated for the min-kernel space only.
pub fn classification_report(family: &KernelSpec) -> Result<ClassificationRow> {
    let eigs = analytic_eigenvalues(family, 2)?;
    let decay = analytic_decay(family)
        .ok_or_else(|| Error::InvalidParameter(format!("no known decay for {family}")))?;
    let goodcase = match family {
        KernelSpec::SobolevMin => Some(check_goodcase_sobolev_min(&analytic_eigenpair(family, 1)?.eigenfunction)),
        _ => None,
    };
    let report = classify(eigs.lambda1(), eigs.lambda2().unwrap_or(0.0), decay, goodcase)?;
    Ok(ClassificationRow { family: family.to_string(), report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for v in [1.0 / 3.0, 1.351033879, f64::MIN_POSITIVE, 1e300, -2.5e-17, 0.0] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn eigs_csv_round_trip() {
        let rows = eigs_table(&KernelSpec::SobolevMin, 5).unwrap();
        let text = to_csv(&rows).unwrap();
        assert!(!text.contains('\r'));
        let (header, records) = parse_csv(&text).unwrap();
        assert_eq!(header, ["j", "alpha", "lambda", "beta"]);
        for (row, rec) in rows.iter().zip(&records) {
            assert_eq!(rec[2].parse::<f64>().unwrap(), row.lambda);
            assert_eq!(rec[1].parse::<f64>().unwrap(), row.alpha.unwrap());
        }
        assert!((rows[0].lambda - 1.35103388).abs() < 1e-8);
        assert!((rows[1].lambda - 0.08521617).abs() < 1e-8);
    }

    #[test]
    fn eigs_other_families() {
        let rows = eigs_table(&KernelSpec::Korobov { alpha: 1.0, beta: 1.0 }, 3).unwrap();
        assert!(rows.iter().all(|r| r.lambda == 1.0 && r.alpha.is_none()));
        let rows = eigs_table(&KernelSpec::SobolevCosh, 2).unwrap();
        assert!((rows[1].lambda - 0.091999668).abs() < 1e-9);
        assert!(eigs_table(&KernelSpec::BrownianMin, 2).is_err());
    }

    #[test]
    fn classification_rows() {
        let row = classification_report(&KernelSpec::SobolevMin).unwrap();
        assert_eq!(row.report.qpt_exponent, Some(1.0));
        assert_eq!(row.record()[5], "qpt-not-pt");
        assert_eq!(row.record()[6], "curse");
        let tied = classification_report(&KernelSpec::Korobov { alpha: 1.0, beta: 1.0 }).unwrap();
        assert_eq!(tied.record()[5], "curse");
    }

    #[test]
    fn complexity_rows() {
        let rows = complexity_report(&KernelSpec::Korobov { alpha: 1.0, beta: 0.5 }, 0.6, &[1, 2]).unwrap();
        assert_eq!(rows[0].result.count, 3);
        assert!(rows.iter().all(|r| r.normalized_error <= 0.6));
    }
}
