//! Quadrature discretization of the integral operator
//! `(T f)(x) = int_0^1 K_1(x, y) f(y) dy`, whose spectrum is the spectrum of
//! `W = S*S` for L2 approximation. Serves as an oracle for the analytic rules.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::quadrature::QuadratureGrid;
use crate::spectra::{EigenSequence, KernelSpec, SpectrumSource};
use crate::{Error, Result};

/// `M_ij = sqrt(w_i w_j) K_1(x_i, x_j)`, exactly symmetric.
pub fn nystrom_matrix(spec: &KernelSpec, grid: &QuadratureGrid) -> Result<DMatrix<f64>> {
    if matches!(spec, KernelSpec::Discrete { .. }) {
        return Err(Error::InvalidParameter("nystrom discretization needs a kernel on [0, 1]".into()));
    }
    let kernel = spec.prepare()?;
    let m = grid.len();
    let x = grid.nodes();
    let root_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let mut mat = DMatrix::zeros(m, m);
    for j in 0..m {
        for i in j..m {
            let v = root_w[i] * root_w[j] * kernel.eval_unchecked(x[i], x[j]);
            mat[(i, j)] = v;
            mat[(j, i)] = v;
        }
    }
    Ok(mat)
}

/// The `count` largest eigenvalues of the Nyström matrix.
pub fn nystrom_spectrum(spec: &KernelSpec, grid: &QuadratureGrid, count: usize) -> Result<EigenSequence> {
    if count == 0 || count > grid.len() {
        return Err(Error::InvalidParameter(format!(
            "requested {count} eigenvalues from a grid of {} nodes",
            grid.len()
        )));
    }
    let mat = nystrom_matrix(spec, grid)?;
    let mut values: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("symmetric eigensolver returned non-finite values".into()));
    }
    values.sort_by(|a, b| b.total_cmp(a));
    values.truncate(count);
    // Discretization can push tiny eigenvalues slightly negative.
    for v in &mut values {
        *v = v.max(0.0);
    }
    let exhaustive = values.contains(&0.0);
    EigenSequence::new(values, SpectrumSource::Numeric, None, exhaustive)
}

/// Extrapolated eigenvalues from a sequence of midpoint grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RichardsonEstimate {
    pub estimates: Vec<f64>,
    /// Per-eigenvalue error estimate, always nonnegative.
    pub error_estimates: Vec<f64>,
    /// Raw eigenvalues per grid size, coarsest first.
    pub levels: Vec<(usize, Vec<f64>)>,
}

impl RichardsonEstimate {
    pub fn sequence(&self) -> Result<EigenSequence> {
        let mut values = self.estimates.clone();
        values.sort_by(|a, b| b.total_cmp(a));
        EigenSequence::new(values, SpectrumSource::Numeric, None, false)
    }
}

/// Richardson extrapolation assuming `O(h^2)` convergence of the midpoint rule.
///
/// With two sizes the error estimate is the raw difference of the levels;
/// with three or more it is the difference of the two finest extrapolants.
pub fn richardson_refine(spec: &KernelSpec, count: usize, sizes: &[usize]) -> Result<RichardsonEstimate> {
    if sizes.len() < 2 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "richardson refinement needs at least two strictly increasing grid sizes".into(),
        ));
    }
    let levels = sizes
        .iter()
        .map(|&m| Ok((m, nystrom_spectrum(spec, &QuadratureGrid::midpoint(m)?, count)?.values().to_vec())))
        .collect::<Result<Vec<_>>>()?;
    let extrapolate = |coarse: &(usize, Vec<f64>), fine: &(usize, Vec<f64>)| -> Vec<f64> {
        let ratio = fine.0 as f64 / coarse.0 as f64;
        let denom = ratio * ratio - 1.0;
        coarse.1.iter().zip(&fine.1).map(|(c, f)| f + (f - c) / denom).collect()
    };
    let extrapolants: Vec<Vec<f64>> = levels.windows(2).map(|w| extrapolate(&w[0], &w[1])).collect();
    let estimates = extrapolants.last().expect("at least one pair").clone();
    let error_estimates = if extrapolants.len() >= 2 {
        let prev = &extrapolants[extrapolants.len() - 2];
        estimates.iter().zip(prev).map(|(a, b)| (a - b).abs()).collect()
    } else {
        let n = levels.len();
        levels[n - 1].1.iter().zip(&levels[n - 2].1).map(|(a, b)| (a - b).abs()).collect()
    };
    Ok(RichardsonEstimate { estimates, error_estimates, levels })
}
