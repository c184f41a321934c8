use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use super::problem::{DiscreteProblem, Functional};
use crate::{Error, Result};

/// Largest number of point subsets an exhaustive search may visit.
pub const SUBSET_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Operator,
    Functional(&'a Functional),
}

/// `F`-orthonormal basis of `{f : f(p) = 0 for p in points}`, in kernel coefficients.
fn annihilator_basis(problem: &DiscreteProblem, points: &[usize]) -> Result<DMatrix<f64>> {
    let m = problem.m();
    for (i, &p) in points.iter().enumerate() {
        if p >= m {
            return Err(Error::InvalidInput(format!("point index {p} out of range 0..{m}")));
        }
        if points[..i].contains(&p) {
            return Err(Error::InvalidInput(format!("point index {p} repeated")));
        }
    }
    let unit = |i: usize| DVector::from_fn(m, |j, _| if i == j { 1.0 } else { 0.0 });
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m);
    let mut sections = 0;
    let candidates = points.iter().map(|&p| (true, p)).chain((0..m).map(|i| (false, i)));
    for (is_section, i) in candidates {
        let mut v = unit(i);
        let original = problem.f_norm(&v);
        // Classical Gram-Schmidt, run twice for stability.
        for _ in 0..2 {
            for b in &basis {
                let proj = problem.f_inner(b, &v);
                v -= b * proj;
            }
        }
        let norm = problem.f_norm(&v);
        if norm > 1e-10 * original {
            basis.push(v / norm);
            if is_section {
                sections += 1;
            }
        } else if is_section {
            return Err(Error::Numeric("kernel sections at the chosen points are dependent".into()));
        }
        if basis.len() == m {
            break;
        }
    }
    let rest = &basis[sections..];
    let mut z = DMatrix::zeros(m, rest.len());
    for (col, v) in rest.iter().enumerate() {
        z.set_column(col, v);
    }
    Ok(z)
}

/// Radius of information for the fixed points: the worst error of the best
/// algorithm using `f(p)` for `p` in `points`.
pub fn fixed_info_radius(problem: &DiscreteProblem, target: Target<'_>, points: &[usize]) -> Result<f64> {
    let z = annihilator_basis(problem, points)?;
    if z.ncols() == 0 {
        return Ok(0.0);
    }
    match target {
        Target::Operator => {
            let w = problem.w_form();
            let restricted = z.transpose() * &w * &z;
            let restricted = (&restricted + restricted.transpose()) * 0.5;
            let eig = restricted.symmetric_eigen();
            let top = eig.eigenvalues.imax();
            // Rayleigh quotient of the top Ritz vector, second-order accurate.
            let c = &z * eig.eigenvectors.column(top);
            let denom = problem.f_inner(&c, &c);
            let value = if denom > 0.0 { c.dot(&(&w * &c)) / denom } else { eig.eigenvalues[top] };
            Ok(value.max(0.0).sqrt())
        }
        Target::Functional(ig) => {
            if ig.representer.len() != problem.m() {
                return Err(Error::Dimension { expected: problem.m(), got: ig.representer.len() });
            }
            Ok((z.transpose() * (problem.gram_f() * &ig.representer)).norm())
        }
    }
}

/// Best choice of `n` function values and its radius.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalError {
    pub error: f64,
    pub points: Vec<usize>,
    /// Number of subsets whose radius was evaluated.
    pub evaluated: u64,
}

fn is_exchangeable(mat: &DMatrix<f64>) -> bool {
    let n = mat.nrows();
    let scale = mat.abs().max().max(f64::MIN_POSITIVE);
    let diag = mat[(0, 0)];
    let off = if n > 1 { mat[(0, 1)] } else { 0.0 };
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i == j { diag } else { off };
            (mat[(i, j)] - want).abs() <= 1e-12 * scale
        })
    })
}

/// Whether every permutation of the points is a symmetry of the problem and target,
/// so all subsets of the same size have the same radius.
fn fully_symmetric(problem: &DiscreteProblem, target: Target<'_>) -> bool {
    if !is_exchangeable(problem.gram_f()) {
        return false;
    }
    match target {
        Target::Operator => is_exchangeable(&problem.w_form()),
        Target::Functional(ig) => {
            let values = problem.gram_f() * &ig.representer;
            let scale = values.amax().max(f64::MIN_POSITIVE);
            values.iter().all(|v| (v - values[0]).abs() <= 1e-12 * scale)
        }
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `e_n(target, std)` by exhaustive search over `n`-subsets of the domain.
/// Repeated points never help, so `n >= m` reduces to using every point.
pub fn minimal_error_std(problem: &DiscreteProblem, target: Target<'_>, n: usize) -> Result<MinimalError> {
    let m = problem.m();
    let n = n.min(m);
    if fully_symmetric(problem, target) {
        let points: Vec<usize> = (0..n).collect();
        let error = fixed_info_radius(problem, target, &points)?;
        return Ok(MinimalError { error, points, evaluated: 1 });
    }
    let subsets = binomial(m, n);
    if subsets > SUBSET_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "C({m}, {n}) = {subsets} subsets exceeds the limit of {SUBSET_LIMIT}"
        )));
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for subset in (0..m).combinations(n) {
        let r = fixed_info_radius(problem, target, &subset)?;
        if best.as_ref().is_none_or(|(e, _)| r < *e) {
            best = Some((r, subset));
        }
    }
    let (error, points) = best.expect("at least one subset");
    Ok(MinimalError { error, points, evaluated: subsets })
}
