use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result, REL_TIE};

/// Smallest allowed ratio of extreme eigenvalues of the Gram matrices.
const SPD_RATIO: f64 = 1e-12;

/// Finite-dimensional RKHS on `m` points.
///
/// Elements of `F` are written in the kernel basis, `f = sum_i c_i K(., p_i)`,
/// so that `f(p_i) = (K c)_i` and `<f, h>_F = c^T K e`. `S` maps these
/// coefficients to `G`-coordinates, and `G` carries the inner product `gram_g`.
#[derive(Debug, Clone)]
pub struct DiscreteProblem {
    points: Vec<Vec<f64>>,
    gram_f: DMatrix<f64>,
    operator_s: DMatrix<f64>,
    gram_g: DMatrix<f64>,
    chol_f: nalgebra::linalg::Cholesky<f64, nalgebra::Dyn>,
}

fn check_spd(name: &str, mat: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !mat.is_square() || mat.nrows() == 0 {
        return Err(Error::InvalidInput(format!("{name} must be a nonempty square matrix")));
    }
    if mat.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{name} has non-finite entries")));
    }
    let scale = mat.abs().max();
    if (mat - mat.transpose()).abs().max() > 1e-12 * scale {
        return Err(Error::InvalidInput(format!("{name} is not symmetric")));
    }
    let sym = (mat + mat.transpose()) * 0.5;
    let eig = sym.clone().symmetric_eigenvalues();
    if !(eig.min() > SPD_RATIO * eig.max()) {
        return Err(Error::InvalidInput(format!(
            "{name} is not positive definite (eigenvalues in [{:e}, {:e}])",
            eig.min(),
            eig.max()
        )));
    }
    Ok(sym)
}

impl DiscreteProblem {
    pub fn new(
        points: Vec<Vec<f64>>,
        gram_f: DMatrix<f64>,
        operator_s: DMatrix<f64>,
        gram_g: DMatrix<f64>,
    ) -> Result<Self> {
        let gram_f = check_spd("gram_F", &gram_f)?;
        let gram_g = check_spd("gram_G", &gram_g)?;
        let (m, k) = (gram_f.nrows(), gram_g.nrows());
        if points.len() != m {
            return Err(Error::Dimension { expected: m, got: points.len() });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidInput(format!("domain point {i} is repeated")));
            }
        }
        if operator_s.shape() != (k, m) {
            return Err(Error::InvalidInput(format!(
                "operator_S must be {k}x{m}, got {}x{}",
                operator_s.nrows(),
                operator_s.ncols()
            )));
        }
        if operator_s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("operator_S has non-finite entries".into()));
        }
        let chol_f = gram_f.clone().cholesky().ok_or_else(|| Error::Numeric("cholesky of gram_F failed".into()))?;
        let problem = Self { points, gram_f, operator_s, gram_g, chol_f };
        let spectrum = problem.spectrum()?;
        if !(spectrum.values[0] > 0.0) {
            return Err(Error::InvalidInput("operator S is zero".into()));
        }
        Ok(problem)
    }

    /// Problem with points labelled `0, 1, ..., m-1`.
    pub fn from_matrices(gram_f: DMatrix<f64>, operator_s: DMatrix<f64>, gram_g: DMatrix<f64>) -> Result<Self> {
        let points = (0..gram_f.nrows()).map(|i| vec![i as f64]).collect();
        Self::new(points, gram_f, operator_s, gram_g)
    }

    pub fn m(&self) -> usize {
        self.gram_f.nrows()
    }

    pub fn k(&self) -> usize {
        self.gram_g.nrows()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn gram_f(&self) -> &DMatrix<f64> {
        &self.gram_f
    }

    pub fn operator_s(&self) -> &DMatrix<f64> {
        &self.operator_s
    }

    pub fn gram_g(&self) -> &DMatrix<f64> {
        &self.gram_g
    }

    /// `(f(p_1), ..., f(p_m))` for `f` with kernel coefficients `c`.
    pub fn function_values(&self, c: &DVector<f64>) -> DVector<f64> {
        &self.gram_f * c
    }

    pub fn f_inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&(&self.gram_f * b))
    }

    pub fn f_norm(&self, c: &DVector<f64>) -> f64 {
        self.f_inner(c, c).max(0.0).sqrt()
    }

    pub fn g_inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&(&self.gram_g * b))
    }

    pub fn g_norm(&self, g: &DVector<f64>) -> f64 {
        self.g_inner(g, g).max(0.0).sqrt()
    }

    pub fn apply_s(&self, c: &DVector<f64>) -> DVector<f64> {
        &self.operator_s * c
    }

    /// Kernel coefficients of `S* g`: the solution of `K r = S^T G g`.
    pub fn adjoint(&self, g: &DVector<f64>) -> DVector<f64> {
        self.chol_f.solve(&(self.operator_s.transpose() * (&self.gram_g * g)))
    }

    /// Matrix of `<S f, S h>_G` in kernel coefficients: `S^T G S`.
    pub(crate) fn w_form(&self) -> DMatrix<f64> {
        let a = self.operator_s.transpose() * &self.gram_g * &self.operator_s;
        (&a + a.transpose()) * 0.5
    }

    /// All eigenvalues of `W = S*S` (nonincreasing) with `F`-orthonormal
    /// eigenvectors as columns.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let l = self.chol_f.l();
        let l_inv = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("cholesky factor of gram_F is singular".into()))?;
        let c = &l_inv * self.w_form() * l_inv.transpose();
        let c = (&c + c.transpose()) * 0.5;
        let eig = c.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
        let mut vectors = DMatrix::zeros(self.m(), self.m());
        for (col, &i) in order.iter().enumerate() {
            let v = l_inv.transpose() * eig.eigenvectors.column(i);
            vectors.set_column(col, &v);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("eigenvalues of W are not finite".into()));
        }
        Ok(Spectrum { values, vectors })
    }

    pub fn top_eigenpair(&self) -> Result<TopEigenpair> {
        let spectrum = self.spectrum()?;
        let lambda1 = spectrum.values[0];
        let multiplicity = spectrum.values.iter().take_while(|&&v| v >= lambda1 * (1.0 - REL_TIE)).count();
        let eigenspace = spectrum.vectors.columns(0, multiplicity).into_owned();
        Ok(TopEigenpair {
            lambda1,
            eta1: spectrum.vectors.column(0).into_owned(),
            multiplicity,
            eigenspace,
            next: spectrum.values.get(multiplicity).copied().unwrap_or(0.0),
        })
    }

    /// Piecewise constants on the `2^d` dyadic sub-cubes of `[0, 1]^d` with the
    /// L2 norm, `S` the identity. Sub-cubes are represented by their corners in
    /// `{0, 1}^d`; the kernel is `2^d` on the diagonal and zero elsewhere.
    pub fn piecewise_constant(d: usize) -> Result<Self> {
        if d == 0 || d > 12 {
            return Err(Error::ResourceLimit(format!("piecewise-constant instance supports 1 <= d <= 12, got {d}")));
        }
        let m = 1usize << d;
        let points = (0..m).map(|i| (0..d).map(|bit| ((i >> bit) & 1) as f64).collect()).collect();
        let gram = DMatrix::identity(m, m) * m as f64;
        Self::new(points, gram.clone(), DMatrix::identity(m, m), gram)
    }

    /// Random instance with Gram matrices `A^T A + 0.1 I` from standard normal `A`
    /// and a standard normal `k x m` operator.
    pub fn random(rng: &mut impl Rng, m: usize, k: usize) -> Result<Self> {
        let gram_f = random_spd(rng, m);
        let gram_g = random_spd(rng, k);
        let operator_s = DMatrix::from_fn(k, m, |_, _| rng.sample(StandardNormal));
        Self::from_matrices(gram_f, operator_s, gram_g)
    }

    /// Random instance whose `W` has the given nonzero eigenvalues (padded with zeros).
    /// Requires `spectrum.len() <= min(k, m)`.
    pub fn random_with_spectrum(rng: &mut impl Rng, m: usize, k: usize, spectrum: &[f64]) -> Result<Self> {
        let r = spectrum.len();
        if r == 0 || r > k.min(m) || spectrum.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "need 1..={} positive eigenvalues, got {r}",
                k.min(m)
            )));
        }
        let gram_f = random_spd(rng, m);
        let gram_g = random_spd(rng, k);
        let l = gram_f.clone().cholesky().ok_or_else(|| Error::Numeric("cholesky failed".into()))?.l();
        let rg = gram_g.clone().cholesky().ok_or_else(|| Error::Numeric("cholesky failed".into()))?.l();
        let v = random_orthogonal(rng, m);
        let q = random_orthogonal(rng, k);
        // S^T G S = L V diag(spectrum) V^T L^T with S = R^{-T} Q [B0; 0].
        let mut padded = DMatrix::zeros(k, m);
        for (i, value) in spectrum.iter().enumerate() {
            let row = (v.column(i).transpose() * l.transpose()) * value.sqrt();
            padded.set_row(i, &row);
        }
        let rg_t_inv = rg
            .transpose()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("cholesky factor of gram_G is singular".into()))?;
        let operator_s = rg_t_inv * q * padded;
        Self::from_matrices(gram_f, operator_s, gram_g)
    }

    /// Plain-text form: `m k`, then `gram_F`, `operator_S` and `gram_G` row-major.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.m(), self.k());
        for mat in [&self.gram_f, &self.operator_s, &self.gram_g] {
            for i in 0..mat.nrows() {
                let row: Vec<String> = (0..mat.ncols()).map(|j| crate::reports::format_number(mat[(i, j)])).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next_usize = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let m = next_usize("m")?;
        let k = next_usize("k")?;
        let mut values = text.split_whitespace().skip(2).map(|t| {
            t.parse::<f64>().map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))
        });
        let mut read = |rows: usize, cols: usize, name: &str| -> Result<DMatrix<f64>> {
            let mut data = Vec::with_capacity(rows * cols);
            for _ in 0..rows * cols {
                data.push(values.next().ok_or_else(|| Error::Parse(format!("{name} is truncated")))??);
            }
            Ok(DMatrix::from_row_slice(rows, cols, &data))
        };
        let gram_f = read(m, m, "gram_F")?;
        let operator_s = read(k, m, "operator_S")?;
        let gram_g = read(k, k, "gram_G")?;
        if values.next().is_some() {
            return Err(Error::Parse("trailing values after gram_G".into()));
        }
        Self::from_matrices(gram_f, operator_s, gram_g)
    }
}

fn random_spd(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    a.transpose() * a + DMatrix::identity(n, n) * 0.1
}

fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    a.qr().q()
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct TopEigenpair {
    pub lambda1: f64,
    /// `F`-normalized kernel coefficients of a top eigenvector.
    pub eta1: DVector<f64>,
    pub multiplicity: usize,
    /// `F`-orthonormal basis of the top eigenspace (columns).
    pub eigenspace: DMatrix<f64>,
    /// Largest eigenvalue below `lambda1`, or zero.
    pub next: f64,
}

/// `I_g f = <f, S* g>_F = <S f, g>_G` for a unit `g`.
#[derive(Debug, Clone)]
pub struct Functional {
    /// Kernel coefficients of `S* g`.
    pub representer: DVector<f64>,
    pub g_coords: DVector<f64>,
}

impl Functional {
    pub fn apply(&self, problem: &DiscreteProblem, c: &DVector<f64>) -> f64 {
        problem.f_inner(c, &self.representer)
    }

    /// `e_0(I_g) = ||S* g||_F`.
    pub fn initial_error(&self, problem: &DiscreteProblem) -> f64 {
        problem.f_norm(&self.representer)
    }
}

/// Builds `I_g`. `g` within `1e-10` of unit norm is used as is, within `1e-6`
/// it is renormalized, otherwise rejected.
pub fn build_ig(problem: &DiscreteProblem, g_coords: &DVector<f64>) -> Result<Functional> {
    if g_coords.len() != problem.k() {
        return Err(Error::Dimension { expected: problem.k(), got: g_coords.len() });
    }
    let norm = problem.g_norm(g_coords);
    let g = if (norm - 1.0).abs() <= 1e-10 {
        g_coords.clone()
    } else if (norm - 1.0).abs() <= 1e-6 {
        g_coords / norm
    } else {
        return Err(Error::InvalidInput(format!("g must have unit G-norm, got {norm}")));
    };
    Ok(Functional { representer: problem.adjoint(&g), g_coords: g })
}
