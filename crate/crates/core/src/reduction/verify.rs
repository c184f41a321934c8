use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::problem::{build_ig, DiscreteProblem};
use super::radius::{minimal_error_std, Target};
use crate::Result;

/// Slack allowed in every domination comparison.
pub const DOMINATION_TOL: f64 = 1e-12;

fn gaussian(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationCounterexample {
    pub description: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub n: usize,
    pub error_functional: f64,
    pub error_operator: f64,
    pub pointwise_trials: usize,
    /// Smallest `rhs - lhs` seen in the pointwise check.
    pub min_slack: f64,
    pub counterexamples: Vec<DominationCounterexample>,
}

impl DominationReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks `e_n(I_g, std) <= e_n(S, std)` exactly, and pointwise that the
/// algorithm `f -> sum f(t_j) <f_j, S* g>` induced from any linear algorithm
/// for `S` is no worse on random inputs.
pub fn verify_domination(
    problem: &DiscreteProblem,
    g_coords: &DVector<f64>,
    n: usize,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<DominationReport> {
    let ig = build_ig(problem, g_coords)?;
    let error_functional = minimal_error_std(problem, Target::Functional(&ig), n)?.error;
    let error_operator = minimal_error_std(problem, Target::Operator, n)?.error;
    let mut counterexamples = Vec::new();
    if error_functional > error_operator + DOMINATION_TOL {
        counterexamples.push(DominationCounterexample {
            description: format!("minimal error with {n} function values"),
            lhs: error_functional,
            rhs: error_operator,
        });
    }
    let m = problem.m();
    let n_points = n.min(m);
    let mut min_slack = f64::INFINITY;
    for trial in 0..trials {
        let points = sample(rng, m, n_points).into_vec();
        let fs: Vec<DVector<f64>> = (0..n_points).map(|_| gaussian(rng, m)).collect();
        let mut c = gaussian(rng, m);
        let radius = rng.random::<f64>();
        c *= radius / problem.f_norm(&c);
        let values = problem.function_values(&c);
        let mut approx_s = DVector::zeros(problem.k());
        let mut approx_ig = 0.0;
        for (p, fj) in points.iter().zip(&fs) {
            let sf = problem.apply_s(fj);
            approx_s += &sf * values[*p];
            approx_ig += values[*p] * problem.g_inner(&sf, &ig.g_coords);
        }
        let lhs = (ig.apply(problem, &c) - approx_ig).abs();
        let rhs = problem.g_norm(&(problem.apply_s(&c) - approx_s));
        min_slack = min_slack.min(rhs - lhs);
        if lhs > rhs + DOMINATION_TOL {
            counterexamples.push(DominationCounterexample {
                description: format!("trial {trial}, points {points:?}"),
                lhs,
                rhs,
            });
        }
    }
    Ok(DominationReport { n, error_functional, error_operator, pointwise_trials: trials, min_slack, counterexamples })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct E0Report {
    pub lambda1: f64,
    pub multiplicity: usize,
    /// Largest `| ||g|| - 1 |` and `| e_0(I_g) - sqrt(lambda_1) |` over
    /// `g = lambda_1^{-1/2} S eta` with unit top eigenvectors `eta`.
    pub forward_norm_deviation: f64,
    pub forward_error_deviation: f64,
    /// Number of searched `g` reaching `sqrt(lambda_1)` within `1e-8`.
    pub maximizers_found: usize,
    /// Largest distance of such a `g` from the characterized set.
    pub max_maximizer_distance: f64,
    pub strictness_trials: usize,
    pub strictness_violations: usize,
}

impl E0Report {
    pub fn holds(&self) -> bool {
        self.forward_norm_deviation <= 1e-10
            && self.forward_error_deviation <= 1e-10
            && self.maximizers_found > 0
            && self.max_maximizer_distance <= 1e-6
            && self.strictness_violations == 0
    }
}

/// Checks that `e_0(I_g) = e_0(S)` exactly when `g = lambda_1^{-1/2} S eta`
/// for a unit top eigenvector `eta`.
pub fn verify_e0_characterization(problem: &DiscreteProblem, samples: usize, rng: &mut impl Rng) -> Result<E0Report> {
    let top = problem.top_eigenpair()?;
    let root = top.lambda1.sqrt();
    let mult = top.multiplicity;
    // G-orthonormal basis of S(E_1).
    let image: DMatrix<f64> = problem.operator_s() * &top.eigenspace / root;

    let mut forward_norm_deviation: f64 = 0.0;
    let mut forward_error_deviation: f64 = 0.0;
    for _ in 0..10 {
        let y = gaussian(rng, mult).normalize();
        let g = &image * y;
        forward_norm_deviation = forward_norm_deviation.max((problem.g_norm(&g) - 1.0).abs());
        let e0 = problem.f_norm(&problem.adjoint(&g));
        forward_error_deviation = forward_error_deviation.max((e0 - root).abs());
    }

    let distance = |g: &DVector<f64>| -> f64 {
        let coeffs = image.transpose() * (problem.gram_g() * g);
        let p = &image * coeffs;
        let norm = problem.g_norm(&p);
        if norm == 0.0 {
            return f64::INFINITY;
        }
        problem.g_norm(&(g - p / norm))
    };

    let mut maximizers_found = 0;
    let mut max_maximizer_distance: f64 = 0.0;
    for _ in 0..samples {
        let mut g = gaussian(rng, problem.k());
        g /= problem.g_norm(&g);
        // Power iteration for S S* in G-coordinates.
        for _ in 0..20_000 {
            let mut next = problem.apply_s(&problem.adjoint(&g));
            let norm = problem.g_norm(&next);
            if norm == 0.0 {
                break;
            }
            next /= norm;
            let change = problem.g_norm(&(&next - &g));
            g = next;
            if change < 1e-14 {
                break;
            }
        }
        let e0 = problem.f_norm(&problem.adjoint(&g));
        if e0 >= root * (1.0 - 1e-8) {
            maximizers_found += 1;
            max_maximizer_distance = max_maximizer_distance.max(distance(&g));
        }
    }

    // Components G-orthogonal to S(E_1) strictly lower the initial error.
    let mut strictness_trials = 0;
    let mut strictness_violations = 0;
    if problem.k() > mult {
        for _ in 0..samples.max(10) {
            let mut h = gaussian(rng, problem.k());
            h -= &image * (image.transpose() * (problem.gram_g() * &h));
            let h_norm = problem.g_norm(&h);
            if h_norm < 1e-8 {
                continue;
            }
            let weight: f64 = rng.random_range(0.05..=1.0);
            h *= weight / h_norm;
            let y = gaussian(rng, mult).normalize();
            let g = &image * y * (1.0 - weight * weight).sqrt() + &h;
            let e0_sq = problem.f_inner(&problem.adjoint(&g), &problem.adjoint(&g));
            let bound = top.lambda1 * (1.0 - (1.0 - top.next / top.lambda1) * weight * weight);
            strictness_trials += 1;
            if e0_sq > bound + 1e-12 * top.lambda1 || e0_sq.sqrt() >= root {
                strictness_violations += 1;
            }
        }
    }

    Ok(E0Report {
        lambda1: top.lambda1,
        multiplicity: mult,
        forward_norm_deviation,
        forward_error_deviation,
        maximizers_found,
        max_maximizer_distance,
        strictness_trials,
        strictness_violations,
    })
}
