//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Tolerances are fixed below.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tractability::complexity::{
    brute_force_count, check_goodcase, check_goodcase_sobolev_min, classify, count_info_complexity_all,
    estimate_decay, integration_initial_error_sq, qpt_exponent, AllClass, ComplexityQuery, StdClass,
};
use tractability::nystrom::{nystrom_spectrum, richardson_refine};
use tractability::quadrature::QuadratureGrid;
use tractability::reduction::{
    build_ig, minimal_error_std, verify_domination, verify_e0_characterization, DiscreteProblem, Target,
};
use tractability::reports::{density_curve, Monotonicity};
use tractability::roots::{
    analytic_eigenpair, analytic_eigenvalues, analytic_eigenvalues_above, sobolev_min_normalizer, solve_cot_root,
};
use tractability::spectra::KernelSpec;

const SEED: u64 = 0x7ac7_ab1e;

const TOL_MIN_EIGS: f64 = 1e-7;
const TOL_NYSTROM_REL: f64 = 1e-3;
const TOL_RICHARDSON: f64 = 1e-5;
const TOL_COSH: f64 = 1e-9;
const TOL_QPT_KOROBOV: f64 = 1e-12;
const TOL_PIECEWISE: f64 = 1e-12;
const TOL_MAXIMIZER: f64 = 1e-6;
const TOL_INT_SQ: f64 = 1e-8;
const TOL_RATIO: f64 = 1e-6;
const TOL_DENSITY_NORM: f64 = 1e-6;
const TOL_DECAY: f64 = 0.05;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lambda(j: usize) -> f64 {
    solve_cot_root(j).unwrap().powi(-2)
}

fn min_kernel_eigenvalues() -> Outcome {
    let (l1, l2) = (lambda(1), lambda(2));
    check(
        (l1 - 1.35103388).abs() <= TOL_MIN_EIGS && (l2 - 0.08521617).abs() <= TOL_MIN_EIGS,
        format!("lambda_1 = {l1:.12}, lambda_2 = {l2:.12}"),
    )
}

fn oracle_agreement() -> Outcome {
    let grid = QuadratureGrid::midpoint(2000).unwrap();
    let mut worst: f64 = 0.0;
    for family in [KernelSpec::SobolevMin, KernelSpec::SobolevCosh, KernelSpec::Korobov { alpha: 1.0, beta: 0.5 }] {
        let numeric = nystrom_spectrum(&family, &grid, 5).unwrap();
        let exact = analytic_eigenvalues(&family, 5).unwrap();
        for (n, e) in numeric.values().iter().zip(exact.values()) {
            worst = worst.max((n - e).abs() / e);
        }
    }
    let refined = richardson_refine(&KernelSpec::SobolevMin, 2, &[250, 500, 1000]).unwrap();
    let r_err = (refined.estimates[0] - lambda(1)).abs().max((refined.estimates[1] - lambda(2)).abs());
    check(
        worst <= TOL_NYSTROM_REL && r_err <= TOL_RICHARDSON,
        format!("max relative Nystrom error {worst:.2e}, Richardson error {r_err:.2e}"),
    )
}

fn cosh_second_eigenvalue() -> Outcome {
    let l2 = analytic_eigenvalues(&KernelSpec::SobolevCosh, 2).unwrap().values()[1];
    let closed = 1.0 / (1.0 + PI * PI);
    check(
        (l2 - closed).abs() <= TOL_COSH && (l2 - 0.091999668).abs() <= TOL_COSH,
        format!("lambda_2 = {l2:.12}"),
    )
}

fn qpt_exponents() -> Outcome {
    let t_min = qpt_exponent(lambda(1), lambda(2), 2.0).unwrap();
    let side = 2.0 / (lambda(1) / lambda(2)).ln();
    let mut worst: f64 = 0.0;
    for (alpha, beta) in [(1.0, 0.5), (0.75, 0.9), (2.0, 0.1), (1.5, 0.05), (0.6, 0.99)] {
        let got = qpt_exponent(1.0, beta, 2.0 * alpha).unwrap();
        let want = f64::max(1.0 / alpha, 2.0 / (1.0 / beta).ln());
        worst = worst.max((got - want).abs());
    }
    check(
        t_min == 1.0 && side < 0.73 && worst <= TOL_QPT_KOROBOV,
        format!("min kernel t* = {t_min} (gap term {side:.4}), Korobov max deviation {worst:.1e}"),
    )
}

fn counting_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cases = 0;
    let mut mismatches = Vec::new();
    for round in 0..150 {
        let family = match round % 3 {
            0 => KernelSpec::SobolevMin,
            1 => KernelSpec::SobolevCosh,
            _ => KernelSpec::korobov(rng.random_range(0.6..2.5), rng.random_range(0.05..=1.0)).unwrap(),
        };
        let d = rng.random_range(1..=4);
        let eps = f64::from(rng.random_range(1..=9u32)) / 10.0;
        let lambda1 = analytic_eigenvalues(&family, 1).unwrap().lambda1();
        let eigs = analytic_eigenvalues_above(&family, eps * eps * lambda1, 10_000).unwrap();
        let query = ComplexityQuery::all(eps, d).unwrap();
        let fast = count_info_complexity_all(&eigs, &query).unwrap().count;
        let slow = brute_force_count(&eigs, &query).unwrap().count;
        cases += 1;
        if fast != slow {
            mismatches.push(format!("{family} d={d} eps={eps}: {fast} vs {slow}"));
        }
    }
    check(mismatches.is_empty() && cases >= 100, format!("{cases} cases, mismatches {mismatches:?}"))
}

fn curse_lower_bound() -> Outcome {
    let family = KernelSpec::Korobov { alpha: 1.0, beta: 1.0 };
    let mut smallest_ratio = f64::INFINITY;
    for d in 1..=12usize {
        for eps in [0.1, 0.5, 0.9] {
            let eigs = analytic_eigenvalues_above(&family, eps * eps, 10_000).unwrap();
            let r = count_info_complexity_all(&eigs, &ComplexityQuery::all(eps, d).unwrap()).unwrap();
            let ratio = if r.saturated { f64::INFINITY } else { r.count as f64 / 2f64.powi(d as i32) };
            smallest_ratio = smallest_ratio.min(ratio);
        }
    }
    check(smallest_ratio >= 1.0, format!("min count / 2^d = {smallest_ratio}"))
}

fn piecewise_constants() -> Outcome {
    let mut functional_dev: f64 = 0.0;
    let mut operator_exact = true;
    for d in 1..=4usize {
        let problem = DiscreteProblem::piecewise_constant(d).unwrap();
        let m = 1usize << d;
        let ig = build_ig(&problem, &DVector::from_element(m, 1.0 / m as f64)).unwrap();
        for n in 0..=m {
            let closed = (1.0 - n as f64 * 0.5f64.powi(d as i32)).sqrt();
            let got = minimal_error_std(&problem, Target::Functional(&ig), n).unwrap().error;
            functional_dev = functional_dev.max((got - closed).abs());
            if n < m {
                operator_exact &= minimal_error_std(&problem, Target::Operator, n).unwrap().error == 1.0;
            }
        }
    }
    check(
        functional_dev <= TOL_PIECEWISE && operator_exact,
        format!("max deviation {functional_dev:.1e}, operator radius exactly 1: {operator_exact}"),
    )
}

fn domination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut counterexamples = 0;
    let mut min_slack = f64::INFINITY;
    for _ in 0..100 {
        let m = rng.random_range(1..=6);
        let k = rng.random_range(1..=4);
        let n = rng.random_range(0..=2);
        let problem = DiscreteProblem::random(&mut rng, m, k).unwrap();
        let mut g = DVector::from_fn(k, |_, _| rng.random::<f64>() - 0.5);
        g /= problem.g_norm(&g);
        let report = verify_domination(&problem, &g, n, 50, &mut rng).unwrap();
        counterexamples += report.counterexamples.len();
        min_slack = min_slack.min(report.min_slack);
    }
    check(counterexamples == 0, format!("{counterexamples} counterexamples, smallest pointwise slack {min_slack:.2e}"))
}

fn e0_characterization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut failures = Vec::new();
    let mut max_distance: f64 = 0.0;
    let mut maximizers = 0;
    for instance in 0..20 {
        let multiplicity = [1, 2, 4][instance % 3];
        let top = rng.random_range(0.5..4.0);
        let mut spectrum = vec![top; multiplicity];
        spectrum.push(top * rng.random_range(0.05..0.7));
        let problem = DiscreteProblem::random_with_spectrum(&mut rng, 6, 5, &spectrum).unwrap();
        let report = verify_e0_characterization(&problem, 12, &mut rng).unwrap();
        max_distance = max_distance.max(report.max_maximizer_distance);
        maximizers += report.maximizers_found;
        if !report.holds() || report.multiplicity != multiplicity {
            failures.push(instance);
        }
    }
    check(
        failures.is_empty() && max_distance <= TOL_MAXIMIZER,
        format!("{maximizers} maximizers, max distance {max_distance:.1e}, failed instances {failures:?}"),
    )
}

fn initial_error_ratio() -> Outcome {
    let int_sq = integration_initial_error_sq(&KernelSpec::SobolevMin, 512).unwrap();
    let ratio = lambda(1) / int_sq;
    check(
        (int_sq - 4.0 / 3.0).abs() <= TOL_INT_SQ && (ratio - 0.75 * 1.35103388).abs() <= TOL_RATIO,
        format!("e_0(INT_1)^2 = {int_sq:.12}, lambda_1 / (4/3) = {ratio:.8}"),
    )
}

fn density_figure() -> Outcome {
    let curve = density_curve(&KernelSpec::SobolevMin, 257).unwrap();
    let again = density_curve(&KernelSpec::SobolevMin, 257).unwrap();
    // Independent evaluation of g_1 and a brute-force sign check of its increments.
    let alpha = solve_cot_root(1).unwrap();
    let beta = sobolev_min_normalizer(alpha);
    let g = |x: f64| lambda(1).powf(-0.5) * beta * (alpha * x - alpha).cos();
    let steps: Vec<f64> = (0..4000).map(|i| g((i + 1) as f64 / 4000.0) - g(i as f64 / 4000.0)).collect();
    let oracle = if steps.iter().all(|&s| s > 0.0) {
        Monotonicity::Increasing
    } else if steps.iter().all(|&s| s < 0.0) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::None
    };
    let samples_match = curve.samples.iter().all(|&(x, v)| (v - g(x)).abs() <= 1e-14);
    let ratio_ok = (curve.end_ratio - 1.0 / alpha.cos()).abs() <= 1e-12 && (curve.end_ratio - 1.5334).abs() < 1e-4;
    let identical = curve.to_svg() == again.to_svg() && curve.to_csv().unwrap() == again.to_csv().unwrap();
    check(
        (curve.l2_norm_sq - 1.0).abs() <= TOL_DENSITY_NORM
            && oracle != Monotonicity::None
            && curve.monotonicity == oracle
            && samples_match
            && ratio_ok
            && identical,
        format!(
            "int g^2 = {:.12}, direction {:?} (oracle {:?}), g(1)/g(0) = {:.6}, identical output {identical}",
            curve.l2_norm_sq, curve.monotonicity, oracle, curve.end_ratio
        ),
    )
}

fn decay_estimates() -> Outcome {
    let min = estimate_decay(&analytic_eigenvalues(&KernelSpec::SobolevMin, 200).unwrap(), 20..=200).unwrap();
    let mut detail = format!("min kernel {min:.4}");
    let mut ok = (min - 2.0).abs() <= TOL_DECAY;
    for alpha in [0.75, 1.0, 1.5] {
        let eigs = analytic_eigenvalues(&KernelSpec::korobov(alpha, 0.5).unwrap(), 200).unwrap();
        let est = estimate_decay(&eigs, 20..=200).unwrap();
        ok &= (est - 2.0 * alpha).abs() <= TOL_DECAY;
        detail += &format!(", Korobov alpha={alpha}: {est:.4}");
    }
    check(ok, detail)
}

fn goodcase_and_classification() -> Outcome {
    let eta1 = analytic_eigenpair(&KernelSpec::SobolevMin, 1).unwrap().eigenfunction;
    let holds = check_goodcase_sobolev_min(&eta1);
    let a = 0.7;
    let sections_rejected = [0.0, 0.25, 0.5, 1.0].iter().all(|&t| !check_goodcase(|x| a * (1.0 + f64::min(x, t))));
    let report = classify(lambda(1), lambda(2), 2.0, Some(holds)).unwrap();
    let ok = holds
        && sections_rejected
        && report.classification_all == AllClass::QptNotPt
        && report.qpt_exponent == Some(1.0)
        && report.classification_std == StdClass::Curse;
    check(
        ok,
        format!(
            "goodcase(eta_1) = {holds}, sections rejected {sections_rejected}, all: {:?} t* = {:?}, std: {:?}",
            report.classification_all, report.qpt_exponent, report.classification_std
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "min-kernel eigenvalues", min_kernel_eigenvalues),
        (2, "Nystrom oracle agreement and Richardson refinement", oracle_agreement),
        (3, "cosh-kernel lambda_2", cosh_second_eigenvalue),
        (4, "QPT exponents", qpt_exponents),
        (5, "DFS counting equals brute force", counting_equivalence),
        (6, "curse lower bound for tied Korobov spectrum", curse_lower_bound),
        (7, "piecewise-constant closed form", piecewise_constants),
        (8, "functional error dominated by operator error", domination),
        (9, "initial-error maximizers", e0_characterization),
        (10, "integration versus approximation initial error", initial_error_ratio),
        (11, "density curve", density_figure),
        (12, "decay estimation", decay_estimates),
        (13, "goodcase checker and classification", goodcase_and_classification),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {name} [{secs:.2}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name} [{secs:.2}s]: {detail}");
            }
        }
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
