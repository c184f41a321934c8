use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tractability::reduction::{verify_domination, verify_e0_characterization, DiscreteProblem};
use tractability::reports::{
    classification_report, complexity_report, density_curve, eigs_table, format_number, line_plot_svg,
    oracle_table, reproduce, to_csv, PlotSpec, ReproduceOptions, Tabular,
};
use tractability::spectra::KernelSpec;

use crate::config::ConfigFile;
use crate::{Cli, CliError, Command, FamilyArgs, Format};

struct Context {
    cfg: ConfigFile,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
}

impl Context {
    fn write(&self, content: &str) -> Result<(), CliError> {
        write_to(self.out.as_deref(), content)
    }

    fn require_format(&self, allowed: &[Format], command: &str) -> Result<(), CliError> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(CliError::Usage(format!("{command} does not support --format {:?}", self.format).to_lowercase()))
        }
    }
}

fn write_to(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Io(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::Io(e.to_string()))
}

fn family(args: &FamilyArgs, cfg: &ConfigFile, default: &str) -> Result<KernelSpec, CliError> {
    let name: String = cfg.pick(args.family.clone(), "family", default.to_string())?;
    let spec = match name.as_str() {
        "sobolev-min" => KernelSpec::SobolevMin,
        "sobolev-cosh" => KernelSpec::SobolevCosh,
        "brownian-min" => KernelSpec::BrownianMin,
        "korobov" => KernelSpec::Korobov {
            alpha: cfg.pick_required(args.alpha, "alpha")?,
            beta: cfg.pick_required(args.beta, "beta")?,
        },
        "sobolev-distance" => KernelSpec::SobolevDistance { anchor: cfg.pick(args.anchor, "anchor", 0.0)? },
        other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| CliError::Usage(format!("bad {what} entry {t:?}"))))
        .collect()
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let ctx = Context {
        seed: cfg.pick(cli.seed, "seed", 0)?,
        out: match cli.out {
            Some(p) => Some(p),
            None => cfg.get::<PathBuf>("out")?,
        },
        format: cfg.pick(cli.format, "format", Format::Json)?,
        cfg,
    };
    match &cli.command {
        Command::Eigs { family: f, count } => eigs(&ctx, f, *count),
        Command::OracleEigs { family: f, nodes, count, extrapolate } => oracle(&ctx, f, *nodes, *count, *extrapolate),
        Command::Complexity { family: f, eps, d } => complexity(&ctx, f, *eps, d.as_deref()),
        Command::Classify { family: f } => classify(&ctx, f),
        Command::Density { family: f, samples, svg } => density(&ctx, f, *samples, svg.as_deref()),
        Command::VerifyThm1 { problem, instances, m, k, n, trials } => {
            verify(&ctx, problem.as_deref(), *instances, *m, *k, *n, *trials)
        }
        Command::Reproduce { only, perturb } => run_reproduce(&ctx, only.as_deref(), *perturb),
    }
}

fn eigs(ctx: &Context, f: &FamilyArgs, count: Option<usize>) -> Result<(), CliError> {
    let spec = family(f, &ctx.cfg, "sobolev-min")?;
    let count = ctx.cfg.pick(count, "count", 10)?;
    let rows = eigs_table(&spec, count)?;
    let content = match ctx.format {
        Format::Json => json(&rows)?,
        Format::Csv => to_csv(&rows)?,
        Format::Svg => {
            let points: Vec<(f64, f64)> =
                rows.iter().filter(|r| r.lambda > 0.0).map(|r| (r.j as f64, r.lambda.log10())).collect();
            let plot = PlotSpec {
                title: format!("Eigenvalues of {spec}"),
                x_label: "j".into(),
                y_label: "log10 lambda_j".into(),
                ..PlotSpec::default()
            };
            line_plot_svg(&points, &plot)
        }
    };
    ctx.write(&content)
}

fn oracle(
    ctx: &Context,
    f: &FamilyArgs,
    nodes: Option<usize>,
    count: Option<usize>,
    extrapolate: bool,
) -> Result<(), CliError> {
    ctx.require_format(&[Format::Json, Format::Csv], "oracle-eigs")?;
    let spec = family(f, &ctx.cfg, "sobolev-min")?;
    let nodes = ctx.cfg.pick(nodes, "nodes", 1000)?;
    let count = ctx.cfg.pick(count, "count", 5)?;
    let extrapolate = extrapolate || ctx.cfg.get::<bool>("extrapolate")?.unwrap_or(false);
    let rows = oracle_table(&spec, nodes, count, extrapolate)?;
    ctx.write(&if ctx.format == Format::Csv { to_csv(&rows)? } else { json(&rows)? })
}

fn complexity(ctx: &Context, f: &FamilyArgs, eps: Option<f64>, d: Option<&str>) -> Result<(), CliError> {
    let spec = family(f, &ctx.cfg, "sobolev-min")?;
    let eps = ctx.cfg.pick_required(eps, "eps")?;
    let dims_text: String = ctx.cfg.pick(d.map(String::from), "d", "1".to_string())?;
    let dims: Vec<usize> = parse_list(&dims_text, "d")?;
    let rows = complexity_report(&spec, eps, &dims)?;
    let content = match ctx.format {
        Format::Json => json(&rows)?,
        Format::Csv => to_csv(&rows)?,
        Format::Svg => {
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.d as f64, (r.result.count as f64).log10())).collect();
            let plot = PlotSpec {
                title: format!("Information complexity of {spec}, eps = {eps}"),
                x_label: "d".into(),
                y_label: "log10 n(eps, d)".into(),
                ..PlotSpec::default()
            };
            line_plot_svg(&points, &plot)
        }
    };
    ctx.write(&content)
}

fn classify(ctx: &Context, f: &FamilyArgs) -> Result<(), CliError> {
    ctx.require_format(&[Format::Json, Format::Csv], "classify")?;
    let spec = family(f, &ctx.cfg, "sobolev-min")?;
    let row = classification_report(&spec)?;
    ctx.write(&if ctx.format == Format::Csv { to_csv(std::slice::from_ref(&row))? } else { json(&row)? })
}

fn density(ctx: &Context, f: &FamilyArgs, samples: Option<usize>, svg: Option<&Path>) -> Result<(), CliError> {
    let spec = family(f, &ctx.cfg, "sobolev-min")?;
    let samples = ctx.cfg.pick(samples, "samples", 201)?;
    let curve = density_curve(&spec, samples)?;
    let content = match ctx.format {
        Format::Json => curve.to_json()? + "\n",
        Format::Csv => curve.to_csv()?,
        Format::Svg => curve.to_svg(),
    };
    ctx.write(&content)?;
    let svg_path = match (svg, &ctx.out) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(out)) if ctx.format == Format::Csv => Some(out.with_extension("svg")),
        _ => None,
    };
    if let Some(path) = svg_path {
        write_to(Some(&path), &curve.to_svg())?;
    }
    eprintln!(
        "int_0^1 g^2 = {} ({} Simpson nodes), direction {:?}",
        format_number(curve.l2_norm_sq),
        tractability::reports::DENSITY_QUADRATURE_INTERVALS + 1,
        curve.monotonicity
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    instance: usize,
    m: usize,
    k: usize,
    n: usize,
    error_functional: f64,
    error_operator: f64,
    counterexamples: usize,
    min_slack: f64,
    multiplicity: usize,
    maximizers_found: usize,
    max_maximizer_distance: f64,
    e0_holds: bool,
}

impl Tabular for VerifyRow {
    fn header() -> Vec<&'static str> {
        vec![
            "instance",
            "m",
            "k",
            "n",
            "error_functional",
            "error_operator",
            "counterexamples",
            "min_slack",
            "multiplicity",
            "maximizers_found",
            "max_maximizer_distance",
            "e0_holds",
        ]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.instance.to_string(),
            self.m.to_string(),
            self.k.to_string(),
            self.n.to_string(),
            format_number(self.error_functional),
            format_number(self.error_operator),
            self.counterexamples.to_string(),
            format_number(self.min_slack),
            self.multiplicity.to_string(),
            self.maximizers_found.to_string(),
            format_number(self.max_maximizer_distance),
            self.e0_holds.to_string(),
        ]
    }
}

fn verify(
    ctx: &Context,
    problem_path: Option<&Path>,
    instances: Option<usize>,
    m: Option<usize>,
    k: Option<usize>,
    n: Option<usize>,
    trials: Option<usize>,
) -> Result<(), CliError> {
    ctx.require_format(&[Format::Json, Format::Csv], "verify-thm1")?;
    let cfg = &ctx.cfg;
    let n = cfg.pick(n, "n", 2)?;
    let trials = cfg.pick(trials, "trials", 100)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let problems: Vec<DiscreteProblem> = match problem_path.map(PathBuf::from).or(cfg.get("problem")?) {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
            vec![DiscreteProblem::from_text(&text)?]
        }
        None => {
            let (m, k) = (cfg.pick(m, "m", 5)?, cfg.pick(k, "k", 3)?);
            (0..cfg.pick(instances, "instances", 10)?)
                .map(|_| DiscreteProblem::random(&mut rng, m, k))
                .collect::<Result<_, _>>()?
        }
    };
    let mut rows = Vec::with_capacity(problems.len());
    for (instance, problem) in problems.iter().enumerate() {
        let mut g = DVector::from_fn(problem.k(), |_, _| rng.random::<f64>() - 0.5);
        g /= problem.g_norm(&g);
        let dom = verify_domination(problem, &g, n, trials, &mut rng)?;
        let e0 = verify_e0_characterization(problem, 10, &mut rng)?;
        rows.push(VerifyRow {
            instance,
            m: problem.m(),
            k: problem.k(),
            n,
            error_functional: dom.error_functional,
            error_operator: dom.error_operator,
            counterexamples: dom.counterexamples.len(),
            min_slack: dom.min_slack,
            multiplicity: e0.multiplicity,
            maximizers_found: e0.maximizers_found,
            max_maximizer_distance: e0.max_maximizer_distance,
            e0_holds: e0.holds(),
        });
    }
    ctx.write(&if ctx.format == Format::Csv { to_csv(&rows)? } else { json(&rows)? })?;
    let failures = rows.iter().filter(|r| r.counterexamples > 0 || !r.e0_holds).count();
    if failures > 0 {
        return Err(CliError::Failed(format!("{failures} of {} instances violate a checked bound", rows.len())));
    }
    Ok(())
}

fn run_reproduce(ctx: &Context, only: Option<&str>, perturb: Option<u32>) -> Result<(), CliError> {
    ctx.require_format(&[Format::Json, Format::Csv], "reproduce")?;
    let only_text: Option<String> = match only {
        Some(s) => Some(s.to_string()),
        None => ctx.cfg.get("only")?,
    };
    let options = ReproduceOptions {
        only: only_text.map(|t| parse_list(&t, "criterion")).transpose()?,
        perturb: match perturb {
            Some(p) => Some(p),
            None => ctx.cfg.get("perturb")?,
        },
        seed: ctx.seed,
    };
    let rows = reproduce(&options)?;
    ctx.write(&if ctx.format == Format::Csv { to_csv(&rows)? } else { json(&rows)? })?;
    for row in &rows {
        eprintln!("{} criterion {:>2}: {}", if row.pass { "PASS" } else { "FAIL" }, row.criterion_id, row.description);
    }
    let failed: Vec<u32> = rows.iter().filter(|r| !r.pass).map(|r| r.criterion_id).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("criteria {failed:?} failed")))
    }
}
