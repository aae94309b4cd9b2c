//! The seven experiments. Monte Carlo experiments draw sample `i` from stream
//! `i` of the master seed, so tables do not depend on the worker count.

use kpzlab::fredholm::{
    det_multi_certified, det_single_certified, Certified, DeterminantProblem, DEFAULT_CUTOFF,
};
use kpzlab::kernels::{ExtendedKernel, SourceSpec};
use kpzlab::png::{
    evolve_multilayer, run_with_rng, scale_height_at, scale_height_gaussian, site_for_tau,
    MultiLayerField, PngParams, alpha_from_omega,
};
use kpzlab::rmt::tridiagonal::{largest_goe, largest_gue_rank_one};
use kpzlab::rmt::{
    edge_scale, edge_scale_gaussian, eigs_symmetric, sample_dyson_chain,
    sample_goe, sample_source_matrix, TimeGrid,
};
use kpzlab::rng::par_samples;
use kpzlab::special::std_normal_cdf;
use kpzlab::stats::{empirical_cdf, ks_distance, TabulatedCdf};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{config_err, HarnessError, Result};
use crate::table::{read_data_file, Cell, Column, Report, Table};

/// Run one experiment and collect its report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    // validate the shared keys up front so a bad value fails before any work
    cfg.seed()?;
    cfg.workers()?;
    cfg.quad_order()?;
    cfg.format()?;
    match cfg.experiment() {
        Experiment::PngHeight => png_height(cfg),
        Experiment::PngLayers => png_layers(cfg),
        Experiment::RmtEdge => rmt_edge(cfg),
        Experiment::RmtDyson => rmt_dyson(cfg),
        Experiment::DistEval => dist_eval(cfg),
        Experiment::DistJoint => dist_joint(cfg),
        Experiment::Compare => compare(cfg),
    }
}

fn metadata(cfg: &ExperimentConfig, description: &str) -> Result<Map<String, Value>> {
    let mut m = Map::new();
    m.insert("experiment".into(), json!(cfg.experiment().name()));
    m.insert("description".into(), json!(description));
    m.insert("seed".into(), json!(cfg.seed()?));
    m.insert("config".into(), json!(cfg.echo()));
    m.insert(
        "versions".into(),
        json!({ "kpzlab-cli": env!("CARGO_PKG_VERSION") }),
    );
    Ok(m)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))
}

/// `f` over `items` on `workers` threads, results in input order.
fn par_map<T, U, F>(workers: usize, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> kpzlab::Result<U> + Sync,
{
    let out = pool(workers)?.install(|| items.par_iter().map(&f).collect::<kpzlab::Result<Vec<U>>>())?;
    Ok(out)
}

fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

fn png_params(cfg: &ExperimentConfig) -> Result<PngParams> {
    let q = cfg.f64("q")?.unwrap_or(0.25);
    let n = cfg.require_usize("N")?;
    let alpha = match (cfg.f64("alpha")?, cfg.f64("omega")?) {
        (Some(a), None) => a,
        (None, Some(w)) => alpha_from_omega(w, q, n)?,
        (None, None) => return config_err(format!("{} needs --alpha or --omega", cfg.experiment())),
        (Some(_), Some(_)) => return config_err("give only one of alpha and omega"),
    };
    Ok(PngParams::new(q, alpha, n)?)
}

fn positive(cfg: &ExperimentConfig, key: &str) -> Result<usize> {
    let v = cfg.require_usize(key)?;
    if v == 0 {
        return config_err(format!("{key} must be at least 1"));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scaling {
    None,
    Edge,
    Gaussian,
}

fn scaling(cfg: &ExperimentConfig, auto: Scaling) -> Result<Scaling> {
    match cfg.get("scaling") {
        None | Some("auto") => Ok(auto),
        Some("none") => Ok(Scaling::None),
        Some("edge") => Ok(Scaling::Edge),
        Some("gaussian") => Ok(Scaling::Gaussian),
        Some(s) => config_err(format!("scaling must be auto, none, edge or gaussian, got {s:?}")),
    }
}

fn limit_label(alpha_or_lambda: f64) -> &'static str {
    if alpha_or_lambda < 1.0 {
        "F2"
    } else if alpha_or_lambda == 1.0 {
        "GOE2"
    } else {
        "normal"
    }
}

fn png_height(cfg: &ExperimentConfig) -> Result<Report> {
    let params = png_params(cfg)?;
    let samples = positive(cfg, "samples")?;
    let taus = cfg.list("tau")?.unwrap_or_else(|| vec![0.0]);
    let auto = if params.alpha() > 1.0 { Scaling::Gaussian } else { Scaling::Edge };
    let scale = scaling(cfg, auto)?;
    match scale {
        Scaling::None => return config_err("png-height supports scaling edge or gaussian"),
        Scaling::Gaussian if taus.iter().any(|&t| t != 0.0) => {
            return config_err("Gaussian scaling is defined at tau = 0 only")
        }
        Scaling::Gaussian => {
            scale_height_gaussian(0, &params)?;
        }
        Scaling::Edge => {}
    }
    let sites = taus
        .iter()
        .map(|&t| site_for_tau(t, &params))
        .collect::<kpzlab::Result<Vec<_>>>()?;
    let per_sample = par_samples(cfg.seed()?, samples, cfg.workers()?, |i, rng| {
        let field = run_with_rng(&params, rng);
        taus.iter()
            .zip(&sites)
            .map(|(&tau, &r)| {
                let h = field.get(r);
                let x = match scale {
                    Scaling::Gaussian => scale_height_gaussian(h, &params)?,
                    _ => scale_height_at(&field, tau, &params)?,
                };
                Ok(vec![Cell::from(i), tau.into(), r.into(), h.into(), x.into()])
            })
            .collect::<kpzlab::Result<Vec<_>>>()
    })?;
    let mut table = Table::new(vec![
        Column::int("sample"),
        Column::real("tau"),
        Column::int("r"),
        Column::int("h"),
        Column::real("x"),
    ]);
    for row in per_sample.into_iter().flatten() {
        table.push(row)?;
    }
    let xs = table.column_f64("x")?;
    let (mean, sd) = mean_and_sd(&xs);
    let mut m = metadata(cfg, "scaled PNG droplet height at t = 2N")?;
    m.insert("scaling".into(), json!(format!("{scale:?}").to_lowercase()));
    let mut summary = Map::new();
    summary.insert("rows".into(), json!(table.rows.len()));
    summary.insert("mean_x".into(), json!(mean));
    summary.insert("sd_x".into(), json!(sd));
    summary.insert("expected_limit".into(), json!(limit_label(params.alpha())));
    Ok(Report { metadata: m, table, summary })
}

fn png_layers(cfg: &ExperimentConfig) -> Result<Report> {
    let params = png_params(cfg)?;
    let samples = cfg.usize("samples")?.unwrap_or(1).max(1);
    let layers = cfg.usize("layers")?.unwrap_or(8);
    MultiLayerField::initial(layers)?;
    let fields = par_samples(cfg.seed()?, samples, cfg.workers()?, |_, rng| {
        let mut f = MultiLayerField::initial(layers)?;
        for _ in 0..2 * params.n() {
            f = evolve_multilayer(&f, &params, rng)?;
        }
        Ok(f)
    })?;
    let mut table = Table::new(vec![
        Column::int("sample"),
        Column::int("layer"),
        Column::int("r"),
        Column::int("h"),
    ]);
    let mut nonempty = Vec::with_capacity(samples);
    for (i, f) in fields.iter().enumerate() {
        nonempty.push(f.nonempty_layers() as f64);
        let t = f.t() as i64;
        for (l, layer) in f.layers().iter().enumerate() {
            for r in -t..=t {
                table.push(vec![i.into(), l.into(), r.into(), layer.get(r).into()])?;
            }
        }
    }
    let mut summary = Map::new();
    summary.insert("rows".into(), json!(table.rows.len()));
    summary.insert("mean_nonempty_layers".into(), json!(mean_and_sd(&nonempty).0));
    Ok(Report {
        metadata: metadata(cfg, "multi-layer PNG line ensemble at t = 2N")?,
        table,
        summary,
    })
}

/// Source from `eps`, `Lambda` or `omega` (at most one), zero otherwise.
/// `N` may be omitted when `eps` is given.
fn source(cfg: &ExperimentConfig, n: Option<usize>) -> Result<SourceSpec> {
    let eps = cfg.list("eps")?;
    let lambda = cfg.f64("Lambda")?;
    let omega = cfg.f64("omega")?;
    let given = [eps.is_some(), lambda.is_some(), omega.is_some()];
    if given.iter().filter(|&&g| g).count() > 1 {
        return config_err("give only one of eps, Lambda and omega");
    }
    let n = match (n, &eps) {
        (Some(n), _) => n,
        (None, Some(e)) => e.len(),
        (None, None) => return config_err(format!("{} needs --N or --eps", cfg.experiment())),
    };
    if n == 0 {
        return config_err("N must be at least 1");
    }
    if let Some(mut e) = eps {
        if e.len() > n {
            return config_err(format!("eps has {} entries for N = {n}", e.len()));
        }
        e.resize(n, 0.0);
        return Ok(SourceSpec::new(e)?);
    }
    if let Some(l) = lambda {
        return Ok(SourceSpec::from_lambda(n, l)?);
    }
    if let Some(w) = omega {
        return Ok(SourceSpec::from_omega(n, w)?);
    }
    Ok(SourceSpec::zero(n)?)
}

fn rank_one(src: &SourceSpec) -> Option<f64> {
    src.epsilons()[1..].iter().all(|&e| e == 0.0).then(|| src.epsilons()[0])
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Ensemble {
    Gue,
    Goe,
    Goe2,
}

fn rmt_edge(cfg: &ExperimentConfig) -> Result<Report> {
    let n = positive(cfg, "N")?;
    let samples = positive(cfg, "samples")?;
    let ensemble = match cfg.get("ensemble").unwrap_or("gue") {
        "gue" => Ensemble::Gue,
        "goe" => Ensemble::Goe,
        "goe2" => Ensemble::Goe2,
        e => return config_err(format!("ensemble must be gue, goe or goe2, got {e:?}")),
    };
    let src = source(cfg, Some(n))?;
    if ensemble != Ensemble::Gue && rank_one(&src) != Some(0.0) {
        return config_err("a source is only supported for the gue ensemble");
    }
    let lambda = cfg.f64("Lambda")?;
    let tridiagonal = match cfg.get("method").unwrap_or("auto") {
        "auto" => ensemble != Ensemble::Gue || rank_one(&src).is_some(),
        "tridiagonal" => {
            if ensemble == Ensemble::Gue && rank_one(&src).is_none() {
                return config_err("the tridiagonal method needs a rank-one source");
            }
            true
        }
        "dense" => false,
        m => return config_err(format!("method must be auto, dense or tridiagonal, got {m:?}")),
    };
    let auto = if lambda.is_some_and(|l| l > 1.0) { Scaling::Gaussian } else { Scaling::Edge };
    let scale = scaling(cfg, auto)?;
    let gaussian_lambda = match scale {
        Scaling::Gaussian => match lambda {
            Some(l) if ensemble == Ensemble::Gue => {
                edge_scale_gaussian(0.0, n, l)?;
                l
            }
            _ => return config_err("Gaussian scaling needs the gue ensemble with Lambda > 1"),
        },
        _ => 0.0,
    };
    let eps1 = rank_one(&src).unwrap_or(0.0);
    let largest = |rng: &mut rand_chacha::ChaCha8Rng| -> kpzlab::Result<f64> {
        let goe = |rng: &mut rand_chacha::ChaCha8Rng| {
            if tridiagonal {
                largest_goe(n, rng)
            } else {
                Ok(*eigs_symmetric(&sample_goe(n, rng)?)?.last().unwrap())
            }
        };
        match ensemble {
            Ensemble::Gue if tridiagonal => largest_gue_rank_one(n, eps1, rng),
            Ensemble::Gue => sample_source_matrix(n, &src, rng)?.largest_eigenvalue(),
            Ensemble::Goe => goe(rng),
            Ensemble::Goe2 => Ok(goe(rng)?.max(goe(rng)?)),
        }
    };
    let rows = par_samples(cfg.seed()?, samples, cfg.workers()?, |i, rng| {
        let l1 = largest(rng)?;
        let x = match scale {
            Scaling::None => l1,
            Scaling::Edge => edge_scale(l1, n),
            Scaling::Gaussian => edge_scale_gaussian(l1, n, gaussian_lambda)?,
        };
        Ok(vec![Cell::from(i), l1.into(), x.into()])
    })?;
    let mut table = Table::new(vec![Column::int("sample"), Column::real("lambda1"), Column::real("x")]);
    for r in rows {
        table.push(r)?;
    }
    let (mean, sd) = mean_and_sd(&table.column_f64("x")?);
    let mut m = metadata(cfg, "largest eigenvalue of a Gaussian ensemble with a deterministic source")?;
    m.insert("scaling".into(), json!(format!("{scale:?}").to_lowercase()));
    m.insert("method".into(), json!(if tridiagonal { "tridiagonal" } else { "dense" }));
    let mut summary = Map::new();
    summary.insert("rows".into(), json!(table.rows.len()));
    summary.insert("mean_x".into(), json!(mean));
    summary.insert("sd_x".into(), json!(sd));
    let expected = match ensemble {
        Ensemble::Gue => limit_label(lambda.unwrap_or(0.0)),
        Ensemble::Goe => "F1",
        Ensemble::Goe2 => "GOE2",
    };
    summary.insert("expected_limit".into(), json!(expected));
    Ok(Report { metadata: m, table, summary })
}

fn time_grid(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let times = cfg.list("times")?.unwrap_or_else(|| vec![0.0]);
    TimeGrid::new(times.clone())?;
    Ok(times)
}

fn rmt_dyson(cfg: &ExperimentConfig) -> Result<Report> {
    let n = positive(cfg, "N")?;
    let samples = positive(cfg, "samples")?;
    let src = source(cfg, Some(n))?;
    let times = time_grid(cfg)?;
    let grid = TimeGrid::new(times.clone())?;
    let scale = scaling(cfg, Scaling::None)?;
    if scale == Scaling::Gaussian {
        return config_err("rmt-dyson supports scaling none or edge");
    }
    let rows = par_samples(cfg.seed()?, samples, cfg.workers()?, |i, rng| {
        let spectra = sample_dyson_chain(n, &src, &grid, rng)?;
        let mut row = vec![Cell::from(i)];
        for s in spectra {
            let l1 = *s.last().unwrap();
            row.push(if scale == Scaling::Edge { edge_scale(l1, n) } else { l1 }.into());
        }
        Ok(row)
    })?;
    let mut columns = vec![Column::int("sample")];
    columns.extend((0..times.len()).map(|j| Column::real(format!("lambda1_{j}"))));
    let mut table = Table::new(columns);
    for r in rows {
        table.push(r)?;
    }
    let mut m = metadata(cfg, "largest eigenvalue along a Dyson Brownian motion chain")?;
    m.insert("times".into(), json!(times));
    let mut summary = Map::new();
    summary.insert("rows".into(), json!(table.rows.len()));
    Ok(Report { metadata: m, table, summary })
}

fn certified_row(c: &Certified) -> [Cell; 2] {
    [c.value.into(), c.delta.into()]
}

fn check_transition(omega: f64, tau: f64) -> Result<()> {
    if omega + tau < 0.0 {
        return Err(kpzlab::Error::Domain(format!(
            "transition kernel diverges for omega + tau = {} < 0",
            omega + tau
        ))
        .into());
    }
    Ok(())
}

fn dist_eval(cfg: &ExperimentConfig) -> Result<Report> {
    let which = cfg.require("which")?.to_string();
    let grid = cfg.grid("s-grid")?;
    let quad = cfg.quad_order()?;
    let workers = cfg.workers()?;
    let single = |kernel: ExtendedKernel| {
        par_map(workers, &grid, |&s| det_single_certified(&kernel, s, quad, DEFAULT_CUTOFF))
    };
    let values: Vec<Certified> = match which.as_str() {
        "F2" => single(ExtendedKernel::airy())?,
        "GOE2" => single(ExtendedKernel::goe2())?,
        "normal" => grid
            .iter()
            .map(|&s| Ok(Certified { value: std_normal_cdf(s)?, delta: 0.0, quad_order: 0 }))
            .collect::<kpzlab::Result<_>>()?,
        "finite" => {
            let n = cfg.usize("N")?;
            let kernel = ExtendedKernel::finite_static(source(cfg, n)?);
            match scaling(cfg, Scaling::None)? {
                Scaling::None => single(kernel)?,
                Scaling::Edge => single(kernel.edge_scaled())?,
                Scaling::Gaussian => return config_err("finite supports scaling none or edge"),
            }
        }
        "transition" => {
            let omega = cfg.f64("omega")?.unwrap_or(0.0);
            let tau = cfg.f64("tau")?.unwrap_or(0.0);
            check_transition(omega, tau)?;
            let kernel = ExtendedKernel::transition(omega)?;
            par_map(workers, &grid, |&s| {
                let p = DeterminantProblem::new(kernel.clone(), vec![tau], vec![s])?.with_quad_order(quad)?;
                det_multi_certified(&p)
            })?
        }
        w => return config_err(format!("which must be F2, GOE2, normal, finite or transition, got {w:?}")),
    };
    let mut table = Table::new(vec![Column::real("s"), Column::real("F"), Column::real("delta")]);
    for (s, c) in grid.iter().zip(&values) {
        let [f, d] = certified_row(c);
        table.push(vec![(*s).into(), f, d])?;
    }
    let monotone = values.windows(2).all(|w| w[1].value >= w[0].value);
    let max_delta = values.iter().fold(0.0f64, |a, c| a.max(c.delta.abs()));
    let mut m = metadata(cfg, "distribution function on a threshold grid")?;
    m.insert("which".into(), json!(which));
    m.insert("quad_order".into(), json!(quad));
    let mut summary = Map::new();
    summary.insert("rows".into(), json!(table.rows.len()));
    summary.insert("monotone".into(), json!(monotone));
    summary.insert("max_certificate_delta".into(), json!(max_delta));
    Ok(Report { metadata: m, table, summary })
}

/// All points of `grid^m` in lexicographic order.
fn product_grid(grid: &[f64], m: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |&s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    out
}

fn dist_joint(cfg: &ExperimentConfig) -> Result<Report> {
    let which = cfg.require("which")?.to_string();
    let grid = cfg.grid("s-grid")?;
    let quad = cfg.quad_order()?;
    let times = cfg
        .list("times")?
        .ok_or_else(|| HarnessError::Config("dist-joint needs --times".into()))?;
    let kernel = match which.as_str() {
        "finite-n" => {
            let n = cfg.usize("N")?;
            let k = ExtendedKernel::finite_dynamical(source(cfg, n)?, times.clone())?;
            match scaling(cfg, Scaling::None)? {
                Scaling::None => k,
                Scaling::Edge => k.edge_scaled(),
                Scaling::Gaussian => return config_err("finite-n supports scaling none or edge"),
            }
        }
        "transition" => {
            let omega = cfg.f64("omega")?.unwrap_or(0.0);
            check_transition(omega, times[0])?;
            ExtendedKernel::transition(omega)?
        }
        w => return config_err(format!("which must be finite-n or transition, got {w:?}")),
    };
    let points = product_grid(&grid, times.len());
    if points.len() > 100_000 {
        return config_err(format!("{} grid points requested, at most 10^5 allowed", points.len()));
    }
    // validate once so a bad time grid is a config error rather than a worker failure
    DeterminantProblem::new(kernel.clone(), times.clone(), points[0].clone())?.with_quad_order(quad)?;
    let values = par_map(cfg.workers()?, &points, |s| {
        let p = DeterminantProblem::new(kernel.clone(), times.clone(), s.clone())?.with_quad_order(quad)?;
        det_multi_certified(&p)
    })?;
    let mut columns: Vec<Column> = (0..times.len()).map(|j| Column::real(format!("s_{j}"))).collect();
    columns.push(Column::real("F"));
    columns.push(Column::real("delta"));
    let mut table = Table::new(columns);
    for (s, c) in points.iter().zip(&values) {
        let mut row: Vec<Cell> = s.iter().map(|&x| x.into()).collect();
        row.extend(certified_row(c));
        table.push(row)?;
    }
    let max_delta = values.iter().fold(0.0f64, |a, c| a.max(c.delta.abs()));
    let mut m = metadata(cfg, "joint distribution of the top curve at several times")?;
    m.insert("which".into(), json!(which));
    m.insert("times".into(), json!(times));
    m.insert("quad_order".into(), json!(quad));
    let mut summary = Map::new();
    summary.insert("rows".into(), json!(table.rows.len()));
    summary.insert("max_certificate_delta".into(), json!(max_delta));
    Ok(Report { metadata: m, table, summary })
}

/// Limiting one-point laws that [`compare`] measures against.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    F2,
    Goe2,
    Normal,
    Transition { omega: f64, tau: f64 },
}

/// Tabulation range and step for the reference distribution functions.
pub const REFERENCE_RANGE: (f64, f64) = (-9.0, 7.0);
pub const REFERENCE_STEP: f64 = 0.02;

impl Reference {
    pub fn parse(name: &str, omega: f64, tau: f64) -> Result<Self> {
        match name {
            "F2" => Ok(Reference::F2),
            "GOE2" => Ok(Reference::Goe2),
            "normal" => Ok(Reference::Normal),
            "transition" => {
                check_transition(omega, tau)?;
                Ok(Reference::Transition { omega, tau })
            }
            a => config_err(format!("against must be F2, GOE2, normal, transition or joint, got {a:?}")),
        }
    }

    /// The distribution function as a linear interpolant on a fixed grid.
    /// The normal law is tabulated too, at negligible interpolation error.
    pub fn tabulate(&self, quad_order: usize, workers: usize) -> Result<TabulatedCdf> {
        let (lo, hi) = REFERENCE_RANGE;
        let n = ((hi - lo) / REFERENCE_STEP).round() as usize;
        let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let fs = match self {
            Reference::Normal => xs.iter().map(|&s| std_normal_cdf(s)).collect::<kpzlab::Result<_>>()?,
            Reference::F2 | Reference::Goe2 => {
                let k = if *self == Reference::F2 { ExtendedKernel::airy() } else { ExtendedKernel::goe2() };
                par_map(workers, &xs, |&s| {
                    Ok(det_single_certified(&k, s, quad_order, DEFAULT_CUTOFF)?.value)
                })?
            }
            Reference::Transition { omega, tau } => {
                let k = ExtendedKernel::transition(*omega)?;
                par_map(workers, &xs, |&s| {
                    let p = DeterminantProblem::new(k.clone(), vec![*tau], vec![s])?.with_quad_order(quad_order)?;
                    Ok(det_multi_certified(&p)?.value)
                })?
            }
        };
        Ok(TabulatedCdf::new(xs, fs)?)
    }
}

/// Sup-difference between the empirical joint CDF of the rows of `samples`
/// and reference values at threshold vectors.
pub fn joint_sup_difference(samples: &[Vec<f64>], points: &[Vec<f64>], reference: &[f64]) -> f64 {
    let n = samples.len() as f64;
    points
        .iter()
        .zip(reference)
        .map(|(s, &f)| {
            let count = samples
                .iter()
                .filter(|x| x.iter().zip(s).all(|(a, b)| a <= b))
                .count();
            (count as f64 / n - f).abs()
        })
        .fold(0.0, f64::max)
}

fn compare(cfg: &ExperimentConfig) -> Result<Report> {
    let input = read_data_file(std::path::Path::new(cfg.require("input")?))?;
    let against = cfg.require("against")?.to_string();
    let mut m = metadata(cfg, "goodness of fit of sampled data against a reference law")?;
    m.insert("input_experiment".into(), input.metadata.get("experiment").cloned().unwrap_or(Value::Null));
    let mut summary = Map::new();
    if against == "joint" {
        let reference = read_data_file(std::path::Path::new(cfg.require("reference")?))?;
        let ref_cols: Vec<String> = reference
            .table
            .columns
            .iter()
            .map(|c| c.name.clone())
            .filter(|c| c.starts_with("s_"))
            .collect();
        let sample_cols: Vec<String> = match cfg.get("columns") {
            Some(c) => c.split(',').map(|s| s.trim().to_string()).collect(),
            None => input
                .table
                .columns
                .iter()
                .map(|c| c.name.clone())
                .filter(|c| c.starts_with("lambda1_"))
                .collect(),
        };
        if sample_cols.is_empty() || sample_cols.len() != ref_cols.len() {
            return config_err(format!(
                "{} sample columns for {} reference thresholds",
                sample_cols.len(),
                ref_cols.len()
            ));
        }
        let cols = sample_cols
            .iter()
            .map(|c| input.table.column_f64(c))
            .collect::<Result<Vec<_>>>()?;
        if cols[0].is_empty() {
            return config_err("input has no rows");
        }
        let samples: Vec<Vec<f64>> = (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let thresholds = ref_cols
            .iter()
            .map(|c| reference.table.column_f64(c))
            .collect::<Result<Vec<_>>>()?;
        let points: Vec<Vec<f64>> = (0..thresholds[0].len())
            .map(|i| thresholds.iter().map(|c| c[i]).collect())
            .collect();
        let fs = reference.table.column_f64("F")?;
        let sup = joint_sup_difference(&samples, &points, &fs);
        let mut table = Table::new(vec![
            Column::text("against"),
            Column::int("n"),
            Column::int("points"),
            Column::real("sup_difference"),
        ]);
        table.push(vec!["joint".into(), samples.len().into(), points.len().into(), sup.into()])?;
        summary.insert("n".into(), json!(samples.len()));
        summary.insert("sup_difference".into(), json!(sup));
        return Ok(Report { metadata: m, table, summary });
    }

    let omega = cfg.f64("omega")?.unwrap_or(0.0);
    let tau = cfg.f64("tau")?;
    let reference = Reference::parse(&against, omega, tau.unwrap_or(0.0))?;
    let column = cfg.get("column").unwrap_or("x");
    let mut xs = input.table.column_f64(column)?;
    if let Some(j) = input.table.column_index("tau") {
        let taus: Vec<f64> = input.table.rows.iter().map(|r| r[j].as_f64().unwrap_or(f64::NAN)).collect();
        match tau {
            Some(t) => xs = xs.into_iter().zip(&taus).filter(|(_, &u)| u == t).map(|(x, _)| x).collect(),
            None if taus.iter().any(|&u| u != taus[0]) => {
                return config_err("input holds several tau values; select one with --tau")
            }
            None => {}
        }
    }
    let ecdf = empirical_cdf(xs).map_err(|e| HarnessError::Config(format!("input column {column:?}: {e}")))?;
    let cdf = reference.tabulate(cfg.quad_order()?, cfg.workers()?)?;
    let ks = ks_distance(&ecdf, |x| cdf.eval(x));
    let mut table = Table::new(vec![
        Column::text("against"),
        Column::text("column"),
        Column::int("n"),
        Column::real("ks"),
    ]);
    table.push(vec![against.as_str().into(), column.into(), ecdf.len().into(), ks.into()])?;
    m.insert("reference_grid".into(), json!({
        "lo": REFERENCE_RANGE.0, "hi": REFERENCE_RANGE.1, "step": REFERENCE_STEP
    }));
    summary.insert("n".into(), json!(ecdf.len()));
    summary.insert("ks".into(), json!(ks));
    Ok(Report { metadata: m, table, summary })
}
