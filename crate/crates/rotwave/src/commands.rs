//! Command implementations. Each command merges flags over the config
//! file, validates everything, and only then starts computing.

use crate::checks::{self, CheckSettings, Status};
use crate::cli::{BoxArgs, CheckArgs, Cli, Command, DomainArgs, GridArgs, HalfspaceKind, SolveArgs, SolverArgs, SweepKind, SweepOut};
use crate::config::{parse_list, parse_usize_list, FileConfig, Spacing};
use crate::error::{CliError, CliResult};
use crate::output::{check_writable, emit_json, write_csv};
use clap::CommandFactory;
use rayon::prelude::*;
use rotwave_core::discretize::{build_radial_grid, to_physical};
use rotwave_core::halfspace::{
    critical_threshold_report, minimize_halfspace, rescaling_factor, HalfPlaneGrid, HalfSpaceOptions,
    HalfSpaceQuotientReport, SeparableHalfPlane, ThresholdReport,
};
use rotwave_core::profile::Bump;
use rotwave_core::solver::{solve_ground_state, GroundStateSummary, SolveOptions, StartKind};
use rotwave_core::sweeps::{
    alpha_point, analyse_alpha_table, analyse_m_table, boundary_concentration_exponent,
    boundary_concentration_sweep, m_point, riemannian_concentration_exponent, riemannian_concentration_sweep,
    asymptotic_slope_fit, slope_fit, supercritical_alpha_sweep, SweepRow, SweepTable, SOLVER_AUX,
};
use rotwave_core::{critical_exponent_2s, DomainSpec, ProblemParams, ProblemSpec, RiemannianProfile};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub fn execute(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Solve(a) => solve(a, &file),
        Command::Sweep { kind } => sweep(kind, &file),
        Command::Check(a) => check(a, &file),
        Command::Halfspace { kind } => halfspace(kind, &file),
    }
}

fn usage(path: &[&str]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let mut cur = &mut cmd;
    for name in path {
        cur = cur.find_subcommand_mut(name).expect("known subcommand");
    }
    cur.render_usage().to_string()
}

fn missing(flag: &str, path: &[&str]) -> CliError {
    CliError::config(format!(
        "missing required value --{flag} (flag or config key '{}')\n\n{}",
        flag.replace('-', "_"),
        usage(path)
    ))
}

fn parse_p(text: Option<String>, auto: Option<f64>) -> CliResult<Option<f64>> {
    match text.as_deref().map(str::trim) {
        None => Ok(None),
        Some("auto") => auto
            .map(Some)
            .ok_or_else(|| CliError::config("p = auto is only available for half-space commands")),
        Some(t) => t
            .parse::<f64>()
            .map(Some)
            .map_err(|_| CliError::config(format!("p must be a number, got '{t}'"))),
    }
}

fn positive(name: &str, v: usize) -> CliResult<usize> {
    if v == 0 {
        Err(CliError::config(format!("{name} must be positive")))
    } else {
        Ok(v)
    }
}

fn domain_spec(d: &DomainArgs, c: &FileConfig) -> CliResult<DomainSpec> {
    let name = d.domain.clone().or_else(|| c.domain.clone()).unwrap_or_else(|| "disk".into());
    let domain = match name.as_str() {
        "disk" | "flat" => DomainSpec::FlatDisk,
        "annulus" => DomainSpec::Annulus {
            inner_radius: d
                .inner_radius
                .or(c.inner_radius)
                .ok_or_else(|| CliError::config("the annulus needs --inner-radius"))?,
        },
        "hemisphere" => DomainSpec::Riemannian { profile: RiemannianProfile::Hemisphere },
        "cusp" => DomainSpec::Riemannian { profile: cusp(d.cusp_s, d.cusp_c1, c)? },
        other => return Err(CliError::config(format!("unknown domain '{other}' (disk, annulus, hemisphere, cusp)"))),
    };
    domain.validate()?;
    Ok(domain)
}

fn cusp(s: Option<f64>, c1: Option<f64>, c: &FileConfig) -> CliResult<RiemannianProfile> {
    let s = s.or(c.cusp_s).ok_or_else(|| CliError::config("the cusp needs --cusp-s"))?;
    let profile = RiemannianProfile::PowerCusp { s, c1: c1.or(c.cusp_c1).unwrap_or(1.0) };
    profile.validate()?;
    Ok(profile)
}

fn parse_starts(text: &str) -> CliResult<Vec<StartKind>> {
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let bad = || CliError::config(format!("bad start '{item}' (radial, broken:DELTA, random:SEED)"));
            match item.split_once(':') {
                None if item == "radial" => Ok(StartKind::RadialBump),
                Some(("broken", d)) => d.parse().map(StartKind::BrokenBump).map_err(|_| bad()),
                Some(("random", s)) => s.parse().map(StartKind::Random).map_err(|_| bad()),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn solve_options(a: &SolverArgs, c: &FileConfig) -> CliResult<SolveOptions> {
    let mut o = SolveOptions::default();
    if let Some(v) = a.tol_quotient.or(c.tol_quotient) {
        o.tol_quotient = v;
    }
    if let Some(v) = a.tol_residual.or(c.tol_residual) {
        o.tol_residual = v;
    }
    if let Some(v) = a.tol_break.or(c.tol_break) {
        o.tol_break = v;
    }
    if let Some(v) = a.max_iter.or(c.max_iter) {
        o.max_iter = v;
    }
    if let Some(v) = a.damping.or(c.damping) {
        o.damping = v;
    }
    if let Some(v) = a.starts.as_ref().or(c.starts.as_ref()) {
        o.starts = parse_starts(v)?;
    }
    o.validate()?;
    Ok(o)
}

fn grid_sizes(g: &GridArgs, c: &FileConfig, n: usize, k: usize) -> CliResult<(usize, usize)> {
    let n = g.n.or(c.n).unwrap_or(n);
    if n < 2 {
        return Err(CliError::config("n must be at least 2"));
    }
    Ok((n, g.k.or(c.k).unwrap_or(k)))
}

fn out_path(flag: &Option<PathBuf>, file: &Option<String>) -> Option<PathBuf> {
    flag.clone().or_else(|| file.as_ref().map(PathBuf::from))
}

fn check_paths(paths: &[Option<&Path>]) -> CliResult<()> {
    for p in paths.iter().flatten() {
        check_writable(p)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveRecord<'a> {
    problem: &'a ProblemSpec,
    options: &'a SolveOptions,
    report: GroundStateSummary,
}

fn solve(a: SolveArgs, c: &FileConfig) -> CliResult<()> {
    let p = parse_p(a.p.clone().or_else(|| c.p.clone()), None)?.ok_or_else(|| missing("p", &["solve"]))?;
    let domain = domain_spec(&a.domain, c)?;
    let params = ProblemParams::planar(a.alpha.or(c.alpha).unwrap_or(0.0), a.m.or(c.m).unwrap_or(0.0), p);
    let spec = ProblemSpec::new(domain, params)?;
    spec.params.validate_for_solve()?;
    let (n, k) = grid_sizes(&a.grid, c, 256, 32)?;
    let factor = positive("m_theta_factor", a.m_theta_factor.or(c.m_theta_factor).unwrap_or(4))?;
    let opts = solve_options(&a.solver, c)?;
    let json = out_path(&a.json, &c.json);
    let csv = out_path(&a.csv, &c.csv);
    let modes = out_path(&a.modes_csv, &c.modes_csv);
    check_paths(&[json.as_deref(), csv.as_deref(), modes.as_deref()])?;
    let m_theta = factor * (2 * k + 1);
    if m_theta <= 2 * k {
        return Err(CliError::config("m_theta_factor too small to resolve K"));
    }

    let grid = Arc::new(build_radial_grid(&spec.domain, n)?);
    let rep = solve_ground_state(&spec, grid.clone(), k, &opts)?;
    if let Some(path) = &csv {
        let phys = to_physical(&rep.field, m_theta)?;
        let phys = &phys;
        let rows = grid.nodes().iter().enumerate().flat_map(|(j, &r)| {
            let row = phys.row(j);
            (0..m_theta).map(move |i| vec![r, phys.angle(i), row[i]])
        });
        write_csv(path, &["r", "theta", "value"], rows)?;
    }
    if let Some(path) = &modes {
        let field = &rep.field;
        let rows = (0..=k).flat_map(|kk| {
            let a = field.cos_mode(kk);
            let b = if kk == 0 { None } else { Some(field.sin_mode(kk)) };
            grid.nodes()
                .iter()
                .enumerate()
                .map(move |(j, &r)| vec![kk as f64, r, a[j], b.map_or(0.0, |b| b[j])])
                .collect::<Vec<_>>()
        });
        write_csv(path, &["k", "r", "a_k", "b_k"], rows)?;
    }
    let summary = rep.summary();
    emit_json(&SolveRecord { problem: &spec, options: &opts, report: summary }, json.as_deref())?;
    if !rep.converged {
        return Err(CliError::Numerical(format!(
            "the best candidate did not meet the tolerances (residual {:.3e}); report written",
            rep.residual
        )));
    }
    Ok(())
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

struct SweepPaths {
    csv: PathBuf,
    json: PathBuf,
    jobs: usize,
}

fn sweep_paths(out: &SweepOut, c: &FileConfig, kind: &str) -> CliResult<SweepPaths> {
    let csv = out_path(&out.csv, &c.csv).unwrap_or_else(|| PathBuf::from(format!("sweep_{kind}.csv")));
    let json = out_path(&out.json, &c.json).unwrap_or_else(|| PathBuf::from(format!("sweep_{kind}.json")));
    check_paths(&[Some(&csv), Some(&json)])?;
    Ok(SweepPaths { csv, json, jobs: out.jobs.or(c.jobs).unwrap_or(0) })
}

fn write_table(table: &SweepTable, path: &Path) -> CliResult<()> {
    let mut header = vec![table.param.as_str(), "value"];
    header.extend(table.aux_names.iter().map(String::as_str));
    let rows = table.rows.iter().map(|r| {
        let mut v = vec![r.param, r.value];
        v.extend(&r.aux);
        v
    });
    write_csv(path, &header, rows)
}

fn strictly_monotone(name: &str, v: &[f64]) -> CliResult<()> {
    let inc = v.windows(2).all(|w| w[1] > w[0]);
    let dec = v.windows(2).all(|w| w[1] < w[0]);
    if inc || dec {
        Ok(())
    } else {
        Err(CliError::config(format!("{name} must be strictly monotone without repeats")))
    }
}

#[derive(Serialize)]
struct FitRecord {
    p: f64,
    m: f64,
    slope: f64,
    intercept: f64,
    max_residual: f64,
    predicted: f64,
    rows: usize,
}

/// By default the largest lambda is left out of the fit.
fn fit_record(table: &SweepTable, p: f64, m: f64, predicted: f64, all: bool) -> CliResult<FitRecord> {
    let fit = if all { slope_fit(table)? } else { asymptotic_slope_fit(table)? };
    Ok(FitRecord { p, m, slope: fit.slope, intercept: fit.intercept, max_residual: fit.max_residual, predicted, rows: fit.rows })
}

fn sweep(kind: SweepKind, c: &FileConfig) -> CliResult<()> {
    match kind {
        SweepKind::Alpha { domain, alphas, m, p, grid, solver, out } => {
            let alphas = parse_list(alphas.as_ref().or(c.alphas.as_ref()).map_or("0:1:11", |s| s), Spacing::Linear)?;
            if alphas.iter().any(|a| !(0.0..=1.0).contains(a)) || alphas.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::config("alphas must increase within [0, 1]"));
            }
            let p = parse_p(p.or_else(|| c.p.clone()), None)?.ok_or_else(|| missing("p", &["sweep", "alpha"]))?;
            let template =
                ProblemSpec::new(domain_spec(&domain, c)?, ProblemParams::planar(0.0, m.or(c.m).unwrap_or(0.0), p))?;
            template.params.validate_for_solve()?;
            let (n, k) = grid_sizes(&grid, c, 256, 16)?;
            let opts = solve_options(&solver, c)?;
            let paths = sweep_paths(&out, c, "alpha")?;
            let g = Arc::new(build_radial_grid(&template.domain, n)?);
            let rows = in_pool(paths.jobs, || {
                alphas.par_iter().map(|&a| alpha_point(&template, a, g.clone(), k, &opts)).collect::<Result<Vec<_>, _>>()
            })??;
            let sweep = analyse_alpha_table(SweepTable::new("alpha", "solve_ground_state", &SOLVER_AUX, rows)?);
            write_table(&sweep.table, &paths.csv)?;
            emit_json(&sweep, Some(&paths.json))?;
            println!("alpha sweep: {} points, monotone = {}", sweep.table.len(), sweep.monotone);
        }
        SweepKind::M { domain, ms, alpha, p, grid, solver, out } => {
            let ms = parse_list(ms.as_ref().or(c.ms.as_ref()).map_or("1,10,100,1000", |s| s), Spacing::Linear)?;
            if ms.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::config("masses must increase"));
            }
            let p = parse_p(p.or_else(|| c.p.clone()), None)?.ok_or_else(|| missing("p", &["sweep", "m"]))?;
            let alpha = alpha.or(c.alpha).unwrap_or(0.9);
            let template = ProblemSpec::new(domain_spec(&domain, c)?, ProblemParams::planar(alpha, ms[0], p))?;
            template.params.validate_for_solve()?;
            let (n, k) = grid_sizes(&grid, c, 256, 32)?;
            let opts = solve_options(&solver, c)?;
            let paths = sweep_paths(&out, c, "m")?;
            let g = Arc::new(build_radial_grid(&template.domain, n)?);
            let rows = in_pool(paths.jobs, || {
                ms.par_iter().map(|&m| m_point(&template, m, g.clone(), k, &opts)).collect::<Result<Vec<_>, _>>()
            })??;
            let sweep = analyse_m_table(SweepTable::new("m", "solve_ground_state", &SOLVER_AUX, rows)?);
            write_table(&sweep.table, &paths.csv)?;
            emit_json(&sweep, Some(&paths.json))?;
            println!("m sweep: {} points, first nonradial m = {:?}", sweep.table.len(), sweep.first_nonradial);
        }
        SweepKind::Concentration { p, m, lambdas, nodes, fit_all, out } => {
            let p = parse_p(p.or_else(|| c.p.clone()), None)?.ok_or_else(|| missing("p", &["sweep", "concentration"]))?;
            let m = m.or(c.m).unwrap_or(0.0);
            let lambdas = lambda_list(lambdas, c)?;
            let nodes = positive("nodes", nodes.or(c.nodes).unwrap_or(4096))?;
            ProblemParams::planar(1.0, m, p).validate()?;
            let paths = sweep_paths(&out, c, "concentration")?;
            let table = concat(in_pool(paths.jobs, || {
                lambdas.par_iter().map(|&l| boundary_concentration_sweep(p, m, &[l], nodes)).collect::<Result<Vec<_>, _>>()
            })??)?;
            let all = fit_all || c.fit_all.unwrap_or(false);
            let fit = fit_record(&table, p, m, boundary_concentration_exponent(2, p), all)?;
            write_table(&table, &paths.csv)?;
            emit_json(&fit, Some(&paths.json))?;
            println!("concentration slope {:.6} (predicted {:.6})", fit.slope, fit.predicted);
        }
        SweepKind::Supercritical { alpha, ks, dim, m, p, nodes, out } => {
            let alpha = alpha.or(c.alpha).unwrap_or(1.5);
            let ks = parse_usize_list(ks.as_ref().or(c.ks.as_ref()).map_or("4,8,16", |s| s))?;
            if ks.len() < 2 || ks.windows(2).any(|w| w[1] <= w[0]) || ks[0] == 0 {
                return Err(CliError::config("ks must be at least two increasing positive integers"));
            }
            let dim = dim.or(c.dim).unwrap_or(2);
            let m = m.or(c.m).unwrap_or(0.0);
            let p = parse_p(p.or_else(|| c.p.clone()), None)?.unwrap_or(4.0);
            let nodes = positive("nodes", nodes.or(c.nodes).unwrap_or(4096))?;
            ProblemParams { dim, alpha, m, p }.validate()?;
            if !(alpha > 1.0) {
                return Err(CliError::config("the supercritical sweep needs alpha > 1"));
            }
            let paths = sweep_paths(&out, c, "supercritical")?;
            let table = supercritical_alpha_sweep(alpha, &ks, dim, m, p, nodes)?;
            write_table(&table, &paths.csv)?;
            emit_json(&table, Some(&paths.json))?;
            println!("supercritical values {:?}", table.values());
        }
        SweepKind::Riemannian { profile, cusp_s, cusp_c1, p, m, lambdas, nodes, fit_all, out } => {
            let name = profile.or_else(|| c.profile.clone()).unwrap_or_else(|| "hemisphere".into());
            let prof = match name.as_str() {
                "hemisphere" => RiemannianProfile::Hemisphere,
                "cusp" => cusp(cusp_s, cusp_c1, c)?,
                other => return Err(CliError::config(format!("unknown profile '{other}' (hemisphere, cusp)"))),
            };
            let p = parse_p(p.or_else(|| c.p.clone()), None)?.ok_or_else(|| missing("p", &["sweep", "riemannian"]))?;
            let m = m.or(c.m).unwrap_or(0.0);
            let lambdas = lambda_list(lambdas, c)?;
            let nodes = positive("nodes", nodes.or(c.nodes).unwrap_or(4096))?;
            ProblemParams::planar(1.0, m, p).validate()?;
            let paths = sweep_paths(&out, c, "riemannian")?;
            let table = concat(in_pool(paths.jobs, || {
                lambdas
                    .par_iter()
                    .map(|&l| riemannian_concentration_sweep(prof, p, m, &[l], nodes))
                    .collect::<Result<Vec<_>, _>>()
            })??)?;
            let predicted = riemannian_concentration_exponent(2, prof.degeneracy_exponent(), p);
            let all = fit_all || c.fit_all.unwrap_or(false);
            let fit = fit_record(&table, p, m, predicted, all)?;
            write_table(&table, &paths.csv)?;
            emit_json(&fit, Some(&paths.json))?;
            println!("riemannian slope {:.6} (predicted {:.6})", fit.slope, fit.predicted);
        }
    }
    Ok(())
}

fn lambda_list(flag: Option<String>, c: &FileConfig) -> CliResult<Vec<f64>> {
    let lambdas = parse_list(flag.as_ref().or(c.lambdas.as_ref()).map_or("0.4:0.1:5", |s| s), Spacing::Geometric)?;
    if lambdas.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
        return Err(CliError::config("lambdas must lie in (0, 1]"));
    }
    strictly_monotone("lambdas", &lambdas)?;
    Ok(lambdas)
}

/// Joins one-row tables computed independently.
fn concat(parts: Vec<SweepTable>) -> CliResult<SweepTable> {
    let first = parts.first().ok_or_else(|| CliError::config("empty sweep"))?;
    let (param, provenance) = (first.param.clone(), first.provenance.clone());
    let aux: Vec<String> = first.aux_names.clone();
    let rows: Vec<SweepRow> = parts.into_iter().flat_map(|t| t.rows).collect();
    let aux: Vec<&str> = aux.iter().map(String::as_str).collect();
    Ok(SweepTable::new(&param, &provenance, &aux, rows)?)
}

#[derive(Serialize)]
struct CheckRecord {
    results: Vec<checks::CheckResult>,
    passed: usize,
    failed: usize,
    skipped: usize,
}

fn check(a: CheckArgs, c: &FileConfig) -> CliResult<()> {
    let ids = if a.only.is_empty() {
        (1..=checks::names().len() as u8).collect::<Vec<_>>()
    } else {
        a.only
            .iter()
            .map(|k| {
                checks::find(k).ok_or_else(|| {
                    CliError::config(format!("unknown check '{k}'; known: {}", checks::names().join(", ")))
                })
            })
            .collect::<CliResult<Vec<_>>>()?
    };
    let json = out_path(&a.json, &c.json);
    check_paths(&[json.as_deref()])?;
    let settings = CheckSettings { n: a.n.or(c.n) };
    let mut results = Vec::new();
    for id in ids {
        let r = checks::run(id, &settings);
        println!("{r}");
        results.push(r);
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::SkippedUnderresolved));
    println!("{passed} passed, {failed} failed, {skipped} skipped");
    if let Some(path) = &json {
        emit_json(&CheckRecord { results, passed, failed, skipped }, Some(path))?;
    }
    if failed > 0 {
        Err(CliError::Numerical(format!("{failed} check(s) failed")))
    } else if skipped > 0 {
        Err(CliError::Partial(format!("{skipped} check(s) skipped as underresolved")))
    } else {
        Ok(())
    }
}

fn box_grid(g: &BoxArgs, c: &FileConfig) -> CliResult<(HalfPlaneGrid, HalfSpaceOptions)> {
    let grid = HalfPlaneGrid::new(
        g.l.or(c.l).unwrap_or(4.0),
        g.box_m.or(c.box_m).unwrap_or(4.0),
        g.nx.or(c.nx).unwrap_or(128),
        g.ny.or(c.ny).unwrap_or(128),
        g.s.or(c.s).unwrap_or(1.0),
    )?;
    if grid.ny < grid.nx {
        return Err(CliError::config("the box solve needs ny >= nx"));
    }
    let mut o = HalfSpaceOptions::default();
    if let Some(v) = g.tol_quotient.or(c.tol_quotient) {
        o.tol_quotient = v;
    }
    if let Some(v) = g.tol_residual.or(c.tol_residual) {
        o.tol_residual = v;
    }
    if let Some(v) = g.max_iter.or(c.max_iter) {
        o.max_iter = positive("max_iter", v)?;
    }
    if !(o.tol_quotient > 0.0 && o.tol_residual > 0.0) {
        return Err(CliError::config("tolerances must be positive"));
    }
    Ok((grid, o))
}

#[derive(Serialize)]
struct MinimizeRecord {
    grid: HalfPlaneGrid,
    options: HalfSpaceOptions,
    report: HalfSpaceQuotientReport,
    iterations: usize,
    converged: bool,
}

#[derive(Serialize)]
struct ThresholdRecord {
    n: usize,
    k_max: Option<usize>,
    grid: HalfPlaneGrid,
    report: ThresholdReport,
}

#[derive(Serialize)]
struct ScaleRow {
    lambda: f64,
    ratio: f64,
    predicted: f64,
    residual: f64,
}

#[derive(Serialize)]
struct ScaleRecord {
    s: f64,
    p: f64,
    critical_p: f64,
    kappa: f64,
    base: HalfSpaceQuotientReport,
    rows: Vec<ScaleRow>,
    max_residual: f64,
    kappa_factor: Option<f64>,
    kappa_predicted: Option<f64>,
}

fn halfspace(kind: HalfspaceKind, c: &FileConfig) -> CliResult<()> {
    match kind {
        HalfspaceKind::Minimize { grid, kappa, p, json, csv } => {
            let (g, mut o) = box_grid(&grid, c)?;
            o.kappa_weight = kappa.or(c.kappa).unwrap_or(1.0);
            o.p = parse_p(p.or_else(|| c.p.clone()), Some(g.critical_exponent()))?;
            if !(o.kappa_weight > 0.0) || o.p.is_some_and(|p| !(p >= 2.0)) {
                return Err(CliError::config("kappa must be positive and p at least 2"));
            }
            if o.p == Some(g.critical_exponent()) {
                o.p = None;
            }
            let json = out_path(&json, &c.json);
            let csv = out_path(&csv, &c.csv);
            check_paths(&[json.as_deref(), csv.as_deref()])?;
            let min = minimize_halfspace(&g, &o)?;
            if let Some(path) = &csv {
                let rows = (0..g.nx).flat_map(|i| {
                    let s = &min.samples;
                    (0..g.ny).map(move |j| vec![g.x1(i), g.x2(j), s[i * g.ny + j]]).collect::<Vec<_>>()
                });
                write_csv(path, &["x1", "x2", "value"], rows)?;
            }
            let rec = MinimizeRecord { grid: g, options: o, report: min.report, iterations: min.iterations, converged: min.converged };
            emit_json(&rec, json.as_deref())?;
            if !min.converged {
                return Err(CliError::Numerical("box minimization did not meet the tolerances; report written".into()));
            }
        }
        HalfspaceKind::Threshold { m, n, k, grid, json } => {
            let m = m.or(c.m).ok_or_else(|| missing("m", &["halfspace", "threshold"]))?;
            if !m.is_finite() {
                return Err(CliError::config("m must be finite"));
            }
            let n = n.or(c.n).unwrap_or(256);
            if n < 2 {
                return Err(CliError::config("n must be at least 2"));
            }
            let k = k.or(c.k);
            let (g, o) = box_grid(&grid, c)?;
            let json = out_path(&json, &c.json);
            check_paths(&[json.as_deref()])?;
            let ball = Arc::new(build_radial_grid(&DomainSpec::FlatDisk, n)?);
            let opts = SolveOptions::default();
            let report = critical_threshold_report(m, ball, k.unwrap_or(0), &g, k.map(|_| &opts), &o)?;
            emit_json(&ThresholdRecord { n, k_max: k, grid: g, report }, json.as_deref())?;
        }
        HalfspaceKind::ScaleCheck { s, p, kappa, lambdas, nodes, json } => {
            let s = s.or(c.s).unwrap_or(1.0);
            let critical = critical_exponent_2s(2, s)?;
            let p = parse_p(p.or_else(|| c.p.clone()), Some(critical))?.unwrap_or(critical);
            let kappa = kappa.or(c.kappa).unwrap_or(1.0);
            if !(p >= 2.0 && kappa > 0.0) {
                return Err(CliError::config("p must be at least 2 and kappa positive"));
            }
            let lambdas = parse_list(lambdas.as_ref().or(c.lambdas.as_ref()).map_or("0.5,2", |s| s), Spacing::Geometric)?;
            if lambdas.iter().any(|&l| !(l > 0.0)) {
                return Err(CliError::config("lambdas must be positive"));
            }
            let nodes = positive("nodes", nodes.or(c.nodes).unwrap_or(4096))?;
            let json = out_path(&json, &c.json);
            check_paths(&[json.as_deref()])?;
            let f = Bump::new(0.1, 2.1)?;
            let g = Bump::new(-1.5, 1.5)?;
            let prof = SeparableHalfPlane { f: &f, g: &g, nodes };
            let base = prof.quotient(s, kappa, p)?;
            let rows = lambdas
                .iter()
                .map(|&lambda| {
                    let ratio = prof.rescaled_quotient(lambda, s, kappa, p)?.value / base.value;
                    let predicted = rescaling_factor(lambda, s, p);
                    Ok(ScaleRow { lambda, ratio, predicted, residual: ratio / predicted - 1.0 })
                })
                .collect::<CliResult<Vec<_>>>()?;
            let max_residual = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
            let (kappa_factor, kappa_predicted) = if kappa != 1.0 {
                let k1 = prof.min_over_stretches(s, 1.0, p)?;
                let kk = prof.min_over_stretches(s, kappa, p)?;
                (Some(kk / k1), Some(kappa.powf(0.5 - 1.0 / p)))
            } else {
                (None, None)
            };
            let rec = ScaleRecord { s, p, critical_p: critical, kappa, base, rows, max_residual, kappa_factor, kappa_predicted };
            emit_json(&rec, json.as_deref())?;
        }
    }
    Ok(())
}
