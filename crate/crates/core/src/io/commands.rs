//! The five commands. Each returns an [`Outcome`] whose exit code follows the
//! convention 0 pass, 1 validation failure; errors map to 2 or 3.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::diagnostics::{equivalence_discrepancy, validate, ComparisonRun, ValidationConfig};
use crate::error::Error;
use crate::flow::{run, velocity_registry, StepRecord, Trajectory};
use crate::geom::Shape;
use crate::io::config::{Mode, RunConfig};
use crate::io::files::{load_shape, save_shape, ShapeFormat};
use crate::io::generate::{generate_shape, generator_registry, parse_spec};
use crate::transforms::{
    conformality_defect, gaussian_shrink_time, sphere_radius_gaussian, sphere_radius_mcf, time_forward,
    GaussianContext, CONFORMALITY_STEP,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    /// Human-readable summary for stdout.
    pub summary: String,
}

impl Outcome {
    fn ok(summary: String) -> Self {
        Self { exit_code: 0, summary }
    }
}

pub const SERIES_HEADER: &str = "step,t,dt,area,weighted_area,circumradius,roundness,max_speed";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Loads `spec` as a file when it exists, otherwise builds it with a
/// generator.
pub fn resolve_shape(spec: &str, seed: u64, auto_orient: bool) -> Result<Shape, Error> {
    let path = Path::new(spec);
    if path.is_file() {
        return load_shape(path, auto_orient);
    }
    let (name, _) = parse_spec(spec)?;
    if !generator_registry().contains(&name) {
        return Err(Error::Config(format!(
            "shape '{spec}' is neither an existing file nor a generator (available: {})",
            generator_registry().names().join(", ")
        )));
    }
    generate_shape(spec, seed)
}

fn shape_of(cfg: &RunConfig) -> Result<Shape, Error> {
    let spec = cfg
        .shape
        .as_deref()
        .ok_or_else(|| Error::Config(format!("mode {} needs a shape (--shape)", cfg.mode)))?;
    resolve_shape(spec, cfg.seed, cfg.auto_orient)
}

fn check_record(r: &StepRecord) -> Result<(), Error> {
    let fields = [r.t, r.dt, r.area, r.weighted_area, r.circumradius, r.max_speed];
    if fields.iter().chain(r.roundness.iter()).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!("non-finite value in the record of step {}", r.step)));
    }
    Ok(())
}

/// `series.csv` text. A missing roundness (not evaluated on this step, or
/// the shape is not convex) is left empty.
pub fn series_csv(tr: &Trajectory) -> Result<String, Error> {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for r in tr.series() {
        check_record(r)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.step,
            num(r.t),
            num(r.dt),
            num(r.area),
            num(r.weighted_area),
            num(r.circumradius),
            opt(r.roundness),
            num(r.max_speed)
        );
    }
    Ok(out)
}

fn write_trajectory(tr: &Trajectory, out: &Path) -> Result<(), Error> {
    fs::write(out.join("series.csv"), series_csv(tr)?)?;
    for s in &tr.snapshots {
        let ext = ShapeFormat::of(&s.shape).extension();
        save_shape(&s.shape, &out.join(format!("snap_{}.{ext}", s.step)))?;
    }
    Ok(())
}

fn trajectory_report(cfg: &RunConfig, tr: &Trajectory) -> String {
    let first = tr.initial_state();
    let last = tr.final_state();
    let mut s = String::new();
    let _ = writeln!(s, "mode: {}", cfg.mode);
    let _ = writeln!(s, "flow: {}", tr.law);
    let _ = writeln!(s, "epsilon: {}", tr.epsilon);
    let _ = writeln!(s, "mu: {}", num(tr.mu));
    let _ = writeln!(s, "n: {}", tr.n);
    let _ = writeln!(s, "status: {}", tr.status);
    let _ = writeln!(s, "steps: {}", tr.steps());
    let _ = writeln!(s, "final time: {}", num(tr.final_time()));
    let _ = writeln!(s, "initial area: {}", num(first.shape.measure()));
    let _ = writeln!(s, "final area: {}", num(last.shape.measure()));
    let _ = writeln!(s, "initial circumradius: {}", num(tr.initial_circumradius));
    let _ = writeln!(s, "final circumradius: {}", num(last.shape.circumradius()));
    let _ = writeln!(s, "snapshots: {}", tr.snapshots.len());
    for w in &tr.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome, Error> {
    let law = velocity_registry().get(&cfg.flow)?;
    let params = cfg.flow_params()?;
    let shape = shape_of(cfg)?;
    let tr = run(&shape, law.as_ref(), &params)?;
    fs::create_dir_all(&cfg.out)?;
    write_trajectory(&tr, &cfg.out)?;
    let report = trajectory_report(cfg, &tr);
    fs::write(cfg.out.join("report.txt"), &report)?;
    Ok(Outcome::ok(report))
}

fn compare_table(runs: &[ComparisonRun]) -> String {
    let mut s = String::from("cfl,t_hat,t,vertex_max,hausdorff,density_steps,rescaled_steps\n");
    for r in runs {
        for row in &r.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                num(r.cfl),
                num(row.t_hat),
                num(row.t),
                num(row.vertex_max),
                num(row.hausdorff),
                r.density_steps,
                r.rescaled_steps
            );
        }
    }
    s
}

/// Error ratio between successive cfl halvings, per checkpoint.
pub fn convergence_ratios(runs: &[ComparisonRun]) -> Vec<Vec<f64>> {
    runs.windows(2)
        .map(|w| {
            w[0].rows
                .iter()
                .zip(&w[1].rows)
                .map(|(a, b)| a.vertex_max / b.vertex_max)
                .collect()
        })
        .collect()
}

pub fn compare(cfg: &RunConfig) -> Result<Outcome, Error> {
    let params = cfg.flow_params()?;
    let shape = shape_of(cfg)?;
    let t_hats = if cfg.checkpoints.is_empty() {
        vec![0.05, 0.1]
    } else {
        cfg.checkpoints.clone()
    };
    let mut runs = Vec::new();
    for k in 0..=cfg.refinements {
        let mut p = params.clone();
        p.cfl = params.cfl / 2f64.powi(k as i32);
        runs.push(equivalence_discrepancy(&shape, &p, &t_hats)?);
    }
    let table = compare_table(&runs);
    let mut report = table.clone();
    for (k, ratios) in convergence_ratios(&runs).iter().enumerate() {
        for (t_hat, r) in t_hats.iter().zip(ratios) {
            if !r.is_finite() {
                return Err(Error::NonFinite(format!("convergence ratio at t_hat {t_hat}")));
            }
            let _ = writeln!(report, "ratio cfl {} / {} at t_hat {}: {}", runs[k].cfl, runs[k + 1].cfl, t_hat, num(*r));
        }
    }
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("compare.csv"), &table)?;
    fs::write(cfg.out.join("report.txt"), &report)?;
    Ok(Outcome::ok(report))
}

/// Closed-form sphere radii of both flows on a uniform time grid that ends
/// at the extinction time (or `max_time` when the sphere never vanishes).
pub fn oracle_table(rho0: f64, ctx: &GaussianContext, max_time: f64, samples: usize) -> String {
    let end = gaussian_shrink_time(rho0, ctx).unwrap_or(max_time);
    let mut s = String::from("t,rho,t_hat,rho_hat,rho_mcf\n");
    for i in 0..samples {
        let t = if i + 1 == samples { end } else { end * i as f64 / (samples - 1) as f64 };
        let rho = sphere_radius_gaussian(rho0, t, ctx).radius().unwrap_or(0.0);
        let (t_hat, rho_hat, rho_mcf) = match time_forward(t, ctx) {
            Ok(th) => (
                Some(th),
                Some(ctx.hat_scale(t) * rho),
                Some(sphere_radius_mcf(rho0, th, ctx.n).radius().unwrap_or(0.0)),
            ),
            Err(_) => (None, None, None),
        };
        let _ = writeln!(s, "{},{},{},{},{}", num(t), num(rho), opt(t_hat), opt(rho_hat), opt(rho_mcf));
    }
    s
}

pub fn oracle(cfg: &RunConfig) -> Result<Outcome, Error> {
    let ctx = GaussianContext::new(cfg.epsilon, cfg.mu, cfg.n)?;
    let table = oracle_table(cfg.rho0, &ctx, cfg.max_time, cfg.samples);
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("oracle.csv"), &table)?;
    Ok(Outcome::ok(table))
}

pub fn validate_cmd(cfg: &RunConfig) -> Result<Outcome, Error> {
    let case = cfg
        .case
        .as_deref()
        .ok_or_else(|| Error::Config("validate needs a case (--case)".into()))?;
    let params = cfg.flow_params()?;
    let shape = shape_of(cfg)?;
    let mut vc = ValidationConfig {
        tol: cfg.tol,
        p0: cfg.p0.clone(),
        ..ValidationConfig::default()
    };
    if !cfg.checkpoints.is_empty() {
        vc.checkpoints = cfg.checkpoints.clone();
    }
    if let Some(p) = &vc.p0 {
        if p.len() != shape.ambient_dim() {
            return Err(Error::Config(format!(
                "p0 has {} components, the shape lives in dimension {}",
                p.len(),
                shape.ambient_dim()
            )));
        }
    }
    let (report, tr) = validate(case, &shape, &params, &vc)?;
    if report.clauses.iter().any(|c| !c.value.is_finite() || !c.bound.is_finite()) {
        return Err(Error::NonFinite(format!("validation of case {case} produced a non-finite clause value")));
    }
    fs::create_dir_all(&cfg.out)?;
    if let Some(tr) = &tr {
        fs::write(cfg.out.join("series.csv"), series_csv(tr)?)?;
    }
    let text = report.to_text();
    fs::write(cfg.out.join("report.txt"), &text)?;
    fs::write(cfg.out.join("report.kv"), report.to_kv())?;
    Ok(Outcome {
        exit_code: if report.passed() { 0 } else { 1 },
        summary: text,
    })
}

pub fn conformality(cfg: &RunConfig) -> Result<Outcome, Error> {
    let params = cfg.flow_params()?;
    let ctx = GaussianContext::new(cfg.epsilon, cfg.mu, cfg.n)?;
    let density = params.density.clone();
    let dphi = |r: f64| density.dphi(r, &ctx).unwrap_or(f64::NAN);
    let mut s = String::from("r,dphi,dphi_over_r,defect\n");
    // keep the central difference inside the sampled range
    let hi = cfg.r_max / (1.0 + CONFORMALITY_STEP);
    for i in 1..=cfg.samples {
        let r = hi * i as f64 / cfg.samples as f64;
        let d = conformality_defect(dphi, &[r]);
        if !d.is_finite() {
            return Err(Error::NonFinite(format!("conformality defect at r = {r}")));
        }
        let _ = writeln!(s, "{},{},{},{}", num(r), num(dphi(r)), num(dphi(r) / r), num(d));
    }
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("conformality.csv"), &s)?;
    Ok(Outcome::ok(s))
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, Error> {
    match cfg.mode {
        Mode::Simulate => simulate(cfg),
        Mode::Compare => compare(cfg),
        Mode::Oracle => oracle(cfg),
        Mode::Validate => validate_cmd(cfg),
        Mode::Conformality => conformality(cfg),
    }
}
