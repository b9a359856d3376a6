//! Validators for the theorem on convex hypersurfaces under Gaussian-type
//! densities. Each validator checks its hypotheses on the initial shape,
//! adjusts the run, and judges the trajectory clause by clause.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::Error;
use crate::flow::{run, DensityFlow, FlowParams, Status, Trajectory};
use crate::geom::{max_vertex_distance, shape_hausdorff, Shape};
use crate::registry::Registry;
use crate::transforms::{
    gaussian_shrink_time, lifetime_bound, rescale_to_hat, sphere_radius_mcf, time_forward, Epsilon, GaussianContext,
};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn scaled(v: &[f64], f: f64) -> Vec<f64> {
    v.iter().map(|x| x * f).collect()
}

/// One judged statement.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub id: String,
    pub pass: bool,
    pub value: f64,
    pub bound: f64,
    pub tol: f64,
    /// Reported only; never fails the report.
    pub informational: bool,
    pub note: String,
}

impl Clause {
    fn new(id: &str, pass: bool, value: f64, bound: f64, tol: f64, note: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            pass,
            value,
            bound,
            tol,
            informational: false,
            note: note.into(),
        }
    }

    fn info(id: &str, value: f64, note: impl Into<String>) -> Self {
        Self {
            informational: true,
            ..Self::new(id, true, value, 0.0, 0.0, note)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub case: String,
    /// False when the hypotheses do not hold; the clause list then holds
    /// only the failed hypothesis.
    pub applicable: bool,
    pub clauses: Vec<Clause>,
    pub status: String,
    pub terminal_time: f64,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.applicable && self.clauses.iter().all(|c| c.informational || c.pass)
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    /// `clause=<id> pass=<bool> value=<num> bound=<num> tol=<num>` per line.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            let _ = writeln!(
                out,
                "clause={} pass={} value={:.16e} bound={:.16e} tol={:.16e}",
                c.id, c.pass, c.value, c.bound, c.tol
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "case: {}", self.case);
        let _ = writeln!(out, "applicable: {}", self.applicable);
        let _ = writeln!(out, "status: {}", self.status);
        let _ = writeln!(out, "terminal time: {:.16e}", self.terminal_time);
        for c in &self.clauses {
            let verdict = if c.informational {
                "INFO"
            } else if c.pass {
                "PASS"
            } else {
                "FAIL"
            };
            let _ = writeln!(
                out,
                "[{verdict}] {}: value {:.6e}, bound {:.6e}, tol {:.1e}. {}",
                c.id, c.value, c.bound, c.tol, c.note
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

/// Tolerances and choices shared by the validators.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    /// Relative slack on time and size bounds.
    pub tol: f64,
    /// Decomposition point; chosen from the initial shape when `None`.
    pub p0: Option<Vec<f64>>,
    /// bii runs stop once the inradius reaches this multiple of 1/μ.
    pub expand_multiple: f64,
    /// Allowed rise of the roundness late in a shrinking run.
    pub roundness_rise_tol: f64,
    /// Allowed containment violation, relative to the ball radius.
    pub containment_tol: f64,
    /// Fixed-point drift and translation tolerances, in units of 1/μ.
    pub drift_tol: f64,
    pub hausdorff_tol: f64,
    /// How close to a sphere of radius 1/μ the biii initial data must be.
    pub sphere_tol: f64,
    pub checkpoints: Vec<f64>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            tol: 0.02,
            p0: None,
            expand_multiple: 10.0,
            roundness_rise_tol: 1e-3,
            containment_tol: 1e-3,
            drift_tol: 5e-3,
            hausdorff_tol: 1e-2,
            sphere_tol: 1e-2,
            checkpoints: vec![0.5, 1.0],
        }
    }
}

/// Decomposition point and reference radius chosen from the initial shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub p0: Vec<f64>,
    pub radius: f64,
    pub hypothesis: Clause,
}

pub trait TheoremValidator: Send + Sync {
    fn case(&self) -> &str;

    fn epsilon(&self) -> Epsilon;

    /// Checks the hypotheses; `Err` carries the failed hypothesis clause.
    fn hypotheses(&self, initial: &Shape, ctx: &GaussianContext, cfg: &ValidationConfig) -> Result<Setup, Clause>;

    fn configure(&self, _params: &mut FlowParams, _setup: &Setup, _cfg: &ValidationConfig) {}

    fn check(
        &self,
        initial: &Shape,
        tr: &Trajectory,
        params: &FlowParams,
        setup: &Setup,
        cfg: &ValidationConfig,
    ) -> Vec<Clause>;

    fn notes(&self) -> Vec<String> {
        Vec::new()
    }
}

fn convexity_hypothesis(initial: &Shape) -> Result<(), Clause> {
    if initial.is_convex() {
        Ok(())
    } else {
        Err(Clause::new("hypothesis", false, 0.0, 1.0, 0.0, "initial shape is not convex"))
    }
}

/// Largest rise of the roundness over the last quarter of its samples.
fn late_roundness(tr: &Trajectory, cfg: &ValidationConfig) -> Clause {
    let samples: Vec<f64> = tr.series().filter_map(|r| r.roundness).collect();
    let tail = &samples[samples.len() - (samples.len() / 4).max(2).min(samples.len())..];
    let rise = tail.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Clause::new(
        "roundness_late",
        tail.len() >= 2 && rise <= cfg.roundness_rise_tol,
        rise,
        0.0,
        cfg.roundness_rise_tol,
        format!("largest roundness increase over the last {} samples", tail.len()),
    )
}

fn shrink_clause(tr: &Trajectory, params: &FlowParams) -> Clause {
    let gate = params.shrink_diameter_tol * tr.initial_circumradius;
    let diameter = tr.final_state().shape.diameter();
    Clause::new(
        "shrunk_to_point",
        tr.status == Status::ShrunkToPoint,
        diameter,
        gate,
        0.0,
        format!("terminal status {}", tr.status),
    )
}

/// ε = +1. Part 1 is the lifetime bound `ln(1 + μ²R²)/(2nμ²)`, part 2 the
/// round point and the bound on the limit point; `None` checks both.
#[derive(Debug, Default)]
pub struct CaseA {
    pub part: Option<u8>,
}

impl TheoremValidator for CaseA {
    fn case(&self) -> &str {
        match self.part {
            Some(1) => "a1",
            Some(2) => "a2",
            _ => "a",
        }
    }

    fn epsilon(&self) -> Epsilon {
        Epsilon::Plus
    }

    fn hypotheses(&self, initial: &Shape, _ctx: &GaussianContext, _cfg: &ValidationConfig) -> Result<Setup, Clause> {
        convexity_hypothesis(initial)?;
        let (center, radius) = initial.circumball_parts();
        Ok(Setup {
            p0: center,
            radius,
            hypothesis: Clause::new("hypothesis", true, radius, 0.0, 0.0, "convex; R is the circumradius"),
        })
    }

    fn check(&self, initial: &Shape, tr: &Trajectory, params: &FlowParams, setup: &Setup, cfg: &ValidationConfig) -> Vec<Clause> {
        let ctx = tr.context();
        let t = tr.final_time();
        let r = setup.radius;
        let lifetime = lifetime_bound(r, &ctx);
        let rate = ctx.rate();
        let inner = (ctx.mu * ctx.mu * r * r + 1.0 - (2.0 * rate * t).exp()).max(0.0).sqrt() / ctx.mu;
        let point_bound = (-rate * t).exp() * (inner + initial.max_vertex_norm());
        let gate = params.shrink_diameter_tol * tr.initial_circumradius;
        let point = norm(&tr.final_state().shape.centroid());
        let mut clauses = vec![shrink_clause(tr, params)];
        if self.part != Some(2) {
            clauses.push(Clause::new(
                "lifetime_bound",
                tr.status == Status::ShrunkToPoint && t <= lifetime * (1.0 + cfg.tol),
                t,
                lifetime,
                cfg.tol,
                "T <= ln(1 + mu^2 R^2)/(2 n mu^2)",
            ));
        }
        if self.part != Some(1) {
            clauses.push(Clause::new(
                "limit_point",
                point <= point_bound * (1.0 + cfg.tol) + gate,
                point,
                point_bound,
                cfg.tol,
                "|p_T| from the terminal centroid",
            ));
            clauses.push(late_roundness(tr, cfg));
        }
        clauses
    }
}

/// ε = −1 with the shape inside `B_{1/μ}` after recentring.
#[derive(Debug, Default)]
pub struct CaseBi;

impl TheoremValidator for CaseBi {
    fn case(&self) -> &str {
        "bi"
    }

    fn epsilon(&self) -> Epsilon {
        Epsilon::Minus
    }

    fn hypotheses(&self, initial: &Shape, ctx: &GaussianContext, cfg: &ValidationConfig) -> Result<Setup, Clause> {
        convexity_hypothesis(initial)?;
        let (center, radius) = initial.circumball_parts();
        let limit = ctx.fixed_radius();
        if radius >= limit {
            return Err(Clause::new(
                "hypothesis",
                false,
                radius,
                limit,
                0.0,
                "circumradius must be below 1/mu",
            ));
        }
        let p0 = match &cfg.p0 {
            Some(p) => p.clone(),
            None if initial.max_vertex_norm() < limit => vec![0.0; center.len()],
            None => center,
        };
        Ok(Setup {
            p0,
            radius,
            hypothesis: Clause::new("hypothesis", true, radius, limit, 0.0, "convex with circumradius below 1/mu"),
        })
    }

    fn check(&self, _initial: &Shape, tr: &Trajectory, params: &FlowParams, setup: &Setup, cfg: &ValidationConfig) -> Vec<Clause> {
        let ctx = tr.context();
        let t = tr.final_time();
        let limit = ctx.fixed_radius();
        let sphere_time = gaussian_shrink_time(setup.radius, &ctx).unwrap_or(f64::INFINITY);
        let margin = tr
            .snapshots
            .iter()
            .map(|s| {
                let offset = scaled(&setup.p0, ctx.hat_scale(s.t).recip());
                let recentred = s.shape.translated(&scaled(&offset, -1.0));
                limit - recentred.max_vertex_norm()
            })
            .fold(f64::INFINITY, f64::min);
        let offset = scaled(&setup.p0, ctx.hat_scale(t).recip());
        let centroid = tr.final_state().shape.centroid();
        let tilde: Vec<f64> = centroid.iter().zip(&offset).map(|(a, b)| a - b).collect();
        vec![
            shrink_clause(tr, params),
            Clause::new(
                "finite_lifetime",
                tr.status == Status::ShrunkToPoint && t <= sphere_time * (1.0 + cfg.tol),
                t,
                sphere_time,
                cfg.tol,
                "T finite and below the shrink time of the circumsphere",
            ),
            Clause::new(
                "containment",
                margin > 0.0,
                margin,
                0.0,
                0.0,
                format!("min over {} snapshots of 1/mu - max|F~|", tr.snapshots.len()),
            ),
            Clause::new(
                "limit_point",
                norm(&tilde) < limit,
                norm(&tilde),
                limit,
                0.0,
                "recentred limit point inside B_{1/mu}",
            ),
            late_roundness(tr, cfg),
        ]
    }

    fn notes(&self) -> Vec<String> {
        vec!["curvature pinching replaced by the ball condition (circumradius < 1/mu)".into()]
    }
}

/// Step cap for bii runs. Spheres attain the containment bound with
/// equality, so the Euler error must stay below the containment tolerance.
pub const BII_MAX_DT: f64 = 1e-3;

/// ε = −1 with `B_{1/μ}` inside the recentred shape: expansion forever.
#[derive(Debug, Default)]
pub struct CaseBii;

impl TheoremValidator for CaseBii {
    fn case(&self) -> &str {
        "bii"
    }

    fn epsilon(&self) -> Epsilon {
        Epsilon::Minus
    }

    fn hypotheses(&self, initial: &Shape, ctx: &GaussianContext, cfg: &ValidationConfig) -> Result<Setup, Clause> {
        convexity_hypothesis(initial)?;
        let (center, inradius) = initial
            .inball_parts()
            .map_err(|e| Clause::new("hypothesis", false, 0.0, 0.0, 0.0, e.to_string()))?;
        let limit = ctx.fixed_radius();
        if inradius <= limit {
            return Err(Clause::new(
                "hypothesis",
                false,
                inradius,
                limit,
                0.0,
                "inradius must exceed 1/mu",
            ));
        }
        let p0 = match &cfg.p0 {
            Some(p) => p.clone(),
            None if initial.min_facet_offset() >= limit => vec![0.0; center.len()],
            None => center,
        };
        let radius = initial.translated(&scaled(&p0, -1.0)).min_facet_offset();
        Ok(Setup {
            p0,
            radius,
            hypothesis: Clause::new("hypothesis", true, inradius, limit, 0.0, "convex with inradius above 1/mu"),
        })
    }

    fn configure(&self, params: &mut FlowParams, _setup: &Setup, cfg: &ValidationConfig) {
        params.max_inradius = Some(cfg.expand_multiple / params.mu);
        params.fixed_point_steps = 0;
        params.max_dt = params.max_dt.min(BII_MAX_DT);
    }

    fn notes(&self) -> Vec<String> {
        vec![
            "curvature pinching replaced by the ball condition (inradius > 1/mu)".into(),
            format!("time step capped at {BII_MAX_DT:e}"),
        ]
    }

    fn check(&self, _initial: &Shape, tr: &Trajectory, _params: &FlowParams, setup: &Setup, cfg: &ValidationConfig) -> Vec<Clause> {
        let ctx = tr.context();
        let target = cfg.expand_multiple / ctx.mu;
        let inradii: Vec<f64> = tr.series().filter_map(|r| r.inradius).collect();
        let min_increase = inradii.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let final_inradius = inradii.last().copied().unwrap_or(0.0);

        let mut containment = f64::INFINITY;
        let mut last_hat: Option<Shape> = None;
        for s in &tr.snapshots {
            let Ok(t_hat) = time_forward(s.t, &ctx) else { continue };
            let offset = scaled(&setup.p0, ctx.hat_scale(s.t).recip());
            let hat = rescale_to_hat(&s.shape.translated(&scaled(&offset, -1.0)), s.t, &ctx);
            if let Some(r) = sphere_radius_mcf(setup.radius, t_hat, ctx.n).radius() {
                containment = containment.min((hat.min_facet_offset() - r) / setup.radius);
            }
            last_hat = Some(hat);
        }
        let hat = last_hat.expect("trajectory has snapshots");
        let hat_roundness = super::roundness(&hat).unwrap_or(f64::NAN);
        let origin: Vec<f64> = scaled(&setup.p0, -1.0);
        let d = hat.distance_to(&origin);
        let (code, word) = if d <= 1e-9 * hat.diameter() {
            (1.0, "halfspace")
        } else if hat.contains_point(&origin) {
            (0.0, "all of space")
        } else {
            (2.0, "empty set (escapes to infinity)")
        };
        vec![
            Clause::new(
                "expands",
                tr.status == Status::TimeLimit && final_inradius >= target,
                final_inradius,
                target,
                0.0,
                format!("terminal status {}", tr.status),
            ),
            Clause::new(
                "inradius_increasing",
                inradii.len() >= 2 && min_increase > 0.0,
                min_increase,
                0.0,
                0.0,
                format!("smallest increment over {} samples", inradii.len()),
            ),
            Clause::new(
                "contains_ball",
                containment >= -cfg.containment_tol,
                containment,
                0.0,
                cfg.containment_tol,
                "rescaled recentred shape contains B_{sqrt(R^2 - 2 n t_hat)}",
            ),
            Clause::info(
                "terminal_rescaled_roundness",
                hat_roundness,
                "informational; non-spherical limits expected in general",
            ),
            Clause::info("limit_domain", code, format!("domain tends to {word}")),
        ]
    }
}

/// ε = −1, the sphere of radius 1/μ: fixed at the origin, translating
/// otherwise.
#[derive(Debug, Default)]
pub struct CaseBiii;

impl CaseBiii {
    fn is_centred(setup: &Setup, mu: f64) -> bool {
        norm(&setup.p0) <= 1e-9 / mu
    }
}

impl TheoremValidator for CaseBiii {
    fn case(&self) -> &str {
        "biii"
    }

    fn epsilon(&self) -> Epsilon {
        Epsilon::Minus
    }

    fn hypotheses(&self, initial: &Shape, ctx: &GaussianContext, cfg: &ValidationConfig) -> Result<Setup, Clause> {
        convexity_hypothesis(initial)?;
        let (center, radius) = initial.circumball_parts();
        let limit = ctx.fixed_radius();
        let round = super::roundness(initial).unwrap_or(f64::INFINITY);
        let off = (radius - limit).abs() / limit;
        if off > cfg.sphere_tol || round > cfg.sphere_tol {
            return Err(Clause::new(
                "hypothesis",
                false,
                off.max(round),
                0.0,
                cfg.sphere_tol,
                "initial shape must be a sphere of radius 1/mu",
            ));
        }
        if let Some(p) = &cfg.p0 {
            let gap = p.iter().zip(&center).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() / limit;
            if p.len() != center.len() || gap > cfg.sphere_tol {
                return Err(Clause::new(
                    "hypothesis",
                    false,
                    gap,
                    0.0,
                    cfg.sphere_tol,
                    "initial sphere must be centred at p0",
                ));
            }
        }
        Ok(Setup {
            p0: center,
            radius,
            hypothesis: Clause::new("hypothesis", true, off.max(round), 0.0, cfg.sphere_tol, "sphere of radius 1/mu"),
        })
    }

    fn configure(&self, params: &mut FlowParams, _setup: &Setup, cfg: &ValidationConfig) {
        params.max_time = cfg.checkpoints.iter().copied().fold(0.0, f64::max);
        params.fixed_point_steps = 0;
        params.checkpoints = cfg.checkpoints.clone();
    }

    fn check(&self, initial: &Shape, tr: &Trajectory, params: &FlowParams, setup: &Setup, cfg: &ValidationConfig) -> Vec<Clause> {
        let ctx = tr.context();
        let unit = ctx.fixed_radius();
        if Self::is_centred(setup, ctx.mu) {
            // the discrete sphere is not exactly stationary; its residual
            // speed must not grow beyond the initial calibration
            let calibration = tr.series().next().map_or(0.0, |r| r.max_speed);
            let residual = tr.series().map(|r| r.max_speed).fold(0.0, f64::max);
            let bound = calibration * (1.0 + cfg.tol) + params.fixed_point_tol;
            let drift = tr
                .snapshots
                .iter()
                .filter_map(|s| max_vertex_distance(&s.shape, initial).ok())
                .fold(0.0, f64::max);
            return vec![
                Clause::new(
                    "fixed_point",
                    residual <= bound && tr.status == Status::TimeLimit,
                    residual,
                    bound,
                    cfg.tol,
                    format!("max |v| over the run to t = {:.3}, status {}", tr.final_time(), tr.status),
                ),
                Clause::new(
                    "drift",
                    drift < cfg.drift_tol * unit,
                    drift,
                    cfg.drift_tol * unit,
                    0.0,
                    "max vertex displacement from the initial shape",
                ),
            ];
        }
        let mut worst = 0.0f64;
        let mut seen = 0;
        for &t in &cfg.checkpoints {
            if let Some(s) = tr.snapshot_at(t) {
                let shift = scaled(&setup.p0, ctx.hat_scale(t).recip() - 1.0);
                if let Ok(d) = shape_hausdorff(&s.shape, &initial.translated(&shift)) {
                    worst = worst.max(d);
                    seen += 1;
                }
            }
        }
        vec![Clause::new(
            "translation",
            seen == cfg.checkpoints.len() && worst < cfg.hausdorff_tol * unit,
            worst,
            cfg.hausdorff_tol * unit,
            0.0,
            format!("Hausdorff distance to x + e^(n mu^2 t) p0 at {seen} checkpoints"),
        )]
    }
}

pub fn validator_registry() -> Registry<dyn TheoremValidator> {
    let mut reg: Registry<dyn TheoremValidator> = Registry::new("validation case");
    reg.register("a", Arc::new(CaseA { part: None }));
    reg.register("a1", Arc::new(CaseA { part: Some(1) }));
    reg.register("a2", Arc::new(CaseA { part: Some(2) }));
    reg.register("bi", Arc::new(CaseBi));
    reg.register("bii", Arc::new(CaseBii));
    reg.register("biii", Arc::new(CaseBiii));
    reg
}

fn inapplicable(case: &str, clause: Clause) -> ValidationReport {
    ValidationReport {
        case: case.into(),
        applicable: false,
        clauses: vec![clause],
        status: "not run".into(),
        terminal_time: 0.0,
        notes: Vec::new(),
    }
}

/// Checks hypotheses, runs the density flow with the case's settings and
/// judges the result. The trajectory is `None` when the case is inapplicable.
pub fn validate(
    case: &str,
    initial: &Shape,
    params: &FlowParams,
    cfg: &ValidationConfig,
) -> Result<(ValidationReport, Option<Trajectory>), Error> {
    let validator = validator_registry().get(case)?;
    let ctx = params.context(initial.n())?;
    if params.epsilon != validator.epsilon() || !params.density.is_gaussian() {
        let clause = Clause::new(
            "hypothesis",
            false,
            params.epsilon.value(),
            validator.epsilon().value(),
            0.0,
            format!("case {case} needs the gaussian density with epsilon {}", validator.epsilon()),
        );
        return Ok((inapplicable(case, clause), None));
    }
    let setup = match validator.hypotheses(initial, &ctx, cfg) {
        Ok(s) => s,
        Err(clause) => return Ok((inapplicable(case, clause), None)),
    };
    let mut p = params.clone();
    validator.configure(&mut p, &setup, cfg);
    let tr = run(initial, &DensityFlow, &p)?;
    let mut clauses = vec![setup.hypothesis.clone()];
    clauses.extend(validator.check(initial, &tr, &p, &setup, cfg));
    let mut notes = validator.notes();
    if norm(&setup.p0) > 1e-12 * setup.radius {
        notes.push(format!("p0 = {:?}", setup.p0));
    }
    let report = ValidationReport {
        case: case.into(),
        applicable: true,
        clauses,
        status: tr.status.to_string(),
        terminal_time: tr.final_time(),
        notes,
    };
    Ok((report, Some(tr)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::generate::{circle, ellipse};

    fn circ(r: f64, c: [f64; 2], m: usize) -> Shape {
        circle(r, c, m).unwrap().into()
    }

    fn params(eps: Epsilon) -> FlowParams {
        FlowParams::new(eps, 1.0)
    }

    fn check(case: &str, s: &Shape, p: &FlowParams) -> (ValidationReport, Option<Trajectory>) {
        let out = validate(case, s, p, &ValidationConfig::default()).unwrap();
        assert!(out.0.passed(), "{}", out.0.to_text());
        out
    }

    #[test]
    fn case_a_centred_circle_meets_bound() {
        let (r, _) = check("a", &circ(1.0, [0.0, 0.0], 256), &params(Epsilon::Plus));
        let t = r.terminal_time;
        assert!((t / (0.5 * 2f64.ln()) - 1.0).abs() < 0.02, "{t}");
        let ids: Vec<&str> = r.clauses.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["hypothesis", "shrunk_to_point", "lifetime_bound", "limit_point", "roundness_late"]);
    }

    #[test]
    fn case_a_off_centre_circle() {
        let (r, tr) = check("a", &circ(1.0, [0.3, 0.0], 256), &params(Epsilon::Plus));
        // the centre moves along e^{−nμ²t}·(0.3, 0)
        let c = tr.unwrap().final_state().shape.centroid();
        let expected = 0.3 * (-r.terminal_time).exp();
        assert!((c[0] - expected).abs() < 1e-3 && c[1].abs() < 1e-3, "{c:?} vs {expected}");
    }

    #[test]
    fn case_a_ellipse() {
        let mut p = params(Epsilon::Plus);
        p.resample_every = 10;
        check("a", &ellipse(1.5, 1.0, 128).unwrap().into(), &p);
    }

    #[test]
    fn parts_of_case_a() {
        let s = circ(1.0, [0.0, 0.0], 128);
        let (r1, _) = check("a1", &s, &params(Epsilon::Plus));
        assert!(r1.clause("lifetime_bound").is_some() && r1.clause("limit_point").is_none());
        let (r2, _) = check("a2", &s, &params(Epsilon::Plus));
        assert!(r2.clause("lifetime_bound").is_none() && r2.clause("limit_point").is_some());
    }

    #[test]
    fn case_bi_small_circle() {
        let (r, _) = check("bi", &circ(0.5, [0.0, 0.0], 256), &params(Epsilon::Minus));
        assert!((r.terminal_time / 0.143841 - 1.0).abs() < 0.02, "{}", r.terminal_time);
        assert!(r.clause("containment").unwrap().value > 0.0);
    }

    #[test]
    fn case_bii_expanding_circle() {
        let (r, tr) = check("bii", &circ(2.0, [0.0, 0.0], 128), &params(Epsilon::Minus));
        assert_eq!(r.status, "time_limit");
        for rec in tr.unwrap().series() {
            let exact = 1.0 + 3.0 * (2.0 * rec.t).exp();
            assert!((rec.circumradius.powi(2) / exact - 1.0).abs() < 0.02);
        }
        assert_eq!(r.clause("limit_domain").unwrap().value, 0.0);
    }

    #[test]
    fn case_biii_translates() {
        let mut p = params(Epsilon::Minus);
        p.cfl = 0.25;
        let (r, _) = check("biii", &circ(1.0, [0.2, 0.0], 128), &p);
        assert!(r.clause("translation").unwrap().value < 1e-2);
    }

    #[test]
    fn case_biii_checks_the_given_p0() {
        let mut cfg = ValidationConfig {
            p0: Some(vec![0.2, 0.0]),
            ..ValidationConfig::default()
        };
        let (r, _) = validate("biii", &circ(1.0, [0.0, 0.0], 64), &params(Epsilon::Minus), &cfg).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.clause("hypothesis").unwrap().note, "initial sphere must be centred at p0");
        cfg.checkpoints = vec![0.1];
        let (r, _) = validate("biii", &circ(1.0, [0.2, 0.0], 64), &params(Epsilon::Minus), &cfg).unwrap();
        assert!(r.applicable && r.passed());
    }

    #[test]
    fn inapplicable_cases() {
        let cfg = ValidationConfig::default();
        let star = crate::geom::Curve2::from_xy(&[
            [1.0, 0.0],
            [0.3, 0.3],
            [0.0, 1.0],
            [-0.3, 0.3],
            [-1.0, 0.0],
            [-0.3, -0.3],
            [0.0, -1.0],
            [0.3, -0.3],
        ])
        .unwrap();
        let (r, tr) = validate("a", &star.into(), &params(Epsilon::Plus), &cfg).unwrap();
        assert!(!r.applicable && !r.passed() && tr.is_none());
        let (r, _) = validate("bi", &circ(0.5, [0.0, 0.0], 64), &params(Epsilon::Plus), &cfg).unwrap();
        assert!(!r.applicable);
        let (r, _) = validate("bii", &circ(0.5, [0.0, 0.0], 64), &params(Epsilon::Minus), &cfg).unwrap();
        assert!(!r.applicable);
        assert!(validate("c", &circ(0.5, [0.0, 0.0], 64), &params(Epsilon::Minus), &cfg).is_err());
    }

    #[test]
    fn kv_lines() {
        let r = ValidationReport {
            case: "a".into(),
            applicable: true,
            clauses: vec![Clause::new("x", true, 0.5, 1.0, 0.02, "")],
            status: "shrunk_to_point".into(),
            terminal_time: 0.3,
            notes: vec![],
        };
        assert_eq!(
            r.to_kv(),
            "clause=x pass=true value=5.0000000000000000e-1 bound=1.0000000000000000e0 tol=2.0000000000000000e-2\n"
        );
    }
}
