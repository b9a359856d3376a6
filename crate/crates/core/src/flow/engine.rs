use crate::diagnostics::measures::{in_and_roundness, weighted_area_of};
use crate::error::{FlowError, GeomError};
use crate::flow::velocity::{VelocityField, VertexProbe};
use crate::flow::{FlowParams, FlowState, Status, StepRecord, Trajectory};
use crate::geom::{circumball, CurvatureField, Curve2, Hypersurface, Mesh3, Point, Shape};
use crate::transforms::GaussianContext;

/// Shape types the engine can evolve.
pub trait Evolve<const D: usize>: Hypersurface<D> + Into<Shape> {
    /// Tangential vertex redistribution: arc-length resampling for curves,
    /// neighbour relaxation for meshes.
    fn resample(&self) -> Option<Result<Self, GeomError>> {
        None
    }

    fn curvature_with_floor(&self, _min_angle: f64) -> Result<CurvatureField<D>, GeomError> {
        self.curvature_normal()
    }
}

impl Evolve<2> for Curve2 {
    fn resample(&self) -> Option<Result<Self, GeomError>> {
        Some(self.resample_arc_length())
    }
}

impl Evolve<3> for Mesh3 {
    fn resample(&self) -> Option<Result<Self, GeomError>> {
        Some(self.relax_tangential())
    }

    fn curvature_with_floor(&self, min_angle: f64) -> Result<CurvatureField<3>, GeomError> {
        self.curvature_normal_with_floor(min_angle)
    }
}

/// Per-vertex velocity together with the quantities it was built from.
#[derive(Debug, Clone)]
pub struct VelocityEval<const D: usize> {
    pub vectors: Vec<Point<D>>,
    pub normal_speed: Vec<f64>,
    pub field: CurvatureField<D>,
    pub tangential_coefficient: f64,
}

impl<const D: usize> VelocityEval<D> {
    pub fn max_speed(&self) -> f64 {
        self.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Velocity of every vertex under `law` at time `time` (t or t̂).
pub fn evaluate_velocity<const D: usize, S: Evolve<D>>(
    s: &S,
    law: &dyn VelocityField,
    params: &FlowParams,
    ctx: &GaussianContext,
    time: f64,
) -> Result<VelocityEval<D>, FlowError> {
    let field = s.curvature_with_floor(params.min_angle)?;
    let c = law.tangential_coefficient(time, params, ctx)?;
    let mut vectors = Vec::with_capacity(field.len());
    let mut normal_speed = Vec::with_capacity(field.len());
    for (i, p) in s.vertices().iter().enumerate() {
        let normal = field.normals[i];
        let support = p.dot(&normal);
        let probe = VertexProbe {
            index: i,
            curvature: field.curvature[i],
            radius: p.norm(),
            support,
        };
        let speed = law.normal_speed(&probe, params, ctx)?;
        let mut v = normal * speed;
        if c != 0.0 {
            v += (p - normal * support) * c;
        }
        vectors.push(v);
        normal_speed.push(speed);
    }
    Ok(VelocityEval {
        vectors,
        normal_speed,
        field,
        tangential_coefficient: c,
    })
}

/// Velocity vectors of a [`Shape`], padded to three components.
pub fn velocity(shape: &Shape, law: &dyn VelocityField, params: &FlowParams, time: f64) -> Result<Vec<[f64; 3]>, FlowError> {
    let ctx = params.context(shape.n())?;
    Ok(match shape {
        Shape::Curve(c) => evaluate_velocity(c, law, params, &ctx, time)?
            .vectors
            .iter()
            .map(|v| [v.x, v.y, 0.0])
            .collect(),
        Shape::Mesh(m) => evaluate_velocity(m, law, params, &ctx, time)?
            .vectors
            .iter()
            .map(|v| [v.x, v.y, v.z])
            .collect(),
    })
}

/// `min(max_dt, cfl·h_min/max(|v|, floor), cfl·h_min²)`.
pub fn adaptive_dt(h_min: f64, max_speed: f64, params: &FlowParams) -> Result<f64, FlowError> {
    if !(h_min > 0.0) {
        return Err(GeomError::Other(format!("minimum edge length {h_min} is not positive")).into());
    }
    let advective = params.cfl * h_min / max_speed.max(params.speed_floor);
    let diffusive = params.cfl * h_min * h_min;
    Ok(params.max_dt.min(advective).min(diffusive))
}

fn is_numerical(e: &FlowError) -> bool {
    matches!(e, FlowError::Geom(GeomError::NonFinite { .. }))
}

fn landing_tol(t: f64) -> f64 {
    1e-12 * t.abs().max(1.0)
}

/// One explicit Euler step with the adaptive step size; no termination
/// checks besides geometric validity.
pub fn step(state: &FlowState, law: &dyn VelocityField, params: &FlowParams) -> Result<FlowState, FlowError> {
    if state.status != Status::Running {
        return Err(FlowError::NotRunning);
    }
    fn inner<const D: usize, S: Evolve<D>>(
        s: &S,
        t: f64,
        law: &dyn VelocityField,
        params: &FlowParams,
    ) -> Result<(Shape, f64, Option<String>), FlowError> {
        let ctx = params.context(S::N)?;
        let eval = evaluate_velocity(s, law, params, &ctx, t)?;
        let dt = adaptive_dt(s.min_edge_length(), eval.max_speed(), params)?;
        let moved: Vec<Point<D>> = s.vertices().iter().zip(&eval.vectors).map(|(p, v)| p + v * dt).collect();
        match s.displaced(moved) {
            Ok(next) => Ok((next.into(), dt, None)),
            Err(e @ GeomError::NonFinite { .. }) => Err(e.into()),
            Err(e) => Ok((s.clone().into(), dt, Some(e.to_string()))),
        }
    }
    let (shape, dt, failure) = match &state.shape {
        Shape::Curve(c) => inner(c, state.t, law, params)?,
        Shape::Mesh(m) => inner(m, state.t, law, params)?,
    };
    Ok(match failure {
        None => FlowState {
            shape,
            t: state.t + dt,
            step: state.step + 1,
            status: Status::Running,
        },
        Some(why) => FlowState {
            shape,
            t: state.t,
            step: state.step,
            status: Status::Degenerate(why),
        },
    })
}

/// Integrates until a terminal status.
pub fn run(initial: &Shape, law: &dyn VelocityField, params: &FlowParams) -> Result<Trajectory, FlowError> {
    match initial {
        Shape::Curve(c) => run_surface(c, law, params),
        Shape::Mesh(m) => run_surface(m, law, params),
    }
}

struct Recorder<'a> {
    params: &'a FlowParams,
    ctx: GaussianContext,
    law: &'a dyn VelocityField,
}

impl Recorder<'_> {
    fn record<const D: usize, S: Evolve<D>>(
        &self,
        s: &S,
        eval: Option<&VelocityEval<D>>,
        step: usize,
        t: f64,
        full: bool,
    ) -> StepRecord {
        let (inradius, roundness) = if full { in_and_roundness(s) } else { (None, None) };
        let duals = eval.map(|_| s.dual_measures());
        let curvature_energy = match (eval, &duals) {
            (Some(e), Some(d)) => e.field.curvature.iter().zip(d).map(|(h, a)| h * h * a).sum(),
            _ => f64::NAN,
        };
        let density = if self.law.uses_density() {
            self.params.density.as_ref()
        } else {
            &crate::flow::Flat
        };
        StepRecord {
            step,
            t,
            dt: 0.0,
            area: s.measure(),
            enclosed: s.enclosed_measure(),
            weighted_area: weighted_area_of(s, density, &self.ctx),
            circumradius: circumball(s).radius,
            inradius,
            roundness,
            max_speed: eval.map_or(f64::NAN, |e| e.max_speed()),
            curvature_energy,
            max_norm: s.max_vertex_norm(),
            resampled: false,
        }
    }
}

/// Generic driver behind [`run`].
pub fn run_surface<const D: usize, S: Evolve<D>>(
    initial: &S,
    law: &dyn VelocityField,
    params: &FlowParams,
) -> Result<Trajectory, FlowError> {
    params.validate()?;
    let ctx = params.context(S::N)?;
    if params.resample_every > 0 && initial.resample().is_none() {
        return Err(FlowError::InvalidParams("resampling is not available for this shape type".into()));
    }
    let end_time = match law.time_limit(params, &ctx) {
        Some(limit) => params.max_time.min(limit),
        None => params.max_time,
    };
    let mut checkpoints: Vec<f64> = params
        .checkpoints
        .iter()
        .copied()
        .filter(|&c| c > 0.0 && c <= end_time)
        .collect();
    checkpoints.sort_by(f64::total_cmp);
    let grid = params.time_grid.as_deref();

    let rec = Recorder { params, ctx, law };
    let r0 = circumball(initial).radius;
    let gate = params.shrink_diameter_tol * r0;
    let sqrt_d = (D as f64).sqrt();

    let mut shape = initial.clone();
    let mut t = 0.0;
    let mut step = 0usize;
    let mut next_cp = 0usize;
    let mut quiet_steps = 0usize;
    let mut records = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let snapshot = |s: &S, t: f64, step: usize, status: Status| FlowState {
        shape: s.clone().into(),
        t,
        step,
        status,
    };
    let mut snapshots = vec![snapshot(&shape, t, step, Status::Running)];
    let mut last_snapshot_step = 0usize;

    let (status, terminal) = loop {
        let eval = match evaluate_velocity(&shape, law, params, &ctx, t) {
            Ok(e) => e,
            Err(e) if is_numerical(&e) => return Err(e),
            Err(FlowError::Geom(g)) => {
                let r = rec.record(&shape, None, step, t, true);
                break (Status::Degenerate(g.to_string()), r);
            }
            Err(e) => return Err(e),
        };
        if let Some(w) = eval.field.warnings.first() {
            if warnings.len() < 20 {
                warnings.push(format!("step {step}: {w}"));
            }
        }
        let full = step.is_multiple_of(params.diagnostics_every);
        let mut record = rec.record(&shape, Some(&eval), step, t, full);
        if !record.max_speed.is_finite() {
            return Err(GeomError::NonFinite { index: 0 }.into());
        }

        if params.fixed_point_steps > 0 && record.max_speed < params.fixed_point_tol {
            quiet_steps += 1;
            if quiet_steps >= params.fixed_point_steps {
                break (Status::FixedPoint, record);
            }
        } else {
            quiet_steps = 0;
        }
        if t >= end_time - landing_tol(end_time) || step >= params.max_steps {
            break (Status::TimeLimit, record);
        }
        if let (Some(limit), Some(r)) = (params.max_inradius, record.inradius) {
            if r >= limit {
                break (Status::TimeLimit, record);
            }
        }

        let (dt, t_next) = match grid {
            Some(g) => {
                if step + 1 >= g.len() {
                    break (Status::TimeLimit, record);
                }
                (g[step + 1] - g[step], g[step + 1])
            }
            None => {
                let mut dt = match adaptive_dt(shape.min_edge_length(), record.max_speed, params) {
                    Ok(dt) => dt,
                    Err(FlowError::Geom(g)) => break (Status::Degenerate(g.to_string()), record),
                    Err(e) => return Err(e),
                };
                let mut target = t + dt;
                let stop = checkpoints.get(next_cp).copied().unwrap_or(end_time).min(end_time);
                if target >= stop - landing_tol(stop) {
                    target = stop;
                    dt = stop - t;
                }
                (dt, target)
            }
        };

        record.dt = dt;
        let moved: Vec<Point<D>> = shape
            .vertices()
            .iter()
            .zip(&eval.vectors)
            .map(|(p, v)| p + v * dt)
            .collect();
        let next = match shape.displaced(moved) {
            Ok(s) => s,
            Err(e @ GeomError::NonFinite { .. }) => return Err(e.into()),
            Err(e) => {
                records.push(record);
                let r = rec.record(&shape, Some(&eval), step, t, true);
                break (Status::Degenerate(format!("step {step}: {e}")), r);
            }
        };
        step += 1;
        t = t_next;
        shape = next;
        if params.resample_every > 0 && step.is_multiple_of(params.resample_every) {
            match shape.resample() {
                Some(Ok(s)) => {
                    shape = s;
                    record.resampled = true;
                }
                Some(Err(e)) => {
                    records.push(record);
                    let r = rec.record(&shape, None, step, t, true);
                    break (Status::Degenerate(format!("resampling failed: {e}")), r);
                }
                None => {}
            }
        }
        records.push(record);

        if step.is_multiple_of(params.embedding_every) {
            if let Err(e) = shape.check_embedding() {
                let r = rec.record(&shape, None, step, t, true);
                break (Status::Degenerate(format!("step {step}: {e}")), r);
            }
        }

        let at_checkpoint = checkpoints
            .get(next_cp)
            .is_some_and(|&c| (t - c).abs() <= landing_tol(c));
        if at_checkpoint {
            next_cp += 1;
        }
        if at_checkpoint || step.is_multiple_of(params.snapshot_every) {
            snapshots.push(snapshot(&shape, t, step, Status::Running));
            last_snapshot_step = step;
        }

        if shape.bbox_diagonal() / sqrt_d < gate && shape.diameter() < gate {
            let eval = evaluate_velocity(&shape, law, params, &ctx, t).ok();
            let r = rec.record(&shape, eval.as_ref(), step, t, true);
            let status = match r.roundness {
                Some(q) if q < params.roundness_tol => Status::ShrunkToPoint,
                Some(q) => Status::Degenerate(format!("collapsed with roundness {q:.3e}")),
                None => Status::Degenerate("collapsed to a non-convex shape".into()),
            };
            break (status, r);
        }
    };

    let mut terminal = terminal;
    terminal.dt = 0.0;
    if terminal.inradius.is_none() && terminal.roundness.is_none() {
        let (i, q) = in_and_roundness(&shape);
        terminal.inradius = i;
        terminal.roundness = q;
    }
    if last_snapshot_step == step && snapshots.len() > 1 {
        snapshots.pop();
    }
    if step == 0 {
        snapshots.clear();
    }
    snapshots.push(snapshot(&shape, t, step, status.clone()));

    Ok(Trajectory {
        law: law.name().to_string(),
        time_variable: law.time_variable(),
        n: S::N,
        epsilon: params.epsilon,
        mu: params.mu,
        initial_circumradius: r0,
        snapshots,
        records,
        terminal,
        status,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{DensityFlow, OrdinaryFlow, RescaledFlow};
    use crate::transforms::Epsilon;
    use nalgebra::Vector2;
    use std::f64::consts::PI;

    fn circle(m: usize, r: f64, c: [f64; 2]) -> Curve2 {
        Curve2::new(
            (0..m)
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / m as f64;
                    Vector2::new(c[0] + r * th.cos(), c[1] + r * th.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    fn ellipse(m: usize, a: f64, b: f64) -> Curve2 {
        Curve2::new(
            (0..m)
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / m as f64;
                    Vector2::new(a * th.cos(), b * th.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    fn radius_spread(c: &Curve2) -> (f64, f64) {
        let r: Vec<f64> = c.vertices().iter().map(|p| p.norm()).collect();
        (r.iter().copied().fold(f64::INFINITY, f64::min), r.iter().copied().fold(0.0, f64::max))
    }

    #[test]
    fn fixed_point_has_zero_velocity() {
        let p = FlowParams::new(Epsilon::Minus, 1.0);
        let ctx = p.context(1).unwrap();
        let c = circle(512, 1.0, [0.0, 0.0]);
        let e = evaluate_velocity(&c, &DensityFlow, &p, &ctx, 0.0).unwrap();
        assert!(e.max_speed() < 1e-9);
        let st = FlowState {
            shape: c.clone().into(),
            t: 0.0,
            step: 0,
            status: Status::Running,
        };
        let next = step(&st, &DensityFlow, &p).unwrap();
        let dt = next.t;
        let moved = crate::geom::max_vertex_distance(&st.shape, &next.shape).unwrap();
        assert!(moved <= 1e-9 * dt);
    }

    #[test]
    fn expanding_circle_outward_speed() {
        let p = FlowParams::new(Epsilon::Minus, 1.0);
        let ctx = p.context(1).unwrap();
        let c = circle(256, 2.0, [0.0, 0.0]);
        let e = evaluate_velocity(&c, &DensityFlow, &p, &ctx, 0.0).unwrap();
        for s in &e.normal_speed {
            assert!((s - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn ordinary_flow_ignores_density() {
        let p = FlowParams::new(Epsilon::Plus, 3.0);
        let ctx = p.context(1).unwrap();
        let c = ellipse(64, 1.5, 1.0).translated(&Vector2::new(0.2, -0.4));
        let e = evaluate_velocity(&c, &OrdinaryFlow, &p, &ctx, 0.0).unwrap();
        for (v, (h, n)) in e.vectors.iter().zip(e.field.curvature.iter().zip(&e.field.normals)) {
            assert!((v + n * *h).norm() < 1e-15);
        }
    }

    #[test]
    fn one_euler_step_of_unit_circle() {
        let mut p = FlowParams::new(Epsilon::Plus, 1.0);
        p.max_dt = 1e-4;
        let st = FlowState {
            shape: circle(64, 1.0, [0.0, 0.0]).into(),
            t: 0.0,
            step: 0,
            status: Status::Running,
        };
        let next = step(&st, &OrdinaryFlow, &p).unwrap();
        assert_eq!(next.t, 1e-4);
        let (lo, hi) = radius_spread(next.shape.as_curve().unwrap());
        assert!((lo - (1.0 - 1e-4)).abs() < 1e-12 && (hi - (1.0 - 1e-4)).abs() < 1e-12);
    }

    #[test]
    fn adaptive_dt_bounds() {
        let p = FlowParams::new(Epsilon::Plus, 1.0);
        let slow = adaptive_dt(0.1, 0.0, &p).unwrap();
        assert!((slow - 0.25 * 0.1 * 0.1).abs() < 1e-18);
        let a = adaptive_dt(0.02, 5.0, &p).unwrap();
        let b = adaptive_dt(0.01, 5.0, &p).unwrap();
        assert!(b >= 0.25 * a && b <= a);
        assert!(adaptive_dt(0.0, 1.0, &p).is_err());
    }

    #[test]
    fn purely_normal_density_velocity() {
        let p = FlowParams::new(Epsilon::Minus, 1.3);
        let ctx = p.context(1).unwrap();
        let c = ellipse(128, 1.4, 0.7).translated(&Vector2::new(0.3, 0.1));
        let e = evaluate_velocity(&c, &DensityFlow, &p, &ctx, 0.0).unwrap();
        let vmax = e.max_speed();
        for (v, n) in e.vectors.iter().zip(&e.field.normals) {
            let tangent = Vector2::new(-n.y, n.x);
            assert!(v.dot(&tangent).abs() < 1e-12 * vmax);
        }
    }

    #[test]
    fn ordinary_velocity_translation_covariant() {
        let p = FlowParams::new(Epsilon::Plus, 1.0);
        let ctx = p.context(1).unwrap();
        let c = ellipse(96, 1.2, 0.9);
        let w = Vector2::new(3.0, -1.0);
        let a = evaluate_velocity(&c, &OrdinaryFlow, &p, &ctx, 0.0).unwrap();
        let b = evaluate_velocity(&c.translated(&w), &OrdinaryFlow, &p, &ctx, 0.0).unwrap();
        for (x, y) in a.vectors.iter().zip(&b.vectors) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn rescaled_velocity_on_centered_circle_is_normal() {
        let p = FlowParams::new(Epsilon::Plus, 1.0);
        let ctx = p.context(1).unwrap();
        let c = circle(64, 0.8, [0.0, 0.0]);
        let a = evaluate_velocity(&c, &RescaledFlow, &p, &ctx, 0.1).unwrap();
        let b = evaluate_velocity(&c, &OrdinaryFlow, &p, &ctx, 0.1).unwrap();
        for (x, y) in a.vectors.iter().zip(&b.vectors) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn length_decreases_at_gradient_rate() {
        let mut p = FlowParams::new(Epsilon::Plus, 1.0);
        let ctx = p.context(1).unwrap();
        let c = ellipse(128, 1.5, 1.0);
        let e = evaluate_velocity(&c, &OrdinaryFlow, &p, &ctx, 0.0).unwrap();
        let duals = c.dual_measures();
        let rate: f64 = e.vectors.iter().zip(&duals).map(|(v, a)| v.norm_squared() * a).sum();
        for dt in [1e-5, 5e-6] {
            p.max_dt = dt;
            let st = FlowState {
                shape: c.clone().into(),
                t: 0.0,
                step: 0,
                status: Status::Running,
            };
            let next = step(&st, &OrdinaryFlow, &p).unwrap();
            let dl = (next.shape.measure() - c.measure()) / dt;
            assert!(dl < 0.0);
            assert!((dl + rate).abs() < 50.0 * dt * rate, "{dl} vs {rate}");
        }
    }

    #[test]
    fn unit_circle_mcf_shrinks_at_one_half() {
        let p = FlowParams::new(Epsilon::Plus, 1.0);
        let tr = run_surface(&circle(512, 1.0, [0.0, 0.0]), &OrdinaryFlow, &p).unwrap();
        assert_eq!(tr.status, Status::ShrunkToPoint);
        assert!((tr.final_time() - 0.5).abs() < 0.01);
    }

    #[test]
    fn small_circle_shrinks_under_negative_gaussian() {
        let p = FlowParams::new(Epsilon::Minus, 1.0);
        let tr = run_surface(&circle(256, 0.5, [0.0, 0.0]), &DensityFlow, &p).unwrap();
        assert_eq!(tr.status, Status::ShrunkToPoint);
        let exact = -0.5 * 0.75f64.ln();
        assert!((tr.final_time() - exact).abs() < 0.02 * exact);
    }

    #[test]
    fn unit_circle_is_fixed_point() {
        let p = FlowParams::new(Epsilon::Minus, 1.0);
        let tr = run_surface(&circle(256, 1.0, [0.0, 0.0]), &DensityFlow, &p).unwrap();
        assert_eq!(tr.status, Status::FixedPoint);
    }

    #[test]
    fn convexity_preserved_on_snapshots() {
        let mut p = FlowParams::new(Epsilon::Plus, 1.0);
        p.resample_every = 10;
        let tr = run_surface(&ellipse(64, 1.6, 0.8), &DensityFlow, &p).unwrap();
        assert_eq!(tr.status, Status::ShrunkToPoint);
        assert!(tr.snapshots.len() > 3);
        for s in &tr.snapshots {
            assert!(s.shape.is_convex(), "non-convex at t = {}", s.t);
        }
        assert!(tr.any_resampled());
        let t: Vec<f64> = tr.series().map(|r| r.t).collect();
        assert!(t.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn euler_error_is_first_order() {
        // circumradius of a regular polygon under ordinary flow obeys ρ² = R² − 2t
        let err = |cfl: f64| {
            let mut p = FlowParams::new(Epsilon::Plus, 1.0);
            p.cfl = cfl;
            p.max_time = 0.4;
            let tr = run_surface(&circle(64, 1.0, [0.0, 0.0]), &OrdinaryFlow, &p).unwrap();
            assert_eq!(tr.status, Status::TimeLimit);
            assert_eq!(tr.final_time(), 0.4);
            (tr.terminal.circumradius - 0.2f64.sqrt()).abs()
        };
        let ratio = err(0.25) / err(0.125);
        assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn checkpoints_are_landed_exactly() {
        let mut p = FlowParams::new(Epsilon::Minus, 1.0);
        p.checkpoints = vec![0.05, 0.1];
        p.max_time = 0.12;
        p.fixed_point_steps = 0;
        let tr = run_surface(&circle(64, 1.2, [0.0, 0.0]), &DensityFlow, &p).unwrap();
        assert!(tr.snapshot_at(0.05).is_some() && tr.snapshot_at(0.1).is_some());
        assert_eq!(tr.final_time(), 0.12);
        assert_eq!(tr.status, Status::TimeLimit);
    }

    #[test]
    fn guard_band_stops_rescaled_flow() {
        let mut p = FlowParams::new(Epsilon::Minus, 1.0);
        p.max_time = 1.0;
        let tr = run_surface(&circle(64, 3.0, [0.0, 0.0]), &RescaledFlow, &p).unwrap();
        assert_eq!(tr.status, Status::TimeLimit);
        assert!((tr.final_time() - 0.5 * (1.0 - 1e-3)).abs() < 1e-12);
    }

    #[test]
    fn mesh_relaxation_keeps_the_sphere() {
        let mut p = FlowParams::new(Epsilon::Plus, 1.0);
        p.resample_every = 5;
        p.max_steps = 20;
        let m = Mesh3::icosphere(1.0, 2).unwrap();
        let tr = run_surface(&m, &DensityFlow, &p).unwrap();
        assert!(tr.any_resampled());
        let Shape::Mesh(end) = &tr.final_state().shape else { panic!() };
        let radii: Vec<f64> = end.vertices().iter().map(|v| v.norm()).collect();
        let (lo, hi) = radii.iter().fold((f64::MAX, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
        assert!(hi / lo < 1.0 + 1e-3, "{lo} {hi}");
    }
}
