//! Explicit time integration of the density flow, the ordinary flow and the
//! rescaled flow, with termination detection.

pub mod density;
mod engine;
pub mod velocity;

use std::fmt;
use std::sync::Arc;

use crate::error::FlowError;
use crate::geom::Shape;
use crate::transforms::{Epsilon, GaussianContext};

pub use density::{density_registry, resolve_density, Density, Flat, Gaussian, RadialTable};
pub use engine::{adaptive_dt, evaluate_velocity, run, run_surface, step, velocity, Evolve, VelocityEval};
pub use velocity::{
    velocity_registry, DensityFlow, OrdinaryFlow, RescaledFlow, TimeVariable, VelocityField, VertexProbe,
};

/// Solver and model parameters.
#[derive(Clone)]
pub struct FlowParams {
    pub epsilon: Epsilon,
    pub mu: f64,
    pub density: Arc<dyn Density>,
    pub cfl: f64,
    pub max_dt: f64,
    /// In the run's own time variable (t for the density flow, t̂ otherwise).
    pub max_time: f64,
    pub max_steps: usize,
    /// Arc-length resampling stride for curves; 0 disables.
    pub resample_every: usize,
    /// Round-point gate: diameter below this multiple of the initial
    /// circumradius...
    pub shrink_diameter_tol: f64,
    /// ...and roundness below this.
    pub roundness_tol: f64,
    /// Lower bound on the speed used in the CFL bound.
    pub speed_floor: f64,
    /// Rescaled flow with ε = −1 stops at `(1 − guard)/(2nμ²)`.
    pub guard: f64,
    /// Fixed point: max speed below `fixed_point_tol` for
    /// `fixed_point_steps` consecutive steps (0 disables).
    pub fixed_point_tol: f64,
    pub fixed_point_steps: usize,
    /// Stride of the global self-intersection check.
    pub embedding_every: usize,
    /// Stride of the inradius and roundness evaluation.
    pub diagnostics_every: usize,
    pub snapshot_every: usize,
    /// Times at which the run lands exactly and stores a snapshot.
    pub checkpoints: Vec<f64>,
    /// Prescribed step times (starting at 0); overrides the adaptive step.
    pub time_grid: Option<Vec<f64>>,
    /// Stop once the inradius reaches this value.
    pub max_inradius: Option<f64>,
    /// Minimum triangle angle (radians) below which a warning is recorded.
    pub min_angle: f64,
}

impl fmt::Debug for FlowParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FlowParams")
            .field("epsilon", &self.epsilon)
            .field("mu", &self.mu)
            .field("density", &self.density.name())
            .field("cfl", &self.cfl)
            .field("max_dt", &self.max_dt)
            .field("max_time", &self.max_time)
            .field("max_steps", &self.max_steps)
            .field("resample_every", &self.resample_every)
            .finish_non_exhaustive()
    }
}

impl FlowParams {
    /// Gaussian density with default solver settings.
    pub fn new(epsilon: Epsilon, mu: f64) -> Self {
        Self {
            epsilon,
            mu,
            density: Arc::new(Gaussian),
            cfl: 0.25,
            max_dt: 1e-2,
            max_time: 10.0,
            max_steps: 10_000_000,
            resample_every: 0,
            shrink_diameter_tol: 1e-2,
            roundness_tol: 0.05,
            speed_floor: 1e-12,
            guard: 1e-3,
            fixed_point_tol: 1e-9,
            fixed_point_steps: 10,
            embedding_every: 50,
            diagnostics_every: 20,
            snapshot_every: 100,
            checkpoints: Vec::new(),
            time_grid: None,
            max_inradius: None,
            min_angle: crate::geom::DEFAULT_MIN_ANGLE,
        }
    }

    pub fn context(&self, n: usize) -> Result<GaussianContext, FlowError> {
        GaussianContext::new(self.epsilon, self.mu, n).map_err(FlowError::from)
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let bad = |m: String| Err(FlowError::InvalidParams(m));
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad(format!("mu must be positive, got {}", self.mu));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.max_dt > 0.0) {
            return bad(format!("max_dt must be positive, got {}", self.max_dt));
        }
        if !(self.max_time > 0.0) {
            return bad(format!("max_time must be positive, got {}", self.max_time));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        if !(self.guard > 0.0 && self.guard < 1.0) {
            return bad(format!("guard must lie in (0, 1), got {}", self.guard));
        }
        if !(self.shrink_diameter_tol > 0.0 && self.roundness_tol > 0.0) {
            return bad("shrink tolerances must be positive".into());
        }
        if self.embedding_every == 0 || self.diagnostics_every == 0 || self.snapshot_every == 0 {
            return bad("strides must be positive".into());
        }
        if let Some(grid) = &self.time_grid {
            if grid.first() != Some(&0.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
                return bad("time grid must start at 0 and increase strictly".into());
            }
        }
        Ok(())
    }
}

/// Run status.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Running,
    ShrunkToPoint,
    /// Invalid geometry with a diagnostic.
    Degenerate(String),
    TimeLimit,
    FixedPoint,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Running => "running",
            Status::ShrunkToPoint => "shrunk_to_point",
            Status::Degenerate(_) => "degenerate",
            Status::TimeLimit => "time_limit",
            Status::FixedPoint => "fixed_point",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Degenerate(why) => write!(f, "degenerate ({why})"),
            s => f.write_str(s.as_str()),
        }
    }
}

/// One frame of an evolution.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub shape: Shape,
    pub t: f64,
    pub step: usize,
    pub status: Status,
}

/// Scalar measurements of the state at the start of a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    /// Step taken from this state; 0 for the terminal record.
    pub dt: f64,
    /// Length (n = 1) or area (n = 2).
    pub area: f64,
    /// Enclosed area or volume.
    pub enclosed: f64,
    pub weighted_area: f64,
    pub circumradius: f64,
    /// Evaluated every `diagnostics_every` steps.
    pub inradius: Option<f64>,
    /// `None` when not evaluated or when the shape is not convex.
    pub roundness: Option<f64>,
    pub max_speed: f64,
    /// `Σ H_disc² · dual measure`.
    pub curvature_energy: f64,
    pub max_norm: f64,
    /// Whether the shape was resampled at the end of this step.
    pub resampled: bool,
}

/// Result of a run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub law: String,
    pub time_variable: TimeVariable,
    pub n: usize,
    pub epsilon: Epsilon,
    pub mu: f64,
    pub initial_circumradius: f64,
    pub snapshots: Vec<FlowState>,
    /// One record per step taken.
    pub records: Vec<StepRecord>,
    /// Measurements of the final state.
    pub terminal: StepRecord,
    pub status: Status,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn final_state(&self) -> &FlowState {
        self.snapshots.last().expect("trajectory has at least one snapshot")
    }

    pub fn initial_state(&self) -> &FlowState {
        &self.snapshots[0]
    }

    pub fn final_time(&self) -> f64 {
        self.terminal.t
    }

    pub fn steps(&self) -> usize {
        self.records.len()
    }

    /// Records followed by the terminal record.
    pub fn series(&self) -> impl Iterator<Item = &StepRecord> {
        self.records.iter().chain(std::iter::once(&self.terminal))
    }

    pub fn any_resampled(&self) -> bool {
        self.records.iter().any(|r| r.resampled)
    }

    /// Snapshot taken at (exactly, up to rounding) time `t`.
    pub fn snapshot_at(&self, t: f64) -> Option<&FlowState> {
        let tol = 1e-12 * t.abs().max(1.0);
        self.snapshots.iter().find(|s| (s.t - t).abs() <= tol)
    }

    pub fn context(&self) -> GaussianContext {
        GaussianContext {
            epsilon: self.epsilon,
            mu: self.mu,
            n: self.n,
        }
    }
}
