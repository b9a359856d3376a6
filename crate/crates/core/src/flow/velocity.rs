//! Velocity laws. Each law gives a normal speed from local data and an
//! optional coefficient for the tangential part of the position vector.

use std::fmt;
use std::sync::Arc;

use crate::error::FlowError;
use crate::flow::density::DriftError;
use crate::flow::FlowParams;
use crate::registry::Registry;
use crate::transforms::{Epsilon, GaussianContext};

/// Local data at one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexProbe {
    pub index: usize,
    /// `H_disc`, positive on convex shapes.
    pub curvature: f64,
    /// `|F|`.
    pub radius: f64,
    /// `⟨F, N_out⟩`.
    pub support: f64,
}

/// Which time variable a law evolves in and what that means for the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeVariable {
    /// Density-flow time t.
    Density,
    /// Ordinary-flow time t̂.
    Hat,
}

pub trait VelocityField: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn time_variable(&self) -> TimeVariable;

    /// Outward normal speed `⟨v, N_out⟩`.
    fn normal_speed(&self, probe: &VertexProbe, params: &FlowParams, ctx: &GaussianContext)
        -> Result<f64, FlowError>;

    /// Coefficient c such that the velocity gains `c · F^⊤`.
    fn tangential_coefficient(&self, _time: f64, _params: &FlowParams, _ctx: &GaussianContext) -> Result<f64, FlowError> {
        Ok(0.0)
    }

    /// Last admissible time, if the law is only defined on a bounded interval.
    fn time_limit(&self, _params: &FlowParams, _ctx: &GaussianContext) -> Option<f64> {
        None
    }

    /// Whether the density in `params` enters the law.
    fn uses_density(&self) -> bool {
        false
    }
}

/// `v = −H_disc − (φ′(r)/r)·⟨F, N_out⟩`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DensityFlow;

impl VelocityField for DensityFlow {
    fn name(&self) -> &str {
        "density"
    }

    fn time_variable(&self) -> TimeVariable {
        TimeVariable::Density
    }

    fn normal_speed(&self, probe: &VertexProbe, params: &FlowParams, ctx: &GaussianContext) -> Result<f64, FlowError> {
        let drift = params.density.drift(probe.radius, ctx).map_err(|e| match e {
            DriftError::Singular { dphi0 } => FlowError::SingularDrift {
                vertex: probe.index,
                dphi0,
            },
            DriftError::OutOfRange { r, max } => FlowError::DensityDomain {
                vertex: probe.index,
                r,
                max,
            },
        })?;
        Ok(-probe.curvature - drift * probe.support)
    }

    fn uses_density(&self) -> bool {
        true
    }
}

/// `v = −H_disc`.
#[derive(Debug, Clone, Copy, Default)]
pub struct OrdinaryFlow;

impl VelocityField for OrdinaryFlow {
    fn name(&self) -> &str {
        "ordinary"
    }

    fn time_variable(&self) -> TimeVariable {
        TimeVariable::Hat
    }

    fn normal_speed(&self, probe: &VertexProbe, _params: &FlowParams, _ctx: &GaussianContext) -> Result<f64, FlowError> {
        Ok(-probe.curvature)
    }
}

/// Ordinary flow plus `c(t̂)·F̂^⊤` with `c(t̂) = 1/(2(t̂ + ε/(2nμ²)))`, which
/// makes the vertices follow the rescaled density flow exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct RescaledFlow;

impl VelocityField for RescaledFlow {
    fn name(&self) -> &str {
        "rescaled"
    }

    fn time_variable(&self) -> TimeVariable {
        TimeVariable::Hat
    }

    fn normal_speed(&self, probe: &VertexProbe, _params: &FlowParams, _ctx: &GaussianContext) -> Result<f64, FlowError> {
        Ok(-probe.curvature)
    }

    fn tangential_coefficient(&self, t_hat: f64, params: &FlowParams, ctx: &GaussianContext) -> Result<f64, FlowError> {
        if let Some(limit) = self.time_limit(params, ctx) {
            if t_hat > limit {
                return Err(FlowError::GuardBand { t_hat, limit });
            }
        }
        Ok(ctx.tangential_coefficient(t_hat))
    }

    fn time_limit(&self, params: &FlowParams, ctx: &GaussianContext) -> Option<f64> {
        (ctx.epsilon == Epsilon::Minus).then(|| (1.0 - params.guard) * ctx.singular_time())
    }
}

pub fn velocity_registry() -> Registry<dyn VelocityField> {
    let mut reg: Registry<dyn VelocityField> = Registry::new("flow");
    reg.register("density", Arc::new(DensityFlow));
    reg.register("ordinary", Arc::new(OrdinaryFlow));
    reg.register("rescaled", Arc::new(RescaledFlow));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe(curvature: f64, radius: f64, support: f64) -> VertexProbe {
        VertexProbe {
            index: 0,
            curvature,
            radius,
            support,
        }
    }

    #[test]
    fn expanding_circle_speed() {
        let params = FlowParams::new(Epsilon::Minus, 1.0);
        let ctx = params.context(1).unwrap();
        let v = DensityFlow.normal_speed(&probe(0.5, 2.0, 2.0), &params, &ctx).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
        let fixed = DensityFlow.normal_speed(&probe(1.0, 1.0, 1.0), &params, &ctx).unwrap();
        assert_eq!(fixed, 0.0);
    }

    #[test]
    fn rescaled_coefficient_and_guard() {
        let mut params = FlowParams::new(Epsilon::Plus, 1.0);
        let ctx = params.context(1).unwrap();
        assert_eq!(RescaledFlow.tangential_coefficient(0.0, &params, &ctx).unwrap(), 1.0);
        params.epsilon = Epsilon::Minus;
        let ctx = params.context(1).unwrap();
        assert!(RescaledFlow.tangential_coefficient(0.4, &params, &ctx).is_ok());
        assert!(matches!(
            RescaledFlow.tangential_coefficient(0.4999, &params, &ctx),
            Err(FlowError::GuardBand { .. })
        ));
    }

    #[test]
    fn registry_names() {
        let reg = velocity_registry();
        assert_eq!(reg.names(), vec!["density", "ordinary", "rescaled"]);
    }
}
