//! Radial densities `e^{ψ(x)}`, `ψ(x) = φ(|x|)`.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::registry::Registry;
use crate::transforms::GaussianContext;

/// Why the drift `φ′(r)/r` could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriftError {
    /// `r = 0` with `φ′(0) ≠ 0`.
    Singular { dphi0: f64 },
    /// Radius beyond the sampled table.
    OutOfRange { r: f64, max: f64 },
}

/// A radial log-density. ε, μ and n are passed in so that the Gaussian family
/// can be a single stateless strategy.
pub trait Density: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// `φ′(r)`.
    fn dphi(&self, r: f64, ctx: &GaussianContext) -> Result<f64, DriftError>;

    /// `φ′(r)/r`, the coefficient of `⟨F, N⟩` in the velocity.
    fn drift(&self, r: f64, ctx: &GaussianContext) -> Result<f64, DriftError>;

    /// `ψ = φ(r)`, normalized so that `φ(0) = 0`.
    fn log_density(&self, r: f64, ctx: &GaussianContext) -> Result<f64, DriftError>;

    /// True when `φ′(r) = ε n μ² r` for the context, which is what the exact
    /// transforms assume.
    fn is_gaussian(&self) -> bool {
        false
    }
}

/// `ψ = ε·½nμ²|x|²`; the drift is the constant `εnμ²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gaussian;

impl Density for Gaussian {
    fn name(&self) -> &str {
        "gaussian"
    }

    fn dphi(&self, r: f64, ctx: &GaussianContext) -> Result<f64, DriftError> {
        Ok(ctx.eps() * ctx.rate() * r)
    }

    fn drift(&self, _r: f64, ctx: &GaussianContext) -> Result<f64, DriftError> {
        Ok(ctx.eps() * ctx.rate())
    }

    fn log_density(&self, r: f64, ctx: &GaussianContext) -> Result<f64, DriftError> {
        Ok(ctx.log_density(r * r))
    }

    fn is_gaussian(&self) -> bool {
        true
    }
}

/// `ψ ≡ 0`: ordinary mean curvature flow.
#[derive(Debug, Clone, Copy, Default)]
pub struct Flat;

impl Density for Flat {
    fn name(&self) -> &str {
        "none"
    }

    fn dphi(&self, _r: f64, _ctx: &GaussianContext) -> Result<f64, DriftError> {
        Ok(0.0)
    }

    fn drift(&self, _r: f64, _ctx: &GaussianContext) -> Result<f64, DriftError> {
        Ok(0.0)
    }

    fn log_density(&self, _r: f64, _ctx: &GaussianContext) -> Result<f64, DriftError> {
        Ok(0.0)
    }
}

/// General radial density from samples of `φ′` on `[0, r_max]`, linearly
/// interpolated; `φ` is the cumulative trapezoid integral.
#[derive(Debug, Clone)]
pub struct RadialTable {
    radii: Vec<f64>,
    dphi: Vec<f64>,
    phi: Vec<f64>,
}

impl RadialTable {
    /// `samples` are `(r, φ′(r))` with strictly increasing r starting at 0.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self, String> {
        if samples.len() < 2 {
            return Err("radial table needs at least two samples".into());
        }
        if samples[0].0 != 0.0 {
            return Err(format!("radial table must start at r = 0, got {}", samples[0].0));
        }
        if let Some(w) = samples.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(format!("radii must be strictly increasing (sample {})", w + 1));
        }
        if samples.iter().any(|(r, d)| !r.is_finite() || !d.is_finite()) {
            return Err("radial table contains non-finite values".into());
        }
        let radii: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let dphi: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let mut phi = vec![0.0; radii.len()];
        for i in 1..radii.len() {
            phi[i] = phi[i - 1] + 0.5 * (dphi[i] + dphi[i - 1]) * (radii[i] - radii[i - 1]);
        }
        Ok(Self { radii, dphi, phi })
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    fn segment(&self, r: f64) -> Result<(usize, f64), DriftError> {
        let max = self.max_radius();
        if !(0.0..=max).contains(&r) {
            return Err(DriftError::OutOfRange { r, max });
        }
        let i = self.radii.partition_point(|&x| x <= r).clamp(1, self.radii.len() - 1) - 1;
        let w = (r - self.radii[i]) / (self.radii[i + 1] - self.radii[i]);
        Ok((i, w))
    }
}

impl Density for RadialTable {
    fn name(&self) -> &str {
        "radial"
    }

    fn dphi(&self, r: f64, _ctx: &GaussianContext) -> Result<f64, DriftError> {
        let (i, w) = self.segment(r)?;
        Ok(self.dphi[i] + w * (self.dphi[i + 1] - self.dphi[i]))
    }

    fn drift(&self, r: f64, ctx: &GaussianContext) -> Result<f64, DriftError> {
        if r == 0.0 {
            if self.dphi[0] != 0.0 {
                return Err(DriftError::Singular { dphi0: self.dphi[0] });
            }
            // limit φ′(r)/r → φ″(0)
            return Ok((self.dphi[1] - self.dphi[0]) / self.radii[1]);
        }
        Ok(self.dphi(r, ctx)? / r)
    }

    fn log_density(&self, r: f64, ctx: &GaussianContext) -> Result<f64, DriftError> {
        let (i, _) = self.segment(r)?;
        let d = self.dphi(r, ctx)?;
        Ok(self.phi[i] + 0.5 * (self.dphi[i] + d) * (r - self.radii[i]))
    }
}

/// Parameterless densities selectable by name.
pub fn density_registry() -> Registry<dyn Density> {
    let mut reg: Registry<dyn Density> = Registry::new("density");
    reg.register("gaussian", Arc::new(Gaussian));
    reg.register("none", Arc::new(Flat));
    reg
}

/// Resolves a density by name; `radial` needs a table.
pub fn resolve_density(name: &str, table: Option<RadialTable>) -> Result<Arc<dyn Density>, Error> {
    if name == "radial" {
        return table
            .map(|t| Arc::new(t) as Arc<dyn Density>)
            .ok_or_else(|| Error::Config("density 'radial' requires a radial table".into()));
    }
    density_registry().get(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::Epsilon;

    #[test]
    fn gaussian_drift_is_constant() {
        let ctx = GaussianContext::new(Epsilon::Minus, 2.0, 2).unwrap();
        for r in [0.0, 0.5, 10.0] {
            assert_eq!(Gaussian.drift(r, &ctx).unwrap(), -8.0);
        }
        assert_eq!(Gaussian.dphi(1.5, &ctx).unwrap(), -12.0);
    }

    #[test]
    fn table_reproduces_gaussian() {
        let ctx = GaussianContext::new(Epsilon::Plus, 1.0, 1).unwrap();
        let samples: Vec<(f64, f64)> = (0..=100).map(|k| (0.05 * k as f64, 0.05 * k as f64)).collect();
        let t = RadialTable::new(&samples).unwrap();
        for r in [0.0, 0.33, 1.0, 4.99, 5.0] {
            assert!((t.drift(r, &ctx).unwrap() - 1.0).abs() < 1e-12);
            assert!((t.log_density(r, &ctx).unwrap() - 0.5 * r * r).abs() < 1e-12);
        }
        assert!(matches!(t.drift(5.1, &ctx), Err(DriftError::OutOfRange { .. })));
    }

    #[test]
    fn singular_table_at_origin() {
        let ctx = GaussianContext::new(Epsilon::Plus, 1.0, 1).unwrap();
        let t = RadialTable::new(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(t.drift(0.0, &ctx), Err(DriftError::Singular { .. })));
        assert_eq!(t.drift(0.5, &ctx).unwrap(), 2.0);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(RadialTable::new(&[(0.0, 0.0)]).is_err());
        assert!(RadialTable::new(&[(0.1, 0.0), (1.0, 0.0)]).is_err());
        assert!(RadialTable::new(&[(0.0, 0.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(resolve_density("none", None).unwrap().name(), "none");
        assert!(resolve_density("radial", None).is_err());
        assert!(resolve_density("cauchy", None).is_err());
    }
}
