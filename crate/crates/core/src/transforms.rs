//! Closed-form maps between the density flow, the ordinary mean curvature
//! flow and the normalized type-I flow, plus the round-sphere solutions.
//!
//! With density `e^{ε·½nμ²|x|²}` the density flow `F(t)` and the ordinary flow
//! `F̂(t̂)` are related by
//!
//! ```text
//! t̂ = ε/(2nμ²) · (e^{ε2nμ²t} − 1),     F̂ = e^{εnμ²t} F,
//! ```
//!
//! valid for all t̂ when ε = +1 and for t̂ < 1/(2nμ²) when ε = −1. A
//! translation `p₀` of the initial data moves as `e^{−εnμ²t} p₀`.
//!
//! Everything here is evaluated in closed form; nothing integrates an ODE.

use crate::error::TransformError;
use crate::geom::{Hypersurface, Point, Shape};

/// Sign of the exponent of the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn value(self) -> f64 {
        match self {
            Epsilon::Plus => 1.0,
            Epsilon::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Option<Self> {
        if v == 1.0 {
            Some(Epsilon::Plus)
        } else if v == -1.0 {
            Some(Epsilon::Minus)
        } else {
            None
        }
    }
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if *self == Epsilon::Plus { "+1" } else { "-1" })
    }
}

/// ε, μ and the hypersurface dimension n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianContext {
    pub epsilon: Epsilon,
    pub mu: f64,
    pub n: usize,
}

/// Outcome of a closed-form sphere evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereRadius {
    Radius(f64),
    Shrunk,
}

impl SphereRadius {
    pub fn radius(self) -> Option<f64> {
        match self {
            SphereRadius::Radius(r) => Some(r),
            SphereRadius::Shrunk => None,
        }
    }
}

impl GaussianContext {
    pub fn new(epsilon: Epsilon, mu: f64, n: usize) -> Result<Self, TransformError> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(TransformError::InvalidContext(format!("mu must be positive, got {mu}")));
        }
        if !(n == 1 || n == 2) {
            return Err(TransformError::InvalidContext(format!("n must be 1 or 2, got {n}")));
        }
        Ok(Self { epsilon, mu, n })
    }

    pub fn eps(&self) -> f64 {
        self.epsilon.value()
    }

    /// `nμ²`, the rate constant that appears everywhere.
    pub fn rate(&self) -> f64 {
        self.n as f64 * self.mu * self.mu
    }

    /// `1/(2nμ²)`: the image of t = ∞ under [`time_forward`] when ε = −1.
    pub fn singular_time(&self) -> f64 {
        0.5 / self.rate()
    }

    /// Radius of the fixed sphere, `1/μ`.
    pub fn fixed_radius(&self) -> f64 {
        1.0 / self.mu
    }

    /// `ψ(x) = ε·½nμ²|x|²` as a function of `|x|²`.
    pub fn log_density(&self, r2: f64) -> f64 {
        0.5 * self.eps() * self.rate() * r2
    }

    /// Scale factor `e^{εnμ²t}` taking F to F̂.
    pub fn hat_scale(&self, t: f64) -> f64 {
        (self.eps() * self.rate() * t).exp()
    }

    /// Coefficient of the tangential term in the rescaled flow,
    /// `1/(2(t̂ + ε/(2nμ²)))`.
    pub fn tangential_coefficient(&self, t_hat: f64) -> f64 {
        1.0 / (2.0 * (t_hat + self.eps() * self.singular_time()))
    }

    fn check_hat_domain(&self, t_hat: f64) -> Result<(), TransformError> {
        if self.epsilon == Epsilon::Minus && t_hat >= self.singular_time() {
            return Err(TransformError::OutsideDomain {
                t_hat,
                limit: self.singular_time(),
            });
        }
        Ok(())
    }
}

/// `t̂ = ε/(2nμ²)·(e^{ε2nμ²t} − 1)`.
pub fn time_forward(t: f64, ctx: &GaussianContext) -> Result<f64, TransformError> {
    if t < 0.0 {
        return Err(TransformError::NegativeTime(t));
    }
    let k = 2.0 * ctx.rate();
    Ok(ctx.eps() / k * (ctx.eps() * k * t).exp_m1())
}

/// `t = ln(1 + ε2nμ²t̂)/(ε2nμ²)`; rejects t̂ ≥ 1/(2nμ²) when ε = −1.
pub fn time_inverse(t_hat: f64, ctx: &GaussianContext) -> Result<f64, TransformError> {
    if t_hat < 0.0 {
        return Err(TransformError::NegativeTime(t_hat));
    }
    ctx.check_hat_domain(t_hat)?;
    let k = ctx.eps() * 2.0 * ctx.rate();
    Ok((k * t_hat).ln_1p() / k)
}

/// `F̂ = e^{εnμ²t} F`.
pub fn rescale_to_hat(s: &Shape, t: f64, ctx: &GaussianContext) -> Shape {
    s.scaled(ctx.hat_scale(t))
}

/// `F = F̂ / √(1 + ε2nμ²t̂)`.
pub fn rescale_from_hat(s: &Shape, t_hat: f64, ctx: &GaussianContext) -> Result<Shape, TransformError> {
    ctx.check_hat_domain(t_hat)?;
    let factor = 1.0 / (1.0 + ctx.eps() * 2.0 * ctx.rate() * t_hat).sqrt();
    Ok(s.scaled(factor))
}

/// Position of the translation part at time t: `e^{−εnμ²t} p₀`.
pub fn translation_at(p0: &[f64], t: f64, ctx: &GaussianContext) -> Vec<f64> {
    let f = 1.0 / ctx.hat_scale(t);
    p0.iter().map(|x| x * f).collect()
}

/// `F₀ − p₀`.
pub fn translate_decompose(s: &Shape, p0: &[f64]) -> Shape {
    let neg: Vec<f64> = p0.iter().map(|x| -x).collect();
    s.translated(&neg)
}

/// Adds `e^{−εnμ²t} p₀` to every vertex.
pub fn recompose(s: &Shape, p0: &[f64], t: f64, ctx: &GaussianContext) -> Shape {
    s.translated(&translation_at(p0, t, ctx))
}

/// Generic-shape variant of [`recompose`].
pub fn recompose_surface<const D: usize, S: Hypersurface<D>>(
    s: &S,
    p0: &Point<D>,
    t: f64,
    ctx: &GaussianContext,
) -> S {
    s.translated(&(p0 / ctx.hat_scale(t)))
}

/// Ordinary MCF sphere: `√(R² − 2n t̂)`, shrunk at `t̂ ≥ R²/(2n)`.
pub fn sphere_radius_mcf(radius: f64, t_hat: f64, n: usize) -> SphereRadius {
    let r2 = radius * radius - 2.0 * n as f64 * t_hat;
    if r2 > 0.0 {
        SphereRadius::Radius(r2.sqrt())
    } else {
        SphereRadius::Shrunk
    }
}

/// Shrink time of the ordinary MCF sphere, `R²/(2n)`.
pub fn mcf_shrink_time(radius: f64, n: usize) -> f64 {
    radius * radius / (2.0 * n as f64)
}

/// Origin-centred sphere under the density flow:
/// `ρ(t)² = ε(e^{−ε2nμ²t} − 1)/μ² + ρ₀² e^{−ε2nμ²t}`.
pub fn sphere_radius_gaussian(rho0: f64, t: f64, ctx: &GaussianContext) -> SphereRadius {
    let k = -ctx.eps() * 2.0 * ctx.rate() * t;
    let r2 = ctx.eps() * k.exp_m1() / (ctx.mu * ctx.mu) + rho0 * rho0 * k.exp();
    if r2 > 0.0 {
        SphereRadius::Radius(r2.sqrt())
    } else {
        SphereRadius::Shrunk
    }
}

/// Extinction time of the origin-centred sphere under the density flow;
/// `None` (infinite) for the fixed sphere and expanding spheres.
pub fn gaussian_shrink_time(rho0: f64, ctx: &GaussianContext) -> Option<f64> {
    let x = ctx.mu * ctx.mu * rho0 * rho0;
    match ctx.epsilon {
        Epsilon::Plus => Some(x.ln_1p() / (2.0 * ctx.rate())),
        Epsilon::Minus if x < 1.0 => Some(-(-x).ln_1p() / (2.0 * ctx.rate())),
        Epsilon::Minus => None,
    }
}

/// Upper bound on the lifetime of a convex hypersurface with circumradius R
/// when ε = +1: `ln(1 + μ²R²)/(2nμ²)`.
pub fn lifetime_bound(circumradius: f64, ctx: &GaussianContext) -> f64 {
    (ctx.mu * ctx.mu * circumradius * circumradius).ln_1p() / (2.0 * ctx.rate())
}

/// Huisken-normalized state (`∂F/∂t = HN + F`, spheres of radius √n fixed)
/// mapped to the ε = −1 density flow (sphere of radius 1/μ fixed):
/// positions are divided by `μ√n`, times by `nμ²`.
pub fn normalized_to_gaussian(
    s: &Shape,
    t_normalized: f64,
    ctx: &GaussianContext,
) -> Result<(Shape, f64), TransformError> {
    if ctx.epsilon != Epsilon::Minus {
        return Err(TransformError::InvalidContext(
            "the normalized type-I flow corresponds to ε = −1".into(),
        ));
    }
    let n = ctx.n as f64;
    Ok((s.scaled(1.0 / (ctx.mu * n.sqrt())), t_normalized / ctx.rate()))
}

/// Inverse of [`normalized_to_gaussian`].
pub fn gaussian_to_normalized(
    s: &Shape,
    t: f64,
    ctx: &GaussianContext,
) -> Result<(Shape, f64), TransformError> {
    if ctx.epsilon != Epsilon::Minus {
        return Err(TransformError::InvalidContext(
            "the normalized type-I flow corresponds to ε = −1".into(),
        ));
    }
    let n = ctx.n as f64;
    Ok((s.scaled(ctx.mu * n.sqrt()), t * ctx.rate()))
}

/// μ of the density whose fixed sphere matches a type-I singularity of the
/// unnormalized flow at time `t_sing`: `1/μ = √(2n·t_sing)`.
pub fn type_one_mu(t_sing: f64, n: usize) -> f64 {
    1.0 / (2.0 * n as f64 * t_sing).sqrt()
}

/// Step used for the central differences of φ′, relative to r.
pub const CONFORMALITY_STEP: f64 = 1e-5;

/// `max_r |φ″(r) − φ′(r)/r| / max(1, |φ′(r)/r|)` with φ″ by central
/// differences. Zero exactly when `φ′(r) = C r`, i.e. when `∇ψ` is a
/// conformal field.
pub fn conformality_defect(dphi: impl Fn(f64) -> f64, radii: &[f64]) -> f64 {
    radii
        .iter()
        .map(|&r| {
            let h = CONFORMALITY_STEP * r;
            let second = (dphi(r + h) - dphi(r - h)) / (2.0 * h);
            let ratio = dphi(r) / r;
            (second - ratio).abs() / ratio.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}
