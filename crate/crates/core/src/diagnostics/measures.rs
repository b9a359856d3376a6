use crate::flow::Density;
use crate::geom::{circumball, inball, is_convex, Hypersurface};
use crate::transforms::GaussianContext;

/// `log Σ_e e^{ψ(c_e)}·|e|` over elements e with centroids c_e, evaluated by
/// log-sum-exp so ε = +1 at large radius does not overflow. `None` if the
/// density cannot be evaluated at some centroid.
pub fn log_weighted_area_of<const D: usize, S: Hypersurface<D>>(
    s: &S,
    density: &dyn Density,
    ctx: &GaussianContext,
) -> Option<f64> {
    let m = s.element_count();
    let mut terms = Vec::with_capacity(m);
    for e in 0..m {
        let psi = density.log_density(s.element_centroid(e).norm(), ctx).ok()?;
        terms.push((psi, s.element_measure(e)));
    }
    let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|(psi, a)| a * (psi - top).exp()).sum();
    Some(top + sum.ln())
}

/// Midpoint-rule weighted measure `Σ_e e^{ψ(c_e)}·|e|`.
pub fn weighted_area_of<const D: usize, S: Hypersurface<D>>(
    s: &S,
    density: &dyn Density,
    ctx: &GaussianContext,
) -> f64 {
    log_weighted_area_of(s, density, ctx).map_or(f64::NAN, f64::exp)
}

/// `circumradius/inradius − 1`, or `None` for non-convex shapes.
pub fn roundness_of<const D: usize, S: Hypersurface<D>>(s: &S) -> Option<f64> {
    is_convex(s).ok()?;
    let inner = inball(s).ok()?.radius;
    (inner > 0.0).then(|| circumball(s).radius / inner - 1.0)
}

/// Inradius and roundness together (one convexity test, one LP).
pub fn in_and_roundness<const D: usize, S: Hypersurface<D>>(s: &S) -> (Option<f64>, Option<f64>) {
    match inball(s) {
        Ok(b) if b.radius > 0.0 => (Some(b.radius), Some(circumball(s).radius / b.radius - 1.0)),
        _ => (None, None),
    }
}
