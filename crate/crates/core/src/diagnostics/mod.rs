//! Weighted measures, evolution-identity residuals, roundness and the
//! validators for each part of the theorem on Gaussian-type densities.

pub mod compare;
pub mod measures;
mod quadrature;
pub mod validate;

use crate::error::FlowError;
use crate::flow::{Density, Flat, TimeVariable, Trajectory};
use crate::geom::Shape;
use crate::transforms::GaussianContext;
use crate::with_shape;

pub use compare::{
    equivalence_discrepancy, translation_discrepancy, CheckpointError, ComparisonRun, TranslationCheck,
};
pub use quadrature::{weighted_volume, Quadrature};
pub use validate::{
    validate, validator_registry, Clause, TheoremValidator, ValidationConfig, ValidationReport,
};

/// Midpoint-rule weighted measure `Σ_e e^{ψ(c_e)}·|e|` (log-sum form).
pub fn weighted_area(s: &Shape, density: &dyn Density, ctx: &GaussianContext) -> f64 {
    with_shape!(s, c => measures::weighted_area_of(c, density, ctx))
}

/// Natural log of [`weighted_area`]; finite even when the area overflows.
pub fn log_weighted_area(s: &Shape, density: &dyn Density, ctx: &GaussianContext) -> Option<f64> {
    with_shape!(s, c => measures::log_weighted_area_of(c, density, ctx))
}

/// `circumradius/inradius − 1`; `None` when the shape is not convex.
pub fn roundness(s: &Shape) -> Option<f64> {
    with_shape!(s, c => measures::roundness_of(c))
}

/// Per-step residuals of the total-area identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    pub values: Vec<f64>,
    pub max: f64,
    pub median: f64,
}

impl Residuals {
    fn from_values(values: Vec<f64>) -> Self {
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let max = sorted.last().copied().unwrap_or(0.0);
        let median = if sorted.is_empty() {
            0.0
        } else if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
        };
        Self { values, max, median }
    }
}

/// For each step k,
/// `|(A_{k+1} − A_k)/dt_k + (Σ H² a + ε n² μ² A_k)| / (Σ H² a + n² μ² A_k)`,
/// the discrete form of `dA/dt = −∫(H² + εn²μ²) da`. Ordinary-flow runs use
/// the identity without the density term.
pub fn area_evolution_residual(tr: &Trajectory) -> Result<Residuals, FlowError> {
    let ctx = tr.context();
    let drift = match tr.law.as_str() {
        "density" => ctx.eps() * ctx.n as f64 * ctx.rate(),
        "ordinary" => 0.0,
        other => {
            return Err(FlowError::InvalidParams(format!(
                "area residual needs a density or ordinary run, got '{other}'"
            )))
        }
    };
    if tr.any_resampled() {
        return Err(FlowError::InvalidParams("area residual needs a run without resampling".into()));
    }
    let scale = ctx.n as f64 * ctx.rate();
    let series: Vec<_> = tr.series().collect();
    let values = series
        .windows(2)
        .filter(|w| w[0].dt > 0.0)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let measured = (b.area - a.area) / a.dt;
            let predicted = -(a.curvature_energy + drift * a.area);
            let norm = a.curvature_energy + if drift == 0.0 { 0.0 } else { scale * a.area };
            (measured - predicted).abs() / norm
        })
        .collect();
    Ok(Residuals::from_values(values))
}

/// `min_x ½(r_μ(t̂)² − |F(x)|²)` per step of an ordinary-flow trajectory,
/// with `r_μ(t̂)² = R² − 2n t̂`; truncated once the comparison sphere has
/// vanished. Returns `(t̂, f_min)` pairs.
pub fn f_min_series(tr: &Trajectory, r_sphere: f64) -> Result<Vec<(f64, f64)>, FlowError> {
    if tr.time_variable != TimeVariable::Hat || tr.law != "ordinary" {
        return Err(FlowError::InvalidParams(format!(
            "f_min series needs an ordinary-flow trajectory, got '{}'",
            tr.law
        )));
    }
    let n = tr.n as f64;
    Ok(tr
        .series()
        .map(|r| (r.t, r_sphere * r_sphere - 2.0 * n * r.t, r.max_norm))
        .take_while(|&(_, r2, _)| r2 > 0.0)
        .map(|(t, r2, m)| (t, 0.5 * (r2 - m * m)))
        .collect())
}

/// Weighted area with `ψ ≡ 0`, i.e. the plain measure.
pub fn unweighted_area(s: &Shape, ctx: &GaussianContext) -> f64 {
    weighted_area(s, &Flat, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{run, DensityFlow, FlowParams, Gaussian, OrdinaryFlow, RescaledFlow};
    use crate::io::generate::{circle, ellipse};
    use crate::transforms::Epsilon;
    use std::f64::consts::PI;

    fn ctx(eps: Epsilon, mu: f64) -> GaussianContext {
        GaussianContext::new(eps, mu, 1).unwrap()
    }

    #[test]
    fn weighted_area_of_centred_circle() {
        let (rho, mu) = (0.8, 1.3);
        let s: Shape = circle(rho, [0.0, 0.0], 4096).unwrap().into();
        for eps in [Epsilon::Plus, Epsilon::Minus] {
            let exact = 2.0 * PI * rho * (eps.value() * 0.5 * mu * mu * rho * rho).exp();
            let w = weighted_area(&s, &Gaussian, &ctx(eps, mu));
            assert!((w / exact - 1.0).abs() < 1e-5, "{eps}: {w} vs {exact}");
        }
    }

    #[test]
    fn flat_density_gives_plain_measure() {
        let s: Shape = ellipse(1.4, 0.6, 100).unwrap().into();
        let w = unweighted_area(&s, &ctx(Epsilon::Plus, 2.0));
        assert!((w - s.measure()).abs() < 1e-12 * s.measure());
    }

    #[test]
    fn moving_away_lowers_gaussian_weight() {
        let c = ctx(Epsilon::Minus, 1.0);
        let areas: Vec<f64> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&x| weighted_area(&circle(0.5, [x, 0.2], 64).unwrap().into(), &Gaussian, &c))
            .collect();
        assert!(areas[0] > areas[1] && areas[1] > areas[2], "{areas:?}");
    }

    #[test]
    fn log_form_survives_overflow() {
        let s: Shape = circle(40.0, [0.0, 0.0], 4096).unwrap().into();
        let c = ctx(Epsilon::Plus, 1.0);
        let lw = log_weighted_area(&s, &Gaussian, &c).unwrap();
        // exact for the polygon: edge midpoints sit at radius ρ cos(π/m)
        let (rho, m) = (40.0f64, 4096.0);
        let exact = (m * 2.0 * rho * (PI / m).sin()).ln() + 0.5 * (rho * (PI / m).cos()).powi(2);
        assert!((lw - exact).abs() < 1e-9, "{lw} vs {exact}");
        assert!(weighted_area(&s, &Gaussian, &c).is_infinite() || lw < 709.0);
    }

    #[test]
    fn roundness_examples() {
        let polygon: Shape = circle(1.0, [0.3, 0.0], 256).unwrap().into();
        assert!(roundness(&polygon).unwrap() < 1e-3);
        let square: Shape = crate::geom::Curve2::from_xy(&[
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [-1.0, 1.0],
            [-1.0, 0.0],
            [-1.0, -1.0],
            [0.0, -1.0],
            [1.0, -1.0],
        ])
        .unwrap()
        .into();
        assert!((roundness(&square).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-12);

        // dense-sampling oracle for the 2:1 ellipse about its centre
        let (a, b) = (2.0, 1.0);
        let dense: Vec<f64> = (0..200_000)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / 200_000.0;
                (a * th.cos()).hypot(b * th.sin())
            })
            .collect();
        let outer = dense.iter().copied().fold(0.0, f64::max);
        let inner = dense.iter().copied().fold(f64::INFINITY, f64::min);
        let oracle = outer / inner - 1.0;
        let e: Shape = ellipse(a, b, 1024).unwrap().into();
        assert!((roundness(&e).unwrap() - oracle).abs() < 1e-3, "{:?} vs {oracle}", roundness(&e));
    }

    #[test]
    fn roundness_of_nonconvex_is_none() {
        let s = crate::geom::Curve2::from_xy(&[
            [0.0, 0.0],
            [1.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [2.0, 2.0],
            [1.0, 0.5],
            [0.0, 2.0],
            [0.0, 1.0],
        ]).unwrap();
        assert_eq!(roundness(&s.into()), None);
    }

    fn params(eps: Epsilon, max_time: f64) -> FlowParams {
        let mut p = FlowParams::new(eps, 1.0);
        p.max_time = max_time;
        p.fixed_point_steps = 0;
        p
    }

    #[test]
    fn area_identity_on_circles() {
        for (eps, rho) in [(Epsilon::Plus, 1.0), (Epsilon::Minus, 0.5)] {
            let s: Shape = circle(rho, [0.1, 0.0], 128).unwrap().into();
            let tr = run(&s, &DensityFlow, &params(eps, 0.02)).unwrap();
            let res = area_evolution_residual(&tr).unwrap();
            assert!(res.median < 1e-2 && res.max < 2e-2, "{eps}: {} {}", res.median, res.max);
            if eps == Epsilon::Plus {
                assert!(tr.series().collect::<Vec<_>>().windows(2).all(|w| w[1].area < w[0].area));
            }
        }
    }

    #[test]
    fn fixed_sphere_keeps_its_area() {
        let s: Shape = circle(1.0, [0.0, 0.0], 256).unwrap().into();
        let tr = run(&s, &DensityFlow, &params(Epsilon::Minus, 0.05)).unwrap();
        let a0 = tr.initial_state().shape.measure();
        let a1 = tr.final_state().shape.measure();
        assert!((a1 - a0).abs() < 1e-9 * a0);
    }

    #[test]
    fn residual_rejects_other_runs() {
        let s: Shape = circle(1.0, [0.0, 0.0], 64).unwrap().into();
        let tr = run(&s, &RescaledFlow, &params(Epsilon::Plus, 0.01)).unwrap();
        assert!(area_evolution_residual(&tr).is_err());
        let mut p = params(Epsilon::Plus, 0.01);
        p.resample_every = 5;
        let tr = run(&s, &DensityFlow, &p).unwrap();
        assert!(area_evolution_residual(&tr).is_err());
    }

    #[test]
    fn f_min_examples() {
        let inside: Shape = ellipse(0.8, 0.6, 128).unwrap().into();
        let mut p = params(Epsilon::Plus, 0.05);
        p.resample_every = 10;
        let tr = run(&inside, &OrdinaryFlow, &p).unwrap();
        let f = f_min_series(&tr, 1.0).unwrap();
        assert!(f[0].1 > 0.0);
        assert!(f.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-3));

        let sphere: Shape = circle(1.0, [0.0, 0.0], 256).unwrap().into();
        let tr = run(&sphere, &OrdinaryFlow, &params(Epsilon::Plus, 0.2)).unwrap();
        let f = f_min_series(&tr, 1.0).unwrap();
        assert!(f.iter().all(|&(_, v)| v.abs() < 1e-3), "{:?}", f.last());

        let tr = run(&sphere, &DensityFlow, &params(Epsilon::Plus, 0.01)).unwrap();
        assert!(f_min_series(&tr, 1.0).is_err());
    }

    #[test]
    fn f_min_truncates_at_sphere_extinction() {
        let s: Shape = circle(0.5, [0.0, 0.0], 64).unwrap().into();
        let tr = run(&s, &OrdinaryFlow, &params(Epsilon::Plus, 1.0)).unwrap();
        let f = f_min_series(&tr, 0.6).unwrap();
        assert!(f.iter().all(|&(t, _)| t < 0.18));
    }
}
