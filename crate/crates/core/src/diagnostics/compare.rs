//! Vertex-level and set-level comparisons between runs that the exact
//! transforms say must agree.

use crate::error::{Error, FlowError};
use crate::flow::{run, DensityFlow, FlowParams, RescaledFlow, Status, Trajectory};
use crate::geom::{max_vertex_distance, shape_hausdorff, Shape};
use crate::transforms::{recompose, rescale_to_hat, time_forward, time_inverse, translate_decompose};

/// Discrepancy at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointError {
    pub t_hat: f64,
    pub t: f64,
    pub vertex_max: f64,
    pub hausdorff: f64,
}

#[derive(Debug, Clone)]
pub struct ComparisonRun {
    pub cfl: f64,
    pub rows: Vec<CheckpointError>,
    pub density_steps: usize,
    pub rescaled_steps: usize,
}

fn expect_time_limit(tr: &Trajectory, what: &str) -> Result<(), Error> {
    if tr.status != Status::TimeLimit {
        return Err(FlowError::InvalidParams(format!("{what} run ended early with status {}", tr.status)).into());
    }
    Ok(())
}

fn snapshot<'a>(tr: &'a Trajectory, t: f64, what: &str) -> Result<&'a Shape, Error> {
    tr.snapshot_at(t)
        .map(|s| &s.shape)
        .ok_or_else(|| FlowError::InvalidParams(format!("{what} run has no snapshot at t = {t}")).into())
}

/// Runs the density flow to the preimages `t_k` of `t_hats`, then the
/// rescaled flow on the image of the density run's step times, and compares
/// `rescale_to_hat(F(t_k))` with `F̂(t̂_k)` vertex by vertex.
pub fn equivalence_discrepancy(initial: &Shape, params: &FlowParams, t_hats: &[f64]) -> Result<ComparisonRun, Error> {
    if !params.density.is_gaussian() {
        return Err(Error::Config("comparison needs the gaussian density".into()));
    }
    if params.resample_every != 0 {
        return Err(Error::Config("comparison forbids resampling (resample_every must be 0)".into()));
    }
    if t_hats.is_empty() || t_hats.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Config("comparison needs positive checkpoint times".into()));
    }
    let ctx = params.context(initial.n())?;
    let ts: Vec<f64> = t_hats.iter().map(|&th| time_inverse(th, &ctx)).collect::<Result<_, _>>()?;

    let mut pd = params.clone();
    pd.checkpoints = ts.clone();
    pd.max_time = ts.iter().copied().fold(0.0, f64::max);
    pd.fixed_point_steps = 0;
    pd.time_grid = None;
    let density = run(initial, &DensityFlow, &pd)?;
    expect_time_limit(&density, "density")?;

    let grid: Vec<f64> = density.series().map(|r| time_forward(r.t, &ctx)).collect::<Result<_, _>>()?;
    let images: Vec<f64> = ts.iter().map(|&t| time_forward(t, &ctx)).collect::<Result<_, _>>()?;
    let mut pr = params.clone();
    pr.max_time = *grid.last().expect("non-empty series");
    pr.checkpoints = images.clone();
    pr.fixed_point_steps = 0;
    pr.time_grid = Some(grid);
    let rescaled = run(initial, &RescaledFlow, &pr)?;
    expect_time_limit(&rescaled, "rescaled")?;

    let mut rows = Vec::with_capacity(ts.len());
    for ((&t_hat, &t), &image) in t_hats.iter().zip(&ts).zip(&images) {
        let hat = rescale_to_hat(snapshot(&density, t, "density")?, t, &ctx);
        let direct = snapshot(&rescaled, image, "rescaled")?;
        rows.push(CheckpointError {
            t_hat,
            t,
            vertex_max: max_vertex_distance(&hat, direct)?,
            hausdorff: shape_hausdorff(&hat, direct)?,
        });
    }
    Ok(ComparisonRun {
        cfl: params.cfl,
        rows,
        density_steps: density.steps(),
        rescaled_steps: rescaled.steps(),
    })
}

/// Hausdorff discrepancy between the direct density flow and the recomposed
/// flow of the centred shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationCheck {
    pub t: f64,
    pub hausdorff: f64,
    pub diameter: f64,
}

/// Runs the density flow on `initial` and on `initial − p₀` and compares
/// them at `times` after adding `e^{−εnμ²t} p₀` to the second.
pub fn translation_discrepancy(
    initial: &Shape,
    p0: &[f64],
    params: &FlowParams,
    times: &[f64],
) -> Result<Vec<TranslationCheck>, Error> {
    if times.is_empty() || times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Config("translation check needs positive times".into()));
    }
    let ctx = params.context(initial.n())?;
    let mut p = params.clone();
    p.checkpoints = times.to_vec();
    p.max_time = times.iter().copied().fold(0.0, f64::max);
    p.fixed_point_steps = 0;
    let direct = run(initial, &DensityFlow, &p)?;
    expect_time_limit(&direct, "direct")?;
    let centred = run(&translate_decompose(initial, p0), &DensityFlow, &p)?;
    expect_time_limit(&centred, "centred")?;
    times
        .iter()
        .map(|&t| {
            let d = snapshot(&direct, t, "direct")?;
            let c = recompose(snapshot(&centred, t, "centred")?, p0, t, &ctx);
            Ok(TranslationCheck {
                t,
                hausdorff: shape_hausdorff(d, &c)?,
                diameter: d.diameter(),
            })
        })
        .collect()
}
