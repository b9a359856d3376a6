//! Named shape generators, selected by spec strings such as
//! `circle:r=1,m=512` or `icosphere:r=0.5,sub=4`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, GeomError};
use crate::geom::{Curve2, Mesh3, Shape, MIN_CURVE_VERTICES};
use crate::registry::Registry;

/// Parsed `key=value` arguments of a generator spec.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenArgs {
    values: BTreeMap<String, f64>,
}

impl GenArgs {
    pub fn get(&self, key: &str, default: f64) -> f64 {
        self.values.get(key).copied().unwrap_or(default)
    }

    pub fn count(&self, key: &str, default: usize) -> Result<usize, Error> {
        match self.values.get(key) {
            None => Ok(default),
            Some(&v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(v as usize),
            Some(&v) => Err(Error::Config(format!("'{key}' must be a non-negative integer, got {v}"))),
        }
    }

    pub fn positive(&self, key: &str, default: f64) -> Result<f64, Error> {
        let v = self.get(key, default);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Config(format!("'{key}' must be positive, got {v}")))
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

pub trait ShapeGenerator: Send + Sync {
    fn name(&self) -> &str;

    /// Accepted argument names.
    fn keys(&self) -> &'static [&'static str];

    /// `seed` is the run seed; generators that draw random numbers use it
    /// unless the spec sets `seed` itself.
    fn generate(&self, args: &GenArgs, seed: u64) -> Result<Shape, Error>;
}

fn min_count(m: usize, min: usize) -> Result<(), Error> {
    if m < min {
        return Err(GeomError::TooFewVertices { min, got: m }.into());
    }
    Ok(())
}

/// Regular `m`-gon inscribed in the circle of radius `r` about `center`.
pub fn circle(r: f64, center: [f64; 2], m: usize) -> Result<Curve2, Error> {
    min_count(m, MIN_CURVE_VERTICES)?;
    let pts = (0..m)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / m as f64;
            Vector2::new(center[0] + r * th.cos(), center[1] + r * th.sin())
        })
        .collect();
    Ok(Curve2::new(pts)?)
}

/// Ellipse with semi-axes `a`, `b`, sampled at equal parameter angles.
pub fn ellipse(a: f64, b: f64, m: usize) -> Result<Curve2, Error> {
    min_count(m, MIN_CURVE_VERTICES)?;
    let pts = (0..m)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / m as f64;
            Vector2::new(a * th.cos(), b * th.sin())
        })
        .collect();
    Ok(Curve2::new(pts)?)
}

/// Square of the given side centred at the origin with corners rounded to
/// radius `corner`, sampled uniformly in arc length.
pub fn rounded_square(side: f64, corner: f64, m: usize) -> Result<Curve2, Error> {
    min_count(m, MIN_CURVE_VERTICES)?;
    if !(corner > 0.0 && 2.0 * corner <= side) {
        return Err(Error::Config(format!(
            "corner radius must lie in (0, side/2], got {corner} for side {side}"
        )));
    }
    let flat = side - 2.0 * corner;
    let arc = 0.5 * PI * corner;
    let quarter = flat + arc;
    let half = side / 2.0 - corner;
    let pts = (0..m)
        .map(|k| {
            let s = 4.0 * quarter * k as f64 / m as f64;
            let q = ((s / quarter) as usize).min(3);
            let u = s - q as f64 * quarter;
            // local frame: edge on the right side going up, then the corner
            let (x, y) = if u < flat {
                (half + corner, -half + u)
            } else {
                let th = (u - flat) / corner;
                (half + corner * th.cos(), half + corner * th.sin())
            };
            let rot = 0.5 * PI * q as f64;
            let (c, sn) = (rot.cos(), rot.sin());
            Vector2::new(c * x - sn * y, sn * x + c * y)
        })
        .collect();
    Ok(Curve2::new(pts)?)
}

/// Uniformly random convex `m`-gon (Valtr's construction), centred on its
/// circumcentre and scaled to circumradius `r`. Deterministic per seed.
pub fn random_convex(m: usize, r: f64, seed: u64) -> Result<Curve2, Error> {
    min_count(m, MIN_CURVE_VERTICES)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axis_steps = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut v: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        v.sort_by(f64::total_cmp);
        let (lo, hi) = (v[0], v[m - 1]);
        let (mut a, mut b) = (lo, lo);
        let mut steps = Vec::with_capacity(m);
        for &x in &v[1..m - 1] {
            if rng.random::<bool>() {
                steps.push(x - a);
                a = x;
            } else {
                steps.push(b - x);
                b = x;
            }
        }
        steps.push(hi - a);
        steps.push(b - hi);
        steps
    };
    let xs = axis_steps(&mut rng);
    let mut ys = axis_steps(&mut rng);
    for i in (1..ys.len()).rev() {
        let j = rng.random_range(0..=i);
        ys.swap(i, j);
    }
    let mut dirs: Vec<Vector2<f64>> = xs.iter().zip(&ys).map(|(&x, &y)| Vector2::new(x, y)).collect();
    dirs.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));
    let mut p = Vector2::zeros();
    let mut pts = Vec::with_capacity(m);
    for d in &dirs {
        pts.push(p);
        p += d;
    }
    let curve = Curve2::new(pts)?;
    let shape = Shape::Curve(curve);
    let (center, radius) = shape.circumball_parts();
    let centred = shape.translated(&center.iter().map(|c| -c).collect::<Vec<_>>());
    match centred.scaled(r / radius) {
        Shape::Curve(c) => Ok(c),
        Shape::Mesh(_) => unreachable!(),
    }
}

pub fn icosphere(r: f64, subdivisions: usize) -> Result<Mesh3, Error> {
    Ok(Mesh3::icosphere(r, subdivisions)?)
}

pub fn ellipsoid(a: f64, b: f64, c: f64, subdivisions: usize) -> Result<Mesh3, Error> {
    Ok(Mesh3::ellipsoid(a, b, c, subdivisions)?)
}

struct CircleGen;
struct EllipseGen;
struct RoundedSquareGen;
struct RandomConvexGen;
struct IcosphereGen;
struct EllipsoidGen;

impl ShapeGenerator for CircleGen {
    fn name(&self) -> &str {
        "circle"
    }
    fn keys(&self) -> &'static [&'static str] {
        &["r", "cx", "cy", "m"]
    }
    fn generate(&self, a: &GenArgs, _seed: u64) -> Result<Shape, Error> {
        let c = circle(a.positive("r", 1.0)?, [a.get("cx", 0.0), a.get("cy", 0.0)], a.count("m", 512)?)?;
        Ok(c.into())
    }
}

impl ShapeGenerator for EllipseGen {
    fn name(&self) -> &str {
        "ellipse"
    }
    fn keys(&self) -> &'static [&'static str] {
        &["a", "b", "cx", "cy", "m"]
    }
    fn generate(&self, a: &GenArgs, _seed: u64) -> Result<Shape, Error> {
        let e: Shape = ellipse(a.positive("a", 1.0)?, a.positive("b", 1.0)?, a.count("m", 256)?)?.into();
        Ok(e.translated(&[a.get("cx", 0.0), a.get("cy", 0.0)]))
    }
}

impl ShapeGenerator for RoundedSquareGen {
    fn name(&self) -> &str {
        "rounded_square"
    }
    fn keys(&self) -> &'static [&'static str] {
        &["side", "corner", "cx", "cy", "m"]
    }
    fn generate(&self, a: &GenArgs, _seed: u64) -> Result<Shape, Error> {
        let s: Shape = rounded_square(a.positive("side", 1.0)?, a.get("corner", 0.2), a.count("m", 256)?)?.into();
        Ok(s.translated(&[a.get("cx", 0.0), a.get("cy", 0.0)]))
    }
}

impl ShapeGenerator for RandomConvexGen {
    fn name(&self) -> &str {
        "random_convex"
    }
    fn keys(&self) -> &'static [&'static str] {
        &["m", "r", "seed"]
    }
    fn generate(&self, a: &GenArgs, seed: u64) -> Result<Shape, Error> {
        let seed = a.count("seed", seed as usize)? as u64;
        Ok(random_convex(a.count("m", 64)?, a.positive("r", 1.0)?, seed)?.into())
    }
}

impl ShapeGenerator for IcosphereGen {
    fn name(&self) -> &str {
        "icosphere"
    }
    fn keys(&self) -> &'static [&'static str] {
        &["r", "sub"]
    }
    fn generate(&self, a: &GenArgs, _seed: u64) -> Result<Shape, Error> {
        Ok(icosphere(a.positive("r", 1.0)?, a.count("sub", 3)?)?.into())
    }
}

impl ShapeGenerator for EllipsoidGen {
    fn name(&self) -> &str {
        "ellipsoid"
    }
    fn keys(&self) -> &'static [&'static str] {
        &["a", "b", "c", "sub"]
    }
    fn generate(&self, a: &GenArgs, _seed: u64) -> Result<Shape, Error> {
        let m = ellipsoid(a.positive("a", 1.0)?, a.positive("b", 1.0)?, a.positive("c", 1.0)?, a.count("sub", 3)?)?;
        Ok(m.into())
    }
}

pub fn generator_registry() -> Registry<dyn ShapeGenerator> {
    let mut reg: Registry<dyn ShapeGenerator> = Registry::new("shape generator");
    reg.register("circle", Arc::new(CircleGen));
    reg.register("ellipse", Arc::new(EllipseGen));
    reg.register("rounded_square", Arc::new(RoundedSquareGen));
    reg.register("random_convex", Arc::new(RandomConvexGen));
    reg.register("icosphere", Arc::new(IcosphereGen));
    reg.register("ellipsoid", Arc::new(EllipsoidGen));
    reg
}

/// Splits `name:key=value,...` into the generator name and its arguments.
pub fn parse_spec(spec: &str) -> Result<(String, GenArgs), Error> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut args = GenArgs::default();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("generator argument '{item}' is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("generator argument '{k}' has non-numeric value '{v}'")))?;
        args.values.insert(k.trim().to_string(), v);
    }
    Ok((name.trim().to_string(), args))
}

/// Builds the shape described by a generator spec.
pub fn generate_shape(spec: &str, seed: u64) -> Result<Shape, Error> {
    let (name, args) = parse_spec(spec)?;
    let generator = generator_registry().get(&name)?;
    if let Some(bad) = args.keys().find(|k| !generator.keys().contains(k)) {
        return Err(Error::Config(format!(
            "generator '{name}' has no argument '{bad}' (accepted: {})",
            generator.keys().join(", ")
        )));
    }
    generator.generate(&args, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::roundness;

    #[test]
    fn circle_circumradius() {
        let s = generate_shape("circle:r=1,m=256", 0).unwrap();
        assert_eq!(s.vertex_count(), 256);
        assert!((s.circumradius() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_convex_is_deterministic() {
        let a = generate_shape("random_convex:m=64", 7).unwrap();
        let b = generate_shape("random_convex:m=64,seed=7", 99).unwrap();
        assert_eq!(a.coordinates(), b.coordinates());
        assert_eq!(a.vertex_count(), 64);
        assert!(a.is_convex());
        assert!((a.circumradius() - 1.0).abs() < 1e-9);
        let c = generate_shape("random_convex:m=64", 8).unwrap();
        assert_ne!(a.coordinates(), c.coordinates());
    }

    #[test]
    fn ellipsoid_roundness() {
        let s = generate_shape("ellipsoid:a=1,b=1,c=1,sub=3", 0).unwrap();
        assert!(roundness(&s).unwrap() < 1e-2);
    }

    #[test]
    fn rounded_square_is_convex() {
        let s = generate_shape("rounded_square:side=1,corner=0.2,m=200", 0).unwrap();
        assert!(s.is_convex());
        assert!((s.max_vertex_norm() - (0.3 * 2f64.sqrt() + 0.2)).abs() < 1e-3);
    }

    #[test]
    fn too_few_vertices_rejected() {
        assert!(matches!(
            generate_shape("circle:m=3", 0),
            Err(Error::Geom(GeomError::TooFewVertices { .. }))
        ));
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(matches!(generate_shape("blob:r=1", 0), Err(Error::UnknownStrategy { .. })));
        assert!(generate_shape("circle:q=1", 0).is_err());
        assert!(generate_shape("circle:r", 0).is_err());
        assert!(generate_shape("circle:r=-1", 0).is_err());
    }
}
