//! Discrete geometry of closed hypersurfaces: polygons in the plane and
//! triangle meshes in space.
//!
//! Sign convention used throughout the crate: normals point outward and the
//! discrete mean curvature `H_disc` is positive on convex shapes (a circle of
//! radius ρ has `H_disc = 1/ρ`, a sphere `2/ρ`). The mean curvature vector is
//! `-H_disc · N_out`.

mod balls;
mod convex;
mod curve;
mod hausdorff;
mod lp;
mod mesh;

use nalgebra::SVector;

use crate::error::GeomError;

pub use balls::{circumball, circumball_of_points, inball, inball_of_planes};
pub use convex::{is_convex, ConvexityWitness};
pub use curve::{Curve2, MIN_CURVE_VERTICES};
pub use hausdorff::{hausdorff_distance, one_sided_hausdorff};
pub use mesh::{Mesh3, DEFAULT_MIN_ANGLE};

/// Point or displacement in `D`-dimensional Euclidean space.
pub type Point<const D: usize> = SVector<f64, D>;

/// Closed ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball<const D: usize> {
    pub center: Point<D>,
    pub radius: f64,
}

impl<const D: usize> Ball<D> {
    pub fn new(center: Point<D>, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Self { center, radius }
    }

    pub fn contains(&self, p: &Point<D>, tol: f64) -> bool {
        (p - self.center).norm() <= self.radius + tol
    }
}

/// Oriented hyperplane `{x : normal·x = offset}` with unit outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane<const D: usize> {
    pub normal: Point<D>,
    pub offset: f64,
}

impl<const D: usize> Plane<D> {
    /// Positive outside, negative inside.
    pub fn signed_distance(&self, p: &Point<D>) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Per-vertex discrete curvature and outward unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField<const D: usize> {
    pub curvature: Vec<f64>,
    pub normals: Vec<Point<D>>,
    /// Non-fatal diagnostics such as near-degenerate triangles.
    pub warnings: Vec<String>,
}

impl<const D: usize> CurvatureField<D> {
    pub fn len(&self) -> usize {
        self.curvature.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curvature.is_empty()
    }
}

/// A closed, oriented, discretized hypersurface of `D`-space.
///
/// Implementations guarantee the shape invariants at construction. Methods
/// that move vertices go through [`Hypersurface::displaced`], which repeats
/// the cheap checks; the quadratic embedding check is separate
/// ([`Hypersurface::check_embedding`]).
pub trait Hypersurface<const D: usize>: Clone + Send + Sync + Sized + std::fmt::Debug {
    /// Intrinsic dimension `n = D - 1`.
    const N: usize;

    fn vertices(&self) -> &[Point<D>];

    /// Same connectivity, new vertex positions; rejects orientation flips,
    /// zero-length edges, degenerate faces and non-finite coordinates.
    fn displaced(&self, vertices: Vec<Point<D>>) -> Result<Self, GeomError>;

    /// Applies a map that is known to preserve the invariants (translation,
    /// positive scaling) without re-validating.
    fn map_vertices(&self, f: impl Fn(&Point<D>) -> Point<D>) -> Self;

    fn curvature_normal(&self) -> Result<CurvatureField<D>, GeomError>;

    /// Vertex share of the total measure (half the incident edge lengths,
    /// or a third of the incident triangle areas).
    fn dual_measures(&self) -> Vec<f64>;

    /// Length (n = 1) or area (n = 2).
    fn measure(&self) -> f64;

    /// Enclosed area (n = 1) or volume (n = 2); positive by orientation.
    fn enclosed_measure(&self) -> f64;

    fn element_count(&self) -> usize;
    fn element_centroid(&self, element: usize) -> Point<D>;
    fn element_measure(&self, element: usize) -> f64;
    fn element_vertices(&self, element: usize) -> Vec<usize>;
    fn distance_to_element(&self, element: usize, p: &Point<D>) -> f64;
    fn facet_plane(&self, element: usize) -> Plane<D>;

    /// Convexity across every edge/vertex, tested locally with tolerance `tol`.
    fn is_locally_convex(&self, tol: f64) -> bool;

    fn contains_point(&self, p: &Point<D>) -> bool;

    fn min_edge_length(&self) -> f64;

    /// Global embedding test (self-intersections). Quadratic cost.
    fn check_embedding(&self) -> Result<(), GeomError>;

    fn distance_to(&self, p: &Point<D>) -> f64 {
        (0..self.element_count())
            .map(|e| self.distance_to_element(e, p))
            .fold(f64::INFINITY, f64::min)
    }

    fn translated(&self, w: &Point<D>) -> Self {
        self.map_vertices(|p| p + w)
    }

    /// Uniform scaling about the origin; `factor` must be positive.
    fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        self.map_vertices(|p| p * factor)
    }

    fn vertex_centroid(&self) -> Point<D> {
        let v = self.vertices();
        v.iter().fold(Point::<D>::zeros(), |acc, p| acc + p) / v.len() as f64
    }

    /// Centroid of the vertices weighted by their dual measures.
    fn weighted_centroid(&self) -> Point<D> {
        let w = self.dual_measures();
        let total: f64 = w.iter().sum();
        self.vertices()
            .iter()
            .zip(&w)
            .fold(Point::<D>::zeros(), |acc, (p, wi)| acc + p * *wi)
            / total
    }

    fn max_vertex_norm(&self) -> f64 {
        self.vertices().iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Exact diameter of the vertex set (quadratic).
    fn diameter(&self) -> f64 {
        let v = self.vertices();
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max((v[i] - v[j]).norm_squared());
            }
        }
        best.sqrt()
    }

    /// Diagonal of the axis-aligned bounding box; `diameter ≤ bbox ≤ √D·diameter`.
    fn bbox_diagonal(&self) -> f64 {
        let v = self.vertices();
        let mut lo = v[0];
        let mut hi = v[0];
        for p in v {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (hi - lo).norm()
    }
}

/// The shape being evolved: exactly one of a planar curve or a surface mesh.
#[derive(Debug, Clone)]
pub enum Shape {
    Curve(Curve2),
    Mesh(Mesh3),
}

/// Evaluates `$body` with `$s` bound to the inner curve or mesh.
#[macro_export]
macro_rules! with_shape {
    ($shape:expr, $s:ident => $body:expr) => {
        match $shape {
            $crate::geom::Shape::Curve($s) => $body,
            $crate::geom::Shape::Mesh($s) => $body,
        }
    };
}

impl Shape {
    /// Intrinsic dimension n.
    pub fn n(&self) -> usize {
        match self {
            Shape::Curve(_) => 1,
            Shape::Mesh(_) => 2,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n() + 1
    }

    pub fn vertex_count(&self) -> usize {
        with_shape!(self, s => s.vertices().len())
    }

    pub fn measure(&self) -> f64 {
        with_shape!(self, s => s.measure())
    }

    pub fn enclosed_measure(&self) -> f64 {
        with_shape!(self, s => s.enclosed_measure())
    }

    pub fn diameter(&self) -> f64 {
        with_shape!(self, s => s.diameter())
    }

    pub fn max_vertex_norm(&self) -> f64 {
        with_shape!(self, s => s.max_vertex_norm())
    }

    pub fn circumradius(&self) -> f64 {
        with_shape!(self, s => circumball(s).radius)
    }

    pub fn inradius(&self) -> Result<f64, GeomError> {
        with_shape!(self, s => inball(s).map(|b| b.radius))
    }

    pub fn is_convex(&self) -> bool {
        with_shape!(self, s => is_convex(s).is_ok())
    }

    /// Vertex coordinates padded to three components (z = 0 for curves).
    pub fn coordinates(&self) -> Vec<[f64; 3]> {
        match self {
            Shape::Curve(c) => c.vertices().iter().map(|p| [p.x, p.y, 0.0]).collect(),
            Shape::Mesh(m) => m.vertices().iter().map(|p| [p.x, p.y, p.z]).collect(),
        }
    }

    /// Translation by a vector given in ambient coordinates (extra
    /// components are ignored, missing ones are zero).
    pub fn translated(&self, w: &[f64]) -> Shape {
        let get = |i: usize| w.get(i).copied().unwrap_or(0.0);
        match self {
            Shape::Curve(c) => Shape::Curve(c.translated(&Point::<2>::new(get(0), get(1)))),
            Shape::Mesh(m) => Shape::Mesh(m.translated(&Point::<3>::new(get(0), get(1), get(2)))),
        }
    }

    pub fn scaled(&self, factor: f64) -> Shape {
        match self {
            Shape::Curve(c) => Shape::Curve(c.scaled(factor)),
            Shape::Mesh(m) => Shape::Mesh(m.scaled(factor)),
        }
    }

    /// Centre and radius of the smallest enclosing ball.
    pub fn circumball_parts(&self) -> (Vec<f64>, f64) {
        with_shape!(self, s => {
            let b = circumball(s);
            (b.center.iter().copied().collect(), b.radius)
        })
    }

    /// Centre and radius of the largest inscribed ball (convex shapes only).
    pub fn inball_parts(&self) -> Result<(Vec<f64>, f64), GeomError> {
        with_shape!(self, s => {
            let b = inball(s)?;
            Ok((b.center.iter().copied().collect(), b.radius))
        })
    }

    /// Vertex centroid weighted by dual measures.
    pub fn centroid(&self) -> Vec<f64> {
        with_shape!(self, s => s.weighted_centroid().iter().copied().collect())
    }

    /// Smallest signed distance from the origin to a facet plane, positive
    /// when the origin is on the inner side. For convex shapes this is the
    /// radius of the largest origin-centred ball inside.
    pub fn min_facet_offset(&self) -> f64 {
        with_shape!(self, s => (0..s.element_count())
            .map(|e| s.facet_plane(e).offset)
            .fold(f64::INFINITY, f64::min))
    }

    /// Whether the point (ambient coordinates) lies in the enclosed region.
    pub fn contains_point(&self, p: &[f64]) -> bool {
        let get = |i: usize| p.get(i).copied().unwrap_or(0.0);
        match self {
            Shape::Curve(c) => c.contains_point(&Point::<2>::new(get(0), get(1))),
            Shape::Mesh(m) => m.contains_point(&Point::<3>::new(get(0), get(1), get(2))),
        }
    }

    /// Distance from a point to the shape.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let get = |i: usize| p.get(i).copied().unwrap_or(0.0);
        match self {
            Shape::Curve(c) => c.distance_to(&Point::<2>::new(get(0), get(1))),
            Shape::Mesh(m) => m.distance_to(&Point::<3>::new(get(0), get(1), get(2))),
        }
    }

    pub fn as_curve(&self) -> Option<&Curve2> {
        match self {
            Shape::Curve(c) => Some(c),
            Shape::Mesh(_) => None,
        }
    }

    pub fn as_mesh(&self) -> Option<&Mesh3> {
        match self {
            Shape::Mesh(m) => Some(m),
            Shape::Curve(_) => None,
        }
    }
}

impl From<Curve2> for Shape {
    fn from(c: Curve2) -> Self {
        Shape::Curve(c)
    }
}

impl From<Mesh3> for Shape {
    fn from(m: Mesh3) -> Self {
        Shape::Mesh(m)
    }
}

/// Measure of the shape (length or area).
pub fn measure<const D: usize, S: Hypersurface<D>>(s: &S) -> f64 {
    s.measure()
}

/// Enclosed measure (area or volume).
pub fn enclosed_measure<const D: usize, S: Hypersurface<D>>(s: &S) -> f64 {
    s.enclosed_measure()
}

/// Hausdorff distance between two shapes of the same kind.
pub fn shape_hausdorff(a: &Shape, b: &Shape) -> Result<f64, GeomError> {
    match (a, b) {
        (Shape::Curve(a), Shape::Curve(b)) => Ok(hausdorff_distance(a, b)),
        (Shape::Mesh(a), Shape::Mesh(b)) => Ok(hausdorff_distance(a, b)),
        _ => Err(GeomError::DimensionMismatch(
            "cannot compare a curve with a mesh".into(),
        )),
    }
}

/// Largest vertex displacement between two shapes with the same vertex count.
pub fn max_vertex_distance(a: &Shape, b: &Shape) -> Result<f64, GeomError> {
    fn inner<const D: usize>(a: &[Point<D>], b: &[Point<D>]) -> Result<f64, GeomError> {
        if a.len() != b.len() {
            return Err(GeomError::DimensionMismatch(format!(
                "vertex counts differ: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        Ok(a.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max))
    }
    match (a, b) {
        (Shape::Curve(a), Shape::Curve(b)) => inner(a.vertices(), b.vertices()),
        (Shape::Mesh(a), Shape::Mesh(b)) => inner(a.vertices(), b.vertices()),
        _ => Err(GeomError::DimensionMismatch(
            "cannot compare a curve with a mesh".into(),
        )),
    }
}
