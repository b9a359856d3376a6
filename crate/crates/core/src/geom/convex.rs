use super::Hypersurface;
use crate::error::GeomError;

/// A vertex lying outside the supporting halfspace of an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityWitness {
    pub element: usize,
    pub vertex: usize,
    /// Signed distance of the vertex beyond the element's plane.
    pub excess: f64,
}

impl From<ConvexityWitness> for GeomError {
    fn from(w: ConvexityWitness) -> Self {
        GeomError::NotConvex {
            element: w.element,
            vertex: w.vertex,
        }
    }
}

/// Relative tolerance band for the halfspace tests.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// True iff every vertex lies in the inner closed halfspace of every
/// edge-line / face-plane, up to `1e-9 · diameter`.
///
/// Local convexity plus the shape invariants (simple curve with total turning
/// 2π, closed oriented sphere-like mesh) implies global convexity, so the
/// linear-time local test decides the common case; the quadratic scan only
/// runs to produce a witness.
pub fn is_convex<const D: usize, S: Hypersurface<D>>(s: &S) -> Result<(), ConvexityWitness> {
    let tol = CONVEXITY_TOL * s.bbox_diagonal() / (D as f64).sqrt();
    if s.is_locally_convex(tol) {
        return Ok(());
    }
    let verts = s.vertices();
    let mut worst: Option<ConvexityWitness> = None;
    for e in 0..s.element_count() {
        let plane = s.facet_plane(e);
        for (i, p) in verts.iter().enumerate() {
            let d = plane.signed_distance(p);
            if d > tol && worst.is_none_or(|w| d > w.excess) {
                worst = Some(ConvexityWitness {
                    element: e,
                    vertex: i,
                    excess: d,
                });
            }
        }
    }
    match worst {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Curve2, Mesh3};
    use nalgebra::Vector2;
    use std::f64::consts::PI;

    fn polygon(m: usize, radius: impl Fn(usize) -> f64) -> Curve2 {
        Curve2::new(
            (0..m)
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / m as f64;
                    Vector2::new(radius(k) * th.cos(), radius(k) * th.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn regular_polygon_is_convex() {
        assert!(is_convex(&polygon(64, |_| 1.0)).is_ok());
    }

    #[test]
    fn star_has_witness() {
        let star = polygon(16, |k| if k % 2 == 0 { 1.0 } else { 0.4 });
        let w = is_convex(&star).unwrap_err();
        let plane = star.facet_plane(w.element);
        assert!(plane.signed_distance(&star.vertices()[w.vertex]) > 0.0);
        assert!(w.excess > 0.1);
    }

    #[test]
    fn icosphere_is_convex() {
        assert!(is_convex(&Mesh3::icosphere(1.0, 3).unwrap()).is_ok());
    }

    #[test]
    fn dented_sphere_is_not_convex() {
        let m = Mesh3::icosphere(1.0, 2).unwrap();
        let mut v = m.vertices().to_vec();
        v[0] *= 0.8;
        let dented = Mesh3::new(v, m.faces().to_vec()).unwrap();
        let w = is_convex(&dented).unwrap_err();
        // the faces around the dent tilt inward, exposing its neighbours
        assert!(dented.faces()[w.element].contains(&0));
        assert!(w.excess > 0.0);
    }
}
