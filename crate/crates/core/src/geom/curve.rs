use std::f64::consts::PI;

use nalgebra::Vector2;

use super::{CurvatureField, Hypersurface, Plane, Point};
use crate::error::GeomError;

/// Minimum number of vertices of a [`Curve2`].
pub const MIN_CURVE_VERTICES: usize = 8;

/// Closed counterclockwise simple polygon. The last vertex connects to the
/// first.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve2 {
    vertices: Vec<Vector2<f64>>,
}

fn outward_normal(t: &Vector2<f64>) -> Vector2<f64> {
    Vector2::new(t.y, -t.x)
}

fn cross(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

fn signed_area(v: &[Vector2<f64>]) -> f64 {
    let m = v.len();
    0.5 * (0..m).map(|i| cross(&v[i], &v[(i + 1) % m])).sum::<f64>()
}

fn check_basic(v: &[Vector2<f64>]) -> Result<(), GeomError> {
    if v.len() < MIN_CURVE_VERTICES {
        return Err(GeomError::TooFewVertices {
            min: MIN_CURVE_VERTICES,
            got: v.len(),
        });
    }
    if let Some(index) = v.iter().position(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(GeomError::NonFinite { index });
    }
    let m = v.len();
    for i in 0..m {
        if v[i] == v[(i + 1) % m] {
            return Err(GeomError::DegenerateEdge { index: i });
        }
    }
    Ok(())
}

/// Proper or touching intersection between segments `ab` and `cd`.
fn segments_intersect(a: &Vector2<f64>, b: &Vector2<f64>, c: &Vector2<f64>, d: &Vector2<f64>) -> bool {
    let d1 = cross(&(b - a), &(c - a));
    let d2 = cross(&(b - a), &(d - a));
    let d3 = cross(&(d - c), &(a - c));
    let d4 = cross(&(d - c), &(b - c));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |p: &Vector2<f64>, q: &Vector2<f64>, r: &Vector2<f64>| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    (d1 == 0.0 && on_segment(a, b, c))
        || (d2 == 0.0 && on_segment(a, b, d))
        || (d3 == 0.0 && on_segment(c, d, a))
        || (d4 == 0.0 && on_segment(c, d, b))
}

fn point_segment_distance(p: &Vector2<f64>, a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    let ab = b - a;
    let s = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    (p - (a + ab * s)).norm()
}

impl Curve2 {
    /// Validates every invariant: vertex count, finiteness, edge lengths,
    /// counterclockwise orientation and simplicity.
    pub fn new(vertices: Vec<Vector2<f64>>) -> Result<Self, GeomError> {
        Self::with_orientation(vertices, false)
    }

    /// Like [`Curve2::new`], but reverses clockwise input when `auto_orient`.
    pub fn with_orientation(
        mut vertices: Vec<Vector2<f64>>,
        auto_orient: bool,
    ) -> Result<Self, GeomError> {
        check_basic(&vertices)?;
        let area = signed_area(&vertices);
        if area <= 0.0 {
            if auto_orient && area < 0.0 {
                vertices.reverse();
            } else {
                return Err(GeomError::Clockwise { signed_area: area });
            }
        }
        let curve = Self { vertices };
        curve.check_embedding()?;
        Ok(curve)
    }

    pub fn from_xy(points: &[[f64; 2]]) -> Result<Self, GeomError> {
        Self::new(points.iter().map(|p| Vector2::new(p[0], p[1])).collect())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    fn edge(&self, i: usize) -> Vector2<f64> {
        let m = self.vertices.len();
        self.vertices[(i + 1) % m] - self.vertices[i]
    }

    /// Redistributes the vertices uniformly in arc length along the current
    /// polygon, keeping vertex 0 fixed.
    pub fn resample_arc_length(&self) -> Result<Self, GeomError> {
        let m = self.vertices.len();
        let lengths: Vec<f64> = (0..m).map(|i| self.edge(i).norm()).collect();
        let total: f64 = lengths.iter().sum();
        let step = total / m as f64;
        let mut out = Vec::with_capacity(m);
        let mut edge = 0;
        let mut start = 0.0;
        for k in 0..m {
            let s = k as f64 * step;
            while edge + 1 < m && start + lengths[edge] < s {
                start += lengths[edge];
                edge += 1;
            }
            let u = ((s - start) / lengths[edge]).clamp(0.0, 1.0);
            out.push(self.vertices[edge] + self.edge(edge) * u);
        }
        self.displaced(out)
    }

    /// Total signed turning angle; `2π` for a simple counterclockwise curve.
    pub fn total_turning(&self) -> f64 {
        let m = self.vertices.len();
        (0..m)
            .map(|i| {
                let a = self.edge((i + m - 1) % m);
                let b = self.edge(i);
                cross(&a, &b).atan2(a.dot(&b))
            })
            .sum()
    }
}

impl Hypersurface<2> for Curve2 {
    const N: usize = 1;

    fn vertices(&self) -> &[Point<2>] {
        &self.vertices
    }

    fn displaced(&self, vertices: Vec<Point<2>>) -> Result<Self, GeomError> {
        if vertices.len() != self.vertices.len() {
            return Err(GeomError::DimensionMismatch(format!(
                "expected {} vertices, got {}",
                self.vertices.len(),
                vertices.len()
            )));
        }
        check_basic(&vertices)?;
        let m = vertices.len();
        for i in 0..m {
            let new_edge = vertices[(i + 1) % m] - vertices[i];
            if new_edge.dot(&self.edge(i)) <= 0.0 {
                return Err(GeomError::FlippedEdge { index: i });
            }
        }
        let area = signed_area(&vertices);
        if area <= 0.0 {
            return Err(GeomError::InwardOrientation { value: area });
        }
        Ok(Self { vertices })
    }

    fn map_vertices(&self, f: impl Fn(&Point<2>) -> Point<2>) -> Self {
        Self {
            vertices: self.vertices.iter().map(f).collect(),
        }
    }

    /// Length-gradient curvature: at vertex `p` with neighbours `p⁻`, `p⁺`
    /// the curvature vector is `(û(p⁻−p) + û(p⁺−p)) / (½(|p⁻−p| + |p⁺−p|))`,
    /// which is parallel to the sum of the two outward edge normals.
    fn curvature_normal(&self) -> Result<CurvatureField<2>, GeomError> {
        let m = self.vertices.len();
        let mut curvature = Vec::with_capacity(m);
        let mut normals = Vec::with_capacity(m);
        for i in 0..m {
            let prev = self.edge((i + m - 1) % m);
            let next = self.edge(i);
            let (lp, ln) = (prev.norm(), next.norm());
            if lp == 0.0 {
                return Err(GeomError::DegenerateEdge { index: (i + m - 1) % m });
            }
            if ln == 0.0 {
                return Err(GeomError::DegenerateEdge { index: i });
            }
            let (tp, tn) = (prev / lp, next / ln);
            let normal_sum = outward_normal(&tp) + outward_normal(&tn);
            let norm = normal_sum.norm();
            if norm < 1e-12 {
                return Err(GeomError::Cusp { index: i });
            }
            let normal = normal_sum / norm;
            let kappa = (tn - tp) / (0.5 * (lp + ln));
            curvature.push(-kappa.dot(&normal));
            normals.push(normal);
        }
        Ok(CurvatureField {
            curvature,
            normals,
            warnings: Vec::new(),
        })
    }

    fn dual_measures(&self) -> Vec<f64> {
        let m = self.vertices.len();
        let lengths: Vec<f64> = (0..m).map(|i| self.edge(i).norm()).collect();
        (0..m).map(|i| 0.5 * (lengths[(i + m - 1) % m] + lengths[i])).collect()
    }

    fn measure(&self) -> f64 {
        (0..self.vertices.len()).map(|i| self.edge(i).norm()).sum()
    }

    fn enclosed_measure(&self) -> f64 {
        self.signed_area()
    }

    fn element_count(&self) -> usize {
        self.vertices.len()
    }

    fn element_centroid(&self, e: usize) -> Point<2> {
        let m = self.vertices.len();
        0.5 * (self.vertices[e] + self.vertices[(e + 1) % m])
    }

    fn element_measure(&self, e: usize) -> f64 {
        self.edge(e).norm()
    }

    fn element_vertices(&self, e: usize) -> Vec<usize> {
        vec![e, (e + 1) % self.vertices.len()]
    }

    fn distance_to_element(&self, e: usize, p: &Point<2>) -> f64 {
        let m = self.vertices.len();
        point_segment_distance(p, &self.vertices[e], &self.vertices[(e + 1) % m])
    }

    fn facet_plane(&self, e: usize) -> Plane<2> {
        let t = self.edge(e).normalize();
        let normal = outward_normal(&t);
        Plane {
            normal,
            offset: normal.dot(&self.vertices[e]),
        }
    }

    fn is_locally_convex(&self, tol: f64) -> bool {
        let m = self.vertices.len();
        for e in 0..m {
            let plane = self.facet_plane(e);
            if plane.signed_distance(&self.vertices[(e + 2) % m]) > tol
                || plane.signed_distance(&self.vertices[(e + m - 1) % m]) > tol
            {
                return false;
            }
        }
        (self.total_turning() - 2.0 * PI).abs() < 1e-6
    }

    fn contains_point(&self, p: &Point<2>) -> bool {
        let v = &self.vertices;
        let m = v.len();
        let mut inside = false;
        let mut j = m - 1;
        for i in 0..m {
            let (a, b) = (v[i], v[j]);
            if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    fn min_edge_length(&self) -> f64 {
        (0..self.vertices.len())
            .map(|i| self.edge(i).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn check_embedding(&self) -> Result<(), GeomError> {
        let v = &self.vertices;
        let m = v.len();
        // Sweep over x-extents; only overlapping boxes are tested.
        let mut order: Vec<usize> = (0..m).collect();
        let lo = |i: usize| v[i].x.min(v[(i + 1) % m].x);
        let hi = |i: usize| v[i].x.max(v[(i + 1) % m].x);
        order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)));
        for (k, &i) in order.iter().enumerate() {
            let hi_i = hi(i);
            for &j in &order[k + 1..] {
                if lo(j) > hi_i {
                    break;
                }
                let adjacent = (i + 1) % m == j || (j + 1) % m == i;
                if adjacent {
                    continue;
                }
                if segments_intersect(&v[i], &v[(i + 1) % m], &v[j], &v[(j + 1) % m]) {
                    return Err(GeomError::SelfIntersection {
                        first: i.min(j),
                        second: i.max(j),
                    });
                }
            }
        }
        Ok(())
    }
}
