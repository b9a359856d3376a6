use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::Vector3;

use super::{CurvatureField, Hypersurface, Plane, Point};
use crate::error::GeomError;

/// Angle below which a triangle corner is reported as near-degenerate (1°).
pub const DEFAULT_MIN_ANGLE: f64 = std::f64::consts::PI / 180.0;

#[derive(Debug, PartialEq)]
struct Topology {
    faces: Vec<[usize; 3]>,
    /// `opposite[f][k]`: vertex of the neighbouring face across edge
    /// `faces[f][k] → faces[f][(k+1)%3]` that is not on that edge.
    opposite: Vec<[usize; 3]>,
    edge_count: usize,
}

/// Closed, consistently outward-oriented triangle mesh of genus zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh3 {
    vertices: Vec<Vector3<f64>>,
    topology: Arc<Topology>,
}

fn face_cross(v: &[Vector3<f64>], f: &[usize; 3]) -> Vector3<f64> {
    (v[f[1]] - v[f[0]]).cross(&(v[f[2]] - v[f[0]]))
}

/// Mixed Voronoi vertex areas: the circumcentric share of each non-obtuse
/// face, and halves/quarters of obtuse ones. They sum to the total area.
fn mixed_areas(v: &[Vector3<f64>], faces: &[[usize; 3]]) -> Vec<f64> {
    let mut area = vec![0.0; v.len()];
    for f in faces {
        let double_area = face_cross(v, f).norm();
        let cot: [f64; 3] = std::array::from_fn(|c| {
            let (i0, i1, i2) = (f[c], f[(c + 1) % 3], f[(c + 2) % 3]);
            (v[i1] - v[i0]).dot(&(v[i2] - v[i0])) / double_area
        });
        let obtuse = (0..3).find(|&c| cot[c] < 0.0);
        for c in 0..3 {
            let (i0, i1, i2) = (f[c], f[(c + 1) % 3], f[(c + 2) % 3]);
            area[i0] += match obtuse {
                None => {
                    0.125
                        * ((v[i1] - v[i0]).norm_squared() * cot[(c + 2) % 3]
                            + (v[i2] - v[i0]).norm_squared() * cot[(c + 1) % 3])
                }
                Some(o) if o == c => 0.25 * double_area,
                Some(_) => 0.125 * double_area,
            };
        }
    }
    area
}

fn signed_volume(v: &[Vector3<f64>], faces: &[[usize; 3]]) -> f64 {
    faces
        .iter()
        .map(|f| v[f[0]].dot(&v[f[1]].cross(&v[f[2]])))
        .sum::<f64>()
        / 6.0
}

fn build_topology(vertex_count: usize, faces: Vec<[usize; 3]>) -> Result<Topology, GeomError> {
    for (fi, f) in faces.iter().enumerate() {
        if let Some(&vertex) = f.iter().find(|&&i| i >= vertex_count) {
            return Err(GeomError::IndexOutOfRange { face: fi, vertex });
        }
        if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
            return Err(GeomError::DegenerateFace { face: fi });
        }
    }

    let mut directed: HashMap<(usize, usize), (usize, usize)> = HashMap::with_capacity(faces.len() * 3);
    let mut conflicts = vec![0usize; faces.len()];
    let mut any_conflict = false;
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let key = (f[k], f[(k + 1) % 3]);
            if let Some(&(other, _)) = directed.get(&key) {
                conflicts[fi] += 1;
                conflicts[other] += 1;
                any_conflict = true;
            } else {
                directed.insert(key, (fi, k));
            }
        }
    }
    if any_conflict {
        // A flipped face conflicts on all of its edges, its neighbours on one.
        let face = (0..faces.len())
            .max_by(|&a, &b| conflicts[a].cmp(&conflicts[b]).then(b.cmp(&a)))
            .unwrap_or(0);
        return Err(GeomError::FlippedFace { face });
    }

    let mut opposite = vec![[0usize; 3]; faces.len()];
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            match directed.get(&(b, a)) {
                Some(&(g, j)) => opposite[fi][k] = faces[g][(j + 2) % 3],
                None => return Err(GeomError::NonManifoldEdge { a, b }),
            }
        }
    }

    // Each vertex star must be a single fan.
    let mut star: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    for f in &faces {
        for k in 0..3 {
            star[f[k]].push((f[(k + 1) % 3], f[(k + 2) % 3]));
        }
    }
    for (vertex, links) in star.iter().enumerate() {
        if links.is_empty() {
            return Err(GeomError::NonManifoldVertex { vertex });
        }
        let next: HashMap<usize, usize> = links.iter().copied().collect();
        if next.len() != links.len() {
            return Err(GeomError::NonManifoldVertex { vertex });
        }
        let start = links[0].0;
        let mut cur = start;
        let mut steps = 0;
        loop {
            cur = match next.get(&cur) {
                Some(&n) => n,
                None => return Err(GeomError::NonManifoldVertex { vertex }),
            };
            steps += 1;
            if cur == start || steps > links.len() {
                break;
            }
        }
        if steps != links.len() {
            return Err(GeomError::NonManifoldVertex { vertex });
        }
    }

    let edge_count = directed.len() / 2;
    let chi = vertex_count as i64 - edge_count as i64 + faces.len() as i64;
    if chi != 2 {
        return Err(GeomError::EulerCharacteristic { chi });
    }
    Ok(Topology {
        faces,
        opposite,
        edge_count,
    })
}

fn point_triangle_distance(p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    // Closest point by Voronoi-region classification.
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return ap.norm();
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return bp.norm();
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (p - (a + ab * v)).norm();
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return cp.norm();
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (p - (a + ac * w)).norm();
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + (c - b) * w)).norm();
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (p - (a + ab * v + ac * w)).norm()
}

/// Minimum cosine between the cotangent curvature vector and the
/// area-weighted face normal for the former to define the vertex normal.
const NORMAL_ALIGNMENT: f64 = 0.5;

impl Mesh3 {
    /// Validates connectivity (closed 2-manifold, consistent orientation,
    /// Euler characteristic 2) and geometry (finite, non-degenerate faces,
    /// outward orientation).
    pub fn new(vertices: Vec<Vector3<f64>>, faces: Vec<[usize; 3]>) -> Result<Self, GeomError> {
        if vertices.len() < 4 {
            return Err(GeomError::TooFewVertices {
                min: 4,
                got: vertices.len(),
            });
        }
        if let Some(index) = vertices.iter().position(|p| !p.iter().all(|x| x.is_finite())) {
            return Err(GeomError::NonFinite { index });
        }
        let topology = build_topology(vertices.len(), faces)?;
        let mesh = Self {
            vertices,
            topology: Arc::new(topology),
        };
        mesh.check_faces(None)?;
        let volume = mesh.enclosed_measure();
        if volume <= 0.0 {
            return Err(GeomError::InwardOrientation { value: volume });
        }
        Ok(mesh)
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.topology.faces
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.topology.edge_count as i64 + self.topology.faces.len() as i64
    }

    /// Rejects degenerate faces and, when `previous` is given, faces whose
    /// normal reversed relative to it.
    fn check_faces(&self, previous: Option<&[Vector3<f64>]>) -> Result<(), GeomError> {
        let scale = self.bbox_diagonal().max(f64::MIN_POSITIVE);
        let floor = 1e-14 * scale * scale;
        for (fi, f) in self.topology.faces.iter().enumerate() {
            let n = face_cross(&self.vertices, f);
            if n.norm() <= floor {
                return Err(GeomError::DegenerateFace { face: fi });
            }
            if let Some(prev) = previous {
                if n.dot(&face_cross(prev, f)) <= 0.0 {
                    return Err(GeomError::FlippedFace { face: fi });
                }
            }
        }
        Ok(())
    }

    /// Cotangent-weight mean curvature with an explicit near-degenerate
    /// angle floor (radians) for the warning list.
    pub fn curvature_normal_with_floor(&self, min_angle: f64) -> Result<CurvatureField<3>, GeomError> {
        let v = &self.vertices;
        let nv = v.len();
        let mut grad = vec![Vector3::zeros(); nv];
        let area = mixed_areas(v, &self.topology.faces);
        let mut normal_sum = vec![Vector3::zeros(); nv];
        let mut warnings = Vec::new();
        for (fi, f) in self.topology.faces.iter().enumerate() {
            let n = face_cross(v, f);
            let double_area = n.norm();
            if double_area == 0.0 {
                return Err(GeomError::DegenerateFace { face: fi });
            }
            let mut smallest = f64::INFINITY;
            for c in 0..3 {
                let (i0, i1, i2) = (f[c], f[(c + 1) % 3], f[(c + 2) % 3]);
                let dot = (v[i1] - v[i0]).dot(&(v[i2] - v[i0]));
                let cot = dot / double_area;
                smallest = smallest.min(double_area.atan2(dot));
                let e = v[i1] - v[i2];
                grad[i1] += e * (0.5 * cot);
                grad[i2] -= e * (0.5 * cot);
                normal_sum[i0] += n;
            }
            if smallest < min_angle {
                warnings.push(format!(
                    "face {fi}: minimum angle {:.3}° below floor",
                    smallest.to_degrees()
                ));
            }
        }
        let mut curvature = Vec::with_capacity(nv);
        let mut normals = Vec::with_capacity(nv);
        for i in 0..nv {
            let face_normal = normal_sum[i].normalize();
            let k = grad[i] / area[i];
            let along = k.dot(&face_normal);
            // the normal follows the curvature vector unless it is tiny or
            // far from the face normals (flat or saddle-like fans)
            if along.abs() >= NORMAL_ALIGNMENT * k.norm() && k.norm() > 0.0 {
                let sign = along.signum();
                curvature.push(sign * k.norm());
                normals.push(k * (sign / k.norm()));
            } else {
                curvature.push(along);
                normals.push(face_normal);
            }
        }
        Ok(CurvatureField {
            curvature,
            normals,
            warnings,
        })
    }

    /// Moves every vertex halfway towards the centroid of its neighbours,
    /// keeping only the component tangent to the vertex normal. The swept
    /// surface changes only at second order in the displacement.
    pub fn relax_tangential(&self) -> Result<Self, GeomError> {
        let field = self.curvature_normal()?;
        let nv = self.vertices.len();
        let mut sum = vec![Vector3::zeros(); nv];
        let mut count = vec![0usize; nv];
        // each directed edge of a closed oriented mesh appears in exactly one face
        for f in &self.topology.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                sum[a] += self.vertices[b];
                count[a] += 1;
            }
        }
        let moved = (0..nv)
            .map(|i| {
                let n = field.normals[i];
                let d = sum[i] / count[i] as f64 - self.vertices[i];
                self.vertices[i] + (d - n * d.dot(&n)) * 0.5
            })
            .collect();
        self.displaced(moved)
    }

    /// Icosahedron refined `subdivisions` times by edge midpoints, projected
    /// onto the sphere of the given radius centred at the origin.
    pub fn icosphere(radius: f64, subdivisions: usize) -> Result<Self, GeomError> {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let mut verts: Vec<Vector3<f64>> = [
            [-1.0, t, 0.0],
            [1.0, t, 0.0],
            [-1.0, -t, 0.0],
            [1.0, -t, 0.0],
            [0.0, -1.0, t],
            [0.0, 1.0, t],
            [0.0, -1.0, -t],
            [0.0, 1.0, -t],
            [t, 0.0, -1.0],
            [t, 0.0, 1.0],
            [-t, 0.0, -1.0],
            [-t, 0.0, 1.0],
        ]
        .iter()
        .map(|p| Vector3::from(*p).normalize())
        .collect();
        let mut faces: Vec<[usize; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..subdivisions {
            let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
            let mut next = Vec::with_capacity(faces.len() * 4);
            let mut mid = |a: usize, b: usize, verts: &mut Vec<Vector3<f64>>| -> usize {
                let key = (a.min(b), a.max(b));
                *midpoint.entry(key).or_insert_with(|| {
                    verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                    verts.len() - 1
                })
            };
            for f in &faces {
                let ab = mid(f[0], f[1], &mut verts);
                let bc = mid(f[1], f[2], &mut verts);
                let ca = mid(f[2], f[0], &mut verts);
                next.push([f[0], ab, ca]);
                next.push([f[1], bc, ab]);
                next.push([f[2], ca, bc]);
                next.push([ab, bc, ca]);
            }
            faces = next;
        }
        for p in &mut verts {
            *p *= radius;
        }
        Self::new(verts, faces)
    }

    /// Icosphere of unit radius stretched to semi-axes `(a, b, c)`.
    pub fn ellipsoid(a: f64, b: f64, c: f64, subdivisions: usize) -> Result<Self, GeomError> {
        let sphere = Self::icosphere(1.0, subdivisions)?;
        let verts = sphere
            .vertices
            .iter()
            .map(|p| Vector3::new(a * p.x, b * p.y, c * p.z))
            .collect();
        Self::new(verts, sphere.topology.faces.clone())
    }
}

impl Hypersurface<3> for Mesh3 {
    const N: usize = 2;

    fn vertices(&self) -> &[Point<3>] {
        &self.vertices
    }

    fn displaced(&self, vertices: Vec<Point<3>>) -> Result<Self, GeomError> {
        if vertices.len() != self.vertices.len() {
            return Err(GeomError::DimensionMismatch(format!(
                "expected {} vertices, got {}",
                self.vertices.len(),
                vertices.len()
            )));
        }
        if let Some(index) = vertices.iter().position(|p| !p.iter().all(|x| x.is_finite())) {
            return Err(GeomError::NonFinite { index });
        }
        let mesh = Self {
            vertices,
            topology: Arc::clone(&self.topology),
        };
        mesh.check_faces(Some(&self.vertices))?;
        let volume = mesh.enclosed_measure();
        if volume <= 0.0 {
            return Err(GeomError::InwardOrientation { value: volume });
        }
        Ok(mesh)
    }

    fn map_vertices(&self, f: impl Fn(&Point<3>) -> Point<3>) -> Self {
        Self {
            vertices: self.vertices.iter().map(f).collect(),
            topology: Arc::clone(&self.topology),
        }
    }

    /// `H_disc · N_out` is the normal part of `∇_i Area / A_i`, the cotangent
    /// Laplacian of the position divided by the mixed Voronoi vertex area, so
    /// a sphere of radius ρ gives `H_disc ≈ 2/ρ`.
    fn curvature_normal(&self) -> Result<CurvatureField<3>, GeomError> {
        self.curvature_normal_with_floor(DEFAULT_MIN_ANGLE)
    }

    fn dual_measures(&self) -> Vec<f64> {
        mixed_areas(&self.vertices, &self.topology.faces)
    }

    fn measure(&self) -> f64 {
        self.topology
            .faces
            .iter()
            .map(|f| 0.5 * face_cross(&self.vertices, f).norm())
            .sum()
    }

    fn enclosed_measure(&self) -> f64 {
        signed_volume(&self.vertices, &self.topology.faces)
    }

    fn element_count(&self) -> usize {
        self.topology.faces.len()
    }

    fn element_centroid(&self, e: usize) -> Point<3> {
        let f = &self.topology.faces[e];
        (self.vertices[f[0]] + self.vertices[f[1]] + self.vertices[f[2]]) / 3.0
    }

    fn element_measure(&self, e: usize) -> f64 {
        0.5 * face_cross(&self.vertices, &self.topology.faces[e]).norm()
    }

    fn element_vertices(&self, e: usize) -> Vec<usize> {
        self.topology.faces[e].to_vec()
    }

    fn distance_to_element(&self, e: usize, p: &Point<3>) -> f64 {
        let f = &self.topology.faces[e];
        point_triangle_distance(p, &self.vertices[f[0]], &self.vertices[f[1]], &self.vertices[f[2]])
    }

    fn facet_plane(&self, e: usize) -> Plane<3> {
        let f = &self.topology.faces[e];
        let normal = face_cross(&self.vertices, f).normalize();
        Plane {
            normal,
            offset: normal.dot(&self.vertices[f[0]]),
        }
    }

    fn is_locally_convex(&self, tol: f64) -> bool {
        (0..self.topology.faces.len()).all(|fi| {
            let plane = self.facet_plane(fi);
            self.topology.opposite[fi]
                .iter()
                .all(|&o| plane.signed_distance(&self.vertices[o]) <= tol)
        })
    }

    /// Generalized winding number from the solid angles of all faces.
    fn contains_point(&self, p: &Point<3>) -> bool {
        let mut total = 0.0;
        for f in &self.topology.faces {
            let a = self.vertices[f[0]] - p;
            let b = self.vertices[f[1]] - p;
            let c = self.vertices[f[2]] - p;
            let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
            let det = a.dot(&b.cross(&c));
            let denom = la * lb * lc + a.dot(&b) * lc + a.dot(&c) * lb + b.dot(&c) * la;
            total += 2.0 * det.atan2(denom);
        }
        total / (4.0 * std::f64::consts::PI) > 0.5
    }

    fn min_edge_length(&self) -> f64 {
        let v = &self.vertices;
        self.topology
            .faces
            .iter()
            .flat_map(|f| (0..3).map(move |k| (f[k], f[(k + 1) % 3])))
            .map(|(a, b)| (v[a] - v[b]).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Meshes are only checked for face flips while they move; global
    /// triangle-triangle intersection tests are not performed.
    fn check_embedding(&self) -> Result<(), GeomError> {
        self.check_faces(None)
    }
}
