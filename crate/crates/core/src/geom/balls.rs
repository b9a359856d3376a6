use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{convex::is_convex, lp, Ball, Hypersurface, Plane, Point};
use crate::error::GeomError;

const SHUFFLE_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Smallest ball through all points of `support` with them on its boundary,
/// centre restricted to their affine hull.
fn ball_from_support<const D: usize>(support: &[Point<D>]) -> Option<Ball<D>> {
    match support.len() {
        0 => None,
        1 => Some(Ball::new(support[0], 0.0)),
        k => {
            let p0 = support[0];
            let q: Vec<Point<D>> = support[1..].iter().map(|p| p - p0).collect();
            let gram = DMatrix::from_fn(k - 1, k - 1, |i, j| 2.0 * q[i].dot(&q[j]));
            let rhs = DVector::from_fn(k - 1, |i, _| q[i].norm_squared());
            match gram.lu().solve(&rhs) {
                Some(lambda) if lambda.iter().all(|x| x.is_finite()) => {
                    let offset = q
                        .iter()
                        .zip(lambda.iter())
                        .fold(Point::<D>::zeros(), |acc, (qi, li)| acc + qi * *li);
                    Some(Ball::new(p0 + offset, offset.norm()))
                }
                _ => {
                    // Affinely dependent support: fall back to the widest pair.
                    let mut best = Ball::new(p0, 0.0);
                    for i in 0..k {
                        for j in i + 1..k {
                            let r = 0.5 * (support[i] - support[j]).norm();
                            if r > best.radius {
                                best = Ball::new(0.5 * (support[i] + support[j]), r);
                            }
                        }
                    }
                    Some(best)
                }
            }
        }
    }
}

fn outside<const D: usize>(ball: &Option<Ball<D>>, p: &Point<D>) -> bool {
    match ball {
        None => true,
        Some(b) => (p - b.center).norm() > b.radius * (1.0 + 1e-12) + 1e-300,
    }
}

fn welzl<const D: usize>(points: &[Point<D>], n: usize, support: &mut Vec<Point<D>>) -> Option<Ball<D>> {
    let mut ball = ball_from_support(support);
    if support.len() == D + 1 {
        return ball;
    }
    for i in 0..n {
        if outside(&ball, &points[i]) {
            support.push(points[i]);
            ball = welzl(points, i, support);
            support.pop();
        }
    }
    ball
}

/// Smallest enclosing ball (randomized incremental construction with a fixed
/// shuffle seed, so results are deterministic).
pub fn circumball_of_points<const D: usize>(points: &[Point<D>]) -> Ball<D> {
    assert!(!points.is_empty(), "circumball of an empty set");
    let mut shuffled = points.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    let mut support = Vec::with_capacity(D + 1);
    welzl(&shuffled, shuffled.len(), &mut support).expect("non-empty input")
}

/// Smallest ball containing every vertex of the shape.
pub fn circumball<const D: usize, S: Hypersurface<D>>(s: &S) -> Ball<D> {
    circumball_of_points(s.vertices())
}

/// Largest ball inside `∩ {x : plane.normal·x ≤ plane.offset}`. `hint` should
/// be an interior point; it only improves conditioning.
pub fn inball_of_planes<const D: usize>(planes: &[Plane<D>], hint: &Point<D>) -> Option<Ball<D>> {
    let normals: Vec<f64> = planes.iter().flat_map(|p| p.normal.iter().copied().collect::<Vec<_>>()).collect();
    let offsets: Vec<f64> = planes.iter().map(|p| p.offset - p.normal.dot(hint)).collect();
    let (c, _) = lp::chebyshev_center(&normals, &offsets, D)?;
    let center = hint + Point::<D>::from_iterator(c);
    let radius = planes
        .iter()
        .map(|p| -p.signed_distance(&center))
        .fold(f64::INFINITY, f64::min);
    (radius >= 0.0).then(|| Ball::new(center, radius))
}

/// Chebyshev ball of a convex shape: the largest ball contained in the
/// region it bounds. Rejects non-convex input.
pub fn inball<const D: usize, S: Hypersurface<D>>(s: &S) -> Result<Ball<D>, GeomError> {
    is_convex(s).map_err(GeomError::from)?;
    let planes: Vec<Plane<D>> = (0..s.element_count()).map(|e| s.facet_plane(e)).collect();
    inball_of_planes(&planes, &s.vertex_centroid())
        .ok_or_else(|| GeomError::Other("inball linear program failed".into()))
}
