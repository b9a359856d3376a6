use super::Hypersurface;

/// `max_{v ∈ vertices(a)} dist(v, b)`, distance measured to b's elements.
pub fn one_sided_hausdorff<const D: usize, S: Hypersurface<D>>(a: &S, b: &S) -> f64 {
    a.vertices().iter().map(|p| b.distance_to(p)).fold(0.0, f64::max)
}

/// Symmetric vertex-to-element Hausdorff distance.
pub fn hausdorff_distance<const D: usize, S: Hypersurface<D>>(a: &S, b: &S) -> f64 {
    one_sided_hausdorff(a, b).max(one_sided_hausdorff(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Curve2, Point};
    use nalgebra::Vector2;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn circle(m: usize, r: f64, c: [f64; 2]) -> Curve2 {
        Curve2::new(
            (0..m)
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / m as f64;
                    Vector2::new(c[0] + r * th.cos(), c[1] + r * th.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    /// Oracle: vertex to densely sampled points of the other polygon's edges.
    fn sampled_one_sided(a: &Curve2, b: &Curve2, per_edge: usize) -> f64 {
        let bv = b.vertices();
        let m = bv.len();
        let samples: Vec<Point<2>> = (0..m)
            .flat_map(|i| {
                let (p, q) = (bv[i], bv[(i + 1) % m]);
                (0..per_edge).map(move |k| p + (q - p) * (k as f64 / per_edge as f64))
            })
            .collect();
        a.vertices()
            .iter()
            .map(|v| samples.iter().map(|s| (v - s).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    #[test]
    fn identical_shapes() {
        let c = circle(64, 1.0, [0.0, 0.0]);
        assert_eq!(hausdorff_distance(&c, &c), 0.0);
    }

    #[test]
    fn concentric_circles() {
        let a = circle(2048, 1.0, [0.0, 0.0]);
        let b = circle(2048, 1.25, [0.0, 0.0]);
        assert!((hausdorff_distance(&a, &b) - 0.25).abs() < 1e-5);
    }

    #[test]
    fn unit_translate_matches_sampling_oracle() {
        let a = circle(12, 0.7, [0.0, 0.0]);
        let b = a.translated(&Vector2::new(1.0, 0.0));
        let d = hausdorff_distance(&a, &b);
        let oracle = sampled_one_sided(&a, &b, 4000).max(sampled_one_sided(&b, &a, 4000));
        assert!(d <= 1.0 + 1e-12);
        assert!((d - oracle).abs() < 1e-3, "{d} vs {oracle}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn metric_properties(
            ra in 0.5f64..2.0, rb in 0.5f64..2.0, rc in 0.5f64..2.0,
            xa in -1.0f64..1.0, xb in -1.0f64..1.0, xc in -1.0f64..1.0,
        ) {
            let a = circle(24, ra, [xa, 0.0]);
            let b = circle(20, rb, [xb, 0.3]);
            let c = circle(16, rc, [xc, -0.2]);
            let ab = hausdorff_distance(&a, &b);
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - hausdorff_distance(&b, &a)).abs() < 1e-15);
            prop_assert!(ab <= hausdorff_distance(&a, &c) + hausdorff_distance(&c, &b) + 1e-12);
        }
    }
}
