use nalgebra::{Rotation2, Vector2};
use proptest::prelude::*;

use gmcf::diagnostics::roundness;
use gmcf::flow::{step, DensityFlow, FlowParams, FlowState, Status};
use gmcf::geom::hausdorff_distance;
use gmcf::io::generate::random_convex;
use gmcf::io::{format_shape, parse_shape};
use gmcf::transforms::{time_forward, time_inverse};
use gmcf::{Curve2, Epsilon, GaussianContext, Hypersurface, Shape};

fn epsilon() -> impl Strategy<Value = Epsilon> {
    prop_oneof![Just(Epsilon::Plus), Just(Epsilon::Minus)]
}

fn convex(seed: u64, m: usize) -> Curve2 {
    random_convex(m, 1.0, seed).unwrap()
}

fn max_vertex_gap(a: &Curve2, b: &Curve2) -> f64 {
    a.vertices()
        .iter()
        .zip(b.vertices())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn time_maps_invert_each_other(eps in epsilon(), mu in 0.2f64..5.0, n in 1usize..=2, x in 0.0f64..0.95) {
        let ctx = GaussianContext::new(eps, mu, n).unwrap();
        // spread samples over the image of the forward map
        let t_hat = match eps {
            Epsilon::Plus => x * 10.0 / (n as f64 * mu * mu),
            Epsilon::Minus => x * ctx.singular_time(),
        };
        let t = time_inverse(t_hat, &ctx).unwrap();
        let back = time_forward(t, &ctx).unwrap();
        prop_assert!((back - t_hat).abs() <= 1e-12 * t_hat.max(1.0), "{t_hat} -> {t} -> {back}");
    }

    #[test]
    fn saved_curves_reload_bit_exact(seed in any::<u64>(), m in 8usize..40) {
        let c = convex(seed, m);
        let text = format_shape(&Shape::Curve(c.clone()));
        let back = parse_shape(&text, std::path::Path::new("c.csv"), false).unwrap();
        let Shape::Curve(back) = back else { panic!("curve expected") };
        prop_assert_eq!(back.vertices(), c.vertices());
    }

    #[test]
    fn curvature_scales_inversely(seed in any::<u64>(), m in 8usize..40, lambda in 0.1f64..10.0) {
        let c = convex(seed, m);
        let scaled = c.map_vertices(|p| p * lambda);
        let h = c.curvature_normal().unwrap().curvature;
        let hs = scaled.curvature_normal().unwrap().curvature;
        for (a, b) in h.iter().zip(&hs) {
            prop_assert!((a - b * lambda).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn roundness_ignores_similarities(seed in any::<u64>(), lambda in 0.1f64..10.0, dx in -5.0f64..5.0, angle in 0.0f64..6.3) {
        let c = convex(seed, 24);
        let rot = Rotation2::new(angle);
        let moved = c.map_vertices(|p| rot * p * lambda + Vector2::new(dx, -dx));
        let a = roundness(&Shape::Curve(c)).unwrap();
        let b = roundness(&Shape::Curve(moved)).unwrap();
        prop_assert!((a - b).abs() <= 1e-7 * a.max(1e-3), "{a} vs {b}");
    }

    #[test]
    fn hausdorff_is_symmetric_and_bounded_by_shifts(seed in any::<u64>(), dx in -1.0f64..1.0, dy in -1.0f64..1.0) {
        let c = convex(seed, 16);
        let shift = Vector2::new(dx, dy);
        let moved = c.map_vertices(|p| p + shift);
        let ab = hausdorff_distance(&c, &moved);
        let ba = hausdorff_distance(&moved, &c);
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!(ab <= shift.norm() + 1e-12);
        prop_assert_eq!(hausdorff_distance(&c, &c), 0.0);
    }

    #[test]
    fn density_step_commutes_with_rotations(seed in any::<u64>(), eps in epsilon(), angle in 0.0f64..6.3) {
        let c = convex(seed, 24).map_vertices(|p| p + Vector2::new(0.3, -0.1));
        let rot = Rotation2::new(angle);
        let turned = c.map_vertices(|p| rot * p);
        let params = FlowParams::new(eps, 1.0);
        let advance = |s: Curve2| {
            let state = FlowState { shape: s.into(), t: 0.0, step: 0, status: Status::Running };
            match step(&state, &DensityFlow, &params).unwrap().shape {
                Shape::Curve(c) => c,
                Shape::Mesh(_) => unreachable!(),
            }
        };
        let a = advance(c).map_vertices(|p| rot * p);
        let b = advance(turned);
        prop_assert!(max_vertex_gap(&a, &b) <= 1e-12);
    }
}
