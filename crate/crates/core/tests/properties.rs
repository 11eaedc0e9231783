//! Property suites for the projection invariants and the circuit primitives.

use proptest::prelude::*;

use polyproj::fixed::{quantize, FixedPointFormat, FixedValue, RoundingMode};
use polyproj::oracle::enumerate_parity_inequalities;
use polyproj::projection::{
    cut_search, project_l1_ball, project_parity_polytope, project_simplex, project_unit_cube,
    transform_tf,
};
use polyproj::sortnet::{ComparatorNetwork, Direction};

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn vector(d_min: usize, d_max: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, d_min..=d_max)
}

proptest! {
    #[test]
    fn cube_projection_is_idempotent(v in vector(1, 16, -4.0, 4.0)) {
        let once = project_unit_cube(&v);
        let twice = project_unit_cube(&once);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn simplex_projection_is_idempotent(v in vector(1, 16, -4.0, 4.0)) {
        let once = project_simplex(&v);
        let twice = project_simplex(&once);
        prop_assert!(l2(&once, &twice) <= 1e-12);
    }

    #[test]
    fn pp_projection_is_idempotent(v in vector(2, 16, -4.0, 4.0)) {
        let once = project_parity_polytope(&v);
        let twice = project_parity_polytope(&once);
        prop_assert!(l2(&once, &twice) <= 1e-12);
    }

    #[test]
    fn simplex_output_is_feasible(v in vector(1, 64, -16.0, 16.0)) {
        let w = project_simplex(&v);
        let sum: f64 = w.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12, "sum deviates: {}", sum);
        prop_assert!(w.iter().all(|&x| x >= -1e-15));
    }

    #[test]
    fn pp_output_satisfies_every_parity_inequality(v in vector(2, 10, -4.0, 4.0)) {
        let w = project_parity_polytope(&v);
        prop_assert!(w.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        for ineq in enumerate_parity_inequalities(v.len()).unwrap() {
            prop_assert!(
                ineq.violation(&w) <= 1e-9,
                "violated {:?} by {}",
                ineq.subset,
                ineq.violation(&w)
            );
        }
    }

    #[test]
    fn tf_and_cube_clamp_commute_exactly(
        v in vector(1, 16, -4.0, 4.0),
        flip_seed in any::<u64>(),
    ) {
        let f: Vec<bool> = (0..v.len()).map(|i| (flip_seed >> (i % 64)) & 1 == 1).collect();
        let lhs = transform_tf(&project_unit_cube(&v), &f);
        let rhs = project_unit_cube(&transform_tf(&v, &f));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projections_are_non_expansive(
        u in vector(2, 12, -4.0, 4.0),
        noise in vector(2, 12, -1.0, 1.0),
    ) {
        let d = u.len().min(noise.len());
        let u = &u[..d];
        let v: Vec<f64> = u.iter().zip(&noise[..d]).map(|(a, b)| a + b).collect();
        let slack = 1e-12;
        prop_assert!(
            l2(&project_unit_cube(u), &project_unit_cube(&v)) <= l2(u, &v) + slack
        );
        prop_assert!(
            l2(&project_simplex(u), &project_simplex(&v)) <= l2(u, &v) + slack
        );
        prop_assert!(
            l2(&project_parity_polytope(u), &project_parity_polytope(&v))
                <= l2(u, &v) + slack
        );
    }

    #[test]
    fn pp_projection_commutes_with_permutation(
        v in vector(2, 10, -2.0, 3.0),
        perm_seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let d = v.len();
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(&mut rand_chacha::ChaCha12Rng::seed_from_u64(perm_seed));
        let permuted: Vec<f64> = perm.iter().map(|&i| v[i]).collect();
        let w_permuted = project_parity_polytope(&permuted);
        let w = project_parity_polytope(&v);
        let w_expected: Vec<f64> = perm.iter().map(|&i| w[i]).collect();
        prop_assert!(l2(&w_permuted, &w_expected) <= 1e-9);
    }

    #[test]
    fn cut_search_always_returns_odd_weight(v in vector(1, 16, -1.0, 2.0)) {
        let f = cut_search(&project_unit_cube(&v));
        prop_assert_eq!(f.iter().filter(|&&b| b).count() % 2, 1);
    }

    #[test]
    fn l1_projection_lands_inside_the_ball(
        v in vector(1, 16, -4.0, 4.0),
        radius in 0.1f64..4.0,
    ) {
        let w = project_l1_ball(&v, radius);
        let norm: f64 = w.iter().map(|x| x.abs()).sum();
        prop_assert!(norm <= radius + 1e-9, "norm {} radius {}", norm, radius);
        // Inside the ball the projection is the identity.
        let vnorm: f64 = v.iter().map(|x| x.abs()).sum();
        if vnorm <= radius {
            prop_assert_eq!(&w, &v);
        }
        // Signs never flip.
        for (wi, vi) in w.iter().zip(&v) {
            prop_assert!(wi * vi >= 0.0);
        }
    }

    #[test]
    fn sorting_network_preserves_multisets(
        mut values in prop::collection::vec(-1000i64..1000, 1..40),
    ) {
        let net = ComparatorNetwork::batcher(values.len());
        let sorted = net.apply(&values, Direction::Ascending);
        prop_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        let descending = net.apply(&values, Direction::Descending);
        prop_assert!(descending.windows(2).all(|w| w[0] >= w[1]));
        let mut resorted = sorted.clone();
        resorted.sort_unstable();
        values.sort_unstable();
        prop_assert_eq!(resorted, values);
    }

    #[test]
    fn fixed_add_and_mul_are_exact_as_rationals(
        ma in -512i128..512,
        mb in -512i128..512,
        fa in 0u32..6,
        ia in 0u32..4,
        ib in 0u32..4,
        fb in 0u32..6,
    ) {
        // Ten integer bits comfortably hold any mantissa drawn above.
        let fmt_a = FixedPointFormat::new(ia + 10, fa).unwrap();
        let fmt_b = FixedPointFormat::new(ib + 10, fb).unwrap();
        let a = FixedValue::from_mantissa(ma, fmt_a);
        let b = FixedValue::from_mantissa(mb, fmt_b);

        // Addition requires aligned fraction widths.
        let common = fa.max(fb);
        let aa = a.with_fraction_bits(common);
        let bb = b.with_fraction_bits(common);
        let sum = aa.add(&bb);
        let expected = (ma << (common - fa)) + (mb << (common - fb));
        prop_assert_eq!(sum.mantissa(), expected);
        prop_assert_eq!(sum.format().fraction_bits, common);

        let product = a.mul(&b);
        prop_assert_eq!(product.mantissa(), ma * mb);
        prop_assert_eq!(product.format().fraction_bits, fa + fb);
    }

    #[test]
    fn quantize_error_within_half_ulp(
        // Stays inside the representable range of every s1.F format tried
        // (the widest step is 0.5, putting the F=1 maximum at 1.5); the
        // half-ulp bound only holds without saturation.
        x in -1.9f64..1.4,
        fraction in 1u32..16,
    ) {
        let fmt = FixedPointFormat::new(1, fraction).unwrap();
        let q = quantize(x, fmt, RoundingMode::RoundNearestEven);
        let bound = 2f64.powi(-(fraction as i32 + 1)) * (1.0 + 1e-12);
        prop_assert!((q.to_f64() - x).abs() <= bound);
        // Truncation is bounded by one full step and never rounds up.
        let t = quantize(x, fmt, RoundingMode::Truncate);
        prop_assert!(t.to_f64() <= x);
        prop_assert!(x - t.to_f64() < 2f64.powi(-(fraction as i32)) * (1.0 + 1e-12));
    }
}
