//! Exact real-arithmetic projections onto the unit cube, the probability
//! simplex, the ℓ1-ball, and the parity polytope.
//!
//! The parity polytope `PP_d` is the convex hull of the even-weight vertices
//! of the unit hypercube. Projection onto it reduces to at most one projection
//! onto the probability simplex after a componentwise similarity transform
//! picked by a cut search. This module is the reference model: it may sort
//! data-dependently; the input-invariant circuit realization lives in
//! [`crate::hw`].

use crate::Real;

/// Facet / transform selector: `true` entries are the components sent through
/// `x ↦ 1 − x` by [`transform_tf`]. When produced by [`cut_search`] the number
/// of `true` entries is always odd.
pub type FacetIndicator = Vec<bool>;

/// Componentwise clamp onto `[0,1]^d`. Total on finite inputs and idempotent.
pub fn project_unit_cube<T: Real>(v: &[T]) -> Vec<T> {
    v.iter().map(|&x| x.max(T::zero()).min(T::one())).collect()
}

/// Similarity transform `T_f`: maps `v_i` to `1 − v_i` where `f_i` is set and
/// leaves it unchanged otherwise. Applying it twice gives back `v`.
///
/// # Panics
///
/// Panics if `v` and `f` have different lengths.
pub fn transform_tf<T: Real>(v: &[T], f: &[bool]) -> Vec<T> {
    assert_eq!(v.len(), f.len(), "vector/indicator length mismatch");
    v.iter()
        .zip(f)
        .map(|(&x, &flip)| if flip { T::one() - x } else { x })
        .collect()
}

/// Cut search: selects the facet indicator for a point `v_hat` in the unit
/// cube. Sets `f_i = 1` exactly where `v_hat_i > 1/2`; if that leaves an even
/// number of set bits, the single bit at the component closest to `1/2` is
/// flipped (lowest index on ties), so the returned indicator always has odd
/// weight.
pub fn cut_search<T: Real>(v_hat: &[T]) -> FacetIndicator {
    assert!(!v_hat.is_empty());
    let half = T::from_f64(0.5).unwrap();
    let mut f: Vec<bool> = v_hat.iter().map(|&x| x > half).collect();
    let weight = f.iter().filter(|&&b| b).count();
    if weight % 2 == 0 {
        let mut best = 0;
        let mut best_dist = (half - v_hat[0]).abs();
        for (i, &x) in v_hat.iter().enumerate().skip(1) {
            let dist = (half - x).abs();
            if dist < best_dist {
                best = i;
                best_dist = dist;
            }
        }
        f[best] = !f[best];
    }
    f
}

/// Parity polytope membership test for the cube projection of `v`, given the
/// indicator from [`cut_search`]: returns `1ᵀ Π_cube(T_f(v)) ≥ 1`.
///
/// # Panics
///
/// Panics if `v` and `f` have different lengths.
pub fn pp_membership_test<T: Real>(v: &[T], f: &[bool]) -> bool {
    let clamped = project_unit_cube(&transform_tf(v, f));
    compensated_sum(&clamped) >= T::one()
}

/// Euclidean projection onto the probability simplex
/// `{w : 1ᵀw = 1, w_i ≥ 0}`.
///
/// Sorts the components in descending order, forms the running thresholds
/// `s_i = (Σ_{j≤i} μ_j − 1)/i`, takes the largest `i` with `μ_i > s_i`, and
/// clips: `w_i = max(v_i − s_ρ, 0)`. Such a `ρ` always exists because
/// `s_1 = μ_1 − 1 < μ_1`.
pub fn project_simplex<T: Real>(v: &[T]) -> Vec<T> {
    let thresh = simplex_threshold(v);
    v.iter().map(|&x| (x - thresh).max(T::zero())).collect()
}

/// The clipping threshold `s_ρ` used by [`project_simplex`].
pub(crate) fn simplex_threshold<T: Real>(v: &[T]) -> T {
    assert!(!v.is_empty(), "simplex projection needs d >= 1");
    let mut mu = v.to_vec();
    mu.sort_unstable_by(|a, b| b.partial_cmp(a).expect("non-finite component"));

    // Compensated running sums keep the d <= 64 feasibility checks well under
    // their 1e-12 budget even for large-magnitude inputs.
    let mut sum = T::zero();
    let mut comp = T::zero();
    let mut rho_thresh = mu[0] - T::one();
    for (i, &m) in mu.iter().enumerate() {
        let t = sum + m;
        comp = comp
            + if sum.abs() >= m.abs() {
                (sum - t) + m
            } else {
                (m - t) + sum
            };
        sum = t;
        let count = T::from_usize(i + 1).unwrap();
        let s = ((sum + comp) - T::one()) / count;
        if m > s {
            rho_thresh = s;
        }
    }
    rho_thresh
}

/// Euclidean projection onto the parity polytope `PP_d`.
///
/// Clamps to the cube, runs the cut search, and either returns the clamp (when
/// the membership test passes) or routes through one simplex projection in the
/// transformed coordinates.
///
/// # Panics
///
/// Panics if `d < 2`; `PP_1` is degenerate and not supported.
pub fn project_parity_polytope<T: Real>(v: &[T]) -> Vec<T> {
    assert!(v.len() >= 2, "parity polytope projection needs d >= 2");
    let v_hat = project_unit_cube(v);
    let f = cut_search(&v_hat);
    let v_tilde = transform_tf(v, &f);
    if compensated_sum(&project_unit_cube(&v_tilde)) >= T::one() {
        v_hat
    } else {
        let u = project_simplex(&v_tilde);
        transform_tf(&u, &f)
    }
}

/// Euclidean projection onto the ℓ1-ball of the given radius, via the simplex
/// projection of the absolute values.
///
/// # Panics
///
/// Panics if `radius` is not strictly positive.
pub fn project_l1_ball<T: Real>(v: &[T], radius: T) -> Vec<T> {
    assert!(radius > T::zero(), "l1-ball radius must be positive");
    let abs: Vec<T> = v.iter().map(|&x| x.abs()).collect();
    if compensated_sum(&abs) <= radius {
        return v.to_vec();
    }
    // Π_{rS}(x) = r · Π_S(x / r)
    let scaled: Vec<T> = abs.iter().map(|&x| x / radius).collect();
    let p = project_simplex(&scaled);
    v.iter()
        .zip(&p)
        .map(|(&x, &pi)| pi * radius * x.signum())
        .collect()
}

/// Neumaier-compensated sum; exactness of the feasibility checks leans on it.
pub(crate) fn compensated_sum<T: Real>(values: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for &x in values {
        let t = sum + x;
        comp = comp
            + if sum.abs() >= x.abs() {
                (sum - t) + x
            } else {
                (x - t) + sum
            };
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!(
                (a - e).abs() <= tol,
                "got {actual:?}, expected {expected:?}"
            );
        }
    }

    #[test]
    fn cube_clamps_componentwise() {
        assert_eq!(project_unit_cube(&[0.5, -2.0, 3.0]), vec![0.5, 0.0, 1.0]);
        assert_eq!(project_unit_cube(&[0.2, 0.8]), vec![0.2, 0.8]);
        assert_eq!(project_unit_cube(&[1.0, 0.0]), vec![1.0, 0.0]);
    }

    #[test]
    fn tf_flips_selected_components() {
        let out = transform_tf(&[0.9, 0.1, 0.05], &[true, false, false]);
        assert_close(&out, &[0.1, 0.1, 0.05], 1e-15);
        let v = [0.37, -1.25, 2.0];
        assert_eq!(transform_tf(&v, &[false, false, false]), v.to_vec());
        // Involution: exact on dyadic values, within one rounding otherwise.
        let twice = transform_tf(&transform_tf(&[0.375, -1.5], &[true, true]), &[true, true]);
        assert_eq!(twice, vec![0.375, -1.5]);
        let twice = transform_tf(&transform_tf(&[0.3], &[true]), &[true]);
        assert!((twice[0] - 0.3f64).abs() <= f64::EPSILON);
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn tf_rejects_mismatched_lengths() {
        transform_tf(&[0.1, 0.2], &[true]);
    }

    #[test]
    fn cut_search_thresholds_then_fixes_parity() {
        // Initial f = (1,1,0) has even weight; distances to 1/2 are
        // (0.4, 0.3, 0.4), so the middle bit flips.
        assert_eq!(cut_search(&[0.9, 0.8, 0.1]), vec![true, false, false]);
        // Weight already odd: no flip.
        assert_eq!(cut_search(&[0.9, 0.1, 0.05]), vec![true, false, false]);
        // Strict threshold: 0.5 itself maps to 0, then parity forces one flip
        // at the lowest index.
        assert_eq!(cut_search(&[0.5, 0.5]), vec![true, false]);
    }

    #[test]
    fn cut_search_breaks_argmin_ties_at_lowest_index() {
        // Both distances tie at 0.1 and initial weight 2 is even, so the
        // first bit is the one flipped. The projection itself is unaffected
        // by the tie choice (checked against the oracle elsewhere).
        assert_eq!(cut_search(&[0.6, 0.6]), vec![false, true]);
        let f = cut_search(&[0.6, 0.6]);
        assert_eq!(f.iter().filter(|&&b| b).count() % 2, 1);
    }

    #[test]
    fn cut_search_weight_is_odd() {
        for d in 1..=9 {
            for k in 0..(1usize << d) {
                let v: Vec<f64> = (0..d)
                    .map(|i| if (k >> i) & 1 == 1 { 0.9 } else { 0.2 })
                    .collect();
                let f = cut_search(&v);
                assert_eq!(f.iter().filter(|&&b| b).count() % 2, 1);
            }
        }
    }

    #[test]
    fn membership_test_examples() {
        assert!(pp_membership_test(&[0.9, 0.8, 0.1], &[true, false, false]));
        assert!(!pp_membership_test(
            &[0.9, 0.1, 0.05],
            &[true, false, false]
        ));
        let center = [0.5, 0.5, 0.5];
        let f = cut_search(&project_unit_cube(&center));
        assert!(pp_membership_test(&center, &f));
    }

    #[test]
    fn simplex_examples() {
        assert_close(
            &project_simplex(&[0.0, 0.0, 0.0]),
            &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            1e-15,
        );
        // mu = (2,0), s = (1, 0.5), rho = 1.
        assert_close(&project_simplex(&[2.0, 0.0]), &[1.0, 0.0], 1e-15);
        // s_3 = (0.25 - 1)/3 = -0.25, rho = 3.
        assert_close(
            &project_simplex(&[0.1, 0.1, 0.05]),
            &[0.35, 0.35, 0.30],
            1e-15,
        );
        // Degenerate d = 1: the simplex is the single point (1).
        assert_close(&project_simplex(&[5.0]), &[1.0], 1e-15);
        assert_close(&project_simplex(&[-3.0]), &[1.0], 1e-15);
    }

    #[test]
    fn parity_polytope_examples() {
        assert_close(
            &project_parity_polytope(&[0.5, 0.5, 0.5]),
            &[0.5, 0.5, 0.5],
            1e-15,
        );
        // Odd vertex projects onto the facet x1 + x2 + x3 = 2.
        assert_close(
            &project_parity_polytope(&[1.0, 1.0, 1.0]),
            &[2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0],
            1e-12,
        );
        // Simplex branch traced through f = (1,0,0).
        assert_close(
            &project_parity_polytope(&[0.9, 0.1, 0.05]),
            &[0.65, 0.35, 0.30],
            1e-12,
        );
    }

    #[test]
    #[should_panic(expected = "d >= 2")]
    fn parity_polytope_rejects_d1() {
        project_parity_polytope(&[0.3]);
    }

    #[test]
    fn l1_ball_examples() {
        assert_eq!(project_l1_ball(&[0.2, -0.1], 1.0), vec![0.2, -0.1]);
        assert_close(&project_l1_ball(&[2.0, 0.0], 1.0), &[1.0, 0.0], 1e-15);
        assert_close(&project_l1_ball(&[-2.0, 0.0], 1.0), &[-1.0, 0.0], 1e-15);
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn l1_ball_rejects_nonpositive_radius() {
        project_l1_ball(&[0.1], 0.0);
    }

    #[test]
    fn works_in_f32_too() {
        let w = project_simplex(&[0.1f32, 0.1, 0.05]);
        assert!((w.iter().sum::<f32>() - 1.0).abs() < 1e-6);
        let p = project_parity_polytope(&[0.9f32, 0.1, 0.05]);
        assert!((p[0] - 0.65).abs() < 1e-6);
    }

    #[test]
    fn tf_commutes_with_cube_clamp_bitwise() {
        // T_f(clamp(v)) == clamp(T_f(v)) holds bit-for-bit, not just to
        // tolerance: both sides evaluate the identical expression in every
        // branch of the case split.
        let vs = [
            vec![-0.5, 0.25, 1.5, 0.0, 1.0],
            vec![0.1, 0.999, -3.0, 7.0, 0.5],
        ];
        let f = vec![true, false, true, true, false];
        for v in &vs {
            let lhs = transform_tf(&project_unit_cube(v), &f);
            let rhs = project_unit_cube(&transform_tf(v, &f));
            assert_eq!(lhs, rhs);
        }
    }
}
