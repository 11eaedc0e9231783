//! Slow, independent reference projections used to validate the fast paths.
//!
//! Nothing here shares code with [`crate::projection`] or [`crate::hw`]: the
//! parity polytope oracle runs Dykstra's alternating projections over the
//! explicit half-space description of the polytope, and the simplex oracle
//! bisects on the clipping threshold. Both are meant for desk-scale
//! dimensions and test suites, not production use.

use std::error::Error;
use std::fmt;

use crate::projection::compensated_sum;
use crate::Real;

/// Default convergence tolerance for [`dykstra_pp_oracle`].
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default cycle cap for [`dykstra_pp_oracle`]. Desk-scale inputs converge in
/// far fewer cycles; hitting this signals a bug rather than a tuning problem.
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// One half-space of the parity polytope description:
/// `Σ_{i∈f} x_i − Σ_{i∉f} x_i ≤ |f| − 1` for an odd-cardinality subset `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityInequality {
    /// Membership mask of the subset; always has odd popcount.
    pub subset: Vec<bool>,
    /// Right-hand side, equal to `popcount(subset) - 1`.
    pub bound: f64,
}

impl ParityInequality {
    /// Signed slack `Σ_{i∈f} x_i − Σ_{i∉f} x_i − bound`; positive means
    /// violated.
    pub fn violation<T: Real>(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.subset.len());
        let mut lhs = T::zero();
        for (&xi, &inside) in x.iter().zip(&self.subset) {
            lhs = if inside { lhs + xi } else { lhs - xi };
        }
        lhs - T::from_f64(self.bound).unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// Requested dimension outside the supported desk-scale window.
    DimensionOutOfRange { d: usize, min: usize, max: usize },
    /// Dykstra failed to reach the tolerance within the cycle cap.
    NonConvergence { cycles: usize, last_delta: f64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::DimensionOutOfRange { d, min, max } => {
                write!(f, "dimension {d} outside supported range {min}..={max}")
            }
            OracleError::NonConvergence { cycles, last_delta } => {
                write!(
                    f,
                    "Dykstra did not converge after {cycles} cycles (last delta {last_delta:e})"
                )
            }
        }
    }
}

impl Error for OracleError {}

/// All `2^{d-1}` parity inequalities of `PP_d`, ordered by subset bitmask.
pub fn enumerate_parity_inequalities(d: usize) -> Result<Vec<ParityInequality>, OracleError> {
    if !(2..=16).contains(&d) {
        return Err(OracleError::DimensionOutOfRange { d, min: 2, max: 16 });
    }
    let mut out = Vec::with_capacity(1 << (d - 1));
    for mask in 0u32..(1u32 << d) {
        let pop = mask.count_ones();
        if pop % 2 == 1 {
            let subset: Vec<bool> = (0..d).map(|i| (mask >> i) & 1 == 1).collect();
            out.push(ParityInequality {
                subset,
                bound: f64::from(pop) - 1.0,
            });
        }
    }
    Ok(out)
}

/// Result of a converged Dykstra run, with the iteration instrumentation the
/// acceptance suite reports.
#[derive(Debug, Clone)]
pub struct DykstraResult<T> {
    pub projection: Vec<T>,
    /// Full passes over the constraint list before the stop criterion fired.
    pub cycles: usize,
    /// ℓ2 distance between the last two cycle iterates.
    pub final_delta: T,
}

/// Euclidean projection onto `PP_d` by Dykstra's alternating projections over
/// the unit cube and every parity half-space.
///
/// Unlike plain alternating projections, Dykstra keeps one correction vector
/// per constraint so the iterates converge to the projection of `v` itself,
/// not merely to a feasible point. Stops once successive cycle iterates are
/// within `tol` in ℓ2 *and* the correction vectors have stopped moving by the
/// same measure — the iterate alone can repeat transiently (e.g. for inputs
/// far outside the cube) long before the scheme has converged.
pub fn dykstra_pp_oracle<T: Real>(
    v: &[T],
    tol: T,
    max_iter: usize,
) -> Result<DykstraResult<T>, OracleError> {
    let d = v.len();
    if !(2..=10).contains(&d) {
        return Err(OracleError::DimensionOutOfRange { d, min: 2, max: 10 });
    }
    assert!(tol > T::zero(), "tolerance must be positive");

    let inequalities = enumerate_parity_inequalities(d).expect("d checked above");
    let n_sets = 1 + inequalities.len();
    let inv_d = T::one() / T::from_usize(d).unwrap();

    let mut x: Vec<T> = v.to_vec();
    let mut corrections: Vec<Vec<T>> = vec![vec![T::zero(); d]; n_sets];
    let mut prev = vec![T::zero(); d];
    let mut work = vec![T::zero(); d];

    for cycle in 1..=max_iter {
        prev.copy_from_slice(&x);
        let mut correction_shift_sq = T::zero();

        for (k, correction) in corrections.iter_mut().enumerate() {
            for i in 0..d {
                work[i] = x[i] + correction[i];
            }
            if k == 0 {
                // Unit cube.
                for i in 0..d {
                    x[i] = work[i].max(T::zero()).min(T::one());
                }
            } else {
                // Half-space a'x <= b with a_i = ±1, |a|^2 = d.
                let ineq = &inequalities[k - 1];
                let excess = ineq.violation(&work);
                if excess > T::zero() {
                    let step = excess * inv_d;
                    for i in 0..d {
                        let a = if ineq.subset[i] { T::one() } else { -T::one() };
                        x[i] = work[i] - step * a;
                    }
                } else {
                    x.copy_from_slice(&work);
                }
            }
            for i in 0..d {
                let updated = work[i] - x[i];
                let shift = updated - correction[i];
                correction_shift_sq = correction_shift_sq + shift * shift;
                correction[i] = updated;
            }
        }

        let mut delta_sq = T::zero();
        for i in 0..d {
            let diff = x[i] - prev[i];
            delta_sq = delta_sq + diff * diff;
        }
        let delta = delta_sq.sqrt();
        if delta < tol && correction_shift_sq.sqrt() < tol {
            return Ok(DykstraResult {
                projection: x,
                cycles: cycle,
                final_delta: delta,
            });
        }
    }

    Err(OracleError::NonConvergence {
        cycles: max_iter,
        last_delta: {
            let mut delta_sq = 0.0;
            for i in 0..d {
                let diff = (x[i] - prev[i]).to_f64().unwrap();
                delta_sq += diff * diff;
            }
            delta_sq.sqrt()
        },
    })
}

/// Euclidean projection onto the probability simplex by bisection on the
/// clipping threshold `τ` solving `Σ max(v_i − τ, 0) = 1`.
///
/// The bracket `[min(v) − 1, max(v)]` always contains the root; the interval
/// is shrunk until the induced output error is comfortably below `tol`.
pub fn bisection_simplex_oracle<T: Real>(v: &[T], tol: T) -> Vec<T> {
    assert!(!v.is_empty());
    assert!(tol > T::zero(), "tolerance must be positive");

    let excess_mass = |tau: T| -> T {
        let shifted: Vec<T> = v.iter().map(|&x| (x - tau).max(T::zero())).collect();
        compensated_sum(&shifted) - T::one()
    };

    let mut lo = v.iter().cloned().fold(v[0], T::min) - T::one();
    let mut hi = v.iter().cloned().fold(v[0], T::max);
    let sqrt_d = T::from_usize(v.len()).unwrap().sqrt();
    let target = tol / (sqrt_d + sqrt_d);

    for _ in 0..256 {
        let mid = (lo + hi) * T::from_f64(0.5).unwrap();
        if mid <= lo || mid >= hi {
            break;
        }
        if excess_mass(mid) >= T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= target {
            break;
        }
    }

    // lo is on the Σ ≥ 1 side, so the output never undershoots the simplex.
    v.iter().map(|&x| (x - lo).max(T::zero())).collect()
}
