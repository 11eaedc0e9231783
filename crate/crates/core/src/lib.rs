//! Euclidean projections onto the parity polytope and the probability simplex,
//! in two flavors:
//!
//! - an exact real-arithmetic reference path ([`projection`]), generic over the
//!   scalar type, together with slow independent oracles ([`oracle`]) used to
//!   validate it;
//! - a bit-exact fixed-point path ([`hw`]) assembled from input-invariant
//!   circuit primitives: sorting networks ([`sortnet`]), parallel prefix scans
//!   and one-hot trees ([`scan`]), and a two's-complement number model with
//!   explicit bit growth ([`fixed`]).
//!
//! The [`experiments`] module generates random inputs and runs the precision
//! and scaling sweeps emitted as CSV by the `polyproj` command-line tool.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

/// Scalar type for the real-arithmetic path: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug {}
impl<T> Real for T where T: Float + FromPrimitive + Debug {}

pub mod experiments;
pub mod fixed;
pub mod hw;
pub mod oracle;
pub mod projection;
pub mod scan;
pub mod sortnet;

mod tables;

pub use fixed::{
    quantize, quantize_vector, FixedPointFormat, FixedValue, FormatError, RoundingMode,
};
pub use hw::{
    area_delay_report, hw_project_pp, hw_project_simplex, AreaDelayReport, CircuitMode, HwError,
    HwProjectionConfig,
};
pub use oracle::{
    bisection_simplex_oracle, dykstra_pp_oracle, enumerate_parity_inequalities, DykstraResult,
    OracleError, ParityInequality,
};
pub use projection::{
    cut_search, pp_membership_test, project_l1_ball, project_parity_polytope, project_simplex,
    project_unit_cube, transform_tf, FacetIndicator,
};
pub use scan::{argmin_tree, ladner_fischer_scan, max_index, OneHot, ScanNetwork};
pub use sortnet::{verify_zero_one, ComparatorNetwork, Direction, NetworkError, ZeroOneReport};

/// Facet indicators, one-hot vectors, and fixed vectors all default to the
/// plain `Vec` representations below; the concrete f64 aliases are what the
/// CLI and experiment harness use throughout.
pub type RealVector = Vec<f64>;
/// A vector of fixed-point values sharing one format.
pub type FixedVector = Vec<FixedValue>;

pub(crate) fn ceil_log2(n: usize) -> u32 {
    assert!(n >= 1);
    (n.next_power_of_two()).trailing_zeros()
}
