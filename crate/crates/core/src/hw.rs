//! Bit-exact fixed-point realizations of the simplex and parity-polytope
//! projections, composed from sorting networks, prefix scans, the argmin
//! tree, and the growing fixed-point model.
//!
//! Everything here is input-invariant: the comparator lanes, scan nodes and
//! format schedule depend only on the dimension and formats, and both sides
//! of every branch are computed before a select picks one, exactly as a
//! combinational circuit would. The `_traced` entry points return the
//! operation trace so tests can assert that invariance directly.
//!
//! Area is reported as comparator / adder / constant-multiplier counts and
//! delay as word-level stages: each compare, add, subtract, constant multiply
//! or word select is one stage, while single-bit trees (parity, max-index)
//! and saturation/wiring are treated as glue that packs into the neighboring
//! logic, as FPGA synthesis does.

use std::error::Error;
use std::fmt;

use crate::ceil_log2;
use crate::fixed::{quantize, FixedPointFormat, FixedValue, RoundingMode};
use crate::scan::ScanNetwork;
use crate::sortnet::ComparatorNetwork;

/// Which composed circuit a report or sweep refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitMode {
    Simplex,
    ParityPolytope,
    SortOnly,
}

impl CircuitMode {
    pub fn name(&self) -> &'static str {
        match self {
            CircuitMode::Simplex => "simplex",
            CircuitMode::ParityPolytope => "pp",
            CircuitMode::SortOnly => "sort",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HwError {
    /// Input and output formats must share one total width.
    WidthMismatch {
        input: FixedPointFormat,
        output: FixedPointFormat,
    },
    /// Parity polytope mode needs at least two lanes.
    DimensionTooSmall { dimension: usize, required: usize },
    /// Vector length does not match the configured dimension.
    LengthMismatch { expected: usize, found: usize },
    /// A lane arrived in a format other than the configured input format.
    InputFormatMismatch {
        expected: FixedPointFormat,
        found: FixedPointFormat,
        lane: usize,
    },
}

impl fmt::Display for HwError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HwError::WidthMismatch { input, output } => write!(
                f,
                "input {input} and output {output} must have equal total widths"
            ),
            HwError::DimensionTooSmall {
                dimension,
                required,
            } => write!(f, "dimension {dimension} below required {required}"),
            HwError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} lanes, got {found}")
            }
            HwError::InputFormatMismatch {
                expected,
                found,
                lane,
            } => write!(f, "lane {lane} in format {found}, expected {expected}"),
        }
    }
}

impl Error for HwError {}

/// Dimension plus input/output formats for a projection circuit. The two
/// formats must share one total width: internal stages grow as needed and the
/// output stage truncates back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HwProjectionConfig {
    dimension: usize,
    input_format: FixedPointFormat,
    output_format: FixedPointFormat,
}

impl HwProjectionConfig {
    pub fn new(
        dimension: usize,
        input_format: FixedPointFormat,
        output_format: FixedPointFormat,
    ) -> Result<Self, HwError> {
        if input_format.total_bits() != output_format.total_bits() {
            return Err(HwError::WidthMismatch {
                input: input_format,
                output: output_format,
            });
        }
        if dimension < 1 {
            return Err(HwError::DimensionTooSmall {
                dimension,
                required: 1,
            });
        }
        Ok(HwProjectionConfig {
            dimension,
            input_format,
            output_format,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn input_format(&self) -> FixedPointFormat {
        self.input_format
    }

    pub fn output_format(&self) -> FixedPointFormat {
        self.output_format
    }

    /// Fraction bits carried by the pre-quantized reciprocal constants:
    /// enough below the output resolution that the divides do not dominate
    /// the error budget.
    pub fn recip_fraction_bits(&self) -> u32 {
        self.output_format.fraction_bits + ceil_log2(self.dimension)
    }
}

/// One recorded circuit operation: a tag, the lane pair it touched, and the
/// result width in bits. Two runs of the same circuit produce equal traces
/// regardless of data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub op: &'static str,
    pub a: usize,
    pub b: usize,
    pub width: u32,
}

pub type Trace = Vec<TraceEvent>;

struct Recorder<'a> {
    out: Option<&'a mut Trace>,
}

impl Recorder<'_> {
    fn push(&mut self, op: &'static str, a: usize, b: usize, width: u32) {
        if let Some(trace) = self.out.as_deref_mut() {
            trace.push(TraceEvent { op, a, b, width });
        }
    }
}

fn validate(v: &[FixedValue], cfg: &HwProjectionConfig) -> Result<(), HwError> {
    if v.len() != cfg.dimension {
        return Err(HwError::LengthMismatch {
            expected: cfg.dimension,
            found: v.len(),
        });
    }
    for (lane, value) in v.iter().enumerate() {
        if value.format() != cfg.input_format {
            return Err(HwError::InputFormatMismatch {
                expected: cfg.input_format,
                found: value.format(),
                lane,
            });
        }
    }
    Ok(())
}

fn exact_one(fraction_bits: u32) -> FixedValue {
    FixedValue::from_mantissa(1i128 << fraction_bits, fmt(1, fraction_bits))
}

fn fmt(i: u32, f: u32) -> FixedPointFormat {
    FixedPointFormat::new(i, f).expect("internal format within modeled width")
}

/// Fixed-point simplex projection: descending sort, prefix sums, reciprocal
/// multiplies, max-index selection of the active threshold, subtract-and-clip,
/// then truncation into the output format.
pub fn hw_project_simplex(
    v: &[FixedValue],
    cfg: &HwProjectionConfig,
) -> Result<Vec<FixedValue>, HwError> {
    validate(v, cfg)?;
    let mut rec = Recorder { out: None };
    let w = simplex_core(v, cfg.recip_fraction_bits(), &mut rec);
    Ok(truncate_out(&w, cfg, &mut rec))
}

/// [`hw_project_simplex`] plus the full operation trace.
pub fn hw_project_simplex_traced(
    v: &[FixedValue],
    cfg: &HwProjectionConfig,
) -> Result<(Vec<FixedValue>, Trace), HwError> {
    validate(v, cfg)?;
    let mut trace = Trace::new();
    let mut rec = Recorder {
        out: Some(&mut trace),
    };
    let w = simplex_core(v, cfg.recip_fraction_bits(), &mut rec);
    let out = truncate_out(&w, cfg, &mut rec);
    Ok((out, trace))
}

/// Fixed-point parity polytope projection: cube clamp, cut search with an
/// argmin flip, membership test on the bit-grown sum, and a compute-both
/// select between the clamp and the transformed simplex branch.
pub fn hw_project_pp(
    v: &[FixedValue],
    cfg: &HwProjectionConfig,
) -> Result<Vec<FixedValue>, HwError> {
    validate(v, cfg)?;
    if cfg.dimension < 2 {
        return Err(HwError::DimensionTooSmall {
            dimension: cfg.dimension,
            required: 2,
        });
    }
    let mut rec = Recorder { out: None };
    let w = pp_core(v, cfg, &mut rec);
    Ok(truncate_out(&w, cfg, &mut rec))
}

/// [`hw_project_pp`] plus the full operation trace.
pub fn hw_project_pp_traced(
    v: &[FixedValue],
    cfg: &HwProjectionConfig,
) -> Result<(Vec<FixedValue>, Trace), HwError> {
    validate(v, cfg)?;
    if cfg.dimension < 2 {
        return Err(HwError::DimensionTooSmall {
            dimension: cfg.dimension,
            required: 2,
        });
    }
    let mut trace = Trace::new();
    let mut rec = Recorder {
        out: Some(&mut trace),
    };
    let w = pp_core(v, cfg, &mut rec);
    let out = truncate_out(&w, cfg, &mut rec);
    Ok((out, trace))
}

fn truncate_out(
    w: &[FixedValue],
    cfg: &HwProjectionConfig,
    rec: &mut Recorder<'_>,
) -> Vec<FixedValue> {
    w.iter()
        .enumerate()
        .map(|(i, x)| {
            rec.push("truncate", i, i, cfg.output_format.total_bits());
            x.truncate_to(cfg.output_format)
        })
        .collect()
}

/// The simplex datapath without the output truncation; the parity polytope
/// circuit embeds this and truncates only once at its own boundary.
fn simplex_core(
    v: &[FixedValue],
    recip_fraction_bits: u32,
    rec: &mut Recorder<'_>,
) -> Vec<FixedValue> {
    let d = v.len();
    let fmt_v = v[0].format();

    // Descending sort on an input-invariant comparator network.
    let sort = ComparatorNetwork::batcher(d);
    let mut mu = v.to_vec();
    for stage in sort.stages() {
        for &(i, j) in stage {
            rec.push("sort_cas", i, j, fmt_v.total_bits());
            if mu[i] < mu[j] {
                mu.swap(i, j);
            }
        }
    }

    // Running sums; formats grow with the scan structure, not the data.
    let scan = ScanNetwork::build(d);
    let mut sums = mu.clone();
    let mut pending: Vec<(usize, FixedValue)> = Vec::new();
    for level in scan.levels() {
        pending.clear();
        for &(src, dst) in level {
            let out = sums[src].add(&sums[dst]);
            rec.push("scan_add", src, dst, out.format().total_bits());
            pending.push((dst, out));
        }
        for (dst, value) in pending.drain(..) {
            sums[dst] = value;
        }
    }

    // s_i = (sum_i - 1) / (i+1), the divide realized as a multiply by a
    // pre-quantized reciprocal. Lane 0 divides by one: a pure realignment,
    // kept exact so the guaranteed rho >= 1 stays guaranteed in fixed point.
    let one_in = exact_one(fmt_v.fraction_bits);
    let common_fraction = fmt_v.fraction_bits + recip_fraction_bits;
    let mut thresholds: Vec<FixedValue> = Vec::with_capacity(d);
    for (i, sum) in sums.iter().enumerate() {
        let diff = sum.sub(&one_in);
        rec.push("sub_one", i, i, diff.format().total_bits());
        let s = if i == 0 {
            diff.with_fraction_bits(common_fraction)
        } else {
            let recip = quantize(
                1.0 / (i + 1) as f64,
                fmt(0, recip_fraction_bits),
                RoundingMode::RoundNearestEven,
            );
            let s = diff.mul(&recip);
            rec.push("mul_recip", i, i, s.format().total_bits());
            s
        };
        thresholds.push(s);
    }
    let widest = thresholds
        .iter()
        .map(|t| t.format().integer_bits)
        .max()
        .expect("d >= 1");
    let thresholds: Vec<FixedValue> = thresholds
        .iter()
        .map(|t| t.with_integer_bits(widest))
        .collect();

    // Active-count bits: mu_i > s_i (strict). Bit 0 is always set because
    // s_1 = mu_1 - 1 exactly.
    let bits: Vec<bool> = mu
        .iter()
        .zip(&thresholds)
        .enumerate()
        .map(|(i, (m, s))| {
            rec.push("thresh_cmp", i, i, s.format().total_bits());
            m > s
        })
        .collect();

    // rho as a one-hot: highest-index set bit, computed by a suffix AND of
    // the negated bits on the same scan shape.
    let mut none_above: Vec<bool> = bits.iter().rev().map(|&b| !b).collect();
    let mut bit_pending: Vec<(usize, bool)> = Vec::new();
    for level in scan.levels() {
        bit_pending.clear();
        for &(src, dst) in level {
            rec.push("suffix_and", src, dst, 1);
            bit_pending.push((dst, none_above[src] && none_above[dst]));
        }
        for (dst, value) in bit_pending.drain(..) {
            none_above[dst] = value;
        }
    }
    let onehot: Vec<bool> = (0..d)
        .map(|i| {
            rec.push("maxidx_gate", i, i, 1);
            let clear_above = if i == d - 1 {
                true
            } else {
                none_above[d - 2 - i]
            };
            bits[i] && clear_above
        })
        .collect();

    // One-hot mux selecting s_rho.
    let mut tau = FixedValue::zero(thresholds[0].format());
    for (i, threshold) in thresholds.iter().enumerate() {
        rec.push("tau_mux", i, i, threshold.format().total_bits());
        if onehot[i] {
            tau = *threshold;
        }
    }

    // w_i = max(v_i - s_rho, 0) against the original (unsorted) lanes.
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            let w = x.with_fraction_bits(common_fraction).sub(&tau);
            rec.push("w_sub", i, i, w.format().total_bits());
            rec.push("relu", i, i, w.format().total_bits());
            w.clamp_low_at_zero()
        })
        .collect()
}

fn pp_core(v: &[FixedValue], cfg: &HwProjectionConfig, rec: &mut Recorder<'_>) -> Vec<FixedValue> {
    let d = v.len();
    let fmt_in = cfg.input_format;

    // Cube clamp. The upper constant saturates to the format maximum when 1
    // is not representable (zero integer bits), in which case the compare is
    // structurally a no-op on in-range data.
    let one_cube = quantize(1.0, fmt_in, RoundingMode::RoundNearestEven);
    let v_hat: Vec<FixedValue> = v
        .iter()
        .enumerate()
        .map(|(i, x)| {
            rec.push("cube_clamp", i, i, fmt_in.total_bits());
            x.clamp_low_at_zero().clamp_high_at(&one_cube)
        })
        .collect();

    // Facet bits f_i = (v_hat_i > 1/2), strict.
    let half = FixedValue::from_mantissa(1, fmt(0, 1));
    let mut facet: Vec<bool> = v_hat
        .iter()
        .enumerate()
        .map(|(i, x)| {
            rec.push("facet_thresh", i, i, 1);
            *x > half
        })
        .collect();

    // Weight parity by a balanced XOR tree (bit glue).
    let odd_weight = xor_tree(&facet, 0, rec);

    // Distances |1/2 - v_hat_i| feeding the argmin tree.
    let dist_fraction = fmt_in.fraction_bits.max(1);
    let half_aligned =
        FixedValue::from_mantissa(1i128 << (dist_fraction - 1), fmt(0, dist_fraction));
    let distances: Vec<FixedValue> = v_hat
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let dist = half_aligned.sub(&x.with_fraction_bits(dist_fraction)).abs();
            rec.push("dist", i, i, dist.format().total_bits());
            dist
        })
        .collect();
    let flip_onehot = argmin_onehot(&distances, rec);

    // Conditional flip: even weight sends the argmin bit through an XOR.
    for i in 0..d {
        rec.push("flip_gate", i, i, 1);
        facet[i] ^= !odd_weight && flip_onehot[i];
    }

    // v_tilde = T_f(v) over the *unclamped* input, computed on both branches
    // and muxed per lane into one widened format.
    let one_tf = exact_one(fmt_in.fraction_bits);
    let tf_int_bits = fmt_in.integer_bits.max(1) + 1;
    let v_tilde: Vec<FixedValue> = v
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let flipped = one_tf.sub(x);
            let kept = x.with_integer_bits(tf_int_bits);
            rec.push("tf_mux", i, i, flipped.format().total_bits());
            if facet[i] {
                flipped
            } else {
                kept
            }
        })
        .collect();

    // Membership: 1' * clamp01(v_tilde) >= 1, evaluated on the exact
    // bit-grown sum before any truncation.
    let fmt_tilde = v_tilde[0].format();
    let one_member = exact_one(fmt_tilde.fraction_bits);
    let clamped: Vec<FixedValue> = v_tilde
        .iter()
        .enumerate()
        .map(|(i, x)| {
            rec.push("member_clamp", i, i, fmt_tilde.total_bits());
            x.clamp_low_at_zero().clamp_high_at(&one_member)
        })
        .collect();
    let member_sum = sum_tree(&clamped, 0, rec);
    rec.push("member_cmp", 0, 0, member_sum.format().total_bits());
    let member = member_sum >= one_member;

    // Simplex branch in the transformed coordinates, then T_f again.
    let u = simplex_core(&v_tilde, cfg.recip_fraction_bits(), rec);
    let fmt_u = u[0].format();
    let one_u = exact_one(fmt_u.fraction_bits);
    let out_int_bits = fmt_u.integer_bits.max(1) + 1;
    let w_simplex: Vec<FixedValue> = u
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let flipped = one_u.sub(x);
            let kept = x.with_integer_bits(out_int_bits);
            rec.push("tf_out_mux", i, i, flipped.format().total_bits());
            if facet[i] {
                flipped
            } else {
                kept
            }
        })
        .collect();

    // Final select between the cube clamp and the simplex branch, then a
    // [0,1] clamp: the exact projection lies in the cube, so clamping only
    // removes reciprocal-quantization overshoot.
    let fmt_w = w_simplex[0].format();
    let align_int = fmt_w.integer_bits.max(fmt_in.integer_bits);
    let one_out = exact_one(fmt_w.fraction_bits);
    (0..d)
        .map(|i| {
            let cube_branch = v_hat[i]
                .with_fraction_bits(fmt_w.fraction_bits)
                .with_integer_bits(align_int);
            let simplex_branch = w_simplex[i].with_integer_bits(align_int);
            rec.push("out_mux", i, i, fmt_w.total_bits());
            let chosen = if member { cube_branch } else { simplex_branch };
            rec.push("out_clamp", i, i, chosen.format().total_bits());
            chosen.clamp_low_at_zero().clamp_high_at(&one_out)
        })
        .collect()
}

/// Balanced XOR reduction; returns the parity (true = odd weight).
fn xor_tree(bits: &[bool], offset: usize, rec: &mut Recorder<'_>) -> bool {
    if bits.len() == 1 {
        return bits[0];
    }
    let mid = bits.len() / 2;
    let left = xor_tree(&bits[..mid], offset, rec);
    let right = xor_tree(&bits[mid..], offset + mid, rec);
    rec.push("parity_xor", offset, offset + mid, 1);
    left ^ right
}

/// Balanced adder tree over fixed-point values.
fn sum_tree(values: &[FixedValue], offset: usize, rec: &mut Recorder<'_>) -> FixedValue {
    if values.len() == 1 {
        return values[0];
    }
    let mid = values.len() / 2;
    let left = sum_tree(&values[..mid], offset, rec);
    let right = sum_tree(&values[mid..], offset + mid, rec);
    let out = left.add(&right);
    rec.push(
        "member_add",
        offset,
        offset + mid,
        out.format().total_bits(),
    );
    out
}

/// Min tree returning the one-hot indicator of the minimum (lowest index on
/// ties: the left operand of every node wins them).
fn argmin_onehot(values: &[FixedValue], rec: &mut Recorder<'_>) -> Vec<bool> {
    fn rec_argmin(
        values: &[FixedValue],
        offset: usize,
        rec: &mut Recorder<'_>,
    ) -> (FixedValue, usize) {
        if values.len() == 1 {
            return (values[0], offset);
        }
        let mid = values.len() / 2;
        let left = rec_argmin(&values[..mid], offset, rec);
        let right = rec_argmin(&values[mid..], offset + mid, rec);
        rec.push(
            "argmin_cmp",
            offset,
            offset + mid,
            left.0.format().total_bits(),
        );
        if right.0 < left.0 {
            right
        } else {
            left
        }
    }
    let (_, idx) = rec_argmin(values, 0, rec);
    let mut onehot = vec![false; values.len()];
    onehot[idx] = true;
    onehot
}

/// Area/delay proxies of one composed circuit at a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaDelayReport {
    pub dimension: usize,
    pub mode: CircuitMode,
    /// Compare-and-swap units in the sorting network (the shared sort term;
    /// identical across modes by construction).
    pub comparator_count: usize,
    /// Word-level add/subtract/compare units outside the sort.
    pub adder_count: usize,
    /// Constant (reciprocal) multipliers.
    pub multiplier_count: usize,
    /// Word-level stages on the critical path; single-bit trees and wiring
    /// count as glue.
    pub critical_depth: usize,
}

impl AreaDelayReport {
    pub const CSV_HEADER: &'static str = "dimension,mode,comparators,adders,multipliers,depth";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.dimension,
            self.mode.name(),
            self.comparator_count,
            self.adder_count,
            self.multiplier_count,
            self.critical_depth
        )
    }
}

/// Word-level stages after the prefix sums in the simplex datapath:
/// subtract-one, reciprocal multiply, threshold compare, threshold mux, and
/// the final subtract.
const SIMPLEX_TAIL_STAGES: usize = 5;

/// Deterministic area/delay proxy counts for the configured circuit.
pub fn area_delay_report(cfg: &HwProjectionConfig, mode: CircuitMode) -> AreaDelayReport {
    let d = cfg.dimension;
    let sort = ComparatorNetwork::batcher(d);
    let comparator_count = sort.size();
    let log_d = ceil_log2(d) as usize;

    match mode {
        CircuitMode::SortOnly => AreaDelayReport {
            dimension: d,
            mode,
            comparator_count,
            adder_count: 0,
            multiplier_count: 0,
            critical_depth: sort.depth(),
        },
        CircuitMode::Simplex => {
            let scan = ScanNetwork::build(d);
            AreaDelayReport {
                dimension: d,
                mode,
                // prefix adds + subtract-one + threshold compares + output
                // subtracts
                adder_count: scan.node_count() + 3 * d,
                multiplier_count: d.saturating_sub(1),
                comparator_count,
                critical_depth: sort.depth() + scan.depth() + SIMPLEX_TAIL_STAGES,
            }
        }
        CircuitMode::ParityPolytope => {
            let scan = ScanNetwork::build(d);
            let simplex_adders = scan.node_count() + 3 * d;
            let adder_count = simplex_adders
                + d // cube clamp compares
                + d // facet threshold compares
                + d // distance subtracts
                + (d - 1) // argmin tree compares
                + d // T_f flip subtracts
                + d // membership clamp compares
                + (d - 1) // membership adder tree
                + 1 // membership >= 1 compare
                + d // output T_f subtracts
                + d; // output clamp compares
            let membership_path = 1 + log_d + 1; // clamp, adder tree, compare
            let simplex_path = sort.depth() + scan.depth() + SIMPLEX_TAIL_STAGES;
            let critical_depth = 1 // cube clamp
                + 1 // facet threshold / distance (parallel)
                + log_d // argmin tree (parity XOR tree is glue alongside)
                + 1 // T_f mux
                + membership_path.max(simplex_path)
                + 1 // output select
                + 1; // output clamp
            AreaDelayReport {
                dimension: d,
                mode,
                comparator_count,
                adder_count,
                multiplier_count: d.saturating_sub(1),
                critical_depth,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed::quantize_vector;
    use crate::projection::{project_parity_polytope, project_simplex};

    fn cfg(d: usize, input: &str, output: &str) -> HwProjectionConfig {
        HwProjectionConfig::new(
            d,
            FixedPointFormat::parse(input).unwrap(),
            FixedPointFormat::parse(output).unwrap(),
        )
        .unwrap()
    }

    fn to_f64(v: &[FixedValue]) -> Vec<f64> {
        v.iter().map(FixedValue::to_f64).collect()
    }

    #[test]
    fn config_enforces_equal_widths() {
        let err = HwProjectionConfig::new(
            3,
            FixedPointFormat::parse("s0.6").unwrap(),
            FixedPointFormat::parse("s1.6").unwrap(),
        );
        assert!(matches!(err, Err(HwError::WidthMismatch { .. })));
    }

    #[test]
    fn simplex_dyadic_case_is_exact() {
        // All intermediate quantities are dyadic, so the fixed-point path
        // reproduces (1, 0) exactly.
        let c = cfg(2, "s3.4", "s3.4");
        let v = quantize_vector(
            &[2.0, 0.0],
            c.input_format(),
            RoundingMode::RoundNearestEven,
        );
        let w = hw_project_simplex(&v, &c).unwrap();
        assert_eq!(to_f64(&w), vec![1.0, 0.0]);
    }

    #[test]
    fn simplex_uniform_case_close_to_third() {
        let c = cfg(3, "s1.6", "s1.6");
        let v = quantize_vector(
            &[0.0, 0.0, 0.0],
            c.input_format(),
            RoundingMode::RoundNearestEven,
        );
        let w = hw_project_simplex(&v, &c).unwrap();
        for x in to_f64(&w) {
            assert!((x - 1.0 / 3.0).abs() <= 2f64.powi(-6), "{x}");
        }
    }

    #[test]
    fn pp_membership_branch_returns_quantized_input() {
        let c = cfg(3, "s1.6", "s1.6");
        let v = quantize_vector(
            &[0.5, 0.5, 0.5],
            c.input_format(),
            RoundingMode::RoundNearestEven,
        );
        let w = hw_project_pp(&v, &c).unwrap();
        assert_eq!(to_f64(&w), to_f64(&v));
    }

    #[test]
    fn pp_simplex_branch_tracks_reference() {
        let c = cfg(3, "s1.6", "s1.6");
        let input = [0.9, 0.1, 0.05];
        let v = quantize_vector(&input, c.input_format(), RoundingMode::RoundNearestEven);
        let w = to_f64(&hw_project_pp(&v, &c).unwrap());
        let reference = [0.65, 0.35, 0.30];
        let err: f64 = w
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let budget = 2.0 * 2f64.powi(-6) * 3f64.sqrt();
        assert!(err <= budget, "l2 error {err} over budget {budget}");
    }

    #[test]
    fn pp_rejects_single_lane() {
        let c = cfg(1, "s1.6", "s1.6");
        let v = quantize_vector(&[0.3], c.input_format(), RoundingMode::RoundNearestEven);
        assert!(matches!(
            hw_project_pp(&v, &c),
            Err(HwError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn traces_are_input_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for d in [2usize, 3, 5, 8] {
            let c = cfg(d, "s1.6", "s1.6");
            let mk = |rng: &mut rand_chacha::ChaCha12Rng| {
                let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
                quantize_vector(&raw, c.input_format(), RoundingMode::RoundNearestEven)
            };
            // Many pairs per dimension: clamps, branch selects and format
            // growth must all be independent of the data they see.
            let reference = mk(&mut rng);
            let (_, pp_ref) = hw_project_pp_traced(&reference, &c).unwrap();
            let (_, sx_ref) = hw_project_simplex_traced(&reference, &c).unwrap();
            for trial in 0..25 {
                let other = mk(&mut rng);
                let (w, pp_trace) = hw_project_pp_traced(&other, &c).unwrap();
                assert_eq!(pp_trace, pp_ref, "pp trace diverged at d={d} trial={trial}");
                assert!(w.iter().all(|x| x.format() == c.output_format()));
                let (_, sx_trace) = hw_project_simplex_traced(&other, &c).unwrap();
                assert_eq!(
                    sx_trace, sx_ref,
                    "simplex trace diverged at d={d} trial={trial}"
                );
            }
        }
    }

    #[test]
    fn simplex_outputs_stay_feasible_after_truncation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..500 {
            let d = rng.gen_range(1..9);
            let c = cfg(d, "s1.6", "s1.6");
            let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = quantize_vector(&raw, c.input_format(), RoundingMode::RoundNearestEven);
            let w = hw_project_simplex(&v, &c).unwrap();
            let wf = to_f64(&w);
            assert!(wf.iter().all(|&x| x >= 0.0), "negative output {wf:?}");
            let sum: f64 = wf.iter().sum();
            let budget = d as f64 * 2f64.powi(-6);
            assert!(
                (sum - 1.0).abs() <= budget,
                "sum {sum} off by more than {budget} at d={d}"
            );
        }
    }

    #[test]
    fn pp_outputs_stay_in_the_cube() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        for _ in 0..500 {
            let d = rng.gen_range(2..9);
            let c = cfg(d, "s2.5", "s1.6");
            let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let v = quantize_vector(&raw, c.input_format(), RoundingMode::RoundNearestEven);
            let w = hw_project_pp(&v, &c).unwrap();
            for x in to_f64(&w) {
                assert!((0.0..=1.0).contains(&x), "{x} outside [0,1]");
            }
        }
    }

    #[test]
    fn hw_error_shrinks_with_width() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(29);
        let inputs: Vec<Vec<f64>> = (0..400)
            .map(|_| (0..3).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let mean_err = |width: u32| -> f64 {
            let f = FixedPointFormat::new(0, width - 1).unwrap();
            let c = HwProjectionConfig::new(3, f, f).unwrap();
            inputs
                .iter()
                .map(|input| {
                    let reference = project_parity_polytope(input);
                    let v = quantize_vector(input, f, RoundingMode::RoundNearestEven);
                    let w = to_f64(&hw_project_pp(&v, &c).unwrap());
                    w.iter()
                        .zip(&reference)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        / 3.0
                })
                .sum::<f64>()
                / inputs.len() as f64
        };
        let (e4, e8, e16) = (mean_err(4), mean_err(8), mean_err(16));
        assert!(
            e16 < e8 && e8 < e4,
            "expected monotone errors, got {e4} {e8} {e16}"
        );

        // Same check for the simplex path against its reference.
        let simplex_err = |width: u32| -> f64 {
            let f = FixedPointFormat::new(0, width - 1).unwrap();
            let c = HwProjectionConfig::new(3, f, f).unwrap();
            inputs
                .iter()
                .map(|input| {
                    let reference = project_simplex(input);
                    let v = quantize_vector(input, f, RoundingMode::RoundNearestEven);
                    let w = to_f64(&hw_project_simplex(&v, &c).unwrap());
                    w.iter()
                        .zip(&reference)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        / 3.0
                })
                .sum::<f64>()
                / inputs.len() as f64
        };
        assert!(simplex_err(16) < simplex_err(8));
    }

    #[test]
    fn area_report_examples() {
        let c2 = cfg(2, "s1.6", "s1.6");
        let simplex = area_delay_report(&c2, CircuitMode::Simplex);
        assert_eq!(simplex.comparator_count, 1);

        let c9 = cfg(9, "s1.6", "s1.6");
        let sort_only = area_delay_report(&c9, CircuitMode::SortOnly);
        assert_eq!(
            sort_only.comparator_count,
            ComparatorNetwork::batcher(9).size()
        );
        let pp = area_delay_report(&c9, CircuitMode::ParityPolytope);
        let sx = area_delay_report(&c9, CircuitMode::Simplex);
        assert_eq!(pp.comparator_count, sort_only.comparator_count);
        assert_eq!(sx.comparator_count, sort_only.comparator_count);
        assert!(pp.critical_depth >= ComparatorNetwork::batcher(9).depth());
        assert!(pp.adder_count > sx.adder_count);
    }

    #[test]
    fn comparator_jump_past_64() {
        let c64 = cfg(64, "s1.6", "s1.6");
        let c65 = cfg(65, "s1.6", "s1.6");
        let r64 = area_delay_report(&c64, CircuitMode::ParityPolytope);
        let r65 = area_delay_report(&c65, CircuitMode::ParityPolytope);
        let jump = r65.comparator_count as isize - r64.comparator_count as isize;
        // Average increment over the preceding half-octave.
        let c33 = cfg(33, "s1.6", "s1.6");
        let r33 = area_delay_report(&c33, CircuitMode::ParityPolytope);
        let avg = (r64.comparator_count - r33.comparator_count) as f64 / 31.0;
        assert!(
            jump as f64 > avg,
            "jump {jump} not above average increment {avg}"
        );
    }
}
