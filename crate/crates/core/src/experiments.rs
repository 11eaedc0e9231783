//! Experiment harness: seeded input generation, fixed-point precision sweeps
//! against the double-precision reference, and area/delay scaling sweeps,
//! all emitted as deterministic CSV.
//!
//! Every random quantity flows from an explicit seed through ChaCha12, and
//! the generator name is recorded in the CSV metadata line, so identical
//! invocations produce byte-identical files.

use std::error::Error;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::fixed::{quantize_vector, FixedPointFormat, RoundingMode};
use crate::hw::{
    area_delay_report, hw_project_pp, hw_project_simplex, AreaDelayReport, CircuitMode,
    HwProjectionConfig,
};
use crate::projection::{project_parity_polytope, project_simplex};

/// Generator recorded in CSV metadata.
pub const RNG_ALGORITHM: &str = "chacha12";
/// Schema tag written on the CSV comment line.
pub const CSV_SCHEMA: &str = "polyproj-csv-v1";

/// One row of a precision sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub dimension: usize,
    /// Input format descriptor, e.g. `s0.6`.
    pub format: String,
    pub trials: usize,
    pub mean_normalized_sq_error: f64,
    /// Standard error of the mean.
    pub error_bar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentError {
    NonPositiveVariance {
        variance: f64,
    },
    EmptyInputs,
    MixedDimensions,
    DimensionTooSmall {
        dimension: usize,
        required: usize,
    },
    /// Output rule needs at least a sign and an integer bit plus the width.
    FormatTooNarrow {
        format: FixedPointFormat,
    },
    DimensionOutOfRange {
        dimension: usize,
    },
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::NonPositiveVariance { variance } => {
                write!(f, "variance must be positive, got {variance}")
            }
            ExperimentError::EmptyInputs => write!(f, "no input vectors supplied"),
            ExperimentError::MixedDimensions => write!(f, "input vectors differ in dimension"),
            ExperimentError::DimensionTooSmall {
                dimension,
                required,
            } => write!(f, "dimension {dimension} below required {required}"),
            ExperimentError::FormatTooNarrow { format } => {
                write!(f, "format {format} too narrow for the output rule")
            }
            ExperimentError::DimensionOutOfRange { dimension } => {
                write!(f, "dimension {dimension} outside supported range 2..=1024")
            }
        }
    }
}

impl Error for ExperimentError {}

/// `n` i.i.d. vectors uniform on `[0,1]^d`, deterministic per seed.
pub fn gen_uniform_cube(d: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    assert!(d >= 1 && n >= 1);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

/// `n` i.i.d. vectors with independent `N(0, variance)` components
/// (Box-Muller over the seeded stream), deterministic per seed.
pub fn gen_gaussian(
    d: usize,
    n: usize,
    seed: u64,
    variance: f64,
) -> Result<Vec<Vec<f64>>, ExperimentError> {
    assert!(d >= 1 && n >= 1);
    if !(variance > 0.0) {
        return Err(ExperimentError::NonPositiveVariance { variance });
    }
    let sigma = variance.sqrt();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut spare: Option<f64> = None;
    let mut normal = |rng: &mut ChaCha12Rng| -> f64 {
        if let Some(s) = spare.take() {
            return s;
        }
        let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
        let u2: f64 = rng.gen();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (std::f64::consts::TAU * u2).sin_cos();
        spare = Some(radius * sin);
        radius * cos
    };
    Ok((0..n)
        .map(|_| (0..d).map(|_| sigma * normal(&mut rng)).collect())
        .collect())
}

/// Which projection a precision sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    ParityPolytope,
    Simplex,
}

impl SweepTarget {
    pub fn name(&self) -> &'static str {
        match self {
            SweepTarget::ParityPolytope => "pp",
            SweepTarget::Simplex => "simplex",
        }
    }
}

/// How the output format is derived from each input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormatRule {
    /// Output format equals the input format.
    SameAsInput,
    /// One sign bit, one integer bit, fraction bits filling the same total
    /// width as the input.
    SignPlusOneInteger,
}

impl OutputFormatRule {
    fn apply(&self, input: FixedPointFormat) -> Result<FixedPointFormat, ExperimentError> {
        match self {
            OutputFormatRule::SameAsInput => Ok(input),
            OutputFormatRule::SignPlusOneInteger => {
                let width = input.total_bits();
                if width < 3 {
                    return Err(ExperimentError::FormatTooNarrow { format: input });
                }
                Ok(FixedPointFormat::new(1, width - 2)
                    .expect("width was validated by the input format"))
            }
        }
    }
}

/// Runs one precision sweep: quantizes every input in every format, pushes it
/// through the fixed-point circuit, and scores `‖hw − reference‖²/d` against
/// the double-precision projection of the *unquantized* input. Also records
/// the pure input-quantization error curve.
pub fn precision_sweep(
    target: SweepTarget,
    inputs: &[Vec<f64>],
    formats: &[FixedPointFormat],
    mode: RoundingMode,
    output_rule: OutputFormatRule,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    if inputs.is_empty() || formats.is_empty() {
        return Err(ExperimentError::EmptyInputs);
    }
    let d = inputs[0].len();
    if inputs.iter().any(|v| v.len() != d) {
        return Err(ExperimentError::MixedDimensions);
    }
    if target == SweepTarget::ParityPolytope && d < 2 {
        return Err(ExperimentError::DimensionTooSmall {
            dimension: d,
            required: 2,
        });
    }

    // The double-precision references are format-independent: compute once.
    let references: Vec<Vec<f64>> = inputs
        .iter()
        .map(|v| match target {
            SweepTarget::ParityPolytope => project_parity_polytope(v),
            SweepTarget::Simplex => project_simplex(v),
        })
        .collect();

    let mut records = Vec::with_capacity(formats.len() * 2);
    for &format in formats {
        let output = output_rule.apply(format)?;
        let cfg = HwProjectionConfig::new(d, format, output)
            .expect("widths match by construction of the output rule");
        let mut proj_errors = Vec::with_capacity(inputs.len());
        let mut quant_errors = Vec::with_capacity(inputs.len());
        for (input, reference) in inputs.iter().zip(&references) {
            let q = quantize_vector(input, format, mode);
            quant_errors.push(
                q.iter()
                    .zip(input)
                    .map(|(a, b)| (a.to_f64() - b) * (a.to_f64() - b))
                    .sum::<f64>()
                    / d as f64,
            );
            let hw = match target {
                SweepTarget::ParityPolytope => hw_project_pp(&q, &cfg),
                SweepTarget::Simplex => hw_project_simplex(&q, &cfg),
            }
            .expect("inputs were quantized into the configured format");
            proj_errors.push(
                hw.iter()
                    .zip(reference)
                    .map(|(a, b)| (a.to_f64() - b) * (a.to_f64() - b))
                    .sum::<f64>()
                    / d as f64,
            );
        }
        let (proj_mean, proj_se) = mean_and_stderr(&proj_errors);
        let (quant_mean, quant_se) = mean_and_stderr(&quant_errors);
        records.push(ExperimentRecord {
            experiment: target.name().to_string(),
            dimension: d,
            format: format.descriptor(),
            trials: inputs.len(),
            mean_normalized_sq_error: proj_mean,
            error_bar: proj_se,
        });
        records.push(ExperimentRecord {
            experiment: "input".to_string(),
            dimension: d,
            format: format.descriptor(),
            trials: inputs.len(),
            mean_normalized_sq_error: quant_mean,
            error_bar: quant_se,
        });
    }
    Ok(records)
}

/// One [`AreaDelayReport`] per requested dimension.
pub fn scaling_sweep(
    dims: &[usize],
    mode: CircuitMode,
) -> Result<Vec<AreaDelayReport>, ExperimentError> {
    let format = FixedPointFormat::new(1, 6).expect("s1.6 is valid");
    let mut reports = Vec::with_capacity(dims.len());
    for &d in dims {
        if !(2..=1024).contains(&d) {
            return Err(ExperimentError::DimensionOutOfRange { dimension: d });
        }
        let cfg = HwProjectionConfig::new(d, format, format).expect("fixed format");
        reports.push(area_delay_report(&cfg, mode));
    }
    Ok(reports)
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n >= 1);
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// CSV for precision sweeps: a schema/metadata comment line, a header, then
/// rows sorted by (experiment, dimension, format).
pub fn precision_csv(records: &[ExperimentRecord], metadata: &[(&str, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {CSV_SCHEMA} precision rng={RNG_ALGORITHM}"));
    for (key, value) in metadata {
        out.push_str(&format!(" {key}={value}"));
    }
    out.push('\n');
    out.push_str("experiment,dimension,format,trials,mean_normalized_sq_error,error_bar\n");
    let mut sorted: Vec<&ExperimentRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.experiment, a.dimension, format_sort_key(&a.format)).cmp(&(
            &b.experiment,
            b.dimension,
            format_sort_key(&b.format),
        ))
    });
    for r in sorted {
        out.push_str(&format!(
            "{},{},{},{},{:e},{:e}\n",
            r.experiment, r.dimension, r.format, r.trials, r.mean_normalized_sq_error, r.error_bar
        ));
    }
    out
}

/// CSV for scaling sweeps: schema comment, header, rows sorted by
/// (mode, dimension).
pub fn scaling_csv(reports: &[AreaDelayReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {CSV_SCHEMA} scaling\n"));
    out.push_str(AreaDelayReport::CSV_HEADER);
    out.push('\n');
    let mut sorted: Vec<&AreaDelayReport> = reports.iter().collect();
    sorted.sort_by_key(|r| (r.mode.name(), r.dimension));
    for r in sorted {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn format_sort_key(descriptor: &str) -> (u32, u32) {
    FixedPointFormat::parse(descriptor)
        .map(|f| (f.integer_bits, f.fraction_bits))
        .unwrap_or((u32::MAX, u32::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_generation_is_deterministic_and_in_range() {
        let a = gen_uniform_cube(3, 100, 42);
        let b = gen_uniform_cube(3, 100, 42);
        assert_eq!(a, b);
        let c = gen_uniform_cube(3, 100, 43);
        assert_ne!(a, c);
        assert!(a.iter().flatten().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn uniform_component_mean_is_half() {
        let vs = gen_uniform_cube(3, 100_000, 7);
        let mean: f64 = vs.iter().flatten().sum::<f64>() / (3.0 * 100_000.0);
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn gaussian_matches_requested_variance() {
        let vs = gen_gaussian(4, 250_000, 11, 16.0).unwrap();
        let n = (4 * 250_000) as f64;
        let mean: f64 = vs.iter().flatten().sum::<f64>() / n;
        let var: f64 = vs
            .iter()
            .flatten()
            .map(|&x| (x - mean) * (x - mean))
            .sum::<f64>()
            / (n - 1.0);
        assert!((var - 16.0).abs() < 0.2, "sample variance {var}");
        assert!(mean.abs() < 0.05, "sample mean {mean}");
    }

    #[test]
    fn gaussian_rejects_bad_variance() {
        assert!(matches!(
            gen_gaussian(2, 3, 0, 0.0),
            Err(ExperimentError::NonPositiveVariance { .. })
        ));
        assert_eq!(gen_gaussian(2, 3, 9, 16.0), gen_gaussian(2, 3, 9, 16.0));
    }

    #[test]
    fn precision_sweep_produces_projection_and_input_rows() {
        let inputs = gen_uniform_cube(3, 50, 1);
        let formats: Vec<FixedPointFormat> = (2..=6)
            .map(|f| FixedPointFormat::new(0, f).unwrap())
            .collect();
        let records = precision_sweep(
            SweepTarget::ParityPolytope,
            &inputs,
            &formats,
            RoundingMode::RoundNearestEven,
            OutputFormatRule::SameAsInput,
        )
        .unwrap();
        assert_eq!(records.len(), formats.len() * 2);
        assert!(records.iter().any(|r| r.experiment == "pp"));
        assert!(records.iter().any(|r| r.experiment == "input"));
        for r in &records {
            assert!(r.mean_normalized_sq_error >= 0.0);
            assert_eq!(r.trials, 50);
        }
        // Finer formats quantize more accurately.
        let input_errs: Vec<f64> = records
            .iter()
            .filter(|r| r.experiment == "input")
            .map(|r| r.mean_normalized_sq_error)
            .collect();
        assert!(input_errs.windows(2).all(|w| w[1] < w[0]), "{input_errs:?}");
    }

    #[test]
    fn scaling_sweep_covers_requested_dims() {
        let dims: Vec<usize> = vec![2, 3, 8, 16];
        let reports = scaling_sweep(&dims, CircuitMode::Simplex).unwrap();
        assert_eq!(reports.len(), 4);
        assert_eq!(reports[0].comparator_count, 1);
        assert!(scaling_sweep(&[1], CircuitMode::Simplex).is_err());
        assert!(scaling_sweep(&[1025], CircuitMode::Simplex).is_err());
    }

    #[test]
    fn csv_emission_is_deterministic() {
        let inputs = gen_uniform_cube(2, 20, 3);
        let formats = vec![FixedPointFormat::new(0, 3).unwrap()];
        let records = precision_sweep(
            SweepTarget::Simplex,
            &inputs,
            &formats,
            RoundingMode::RoundNearestEven,
            OutputFormatRule::SameAsInput,
        )
        .unwrap();
        let meta = [("seed", "3".to_string())];
        let a = precision_csv(&records, &meta);
        let b = precision_csv(&records, &meta);
        assert_eq!(a, b);
        assert!(a.starts_with(&format!("# {CSV_SCHEMA} precision rng=chacha12 seed=3\n")));
        assert!(a.contains("experiment,dimension,format,trials,"));

        let reports = scaling_sweep(&[2, 4], CircuitMode::SortOnly).unwrap();
        let csv = scaling_csv(&reports);
        assert!(csv.contains("dimension,mode,comparators,adders,multipliers,depth"));
        assert!(csv.contains("2,sort,1,0,0,1"));
    }

    #[test]
    fn stderr_behaves() {
        let (m, se) = mean_and_stderr(&[1.0, 1.0, 1.0]);
        assert_eq!(m, 1.0);
        assert_eq!(se, 0.0);
        let (m, se) = mean_and_stderr(&[0.0, 2.0]);
        assert_eq!(m, 1.0);
        assert!(se > 0.0);
        let (_, se1) = mean_and_stderr(&[5.0]);
        assert_eq!(se1, 0.0);
    }
}
