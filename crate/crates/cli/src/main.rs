//! Command-line harness for the projection toolkit: single projections,
//! fixed-point precision sweeps, area/delay scaling sweeps, and a
//! verification suite.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polyproj::experiments::{
    gen_gaussian, gen_uniform_cube, precision_csv, precision_sweep, scaling_csv, scaling_sweep,
    OutputFormatRule, SweepTarget,
};
use polyproj::fixed::{quantize_vector, FixedPointFormat, RoundingMode};
use polyproj::hw::{hw_project_pp, hw_project_simplex, CircuitMode, HwProjectionConfig};
use polyproj::oracle::{bisection_simplex_oracle, dykstra_pp_oracle};
use polyproj::projection::{
    project_l1_ball, project_parity_polytope, project_simplex, project_unit_cube,
};
use polyproj::scan::ScanNetwork;
use polyproj::sortnet::{verify_zero_one, ComparatorNetwork};

#[derive(Parser)]
#[command(
    name = "polyproj",
    about = "Euclidean projections onto the parity polytope and probability simplex, \
             with fixed-point circuit models and experiment sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project vectors (from the command line or a file) and print the
    /// results, one vector per line.
    Project(ProjectArgs),
    /// Fixed-point accuracy sweep over a family of formats; emits CSV.
    SweepPrecision(SweepPrecisionArgs),
    /// Area/delay proxy sweep over a dimension range; emits CSV.
    SweepScaling(SweepScalingArgs),
    /// Run the oracle-agreement and zero-one verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Cube,
    Simplex,
    Pp,
    L1,
}

#[derive(Args)]
struct ProjectArgs {
    /// Set to project onto.
    #[arg(long, value_enum, default_value = "pp")]
    onto: Target,
    /// Radius of the l1 ball (l1 target only).
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Whitespace-separated components of a single input vector.
    #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
    vector: Option<String>,
    /// File with one whitespace-separated vector per line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Run the fixed-point circuit in this input format (e.g. s1.6) instead
    /// of the real-arithmetic path (simplex and pp targets only).
    #[arg(long)]
    fixed: Option<String>,
    /// Output format for the fixed-point path (defaults to --fixed).
    #[arg(long)]
    output_format: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepTargetArg {
    Pp,
    Simplex,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    Uniform,
    Gaussian,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantizeArg {
    Nearest,
    Truncate,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputRuleArg {
    /// Output format equals the input format.
    Same,
    /// Output format is s1.(width-2), matching the input width.
    S1,
}

#[derive(Args)]
struct SweepPrecisionArgs {
    #[arg(long, value_enum)]
    target: SweepTargetArg,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Comma-separated format descriptors; a fraction range expands a family,
    /// e.g. "s0.1-15" or "s3.2-12,s4.1-11".
    #[arg(long)]
    formats: String,
    #[arg(long, value_enum, default_value = "uniform")]
    dist: DistArg,
    /// Variance of the Gaussian input distribution.
    #[arg(long, default_value_t = 16.0)]
    variance: f64,
    #[arg(long, value_enum, default_value = "nearest")]
    quantize: QuantizeArg,
    #[arg(long, value_enum, default_value = "same")]
    output_rule: OutputRuleArg,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pp,
    Simplex,
    Sort,
}

#[derive(Args)]
struct SweepScalingArgs {
    /// Dimensions as comma-separated values and/or ranges, e.g. "2-64" or
    /// "8,16,32-40".
    #[arg(long)]
    dims: String,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Oracle-agreement trials per dimension.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Project(args) => cmd_project(args),
        Command::SweepPrecision(args) => cmd_sweep_precision(args),
        Command::SweepScaling(args) => cmd_sweep_scaling(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_project(args: ProjectArgs) -> Result<ExitCode, String> {
    let vectors = read_vectors(&args)?;
    let fixed = args
        .fixed
        .as_deref()
        .map(FixedPointFormat::parse)
        .transpose()
        .map_err(|e| e.to_string())?;
    let output_format = match (&args.output_format, fixed) {
        (Some(s), Some(_)) => Some(FixedPointFormat::parse(s).map_err(|e| e.to_string())?),
        (Some(_), None) => return Err("--output-format requires --fixed".into()),
        (None, f) => f,
    };

    for v in &vectors {
        if v.is_empty() {
            return Err("empty input vector".into());
        }
        let out: Vec<f64> = match (args.onto, fixed) {
            (Target::Cube, None) => project_unit_cube(v),
            (Target::Simplex, None) => project_simplex(v),
            (Target::Pp, None) => {
                if v.len() < 2 {
                    return Err("parity polytope projection needs d >= 2".into());
                }
                project_parity_polytope(v)
            }
            (Target::L1, None) => {
                if args.radius <= 0.0 {
                    return Err("l1 radius must be positive".into());
                }
                project_l1_ball(v, args.radius)
            }
            (Target::Simplex, Some(fmt)) | (Target::Pp, Some(fmt)) => {
                let cfg = HwProjectionConfig::new(v.len(), fmt, output_format.unwrap())
                    .map_err(|e| e.to_string())?;
                let q = quantize_vector(v, fmt, RoundingMode::RoundNearestEven);
                let w = match args.onto {
                    Target::Simplex => hw_project_simplex(&q, &cfg),
                    _ => hw_project_pp(&q, &cfg),
                }
                .map_err(|e| e.to_string())?;
                w.iter().map(|x| x.to_f64()).collect()
            }
            _ => return Err("--fixed applies to simplex and pp targets only".into()),
        };
        let line: Vec<String> = out.iter().map(f64::to_string).collect();
        println!("{}", line.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn read_vectors(args: &ProjectArgs) -> Result<Vec<Vec<f64>>, String> {
    let text = match (&args.vector, &args.file) {
        (Some(v), None) => v.clone(),
        (None, Some(path)) => {
            fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?
        }
        _ => return Err("provide exactly one of --vector or --file".into()),
    };
    let mut vectors = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
        vectors.push(parsed.map_err(|e| format!("parsing {line:?}: {e}"))?);
    }
    if vectors.is_empty() {
        return Err("no input vectors".into());
    }
    Ok(vectors)
}

/// Expands "s0.1-15,s3.4" into concrete formats.
fn parse_format_list(spec: &str) -> Result<Vec<FixedPointFormat>, String> {
    let mut formats = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        match item.rsplit_once('-') {
            Some((head, hi_str)) if head.contains('.') => {
                let base = FixedPointFormat::parse(head).map_err(|e| e.to_string())?;
                let hi: u32 = hi_str
                    .parse()
                    .map_err(|_| format!("bad fraction range in {item:?}"))?;
                let lo = base.fraction_bits;
                if hi < lo {
                    return Err(format!("descending fraction range in {item:?}"));
                }
                for f in lo..=hi {
                    formats.push(
                        FixedPointFormat::new(base.integer_bits, f).map_err(|e| e.to_string())?,
                    );
                }
            }
            _ => formats.push(FixedPointFormat::parse(item).map_err(|e| e.to_string())?),
        }
    }
    if formats.is_empty() {
        return Err("no formats given".into());
    }
    Ok(formats)
}

/// Expands "2-8,16" into a sorted dimension list.
fn parse_dims(spec: &str) -> Result<Vec<usize>, String> {
    let mut dims = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if let Some((lo, hi)) = item.split_once('-') {
            let lo: usize = lo.parse().map_err(|_| format!("bad range {item:?}"))?;
            let hi: usize = hi.parse().map_err(|_| format!("bad range {item:?}"))?;
            if hi < lo {
                return Err(format!("descending range {item:?}"));
            }
            dims.extend(lo..=hi);
        } else {
            dims.push(
                item.parse()
                    .map_err(|_| format!("bad dimension {item:?}"))?,
            );
        }
    }
    if dims.is_empty() {
        return Err("no dimensions given".into());
    }
    Ok(dims)
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_sweep_precision(args: SweepPrecisionArgs) -> Result<ExitCode, String> {
    let formats = parse_format_list(&args.formats)?;
    let inputs = match args.dist {
        DistArg::Uniform => gen_uniform_cube(args.dim, args.trials, args.seed),
        DistArg::Gaussian => gen_gaussian(args.dim, args.trials, args.seed, args.variance)
            .map_err(|e| e.to_string())?,
    };
    let target = match args.target {
        SweepTargetArg::Pp => SweepTarget::ParityPolytope,
        SweepTargetArg::Simplex => SweepTarget::Simplex,
    };
    let mode = match args.quantize {
        QuantizeArg::Nearest => RoundingMode::RoundNearestEven,
        QuantizeArg::Truncate => RoundingMode::Truncate,
    };
    let rule = match args.output_rule {
        OutputRuleArg::Same => OutputFormatRule::SameAsInput,
        OutputRuleArg::S1 => OutputFormatRule::SignPlusOneInteger,
    };
    let records =
        precision_sweep(target, &inputs, &formats, mode, rule).map_err(|e| e.to_string())?;
    let metadata = [
        ("target", target.name().to_string()),
        ("dimension", args.dim.to_string()),
        ("trials", args.trials.to_string()),
        ("seed", args.seed.to_string()),
        (
            "dist",
            match args.dist {
                DistArg::Uniform => "uniform".to_string(),
                DistArg::Gaussian => format!("gaussian(0,{})", args.variance),
            },
        ),
        (
            "quantize",
            match args.quantize {
                QuantizeArg::Nearest => "round_nearest_even".to_string(),
                QuantizeArg::Truncate => "truncate".to_string(),
            },
        ),
    ];
    let meta_refs: Vec<(&str, String)> = metadata.iter().map(|(k, v)| (*k, v.clone())).collect();
    write_output(&args.out, &precision_csv(&records, &meta_refs))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep_scaling(args: SweepScalingArgs) -> Result<ExitCode, String> {
    let dims = parse_dims(&args.dims)?;
    let mode = match args.mode {
        ModeArg::Pp => CircuitMode::ParityPolytope,
        ModeArg::Simplex => CircuitMode::Simplex,
        ModeArg::Sort => CircuitMode::SortOnly,
    };
    let reports = scaling_sweep(&dims, mode).map_err(|e| e.to_string())?;
    write_output(&args.out, &scaling_csv(&reports))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        all_ok &= ok;
    };

    // Zero-one certification of every tabulated network.
    for n in 1..=16 {
        let net = ComparatorNetwork::optimal(n).map_err(|e| e.to_string())?;
        let report = verify_zero_one(&net);
        check(
            &format!("zero-one optimal({n})"),
            report.passed,
            format!("{} patterns exhaustive", report.trials),
        );
    }
    for n in [20, 24] {
        let report = verify_zero_one(&ComparatorNetwork::batcher(n));
        check(
            &format!("zero-one batcher({n})"),
            report.passed,
            format!("{} patterns exhaustive", report.trials),
        );
    }
    for n in [33, 64] {
        let report = verify_zero_one(&ComparatorNetwork::batcher(n));
        check(
            &format!("zero-one batcher({n})"),
            report.passed,
            format!("{} randomized trials", report.trials),
        );
    }

    // Prefix-scan depth optimality.
    let mut depth_ok = true;
    for n in 1..=512usize {
        let expected = usize::BITS - (n - 1).max(1).leading_zeros();
        let expected = if n == 1 { 0 } else { expected as usize };
        if ScanNetwork::build(n).depth() != expected {
            depth_ok = false;
        }
    }
    check(
        "scan depth == ceil(log2 n)",
        depth_ok,
        "all n in 1..=512".to_string(),
    );

    // Oracle agreement.
    for d in 2..=6usize {
        let inputs = gen_uniform_cube(d, args.trials, args.seed);
        let mut worst: f64 = 0.0;
        for v in &inputs {
            let fast = project_parity_polytope(v);
            let slow = dykstra_pp_oracle(v, 1e-9, 1_000_000)
                .map_err(|e| e.to_string())?
                .projection;
            let dist = fast
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(dist);
        }
        check(
            &format!("pp oracle agreement d={d}"),
            worst <= 1e-6,
            format!("worst l2 distance {worst:.2e} over {} trials", args.trials),
        );
    }
    for d in [1usize, 2, 5, 16, 64] {
        let inputs =
            gen_gaussian(d, args.trials, args.seed ^ 0x9e37, 16.0).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for v in &inputs {
            let fast = project_simplex(v);
            let slow = bisection_simplex_oracle(v, 1e-11);
            let dist = fast
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(dist);
        }
        check(
            &format!("simplex oracle agreement d={d}"),
            worst <= 1e-9,
            format!("worst l2 distance {worst:.2e} over {} trials", args.trials),
        );
    }

    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
