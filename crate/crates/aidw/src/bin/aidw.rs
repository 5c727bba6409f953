//! Command-line front end: dataset generation, interpolation, benchmarks,
//! and the self-check suites.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use aidw::bench::{records_to_csv, report, run_bench, BenchConfig};
use aidw::io::{
    generate, parse_count, read_cloud_csv, read_queries_csv, write_cloud_csv, write_result_csv,
    DatasetSpec, ValueModel,
};
use aidw::selfcheck::run_selfcheck;
use aidw::{
    interpolate_all, AidwParams, AreaSpec, EngineKind, ExecPlan, Layout, Method, Precision, Real,
    DEFAULT_TILE_SIZE,
};

#[derive(Parser)]
#[command(
    name = "aidw",
    version,
    about = "Adaptive inverse distance weighting interpolation",
    long_about = "Spatial interpolation with standard IDW (fixed decay exponent) and adaptive \
                  IDW (per-query exponent from local point density), over SoA or AoS point \
                  clouds, with sequential and tiled-parallel engines."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic dataset as CSV
    Generate(GenerateArgs),
    /// Interpolate query points from a data file
    Interpolate(InterpolateArgs),
    /// Run the engine x layout x precision x size timing grid
    Bench(BenchArgs),
    /// Run the oracle consistency suites; exits nonzero on any failure
    Selfcheck {
        /// Base seed for the check datasets
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of points; accepts a K suffix (1K = 1024), e.g. `10K`
    #[arg(long, value_parser = parse_count)]
    count: usize,
    /// Side length of the square the points are drawn from
    #[arg(long, default_value_t = 100.0)]
    extent: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Value model: `uniform:lo,hi`, `plane:a,b,c`, or
    /// `gaussian_hill:cx,cy,sigma,amp`
    #[arg(long, default_value = "uniform:0,100", value_parser = parse_value_model)]
    value_model: ValueModel,
    /// Output CSV path (`x,y,value`)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InterpolateArgs {
    /// Data CSV path (`x,y,value`)
    #[arg(long)]
    data: PathBuf,
    /// Query CSV path (`x,y`; extra columns ignored)
    #[arg(long)]
    queries: PathBuf,
    /// `idw` (fixed exponent) or `aidw` (adaptive exponent)
    #[arg(long)]
    method: MethodName,
    /// Decay exponent for the idw method
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Neighbor count for the adaptive method
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// The five decay levels for the adaptive method
    #[arg(long, default_value = "1,1.5,2,2.5,3", value_parser = parse_levels)]
    alpha_levels: Levels,
    /// Lower bound of the nearest-neighbor statistic
    #[arg(long, default_value_t = 0.0)]
    r_min: f64,
    /// Upper bound of the nearest-neighbor statistic
    #[arg(long, default_value_t = 2.0)]
    r_max: f64,
    /// Study area: a positive number, or `auto` for the data bounding box
    #[arg(long, default_value = "auto", value_parser = parse_area)]
    area: Area,
    /// `seq` or `tiled`
    #[arg(long, default_value = "seq")]
    engine: EngineName,
    /// Worker threads for the tiled engine (default: available cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Samples per tile for the tiled engine
    #[arg(long, default_value_t = DEFAULT_TILE_SIZE)]
    tile_size: usize,
    /// Memory layout the data is loaded into: `soa` or `aos`
    #[arg(long, default_value = "soa")]
    layout: LayoutName,
    /// Arithmetic precision: `single` or `double`
    #[arg(long, default_value = "double")]
    precision: PrecisionName,
    /// Append the adaptive pipeline columns (r_exp,r_obs,R,mu,alpha)
    #[arg(long)]
    emit_trace: bool,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sizes, each accepting a K suffix, e.g. `10K,50K`
    #[arg(long, default_value = "10K,50K,100K")]
    sizes: String,
    /// Comma-separated subset of `seq,tiled`
    #[arg(long, default_value = "seq,tiled")]
    engines: String,
    /// Comma-separated subset of `soa,aos`
    #[arg(long, default_value = "soa,aos")]
    layouts: String,
    /// Comma-separated subset of `single,double`
    #[arg(long, default_value = "single,double")]
    precisions: String,
    /// Repetitions per cell (median reported, minimum 3)
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for tiled cells (default: available cores)
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TILE_SIZE)]
    tile_size: usize,
    /// Also write the records as CSV to this path
    #[arg(long)]
    csv: Option<PathBuf>,
}

// clap-friendly wrappers around the core FromStr parsers

#[derive(Clone, Copy)]
struct MethodName(bool); // true = adaptive

impl FromStr for MethodName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "idw" => Ok(MethodName(false)),
            "aidw" => Ok(MethodName(true)),
            _ => Err(format!("invalid method `{s}`: expected `idw` or `aidw`")),
        }
    }
}

#[derive(Clone, Copy)]
struct EngineName(EngineKind);

impl FromStr for EngineName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        EngineKind::from_str(s).map(EngineName).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy)]
struct LayoutName(Layout);

impl FromStr for LayoutName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Layout::from_str(s).map(LayoutName).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy)]
struct PrecisionName(Precision);

impl FromStr for PrecisionName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Precision::from_str(s).map(PrecisionName).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy)]
struct Levels([f64; 5]);

fn parse_levels(s: &str) -> Result<Levels, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(format!("expected 5 comma-separated levels, got {}", parts.len()));
    }
    let mut levels = [0.0; 5];
    for (slot, part) in levels.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid level `{part}`"))?;
    }
    Ok(Levels(levels))
}

#[derive(Clone, Copy)]
enum Area {
    Auto,
    Fixed(f64),
}

fn parse_area(s: &str) -> Result<Area, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Area::Auto);
    }
    s.parse::<f64>().map(Area::Fixed).map_err(|_| format!("invalid area `{s}`: expected a number or `auto`"))
}

fn parse_value_model(s: &str) -> Result<ValueModel, String> {
    let (name, args) = s.split_once(':').unwrap_or((s, ""));
    let nums: Vec<f64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|p| p.trim().parse().map_err(|_| format!("invalid number `{p}` in value model")))
            .collect::<Result<_, String>>()?
    };
    match (name, nums.as_slice()) {
        ("uniform", []) => Ok(ValueModel::Uniform { lo: 0.0, hi: 100.0 }),
        ("uniform", [lo, hi]) => Ok(ValueModel::Uniform { lo: *lo, hi: *hi }),
        ("plane", [a, b, c]) => Ok(ValueModel::Plane { a: *a, b: *b, c: *c }),
        ("gaussian_hill", [cx, cy, sigma, amp]) => {
            Ok(ValueModel::GaussianHill { cx: *cx, cy: *cy, sigma: *sigma, amp: *amp })
        }
        _ => Err(format!(
            "invalid value model `{s}`: expected uniform:lo,hi | plane:a,b,c | gaussian_hill:cx,cy,sigma,amp"
        )),
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let items: Result<Vec<T>, _> = s
        .split(',')
        .map(|p| p.trim().parse::<T>().map_err(|e| format!("invalid {what} `{p}`: {e}")))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(format!("empty {what} list"));
    }
    Ok(items)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Interpolate(args) => cmd_interpolate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Selfcheck { seed } => cmd_selfcheck(seed),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, String> {
    if args.extent <= 0.0 || !args.extent.is_finite() {
        return Err("extent must be positive and finite".into());
    }
    let spec = DatasetSpec {
        count: args.count,
        extent: args.extent,
        seed: args.seed,
        value_model: args.value_model,
    };
    let cloud = generate(&spec).map_err(|e| e.to_string())?;
    write_cloud_csv(&args.out, &cloud).map_err(|e| e.to_string())?;
    println!("wrote {} samples to {}", cloud.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_interpolate(args: InterpolateArgs) -> Result<ExitCode, String> {
    match args.precision.0 {
        Precision::Double => run_interpolate::<f64>(&args),
        Precision::Single => run_interpolate::<f32>(&args),
    }
}

fn run_interpolate<R: Real>(args: &InterpolateArgs) -> Result<ExitCode, String> {
    let to_r = |x: f64, what: &str| -> Result<R, String> {
        R::from_f64(x).ok_or_else(|| format!("{what} out of range for the selected precision"))
    };

    let cloud = read_cloud_csv::<R>(&args.data, args.layout.0).map_err(|e| e.to_string())?;
    let queries = read_queries_csv::<R>(&args.queries).map_err(|e| e.to_string())?;

    let method = if args.method.0 {
        let mut levels = [R::zero(); 5];
        for (slot, &level) in levels.iter_mut().zip(args.alpha_levels.0.iter()) {
            *slot = to_r(level, "alpha level")?;
        }
        let params = AidwParams {
            k: args.k,
            alpha_levels: levels,
            r_min: to_r(args.r_min, "r_min")?,
            r_max: to_r(args.r_max, "r_max")?,
            area: match args.area {
                Area::Auto => AreaSpec::Auto,
                Area::Fixed(a) => AreaSpec::Fixed(to_r(a, "area")?),
            },
            zero_dist_tol: R::default_zero_tol(),
        };
        Method::Aidw(params)
    } else {
        Method::Idw { alpha: to_r(args.alpha, "alpha")?, zero_dist_tol: R::default_zero_tol() }
    };

    let plan = match args.engine.0 {
        EngineKind::Sequential => ExecPlan::sequential(),
        EngineKind::TiledParallel => {
            ExecPlan::tiled(args.workers.unwrap_or_else(default_workers), args.tile_size)
        }
    };

    let result = interpolate_all(&cloud, &queries, &method, &plan, args.emit_trace)
        .map_err(|e| e.to_string())?;
    write_result_csv(&args.out, &queries, &result).map_err(|e| e.to_string())?;
    println!("wrote {} predictions to {}", result.values.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, String> {
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(|p| parse_count(p.trim()))
        .collect::<Result<_, String>>()?;
    let config = BenchConfig {
        sizes,
        engines: parse_list::<EngineName>(&args.engines, "engine")?
            .into_iter()
            .map(|e| e.0)
            .collect(),
        layouts: parse_list::<LayoutName>(&args.layouts, "layout")?
            .into_iter()
            .map(|l| l.0)
            .collect(),
        precisions: parse_list::<PrecisionName>(&args.precisions, "precision")?
            .into_iter()
            .map(|p| p.0)
            .collect(),
        reps: args.reps,
        seed: args.seed,
        workers: args.workers.unwrap_or_else(default_workers),
        tile_size: args.tile_size,
    };
    let records = run_bench(&config).map_err(|e| e.to_string())?;
    print!("{}", report(&records).map_err(|e| e.to_string())?);
    if let Some(path) = &args.csv {
        std::fs::write(path, records_to_csv(&records)).map_err(|e| e.to_string())?;
        println!("wrote records to {}", path.display());
    }
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        Err(format!("{failed} benchmark cells failed"))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_selfcheck(seed: u64) -> Result<ExitCode, String> {
    let reports = run_selfcheck(seed);
    let mut all_passed = true;
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {:<16} {}", r.name, r.detail);
        all_passed &= r.passed;
    }
    if all_passed {
        println!("selfcheck passed (seed {seed})");
        Ok(ExitCode::SUCCESS)
    } else {
        Err("selfcheck failed".into())
    }
}
