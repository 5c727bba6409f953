//! CSV formats and the seeded synthetic dataset generator.
//!
//! File formats (UTF-8, comma separator, `.` decimal point, header row):
//!
//! - point clouds: `x,y,value`
//! - query lists: `x,y` (extra columns are ignored, so a cloud file can
//!   serve as a query file)
//! - prediction results: `x,y,predicted` plus
//!   `,r_exp,r_obs,R,mu,alpha` when traces are exported
//!
//! Values are written with the shortest representation that parses back to
//! the identical bit pattern at the same precision, so a write/read round
//! trip is exact.
//!
//! The generator draws sample locations i.i.d. uniform over
//! `[0, extent)^2` from xoshiro256++ (see [`crate::rng`]); per sample it
//! draws x, then y, then one more value for the uniform value model. The
//! plane and Gaussian-hill models compute the value from the location and
//! consume no draws. Identical seeds therefore give bit-identical clouds
//! on every platform.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use aidw_core::{
    AlphaTrace, Error as CoreError, Layout, PointCloud, PredictionResult, QueryPoint, Real, Sample,
};

use crate::rng::Xoshiro256pp;

/// How generated sample values are assigned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueModel {
    /// One uniform draw in `[lo, hi)` per sample.
    Uniform { lo: f64, hi: f64 },
    /// `value = a*x + b*y + c`, exactly.
    Plane { a: f64, b: f64, c: f64 },
    /// `value = amp * exp(-((x-cx)^2 + (y-cy)^2) / (2 sigma^2))`.
    GaussianHill { cx: f64, cy: f64, sigma: f64, amp: f64 },
}

impl ValueModel {
    fn value(&self, x: f64, y: f64, rng: &mut Xoshiro256pp) -> f64 {
        match *self {
            ValueModel::Uniform { lo, hi } => lo + rng.next_f64() * (hi - lo),
            ValueModel::Plane { a, b, c } => a * x + b * y + c,
            ValueModel::GaussianHill { cx, cy, sigma, amp } => {
                let dx = x - cx;
                let dy = y - cy;
                amp * (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp()
            }
        }
    }
}

impl fmt::Display for ValueModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ValueModel::Uniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
            ValueModel::Plane { a, b, c } => write!(f, "plane:{a},{b},{c}"),
            ValueModel::GaussianHill { cx, cy, sigma, amp } => {
                write!(f, "gaussian_hill:{cx},{cy},{sigma},{amp}")
            }
        }
    }
}

/// Recipe for one synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    /// Number of samples (raw count; the CLI accepts `K` suffixes where
    /// 1K = 1024).
    pub count: usize,
    /// Side length of the square the locations are drawn from.
    pub extent: f64,
    pub seed: u64,
    pub value_model: ValueModel,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            count: 1024,
            extent: 100.0,
            seed: 0,
            value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
        }
    }
}

/// Generates a seeded cloud in SoA layout.
pub fn generate(spec: &DatasetSpec) -> Result<PointCloud<f64>, CoreError> {
    let mut rng = Xoshiro256pp::from_seed(spec.seed);
    let mut xs = Vec::with_capacity(spec.count);
    let mut ys = Vec::with_capacity(spec.count);
    let mut values = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let x = rng.next_f64() * spec.extent;
        let y = rng.next_f64() * spec.extent;
        xs.push(x);
        ys.push(y);
        values.push(spec.value_model.value(x, y, &mut rng));
    }
    PointCloud::from_columns(xs, ys, values)
}

/// Reinterprets a cloud's locations as query points.
pub fn queries_from_cloud<R: Real>(cloud: &PointCloud<R>) -> Vec<QueryPoint<R>> {
    cloud.iter().map(|s| QueryPoint::new(s.x, s.y)).collect()
}

/// Parses a count that may carry the `K` suffix (1K = 1024).
pub fn parse_count(s: &str) -> Result<usize, String> {
    let trimmed = s.trim();
    let (digits, unit) = match trimmed.strip_suffix(['k', 'K']) {
        Some(head) => (head, 1024usize),
        None => (trimmed, 1usize),
    };
    digits
        .parse::<usize>()
        .map_err(|_| format!("invalid count `{s}`: expected an integer, optionally with a K suffix"))
        .and_then(|n| n.checked_mul(unit).ok_or_else(|| format!("count `{s}` overflows")))
}

/// Formats a count, folding exact multiples of 1024 back to the K form.
pub fn format_count(n: usize) -> String {
    if n > 0 && n.is_multiple_of(1024) {
        format!("{}K", n / 1024)
    } else {
        n.to_string()
    }
}

/// I/O and parsing failures, with the 1-based line for parse errors.
#[derive(Debug)]
pub enum IoError {
    Io(std::io::Error),
    Parse { line: usize, message: String },
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Io(e) => write!(f, "io error: {e}"),
            IoError::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> Self {
        IoError::Io(e)
    }
}

fn parse_field<R: Real>(token: &str, name: &str, line: usize) -> Result<R, IoError> {
    let value: R = token.trim().parse().map_err(|_| IoError::Parse {
        line,
        message: format!("invalid {name}: `{token}`"),
    })?;
    if !value.is_finite() {
        return Err(IoError::Parse { line, message: format!("non-finite {name}: `{token}`") });
    }
    Ok(value)
}

/// Reads a `x,y,value` cloud file into the requested layout.
pub fn read_cloud_csv<R: Real>(path: &Path, layout: Layout) -> Result<PointCloud<R>, IoError> {
    let reader = BufReader::new(File::open(path)?);
    let mut samples: Vec<Sample<R>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if idx == 0 {
            expect_header(&line, &["x", "y", "value"], lineno)?;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (x, y, value) = match (fields.next(), fields.next(), fields.next()) {
            (Some(x), Some(y), Some(value)) => (x, y, value),
            _ => {
                return Err(IoError::Parse {
                    line: lineno,
                    message: format!("expected 3 fields `x,y,value`, got `{line}`"),
                })
            }
        };
        samples.push(Sample::new(
            parse_field(x, "x", lineno)?,
            parse_field(y, "y", lineno)?,
            parse_field(value, "value", lineno)?,
        ));
    }
    PointCloud::from_samples(layout, samples)
        .map_err(|e| IoError::Parse { line: 0, message: e.to_string() })
}

/// Reads a query file (`x,y` header; extra columns ignored).
pub fn read_queries_csv<R: Real>(path: &Path) -> Result<Vec<QueryPoint<R>>, IoError> {
    let reader = BufReader::new(File::open(path)?);
    let mut queries = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if idx == 0 {
            expect_header(&line, &["x", "y"], lineno)?;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (x, y) = match (fields.next(), fields.next()) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(IoError::Parse {
                    line: lineno,
                    message: format!("expected at least 2 fields `x,y`, got `{line}`"),
                })
            }
        };
        queries.push(QueryPoint::new(
            parse_field(x, "x", lineno)?,
            parse_field(y, "y", lineno)?,
        ));
    }
    Ok(queries)
}

fn expect_header(line: &str, prefix: &[&str], lineno: usize) -> Result<(), IoError> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() < prefix.len() || !fields.iter().zip(prefix).all(|(a, b)| a.eq_ignore_ascii_case(b)) {
        return Err(IoError::Parse {
            line: lineno,
            message: format!("expected header starting with `{}`, got `{line}`", prefix.join(",")),
        });
    }
    Ok(())
}

/// Writes a cloud as `x,y,value`.
pub fn write_cloud_csv<R: Real>(path: &Path, cloud: &PointCloud<R>) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "x,y,value")?;
    for s in cloud.iter() {
        writeln!(w, "{},{},{}", s.x, s.y, s.value)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes predictions as `x,y,predicted`, with the adaptive trace columns
/// appended when the result carries traces.
pub fn write_result_csv<R: Real>(
    path: &Path,
    queries: &[QueryPoint<R>],
    result: &PredictionResult<R>,
) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path)?);
    match &result.traces {
        None => {
            writeln!(w, "x,y,predicted")?;
            for (q, v) in queries.iter().zip(result.values.iter()) {
                writeln!(w, "{},{},{}", q.x, q.y, v)?;
            }
        }
        Some(traces) => {
            writeln!(w, "x,y,predicted,r_exp,r_obs,R,mu,alpha")?;
            for ((q, v), t) in queries.iter().zip(result.values.iter()).zip(traces.iter()) {
                let AlphaTrace { r_exp, r_obs, r_stat, mu, alpha } = t;
                writeln!(w, "{},{},{},{r_exp},{r_obs},{r_stat},{mu},{alpha}", q.x, q.y, v)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
