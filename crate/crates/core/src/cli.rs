//! Command-line front end.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::domain::{curve_constants, ConstantEstimate, ConstantsConfig};
use crate::error::Error;
use crate::geometry::{
    boundary_image_length, crosscut_length, extract_coefficients, image_area, level_curve_length,
    radial_length, ArcSet, AreaRegion, PolygonalCurve, QuadratureConfig,
};
use crate::harmonic::HarmonicMap;
use crate::mapspec::{MapSpec, GALLERY};
use crate::theorems::{
    check_prop1, fmt_float, prop2_bound, schwarz_radial_check, selfmap_distortion_check,
    thm1_bound, thm2_bound, thm3_carleson, thm3_hypothesis_fit, thm3_linear_connectivity,
    thm4_ratio, thm5_bound, write_reports_csv, HarnessConfig, InequalityReport, Thm2Options,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(
                Error::Spec(_)
                | Error::InvalidCurve(_)
                | Error::InvalidArcSet(_)
                | Error::InvalidParameter { .. },
            ) => EXIT_USAGE,
            CliError::Core(_) => EXIT_NUMERICAL,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "qcharm",
    version,
    about = "Length and area functionals of harmonic quasiconformal maps of the disk"
)]
pub struct Cli {
    /// Map document (JSON).
    #[arg(long, global = true, conflicts_with = "gallery")]
    pub spec: Option<PathBuf>,
    /// Built-in map by name (see `gallery`); defaults to `identity`.
    #[arg(long, global = true)]
    pub gallery: Option<String>,
    /// Output path; `verify` writes `<out>.json`, `<out>.csv` and `<out>.meta.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for every randomized probe set.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Absolute quadrature tolerance [default: 1e-9].
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance [default: 1e-8].
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Angle grid for suprema over θ [default: 720].
    #[arg(long, global = true)]
    pub theta_grid: Option<usize>,
    /// Radius standing in for the unit circle.
    #[arg(long, global = true)]
    pub rb: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Values and derivatives at points `re,im`.
    Eval {
        #[arg(long = "z", value_parser = parse_complex, allow_hyphen_values = true)]
        z: Vec<Complex64>,
        /// CSV with `z_re` and `z_im` columns (for example an earlier `eval` output).
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Lengths of image curves.
    Length {
        #[command(subcommand)]
        which: LengthKind,
    },
    /// Image area of `|z| < r`, or of the lens around `--lens` when given.
    Area {
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r: Vec<f64>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lens: Option<Complex64>,
    },
    /// Taylor coefficients of `h` and `g`.
    Coeffs {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
    },
    /// Geometric constants of a closed polygon read from FILE (`x y` per line).
    Constants {
        file: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        pairs: usize,
        #[arg(long, default_value_t = 128)]
        centers: usize,
        #[arg(long, default_value_t = 48)]
        radii: usize,
    },
    /// Evaluate both sides of an inequality.
    Verify {
        #[arg(value_enum)]
        theorem: Theorem,
        #[command(flatten)]
        params: VerifyParams,
    },
    /// List the built-in maps.
    Gallery,
}

#[derive(Debug, Subcommand)]
pub enum LengthKind {
    /// `ℓ(f(|z| = r))`
    Level {
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
    },
    /// Length of the image of the radius `[0, r]e^{iθ}`.
    Radial {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0"
        )]
        theta: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
    },
    /// Length of the image of a union of boundary arcs `a,b` (full circle by default).
    Boundary {
        #[arg(long = "arc", value_parser = parse_pair, allow_hyphen_values = true)]
        arcs: Vec<(f64, f64)>,
    },
    /// Length of the image of `{|z − ζ₀| = ρ} ∩ D`.
    Crosscut {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
        zeta0: Complex64,
        #[arg(long, value_delimiter = ',', required = true)]
        rho: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Prop1,
    Thm1,
    Thm2,
    Thm3,
    Prop2,
    Thm5,
    Thm4,
    Schwarz,
    Selfmap,
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyParams {
    /// Declared quasiconformality constant (empirical lower bound when omitted).
    #[arg(long)]
    pub k: Option<f64>,
    /// Comma-separated radii (each check has its own default grid).
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Rescaling radius for `prop2`.
    #[arg(long, default_value_t = 0.5)]
    pub r0: f64,
    /// Measures of arcs centred at angle 0 for `thm1`.
    #[arg(long, value_delimiter = ',')]
    pub measure: Option<Vec<f64>>,
    /// Boundary point for `thm2` and the direction for `thm3`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    pub zeta0: Complex64,
    /// Lavrentiev constant of the image (measured on the image polygon when omitted).
    #[arg(long)]
    pub m_lav: Option<f64>,
    /// Highest coefficient index for `thm5`.
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Number of random probes for `selfmap`.
    #[arg(long, default_value_t = 64)]
    pub probes: usize,
    /// Threshold for the small-radius ratio in `thm4`.
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
    /// Hölder exponent for the `thm3` hypothesis fit.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Normalization for `schwarz` (the value at the largest radius when omitted).
    #[arg(long)]
    pub normalization: Option<f64>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("cannot read {t:?} as a number"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got {s:?}")),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    match s.split_once(',') {
        Some((a, b)) => {
            let z = parse_complex(&format!("{a},{b}"))?;
            Ok((z.re, z.im))
        }
        None => Err(format!("expected `start,end`, got {s:?}")),
    }
}

/// Resolved settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: MapSpec,
    pub harness: HarnessConfig<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let spec = match (&cli.spec, &cli.gallery) {
            (Some(path), _) => MapSpec::parse(&read(path)?)?,
            (None, Some(name)) => MapSpec::gallery(name),
            (None, None) => MapSpec::gallery("identity"),
        };
        let mut quad = QuadratureConfig::default();
        if let Some(x) = cli.abs_tol {
            quad.abs_tol = x;
        }
        if let Some(x) = cli.rel_tol {
            quad.rel_tol = x;
        }
        if let Some(x) = cli.theta_grid {
            quad.theta_grid = x;
        }
        if let Some(x) = cli.rb {
            quad.boundary_radius = x;
        }
        quad.validate()?;
        let harness = HarnessConfig {
            quad,
            seed: cli.seed,
            ..HarnessConfig::default()
        };
        Ok(Self {
            spec,
            harness,
            format: cli.format,
            out: cli.out.clone(),
        })
    }

    pub fn map(&self) -> CliResult<HarmonicMap<f64>> {
        Ok(self.spec.build()?)
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Column-named rows, emitted as CSV or as a JSON array of objects.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Core(Error::Spec(format!("writing CSV: {e}")));
        w.write_record(&self.columns).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(err)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Core(Error::Spec(e.to_string())))
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(pretty(&self.to_json())),
        }
    }
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("JSON values serialize");
    bytes.push(b'\n');
    bytes
}

fn c(re_im: Complex64) -> [Cell; 2] {
    [Cell::Num(re_im.re), Cell::Num(re_im.im)]
}

pub fn cmd_eval(map: &HarmonicMap<f64>, points: &[Complex64]) -> CliResult<Table> {
    let mut t = Table::new(&[
        "z_re",
        "z_im",
        "f_re",
        "f_im",
        "fz_re",
        "fz_im",
        "fzb_re",
        "fzb_im",
        "op_norm",
        "lambda",
        "jacobian",
        "dilatation",
    ]);
    for &z in points {
        let w = map.evaluate(z)?;
        let d = map.wirtinger(z)?;
        let mut row: Vec<Cell> = [z, w, d.fz, d.fzb].into_iter().flat_map(c).collect();
        row.extend([d.op_norm, d.lambda, d.jacobian, d.dilatation()].map(Cell::Num));
        t.push(row);
    }
    Ok(t)
}

/// Reads `z_re`, `z_im` columns from a CSV file.
pub fn read_points(path: &Path) -> CliResult<Vec<Complex64>> {
    let text = read(path)?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name}")))
    };
    let (ire, iim) = (col("z_re")?, col("z_im")?);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(format!("row {}: unreadable coordinate", line + 2)))
        };
        out.push(Complex64::new(num(ire)?, num(iim)?));
    }
    Ok(out)
}

fn unit_point(z: Complex64) -> CliResult<Complex64> {
    if z.norm() == 0.0 {
        return Err(CliError::Usage("boundary point must be nonzero".into()));
    }
    Ok(z / z.norm())
}

pub fn cmd_length(
    map: &HarmonicMap<f64>,
    which: &LengthKind,
    q: &QuadratureConfig<f64>,
) -> CliResult<Table> {
    match which {
        LengthKind::Level { r } => {
            let mut t = Table::new(&["r", "length", "error"]);
            for &r in r {
                let e = level_curve_length(map, r, q)?;
                t.push(vec![Cell::Num(r), Cell::Num(e.value), Cell::Num(e.error)]);
            }
            Ok(t)
        }
        LengthKind::Radial { theta, r } => {
            let mut t = Table::new(&["theta", "r", "length", "error"]);
            for &th in theta {
                for &r in r {
                    let e = radial_length(map, th, r, q)?;
                    t.push(vec![
                        Cell::Num(th),
                        Cell::Num(r),
                        Cell::Num(e.value),
                        Cell::Num(e.error),
                    ]);
                }
            }
            Ok(t)
        }
        LengthKind::Boundary { arcs } => {
            let set = if arcs.is_empty() {
                ArcSet::full()
            } else {
                ArcSet::new(arcs.iter().copied())?
            };
            let b = boundary_image_length(map, &set, q)?;
            let mut t = Table::new(&["measure", "length", "error", "radius"]);
            t.push(vec![
                Cell::Num(set.total_measure()),
                Cell::Num(b.value),
                Cell::Num(b.error),
                Cell::Num(b.radius),
            ]);
            Ok(t)
        }
        LengthKind::Crosscut { zeta0, rho } => {
            let z0 = unit_point(*zeta0)?;
            let mut t = Table::new(&["zeta0_re", "zeta0_im", "rho", "length", "error"]);
            for &rho in rho {
                let e = crosscut_length(map, z0, rho, q)?;
                t.push(vec![
                    Cell::Num(z0.re),
                    Cell::Num(z0.im),
                    Cell::Num(rho),
                    Cell::Num(e.value),
                    Cell::Num(e.error),
                ]);
            }
            Ok(t)
        }
    }
}

pub fn cmd_area(
    map: &HarmonicMap<f64>,
    radii: &[f64],
    lens: Option<Complex64>,
    q: &QuadratureConfig<f64>,
) -> CliResult<Table> {
    let mut t = Table::new(&["region", "radius", "area", "error"]);
    for &r in radii {
        let (name, region) = match lens {
            Some(z0) => (
                "lens",
                AreaRegion::Lens {
                    zeta0: unit_point(z0)?,
                    radius: r,
                },
            ),
            None => ("disk", AreaRegion::Disk { radius: r }),
        };
        let e = image_area(map, region, q)?;
        t.push(vec![
            Cell::Text(name.into()),
            Cell::Num(r),
            Cell::Num(e.value),
            Cell::Num(e.error),
        ]);
    }
    Ok(t)
}

pub fn cmd_coeffs(
    map: &HarmonicMap<f64>,
    n_max: usize,
    rho: f64,
    q: &QuadratureConfig<f64>,
) -> CliResult<Table> {
    let co = extract_coefficients(map, n_max, rho, q)?;
    let mut t = Table::new(&["n", "a_re", "a_im", "b_re", "b_im"]);
    for n in 0..=n_max {
        let mut row = vec![Cell::Int(n)];
        row.extend(c(co.a[n]));
        row.extend(c(co.b[n]));
        t.push(row);
    }
    Ok(t)
}

/// Parses a polygon file: one `x y` vertex per line, `#` comments, closed
/// implicitly. A `# open` line marks the curve as open.
pub fn read_curve(text: &str) -> CliResult<PolygonalCurve<f64>> {
    let mut vertices = Vec::new();
    let mut closed = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if comment.trim() == "open" {
                closed = false;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let nums: Vec<f64> = line
            .split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                CliError::Usage(format!("line {}: expected `x y`, got {line:?}", i + 1))
            })?;
        match nums.as_slice() {
            [x, y] => vertices.push(Complex64::new(*x, *y)),
            _ => {
                return Err(CliError::Usage(format!(
                    "line {}: expected `x y`, got {line:?}",
                    i + 1
                )))
            }
        }
    }
    if closed && vertices.len() > 3 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    Ok(PolygonalCurve::new(vertices, closed)?)
}

pub fn cmd_constants(curve: &PolygonalCurve<f64>, cfg: &ConstantsConfig) -> CliResult<Table> {
    if !curve.is_closed() {
        return Err(Error::InvalidCurve("curve constants need a closed curve".into()).into());
    }
    let rep = curve_constants(curve, cfg)?;
    let mut t = Table::new(&["constant", "value", "probes", "degenerate", "exhaustive"]);
    let row = |name: &str, e: &ConstantEstimate<f64>| {
        vec![
            Cell::Text(name.into()),
            Cell::Num(e.value),
            Cell::Int(e.probes),
            Cell::Int(e.degenerate),
            Cell::Bool(e.exhaustive),
        ]
    };
    t.push(row("lavrentiev", &rep.lavrentiev));
    t.push(row("quasicircle", &rep.quasicircle));
    t.push(row("ahlfors", &rep.ahlfors));
    t.push(row("linear_connectivity", &rep.linear_connectivity));
    let flag = |name: &str, b: bool| {
        vec![
            Cell::Text(name.into()),
            Cell::Num(f64::from(u8::from(b))),
            Cell::Int(0),
            Cell::Int(0),
            Cell::Bool(true),
        ]
    };
    t.push(flag("arc_bounds_consistent", rep.arc_bounds_consistent));
    t.push(flag("finiteness_consistent", rep.finiteness_consistent));
    Ok(t)
}

fn steps(from: usize, to: usize, denom: f64) -> Vec<f64> {
    (from..=to).map(|k| k as f64 / denom).collect()
}

pub fn cmd_verify(
    map: &HarmonicMap<f64>,
    theorem: Theorem,
    p: &VerifyParams,
    cfg: &HarnessConfig<f64>,
) -> CliResult<Vec<InequalityReport>> {
    let radii = |default: Vec<f64>| p.radii.clone().unwrap_or(default);
    let k = p.k;
    let reports = match theorem {
        Theorem::Prop1 => check_prop1(map, k, &radii(steps(1, 9, 10.0)), cfg)?,
        Theorem::Thm1 => {
            let measures = p
                .measure
                .clone()
                .unwrap_or_else(|| vec![std::f64::consts::PI]);
            let mut out = Vec::new();
            for m in measures {
                out.push(thm1_bound(map, &ArcSet::centered(0.0, m)?, cfg)?);
            }
            out
        }
        Theorem::Thm2 => {
            let opts = Thm2Options {
                zeta0: unit_point(p.zeta0)?,
                k,
                m_lav: p.m_lav,
                radii: radii(vec![0.05, 0.1, 0.5, 1.0, 2.0]),
            };
            thm2_bound(map, &opts, cfg)?
        }
        Theorem::Thm3 => {
            let limit = map.interior_limit().min(0.95);
            let probes: Vec<Complex64> = [0.25, 0.5, 0.75, 0.9]
                .iter()
                .flat_map(|&r| {
                    (0..16).map(move |j| {
                        Complex64::from_polar(r, std::f64::consts::PI * j as f64 / 8.0)
                    })
                })
                .collect();
            let (_, mut out) = thm3_carleson(map, &probes, cfg)?;
            let grid = radii((0..20).map(|k| limit * k as f64 / 20.0).collect());
            let (_, fit) = thm3_hypothesis_fit(map, unit_point(p.zeta0)?, p.delta, &grid)?;
            out.push(fit);
            out.push(thm3_linear_connectivity(map, &Default::default(), cfg)?);
            out
        }
        Theorem::Prop2 => prop2_bound(map, p.r0, cfg)?,
        Theorem::Thm5 => thm5_bound(map, k, p.n_max, cfg)?,
        Theorem::Thm4 => thm4_ratio(
            map,
            k,
            &radii(vec![0.05, 0.1, 0.2, 0.4, 0.6]),
            p.threshold,
            cfg,
        )?,
        Theorem::Schwarz => {
            let big_r = map.interior_limit();
            let grid = radii((1..=64).map(|k| big_r * k as f64 / 64.0).collect());
            schwarz_radial_check(map, p.normalization, &grid, cfg)?
        }
        Theorem::Selfmap => selfmap_distortion_check(map, k, p.probes, cfg)?,
    };
    Ok(reports)
}

pub fn reports_json(reports: &[InequalityReport]) -> Vec<u8> {
    pretty(&serde_json::to_value(reports).expect("reports serialize"))
}

pub fn reports_csv(reports: &[InequalityReport]) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    write_reports_csv(reports, &mut buf)?;
    Ok(buf)
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn emit(cfg: &RunConfig, bytes: &[u8], stdout: &mut dyn Write) -> CliResult<()> {
    match &cfg.out {
        Some(path) => write_file(path, bytes),
        None => stdout.write_all(bytes).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

/// Runs a parsed command; returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    if let Command::Gallery = cli.command {
        let mut t = Table::new(&["name", "description"]);
        for (name, desc) in GALLERY {
            t.push(vec![Cell::Text(name.into()), Cell::Text(desc.into())]);
        }
        emit_table(cli, &t, stdout)?;
        return Ok(EXIT_OK);
    }
    let cfg = RunConfig::from_cli(cli)?;
    let q = &cfg.harness.quad;
    let table = match &cli.command {
        Command::Gallery => unreachable!("handled above"),
        Command::Constants {
            file,
            pairs,
            centers,
            radii,
        } => {
            let curve = read_curve(&read(file)?)?;
            let ccfg = ConstantsConfig {
                pairs: *pairs,
                centers: *centers,
                radii: *radii,
                seed: cli.seed,
                ..ConstantsConfig::default()
            };
            cmd_constants(&curve, &ccfg)?
        }
        Command::Eval { z, points } => {
            let mut pts = z.clone();
            if let Some(path) = points {
                pts.extend(read_points(path)?);
            }
            if pts.is_empty() {
                return Err(CliError::Usage("eval needs --z or --points".into()));
            }
            cmd_eval(&cfg.map()?, &pts)?
        }
        Command::Length { which } => cmd_length(&cfg.map()?, which, q)?,
        Command::Area { r, lens } => cmd_area(&cfg.map()?, r, *lens, q)?,
        Command::Coeffs { n_max, rho } => cmd_coeffs(&cfg.map()?, *n_max, *rho, q)?,
        Command::Verify { theorem, params } => {
            let reports = cmd_verify(&cfg.map()?, *theorem, params, &cfg.harness)?;
            let json = reports_json(&reports);
            let csv = reports_csv(&reports)?;
            match &cfg.out {
                Some(base) => {
                    write_file(&with_suffix(base, ".json"), &json)?;
                    write_file(&with_suffix(base, ".csv"), &csv)?;
                    let stamp = SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0);
                    let meta = json!({
                        "timestamp": stamp,
                        "version": env!("CARGO_PKG_VERSION"),
                        "theorem": format!("{theorem:?}").to_lowercase(),
                        "spec": cfg.spec,
                        "seed": cli.seed,
                    });
                    write_file(&with_suffix(base, ".meta.json"), &pretty(&meta))?;
                }
                None => emit(
                    &cfg,
                    if cfg.format == Format::Json {
                        &json
                    } else {
                        &csv
                    },
                    stdout,
                )?,
            }
            let failed = reports.iter().filter(|r| !r.passes()).count();
            eprintln!("{} reports, {} violations", reports.len(), failed);
            return Ok(if failed > 0 { EXIT_VIOLATION } else { EXIT_OK });
        }
    };
    emit(&cfg, &table.render(cfg.format)?, stdout)?;
    Ok(EXIT_OK)
}

fn emit_table(cli: &Cli, t: &Table, stdout: &mut dyn Write) -> CliResult<()> {
    let bytes = t.render(cli.format)?;
    match &cli.out {
        Some(path) => write_file(path, &bytes),
        None => stdout.write_all(&bytes).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

/// Parses `args` and runs; usage errors exit with 1 rather than clap's 2.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut out = io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
