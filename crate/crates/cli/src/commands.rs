//! The four subcommands. Each writes to the given stream and returns the
//! process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use carleman_core::constants::{
    carleman_holo_constant, curvature_threshold, delta1, delta2, delta2_convex, exponents, green_bound_constants,
    green_form_constants, heat_bound_constant, riesz_constant, ComplexDim, CurvatureParams, ExponentFamily, RealDim,
};
use carleman_core::domains::LcEstimate;
use carleman_core::special::ball_volume;
use carleman_core::verify::{run_checks, verify_holomorphic_carleman};
use carleman_core::{Domain, Result as CoreResult, TestFunction};

use crate::config::{Format, SuiteConfig};
use crate::output::{self, Cell, Table};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// δ₁, δ₂ of the Laplace inequality; `n` is the real dimension.
    Laplace,
    /// Holomorphic Carleman constant; `n` is the complex dimension.
    Holomorphic,
    /// Green-form constants C1, C2, C11, C3; `n` is the complex dimension.
    Section,
    /// Riesz potential constant.
    Riesz,
    /// Pointwise Green-function prefactors.
    Green,
    /// Heat-kernel prefactor; `n` is the complex dimension.
    Heat,
}

/// Parameter axes. Each takes `v`, `v1,v2,…` or `start:stop:step`.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value = "4")]
    pub n: String,
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value = "0")]
    pub ld: String,
    /// Curvature bound `K` (section family).
    #[arg(long, default_value = "0")]
    pub k: String,
    #[arg(long, default_value = "2")]
    pub diam: String,
    /// Riesz order.
    #[arg(long, default_value = "2")]
    pub a: String,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV instead of an aligned table.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub suite: PathBuf,
    /// Overrides the suite's `output`; `-` writes to standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Curvature as fractions of the admissibility threshold (section
    /// family); replaces `--k`.
    #[arg(long)]
    pub k_rel: Option<String>,
    /// Adds the verified ratio for `f = z₁^d` on the unit ball (holomorphic
    /// family).
    #[arg(long)]
    pub degree: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DomainInfoArgs {
    /// Descriptor such as `ball dim=3 r=1`.
    pub descriptor: String,
    /// Boundary pairs for the sampled normal-Lipschitz estimate.
    #[arg(long, default_value_t = 2000)]
    pub pairs: usize,
    #[arg(long, default_value_t = carleman_core::rng::DEFAULT_SEED)]
    pub seed: u64,
}

/// `v`, `a,b,c` or inclusive `start:stop:step`.
pub fn parse_grid(name: &str, spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: String| CliError::Usage(format!("--{name} {spec}: {m}"));
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad(format!("`{s}` is not a number")))
    };
    let values = match spec.split(':').collect::<Vec<_>>().as_slice() {
        [start, stop, step] => {
            let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
            if h <= 0.0 {
                return Err(bad("step must be positive".into()));
            }
            if b < a {
                Vec::new()
            } else {
                let count = ((b - a) / h + 1e-9).floor() as usize + 1;
                (0..count).map(|i| a + i as f64 * h).collect()
            }
        }
        [_] => spec.split(',').filter(|s| !s.trim().is_empty()).map(num).collect::<Result<_, _>>()?,
        _ => return Err(bad("expected v, a,b,c or start:stop:step".into())),
    };
    if values.is_empty() {
        return Err(bad("empty grid".into()));
    }
    Ok(values)
}

fn dim_of(n: f64) -> CoreResult<u32> {
    if n.fract() == 0.0 && (0.0..=1e6).contains(&n) {
        Ok(n as u32)
    } else {
        Err(carleman_core::Error::InvalidDimension(format!("{n} is not a dimension")))
    }
}

/// Volume of the ball of diameter `diam` in `ℂ^n`.
fn ball_volume_c(n: u32, diam: f64) -> CoreResult<f64> {
    Ok(ball_volume(2 * n)? * (diam / 2.0).powi(2 * n as i32))
}

struct Axes {
    names: Vec<&'static str>,
    points: Vec<Vec<f64>>,
}

fn cartesian(axes: &[(&'static str, Vec<f64>)]) -> Axes {
    let mut points = vec![Vec::new()];
    for (_, values) in axes {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    Axes { names: axes.iter().map(|(n, _)| *n).collect(), points }
}

/// The value columns of a family and one row of them.
fn family_columns(family: Family) -> (&'static [&'static str], &'static [(&'static str, bool)]) {
    match family {
        Family::Laplace => (
            &["n", "p", "ld"],
            &[("p_star", false), ("p_sharp", false), ("valid", false), ("delta1", true), ("delta2", true), ("delta2_convex", true)],
        ),
        Family::Holomorphic => (&["n", "p", "ld"], &[("p_star", false), ("constant", true), ("constant_convex", true)]),
        Family::Section => (
            &["n", "k", "diam", "ld"],
            &[
                ("k_threshold", false),
                ("c1_statement", true),
                ("c1_proof", true),
                ("c2", true),
                ("c11", true),
                ("c3_statement", true),
                ("c3_proof", true),
            ],
        ),
        Family::Riesz => (&["n", "p", "a"], &[("q", false), ("constant", true)]),
        Family::Green => (&["n", "ld"], &[("c_i", true), ("c_ii", true), ("c_iii", true)]),
        Family::Heat => (&["n", "diam"], &[("constant", true)]),
    }
}

fn family_row(family: Family, v: &[f64]) -> CoreResult<Vec<Cell>> {
    let n = dim_of(v[0])?;
    Ok(match family {
        Family::Laplace => {
            let (p, ld) = (v[1], v[2]);
            let e = exponents(ExponentFamily::Laplace, n, p)?;
            let d1 = match e.valid {
                true => Cell::Log(delta1(RealDim(n), p)?),
                false => Cell::Empty,
            };
            vec![
                Cell::Num(e.p_star),
                e.p_sharp.map_or(Cell::Empty, Cell::Num),
                Cell::Flag(e.valid),
                d1,
                Cell::Log(delta2(RealDim(n), p, ld)?),
                Cell::Log(delta2_convex(RealDim(n), p)?),
            ]
        }
        Family::Holomorphic => {
            let (p, ld) = (v[1], v[2]);
            let e = exponents(ExponentFamily::Holomorphic, n, p)?;
            vec![
                Cell::Num(e.p_star),
                Cell::Log(carleman_holo_constant(ComplexDim(n), p, ld, false)?),
                Cell::Log(carleman_holo_constant(ComplexDim(n), p, 0.0, true)?),
            ]
        }
        Family::Section => {
            let (k, diam, ld) = (v[1], v[2], v[3]);
            let c = green_form_constants(ComplexDim(n), CurvatureParams::uniform(k), diam, ld)?;
            let threshold = curvature_threshold(ComplexDim(n), ball_volume_c(n, diam)?)?;
            vec![
                Cell::Num(threshold),
                Cell::Log(c.c1_statement),
                Cell::Log(c.c1_proof),
                Cell::Log(c.c2),
                Cell::Log(c.c11),
                Cell::Log(c.c3_statement),
                Cell::Log(c.c3_proof),
            ]
        }
        Family::Riesz => {
            let (p, a) = (v[1], v[2]);
            let c = riesz_constant(RealDim(n), p, a)?;
            let nf = n as f64;
            vec![Cell::Num(nf * p / (nf - p * a)), Cell::Log(c)]
        }
        Family::Green => {
            let c = green_bound_constants(RealDim(n), v[1])?;
            vec![Cell::Log(c.c_i), Cell::Log(c.c_ii), Cell::Log(c.c_iii)]
        }
        Family::Heat => vec![Cell::Log(heat_bound_constant(ComplexDim(n), v[1])?)],
    })
}

fn grid_values(grid: &GridArgs, axis: &str) -> Result<Vec<f64>, CliError> {
    let spec = match axis {
        "n" => &grid.n,
        "p" => &grid.p,
        "ld" => &grid.ld,
        "k" => &grid.k,
        "diam" => &grid.diam,
        "a" => &grid.a,
        other => unreachable!("no axis {other}"),
    };
    parse_grid(axis, spec)
}

/// One row per grid point; invalid points carry their error instead of values.
pub fn constants_table(grid: &GridArgs) -> Result<Table, CliError> {
    let (axes, values) = family_columns(grid.family);
    let named: Vec<(&'static str, Vec<f64>)> =
        axes.iter().map(|a| Ok((*a, grid_values(grid, a)?))).collect::<Result<_, CliError>>()?;
    let points = cartesian(&named);
    let mut cols: Vec<(&str, bool)> = points.names.iter().map(|n| (*n, false)).collect();
    cols.extend_from_slice(values);
    let mut table = Table::new(&cols);
    for point in &points.points {
        let mut cells: Vec<Cell> = point.iter().map(|v| Cell::Num(*v)).collect();
        match family_row(grid.family, point) {
            Ok(row) => {
                cells.extend(row);
                table.push(cells, None);
            }
            Err(e) => {
                cells.extend(std::iter::repeat_n(Cell::Empty, values.len()));
                table.push(cells, Some(e.to_string()));
            }
        }
    }
    Ok(table)
}

pub fn cmd_constants(args: &ConstantsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let table = constants_table(&args.grid)?;
    match args.csv {
        true => table.write_csv(out)?,
        false => table.write_text(out)?,
    }
    Ok(EXIT_OK)
}

/// Grid of constants, optionally with curvature relative to the threshold
/// and verified ratios for `z₁^d`.
pub fn sweep_table(args: &SweepArgs) -> Result<Table, CliError> {
    let family = args.grid.family;
    if args.k_rel.is_some() && family != Family::Section {
        return Err(CliError::Usage("--k-rel applies to the section family".into()));
    }
    if args.degree.is_some() && family != Family::Holomorphic {
        return Err(CliError::Usage("--degree applies to the holomorphic family".into()));
    }
    let Some(k_rel) = args.k_rel.as_deref().map(|s| parse_grid("k-rel", s)).transpose()? else {
        let base = constants_table(&args.grid)?;
        return match args.degree.as_deref() {
            Some(d) => with_ratios(base, &parse_grid("degree", d)?, args.level),
            None => Ok(base),
        };
    };
    // k is a multiple of the threshold, so each point is solved for its own k
    let (_, values) = family_columns(family);
    let named = vec![
        ("n", grid_values(&args.grid, "n")?),
        ("k_rel", k_rel),
        ("diam", grid_values(&args.grid, "diam")?),
        ("ld", grid_values(&args.grid, "ld")?),
    ];
    let points = cartesian(&named);
    let mut cols: Vec<(&str, bool)> = vec![("n", false), ("k_rel", false), ("k", false), ("diam", false), ("ld", false)];
    cols.extend_from_slice(values);
    let mut table = Table::new(&cols);
    for pt in &points.points {
        let (n, rel, diam, ld) = (pt[0], pt[1], pt[2], pt[3]);
        let k = dim_of(n)
            .and_then(|m| curvature_threshold(ComplexDim(m), ball_volume_c(m, diam)?))
            .map(|t| rel * t);
        let mut cells = vec![Cell::Num(n), Cell::Num(rel), k.clone().map_or(Cell::Empty, Cell::Num), Cell::Num(diam), Cell::Num(ld)];
        match k.and_then(|k| family_row(family, &[n, k, diam, ld])) {
            Ok(row) => {
                cells.extend(row);
                table.push(cells, None);
            }
            Err(e) => {
                cells.extend(std::iter::repeat_n(Cell::Empty, values.len()));
                table.push(cells, Some(e.to_string()));
            }
        }
    }
    Ok(table)
}

/// Repeats each row per degree `d` with the verified ratio for `z₁^d` on the
/// unit ball of `ℂ^n`.
fn with_ratios(base: Table, degrees: &[f64], level: u32) -> Result<Table, CliError> {
    let mut cols: Vec<(String, bool)> = base.columns.clone();
    cols.extend([("degree".into(), false), ("ratio".into(), false), ("ratio".into(), true), ("pass".into(), false)]);
    let mut table = Table { columns: cols, rows: Vec::new() };
    let (n_col, p_col) = (base.column("n").expect("n axis"), base.column("p").expect("p axis"));
    for (cells, error) in &base.rows {
        for &d in degrees {
            let mut row = cells.clone();
            row.push(Cell::Num(d));
            let value = |c: &Cell| match c {
                Cell::Num(x) => *x,
                _ => f64::NAN,
            };
            let outcome = (|| -> CoreResult<carleman_core::VerificationReport> {
                let n = dim_of(value(&cells[n_col]))?;
                let deg = dim_of(d)?;
                let mut alpha = vec![0; n as usize];
                if let Some(a) = alpha.first_mut() {
                    *a = deg;
                }
                let f = TestFunction::holomorphic_monomial(alpha)?;
                let r = verify_holomorphic_carleman(&Domain::unit_ball(2 * n as usize), &f, value(&cells[p_col]), level);
                match &r.error {
                    Some(e) => Err(carleman_core::Error::Domain(e.clone())),
                    None => Ok(r),
                }
            })();
            match (error, outcome) {
                (Some(e), _) => {
                    row.extend([Cell::Empty; 3]);
                    table.push(row, Some(e.clone()));
                }
                (None, Ok(r)) => {
                    let ratio = r.ratio_value();
                    let log = match r.ratio {
                        carleman_core::verify::Ratio::LogGap(g) => -g,
                        _ => ratio.log10(),
                    };
                    let log_cell = carleman_core::LogNumber::from_ln(log * std::f64::consts::LN_10)
                        .map_or(Cell::Empty, Cell::Log);
                    row.extend([Cell::Num(ratio), log_cell, Cell::Flag(r.pass)]);
                    table.push(row, None);
                }
                (None, Err(e)) => {
                    row.extend([Cell::Empty; 3]);
                    table.push(row, Some(e.to_string()));
                }
            }
        }
    }
    Ok(table)
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let table = sweep_table(args)?;
    match &args.output {
        Some(path) => {
            let mut file = fs::File::create(path).map_err(|e| CliError::Io { path: path.clone(), message: e.to_string() })?;
            table.write_csv(&mut file)?;
        }
        None => table.write_csv(out)?,
    }
    Ok(EXIT_OK)
}

/// Runs a suite file. Exit 1 on any failing gating report, 2 on config or
/// I/O problems; informational rows never affect the code.
pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<i32, CliError> {
    let text = fs::read_to_string(&args.suite).map_err(|e| CliError::Io { path: args.suite.clone(), message: e.to_string() })?;
    let config = SuiteConfig::parse(&text).map_err(|e| CliError::Config { path: args.suite.clone(), error: e })?;
    let format = match &args.format {
        Some(f) => f.parse::<Format>().map_err(CliError::Usage)?,
        None => config.format,
    };
    let checks = config.expand().map_err(|e| CliError::Usage(e.to_string()))?;
    let reports = run_checks(&checks);
    let mut body = Vec::new();
    match format {
        Format::Json => output::write_json(&reports, &mut body)?,
        Format::Csv => output::write_csv(&reports, &mut body)?,
    }
    match args.output.as_ref().or(config.output.as_ref()) {
        Some(p) if p != Path::new("-") => fs::write(p, &body).map_err(|e| CliError::Io { path: p.clone(), message: e.to_string() })?,
        _ => out.write_all(&body)?,
    }
    let count = |s: &str| reports.iter().filter(|r| r.status() == s).count();
    let gating_failures: Vec<_> = reports.iter().filter(|r| r.is_gating_failure()).collect();
    writeln!(
        log,
        "{} reports: {} pass, {} fail, {} expected-fail, {} error",
        reports.len(),
        count("pass"),
        count("fail"),
        count("expected-fail"),
        count("error")
    )?;
    for r in &gating_failures {
        let why = r.error.clone().unwrap_or_else(|| format!("ratio {:e}", r.ratio_value()));
        writeln!(log, "FAILED {} {:?}: {why}", r.estimate_id, r.params)?;
    }
    Ok(if gating_failures.is_empty() { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_domain_info(args: &DomainInfoArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let domain = Domain::parse(&args.descriptor).map_err(|e| CliError::Usage(format!("{}: {e}", args.descriptor)))?;
    let g = domain.geometry();
    writeln!(out, "domain        {domain}")?;
    writeln!(out, "dim           {}", g.dim)?;
    writeln!(out, "diam          {}", g.diam)?;
    writeln!(out, "volume        {}", g.volume)?;
    writeln!(out, "boundary_area {}", g.boundary_area)?;
    writeln!(out, "convex        {}", g.convex)?;
    match g.lc {
        Some(lc) => writeln!(out, "lc            {lc}")?,
        None => writeln!(out, "lc            none (boundary not C2)")?,
    }
    if domain.geometry_override().is_none() {
        match domain.lc_estimate(args.pairs, args.seed) {
            LcEstimate::Lipschitz(v) => writeln!(out, "lc_sampled    {v} ({} pairs)", args.pairs)?,
            LcEstimate::NotC2 => {}
        }
    }
    writeln!(out, "ld            {}", g.ld)?;
    Ok(EXIT_OK)
}
