//! Suite files.
//!
//! ```text
//! seed = 7
//! level = 3
//! format = json
//! output = reports.json
//!
//! domain ball4 = ball dim=4 r=1
//! function saddle = poly dim=4 terms=x1*x2
//! exponent lap = laplace n=4 p=2
//! check laplace_sobolev domain=ball4 function=saddle,suite exponent=lap
//! ```
//!
//! Check values may be comma lists; a check expands to the product of its
//! list-valued keys. `function=suite` stands for the built-in functions of
//! the verifier. Names may be used before they are declared.

use std::fmt;
use std::path::PathBuf;

use carleman_core::analysis::{boundary_density_suite, holomorphic_suite, laplace_suite, FunctionSpec};
use carleman_core::constants::{exponents, ConstantMode, ExponentFamily};
use carleman_core::descriptor::{self, Token};
use carleman_core::domains::Shape;
use carleman_core::rng::DEFAULT_SEED;
use carleman_core::verify::log_grid;
use carleman_core::{Check, Domain, Error, TestFunction};

/// Reserved function name expanding to the verifier's built-in functions.
pub const SUITE: &str = "suite";

/// Degree bound of the built-in holomorphic monomials.
const HOLOMORPHIC_DEGREE: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown format `{other}`; expected json or csv")),
        }
    }
}

/// A named exponent triple, `laplace n=4 p=2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    pub family: ExponentFamily,
    pub n: u32,
    pub p: f64,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} p={}", self.family.name(), self.n, self.p)
    }
}

impl Exponent {
    fn parse(s: &str) -> carleman_core::Result<Self> {
        let toks = descriptor::tokenize(s);
        let Some(head) = toks.first() else {
            return Err(descriptor::parse_error(1, "empty exponent descriptor"));
        };
        let family: ExponentFamily = head
            .text
            .parse()
            .map_err(|_| descriptor::parse_error(head.column, format!("unknown exponent family `{}`", head.text)))?;
        let (mut n, mut p) = (None, None);
        for &t in &toks[1..] {
            match descriptor::key_value(t)? {
                ("n", v) => n = Some(descriptor::integer::<u32>(v)?),
                ("p", v) => p = Some(descriptor::number(v)?),
                (k, _) => return Err(descriptor::parse_error(t.column, format!("unknown key `{k}` for an exponent"))),
            }
        }
        let need = |k: &str| descriptor::parse_error(head.column, format!("exponent needs {k}="));
        let e = Self { family, n: n.ok_or_else(|| need("n"))?, p: p.ok_or_else(|| need("p"))? };
        exponents(e.family, e.n, e.p).map_err(|err| descriptor::parse_error(head.column, err.to_string()))?;
        Ok(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verifier {
    LaplaceSobolev,
    HolomorphicCarleman,
    Riesz,
    WeakType,
    GreenBounds,
    ScalarGreenForm,
    EigenBounds,
    HeatBound,
    MaxPrinciple,
    GradientInterior,
}

impl Verifier {
    pub const ALL: [Verifier; 10] = [
        Self::LaplaceSobolev,
        Self::HolomorphicCarleman,
        Self::Riesz,
        Self::WeakType,
        Self::GreenBounds,
        Self::ScalarGreenForm,
        Self::EigenBounds,
        Self::HeatBound,
        Self::MaxPrinciple,
        Self::GradientInterior,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::LaplaceSobolev => "laplace_sobolev",
            Self::HolomorphicCarleman => "holomorphic_carleman",
            Self::Riesz => "riesz",
            Self::WeakType => "weak_type",
            Self::GreenBounds => "green_bounds",
            Self::ScalarGreenForm => "scalar_green_form",
            Self::EigenBounds => "eigen_bounds",
            Self::HeatBound => "heat_bound",
            Self::MaxPrinciple => "max_principle",
            Self::GradientInterior => "gradient_interior",
        }
    }

    /// Keys a check line may carry.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Self::LaplaceSobolev | Self::HolomorphicCarleman => &["domain", "function", "p", "exponent", "level"],
            Self::Riesz => &["domain", "a", "p", "trials", "level", "seed"],
            Self::WeakType => &["domain", "function", "level"],
            Self::GreenBounds => &["n", "ld", "pairs", "seed"],
            Self::ScalarGreenForm => &["n", "pairs", "seed", "mode"],
            Self::EigenBounds => &["domain", "count"],
            Self::HeatBound => &["domain", "tmin", "tmax", "points", "pairs", "seed", "truncation"],
            Self::MaxPrinciple => &["domain", "function", "level", "k"],
            Self::GradientInterior => &["n", "function", "level"],
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Self::LaplaceSobolev | Self::HolomorphicCarleman | Self::WeakType | Self::MaxPrinciple => {
                &["domain", "function"]
            }
            Self::Riesz | Self::EigenBounds | Self::HeatBound => &["domain"],
            Self::GreenBounds | Self::ScalarGreenForm => &["n"],
            Self::GradientInterior => &["n", "function"],
        }
    }
}

impl std::str::FromStr for Verifier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|v| v.name()).collect();
            format!("unknown verifier `{s}`; expected one of {}", names.join(", "))
        })
    }
}

/// `check <verifier> key=value …`, kept as written.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub verifier: Verifier,
    pub args: Vec<(String, String)>,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {}", self.verifier.name())?;
        for (k, v) in &self.args {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub level: u32,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub domains: Vec<(String, Domain)>,
    pub functions: Vec<(String, FunctionSpec)>,
    pub exponents: Vec<(String, Exponent)>,
    pub checks: Vec<CheckLine>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            level: 3,
            format: Format::Json,
            output: None,
            domains: Vec::new(),
            functions: Vec::new(),
            exponents: Vec::new(),
            checks: Vec::new(),
        }
    }
}

/// A failed check expansion, pointing at the offending argument when known.
#[derive(Debug)]
struct ArgError {
    arg: Option<usize>,
    message: String,
}

fn arg_err(arg: usize, message: impl Into<String>) -> ArgError {
    ArgError { arg: Some(arg), message: message.into() }
}

/// Keyed access to one check line's arguments.
struct Args<'a> {
    line: &'a CheckLine,
}

impl<'a> Args<'a> {
    fn get(&self, key: &str) -> Option<(usize, &'a str)> {
        self.line.args.iter().position(|(k, _)| k == key).map(|i| (i, self.line.args[i].1.as_str()))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ArgError> {
        match self.get(key) {
            None => Ok(default),
            Some((i, v)) => v.parse().map_err(|_| arg_err(i, format!("`{key}` cannot be `{v}`"))),
        }
    }

    fn optional<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ArgError> {
        match self.get(key) {
            None => Ok(None),
            Some((i, v)) => v.parse().map(Some).map_err(|_| arg_err(i, format!("`{key}` cannot be `{v}`"))),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>, ArgError> {
        match self.get(key) {
            None => Ok(default),
            Some((i, v)) => v
                .split(',')
                .map(|s| s.parse().map_err(|_| arg_err(i, format!("`{key}` cannot contain `{s}`"))))
                .collect(),
        }
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, ArgError> {
        let v: f64 = self.parsed(key, default)?;
        match v.is_finite() {
            true => Ok(v),
            false => Err(arg_err(self.get(key).map_or(0, |g| g.0), format!("`{key}` must be finite"))),
        }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen_settings: Vec<&str> = Vec::new();
        let mut check_lines: Vec<(usize, Vec<usize>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let err = |column: usize, message: String| ConfigError { line: line_no, column, message };
            let toks = descriptor::tokenize(body);
            let head = toks[0];
            if head.text == "check" {
                let Some(v) = toks.get(1) else {
                    return Err(err(head.column, "check needs a verifier name".into()));
                };
                let verifier: Verifier = v.text.parse().map_err(|m| err(v.column, m))?;
                let mut args = Vec::new();
                let mut columns = Vec::new();
                for &t in &toks[2..] {
                    let (k, val) = descriptor::key_value(t).map_err(|e| core_err(line_no, 1, e))?;
                    if !verifier.keys().contains(&k) {
                        return Err(err(
                            t.column,
                            format!("`{}` takes no `{k}`; keys: {}", verifier.name(), verifier.keys().join(", ")),
                        ));
                    }
                    if args.iter().any(|(seen, _): &(String, String)| seen == k) {
                        return Err(err(t.column, format!("duplicate key `{k}`")));
                    }
                    args.push((k.to_string(), val.text.to_string()));
                    columns.push(val.column);
                }
                for key in verifier.required() {
                    if !args.iter().any(|(k, _)| k == key) {
                        return Err(err(head.column, format!("`{}` needs {key}=", verifier.name())));
                    }
                }
                cfg.checks.push(CheckLine { verifier, args });
                check_lines.push((line_no, columns));
                continue;
            }
            let Some(eq) = body.find('=') else {
                return Err(err(head.column, format!("expected `key = value` or a check line, found `{}`", head.text)));
            };
            let left = descriptor::tokenize(&body[..eq]);
            let value = body[eq + 1..].trim();
            let value_col = body[..eq + 1].chars().count() + body[eq + 1..].chars().take_while(|c| c.is_whitespace()).count() + 1;
            if value.is_empty() {
                return Err(err(value_col, "missing value after `=`".into()));
            }
            match (left.as_slice(), head.text) {
                ([key], _) => {
                    if seen_settings.contains(&key.text) {
                        return Err(err(key.column, format!("`{}` set twice", key.text)));
                    }
                    match key.text {
                        "seed" => cfg.seed = value.parse().map_err(|_| err(value_col, format!("seed must be a 64-bit integer, found `{value}`")))?,
                        "level" => {
                            cfg.level = value
                                .parse()
                                .ok()
                                .filter(|l| (1..=6).contains(l))
                                .ok_or_else(|| err(value_col, format!("level must be 1 to 6, found `{value}`")))?
                        }
                        "format" => cfg.format = value.parse().map_err(|m| err(value_col, m))?,
                        "output" => cfg.output = Some(PathBuf::from(value)),
                        other => return Err(err(key.column, format!("unknown setting `{other}`"))),
                    }
                    seen_settings.push(key.text);
                }
                ([kind, name], "domain" | "function" | "exponent") => {
                    check_name(kind.text, name).map_err(|m| err(name.column, m))?;
                    let taken = match kind.text {
                        "domain" => cfg.domains.iter().any(|(n, _)| n == name.text),
                        "function" => cfg.functions.iter().any(|(n, _)| n == name.text),
                        _ => cfg.exponents.iter().any(|(n, _)| n == name.text),
                    };
                    if taken {
                        return Err(err(name.column, format!("{} `{}` declared twice", kind.text, name.text)));
                    }
                    let at = |e: Error| core_err(line_no, value_col, e);
                    match kind.text {
                        "domain" => cfg.domains.push((name.text.to_string(), Domain::parse(value).map_err(at)?)),
                        "function" => {
                            let spec = FunctionSpec::parse(value).map_err(at)?;
                            TestFunction::from_spec(spec.clone()).map_err(|e| core_err(line_no, value_col, e))?;
                            cfg.functions.push((name.text.to_string(), spec))
                        }
                        _ => cfg.exponents.push((name.text.to_string(), Exponent::parse(value).map_err(at)?)),
                    }
                }
                _ => {
                    return Err(err(head.column, format!("cannot read `{}`", body[..eq].trim())));
                }
            }
        }
        for (line, (line_no, columns)) in cfg.checks.iter().zip(&check_lines) {
            cfg.expand_line(line).map_err(|e| ConfigError {
                line: *line_no,
                column: e.arg.map_or(1, |i| columns[i]),
                message: e.message,
            })?;
        }
        Ok(cfg)
    }

    /// The suite file text; parsing it gives back `self`.
    pub fn render(&self) -> String {
        let mut out = format!("seed = {}\nlevel = {}\nformat = {}\n", self.seed, self.level, self.format.name());
        if let Some(p) = &self.output {
            out.push_str(&format!("output = {}\n", p.display()));
        }
        let mut section = |lines: Vec<String>| {
            if !lines.is_empty() {
                out.push('\n');
                for l in lines {
                    out.push_str(&l);
                    out.push('\n');
                }
            }
        };
        section(self.domains.iter().map(|(n, d)| format!("domain {n} = {d}")).collect());
        section(self.functions.iter().map(|(n, f)| format!("function {n} = {f}")).collect());
        section(self.exponents.iter().map(|(n, e)| format!("exponent {n} = {e}")).collect());
        section(self.checks.iter().map(|c| c.to_string()).collect());
        out
    }

    /// Every verifier invocation of the suite, in file order.
    pub fn expand(&self) -> carleman_core::Result<Vec<Check>> {
        let mut out = Vec::new();
        for line in &self.checks {
            let checks = self
                .expand_line(line)
                .map_err(|e| Error::Parse { column: 0, message: format!("`{line}`: {}", e.message) })?;
            out.extend(checks);
        }
        Ok(out)
    }

    fn domain(&self, name: &str) -> Option<&Domain> {
        self.domains.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    fn domains_of(&self, args: &Args) -> Result<Vec<Domain>, ArgError> {
        let (i, v) = args.get("domain").ok_or_else(|| ArgError { arg: None, message: "needs domain=".into() })?;
        v.split(',')
            .map(|n| self.domain(n).cloned().ok_or_else(|| arg_err(i, format!("unknown domain `{n}`"))))
            .collect()
    }

    /// Functions named by `function=`, with `suite` replaced by `builtin(dim)`.
    fn functions_of(
        &self,
        args: &Args,
        dim: usize,
        builtin: &dyn Fn(usize) -> carleman_core::Result<Vec<TestFunction>>,
    ) -> Result<Vec<TestFunction>, ArgError> {
        let (i, v) = args.get("function").ok_or_else(|| ArgError { arg: None, message: "needs function=".into() })?;
        let mut out = Vec::new();
        for name in v.split(',') {
            if name == SUITE {
                out.extend(builtin(dim).map_err(|e| arg_err(i, format!("no built-in functions in dimension {dim}: {e}")))?);
                continue;
            }
            let spec = self
                .functions
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| arg_err(i, format!("unknown function `{name}`")))?;
            let f = TestFunction::from_spec(spec).map_err(|e| arg_err(i, e.to_string()))?;
            f.check_dim(dim).map_err(|e| arg_err(i, format!("`{name}`: {e}")))?;
            out.push(f);
        }
        Ok(out)
    }

    /// `p=` values, or the exponents named by `exponent=` after checking
    /// their family and dimension against the domain.
    fn exponents_of(&self, args: &Args, family: ExponentFamily, dim: usize) -> Result<Vec<f64>, ArgError> {
        match (args.get("p"), args.get("exponent")) {
            (Some(_), Some((i, _))) => Err(arg_err(i, "give either p= or exponent=, not both")),
            (None, None) => Err(ArgError { arg: None, message: "needs p= or exponent=".into() }),
            (Some(_), None) => args.list("p", Vec::new()),
            (None, Some((i, v))) => v
                .split(',')
                .map(|name| {
                    let e = self
                        .exponents
                        .iter()
                        .find(|(n, _)| n == name)
                        .map(|(_, e)| *e)
                        .ok_or_else(|| arg_err(i, format!("unknown exponent `{name}`")))?;
                    if e.family != family {
                        return Err(arg_err(i, format!("`{name}` is a {} exponent", e.family.name())));
                    }
                    let want = match family {
                        ExponentFamily::Laplace => dim,
                        _ => dim / 2,
                    };
                    if e.n as usize != want {
                        return Err(arg_err(i, format!("`{name}` has n={} but the domain needs n={want}", e.n)));
                    }
                    Ok(e.p)
                })
                .collect(),
        }
    }

    fn level_of(&self, args: &Args) -> Result<u32, ArgError> {
        let level = args.parsed("level", self.level)?;
        match (1..=6).contains(&level) {
            true => Ok(level),
            false => Err(arg_err(args.get("level").map_or(0, |g| g.0), format!("level {level} outside 1..=6"))),
        }
    }

    fn box_edges(&self, args: &Args) -> Result<Vec<Vec<f64>>, ArgError> {
        let i = args.get("domain").map_or(0, |g| g.0);
        self.domains_of(args)?
            .iter()
            .map(|d| match d.shape() {
                Shape::Box { lower, upper } => Ok(lower.iter().zip(upper).map(|(a, b)| b - a).collect()),
                _ => Err(arg_err(i, format!("`{d}` is not a box"))),
            })
            .collect()
    }

    fn expand_line(&self, line: &CheckLine) -> Result<Vec<Check>, ArgError> {
        let args = Args { line };
        let seed = args.parsed("seed", self.seed)?;
        let mut out = Vec::new();
        match line.verifier {
            v @ (Verifier::LaplaceSobolev | Verifier::HolomorphicCarleman) => {
                let level = self.level_of(&args)?;
                for domain in self.domains_of(&args)? {
                    let dim = domain.dim();
                    let (family, functions) = if v == Verifier::LaplaceSobolev {
                        (ExponentFamily::Laplace, self.functions_of(&args, dim, &|d| laplace_suite(d))?)
                    } else {
                        let builtin = |d: usize| holomorphic_suite(d / 2, HOLOMORPHIC_DEGREE);
                        (ExponentFamily::Holomorphic, self.functions_of(&args, dim, &builtin)?)
                    };
                    let ps = self.exponents_of(&args, family, dim)?;
                    for function in &functions {
                        for &p in &ps {
                            let (domain, function) = (domain.clone(), function.clone());
                            out.push(match v {
                                Verifier::LaplaceSobolev => Check::LaplaceSobolev { domain, function, p, level },
                                _ => Check::HolomorphicCarleman { domain, function, p, level },
                            });
                        }
                    }
                }
            }
            Verifier::Riesz => {
                let a = args.number("a", 2.0)?;
                let trials = args.parsed("trials", 100)?;
                let level = self.level_of(&args)?;
                let ps: Vec<f64> = args.list("p", vec![9.0 / 8.0])?;
                for domain in self.domains_of(&args)? {
                    for &p in &ps {
                        out.push(Check::Riesz { domain: domain.clone(), a, p, trials, level, seed });
                    }
                }
            }
            Verifier::WeakType => {
                let level = self.level_of(&args)?;
                for domain in self.domains_of(&args)? {
                    for function in self.functions_of(&args, domain.dim(), &|d| boundary_density_suite(d))? {
                        out.push(Check::WeakType { domain: domain.clone(), function, level });
                    }
                }
            }
            Verifier::GreenBounds => {
                let ld: Option<f64> = args.optional("ld")?;
                let pairs = args.parsed("pairs", 10_000)?;
                for n in args.list::<usize>("n", Vec::new())? {
                    out.push(Check::GreenBounds { n, ld, pairs, seed });
                }
            }
            Verifier::ScalarGreenForm => {
                let pairs = args.parsed("pairs", 10_000)?;
                let modes = args.list::<String>("mode", vec!["proof".into()])?;
                let i = args.get("mode").map_or(0, |g| g.0);
                for n in args.list::<u32>("n", Vec::new())? {
                    for m in &modes {
                        let mode = match m.as_str() {
                            "proof" => ConstantMode::Proof,
                            "statement" => ConstantMode::Statement,
                            other => return Err(arg_err(i, format!("mode must be proof or statement, found `{other}`"))),
                        };
                        out.push(Check::ScalarGreenForm { n, pairs, seed, mode });
                    }
                }
            }
            Verifier::EigenBounds => {
                let count = args.parsed("count", 100)?;
                for edges in self.box_edges(&args)? {
                    out.push(Check::EigenBounds { edges, count });
                }
            }
            Verifier::HeatBound => {
                let (lo, hi) = (args.number("tmin", 0.01)?, args.number("tmax", 10.0)?);
                let points: usize = args.parsed("points", 20)?;
                if !(lo > 0.0 && hi >= lo && points > 0) {
                    return Err(ArgError { arg: None, message: "need 0 < tmin ≤ tmax and points ≥ 1".into() });
                }
                let pairs = args.parsed("pairs", 100)?;
                let truncation = args.optional("truncation")?;
                for edges in self.box_edges(&args)? {
                    out.push(Check::HeatBound { edges, t_grid: log_grid(lo, hi, points), pairs, seed, truncation });
                }
            }
            Verifier::MaxPrinciple => {
                let level = self.level_of(&args)?;
                let ks: Vec<f64> = args.list("k", vec![0.0])?;
                for domain in self.domains_of(&args)? {
                    for function in self.functions_of(&args, domain.dim(), &harmonic_suite)? {
                        for &k in &ks {
                            out.push(Check::MaxPrinciple { domain: domain.clone(), function: function.clone(), level, k });
                        }
                    }
                }
            }
            Verifier::GradientInterior => {
                let level = self.level_of(&args)?;
                for n in args.list::<u32>("n", Vec::new())? {
                    for function in self.functions_of(&args, 2 * n as usize, &harmonic_suite)? {
                        out.push(Check::GradientInterior { n, function, level });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The harmonic members of the Laplace suite.
fn harmonic_suite(dim: usize) -> carleman_core::Result<Vec<TestFunction>> {
    Ok(laplace_suite(dim)?.into_iter().filter(|f| f.is_harmonic()).collect())
}

fn check_name(kind: &str, name: &Token) -> Result<(), String> {
    let ok = !name.text.is_empty()
        && name.text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && name.text != SUITE;
    match ok {
        true => Ok(()),
        false => Err(format!("`{}` is not a usable {kind} name", name.text)),
    }
}

fn core_err(line: usize, offset: usize, e: Error) -> ConfigError {
    match e {
        Error::Parse { column, message } => ConfigError { line, column: offset + column.max(1) - 1, message },
        other => ConfigError { line, column: offset.max(1), message: other.to_string() },
    }
}

impl fmt::Display for SuiteConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# comment
seed = 5
level = 2

domain b4 = ball dim=4 r=1   # trailing comment
domain cube = box dim=4
function saddle = poly dim=4 terms=x1*x2
exponent lap = laplace n=4 p=2
check laplace_sobolev domain=b4,cube function=saddle exponent=lap
check green_bounds n=3,4 pairs=10
";

    #[test]
    fn parses_the_sample() {
        let c = SuiteConfig::parse(SAMPLE).unwrap();
        assert_eq!((c.seed, c.level), (5, 2));
        assert_eq!(c.domains.len(), 2);
        assert_eq!(c.checks[1].args, vec![("n".into(), "3,4".into()), ("pairs".into(), "10".into())]);
        assert_eq!(c.expand().unwrap().len(), 4);
        assert_eq!(SuiteConfig::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn suite_token_expands() {
        let c = SuiteConfig::parse("domain b = ball dim=4\ncheck laplace_sobolev domain=b function=suite p=2").unwrap();
        assert_eq!(c.expand().unwrap().len(), 20);
        let c = SuiteConfig::parse("domain b = ball dim=4\ncheck holomorphic_carleman domain=b function=suite p=2,4").unwrap();
        assert_eq!(c.expand().unwrap().len(), 42);
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = SuiteConfig::parse("seed = 1\ndomain b = ball dim=x").unwrap_err();
        assert_eq!((e.line, e.column), (2, 21));
        let e = SuiteConfig::parse("check laplace_sobolev domain=nowhere function=suite p=2").unwrap_err();
        assert_eq!((e.line, e.column), (1, 30));
        assert!(e.message.contains("nowhere"));
        let e = SuiteConfig::parse("domain b = ball dim=4\ncheck laplace_sobolev domain=b function=suite colour=red").unwrap_err();
        assert_eq!((e.line, e.column), (2, 47));
        let e = SuiteConfig::parse("\n\nlevel = 9").unwrap_err();
        assert_eq!((e.line, e.column), (3, 9));
    }

    #[test]
    fn exponent_must_fit_the_domain() {
        let text = "domain b = ball dim=3\nexponent e = laplace n=4 p=2\ncheck laplace_sobolev domain=b function=suite exponent=e";
        let e = SuiteConfig::parse(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("n=4"), "{e}");
    }

    #[test]
    fn forward_references_resolve() {
        let c = SuiteConfig::parse("check eigen_bounds domain=c count=3\ndomain c = box dim=4").unwrap();
        assert_eq!(c.expand().unwrap().len(), 1);
    }
}
