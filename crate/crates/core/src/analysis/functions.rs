//! Test functions with closed-form Laplacians.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::polynomial::Polynomial;
use crate::descriptor::{self, parse_error};
use crate::error::{Error, Result};
use crate::rng;

/// Real or imaginary part of a holomorphic monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

/// Everything a descriptor can express; rendering and parsing round-trip.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// `poly dim=3 terms=1*x1*x2-0.5*x3^2`
    Poly(Polynomial),
    /// `harmonic dim=3 degree=2 seed=7`: a seeded random homogeneous
    /// polynomial projected onto harmonics, scaled to unit coefficient norm.
    RandomHarmonic { dim: usize, degree: u32, seed: u64 },
    /// `holo dim=2 alpha=3,2 [part=re|im]`; `dim` is the complex dimension.
    Holo { alpha: Vec<u32>, part: Option<Part> },
    /// `radial s=2 [dim=4]`: `|x|^s`.
    Radial { s: f64, dim: Option<usize> },
    /// `cap dim=3 kappa=4 axis=1`: `exp(κ(x_axis − 1))`, peaked at `e_axis`.
    Cap { dim: usize, kappa: f64, axis: usize },
}

type Evaluator = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Poly { p: Polynomial, lap: Polynomial },
    Holo { alpha: Vec<u32>, part: Option<Part> },
    Radial { s: f64 },
    Cap { kappa: f64, axis: usize },
    Custom { f: Evaluator, lap: Evaluator, harmonic: bool },
}

/// A function on `ℝ^dim` (or `ℂ^{dim/2}`) evaluable with its Laplacian.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    dim: Option<usize>,
    spec: Option<FunctionSpec>,
    kind: Kind,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction").field("name", &self.name).field("dim", &self.dim).finish()
    }
}

impl PartialEq for TestFunction {
    fn eq(&self, other: &Self) -> bool {
        self.spec.is_some() && self.spec == other.spec
    }
}

/// `z_j = x_{2j−1} + i x_{2j}`.
fn complex_coords(x: &[f64]) -> impl Iterator<Item = Complex64> + '_ {
    x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1]))
}

fn holo_value(alpha: &[u32], x: &[f64]) -> Complex64 {
    complex_coords(x).zip(alpha).fold(Complex64::new(1.0, 0.0), |acc, (z, &a)| acc * z.powu(a))
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum()
}

impl TestFunction {
    pub fn from_spec(spec: FunctionSpec) -> Result<Self> {
        let (name, dim, kind) = match &spec {
            FunctionSpec::Poly(p) => {
                (spec_string(&spec), Some(p.dim()), Kind::Poly { p: p.clone(), lap: p.laplacian() })
            }
            FunctionSpec::RandomHarmonic { dim, degree, seed } => {
                let p = random_harmonic(*dim, *degree, *seed)?;
                (spec_string(&spec), Some(*dim), Kind::Poly { lap: p.laplacian(), p })
            }
            FunctionSpec::Holo { alpha, part } => {
                if alpha.is_empty() {
                    return Err(Error::InvalidDimension("holomorphic monomial needs ≥ 1 variable".into()));
                }
                (spec_string(&spec), Some(2 * alpha.len()), Kind::Holo { alpha: alpha.clone(), part: *part })
            }
            FunctionSpec::Radial { s, dim } => {
                if !s.is_finite() || *s < 0.0 {
                    return Err(Error::RejectedFunction(format!("radial power s = {s} must be ≥ 0")));
                }
                (spec_string(&spec), *dim, Kind::Radial { s: *s })
            }
            FunctionSpec::Cap { dim, kappa, axis } => {
                if *axis == 0 || axis > dim || !kappa.is_finite() {
                    return Err(Error::RejectedFunction(format!("cap axis {axis} outside 1..{dim} or bad kappa")));
                }
                (spec_string(&spec), Some(*dim), Kind::Cap { kappa: *kappa, axis: axis - 1 })
            }
        };
        Ok(Self { name, dim, spec: Some(spec), kind })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::from_spec(FunctionSpec::Poly(p)).expect("polynomials are always valid")
    }

    pub fn holomorphic_monomial(alpha: Vec<u32>) -> Result<Self> {
        Self::from_spec(FunctionSpec::Holo { alpha, part: None })
    }

    pub fn radial(s: f64) -> Result<Self> {
        Self::from_spec(FunctionSpec::Radial { s, dim: None })
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::polynomial(Polynomial::constant(dim, c))
    }

    /// Arbitrary evaluator with a user-supplied Laplacian. `harmonic` is taken
    /// on trust; verifiers that need it also probe the Laplacian.
    pub fn custom<F, L>(name: &str, dim: usize, f: F, lap: L, harmonic: bool) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
        L: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            dim: Some(dim),
            spec: None,
            kind: Kind::Custom { f: Arc::new(f), lap: Arc::new(lap), harmonic },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `None` for dimension-free functions such as `|x|^s`.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn spec(&self) -> Option<&FunctionSpec> {
        self.spec.as_ref()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.dim {
            Some(d) if d != dim => Err(Error::InvalidDimension(format!(
                "function `{}` lives in dimension {d}, domain in {dim}",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match &self.kind {
            Kind::Poly { p, .. } => p.eval(x).into(),
            Kind::Holo { alpha, part } => {
                let v = holo_value(alpha, x);
                match part {
                    None => v,
                    Some(Part::Re) => v.re.into(),
                    Some(Part::Im) => v.im.into(),
                }
            }
            Kind::Radial { s } => norm2(x).powf(0.5 * s).into(),
            Kind::Cap { kappa, axis } => (kappa * (x[*axis] - 1.0)).exp().into(),
            Kind::Custom { f, .. } => f(x),
        }
    }

    pub fn abs(&self, x: &[f64]) -> f64 {
        self.eval(x).norm()
    }

    pub fn laplacian(&self, x: &[f64]) -> Complex64 {
        match &self.kind {
            Kind::Poly { lap, .. } => lap.eval(x).into(),
            Kind::Holo { .. } => Complex64::new(0.0, 0.0),
            Kind::Radial { s } => {
                let n = x.len() as f64;
                if *s == 0.0 {
                    return 0.0.into();
                }
                (s * (s + n - 2.0) * norm2(x).powf(0.5 * (s - 2.0))).into()
            }
            Kind::Cap { kappa, axis } => (kappa * kappa * (kappa * (x[*axis] - 1.0)).exp()).into(),
            Kind::Custom { lap, .. } => lap(x),
        }
    }

    pub fn is_harmonic(&self) -> bool {
        match &self.kind {
            Kind::Poly { p, .. } => p.is_harmonic(),
            Kind::Holo { .. } => true,
            Kind::Radial { s } => *s == 0.0,
            Kind::Cap { kappa, .. } => *kappa == 0.0,
            Kind::Custom { harmonic, .. } => *harmonic,
        }
    }

    /// Holomorphic in `z_j = x_{2j−1} + i x_{2j}`.
    pub fn is_holomorphic(&self) -> bool {
        match &self.kind {
            Kind::Holo { part, .. } => part.is_none(),
            Kind::Poly { p, .. } => p.degree() == 0,
            Kind::Radial { s } => *s == 0.0,
            Kind::Cap { kappa, .. } => *kappa == 0.0,
            Kind::Custom { .. } => false,
        }
    }

    /// Polynomial form, when the function has one.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.kind {
            Kind::Poly { p, .. } => Some(p),
            _ => None,
        }
    }

    /// Parses any descriptor from [`FunctionSpec`].
    pub fn parse(s: &str) -> Result<Self> {
        Self::from_spec(FunctionSpec::parse(s)?)
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "{}", self.name),
        }
    }
}

fn spec_string(spec: &FunctionSpec) -> String {
    spec.to_string()
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Poly(p) => write!(f, "poly dim={} terms={p}", p.dim()),
            Self::RandomHarmonic { dim, degree, seed } => {
                write!(f, "harmonic dim={dim} degree={degree} seed={seed}")
            }
            Self::Holo { alpha, part } => {
                let a: Vec<String> = alpha.iter().map(|v| v.to_string()).collect();
                write!(f, "holo dim={} alpha={}", alpha.len(), a.join(","))?;
                match part {
                    Some(Part::Re) => write!(f, " part=re"),
                    Some(Part::Im) => write!(f, " part=im"),
                    None => Ok(()),
                }
            }
            Self::Radial { s, dim } => {
                write!(f, "radial s={s}")?;
                if let Some(d) = dim {
                    write!(f, " dim={d}")?;
                }
                Ok(())
            }
            Self::Cap { dim, kappa, axis } => write!(f, "cap dim={dim} kappa={kappa} axis={axis}"),
        }
    }
}

impl FunctionSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let toks = descriptor::tokenize(s);
        let Some(head) = toks.first() else {
            return Err(parse_error(1, "empty function descriptor"));
        };
        let mut dim = None;
        let mut degree = None;
        let mut seed = None;
        let mut alpha = None;
        let mut part = None;
        let mut radial_s = None;
        let mut terms = None;
        let mut kappa = None;
        let mut axis = None;
        for &t in &toks[1..] {
            let (k, v) = descriptor::key_value(t)?;
            match (head.text, k) {
                (_, "dim") => dim = Some((descriptor::integer::<usize>(v)?, v)),
                ("harmonic", "degree") => degree = Some(descriptor::integer::<u32>(v)?),
                ("harmonic", "seed") => seed = Some(descriptor::integer::<u64>(v)?),
                ("holo", "alpha") => alpha = Some((descriptor::integer_list::<u32>(v)?, v)),
                ("holo", "part") => {
                    part = Some(match v.text {
                        "re" => Part::Re,
                        "im" => Part::Im,
                        other => return Err(parse_error(v.column, format!("part must be re or im, found `{other}`"))),
                    })
                }
                ("radial", "s") => radial_s = Some(descriptor::number(v)?),
                ("poly", "terms") => terms = Some(v),
                ("cap", "kappa") => kappa = Some(descriptor::number(v)?),
                ("cap", "axis") => axis = Some((descriptor::integer::<usize>(v)?, v)),
                _ => return Err(parse_error(t.column, format!("unknown key `{k}` for `{}`", head.text))),
            }
        }
        let need = |what: &str| parse_error(head.column, format!("`{}` needs {what}=", head.text));
        let spec = match head.text {
            "poly" => {
                let (d, _) = dim.ok_or_else(|| need("dim"))?;
                let t = terms.ok_or_else(|| need("terms"))?;
                let p = Polynomial::parse(d, t.text).map_err(|e| match e {
                    Error::Parse { column, message } => parse_error(t.column + column - 1, message),
                    other => other,
                })?;
                Self::Poly(p)
            }
            "harmonic" => {
                let (d, dt) = dim.ok_or_else(|| need("dim"))?;
                if d < 2 {
                    return Err(parse_error(dt.column, "harmonic polynomials need dim ≥ 2"));
                }
                Self::RandomHarmonic {
                    dim: d,
                    degree: degree.ok_or_else(|| need("degree"))?,
                    seed: seed.unwrap_or(rng::DEFAULT_SEED),
                }
            }
            "holo" => {
                let (a, at) = alpha.ok_or_else(|| need("alpha"))?;
                if let Some((d, dt)) = dim {
                    if d != a.len() {
                        return Err(parse_error(dt.column, format!("dim={d} but alpha has {} entries", a.len())));
                    }
                }
                if a.is_empty() {
                    return Err(parse_error(at.column, "alpha is empty"));
                }
                Self::Holo { alpha: a, part }
            }
            "cap" => {
                let (d, _) = dim.ok_or_else(|| need("dim"))?;
                let (a, at) = axis.unwrap_or((1, *head));
                if a == 0 || a > d {
                    return Err(parse_error(at.column, format!("axis {a} outside 1..{d}")));
                }
                Self::Cap { dim: d, kappa: kappa.ok_or_else(|| need("kappa"))?, axis: a }
            }
            "radial" => Self::Radial { s: radial_s.ok_or_else(|| need("s"))?, dim: dim.map(|d| d.0) },
            other => return Err(parse_error(head.column, format!("unknown function kind `{other}`"))),
        };
        Ok(spec)
    }
}

/// Homogeneous polynomial of `degree` with seeded Gaussian coefficients,
/// projected onto harmonics and scaled to unit coefficient norm.
pub fn random_harmonic(dim: usize, degree: u32, seed: u64) -> Result<Polynomial> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("harmonic polynomials need dim ≥ 2, got {dim}")));
    }
    let mut r = rng::stream(seed, &format!("harmonic/{dim}/{degree}"));
    let mut p = Polynomial::zero(dim);
    for e in exponents_of_degree(dim, degree) {
        p.add_term(e, rng::standard_normal(&mut r));
    }
    let h = p.harmonic_projection();
    let norm = h.terms().map(|(_, c)| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::RejectedFunction("harmonic projection vanished".into()));
    }
    Ok(h.scale(1.0 / norm))
}

/// All exponent vectors of total degree `degree`, in lexicographic order.
pub fn exponents_of_degree(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(dim, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, degree, &mut Vec::new(), &mut out);
    out
}

/// Twenty functions for the Laplace inequality in `ℝ^dim` (`dim ≥ 3`):
/// a constant, four classical harmonics, six seeded random harmonics of
/// degree 1 to 4, `|x|²`, `|x|⁴` and seven non-harmonic polynomials.
pub fn laplace_suite(dim: usize) -> Result<Vec<TestFunction>> {
    if dim < 3 {
        return Err(Error::InvalidDimension(format!("Laplace suite needs dim ≥ 3, got {dim}")));
    }
    let poly = |s: &str| -> Result<TestFunction> { Ok(TestFunction::polynomial(Polynomial::parse(dim, s)?)) };
    let mut out = vec![
        poly("1")?,
        poly("x1")?,
        poly("x1*x2")?,
        poly("x1^2 - x2^2")?,
        poly("x1^3 - 3*x1*x2^2")?,
    ];
    for (degree, seed) in [(1, 11), (2, 12), (2, 13), (3, 14), (3, 15), (4, 16)] {
        out.push(TestFunction::from_spec(FunctionSpec::RandomHarmonic { dim, degree, seed })?);
    }
    for s in [2.0, 4.0] {
        out.push(TestFunction::from_spec(FunctionSpec::Radial { s, dim: Some(dim) })?);
    }
    for s in [
        "x1^2",
        "x1^4",
        "1 + x1 + x2^2",
        "x1^2*x2",
        "x1^2 - 3*x2^4 + x3",
        "x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3 + x3^2",
        "x1*x2 + x2^2*x3^2",
    ] {
        out.push(poly(s)?);
    }
    Ok(out)
}

/// Twenty nonnegative densities on the sphere in `ℝ^dim` for the weak-type
/// bound: a constant, caps of four widths about three axes, and squares of
/// harmonic polynomials.
pub fn boundary_density_suite(dim: usize) -> Result<Vec<TestFunction>> {
    if dim < 3 {
        return Err(Error::InvalidDimension(format!("density suite needs dim ≥ 3, got {dim}")));
    }
    let poly = |s: &str| -> Result<TestFunction> { Ok(TestFunction::polynomial(Polynomial::parse(dim, s)?)) };
    let mut out = vec![poly("1")?];
    for axis in 1..=3 {
        for kappa in [1.0, 4.0, 16.0, 64.0] {
            out.push(TestFunction::from_spec(FunctionSpec::Cap { dim, kappa, axis })?);
        }
    }
    for s in ["x1^2", "x1^2*x2^2", "1 + 2*x1 + x1^2", "x1^2 + 2*x1*x2 + x2^2", "x3^4", "x1^2*x2^2*x3^2", "1 + x3"] {
        out.push(poly(s)?);
    }
    Ok(out)
}

/// Holomorphic monomials `z^α` on `ℂ^n` with `|α| ≤ max_degree`.
pub fn holomorphic_suite(n: usize, max_degree: u32) -> Result<Vec<TestFunction>> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for alpha in exponents_of_degree(n, d) {
            out.push(TestFunction::holomorphic_monomial(alpha)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_laplacian(f: &TestFunction, x: &[f64]) -> f64 {
        let h = 1e-3;
        let mut acc = 0.0;
        let mut y = x.to_vec();
        for i in 0..x.len() {
            y[i] = x[i] + h;
            let up = f.eval(&y).re;
            y[i] = x[i] - h;
            let down = f.eval(&y).re;
            y[i] = x[i];
            acc += (up - 2.0 * f.eval(x).re + down) / (h * h);
        }
        acc
    }

    #[test]
    fn suite_laplacians_match_finite_differences() {
        let mut r = rng::stream(5, "fd");
        for f in laplace_suite(4).unwrap() {
            for _ in 0..20 {
                let x = rng::uniform_in_ball(&mut r, 4);
                let fd = fd_laplacian(&f, &x);
                let exact = f.laplacian(&x).re;
                assert!((fd - exact).abs() < 1e-4 * (1.0 + exact.abs()), "{f}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn random_harmonics_are_harmonic() {
        let mut r = rng::stream(6, "harm");
        for dim in [3, 4] {
            for degree in 1..=4 {
                let f = TestFunction::from_spec(FunctionSpec::RandomHarmonic { dim, degree, seed: 7 }).unwrap();
                assert!(f.is_harmonic());
                for _ in 0..100 {
                    let x = rng::uniform_in_ball(&mut r, dim);
                    assert!(fd_laplacian(&f, &x).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn suite_shape() {
        let s = laplace_suite(4).unwrap();
        assert_eq!(s.len(), 20);
        assert_eq!(s.iter().filter(|f| f.is_harmonic()).count(), 11);
        assert_eq!(holomorphic_suite(2, 5).unwrap().len(), 21);
    }

    #[test]
    fn holomorphic_monomials_satisfy_cauchy_riemann() {
        let mut r = rng::stream(8, "cr");
        let h = 1e-6;
        for f in holomorphic_suite(2, 5).unwrap() {
            for _ in 0..10 {
                let x = rng::uniform_in_ball(&mut r, 4);
                for j in 0..2 {
                    // ∂/∂z̄_j = ½(∂_x + i∂_y)
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[2 * j] += h;
                    xm[2 * j] -= h;
                    let dx = (f.eval(&xp) - f.eval(&xm)) / (2.0 * h);
                    let mut yp = x.clone();
                    let mut ym = x.clone();
                    yp[2 * j + 1] += h;
                    ym[2 * j + 1] -= h;
                    let dy = (f.eval(&yp) - f.eval(&ym)) / (2.0 * h);
                    let dzbar = 0.5 * (dx + Complex64::i() * dy);
                    assert!(dzbar.norm() < 1e-8, "{f}");
                }
            }
        }
    }

    #[test]
    fn holo_parts_are_harmonic_not_holomorphic() {
        let f = TestFunction::parse("holo dim=2 alpha=1,1 part=re").unwrap();
        assert!(f.is_harmonic() && !f.is_holomorphic());
        // Re(z1 z2) = x1 x3 − x2 x4
        assert_eq!(f.eval(&[1.0, 2.0, 3.0, 4.0]).re, 3.0 - 8.0);
    }

    #[test]
    fn descriptors_roundtrip() {
        for s in [
            "harmonic dim=3 degree=2 seed=7",
            "holo dim=2 alpha=3,2",
            "holo dim=2 alpha=1,1 part=im",
            "radial s=2",
            "radial s=4 dim=3",
            "poly dim=3 terms=1*x1*x2-0.5*x3^2",
            "cap dim=3 kappa=4.5 axis=2",
        ] {
            let spec = FunctionSpec::parse(s).unwrap();
            assert_eq!(FunctionSpec::parse(&spec.to_string()).unwrap(), spec, "{s}");
        }
        assert_eq!(TestFunction::parse("holo alpha=3,2").unwrap().to_string(), "holo dim=2 alpha=3,2");
    }

    #[test]
    fn descriptor_errors() {
        match FunctionSpec::parse("poly dim=2 terms=x1+x5") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 21),
            other => panic!("{other:?}"),
        }
        assert!(FunctionSpec::parse("holo dim=3 alpha=1,2").is_err());
        assert!(FunctionSpec::parse("sine dim=3").is_err());
        assert!(FunctionSpec::parse("harmonic dim=3").is_err());
    }
}
