//! The explicit constants of the Carleman-type estimates, in log space.
//!
//! Real-dimension constants (Laplace side) take a [`RealDim`]; the
//! holomorphic and vector-bundle constants take a [`ComplexDim`]. The two
//! meanings of `n` never mix silently.

mod log_number;

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{bessel_first_root, ROOT_NU_MAX};
use crate::special::surface_area;

pub use log_number::{LogNumber, LN_LIMIT};

/// Real dimension of a domain in `ℝ^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RealDim(pub u32);

/// Complex dimension of a domain in `ℂ^n` (real dimension `2n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComplexDim(pub u32);

impl RealDim {
    pub fn get(self) -> u32 {
        self.0
    }

    fn at_least(self, min: u32) -> Result<f64> {
        if self.0 < min {
            return Err(Error::InvalidDimension(format!(
                "real dimension {} below the minimum {min}",
                self.0
            )));
        }
        Ok(self.0 as f64)
    }
}

impl ComplexDim {
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn real(self) -> RealDim {
        RealDim(2 * self.0)
    }

    fn at_least(self, min: u32) -> Result<f64> {
        if self.0 < min {
            return Err(Error::InvalidDimension(format!(
                "complex dimension {} below the minimum {min}",
                self.0
            )));
        }
        Ok(self.0 as f64)
    }
}

fn ln_omega(n: u32) -> Result<f64> {
    Ok(surface_area(n)?.ln())
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(format!("need 1 < p < ∞, got {p}")))
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and ≥ 0, got {v}")))
    }
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Which inequality an exponent triple belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentFamily {
    /// `p* = np/(n−1)`, `p♯ = np/(n+2p−1)`, real dimension `n ≥ 3`.
    Laplace,
    /// `p* = 2np/(2n−1)`, `p♯ = 2np/(2n+p−1)`, complex dimension `n ≥ 2`.
    Section,
    /// `p* = 2np/(2n−1)`, complex dimension `n ≥ 2`; no `p♯`.
    Holomorphic,
}

impl ExponentFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Laplace => "laplace",
            Self::Section => "section",
            Self::Holomorphic => "holomorphic",
        }
    }
}

impl std::str::FromStr for ExponentFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplace" => Ok(Self::Laplace),
            "section" => Ok(Self::Section),
            "holomorphic" | "holo" => Ok(Self::Holomorphic),
            other => Err(Error::Parse { column: 0, message: format!("unknown exponent family `{other}`") }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub family: ExponentFamily,
    pub n: u32,
    pub p: f64,
    pub p_star: f64,
    pub p_sharp: Option<f64>,
    /// False when the Laplace family has `p♯ ≤ 1`.
    pub valid: bool,
}

impl ExponentSet {
    pub fn laplace(n: RealDim, p: f64) -> Result<Self> {
        check_p(p)?;
        let nf = n.at_least(3)?;
        let p_sharp = nf * p / (nf + 2.0 * p - 1.0);
        Ok(Self {
            family: ExponentFamily::Laplace,
            n: n.0,
            p,
            p_star: nf * p / (nf - 1.0),
            p_sharp: Some(p_sharp),
            valid: p_sharp > 1.0,
        })
    }

    pub fn section(n: ComplexDim, p: f64) -> Result<Self> {
        check_p(p)?;
        let nf = n.at_least(2)?;
        Ok(Self {
            family: ExponentFamily::Section,
            n: n.0,
            p,
            p_star: 2.0 * nf * p / (2.0 * nf - 1.0),
            p_sharp: Some(2.0 * nf * p / (2.0 * nf + p - 1.0)),
            valid: true,
        })
    }

    pub fn holomorphic(n: ComplexDim, p: f64) -> Result<Self> {
        check_p(p)?;
        let nf = n.at_least(2)?;
        Ok(Self {
            family: ExponentFamily::Holomorphic,
            n: n.0,
            p,
            p_star: 2.0 * nf * p / (2.0 * nf - 1.0),
            p_sharp: None,
            valid: true,
        })
    }

    /// `p♯`, or an error if the family has none or the triple is invalid.
    pub fn sharp(&self) -> Result<f64> {
        if !self.valid {
            return Err(Error::Domain(format!(
                "{} exponents at n = {}, p = {} have p♯ ≤ 1",
                self.family.name(),
                self.n,
                self.p
            )));
        }
        self.p_sharp
            .ok_or_else(|| Error::Domain(format!("{} family has no p♯", self.family.name())))
    }
}

/// Dispatches on the family; `n` is real for Laplace and complex otherwise.
pub fn exponents(family: ExponentFamily, n: u32, p: f64) -> Result<ExponentSet> {
    match family {
        ExponentFamily::Laplace => ExponentSet::laplace(RealDim(n), p),
        ExponentFamily::Section => ExponentSet::section(ComplexDim(n), p),
        ExponentFamily::Holomorphic => ExponentSet::holomorphic(ComplexDim(n), p),
    }
}

/// Geometric inputs shared by the boundary constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryParams {
    /// Real dimension.
    pub dim: u32,
    pub diam: f64,
    pub volume: f64,
    pub boundary_area: f64,
    pub convex: bool,
    /// Lipschitz constant of the outward normal; `None` for non-C² boundaries.
    pub lc: Option<f64>,
    /// `diam · LC` for non-convex domains, `0` for convex ones.
    pub ld: f64,
}

/// Lower Ricci-type curvature bounds `K`, `K₊`, `K₋`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurvatureParams {
    pub k: f64,
    pub k_plus: f64,
    pub k_minus: f64,
}

impl CurvatureParams {
    pub fn flat() -> Self {
        Self::default()
    }

    pub fn uniform(k: f64) -> Self {
        Self { k, k_plus: k, k_minus: k }
    }

    fn check(&self) -> Result<()> {
        check_nonneg("K", self.k)?;
        check_nonneg("K+", self.k_plus)?;
        check_nonneg("K-", self.k_minus)
    }
}

fn boundary_factor(ld: f64) -> f64 {
    8.0_f64.max(ld)
}

/// Interior Sobolev constant `δ₁` of the Laplace inequality.
pub fn delta1(n: RealDim, p: f64) -> Result<LogNumber> {
    let ps = ExponentSet::laplace(n, p)?.sharp()?;
    let nf = n.0 as f64;
    let ln_inner = nf * 6f64.ln() + ps.ln() - 3f64.ln() - (ps - 1.0).ln();
    let ln = LN_2 - 2.0 / nf * ln_omega(n.0)? - (nf - 2.0).ln()
        + (1.0 - 2.0 * ps / nf) * ln_inner
        + 2.0 * (ps - 1.0) / nf * ((ps - 1.0) / (nf - 2.0 * ps)).ln();
    LogNumber::from_ln(ln)
}

/// `δ₂` with the geometric factor already resolved (`max{8, LD}` or `8`).
fn delta2_with_factor(n: RealDim, p: f64, factor: f64) -> Result<LogNumber> {
    check_p(p)?;
    let nf = n.at_least(3)?;
    let ln_inner = nf * 8f64.ln() + 2.5 * nf.ln() + ln_omega(n.0 - 1)?
        - (nf - 1.0).ln()
        - (2f64.powf(nf) - 4.0).ln()
        - (1.0 + 1.0 / nf) * ln_omega(n.0)?
        + factor.ln();
    let ln = LN_2 - p.ln() / (nf * p) + (1.0 - nf) / (nf * p) * (p - 1.0).ln() + ln_inner / p;
    LogNumber::from_ln(ln)
}

/// Boundary constant `δ₂` of the Laplace inequality on a C² domain.
pub fn delta2(n: RealDim, p: f64, ld: f64) -> Result<LogNumber> {
    check_nonneg("LD", ld)?;
    delta2_with_factor(n, p, boundary_factor(ld))
}

/// `δ₂` for convex domains, where the geometric factor is `8`.
pub fn delta2_convex(n: RealDim, p: f64) -> Result<LogNumber> {
    delta2_with_factor(n, p, 8.0)
}

/// Boundary-to-interior constant of the holomorphic Carleman inequality.
///
/// Evaluated from its own closed form (`64^n (2n)^{5/2} …`), so agreement
/// with `δ₂` in real dimension `2n` is a genuine cross-check.
pub fn carleman_holo_constant(n: ComplexDim, p: f64, ld: f64, convex: bool) -> Result<LogNumber> {
    check_p(p)?;
    check_nonneg("LD", ld)?;
    let nf = n.at_least(2)?;
    let delta = if convex { 8.0 } else { boundary_factor(ld) };
    let m = 2.0 * nf;
    let ln_inner = nf * 64f64.ln() + 2.5 * m.ln() + ln_omega(2 * n.0 - 1)? + delta.ln()
        - (m - 1.0).ln()
        - (4f64.powf(nf) - 4.0).ln()
        - (1.0 + 1.0 / m) * ln_omega(2 * n.0)?;
    let ln = LN_2 - p.ln() / (m * p) + (1.0 - m) / (m * p) * (p - 1.0).ln() + ln_inner / p;
    LogNumber::from_ln(ln)
}

/// Constant of the `L^p → L^{np/(n−pa)}` bound for the Riesz potential `I_a`.
pub fn riesz_constant(n: RealDim, p: f64, a: f64) -> Result<LogNumber> {
    check_p(p)?;
    let nf = n.at_least(2)?;
    if !(a > 0.0 && a < nf) {
        return Err(Error::Domain(format!("Riesz order a = {a} outside (0, {nf})")));
    }
    if nf <= p * a {
        return Err(Error::Domain(format!("n = {nf} ≤ p·a = {}", p * a)));
    }
    let ln_first = nf * 6f64.ln() + p.ln() - (2f64.powf(a) - 1.0).ln() - (p - 1.0).ln();
    let ln = LN_2
        + (1.0 - a / nf) * ln_omega(n.0)?
        + (1.0 - p * a / nf) * ln_first
        + (p - 1.0) * a / nf * ((p - 1.0) / (nf - p * a)).ln();
    LogNumber::from_ln(ln)
}

/// Weak-type `(1, n/(n−1))` bound `n ω_n^{1−1/n}` for the boundary potential.
pub fn weak_type_constant(n: RealDim) -> Result<f64> {
    let nf = n.at_least(2)?;
    Ok(nf * surface_area(n.0)?.powf(1.0 - 1.0 / nf))
}

/// Interpolation constant `2(p−1)^{(1−n)/(np)} p^{−1/(np)} C₁^{1/p} C₂^{1−1/p}`.
///
/// `n` is real here because the interpolation exponent `n/(n−1)` need not
/// come from an integer dimension.
pub fn marcinkiewicz_constant(n: f64, p: f64, c1: LogNumber, c2: LogNumber) -> Result<LogNumber> {
    check_p(p)?;
    if !(n > 1.0 && n.is_finite()) {
        return Err(Error::Domain(format!("interpolation needs n > 1, got {n}")));
    }
    if c1.is_zero() || c2.is_zero() {
        return Err(Error::Domain("interpolation constants must be positive".into()));
    }
    let ln = LN_2 + (1.0 - n) / (n * p) * (p - 1.0).ln() - p.ln() / (n * p)
        + c1.ln() / p
        + (1.0 - 1.0 / p) * c2.ln();
    LogNumber::from_ln(ln)
}

/// Prefactors of the three pointwise Green-function bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenBounds {
    /// `|G(x,y)| ≤ c_i |x−y|^{2−n}`.
    pub c_i: LogNumber,
    /// `|G(x,y)| ≤ c_ii δ(x) |x−y|^{1−n}`.
    pub c_ii: LogNumber,
    /// `|∇_y G(x,y)| ≤ c_iii |x−y|^{1−n}`.
    pub c_iii: LogNumber,
}

pub fn green_bound_constants(n: RealDim, ld: f64) -> Result<GreenBounds> {
    check_nonneg("LD", ld)?;
    let nf = n.at_least(3)?;
    let lw = ln_omega(n.0)?;
    let lm = boundary_factor(ld).ln();
    let ln_pow = (2f64.powf(nf) - 4.0).ln();
    Ok(GreenBounds {
        c_i: LogNumber::from_ln(-(nf - 2.0).ln() - lw)?,
        c_ii: LogNumber::from_ln((2.0 * nf - 2.0) * LN_2 + lm - ln_pow - lw)?,
        c_iii: LogNumber::from_ln(
            nf * 8f64.ln() + 1.5 * nf.ln() + ln_omega(n.0 - 1)? + lm
                - (nf - 1.0).ln()
                - ln_pow
                - 2.0 * lw,
        )?,
    })
}

/// Largest admissible curvature bound `½ j_{n−1}² (ω_{2n−1}/(2n))^{1/n} |Ω|^{−1/n}`.
pub fn curvature_threshold(n: ComplexDim, volume: f64) -> Result<f64> {
    let nf = n.at_least(2)?;
    check_pos("volume", volume)?;
    if nf - 1.0 > ROOT_NU_MAX {
        return Err(Error::OutOfRange(format!("complex dimension {} too large", n.0)));
    }
    let j = bessel_first_root(nf - 1.0)?;
    let ratio = surface_area(2 * n.0 - 1)? / (2.0 * nf);
    Ok(0.5 * j * j * ratio.powf(1.0 / nf) * volume.powf(-1.0 / nf))
}

/// Which of two printed variants of a constant to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantMode {
    /// As printed in the statement of the estimate.
    Statement,
    /// As it comes out of the proof.
    Proof,
}

impl ConstantMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Statement => "statement",
            Self::Proof => "proof",
        }
    }
}

/// Constants of the pointwise Green-form estimates on a domain in `ℂ^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenFormConstants {
    /// `C₁` with denominator `(2n−2)ω_{2n}`.
    pub c1_statement: LogNumber,
    /// `C₁` with denominator `(n−1)ω_{2n}`; twice the statement value.
    pub c1_proof: LogNumber,
    pub c2: LogNumber,
    pub c11: LogNumber,
    pub c3_statement: LogNumber,
    pub c3_proof: LogNumber,
}

impl GreenFormConstants {
    pub fn c1(&self, mode: ConstantMode) -> LogNumber {
        match mode {
            ConstantMode::Statement => self.c1_statement,
            ConstantMode::Proof => self.c1_proof,
        }
    }

    pub fn c3(&self, mode: ConstantMode) -> LogNumber {
        match mode {
            ConstantMode::Statement => self.c3_statement,
            ConstantMode::Proof => self.c3_proof,
        }
    }
}

/// `exp(scale · K^{1/2})` given `ln scale`; zero curvature gives `1`.
fn exp_of_sqrt_k(ln_scale: f64, k: f64) -> Result<LogNumber> {
    if k == 0.0 {
        return Ok(LogNumber::ONE);
    }
    let arg = (ln_scale + 0.5 * k.ln()).exp();
    LogNumber::from_ln(arg)
}

fn k_power(k: f64, e: f64) -> LogNumber {
    if k == 0.0 {
        LogNumber::ZERO
    } else {
        LogNumber::from_ln(e * k.ln()).unwrap_or(LogNumber::ZERO)
    }
}

pub fn green_form_constants(
    n: ComplexDim,
    curv: CurvatureParams,
    diam: f64,
    ld: f64,
) -> Result<GreenFormConstants> {
    let nf = n.at_least(2)?;
    curv.check()?;
    check_pos("diam", diam)?;
    check_nonneg("LD", ld)?;
    let k = curv.k;
    let lw = ln_omega(2 * n.0)?;
    let ln_n_omega = nf.ln() + lw;

    let growth1 = exp_of_sqrt_k(
        (2.0 * nf + 11.0) * LN_2 + ln_n_omega / (nf - 1.0) + (4.0 * nf - 2.0) / (nf - 1.0) * diam.ln(),
        k,
    )?;
    let bracket1 = k_power(k, (nf - 1.0) / 2.0).add(growth1);
    let c1_statement = bracket1 / LogNumber::from_ln((2.0 * nf - 2.0).ln() + lw)?;
    let c1_proof = bracket1 / LogNumber::from_ln((nf - 1.0).ln() + lw)?;

    let growth2 = exp_of_sqrt_k((nf + 8.0) * LN_2 + ln_n_omega / nf + 4.0 * diam.ln(), k)?;
    let bracket2 = k_power(k, nf / 2.0).add(growth2);
    let c2 = bracket2
        * LogNumber::from_ln(
            (4.0 * nf - 2.0) * LN_2 + boundary_factor(ld).ln() - (4f64.powf(nf) - 4.0).ln() - lw,
        )?;

    let kmax = curv.k_plus.max(curv.k_minus);
    let c11 = LogNumber::from_ln(
        (3.0 * nf * nf + 9.0 * nf + 6.0) * LN_2
            + lw
            + nf * (kmax * diam * diam).ln_1p()
            + (k * diam * diam).ln_1p(),
    )?;

    let tail = LogNumber::pow2(2.0 * nf) * (LogNumber::from_f64(32.0)? * c11).sqrt();
    Ok(GreenFormConstants {
        c1_statement,
        c1_proof,
        c2,
        c11,
        c3_statement: c1_statement.max(c2) * tail,
        c3_proof: c1_proof.max(c2) * tail,
    })
}

/// Prefactor inside the `1/p` power of the section Carleman constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionPrefactor {
    /// `2n ω_{2n}^{1−1/(2n)} C₃`, as stated in the theorem.
    TwoN,
    /// `4n ω_{2n}^{1−1/(2n)} C₃`, as obtained in the supporting lemma.
    FourN,
}

/// Growth factor of the maximum principle for sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxPrincipleFactor {
    /// `e^{K·diam}`, as stated.
    Stated,
    /// `e^{K·diam²/2}`, from the weight `e^{K|z|² − K diam²}` used in the proof.
    Derived,
}

impl MaxPrincipleFactor {
    pub fn ln_factor(self, k: f64, diam: f64) -> f64 {
        match self {
            Self::Stated => k * diam,
            Self::Derived => 0.5 * k * diam * diam,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Stated => "exp(K*diam)",
            Self::Derived => "exp(K*diam^2/2)",
        }
    }
}

/// Boundary-to-interior constant for holomorphic sections.
pub fn section_carleman_constant(
    n: ComplexDim,
    p: f64,
    c3: LogNumber,
    k: f64,
    diam: f64,
    prefactor: SectionPrefactor,
    factor: MaxPrincipleFactor,
) -> Result<LogNumber> {
    check_p(p)?;
    let nf = n.at_least(2)?;
    check_nonneg("K", k)?;
    check_pos("diam", diam)?;
    let m = 2.0 * nf;
    let lead = match prefactor {
        SectionPrefactor::TwoN => m,
        SectionPrefactor::FourN => 2.0 * m,
    };
    let ln_inner = lead.ln() + (1.0 - 1.0 / m) * ln_omega(2 * n.0)? + c3.ln();
    let ln = LN_2 + (1.0 - m) / (m * p) * (p - 1.0).ln() - p.ln() / (m * p)
        + ln_inner / p
        + (1.0 - 1.0 / p) * factor.ln_factor(k, diam);
    LogNumber::from_ln(ln)
}

/// Slot in the last factor of the `∂̄`-potential constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialSlot {
    /// `n − 2p`, as printed.
    Printed,
    /// `2n − p`, from the Riesz bound in real dimension `2n` with `a = 1`.
    Rederived,
}

/// `2ω_{2n}^{1−1/(2n)} (36^n p/(p−1))^{1−p/(2n)} ((p−1)/slot)^{(p−1)/(2n)} C₃`.
pub fn dbar_potential_constant(
    n: ComplexDim,
    p: f64,
    c3: LogNumber,
    slot: PotentialSlot,
) -> Result<LogNumber> {
    check_p(p)?;
    let nf = n.at_least(2)?;
    let m = 2.0 * nf;
    let s = match slot {
        PotentialSlot::Printed => nf - 2.0 * p,
        PotentialSlot::Rederived => m - p,
    };
    if s <= 0.0 {
        return Err(Error::Domain(format!("potential slot {s} ≤ 0 at n = {nf}, p = {p}")));
    }
    let ln = LN_2
        + (1.0 - 1.0 / m) * ln_omega(2 * n.0)?
        + (1.0 - p / m) * (nf * 36f64.ln() + p.ln() - (p - 1.0).ln())
        + (p - 1.0) / m * ((p - 1.0) / s).ln()
        + c3.ln();
    LogNumber::from_ln(ln)
}

/// Heat-kernel prefactor `2^{n²+4n+1} n diam^{2n}`.
pub fn heat_bound_constant(n: ComplexDim, diam: f64) -> Result<LogNumber> {
    let nf = n.at_least(2)?;
    check_pos("diam", diam)?;
    LogNumber::from_ln((nf * nf + 4.0 * nf + 1.0) * LN_2 + nf.ln() + 2.0 * nf * diam.ln())
}

/// Lower bound `4πn e^{−1} |Ω|^{−1/n} k^{1/n}` on the `k`-th Dirichlet eigenvalue.
pub fn eigen_lower_bound(n: ComplexDim, volume: f64, k: u64) -> Result<f64> {
    let nf = n.at_least(2)?;
    check_pos("volume", volume)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index starts at 1".into()));
    }
    Ok(4.0 * PI * nf / std::f64::consts::E * volume.powf(-1.0 / nf) * (k as f64).powf(1.0 / nf))
}

/// `2^{n²+2n} λ^n`, bounding `sup|φ|² / ‖φ‖₂²` for an eigenfunction.
pub fn eigenfn_sup_constant(n: ComplexDim, lambda: f64) -> Result<LogNumber> {
    let nf = n.at_least(2)?;
    check_pos("lambda", lambda)?;
    LogNumber::from_ln((nf * nf + 2.0 * nf) * LN_2 + nf * lambda.ln())
}

/// Intermediate constants of the boundary-decay Green-form estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayConstants {
    pub c5: LogNumber,
    pub c6: LogNumber,
    pub c7: LogNumber,
}

pub fn c5_c6_c7(n: ComplexDim, diam: f64, ld: f64) -> Result<DecayConstants> {
    let nf = n.at_least(2)?;
    check_pos("diam", diam)?;
    check_nonneg("LD", ld)?;
    let lm = boundary_factor(ld).ln();
    let lden = (4f64.powf(nf) - 4.0).ln();
    Ok(DecayConstants {
        c5: LogNumber::from_ln((4.0 * nf - 2.0) * LN_2 + lm - lden - ln_omega(2 * n.0)?)?,
        c6: LogNumber::from_ln((nf * nf / 2.0 + 5.0 * nf - 2.0) * LN_2 + lm + diam.ln() - lden)?,
        c7: LogNumber::from_ln(
            (nf * nf + 8.0 * nf + 1.0) * LN_2 + (nf + 1.0) * (nf + 1.0).ln()
                - lden
                - 1.0
                - (nf - 1.0) * nf.ln()
                + lm
                + (2.0 * nf + 1.0) * diam.ln(),
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn val(x: LogNumber) -> f64 {
        x.to_f64().unwrap()
    }

    #[test]
    fn laplace_exponents() {
        let e = ExponentSet::laplace(RealDim(4), 2.0).unwrap();
        assert_relative_eq!(e.p_star, 8.0 / 3.0);
        assert_relative_eq!(e.p_sharp.unwrap(), 8.0 / 7.0);
        assert!(e.valid);
        let edge = ExponentSet::laplace(RealDim(3), 2.0).unwrap();
        assert_eq!(edge.p_sharp, Some(1.0));
        assert!(!edge.valid);
        assert!(delta1(RealDim(3), 2.0).is_err());
    }

    #[test]
    fn section_exponents() {
        let e = exponents(ExponentFamily::Section, 2, 2.0).unwrap();
        assert_relative_eq!(e.p_star, 8.0 / 3.0);
        assert_relative_eq!(e.p_sharp.unwrap(), 8.0 / 5.0);
        assert!(matches!(
            exponents(ExponentFamily::Laplace, 4, 1.0),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn convex_delta2_is_clamped_delta2() {
        for n in 3..=8 {
            for p in [1.2, 1.5, 2.0, 4.0, 10.0] {
                let a = delta2_convex(RealDim(n), p).unwrap();
                let b = delta2(RealDim(n), p, 0.0).unwrap();
                assert_eq!(a.ln().to_bits(), b.ln().to_bits());
                assert_eq!(b, delta2(RealDim(n), p, 8.0).unwrap());
            }
        }
        assert!(delta2(RealDim(4), 2.0, 100.0).unwrap() > delta2(RealDim(4), 2.0, 0.0).unwrap());
    }

    #[test]
    fn delta2_is_an_interpolation_constant() {
        for n in 3..=7 {
            for ld in [0.0, 8.0, 30.0] {
                let c1 = LogNumber::from_f64(weak_type_constant(RealDim(n)).unwrap()).unwrap()
                    * green_bound_constants(RealDim(n), ld).unwrap().c_iii;
                let m = marcinkiewicz_constant(n as f64, 2.5, c1, LogNumber::ONE).unwrap();
                let d = delta2(RealDim(n), 2.5, ld).unwrap();
                assert_relative_eq!(m.ln(), d.ln(), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn delta1_is_riesz_times_green() {
        for n in 4..=7 {
            let ps = ExponentSet::laplace(RealDim(n), 2.0).unwrap().sharp().unwrap();
            let composed = riesz_constant(RealDim(n), ps, 2.0).unwrap()
                * green_bound_constants(RealDim(n), 0.0).unwrap().c_i;
            assert_relative_eq!(composed.ln(), delta1(RealDim(n), 2.0).unwrap().ln(), max_relative = 1e-13);
        }
    }

    #[test]
    fn holomorphic_constant_matches_real_delta2() {
        for n in 2..=5 {
            for p in [1.5, 2.0, 4.0] {
                let h = carleman_holo_constant(ComplexDim(n), p, 50.0, true).unwrap();
                let d = delta2(ComplexDim(n).real(), p, 0.0).unwrap();
                assert_relative_eq!(h.ln(), d.ln(), max_relative = 1e-13);
                let h = carleman_holo_constant(ComplexDim(n), p, 50.0, false).unwrap();
                let d = delta2(ComplexDim(n).real(), p, 50.0).unwrap();
                assert_relative_eq!(h.ln(), d.ln(), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn riesz_domain_errors() {
        assert!(riesz_constant(RealDim(4), 9.0 / 8.0, 2.0).unwrap().ln().is_finite());
        assert!(matches!(riesz_constant(RealDim(4), 2.0, 2.0), Err(Error::Domain(_))));
        assert!(riesz_constant(RealDim(4), 2.0, 4.0).is_err());
        assert!(riesz_constant(RealDim(4), 2.0, 0.0).is_err());
    }

    #[test]
    fn weak_type_values() {
        assert_relative_eq!(weak_type_constant(RealDim(3)).unwrap(), 3.0 * (4.0 * PI).powf(2.0 / 3.0), max_relative = 1e-14);
        assert_relative_eq!(weak_type_constant(RealDim(4)).unwrap(), 4.0 * (2.0 * PI * PI).powf(0.75), max_relative = 1e-14);
        assert_relative_eq!(weak_type_constant(RealDim(2)).unwrap(), 2.0 * (2.0 * PI).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn marcinkiewicz_values() {
        let one = LogNumber::ONE;
        assert_relative_eq!(val(marcinkiewicz_constant(2.0, 2.0, one, one).unwrap()), 2f64.powf(0.75), max_relative = 1e-14);
        let e = LogNumber::from_ln(1.0).unwrap();
        let ratio = val(marcinkiewicz_constant(3.0, 2.0, e, one).unwrap())
            / val(marcinkiewicz_constant(3.0, 2.0, one, one).unwrap());
        assert_relative_eq!(ratio, 0.5f64.exp(), max_relative = 1e-14);
    }

    #[test]
    fn green_bounds_in_three_dimensions() {
        let g = green_bound_constants(RealDim(3), 0.0).unwrap();
        assert_relative_eq!(val(g.c_i), 1.0 / (4.0 * PI), max_relative = 1e-14);
        // 2^4 · 8 / ((2^3 − 4) · 4π)
        assert_relative_eq!(val(g.c_ii), 8.0 / PI, max_relative = 1e-14);
        let gamma = crate::special::gamma_ratio(3).unwrap();
        let w3 = 4.0 * PI;
        // c_iii = 8^n √n γ_n max / ((2^n − 4) ω_n)
        assert_relative_eq!(val(g.c_iii), 512.0 * 3f64.sqrt() * gamma * 8.0 / (4.0 * w3), max_relative = 1e-13);
    }

    #[test]
    fn threshold_scaling() {
        let a = curvature_threshold(ComplexDim(2), 1.0).unwrap();
        let b = curvature_threshold(ComplexDim(2), 2.0).unwrap();
        assert_relative_eq!(a / b, 2f64.sqrt(), max_relative = 1e-13);
        assert!(curvature_threshold(ComplexDim(1), 1.0).is_err());
    }

    #[test]
    fn flat_green_form_constants() {
        let w4 = 2.0 * PI * PI;
        let g = green_form_constants(ComplexDim(2), CurvatureParams::flat(), 2.0, 0.0).unwrap();
        assert_relative_eq!(val(g.c1_statement), 1.0 / (2.0 * w4), max_relative = 1e-14);
        assert_relative_eq!(val(g.c1_proof), 1.0 / w4, max_relative = 1e-14);
        let g = green_form_constants(ComplexDim(2), CurvatureParams::flat(), 1.0, 0.0).unwrap();
        assert_relative_eq!(g.c11.ln(), 36.0 * LN_2 + w4.ln(), max_relative = 1e-14);
        assert!(g.c3_proof > g.c1_proof && g.c3_proof > g.c2);
        assert!(g.c3_proof >= g.c3_statement);
    }

    #[test]
    fn c2_recomposes_from_c5() {
        for n in 2..=6 {
            for ld in [0.0, 20.0] {
                let g = green_form_constants(ComplexDim(n), CurvatureParams::flat(), 1.5, ld).unwrap();
                let c = c5_c6_c7(ComplexDim(n), 1.5, ld).unwrap();
                assert_relative_eq!(g.c2.ln(), c.c5.ln(), max_relative = 1e-13, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn c5_value() {
        let c = c5_c6_c7(ComplexDim(2), 1.0, 0.0).unwrap();
        assert_relative_eq!(val(c.c5), 64.0 * 8.0 / (12.0 * 2.0 * PI * PI), max_relative = 1e-14);
        let c2 = c5_c6_c7(ComplexDim(2), 2.0, 0.0).unwrap();
        assert_relative_eq!(val(c2.c6) / val(c.c6), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn huge_curvature_stays_in_log_space() {
        let g = green_form_constants(ComplexDim(3), CurvatureParams::uniform(4.0), 10.0, 0.0).unwrap();
        assert!(g.c1_proof.ln().is_finite());
        assert!(g.c1_proof.to_f64().is_err());
    }

    #[test]
    fn section_constant_modes() {
        let c3 = LogNumber::from_f64(1e5).unwrap();
        let n = ComplexDim(2);
        for p in [1.5, 2.0, 4.0] {
            let two = section_carleman_constant(n, p, c3, 0.3, 2.0, SectionPrefactor::TwoN, MaxPrincipleFactor::Stated).unwrap();
            let four = section_carleman_constant(n, p, c3, 0.3, 2.0, SectionPrefactor::FourN, MaxPrincipleFactor::Stated).unwrap();
            assert_relative_eq!(four.ln() - two.ln(), LN_2 / p, max_relative = 1e-12);
        }
        let a = section_carleman_constant(n, 2.0, c3, 0.0, 1.0, SectionPrefactor::TwoN, MaxPrincipleFactor::Derived).unwrap();
        let b = section_carleman_constant(n, 2.0, c3, 0.0, 7.0, SectionPrefactor::TwoN, MaxPrincipleFactor::Derived).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn potential_slot_modes() {
        let c3 = LogNumber::ONE;
        assert!(dbar_potential_constant(ComplexDim(2), 1.5, c3, PotentialSlot::Printed).is_err());
        assert!(dbar_potential_constant(ComplexDim(3), 1.2, c3, PotentialSlot::Printed).is_ok());
        assert!(dbar_potential_constant(ComplexDim(2), 1.5, c3, PotentialSlot::Rederived).is_ok());
    }

    #[test]
    fn spectral_constants() {
        assert_relative_eq!(val(heat_bound_constant(ComplexDim(2), 1.0).unwrap()), 16384.0, max_relative = 1e-13);
        assert_relative_eq!(val(heat_bound_constant(ComplexDim(2), 2.0).unwrap()), 16384.0 * 16.0, max_relative = 1e-13);
        assert_relative_eq!(val(heat_bound_constant(ComplexDim(3), 1.0).unwrap()), 3.0 * 2f64.powi(22), max_relative = 1e-13);
        let e = std::f64::consts::E;
        assert_relative_eq!(eigen_lower_bound(ComplexDim(2), 1.0, 1).unwrap(), 8.0 * PI / e, max_relative = 1e-14);
        assert_relative_eq!(eigen_lower_bound(ComplexDim(2), 1.0, 16).unwrap(), 32.0 * PI / e, max_relative = 1e-14);
        assert_relative_eq!(val(eigenfn_sup_constant(ComplexDim(2), 1.0).unwrap()), 256.0, max_relative = 1e-13);
        let l = 4.0 * PI * PI;
        assert_relative_eq!(val(eigenfn_sup_constant(ComplexDim(2), l).unwrap()), 256.0 * l * l, max_relative = 1e-13);
        assert_relative_eq!(val(eigenfn_sup_constant(ComplexDim(3), 1.0).unwrap()), 32768.0, max_relative = 1e-13);
    }
}
