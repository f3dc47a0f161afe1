//! Special functions behind the constants: sphere areas, Gamma, Bessel `J_ν`
//! and its first positive zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sum::KahanSum;

/// Largest `n` for which `Γ(n/2)` is finite in `f64`.
const MAX_HALF_GAMMA_ARG: u32 = 340;

/// `Γ(m/2)` for a positive integer `m`, built exactly from `Γ(1) = 1`,
/// `Γ(1/2) = √π` and `Γ(x + 1) = xΓ(x)`.
pub fn gamma_half(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange("Γ(0) is a pole".into()));
    }
    if m > MAX_HALF_GAMMA_ARG {
        return Err(Error::OutOfRange(format!("Γ({m}/2) overflows")));
    }
    let (mut value, mut k) = if m.is_multiple_of(2) { (1.0, 2) } else { (PI.sqrt(), 1) };
    while k < m {
        value *= k as f64 / 2.0;
        k += 2;
    }
    Ok(value)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Integer and half-integer arguments go through the exact recursion; other
/// arguments use the Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let twice = 2.0 * x;
    if twice.fract() == 0.0 && twice <= MAX_HALF_GAMMA_ARG as f64 {
        if let Ok(g) = gamma_half(twice as u32) {
            return g.ln();
        }
    }
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Area `ω_n = 2π^{n/2}/Γ(n/2)` of the unit sphere `S^{n-1} ⊂ ℝ^n`.
pub fn surface_area(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "sphere area needs n ≥ 2, got {n}"
        )));
    }
    Ok(2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)?)
}

/// Volume of the unit ball in `ℝ^n`, `ω_n / n`.
pub fn ball_volume(n: u32) -> Result<f64> {
    Ok(surface_area(n)? / n as f64)
}

/// `γ_n = n ω_{n-1} / ((n-1) ω_n)`, the harmonic gradient-estimate ratio.
pub fn gamma_ratio(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!(
            "gradient ratio needs n ≥ 3, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(nf * surface_area(n - 1)? / ((nf - 1.0) * surface_area(n)?))
}

/// Upper end of the supported argument range of [`bessel_j`].
pub const BESSEL_X_MAX: f64 = 50.0;
/// Largest order accepted by [`bessel_j`].
pub const BESSEL_NU_MAX: f64 = 50.0;
/// Largest order accepted by [`bessel_first_root`].
pub const ROOT_NU_MAX: f64 = 20.0;

/// Below this argument the power series is summed directly.
const SERIES_X_MAX: f64 = 12.0;

/// Bessel function of the first kind `J_ν(x)` for `ν ∈ [0, 50]`, `x ∈ [0, 50]`.
///
/// Uses the compensated power series up to `x = 12` and Miller's backward
/// recurrence, normalised by the Neumann sum
/// `(x/2)^ν = Σ_k (ν+2k) Γ(ν+k)/k! · J_{ν+2k}(x)`, beyond it.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(0.0..=BESSEL_NU_MAX).contains(&nu) || !nu.is_finite() {
        return Err(Error::OutOfRange(format!(
            "Bessel order {nu} outside [0, {BESSEL_NU_MAX}]"
        )));
    }
    if !(0.0..=BESSEL_X_MAX).contains(&x) || !x.is_finite() {
        return Err(Error::OutOfRange(format!(
            "Bessel argument {x} outside [0, {BESSEL_X_MAX}]"
        )));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_X_MAX {
        Ok(bessel_j_series(nu, x))
    } else {
        Ok(bessel_j_miller(nu, x))
    }
}

fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    let mut acc = KahanSum::new();
    acc.add(term);
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + nu));
        acc.add(term);
        if k > half && term.abs() <= 1e-18 * acc.value().abs().max(1e-300) {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    acc.value()
}

fn bessel_j_miller(nu: f64, x: f64) -> f64 {
    const RESCALE: f64 = 1e250;
    // Even number of steps above ν so the Neumann sum sees J_{ν+2k} only.
    let mut top = (x + 60.0).ceil() as usize;
    if top % 2 == 1 {
        top += 1;
    }
    let mut j_above = 0.0_f64; // J_{μ+1}
    let mut j_here = 1e-300_f64; // J_μ, μ = ν + top
    let mut norm = 0.0_f64;
    // d_k = (ν+2k)Γ(ν+k)/(k! Γ(ν+1)), evaluated top-down from the closed form.
    let neumann = |k: usize| -> f64 {
        if k == 0 {
            1.0
        } else {
            let kf = k as f64;
            ((nu + 2.0 * kf).ln() + ln_gamma(nu + kf) - ln_gamma(kf + 1.0) - ln_gamma(nu + 1.0))
                .exp()
        }
    };
    for m in (0..top).rev() {
        let mu = nu + (m + 1) as f64;
        let j_below = 2.0 * mu / x * j_here - j_above;
        j_above = j_here;
        j_here = j_below;
        if m.is_multiple_of(2) {
            norm += neumann(m / 2) * j_here;
        }
        if j_here.abs() > RESCALE {
            j_here /= RESCALE;
            j_above /= RESCALE;
            norm /= RESCALE;
        }
    }
    let target = (nu * (0.5 * x).ln() - ln_gamma(nu + 1.0)).exp();
    j_here * target / norm
}

/// First positive zero `j_ν` of `J_ν` for `ν ∈ [0, 20]`, to `1e-10` absolute.
///
/// Brackets the first sign change on a 0.05-spaced grid starting at `ν`
/// (where `J_ν` is still positive), then bisects.
pub fn bessel_first_root(nu: f64) -> Result<f64> {
    if !(0.0..=ROOT_NU_MAX).contains(&nu) || !nu.is_finite() {
        return Err(Error::OutOfRange(format!(
            "root order {nu} outside [0, {ROOT_NU_MAX}]"
        )));
    }
    const STEP: f64 = 0.05;
    let mut lo = nu.max(STEP);
    let mut f_lo = bessel_j(nu, lo)?;
    debug_assert!(f_lo > 0.0);
    let mut hi = lo + STEP;
    let mut f_hi = bessel_j(nu, hi)?;
    while f_hi > 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi += STEP;
        if hi > BESSEL_X_MAX {
            return Err(Error::OutOfRange(format!("no zero of J_{nu} below {BESSEL_X_MAX}")));
        }
        f_hi = bessel_j(nu, hi)?;
    }
    let _ = f_lo;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if bessel_j(nu, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
