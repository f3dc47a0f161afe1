//! Eigenvalue, eigenfunction and heat-kernel bounds on boxes in `ℝ^{2n}`.

use rand::Rng;

use crate::constants::{eigen_lower_bound, eigenfn_sup_constant, heat_bound_constant, ComplexDim, LogNumber};
use crate::error::{Error, Result};
use crate::kernels::{box_eigenpairs, heat_kernel_box, heat_truncation};
use crate::rng;

use super::report::VerificationReport;
use super::Worst;

fn complex_dim(edges: &[f64]) -> Result<ComplexDim> {
    if !edges.len().is_multiple_of(2) || edges.len() < 4 {
        return Err(Error::InvalidDimension(format!(
            "box dimension {} is not an even dimension ≥ 4",
            edges.len()
        )));
    }
    if edges.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidDomain("box edges must be positive".into()));
    }
    Ok(ComplexDim(edges.len() as u32 / 2))
}

fn edges_text(edges: &[f64]) -> String {
    edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

/// The lower bound `μ_k ≥ 4πn e^{−1}|Ω|^{−1/n}k^{1/n}` and the sup bound
/// `sup|φ|² ≤ 2^{n²+2n}μ^n‖φ‖₂²` over the first `count` box eigenpairs.
pub fn verify_eigen_bounds(edges: &[f64], count: usize) -> Vec<VerificationReport> {
    let base = |id: &str| VerificationReport::new(id).param("edges", edges_text(edges)).param("count", count);
    let outcome = (|| -> Result<(Worst, Worst)> {
        let n = complex_dim(edges)?;
        let volume: f64 = edges.iter().product();
        let pairs = box_eigenpairs(edges, count)?;
        let (mut lower, mut sup) = (Worst::default(), Worst::default());
        for (k, pair) in pairs.iter().enumerate() {
            let bound = eigen_lower_bound(n, volume, k as u64 + 1)?;
            lower.offer(k, bound, LogNumber::from_f64(pair.eigenvalue)?);
            let rhs = eigenfn_sup_constant(n, pair.eigenvalue)?.scale(pair.l2_norm * pair.l2_norm)?;
            sup.offer(k, pair.sup_value * pair.sup_value, rhs);
        }
        Ok((lower, sup))
    })();
    match outcome {
        Ok((lower, sup)) => vec![
            lower.into_report(base("eigenvalue_lower").note("lhs is the lower bound, rhs the exact eigenvalue"), count as u64),
            sup.into_report(base("eigenfunction_sup"), count as u64),
        ],
        Err(e) => vec![base("eigenvalue_lower").fail(&e), base("eigenfunction_sup").fail(&e)],
    }
}

/// `t` values spaced evenly in `log t` over `[lo, hi]`, endpoints exact.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = points - 1;
    (0..points)
        .map(|i| match i {
            0 => lo,
            i if i == last => hi,
            i => (a + (b - a) * i as f64 / last as f64).exp(),
        })
        .collect()
}

/// `H(t,x,y) ≤ 2^{n²+4n+1} n diam^{2n} e^{−μ₁t/2} t^{−n}` on the box
/// `Π[0, L_i]`, over `pairs` random pairs at every `t` in the grid.
///
/// Without an explicit truncation each `t` gets the smallest one meeting
/// the `1e−12` tail bound.
pub fn verify_heat_bound(
    edges: &[f64],
    t_grid: &[f64],
    pairs: usize,
    seed: u64,
    truncation: Option<usize>,
) -> VerificationReport {
    let t_text = t_grid.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
    let mut r = VerificationReport::new("heat_kernel")
        .param("edges", edges_text(edges))
        .param("t", t_text)
        .param("pairs", pairs)
        .param("seed", seed);
    if let Some(k) = truncation {
        r = r.param("truncation", k);
    }
    let outcome = (|| -> Result<(Worst, f64, usize)> {
        let n = complex_dim(edges)?;
        if t_grid.is_empty() || pairs == 0 {
            return Err(Error::EmptyInput("heat check needs times and pairs".into()));
        }
        let diam = edges.iter().map(|l| l * l).sum::<f64>().sqrt();
        let c = heat_bound_constant(n, diam)?;
        let mu1 = box_eigenpairs(edges, 1)?[0].eigenvalue;
        let mut gen = rng::stream(seed, "heat/pairs");
        let pts: Vec<(Vec<f64>, Vec<f64>)> = (0..pairs)
            .map(|_| {
                let x = edges.iter().map(|l| gen.random_range(0.0..*l)).collect();
                let y = edges.iter().map(|l| gen.random_range(0.0..*l)).collect();
                (x, y)
            })
            .collect();
        let nf = n.get() as f64;
        let lmax = edges.iter().cloned().fold(0.0, f64::max);
        let (mut worst, mut tail, mut kmax) = (Worst::default(), 0.0_f64, 0);
        for (ti, &t) in t_grid.iter().enumerate() {
            let k = truncation.unwrap_or_else(|| heat_truncation(edges, t));
            kmax = kmax.max(k);
            let w = k as f64 * std::f64::consts::PI / lmax;
            tail = tail.max((-w * w * t).exp());
            let rhs = c * LogNumber::from_ln(-0.5 * mu1 * t - nf * t.ln())?;
            for (pi, (x, y)) in pts.iter().enumerate() {
                let h = heat_kernel_box(edges, t, x, y, k)?;
                worst.offer(ti * pairs + pi, h.abs(), rhs);
            }
        }
        Ok((worst, tail, kmax))
    })();
    match outcome {
        Ok((worst, tail, kmax)) => {
            let samples = (t_grid.len() * pairs) as u64;
            worst.into_report(r.param("max_truncation", kmax).param("series_tail", tail), samples)
        }
        Err(e) => r.fail(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_eigenvalue_example() {
        let reports = verify_eigen_bounds(&[1.0; 4], 1);
        // 8π/e ≤ 4π²
        assert!((reports[0].lhs - 8.0 * PI / std::f64::consts::E).abs() < 1e-12);
        assert!(reports.iter().all(|r| r.pass));
        // sup φ₁² = 16 against 2⁸(4π²)²
        assert_eq!(reports[1].lhs, 16.0);
        assert!((reports[1].rhs.to_f64().unwrap() - 256.0 * (4.0 * PI * PI).powi(2)).abs() < 1e-6);
    }

    #[test]
    fn odd_dimension_rejected() {
        let reports = verify_eigen_bounds(&[1.0; 3], 5);
        assert!(reports.iter().all(|r| r.error.is_some()));
    }

    #[test]
    fn heat_truncation_errors_surface() {
        let r = verify_heat_bound(&[1.0; 4], &[0.01], 3, 1, Some(2));
        assert!(r.error.as_deref().unwrap().contains("trunc"), "{r:?}");
        let r = verify_heat_bound(&[1.0; 4], &log_grid(0.01, 10.0, 5), 10, 1, None);
        assert!(r.pass, "{r:?}");
        assert!(r.param_num("series_tail").unwrap() < 1e-12);
    }
}
