//! Gauss–Jacobi rules and the product rules built from them.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Gauss points per direction for quadrature levels 1..=6.
pub const LEVEL_POINTS: [usize; 6] = [4, 12, 24, 28, 32, 36];

/// Hard cap on the number of nodes in a single rule.
pub const MAX_NODES: usize = 4_000_000;

pub fn level_points(level: u32) -> Result<usize> {
    if !(1..=6).contains(&level) {
        return Err(Error::OutOfRange(format!("quadrature level {level} outside 1..=6")));
    }
    Ok(LEVEL_POINTS[level as usize - 1])
}

/// Nodes and weights of the `m`-point Gauss–Jacobi rule for
/// `∫_{-1}^{1} (1−x)^α (1+x)^β g(x) dx`, via Golub–Welsch.
pub fn gauss_jacobi(m: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1 && alpha > -1.0 && beta > -1.0);
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        jac[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        };
        if k + 1 < m {
            let j = kf + 1.0;
            let s = 2.0 * j + ab;
            let num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
            let den = s * s * (s + 1.0) * (s - 1.0);
            let b = (num / den).sqrt();
            jac[(k, k + 1)] = b;
            jac[(k + 1, k)] = b;
        }
    }
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0);
    let mu0 = ln_mu0.exp();
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `m`-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi(m, 0.0, 0.0);
    let h = 0.5 * (b - a);
    (
        x.iter().map(|t| a + h * (t + 1.0)).collect(),
        w.iter().map(|v| v * h).collect(),
    )
}

/// `m`-point rule for `∫_0^1 r^β g(r) dr`.
pub fn radial_rule(m: usize, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi(m, 0.0, beta);
    let scale = 0.5f64.powf(beta + 1.0);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|v| v * scale).collect(),
    )
}

/// What a rule integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Interior,
    Boundary,
}

/// Nodes (flat, `dim` coordinates each) and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub dim: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub target: Target,
    /// Total polynomial degree integrated exactly on the reference shape.
    pub order_tag: u32,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.dim)
    }

    pub fn total_weight(&self) -> f64 {
        crate::sum::sum(self.weights.iter().copied())
    }

    /// `Σ w_i g(x_i)` with compensated summation in node order.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        crate::sum::sum(self.nodes().zip(&self.weights).map(|(x, w)| w * g(x)))
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_NODES { Err(Error::RuleTooLarge(n)) } else { Ok(()) }
}

/// Product rule on the unit sphere `S^{dim−1}` with `m` Gauss points per
/// polar angle and `2m` equispaced azimuths. Exact through degree `2m − 1`.
///
/// Returned as flat points plus weights summing to `ω_dim`.
pub fn sphere_rule(dim: usize, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("sphere rule needs dim ≥ 2, got {dim}")));
    }
    let count = m.checked_pow(dim as u32 - 2).and_then(|c| c.checked_mul(2 * m)).unwrap_or(usize::MAX);
    check_size(count)?;
    // polar angle j (0-based) carries sin^{dim-2-j}; in u = cos θ the weight
    // is (1−u²)^{(k−1)/2} with k = dim−2−j
    let polar: Vec<(Vec<f64>, Vec<f64>)> = (0..dim - 2)
        .map(|j| {
            let k = (dim - 2 - j) as f64;
            gauss_jacobi(m, (k - 1.0) / 2.0, (k - 1.0) / 2.0)
        })
        .collect();
    let nphi = 2 * m;
    let wphi = 2.0 * PI / nphi as f64;
    let mut points = Vec::with_capacity(count * dim);
    let mut weights = Vec::with_capacity(count);
    let mut idx = vec![0usize; dim - 2];
    let mut x = vec![0.0; dim];
    loop {
        for a in 0..nphi {
            let phi = (a as f64 + 0.5) * wphi;
            let mut s = 1.0;
            let mut w = wphi;
            for (j, &i) in idx.iter().enumerate() {
                let u = polar[j].0[i];
                x[j] = s * u;
                s *= (1.0 - u * u).max(0.0).sqrt();
                w *= polar[j].1[i];
            }
            x[dim - 2] = s * phi.cos();
            x[dim - 1] = s * phi.sin();
            points.extend_from_slice(&x);
            weights.push(w);
        }
        // odometer over polar indices
        let mut d = 0;
        loop {
            if d == idx.len() {
                return Ok((points, weights));
            }
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Unit-ball rule: radial Gauss–Jacobi (`r^{dim−1}`) times [`sphere_rule`].
pub fn ball_rule(dim: usize, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (sp, sw) = sphere_rule(dim, m)?;
    check_size(sw.len().saturating_mul(m))?;
    let (r, rw) = radial_rule(m, dim as f64 - 1.0);
    let mut points = Vec::with_capacity(sp.len() * m);
    let mut weights = Vec::with_capacity(sw.len() * m);
    for (ri, rwi) in r.iter().zip(&rw) {
        for (u, w) in sp.chunks_exact(dim).zip(&sw) {
            points.extend(u.iter().map(|c| c * ri));
            weights.push(w * rwi);
        }
    }
    Ok((points, weights))
}

/// Tensor Gauss–Legendre rule on the box `[lower, upper]`.
pub fn box_rule(lower: &[f64], upper: &[f64], m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = lower.len();
    let count = m.checked_pow(dim as u32).unwrap_or(usize::MAX);
    check_size(count)?;
    let axes: Vec<(Vec<f64>, Vec<f64>)> =
        lower.iter().zip(upper).map(|(&a, &b)| gauss_legendre(m, a, b)).collect();
    let mut points = Vec::with_capacity(count * dim);
    let mut weights = Vec::with_capacity(count);
    let mut idx = vec![0usize; dim];
    'outer: loop {
        let mut w = 1.0;
        for (d, &i) in idx.iter().enumerate() {
            points.push(axes[d].0[i]);
            w *= axes[d].1[i];
        }
        weights.push(w);
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < m {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    Ok((points, weights))
}
