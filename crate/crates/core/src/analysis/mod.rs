//! Norms and integral operators evaluated by quadrature.

pub mod functions;
pub mod polynomial;

use rayon::prelude::*;

use crate::domains::{Domain, QuadratureRule, Target};
use crate::error::{Error, Result};
use crate::special::surface_area;
use crate::sum;

pub use functions::{boundary_density_suite, holomorphic_suite, laplace_suite, FunctionSpec, Part, TestFunction};
pub use polynomial::Polynomial;

/// Values of `g` at every node, evaluated in parallel, returned in node order.
pub fn sample<G>(rule: &QuadratureRule, g: G) -> Vec<f64>
where
    G: Fn(&[f64]) -> f64 + Sync + Send,
{
    rule.points.par_chunks_exact(rule.dim).map(g).collect()
}

/// `(Σ w_i |v_i|^p)^{1/p}` over precomputed node values.
pub fn lp_norm_values(values: &[f64], weights: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!("L^p norm needs 1 ≤ p < ∞, got {p}")));
    }
    if values.len() != weights.len() {
        return Err(Error::InvalidDimension("values and weights differ in length".into()));
    }
    // scale by the max to keep |v|^p representable
    let m = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return Ok(0.0);
    }
    let s = sum::sum(values.iter().zip(weights).map(|(v, w)| w * (v.abs() / m).powf(p)));
    Ok(m * s.powf(1.0 / p))
}

/// `‖f‖_{L^p}` over the measure carried by `rule` (volume or surface).
pub fn lp_norm(f: &TestFunction, rule: &QuadratureRule, p: f64) -> Result<f64> {
    f.check_dim(rule.dim)?;
    let values = sample(rule, |x| f.abs(x));
    lp_norm_values(&values, &rule.weights, p)
}

/// `sup_t t·μ(|f| > t)^{1/p}` for a discrete measure.
///
/// Between consecutive sample levels the distribution function is constant,
/// so the supremum is approached as `t` rises to each level `v_k`:
/// the norm is `max_k v_k (Σ_{|f_j| ≥ v_k} w_j)^{1/p}`.
pub fn weak_lp_norm(samples: &[(f64, f64)], p: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("weak L^p norm of no samples".into()));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!("weak L^p needs 1 ≤ p < ∞, got {p}")));
    }
    if samples.iter().any(|(_, w)| !(*w > 0.0)) {
        return Err(Error::Domain("weak L^p weights must be positive".into()));
    }
    let mut s: Vec<(f64, f64)> = samples.iter().map(|(v, w)| (v.abs(), *w)).collect();
    s.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = 0.0_f64;
    let mut mass = sum::KahanSum::new();
    let mut i = 0;
    while i < s.len() {
        let level = s[i].0;
        while i < s.len() && s[i].0 == level {
            mass.add(s[i].1);
            i += 1;
        }
        if level == 0.0 {
            break;
        }
        best = best.max(level * mass.value().powf(1.0 / p));
    }
    Ok(best)
}

/// Resolution of the `x`-centred polar rule used for weakly singular integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarResolution {
    pub angular_level: u32,
    pub radial_points: usize,
}

impl PolarResolution {
    pub const fn new(angular_level: u32, radial_points: usize) -> Self {
        Self { angular_level, radial_points }
    }
}

impl Default for PolarResolution {
    fn default() -> Self {
        Self::new(4, 16)
    }
}

/// Riesz potential `I_a f(x) = ∫_Ω |f(y)| |x−y|^{a−n} dy`.
///
/// Integrated in polar coordinates about `x`, where the kernel times the
/// volume element is `r^{a−1}`; Gauss–Jacobi absorbs that weight, so the
/// singularity costs nothing.
pub fn riesz_potential<F>(f: F, domain: &Domain, a: f64, x: &[f64], res: PolarResolution) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let n = domain.dim() as f64;
    if !(a > 0.0 && a < n) {
        return Err(Error::Domain(format!("Riesz order a = {a} outside (0, {n})")));
    }
    let rule = domain.polar_quadrature(x, res.angular_level, res.radial_points, a - 1.0)?;
    Ok(rule.integrate(|y| f(y).abs()))
}

/// Sample-based `I_a f(x)` on a fixed interior rule.
///
/// A node within `1e−12` of `x` is not summed; its cell contributes the exact
/// integral over the equal-volume ball about `x`, `ω_n ρ^a / a` with
/// `ρ = (n w_j/ω_n)^{1/n}`, times `|f|` at that node.
pub fn riesz_potential_sampled(values: &[f64], rule: &QuadratureRule, a: f64, x: &[f64]) -> Result<f64> {
    let n = rule.dim as f64;
    if !(a > 0.0 && a < n) {
        return Err(Error::Domain(format!("Riesz order a = {a} outside (0, {n})")));
    }
    if values.len() != rule.len() {
        return Err(Error::InvalidDimension("one value per node required".into()));
    }
    let omega = surface_area(rule.dim as u32)?;
    let mut acc = sum::KahanSum::new();
    for ((y, w), v) in rule.nodes().zip(&rule.weights).zip(values) {
        let r2: f64 = y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if r2.sqrt() < 1e-12 {
            let rho = (n * w / omega).powf(1.0 / n);
            acc.add(v.abs() * omega * rho.powf(a) / a);
        } else {
            acc.add(w * v.abs() * r2.powf(0.5 * (a - n)));
        }
    }
    Ok(acc.value())
}

/// Boundary potential `Jf(x) = ∫_{∂Ω} |f(y)| |x−y|^{1−n} dS(y)` for interior `x`.
pub fn boundary_potential(values: &[f64], rule: &QuadratureRule, domain: &Domain, x: &[f64]) -> Result<f64> {
    if rule.target != Target::Boundary {
        return Err(Error::Domain("boundary potential needs a boundary rule".into()));
    }
    if values.len() != rule.len() {
        return Err(Error::InvalidDimension("one value per node required".into()));
    }
    if !domain.contains(x) || domain.dist_to_boundary(x)? <= 0.0 {
        return Err(Error::Singular(format!("boundary potential at non-interior point {x:?}")));
    }
    let n = rule.dim as f64;
    Ok(sum::sum(rule.nodes().zip(&rule.weights).zip(values).map(|((y, w), v)| {
        let r2: f64 = y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        w * v.abs() * r2.powf(0.5 * (1.0 - n))
    })))
}

/// `Jf(x)` on a sphere of radius `R` about `c`, integrated in coordinates
/// centred on `x`: the distance `u = |x − y|` runs over `[R−ρ, R+ρ]` with
/// `ρ = |x − c|`, and quadrature in `ln u` absorbs the near-singularity
/// as `x` approaches the sphere. The remaining directions use
/// `sphere_rule(n−1, angular)` in the hyperplane orthogonal to `x − c`.
pub fn boundary_potential_ball<F>(
    f: F,
    center: &[f64],
    radius: f64,
    x: &[f64],
    angular: usize,
    radial: usize,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let n = center.len();
    if n < 3 || x.len() != n {
        return Err(Error::InvalidDimension(format!("sphere potential needs matching dim ≥ 3, got {n}")));
    }
    let v: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
    let rho = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if rho >= radius {
        return Err(Error::Singular(format!("boundary potential at non-interior point {x:?}")));
    }
    let (sp, sw) = crate::domains::quadrature::sphere_rule(n - 1, angular)?;
    if rho < 1e-12 * radius {
        // every boundary point sits at distance R, and R^{n−1} dσ · R^{1−n} = dσ
        let (full, fw) = crate::domains::quadrature::sphere_rule(n, angular)?;
        return Ok(sum::sum(full.chunks_exact(n).zip(&fw).map(|(u, w)| {
            let y: Vec<f64> = center.iter().zip(u).map(|(c, d)| c + radius * d).collect();
            w * f(&y).abs()
        })));
    }
    let frame = orthonormal_complement(&v.iter().map(|c| c / rho).collect::<Vec<_>>());
    let e0: Vec<f64> = v.iter().map(|c| c / rho).collect();
    // s = ln u = s₀ + (s₁−s₀)(1−cos φ)/2 turns the √ endpoint behaviour of
    // sin θ into an analytic function of φ
    let (s0, s1) = ((radius - rho).ln(), (radius + rho).ln());
    let (phi_nodes, phi_weights) = crate::domains::quadrature::gauss_legendre(radial, 0.0, std::f64::consts::PI);
    let mut acc = sum::KahanSum::new();
    let mut y = vec![0.0; n];
    for (phi, wphi) in phi_nodes.iter().zip(&phi_weights) {
        let s = s0 + 0.5 * (s1 - s0) * (1.0 - phi.cos());
        let ws = wphi * 0.5 * (s1 - s0) * phi.sin();
        let u = s.exp();
        let cos = ((rho * rho + radius * radius - u * u) / (2.0 * rho * radius)).clamp(-1.0, 1.0);
        let sin = (1.0 - cos * cos).max(0.0).sqrt();
        // R^{n−2} sin^{n−3}θ u^{3−n} / ρ, from dS = R^{n−1} sin^{n−2}θ dθ dψ
        let jac = radius.powi(n as i32 - 2) * sin.powi(n as i32 - 3) * u.powi(3 - n as i32) / rho;
        for (psi, wp) in sp.chunks_exact(n - 1).zip(&sw) {
            for (k, yk) in y.iter_mut().enumerate() {
                let tangential: f64 = frame.iter().zip(psi).map(|(b, p)| b[k] * p).sum();
                *yk = center[k] + radius * (cos * e0[k] + sin * tangential);
            }
            acc.add(ws * wp * jac * f(&y).abs());
        }
    }
    Ok(acc.value())
}

/// An orthonormal basis of the complement of the unit vector `e`.
fn orthonormal_complement(e: &[f64]) -> Vec<Vec<f64>> {
    let n = e.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    // start from the coordinate axes least aligned with e
    order.sort_by(|a, b| e[*a].abs().total_cmp(&e[*b].abs()));
    for &i in &order {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for b in std::iter::once(e).chain(basis.iter().map(|b| b.as_slice())) {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let l = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if l > 1e-8 {
            basis.push(v.into_iter().map(|c| c / l).collect());
        }
    }
    basis
}

/// A function sampled at cell centres of a uniform grid on a box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub lower: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
    /// Row-major, last axis fastest.
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn sample<F: Fn(&[f64]) -> f64>(lower: &[f64], upper: &[f64], shape: &[usize], f: F) -> Self {
        let spacing: Vec<f64> =
            lower.iter().zip(upper).zip(shape).map(|((a, b), m)| (b - a) / *m as f64).collect();
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut x = vec![0.0; lower.len()];
        for flat in 0..total {
            let mut rem = flat;
            for d in (0..shape.len()).rev() {
                let i = rem % shape[d];
                rem /= shape[d];
                x[d] = lower[d] + (i as f64 + 0.5) * spacing[d];
            }
            values.push(f(&x));
        }
        Self { lower: lower.to_vec(), spacing, shape: shape.to_vec(), values }
    }

    fn center(&self, flat: usize, out: &mut [f64]) {
        let mut rem = flat;
        for d in (0..self.shape.len()).rev() {
            let i = rem % self.shape[d];
            rem /= self.shape[d];
            out[d] = self.lower[d] + (i as f64 + 0.5) * self.spacing[d];
        }
    }

    /// Index of the cell containing `x`, clamped to the grid.
    pub fn cell_of(&self, x: &[f64]) -> usize {
        let mut flat = 0;
        for d in 0..self.shape.len() {
            let i = ((x[d] - self.lower[d]) / self.spacing[d]).floor();
            let i = (i.max(0.0) as usize).min(self.shape[d] - 1);
            flat = flat * self.shape[d] + i;
        }
        flat
    }
}

/// Grid maximal function: the largest average of `|f|` over `B(x, r) ∩ Ω`
/// across `radii`, using cells whose centres lie in the ball. A radius too
/// small to capture any centre falls back to the cell containing `x`.
pub fn maximal_function_oracle(grid: &GridFunction, x: &[f64], radii: &[f64]) -> Result<f64> {
    if radii.is_empty() {
        return Err(Error::EmptyInput("maximal function needs at least one radius".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Domain("maximal-function radii must be positive".into()));
    }
    let mut c = vec![0.0; grid.lower.len()];
    let mut best = 0.0_f64;
    for &r in radii {
        let mut total = sum::KahanSum::new();
        let mut count = 0usize;
        for (flat, v) in grid.values.iter().enumerate() {
            grid.center(flat, &mut c);
            let d2: f64 = c.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 <= r * r {
                total.add(v.abs());
                count += 1;
            }
        }
        let avg = if count == 0 { grid.values[grid.cell_of(x)].abs() } else { total.value() / count as f64 };
        best = best.max(avg);
    }
    Ok(best)
}
