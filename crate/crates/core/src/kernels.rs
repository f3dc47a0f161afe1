//! Closed-form kernels: the Dirichlet Green function and Poisson kernel of a
//! ball, free and box Dirichlet heat kernels, and exact box eigenpairs.
//!
//! Sign convention: `G(x, ·)` solves `Δ_y G = δ_x` with zero boundary values,
//! so `G ≤ 0`, the torsion value `∫ G(0, y) dy` on the unit ball is
//! `−1/(2n)`, and the Poisson kernel is `+∂G/∂ν_y > 0`. This is the only
//! place the sign is chosen.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analysis::{PolarResolution, TestFunction};
use crate::domains::{Domain, QuadratureRule, Shape, Target};
use crate::error::{Error, Result};
use crate::special::surface_area;
use crate::sum;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Points closer than this are treated as coincident.
const COINCIDENT: f64 = 1e-14;
/// Slack when checking `|x| ≤ 1`.
const CLOSURE_TOL: f64 = 1e-12;

/// Green function and Poisson kernel of a ball with arbitrary centre and radius.
#[derive(Debug, Clone, PartialEq)]
pub struct BallKernels {
    center: Vec<f64>,
    radius: f64,
    omega: f64,
}

impl BallKernels {
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim], 1.0)
    }

    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.len() < 3 {
            return Err(Error::InvalidDimension(format!(
                "ball Green function needs dim ≥ 3, got {}",
                center.len()
            )));
        }
        let omega = surface_area(center.len() as u32)?;
        Ok(Self { center, radius, omega })
    }

    pub fn for_domain(domain: &Domain) -> Result<Self> {
        match domain.shape() {
            Shape::Ball { center, radius } => Self::new(center.clone(), *radius),
            _ => Err(Error::InvalidDomain(format!("closed-form kernels need a ball, got a {}", domain.kind()))),
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Maps into unit-ball coordinates, rejecting points outside the closure.
    fn to_unit(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::InvalidDimension(format!("point of dimension {} for a {}-ball", x.len(), self.dim())));
        }
        let u: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| (a - c) / self.radius).collect();
        if dot(&u, &u) > 1.0 + CLOSURE_TOL {
            return Err(Error::Domain(format!("point {x:?} lies outside the ball")));
        }
        Ok(u)
    }

    /// `s(x,y) = |x|y| − y/|y||`, written as `√(|x|²|y|² − 2x·y + 1)`.
    fn image_distance(x: &[f64], y: &[f64]) -> f64 {
        (dot(x, x) * dot(y, y) - 2.0 * dot(x, y) + 1.0).max(0.0).sqrt()
    }

    fn fundamental(&self, r: f64) -> f64 {
        let n = self.dim() as f64;
        r.powf(2.0 - n) / ((n - 2.0) * self.omega)
    }

    fn unit_green(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let r2 = dist2(x, y);
        if r2.sqrt() < COINCIDENT {
            return Err(Error::Singular("Green function at x = y".into()));
        }
        let s = Self::image_distance(x, y);
        Ok(-(self.fundamental(r2.sqrt()) - self.fundamental(s)))
    }

    /// `G(x, y) = R^{2−n} G₁((x−c)/R, (y−c)/R)`.
    pub fn green(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let (ux, uy) = (self.to_unit(x)?, self.to_unit(y)?);
        let n = self.dim() as f64;
        Ok(self.radius.powf(2.0 - n) * self.unit_green(&ux, &uy)?)
    }

    /// `∇_y G(x, y)`.
    pub fn green_gradient(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let (ux, uy) = (self.to_unit(x)?, self.to_unit(y)?);
        let r = dist2(&ux, &uy).sqrt();
        if r < COINCIDENT {
            return Err(Error::Singular("Green gradient at x = y".into()));
        }
        let n = self.dim() as i32;
        let s = Self::image_distance(&ux, &uy);
        let x2 = dot(&ux, &ux);
        let a = 1.0 / (self.omega * r.powi(n));
        let b = 1.0 / (self.omega * s.powi(n));
        let scale = self.radius.powi(1 - n);
        Ok(ux
            .iter()
            .zip(&uy)
            .map(|(xi, yi)| scale * ((yi - xi) * a - (x2 * yi - xi) * b))
            .collect())
    }

    /// `P(x, ζ) = (R² − |x−c|²) / (ω_n R |x − ζ|^n)`, equal to `∂G/∂ν_ζ`.
    pub fn poisson(&self, x: &[f64], zeta: &[f64]) -> Result<f64> {
        let ux = self.to_unit(x)?;
        if dot(&ux, &ux) >= 1.0 {
            return Err(Error::Domain(format!("Poisson kernel needs an interior point, got {x:?}")));
        }
        let n = self.dim() as i32;
        let r2 = self.radius * self.radius;
        let x2 = dist2(x, &self.center);
        Ok((r2 - x2) / (self.omega * self.radius * dist2(x, zeta).sqrt().powi(n)))
    }

    /// `B_Ω g(x) = ∫_Ω G(x,y) g(y) dy`, on the polar rule about `x` with
    /// `β = 1`, so the integrand `G·|x−y|^{n−2}·g` is smooth along each ray.
    pub fn b_omega<F>(&self, g: F, x: &[f64], res: PolarResolution) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64,
    {
        let domain = Domain::ball_at(self.center.clone(), self.radius)?;
        let rule = domain.polar_quadrature(x, res.angular_level, res.radial_points, 1.0)?;
        let n = self.dim() as f64;
        let mut acc = sum::KahanSum::new();
        for (y, w) in rule.nodes().zip(&rule.weights) {
            let r = dist2(x, y).sqrt();
            acc.add(w * self.green(x, y)? * r.powf(n - 2.0) * g(y));
        }
        Ok(acc.value())
    }

    /// `B_{∂Ω} g(x) = ∫_{∂Ω} ∂G/∂ν_y g(y) dS(y)` on a boundary rule.
    pub fn b_boundary<F>(&self, g: F, rule: &QuadratureRule, x: &[f64]) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64,
    {
        if rule.target != Target::Boundary {
            return Err(Error::Domain("boundary operator needs a boundary rule".into()));
        }
        let mut acc = sum::KahanSum::new();
        for (z, w) in rule.nodes().zip(&rule.weights) {
            acc.add(w * self.poisson(x, z)? * g(z));
        }
        Ok(acc.value())
    }

    /// Right-hand side of `f(x) = ∫_Ω G Δf dV + ∫_{∂Ω} ∂G/∂ν f dS`.
    pub fn green_rep_interior(
        &self,
        f: &TestFunction,
        x: &[f64],
        boundary: &QuadratureRule,
        res: PolarResolution,
    ) -> Result<f64> {
        f.check_dim(self.dim())?;
        let volume = if f.is_harmonic() { 0.0 } else { self.b_omega(|y| f.laplacian(y).re, x, res)? };
        Ok(volume + self.b_boundary(|z| f.eval(z).re, boundary, x)?)
    }
}

/// Green function of the unit ball in `ℝ^n`, `n = x.len() ≥ 3`.
pub fn green_ball(x: &[f64], y: &[f64]) -> Result<f64> {
    BallKernels::unit(x.len())?.green(x, y)
}

pub fn green_ball_gradient(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    BallKernels::unit(x.len())?.green_gradient(x, y)
}

pub fn poisson_kernel_ball(x: &[f64], zeta: &[f64]) -> Result<f64> {
    BallKernels::unit(x.len())?.poisson(x, zeta)
}

/// Gaussian heat kernel `(4πt)^{−m/2} e^{−|x−y|²/(4t)}` on `ℝ^m`.
pub fn heat_kernel_free(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("heat kernel needs t > 0, got {t}")));
    }
    let m = x.len() as f64;
    Ok((4.0 * PI * t).powf(-0.5 * m) * (-dist2(x, y) / (4.0 * t)).exp())
}

/// Series tail allowed in [`heat_kernel_box`].
pub const HEAT_TAIL: f64 = 1e-12;

/// Smallest truncation `K` with `e^{−(Kπ/L)² t} < 1e−12` on every edge.
pub fn heat_truncation(edges: &[f64], t: f64) -> usize {
    let need = (1.0 / HEAT_TAIL).ln();
    edges
        .iter()
        .map(|l| (l / PI * (need / t).sqrt()).floor() as usize + 1)
        .max()
        .unwrap_or(1)
}

/// Dirichlet heat kernel of `Π [0, L_i]` as a product of sine series.
pub fn heat_kernel_box(edges: &[f64], t: f64, x: &[f64], y: &[f64], truncation: usize) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("heat kernel needs t > 0, got {t}")));
    }
    if x.len() != edges.len() || y.len() != edges.len() {
        return Err(Error::InvalidDimension("points and edges differ in dimension".into()));
    }
    let suggested = heat_truncation(edges, t);
    if truncation < suggested {
        return Err(Error::TailBound { truncation, t, suggested });
    }
    let mut prod = 1.0;
    for ((l, xi), yi) in edges.iter().zip(x).zip(y) {
        let mut acc = sum::KahanSum::new();
        for k in 1..=truncation {
            let w = k as f64 * PI / l;
            acc.add((w * xi).sin() * (w * yi).sin() * (-w * w * t).exp());
        }
        prod *= 2.0 / l * acc.value();
    }
    Ok(prod)
}

/// A Dirichlet eigenpair of `−Δ` on a box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub index: Vec<u32>,
    pub eigenvalue: f64,
    /// `sup |φ|` of the `L²`-normalised eigenfunction.
    pub sup_value: f64,
    pub l2_norm: f64,
}

impl EigenPair {
    /// `Π √(2/L_i) sin(k_i π x_i / L_i)`.
    pub fn eval(&self, edges: &[f64], x: &[f64]) -> f64 {
        self.index
            .iter()
            .zip(edges)
            .zip(x)
            .map(|((k, l), xi)| (2.0 / l).sqrt() * (*k as f64 * PI * xi / l).sin())
            .product()
    }
}

/// First `count` eigenpairs of the Dirichlet Laplacian on `Π [0, L_i]`,
/// sorted by eigenvalue and then by index.
pub fn box_eigenpairs(edges: &[f64], count: usize) -> Result<Vec<EigenPair>> {
    if count == 0 {
        return Err(Error::EmptyInput("eigenpair count must be ≥ 1".into()));
    }
    if edges.is_empty() || edges.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidDomain("box edges must be positive".into()));
    }
    let m = edges.len();
    let vol: f64 = edges.iter().product();
    let sup = 2f64.powf(m as f64 / 2.0) / vol.sqrt();
    let lambda = |k: &[u32]| PI * PI * k.iter().zip(edges).map(|(k, l)| (*k as f64 / l).powi(2)).sum::<f64>();
    let base = lambda(&vec![1; m]);
    let mut bound = 2.0 * base;
    loop {
        // every index with λ ≤ bound; per-axis k_i ≤ L_i √(bound − others)/π
        let mut found: Vec<(f64, Vec<u32>)> = Vec::new();
        let mut k = vec![1u32; m];
        'enumerate: loop {
            let l = lambda(&k);
            if l <= bound {
                found.push((l, k.clone()));
            }
            for d in (0..m).rev() {
                k[d] += 1;
                if lambda(&k) <= bound {
                    continue 'enumerate;
                }
                k[d] = 1;
            }
            break;
        }
        if found.len() >= count {
            found.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            return Ok(found
                .into_iter()
                .take(count)
                .map(|(eigenvalue, index)| EigenPair { index, eigenvalue, sup_value: sup, l2_norm: 1.0 })
                .collect());
        }
        bound *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use approx::assert_relative_eq;

    fn random_pair(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
        (rng::uniform_in_ball(r, n), rng::uniform_in_ball(r, n))
    }

    #[test]
    fn green_at_centre_is_radial() {
        for n in 3..=6 {
            let omega = surface_area(n as u32).unwrap();
            let y: Vec<f64> = (0..n).map(|i| if i == 0 { 0.4 } else { 0.0 }).collect();
            let g = green_ball(&vec![0.0; n], &y).unwrap();
            let want = -(0.4f64.powi(2 - n as i32) - 1.0) / ((n as f64 - 2.0) * omega);
            assert_relative_eq!(g, want, max_relative = 1e-13);
        }
    }

    #[test]
    fn green_vanishes_on_the_sphere_and_is_symmetric() {
        let mut r = rng::stream(1, "green");
        for _ in 0..100 {
            let (x, y) = random_pair(&mut r, 4);
            let z = rng::uniform_on_sphere(&mut r, 4);
            assert!(green_ball(&x, &z).unwrap().abs() < 1e-10);
            assert_relative_eq!(green_ball(&x, &y).unwrap(), green_ball(&y, &x).unwrap(), max_relative = 1e-12);
            assert!(green_ball(&x, &y).unwrap() <= 0.0);
        }
        assert!(matches!(green_ball(&[0.1, 0.0, 0.0], &[0.1, 0.0, 0.0]), Err(Error::Singular(_))));
        assert!(matches!(green_ball(&[1.5, 0.0, 0.0], &[0.1, 0.0, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut r = rng::stream(2, "grad");
        let h = 1e-5;
        for _ in 0..100 {
            let (x, y) = random_pair(&mut r, 3);
            let x: Vec<f64> = x.iter().map(|c| 0.9 * c).collect();
            let y: Vec<f64> = y.iter().map(|c| 0.9 * c).collect();
            if dist2(&x, &y).sqrt() < 0.05 {
                continue;
            }
            let g = green_ball_gradient(&x, &y).unwrap();
            for i in 0..3 {
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[i] += h;
                ym[i] -= h;
                let fd = (green_ball(&x, &yp).unwrap() - green_ball(&x, &ym).unwrap()) / (2.0 * h);
                let scale = g.iter().map(|c| c.abs()).fold(0.0, f64::max);
                assert!((fd - g[i]).abs() <= 1e-6 * scale, "{fd} vs {}", g[i]);
            }
        }
        // radial case
        let g = green_ball_gradient(&[0.0; 3], &[0.5, 0.0, 0.0]).unwrap();
        assert_relative_eq!(g[0], 0.25f64.recip() / (4.0 * PI), max_relative = 1e-13);
    }

    #[test]
    fn poisson_is_the_normal_derivative() {
        let mut r = rng::stream(3, "flux");
        for _ in 0..100 {
            let x: Vec<f64> = rng::uniform_in_ball(&mut r, 4).iter().map(|c| 0.9 * c).collect();
            let z = rng::uniform_on_sphere(&mut r, 4);
            let grad = green_ball_gradient(&x, &z).unwrap();
            let flux = dot(&grad, &z);
            let p = poisson_kernel_ball(&x, &z).unwrap();
            assert!(flux > 0.0);
            assert_relative_eq!(flux, p, max_relative = 1e-8);
            // numerically differentiated
            let h = 1e-6;
            let inside: Vec<f64> = z.iter().map(|c| c * (1.0 - h)).collect();
            let fd = (green_ball(&x, &z).unwrap() - green_ball(&x, &inside).unwrap()) / h;
            assert!((fd - p).abs() < 1e-4 * p.max(1.0));
        }
        assert_relative_eq!(poisson_kernel_ball(&[0.0; 3], &[1.0, 0.0, 0.0]).unwrap(), 1.0 / (4.0 * PI));
        assert!(poisson_kernel_ball(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn torsion_value() {
        let k = BallKernels::unit(3).unwrap();
        let v = k.b_omega(|_| 1.0, &[0.0; 3], PolarResolution::new(2, 4)).unwrap();
        assert_relative_eq!(v, -1.0 / 6.0, max_relative = 1e-12);
        // off centre: (|x|² − 1)/6
        let x = [0.3, -0.4, 0.2];
        let v = k.b_omega(|_| 1.0, &x, PolarResolution::new(4, 12)).unwrap();
        assert_relative_eq!(v, (dot(&x, &x) - 1.0) / 6.0, max_relative = 1e-8);
    }

    #[test]
    fn scaled_ball() {
        let k = BallKernels::new(vec![1.0, 2.0, 3.0], 2.0).unwrap();
        let v = k.b_omega(|_| 1.0, &[1.0, 2.0, 3.0], PolarResolution::new(2, 4)).unwrap();
        // torsion of a radius-R ball at its centre: −R²/(2n)
        assert_relative_eq!(v, -4.0 / 6.0, max_relative = 1e-12);
        let rule = Domain::ball_at(vec![1.0, 2.0, 3.0], 2.0).unwrap().boundary_quadrature(5).unwrap();
        let mass = k.b_boundary(|_| 1.0, &rule, &[1.5, 2.2, 2.5]).unwrap();
        assert_relative_eq!(mass, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn heat_kernels() {
        let e = [1.0, 1.0];
        let x = [0.3, 0.6];
        let y = [0.5, 0.45];
        let k = heat_truncation(&e, 0.05);
        let h = heat_kernel_box(&e, 0.05, &x, &y, k).unwrap();
        assert_relative_eq!(h, heat_kernel_box(&e, 0.05, &y, &x, k).unwrap(), max_relative = 1e-13);
        assert!(h > 0.0 && h <= heat_kernel_free(0.05, &x, &y).unwrap());
        match heat_kernel_box(&e, 0.01, &x, &y, 3) {
            Err(Error::TailBound { suggested, .. }) => assert_eq!(suggested, heat_truncation(&e, 0.01)),
            other => panic!("{other:?}"),
        }
        assert!(heat_kernel_free(0.0, &x, &y).is_err());
        assert!(heat_kernel_free(1e-4, &[0.0, 0.0], &[0.5, 0.0]).unwrap() < 1e-100);
    }

    #[test]
    fn eigenpairs_of_the_unit_box() {
        let pairs = box_eigenpairs(&[1.0; 4], 10).unwrap();
        assert_relative_eq!(pairs[0].eigenvalue, 4.0 * PI * PI);
        assert_eq!(pairs[0].index, vec![1, 1, 1, 1]);
        assert_relative_eq!(pairs[1].eigenvalue, 7.0 * PI * PI);
        assert_eq!(pairs[1].index, vec![1, 1, 1, 2]);
        assert_eq!(pairs[4].index, vec![2, 1, 1, 1]);
        assert_eq!(pairs[0].sup_value, 4.0);
        assert!(pairs.windows(2).all(|w| w[0].eigenvalue <= w[1].eigenvalue));
        let p = box_eigenpairs(&[1.0, 2.0], 3).unwrap();
        assert_relative_eq!(p[0].eigenvalue, PI * PI * 1.25);
        assert_relative_eq!(p[1].eigenvalue, PI * PI * 2.0);
    }
}
