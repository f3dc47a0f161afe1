//! Norm inequalities evaluated by quadrature: the Laplace–Sobolev and
//! holomorphic Carleman inequalities, the Riesz potential bound and the
//! weak-type bound for the boundary potential.

use rand::Rng;
use rayon::prelude::*;

use crate::analysis::{
    boundary_potential, boundary_potential_ball, lp_norm, lp_norm_values, riesz_potential, sample, weak_lp_norm,
    PolarResolution, TestFunction,
};
use crate::constants::{
    carleman_holo_constant, delta1, delta2, delta2_convex, riesz_constant, weak_type_constant, ComplexDim, ExponentSet,
    LogNumber, RealDim,
};
use crate::domains::{Domain, Shape};
use crate::error::{Error, Result};
use crate::rng;

use super::report::VerificationReport;
use super::Worst;

/// Polar rule for each Riesz potential evaluation.
pub const RIESZ_POLAR: PolarResolution = PolarResolution::new(1, 8);
/// Directions and log-distance nodes for the boundary potential on a sphere.
const SPHERE_POTENTIAL: (usize, usize) = (12, 24);

fn describe(r: VerificationReport, domain: &Domain, f: &TestFunction, level: u32) -> VerificationReport {
    r.param("domain", domain.to_string()).param("function", f.to_string()).level(level)
}

/// `‖f‖_{L^{p*}} ≤ δ₁‖Δf‖_{L^{p♯}} + δ₂‖f‖_{L^p(∂Ω)}`.
///
/// Domains with a C² boundary use `δ₂` at their `LD`; convex domains
/// without one (boxes) take the convex path and report as
/// `convex_laplace_sobolev`.
pub fn verify_laplace_sobolev(domain: &Domain, f: &TestFunction, p: f64, level: u32) -> VerificationReport {
    let geom = domain.geometry();
    let id = if geom.lc.is_none() && geom.convex { "convex_laplace_sobolev" } else { "laplace_sobolev" };
    let mut r = describe(VerificationReport::new(id), domain, f, level).param("p", p);
    r = match geom.lc {
        Some(_) => r.note(format!("C2 boundary: delta2 with LD = {}", geom.ld)),
        None => r.note("convex domain: delta2_convex"),
    };
    let exps = ExponentSet::laplace(RealDim(geom.dim), p);
    if let Ok(e) = &exps {
        r = r.param("p_star", e.p_star);
        if let Some(s) = e.p_sharp {
            r = r.param("p_sharp", s);
        }
    }
    let outcome = (|| {
        let e = exps?;
        let ps = e.sharp()?;
        f.check_dim(domain.dim())?;
        let n = RealDim(geom.dim);
        let d2 = match (geom.lc, geom.convex) {
            (Some(_), _) => delta2(n, p, geom.ld)?,
            (None, true) => delta2_convex(n, p)?,
            (None, false) => return Err(Error::InvalidDomain("non-convex domain without a C2 boundary".into())),
        };
        let inner = domain.interior_quadrature(level)?;
        let bdry = domain.boundary_quadrature(level)?;
        let lhs = lp_norm(f, &inner, e.p_star)?;
        let lap = sample(&inner, |x| f.laplacian(x).norm());
        let lap_norm = lp_norm_values(&lap, &inner.weights, ps)?;
        let bnorm = lp_norm(f, &bdry, p)?;
        let rhs = delta1(n, p)?.scale(lap_norm)?.add(d2.scale(bnorm)?);
        Ok((lhs, rhs, (inner.len() + bdry.len()) as u64))
    })();
    r.finish(outcome)
}

/// `‖f‖_{L^{p*}} ≤ C‖f‖_{L^p(∂Ω)}` for holomorphic `f` on a domain in `ℂ^n`.
pub fn verify_holomorphic_carleman(domain: &Domain, f: &TestFunction, p: f64, level: u32) -> VerificationReport {
    let geom = domain.geometry();
    let mut r = describe(VerificationReport::new("holomorphic_carleman"), domain, f, level).param("p", p);
    let outcome = (|| {
        if !domain.dim().is_multiple_of(2) {
            return Err(Error::InvalidDimension(format!("odd real dimension {} has no complex structure", domain.dim())));
        }
        if !f.is_holomorphic() {
            return Err(Error::RejectedFunction(format!("`{f}` is not holomorphic")));
        }
        f.check_dim(domain.dim())?;
        let n = ComplexDim(geom.dim / 2);
        let e = ExponentSet::holomorphic(n, p)?;
        r = r.clone().param("p_star", e.p_star);
        let c = carleman_holo_constant(n, p, geom.ld, geom.convex)?;
        let inner = domain.interior_quadrature(level)?;
        let bdry = domain.boundary_quadrature(level)?;
        let lhs = lp_norm(f, &inner, e.p_star)?;
        let rhs = c.scale(lp_norm(f, &bdry, p)?)?;
        Ok((lhs, rhs, (inner.len() + bdry.len()) as u64))
    })();
    r.finish(outcome)
}

/// A sum of Gaussian bumps, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpSum {
    bumps: Vec<(Vec<f64>, f64, f64)>,
}

impl BumpSum {
    /// One to three bumps centred in `domain`, widths between 15% and 60%
    /// of the radius `diam/2`, heights in `[0.2, 1]`.
    pub fn random<R: Rng>(domain: &Domain, r: &mut R) -> Self {
        let half = domain.diam() / 2.0;
        let count = r.random_range(1..=3);
        let bumps = (0..count)
            .map(|_| {
                let c = random_point(domain, r);
                let w = half * r.random_range(0.15..0.6);
                let h = r.random_range(0.2..1.0);
                (c, 0.5 / (w * w), h)
            })
            .collect();
        Self { bumps }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.bumps
            .iter()
            .map(|(c, k, h)| {
                let d2: f64 = x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
                h * (-k * d2).exp()
            })
            .sum()
    }
}

/// Uniform point in the domain (affine image of the ball for ellipsoids).
pub fn random_point<R: Rng>(domain: &Domain, r: &mut R) -> Vec<f64> {
    match domain.shape() {
        Shape::Ball { center, radius } => {
            rng::uniform_in_ball(r, center.len()).iter().zip(center).map(|(u, c)| c + radius * u).collect()
        }
        Shape::Box { lower, upper } => lower.iter().zip(upper).map(|(a, b)| r.random_range(*a..*b)).collect(),
        Shape::Ellipsoid { axes } => rng::uniform_in_ball(r, axes.len()).iter().zip(axes).map(|(u, a)| a * u).collect(),
    }
}

/// `‖I_a f‖_{L^{np/(n−pa)}} ≤ C‖f‖_{L^p}`, worst case over `trials` random
/// bump sums.
pub fn verify_riesz(domain: &Domain, a: f64, p: f64, trials: usize, level: u32, seed: u64) -> VerificationReport {
    let n = domain.dim();
    let r = VerificationReport::new("riesz_potential")
        .param("domain", domain.to_string())
        .param("a", a)
        .param("p", p)
        .param("trials", trials)
        .param("seed", seed)
        .level(level)
        .note(format!(
            "I_a f on the interior rule, each value on a polar rule ({} angular, {} radial)",
            RIESZ_POLAR.angular_level, RIESZ_POLAR.radial_points
        ));
    let outcome = (|| -> Result<(Worst, u64)> {
        if trials == 0 {
            return Err(Error::EmptyInput("riesz check needs at least one trial".into()));
        }
        let c = riesz_constant(RealDim(n as u32), p, a)?;
        let q = n as f64 * p / (n as f64 - p * a);
        let inner = domain.interior_quadrature(level)?;
        let mut gen = rng::stream(seed, "riesz/bumps");
        let mut worst = Worst::default();
        for t in 0..trials {
            let f = BumpSum::random(domain, &mut gen);
            let (lhs, norm) = riesz_norms(domain, a, p, q, &inner, |x| f.eval(x))?;
            worst.offer(t, lhs, c.scale(norm)?);
        }
        Ok((worst, (trials * inner.len()) as u64))
    })();
    match outcome {
        Ok((worst, samples)) => worst.into_report(r.param("q", n as f64 * p / (n as f64 - p * a)), samples),
        Err(e) => r.fail(&e),
    }
}

/// `(‖I_a f‖_q, ‖f‖_p)` on `inner`.
pub fn riesz_norms<F>(
    domain: &Domain,
    a: f64,
    p: f64,
    q: f64,
    inner: &crate::domains::QuadratureRule,
    f: F,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let values = sample(inner, &f);
    let potential: Vec<f64> = inner
        .points
        .par_chunks_exact(inner.dim)
        .map(|x| riesz_potential(&f, domain, a, x, RIESZ_POLAR))
        .collect::<Result<_>>()?;
    Ok((lp_norm_values(&potential, &inner.weights, q)?, lp_norm_values(&values, &inner.weights, p)?))
}

/// `‖Jf‖_{L^{n/(n−1),∞}(Ω)} ≤ n ω_n^{1−1/n} ‖f‖_{L¹(∂Ω)}` with `f ≥ 0`
/// taken as `|f|`.
pub fn verify_weak_type(domain: &Domain, f: &TestFunction, level: u32) -> VerificationReport {
    let mut r = describe(VerificationReport::new("boundary_weak_type"), domain, f, level).note("density taken as |f|");
    let ball = match domain.shape() {
        Shape::Ball { center, radius } => Some((center.clone(), *radius)),
        _ => None,
    };
    r = r.note(match ball {
        Some(_) => "Jf by the point-centred sphere rule",
        None => "Jf on the boundary rule one level up",
    });
    let outcome = (|| {
        f.check_dim(domain.dim())?;
        let n = domain.dim();
        let inner = domain.interior_quadrature(level)?;
        let bdry = domain.boundary_quadrature(level + 1)?;
        let bvalues = sample(&bdry, |y| f.abs(y));
        let l1 = lp_norm_values(&bvalues, &bdry.weights, 1.0)?;
        let jf: Vec<f64> = inner
            .points
            .par_chunks_exact(n)
            .map(|x| match &ball {
                Some((c, rad)) => {
                    boundary_potential_ball(|y| f.abs(y), c, *rad, x, SPHERE_POTENTIAL.0, SPHERE_POTENTIAL.1)
                }
                None => boundary_potential(&bvalues, &bdry, domain, x),
            })
            .collect::<Result<_>>()?;
        let samples: Vec<(f64, f64)> = jf.into_iter().zip(inner.weights.iter().copied()).collect();
        let lhs = weak_lp_norm(&samples, n as f64 / (n as f64 - 1.0))?;
        let rhs = LogNumber::from_f64(weak_type_constant(RealDim(n as u32))?)?.scale(l1)?;
        Ok((lhs, rhs, (inner.len() + bdry.len()) as u64))
    })();
    r.finish(outcome)
}
