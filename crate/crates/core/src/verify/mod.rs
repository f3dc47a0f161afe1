//! One verifier per estimate. Each computes both sides with the explicit
//! constants and returns [`VerificationReport`]s; [`run_checks`] runs a
//! batch and orders the reports by estimate id.

mod green;
mod maximum;
mod norms;
pub mod report;
mod spectral;

use rayon::prelude::*;

use crate::analysis::TestFunction;
use crate::constants::{ConstantMode, LogNumber, MaxPrincipleFactor};
use crate::domains::Domain;

pub use green::{random_pairs, verify_green_bounds, verify_scalar_green_form, GREEN_FORM_FACTOR};
pub use maximum::{boundary_sup, verify_gradient_interior, verify_max_principle};
pub use norms::{
    random_point, riesz_norms, verify_holomorphic_carleman, verify_laplace_sobolev, verify_riesz, verify_weak_type,
    BumpSum, RIESZ_POLAR,
};
pub use report::{Expectation, Param, Ratio, VerificationReport, PASS_TOLERANCE};
pub use spectral::{log_grid, verify_eigen_bounds, verify_heat_bound};

/// Every estimate id a report can carry.
pub const ESTIMATE_IDS: [&str; 16] = [
    "boundary_weak_type",
    "convex_laplace_sobolev",
    "eigenfunction_sup",
    "eigenvalue_lower",
    "gradient_interior",
    "green_boundary_decay",
    "green_form_boundary_decay",
    "green_form_gradient",
    "green_form_pointwise",
    "green_gradient",
    "green_pointwise",
    "heat_kernel",
    "holomorphic_carleman",
    "laplace_sobolev",
    "max_principle",
    "riesz_potential",
];

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// The sample with the largest `ln lhs − ln rhs` seen so far.
#[derive(Debug, Clone, Copy, Default)]
struct Worst {
    best: Option<(f64, usize, f64, LogNumber)>,
}

impl Worst {
    fn offer(&mut self, index: usize, lhs: f64, rhs: LogNumber) {
        let gap = if lhs > 0.0 { lhs.ln() - rhs.ln() } else { f64::NEG_INFINITY };
        match self.best {
            Some((g, ..)) if g >= gap => {}
            _ => self.best = Some((gap, index, lhs, rhs)),
        }
    }

    fn into_report(self, report: VerificationReport, samples: u64) -> VerificationReport {
        match self.best {
            Some((_, index, lhs, rhs)) => report.param("worst_sample", index).compare(lhs, rhs, samples),
            None => report.fail(&crate::Error::EmptyInput("no samples".into())),
        }
    }
}

/// A verifier invocation, as listed in a suite.
#[derive(Debug, Clone)]
pub enum Check {
    LaplaceSobolev { domain: Domain, function: TestFunction, p: f64, level: u32 },
    HolomorphicCarleman { domain: Domain, function: TestFunction, p: f64, level: u32 },
    Riesz { domain: Domain, a: f64, p: f64, trials: usize, level: u32, seed: u64 },
    WeakType { domain: Domain, function: TestFunction, level: u32 },
    GreenBounds { n: usize, ld: Option<f64>, pairs: usize, seed: u64 },
    ScalarGreenForm { n: u32, pairs: usize, seed: u64, mode: ConstantMode },
    EigenBounds { edges: Vec<f64>, count: usize },
    HeatBound { edges: Vec<f64>, t_grid: Vec<f64>, pairs: usize, seed: u64, truncation: Option<usize> },
    /// Reports both growth factors when `k > 0`, only the derived one at `k = 0`.
    MaxPrinciple { domain: Domain, function: TestFunction, level: u32, k: f64 },
    GradientInterior { n: u32, function: TestFunction, level: u32 },
}

impl Check {
    pub fn run(&self) -> Vec<VerificationReport> {
        match self {
            Self::LaplaceSobolev { domain, function, p, level } => {
                vec![verify_laplace_sobolev(domain, function, *p, *level)]
            }
            Self::HolomorphicCarleman { domain, function, p, level } => {
                vec![verify_holomorphic_carleman(domain, function, *p, *level)]
            }
            Self::Riesz { domain, a, p, trials, level, seed } => {
                vec![verify_riesz(domain, *a, *p, *trials, *level, *seed)]
            }
            Self::WeakType { domain, function, level } => vec![verify_weak_type(domain, function, *level)],
            Self::GreenBounds { n, ld, pairs, seed } => verify_green_bounds(*n, *ld, *pairs, *seed),
            Self::ScalarGreenForm { n, pairs, seed, mode } => verify_scalar_green_form(*n, *pairs, *seed, *mode),
            Self::EigenBounds { edges, count } => verify_eigen_bounds(edges, *count),
            Self::HeatBound { edges, t_grid, pairs, seed, truncation } => {
                vec![verify_heat_bound(edges, t_grid, *pairs, *seed, *truncation)]
            }
            Self::MaxPrinciple { domain, function, level, k } => {
                let mut out = vec![verify_max_principle(domain, function, *level, *k, MaxPrincipleFactor::Derived)];
                if *k > 0.0 {
                    out.push(verify_max_principle(domain, function, *level, *k, MaxPrincipleFactor::Stated));
                }
                out
            }
            Self::GradientInterior { n, function, level } => vec![verify_gradient_interior(*n, function, *level)],
        }
    }
}

/// Runs the checks concurrently; reports come back grouped by estimate id,
/// in check order within a group.
pub fn run_checks(checks: &[Check]) -> Vec<VerificationReport> {
    let mut reports: Vec<VerificationReport> = checks.par_iter().map(Check::run).collect::<Vec<_>>().concat();
    reports.sort_by(|a, b| a.estimate_id.cmp(&b.estimate_id));
    reports
}
