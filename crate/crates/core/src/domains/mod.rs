//! Model domains with exact geometry: balls, boxes and axis-aligned ellipsoids.

pub mod quadrature;

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::constants::GeometryParams;
use crate::descriptor::{self, parse_error, Token};
use crate::error::{Error, Result};
use crate::rng;
use crate::special::{ball_volume, surface_area};

pub use quadrature::{level_points, QuadratureRule, Target};

/// Points this far outside the closure are rejected.
const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Centred at the origin, aligned with the coordinate axes.
    Ellipsoid { axes: Vec<f64> },
}

/// User-supplied boundary data that replaces the computed `LC` and convexity,
/// so the `max{8, LD}` branch of the constants can be exercised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryOverride {
    pub lc: f64,
    pub convex: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    shape: Shape,
    geometry_override: Option<GeometryOverride>,
}

/// Result of sampling the normal map's Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LcEstimate {
    Lipschitz(f64),
    /// The boundary has edges; the normal is discontinuous.
    NotC2,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl Domain {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball_at(vec![0.0; dim], radius)
    }

    pub fn ball_at(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.len() < 2 {
            return Err(Error::InvalidDomain(format!("ball dimension {} < 2", center.len())));
        }
        if !(radius > 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidDomain(format!("ball radius {radius} must be positive")));
        }
        Ok(Self { shape: Shape::Ball { center, radius }, geometry_override: None })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::ball(dim, 1.0).expect("unit ball of dimension ≥ 2")
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() < 2 || lower.len() != upper.len() {
            return Err(Error::InvalidDomain("box corners must share a dimension ≥ 2".into()));
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(b > a) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidDomain("box edges must be positive".into()));
        }
        Ok(Self { shape: Shape::Box { lower, upper }, geometry_override: None })
    }

    /// Box `[0, e_1] × ⋯ × [0, e_dim]`.
    pub fn box_with_edges(edges: &[f64]) -> Result<Self> {
        Self::boxed(vec![0.0; edges.len()], edges.to_vec())
    }

    pub fn unit_box(dim: usize) -> Self {
        Self::box_with_edges(&vec![1.0; dim]).expect("unit box of dimension ≥ 2")
    }

    pub fn ellipsoid(axes: Vec<f64>) -> Result<Self> {
        if axes.len() < 2 {
            return Err(Error::InvalidDomain(format!("ellipsoid dimension {} < 2", axes.len())));
        }
        if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidDomain("ellipsoid semi-axes must be positive".into()));
        }
        Ok(Self { shape: Shape::Ellipsoid { axes }, geometry_override: None })
    }

    pub fn with_override(mut self, lc: f64, convex: bool) -> Result<Self> {
        if !(lc >= 0.0 && lc.is_finite()) {
            return Err(Error::InvalidDomain(format!("override lc = {lc} must be ≥ 0")));
        }
        self.geometry_override = Some(GeometryOverride { lc, convex });
        Ok(self)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn geometry_override(&self) -> Option<GeometryOverride> {
        self.geometry_override
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Ball { center, .. } => center.len(),
            Shape::Box { lower, .. } => lower.len(),
            Shape::Ellipsoid { axes } => axes.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.shape {
            Shape::Ball { .. } => "ball",
            Shape::Box { .. } => "box",
            Shape::Ellipsoid { .. } => "ellipsoid",
        }
    }

    pub fn diam(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Box { lower, upper } => dist(lower, upper),
            Shape::Ellipsoid { axes } => 2.0 * axes.iter().cloned().fold(0.0, f64::max),
        }
    }

    pub fn volume(&self) -> f64 {
        let d = self.dim() as u32;
        match &self.shape {
            Shape::Ball { radius, .. } => ball_volume(d).expect("dim ≥ 2") * radius.powi(d as i32),
            Shape::Box { lower, upper } => lower.iter().zip(upper).map(|(a, b)| b - a).product(),
            Shape::Ellipsoid { axes } => ball_volume(d).expect("dim ≥ 2") * axes.iter().product::<f64>(),
        }
    }

    /// Exact for balls and boxes; the ellipsoid uses the level-6 boundary rule.
    pub fn boundary_area(&self) -> f64 {
        let d = self.dim();
        match &self.shape {
            Shape::Ball { radius, .. } => {
                surface_area(d as u32).expect("dim ≥ 2") * radius.powi(d as i32 - 1)
            }
            Shape::Box { lower, upper } => {
                let e: Vec<f64> = lower.iter().zip(upper).map(|(a, b)| b - a).collect();
                let vol: f64 = e.iter().product();
                2.0 * e.iter().map(|x| vol / x).sum::<f64>()
            }
            Shape::Ellipsoid { .. } => {
                let level = if d <= 4 { 6 } else { 4 };
                self.boundary_quadrature(level).map(|r| r.total_weight()).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn is_convex(&self) -> bool {
        self.geometry_override.is_none_or(|o| o.convex)
    }

    /// Exact Lipschitz constant of the outward normal, when the boundary is C².
    pub fn exact_lc(&self) -> Option<f64> {
        match &self.shape {
            Shape::Ball { radius, .. } => Some(1.0 / radius),
            Shape::Box { .. } => None,
            Shape::Ellipsoid { axes } => {
                let max = axes.iter().cloned().fold(0.0, f64::max);
                let min = axes.iter().cloned().fold(f64::INFINITY, f64::min);
                Some(max / (min * min))
            }
        }
    }

    pub fn geometry(&self) -> GeometryParams {
        let diam = self.diam();
        let (lc, convex) = match self.geometry_override {
            Some(o) => (Some(o.lc), o.convex),
            None => (self.exact_lc(), true),
        };
        let ld = if convex { 0.0 } else { diam * lc.unwrap_or(0.0) };
        GeometryParams {
            dim: self.dim() as u32,
            diam,
            volume: self.volume(),
            boundary_area: self.boundary_area(),
            convex,
            lc,
            ld,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Ball { center, radius } => dist(x, center) < *radius,
            Shape::Box { lower, upper } => {
                x.iter().zip(lower.iter().zip(upper)).all(|(c, (a, b))| c > a && c < b)
            }
            Shape::Ellipsoid { axes } => ellipsoid_level(axes, x) < 1.0,
        }
    }

    fn in_closure(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Ball { center, radius } => dist(x, center) <= radius + CLOSURE_TOL,
            Shape::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(c, (a, b))| *c >= a - CLOSURE_TOL && *c <= b + CLOSURE_TOL),
            Shape::Ellipsoid { axes } => ellipsoid_level(axes, x) <= 1.0 + CLOSURE_TOL,
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::InvalidDimension(format!(
                "point of dimension {} in a {}-dimensional domain",
                x.len(),
                self.dim()
            )));
        }
        if !self.in_closure(x) {
            return Err(Error::Domain(format!("point {x:?} lies outside the closed domain")));
        }
        Ok(())
    }

    /// Nearest point of `∂Ω` to `x ∈ Ω̄`.
    pub fn nearest_boundary_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        Ok(match &self.shape {
            Shape::Ball { center, radius } => {
                let v: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let r = norm(&v);
                if r == 0.0 {
                    let mut p = center.clone();
                    p[0] += radius;
                    p
                } else {
                    center.iter().zip(&v).map(|(c, d)| c + d * radius / r).collect()
                }
            }
            Shape::Box { lower, upper } => {
                let (axis, to_upper, _) = box_nearest_face(lower, upper, x);
                let mut p = x.to_vec();
                p[axis] = if to_upper { upper[axis] } else { lower[axis] };
                p
            }
            Shape::Ellipsoid { axes } => ellipsoid_projection(axes, x),
        })
    }

    /// `δ(x) = inf_{z ∈ ∂Ω} |x − z|`.
    pub fn dist_to_boundary(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(match &self.shape {
            Shape::Ball { center, radius } => (radius - dist(x, center)).max(0.0),
            Shape::Box { lower, upper } => box_nearest_face(lower, upper, x).2.max(0.0),
            Shape::Ellipsoid { .. } => dist(x, &self.nearest_boundary_point(x)?),
        })
    }

    /// Outward unit normal at a boundary point (the nearest face on a box).
    pub fn outward_normal(&self, y: &[f64]) -> Vec<f64> {
        match &self.shape {
            Shape::Ball { center, radius } => {
                y.iter().zip(center).map(|(a, c)| (a - c) / radius).collect()
            }
            Shape::Box { lower, upper } => {
                let (axis, to_upper, _) = box_nearest_face(lower, upper, y);
                let mut n = vec![0.0; y.len()];
                n[axis] = if to_upper { 1.0 } else { -1.0 };
                n
            }
            Shape::Ellipsoid { axes } => {
                let g: Vec<f64> = y.iter().zip(axes).map(|(c, a)| c / (a * a)).collect();
                let l = norm(&g);
                g.into_iter().map(|c| c / l).collect()
            }
        }
    }

    /// Distance from interior `x` to `∂Ω` along the unit direction `theta`.
    pub fn ray_exit(&self, x: &[f64], theta: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let v: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let b: f64 = v.iter().zip(theta).map(|(a, t)| a * t).sum();
                let c = v.iter().map(|a| a * a).sum::<f64>() - radius * radius;
                exit_root(1.0, b, c)
            }
            Shape::Box { lower, upper } => {
                let mut t = f64::INFINITY;
                for ((xi, th), (a, b)) in x.iter().zip(theta).zip(lower.iter().zip(upper)) {
                    if *th > 0.0 {
                        t = t.min((b - xi) / th);
                    } else if *th < 0.0 {
                        t = t.min((a - xi) / th);
                    }
                }
                t.max(0.0)
            }
            Shape::Ellipsoid { axes } => {
                let mut qa = 0.0;
                let mut qb = 0.0;
                let mut qc = -1.0;
                for ((xi, th), a) in x.iter().zip(theta).zip(axes) {
                    let a2 = a * a;
                    qa += th * th / a2;
                    qb += xi * th / a2;
                    qc += xi * xi / a2;
                }
                exit_root(qa, qb, qc)
            }
        }
    }

    /// Largest `|ν(x)−ν(y)|/|x−y|` over sampled boundary pairs: half uniformly
    /// random, half at separation about `1e−3` where the sup is approached.
    pub fn lc_estimate(&self, pairs: usize, seed: u64) -> LcEstimate {
        if matches!(self.shape, Shape::Box { .. }) {
            return LcEstimate::NotC2;
        }
        let dim = self.dim();
        let mut rng = rng::stream(seed, "lc-pairs");
        let mut best: f64 = 0.0;
        for i in 0..pairs {
            let u = rng::uniform_on_sphere(&mut rng, dim);
            let v = if i % 2 == 0 {
                rng::uniform_on_sphere(&mut rng, dim)
            } else {
                let eps = 1e-3 * rng.random::<f64>().max(1e-3);
                let d = rng::uniform_on_sphere(&mut rng, dim);
                let w: Vec<f64> = u.iter().zip(&d).map(|(a, b)| a + eps * b).collect();
                let l = norm(&w);
                w.into_iter().map(|c| c / l).collect()
            };
            let x = self.sphere_to_boundary(&u);
            let y = self.sphere_to_boundary(&v);
            let d = dist(&x, &y);
            if d < 1e-9 {
                continue;
            }
            let nd = dist(&self.outward_normal(&x), &self.outward_normal(&y));
            best = best.max(nd / d);
        }
        LcEstimate::Lipschitz(best)
    }

    /// Boundary point over the unit-sphere direction `u` (radial for the ball,
    /// the linear image `a ∘ u` for the ellipsoid).
    fn sphere_to_boundary(&self, u: &[f64]) -> Vec<f64> {
        match &self.shape {
            Shape::Ball { center, radius } => center.iter().zip(u).map(|(c, a)| c + radius * a).collect(),
            Shape::Ellipsoid { axes } => axes.iter().zip(u).map(|(a, c)| a * c).collect(),
            Shape::Box { .. } => unreachable!("boxes have no smooth parametrisation"),
        }
    }

    pub fn interior_quadrature(&self, level: u32) -> Result<QuadratureRule> {
        let m = level_points(level)?;
        let dim = self.dim();
        let (points, weights) = match &self.shape {
            Shape::Ball { center, radius } => {
                let (p, w) = quadrature::ball_rule(dim, m)?;
                let scale = radius.powi(dim as i32);
                (affine(&p, center, &vec![*radius; dim]), w.into_iter().map(|v| v * scale).collect())
            }
            Shape::Box { lower, upper } => quadrature::box_rule(lower, upper, m)?,
            Shape::Ellipsoid { axes } => {
                let (p, w) = quadrature::ball_rule(dim, m)?;
                let jac: f64 = axes.iter().product();
                (affine(&p, &vec![0.0; dim], axes), w.into_iter().map(|v| v * jac).collect())
            }
        };
        Ok(QuadratureRule { dim, points, weights, target: Target::Interior, order_tag: 2 * m as u32 - 1 })
    }

    pub fn boundary_quadrature(&self, level: u32) -> Result<QuadratureRule> {
        let m = level_points(level)?;
        let dim = self.dim();
        let (points, weights) = match &self.shape {
            Shape::Ball { center, radius } => {
                let (p, w) = quadrature::sphere_rule(dim, m)?;
                let scale = radius.powi(dim as i32 - 1);
                (affine(&p, center, &vec![*radius; dim]), w.into_iter().map(|v| v * scale).collect())
            }
            Shape::Box { lower, upper } => box_faces(lower, upper, m)?,
            Shape::Ellipsoid { axes } => {
                let (p, w) = quadrature::sphere_rule(dim, m)?;
                let det: f64 = axes.iter().product();
                let weights = p
                    .chunks_exact(dim)
                    .zip(&w)
                    .map(|(u, w)| {
                        let s: f64 = u.iter().zip(axes).map(|(c, a)| (c / a) * (c / a)).sum();
                        w * det * s.sqrt()
                    })
                    .collect();
                (affine(&p, &vec![0.0; dim], axes), weights)
            }
        };
        Ok(QuadratureRule { dim, points, weights, target: Target::Boundary, order_tag: 2 * m as u32 - 1 })
    }

    /// Rule centred at the interior point `x` for integrands with a
    /// `|y − x|^{β+1−dim}` singularity: `Σ w_i h(y_i) ≈ ∫_Ω h(y)|y−x|^{β+1−dim} dy`.
    ///
    /// Directions come from the unit-sphere rule at `angular_level`; along
    /// each ray `r ∈ [0, R(θ)]` is integrated with `radial_points` Gauss–Jacobi
    /// nodes for the weight `r^β`.
    pub fn polar_quadrature(
        &self,
        x: &[f64],
        angular_level: u32,
        radial_points: usize,
        beta: f64,
    ) -> Result<QuadratureRule> {
        if !self.contains(x) {
            return Err(Error::Domain(format!("polar rule centre {x:?} is not interior")));
        }
        if !(beta > -1.0) {
            return Err(Error::Domain(format!("radial exponent β = {beta} must exceed −1")));
        }
        let dim = self.dim();
        let m = level_points(angular_level)?;
        let (sp, sw) = quadrature::sphere_rule(dim, m)?;
        let count = sw.len().saturating_mul(radial_points);
        if count > quadrature::MAX_NODES {
            return Err(Error::RuleTooLarge(count));
        }
        let (r, rw) = quadrature::radial_rule(radial_points, beta);
        let mut points = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        for (theta, w) in sp.chunks_exact(dim).zip(&sw) {
            let big_r = self.ray_exit(x, theta);
            let scale = w * big_r.powf(beta + 1.0);
            for (ri, rwi) in r.iter().zip(&rw) {
                let t = ri * big_r;
                points.extend(x.iter().zip(theta).map(|(a, b)| a + t * b));
                weights.push(scale * rwi);
            }
        }
        Ok(QuadratureRule { dim, points, weights, target: Target::Interior, order_tag: 2 * m as u32 - 1 })
    }

    /// Parses `ball dim=3 r=1`, `box dim=4 edges=1,1,1,1`,
    /// `ellipsoid axes=2,1,1`, each optionally followed by
    /// `override lc=<v> convex=<bool>`.
    pub fn parse(s: &str) -> Result<Self> {
        let toks = descriptor::tokenize(s);
        let Some(head) = toks.first() else {
            return Err(parse_error(1, "empty domain descriptor"));
        };
        let split = toks.iter().position(|t| t.text == "override").unwrap_or(toks.len());
        let (shape_toks, over_toks) = toks.split_at(split);
        let mut dim: Option<(usize, Token)> = None;
        let mut radius = None;
        let mut center = None;
        let mut edges = None;
        let mut lower = None;
        let mut axes = None;
        for &t in &shape_toks[1..] {
            let (k, v) = descriptor::key_value(t)?;
            match (head.text, k) {
                (_, "dim") => dim = Some((descriptor::integer(v)?, v)),
                ("ball", "r") => radius = Some(descriptor::number(v)?),
                ("ball", "center") => center = Some(descriptor::number_list(v)?),
                ("box", "edges") => edges = Some((descriptor::number_list(v)?, v)),
                ("box", "lower") => lower = Some(descriptor::number_list(v)?),
                ("ellipsoid", "axes") => axes = Some((descriptor::number_list(v)?, v)),
                _ => return Err(parse_error(t.column, format!("unknown key `{k}` for `{}`", head.text))),
            }
        }
        let invalid = |col: usize, e: Error| match e {
            Error::InvalidDomain(m) => parse_error(col, m),
            other => other,
        };
        let mut domain = match head.text {
            "ball" => {
                let d = match (&dim, &center) {
                    (Some((d, _)), _) => *d,
                    (None, Some(c)) => c.len(),
                    (None, None) => return Err(parse_error(head.column, "ball needs dim=")),
                };
                let c = center.unwrap_or_else(|| vec![0.0; d]);
                if c.len() != d {
                    return Err(parse_error(head.column, "center length differs from dim"));
                }
                Self::ball_at(c, radius.unwrap_or(1.0)).map_err(|e| invalid(head.column, e))?
            }
            "box" => {
                let (e, etok) = match (edges, &dim) {
                    (Some(e), _) => e,
                    (None, Some((d, t))) => (vec![1.0; *d], *t),
                    (None, None) => return Err(parse_error(head.column, "box needs edges=")),
                };
                if let Some((d, t)) = dim {
                    if d != e.len() {
                        return Err(parse_error(t.column, format!("dim={d} but {} edges", e.len())));
                    }
                }
                let lo = lower.unwrap_or_else(|| vec![0.0; e.len()]);
                if lo.len() != e.len() {
                    return Err(parse_error(etok.column, "lower length differs from edges"));
                }
                let hi = lo.iter().zip(&e).map(|(a, b)| a + b).collect();
                Self::boxed(lo, hi).map_err(|er| invalid(etok.column, er))?
            }
            "ellipsoid" => {
                let Some((a, atok)) = axes else {
                    return Err(parse_error(head.column, "ellipsoid needs axes="));
                };
                if let Some((d, t)) = dim {
                    if d != a.len() {
                        return Err(parse_error(t.column, format!("dim={d} but {} axes", a.len())));
                    }
                }
                Self::ellipsoid(a).map_err(|e| invalid(atok.column, e))?
            }
            other => return Err(parse_error(head.column, format!("unknown domain kind `{other}`"))),
        };
        if let Some(o) = over_toks.first() {
            let mut lc = None;
            let mut convex = false;
            for &t in &over_toks[1..] {
                match descriptor::key_value(t)? {
                    ("lc", v) => lc = Some(descriptor::number(v)?),
                    ("convex", v) => convex = descriptor::boolean(v)?,
                    (k, _) => return Err(parse_error(t.column, format!("unknown override key `{k}`"))),
                }
            }
            let lc = lc.ok_or_else(|| parse_error(o.column, "override needs lc="))?;
            domain = domain.with_override(lc, convex).map_err(|e| invalid(o.column, e))?;
        }
        Ok(domain)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Ball { center, radius } => {
                write!(f, "ball dim={} r={}", center.len(), radius)?;
                if center.iter().any(|c| *c != 0.0) {
                    write!(f, " center={}", descriptor::join(center))?;
                }
            }
            Shape::Box { lower, upper } => {
                let e: Vec<f64> = lower.iter().zip(upper).map(|(a, b)| b - a).collect();
                write!(f, "box dim={} edges={}", e.len(), descriptor::join(&e))?;
                if lower.iter().any(|c| *c != 0.0) {
                    write!(f, " lower={}", descriptor::join(lower))?;
                }
            }
            Shape::Ellipsoid { axes } => write!(f, "ellipsoid axes={}", descriptor::join(axes))?,
        }
        if let Some(o) = self.geometry_override {
            write!(f, " override lc={} convex={}", o.lc, o.convex)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn affine(unit: &[f64], shift: &[f64], scale: &[f64]) -> Vec<f64> {
    let dim = shift.len();
    unit.chunks_exact(dim)
        .flat_map(|u| u.iter().zip(shift.iter().zip(scale)).map(|(c, (s, a))| s + a * c))
        .collect()
}

/// Positive root of `a t² + 2b t + c = 0` for `c ≤ 0`, in cancellation-free form.
fn exit_root(a: f64, b: f64, c: f64) -> f64 {
    let disc = (b * b - a * c).max(0.0).sqrt();
    if b <= 0.0 {
        (-b + disc) / a
    } else {
        // (−b + disc)/a = −c / (b + disc)
        let den = b + disc;
        if den == 0.0 { 0.0 } else { -c / den }
    }
}

fn ellipsoid_level(axes: &[f64], x: &[f64]) -> f64 {
    x.iter().zip(axes).map(|(c, a)| (c / a) * (c / a)).sum()
}

/// `(axis, upper?, distance)` of the face nearest to `x`.
fn box_nearest_face(lower: &[f64], upper: &[f64], x: &[f64]) -> (usize, bool, f64) {
    let mut best = (0, false, f64::INFINITY);
    for (i, (c, (a, b))) in x.iter().zip(lower.iter().zip(upper)).enumerate() {
        if c - a < best.2 {
            best = (i, false, c - a);
        }
        if b - c < best.2 {
            best = (i, true, b - c);
        }
    }
    best
}

/// Tensor Gauss–Legendre rules on each of the `2·dim` faces.
fn box_faces(lower: &[f64], upper: &[f64], m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = lower.len();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for axis in 0..dim {
        let lo: Vec<f64> = (0..dim).filter(|&d| d != axis).map(|d| lower[d]).collect();
        let hi: Vec<f64> = (0..dim).filter(|&d| d != axis).map(|d| upper[d]).collect();
        let (fp, fw) = quadrature::box_rule(&lo, &hi, m)?;
        for fixed in [lower[axis], upper[axis]] {
            for (q, w) in fp.chunks_exact(dim - 1).zip(&fw) {
                points.extend_from_slice(&q[..axis]);
                points.push(fixed);
                points.extend_from_slice(&q[axis..]);
                weights.push(*w);
            }
        }
    }
    Ok((points, weights))
}

/// Closest point of the ellipsoid surface to an interior `x`.
///
/// Writes the Lagrange condition as `y_i = a_i² x_i/(a_i² + t)` with
/// `t ∈ (−a_min², 0]` and solves `Σ (a_i x_i/(a_i² + t))² = 1`. The unknown is
/// `s = t + a_min²`, so denominators near the pole keep full relative
/// precision. Newton steps are kept inside a shrinking bracket. When `x` has no
/// component along the shortest axes the root sits at `s = 0` and the
/// remainder goes to a shortest-axis coordinate.
fn ellipsoid_projection(axes: &[f64], x: &[f64]) -> Vec<f64> {
    let a_min2 = axes.iter().map(|a| a * a).fold(f64::INFINITY, f64::min);
    let gaps: Vec<f64> = axes.iter().map(|a| a * a - a_min2).collect();
    let f = |s: f64| -> (f64, f64) {
        let mut v = 0.0;
        let mut dv = 0.0;
        for ((a, c), g) in axes.iter().zip(x).zip(&gaps) {
            let den = g + s;
            let q = a * c / den;
            v += q * q;
            dv -= 2.0 * q * q / den;
        }
        (v - 1.0, dv)
    };
    let project = |s: f64| -> Vec<f64> {
        axes.iter().zip(x).zip(&gaps).map(|((a, c), g)| a * a * c / (g + s)).collect()
    };
    if f(a_min2).0 >= 0.0 {
        return project(a_min2);
    }
    let pole_free = gaps.iter().zip(x).all(|(g, c)| *g > 0.0 || *c == 0.0);
    if pole_free {
        let end: f64 = axes
            .iter()
            .zip(x)
            .zip(&gaps)
            .filter(|(_, g)| **g > 0.0)
            .map(|((a, c), g)| (a * c / g).powi(2))
            .sum();
        if end <= 1.0 {
            let mut y = vec![0.0; x.len()];
            let mut used = 0.0;
            let mut slot = None;
            for (i, ((a, c), g)) in axes.iter().zip(x).zip(&gaps).enumerate() {
                if *g > 0.0 {
                    y[i] = a * a * c / g;
                    used += (y[i] / a) * (y[i] / a);
                } else if slot.is_none() {
                    slot = Some(i);
                }
            }
            let k = slot.expect("some axis is shortest");
            y[k] = axes[k] * (1.0 - used).max(0.0).sqrt();
            return y;
        }
    }
    let (mut lo, mut hi) = (0.0, a_min2);
    let mut s = 0.5 * a_min2;
    for _ in 0..400 {
        let (v, dv) = f(s);
        if v == 0.0 {
            break;
        }
        if v > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - v / dv;
        let next = if newton > lo && newton < hi && dv.is_finite() { newton } else { 0.5 * (lo + hi) };
        if next == s || hi <= lo {
            break;
        }
        s = next;
    }
    project(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn ball_geometry() {
        let g = Domain::unit_ball(3).geometry();
        assert_eq!(g.diam, 2.0);
        assert_relative_eq!(g.volume, 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_eq!((g.lc, g.ld, g.convex), (Some(1.0), 0.0, true));
        for r in [0.5, 2.0, 7.0] {
            let g = Domain::ball(4, r).unwrap().geometry();
            assert_relative_eq!(g.lc.unwrap() * g.diam, 2.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn box_geometry() {
        let g = Domain::unit_box(4).geometry();
        assert_eq!((g.diam, g.volume, g.convex, g.ld), (2.0, 1.0, true, 0.0));
        assert_eq!(g.boundary_area, 8.0);
        assert_eq!(g.lc, None);
    }

    #[test]
    fn override_feeds_ld() {
        let d = Domain::unit_ball(3).with_override(5.0, false).unwrap();
        let g = d.geometry();
        assert_eq!((g.convex, g.ld), (false, 10.0));
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        assert!(matches!(Domain::ball(3, 0.0), Err(Error::InvalidDomain(_))));
        assert!(Domain::box_with_edges(&[1.0, -1.0]).is_err());
        assert!(Domain::ellipsoid(vec![1.0, 0.0]).is_err());
        assert!(Domain::ball(1, 1.0).is_err());
    }

    #[test]
    fn distances() {
        let b = Domain::unit_ball(3);
        assert_eq!(b.dist_to_boundary(&[0.0; 3]).unwrap(), 1.0);
        assert_eq!(b.dist_to_boundary(&[0.5, 0.0, 0.0]).unwrap(), 0.5);
        assert!(matches!(b.dist_to_boundary(&[1.5, 0.0, 0.0]), Err(Error::Domain(_))));
        let bx = Domain::unit_box(4);
        assert_eq!(bx.dist_to_boundary(&[0.25, 0.5, 0.5, 0.5]).unwrap(), 0.25);
    }

    #[test]
    fn ellipsoid_projection_is_orthogonal() {
        let e = Domain::ellipsoid(vec![2.0, 1.0, 0.5]).unwrap();
        let mut rng = rng::stream(3, "proj");
        for _ in 0..200 {
            let u = rng::uniform_in_ball(&mut rng, 3);
            let x: Vec<f64> = u.iter().zip([2.0, 1.0, 0.5]).map(|(c, a)| 0.999 * c * a).collect();
            let y = e.nearest_boundary_point(&x).unwrap();
            let lev = ellipsoid_level(&[2.0, 1.0, 0.5], &y);
            assert!((lev - 1.0).abs() < 1e-12, "x = {x:?} level {lev}");
            // x − y is parallel to the normal at y
            let n = e.outward_normal(&y);
            let d: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
            let len = norm(&d);
            if len > 1e-9 {
                let cos: f64 = d.iter().zip(&n).map(|(a, b)| a * b).sum::<f64>() / len;
                assert!((cos - 1.0).abs() < 1e-9, "cos = {cos}");
            }
        }
    }

    #[test]
    fn ellipsoid_degenerate_projection() {
        // the centre projects to the end of the shortest axis
        let e = Domain::ellipsoid(vec![2.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(e.dist_to_boundary(&[0.0; 3]).unwrap(), 1.0, max_relative = 1e-12);
        // a point on the long axis near the centre still projects sideways
        assert_relative_eq!(e.dist_to_boundary(&[0.3, 0.0, 0.0]).unwrap(), (1.0f64 - 0.09 / 3.0).sqrt() * 1.0, max_relative = 1e-6, epsilon = 0.0);
    }

    #[test]
    fn lc_estimates() {
        match Domain::unit_ball(3).lc_estimate(10_000, 1) {
            LcEstimate::Lipschitz(v) => assert!((0.9..=1.0 + 1e-9).contains(&v)),
            other => panic!("{other:?}"),
        }
        match Domain::ball(3, 2.0).unwrap().lc_estimate(2_000, 1) {
            LcEstimate::Lipschitz(v) => assert_relative_eq!(v, 0.5, max_relative = 1e-6),
            other => panic!("{other:?}"),
        }
        let e = Domain::ellipsoid(vec![2.0, 1.0, 1.0]).unwrap();
        match e.lc_estimate(10_000, 1) {
            LcEstimate::Lipschitz(v) => assert!(v <= 2.0 + 1e-9 && v > 1.0, "{v}"),
            other => panic!("{other:?}"),
        }
        assert_eq!(Domain::unit_box(3).lc_estimate(10, 1), LcEstimate::NotC2);
    }

    #[test]
    fn interior_rules_integrate_polynomials() {
        let b = Domain::unit_ball(3);
        for level in 1..=5 {
            let r = b.interior_quadrature(level).unwrap();
            assert_relative_eq!(r.total_weight(), 4.0 * PI / 3.0, max_relative = 1e-12);
            assert!(r.weights.iter().all(|w| *w > 0.0));
            if level >= 2 {
                let m2 = r.integrate(|x| x.iter().map(|c| c * c).sum());
                assert_relative_eq!(m2, 4.0 * PI / 5.0, max_relative = 1e-12);
            }
        }
        let bx = Domain::unit_box(4).interior_quadrature(2).unwrap();
        assert_relative_eq!(bx.integrate(|x| x.iter().product()), 1.0 / 16.0, max_relative = 1e-12);
    }

    #[test]
    fn boundary_rules() {
        let s = Domain::unit_ball(3).boundary_quadrature(3).unwrap();
        assert_relative_eq!(s.total_weight(), 4.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(s.integrate(|x| x[2] * x[2]), 4.0 * PI / 3.0, max_relative = 1e-12);
        let bx = Domain::unit_box(4).boundary_quadrature(2).unwrap();
        assert_relative_eq!(bx.total_weight(), 8.0, max_relative = 1e-13);
        // ellipse perimeter with a = 2, b = 1
        let e = Domain::ellipsoid(vec![2.0, 1.0]).unwrap();
        assert_relative_eq!(e.boundary_area(), 9.688_448_220_547_675, max_relative = 1e-10);
        // sphere by a ball-shaped ellipsoid
        let e = Domain::ellipsoid(vec![3.0, 3.0, 3.0]).unwrap();
        assert_relative_eq!(e.boundary_area(), 36.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn polar_rule_integrates_riesz_kernel() {
        let b = Domain::unit_ball(4);
        let rule = b.polar_quadrature(&[0.0; 4], 3, 8, 1.0).unwrap();
        // ∫_B |y|^{-2} dy = ω_4 / 2
        assert_relative_eq!(rule.total_weight(), PI * PI, max_relative = 1e-12);
        let off = b.polar_quadrature(&[0.3, -0.2, 0.1, 0.0], 5, 16, 3.0).unwrap();
        // β = dim − 1: plain volume
        assert_relative_eq!(off.total_weight(), PI * PI / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn descriptor_roundtrip() {
        for s in [
            "ball dim=3 r=1",
            "ball dim=2 r=0.5 center=1,2",
            "box dim=4 edges=1,1,1,1",
            "box dim=2 edges=1,2 lower=-1,0",
            "ellipsoid axes=2,1,1",
            "ball dim=3 r=1 override lc=5 convex=false",
        ] {
            let d = Domain::parse(s).unwrap();
            assert_eq!(d.to_string(), s);
            assert_eq!(Domain::parse(&d.to_string()).unwrap(), d);
        }
    }

    #[test]
    fn descriptor_errors_have_columns() {
        match Domain::parse("ball dim=3 rr=1") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 12),
            other => panic!("{other:?}"),
        }
        match Domain::parse("cube dim=3") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 1),
            other => panic!("{other:?}"),
        }
        assert!(Domain::parse("ball dim=3 r=-1").is_err());
        assert!(Domain::parse("").is_err());
    }
}
