//! Sparse real polynomials in `x1, …, x_dim`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// `Σ c_α x^α`, keyed by exponent vector. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn monomial(exponents: Vec<u32>, c: f64) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    /// The coordinate `x_i` (0-based `i`).
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Self {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, f64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: f64) {
        assert_eq!(exponents.len(), self.dim, "exponent length must equal dim");
        if c == 0.0 {
            return;
        }
        let v = self.terms.get(&exponents).copied().unwrap_or(0.0) + c;
        if v == 0.0 {
            self.terms.remove(&exponents);
        } else {
            self.terms.insert(exponents, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.dim, self.terms().map(|(e, c)| (e.clone(), c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }

    /// `|x|² · self`.
    pub fn times_norm_squared(&self) -> Self {
        let r2 = Self::from_terms(
            self.dim,
            (0..self.dim).map(|i| {
                let mut e = vec![0; self.dim];
                e[i] = 2;
                (e, 1.0)
            }),
        );
        self.mul(&r2)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in self.terms() {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * e[i] as f64);
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in self.terms() {
            for i in 0..self.dim {
                if e[i] >= 2 {
                    let mut f = e.clone();
                    f[i] -= 2;
                    out.add_term(f, c * (e[i] * (e[i] - 1)) as f64);
                }
            }
        }
        out
    }

    pub fn is_harmonic(&self) -> bool {
        let lap = self.laplacian();
        let scale = self.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max);
        let small = lap.terms().all(|(_, c)| c.abs() <= 1e-12 * scale.max(1.0));
        small
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = crate::sum::KahanSum::new();
        for (e, c) in self.terms() {
            let mut v = c;
            for (xi, k) in x.iter().zip(e) {
                if *k > 0 {
                    v *= xi.powi(*k as i32);
                }
            }
            acc.add(v);
        }
        acc.value()
    }

    /// Harmonic part of a homogeneous polynomial of degree `d`:
    /// `Σ_j (−1)^j |x|^{2j} Δ^j P / (2^j j! Π_{i=1}^{j} (n + 2d − 2i − 2))`.
    pub fn harmonic_projection(&self) -> Self {
        let n = self.dim as f64;
        let d = self.degree() as f64;
        let mut out = self.clone();
        let mut lap = self.clone();
        let mut r2j = Self::constant(self.dim, 1.0);
        let mut denom = 1.0;
        let mut j = 0.0;
        loop {
            lap = lap.laplacian();
            if lap.is_zero() {
                break;
            }
            j += 1.0;
            r2j = r2j.times_norm_squared();
            denom *= 2.0 * j * (n + 2.0 * d - 2.0 * j - 2.0);
            let sign = if (j as u32) % 2 == 1 { -1.0 } else { 1.0 };
            out = out.add(&r2j.mul(&lap).scale(sign / denom));
        }
        out
    }

    /// Parses `1*x1*x2 - 0.5*x3^2 + 2`; variables are `x1 … x_dim`.
    pub fn parse(dim: usize, s: &str) -> Result<Self> {
        Parser { s: s.as_bytes(), pos: 0, dim }.poly()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            if k > 0 && c >= 0.0 {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
            for (i, p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{p}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { column: self.pos + 1, message: msg.into() }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.dim);
        let mut sign = 1.0;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            sign = if c == b'-' { -1.0 } else { 1.0 };
            self.pos += 1;
        }
        loop {
            let (e, c) = self.term()?;
            out.add_term(e, sign * c);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = 1.0,
                Some(b'-') => sign = -1.0,
                Some(_) => return Err(self.err("expected + or -")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Vec<u32>, f64)> {
        let mut e = vec![0u32; self.dim];
        let mut c = 1.0;
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let start = self.pos;
                    let i = self.uint()? as usize;
                    if i == 0 || i > self.dim {
                        self.pos = start - 1;
                        return Err(self.err(format!("variable x{i} outside x1..x{}", self.dim)));
                    }
                    let mut k = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        k = self.uint()?;
                    }
                    e[i - 1] += k;
                }
                Some(b) if b.is_ascii_digit() || b == b'.' => c *= self.number()?,
                _ => return Err(self.err("expected a number or a variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((e, c));
            }
        }
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| {
                let col = start + 1;
                Error::Parse { column: col, message: "expected an integer".into() }
            })
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.s;
        let mut i = self.pos;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                i = j;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
            }
        }
        self.pos = i;
        std::str::from_utf8(&s[start..i])
            .ok()
            .and_then(|t| t.parse::<f64>().ok())
            .ok_or(Error::Parse { column: start + 1, message: "malformed number".into() })
    }
}
