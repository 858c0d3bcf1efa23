//! One-variable complex polynomials with coefficients stored in ascending order.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Schur;
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use crate::error::{Result, TakagiError};
use crate::C64;

/// Relative threshold (against the largest coefficient) used when computing degrees.
pub const TRIM_TOL: f64 = 1e-10;

/// A complex polynomial `Σ c_k z^k`.
///
/// Coefficients are kept as given; [`CPoly::degree`] ignores trailing
/// coefficients below `TRIM_TOL * max|c|`, and [`CPoly::trimmed`] drops them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

impl CPoly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1 z`
    pub fn linear(c0: C64, c1: C64) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); k + 1];
        c[k] = C64::new(1.0, 0.0);
        Self::new(c)
    }

    /// `leading · Π (z − r)`
    pub fn from_roots(roots: &[C64], leading: C64) -> Self {
        let mut c = vec![leading];
        for &r in roots {
            let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero past the stored length).
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Index of the last coefficient above the trim threshold; `None` for the
    /// zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let cut = TRIM_TOL * self.max_abs_coeff();
        if self.max_abs_coeff() == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > cut)
    }

    /// Degree with the `-1` convention for the zero polynomial.
    pub fn signed_degree(&self) -> isize {
        self.degree().map_or(-1, |d| d as isize)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn trimmed(&self) -> Self {
        match self.degree() {
            None => Self::zero(),
            Some(d) => Self::new(self.coeffs[..=d].to_vec()),
        }
    }

    pub fn leading(&self) -> C64 {
        self.degree().map_or(C64::new(0.0, 0.0), |d| self.coeffs[d])
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Pads with zero coefficients so at least `len` are stored.
    pub fn padded(&self, len: usize) -> Self {
        let mut c = self.coeffs.clone();
        if c.len() < len {
            c.resize(len, C64::new(0.0, 0.0));
        }
        Self::new(c)
    }

    /// Reflection with respect to a declared degree `d`:
    /// `p̃(z) = z^d · conj(p(1/z̄))`, so coefficient `k` of the result is the
    /// conjugate of coefficient `d − k` of `p`.
    pub fn reflect(&self, d: usize) -> Result<Self> {
        if let Some(actual) = self.degree() {
            if actual > d {
                return Err(TakagiError::DegreeTooSmall {
                    declared: d,
                    actual,
                });
            }
        }
        Ok(Self::new(
            (0..=d).map(|k| self.coeff(d - k).conj()).collect(),
        ))
    }

    /// Roots via the eigenvalues of the companion matrix, repeated by multiplicity.
    pub fn roots(&self) -> Result<Vec<C64>> {
        self.roots_with(false)
    }

    /// As [`CPoly::roots`], followed by a few Newton steps on each root.
    pub fn roots_polished(&self) -> Result<Vec<C64>> {
        self.roots_with(true)
    }

    pub fn roots_with(&self, polish: bool) -> Result<Vec<C64>> {
        let p = self.trimmed();
        let d = p.degree().ok_or(TakagiError::ZeroPolynomial)?;
        let c = p.coeffs();
        let zeros_at_origin = c.iter().take_while(|z| **z == C64::new(0.0, 0.0)).count();
        let mut roots = vec![C64::new(0.0, 0.0); zeros_at_origin];
        let rest = &c[zeros_at_origin..];
        let n = d - zeros_at_origin;
        if n == 0 {
            return Ok(roots);
        }
        let lead = rest[n];
        let mut companion = CMatrix::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..n {
            companion[(i, n - 1)] = -rest[i] / lead;
        }
        let eig = Schur::new(companion)
            .eigenvalues()
            .ok_or_else(|| TakagiError::NumericalBreakdown("companion Schur form".into()))?;
        let deriv = p.derivative();
        for mut r in eig.iter().copied() {
            if polish {
                for _ in 0..3 {
                    let dp = deriv.eval(r);
                    if dp.norm() == 0.0 {
                        break;
                    }
                    let step = p.eval(r) / dp;
                    if !step.is_finite() {
                        break;
                    }
                    r -= step;
                }
            }
            roots.push(r);
        }
        Ok(roots)
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return CPoly::zero();
        }
        let mut c = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CPoly::new(c)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Result of cancelling numerically common roots of two polynomials.
#[derive(Debug, Clone)]
pub struct GcdReduction {
    pub p: CPoly,
    pub q: CPoly,
    /// Monic polynomial whose roots were removed from both.
    pub common: CPoly,
}

/// Cancels roots of `p` and `q` that lie within `tol` of each other.
///
/// Pairs are matched greedily by increasing distance. When nothing matches the
/// inputs are returned (trimmed) without being rebuilt from their roots.
pub fn poly_gcd_numeric(p: &CPoly, q: &CPoly, tol: f64) -> Result<GcdReduction> {
    if p.is_zero() || q.is_zero() {
        return Err(TakagiError::ZeroPolynomial);
    }
    let rp = p.roots()?;
    let rq = q.roots()?;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in rp.iter().enumerate() {
        for (j, b) in rq.iter().enumerate() {
            let dist = (a - b).norm();
            if dist <= tol {
                pairs.push((dist, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used_p = vec![false; rp.len()];
    let mut used_q = vec![false; rq.len()];
    let mut common_roots = Vec::new();
    for (_, i, j) in pairs {
        if !used_p[i] && !used_q[j] {
            used_p[i] = true;
            used_q[j] = true;
            common_roots.push((rp[i] + rq[j]) * 0.5);
        }
    }
    if common_roots.is_empty() {
        return Ok(GcdReduction {
            p: p.trimmed(),
            q: q.trimmed(),
            common: CPoly::one(),
        });
    }
    let keep = |roots: &[C64], used: &[bool]| -> Vec<C64> {
        roots
            .iter()
            .zip(used)
            .filter(|(_, &u)| !u)
            .map(|(r, _)| *r)
            .collect()
    };
    Ok(GcdReduction {
        p: CPoly::from_roots(&keep(&rp, &used_p), p.leading()),
        q: CPoly::from_roots(&keep(&rq, &used_q), q.leading()),
        common: CPoly::from_roots(&common_roots, C64::new(1.0, 0.0)),
    })
}
