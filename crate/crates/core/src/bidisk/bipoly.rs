//! Polynomials in two variables stored as a coefficient grid.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TakagiError};
use crate::linalg::{CMatrix, CPoly, MoebiusMap, TRIM_TOL};
use crate::rational::RationalFunction;
use crate::realization::{inverse_dft, root_of_unity};
use crate::C64;

/// `Σ c_kl (λ¹)^k (λ²)^l` with `c_kl` at row `k`, column `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    coeffs: CMatrix,
}

/// Serialized form: rows indexed by the power of the first variable.
#[derive(Serialize, Deserialize)]
struct BiPolyRepr(Vec<Vec<C64>>);

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.coeffs.nrows())
            .map(|k| self.coeffs.row(k).iter().copied().collect())
            .collect();
        BiPolyRepr(rows).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let BiPolyRepr(rows) = BiPolyRepr::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("coefficient grid must be a non-empty rectangle"));
        }
        Ok(BiPoly::new(CMatrix::from_fn(rows.len(), cols, |k, l| rows[k][l])))
    }
}

impl BiPoly {
    /// Wraps a coefficient grid; an empty grid becomes the zero polynomial.
    pub fn new(coeffs: CMatrix) -> Self {
        if coeffs.nrows() == 0 || coeffs.ncols() == 0 {
            return Self::zero();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: CMatrix::zeros(1, 1),
        }
    }

    pub fn one() -> Self {
        Self {
            coeffs: CMatrix::from_element(1, 1, C64::new(1.0, 0.0)),
        }
    }

    /// Embeds a polynomial in the first variable.
    pub fn from_first(p: &CPoly) -> Self {
        let c = p.coeffs();
        Self::new(CMatrix::from_fn(c.len().max(1), 1, |k, _| c.get(k).copied().unwrap_or_default()))
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize, l: usize) -> C64 {
        if k < self.coeffs.nrows() && l < self.coeffs.ncols() {
            self.coeffs[(k, l)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// Storage shape minus one in each variable.
    pub fn declared_bidegree(&self) -> (usize, usize) {
        (self.coeffs.nrows() - 1, self.coeffs.ncols() - 1)
    }

    /// Sum of coefficient moduli.
    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Highest powers carrying a coefficient above `TRIM_TOL` relative to the
    /// largest one, or `None` for the zero polynomial.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        if max == 0.0 {
            return None;
        }
        let cut = TRIM_TOL * max;
        let mut d = (0, 0);
        for k in 0..self.coeffs.nrows() {
            for l in 0..self.coeffs.ncols() {
                if self.coeffs[(k, l)].norm() > cut {
                    d.0 = d.0.max(k);
                    d.1 = d.1.max(l);
                }
            }
        }
        Some(d)
    }

    /// Grid enlarged with zeros to bidegree `(d1, d2)` (never truncates).
    pub fn padded(&self, d1: usize, d2: usize) -> Self {
        let (r, c) = (self.coeffs.nrows().max(d1 + 1), self.coeffs.ncols().max(d2 + 1));
        Self::new(CMatrix::from_fn(r, c, |k, l| self.coeff(k, l)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.map(|c| c * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = self.coeffs.nrows().max(other.coeffs.nrows());
        let c = self.coeffs.ncols().max(other.coeffs.ncols());
        Self::new(CMatrix::from_fn(r, c, |k, l| self.coeff(k, l) + other.coeff(k, l)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a1, a2) = self.declared_bidegree();
        let (b1, b2) = other.declared_bidegree();
        let mut out = CMatrix::zeros(a1 + b1 + 1, a2 + b2 + 1);
        for k in 0..=a1 {
            for l in 0..=a2 {
                let s = self.coeffs[(k, l)];
                if s == C64::new(0.0, 0.0) {
                    continue;
                }
                for m in 0..=b1 {
                    for n in 0..=b2 {
                        out[(k + m, l + n)] += s * other.coeffs[(m, n)];
                    }
                }
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, z: [C64; 2]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for k in (0..self.coeffs.nrows()).rev() {
            let mut row = C64::new(0.0, 0.0);
            for l in (0..self.coeffs.ncols()).rev() {
                row = row * z[1] + self.coeffs[(k, l)];
            }
            acc = acc * z[0] + row;
        }
        acc
    }

    /// `(λ¹)^{d1} (λ²)^{d2} conj p(1/λ̄¹, 1/λ̄²)`, requiring the declared
    /// bidegree to fit in `(d1, d2)`.
    pub fn reflect(&self, d1: usize, d2: usize) -> Result<Self> {
        if let Some((a, b)) = self.bidegree() {
            if a > d1 || b > d2 {
                return Err(TakagiError::DegreeTooSmall {
                    declared: d1.max(d2),
                    actual: if a > d1 { a } else { b },
                });
            }
        }
        Ok(Self::new(CMatrix::from_fn(d1 + 1, d2 + 1, |k, l| {
            self.coeff(d1 - k, d2 - l).conj()
        })))
    }

    /// Polynomial in the first variable obtained by fixing `λ² = c`.
    pub fn slice_first(&self, c: C64) -> CPoly {
        CPoly::new(
            (0..self.coeffs.nrows())
                .map(|k| {
                    (0..self.coeffs.ncols())
                        .rev()
                        .fold(C64::new(0.0, 0.0), |acc, l| acc * c + self.coeffs[(k, l)])
                })
                .collect(),
        )
    }

    /// Polynomial in the second variable obtained by fixing `λ¹ = c`.
    pub fn slice_second(&self, c: C64) -> CPoly {
        CPoly::new(
            (0..self.coeffs.ncols())
                .map(|l| {
                    (0..self.coeffs.nrows())
                        .rev()
                        .fold(C64::new(0.0, 0.0), |acc, k| acc * c + self.coeffs[(k, l)])
                })
                .collect(),
        )
    }

    /// Substitutes Möbius maps in both variables and clears denominators:
    /// returns `p(m₁(λ¹), m₂(λ²)) (1 − ā₁λ¹)^{d1} (1 − ā₂λ²)^{d2}`.
    pub fn compose(&self, m: [&MoebiusMap; 2], d1: usize, d2: usize) -> Result<Self> {
        let g = self.padded(d1, d2);
        // first variable, one column at a time
        let mut stage = CMatrix::zeros(d1 + 1, d2 + 1);
        for l in 0..=d2 {
            let col = CPoly::new(g.coeffs.column(l).iter().copied().collect());
            let (p, _) = m[0].compose_poly(&col, d1)?;
            for k in 0..=d1 {
                stage[(k, l)] = p.coeff(k);
            }
        }
        let mut out = CMatrix::zeros(d1 + 1, d2 + 1);
        for k in 0..=d1 {
            let row = CPoly::new(stage.row(k).iter().copied().collect());
            let (p, _) = m[1].compose_poly(&row, d2)?;
            for l in 0..=d2 {
                out[(k, l)] = p.coeff(l);
            }
        }
        Ok(Self::new(out))
    }

    /// `z ↦ p(z, ω m(z))` with denominators cleared by `(1 − ā z)^{d2}`.
    pub fn restrict_balanced(&self, disk: &BalancedDisk, d2: usize) -> Result<CPoly> {
        let g = self.padded(0, d2);
        let num = disk.map.numerator().scale(disk.rotation);
        let den = disk.map.denominator();
        let mut num_pow = vec![CPoly::one()];
        let mut den_pow = vec![CPoly::one()];
        for l in 1..=d2 {
            num_pow.push(&num_pow[l - 1] * &num);
            den_pow.push(&den_pow[l - 1] * &den);
        }
        let mut out = CPoly::zero();
        for l in 0..=d2 {
            let column = CPoly::new(g.coeffs.column(l).iter().copied().collect());
            let term = &(&column * &num_pow[l]) * &den_pow[d2 - l];
            out = &out + &term;
        }
        Ok(out)
    }

    /// Interpolates from values on the grid of `(d1+1)`-th by `(d2+1)`-th
    /// roots of unity, where `values[(s, t)] = p(ω₁^s, ω₂^t)`.
    pub fn from_unit_grid(values: &CMatrix) -> Self {
        let (n1, n2) = (values.nrows(), values.ncols());
        let mut stage = CMatrix::zeros(n1, n2);
        for s in 0..n1 {
            let row: Vec<C64> = values.row(s).iter().copied().collect();
            for (l, c) in inverse_dft(&row).into_iter().enumerate() {
                stage[(s, l)] = c;
            }
        }
        let mut out = CMatrix::zeros(n1, n2);
        for l in 0..n2 {
            let col: Vec<C64> = stage.column(l).iter().copied().collect();
            for (k, c) in inverse_dft(&col).into_iter().enumerate() {
                out[(k, l)] = c;
            }
        }
        Self::new(out)
    }

    /// Sample points of [`BiPoly::from_unit_grid`].
    pub fn unit_grid_point(s: usize, t: usize, d1: usize, d2: usize) -> [C64; 2] {
        [root_of_unity(s, d1 + 1), root_of_unity(t, d2 + 1)]
    }
}

/// The balanced disk `{(z, ω m(z))}` for a Möbius involution `m` and a
/// unimodular rotation `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedDisk {
    pub map: MoebiusMap,
    pub rotation: C64,
}

impl BalancedDisk {
    pub fn new(map: MoebiusMap, rotation: C64) -> Result<Self> {
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(TakagiError::InvalidInput("rotation must be unimodular".into()));
        }
        Ok(Self { map, rotation })
    }

    pub fn point(&self, z: C64) -> [C64; 2] {
        [z, self.rotation * self.map.eval(z)]
    }
}

/// Two-variable rational function `numerator / denominator`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiRational {
    pub numerator: BiPoly,
    pub denominator: BiPoly,
}

impl BiRational {
    pub fn new(numerator: BiPoly, denominator: BiPoly) -> Self {
        Self {
            numerator,
            denominator,
        }
    }

    pub fn eval(&self, z: [C64; 2]) -> C64 {
        self.numerator.eval(z) / self.denominator.eval(z)
    }

    /// Bidegree of the coefficient supports of numerator and denominator.
    pub fn support_bidegree(&self) -> (usize, usize) {
        let a = self.numerator.bidegree().unwrap_or((0, 0));
        let b = self.denominator.bidegree().unwrap_or((0, 0));
        (a.0.max(b.0), a.1.max(b.1))
    }

    /// Bidegree after cancelling common factors, read off generic slices:
    /// the degree in `λ¹` is the largest reduced degree of
    /// `λ¹ ↦ φ(λ¹, c)` over the given constants `c`, and symmetrically.
    pub fn reduced_bidegree(&self, probes: &[C64], gcd_tol: f64) -> Result<(usize, usize)> {
        let mut d = (0, 0);
        for &c in probes {
            let first = RationalFunction::new(self.numerator.slice_first(c), self.denominator.slice_first(c))
                .reduced(gcd_tol)?;
            let second = RationalFunction::new(self.numerator.slice_second(c), self.denominator.slice_second(c))
                .reduced(gcd_tol)?;
            d.0 = d.0.max(rational_degree(&first));
            d.1 = d.1.max(rational_degree(&second));
        }
        Ok(d)
    }

    /// `z ↦ φ(z, ω m(z))` as a reduced one-variable function.
    pub fn restrict_balanced(&self, disk: &BalancedDisk, gcd_tol: f64) -> Result<RationalFunction> {
        let d2 = self.support_bidegree().1;
        let num = self.numerator.restrict_balanced(disk, d2)?;
        let den = self.denominator.restrict_balanced(disk, d2)?;
        if den.is_zero() || restricted_vanishes(&den) {
            return Err(TakagiError::NumericalBreakdown(
                "restricted denominator vanishes identically".into(),
            ));
        }
        RationalFunction::new(num, den).reduced(gcd_tol)
    }
}

fn rational_degree(f: &RationalFunction) -> usize {
    f.numerator.degree().unwrap_or(0).max(f.denominator.degree().unwrap_or(0))
}

/// True when a polynomial is negligible at 16 points spread over the disk.
fn restricted_vanishes(p: &CPoly) -> bool {
    let scale = p.norm();
    (0..16).all(|k| {
        let z = C64::from_polar(0.3 + 0.04 * k as f64, 0.7 * k as f64);
        p.eval(z).norm() <= 1e-12 * scale
    })
}
