use serde::{Deserialize, Serialize};

use super::poly::CPoly;
use crate::error::{Result, TakagiError};
use crate::C64;

/// The disk automorphism `m(z) = (a − z) / (1 − ā z)`, which swaps `0` and `a`
/// and is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    a: C64,
}

impl MoebiusMap {
    pub fn swap(a: C64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(TakagiError::MoebiusOutsideDisk { modulus: a.norm() });
        }
        Ok(Self { a })
    }

    pub fn parameter(&self) -> C64 {
        self.a
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.a - z) / (C64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// `1 − ā z`, the denominator of the map.
    pub fn denominator(&self) -> CPoly {
        CPoly::linear(C64::new(1.0, 0.0), -self.a.conj())
    }

    /// `a − z`, the numerator of the map.
    pub fn numerator(&self) -> CPoly {
        CPoly::linear(self.a, C64::new(-1.0, 0.0))
    }

    /// Composes `p ∘ m` for a polynomial of declared degree `d` and clears
    /// denominators: returns `(P, (1 − ā z)^d)` with
    /// `P(z) = Σ_k p_k (a − z)^k (1 − ā z)^{d−k}`.
    pub fn compose_poly(&self, p: &CPoly, d: usize) -> Result<(CPoly, CPoly)> {
        if let Some(actual) = p.degree() {
            if actual > d {
                return Err(TakagiError::DegreeTooSmall {
                    declared: d,
                    actual,
                });
            }
        }
        let num = self.numerator();
        let den = self.denominator();
        let num_powers: Vec<CPoly> = successive_powers(&num, d);
        let den_powers: Vec<CPoly> = successive_powers(&den, d);
        let mut out = CPoly::zero();
        for k in 0..=d {
            let term = (&num_powers[k] * &den_powers[d - k]).scale(p.coeff(k));
            out = &out + &term;
        }
        Ok((out, den_powers[d].clone()))
    }
}

pub(crate) fn successive_powers(p: &CPoly, d: usize) -> Vec<CPoly> {
    let mut v = Vec::with_capacity(d + 1);
    v.push(CPoly::one());
    for k in 1..=d {
        let next = &v[k - 1] * p;
        v.push(next);
    }
    v
}
