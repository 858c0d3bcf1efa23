//! One-variable rational functions `numerator / denominator`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{poly_gcd_numeric, CPoly};
use crate::C64;

/// Root-matching radius used when cancelling common factors.
pub const DEFAULT_GCD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub numerator: CPoly,
    pub denominator: CPoly,
}

impl RationalFunction {
    pub fn new(numerator: CPoly, denominator: CPoly) -> Self {
        Self {
            numerator,
            denominator,
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.numerator.eval(z) / self.denominator.eval(z)
    }

    /// Cancels numerically common roots of numerator and denominator.
    pub fn reduced(&self, tol: f64) -> Result<Self> {
        if self.numerator.is_zero() {
            return Ok(Self::new(CPoly::zero(), CPoly::one()));
        }
        let red = poly_gcd_numeric(&self.numerator, &self.denominator, tol)?;
        Ok(Self::new(red.p, red.q))
    }
}

/// How a rational function meets the interpolation condition at one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeStatus {
    /// The function is defined at the node and takes the target value.
    Strict,
    /// Numerator and denominator both vanish there, with `q(λ) = w p(λ)`.
    Weak,
    Fail,
}

impl std::fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NodeStatus::Strict => "strict",
            NodeStatus::Weak => "weak",
            NodeStatus::Fail => "fail",
        })
    }
}

/// A certified rational interpolant `q / p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalInterpolant {
    pub function: RationalFunction,
    pub status: Vec<NodeStatus>,
    pub zeros_in_disk: usize,
    pub poles_in_disk: usize,
}

impl RationalInterpolant {
    pub fn numerator(&self) -> &CPoly {
        &self.function.numerator
    }

    pub fn denominator(&self) -> &CPoly {
        &self.function.denominator
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.function.eval(z)
    }

    pub fn all_strict(&self) -> bool {
        self.status.iter().all(|s| *s == NodeStatus::Strict)
    }
}
