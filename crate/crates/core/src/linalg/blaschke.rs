use serde::{Deserialize, Serialize};

use super::poly::CPoly;
use crate::error::{Result, TakagiError};
use crate::C64;

/// Finite Blaschke product `c · Π (z − a_k) / (1 − ā_k z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    pub zeros: Vec<C64>,
    pub constant: C64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>, constant: C64) -> Result<Self> {
        if let Some(z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(TakagiError::InvalidInput(format!(
                "Blaschke zero {z} is not inside the unit disk"
            )));
        }
        if (constant.norm() - 1.0).abs() > 1e-12 {
            return Err(TakagiError::InvalidInput(format!(
                "Blaschke constant {constant} is not unimodular"
            )));
        }
        Ok(Self { zeros, constant })
    }

    pub fn identity_constant() -> Self {
        Self {
            zeros: Vec::new(),
            constant: C64::new(1.0, 0.0),
        }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.zeros.iter().fold(self.constant, |acc, &a| {
            acc * (z - a) / (C64::new(1.0, 0.0) - a.conj() * z)
        })
    }

    /// Numerator `c · Π (z − a_k)`.
    pub fn numerator(&self) -> CPoly {
        CPoly::from_roots(&self.zeros, self.constant)
    }

    /// Denominator `Π (1 − ā_k z)`.
    pub fn denominator(&self) -> CPoly {
        self.zeros.iter().fold(CPoly::one(), |acc, a| {
            &acc * &CPoly::linear(C64::new(1.0, 0.0), -a.conj())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_product(rng: &mut ChaCha8Rng, n: usize) -> BlaschkeProduct {
        let zeros = (0..n)
            .map(|_| C64::from_polar(rng.gen_range(0.0..0.95), rng.gen_range(0.0..6.3)))
            .collect();
        BlaschkeProduct::new(zeros, C64::from_polar(1.0, rng.gen_range(0.0..6.3))).unwrap()
    }

    #[test]
    fn unimodular_on_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..5 {
            let b = random_product(&mut rng, n);
            for k in 0..64 {
                let z = C64::from_polar(1.0, k as f64 * 0.1);
                assert!((b.eval(z).norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn contractive_inside_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..5 {
            let b = random_product(&mut rng, n);
            for _ in 0..64 {
                let z = C64::from_polar(rng.gen_range(0.0..0.999), rng.gen_range(0.0..6.3));
                assert!(b.eval(z).norm() < 1.0);
            }
        }
    }

    #[test]
    fn polynomial_form_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b = random_product(&mut rng, 3);
        let z = C64::new(0.2, -0.3);
        assert!((b.numerator().eval(z) / b.denominator().eval(z) - b.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_zero() {
        assert!(BlaschkeProduct::new(vec![C64::new(1.0, 0.0)], C64::new(1.0, 0.0)).is_err());
    }
}
