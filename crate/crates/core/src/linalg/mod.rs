//! Dense complex linear algebra and one-variable polynomial arithmetic.

mod blaschke;
mod matrix;
mod moebius;
mod poly;

pub use blaschke::BlaschkeProduct;
pub use matrix::*;
pub use moebius::MoebiusMap;
pub use poly::{poly_gcd_numeric, CPoly, GcdReduction, TRIM_TOL};
