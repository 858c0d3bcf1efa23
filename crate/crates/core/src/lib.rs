pub mod bidisk;
pub mod cli;
pub mod disk;
pub mod error;
pub mod io;
pub mod krein;
pub mod linalg;
pub mod pick;
pub mod random;
pub mod rational;
pub mod realization;
pub mod verify;

pub use error::{Result, TakagiError};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
