//! Monomial ideals and their squares, the complexes `L^2_q` and Taylor,
//! discrete Morse matchings on them, and an lcm-lattice Betti-number oracle.

pub mod betti;
pub mod complex;
pub mod divrel;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod monomial;
pub mod morse;
pub mod packed;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
