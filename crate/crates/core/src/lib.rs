//! Exact p-adic interpolation toolkit: Mahler expansions, Morita gamma,
//! Kubota–Leopoldt and two-prime zeta branches, zeta measures, Haran-style
//! beta chains with their q-deformations, and floating-point checks of the
//! theta and completed-zeta functional equations.

pub mod analytic;
pub mod chains;
pub mod error;
pub mod gamma;
pub mod mahler;
pub mod measures;
pub mod modular;
pub mod padic;
pub mod rational;
pub mod zeta;

pub use error::{Error, Result};
pub use padic::{PadicNumber, PrimePair};
pub use rational::{BigRational, PolyRational};
