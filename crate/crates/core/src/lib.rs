//! Exact verification of the sharp embedding W^{k,2}_0(-1,1) -> L^1(-1,1).
//!
//! The crate builds the left-inverse kernels of the k-th derivative, evaluates
//! the sharp constant `1/((2k-1)!! sqrt(k+1/2))` in exact arithmetic and checks
//! it against monic Legendre norms, Landau-kernel norms, Kalyabin's two-sided
//! estimate and a Galerkin discretisation of the Rayleigh quotient.

pub mod constants;
pub mod error;
pub mod exactnum;
pub mod kernel;
pub mod poly;
pub mod variational;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{RadicalScalar, Rational};
pub use poly::Poly;
