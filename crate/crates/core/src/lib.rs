//! Numerical machinery for Dirichlet series attached to automorphic integrals
//! on the Hecke groups `G(λ)`.
//!
//! The crate is `no_std` compatible (it needs `alloc`). Enable the default
//! `std` feature for `std::error::Error` integration.
//!
//! Layout:
//!
//! * [`specialfn`]: Gamma, Bessel `J_ν`, confluent and Gauss hypergeometric
//!   functions, Tricomi `Ψ`.
//! * [`hecke`]: Hecke groups, the slash action and rational period functions.
//! * [`automorphic`]: Fourier coefficient series and `F(z)`.
//! * [`lseries`]: the completed Dirichlet series, its continuation pieces,
//!   functional-equation residuals and residue sums.
//! * [`identities`]: the Riesz-sum/Bessel identity, the resolvent/Tricomi
//!   identity, a Perron oracle and the Laplace-type kernels.
//! * [`quad`] and [`numeric`]: quadrature and extended precision helpers.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod automorphic;
pub mod error;
pub mod hecke;
pub mod identities;
pub mod lseries;
pub mod numeric;
pub mod quad;
pub mod specialfn;

pub use error::{Error, Result, Warning};
pub use num_complex::Complex64;

/// Library version string, echoed into report sidecars.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `i^n` for an integer exponent, exact.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}
