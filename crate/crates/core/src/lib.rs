//! Numerics for the su_q(2) realization on the two-sphere.
//!
//! The crate evaluates the q-Vilenkin basis functions `Ψ^J_MNq` and the
//! scalar function `Q_Jq` in every (J-parity × q-regime) case, applies the
//! generators `H3`, `H±` and the Casimir to single Fourier modes, and
//! evaluates the two scalar products that make the realization unitary for
//! `q = e^τ` and for generic `q = e^{iτ}`.
//!
//! Modules, bottom-up:
//!
//! - [`qcore`]: exact half-integer labels, the deformation parameter and
//!   q-numbers, q-factorials and q-binomials.
//! - [`qprod`]: `Q_Jq` from finite and infinite products and from the
//!   `₁Φ₀` series.
//! - [`contour`]: the half-line integral `L_q`, its continuation off the
//!   positive axis, and `Q_Jq` for half-odd `J` on the unit circle.
//! - [`vilenkin`]: the `R` polynomial, normalization constants, `P^J_MNq`
//!   and `Ψ^J_MNq`, plus the classical `q = 1` functions.
//! - [`algebra`]: `H3`, `H±`, Casimir on angular modes.
//! - [`inner`]: quadrature, scalar products, norm integrals, Ramanujan's
//!   continuous q-beta integral, Gram matrices.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod contour;
mod error;
pub mod inner;
mod linalg;
pub mod qcore;
pub mod qprod;
mod special;
pub mod vilenkin;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qcore::{HalfInt, PolarPoint, QParam, Regime, SpinTriple};
