use alloc::string::String;

use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid spin labels: {0}")]
    InvalidSpin(String),

    #[error("invalid deformation parameter: {0}")]
    InvalidQ(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("denominator factor {factor} vanishes within {eps:e}")]
    Pole { factor: Complex64, eps: f64 },

    #[error("product/series did not converge within {terms} terms (partial {partial}, tail bound {bound:e})")]
    Truncation {
        partial: Complex64,
        bound: f64,
        terms: usize,
    },

    #[error("quadrature did not reach tolerance (value {value}, estimated error {est_error:e})")]
    Quadrature { value: Complex64, est_error: f64 },

    #[error("argument phase {phase} cannot be brought into the sector |arg| <= {bound}")]
    Sector { phase: f64, bound: f64 },

    #[error("intermediate argument {0} sits on the logarithm branch point")]
    Degenerate(Complex64),
}
