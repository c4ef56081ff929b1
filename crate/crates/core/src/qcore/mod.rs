//! Exact spin labels, the deformation parameter and q-arithmetic.

mod arith;
mod param;
mod spin;

pub use arith::{
    alternating_qbinomial_sum, inverse_q_factorial, q_binomial, q_bracket, q_bracket_half,
    q_factorial, weighted_qbinomial_closed_form, weighted_qbinomial_sum,
};
pub use param::{PolarPoint, QParam, Regime, DEFAULT_GUARD_ORDER, GENERICITY_EPS};
pub use spin::{HalfInt, SpinTriple};
