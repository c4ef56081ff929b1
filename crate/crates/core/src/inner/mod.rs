//! Quadrature and scalar products.

pub mod norms;
pub mod product;
pub mod quad;

pub use norms::{
    g_antiderivative, norm_closed_form, norm_integral_circle, norm_integral_real,
    partial_fraction_coefficient, qbeta_closed_form, qbeta_generic, qbeta_integral,
    ramanujan_qbeta, vilenkin_ortho_integral, CircleNorm, DualEvaluation,
};
pub use product::{
    circle_orthonormality_bound, classical_scalar_product, gram_matrix, scalar_product,
    scalar_product_circle_q, scalar_product_real_q, GramReport, InnerProductReport, ProductRegime,
    QPair,
};
pub use quad::{
    integrate, integrate_halfline, quad_halfline, HalfLineTransform, QuadResult, QuadratureSpec,
};
