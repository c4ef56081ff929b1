//! The unitarizing scalar products and Gram matrices.
//!
//! For modes `ψ = f(ρ) e^{−imφ}` the φ-integral gives `2π δ_{m₁m₂}`, and
//! with `B = (q−q⁻¹)/(2 ln q)` and `w∓(ρ) = 1/((1+ρ²)(1+q^{∓2}ρ²))`:
//!
//! ```text
//! q real:   2πB ∫ρdρ [ conj f₁(ρ;q⁻¹) w₋ q⁻¹ f₂(q⁻¹ρ;q) + conj f₁(ρ;q) w₊ q f₂(qρ;q⁻¹) ]
//! q = e^{iτ}: 2πB ∫ρdρ [ conj f₁(ρ;q) w₋ q⁻¹ f₂(q⁻¹ρ;q) + conj f₁(ρ;q⁻¹) w₊ q f₂(qρ;q⁻¹) ]
//! ```

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::quad::{integrate_halfline, QuadratureSpec};
use crate::algebra::{apply_h_minus, apply_h_plus, AngularMode};
use crate::linalg::hermitian_eigenvalues;
use crate::qcore::{HalfInt, PolarPoint, QParam, Regime, SpinTriple};
use crate::vilenkin::VilenkinSpec;
use crate::{Error, Result};

/// A mode supplied at both `q` and `q^{-1}`.
#[derive(Debug, Clone)]
pub struct QPair {
    pub at_q: AngularMode,
    pub at_q_inv: AngularMode,
}

impl QPair {
    pub fn new(at_q: AngularMode, at_q_inv: AngularMode) -> Result<Self> {
        if at_q.m != at_q_inv.m {
            return Err(Error::Domain(format!(
                "pair members carry different modes ({} and {})",
                at_q.m, at_q_inv.m
            )));
        }
        Ok(QPair { at_q, at_q_inv })
    }

    /// `Ψ^J_MNq` together with `Ψ^J_MNq⁻¹`.
    pub fn from_vilenkin(spec: &VilenkinSpec) -> Self {
        QPair {
            at_q: AngularMode::from_vilenkin(spec),
            at_q_inv: AngularMode::from_vilenkin(&spec.at_inverse_q()),
        }
    }

    /// A q-independent mode used for both members.
    pub fn constant(mode: AngularMode) -> Self {
        let mut inv = mode.clone();
        inv.q = mode.q.inv();
        QPair {
            at_q: mode,
            at_q_inv: inv,
        }
    }

    pub fn m(&self) -> i32 {
        self.at_q.m
    }

    pub fn q(&self) -> QParam {
        self.at_q.q
    }

    /// `H+` on both members (each with its own `q`).
    pub fn h_plus(&self, n: HalfInt) -> Self {
        QPair {
            at_q: apply_h_plus(&self.at_q, n).mode,
            at_q_inv: apply_h_plus(&self.at_q_inv, n).mode,
        }
    }

    /// `H−` on both members.
    pub fn h_minus(&self, n: HalfInt) -> Self {
        QPair {
            at_q: apply_h_minus(&self.at_q, n).mode,
            at_q_inv: apply_h_minus(&self.at_q_inv, n).mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductRegime {
    RealQ,
    CircleQ,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProductReport {
    pub value: Complex64,
    pub est_error: f64,
    pub regime: ProductRegime,
    pub converged: bool,
}

fn zero_report(regime: ProductRegime) -> InnerProductReport {
    InnerProductReport {
        value: Complex64::new(0.0, 0.0),
        est_error: 0.0,
        regime,
        converged: true,
    }
}

fn check_pairs(psi1: &QPair, psi2: &QPair, q: &QParam) -> Result<()> {
    for p in [psi1, psi2] {
        if p.at_q.q != *q || p.at_q_inv.q != q.inv() {
            return Err(Error::Domain(format!(
                "pair built for {} / {} used with q = {q}",
                p.at_q.q, p.at_q_inv.q
            )));
        }
    }
    Ok(())
}

/// `⟨ψ₁|ψ₂⟩_q` for real `q`.
pub fn scalar_product_real_q(
    psi1: &QPair,
    psi2: &QPair,
    q: &QParam,
    spec: &QuadratureSpec,
) -> Result<InnerProductReport> {
    if q.regime() != Regime::PositiveReal {
        return Err(Error::Domain(format!("expected real q, got {q}")));
    }
    two_term_product(psi1, psi2, q, spec, ProductRegime::RealQ)
}

/// `⟨ψ₁|ψ₂⟩_q` for generic `q = e^{iτ}`.
///
/// The basis `Ψ^J_MN` is orthonormal (and the product Hermitian on it) only
/// while `|τ| <` [`circle_orthonormality_bound`]`(J)`; beyond that the poles of
/// `Q_Jq` at `η = −q^{2p−2J}` sit between the rays `ρ` and `q^{±1}ρ`.
pub fn scalar_product_circle_q(
    psi1: &QPair,
    psi2: &QPair,
    q: &QParam,
    spec: &QuadratureSpec,
) -> Result<InnerProductReport> {
    if q.regime() != Regime::UnitCircle {
        return Err(Error::Domain(format!(
            "expected q on the unit circle, got {q}"
        )));
    }
    two_term_product(psi1, psi2, q, spec, ProductRegime::CircleQ)
}

/// `π/(2J+2)`, the largest `|τ|` for which the circle product keeps
/// `{Ψ^{J'}_MN : J' ≤ J}` orthonormal.
pub fn circle_orthonormality_bound(j_max: HalfInt) -> f64 {
    PI / (2.0 * j_max.value() + 2.0)
}

/// The product matching the regime of `q`.
pub fn scalar_product(
    psi1: &QPair,
    psi2: &QPair,
    q: &QParam,
    spec: &QuadratureSpec,
) -> Result<InnerProductReport> {
    match q.regime() {
        Regime::PositiveReal => scalar_product_real_q(psi1, psi2, q, spec),
        Regime::UnitCircle => scalar_product_circle_q(psi1, psi2, q, spec),
    }
}

fn two_term_product(
    psi1: &QPair,
    psi2: &QPair,
    q: &QParam,
    spec: &QuadratureSpec,
    regime: ProductRegime,
) -> Result<InnerProductReport> {
    check_pairs(psi1, psi2, q)?;
    if psi1.m() != psi2.m() {
        return Ok(zero_report(regime));
    }
    // Which member of ψ₁ is conjugated in each term.
    let (c1, c2) = match regime {
        ProductRegime::RealQ => (&psi1.at_q_inv, &psi1.at_q),
        _ => (&psi1.at_q, &psi1.at_q_inv),
    };
    let qm2 = q.pow(-2.0);
    let qp2 = q.pow(2.0);
    let q_inv = q.pow(-1.0);
    let q_val = q.value();
    let one = Complex64::new(1.0, 0.0);
    let r = integrate_halfline(
        |rho| {
            let p = PolarPoint::real(rho);
            let r2 = rho * rho;
            let w_minus = one / ((1.0 + r2) * (one + qm2 * r2));
            let w_plus = one / ((1.0 + r2) * (one + qp2 * r2));
            let t1 = c1.eval(p)?.conj() * w_minus * q_inv * psi2.at_q.eval(p.dilate(q, -1.0))?;
            let t2 = c2.eval(p)?.conj() * w_plus * q_val * psi2.at_q_inv.eval(p.dilate(q, 1.0))?;
            Ok((t1 + t2) * rho)
        },
        spec,
    )?;
    let pre = 2.0 * PI * q.measure_constant();
    Ok(InnerProductReport {
        value: r.value * pre,
        est_error: r.est_error * pre,
        regime,
        converged: r.converged,
    })
}

/// The `q = 1` product `4π δ_{m₁m₂} ∫ρdρ conj f₁ f₂ / (1+ρ²)²`.
pub fn classical_scalar_product(
    f1: &AngularMode,
    f2: &AngularMode,
    spec: &QuadratureSpec,
) -> Result<InnerProductReport> {
    if f1.m != f2.m {
        return Ok(zero_report(ProductRegime::Classical));
    }
    let r = integrate_halfline(
        |rho| {
            let w = 1.0 / ((1.0 + rho * rho) * (1.0 + rho * rho));
            Ok(f1.at(rho)?.conj() * f2.at(rho)? * (rho * w))
        },
        spec,
    )?;
    Ok(InnerProductReport {
        value: r.value * (4.0 * PI),
        est_error: r.est_error * 4.0 * PI,
        regime: ProductRegime::Classical,
        converged: r.converged,
    })
}

/// Gram matrix of `{Ψ^J_MN}` for `max(|M|,|N|) ≤ J ≤ J_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub js: Vec<HalfInt>,
    /// Row-major, `js.len()²` entries.
    pub matrix: Vec<Complex64>,
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
    /// Of the Hermitian part.
    pub min_eigenvalue: f64,
    /// `max |G_ij − conj G_ji|`.
    pub hermiticity: f64,
    pub max_est_error: f64,
    pub converged: bool,
}

pub fn gram_matrix(
    j_max: HalfInt,
    m: HalfInt,
    n: HalfInt,
    q: &QParam,
    spec: &QuadratureSpec,
) -> Result<GramReport> {
    if !(j_max.same_parity(m) && j_max.same_parity(n)) {
        return Err(Error::InvalidSpin(format!(
            "J_max = {j_max}, M = {m}, N = {n} do not share parity"
        )));
    }
    let j_min = if m.abs() > n.abs() { m.abs() } else { n.abs() };
    if j_min > j_max {
        return Err(Error::InvalidSpin(format!(
            "no J with max(|M|, |N|) = {j_min} ≤ J ≤ {j_max}"
        )));
    }
    let js: Vec<HalfInt> = (j_min.twice()..=j_max.twice())
        .step_by(2)
        .map(HalfInt::from_twice)
        .collect();
    let pairs = js
        .iter()
        .map(|&j| {
            Ok(QPair::from_vilenkin(&VilenkinSpec::new(
                SpinTriple::new(j, m, n)?,
                *q,
            )?))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = js.len();
    let mut matrix = vec![Complex64::new(0.0, 0.0); d * d];
    let mut max_est_error: f64 = 0.0;
    let mut converged = true;
    for i in 0..d {
        for k in 0..d {
            let r = scalar_product(&pairs[i], &pairs[k], q, spec)?;
            matrix[i * d + k] = r.value;
            max_est_error = max_est_error.max(r.est_error);
            converged &= r.converged;
        }
    }
    let mut max_off: f64 = 0.0;
    let mut max_diag: f64 = 0.0;
    let mut herm: f64 = 0.0;
    for i in 0..d {
        for k in 0..d {
            let v = matrix[i * d + k];
            if i == k {
                max_diag = max_diag.max((v - 1.0).norm());
            } else {
                max_off = max_off.max(v.norm());
            }
            herm = herm.max((v - matrix[k * d + i].conj()).norm());
        }
    }
    let eig = hermitian_eigenvalues(&matrix, d);
    Ok(GramReport {
        js,
        min_eigenvalue: eig.first().copied().unwrap_or(f64::NAN),
        matrix,
        max_off_diagonal: max_off,
        max_diagonal_deviation: max_diag,
        hermiticity: herm,
        max_est_error,
        converged,
    })
}
