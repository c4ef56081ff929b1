//! Orthonormality integrals of `P^J_MNq(ξ)`, the highest-weight norm
//! integrals with their closed forms, and Ramanujan's continuous q-beta.

use alloc::format;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use super::quad::{integrate, integrate_halfline, QuadResult, QuadratureSpec};
use crate::contour::f_product;
use crate::qcore::{q_factorial, HalfInt, PolarPoint, QParam, Regime, SpinTriple};
use crate::qprod::{log_ratio_product, TruncationPolicy};
use crate::vilenkin::{QFunction, VilenkinSpec};
use crate::{Error, Result};

/// A quadrature next to the closed form it should reproduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualEvaluation {
    pub quadrature: QuadResult,
    pub closed_form: Complex64,
}

impl DualEvaluation {
    pub fn relative_gap(&self) -> f64 {
        (self.quadrature.value - self.closed_form).norm() / self.closed_form.norm()
    }
}

/// The `ξ`-form orthonormality integral between `P^{J'}_MN` and `P^J_MN`;
/// should equal `δ_{J'J}/[2J+1]_q`.
///
/// The flow `q^{±(ξ²−1)∂ξ}` is `η ↦ q^{∓2}η` with `η = (1+ξ)/(1−ξ)`.
pub fn vilenkin_ortho_integral(
    j1: HalfInt,
    j2: HalfInt,
    m: HalfInt,
    n: HalfInt,
    q: &QParam,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let p1 = VilenkinSpec::new(SpinTriple::new(j1, m, n)?, *q)?;
    let p2 = VilenkinSpec::new(SpinTriple::new(j2, m, n)?, *q)?;
    let (p1i, p2i) = (p1.at_inverse_q(), p2.at_inverse_q());
    // Conjugated partner of each term.
    let (c1, c2) = match q.regime() {
        Regime::PositiveReal => (p1i, p1),
        Regime::UnitCircle => (p1, p1i),
    };
    let qv = q.value();
    let qi = q.inv().value();
    let (s, d) = (qv + qi, qv - qi);
    let r = integrate(
        |xi| {
            let eta = PolarPoint::real((1.0 + xi) / (1.0 - xi));
            let t1 = c1.p_vilenkin_polar(eta)?.conj() / (s - d * xi)
                * p2.p_vilenkin_polar(eta.dilate(q, -2.0))?;
            let t2 = c2.p_vilenkin_polar(eta)?.conj() / (s + d * xi)
                * p2i.p_vilenkin_polar(eta.dilate(q, 2.0))?;
            Ok(t1 + t2)
        },
        &[-1.0, -0.5, 0.0, 0.5, 1.0],
        spec,
    )?;
    let pre = 0.5 * q.measure_constant();
    Ok(QuadResult {
        value: r.value * pre,
        est_error: r.est_error * pre,
        ..r
    })
}

/// `2 (ln q) q^{J+N+1} [J+N]! [J−N]! / ((q−q⁻¹) [2J+1]!)`, either regime.
pub fn norm_closed_form(j: HalfInt, n: HalfInt, q: &QParam) -> Result<Complex64> {
    let s = SpinTriple::new(j, j, n)?;
    Ok(q.ln()
        * 2.0
        * q.pow(f64::from(s.j_plus_n() + 1))
        * q_factorial(s.j_plus_n(), q)
        * q_factorial(s.j_minus_n(), q)
        / (q.q_minus_inv() * q_factorial(s.two_j() + 1, q)))
}

/// `I_q = ∫₀^∞ dη Q_{Jq⁻¹}(η) η^{J+N} Q_{Jq}(q⁻²η) / ((1+η)(1+q⁻²η))` for real `q`.
pub fn norm_integral_real(
    j: HalfInt,
    n: HalfInt,
    q: &QParam,
    spec: &QuadratureSpec,
) -> Result<DualEvaluation> {
    if q.regime() != Regime::PositiveReal {
        return Err(Error::Domain(format!("expected real q, got {q}")));
    }
    let closed_form = norm_closed_form(j, n, q)?;
    let qf = QFunction::new(j, *q)?;
    let qfi = qf.at_inverse_q();
    let qm2 = q.pow(-2.0).re;
    let k = j.value() + n.value();
    let quadrature = integrate_halfline(
        |eta| {
            let a = qfi.eval(eta)?;
            let b = qf.eval(qm2 * eta)?;
            Ok(a * b * eta.powf(k) / ((1.0 + eta) * (1.0 + qm2 * eta)))
        },
        spec,
    )?;
    Ok(DualEvaluation {
        quadrature,
        closed_form,
    })
}

/// `I′_q = ∫₀^∞ dη F_Jq(η) η^{J+N}` for `q = e^{iτ}`, plus the
/// partial-fraction value `−G_Jq(0)`.
///
/// The closed form takes `ln q^{2p−2J} = (2p−2J)iτ`, which is the principal
/// value only while `(2J+2)|τ| < π`. Past that the quadrature follows the
/// partial-fraction value and the closed form is off by multiples of `2πi a_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleNorm {
    pub dual: DualEvaluation,
    pub partial_fraction: Complex64,
}

pub fn norm_integral_circle(
    j: HalfInt,
    n: HalfInt,
    q: &QParam,
    spec: &QuadratureSpec,
) -> Result<CircleNorm> {
    if q.regime() != Regime::UnitCircle {
        return Err(Error::Domain(format!(
            "expected q on the unit circle, got {q}"
        )));
    }
    let closed_form = norm_closed_form(j, n, q)?;
    let k = j.value() + n.value();
    let quadrature = integrate_halfline(|eta| Ok(f_product(j, eta, q)? * eta.powf(k)), spec)?;
    Ok(CircleNorm {
        dual: DualEvaluation {
            quadrature,
            closed_form,
        },
        partial_fraction: -g_antiderivative(j, n, q, 0.0)?,
    })
}

/// `a_p = (−1)^{J+N} q^{J+1}/(q−q⁻¹)^{2J+1} · (−1)^p q^{N(2p−2J)}/([p]! [2J−p+1]!)`,
/// the residue of `η^{J+N} F_Jq` at `η = −q^{2p−2J}`.
pub fn partial_fraction_coefficient(
    j: HalfInt,
    n: HalfInt,
    p: u32,
    q: &QParam,
) -> Result<Complex64> {
    let s = SpinTriple::new(j, j, n)?;
    if p > s.two_j() + 1 {
        return Err(Error::Domain(format!(
            "p = {p} beyond 2J+1 = {}",
            s.two_j() + 1
        )));
    }
    let sign = if (s.j_plus_n() + p).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let nv = n.value();
    let jv = j.value();
    Ok(q.pow(jv + 1.0) / q.q_minus_inv().powi(s.two_j() as i32 + 1)
        * sign
        * q.pow(nv * (2.0 * f64::from(p) - 2.0 * jv))
        / (q_factorial(p, q) * q_factorial(s.two_j() + 1 - p, q)))
}

/// `G_Jq(η) = Σ_p a_p ln(η + q^{2p−2J})`, principal logarithms.
///
/// Along `η ∈ [0, ∞)` each `η + q^{2p−2J}` stays off the negative axis, so
/// this branch is continuous and `I′_q = G(∞) − G(0) = −G(0)`.
pub fn g_antiderivative(j: HalfInt, n: HalfInt, q: &QParam, eta: f64) -> Result<Complex64> {
    let s = SpinTriple::new(j, j, n)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..=(s.two_j() + 1) {
        let c = q.pow(2.0 * f64::from(p) - 2.0 * j.value());
        sum += partial_fraction_coefficient(j, n, p, q)? * (c + eta).ln();
    }
    Ok(sum)
}

/// `B̃_q(m, n)` in closed form:
/// `(ln q) q^{−m(n+m−1)/2} [m−1]! [n−1]! / ((q^{1/2}−q^{−1/2}) [n+m−1]!)`, brackets at `q^{1/2}`.
pub fn qbeta_closed_form(m: u32, n: u32, q: f64) -> Result<f64> {
    check_qbeta(m, n, q)?;
    let h = QParam::real(q.sqrt())?;
    let f = |k: u32| q_factorial(k, &h).re;
    let (mf, nf) = (f64::from(m), f64::from(n));
    Ok(
        q.ln() * q.powf(-mf * (nf + mf - 1.0) / 2.0) * f(m - 1) * f(n - 1)
            / ((q.sqrt() - q.sqrt().recip()) * f(n + m - 1)),
    )
}

fn check_qbeta(m: u32, n: u32, q: f64) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!(
            "q-beta needs m, n ≥ 1, got ({m}, {n})"
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidQ(format!("q-beta needs 0 < q < 1, got {q}")));
    }
    Ok(())
}

/// `∫₀^∞ t^{x−1} Π_k (1+q^{x+y+k}t)/(1+q^k t) dt` by quadrature, the
/// product summed in log form. The product's truncation bound is added to
/// the error estimate.
pub fn qbeta_integral(
    x: f64,
    y: f64,
    q: f64,
    spec: &QuadratureSpec,
    policy: &TruncationPolicy,
) -> Result<QuadResult> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!(
            "q-beta integral needs x, y > 0, got ({x}, {y})"
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidQ(format!("q-beta needs 0 < q < 1, got {q}")));
    }
    let shift = q.powf(x + y);
    let mut tail: f64 = 0.0;
    let r = integrate_halfline(
        |t| {
            let s = log_ratio_product(q, shift * t, t, policy)?;
            tail = tail.max(s.tail_bound);
            Ok(Complex64::new(t.powf(x - 1.0) * s.value.exp(), 0.0))
        },
        spec,
    )?;
    Ok(QuadResult {
        est_error: r.est_error + tail * r.value.norm(),
        ..r
    })
}

/// `B̃_q(m, n)` both ways.
pub fn ramanujan_qbeta(
    m: u32,
    n: u32,
    q: f64,
    spec: &QuadratureSpec,
    policy: &TruncationPolicy,
) -> Result<DualEvaluation> {
    let closed = qbeta_closed_form(m, n, q)?;
    Ok(DualEvaluation {
        quadrature: qbeta_integral(f64::from(m), f64::from(n), q, spec, policy)?,
        closed_form: Complex64::new(closed, 0.0),
    })
}

/// `B̃_q(x, y) = π/sin(πx) Π_{k≥1} (1−q^{k−x})(1−q^{x+y+k−1}) / ((1−q^k)(1−q^{y+k−1}))`
/// for non-integer `x`.
pub fn qbeta_generic(x: f64, y: f64, q: f64, policy: &TruncationPolicy) -> Result<f64> {
    if x.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "the product form is singular at integer x = {x}; use the closed form"
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidQ(format!("q-beta needs 0 < q < 1, got {q}")));
    }
    let mut prod = core::f64::consts::PI / (core::f64::consts::PI * x).sin();
    let mut quiet = 0;
    for k in 1..=policy.max_terms {
        let kf = k as f64;
        let factor = (1.0 - q.powf(kf - x)) * (1.0 - q.powf(x + y + kf - 1.0))
            / ((1.0 - q.powf(kf)) * (1.0 - q.powf(y + kf - 1.0)));
        prod *= factor;
        if (factor - 1.0).abs() < policy.rel_tol / 16.0 {
            quiet += 1;
            if quiet == 3 {
                return Ok(prod);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Truncation {
        partial: Complex64::new(prod, 0.0),
        bound: f64::NAN,
        terms: policy.max_terms,
    })
}
