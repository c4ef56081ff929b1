//! `Q_Jq` from its product and series representations.
//!
//! `Q_Jq` solves `Q(q²η)(1+η) = Q(η)(1+q^{-2J}η)`. The solution is fixed
//! only up to a factor `f` with `f(q²η) = f(η)`; the functions here return
//! the canonical solutions:
//!
//! - integer `J`, either regime: `∏_{k=0}^{J−1} (1 + η q^{2k−2J})^{-1}`;
//! - any `J`, `0 < q < 1`: `∏_{k≥0} (1 + q^{2k}η) / (1 + q^{2k−2J}η)`;
//! - any `J`, `q > 1`: `∏_{k≥0} (1 + q^{−2J−2k−2}η) / (1 + q^{−2k−2}η)`.
//!
//! Half-odd `J` on the unit circle lives in [`crate::contour`].

use alloc::format;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use crate::qcore::{HalfInt, PolarPoint, QParam, Regime};
use crate::special::{dilog, BERNOULLI_EVEN};
use crate::{Error, Result};

/// Denominator factors closer to zero than this are reported as poles.
pub const POLE_EPS: f64 = 1e-12;

/// Below this `−ln r`, infinite products switch to Euler–Maclaurin summation.
pub const EULER_MACLAURIN_THRESHOLD: f64 = 0.05;

/// Stopping rule for infinite products and series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Relative tolerance on the result (absolute in log space).
    pub rel_tol: f64,
    /// Hard cap on the number of factors or terms.
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            rel_tol: 1e-15,
            max_terms: 200_000,
        }
    }
}

impl TruncationPolicy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms < 1 {
            return Err(Error::Domain(format!(
                "truncation policy needs rel_tol > 0 and max_terms ≥ 1 (got {rel_tol}, {max_terms})"
            )));
        }
        Ok(TruncationPolicy { rel_tol, max_terms })
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::Domain(format!("η = {eta} must be finite and ≥ 0")));
    }
    Ok(())
}

/// `Q_Jq(η)` for integer `J` (finite product), real `η ≥ 0`.
pub fn q_integer_j(j: HalfInt, eta: f64, q: &QParam) -> Result<Complex64> {
    check_eta(eta)?;
    q_integer_j_complex(j, Complex64::new(eta, 0.0), q)
}

/// Finite product for integer `J` at a complex argument, as needed when
/// dilations by complex `q` move `η` off the real axis.
pub fn q_integer_j_complex(j: HalfInt, zeta: Complex64, q: &QParam) -> Result<Complex64> {
    let jj = j.as_int().filter(|v| *v >= 0).ok_or_else(|| {
        Error::Domain(format!(
            "finite product needs a non-negative integer J, got {j}"
        ))
    })?;
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..jj {
        let factor = 1.0 + zeta * q.pow(f64::from(2 * k - 2 * jj));
        if factor.norm() < POLE_EPS {
            return Err(Error::Pole {
                factor,
                eps: POLE_EPS,
            });
        }
        acc /= factor;
    }
    Ok(acc)
}

/// Result of an infinite log-sum with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `Σ_{k≥0} [ln(1 + r^k a) − ln(1 + r^k b)]` for `0 < r < 1`, `a, b ≥ 0`.
///
/// Summed directly in log space with the stopping rule "three consecutive
/// terms below `rel_tol/16` once `r^k max(a,b) ≤ 1`"; the remaining tail is
/// bounded geometrically. When `−ln r` drops below
/// [`EULER_MACLAURIN_THRESHOLD`] the sum is instead evaluated by
/// Euler–Maclaurin, whose integral term is a dilogarithm.
pub fn log_ratio_product(r: f64, a: f64, b: f64, policy: &TruncationPolicy) -> Result<LogSum> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!(
            "product ratio r = {r} must lie in (0, 1)"
        )));
    }
    check_eta(a)?;
    check_eta(b)?;
    let eps = -r.ln();
    if eps < EULER_MACLAURIN_THRESHOLD {
        return Ok(euler_maclaurin_log_ratio(eps, a, b));
    }
    let small = policy.rel_tol / 16.0;
    let big = a.max(b);
    let mut sum = 0.0;
    let mut rk = 1.0;
    let mut quiet = 0;
    for k in 0..policy.max_terms {
        let term = (rk * a).ln_1p() - (rk * b).ln_1p();
        sum += term;
        if term.abs() < small && rk * big <= 1.0 {
            quiet += 1;
            if quiet >= 3 {
                // |term_j| ≤ r^j |a − b| beyond here.
                let tail = rk * r * (a - b).abs() / (1.0 - r);
                return Ok(LogSum {
                    value: sum,
                    tail_bound: tail,
                    terms: k + 1,
                });
            }
        } else {
            quiet = 0;
        }
        rk *= r;
    }
    let tail = if rk * big <= 1.0 {
        rk * (a - b).abs() / (1.0 - r)
    } else {
        f64::INFINITY
    };
    Err(Error::Truncation {
        partial: Complex64::new(sum.exp(), 0.0),
        bound: tail,
        terms: policy.max_terms,
    })
}

/// Number of Euler–Maclaurin correction orders.
const EM_ORDERS: usize = 8;

/// `Σ_{k≥0} g(k)` with `g(k) = ln(1 + a e^{−εk}) − ln(1 + b e^{−εk})` via
/// `∫₀^∞ g + g(0)/2 − Σ_j B_{2j}/(2j)! g^{(2j−1)}(0)`.
fn euler_maclaurin_log_ratio(eps: f64, a: f64, b: f64) -> LogSum {
    // ∫₀^∞ ln(1 + a e^{−εk}) dk = −Li₂(−a)/ε
    let integral = (dilog(-b) - dilog(-a)) / eps;
    let half = 0.5 * (a.ln_1p() - b.ln_1p());
    // h(k) = ln(1 + a e^{−εk}):  h^{(n)}(0) = (−ε)^n D_{n−1}(s), s = a/(1+a),
    // D_0 = s, D_{m+1}(s) = D_m'(s) s (1 − s).
    let sa = a / (1.0 + a);
    let sb = b / (1.0 + b);
    let mut poly = [0.0f64; 2 * EM_ORDERS + 2];
    poly[1] = 1.0; // D_0(s) = s
    let mut degree = 1usize;
    let mut correction = 0.0;
    let mut factorial = 1.0; // (2j)!
    let mut last = 0.0f64;
    for n in 1..=(2 * EM_ORDERS) {
        // poly holds D_{n−1}.
        if n % 2 == 1 {
            let j = n.div_ceil(2);
            factorial *= ((2 * j - 1) * (2 * j)) as f64;
            let eval = |s: f64| poly[..=degree].iter().rev().fold(0.0, |acc, c| acc * s + c);
            let deriv = (-eps).powi(n as i32) * (eval(sa) - eval(sb));
            last = BERNOULLI_EVEN[j - 1] / factorial * deriv;
            correction -= last;
        }
        // D_n = D_{n−1}'(s) (s − s²)
        let mut next = [0.0f64; 2 * EM_ORDERS + 2];
        for (i, c) in poly.iter().enumerate().take(degree + 1).skip(1) {
            let dc = c * i as f64; // coefficient of s^{i−1} in the derivative
            next[i] += dc;
            next[i + 1] -= dc;
        }
        poly = next;
        degree += 1;
    }
    LogSum {
        value: integral + half + correction,
        tail_bound: last.abs(),
        terms: EM_ORDERS,
    }
}

/// `Q_Jq(η)` for real `q`, any `J`, from the infinite products.
///
/// Integer `J` gives the same value as [`q_integer_j`] up to rounding (the
/// products telescope); half-odd `J` needs the full product.
pub fn q_half_integer_real(
    j: HalfInt,
    eta: f64,
    q: &QParam,
    policy: &TruncationPolicy,
) -> Result<f64> {
    if q.regime() != Regime::PositiveReal {
        return Err(Error::Domain(format!(
            "infinite products need real q, got {q}"
        )));
    }
    check_eta(eta)?;
    if eta == 0.0 {
        return Ok(1.0);
    }
    let tau = q.tau();
    let jv = j.value();
    // Base r = q^{∓2} < 1 in both cases.
    let r = (-2.0 * tau.abs()).exp();
    let (a, b) = if tau < 0.0 {
        // 0 < q < 1: ∏ (1 + q^{2k} η)/(1 + q^{2k−2J} η)
        (eta, (-2.0 * jv * tau).exp() * eta)
    } else {
        // q > 1: ∏ (1 + q^{−2J−2k−2} η)/(1 + q^{−2k−2} η)
        (
            (-(2.0 * jv + 2.0) * tau).exp() * eta,
            (-2.0 * tau).exp() * eta,
        )
    };
    let sum = log_ratio_product(r, a, b, policy)?;
    Ok(sum.value.exp())
}

/// Partial sums of `₁Φ₀(a; −; base, z) = Σ_k (a; base)_k / (base; base)_k z^k`.
///
/// Needs `|base| < 1` and `|z| < 1`; stops once a term and the geometric
/// bound on the rest fall below `rel_tol·|sum|`.
pub fn one_phi_zero(
    a: Complex64,
    base: Complex64,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if base.norm() >= 1.0 {
        return Err(Error::Domain(format!("₁Φ₀ needs |base| < 1, got {base}")));
    }
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "₁Φ₀ series diverges for |z| ≥ 1 (z = {z})"
        )));
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut base_k = Complex64::new(1.0, 0.0); // base^k
    for k in 0..policy.max_terms {
        // term_{k+1} = term_k (1 − a base^k)/(1 − base^{k+1}) z
        let denom = 1.0 - base_k * base;
        term *= (1.0 - a * base_k) / denom * z;
        sum += term;
        base_k *= base;
        // Ratio of successive terms tends to z; bound the tail with it.
        let ratio = ((1.0 - a * base_k).norm() / (1.0 - base_k * base).norm()) * z.norm();
        if ratio < 1.0 {
            let tail = term.norm() * ratio / (1.0 - ratio);
            if tail <= policy.rel_tol * sum.norm() {
                return Ok(sum);
            }
        }
        if k + 1 == policy.max_terms {
            let tail = if ratio < 1.0 {
                term.norm() * ratio / (1.0 - ratio)
            } else {
                f64::INFINITY
            };
            return Err(Error::Truncation {
                partial: sum,
                bound: tail,
                terms: policy.max_terms,
            });
        }
    }
    Ok(sum)
}

/// Largest `|z|` handed to the `₁Φ₀` series by [`q_series_real`].
const SERIES_RADIUS: f64 = 0.5;

/// `Q_Jq(η)` for real `q` via `₁Φ₀`, independent of the product route.
///
/// Uses `₁Φ₀(q^{2J}; −; q², −q^{−2J}η)` for `q < 1` and
/// `₁Φ₀(q^{−2J}; −; q^{−2}, −q^{−2}η)` for `q > 1`; when `|z|` is too large
/// the functional equation is applied to move `η` toward zero first.
pub fn q_series_real(j: HalfInt, eta: f64, q: &QParam, policy: &TruncationPolicy) -> Result<f64> {
    if q.regime() != Regime::PositiveReal {
        return Err(Error::Domain(format!("series route needs real q, got {q}")));
    }
    check_eta(eta)?;
    let tau = q.tau();
    let jv = j.value();
    let two_j_tau = 2.0 * jv * tau;
    let mut eta = eta;
    let mut factor = 1.0;
    let z_of = |eta: f64| {
        if tau < 0.0 {
            (-two_j_tau).exp() * eta
        } else {
            (-2.0 * tau).exp() * eta
        }
    };
    let mut steps = 0;
    while z_of(eta) > SERIES_RADIUS {
        if steps >= policy.max_terms {
            return Err(Error::Truncation {
                partial: Complex64::new(f64::NAN, 0.0),
                bound: f64::INFINITY,
                terms: steps,
            });
        }
        if tau < 0.0 {
            // Q(η) = Q(q²η)(1 + η)/(1 + q^{−2J}η)
            factor *= (1.0 + eta) / (1.0 + (-two_j_tau).exp() * eta);
            eta *= (2.0 * tau).exp();
        } else {
            // Q(η) = Q(q^{−2}η)(1 + q^{−2J−2}η)/(1 + q^{−2}η)
            let shrunk = (-2.0 * tau).exp() * eta;
            factor *= (1.0 + (-two_j_tau).exp() * shrunk) / (1.0 + shrunk);
            eta = shrunk;
        }
        steps += 1;
    }
    let (a, base) = if tau < 0.0 {
        (two_j_tau.exp(), (2.0 * tau).exp())
    } else {
        ((-two_j_tau).exp(), (-2.0 * tau).exp())
    };
    let z = -z_of(eta);
    let s = one_phi_zero(
        Complex64::new(a, 0.0),
        Complex64::new(base, 0.0),
        Complex64::new(z, 0.0),
        policy,
    )?;
    Ok(factor * s.re)
}

/// `Q_Jq` at a point reached by real dilations (phase must be zero).
pub(crate) fn q_real_regime(
    j: HalfInt,
    eta: PolarPoint,
    q: &QParam,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if j.is_integer() {
        return q_integer_j_complex(j, eta.to_complex(), q);
    }
    if eta.phase != 0.0 {
        return Err(Error::Domain(format!(
            "half-integer Q for real q is only defined on the positive axis (phase {})",
            eta.phase
        )));
    }
    Ok(Complex64::new(
        q_half_integer_real(j, eta.modulus, q, policy)?,
        0.0,
    ))
}
