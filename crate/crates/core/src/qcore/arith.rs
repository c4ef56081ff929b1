use alloc::format;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use super::{HalfInt, QParam, Regime};
use crate::{Error, Result};

/// `[x]_q = (q^x − q^{-x}) / (q − q^{-1})`.
///
/// Evaluated as `sinh(xτ)/sinh τ` or `sin(xτ)/sin τ`, so the result is real
/// in both regimes and stays accurate as `q → 1`.
pub fn q_bracket(x: f64, q: &QParam) -> Complex64 {
    let tau = q.tau();
    let v = match q.regime() {
        Regime::PositiveReal => (x * tau).sinh() / tau.sinh(),
        Regime::UnitCircle => (x * tau).sin() / tau.sin(),
    };
    Complex64::new(v, 0.0)
}

pub fn q_bracket_half(x: HalfInt, q: &QParam) -> Complex64 {
    q_bracket(x.value(), q)
}

/// `[n]_q! = [n]_q [n−1]_q ⋯ [1]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: u32, q: &QParam) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| {
        acc * q_bracket(f64::from(k), q)
    })
}

/// `1/[n]_q!`, defined as 0 for negative `n`.
pub fn inverse_q_factorial(n: i64, q: &QParam) -> Complex64 {
    if n < 0 {
        Complex64::new(0.0, 0.0)
    } else {
        q_factorial(n as u32, q).inv()
    }
}

/// Gaussian binomial `[n]! / ([p]! [n−p]!)`.
pub fn q_binomial(n: u32, p: u32, q: &QParam) -> Result<Complex64> {
    if p > n {
        return Err(Error::Domain(format!(
            "q-binomial ({n} choose {p}) needs p ≤ n"
        )));
    }
    // Multiplicative form avoids forming the large factorials.
    let p = p.min(n - p);
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 1..=p {
        acc *= q_bracket(f64::from(n - p + k), q) / q_bracket(f64::from(k), q);
    }
    Ok(acc)
}

fn check_n_within_j(j: HalfInt, n: HalfInt) -> Result<()> {
    if j.twice() < 0 || n.abs() > j || !j.same_parity(n) {
        return Err(Error::InvalidSpin(format!(
            "need |N| ≤ J with matching parity, got J = {j}, N = {n}"
        )));
    }
    Ok(())
}

/// `Σ_{p=0}^{2J+1} (−1)^p C_q(2J+1, p) q^{2Np}`.
///
/// The q-binomial theorem factors this sum as `∏_{p=0}^{2J} (1 − q^{2p−2J+2N})`,
/// which contains the vanishing factor `p = J − N`; the sum is therefore zero
/// and serves as a self-test.
pub fn alternating_qbinomial_sum(j: HalfInt, n: HalfInt, q: &QParam) -> Result<Complex64> {
    check_n_within_j(j, n)?;
    let top = (j.twice() + 1) as u32;
    let two_n = f64::from(n.twice());
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..=top {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * q_binomial(top, p, q)? * q.pow(two_n * f64::from(p));
    }
    Ok(sum)
}

/// `Σ_{p=0}^{2J+1} (−1)^{p−1} p C_q(2J+1, p) q^{2N(p−1)}`, the derivative of
/// the generating polynomial at `η = −q^{2N}`.
pub fn weighted_qbinomial_sum(j: HalfInt, n: HalfInt, q: &QParam) -> Result<Complex64> {
    check_n_within_j(j, n)?;
    let top = (j.twice() + 1) as u32;
    let two_n = f64::from(n.twice());
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 1..=top {
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * f64::from(p) * q_binomial(top, p, q)? * q.pow(two_n * (f64::from(p) - 1.0));
    }
    Ok(sum)
}

/// Closed form of [`weighted_qbinomial_sum`]:
/// `(−1)^{J+N} (q − q^{-1})^{2J} [J−N]_q! [J+N]_q! q^{N(2J−1)}`.
pub fn weighted_qbinomial_closed_form(j: HalfInt, n: HalfInt, q: &QParam) -> Result<Complex64> {
    check_n_within_j(j, n)?;
    let j_plus_n = ((j + n).twice() / 2) as u32;
    let j_minus_n = ((j - n).twice() / 2) as u32;
    let sign = if j_plus_n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign
        * q.q_minus_inv().powu(j.twice() as u32)
        * q_factorial(j_minus_n, q)
        * q_factorial(j_plus_n, q)
        * q.pow(n.value() * (2.0 * j.value() - 1.0)))
}
