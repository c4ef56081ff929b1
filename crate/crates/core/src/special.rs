//! Small real special functions needed by the product accelerator.

use core::f64::consts::PI;

#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

const PI2_6: f64 = PI * PI / 6.0;

/// `B_{2k}` for `k = 1..=10`.
pub(crate) const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Real dilogarithm `Li₂(x)` for `x ≤ 1`.
pub(crate) fn dilog(x: f64) -> f64 {
    if x == 1.0 {
        return PI2_6;
    }
    if x < -1.0 {
        // Inversion: Li₂(x) = −π²/6 − ½ ln²(−x) − Li₂(1/x).
        let l = (-x).ln();
        return -PI2_6 - 0.5 * l * l - dilog_core(1.0 / x);
    }
    if x > 0.5 {
        // Reflection: Li₂(x) = π²/6 − ln x ln(1−x) − Li₂(1−x).
        return PI2_6 - x.ln() * (1.0 - x).ln() - dilog_core(1.0 - x);
    }
    dilog_core(x)
}

/// Bernoulli-number series in `u = −ln(1−x)`, valid for `x ∈ [−1, 1/2]`
/// where `|u| ≤ ln 2`.
fn dilog_core(x: f64) -> f64 {
    // Li₂(x) = Σ_{n≥0} B_n u^{n+1}/(n+1)!, B_1 = −1/2, odd B_n vanish beyond.
    let u = -(-x).ln_1p();
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    // term for B_{2k}: B_{2k} u^{2k+1} / (2k+1)!
    let mut pow = u; // u^{2k+1} / (2k+1)!
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2 * (k + 1) as u32;
        pow *= u2 / (f64::from(n) * f64::from(n + 1));
        let term = b * pow;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent check: direct power series Σ x^k / k² (|x| ≤ 1/2 converges fast).
    fn dilog_series(x: f64) -> f64 {
        let mut s = 0.0;
        let mut p = 1.0;
        for k in 1..400 {
            p *= x;
            s += p / f64::from(k * k);
        }
        s
    }

    #[test]
    fn matches_power_series() {
        for x in [-0.5, -0.3, -0.01, 0.0, 0.1, 0.25, 0.5] {
            assert!((dilog(x) - dilog_series(x)).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn known_values() {
        assert!((dilog(-1.0) + PI * PI / 12.0).abs() < 1e-15);
        assert!((dilog(1.0) - PI2_6).abs() < 1e-15);
        // Li₂(1/2) = π²/12 − ½ ln² 2
        let l2 = 2f64.ln();
        assert!((dilog(0.5) - (PI * PI / 12.0 - 0.5 * l2 * l2)).abs() < 1e-15);
        // Landen: Li₂(−x) + Li₂(−1/x) = −π²/6 − ½ ln² x
        for x in [2.0, 10.0, 1234.5] {
            let lx: f64 = x.ln();
            let lhs = dilog(-x) + dilog(-1.0 / x);
            assert!((lhs + PI2_6 + 0.5 * lx * lx).abs() < 1e-12 * (1.0 + lx * lx));
        }
    }

    #[test]
    fn continuity_at_branch_switches() {
        for x in [-1.0f64, 0.5] {
            let lo = dilog(x - 1e-12);
            let hi = dilog(x + 1e-12);
            assert!((lo - hi).abs() < 1e-10);
        }
    }
}
