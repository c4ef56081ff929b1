//! The half-line integral `L_q`, its continuation off the positive axis,
//! and `Q_Jq` for half-odd `J` with `q = e^{iτ}`.
//!
//! For `0 < τ < π`,
//!
//! ```text
//! L_q(η) = (1/2πi) ∫₀^∞ dt/(t(1+t)) · ln(1 + η t^{τ/π})
//! ```
//!
//! and `L_{q^{-1}} = −L_q` on the positive axis. It solves
//! `L_q(qη) − L_q(q^{-1}η) = ln(1+η)`, which is also what moves arguments
//! back into the sector where the integral is evaluated directly.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use crate::inner::quad::{integrate, QuadratureSpec};
use crate::qcore::{HalfInt, PolarPoint, QParam, Regime};
use crate::qprod::POLE_EPS;
use crate::{Error, Result};

/// Default largest `|arg η|` integrated directly.
pub const DEFAULT_SECTOR_BOUND: f64 = 0.95 * PI;

// Upper end of the `y = ln t` window; the integrand there is below e^{-55}.
const Y_MAX: f64 = 60.0;

/// Evaluates `L_q` for one `q = e^{iτ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqEvaluator {
    tau: f64,
    quad: QuadratureSpec,
    sector_bound: f64,
}

/// An argument moved into the direct-integration sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorReduction {
    pub point: PolarPoint,
    /// `L_q(η) = L_q(point) + correction`.
    pub correction: Complex64,
    /// Signed number of `q^{±2}` shifts applied.
    pub steps: i32,
}

impl LqEvaluator {
    /// Evaluator with quadrature tolerances abs 1e−14 / rel 1e−13.
    pub fn new(q: &QParam) -> Result<Self> {
        let quad = QuadratureSpec::with_tolerances(1e-14, 1e-13)?;
        Self::with_quadrature(q, quad)
    }

    pub fn with_quadrature(q: &QParam, quad: QuadratureSpec) -> Result<Self> {
        if q.regime() != Regime::UnitCircle {
            return Err(Error::Domain(format!(
                "L_q needs q on the unit circle, got {q}"
            )));
        }
        let sigma = q.tau().abs();
        // The reduction shifts by 2σ, so the sector must be at least that wide.
        let sector_bound = if sigma > 0.9 * PI {
            0.5 * (PI + sigma)
        } else {
            DEFAULT_SECTOR_BOUND
        };
        Ok(LqEvaluator {
            tau: q.tau(),
            quad,
            sector_bound,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn sector_bound(&self) -> f64 {
        self.sector_bound
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    /// The evaluator for `q^{-1}`.
    pub fn inv(&self) -> Self {
        LqEvaluator {
            tau: -self.tau,
            ..*self
        }
    }

    /// `L_q(η)` at a principal-branch complex `η`.
    pub fn eval(&self, eta: Complex64) -> Result<Complex64> {
        if eta == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.eval_polar(PolarPoint::from_complex(eta))
    }

    /// `L_q` continued along the arc `|η| = modulus` from the positive axis
    /// to `phase`.
    pub fn eval_polar(&self, eta: PolarPoint) -> Result<Complex64> {
        if eta.modulus == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let red = self.reduce_to_sector(eta)?;
        Ok(self.integral(red.point)? + red.correction)
    }

    /// Shift `η` by powers of `q^{±2}` until `|arg| ≤ sector_bound`.
    pub fn reduce_to_sector(&self, eta: PolarPoint) -> Result<SectorReduction> {
        if !(eta.modulus > 0.0 && eta.modulus.is_finite() && eta.phase.is_finite()) {
            return Err(Error::Domain(format!(
                "L_q needs a finite nonzero argument, got modulus {} phase {}",
                eta.modulus, eta.phase
            )));
        }
        let sigma = self.tau.abs();
        let sgn = self.tau.signum();
        let mut phase = eta.phase;
        let mut correction = Complex64::new(0.0, 0.0);
        let mut steps = 0;
        while phase > self.sector_bound {
            // L(ζ) = L(ω^{-2}ζ) + sgn·ln(1 + ω^{-1}ζ), ω = e^{iσ}
            correction += ln1p_continued(eta.modulus, phase - sigma)? * sgn;
            phase -= 2.0 * sigma;
            steps -= 1;
        }
        while phase < -self.sector_bound {
            // L(ζ) = L(ω²ζ) − sgn·ln(1 + ωζ)
            correction -= ln1p_continued(eta.modulus, phase + sigma)? * sgn;
            phase += 2.0 * sigma;
            steps += 1;
        }
        Ok(SectorReduction {
            point: PolarPoint::new(eta.modulus, phase),
            correction,
            steps,
        })
    }

    /// Direct evaluation; the point must already lie in the sector.
    fn integral(&self, eta: PolarPoint) -> Result<Complex64> {
        if eta.phase.abs() > self.sector_bound {
            return Err(Error::Sector {
                phase: eta.phase,
                bound: self.sector_bound,
            });
        }
        let zeta = eta.to_complex();
        let alpha = self.tau.abs() / PI;
        let inv_alpha = alpha.recip();
        let one = Complex64::new(1.0, 0.0);
        // t ∈ (0,1) through s = t^α: ∫₀¹ ds ln(1+ζs) / (α s (1 + s^{1/α}))
        let left = integrate(
            |s| {
                let w = zeta * s;
                let l = if w.norm() < 1e-3 {
                    ln1p_small(w)
                } else {
                    (one + w).ln()
                };
                Ok(l / (alpha * s * (1.0 + s.powf(inv_alpha))))
            },
            &[0.0, 0.25, 0.5, 0.75, 1.0],
            &self.quad,
        )?;
        // t ∈ (1,∞) through t = e^y: ∫₀^∞ dy ln(1+ζe^{αy}) / (1 + e^y)
        let mut breaks: Vec<f64> = (0..=12).map(|k| Y_MAX * k as f64 / 12.0).collect();
        breaks[1] = 2.0;
        let right = integrate(
            |y| {
                let g = (alpha * y).exp();
                Ok((one + zeta * g).ln() / (1.0 + y.exp()))
            },
            &breaks,
            &self.quad,
        )?;
        let left = left.require_converged()?;
        let right = right.require_converged()?;
        let total = left.value + right.value;
        // (1/2πi)·total, negated for τ < 0.
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        Ok(total / two_pi_i * self.tau.signum())
    }
}

fn ln1p_small(w: Complex64) -> Complex64 {
    // ln(1+w) = w − w²/2 + w³/3 − ..., |w| < 1e−3
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = w;
    for k in 1..8 {
        let term = p / f64::from(k);
        sum += if k % 2 == 1 { term } else { -term };
        p *= w;
    }
    sum
}

/// `ln(1 + r e^{iψ})` continued along `|w| = r` from `ψ = 0`.
///
/// Equals the principal logarithm when `r < 1`; for `r ≥ 1` each turn
/// around `w = −1` adds `2πi`.
pub fn ln1p_continued(r: f64, psi: f64) -> Result<Complex64> {
    let w = Complex64::from_polar(r, psi);
    let one = Complex64::new(1.0, 0.0);
    if (one + w).norm() < POLE_EPS {
        return Err(Error::Degenerate(w));
    }
    if r < 1.0 {
        return Ok((one + w).ln());
    }
    let inv = Complex64::from_polar(r.recip(), -psi);
    Ok(Complex64::new(r.ln(), psi) + (one + inv).ln())
}

/// `Q_Jq(η)` for half-odd `J` and `q = e^{iτ}`:
/// `exp{L_q(q^{-2J-1}η) − L_q(q^{-1}η)}`.
pub fn q_half_integer_circle(j: HalfInt, eta: f64, ev: &LqEvaluator) -> Result<Complex64> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Domain(format!(
            "η must be finite and ≥ 0, got {eta}"
        )));
    }
    q_half_integer_circle_polar(j, PolarPoint::real(eta), ev)
}

/// As [`q_half_integer_circle`], at a point reached along circular arcs.
pub fn q_half_integer_circle_polar(
    j: HalfInt,
    eta: PolarPoint,
    ev: &LqEvaluator,
) -> Result<Complex64> {
    if j.is_integer() || j.twice() < 0 {
        return Err(Error::InvalidSpin(format!(
            "the contour representation is for half-odd J ≥ 1/2, got {j}"
        )));
    }
    if eta.modulus == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let tau = ev.tau();
    let hi = PolarPoint::new(eta.modulus, eta.phase - (2.0 * j.value() + 1.0) * tau);
    let lo = PolarPoint::new(eta.modulus, eta.phase - tau);
    Ok((ev.eval_polar(hi)? - ev.eval_polar(lo)?).exp())
}

/// `F_Jq(η) = Π_{p=0}^{2J+1} (1 + q^{2J−2p} η)^{-1}`.
pub fn f_product(j: HalfInt, eta: f64, q: &QParam) -> Result<Complex64> {
    if j.twice() < 0 {
        return Err(Error::InvalidSpin(format!("J must be ≥ 0, got {j}")));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Domain(format!(
            "η must be finite and ≥ 0, got {eta}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut prod = one;
    for p in 0..=(j.twice() + 1) {
        let factor = one + q.pow(f64::from(j.twice() - 2 * p)) * eta;
        if factor.norm() < POLE_EPS {
            return Err(Error::Pole {
                factor,
                eps: POLE_EPS,
            });
        }
        prod /= factor;
    }
    Ok(prod)
}

/// `F_Jq(η)` assembled from `Q_Jq` as `conj(Q(η))·Q(q^{-2}η)/((1+η)(1+q^{-2}η))`.
pub fn f_product_from_q(j: HalfInt, eta: f64, ev: &LqEvaluator) -> Result<Complex64> {
    let q = QParam::circle_with_guard(ev.tau(), 0)?;
    let a = q_half_integer_circle(j, eta, ev)?;
    let b = q_half_integer_circle_polar(j, PolarPoint::real(eta).dilate(&q, -2.0), ev)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(a.conj() * b / ((one + eta) * (one + q.pow(-2.0) * eta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(tau: f64) -> LqEvaluator {
        LqEvaluator::new(&QParam::circle_with_guard(tau, 0).unwrap()).unwrap()
    }

    #[test]
    fn zero_and_imaginary_on_axis() {
        let e = ev(0.4);
        assert_eq!(
            e.eval(Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        for eta in [0.1, 1.0, 10.0] {
            let l = e.eval(Complex64::new(eta, 0.0)).unwrap();
            assert!(l.re.abs() < 1e-14, "{l}");
            // mirror: τ → −τ negates
            let m = e.inv().eval(Complex64::new(eta, 0.0)).unwrap();
            assert!((l + m).norm() < 1e-14);
        }
    }

    #[test]
    fn difference_equation() {
        for tau in [0.2, -0.2, 0.7, -0.7, 2.0, -2.0] {
            let e = ev(tau);
            for eta in [0.1, 1.0, 10.0] {
                let up = e.eval_polar(PolarPoint::new(eta, tau)).unwrap();
                let down = e.eval_polar(PolarPoint::new(eta, -tau)).unwrap();
                let res = (up - down - Complex64::new(eta, 0.0).ln_1p()).norm();
                assert!(res < 1e-11, "τ={tau} η={eta} residual {res}");
            }
        }
    }

    trait Ln1p {
        fn ln_1p(self) -> Self;
    }
    impl Ln1p for Complex64 {
        fn ln_1p(self) -> Self {
            (Complex64::new(1.0, 0.0) + self).ln()
        }
    }

    #[test]
    fn reduction_overlaps_direct_evaluation() {
        // Points inside the sector: one explicit shift must agree with the
        // direct integral.
        let e = ev(0.5);
        for (r, psi) in [(0.7, 2.0), (3.0, 2.5), (1.0, -2.2)] {
            let direct = e.integral(PolarPoint::new(r, psi)).unwrap();
            let shifted = if psi > 0.0 {
                e.integral(PolarPoint::new(r, psi - 1.0)).unwrap()
                    + ln1p_continued(r, psi - 0.5).unwrap()
            } else {
                e.integral(PolarPoint::new(r, psi + 1.0)).unwrap()
                    - ln1p_continued(r, psi + 0.5).unwrap()
            };
            assert!((direct - shifted).norm() < 1e-11);
        }
        let red = e.reduce_to_sector(PolarPoint::new(2.0, 0.3)).unwrap();
        assert_eq!(red.steps, 0);
        assert_eq!(red.correction, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn far_rays_use_two_corrections() {
        let e = ev(0.9);
        let red = e.reduce_to_sector(PolarPoint::new(2.0, -3.6)).unwrap();
        assert_eq!(red.steps, 1);
        let red = e.reduce_to_sector(PolarPoint::new(2.0, -5.0)).unwrap();
        assert_eq!(red.steps, 2);
        assert!(red.point.phase.abs() <= e.sector_bound());
    }

    #[test]
    fn continued_log_winds() {
        let a = ln1p_continued(2.0, 0.0).unwrap();
        assert!((a.re - 3f64.ln()).abs() < 1e-15 && a.im == 0.0);
        let b = ln1p_continued(2.0, 2.0 * PI).unwrap();
        assert!((b - a - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-14);
        let c = ln1p_continued(0.5, 2.0 * PI).unwrap();
        assert!((c.re - 1.5f64.ln()).abs() < 1e-15 && c.im.abs() < 1e-15);
        assert!(ln1p_continued(1.0, PI).is_err());
    }

    #[test]
    fn q_functional_equation_and_b4() {
        let q = QParam::circle(0.3).unwrap();
        let e = LqEvaluator::new(&q).unwrap();
        let j = HalfInt::HALF;
        let one = Complex64::new(1.0, 0.0);
        let q1 = q_half_integer_circle(j, 1.0, &e).unwrap();
        let q2 = q_half_integer_circle_polar(j, PolarPoint::real(1.0).dilate(&q, 2.0), &e).unwrap();
        let res = (q2 * 2.0 - q1 * (one + q.pow(-1.0))).norm();
        assert!(res < 1e-8, "{res}");
        for eta in [1.0, 2.0] {
            let f = f_product(j, eta, &q).unwrap();
            let g = f_product_from_q(j, eta, &e).unwrap();
            assert!((f - g).norm() < 1e-8 * f.norm());
        }
        assert!((q_half_integer_circle(j, 0.0, &e).unwrap() - one).norm() == 0.0);
    }

    #[test]
    fn f_product_special_cases() {
        let q = QParam::circle(0.3).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(f_product(HalfInt::ONE, 0.0, &q).unwrap(), one);
        let f0 = f_product(HalfInt::ZERO, 1.5, &q).unwrap();
        let expect = one / ((one + 1.5) * (one + q.pow(-2.0) * 1.5));
        assert!((f0 - expect).norm() < 1e-15);
    }

    #[test]
    fn rejects_real_q_and_integer_j() {
        assert!(LqEvaluator::new(&QParam::real(2.0).unwrap()).is_err());
        assert!(q_half_integer_circle(HalfInt::ONE, 1.0, &ev(0.3)).is_err());
    }
}
