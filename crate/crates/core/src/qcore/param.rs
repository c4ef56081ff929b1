use alloc::format;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use super::HalfInt;
use crate::{Error, Result};

/// Denominator bound used by [`QParam::circle`].
///
/// Equals `2 (2 J_max + 2)` for `J_max = 3`, which keeps every q-factorial
/// up to `[2J+1]_q!`, including the half-integer brackets, away from zero.
pub const DEFAULT_GUARD_ORDER: u32 = 16;

/// Distance from `p/r` below which `τ/π` counts as rational.
pub const GENERICITY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `q = e^τ`, `τ ≠ 0`.
    PositiveReal,
    /// `q = e^{iτ}`, `0 < |τ| < π`, not a root of unity.
    UnitCircle,
}

/// The deformation parameter `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam {
    regime: Regime,
    tau: f64,
}

impl QParam {
    /// `q` given by its (positive, `≠ 1`) value.
    pub fn real(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidQ(format!("q = {q} is not a positive real")));
        }
        Self::real_from_tau(q.ln())
    }

    /// `q = e^τ`.
    pub fn real_from_tau(tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau == 0.0 {
            return Err(Error::InvalidQ(format!(
                "τ = {tau}: q = e^τ must be finite and different from 1"
            )));
        }
        Ok(QParam {
            regime: Regime::PositiveReal,
            tau,
        })
    }

    /// `q = e^{iτ}` with the default genericity guard.
    pub fn circle(tau: f64) -> Result<Self> {
        Self::circle_with_guard(tau, DEFAULT_GUARD_ORDER)
    }

    /// `q = e^{iτ}` with the guard sized for spins up to `j_max`.
    pub fn circle_for_spin(tau: f64, j_max: HalfInt) -> Result<Self> {
        let order = 2 * (j_max.twice().max(0) as u32 + 2);
        Self::circle_with_guard(tau, order)
    }

    /// `q = e^{iτ}`, rejecting `τ/π = p/r` for every `r ≤ guard_order`.
    /// A guard order of 0 only enforces `0 < |τ| < π`.
    pub fn circle_with_guard(tau: f64, guard_order: u32) -> Result<Self> {
        if !tau.is_finite() || tau == 0.0 || tau.abs() >= PI {
            return Err(Error::InvalidQ(format!(
                "τ = {tau}: q = e^{{iτ}} needs 0 < |τ| < π"
            )));
        }
        let ratio = tau / PI;
        for r in 1..=guard_order {
            let x = ratio * f64::from(r);
            if (x - x.round()).abs() < GENERICITY_EPS {
                return Err(Error::InvalidQ(format!(
                    "τ = {tau}: q is a root of unity (τ/π ≈ {}/{r})",
                    x.round()
                )));
            }
        }
        Ok(QParam {
            regime: Regime::UnitCircle,
            tau,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn is_real(&self) -> bool {
        self.regime == Regime::PositiveReal
    }

    /// `q^{-1}`: same regime, `τ → −τ`.
    pub fn inv(&self) -> QParam {
        QParam {
            regime: self.regime,
            tau: -self.tau,
        }
    }

    /// `ln q`, principal.
    pub fn ln(&self) -> Complex64 {
        match self.regime {
            Regime::PositiveReal => Complex64::new(self.tau, 0.0),
            Regime::UnitCircle => Complex64::new(0.0, self.tau),
        }
    }

    pub fn value(&self) -> Complex64 {
        self.pow(1.0)
    }

    /// `q^x = e^{x ln q}`.
    pub fn pow(&self, x: f64) -> Complex64 {
        match self.regime {
            Regime::PositiveReal => Complex64::new((x * self.tau).exp(), 0.0),
            Regime::UnitCircle => Complex64::from_polar(1.0, x * self.tau),
        }
    }

    /// `|q|`.
    pub fn modulus(&self) -> f64 {
        match self.regime {
            Regime::PositiveReal => self.tau.exp(),
            Regime::UnitCircle => 1.0,
        }
    }

    /// `arg q` (zero for real `q`).
    pub fn phase(&self) -> f64 {
        match self.regime {
            Regime::PositiveReal => 0.0,
            Regime::UnitCircle => self.tau,
        }
    }

    /// `q − q^{-1}`.
    pub fn q_minus_inv(&self) -> Complex64 {
        match self.regime {
            Regime::PositiveReal => Complex64::new(2.0 * self.tau.sinh(), 0.0),
            Regime::UnitCircle => Complex64::new(0.0, 2.0 * self.tau.sin()),
        }
    }

    /// `(q − q^{-1}) / (2 ln q)`: `sinh τ / τ` or `sin τ / τ`.
    pub fn measure_constant(&self) -> f64 {
        match self.regime {
            Regime::PositiveReal => self.tau.sinh() / self.tau,
            Regime::UnitCircle => self.tau.sin() / self.tau,
        }
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.regime {
            Regime::PositiveReal => write!(f, "real:{}", self.tau.exp()),
            Regime::UnitCircle => write!(f, "circle:{}", self.tau),
        }
    }
}

/// A complex number kept as modulus and an unwrapped phase.
///
/// Dilations by `q^a` add `a·arg q` to the phase without reducing it mod 2π,
/// so multivalued functions (fractional powers, the continued `L_q`) see the
/// sheet the point was reached on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub modulus: f64,
    pub phase: f64,
}

impl PolarPoint {
    pub const fn new(modulus: f64, phase: f64) -> Self {
        PolarPoint { modulus, phase }
    }

    /// A point on the positive real axis.
    pub const fn real(x: f64) -> Self {
        PolarPoint {
            modulus: x,
            phase: 0.0,
        }
    }

    /// Principal-branch polar form of `z`.
    pub fn from_complex(z: Complex64) -> Self {
        PolarPoint {
            modulus: z.norm(),
            phase: z.arg(),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }

    /// `q^a · self`.
    pub fn dilate(self, q: &QParam, a: f64) -> Self {
        PolarPoint {
            modulus: self.modulus * q.modulus().powf(a),
            phase: self.phase + a * q.phase(),
        }
    }

    pub fn mul(self, other: PolarPoint) -> Self {
        PolarPoint {
            modulus: self.modulus * other.modulus,
            phase: self.phase + other.phase,
        }
    }

    /// `self^s` on the sheet given by the stored phase.
    pub fn powf(self, s: f64) -> Complex64 {
        if self.modulus == 0.0 {
            return if s == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        Complex64::from_polar(self.modulus.powf(s), s * self.phase)
    }

    pub fn powi(self, n: i32) -> Complex64 {
        if self.modulus == 0.0 {
            return if n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        Complex64::from_polar(self.modulus.powi(n), f64::from(n) * self.phase)
    }

    pub fn square(self) -> Self {
        self.mul(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_roots_of_unity() {
        assert!(QParam::circle(PI / 5.0).is_err());
        assert!(QParam::circle(2.0 * PI / 7.0).is_err());
        assert!(QParam::circle(0.3).is_ok());
        // Order 5 lies above a guard of 4.
        assert!(QParam::circle_with_guard(PI / 5.0, 4).is_ok());
        assert!(QParam::circle_for_spin(PI / 5.0, HalfInt::ZERO).is_ok());
        assert!(QParam::circle_for_spin(PI / 5.0, HalfInt::HALF).is_err());
    }

    #[test]
    fn rejects_degenerate_values() {
        assert!(QParam::real(1.0).is_err());
        assert!(QParam::real(-2.0).is_err());
        assert!(QParam::real(f64::NAN).is_err());
        assert!(QParam::circle(0.0).is_err());
        assert!(QParam::circle(PI).is_err());
        assert!(QParam::circle(-3.5).is_err());
    }

    #[test]
    fn inverse_and_powers() {
        let q = QParam::real(2.0).unwrap();
        assert!((q.inv().value().re - 0.5).abs() < 1e-15);
        assert!((q.pow(3.0).re - 8.0).abs() < 1e-12);
        let c = QParam::circle(0.3).unwrap();
        let prod = c.value() * c.inv().value();
        assert!((prod - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.q_minus_inv() - (c.value() - c.inv().value())).norm() < 1e-15);
    }

    #[test]
    fn polar_point_keeps_winding() {
        let q = QParam::circle(2.0).unwrap();
        let p = PolarPoint::real(1.5).dilate(&q, -2.0);
        assert!((p.phase + 4.0).abs() < 1e-15);
        // Principal arg would be 2π − 4; the stored phase is not reduced.
        assert!((p.to_complex().arg() - (2.0 * PI - 4.0)).abs() < 1e-12);
        let half = p.powf(0.5);
        assert!((half.arg() + 2.0).abs() < 1e-12);
    }
}
