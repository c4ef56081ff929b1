//! q-Vilenkin functions `P^J_MNq(ξ)` and basis functions `Ψ^J_MNq`.
//!
//! ```text
//! Ψ^J_MNq(z, z̄) = N^J_MNq · Q_Jq(η) · q^{−NM/2} · R^J_MNq(η) · z̄^{M+N},   η = z z̄
//! ```
//!
//! Square roots of factorial ratios are taken factor by factor, so the
//! plane and spherical forms agree to rounding even when a circle-regime
//! bracket is negative.

use alloc::format;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use crate::contour::{q_half_integer_circle_polar, LqEvaluator};
use crate::qcore::{q_factorial, HalfInt, PolarPoint, QParam, Regime, SpinTriple};
use crate::qprod::{q_integer_j_complex, q_real_regime, TruncationPolicy};
use crate::{Error, Result};

/// `Q_Jq` for one `(J, q)`, dispatching on J parity and q regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFunction {
    j: HalfInt,
    q: QParam,
    policy: TruncationPolicy,
    contour: Option<LqEvaluator>,
}

impl QFunction {
    pub fn new(j: HalfInt, q: QParam) -> Result<Self> {
        Self::with_policy(j, q, TruncationPolicy::default())
    }

    pub fn with_policy(j: HalfInt, q: QParam, policy: TruncationPolicy) -> Result<Self> {
        if j.twice() < 0 {
            return Err(Error::InvalidSpin(format!("J must be ≥ 0, got {j}")));
        }
        let contour = if q.regime() == Regime::UnitCircle && !j.is_integer() {
            Some(LqEvaluator::new(&q)?)
        } else {
            None
        };
        Ok(QFunction {
            j,
            q,
            policy,
            contour,
        })
    }

    /// Replace the `L_q` evaluator (half-odd J, circle q only).
    pub fn with_evaluator(mut self, ev: LqEvaluator) -> Result<Self> {
        if self.contour.is_none() || ev.tau() != self.q.tau() {
            return Err(Error::Domain(format!(
                "an L_q evaluator with τ = {} does not apply to J = {}, q = {}",
                ev.tau(),
                self.j,
                self.q
            )));
        }
        self.contour = Some(ev);
        Ok(self)
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    pub fn evaluator(&self) -> Option<&LqEvaluator> {
        self.contour.as_ref()
    }

    /// The same function at `q^{-1}`.
    pub fn at_inverse_q(&self) -> Self {
        QFunction {
            q: self.q.inv(),
            contour: self.contour.map(|e| e.inv()),
            ..*self
        }
    }

    /// `Q_Jq(η)` for real `η ≥ 0`.
    pub fn eval(&self, eta: f64) -> Result<Complex64> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::Domain(format!(
                "η must be finite and ≥ 0, got {eta}"
            )));
        }
        self.eval_polar(PolarPoint::real(eta))
    }

    /// `Q_Jq` at a point reached from the positive axis by dilations.
    pub fn eval_polar(&self, eta: PolarPoint) -> Result<Complex64> {
        match (self.q.regime(), &self.contour) {
            (Regime::UnitCircle, Some(ev)) => q_half_integer_circle_polar(self.j, eta, ev),
            (Regime::UnitCircle, None) => q_integer_j_complex(self.j, eta.to_complex(), &self.q),
            (Regime::PositiveReal, _) => q_real_regime(self.j, eta, &self.q, &self.policy),
        }
    }

    /// `|Q(q²η)(1+η) − Q(η)(1+q^{−2J}η)| / |Q(η)(1+q^{−2J}η)|` at real `η > 0`.
    pub fn functional_residual(&self, eta: f64) -> Result<f64> {
        let p = PolarPoint::real(eta);
        let rhs = self.eval_polar(p)? * (self.q.pow(-2.0 * self.j.value()) * eta + 1.0);
        let lhs = self.eval_polar(p.dilate(&self.q, 2.0))? * (1.0 + eta);
        Ok((lhs - rhs).norm() / rhs.norm())
    }
}

/// Points on the sphere in the three coordinate systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoordinatePoint {
    /// `z = ρ e^{iφ}`; `z̄` is its conjugate.
    Plane(Complex64),
    Spherical {
        theta: f64,
        phi: f64,
    },
    /// `ξ = cos θ`; only meaningful for the φ-independent `P^J_MNq`.
    Xi(f64),
}

impl CoordinatePoint {
    /// `η = z z̄ = cot²(θ/2) = (1+ξ)/(1−ξ)`.
    pub fn eta(&self) -> f64 {
        match *self {
            CoordinatePoint::Plane(z) => z.norm_sqr(),
            CoordinatePoint::Spherical { theta, .. } => {
                let c = (0.5 * theta).tan().recip();
                c * c
            }
            CoordinatePoint::Xi(xi) => (1.0 + xi) / (1.0 - xi),
        }
    }

    pub fn xi(&self) -> f64 {
        match *self {
            CoordinatePoint::Spherical { theta, .. } => theta.cos(),
            CoordinatePoint::Xi(xi) => xi,
            CoordinatePoint::Plane(_) => {
                let eta = self.eta();
                (eta - 1.0) / (eta + 1.0)
            }
        }
    }

    /// `(θ, φ)`; `φ = 0` for a bare `ξ`.
    pub fn to_spherical(&self) -> (f64, f64) {
        match *self {
            CoordinatePoint::Spherical { theta, phi } => (theta, phi),
            CoordinatePoint::Xi(xi) => (xi.acos(), 0.0),
            CoordinatePoint::Plane(z) => {
                let theta = 2.0 * 1f64.atan2(z.norm());
                let phi = num_traits::Euclid::rem_euclid(&z.arg(), &(2.0 * PI));
                (theta, phi)
            }
        }
    }

    /// `z = cot(θ/2) e^{iφ}`.
    pub fn to_plane(&self) -> Complex64 {
        match *self {
            CoordinatePoint::Plane(z) => z,
            _ => {
                let (theta, phi) = self.to_spherical();
                Complex64::from_polar((0.5 * theta).tan().recip(), phi)
            }
        }
    }
}

/// `i^k`.
fn i_pow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn r_sum<F: Fn(u32) -> Complex64>(s: &SpinTriple, eta: Complex64, fact: F) -> Complex64 {
    let (k_lo, k_hi) = r_range(s);
    if k_lo > k_hi {
        return Complex64::new(0.0, 0.0);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in k_lo..=k_hi {
        let denom = fact(k as u32)
            * fact((s.j_minus_m() as i32 - k) as u32)
            * fact((s.j_minus_n() as i32 - k) as u32)
            * fact((s.m_plus_n() + k) as u32);
        sum += (-eta).powi(k) / denom;
    }
    sum * fact(s.j_minus_n()) * fact(s.j_minus_m())
}

fn r_range(s: &SpinTriple) -> (i32, i32) {
    let lo = 0.max(-s.m_plus_n());
    let hi = (s.j_minus_m() as i32).min(s.j_minus_n() as i32);
    (lo, hi)
}

/// One basis function `Ψ^J_MNq` (and its `P^J_MNq`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VilenkinSpec {
    spin: SpinTriple,
    q: QParam,
    qfn: QFunction,
    gauge: Complex64,
}

impl VilenkinSpec {
    pub fn new(spin: SpinTriple, q: QParam) -> Result<Self> {
        Self::with_policy(spin, q, TruncationPolicy::default())
    }

    pub fn with_policy(spin: SpinTriple, q: QParam, policy: TruncationPolicy) -> Result<Self> {
        Ok(VilenkinSpec {
            spin,
            q,
            qfn: QFunction::with_policy(spin.j(), q, policy)?,
            gauge: Complex64::new(1.0, 0.0),
        })
    }

    /// Override the normalization freedom `γ(J, N, q)` (default 1).
    pub fn with_gauge(mut self, gamma: Complex64) -> Self {
        self.gauge = gamma;
        self
    }

    pub fn with_evaluator(mut self, ev: LqEvaluator) -> Result<Self> {
        self.qfn = self.qfn.with_evaluator(ev)?;
        Ok(self)
    }

    pub fn spin(&self) -> &SpinTriple {
        &self.spin
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    pub fn q_function(&self) -> &QFunction {
        &self.qfn
    }

    /// The same `(J, M, N)` at `q^{-1}`.
    pub fn at_inverse_q(&self) -> Self {
        VilenkinSpec {
            q: self.q.inv(),
            qfn: self.qfn.at_inverse_q(),
            ..*self
        }
    }

    /// The spec with `M` replaced.
    pub fn with_m(&self, m: HalfInt) -> Result<Self> {
        Ok(VilenkinSpec {
            spin: self.spin.with_m(m)?,
            ..*self
        })
    }

    fn fact(&self, n: u32) -> Complex64 {
        q_factorial(n, &self.q)
    }

    fn sqrt_fact(&self, n: u32) -> Complex64 {
        self.fact(n).sqrt()
    }

    /// Number of terms in the `R` sum.
    pub fn r_terms(&self) -> usize {
        let (lo, hi) = r_range(&self.spin);
        (hi - lo + 1).max(0) as usize
    }

    /// `R^J_MNq(η)`.
    pub fn r_polynomial(&self, eta: f64) -> Complex64 {
        self.r_polynomial_complex(Complex64::new(eta, 0.0))
    }

    pub fn r_polynomial_complex(&self, eta: Complex64) -> Complex64 {
        r_sum(&self.spin, eta, |n| self.fact(n))
    }

    /// `C_JNq = (2π)^{-1/2} ([J+N]! [2J+1]! / [J−N]!)^{1/2} γ`.
    pub fn c_constant(&self) -> Complex64 {
        let s = &self.spin;
        self.sqrt_fact(s.j_plus_n()) * self.sqrt_fact(s.two_j() + 1) / self.sqrt_fact(s.j_minus_n())
            * self.gauge
            / (2.0 * PI).sqrt()
    }

    /// `N^J_MNq = C_JNq ([J+M]! / ([J−M]! [2J]!))^{1/2}`.
    pub fn normalization(&self) -> Complex64 {
        let s = &self.spin;
        self.c_constant() * self.sqrt_fact(s.j_plus_m())
            / (self.sqrt_fact(s.j_minus_m()) * self.sqrt_fact(s.two_j()))
    }

    fn phase_factor(&self) -> Complex64 {
        let s = &self.spin;
        self.q.pow(-0.5 * s.n().value() * s.m().value())
    }

    /// `Q_Jq(η)`.
    pub fn q_value(&self, eta: PolarPoint) -> Result<Complex64> {
        self.qfn.eval_polar(eta)
    }

    /// The radial factor of `Ψ^J_MNq = radial(ρ) e^{−i(M+N)φ}`, continued to
    /// dilated arguments `ρ → q^a ρ`.
    pub fn radial(&self, rho: PolarPoint) -> Result<Complex64> {
        let k = self.spin.m_plus_n();
        let pow = rho.powi(k);
        if pow == Complex64::new(0.0, 0.0) {
            return Ok(pow);
        }
        let eta = rho.square();
        let r = self.r_polynomial_complex(eta.to_complex());
        Ok(self.normalization() * self.q_value(eta)? * self.phase_factor() * r * pow)
    }

    /// `Ψ^J_MNq(z, z̄)`.
    pub fn psi_plane(&self, z: Complex64) -> Result<Complex64> {
        let radial = self.radial(PolarPoint::real(z.norm()))?;
        if radial == Complex64::new(0.0, 0.0) {
            return Ok(radial);
        }
        Ok(radial * Complex64::from_polar(1.0, -f64::from(self.spin.m_plus_n()) * z.arg()))
    }

    /// `Ψ^J_MNq(θ, φ)` assembled from `P^J_MNq(cos θ)`.
    pub fn psi_spherical(&self, theta: f64, phi: f64) -> Result<Complex64> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("θ = {theta} outside [0, π]")));
        }
        let s = &self.spin;
        let eta = CoordinatePoint::Spherical { theta, phi }.eta();
        let p = self.p_vilenkin_polar(PolarPoint::real(eta))?;
        let pre = self.c_constant() * self.sqrt_fact(s.j_minus_n())
            / (self.sqrt_fact(s.j_plus_n()) * self.sqrt_fact(s.two_j()))
            * i_pow(-(s.two_j() as i32) + s.m_plus_n())
            * self.phase_factor();
        Ok(pre * p * Complex64::from_polar(1.0, -f64::from(s.m_plus_n()) * phi))
    }

    /// `Ψ^J_MNq` at any coordinate point (`ξ` is taken at `φ = 0`).
    pub fn psi(&self, point: &CoordinatePoint) -> Result<Complex64> {
        match *point {
            CoordinatePoint::Plane(z) => self.psi_plane(z),
            _ => {
                let (theta, phi) = point.to_spherical();
                self.psi_spherical(theta, phi)
            }
        }
    }

    /// `P^J_MNq(ξ)` for `ξ ∈ [−1, 1)`.
    pub fn p_vilenkin(&self, xi: f64) -> Result<Complex64> {
        self.p_vilenkin_polar(PolarPoint::real(xi_to_eta(xi)?))
    }

    /// `P^J_MNq` as a function of `η`, continued to dilated arguments.
    pub fn p_vilenkin_polar(&self, eta: PolarPoint) -> Result<Complex64> {
        let s = &self.spin;
        let k = s.m_plus_n();
        let pow = eta.powf(0.5 * f64::from(k));
        if pow == Complex64::new(0.0, 0.0) {
            return Ok(pow);
        }
        let pre = i_pow(s.two_j() as i32 - k)
            * self.sqrt_fact(s.j_plus_m())
            * self.sqrt_fact(s.j_plus_n())
            / (self.sqrt_fact(s.j_minus_m()) * self.sqrt_fact(s.j_minus_n()));
        let r = self.r_polynomial_complex(eta.to_complex());
        Ok(pre * pow * self.q_value(eta)? * r)
    }
}

fn xi_to_eta(xi: f64) -> Result<f64> {
    if !(-1.0..1.0).contains(&xi) {
        return Err(Error::Domain(format!(
            "ξ = {xi} outside [−1, 1); ξ = 1 is η = ∞ and only reachable as a limit"
        )));
    }
    Ok((1.0 + xi) / (1.0 - xi))
}

fn classical_fact(n: u32) -> Complex64 {
    Complex64::new((1..=n).map(f64::from).product(), 0.0)
}

/// Classical `R^J_MN(η)`.
pub fn classical_r(spin: &SpinTriple, eta: f64) -> f64 {
    r_sum(spin, Complex64::new(eta, 0.0), classical_fact).re
}

/// Classical Vilenkin function `P^J_MN(ξ)` (`[x] → x`, `Q_J = (1+η)^{-J}`).
///
/// Imaginary when `2J − M − N` is odd.
pub fn classical_vilenkin(spin: &SpinTriple, xi: f64) -> Result<Complex64> {
    let eta = xi_to_eta(xi)?;
    let f = |n| classical_fact(n).re;
    let k = spin.m_plus_n();
    let pre = (f(spin.j_plus_m()) * f(spin.j_plus_n())
        / (f(spin.j_minus_m()) * f(spin.j_minus_n())))
    .sqrt();
    let v = pre
        * eta.powf(0.5 * f64::from(k))
        * (1.0 + eta).powf(-spin.j().value())
        * classical_r(spin, eta);
    Ok(i_pow(spin.two_j() as i32 - k) * v)
}

/// Classical `N^J_MN`.
pub fn classical_normalization(spin: &SpinTriple) -> f64 {
    let f = |n| classical_fact(n).re;
    let c =
        (f(spin.j_plus_n()) * f(spin.two_j() + 1) / f(spin.j_minus_n())).sqrt() / (2.0 * PI).sqrt();
    c * (f(spin.j_plus_m()) / (f(spin.j_minus_m()) * f(spin.two_j()))).sqrt()
}

/// Radial factor of the classical `Ψ^J_MN`.
pub fn classical_radial(spin: &SpinTriple, rho: f64) -> f64 {
    let eta = rho * rho;
    classical_normalization(spin)
        * (1.0 + eta).powf(-spin.j().value())
        * classical_r(spin, eta)
        * rho.powi(spin.m_plus_n())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(j: i32, m: i32, n: i32) -> SpinTriple {
        SpinTriple::from_twice(j, m, n).unwrap()
    }

    #[test]
    fn r_polynomial_examples() {
        let q2 = QParam::real(2.0).unwrap();
        let s = VilenkinSpec::new(t(2, 0, 0), q2).unwrap();
        assert!(s.r_polynomial(1.0).norm() < 1e-15);
        assert_eq!(s.r_terms(), 2);
        // M = J: single term 1/[J+N]!
        let s = VilenkinSpec::new(t(3, 3, 1), q2).unwrap();
        assert_eq!(s.r_terms(), 1);
        let expect = Complex64::new(1.0, 0.0) / q_factorial(2, &q2);
        assert!((s.r_polynomial(0.7) - expect).norm() < 1e-15);
        // η = 0 gives 1/[M+N]!
        let s = VilenkinSpec::new(t(4, 2, 0), q2).unwrap();
        assert!(
            (s.r_polynomial(0.0) - Complex64::new(1.0, 0.0) / q_factorial(1, &q2)).norm() < 1e-15
        );
    }

    #[test]
    fn normalization_examples() {
        let q2 = QParam::real(2.0).unwrap();
        let s = VilenkinSpec::new(t(0, 0, 0), q2).unwrap();
        assert!((s.normalization().re - (2.0 * PI).sqrt().recip()).abs() < 1e-15);
        assert!(s.normalization().im == 0.0);
        let cl = classical_normalization(&t(2, 2, 0));
        assert!((cl - 6f64.sqrt() / (2.0 * PI).sqrt()).abs() < 1e-15);
        for (j, m, n) in [(1, 1, -1), (3, -1, 1), (4, 2, -2)] {
            let v = VilenkinSpec::new(t(j, m, n), q2).unwrap().normalization();
            assert!(v.re > 0.0 && v.im == 0.0);
        }
    }

    #[test]
    fn classical_examples() {
        assert!((classical_vilenkin(&t(0, 0, 0), 0.3).unwrap().re - 1.0).abs() < 1e-15);
        for xi in [-0.9, -0.2, 0.0, 0.4, 0.95] {
            let p = classical_vilenkin(&t(2, 0, 0), xi).unwrap();
            assert!((p.re - xi).abs() < 1e-14 && p.im == 0.0);
        }
        // Wigner d^{1/2}_{1/2,1/2}(θ) = cos(θ/2) up to convention; here
        // P = η^{1/2}(1+η)^{-1/2} = cos(θ/2).
        let theta: f64 = 1.1;
        let p = classical_vilenkin(&t(1, 1, 1), theta.cos()).unwrap();
        assert!((p.re - (0.5 * theta).cos()).abs() < 1e-14);
    }

    #[test]
    fn p_vilenkin_examples() {
        let q2 = QParam::real(2.0).unwrap();
        let p = VilenkinSpec::new(t(0, 0, 0), q2)
            .unwrap()
            .p_vilenkin(0.5)
            .unwrap();
        assert!((p - 1.0).norm() < 1e-15);
        let p = VilenkinSpec::new(t(2, 0, 0), q2)
            .unwrap()
            .p_vilenkin(0.0)
            .unwrap();
        assert!(p.norm() < 1e-15);
        assert!(VilenkinSpec::new(t(2, 0, 0), q2)
            .unwrap()
            .p_vilenkin(1.0)
            .is_err());
    }

    #[test]
    fn plane_and_spherical_agree() {
        let qs = [
            QParam::real(2.0).unwrap(),
            QParam::real(0.5).unwrap(),
            QParam::circle(0.3).unwrap(),
        ];
        for q in qs {
            for (j, m, n) in [
                (1, 1, 1),
                (1, -1, 1),
                (2, 0, 0),
                (3, 1, -1),
                (4, -2, 2),
                (3, 3, -3),
            ] {
                let s = VilenkinSpec::new(t(j, m, n), q).unwrap();
                for (theta, phi) in [(PI / 2.0, 0.0), (0.7, 1.3), (2.5, 4.0)] {
                    let pt = CoordinatePoint::Spherical { theta, phi };
                    let a = s.psi_spherical(theta, phi).unwrap();
                    let b = s.psi_plane(pt.to_plane()).unwrap();
                    assert!(
                        (a - b).norm() < 1e-12 * (1.0 + a.norm()),
                        "{q} {j} {m} {n}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn highest_weight_polar_form() {
        // Ψ^J_JN = C/[J+N]! q^{−JN/2} Q(ρ²) ρ^{J+N} e^{−i(J+N)φ}
        let q = QParam::circle(0.3).unwrap();
        let s = VilenkinSpec::new(t(3, 3, 1), q).unwrap();
        let rho: f64 = 1.7;
        let lhs = s.radial(PolarPoint::real(rho)).unwrap();
        let rhs = s.c_constant() / q_factorial(2, &q)
            * q.pow(-0.375)
            * s.q_value(PolarPoint::real(rho * rho)).unwrap()
            * rho.powi(2);
        assert!((lhs - rhs).norm() < 1e-14);
        let z0 = s.psi_plane(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(z0, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn coordinate_round_trip() {
        for (theta, phi) in [(0.3, 0.1), (PI / 2.0, 3.0), (2.9, 6.0)] {
            let p = CoordinatePoint::Spherical { theta, phi };
            let z = p.to_plane();
            let back = CoordinatePoint::Plane(z);
            let (t2, p2) = back.to_spherical();
            assert!((t2 - theta).abs() < 1e-12 && (p2 - phi).abs() < 1e-12);
            assert!((back.eta() - p.eta()).abs() < 1e-12 * p.eta());
            let xi = p.xi();
            assert!((CoordinatePoint::Xi(xi).eta() - p.eta()).abs() < 1e-12 * p.eta());
            assert!(((p.eta() - 1.0) / (p.eta() + 1.0) - xi).abs() < 1e-12);
        }
    }

    #[test]
    fn q_dispatch_covers_all_cases() {
        let one = Complex64::new(1.0, 0.0);
        for q in [QParam::real(2.0).unwrap(), QParam::circle(0.3).unwrap()] {
            for j in [HalfInt::ONE, HalfInt::from_twice(3)] {
                let f = QFunction::new(j, q).unwrap();
                let eta = 0.8;
                let a = f.eval_polar(PolarPoint::real(eta).dilate(&q, 2.0)).unwrap();
                let b = f.eval(eta).unwrap();
                let res = (a * (1.0 + eta) - b * (one + q.pow(-j.value() * 2.0) * eta)).norm();
                assert!(res < 1e-10, "{q} J={j}: {res}");
            }
        }
    }
}
