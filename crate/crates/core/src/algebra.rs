//! The generators `H3`, `H±` and the Casimir acting on single Fourier modes
//! `f(ρ) e^{−imφ}`.
//!
//! On a mode, `q^{±i∂φ}` is multiplication by `q^{±m}` and `q^{ρ∂ρ}` is
//! `f(ρ) ↦ f(qρ)`, so
//!
//! ```text
//! H+ f = −1/(q−q⁻¹) [(ρ+1/ρ) q^{−N/2} f(qρ) − ρ q^{−m+3N/2} f(ρ) − ρ⁻¹ q^{m−N/2} f(ρ)]   (m → m+1)
//! H− f = +1/(q−q⁻¹) [(ρ+1/ρ) q^{N/2} f(qρ)  − ρ q^{m−3N/2} f(ρ)  − ρ⁻¹ q^{−m+N/2} f(ρ)]  (m → m−1)
//! ```

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use crate::qcore::{q_bracket, HalfInt, PolarPoint, QParam};
use crate::vilenkin::VilenkinSpec;
use crate::{Error, Result};

/// A radial evaluator, continued to dilated arguments.
pub type Radial = Arc<dyn Fn(PolarPoint) -> Result<Complex64> + Send + Sync>;

/// `f(ρ) e^{−imφ}` with the `q` its operators use.
#[derive(Clone)]
pub struct AngularMode {
    pub m: i32,
    pub radial: Radial,
    pub q: QParam,
}

impl fmt::Debug for AngularMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AngularMode")
            .field("m", &self.m)
            .field("q", &self.q)
            .finish_non_exhaustive()
    }
}

impl AngularMode {
    pub fn new<F>(m: i32, q: QParam, radial: F) -> Self
    where
        F: Fn(PolarPoint) -> Result<Complex64> + Send + Sync + 'static,
    {
        AngularMode {
            m,
            radial: Arc::new(radial),
            q,
        }
    }

    /// The mode of `Ψ^J_MNq`: `m = M + N`.
    pub fn from_vilenkin(spec: &VilenkinSpec) -> Self {
        let s = *spec;
        AngularMode::new(spec.spin().m_plus_n(), *spec.q(), move |rho| s.radial(rho))
    }

    pub fn zero(m: i32, q: QParam) -> Self {
        AngularMode::new(m, q, |_| Ok(Complex64::new(0.0, 0.0)))
    }

    pub fn eval(&self, rho: PolarPoint) -> Result<Complex64> {
        (self.radial)(rho)
    }

    /// Radial value at real `ρ`.
    pub fn at(&self, rho: f64) -> Result<Complex64> {
        self.eval(PolarPoint::real(rho))
    }

    /// `c·f`.
    pub fn scale(&self, c: Complex64) -> Self {
        let f = self.radial.clone();
        AngularMode::new(self.m, self.q, move |rho| Ok(f(rho)? * c))
    }

    /// `f − g` for modes with the same `m`.
    pub fn sub(&self, other: &AngularMode) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::Domain(format!(
                "cannot subtract modes m = {} and m = {}",
                self.m, other.m
            )));
        }
        let (f, g) = (self.radial.clone(), other.radial.clone());
        Ok(AngularMode::new(self.m, self.q, move |rho| {
            Ok(f(rho)? - g(rho)?)
        }))
    }

    /// `f + g` for modes with the same `m`.
    pub fn add(&self, other: &AngularMode) -> Result<Self> {
        self.sub(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `max_i |f(ρ_i)|`.
    pub fn grid_norm(&self, grid: &[f64]) -> Result<f64> {
        let mut max: f64 = 0.0;
        for &rho in grid {
            max = max.max(self.at(rho)?.norm());
        }
        Ok(max)
    }
}

/// Which operator produced a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    H3,
    HPlus,
    HMinus,
    /// `H+H− + [H3][H3−1]`.
    CasimirPlusMinus,
    /// `H−H+ + [H3][H3+1]`.
    CasimirMinusPlus,
}

#[derive(Debug, Clone)]
pub struct OperatorResult {
    pub mode: AngularMode,
    pub provenance: Generator,
}

/// `H3 f = (m − N) f`.
pub fn apply_h3(mode: &AngularMode, n: HalfInt) -> OperatorResult {
    let c = f64::from(mode.m) - n.value();
    OperatorResult {
        mode: mode.scale(Complex64::new(c, 0.0)),
        provenance: Generator::H3,
    }
}

fn ladder(mode: &AngularMode, n: HalfInt, sign: f64) -> AngularMode {
    let q = mode.q;
    let m = f64::from(mode.m);
    let nv = n.value();
    let pre = -sign / q.q_minus_inv();
    let c_dil = q.pow(-sign * nv / 2.0);
    let c_rho = q.pow(sign * (-m + 1.5 * nv));
    let c_inv = q.pow(sign * (m - 0.5 * nv));
    let f = mode.radial.clone();
    AngularMode::new(mode.m + sign as i32, q, move |rho| {
        let r = rho.to_complex();
        let shifted = f(rho.dilate(&q, 1.0))?;
        let here = f(rho)?;
        Ok(pre * ((r + r.inv()) * c_dil * shifted - (r * c_rho + r.inv() * c_inv) * here))
    })
}

/// `H+`, raising `m` by one.
pub fn apply_h_plus(mode: &AngularMode, n: HalfInt) -> OperatorResult {
    OperatorResult {
        mode: ladder(mode, n, 1.0),
        provenance: Generator::HPlus,
    }
}

/// `H−`, lowering `m` by one.
pub fn apply_h_minus(mode: &AngularMode, n: HalfInt) -> OperatorResult {
    OperatorResult {
        mode: ladder(mode, n, -1.0),
        provenance: Generator::HMinus,
    }
}

/// The Casimir in either of its two equal forms.
pub fn apply_casimir(
    mode: &AngularMode,
    n: HalfInt,
    ordering: Generator,
) -> Result<OperatorResult> {
    let h3 = f64::from(mode.m) - n.value();
    let q = mode.q;
    let (inner, outer, shift) = match ordering {
        Generator::CasimirPlusMinus => (apply_h_minus(mode, n), Generator::HPlus, -1.0),
        Generator::CasimirMinusPlus => (apply_h_plus(mode, n), Generator::HMinus, 1.0),
        other => {
            return Err(Error::Domain(format!(
                "{other:?} is not a Casimir ordering"
            )));
        }
    };
    let lifted = match outer {
        Generator::HPlus => apply_h_plus(&inner.mode, n),
        _ => apply_h_minus(&inner.mode, n),
    };
    let c = q_bracket(h3, &q) * q_bracket(h3 + shift, &q);
    Ok(OperatorResult {
        mode: lifted.mode.add(&mode.scale(c))?,
        provenance: ordering,
    })
}

/// `n` logarithmically spaced points in `[lo, hi]`.
pub fn rho_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// 30 points in `[1e−2, 1e2]`.
pub fn default_rho_grid() -> Vec<f64> {
    rho_grid(30, 1e-2, 1e2)
}

/// Grid-max residuals of the commutation relations on one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// `‖[H3, H+]f − H+f‖`.
    pub h3_plus: f64,
    /// `‖[H3, H−]f + H−f‖`.
    pub h3_minus: f64,
    /// `‖[H+, H−]f − [2H3]_q f‖`.
    pub plus_minus: f64,
    /// `‖f‖`, for relative comparisons.
    pub scale: f64,
}

impl CommutatorReport {
    pub fn max_residual(&self) -> f64 {
        self.h3_plus.max(self.h3_minus).max(self.plus_minus)
    }
}

pub fn commutator_check(mode: &AngularMode, n: HalfInt, grid: &[f64]) -> Result<CommutatorReport> {
    let hp = apply_h_plus(mode, n).mode;
    let hm = apply_h_minus(mode, n).mode;
    let h3_hp = apply_h3(&hp, n).mode;
    let hp_h3 = apply_h_plus(&apply_h3(mode, n).mode, n).mode;
    let h3_hm = apply_h3(&hm, n).mode;
    let hm_h3 = apply_h_minus(&apply_h3(mode, n).mode, n).mode;
    let pm = apply_h_plus(&hm, n).mode;
    let mp = apply_h_minus(&hp, n).mode;
    let c = q_bracket(2.0 * (f64::from(mode.m) - n.value()), &mode.q);
    let mut r = CommutatorReport {
        h3_plus: 0.0,
        h3_minus: 0.0,
        plus_minus: 0.0,
        scale: 0.0,
    };
    for &rho in grid {
        let f = mode.at(rho)?;
        r.scale = r.scale.max(f.norm());
        r.h3_plus = r
            .h3_plus
            .max((h3_hp.at(rho)? - hp_h3.at(rho)? - hp.at(rho)?).norm());
        r.h3_minus = r
            .h3_minus
            .max((h3_hm.at(rho)? - hm_h3.at(rho)? + hm.at(rho)?).norm());
        r.plus_minus = r.plus_minus.max((pm.at(rho)? - mp.at(rho)? - c * f).norm());
    }
    Ok(r)
}

/// `‖[C, H±] f‖` for both signs.
pub fn casimir_commutator(mode: &AngularMode, n: HalfInt, grid: &[f64]) -> Result<(f64, f64)> {
    let c_f = apply_casimir(mode, n, Generator::CasimirPlusMinus)?.mode;
    let mut out = [0.0; 2];
    for (slot, raise) in [true, false].into_iter().enumerate() {
        let h = |g: &AngularMode| {
            if raise {
                apply_h_plus(g, n).mode
            } else {
                apply_h_minus(g, n).mode
            }
        };
        let hc = h(&c_f);
        let ch = apply_casimir(&h(mode), n, Generator::CasimirPlusMinus)?.mode;
        for &rho in grid {
            out[slot] = f64::max(out[slot], (hc.at(rho)? - ch.at(rho)?).norm());
        }
    }
    Ok((out[0], out[1]))
}

/// Grid residuals of the irrep action on one basis function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderReport {
    /// `‖H+Ψ_M − c+ Ψ_{M+1}‖ / ‖Ψ_M‖`.
    pub raise: f64,
    /// `‖H−Ψ_M − c− Ψ_{M−1}‖ / ‖Ψ_M‖`.
    pub lower: f64,
    /// `‖H3Ψ_M − MΨ_M‖ / ‖Ψ_M‖`.
    pub weight: f64,
}

impl LadderReport {
    pub fn max_residual(&self) -> f64 {
        self.raise.max(self.lower).max(self.weight)
    }
}

/// `c±(J, M) = ([J∓M]_q [J±M+1]_q)^{1/2}`.
pub fn ladder_coefficient(j: HalfInt, m: HalfInt, raise: bool, q: &QParam) -> Complex64 {
    let (a, b) = if raise {
        (j - m, j + m + HalfInt::ONE)
    } else {
        (j + m, j - m + HalfInt::ONE)
    };
    (q_bracket(a.value(), q) * q_bracket(b.value(), q)).sqrt()
}

pub fn ladder_residual(spec: &VilenkinSpec, grid: &[f64]) -> Result<LadderReport> {
    let s = spec.spin();
    let (j, m, n) = (s.j(), s.m(), s.n());
    let q = *spec.q();
    let mode = AngularMode::from_vilenkin(spec);
    let norm = mode.grid_norm(grid)?;
    if norm == 0.0 {
        return Err(Error::Domain(format!(
            "Ψ for {s} vanishes on the whole grid"
        )));
    }
    let target = |raise: bool| -> Result<AngularMode> {
        let m2 = if raise {
            m + HalfInt::ONE
        } else {
            m - HalfInt::ONE
        };
        if m2.abs() > j {
            return Ok(AngularMode::zero(mode.m + if raise { 1 } else { -1 }, q));
        }
        let c = ladder_coefficient(j, m, raise, &q);
        Ok(AngularMode::from_vilenkin(&spec.with_m(m2)?).scale(c))
    };
    let raise = apply_h_plus(&mode, n).mode.sub(&target(true)?)?;
    let lower = apply_h_minus(&mode, n).mode.sub(&target(false)?)?;
    let weight = apply_h3(&mode, n)
        .mode
        .sub(&mode.scale(Complex64::new(m.value(), 0.0)))?;
    Ok(LadderReport {
        raise: raise.grid_norm(grid)? / norm,
        lower: lower.grid_norm(grid)? / norm,
        weight: weight.grid_norm(grid)? / norm,
    })
}

/// `‖C Ψ − [J][J+1] Ψ‖ / ‖Ψ‖` for each ordering, and the eigenvalue.
pub fn casimir_residual(spec: &VilenkinSpec, grid: &[f64]) -> Result<(f64, f64, Complex64)> {
    let s = spec.spin();
    let q = spec.q();
    let mode = AngularMode::from_vilenkin(spec);
    let jv = s.j().value();
    let ev = q_bracket(jv, q) * q_bracket(jv + 1.0, q);
    let norm = mode.grid_norm(grid)?;
    let mut res = [0.0; 2];
    for (slot, ordering) in [Generator::CasimirPlusMinus, Generator::CasimirMinusPlus]
        .into_iter()
        .enumerate()
    {
        let c = apply_casimir(&mode, s.n(), ordering)?.mode;
        for &rho in grid {
            res[slot] = f64::max(res[slot], (c.at(rho)? - ev * mode.at(rho)?).norm() / norm);
        }
    }
    Ok((res[0], res[1], ev))
}

/// Derivative of a real-argument radial function (five-point stencil).
fn derivative(f: &Radial, rho: f64) -> Result<Complex64> {
    let h = 1e-3 * rho.max(1e-2);
    let at = |x: f64| f(PolarPoint::real(x));
    Ok(
        (at(rho - 2.0 * h)? - at(rho + 2.0 * h)? + (at(rho + h)? - at(rho - h)?) * 8.0)
            / (12.0 * h),
    )
}

/// Classical `H+ = −∂z − z̄²∂z̄ + N z̄` on a mode (real `ρ` only).
pub fn classical_h_plus(mode: &AngularMode, n: HalfInt) -> AngularMode {
    let f = mode.radial.clone();
    let m = f64::from(mode.m);
    let nv = n.value();
    AngularMode::new(mode.m + 1, mode.q, move |rho| {
        real_only(rho)?;
        let r = rho.modulus;
        let (v, d) = (f(rho)?, derivative(&f, r)?);
        Ok(-(d - v * m / r) * 0.5 - (d + v * m / r) * (0.5 * r * r) + v * (nv * r))
    })
}

/// Classical `H− = z²∂z + ∂z̄ + N z` on a mode (real `ρ` only).
pub fn classical_h_minus(mode: &AngularMode, n: HalfInt) -> AngularMode {
    let f = mode.radial.clone();
    let m = f64::from(mode.m);
    let nv = n.value();
    AngularMode::new(mode.m - 1, mode.q, move |rho| {
        real_only(rho)?;
        let r = rho.modulus;
        let (v, d) = (f(rho)?, derivative(&f, r)?);
        Ok((d - v * m / r) * (0.5 * r * r) + (d + v * m / r) * 0.5 + v * (nv * r))
    })
}

fn real_only(rho: PolarPoint) -> Result<()> {
    if rho.phase != 0.0 {
        return Err(Error::Domain(format!(
            "classical operators act on real ρ only (phase {})",
            rho.phase
        )));
    }
    Ok(())
}
