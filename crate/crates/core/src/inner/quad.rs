//! Adaptive Gauss–Kronrod (G10/K21) quadrature for complex-valued
//! integrands on finite intervals and on `[0, ∞)`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is in the build graph
use num_traits::Float;

use crate::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// How `[0, ∞)` is mapped onto finite intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfLineTransform {
    /// `[0, s]` as is, `[s, ∞)` through `t = s/u`, `u ∈ (0, 1]`.
    SplitReciprocal { scale: f64 },
    /// `t = e^x` on `x ∈ [lower, upper]`; the integrand must be negligible
    /// outside.
    Exponential { lower: f64, upper: f64 },
}

impl Default for HalfLineTransform {
    fn default() -> Self {
        HalfLineTransform::SplitReciprocal { scale: 1.0 }
    }
}

/// Tolerances and limits for the adaptive driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// Maximum number of subintervals kept.
    pub max_intervals: usize,
    pub transform: HalfLineTransform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_depth: 40,
            max_intervals: 2000,
            transform: HalfLineTransform::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "quadrature tolerances must be positive (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        Ok(QuadratureSpec {
            abs_tol,
            rel_tol,
            ..QuadratureSpec::default()
        })
    }

    pub fn with_transform(mut self, transform: HalfLineTransform) -> Self {
        self.transform = transform;
        self
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Outcome of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub est_error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl QuadResult {
    /// Turn a non-converged result into [`Error::Quadrature`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Quadrature {
                value: self.value,
                est_error: self.est_error,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    depth: u32,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn kronrod21<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center)?;
    let mut res_k = f_center * WGK[10];
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut res_abs = f_center.norm() * WGK[10];
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let value = res_k * half;
    let err = ((res_k - res_g) * half).norm();
    let abs_half = half.abs();
    Ok((
        value,
        rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    ))
}

/// Globally adaptive integration of `f` over `[a, b]`, with optional
/// interior breakpoints.
///
/// The integrand never sees the endpoints. A result that misses the
/// tolerance is returned with `converged = false`.
pub fn integrate<F>(mut f: F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if breakpoints.len() < 2 {
        return Err(Error::Domain(format!(
            "integration needs at least two breakpoints, got {}",
            breakpoints.len()
        )));
    }
    let mut segments: Vec<Segment> = Vec::with_capacity(64);
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        let (value, error) = kronrod21(&mut f, w[0], w[1])?;
        evaluations += 21;
        segments.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            depth: 0,
        });
    }
    loop {
        let total: Complex64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if err <= spec.target(total) {
            return Ok(QuadResult {
                value: total,
                est_error: err,
                converged: true,
                evaluations,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.depth < spec.max_depth)
            .max_by(|x, y| {
                x.1.error
                    .partial_cmp(&y.1.error)
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i);
        let idx = match worst {
            Some(i) if segments.len() < spec.max_intervals => i,
            _ => {
                return Ok(QuadResult {
                    value: total,
                    est_error: err,
                    converged: false,
                    evaluations,
                })
            }
        };
        let s = segments.swap_remove(idx);
        let mid = 0.5 * (s.a + s.b);
        let (v1, e1) = kronrod21(&mut f, s.a, mid)?;
        let (v2, e2) = kronrod21(&mut f, mid, s.b)?;
        evaluations += 42;
        segments.push(Segment {
            a: s.a,
            b: mid,
            value: v1,
            error: e1,
            depth: s.depth + 1,
        });
        segments.push(Segment {
            a: mid,
            b: s.b,
            value: v2,
            error: e2,
            depth: s.depth + 1,
        });
    }
}

/// `∫₀^∞ f(t) dt` for a complex-valued integrand, mapped by `spec.transform`.
pub fn integrate_halfline<F>(mut f: F, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    match spec.transform {
        HalfLineTransform::SplitReciprocal { scale } => {
            if !(scale > 0.0) {
                return Err(Error::Domain(format!(
                    "half-line split point {scale} must be > 0"
                )));
            }
            // u ∈ [0, 1] covers [0, s] directly (u ↦ s·u) and [s, ∞) via t = s/u,
            // stacked as one interval [0, 2] so errors are balanced globally.
            integrate(
                |x| {
                    if x <= 1.0 {
                        Ok(f(scale * x)? * scale)
                    } else {
                        let u = 2.0 - x;
                        Ok(f(scale / u)? * (scale / (u * u)))
                    }
                },
                &[0.0, 0.5, 1.0, 1.5, 2.0],
                spec,
            )
        }
        HalfLineTransform::Exponential { lower, upper } => {
            if !(lower < upper) {
                return Err(Error::Domain(format!(
                    "empty exponential window [{lower}, {upper}]"
                )));
            }
            let n = (((upper - lower) / 4.0).ceil() as usize).clamp(1, 64);
            let pts: Vec<f64> = (0..=n)
                .map(|i| lower + (upper - lower) * i as f64 / n as f64)
                .collect();
            integrate(
                |x| {
                    let t = x.exp();
                    Ok(f(t)? * t)
                },
                &pts,
                spec,
            )
        }
    }
}

/// `∫₀^∞ f(t) dt` for a real integrand; returns `(value, est_error)` and
/// whether the tolerance was met.
pub fn quad_halfline<F>(mut f: F, spec: &QuadratureSpec) -> (f64, f64, bool)
where
    F: FnMut(f64) -> f64,
{
    match integrate_halfline(|t| Ok(Complex64::new(f(t), 0.0)), spec) {
        Ok(r) => (r.value.re, r.est_error, r.converged),
        Err(_) => (f64::NAN, f64::INFINITY, false),
    }
}
