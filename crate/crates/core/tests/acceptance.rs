//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qsu2_core::algebra::{casimir_residual, default_rho_grid, ladder_residual, AngularMode};
use qsu2_core::contour::{f_product, f_product_from_q, LqEvaluator};
use qsu2_core::inner::{
    classical_scalar_product, gram_matrix, norm_integral_circle, norm_integral_real,
    ramanujan_qbeta, scalar_product, vilenkin_ortho_integral, QPair, QuadratureSpec,
};
use qsu2_core::qcore::{
    alternating_qbinomial_sum, q_binomial, q_bracket, weighted_qbinomial_closed_form,
    weighted_qbinomial_sum,
};
use qsu2_core::qprod::TruncationPolicy;
use qsu2_core::vilenkin::{classical_radial, classical_vilenkin, QFunction, VilenkinSpec};
use qsu2_core::{HalfInt, PolarPoint, QParam, Result, SpinTriple};

struct Outcome {
    pass: bool,
    detail: String,
}

fn worst(label: &mut String, max: &mut f64, value: f64, what: impl FnOnce() -> String) {
    if !(value <= *max) {
        *max = value;
        *label = what();
    }
}

/// All `(J, M, N)` with `J ≤ j_max_twice/2`.
fn triples(j_max_twice: i32) -> Vec<SpinTriple> {
    let mut v = Vec::new();
    for j in 0..=j_max_twice {
        for n in (-j..=j).step_by(2) {
            for m in (-j..=j).step_by(2) {
                v.push(SpinTriple::from_twice(j, m, n).unwrap());
            }
        }
    }
    v
}

fn three_qs() -> [QParam; 3] {
    [
        QParam::real(2.0).unwrap(),
        QParam::real(0.5).unwrap(),
        QParam::circle(0.3).unwrap(),
    ]
}

fn log_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn ladder() -> Result<Outcome> {
    let start = Instant::now();
    let grid = default_rho_grid();
    let mut max = 0.0;
    let mut at = String::new();
    for q in three_qs() {
        for s in triples(4) {
            let r = ladder_residual(&VilenkinSpec::new(s, q)?, &grid)?;
            worst(&mut at, &mut max, r.max_residual(), || {
                format!("{s} at q={q}")
            });
        }
    }
    let t = start.elapsed();
    Ok(Outcome {
        pass: max < 1e-8 && t < Duration::from_secs(60),
        detail: format!(
            "max relative residual {max:.2e} (worst {at}), tol 1e-8; {:.1}s of 60s",
            t.as_secs_f64()
        ),
    })
}

fn casimir() -> Result<Outcome> {
    let grid = default_rho_grid();
    let mut max = 0.0;
    let mut at = String::new();
    for q in three_qs() {
        for s in triples(4) {
            let (pm, mp, _) = casimir_residual(&VilenkinSpec::new(s, q)?, &grid)?;
            worst(&mut at, &mut max, pm.max(mp), || format!("{s} at q={q}"));
        }
    }
    let q = QParam::real(2.0)?;
    let spin = SpinTriple::from_twice(1, 1, 1)?;
    let (_, _, ev) = casimir_residual(&VilenkinSpec::new(spin, q)?, &grid)?;
    let exact = (ev - 7.0 / 9.0).norm();
    Ok(Outcome {
        pass: max < 1e-8 && exact < 1e-12,
        detail: format!(
            "both orderings: max relative residual {max:.2e} (worst {at}), tol 1e-8; [1/2][3/2] at q=2 minus 7/9 = {exact:.1e}, tol 1e-12"
        ),
    })
}

fn functional_equation() -> Result<Outcome> {
    let grid = log_grid(41, 0.01, 100.0);
    let mut max = 0.0;
    let mut at = String::new();
    for q in three_qs() {
        for jt in 0..=5 {
            let qf = QFunction::new(HalfInt::from_twice(jt), q)?;
            for &eta in &grid {
                let r = qf.functional_residual(eta)?;
                worst(&mut at, &mut max, r, || {
                    format!("J={} q={q} η={eta:.3}", qf.j())
                });
            }
        }
    }
    Ok(Outcome {
        pass: max < 1e-9,
        detail: format!("max relative residual {max:.2e} (worst {at}), tol 1e-9"),
    })
}

fn lemma1() -> Result<Outcome> {
    let mut diff: f64 = 0.0;
    let mut re: f64 = 0.0;
    let mut fprod: f64 = 0.0;
    for tau in [0.2, -0.2, 0.7, -0.7, 2.0, -2.0] {
        let q = QParam::circle_with_guard(tau, 0)?;
        let ev = LqEvaluator::new(&q)?;
        for eta in [0.1, 1.0, 10.0] {
            let p = PolarPoint::real(eta);
            let d = ev.eval_polar(p.dilate(&q, 1.0))?
                - ev.eval_polar(p.dilate(&q, -1.0))?
                - (1.0 + eta).ln();
            diff = diff.max(d.norm());
            re = re.max(ev.eval(Complex64::new(eta, 0.0))?.re.abs());
            for jt in [1, 3, 5] {
                let j = HalfInt::from_twice(jt);
                let a = f_product(j, eta, &q)?;
                let b = f_product_from_q(j, eta, &ev)?;
                fprod = fprod.max((a - b).norm() / a.norm());
            }
        }
    }
    Ok(Outcome {
        pass: diff < 1e-7 && re < 1e-10 && fprod < 1e-7,
        detail: format!(
            "difference equation {diff:.2e} (tol 1e-7); |Re L| {re:.2e} (tol 1e-10); F product vs exp L {fprod:.2e} (tol 1e-7)"
        ),
    })
}

fn orthonormality() -> Result<Outcome> {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let tight = QuadratureSpec::with_tolerances(1e-12, 1e-11)?;
    let mut gram: f64 = 0.0;
    let mut eig = f64::INFINITY;
    let mut at = String::new();
    let mut corollary: f64 = 0.0;
    for q in [QParam::real(2.0)?, QParam::circle(0.3)?] {
        for (jmax, m, n) in [(5, 1, 1), (5, 1, -1), (4, 0, 0), (4, 2, 0), (5, 3, 1)] {
            let (m, n) = (HalfInt::from_twice(m), HalfInt::from_twice(n));
            let g = gram_matrix(HalfInt::from_twice(jmax), m, n, &q, &spec)?;
            let dev = g.max_off_diagonal.max(g.max_diagonal_deviation);
            worst(&mut at, &mut gram, dev, || format!("M={m} N={n} q={q}"));
            eig = eig.min(g.min_eigenvalue);
            let js = g.js;
            for &j1 in &js {
                for &j2 in &js {
                    let v = vilenkin_ortho_integral(j1, j2, m, n, &q, &tight)?.value;
                    let expect = if j1 == j2 {
                        q_bracket(2.0 * j1.value() + 1.0, &q).inv()
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    let scale = q_bracket(2.0 * j1.value() + 1.0, &q).norm().max(1.0);
                    corollary = corollary.max((v - expect).norm() * scale);
                }
            }
        }
    }
    let t = start.elapsed();
    Ok(Outcome {
        pass: gram < 1e-6 && eig > 0.0 && corollary < 1e-6 && t < Duration::from_secs(300),
        detail: format!(
            "Gram deviation {gram:.2e} (worst {at}), min eigenvalue {eig:.3}; corollary {corollary:.2e}; tol 1e-6; {:.1}s of 300s",
            t.as_secs_f64()
        ),
    })
}

fn norm_closed_forms() -> Result<Outcome> {
    let tight = QuadratureSpec::with_tolerances(1e-13, 1e-12)?;
    let mut max = 0.0;
    let mut at = String::new();
    for q in [QParam::real(2.0)?, QParam::real(0.5)?, QParam::circle(0.3)?] {
        for jt in 0..=4 {
            for nt in (-jt..=jt).step_by(2) {
                let (j, n) = (HalfInt::from_twice(jt), HalfInt::from_twice(nt));
                let gap = if q.is_real() {
                    norm_integral_real(j, n, &q, &tight)?.relative_gap()
                } else {
                    norm_integral_circle(j, n, &q, &tight)?.dual.relative_gap()
                };
                worst(&mut at, &mut max, gap, || format!("I J={j} N={n} q={q}"));
            }
        }
    }
    let policy = TruncationPolicy::default();
    for q in [0.3, 0.5, 0.8] {
        for m in 1..=3 {
            for n in 1..=3 {
                let gap = ramanujan_qbeta(m, n, q, &tight, &policy)?.relative_gap();
                worst(&mut at, &mut max, gap, || format!("B({m},{n}) q={q}"));
            }
        }
    }
    let b11 = ramanujan_qbeta(1, 1, 0.5, &tight, &policy)?;
    let ln4 = (b11.quadrature.value.re - 4f64.ln()).abs();
    Ok(Outcome {
        pass: max < 1e-7 && ln4 < 1e-9,
        detail: format!("max relative gap {max:.2e} (worst {at}), tol 1e-7; B(1,1) at q=1/2 minus 2 ln 2 = {ln4:.1e}, tol 1e-9"),
    })
}

fn classical_limit() -> Result<Outcome> {
    let q = QParam::real_from_tau(1e-4)?;
    let xs: Vec<f64> = (0..=198).map(|i| -0.99 + 0.01 * i as f64).collect();
    let mut sup = 0.0;
    let mut at = String::new();
    for s in triples(4) {
        let v = VilenkinSpec::new(s, q)?;
        for &xi in &xs {
            let d = (v.p_vilenkin(xi)? - classical_vilenkin(&s, xi)?).norm();
            worst(&mut at, &mut sup, d, || format!("{s} ξ={xi:.2}"));
        }
    }
    let tight = QuadratureSpec::with_tolerances(1e-12, 1e-11)?;
    let mut prod: f64 = 0.0;
    let s1 = SpinTriple::from_twice(2, 0, 0)?;
    let s2 = SpinTriple::from_twice(4, 0, 0)?;
    for q in [QParam::real_from_tau(1e-4)?, QParam::circle(1e-4)?] {
        let pair = |s: SpinTriple| -> Result<QPair> {
            Ok(QPair::from_vilenkin(&VilenkinSpec::new(s, q)?))
        };
        let mixed = |s: SpinTriple, q: QParam| -> Result<AngularMode> {
            let a = AngularMode::from_vilenkin(&VilenkinSpec::new(s, q)?);
            a.add(&AngularMode::from_vilenkin(&VilenkinSpec::new(s2, q)?))
        };
        let p1 = QPair::new(mixed(s1, q)?, mixed(s1, q.inv())?)?;
        let p2 = pair(s1)?;
        let value = scalar_product(&p1, &p2, &q, &tight)?.value;
        let c = |s: SpinTriple| {
            AngularMode::new(0, q, move |r| {
                Ok(Complex64::new(classical_radial(&s, r.modulus), 0.0))
            })
        };
        let classical = classical_scalar_product(&c(s1).add(&c(s2))?, &c(s1), &tight)?.value;
        prod = prod.max((value - classical).norm());
        // non-basis pair: the q-products are not exactly orthonormal here
        let bump = |k: i32| {
            AngularMode::new(1, q, move |r| {
                let rho = r.to_complex();
                Ok(rho.powi(k) / (rho * rho + 1.0).powi(2))
            })
        };
        let (b1, b2) = (QPair::constant(bump(1)), QPair::constant(bump(3)));
        let value = scalar_product(&b1, &b2, &q, &tight)?.value;
        let classical = classical_scalar_product(&bump(1), &bump(3), &tight)?.value;
        prod = prod.max((value - classical).norm() / classical.norm());
    }
    Ok(Outcome {
        pass: sup < 5e-3 && prod < 5e-3,
        detail: format!(
            "P sup-norm {sup:.2e} (worst {at}); scalar products vs classical {prod:.2e}; tol 5e-3"
        ),
    })
}

fn qbinomial() -> Result<Outcome> {
    let mut b16: f64 = 0.0;
    let mut b17: f64 = 0.0;
    for q in [QParam::real(2.0)?, QParam::circle(0.3)?] {
        for jt in 0..=6 {
            for nt in (-jt..=jt).step_by(2) {
                let (j, n) = (HalfInt::from_twice(jt), HalfInt::from_twice(nt));
                let top = jt as u32 + 1;
                let scale = (0..=top)
                    .map(|p| {
                        (q_binomial(top, p, &q).unwrap() * q.pow(f64::from(nt * p as i32))).norm()
                    })
                    .fold(1.0, f64::max);
                b16 = b16.max(alternating_qbinomial_sum(j, n, &q)?.norm() / scale);
                let closed = weighted_qbinomial_closed_form(j, n, &q)?;
                b17 = b17.max((weighted_qbinomial_sum(j, n, &q)? - closed).norm() / closed.norm());
            }
        }
    }
    Ok(Outcome {
        pass: b16 < 1e-10 && b17 < 1e-10,
        detail: format!("alternating sum {b16:.2e} (relative to largest term); weighted sum {b17:.2e} relative; tol 1e-10"),
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 8] = [
        ("ladder action of H± and H3", ladder),
        ("Casimir eigenvalue", casimir),
        ("functional equation of Q", functional_equation),
        ("difference equation for L", lemma1),
        ("orthonormality and Gram identity", orthonormality),
        ("norm closed forms and q-beta", norm_closed_forms),
        ("classical limit", classical_limit),
        ("q-binomial identities", qbinomial),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {detail} [{:.2}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
