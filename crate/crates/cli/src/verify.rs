//! Verification suites. Each check records a residual, the tolerance it was
//! held to, and whether it passed; skipped checks carry their reason.

use qsu2_core::algebra::{casimir_residual, default_rho_grid, ladder_residual, AngularMode};
use qsu2_core::contour::{f_product, f_product_from_q, LqEvaluator};
use qsu2_core::inner::{
    circle_orthonormality_bound, classical_scalar_product, gram_matrix, norm_integral_circle,
    norm_integral_real, ramanujan_qbeta, scalar_product, vilenkin_ortho_integral, QPair,
    QuadratureSpec,
};
use qsu2_core::qcore::q_bracket;
use qsu2_core::qprod::TruncationPolicy;
use qsu2_core::vilenkin::{classical_radial, classical_vilenkin, QFunction, VilenkinSpec};
use qsu2_core::{Complex64, HalfInt, PolarPoint, QParam, Regime, SpinTriple};
use serde::Serialize;

use crate::args::{parse_half, parse_q, Suite, VerifyArgs};
use crate::error::CliError;
use crate::output::{Sink, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// How `residual` is held against `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Pass iff `residual < tolerance`.
    Below,
    /// Pass iff `residual > tolerance`.
    Above,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub suite: &'static str,
    pub anchor: &'static str,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
struct Flags {
    suite: &'static str,
    q: String,
    j_max: String,
    m: String,
    n: String,
    tol: Option<f64>,
    quad_abs_tol: f64,
    quad_rel_tol: f64,
    max_terms: usize,
}

#[derive(Debug, Serialize)]
struct Summary {
    passed: usize,
    failed: usize,
    skipped: usize,
}

#[derive(Debug, Serialize)]
struct Report {
    schema_version: u32,
    flags: Flags,
    checks: Vec<Check>,
    summary: Summary,
    ok: bool,
}

struct Ctx {
    q: QParam,
    j_max: HalfInt,
    m: HalfInt,
    n: HalfInt,
    tol: Option<f64>,
    quad: QuadratureSpec,
    policy: TruncationPolicy,
    checks: Vec<Check>,
}

impl Ctx {
    fn record(
        &mut self,
        suite: &'static str,
        name: String,
        anchor: &'static str,
        residual: f64,
        tol: f64,
    ) {
        let tolerance = self.tol.unwrap_or(tol);
        // NaN residuals fail
        let status = if residual < tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        self.checks.push(Check {
            name,
            suite,
            anchor,
            residual: Some(residual),
            tolerance,
            comparison: Comparison::Below,
            status,
            note: None,
        });
    }

    /// A lower bound; not affected by `--tol`.
    fn record_above(
        &mut self,
        suite: &'static str,
        name: String,
        anchor: &'static str,
        value: f64,
        bound: f64,
    ) {
        self.checks.push(Check {
            name,
            suite,
            anchor,
            residual: Some(value),
            tolerance: bound,
            comparison: Comparison::Above,
            status: if value > bound {
                Status::Pass
            } else {
                Status::Fail
            },
            note: None,
        });
    }

    fn skip(
        &mut self,
        suite: &'static str,
        name: String,
        anchor: &'static str,
        tol: f64,
        reason: String,
    ) {
        self.checks.push(Check {
            name,
            suite,
            anchor,
            residual: None,
            tolerance: self.tol.unwrap_or(tol),
            comparison: Comparison::Below,
            status: Status::Skip,
            note: Some(reason),
        });
    }

    /// A failed evaluation is a failed check, not an aborted run.
    fn error(
        &mut self,
        suite: &'static str,
        name: String,
        anchor: &'static str,
        tol: f64,
        e: qsu2_core::Error,
    ) {
        self.checks.push(Check {
            name,
            suite,
            anchor,
            residual: None,
            tolerance: self.tol.unwrap_or(tol),
            comparison: Comparison::Below,
            status: Status::Fail,
            note: Some(e.to_string()),
        });
    }

    fn spec(&self, s: SpinTriple, q: QParam) -> qsu2_core::Result<VilenkinSpec> {
        VilenkinSpec::with_policy(s, q, self.policy)
    }
}

fn triples(j_max: HalfInt) -> Vec<SpinTriple> {
    let mut v = Vec::new();
    for j in 0..=j_max.twice() {
        for n in (-j..=j).step_by(2) {
            for m in (-j..=j).step_by(2) {
                v.push(SpinTriple::from_twice(j, m, n).expect("labels within range"));
            }
        }
    }
    v
}

fn spins_up_to(j_max: HalfInt) -> impl Iterator<Item = HalfInt> {
    (0..=j_max.twice()).map(HalfInt::from_twice)
}

fn ladder(c: &mut Ctx) {
    const A: &str = "H± act by ([J∓M][J±M+1])^{1/2}, H3 by M";
    let grid = default_rho_grid();
    for s in triples(c.j_max) {
        let name = format!("ladder J={} M={} N={}", s.j(), s.m(), s.n());
        match c.spec(s, c.q).and_then(|v| ladder_residual(&v, &grid)) {
            Ok(r) => c.record("ladder", name, A, r.max_residual(), 1e-8),
            Err(e) => c.error("ladder", name, A, 1e-8, e),
        }
    }
}

fn casimir(c: &mut Ctx) {
    const A: &str = "Casimir eigenvalue [J][J+1] in both orderings";
    let grid = default_rho_grid();
    for s in triples(c.j_max) {
        let name = format!("casimir J={} M={} N={}", s.j(), s.m(), s.n());
        match c.spec(s, c.q).and_then(|v| casimir_residual(&v, &grid)) {
            Ok((pm, mp, _)) => c.record("casimir", name, A, pm.max(mp), 1e-8),
            Err(e) => c.error("casimir", name, A, 1e-8, e),
        }
    }
}

fn functional_eq(c: &mut Ctx) {
    const A: &str = "Q(q²η)(1+η) = Q(η)(1+q^{−2J}η)";
    let grid: Vec<f64> = (0..=40)
        .map(|i| 10f64.powf(-2.0 + 0.1 * f64::from(i)))
        .collect();
    for j in spins_up_to(c.j_max) {
        let name = format!("functional-eq J={j}");
        let r = QFunction::with_policy(j, c.q, c.policy).and_then(|qf| {
            grid.iter().try_fold(
                0.0f64,
                |acc, &eta| Ok(acc.max(qf.functional_residual(eta)?)),
            )
        });
        match r {
            Ok(r) => c.record("functional-eq", name, A, r, 1e-9),
            Err(e) => c.error("functional-eq", name, A, 1e-9, e),
        }
    }
}

fn lemma1(c: &mut Ctx) {
    const D: &str = "L(qη) − L(q⁻¹η) = ln(1+η)";
    const R: &str = "Re L = 0 on the positive axis";
    const F: &str = "finite F product equals the exp L combination";
    if c.q.regime() != Regime::UnitCircle {
        let reason = format!("L is defined for q on the unit circle; got {}", c.q);
        c.skip(
            "lemma1",
            "lemma1 difference equation".into(),
            D,
            1e-7,
            reason.clone(),
        );
        c.skip(
            "lemma1",
            "lemma1 real part".into(),
            R,
            1e-10,
            reason.clone(),
        );
        c.skip("lemma1", "lemma1 F product".into(), F, 1e-7, reason);
        return;
    }
    let q = c.q;
    let ev = match LqEvaluator::new(&q) {
        Ok(ev) => ev,
        Err(e) => return c.error("lemma1", "lemma1 evaluator".into(), D, 1e-7, e),
    };
    for eta in [0.1, 1.0, 10.0] {
        let p = PolarPoint::real(eta);
        let d = (|| -> qsu2_core::Result<f64> {
            Ok((ev.eval_polar(p.dilate(&q, 1.0))?
                - ev.eval_polar(p.dilate(&q, -1.0))?
                - (1.0 + eta).ln())
            .norm())
        })();
        let name = format!("lemma1 difference equation η={eta}");
        match d {
            Ok(d) => c.record("lemma1", name, D, d, 1e-7),
            Err(e) => c.error("lemma1", name, D, 1e-7, e),
        }
        let name = format!("lemma1 real part η={eta}");
        match ev.eval(Complex64::new(eta, 0.0)) {
            Ok(l) => c.record("lemma1", name, R, l.re.abs(), 1e-10),
            Err(e) => c.error("lemma1", name, R, 1e-10, e),
        }
    }
    let top = if c.j_max.twice() >= 5 {
        c.j_max
    } else {
        HalfInt::from_twice(5)
    };
    for j in spins_up_to(top).filter(|j| !j.is_integer()) {
        let name = format!("lemma1 F product J={j}");
        let r = [0.1, 1.0, 10.0].iter().try_fold(0.0f64, |acc, &eta| {
            let a = f_product(j, eta, &q)?;
            let b = f_product_from_q(j, eta, &ev)?;
            Ok(acc.max((a - b).norm() / a.norm()))
        });
        match r {
            Ok(r) => c.record("lemma1", name, F, r, 1e-7),
            Err(e) => c.error("lemma1", name, F, 1e-7, e),
        }
    }
}

fn ortho(c: &mut Ctx) {
    const G: &str = "Gram matrix of the basis is the identity";
    const P: &str = "Gram matrix is positive definite";
    const X: &str = "ξ-form orthonormality δ_{J'J}/[2J+1]";
    let (q, m, n) = (c.q, c.m, c.n);
    let tag = format!("M={m} N={n}");
    let bound_note = (q.regime() == Regime::UnitCircle
        && q.tau().abs() >= circle_orthonormality_bound(c.j_max))
    .then(|| {
        format!(
            "|τ| ≥ π/(2Jmax+2) = {:.4}: the circle product is not expected to be orthonormal here",
            circle_orthonormality_bound(c.j_max)
        )
    });
    match gram_matrix(c.j_max, m, n, &q, &c.quad) {
        Ok(g) => {
            c.record(
                "ortho",
                format!("ortho gram off-diagonal {tag}"),
                G,
                g.max_off_diagonal,
                1e-6,
            );
            c.record(
                "ortho",
                format!("ortho gram diagonal {tag}"),
                G,
                g.max_diagonal_deviation,
                1e-6,
            );
            c.record_above(
                "ortho",
                format!("ortho gram positivity {tag}"),
                P,
                g.min_eigenvalue,
                0.0,
            );
            let tight = QuadratureSpec::with_tolerances(
                c.quad.abs_tol.min(1e-12),
                c.quad.rel_tol.min(1e-11),
            )
            .expect("valid tolerances");
            for &j1 in &g.js {
                for &j2 in &g.js {
                    let name = format!("ortho corollary J'={j1} J={j2} {tag}");
                    match vilenkin_ortho_integral(j1, j2, m, n, &q, &tight) {
                        Ok(v) => {
                            let b = q_bracket(2.0 * j1.value() + 1.0, &q);
                            let expect = if j1 == j2 {
                                b.inv()
                            } else {
                                Complex64::new(0.0, 0.0)
                            };
                            c.record(
                                "ortho",
                                name,
                                X,
                                (v.value - expect).norm() * b.norm().max(1.0),
                                1e-6,
                            );
                        }
                        Err(e) => c.error("ortho", name, X, 1e-6, e),
                    }
                }
            }
        }
        Err(e) => c.error("ortho", format!("ortho gram {tag}"), G, 1e-6, e),
    }
    if let Some(note) = bound_note {
        for check in c.checks.iter_mut().filter(|k| k.suite == "ortho") {
            check.note.get_or_insert_with(|| note.clone());
        }
    }
}

fn norms(c: &mut Ctx) {
    const I: &str = "highest-weight norm integral equals its closed form";
    const G: &str = "partial-fraction antiderivative −G(0) equals the integral";
    let q = c.q;
    for j in spins_up_to(c.j_max) {
        for nt in (-j.twice()..=j.twice()).step_by(2) {
            let n = HalfInt::from_twice(nt);
            let name = format!("norms J={j} N={n}");
            match q.regime() {
                Regime::PositiveReal => match norm_integral_real(j, n, &q, &c.quad) {
                    Ok(d) => c.record("norms", name, I, d.relative_gap(), 1e-7),
                    Err(e) => c.error("norms", name, I, 1e-7, e),
                },
                Regime::UnitCircle => match norm_integral_circle(j, n, &q, &c.quad) {
                    Ok(r) => {
                        let scale = r.dual.quadrature.value.norm();
                        c.record(
                            "norms",
                            format!("{name} partial fractions"),
                            G,
                            (r.dual.quadrature.value - r.partial_fraction).norm() / scale,
                            1e-7,
                        );
                        if (2.0 * j.value() + 2.0) * q.tau().abs() < core::f64::consts::PI {
                            c.record("norms", name, I, r.dual.relative_gap(), 1e-7);
                        } else {
                            c.skip(
                                "norms",
                                name,
                                I,
                                1e-7,
                                "(2J+2)|τ| ≥ π: the closed form takes ln q^{2p−2J} off the principal branch".into(),
                            );
                        }
                    }
                    Err(e) => c.error("norms", name, I, 1e-7, e),
                },
            }
        }
    }
}

fn qbeta(c: &mut Ctx) {
    const B: &str = "Ramanujan q-beta integral equals its closed form";
    for qb in [0.3, 0.5, 0.8] {
        for m in 1..=3 {
            for n in 1..=3 {
                let name = format!("qbeta m={m} n={n} q={qb}");
                match ramanujan_qbeta(m, n, qb, &c.quad, &c.policy) {
                    Ok(d) => c.record("qbeta", name, B, d.relative_gap(), 1e-7),
                    Err(e) => c.error("qbeta", name, B, 1e-7, e),
                }
            }
        }
    }
    let name = "qbeta B(1,1) at q=1/2 is 2 ln 2".to_string();
    match ramanujan_qbeta(1, 1, 0.5, &c.quad, &c.policy) {
        Ok(d) => c.record(
            "qbeta",
            name,
            B,
            (d.quadrature.value.re - 4f64.ln()).abs(),
            1e-9,
        ),
        Err(e) => c.error("qbeta", name, B, 1e-9, e),
    }
}

fn classical_limit(c: &mut Ctx) {
    const P: &str = "q → 1 reduces P to the classical function";
    const S: &str = "q → 1 reduces both scalar products to the classical product";
    let eps = 1e-4;
    let q = QParam::real_from_tau(eps).expect("ε ≠ 0");
    let xs: Vec<f64> = (0..=198).map(|i| -0.99 + 0.01 * f64::from(i)).collect();
    for s in triples(c.j_max) {
        let name = format!("classical-limit P J={} M={} N={}", s.j(), s.m(), s.n());
        let r = c.spec(s, q).and_then(|v| {
            xs.iter().try_fold(0.0f64, |acc, &xi| {
                Ok(acc.max((v.p_vilenkin(xi)? - classical_vilenkin(&s, xi)?).norm()))
            })
        });
        match r {
            Ok(r) => c.record("classical-limit", name, P, r, 5e-3),
            Err(e) => c.error("classical-limit", name, P, 5e-3, e),
        }
    }
    let quad = c.quad;
    for q in [q, QParam::circle(eps).expect("generic")] {
        let name = format!(
            "classical-limit product {}",
            if q.is_real() { "real" } else { "circle" }
        );
        let r = (|| -> qsu2_core::Result<f64> {
            let bump = |k: i32| {
                AngularMode::new(1, q, move |r| {
                    let rho = r.to_complex();
                    Ok(rho.powi(k) / (rho * rho + 1.0).powi(2))
                })
            };
            let v = scalar_product(
                &QPair::constant(bump(1)),
                &QPair::constant(bump(3)),
                &q,
                &quad,
            )?
            .value;
            let w = classical_scalar_product(&bump(1), &bump(3), &quad)?.value;
            let s = SpinTriple::from_twice(2, 0, 0)?;
            let basis = QPair::from_vilenkin(&VilenkinSpec::new(s, q)?);
            let b = scalar_product(&basis, &basis, &q, &quad)?.value;
            let f = AngularMode::new(0, q, move |r| {
                Ok(Complex64::new(classical_radial(&s, r.modulus), 0.0))
            });
            let cb = classical_scalar_product(&f, &f, &quad)?.value;
            Ok(((v - w).norm() / w.norm()).max((b - cb).norm()))
        })();
        match r {
            Ok(r) => c.record("classical-limit", name, S, r, 5e-3),
            Err(e) => c.error("classical-limit", name, S, 5e-3, e),
        }
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Ladder => "ladder",
        Suite::Casimir => "casimir",
        Suite::FunctionalEq => "functional-eq",
        Suite::Lemma1 => "lemma1",
        Suite::Ortho => "ortho",
        Suite::Norms => "norms",
        Suite::Qbeta => "qbeta",
        Suite::ClassicalLimit => "classical-limit",
        Suite::All => "all",
    }
}

/// Runs the suite, writes the report, and fails with exit code 1 if any check failed.
pub fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let q = parse_q(&args.q)?;
    let j_max = parse_half("Jmax", &args.j_max)?;
    if j_max.twice() < 0 {
        return Err(CliError::Parse(format!("--Jmax must be ≥ 0, got {j_max}")));
    }
    let default_weight = if j_max.is_integer() {
        HalfInt::ZERO
    } else {
        HalfInt::HALF
    };
    let m = args
        .m
        .as_deref()
        .map(|s| parse_half("M", s))
        .transpose()?
        .unwrap_or(default_weight);
    let n = args
        .n
        .as_deref()
        .map(|s| parse_half("N", s))
        .transpose()?
        .unwrap_or(default_weight);
    SpinTriple::new(j_max, m, n).map_err(|e| CliError::Parse(e.to_string()))?;
    if let Some(t) = args.tol {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Parse(format!("--tol must be positive, got {t}")));
        }
    }
    let mut ctx = Ctx {
        q,
        j_max,
        m,
        n,
        tol: args.tol,
        quad: args.numeric.quadrature()?,
        policy: args.numeric.policy()?,
        checks: Vec::new(),
    };
    let suites: &[fn(&mut Ctx)] = match args.suite {
        Suite::Ladder => &[ladder],
        Suite::Casimir => &[casimir],
        Suite::FunctionalEq => &[functional_eq],
        Suite::Lemma1 => &[lemma1],
        Suite::Ortho => &[ortho],
        Suite::Norms => &[norms],
        Suite::Qbeta => &[qbeta],
        Suite::ClassicalLimit => &[classical_limit],
        Suite::All => &[
            ladder,
            casimir,
            functional_eq,
            lemma1,
            ortho,
            norms,
            qbeta,
            classical_limit,
        ],
    };
    for s in suites {
        s(&mut ctx);
    }
    let mut checks = ctx.checks;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let summary = Summary {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skip),
    };
    let failed = summary.failed;
    let report = Report {
        schema_version: SCHEMA_VERSION,
        flags: Flags {
            suite: suite_name(args.suite),
            q: q.to_string(),
            j_max: j_max.to_string(),
            m: m.to_string(),
            n: n.to_string(),
            tol: args.tol,
            quad_abs_tol: ctx.quad.abs_tol,
            quad_rel_tol: ctx.quad.rel_tol,
            max_terms: ctx.policy.max_terms,
        },
        checks,
        summary,
        ok: failed == 0,
    };
    let mut sink = Sink::open(args.output.as_deref())?;
    sink.json(&report)?;
    sink.finish()?;
    eprintln!(
        "{}: {} passed, {} failed, {} skipped",
        suite_name(args.suite),
        report.summary.passed,
        report.summary.failed,
        report.summary.skipped
    );
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed });
    }
    Ok(())
}
