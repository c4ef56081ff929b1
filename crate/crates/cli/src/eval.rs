use qsu2_core::contour::LqEvaluator;
use qsu2_core::vilenkin::{classical_vilenkin, CoordinatePoint, QFunction, VilenkinSpec};
use qsu2_core::{Complex64, QParam, Regime, SpinTriple};
use serde::Serialize;

use crate::args::{
    parse_q, EvalArgs, EvalFormat, Format, Function, LimitsArgs, RegimeArg, TableArgs,
};
use crate::error::CliError;
use crate::output::{Sink, SCHEMA_VERSION};

/// A point in whichever coordinate the caller gave.
#[derive(Debug, Clone, Copy)]
enum Point {
    Xi(f64),
    Eta(f64),
    Sphere { theta: f64, phi: f64 },
}

impl Point {
    fn eta(self) -> f64 {
        match self {
            Point::Xi(xi) => CoordinatePoint::Xi(xi).eta(),
            Point::Eta(eta) => eta,
            Point::Sphere { theta, phi } => CoordinatePoint::Spherical { theta, phi }.eta(),
        }
    }

    fn xi(self) -> f64 {
        match self {
            Point::Xi(xi) => xi,
            Point::Eta(eta) => (eta - 1.0) / (eta + 1.0),
            Point::Sphere { theta, .. } => theta.cos(),
        }
    }

    fn label(self) -> (&'static str, f64) {
        match self {
            Point::Xi(x) => ("xi", x),
            Point::Eta(x) => ("eta", x),
            Point::Sphere { theta, .. } => ("theta", theta),
        }
    }
}

/// One evaluator for `--fn`, built once and reused across points.
enum Evaluator {
    Q(QFunction),
    L(LqEvaluator),
    Basis(Function, VilenkinSpec),
}

impl Evaluator {
    fn new(
        function: Function,
        spin: Option<SpinTriple>,
        q: QParam,
        args: &crate::args::NumericArgs,
    ) -> Result<Self, CliError> {
        let policy = args.policy()?;
        let need = || spin.ok_or_else(|| CliError::Parse("--J is required".into()));
        Ok(match function {
            Function::Q => Evaluator::Q(QFunction::with_policy(need()?.j(), q, policy)?),
            Function::L => {
                if q.regime() != Regime::UnitCircle {
                    return Err(CliError::Domain(qsu2_core::Error::Domain(format!(
                        "L is defined for q on the unit circle, got {q}"
                    ))));
                }
                Evaluator::L(LqEvaluator::new(&q)?)
            }
            f => Evaluator::Basis(f, VilenkinSpec::with_policy(need()?, q, policy)?),
        })
    }

    fn at(&self, p: Point) -> Result<Complex64, CliError> {
        Ok(match self {
            Evaluator::Q(qf) => qf.eval(p.eta())?,
            Evaluator::L(ev) => ev.eval(Complex64::new(p.eta(), 0.0))?,
            Evaluator::Basis(Function::R, s) => s.r_polynomial(p.eta()),
            Evaluator::Basis(Function::P, s) => s.p_vilenkin(p.xi())?,
            Evaluator::Basis(_, s) => match p {
                Point::Sphere { theta, phi } => s.psi_spherical(theta, phi)?,
                _ => s.psi(&CoordinatePoint::Xi(p.xi()))?,
            },
        })
    }
}

fn needs_spin(f: Function) -> bool {
    f != Function::L
}

fn fmt_half(h: qsu2_core::HalfInt) -> String {
    h.to_string()
}

#[derive(Serialize)]
struct EvalPoint {
    coordinate: &'static str,
    value: f64,
    phi: Option<f64>,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct EvalReport {
    schema_version: u32,
    function: &'static str,
    #[serde(rename = "J")]
    j: Option<String>,
    #[serde(rename = "M")]
    m: Option<String>,
    #[serde(rename = "N")]
    n: Option<String>,
    q: String,
    points: Vec<EvalPoint>,
}

fn function_name(f: Function) -> &'static str {
    match f {
        Function::P => "P",
        Function::Psi => "Psi",
        Function::Q => "Q",
        Function::L => "L",
        Function::R => "R",
    }
}

pub fn run_eval(args: &EvalArgs) -> Result<(), CliError> {
    let q = parse_q(&args.q)?;
    let spin = if needs_spin(args.function) {
        Some(args.spin.triple()?)
    } else {
        None
    };
    let mut points: Vec<Point> = args.xi.iter().map(|&x| Point::Xi(x)).collect();
    points.extend(args.eta.iter().map(|&e| Point::Eta(e)));
    if let Some(theta) = args.theta {
        points.push(Point::Sphere {
            theta,
            phi: args.phi,
        });
    }
    if points.is_empty() {
        return Err(CliError::Parse(
            "give at least one point with --xi, --eta or --theta".into(),
        ));
    }
    let ev = Evaluator::new(args.function, spin, q, &args.numeric)?;
    let values = points
        .iter()
        .map(|&p| ev.at(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sink = Sink::open(None)?;
    match args.format {
        EvalFormat::Text => {
            for v in &values {
                sink.write_str(&format!("{} {}\n", v.re, v.im))?;
            }
        }
        EvalFormat::Json => {
            let report = EvalReport {
                schema_version: SCHEMA_VERSION,
                function: function_name(args.function),
                j: spin.map(|s| fmt_half(s.j())),
                m: spin.map(|s| fmt_half(s.m())),
                n: spin.map(|s| fmt_half(s.n())),
                q: q.to_string(),
                points: points
                    .iter()
                    .zip(&values)
                    .map(|(&p, v)| {
                        let (coordinate, value) = p.label();
                        EvalPoint {
                            coordinate,
                            value,
                            phi: match p {
                                Point::Sphere { phi, .. } => Some(phi),
                                _ => None,
                            },
                            re: v.re,
                            im: v.im,
                        }
                    })
                    .collect(),
            };
            sink.json(&report)?;
        }
    }
    sink.finish()
}

#[derive(Serialize)]
struct TableRow {
    #[serde(rename = "J")]
    j: String,
    #[serde(rename = "M")]
    m: String,
    #[serde(rename = "N")]
    n: String,
    q_regime: &'static str,
    tau: f64,
    xi: f64,
    re: f64,
    im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classical_im: Option<f64>,
}

#[derive(Serialize)]
struct TableReport<'a> {
    schema_version: u32,
    function: &'static str,
    q: String,
    rows: &'a [TableRow],
}

fn regime_name(q: &QParam) -> &'static str {
    match q.regime() {
        Regime::PositiveReal => "real",
        Regime::UnitCircle => "circle",
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn run_table(args: &TableArgs) -> Result<(), CliError> {
    if args.function == Function::L || args.function == Function::R {
        return Err(CliError::Parse("table supports --fn P, Q or Psi".into()));
    }
    if !(args.xi_min > -1.0 - 1e-15 && args.xi_max < 1.0 && args.xi_min <= args.xi_max) {
        return Err(CliError::Parse(format!(
            "ξ range [{}, {}] must satisfy −1 ≤ min ≤ max < 1",
            args.xi_min, args.xi_max
        )));
    }
    let q = parse_q(&args.q)?;
    let spin = args.spin.triple()?;
    let ev = Evaluator::new(args.function, Some(spin), q, &args.numeric)?;
    let mut rows = Vec::with_capacity(args.points);
    for xi in linspace(args.xi_min, args.xi_max, args.points) {
        let v = ev.at(Point::Xi(xi))?;
        let classical = if args.classical {
            Some(classical_at(args.function, &spin, xi)?)
        } else {
            None
        };
        rows.push(TableRow {
            j: fmt_half(spin.j()),
            m: fmt_half(spin.m()),
            n: fmt_half(spin.n()),
            q_regime: regime_name(&q),
            tau: q.tau(),
            xi,
            re: v.re,
            im: v.im,
            classical_re: classical.map(|c| c.re),
            classical_im: classical.map(|c| c.im),
        });
    }
    let mut sink = Sink::open(args.output.as_deref())?;
    match args.format {
        Format::Csv => sink.csv(&rows)?,
        Format::Json => sink.json(&TableReport {
            schema_version: SCHEMA_VERSION,
            function: function_name(args.function),
            q: q.to_string(),
            rows: &rows,
        })?,
    }
    sink.finish()
}

fn classical_at(f: Function, spin: &SpinTriple, xi: f64) -> Result<Complex64, CliError> {
    Ok(match f {
        Function::Q => Complex64::new(
            (1.0 + CoordinatePoint::Xi(xi).eta()).powf(-spin.j().value()),
            0.0,
        ),
        Function::P => classical_vilenkin(spin, xi)?,
        _ => {
            return Err(CliError::Parse(
                "--classical is available for --fn P and Q".into(),
            ))
        }
    })
}

#[derive(Serialize)]
struct LimitRow {
    #[serde(rename = "J")]
    j: String,
    #[serde(rename = "M")]
    m: String,
    #[serde(rename = "N")]
    n: String,
    q_regime: &'static str,
    tau: f64,
    sup_deviation: f64,
}

#[derive(Serialize)]
struct LimitsReport<'a> {
    schema_version: u32,
    function: &'static str,
    rows: &'a [LimitRow],
}

/// `sup_ξ |P^J_MN,q − P^J_MN|` for `q = e^{ε}` or `e^{iε}` on a grid in (−0.99, 0.99).
pub fn run_limits(args: &LimitsArgs) -> Result<(), CliError> {
    let spin = args.spin.triple()?;
    let policy = args.numeric.policy()?;
    let grid = linspace(-0.99, 0.99, args.points.max(2));
    let mut rows = Vec::new();
    for &eps in &args.eps {
        let q = match args.regime {
            RegimeArg::Real => QParam::real_from_tau(eps),
            RegimeArg::Circle => QParam::circle(eps),
        }
        .map_err(|e| CliError::Parse(e.to_string()))?;
        let spec = VilenkinSpec::with_policy(spin, q, policy)?;
        let mut sup: f64 = 0.0;
        for &xi in &grid {
            sup = sup.max((spec.p_vilenkin(xi)? - classical_vilenkin(&spin, xi)?).norm());
        }
        rows.push(LimitRow {
            j: fmt_half(spin.j()),
            m: fmt_half(spin.m()),
            n: fmt_half(spin.n()),
            q_regime: regime_name(&q),
            tau: q.tau(),
            sup_deviation: sup,
        });
    }
    let mut sink = Sink::open(args.output.as_deref())?;
    match args.format {
        Format::Csv => sink.csv(&rows)?,
        Format::Json => sink.json(&LimitsReport {
            schema_version: SCHEMA_VERSION,
            function: "P",
            rows: &rows,
        })?,
    }
    sink.finish()
}
