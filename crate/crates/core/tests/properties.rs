use num_complex::Complex64;
use proptest::prelude::*;
use qsu2_core::algebra::{casimir_commutator, rho_grid, AngularMode};
use qsu2_core::contour::LqEvaluator;
use qsu2_core::inner::{scalar_product, QPair, QuadratureSpec};
use qsu2_core::qcore::{q_binomial, q_bracket};
use qsu2_core::qprod::{q_half_integer_real, q_integer_j, q_series_real, TruncationPolicy};
use qsu2_core::vilenkin::{CoordinatePoint, QFunction, VilenkinSpec};
use qsu2_core::{HalfInt, PolarPoint, QParam, SpinTriple};

/// Real `q = e^τ` or generic circle `q = e^{iτ}`.
fn any_q() -> impl Strategy<Value = QParam> {
    prop_oneof![
        prop_oneof![-2.0..-0.05f64, 0.05..2.0f64].prop_map(|t| QParam::real_from_tau(t).unwrap()),
        (0.05..3.0f64, any::<bool>()).prop_filter_map("root of unity", |(t, s)| QParam::circle(
            if s { t } else { -t }
        )
        .ok()),
    ]
}

fn spin(max_twice: i32) -> impl Strategy<Value = SpinTriple> {
    (0..=max_twice)
        .prop_flat_map(|j| (Just(j), 0..=j, 0..=j))
        .prop_map(|(j, a, b)| SpinTriple::from_twice(j, j - 2 * a, j - 2 * b).unwrap())
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_odd_and_inversion_symmetric(q in any_q(), x in -6.0..6.0f64) {
        let b = q_bracket(x, &q);
        prop_assert!(close(q_bracket(-x, &q), -b, 1e-12));
        prop_assert!(close(q_bracket(x, &q.inv()), b, 1e-12));
    }

    #[test]
    fn binomial_symmetry(q in any_q(), n in 0u32..10, p in 0u32..10) {
        prop_assume!(p <= n);
        let a = q_binomial(n, p, &q).unwrap();
        let b = q_binomial(n, n - p, &q).unwrap();
        prop_assert!(close(a, b, 1e-11));
    }

    #[test]
    fn functional_equation(q in any_q(), jt in 0i32..6, lg in -2.0..2.0f64) {
        let qf = QFunction::new(HalfInt::from_twice(jt), q).unwrap();
        prop_assert!(qf.functional_residual(10f64.powf(lg)).unwrap() < 1e-9);
    }

    #[test]
    fn product_forms_agree(tau in prop_oneof![-2.0..-0.1f64, 0.1..2.0f64], j in 0i32..4, lg in -2.0..2.0f64) {
        let q = QParam::real_from_tau(tau).unwrap();
        let eta = 10f64.powf(lg);
        let j = HalfInt::from_int(j);
        let policy = TruncationPolicy::default();
        let finite = q_integer_j(j, eta, &q).unwrap().re;
        let infinite = q_half_integer_real(j, eta, &q, &policy).unwrap();
        prop_assert!((finite - infinite).abs() <= 1e-10 * finite.abs());
        let series = q_series_real(j, eta, &q, &policy).unwrap();
        prop_assert!((finite - series).abs() <= 1e-10 * finite.abs());
    }

    #[test]
    fn half_odd_series_matches_product(tau in prop_oneof![-2.0..-0.1f64, 0.1..2.0f64], jt in 0i32..3, lg in -2.0..2.0f64) {
        let q = QParam::real_from_tau(tau).unwrap();
        let eta = 10f64.powf(lg);
        let j = HalfInt::from_twice(2 * jt + 1);
        let policy = TruncationPolicy::default();
        let a = q_half_integer_real(j, eta, &q, &policy).unwrap();
        let b = q_series_real(j, eta, &q, &policy).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs());
    }

    #[test]
    fn truncation_is_monotone(tau in 0.01..1.0f64, jt in 0i32..5, lg in -2.0..2.0f64) {
        let q = QParam::real_from_tau(tau).unwrap();
        let j = HalfInt::from_twice(jt);
        let eta = 10f64.powf(lg);
        let base = TruncationPolicy::new(1e-13, 200_000).unwrap();
        let more = TruncationPolicy::new(1e-13, 2_000_000).unwrap();
        let a = q_half_integer_real(j, eta, &q, &base).unwrap();
        let b = q_half_integer_real(j, eta, &q, &more).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs());
    }

    #[test]
    fn coordinate_equivalence(q in any_q(), s in spin(4), theta in 0.05..3.05f64, phi in 0.0..6.2f64) {
        let v = VilenkinSpec::new(s, q).unwrap();
        let p = CoordinatePoint::Spherical { theta, phi };
        let a = v.psi_spherical(theta, phi).unwrap();
        let b = v.psi_plane(p.to_plane()).unwrap();
        prop_assert!(close(a, b, 1e-12), "{} vs {}", a, b);
    }

    #[test]
    fn l_is_imaginary_on_positive_axis(tau in prop_oneof![-3.0..-0.05f64, 0.05..3.0f64], lg in -3.0..3.0f64) {
        let q = QParam::circle_with_guard(tau, 0).unwrap();
        let ev = LqEvaluator::new(&q).unwrap();
        let l = ev.eval(Complex64::new(10f64.powf(lg), 0.0)).unwrap();
        prop_assert!(l.re.abs() < 1e-10);
        let mirror = ev.inv().eval(Complex64::new(10f64.powf(lg), 0.0)).unwrap();
        prop_assert!((l + mirror).norm() < 1e-10);
    }

    #[test]
    fn dilations_compose(q in any_q(), a in -3.0..3.0f64, b in -3.0..3.0f64, r in 0.01..100.0f64) {
        let p = PolarPoint::real(r);
        let two = p.dilate(&q, a).dilate(&q, b);
        let one = p.dilate(&q, a + b);
        prop_assert!((two.modulus - one.modulus).abs() <= 1e-14 * one.modulus);
        prop_assert!((two.phase - one.phase).abs() <= 1e-14 * (1.0 + one.phase.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn casimir_commutes_with_generators(q in any_q(), m in -2i32..3, nt in -2i32..3, c in 0.2..3.0f64) {
        let n = HalfInt::from_twice(2 * nt);
        let mode = AngularMode::new(m, q, move |r| {
            let z = r.to_complex();
            Ok(z.powi(m.abs() + 1) / (z * z + c).powi(3))
        });
        let grid = rho_grid(15, 0.1, 10.0);
        let (p, mi) = casimir_commutator(&mode, n, &grid).unwrap();
        let scale = mode.grid_norm(&grid).unwrap();
        prop_assert!(p < 1e-8 * scale.max(1.0) && mi < 1e-8 * scale.max(1.0), "{} {} {}", p, mi, scale);
    }

    #[test]
    fn products_are_hermitian(
        q in prop_oneof![
            (0.1..1.0f64).prop_map(|t| QParam::real_from_tau(t).unwrap()),
            // orthonormal range for J ≤ 5/2 is |τ| < π/7
            (0.05..0.44f64).prop_filter_map("root of unity", |t| QParam::circle(t).ok()),
        ],
        coeffs in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6),
    ) {
        let combo = |q: QParam, cs: &[(f64, f64)]| {
            let mut acc = AngularMode::zero(1, q);
            for (k, &(re, im)) in cs.iter().enumerate() {
                let s = SpinTriple::from_twice(2 * k as i32 + 1, 1, 1).unwrap();
                let term = AngularMode::from_vilenkin(&VilenkinSpec::new(s, q).unwrap()).scale(Complex64::new(re, im));
                acc = acc.add(&term).unwrap();
            }
            acc
        };
        let a = QPair::new(combo(q, &coeffs[..3]), combo(q.inv(), &coeffs[..3])).unwrap();
        let b = QPair::new(combo(q, &coeffs[3..]), combo(q.inv(), &coeffs[3..])).unwrap();
        let spec = QuadratureSpec::with_tolerances(1e-12, 1e-11).unwrap();
        let ab = scalar_product(&a, &b, &q, &spec).unwrap();
        let ba = scalar_product(&b, &a, &q, &spec).unwrap();
        let residual = (ab.value - ba.value.conj()).norm();
        prop_assert!(residual < 10.0 * (ab.est_error + ba.est_error) + 1e-13, "{} {:?}", residual, ab);
    }
}
