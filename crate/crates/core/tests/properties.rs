use explicit_formula::descriptor::SelbergDescriptor;
use explicit_formula::li::{li_arithmetic, li_arithmetic_from_limits, li_zero_sum, PrecisionContext};
use explicit_formula::quad::{integrate_value, QuadratureSpec};
use explicit_formula::special::{digamma, gaussian_fourier, hurwitz_power_sum};
use explicit_formula::summation::{reduce_complex, SumOrder};
use explicit_formula::testfn::TestFunction;
use explicit_formula::weil::zero_side;
use explicit_formula::zeros::ZeroTable;
use explicit_formula::zerosum::{gaussian_zero_sum, ZeroSumParams};
use explicit_formula::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn ascending(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..5.0, 1..len).prop_map(|gaps| {
        let mut acc = 10.0;
        gaps.into_iter()
            .map(|g| {
                acc += g;
                acc
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn digamma_recurrence(re in 0.05f64..40.0, im in -60.0f64..60.0) {
        let z = Complex64::new(re, im);
        let lhs = digamma(z + 1.0).unwrap();
        let rhs = digamma(z).unwrap() + z.inv();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn digamma_conjugate_symmetry(re in 0.05f64..40.0, im in -60.0f64..60.0) {
        let z = Complex64::new(re, im);
        let a = digamma(z.conj()).unwrap();
        let b = digamma(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-14 * (1.0 + a.norm()));
    }

    #[test]
    fn gaussian_fourier_matches_quadrature(u in 0.05f64..5.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let a = Complex64::new(re, im);
        let closed = gaussian_fourier(u, a).unwrap();
        let s = 1.0 / u.sqrt();
        let numeric: Complex64 = integrate_value(
            |t: f64| (Complex64::new(-u * t * t, 0.0) + Complex64::i() * a * t).exp(),
            &[f64::NEG_INFINITY, -4.0 * s, 0.0, 4.0 * s, f64::INFINITY],
            &QuadratureSpec::default(),
        )
        .unwrap();
        prop_assert!((closed - numeric).norm() <= 1e-8 * (1.0 + closed.norm()));
    }

    #[test]
    fn gaussian_transform_is_conjugate_symmetric(w in 0.01f64..1.0, re in -5.0f64..5.0, im in -30.0f64..30.0) {
        let f = TestFunction::gaussian(w).unwrap();
        let spec = QuadratureSpec::default();
        let s = Complex64::new(re, im);
        let a = f.transform(s.conj(), &spec).unwrap();
        let b = f.transform(s, &spec).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn empirical_count_is_monotone(ords in ascending(60), a in 0.0f64..400.0, b in 0.0f64..400.0) {
        let t = ZeroTable::on_line(ords, "prop").unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let hi = hi.min(t.max_ordinate());
        let lo = lo.min(hi);
        prop_assert!(t.empirical_count(lo).unwrap() <= t.empirical_count(hi).unwrap());
    }

    #[test]
    fn zero_table_round_trips(ords in ascending(40)) {
        let t = ZeroTable::on_line(ords, "prop").unwrap();
        let back = ZeroTable::parse(&t.serialize(), "prop").unwrap();
        prop_assert_eq!(back.ordinates(), t.ordinates());
    }

    #[test]
    fn li_symmetry_and_realness(ords in ascending(30), n in 1i64..80) {
        let z = SelbergDescriptor::zeta();
        let t = ZeroTable::on_line(ords, "prop").unwrap();
        let top = t.max_ordinate();
        let pos = li_zero_sum(&t, &z, n, top, SumOrder::Sequential).unwrap();
        let neg = li_zero_sum(&t, &z, -n, top, SumOrder::Sequential).unwrap();
        prop_assert!((neg.value - pos.value.conj()).norm() <= 1e-12 * (1.0 + pos.value.norm()));
        prop_assert!(pos.value.im.abs() <= 1e-12 * (1.0 + pos.value.norm()));
    }

    #[test]
    fn off_line_li_symmetry(beta in 0.51f64..0.99, gamma in 5.0f64..50.0, n in 1i64..60) {
        let z = SelbergDescriptor::zeta();
        let t = ZeroTable::new(vec![gamma], Some(vec![beta]), "prop").unwrap();
        let pos = li_zero_sum(&t, &z, n, gamma, SumOrder::Sequential).unwrap();
        let neg = li_zero_sum(&t, &z, -n, gamma, SumOrder::Sequential).unwrap();
        prop_assert!((neg.value - pos.value.conj()).norm() <= 1e-9 * (1.0 + pos.value.norm()));
        prop_assert!(pos.value.im.abs() <= 1e-9 * (1.0 + pos.value.norm()));
    }

    #[test]
    fn gaussian_sum_is_real_on_the_line(ords in ascending(30), u in 1e-4f64..0.1, v in -3.0f64..3.0) {
        let t = ZeroTable::on_line(ords, "prop").unwrap();
        let p = ZeroSumParams::new(u, v, t.max_ordinate()).unwrap();
        let s = gaussian_zero_sum(&t, &p, SumOrder::Sequential).unwrap();
        prop_assert!(s.im.abs() <= 1e-12 * (1.0 + s.norm()));
    }

    #[test]
    fn truncation_error_shrinks_with_height(ords in ascending(50), u in 1e-3f64..0.05, k in 1usize..49) {
        // For v = 0 every pair adds 2e^{-u(1/4+γ²)} > 0, so the sum over
        // |γ| ≤ T increases towards the full sum.
        let t = ZeroTable::on_line(ords, "prop").unwrap();
        let k = k.min(t.len() - 1);
        let top = t.max_ordinate();
        let mid = t.ordinates()[k];
        let full = gaussian_zero_sum(&t, &ZeroSumParams::new(u, 0.0, top).unwrap(), SumOrder::Sequential).unwrap();
        let part = gaussian_zero_sum(&t, &ZeroSumParams::new(u, 0.0, mid.max(1.0)).unwrap(), SumOrder::Sequential).unwrap();
        prop_assert!(part.re <= full.re + 1e-12);
    }

    #[test]
    fn zero_side_is_linear_in_f(c in -3.0f64..3.0, w1 in 0.02f64..0.5, w2 in 0.02f64..0.5, u in 0.05f64..1.0) {
        let z = SelbergDescriptor::zeta();
        let spec = QuadratureSpec::default();
        let zeros = ZeroTable::on_line(vec![14.134725141734693, 21.022039638771555, 25.010_857_580_145_69], "head").unwrap();
        let top = zeros.max_ordinate();
        let f = TestFunction::gaussian(w1).unwrap();
        let g = TestFunction::gaussian(w2).unwrap();
        let h = f.clone().plus(c, g.clone());
        let side = |t: &TestFunction| zero_side(&zeros, &z, t, u, 0.0, top, &spec, SumOrder::Sequential).unwrap().value;
        let lhs = side(&h);
        let rhs = side(&f) + side(&g) * c;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn chunked_and_sequential_sums_agree(xs in prop::collection::vec(-1e3f64..1e3, 0..5000)) {
        let a = reduce_complex(&xs, SumOrder::Sequential, |&x| Complex64::new(x, -x));
        let b = reduce_complex(&xs, SumOrder::Chunked, |&x| Complex64::new(x, -x));
        let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>() + 1.0;
        prop_assert!((a - b).norm() <= 1e-14 * scale);
    }

    #[test]
    fn chunked_sum_is_reproducible(xs in prop::collection::vec(-1e3f64..1e3, 0..5000)) {
        let a = reduce_complex(&xs, SumOrder::Chunked, |&x| Complex64::new(x.sin(), x));
        let b = reduce_complex(&xs, SumOrder::Chunked, |&x| Complex64::new(x.sin(), x));
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hurwitz_decreases_in_k(a in 0.3f64..5.0, k in 2u32..12) {
        let x = hurwitz_power_sum(Complex64::new(a, 0.0), k).unwrap().re;
        let y = hurwitz_power_sum(Complex64::new(a, 0.0), k + 1).unwrap().re;
        if a >= 1.0 {
            prop_assert!(y < x);
        }
        prop_assert!(x > 0.0 && y > 0.0);
    }

    #[test]
    fn precision_guard_refuses_short_budgets(n in 21u64..80, short in 0u32..20) {
        let z = SelbergDescriptor::zeta();
        let digits = (2 * n as u32 - 1).saturating_sub(short).max(15);
        let prec = PrecisionContext::new(digits).unwrap();
        let r = li_arithmetic(&z, n, 1e5, &prec);
        prop_assert!(matches!(r, Err(Error::Domain(_))), "{r:?}");
    }

    #[test]
    fn budget_does_not_change_accepted_values(n in 2u64..30) {
        let z = SelbergDescriptor::zeta();
        let limits: Vec<Complex64> = (1..=n).map(|l| Complex64::new(-0.1 / l as f64, 0.0)).collect();
        let errs = vec![0.0; n as usize];
        let lo = li_arithmetic_from_limits(&z, n, &limits, &errs, &PrecisionContext::new(16).unwrap());
        let hi = li_arithmetic_from_limits(&z, n, &limits, &errs, &PrecisionContext::new(80).unwrap()).unwrap();
        match lo {
            Ok(lo) => prop_assert!((lo.value - hi.value).norm() <= lo.error_bar + hi.error_bar + 1e-12 * hi.value.norm()),
            Err(e) => prop_assert!(matches!(e, Error::Precision { .. }), "{e:?}"),
        }
    }
}

#[test]
fn gaussian_zero_sum_identity_at_v_equal_u() {
    let zeros = ZeroTable::on_line(
        vec![14.134725141734693, 21.022039638771555, 25.010_857_580_145_69],
        "head",
    )
    .unwrap();
    let u = 0.3;
    let s = gaussian_zero_sum(
        &zeros,
        &ZeroSumParams::new(u, u, zeros.max_ordinate()).unwrap(),
        SumOrder::Sequential,
    )
    .unwrap();
    let direct: f64 = zeros
        .ordinates()
        .iter()
        .map(|g| 2.0 * (-u * (0.25 + g * g)).exp())
        .sum();
    assert!((s.re - direct).abs() < 1e-15 + 1e-12 * direct);
}
