use std::path::PathBuf;

use explicit_formula::descriptor::SelbergDescriptor;
use explicit_formula::quad::QuadratureSpec;
use explicit_formula::summation::SumOrder;
use explicit_formula::testfn::TestFunction;
use explicit_formula::weil::weil_closure;
use explicit_formula::zeros::{verify_manifest, ZeroTable};
use num_complex::Complex64;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn zeta_descriptor_file_matches_builtin() {
    let file = SelbergDescriptor::from_file(&data("zeta.desc")).unwrap();
    let builtin = SelbergDescriptor::zeta();
    assert_eq!(file.degree(), 1.0);
    assert!((file.log_conductor() - builtin.log_conductor()).abs() < 1e-14);
    assert!(file.log_conductor().abs() < 1e-14);
    assert_eq!(file.pole_order, 1);
}

#[test]
fn dirichlet_descriptor_has_conductor_four() {
    let d = SelbergDescriptor::from_file(&data("dirichlet_m4.desc")).unwrap();
    assert_eq!(d.degree(), 1.0);
    assert!((d.conductor() - 4.0).abs() < 1e-12);
    assert_eq!(d.pole_order, 0);
    assert!(d.is_self_dual());
    // Λ(n) = χ(n) log p on prime powers n = p^k.
    for n in 1..=12u64 {
        let b = d.coeffs.lambda_f(n).unwrap();
        let expected = match n {
            1 | 2 | 4 | 6 | 8 | 10 | 12 => 0.0,
            3 => -3f64.ln(),
            5 => 5f64.ln(),
            7 => -7f64.ln(),
            9 => 3f64.ln(),
            11 => -11f64.ln(),
            _ => unreachable!(),
        };
        assert!((b - Complex64::new(expected, 0.0)).norm() < 1e-12, "n={n}");
    }
}

#[test]
fn zero_tables_parse_and_start_correctly() {
    let zeta = ZeroTable::from_file(&data("zeta_zeros.txt")).unwrap();
    assert!((zeta.ordinates()[0] - 14.134_725_141_734_693).abs() < 1e-12);
    assert!(zeta.on_critical_line());
    let chi = ZeroTable::from_file(&data("dirichlet_m4_zeros.txt")).unwrap();
    assert!((chi.ordinates()[0] - 6.020_948_904_697_597).abs() < 1e-12);
    assert!(chi.len() >= 1000);
}

#[test]
fn manifest_checksums_match() {
    let entries = verify_manifest(&data("MANIFEST")).unwrap();
    for name in [
        "zeta_zeros.txt",
        "dirichlet_m4_zeros.txt",
        "zeta.desc",
        "dirichlet_m4.desc",
    ] {
        assert!(
            entries.iter().any(|e| e.filename == name),
            "{name} missing from manifest"
        );
    }
}

#[test]
fn weil_closure_for_the_dirichlet_table() {
    let d = SelbergDescriptor::from_file(&data("dirichlet_m4.desc")).unwrap();
    let zeros = ZeroTable::from_file(&data("dirichlet_m4_zeros.txt")).unwrap();
    let spec = QuadratureSpec::default();
    for f in [
        TestFunction::gaussian(0.05).unwrap(),
        TestFunction::gaussian(0.1).unwrap(),
    ] {
        let r = weil_closure(
            &d,
            &zeros,
            &f,
            1.0,
            0.0,
            zeros.max_ordinate(),
            None,
            &spec,
            SumOrder::Sequential,
        )
        .unwrap();
        assert!(r.residual.norm() <= 1e-6 * (1.0 + r.zero_side.norm()), "{r:?}");
    }
}

#[test]
fn dirichlet_count_tracks_main_term() {
    let d = SelbergDescriptor::from_file(&data("dirichlet_m4.desc")).unwrap();
    let zeros = ZeroTable::from_file(&data("dirichlet_m4_zeros.txt")).unwrap();
    let top = zeros.max_ordinate().floor();
    let grid: Vec<f64> = (1..=20).map(|k| top * k as f64 / 20.0).collect();
    let p = zeros.deviation_profile(&d, &grid).unwrap();
    assert!(p.max_ratio <= 2.0, "{}", p.max_ratio);
}
