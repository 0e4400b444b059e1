//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{LN_2, PI};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use explicit_formula::descriptor::SelbergDescriptor;
use explicit_formula::li::{
    li_arithmetic, li_constant, li_positivity_report, li_zero_sum, li_zero_sum_completed, PrecisionContext,
};
use explicit_formula::quad::QuadratureSpec;
use explicit_formula::special::{lemma1_identity_residual, log_modulus_integral, log_modulus_main_terms};
use explicit_formula::summation::SumOrder;
use explicit_formula::testfn::TestFunction;
use explicit_formula::weil::{eq42_residual, thm2_prediction, thm2_sweep, thm3_error_integral, weil_closure};
use explicit_formula::zeros::ZeroTable;
use explicit_formula::zerosum::{gaussian_zero_sum, lemma2_rhs, thm1_main_term, ZeroSumParams};
use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ORDER: SumOrder = SumOrder::Sequential;

// Pinned tolerances and bands.
const C1_REL: f64 = 1e-6;
const C1_SECONDS: f64 = 30.0;
const C2_FLOOR: f64 = 1e-6;
const C3_RATIO: f64 = 10.0;
const C3_IDENTITY: f64 = 1e-12;
const C4_BAND: f64 = 2.0;
const C4_SECONDS: f64 = 10.0;
const C5_BAND: f64 = 5.0;
const C5_ORACLE_REL: f64 = 1e-8;
const C6_TOL: f64 = 1e-7;
const C7_SLACK: f64 = 1.25;
const C8_TOL: f64 = 1e-6;
const C9_LAMBDA1: f64 = 0.023_095_7;
const C9_LAMBDA1_TOL: f64 = 2e-4;
const C9_CF: f64 = -1.1303;
const C10_BAND: f64 = 2.0;
const C11_BAND: f64 = 3.0;

struct Fixture {
    zeta: SelbergDescriptor,
    zeros: ZeroTable,
    spec: QuadratureSpec,
}

type Outcome = Result<(bool, String), String>;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn criterion_1(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let t = fx.zeros.max_ordinate();
    let mut ok = true;
    let mut detail = Vec::new();
    for w in [0.05, 0.02] {
        let f = TestFunction::gaussian(w).map_err(|e| e.to_string())?;
        let r = weil_closure(&fx.zeta, &fx.zeros, &f, 1.0, 0.0, t, None, &fx.spec, ORDER).map_err(|e| e.to_string())?;
        let bound = C1_REL * (1.0 + r.zero_side.norm());
        ok &= r.residual.norm() <= bound;
        detail.push(format!("w={w}: |res|={:.2e} (bound {:.2e})", r.residual.norm(), bound));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < C1_SECONDS && fx.zeros.len() >= 10_000;
    detail.push(format!("{} zeros, {secs:.1}s", fx.zeros.len()));
    Ok((ok, detail.join("; ")))
}

fn criterion_2(fx: &Fixture) -> Outcome {
    let t = 300.0;
    let mut ok = true;
    let mut detail = Vec::new();
    for (u, v) in [(0.05, 0.0), (0.01, 0.01), (0.01, LN_2)] {
        let sum = gaussian_zero_sum(
            &fx.zeros,
            &ZeroSumParams::new(u, v, t).map_err(|e| e.to_string())?,
            ORDER,
        )
        .map_err(|e| e.to_string())?;
        let rhs = lemma2_rhs(&fx.zeta, u, v, None, &fx.spec)
            .map_err(|e| e.to_string())?
            .total;
        let bound = 10.0 * (-u * t * t).exp() * t.ln().powi(2) / t + C2_FLOOR;
        let diff = (sum - rhs).norm();
        ok &= diff <= bound;
        detail.push(format!("(u={u}, v={v:.4}): {diff:.2e}"));
    }
    Ok((ok, detail.join("; ")))
}

/// The zeta specialization `(1/√(16πu))log(1/u) − (log(16π²) + γ₀)/√(16πu)`.
fn zeta_main_term_quoted(u: f64) -> f64 {
    let s = (16.0 * PI * u).sqrt();
    (1.0 / u).ln() / s - ((16.0 * PI * PI).ln() + EULER_GAMMA) / s
}

fn criterion_3(fx: &Fixture) -> Outcome {
    let t = fx.zeros.max_ordinate();
    let mut residuals = Vec::new();
    let mut detail = Vec::new();
    let mut identity = 0.0f64;
    for u in [1e-2, 1e-3, 1e-4, 1e-5] {
        let sum = gaussian_zero_sum(
            &fx.zeros,
            &ZeroSumParams::new(u, 0.0, t).map_err(|e| e.to_string())?,
            ORDER,
        )
        .map_err(|e| e.to_string())?;
        let main = thm1_main_term(&fx.zeta, u).map_err(|e| e.to_string())?;
        let quoted = zeta_main_term_quoted(u);
        identity = identity.max((main - quoted).abs() / (1.0 + main.abs()));
        let res = (sum - main).norm();
        residuals.push(res);
        detail.push(format!("u={u:e}: main={main:.4} res={res:.4}"));
    }
    let max = residuals.iter().cloned().fold(0.0, f64::max);
    let min = residuals.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    detail.push(format!("max/min={ratio:.3}, quoted-form gap {identity:.1e}"));
    Ok((ratio <= C3_RATIO && identity <= C3_IDENTITY, detail.join("; ")))
}

fn criterion_4(fx: &Fixture) -> Outcome {
    // The predicted value −log 2/√(4πu) belongs to the shift v = −log 2.
    let start = Instant::now();
    let t = fx.zeros.max_ordinate();
    let mut ok = true;
    let mut detail = Vec::new();
    for u in [1e-3, 1e-4] {
        let sum = gaussian_zero_sum(
            &fx.zeros,
            &ZeroSumParams::new(u, -LN_2, t).map_err(|e| e.to_string())?,
            ORDER,
        )
        .map_err(|e| e.to_string())?;
        let predicted = -LN_2 / (4.0 * PI * u).sqrt();
        let res = (sum - predicted).norm();
        ok &= res <= C4_BAND;
        detail.push(format!("u={u:e}: sum={:.4} pred={predicted:.4} res={res:.4}", sum.re));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < C4_SECONDS;
    detail.push(format!("band {C4_BAND}, {secs:.2}s"));
    Ok((ok, detail.join("; ")))
}

/// `∫ log|1/4 + it/2| e^{−ut²} dt` by composite Simpson in `s = t√u`.
fn lemma3_oracle(u: f64) -> f64 {
    let (a, b, n) = (0.0, 9.0, 400_000usize);
    let h = (b - a) / n as f64;
    let g = |s: f64| 0.5 * (1.0 / 16.0 + s * s / (4.0 * u)).ln() * (-s * s).exp();
    let mut acc = g(a) + g(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(a + i as f64 * h);
    }
    2.0 * acc * h / 3.0 / u.sqrt()
}

fn criterion_5(fx: &Fixture) -> Outcome {
    let lambda: f64 = 0.5;
    let candidates = [
        ("log(λ/2)", (lambda / 2.0).ln()),
        ("log(λ²/4)", (lambda * lambda / 4.0).ln()),
        ("log(λ²/2)", (lambda * lambda / 2.0).ln()),
    ];
    let mut worst = [0.0f64; 3];
    let mut oracle_gap = 0.0f64;
    for u in [1e-2, 1e-3, 1e-4] {
        let oracle = lemma3_oracle(u);
        let lib = log_modulus_integral(lambda, Complex64::new(0.0, 0.0), u, u, &fx.spec).map_err(|e| e.to_string())?;
        oracle_gap = oracle_gap.max((lib.re - oracle).abs() / oracle.abs().max(1.0));
        for (k, (_, c)) in candidates.iter().enumerate() {
            worst[k] = worst[k].max((oracle - log_modulus_main_terms(u, *c)).abs());
        }
    }
    let fitting: Vec<&str> = candidates
        .iter()
        .zip(worst)
        .filter(|(_, w)| *w <= C5_BAND)
        .map(|((name, _), _)| *name)
        .collect();
    let detail = format!(
        "max residual {}={:.3}, {}={:.3}, {}={:.3}; fits: {}; library vs oracle {oracle_gap:.1e}",
        candidates[0].0,
        worst[0],
        candidates[1].0,
        worst[1],
        candidates[2].0,
        worst[2],
        if fitting.is_empty() {
            "none".to_string()
        } else {
            fitting.join(",")
        },
    );
    Ok((worst[0] <= C5_BAND && oracle_gap <= C5_ORACLE_REL, detail))
}

fn criterion_6(fx: &Fixture) -> Outcome {
    let fs = [
        ("gaussian w=0.05", TestFunction::gaussian(0.05)),
        ("gaussian w=1", TestFunction::gaussian(1.0)),
        ("biexp a=1", TestFunction::biexponential(1.0)),
        ("biexp a=3", TestFunction::biexponential(3.0)),
    ];
    let mut worst = 0.0f64;
    for (_, f) in &fs {
        let f = f.as_ref().map_err(|e| e.to_string())?;
        for lambda in [0.5, 1.0, 2.0] {
            worst = worst.max(lemma1_identity_residual(f, lambda, &fx.spec).map_err(|e| e.to_string())?);
        }
    }
    Ok((
        worst < C6_TOL,
        format!("max residual {worst:.2e} over {} functions x 3 λ", fs.len()),
    ))
}

fn criterion_7(fx: &Fixture) -> Outcome {
    let f = TestFunction::gaussian(0.05).map_err(|e| e.to_string())?;
    let us = [0.04, 0.02, 0.01];
    let mut ok = true;
    let mut detail = Vec::new();
    for (label, v) in [("a v=0.55", 0.55), ("b v=log2", LN_2), ("c v=0", 0.0)] {
        let s = thm2_sweep(&fx.zeta, &fx.zeros, &f, v, &us, C7_SLACK, &fx.spec, ORDER).map_err(|e| e.to_string())?;
        ok &= s.linear_decay;
        let ratios: Vec<String> = s.rows.iter().map(|r| format!("{:.3}", r.ratio)).collect();
        detail.push(format!("{label}: K={:.3} |res|/u=[{}]", s.fitted_k, ratios.join(",")));
    }
    // Leading constant for v = log 2 against −Λ(2) f(0)/√2.
    let lead = thm2_prediction(&fx.zeta, &f, 0.01, LN_2, &fx.spec).map_err(|e| e.to_string())?;
    let expected = -LN_2 * f.value(0.0) / 2f64.sqrt();
    let gap = (lead - expected).norm();
    ok &= gap <= 1e-14;
    detail.push(format!("v=log2 constant {:.6}", lead.re));
    Ok((ok, detail.join("; ")))
}

fn criterion_8(fx: &Fixture) -> Outcome {
    let f = TestFunction::gaussian(0.05).map_err(|e| e.to_string())?;
    let e1 = thm3_error_integral(&fx.zeta, &f, 0.02, &fx.zeros, 1000.0, &fx.spec).map_err(|e| e.to_string())?;
    let e2 = eq42_residual(&fx.zeta, &f, 0.02, &fx.zeros, 1000.0, &fx.spec).map_err(|e| e.to_string())?;
    let gap = (e1 - e2).abs();
    Ok((
        gap <= C8_TOL,
        format!("error integral {e1:.9}, direct {e2:.9}, gap {gap:.2e}"),
    ))
}

fn criterion_9(fx: &Fixture) -> Outcome {
    let t = fx.zeros.max_ordinate();
    let mut ok = true;
    let mut detail = Vec::new();

    let closed = 1.0 + EULER_GAMMA / 2.0 - (4.0 * PI).ln() / 2.0;
    let l1 = li_zero_sum(&fx.zeros, &fx.zeta, 1, t, ORDER).map_err(|e| e.to_string())?;
    ok &= (l1.value.re - C9_LAMBDA1).abs() <= C9_LAMBDA1_TOL && (closed - C9_LAMBDA1).abs() <= 1e-7;
    detail.push(format!("λ(1)={:.7} (closed form {closed:.7})", l1.value.re));

    let prec = PrecisionContext::default();
    let mut agree = true;
    for n in 1..=5u64 {
        let z = li_zero_sum(&fx.zeros, &fx.zeta, n as i64, t, ORDER).map_err(|e| e.to_string())?;
        let a = li_arithmetic(&fx.zeta, n, 1e7, &prec).map_err(|e| e.to_string())?;
        agree &= (a.value - z.value.conj()).norm() <= a.error_bar + z.error_bar;
    }
    ok &= agree;
    detail.push(format!("arithmetic n=1..5 agree={agree}"));

    let c_f = li_constant(&fx.zeta);
    let c_oracle = (EULER_GAMMA - 1.0 - (2.0 * PI).ln()) / 2.0;
    ok &= (c_f - c_oracle).abs() <= 1e-12 && (c_f - C9_CF).abs() <= 1e-4;
    let dev = |n: u64| -> Result<f64, String> {
        let c = li_zero_sum_completed(&fx.zeros, &fx.zeta, n as i64, t, ORDER).map_err(|e| e.to_string())?;
        Ok((c.value.conj().re / n as f64 - 0.5 * (n as f64).ln() - c_f).abs())
    };
    let (d50, d400) = (dev(50)?, dev(400)?);
    ok &= d400 < d50;
    detail.push(format!("trend dev(50)={d50:.4} dev(400)={d400:.4}"));

    let genuine = li_positivity_report(&fx.zeros, &fx.zeta, 200, t, ORDER).map_err(|e| e.to_string())?;
    let synthetic_table = ZeroTable::new(vec![10.0], Some(vec![0.9]), "synthetic").map_err(|e| e.to_string())?;
    let synthetic = li_positivity_report(&synthetic_table, &fx.zeta, 200, 10.0, ORDER).map_err(|e| e.to_string())?;
    ok &= genuine.failures == 0 && synthetic.failures >= 1;
    detail.push(format!(
        "positivity genuine {} failures, synthetic {} ({})",
        genuine.failures, synthetic.failures, synthetic.verdict
    ));
    Ok((ok, detail.join("; ")))
}

fn criterion_10(fx: &Fixture) -> Outcome {
    let n100 = fx.zeros.empirical_count(100.0).map_err(|e| e.to_string())?;
    let grid: Vec<f64> = (5..=100).map(|k| 10.0 * k as f64).collect();
    let profile = fx.zeros.deviation_profile(&fx.zeta, &grid).map_err(|e| e.to_string())?;
    Ok((
        n100 == 29 && profile.max_ratio <= C10_BAND,
        format!(
            "N(100)={n100}; max |deviation|/log T = {:.3} on 50..1000",
            profile.max_ratio
        ),
    ))
}

fn criterion_11(fx: &Fixture) -> Outcome {
    use explicit_formula::zerosum::landau_sum;
    let t = 500.0;
    let lambda = [(2u64, LN_2), (3, 3f64.ln()), (4, LN_2), (6, 0.0)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, big_lambda) in lambda {
        let (computed, predicted) = landau_sum(&fx.zeros, &fx.zeta, n, t).map_err(|e| e.to_string())?;
        let expected = -(t / PI) * big_lambda;
        let c = (computed - expected).norm() / ((n as f64).powf(1.5) * t.ln());
        ok &= c <= C11_BAND && (predicted.re - expected).abs() <= 1e-9;
        detail.push(format!("n={n}: {c:.3}"));
    }
    Ok((ok, detail.join("; ")))
}

fn main() -> ExitCode {
    let dir = data_dir();
    let fx = match (
        SelbergDescriptor::from_file(&dir.join("zeta.desc")),
        ZeroTable::from_file(&dir.join("zeta_zeros.txt")),
    ) {
        (Ok(zeta), Ok(zeros)) => Fixture {
            zeta,
            zeros,
            spec: QuadratureSpec::default(),
        },
        (d, z) => {
            eprintln!("acceptance: cannot load data: {:?} {:?}", d.err(), z.err());
            return ExitCode::FAILURE;
        }
    };
    let criteria: [fn(&Fixture) -> Outcome; 11] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let (pass, detail) = match c(&fx) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("criterion {}: {} {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
