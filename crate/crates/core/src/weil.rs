//! Both sides of the Weil explicit formula, the small-`u` predictions for
//! the scaled zero side, and the RH-conditional error integral.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::descriptor::SelbergDescriptor;
use crate::error::{Error, Result};
use crate::quad::{integrate_value, panels, QuadratureSpec};
use crate::special::{digamma, lemma1_direct_side};
use crate::summation::{sum_complex, ComplexNeumaier, Neumaier, SumOrder};
use crate::testfn::TestFunction;
use crate::zeros::ZeroTable;
use crate::zerosum::{classify_shift, ShiftClass, Term};

/// Terms of the zero side whose transform is below this are skipped.
const NEGLIGIBLE: f64 = 1e-22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSide {
    /// `Σ_{|γ|≤T} e^{v(ρ−1/2)} u Φ(u(ρ−1/2))`.
    pub value: Complex64,
    /// Table entries with `γ ≤ T` that entered the sum.
    pub zeros_used: usize,
    /// Smooth-density estimate of the omitted zeros `γ > T` (computed for
    /// `v = 0`, where it is not oscillatory; zero otherwise).
    pub tail_estimate: f64,
    /// Upper bound on the omitted zeros.
    pub tail_bound: f64,
}

impl ZeroSide {
    /// Value with the smooth tail estimate added.
    pub fn completed(&self) -> Complex64 {
        self.value + self.tail_estimate
    }
}

/// The zero side `Σ_ρ e^{v(ρ−1/2)} u Φ(u(ρ−1/2))` over `|γ| ≤ T`.
#[allow(clippy::too_many_arguments)]
pub fn zero_side(
    zeros: &ZeroTable,
    desc: &SelbergDescriptor,
    f: &TestFunction,
    u: f64,
    v: f64,
    t: f64,
    spec: &QuadratureSpec,
    order: SumOrder,
) -> Result<ZeroSide> {
    if !(u > 0.0) {
        return Err(Error::domain("u must be positive"));
    }
    zeros.check_coverage(t)?;
    let k = zeros.entries_up_to(t);
    // Transforms below the quadrature's resolution are noise; zeros past
    // this point are skipped and bounded instead.
    let eps = NEGLIGIBLE.max(spec.abs_tol * 1e-3);
    let cutoff = f.fourier_cutoff(eps / u.max(1e-300)) / u;
    let term = |i: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &rho in zeros.orbit(i).as_slice() {
            let z = rho - 0.5;
            if z.re == 0.0 && z.im.abs() > cutoff {
                continue;
            }
            acc += (z * v).exp() * f.transform(z * u, spec)? * u;
        }
        Ok(acc)
    };
    let terms: Vec<Complex64> = match order {
        SumOrder::Sequential => (0..k).map(term).collect::<Result<_>>()?,
        SumOrder::Chunked => (0..k).into_par_iter().map(term).collect::<Result<_>>()?,
    };
    let value = match order {
        SumOrder::Sequential => sum_complex(terms),
        SumOrder::Chunked => sum_complex(terms.chunks(1024).map(|c| sum_complex(c.iter().copied()))),
    };

    // Omitted zeros: pairs 1/2 ± iγ contribute 2u f̂(uγ) cos(vγ).
    let smooth = |x: f64, g: &dyn Fn(f64) -> f64| 2.0 * u * desc.counting_density(x).max(0.0) * g(u * x);
    let tail_spec = QuadratureSpec {
        rel_tol: 1e-8,
        abs_tol: spec.abs_tol * 1e-3,
        ..*spec
    };
    let start = t.max(1.0);
    let pts = tail_points(start, cutoff);
    let skipped: f64 = zeros.ordinates()[..k]
        .iter()
        .filter(|g| g.abs() > cutoff)
        .map(|g| 2.0 * u * f.fourier_envelope(u * g))
        .sum();
    let bound = skipped + integrate_value(|x: f64| smooth(x, &|y| f.fourier_envelope(y)), &pts, &tail_spec)?;
    // f̂ is only resolved to abs_tol; beyond that the bound covers the tail.
    let est_end = (f.fourier_cutoff(spec.abs_tol) / u).min(cutoff);
    let estimate = if v == 0.0 && start < est_end {
        let est_spec = QuadratureSpec {
            abs_tol: spec.abs_tol,
            ..tail_spec
        };
        let mut err = None;
        let value: f64 = integrate_value(
            |x: f64| match f.fourier(u * x, spec) {
                Ok(val) => smooth(x, &|_| val),
                Err(e) => {
                    err.get_or_insert(e.to_string());
                    0.0
                }
            },
            &panels(start, est_end, 16),
            &est_spec,
        )?;
        if let Some(e) = err {
            return Err(Error::domain(e));
        }
        value
    } else {
        0.0
    };
    Ok(ZeroSide {
        value,
        zeros_used: k,
        tail_estimate: estimate,
        tail_bound: bound,
    })
}

fn tail_points(start: f64, cutoff: f64) -> Vec<f64> {
    if !(cutoff.is_finite()) || cutoff > 1e12 {
        return vec![start, 2.0 * start, 10.0 * start, f64::INFINITY];
    }
    if start >= cutoff {
        return vec![start, start];
    }
    let mut pts = panels(start, cutoff, 16);
    pts.push(f64::INFINITY);
    pts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplicitFormulaReport {
    pub zero_side: Complex64,
    pub arithmetic_side: Complex64,
    pub term_breakdown: Vec<Term>,
    pub residual: Complex64,
    pub zeros_used: usize,
    pub n_max: u64,
    pub zero_tail_estimate: f64,
    pub zero_tail_bound: f64,
}

/// The arithmetic side of the explicit formula for `F(x) = f((x − v)/u)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArithmeticSide {
    pub terms: Vec<Term>,
    pub total: Complex64,
    pub n_max: u64,
}

/// Cutoff beyond which the prime sums, aggregated over `n ≈ e^x`, fall
/// below `1e-18`; capped at the sieve limit.
pub fn default_prime_cutoff(desc: &SelbergDescriptor, f: &TestFunction, u: f64, v: f64) -> u64 {
    let limit = desc.coeffs.sieve_limit();
    let x_max = (limit as f64).ln();
    let step = 0.005f64.min(u * f.width() / 8.0).max(1e-4);
    let mut last = 0.0f64;
    let mut x = 2f64.ln();
    while x <= x_max {
        let a = f.value((x - v) / u).abs().max(f.value((-x - v) / u).abs());
        if a * x * (x / 2.0).exp() >= 1e-18 {
            last = x;
        }
        x += step;
    }
    ((last + step).exp().ceil() as u64).clamp(2, limit)
}

/// Evaluates the eight term groups of the explicit formula:
/// both prime sums (with their mean-value continuation beyond `n_max`),
/// the two pole terms, the `log Q` term, the digamma term and the two
/// gamma-factor integrals.
pub fn arithmetic_side(
    desc: &SelbergDescriptor,
    f: &TestFunction,
    u: f64,
    v: f64,
    n_max: Option<u64>,
    spec: &QuadratureSpec,
) -> Result<ArithmeticSide> {
    if !(u > 0.0) {
        return Err(Error::domain("u must be positive"));
    }
    f.check_conditions()?;
    let n_max = n_max.unwrap_or_else(|| default_prime_cutoff(desc, f, u, v));
    let big_f = |x: f64| f.value((x - v) / u);
    let m_f = desc.pole_order as f64;
    let mut terms = Vec::new();
    let mut push = |label: &str, value: Complex64| {
        terms.push(Term {
            label: label.into(),
            value,
        })
    };

    let table = desc.coeffs.prime_powers_up_to(n_max)?;
    let (plus, minus) = table
        .par_chunks(4096)
        .map(|chunk| {
            let mut p = ComplexNeumaier::new();
            let mut m = ComplexNeumaier::new();
            for &(n, lam) in chunk {
                let ln = (n as f64).ln();
                let s = (n as f64).sqrt();
                p.add(lam / s * big_f(ln));
                m.add(lam.conj() / s * big_f(-ln));
            }
            (p.value(), m.value())
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            (ComplexNeumaier::new(), ComplexNeumaier::new()),
            |(mut a, mut b), (p, m)| {
                a.add(p);
                b.add(m);
                (a, b)
            },
        );
    push("prime_sum_plus", -plus.value());
    push("prime_sum_minus", -minus.value());

    let tail = if m_f == 0.0 {
        0.0
    } else {
        let x0 = (n_max as f64 + 1.0).ln();
        let s = u * f.width();
        let mut pts = vec![x0, f64::INFINITY];
        for k in [-8.0, -2.0, 0.0, 2.0, 8.0] {
            for c in [v, -v] {
                let x = c + k * s;
                if x > x0 {
                    pts.push(x);
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let tail_spec = QuadratureSpec {
            abs_tol: 1e-300,
            rel_tol: 1e-8,
            ..*spec
        };
        -m_f * integrate_value(
            |x: f64| match big_f(x) + big_f(-x) {
                0.0 => 0.0,
                s => (x / 2.0).exp() * s,
            },
            &pts,
            &tail_spec,
        )?
    };
    push("prime_tail", tail.into());

    let half = Complex64::new(u / 2.0, 0.0);
    push("pole_plus", f.transform(half, spec)? * (m_f * u * (v / 2.0).exp()));
    push("pole_minus", f.transform(-half, spec)? * (m_f * u * (-v / 2.0).exp()));

    let f0 = big_f(0.0);
    push("log_Q", (2.0 * f0 * desc.q_scale.ln()).into());

    let mut dg = Complex64::new(0.0, 0.0);
    for g in &desc.gamma_factors {
        let h = Complex64::new(g.lambda / 2.0, 0.0);
        dg += (digamma(h + g.mu)? + digamma(h + g.mu.conj())?) * (g.lambda * f0);
    }
    push("digamma", dg);

    let (f0_minus, f0_plus) = f.one_sided(-v / u);
    let mut int_minus = Complex64::new(0.0, 0.0);
    let mut int_plus = Complex64::new(0.0, 0.0);
    for g in &desc.gamma_factors {
        let lam = g.lambda;
        let pts_minus = gamma_breakpoints(f, u, -v / lam, lam);
        let pts_plus = gamma_breakpoints(f, u, v / lam, lam);
        let a_minus = Complex64::new(lam / 2.0, 0.0) + g.mu;
        let a_plus = Complex64::new(lam / 2.0, 0.0) + g.mu.conj();
        let im: Complex64 = integrate_value(
            |x: f64| (-a_minus * x).exp() * ((big_f(-lam * x) - f0_minus) / -(-x).exp_m1()),
            &pts_minus,
            spec,
        )?;
        let ip: Complex64 = integrate_value(
            |x: f64| (-a_plus * x).exp() * ((big_f(lam * x) - f0_plus) / -(-x).exp_m1()),
            &pts_plus,
            spec,
        )?;
        int_minus -= im * lam;
        int_plus -= ip * lam;
    }
    push("gamma_integral_minus", int_minus);
    push("gamma_integral_plus", int_plus);

    let total = sum_complex(terms.iter().map(|t| t.value));
    Ok(ArithmeticSide { terms, total, n_max })
}

/// Breakpoints on `[0, ∞)` for `x ↦ F(±λx)` peaked at `centre` with width
/// `u·width(f)/λ`, plus the point where `F` begins to vary near `x = 0`.
fn gamma_breakpoints(f: &TestFunction, u: f64, centre: f64, lambda: f64) -> Vec<f64> {
    let s = u * f.width() / lambda;
    let mut pts = vec![0.0, f64::INFINITY];
    for k in [-16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let x = centre + k * s;
        if x > 0.0 {
            pts.push(x);
        }
    }
    for k in [0.25, 1.0, 4.0, 16.0] {
        pts.push(s * k);
    }
    if let Some(r) = f.support_radius() {
        for c in [centre - u * r / lambda, centre + u * r / lambda] {
            if c > 0.0 {
                pts.push(c);
            }
        }
    }
    for x in [1.0, 10.0, 50.0] {
        pts.push(x);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Zero side and arithmetic side with their difference.
#[allow(clippy::too_many_arguments)]
pub fn weil_closure(
    desc: &SelbergDescriptor,
    zeros: &ZeroTable,
    f: &TestFunction,
    u: f64,
    v: f64,
    t: f64,
    n_max: Option<u64>,
    spec: &QuadratureSpec,
    order: SumOrder,
) -> Result<ExplicitFormulaReport> {
    let zs = zero_side(zeros, desc, f, u, v, t, spec, order)?;
    let arith = arithmetic_side(desc, f, u, v, n_max, spec)?;
    let zero_total = zs.completed();
    Ok(ExplicitFormulaReport {
        zero_side: zero_total,
        arithmetic_side: arith.total,
        term_breakdown: arith.terms,
        residual: zero_total - arith.total,
        zeros_used: zs.zeros_used,
        n_max: arith.n_max,
        zero_tail_estimate: zs.tail_estimate,
        zero_tail_bound: zs.tail_bound,
    })
}

/// Leading behaviour of the zero side as `u → 0`:
///
/// * `v = log m`: `−Λ_F(m) f(0)/√m`;
/// * `v = −log m`: `−conj(Λ_F(m)) f(0)/√m`;
/// * other `v ≠ 0`: `0`;
/// * `v = 0`: `f(0)[2 log Q − d_F log u] − Σ_j λ_j ∫₀^∞ (f(λ_j y) + f(−λ_j y) − 2f(0)e^{−y}) dy/y`.
///
/// Each case holds up to `O(u)`.
pub fn thm2_prediction(
    desc: &SelbergDescriptor,
    f: &TestFunction,
    u: f64,
    v: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(u > 0.0 && u < 0.5) {
        return Err(Error::domain("prediction needs u in (0, 1/2)"));
    }
    let f0 = f.value(0.0);
    let class = if v.abs() <= 1e-12 {
        ShiftClass::Zero
    } else {
        classify_shift(u, v, 1e-12)?
    };
    match class {
        ShiftClass::Zero => {
            let (l, r) = f.one_sided(0.0);
            if l != r {
                return Err(Error::Condition {
                    condition: "a",
                    detail: "f is discontinuous at 0; the v = 0 prediction is ambiguous".into(),
                });
            }
            let mut acc = f0 * (2.0 * desc.q_scale.ln() - desc.degree() * u.ln());
            for g in &desc.gamma_factors {
                // lemma1_direct_side(f, λ) = −∫ ((f(λy)+f(−λy))/2 − f(0)e^{−y}) dy/y.
                acc += 2.0 * g.lambda * lemma1_direct_side(f, g.lambda, spec)?;
            }
            Ok(acc.into())
        }
        ShiftClass::LogM { m, sign } => {
            let lam = desc.coeffs.lambda_f(m)?;
            let s = (m as f64).sqrt();
            Ok(match sign {
                crate::zerosum::PrimeSign::Minus => -lam * f0 / s,
                crate::zerosum::PrimeSign::Plus => -lam.conj() * f0 / s,
            })
        }
        ShiftClass::EqualsU | ShiftClass::Generic => Ok(Complex64::new(0.0, 0.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub u: f64,
    pub zero_side: Complex64,
    pub prediction: Complex64,
    pub residual: Complex64,
    /// `|residual| / u`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecaySweep {
    pub v: f64,
    pub rows: Vec<DecayRow>,
    /// `K = slack · |residual|/u` at the largest `u`.
    pub fitted_k: f64,
    pub slack: f64,
    /// Every row satisfies `|residual| ≤ K u`.
    pub linear_decay: bool,
}

/// Fits `|zero_side − prediction| ≤ K u` at the largest `u` (with a slack
/// factor) and checks it at the others.
#[allow(clippy::too_many_arguments)]
pub fn thm2_sweep(
    desc: &SelbergDescriptor,
    zeros: &ZeroTable,
    f: &TestFunction,
    v: f64,
    us: &[f64],
    slack: f64,
    spec: &QuadratureSpec,
    order: SumOrder,
) -> Result<DecaySweep> {
    if us.is_empty() {
        return Err(Error::domain("sweep needs at least one u"));
    }
    let t = zeros.max_ordinate();
    let mut rows = Vec::with_capacity(us.len());
    for &u in us {
        let zs = zero_side(zeros, desc, f, u, v, t, spec, order)?;
        let pred = thm2_prediction(desc, f, u, v, spec)?;
        let residual = zs.completed() - pred;
        rows.push(DecayRow {
            u,
            zero_side: zs.completed(),
            prediction: pred,
            residual,
            ratio: residual.norm() / u,
        });
    }
    let anchor = rows
        .iter()
        .max_by(|a, b| a.u.total_cmp(&b.u))
        .expect("rows is nonempty");
    let fitted_k = slack * anchor.ratio;
    let linear_decay = rows.iter().all(|r| r.residual.norm() <= fitted_k * r.u);
    Ok(DecaySweep {
        v,
        rows,
        fitted_k,
        slack,
        linear_decay,
    })
}

/// `k(T) = f̂(−uT) + f̂(uT)`.
fn pair_weight(f: &TestFunction, u: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(f.fourier(-u * t, spec)? + f.fourier(u * t, spec)?)
}

/// `M(T) = (d_F/2π) T log(T/2π) + T (log q_F − d_F)/(2π)`.
fn smooth_count(desc: &SelbergDescriptor, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let d = desc.degree();
    d / (2.0 * PI) * t * (t / (2.0 * PI)).ln() + t * (desc.log_conductor() - d) / (2.0 * PI)
}

fn rh_zeros_checked(zeros: &ZeroTable, f: &TestFunction, u: f64, t_max: f64, spec: &QuadratureSpec) -> Result<()> {
    if !zeros.on_critical_line() {
        return Err(Error::domain(
            "the error integral assumes every zero lies on the critical line",
        ));
    }
    zeros.check_coverage(t_max)?;
    f.check_conditions()?;
    let start = u * t_max;
    let tail_spec = QuadratureSpec {
        rel_tol: 1e-6,
        abs_tol: 1e-300,
        ..*spec
    };
    let mass: f64 = integrate_value(
        |t: f64| 2.0 * f.fourier_envelope(t),
        &[start, 2.0 * start + 1.0, f64::INFINITY],
        &tail_spec,
    )?;
    if mass > 1e-8 {
        return Err(Error::Coverage {
            requested: f.fourier_cutoff(1e-12) / u,
            available: t_max,
        });
    }
    Ok(())
}

/// `u Σ_{0<γ≤T_max} k(γ)`.
fn scaled_pair_sum(zeros: &ZeroTable, f: &TestFunction, u: f64, t_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    let k = zeros.entries_up_to(t_max);
    let vals: Vec<f64> = zeros.ordinates()[..k]
        .par_iter()
        .map(|&g| pair_weight(f, u, g, spec))
        .collect::<Result<_>>()?;
    Ok(u * vals.into_iter().collect::<Neumaier>().value())
}

/// `−u ∫₀^{T_max} (N_F(T) − M(T)) k′(T) dT` with the jumps of `N_F`
/// integrated by parts exactly.
pub fn thm3_error_integral(
    desc: &SelbergDescriptor,
    f: &TestFunction,
    u: f64,
    zeros: &ZeroTable,
    t_max: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::domain("u must be positive"));
    }
    rh_zeros_checked(zeros, f, u, t_max, spec)?;
    let jumps = scaled_pair_sum(zeros, f, u, t_max, spec)?;
    let n_end = zeros.empirical_count(t_max)? as f64;
    let boundary = u * n_end * pair_weight(f, u, t_max, spec)?;
    let n = ((t_max * u * f.width() * 4.0).ceil() as usize).clamp(8, 4000);
    let mut pts = panels(0.0, t_max, n);
    pts.insert(1, (t_max / n as f64 / 16.0).min(1.0));
    let spec_m = QuadratureSpec {
        max_subdivisions: spec.max_subdivisions.max(8 * n),
        ..*spec
    };
    let mut err = None;
    let smooth: f64 = integrate_value(
        |t: f64| {
            let d = match (f.fourier_derivative(u * t, spec), f.fourier_derivative(-u * t, spec)) {
                (Ok(a), Ok(b)) => u * (a - b),
                (Err(e), _) | (_, Err(e)) => {
                    err.get_or_insert(e.to_string());
                    0.0
                }
            };
            smooth_count(desc, t) * d
        },
        &pts,
        &spec_m,
    )?;
    if let Some(e) = err {
        return Err(Error::domain(e));
    }
    Ok(jumps - boundary + u * smooth)
}

/// Direct residual of the RH identity
/// `u Σ_{γ>0} k(γ) = f(0)(log q_F − d_F log 2πu) − d_F J + E`,
/// `J = ∫₀^∞ ((f(x)+f(−x))/2 − f(0)e^{−x}) dx/x`, returning `E`.
pub fn eq42_residual(
    desc: &SelbergDescriptor,
    f: &TestFunction,
    u: f64,
    zeros: &ZeroTable,
    t_max: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::domain("u must be positive"));
    }
    rh_zeros_checked(zeros, f, u, t_max, spec)?;
    let lhs = scaled_pair_sum(zeros, f, u, t_max, spec)?;
    let d = desc.degree();
    let j = -lemma1_direct_side(f, 1.0, spec)?;
    let f0 = f.value(0.0);
    let main = f0 * (desc.log_conductor() - d * (2.0 * PI * u).ln()) - d * j;
    Ok(lhs - main)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_has_zero_sides() {
        let zeros = ZeroTable::on_line(vec![14.134725141734693, 21.022039638771555], "head").unwrap();
        let z = SelbergDescriptor::zeta();
        let f = TestFunction::zero();
        let spec = QuadratureSpec::default();
        let zs = zero_side(
            &zeros,
            &z,
            &f,
            1.0,
            0.0,
            zeros.max_ordinate(),
            &spec,
            SumOrder::Sequential,
        )
        .unwrap();
        assert_eq!(zs.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn prediction_cases() {
        let z = SelbergDescriptor::zeta();
        let f = TestFunction::Gaussian { w: 0.05 };
        let spec = QuadratureSpec::default();
        let f0 = f.value(0.0);
        let p = thm2_prediction(&z, &f, 0.1, 2f64.ln(), &spec).unwrap();
        assert!((p.re + 2f64.ln() / 2f64.sqrt() * f0).abs() < 1e-14);
        assert_eq!(
            thm2_prediction(&z, &f, 0.1, 0.55, &spec).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(thm2_prediction(&z, &f, 0.6, 0.0, &spec).is_err());
    }

    #[test]
    fn smooth_count_matches_main_term_shift() {
        let z = SelbergDescriptor::zeta();
        for t in [10.0, 100.0, 1000.0] {
            let main = z.counting_main_term(t).unwrap();
            assert!((smooth_count(&z, t) - main).abs() < 1e-9);
        }
    }
}
