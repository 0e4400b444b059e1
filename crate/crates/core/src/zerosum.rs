//! Gaussian-weighted zero sums, their arithmetic evaluation and the
//! Landau-type sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::descriptor::SelbergDescriptor;
use crate::error::{Error, Result};
use crate::quad::{integrate_value, QuadratureSpec};
use crate::special::{kernel_integral_i, log_modulus_integral};
use crate::summation::{reduce_complex, ComplexNeumaier, SumOrder};
use crate::zeros::ZeroTable;
use crate::EULER_GAMMA;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSumParams {
    pub u: f64,
    pub v: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

impl ZeroSumParams {
    pub fn new(u: f64, v: f64, t: f64) -> Result<Self> {
        let p = Self { u, v, t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u > 0.0) {
            return Err(Error::domain("u must be positive"));
        }
        if !(self.t >= 1.0) {
            return Err(Error::domain("T must be at least 1"));
        }
        if !self.v.is_finite() {
            return Err(Error::domain("v must be finite"));
        }
        Ok(())
    }

    /// `u T² ≥ 25 + |v|`: the omitted tail is far below double precision.
    pub fn is_effectively_complete(&self) -> bool {
        self.u * self.t * self.t >= 25.0 + self.v.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumReport {
    pub computed: Complex64,
    pub predicted: Complex64,
    pub residual: Complex64,
    pub params: ZeroSumParams,
    pub zero_count_used: usize,
    pub truncation_bound: f64,
}

impl SumReport {
    pub fn new(
        computed: Complex64,
        predicted: Complex64,
        params: ZeroSumParams,
        zero_count_used: usize,
        truncation_bound: f64,
    ) -> Self {
        Self {
            computed,
            predicted,
            residual: computed - predicted,
            params,
            zero_count_used,
            truncation_bound,
        }
    }
}

/// `Σ_{|γ|≤T} e^{uρ² − vρ}` over the zeros of the table.
pub fn gaussian_zero_sum(zeros: &ZeroTable, params: &ZeroSumParams, order: SumOrder) -> Result<Complex64> {
    params.validate()?;
    zeros.check_coverage(params.t)?;
    let k = zeros.entries_up_to(params.t);
    let (u, v) = (params.u, params.v);
    let idx: Vec<usize> = (0..k).collect();
    Ok(reduce_complex(&idx, order, |&i| {
        zeros
            .orbit(i)
            .as_slice()
            .iter()
            .map(|&rho| (rho * rho * u - rho * v).exp())
            .sum()
    }))
}

/// Bound for the zeros with `γ > T` omitted from [`gaussian_zero_sum`],
/// assuming they lie on the critical line with the smooth counting density.
pub fn gaussian_tail_bound(desc: &SelbergDescriptor, params: &ZeroSumParams) -> Result<f64> {
    params.validate()?;
    let (u, v, t) = (params.u, params.v, params.t);
    let spec = QuadratureSpec {
        rel_tol: 1e-6,
        abs_tol: 1e-300,
        ..QuadratureSpec::default()
    };
    let integral: f64 = integrate_value(
        |x: f64| desc.counting_density(x).max(0.0) * (-u * (x * x - t * t)).exp(),
        &[t, t + 1.0 / (u * t).max(1e-3), f64::INFINITY],
        &spec,
    )?;
    Ok(2.0 * (u / 4.0 + v.abs() / 2.0 - u * t * t).exp() * integral)
}

/// `d_F/√(16πu)(log(1/u) − γ₀) + log(q_F/(4π)^{d_F})/√(4πu)`.
pub fn thm1_main_term(desc: &SelbergDescriptor, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain("main term needs u in (0, 1)"));
    }
    let d = desc.degree();
    Ok(d / (16.0 * PI * u).sqrt() * ((1.0 / u).ln() - EULER_GAMMA)
        + (desc.log_conductor() - d * (4.0 * PI).ln()) / (4.0 * PI * u).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeSign {
    /// `v = −log m`: the sum carries `m^ρ`.
    Plus,
    /// `v = log m`: the sum carries `m^{−ρ}`.
    Minus,
}

/// `−Λ_F(m)/√(4πu)` (plus) or `−conj(Λ_F(m))/(m√(4πu))` (minus).
pub fn thm1_prime_term(desc: &SelbergDescriptor, u: f64, m: u64, sign: PrimeSign) -> Result<Complex64> {
    if m < 2 {
        return Err(Error::domain("prime term needs m >= 2"));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain("prime term needs u in (0, 1)"));
    }
    let lam = desc.coeffs.lambda_f(m)?;
    let g = (4.0 * PI * u).sqrt();
    Ok(match sign {
        PrimeSign::Plus => -lam / g,
        PrimeSign::Minus => -lam.conj() / (m as f64 * g),
    })
}

/// How a shift `v` relates to the special values `0`, `u` and `±log m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftClass {
    Zero,
    EqualsU,
    LogM { m: u64, sign: PrimeSign },
    Generic,
}

/// Classifies `v` with tolerance `tol` against `0`, `u`, and `±log m` for
/// `2 ≤ m ≤ 10^6`.
pub fn classify_shift(u: f64, v: f64, tol: f64) -> Result<ShiftClass> {
    if v.abs() <= tol {
        return Ok(ShiftClass::Zero);
    }
    if (v - u).abs() <= tol {
        return Ok(ShiftClass::EqualsU);
    }
    let a = v.abs();
    if a > (1e6f64).ln() + 1.0 {
        return Ok(ShiftClass::Generic);
    }
    let m0 = a.exp().round().max(2.0) as u64;
    let mut hits = Vec::new();
    for m in m0.saturating_sub(1).max(2)..=m0 + 1 {
        if ((m as f64).ln() - a).abs() <= 1e-9 {
            hits.push(m);
        }
    }
    if hits.len() > 1 {
        return Err(Error::Ambiguous(format!(
            "v = {v} is within 1e-9 of log m for m in {hits:?}"
        )));
    }
    match hits.first() {
        Some(&m) if ((m as f64).ln() - a).abs() <= tol => Ok(ShiftClass::LogM {
            m,
            sign: if v > 0.0 { PrimeSign::Minus } else { PrimeSign::Plus },
        }),
        _ => Ok(ShiftClass::Generic),
    }
}

/// Parses `0`, `u`, `log:m`, `-log:m` or a decimal number.
pub fn parse_shift(spec: &str, u: f64) -> Result<f64> {
    let s = spec.trim();
    if s == "u" {
        return Ok(u);
    }
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) if r.starts_with("log:") => (true, r),
        _ => (false, s),
    };
    if let Some(m) = rest.strip_prefix("log:") {
        let m: u64 = m
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("bad shift {spec:?}: expected log:<integer>")))?;
        if m < 2 {
            return Err(Error::domain("log:m needs m >= 2"));
        }
        let l = (m as f64).ln();
        return Ok(if neg { -l } else { l });
    }
    s.parse::<f64>()
        .map_err(|_| Error::domain(format!("bad shift {spec:?}: expected 0, u, log:m, -log:m or a number")))
}

/// Prediction for `Σ e^{uρ² − vρ}` as `u → 0` at the special shifts.
pub fn thm1_prediction(desc: &SelbergDescriptor, u: f64, v: f64) -> Result<Complex64> {
    match classify_shift(u, v, 1e-12)? {
        ShiftClass::Zero | ShiftClass::EqualsU => Ok(thm1_main_term(desc, u)?.into()),
        ShiftClass::LogM { m, sign } => thm1_prime_term(desc, u, m, sign),
        ShiftClass::Generic => Err(Error::domain(format!(
            "no asymptotic prediction for v = {v}; use 0, u or ±log m"
        ))),
    }
}

/// Zero sum with its prediction and truncation diagnostics.
pub fn thm1_report(
    desc: &SelbergDescriptor,
    zeros: &ZeroTable,
    params: &ZeroSumParams,
    order: SumOrder,
) -> Result<SumReport> {
    let computed = gaussian_zero_sum(zeros, params, order)?;
    let predicted = thm1_prediction(desc, params.u, params.v)?;
    let used = zeros.entries_up_to(params.t);
    let bound = gaussian_tail_bound(desc, params)?;
    Ok(SumReport::new(computed, predicted, *params, used, bound))
}

/// A labelled term of an arithmetic evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub terms: Vec<Term>,
    pub total: Complex64,
    pub n_max: u64,
}

/// Smallest `n` beyond which both prime-sum Gaussians are below `e^{-40}`.
pub fn default_n_max(u: f64, v: f64) -> u64 {
    ((v.abs() + (160.0 * u).sqrt()).exp().ceil() as u64).max(2)
}

/// Arithmetic evaluation of `Σ_ρ e^{uρ² − vρ}`:
///
/// ```text
/// m_F (1 + e^{u−v}) + 2 log Q e^{−v²/4u}/√(4πu)
///   − (4πu)^{−1/2} Σ Λ_F(n) e^{−(v + log n)²/4u}
///   − (4πu)^{−1/2} Σ conj(Λ_F(n))/n · e^{−(v − log n)²/4u}
///   + (e^{u/4 − v/2}/π) Σ_j λ_j ∫ log|λ_j/2 + μ_j + iλ_j t| e^{−ut² + it(u−v)} dt
///   − Σ_j λ_j I(λ_j, μ_j)
/// ```
///
/// with `I` from [`kernel_integral_i`].
pub fn lemma2_rhs(
    desc: &SelbergDescriptor,
    u: f64,
    v: f64,
    n_max: Option<u64>,
    spec: &QuadratureSpec,
) -> Result<Lemma2Report> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain("arithmetic zero sum needs u in (0, 1)"));
    }
    let n_max = n_max.unwrap_or_else(|| default_n_max(u, v));
    let m_f = desc.pole_order as f64;
    let g = (4.0 * PI * u).sqrt();
    let mut terms = Vec::new();
    let mut push = |label: &str, value: Complex64| {
        terms.push(Term {
            label: label.into(),
            value,
        })
    };

    push("pole", Complex64::new(m_f * (1.0 + (u - v).exp()), 0.0));
    push(
        "log_Q",
        Complex64::new(2.0 * desc.q_scale.ln() * (-v * v / (4.0 * u)).exp() / g, 0.0),
    );

    let table = desc.coeffs.prime_powers_up_to(n_max)?;
    let mut plus = ComplexNeumaier::new();
    let mut minus = ComplexNeumaier::new();
    for &(n, lam) in table {
        let ln = (n as f64).ln();
        plus.add(lam * (-(v + ln).powi(2) / (4.0 * u)).exp());
        minus.add(lam.conj() / n as f64 * (-(v - ln).powi(2) / (4.0 * u)).exp());
    }
    push("prime_sum_plus", -plus.value() / g);
    push("prime_sum_minus", -minus.value() / g);

    let mut log_mod = Complex64::new(0.0, 0.0);
    let mut kernel = Complex64::new(0.0, 0.0);
    for gf in &desc.gamma_factors {
        log_mod += log_modulus_integral(gf.lambda, gf.mu, u, v, spec)? * gf.lambda;
        kernel += kernel_integral_i(gf.lambda, gf.mu, u, v, spec)? * gf.lambda;
    }
    push("gamma_log_modulus", log_mod * ((u / 4.0 - v / 2.0).exp() / PI));
    push("gamma_kernel", -kernel);

    let total = terms.iter().map(|t| t.value).sum();
    Ok(Lemma2Report { terms, total, n_max })
}

/// `(Σ_{|γ|≤T} n^ρ, −(T/π) Λ_F(n))`.
pub fn landau_sum(zeros: &ZeroTable, desc: &SelbergDescriptor, n: u64, t: f64) -> Result<(Complex64, Complex64)> {
    if n < 2 {
        return Err(Error::domain("Landau sum needs n >= 2"));
    }
    if !(t > 0.0) {
        return Err(Error::domain("T must be positive"));
    }
    zeros.check_coverage(t)?;
    let ln = (n as f64).ln();
    let k = zeros.entries_up_to(t);
    let mut acc = ComplexNeumaier::new();
    for i in 0..k {
        for &rho in zeros.orbit(i).as_slice() {
            acc.add((rho * ln).exp());
        }
    }
    let predicted = -desc.coeffs.lambda_f(n)? * (t / PI);
    Ok((acc.value(), predicted))
}
