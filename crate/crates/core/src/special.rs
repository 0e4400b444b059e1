//! Special functions and kernel integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_value, QuadratureSpec};
use crate::summation::ComplexNeumaier;
use crate::testfn::TestFunction;
use crate::EULER_GAMMA;

/// B_2, B_4, …, B_18.
const BERNOULLI_EVEN: [f64; 9] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
];

/// Γ′/Γ(z) for `Re z > 0`, by upward recurrence and the asymptotic series.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("digamma needs Re z > 0, got {z}")));
    }
    let mut w = z;
    let mut shift = ComplexNeumaier::new();
    while w.norm() < 16.0 {
        shift.add(-w.inv());
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2.0 * (k + 1) as f64;
        series += pow * (b / two_k);
        pow *= inv2;
    }
    Ok(w.ln() - inv * 0.5 - series + shift.value())
}

/// `∫ e^{-u t² + i t a} dt = √(π/u) e^{-a²/(4u)}`.
pub fn gaussian_fourier(u: f64, a: Complex64) -> Result<Complex64> {
    if !(u > 0.0) {
        return Err(Error::domain("gaussian_fourier needs u > 0"));
    }
    Ok((-(a * a) / (4.0 * u)).exp() * (PI / u).sqrt())
}

/// `h(x) = 1/(e^x − 1) − 1/x + 1`, the kernel of the digamma integral.
pub fn kernel_h(x: f64) -> f64 {
    if x.abs() < 0.05 {
        let x2 = x * x;
        0.5 + x / 12.0 - x * x2 / 720.0 + x * x2 * x2 / 30240.0
    } else {
        1.0 / x.exp_m1() - 1.0 / x + 1.0
    }
}

fn gaussian_density(y: f64, u: f64) -> f64 {
    (-y * y / (4.0 * u)).exp() / (4.0 * PI * u).sqrt()
}

/// Breakpoints for a Gaussian bump in `x` centred at `c` with width `s`,
/// clipped to `[0, upper]`.
fn gaussian_breakpoints(c: f64, s: f64, upper: f64) -> Vec<f64> {
    let mut pts = vec![0.0, upper];
    for k in [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0] {
        let x = c + k * s;
        if x > 0.0 && x < upper {
            pts.push(x);
        }
    }
    for k in [1.0, 4.0] {
        if s * k < upper {
            pts.push(s * k);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// The two kernel integrals
/// `∫₀^∞ h(x) e^{-μx} g(v + λx) dx + ∫₀^∞ h(x) e^{-(λ+μ̄)x} g(v − λx) dx`
/// with `g(y) = e^{-y²/4u}/√(4πu)`.
pub fn kernel_integral_i(lambda: f64, mu: Complex64, u: f64, v: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(u > 0.0 && lambda > 0.0) {
        return Err(Error::domain("kernel_integral_i needs u > 0 and lambda > 0"));
    }
    let reach = spec.tail_cutoff.gaussian(u);
    let width = (2.0 * u).sqrt() / lambda;

    let c1 = -v / lambda;
    let upper1 = c1.max(0.0) + reach / lambda;
    let first: Complex64 = if v - 0.0 > reach {
        Complex64::new(0.0, 0.0)
    } else {
        integrate_value(
            |x: f64| (-mu * x).exp() * (kernel_h(x) * gaussian_density(v + lambda * x, u)),
            &gaussian_breakpoints(c1, width, upper1),
            spec,
        )?
    };

    let c2 = v / lambda;
    let upper2 = c2.max(0.0) + reach / lambda;
    let second: Complex64 = if -v > reach {
        Complex64::new(0.0, 0.0)
    } else {
        integrate_value(
            |x: f64| (-(lambda + mu.conj()) * x).exp() * (kernel_h(x) * gaussian_density(v - lambda * x, u)),
            &gaussian_breakpoints(c2, width, upper2),
            spec,
        )?
    };
    Ok(first + second)
}

/// `∫ log|a + iλt| e^{-ut² + it(u−v)} dt` with `a = λ/2 + μ`.
pub fn log_modulus_integral(lambda: f64, mu: Complex64, u: f64, v: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(u > 0.0 && lambda > 0.0) {
        return Err(Error::domain("log_modulus_integral needs u > 0 and lambda > 0"));
    }
    let a = Complex64::new(lambda / 2.0, 0.0) + mu;
    let omega = u - v;
    let t_star = (((1.0 / spec.tail_cutoff.threshold).ln() + 5.0) / u).sqrt();
    let log_mod = move |t: f64| 0.5 * (a.re * a.re + (a.im + lambda * t).powi(2)).ln();

    let mut pts = Vec::new();
    let panel = if omega != 0.0 {
        (2.0 * PI / omega.abs()).min(t_star / 8.0)
    } else {
        t_star / 8.0
    };
    let n = ((t_star / panel).ceil() as usize).min(200_000);

    if a.im == 0.0 {
        // Even modulus: 2 ∫₀^∞ log|a + iλt| e^{-ut²} cos(ωt) dt.
        pts.extend(crate::quad::panels(0.0, t_star, n));
        let scale = a.re / lambda;
        for k in [0.25, 1.0, 4.0] {
            if scale * k < t_star {
                pts.push(scale * k);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let spec = QuadratureSpec {
            max_subdivisions: spec.max_subdivisions.max(4 * pts.len()),
            ..*spec
        };
        let value: f64 = integrate_value(
            |t: f64| log_mod(t) * (-u * t * t).exp() * (omega * t).cos(),
            &pts,
            &spec,
        )?;
        return Ok(Complex64::new(2.0 * value, 0.0));
    }

    let centre = -a.im / lambda;
    pts.extend(crate::quad::panels(-t_star, t_star, 2 * n));
    let scale = a.re / lambda;
    for k in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let t = centre + k * scale;
        if t.abs() < t_star {
            pts.push(t);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let spec = QuadratureSpec {
        max_subdivisions: spec.max_subdivisions.max(4 * pts.len()),
        ..*spec
    };
    integrate_value(
        |t: f64| Complex64::from_polar(log_mod(t) * (-u * t * t).exp(), omega * t),
        &pts,
        &spec,
    )
}

/// Main terms `√(π/4u)(log(1/u) − γ₀) + √(π/u)·C` of the small-`u`
/// expansion of [`log_modulus_integral`] at `v ∈ {0, u}` and real `μ`,
/// for a supplied constant `C`.
pub fn log_modulus_main_terms(u: f64, constant: f64) -> f64 {
    (PI / (4.0 * u)).sqrt() * ((1.0 / u).ln() - EULER_GAMMA) + (PI / u).sqrt() * constant
}

/// Number of directly summed terms in [`hurwitz_power_sum`].
pub const HURWITZ_DIRECT_TERMS: u64 = 100_000;

/// `ζ(k, a) = Σ_{l≥0} (l + a)^{-k}` for `k ≥ 2`, `Re a > 0`.
pub fn hurwitz_power_sum(a: Complex64, k: u32) -> Result<Complex64> {
    if k < 2 {
        return Err(Error::domain("hurwitz_power_sum needs k >= 2"));
    }
    if !(a.re > 0.0) {
        return Err(Error::domain("hurwitz_power_sum needs Re a > 0"));
    }
    let n = HURWITZ_DIRECT_TERMS;
    let ki = k as i32;
    let mut acc = ComplexNeumaier::new();
    let tail = {
        let b = Complex64::new(n as f64, 0.0) + a;
        let inv = b.inv();
        let mut t = b.powi(1 - ki) / (k as f64 - 1.0) + inv.powi(ki) * 0.5;
        // Σ_j B_2j/(2j)! · k(k+1)…(k+2j−2) · b^{-k-2j+1}
        let mut rising = k as f64;
        let mut fact = 2.0;
        let mut pow = inv.powi(ki + 1);
        for (j, bern) in BERNOULLI_EVEN.iter().take(6).enumerate() {
            let jj = (j + 1) as f64;
            if j > 0 {
                rising *= (k as f64 + 2.0 * jj - 3.0) * (k as f64 + 2.0 * jj - 2.0);
                fact *= (2.0 * jj - 1.0) * (2.0 * jj);
                pow *= inv * inv;
            }
            t += pow * (bern / fact * rising);
        }
        t
    };
    acc.add(tail);
    for l in (0..n).rev() {
        acc.add((Complex64::new(l as f64, 0.0) + a).powi(-ki));
    }
    Ok(acc.value())
}

/// `−1/a + Σ_{l≥1} a/(l(l+a))`, which equals `ψ(a) + γ₀`.
pub fn psi_series_sum(a: Complex64) -> Result<Complex64> {
    if a.norm() < 1e-12 {
        return Err(Error::domain("psi_series_sum is singular at a = 0"));
    }
    if !(a.re > 0.0) {
        return Err(Error::domain("psi_series_sum needs Re a > 0"));
    }
    Ok(digamma(a)? + EULER_GAMMA)
}

/// `|LHS − RHS|` of the identity
/// `(1/πλ) ∫₀^∞ f̂(−t/λ) log t dt = −∫₀^∞ ((f(λx)+f(−λx))/2 − f(0)e^{−x}) dx/x`.
pub fn lemma1_identity_residual(f: &TestFunction, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    let lhs = lemma1_fourier_side(f, lambda, spec)?;
    let rhs = lemma1_direct_side(f, lambda, spec)?;
    Ok((lhs - rhs).abs())
}

/// Left side of the identity in [`lemma1_identity_residual`].
pub fn lemma1_fourier_side(f: &TestFunction, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda must be positive"));
    }
    let c = lambda / f.width();
    let mut pts = vec![0.0, 1.0];
    for k in [0.25, 1.0, 4.0, 16.0] {
        pts.push(c * k);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let upper = match f.support_radius() {
        Some(_) => lambda * f.fourier_cutoff(1e-18),
        None => f64::INFINITY,
    };
    if upper.is_finite() {
        let n = ((upper * f.support_radius().unwrap_or(1.0) / lambda / PI).ceil() as usize).clamp(8, 20_000);
        pts.extend(crate::quad::panels(*pts.last().unwrap(), upper, n));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
    } else {
        pts.push(upper);
    }
    let spec = QuadratureSpec {
        max_subdivisions: spec.max_subdivisions.max(4 * pts.len()),
        ..*spec
    };
    let mut err = None;
    let total: f64 = integrate_value(
        |t: f64| match f.fourier(-t / lambda, &spec) {
            Ok(v) => v * t.ln(),
            Err(e) => {
                err.get_or_insert(e.to_string());
                0.0
            }
        },
        &pts,
        &spec,
    )?;
    if let Some(e) = err {
        return Err(Error::domain(e));
    }
    Ok(total / (PI * lambda))
}

/// Right side of the identity in [`lemma1_identity_residual`].
pub fn lemma1_direct_side(f: &TestFunction, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda must be positive"));
    }
    let f0 = f.value(0.0);
    let s = f.width() / lambda;
    let mut pts = vec![0.0, 1.0, 4.0, f64::INFINITY];
    for k in [0.25, 1.0, 4.0] {
        pts.push(s * k);
    }
    if let Some(r) = f.support_radius() {
        pts.push(r / lambda);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let v: f64 = integrate_value(
        |x: f64| {
            if x == 0.0 {
                return 0.0;
            }
            (0.5 * (f.value(lambda * x) + f.value(-lambda * x)) - f0 * (-x).exp()) / x
        },
        &pts,
        spec,
    )?;
    Ok(-v)
}
