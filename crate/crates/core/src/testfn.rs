//! Test functions for the explicit formula and their transforms.
//!
//! Every bundled function is real, even and continuous, so
//! `f̂(t) = Φ(-it)` is real and one-sided limits coincide with values.

use std::f64::consts::{E, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_value, QuadratureSpec};

/// A test function from the bundled family, or a finite linear combination.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `e^{-x²/4w} / √(4πw)`, with `Φ(s) = e^{w s²}`.
    Gaussian { w: f64 },
    /// `e^{-a|x|}`, with `Φ(s) = 2a / (a² - s²)` for `|Re s| < a`.
    BiExponential { a: f64 },
    /// `exp(1 - 1/(1 - (x/r)²))` on `|x| < r`, zero outside; `f(0) = 1`.
    Bump { r: f64 },
    /// `Σ c_i f_i`; the empty combination is the zero function.
    Combination(Vec<(f64, TestFunction)>),
}

/// Grid constants observed while checking the regularity conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// Smallest `c` with `|f(x)| ≤ c e^{-(1/2+b)|x|}` on the grid.
    pub envelope_constant: f64,
    /// Largest observed `|f(a+x) - f(a)| / |x|^ε` on the grid.
    pub holder_observed: f64,
}

const GRID_HALF_WIDTH: f64 = 40.0;
const GRID_POINTS: usize = 4000;

impl TestFunction {
    pub fn gaussian(w: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::domain("gaussian width w must be positive"));
        }
        Ok(Self::Gaussian { w })
    }

    pub fn biexponential(a: f64) -> Result<Self> {
        if !(a > 0.5 && a.is_finite()) {
            return Err(Error::domain("biexp rate a must exceed 1/2"));
        }
        Ok(Self::BiExponential { a })
    }

    pub fn bump(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain("bump radius r must be positive"));
        }
        Ok(Self::Bump { r })
    }

    pub fn zero() -> Self {
        Self::Combination(Vec::new())
    }

    /// Parses `gaussian:w=0.05`, `biexp:a=1.2` or `bump:r=3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, params) = spec.split_once(':').unwrap_or((spec, ""));
        let param = |name: &str| -> Result<f64> {
            let raw = params.trim();
            let value = raw
                .strip_prefix(name)
                .and_then(|rest| rest.trim_start().strip_prefix('='))
                .unwrap_or(raw);
            value
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("test function {spec:?}: expected `{kind}:{name}=<number>`")))
        };
        match kind.trim() {
            "gaussian" => Self::gaussian(param("w")?),
            "biexp" => Self::biexponential(param("a")?),
            "bump" => Self::bump(param("r")?),
            "zero" => Ok(Self::zero()),
            other => Err(Error::domain(format!(
                "unknown test function {other:?} (expected gaussian, biexp or bump)"
            ))),
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self::Combination(vec![(c, self)])
    }

    pub fn plus(self, c: f64, other: Self) -> Self {
        Self::Combination(vec![(1.0, self), (c, other)])
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian { w } => (-x * x / (4.0 * w)).exp() / (4.0 * PI * w).sqrt(),
            Self::BiExponential { a } => (-a * x.abs()).exp(),
            Self::Bump { r } => bump_profile(x / r),
            Self::Combination(parts) => parts.iter().map(|(c, f)| c * f.value(x)).sum(),
        }
    }

    /// `(f(x⁻), f(x⁺))`.
    pub fn one_sided(&self, x: f64) -> (f64, f64) {
        let v = self.value(x);
        (v, v)
    }

    fn derivative(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian { w } => -x / (2.0 * w) * self.value(x),
            Self::BiExponential { a } => -a * x.signum() * self.value(x),
            Self::Bump { r } => {
                let y = x / r;
                if y.abs() >= 1.0 {
                    0.0
                } else {
                    let d = 1.0 - y * y;
                    bump_profile(y) * (-2.0 * y / (d * d)) / r
                }
            }
            Self::Combination(parts) => parts.iter().map(|(c, f)| c * f.derivative(x)).sum(),
        }
    }

    pub fn has_closed_transform(&self) -> bool {
        match self {
            Self::Gaussian { .. } | Self::BiExponential { .. } => true,
            Self::Bump { .. } => false,
            Self::Combination(parts) => parts.iter().all(|(_, f)| f.has_closed_transform()),
        }
    }

    /// Half-width of the support, when compact.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            Self::Bump { r } => Some(*r),
            Self::Gaussian { .. } | Self::BiExponential { .. } => None,
            Self::Combination(parts) => parts
                .iter()
                .map(|(_, f)| f.support_radius())
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r))),
        }
    }

    /// Characteristic length scale of `f`.
    pub fn width(&self) -> f64 {
        match self {
            Self::Gaussian { w } => (2.0 * w).sqrt(),
            Self::BiExponential { a } => 1.0 / a,
            Self::Bump { r } => r / 3.0,
            Self::Combination(parts) => parts
                .iter()
                .map(|(_, f)| f.width())
                .fold(f64::INFINITY, f64::min)
                .min(1e300),
        }
    }

    /// Condition (b) constant: `|f(x)| ≪ e^{-(1/2+b)|x|}`.
    pub fn decay_b(&self) -> f64 {
        match self {
            Self::Gaussian { .. } | Self::Bump { .. } => 1.0,
            Self::BiExponential { a } => (a - 0.5) / 2.0,
            Self::Combination(parts) => parts.iter().map(|(_, f)| f.decay_b()).fold(1.0, f64::min),
        }
    }

    /// Hölder exponent ε of conditions (c) and (c′).
    pub fn holder_eps(&self) -> f64 {
        1.0
    }

    /// Hölder constant D: a bound for `sup |f'|`.
    pub fn holder_d(&self) -> f64 {
        match self {
            Self::Gaussian { w } => (-0.5f64).exp() / ((2.0 * w).sqrt() * (4.0 * PI * w).sqrt()),
            Self::BiExponential { a } => *a,
            Self::Bump { r } => {
                let mut m = 0.0f64;
                for i in 0..=4000 {
                    let x = r * i as f64 / 4000.0;
                    m = m.max(self.derivative(x).abs());
                }
                m * 1.01
            }
            Self::Combination(parts) => parts.iter().map(|(c, f)| c.abs() * f.holder_d()).sum(),
        }
    }

    /// Upper bound for `|f̂(t)|`.
    pub fn fourier_envelope(&self, t: f64) -> f64 {
        let t = t.abs();
        match self {
            Self::Gaussian { w } => (-w * t * t).exp(),
            Self::BiExponential { a } => 2.0 * a / (a * a + t * t),
            Self::Bump { r } => 2.0 * r * E * (-(r * t).sqrt()).exp(),
            Self::Combination(parts) => parts.iter().map(|(c, f)| c.abs() * f.fourier_envelope(t)).sum(),
        }
    }

    /// A `t` beyond which `fourier_envelope(t) ≤ eps`.
    pub fn fourier_cutoff(&self, eps: f64) -> f64 {
        let l = (1.0 / eps).ln();
        match self {
            Self::Gaussian { w } => (l / w).sqrt(),
            Self::BiExponential { a } => (2.0 * a / eps).sqrt(),
            Self::Bump { r } => {
                let k = (2.0 * r * E / eps).ln().max(0.0);
                k * k / r
            }
            Self::Combination(parts) => {
                let total: f64 = parts.iter().map(|(c, _)| c.abs()).sum::<f64>().max(1e-300);
                parts
                    .iter()
                    .map(|(_, f)| f.fourier_cutoff(eps / total))
                    .fold(0.0, f64::max)
            }
        }
    }

    /// `Φ(s) = ∫ f(x) e^{xs} dx`.
    pub fn transform(&self, s: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
        match self {
            Self::Gaussian { w } => Ok((s * s * *w).exp()),
            Self::BiExponential { a } => {
                if s.re.abs() >= *a {
                    return Err(Error::domain(format!(
                        "biexp transform diverges at Re s = {} (a = {a})",
                        s.re
                    )));
                }
                Ok(Complex64::new(2.0 * a, 0.0) / (a * a - s * s))
            }
            Self::Bump { r } => {
                // Even integrand: Φ(s) = 2 ∫_0^r f(x) cosh(xs) dx.
                let r = *r;
                let points = oscillation_panels(r, s.im.abs());
                let v = integrate_value(|x: f64| (s * x).cosh() * bump_profile(x / r), &points, spec)?;
                Ok(v * 2.0)
            }
            Self::Combination(parts) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, f) in parts {
                    acc += f.transform(s, spec)? * *c;
                }
                Ok(acc)
            }
        }
    }

    /// `f̂(t) = ∫ f(x) e^{-itx} dx`.
    pub fn fourier(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            Self::Gaussian { w } => Ok((-w * t * t).exp()),
            Self::BiExponential { a } => Ok(2.0 * a / (a * a + t * t)),
            Self::Bump { r } => {
                let r = *r;
                let points = oscillation_panels(r, t.abs());
                Ok(2.0 * integrate_value(|x: f64| (t * x).cos() * bump_profile(x / r), &points, spec)?)
            }
            Self::Combination(parts) => {
                let mut acc = 0.0;
                for (c, f) in parts {
                    acc += c * f.fourier(t, spec)?;
                }
                Ok(acc)
            }
        }
    }

    /// `d f̂ / dt`.
    pub fn fourier_derivative(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            Self::Gaussian { w } => Ok(-2.0 * w * t * (-w * t * t).exp()),
            Self::BiExponential { a } => {
                let d = a * a + t * t;
                Ok(-4.0 * a * t / (d * d))
            }
            Self::Bump { r } => {
                let r = *r;
                let points = oscillation_panels(r, t.abs());
                Ok(-2.0 * integrate_value(|x: f64| x * (t * x).sin() * bump_profile(x / r), &points, spec)?)
            }
            Self::Combination(parts) => {
                let mut acc = 0.0;
                for (c, f) in parts {
                    acc += c * f.fourier_derivative(t, spec)?;
                }
                Ok(acc)
            }
        }
    }

    /// Checks conditions (a), (b), (c), (c′) and (d) on a finite grid.
    pub fn check_conditions(&self) -> Result<ConditionReport> {
        let n = GRID_POINTS;
        let h = 2.0 * GRID_HALF_WIDTH / n as f64;
        let grid: Vec<f64> = (0..=n).map(|i| -GRID_HALF_WIDTH + i as f64 * h).collect();
        let d = self.holder_d();
        let eps = self.holder_eps();

        // (a) normalization at every grid point.
        let delta = 1e-9;
        for &x in &grid {
            let mid = 0.5 * (self.value(x + delta) + self.value(x - delta));
            if (self.value(x) - mid).abs() > 2.0 * d * delta + 1e-15 {
                return Err(Error::Condition {
                    condition: "a",
                    detail: format!("f({x}) differs from the mean of its one-sided limits"),
                });
            }
        }

        // (b) the weighted envelope must not grow towards the grid edge.
        let rate = 0.5 + self.decay_b();
        let weighted: Vec<f64> = grid
            .iter()
            .map(|&x| self.value(x).abs() * (rate * x.abs()).exp())
            .collect();
        if weighted.iter().any(|w| !w.is_finite()) {
            return Err(Error::Condition {
                condition: "b",
                detail: "weighted envelope is not finite on the grid".into(),
            });
        }
        let inner = 0.75 * GRID_HALF_WIDTH;
        let (mut inner_max, mut outer_max) = (0.0f64, 0.0f64);
        for (&x, &w) in grid.iter().zip(&weighted) {
            if x.abs() <= inner {
                inner_max = inner_max.max(w);
            } else {
                outer_max = outer_max.max(w);
            }
        }
        if outer_max > inner_max * (1.0 + 1e-9) + 1e-300 {
            return Err(Error::Condition {
                condition: "b",
                detail: format!(
                    "|f(x)| e^{{{rate}|x|}} grows towards |x| = {GRID_HALF_WIDTH} ({outer_max:e} > {inner_max:e})"
                ),
            });
        }

        // (c) at the origin and (c′) uniformly, with the declared D and ε.
        let mut holder = 0.0f64;
        let f0 = self.value(0.0);
        for &x in &grid {
            if x != 0.0 {
                holder = holder.max((self.value(x) - f0).abs() / x.abs().powf(eps));
            }
        }
        if holder > d * (1.0 + 1e-9) + 1e-15 {
            return Err(Error::Condition {
                condition: "c",
                detail: format!("|f(x) - f(0)| / |x|^{eps} reaches {holder:e} > D = {d:e}"),
            });
        }
        for steps in [1usize, 7, 50] {
            for i in 0..grid.len().saturating_sub(steps) {
                let (a, b) = (grid[i], grid[i + steps]);
                let ratio = (self.value(b) - self.value(a)).abs() / (b - a).powf(eps);
                holder = holder.max(ratio);
            }
        }
        if holder > d * (1.0 + 1e-9) + 1e-15 {
            return Err(Error::Condition {
                condition: "c'",
                detail: format!("uniform Hölder quotient reaches {holder:e} > D = {d:e}"),
            });
        }

        // (d) |f̂(t)| log|t| integrable: envelope · t^{3/2} eventually decreasing.
        let probe = |t: f64| self.fourier_envelope(t) * t.powf(1.5);
        let (t1, t2) = (1e4, 1e6);
        if !(probe(t2) <= probe(t1) * (1.0 + 1e-12)) {
            return Err(Error::Condition {
                condition: "d",
                detail: "Fourier transform does not decay fast enough for log-integrability".into(),
            });
        }

        let envelope_constant = weighted.iter().cloned().fold(0.0, f64::max);
        Ok(ConditionReport {
            envelope_constant,
            holder_observed: holder,
        })
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian { w } => write!(f, "gaussian:w={w}"),
            Self::BiExponential { a } => write!(f, "biexp:a={a}"),
            Self::Bump { r } => write!(f, "bump:r={r}"),
            Self::Combination(parts) if parts.is_empty() => write!(f, "zero"),
            Self::Combination(parts) => {
                for (i, (c, g)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*({g})")?;
                }
                Ok(())
            }
        }
    }
}

fn bump_profile(y: f64) -> f64 {
    let d = 1.0 - y * y;
    if d <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / d).exp()
    }
}

/// Breakpoints on `[0, r]` at a quarter of the oscillation period.
fn oscillation_panels(r: f64, freq: f64) -> Vec<f64> {
    let n = ((freq * r / (0.5 * PI)).ceil() as usize).clamp(4, 20_000);
    crate::quad::panels(0.0, r, n)
}
