//! Globally adaptive Gauss–Kronrod quadrature (21-point rule).
//!
//! Intervals are kept in a max-heap keyed by their error estimate and the
//! worst one is bisected until the summed estimate meets the tolerance.
//! Infinite endpoints are mapped onto `[0, 1)` with `x = a + t / (1 - t)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and limits for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cutoff: TailCutoff,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            tail_cutoff: TailCutoff::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        if !(self.tail_cutoff.threshold > 0.0 && self.tail_cutoff.threshold < 1.0) {
            return Err(Error::domain("tail threshold must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }
}

/// Maps the decay constants of an integrand onto a finite upper limit
/// beyond which the decaying factor is below `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCutoff {
    pub threshold: f64,
}

impl Default for TailCutoff {
    fn default() -> Self {
        Self { threshold: 1e-18 }
    }
}

impl TailCutoff {
    /// Distance `d` from the centre with `exp(-d^2 / (4 u)) <= threshold`.
    pub fn gaussian(&self, u: f64) -> f64 {
        (4.0 * u * (1.0 / self.threshold).ln()).sqrt()
    }

    /// Distance `d` with `exp(-rate * d) <= threshold`.
    pub fn exponential(&self, rate: f64) -> f64 {
        (1.0 / self.threshold).ln() / rate
    }
}

/// Values that can be integrated: real and complex scalars.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    /// True when some intervals stopped splitting because their error had
    /// reached the floating-point floor of the integrand.
    pub roundoff_limited: bool,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the abscissae XGK[1], XGK[3], .., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Clone, Copy)]
enum Map {
    Identity,
    /// `x = origin + t / (1 - t)` for `t` in `[0, 1)`.
    Upper(f64),
    /// `x = origin - t / (1 - t)` for `t` in `[0, 1)`.
    Lower(f64),
}

impl Map {
    #[inline]
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Identity => (t, 1.0),
            Map::Upper(o) => {
                let d = 1.0 - t;
                (o + t / d, 1.0 / (d * d))
            }
            Map::Lower(o) => {
                let d = 1.0 - t;
                (o - t / d, 1.0 / (d * d))
            }
        }
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    map: Map,
    value: T,
    error: f64,
    frozen: bool,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Frozen segments sink below every splittable one.
        match (self.frozen, other.frozen) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            _ => self.error.total_cmp(&other.error),
        }
    }
}

fn kronrod<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, map: Map, a: f64, b: f64) -> (T, f64, bool) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> T {
        let (x, jac) = map.apply(t);
        let y = f(x);
        if jac == 1.0 {
            y
        } else {
            y * jac
        }
    };
    let fc = eval(centre);
    let mut resk = fc * WGK[10];
    let mut resg = T::zero();
    let mut resabs = fc.magnitude() * WGK[10];
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(centre - dx);
        let f2 = eval(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let scale = half.abs();
    let value = resk * half;
    resabs *= scale;
    resasc *= scale;
    let mut err = ((resk - resg) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    let at_floor = err <= floor;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (value, err, at_floor)
}

/// Integrates `f` over consecutive pieces delimited by `points`, which must
/// be nondecreasing; the first and last entries may be infinite.
pub fn integrate<T, F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if points.len() < 2 {
        return Err(Error::domain("integration needs at least two points"));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut push = |heap: &mut BinaryHeap<Segment<T>>, map: Map, a: f64, b: f64, evals: &mut usize| {
        let (value, error, at_floor) = kronrod(&mut f, map, a, b);
        *evals += 21;
        heap.push(Segment {
            a,
            b,
            map,
            value,
            error,
            frozen: at_floor,
        });
    };
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo.is_nan() || hi.is_nan() || hi < lo {
            return Err(Error::domain("integration points must be ascending"));
        }
        if lo == hi {
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => push(&mut heap, Map::Identity, lo, hi, &mut evaluations),
            (true, false) => push(&mut heap, Map::Upper(lo), 0.0, 1.0, &mut evaluations),
            (false, true) => push(&mut heap, Map::Lower(hi), 0.0, 1.0, &mut evaluations),
            (false, false) => {
                push(&mut heap, Map::Lower(0.0), 0.0, 1.0, &mut evaluations);
                push(&mut heap, Map::Upper(0.0), 0.0, 1.0, &mut evaluations);
            }
        }
    }
    if heap.is_empty() {
        return Ok(QuadResult {
            value: T::zero(),
            error: 0.0,
            evaluations,
            roundoff_limited: false,
        });
    }

    let totals = |heap: &BinaryHeap<Segment<T>>| {
        let mut v = T::zero();
        let mut e = 0.0;
        for s in heap.iter() {
            v = v + s.value;
            e += s.error;
        }
        (v, e)
    };

    let mut splits = 0;
    loop {
        let (value, error) = totals(&heap);
        let tol = spec.abs_tol.max(spec.rel_tol * value.magnitude());
        let worst_frozen = heap.peek().map(|s| s.frozen).unwrap_or(true);
        if error <= tol || worst_frozen {
            let roundoff_limited = heap.iter().any(|s| s.frozen);
            if error <= tol || roundoff_limited {
                return Ok(QuadResult {
                    value,
                    error,
                    evaluations,
                    roundoff_limited,
                });
            }
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::Quadrature {
                achieved: error,
                requested: tol,
            });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(Segment { frozen: true, ..worst });
            continue;
        }
        push(&mut heap, worst.map, worst.a, mid, &mut evaluations);
        push(&mut heap, worst.map, mid, worst.b, &mut evaluations);
        splits += 1;
    }
}

/// Convenience wrapper returning only the value.
pub fn integrate_value<T, F>(f: F, points: &[f64], spec: &QuadratureSpec) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate(f, points, spec).map(|r| r.value)
}

/// Breakpoints splitting `[a, b]` into `n` equal panels.
pub fn panels(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|k| {
            if k == n {
                b
            } else {
                a + (b - a) * (k as f64) / (n as f64)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(5) - 2.0 * x, &[0.0, 2.0], &QuadratureSpec::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_over_real_line() {
        let r: f64 = integrate_value(
            |x: f64| (-x * x).exp(),
            &[f64::NEG_INFINITY, f64::INFINITY],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r - PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn log_singularity_at_endpoint() {
        let r: f64 = integrate_value(|x: f64| x.ln(), &[0.0, 1.0], &QuadratureSpec::default()).unwrap();
        assert!((r + 1.0).abs() < 1e-10);
    }

    #[test]
    fn complex_oscillatory() {
        // integral of e^{ix} over [0, 2 pi] vanishes
        let r: Complex64 = integrate_value(
            |x: f64| Complex64::new(0.0, x).exp(),
            &[0.0, 2.0 * PI],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn reports_nonconvergence() {
        let spec = QuadratureSpec::default().with_max_subdivisions(3);
        let err = integrate(|x: f64| (50.0 * x).sin() / x.sqrt(), &[0.0, 10.0], &spec).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
