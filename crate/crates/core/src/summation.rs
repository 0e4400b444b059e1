//! Compensated summation and deterministic chunked reductions.

use num_complex::Complex64;
use rayon::prelude::*;

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan it stays exact when an addend is larger in magnitude
/// than the running sum, which happens when a zero sum starts with its
/// dominant low-lying terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Componentwise compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexNeumaier {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexNeumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn sum_f64<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Neumaier>().value()
}

pub fn sum_complex<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    iter.into_iter().collect::<ComplexNeumaier>().value()
}

/// How a reduction over a long slice is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumOrder {
    /// One compensated pass in index order.
    Sequential,
    /// Fixed-size chunks summed in parallel, partial sums combined in chunk
    /// order. The chunk boundaries do not depend on the thread count, so the
    /// result is reproducible, but it may differ in the last bits from
    /// `Sequential`.
    #[default]
    Chunked,
}

const CHUNK: usize = 1024;

/// Compensated sum of `term(x)` over `items` in ascending index order.
pub fn reduce_complex<T, F>(items: &[T], order: SumOrder, term: F) -> Complex64
where
    T: Sync,
    F: Fn(&T) -> Complex64 + Sync,
{
    match order {
        SumOrder::Sequential => items.iter().map(&term).collect::<ComplexNeumaier>().value(),
        SumOrder::Chunked => {
            let partials: Vec<Complex64> = items
                .par_chunks(CHUNK)
                .map(|chunk| chunk.iter().map(&term).collect::<ComplexNeumaier>().value())
                .collect();
            sum_complex(partials)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_small_addends() {
        let mut acc = Neumaier::new();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn chunked_matches_sequential() {
        let xs: Vec<f64> = (1..10_000).map(|k| 1.0 / k as f64).collect();
        let f = |x: &f64| Complex64::new(*x, -x * x);
        let a = reduce_complex(&xs, SumOrder::Sequential, f);
        let b = reduce_complex(&xs, SumOrder::Chunked, f);
        assert!((a - b).norm() < 1e-14);
        let c = reduce_complex(&xs, SumOrder::Chunked, f);
        assert_eq!(b, c);
    }
}
