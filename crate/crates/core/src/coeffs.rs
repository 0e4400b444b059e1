//! Dirichlet coefficients and the generalized von Mangoldt function.

use std::path::Path;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_value, QuadratureSpec};
use crate::summation::{ComplexNeumaier, Neumaier};

pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// Sieve of Eratosthenes up to a fixed limit.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    composite: Vec<bool>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        composite[0] = true;
        if n >= 1 {
            composite[1] = true;
        }
        let mut p = 2usize;
        while p * p <= n {
            if !composite[p] {
                let mut m = p * p;
                while m <= n {
                    composite[m] = true;
                    m += p;
                }
            }
            p += 1;
        }
        Self { limit, composite }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && !self.composite[n as usize]
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(move |&n| !self.composite[n as usize])
    }

    /// All prime powers `p^k <= limit` with `log p`, in ascending order.
    pub fn prime_powers(&self) -> Vec<(u64, f64)> {
        let mut out = Vec::new();
        for p in self.primes() {
            let lp = (p as f64).ln();
            let mut q = p;
            loop {
                out.push((q, lp));
                match q.checked_mul(p) {
                    Some(next) if next <= self.limit => q = next,
                    _ => break,
                }
            }
        }
        out.sort_unstable_by_key(|&(n, _)| n);
        out
    }
}

/// Λ(n): `log p` when `n = p^k`, zero otherwise.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("von Mangoldt function is undefined at 0"));
    }
    Ok(match prime_power_base(n) {
        Some(p) => (p as f64).ln(),
        None => 0.0,
    })
}

fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 0;
    if n.is_multiple_of(2) {
        p = 2;
    } else {
        let mut d = 3u64;
        while d.saturating_mul(d) <= n {
            if n.is_multiple_of(d) {
                p = d;
                break;
            }
            d += 2;
        }
        if p == 0 {
            return Some(n);
        }
    }
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A Dirichlet character given by its table of values modulo `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    modulus: u64,
    values: Vec<Complex64>,
}

impl Character {
    /// Builds a character from `(residue, value)` pairs; unlisted residues
    /// map to zero. The table is validated for complete multiplicativity.
    pub fn from_pairs(modulus: u64, pairs: &[(u64, Complex64)]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Character("modulus must be positive".into()));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); modulus as usize];
        for &(r, v) in pairs {
            if r >= modulus {
                return Err(Error::Character(format!("residue {r} is not reduced mod {modulus}")));
            }
            values[r as usize] = v;
        }
        let chi = Self { modulus, values };
        chi.validate()?;
        Ok(chi)
    }

    /// Reads a `residue, re, im` table.
    pub fn from_file(modulus: u64, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |reason: String| Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                reason,
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(parse_err(format!("expected `residue, re, im`, found {line:?}")));
            }
            let r: u64 = fields[0]
                .parse()
                .map_err(|_| parse_err(format!("bad residue {:?}", fields[0])))?;
            let re: f64 = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("bad real part {:?}", fields[1])))?;
            let im: f64 = fields[2]
                .parse()
                .map_err(|_| parse_err(format!("bad imaginary part {:?}", fields[2])))?;
            pairs.push((r, Complex64::new(re, im)));
        }
        Self::from_pairs(modulus, &pairs)
    }

    fn validate(&self) -> Result<()> {
        let q = self.modulus;
        const TOL: f64 = 1e-10;
        if q > 1 && (self.values[1] - 1.0).norm() > TOL {
            return Err(Error::Character("chi(1) must equal 1".into()));
        }
        for r in 0..q {
            let v = self.values[r as usize];
            if gcd(r, q) == 1 {
                if (v.norm() - 1.0).abs() > TOL {
                    return Err(Error::Character(format!("|chi({r})| must be 1 on units")));
                }
            } else if v.norm() != 0.0 {
                return Err(Error::Character(format!("chi({r}) must vanish on non-units")));
            }
        }
        for a in 1..q {
            for b in a..q {
                let lhs = self.values[((a * b) % q) as usize];
                let rhs = self.values[a as usize] * self.values[b as usize];
                if (lhs - rhs).norm() > TOL {
                    return Err(Error::Character(format!(
                        "not completely multiplicative: chi({a}*{b}) != chi({a})chi({b})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn is_principal(&self) -> bool {
        (1..self.modulus)
            .filter(|&r| gcd(r, self.modulus) == 1)
            .all(|r| (self.values[r as usize] - 1.0).norm() < 1e-12)
    }

    /// True when every value is real, so the L-function is self-dual.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// `chi(-1)`: `+1` for even characters, `-1` for odd ones.
    pub fn parity(&self) -> f64 {
        self.value(self.modulus - 1).re
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffKind {
    Zeta,
    Dirichlet { index: u32, character: Character },
}

/// Supplies Λ_F(n) for a concrete L-function.
#[derive(Debug, Clone)]
pub struct CoeffProvider {
    kind: CoeffKind,
    sieve_limit: u64,
    table: Arc<OnceLock<Vec<(u64, Complex64)>>>,
}

impl CoeffProvider {
    pub fn zeta() -> Self {
        Self::new(CoeffKind::Zeta)
    }

    pub fn dirichlet(index: u32, character: Character) -> Self {
        Self::new(CoeffKind::Dirichlet { index, character })
    }

    fn new(kind: CoeffKind) -> Self {
        Self {
            kind,
            sieve_limit: DEFAULT_SIEVE_LIMIT,
            table: Arc::new(OnceLock::new()),
        }
    }

    pub fn with_sieve_limit(mut self, limit: u64) -> Self {
        self.sieve_limit = limit.max(2);
        self.table = Arc::new(OnceLock::new());
        self
    }

    pub fn kind(&self) -> &CoeffKind {
        &self.kind
    }

    pub fn sieve_limit(&self) -> u64 {
        self.sieve_limit
    }

    /// Key used in descriptor files: `zeta` or `dirichlet:<q>:<index>`.
    pub fn key(&self) -> String {
        match &self.kind {
            CoeffKind::Zeta => "zeta".into(),
            CoeffKind::Dirichlet { index, character } => {
                format!("dirichlet:{}:{}", character.modulus(), index)
            }
        }
    }

    /// Order of the pole at `s = 1` implied by the coefficients.
    pub fn pole_order(&self) -> u32 {
        match &self.kind {
            CoeffKind::Zeta => 1,
            CoeffKind::Dirichlet { character, .. } => u32::from(character.is_principal()),
        }
    }

    pub fn is_self_dual(&self) -> bool {
        match &self.kind {
            CoeffKind::Zeta => true,
            CoeffKind::Dirichlet { character, .. } => character.is_real(),
        }
    }

    fn twist(&self, n: u64) -> Complex64 {
        match &self.kind {
            CoeffKind::Zeta => Complex64::new(1.0, 0.0),
            CoeffKind::Dirichlet { character, .. } => character.value(n),
        }
    }

    /// Λ_F(n).
    pub fn lambda_f(&self, n: u64) -> Result<Complex64> {
        let lam = von_mangoldt(n)?;
        if lam == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.twist(n) * lam)
    }

    /// Nonzero Λ_F(n) for all prime powers up to the sieve limit, ascending.
    /// Built once per provider and shared by clones.
    pub fn prime_power_table(&self) -> &[(u64, Complex64)] {
        self.table.get_or_init(|| {
            PrimeSieve::new(self.sieve_limit)
                .prime_powers()
                .into_iter()
                .map(|(n, lp)| (n, self.twist(n) * lp))
                .filter(|(_, v)| v.norm() != 0.0)
                .collect()
        })
    }

    /// Prime powers `n <= n_max` with their Λ_F values.
    pub fn prime_powers_up_to(&self, n_max: u64) -> Result<&[(u64, Complex64)]> {
        if n_max > self.sieve_limit {
            return Err(Error::domain(format!(
                "n_max = {n_max} exceeds the sieve limit {}",
                self.sieve_limit
            )));
        }
        let table = self.prime_power_table();
        let end = table.partition_point(|&(n, _)| n <= n_max);
        Ok(&table[..end])
    }
}

/// Chebyshev's ψ(x) = Σ_{n ≤ x} Λ(n).
pub fn chebyshev_psi(provider: &CoeffProvider, x: f64) -> Result<f64> {
    let table = provider.prime_powers_up_to(x.floor().max(1.0) as u64)?;
    Ok(table.iter().map(|&(_, v)| v.re).collect::<Neumaier>().value())
}

/// Σ_{k ≤ X} Λ_F(k)/k (log k)^{l−1} − m_F (log X)^l / l at a sharp cutoff.
pub fn prime_sum_limit(provider: &CoeffProvider, l: u32, x: f64) -> Result<Complex64> {
    if l == 0 {
        return Err(Error::domain("prime_sum_limit needs l >= 1"));
    }
    if !(x >= 2.0) {
        return Err(Error::domain("prime_sum_limit needs X >= 2"));
    }
    let table = provider.prime_powers_up_to(x.floor() as u64)?;
    let mut acc = ComplexNeumaier::new();
    for &(k, lam) in table {
        let lk = (k as f64).ln();
        acc.add(lam / k as f64 * lk.powi(l as i32 - 1));
    }
    let lx = x.ln();
    let m_f = provider.pole_order() as f64;
    Ok(acc.value() - m_f * lx.powi(l as i32) / l as f64)
}

/// Smoothed approximants of the limits in `prime_sum_limit` for every
/// `l = 1..=l_max`, averaging the cutoff `log X` against a smooth bump
/// supported on `[log x_lo, log x_hi]`.
///
/// Averaging turns the sharp cutoff into a smooth weight on each prime
/// power, which suppresses the oscillating remainder by many orders of
/// magnitude compared with a single sharp truncation.
pub fn prime_sum_limits_smoothed(provider: &CoeffProvider, l_max: u32, x_lo: f64, x_hi: f64) -> Result<Vec<Complex64>> {
    if l_max == 0 {
        return Err(Error::domain("l_max must be at least 1"));
    }
    if !(x_lo >= 2.0 && x_hi > x_lo) {
        return Err(Error::domain("smoothing window must satisfy 2 <= x_lo < x_hi"));
    }
    let window = BumpWindow::new(x_lo.ln(), x_hi.ln())?;
    let table = provider.prime_powers_up_to(x_hi.floor() as u64)?;
    let l_max = l_max as usize;
    let mut acc = vec![ComplexNeumaier::new(); l_max];
    for &(k, lam) in table {
        let lk = (k as f64).ln();
        let w = window.survival(lk);
        if w == 0.0 {
            continue;
        }
        let mut term = lam / k as f64 * w;
        for slot in acc.iter_mut() {
            slot.add(term);
            term *= lk;
        }
    }
    let m_f = provider.pole_order() as f64;
    let spec = QuadratureSpec {
        rel_tol: 1e-14,
        abs_tol: 1e-300,
        ..QuadratureSpec::default()
    };
    let mut out = Vec::with_capacity(l_max);
    for (i, slot) in acc.iter().enumerate() {
        let l = (i + 1) as i32;
        let moment = if m_f == 0.0 {
            0.0
        } else {
            window.expectation(|y| y.powi(l) / l as f64, &spec)?
        };
        out.push(slot.value() - m_f * moment);
    }
    Ok(out)
}

/// Bump density `exp(-1/(t(1-t)))` on `[y0, y1]` with its survival function
/// tabulated for fast evaluation.
struct BumpWindow {
    y0: f64,
    y1: f64,
    norm: f64,
    nodes: Vec<f64>,
}

const BUMP_NODES: usize = 4096;

fn bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (-1.0 / (t * (1.0 - t))).exp()
    }
}

impl BumpWindow {
    fn new(y0: f64, y1: f64) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            ..QuadratureSpec::default()
        };
        let h = 1.0 / BUMP_NODES as f64;
        let mut nodes = Vec::with_capacity(BUMP_NODES + 1);
        let mut cumulative = Neumaier::new();
        nodes.push(0.0);
        for i in 0..BUMP_NODES {
            let a = i as f64 * h;
            let b = if i + 1 == BUMP_NODES { 1.0 } else { a + h };
            cumulative.add(integrate_value(bump, &[a, b], &spec)?);
            nodes.push(cumulative.value());
        }
        let norm = cumulative.value();
        Ok(Self { y0, y1, norm, nodes })
    }

    /// Probability that the averaged cutoff exceeds `y`.
    fn survival(&self, y: f64) -> f64 {
        let t = (y - self.y0) / (self.y1 - self.y0);
        if t <= 0.0 {
            return 1.0;
        }
        if t >= 1.0 {
            return 0.0;
        }
        let h = 1.0 / BUMP_NODES as f64;
        let i = ((t / h) as usize).min(BUMP_NODES - 1);
        let a = i as f64 * h;
        let s = (t - a) / h;
        let (c0, c1) = (self.nodes[i], self.nodes[i + 1]);
        let (d0, d1) = (bump(a) * h, bump(a + h) * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let cdf =
            (2.0 * s3 - 3.0 * s2 + 1.0) * c0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * c1 + (s3 - s2) * d1;
        1.0 - cdf / self.norm
    }

    fn expectation<F: Fn(f64) -> f64>(&self, g: F, spec: &QuadratureSpec) -> Result<f64> {
        let span = self.y1 - self.y0;
        let total = integrate_value(|t: f64| bump(t) * g(self.y0 + span * t), &[0.0, 0.5, 1.0], spec)?;
        Ok(total / self.norm)
    }
}
