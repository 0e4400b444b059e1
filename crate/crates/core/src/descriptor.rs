//! Functional-equation data of a Selberg-class function and its invariants.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::coeffs::{Character, CoeffProvider};
use crate::error::{Error, Result};

/// One factor Γ(λ s + μ) of the completed function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub lambda: f64,
    pub mu: Complex64,
}

impl GammaFactor {
    pub fn new(lambda: f64, mu: Complex64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("gamma factor needs lambda > 0, got {lambda}")));
        }
        if !(mu.re >= 0.0 && mu.is_finite()) {
            return Err(Error::domain(format!("gamma factor needs Re(mu) >= 0, got {mu}")));
        }
        Ok(Self { lambda, mu })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingConstants {
    pub c1: f64,
    pub degree: f64,
    pub conductor: f64,
}

/// Functional-equation data `Q^s ∏ Γ(λ_j s + μ_j) F(s)`, root number and
/// pole order, together with the coefficient provider.
#[derive(Debug, Clone)]
pub struct SelbergDescriptor {
    pub name: String,
    pub gamma_factors: Vec<GammaFactor>,
    pub q_scale: f64,
    pub root_number: Complex64,
    pub pole_order: u32,
    pub coeffs: CoeffProvider,
    /// Caller's assertion that F has a zero-free region to the left of
    /// `Re s = 1`; required by the arithmetic Li formula. Not verified.
    pub assume_zero_free_region: bool,
}

impl SelbergDescriptor {
    pub fn new(
        name: impl Into<String>,
        gamma_factors: Vec<GammaFactor>,
        q_scale: f64,
        root_number: Complex64,
        pole_order: u32,
        coeffs: CoeffProvider,
    ) -> Result<Self> {
        let desc = Self {
            name: name.into(),
            gamma_factors,
            q_scale,
            root_number,
            pole_order,
            coeffs,
            assume_zero_free_region: true,
        };
        desc.validate()?;
        Ok(desc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma_factors.is_empty() {
            return Err(Error::domain("descriptor needs at least one gamma factor"));
        }
        for g in &self.gamma_factors {
            GammaFactor::new(g.lambda, g.mu)?;
        }
        if !(self.q_scale > 0.0 && self.q_scale.is_finite()) {
            return Err(Error::domain("Q must be positive"));
        }
        if (self.root_number.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "root number must have unit modulus, got |omega| = {}",
                self.root_number.norm()
            )));
        }
        Ok(())
    }

    /// ζ(s) with `Q = π^{-1/2}` and one factor `(1/2, 0)`.
    pub fn zeta() -> Self {
        Self {
            name: "zeta".into(),
            gamma_factors: vec![GammaFactor {
                lambda: 0.5,
                mu: Complex64::new(0.0, 0.0),
            }],
            q_scale: PI.sqrt().recip(),
            root_number: Complex64::new(1.0, 0.0),
            pole_order: 1,
            coeffs: CoeffProvider::zeta(),
            assume_zero_free_region: true,
        }
    }

    /// L(s, χ) for a primitive character with `Q = (q/π)^{1/2}` and one
    /// factor `(1/2, a/2)`, `a` the parity of χ.
    pub fn dirichlet(index: u32, character: Character, root_number: Complex64) -> Result<Self> {
        let q = character.modulus();
        let a = if character.parity() < 0.0 { 1.0 } else { 0.0 };
        let pole_order = u32::from(character.is_principal());
        Self::new(
            format!("dirichlet:{q}:{index}"),
            vec![GammaFactor::new(0.5, Complex64::new(a / 2.0, 0.0))?],
            (q as f64 / PI).sqrt(),
            root_number,
            pole_order,
            CoeffProvider::dirichlet(index, character),
        )
    }

    /// d_F = 2 Σ λ_j.
    pub fn degree(&self) -> f64 {
        2.0 * self.gamma_factors.iter().map(|g| g.lambda).sum::<f64>()
    }

    /// log q_F = d_F log 2π + 2 log Q + Σ 2 λ_j log λ_j.
    pub fn log_conductor(&self) -> f64 {
        let mut acc = self.degree() * (2.0 * PI).ln() + 2.0 * self.q_scale.ln();
        for g in &self.gamma_factors {
            acc += 2.0 * g.lambda * g.lambda.ln();
        }
        acc
    }

    /// q_F = (2π)^{d_F} Q² ∏ λ_j^{2λ_j}.
    pub fn conductor(&self) -> f64 {
        self.log_conductor().exp()
    }

    /// log of ∏ λ_j^{2λ_j}.
    pub fn log_lambda_product(&self) -> f64 {
        self.gamma_factors.iter().map(|g| 2.0 * g.lambda * g.lambda.ln()).sum()
    }

    pub fn counting_constants(&self) -> CountingConstants {
        let degree = self.degree();
        let log_q = self.log_conductor();
        CountingConstants {
            c1: (log_q - degree * ((2.0 * PI).ln() + 1.0)) / (2.0 * PI),
            degree,
            conductor: log_q.exp(),
        }
    }

    /// (d_F/2π) T log T + c1 T.
    pub fn counting_main_term(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain("counting_main_term needs T > 0"));
        }
        let c = self.counting_constants();
        Ok(c.degree / (2.0 * PI) * t * t.ln() + c.c1 * t)
    }

    /// Derivative of the counting main term, the smooth zero density.
    pub fn counting_density(&self, t: f64) -> f64 {
        let c = self.counting_constants();
        c.degree / (2.0 * PI) * (t.ln() + 1.0) + c.c1
    }

    pub fn is_self_dual(&self) -> bool {
        self.coeffs.is_self_dual() && self.gamma_factors.iter().all(|g| g.mu.im == 0.0)
    }

    /// Parses the `key = value` descriptor format. Character tables named by
    /// `coeffs = dirichlet:<q>:<idx>` are looked up as `chi_<q>_<idx>.csv`
    /// next to the descriptor or in its `characters/` subdirectory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &path.display().to_string(), &base)
    }

    pub fn parse(text: &str, origin: &str, base_dir: &Path) -> Result<Self> {
        let mut name = None;
        let mut q = None;
        let mut omega_re = None;
        let mut omega_im = None;
        let mut m_f = None;
        let mut coeffs_key: Option<(String, usize)> = None;
        let mut gammas = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::Parse {
                path: origin.to_string(),
                line: line_no,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            let num = |v: &str| -> Result<f64> {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| err(format!("invalid number {v:?} for `{key}`")))
            };
            match key {
                "name" => name = Some(value.to_string()),
                "Q" => q = Some(num(value)?),
                "omega_re" => omega_re = Some(num(value)?),
                "omega_im" => omega_im = Some(num(value)?),
                "m_F" => {
                    m_f = Some(
                        value
                            .parse::<u32>()
                            .map_err(|_| err(format!("m_F must be a nonnegative integer, got {value:?}")))?,
                    )
                }
                "coeffs" => coeffs_key = Some((value.to_string(), line_no)),
                "gamma" => {
                    let parts: Vec<&str> = value.split(',').collect();
                    if parts.len() != 3 {
                        return Err(err(format!("gamma needs `lambda,mu_re,mu_im`, got {value:?}")));
                    }
                    let g = GammaFactor::new(num(parts[0])?, Complex64::new(num(parts[1])?, num(parts[2])?))
                        .map_err(|e| err(e.to_string()))?;
                    gammas.push(g);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| Error::Parse {
            path: origin.to_string(),
            line: 0,
            reason: format!("missing required key `{k}`"),
        };
        let (key, key_line) = coeffs_key.ok_or_else(|| missing("coeffs"))?;
        let coeffs = resolve_coeffs(&key, base_dir).map_err(|e| match e {
            Error::Domain(reason) => Error::Parse {
                path: origin.to_string(),
                line: key_line,
                reason,
            },
            other => other,
        })?;
        let desc = Self {
            name: name.unwrap_or_else(|| key.clone()),
            gamma_factors: gammas,
            q_scale: q.ok_or_else(|| missing("Q"))?,
            root_number: Complex64::new(omega_re.unwrap_or(1.0), omega_im.unwrap_or(0.0)),
            pole_order: m_f.ok_or_else(|| missing("m_F"))?,
            coeffs,
            assume_zero_free_region: true,
        };
        desc.validate()?;
        Ok(desc)
    }

    /// Inverse of [`SelbergDescriptor::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "name = {}\nQ = {}\nomega_re = {}\nomega_im = {}\nm_F = {}\ncoeffs = {}\n",
            self.name,
            self.q_scale,
            self.root_number.re,
            self.root_number.im,
            self.pole_order,
            self.coeffs.key()
        );
        for g in &self.gamma_factors {
            out.push_str(&format!("gamma = {},{},{}\n", g.lambda, g.mu.re, g.mu.im));
        }
        out
    }
}

fn resolve_coeffs(key: &str, base_dir: &Path) -> Result<CoeffProvider> {
    if key == "zeta" {
        return Ok(CoeffProvider::zeta());
    }
    let parts: Vec<&str> = key.split(':').collect();
    if parts.len() != 3 || parts[0] != "dirichlet" {
        return Err(Error::domain(format!(
            "coeffs must be `zeta` or `dirichlet:<q>:<index>`, got {key:?}"
        )));
    }
    let q: u64 = parts[1]
        .parse()
        .map_err(|_| Error::domain(format!("bad modulus in {key:?}")))?;
    let index: u32 = parts[2]
        .parse()
        .map_err(|_| Error::domain(format!("bad character index in {key:?}")))?;
    let file = format!("chi_{q}_{index}.csv");
    let candidates: [PathBuf; 2] = [base_dir.join(&file), base_dir.join("characters").join(&file)];
    let path = candidates
        .iter()
        .find(|p| p.is_file())
        .ok_or_else(|| Error::domain(format!("character table {file} not found near {}", base_dir.display())))?;
    let chi = Character::from_file(q, path)?;
    Ok(CoeffProvider::dirichlet(index, chi))
}
