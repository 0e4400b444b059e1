//! Tables of nontrivial-zero ordinates and the empirical counting function.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::descriptor::SelbergDescriptor;
use crate::error::{Error, Result};

/// Ascending positive ordinates `γ_n`, optionally with real parts `β_n`.
///
/// Without explicit real parts every zero lies on the critical line. An
/// entry `β + iγ` with `β ≠ 1/2` stands for the four zeros
/// `β ± iγ, 1 − β ± iγ` forced by the functional equation of a self-dual
/// function; entries on the line stand for the pair `1/2 ± iγ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    betas: Option<Vec<f64>>,
    source: String,
}

/// One point of the counting-function deviation profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountSnapshot {
    #[serde(rename = "T")]
    pub t: f64,
    pub empirical: usize,
    pub main_term: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationProfile {
    pub snapshots: Vec<CountSnapshot>,
    /// `max |deviation| / log T` over the grid (0 for an empty grid).
    pub max_ratio: f64,
}

/// The zeros represented by one table entry.
#[derive(Debug, Clone, Copy)]
pub struct Orbit {
    zeros: [Complex64; 4],
    len: usize,
}

impl Orbit {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.zeros[..self.len]
    }
}

impl ZeroTable {
    pub fn new(ordinates: Vec<f64>, betas: Option<Vec<f64>>, source: impl Into<String>) -> Result<Self> {
        let source = source.into();
        let mut prev = 0.0;
        for (i, &g) in ordinates.iter().enumerate() {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::Parse {
                    path: source.clone(),
                    line: i + 1,
                    reason: format!("ordinate {g} is not positive"),
                });
            }
            if i > 0 && g <= prev {
                return Err(Error::Monotonicity {
                    path: source.clone(),
                    line: i + 1,
                    value: g,
                    previous: prev,
                });
            }
            prev = g;
        }
        if let Some(b) = &betas {
            if b.len() != ordinates.len() {
                return Err(Error::domain("betas and ordinates differ in length"));
            }
            if let Some(i) = b.iter().position(|&x| !(x > 0.0 && x < 1.0)) {
                return Err(Error::Parse {
                    path: source,
                    line: i + 1,
                    reason: format!("real part {} is outside (0, 1)", b[i]),
                });
            }
        }
        Ok(Self {
            ordinates,
            betas,
            source,
        })
    }

    /// Table of zeros on the critical line.
    pub fn on_line(ordinates: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        Self::new(ordinates, None, source)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses one ordinate per line, or `beta gamma` pairs; `#` starts a
    /// comment line.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut ordinates = Vec::new();
        let mut betas = Vec::new();
        let mut columns = None;
        let mut lines = Vec::new();
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
            let fields: Vec<&str> = line.split_whitespace().collect();
            match columns {
                None => columns = Some(fields.len()),
                Some(c) if c != fields.len() => {
                    return Err(err(format!("expected {c} column(s), found {}", fields.len())));
                }
                _ => {}
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| err(format!("invalid number {s:?}")));
            match fields.len() {
                1 => ordinates.push(num(fields[0])?),
                2 => {
                    betas.push(num(fields[0])?);
                    ordinates.push(num(fields[1])?);
                }
                n => return Err(err(format!("expected 1 or 2 columns, found {n}"))),
            }
            lines.push(line_no);
        }
        let betas = (columns == Some(2)).then_some(betas);
        Self::new(ordinates, betas, origin).map_err(|e| match e {
            Error::Monotonicity {
                path,
                line,
                value,
                previous,
            } => Error::Monotonicity {
                path,
                line: lines[line - 1],
                value,
                previous,
            },
            Error::Parse { path, line, reason } if line >= 1 && line <= lines.len() => Error::Parse {
                path,
                line: lines[line - 1],
                reason,
            },
            other => other,
        })
    }

    /// Writes the table in the format accepted by [`ZeroTable::parse`];
    /// every value round-trips exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.source.replace('\n', " "));
        for (i, g) in self.ordinates.iter().enumerate() {
            match &self.betas {
                Some(b) => {
                    let _ = writeln!(out, "{:?} {:?}", b[i], g);
                }
                None => {
                    let _ = writeln!(out, "{g:?}");
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn betas(&self) -> Option<&[f64]> {
        self.betas.as_deref()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn max_ordinate(&self) -> f64 {
        self.ordinates.last().copied().unwrap_or(0.0)
    }

    /// True when every zero lies on the critical line.
    pub fn on_critical_line(&self) -> bool {
        self.betas.as_ref().is_none_or(|b| b.iter().all(|&x| x == 0.5))
    }

    pub fn beta(&self, i: usize) -> f64 {
        self.betas.as_ref().map_or(0.5, |b| b[i])
    }

    pub fn check_coverage(&self, t: f64) -> Result<()> {
        if t > self.max_ordinate() {
            return Err(Error::Coverage {
                requested: t,
                available: self.max_ordinate(),
            });
        }
        Ok(())
    }

    /// Number of entries with `γ ≤ T`.
    pub fn entries_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// The zeros `ρ` represented by entry `i`.
    pub fn orbit(&self, i: usize) -> Orbit {
        let g = self.ordinates[i];
        let b = self.beta(i);
        let z = Complex64::new;
        if b == 0.5 {
            Orbit {
                zeros: [z(b, g), z(b, -g), z(0.0, 0.0), z(0.0, 0.0)],
                len: 2,
            }
        } else {
            Orbit {
                zeros: [z(b, g), z(b, -g), z(1.0 - b, g), z(1.0 - b, -g)],
                len: 4,
            }
        }
    }

    /// Number of zeros with `0 < γ ≤ T`, counted with the orbit structure.
    pub fn empirical_count(&self, t: f64) -> Result<usize> {
        self.check_coverage(t)?;
        let k = self.entries_up_to(t);
        Ok(match &self.betas {
            None => k,
            Some(b) => b[..k].iter().map(|&x| if x == 0.5 { 1 } else { 2 }).sum(),
        })
    }

    pub fn deviation_profile(&self, desc: &SelbergDescriptor, grid: &[f64]) -> Result<DeviationProfile> {
        let mut snapshots = Vec::with_capacity(grid.len());
        let mut max_ratio = 0.0f64;
        for &t in grid {
            let empirical = self.empirical_count(t)?;
            let main_term = desc.counting_main_term(t)?;
            let deviation = empirical as f64 - main_term;
            if t > 1.0 {
                max_ratio = max_ratio.max(deviation.abs() / t.ln());
            }
            snapshots.push(CountSnapshot {
                t,
                empirical,
                main_term,
                deviation,
            });
        }
        Ok(DeviationProfile { snapshots, max_ratio })
    }

    /// Returns a copy with one more entry `β + iγ` inserted in order.
    pub fn with_zero(&self, beta: f64, gamma: f64) -> Result<Self> {
        let pos = self.ordinates.partition_point(|&g| g < gamma);
        let mut ordinates = self.ordinates.clone();
        let mut betas = self.betas.clone().unwrap_or_else(|| vec![0.5; ordinates.len()]);
        ordinates.insert(pos, gamma);
        betas.insert(pos, beta);
        Self::new(
            ordinates,
            Some(betas),
            format!("{} with zero {beta}+{gamma}i", self.source),
        )
    }
}

/// One line of a data manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub filename: String,
    pub sha256: String,
    pub citation: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Reads `filename, sha256, source-citation` lines.
pub fn parse_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (Some(f), Some(h), Some(c)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                reason: "expected `filename, sha256, source-citation`".into(),
            });
        };
        out.push(ManifestEntry {
            filename: f.trim().into(),
            sha256: h.trim().to_ascii_lowercase(),
            citation: c.trim().into(),
        });
    }
    Ok(out)
}

/// Checks every manifest entry against the file next to the manifest.
pub fn verify_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let entries = parse_manifest(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    for e in &entries {
        let file: PathBuf = dir.join(&e.filename);
        let bytes = std::fs::read(&file).map_err(|err| Error::io(&file, err))?;
        let found = sha256_hex(&bytes);
        if found != e.sha256 {
            return Err(Error::Checksum {
                path: file,
                expected: e.sha256.clone(),
                found,
            });
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_three_ordinates() {
        let t = ZeroTable::parse("14.134725\n21.022040\n25.010858\n", "mem").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.ordinates()[1], 21.022040);
        assert!(t.on_critical_line());
    }

    #[test]
    fn empty_file_is_valid() {
        let t = ZeroTable::parse("# nothing here\n\n", "mem").unwrap();
        assert!(t.is_empty());
        assert_eq!(t.max_ordinate(), 0.0);
    }

    #[test]
    fn descending_pair_names_line() {
        match ZeroTable::parse("# header\n21.0\n14.1\n", "mem") {
            Err(Error::Monotonicity { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match ZeroTable::parse("21.0\n14.1\n", "mem") {
            Err(Error::Monotonicity { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(
            ZeroTable::parse("-3.0\n", "mem"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ZeroTable::parse("1.0\nabc\n", "mem"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            ZeroTable::parse("0.5 1.0\n2.0\n", "mem"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            ZeroTable::parse("1.5 1.0\n", "mem"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn two_column_form_and_orbits() {
        let t = ZeroTable::parse("0.5 14.1\n0.9 20.0\n", "mem").unwrap();
        assert!(!t.on_critical_line());
        assert_eq!(t.orbit(0).as_slice().len(), 2);
        let o = t.orbit(1);
        assert_eq!(o.as_slice().len(), 4);
        assert!((o.as_slice()[2] - Complex64::new(0.1, 20.0)).norm() < 1e-15);
        assert_eq!(t.empirical_count(20.0).unwrap(), 3);
    }

    #[test]
    fn counting_and_coverage() {
        let t = ZeroTable::parse("14.134725\n21.022040\n25.010858\n", "mem").unwrap();
        assert_eq!(t.empirical_count(14.0).unwrap(), 0);
        assert_eq!(t.empirical_count(21.022040).unwrap(), 2);
        assert_eq!(t.empirical_count(t.max_ordinate()).unwrap(), 3);
        assert!(matches!(t.empirical_count(30.0), Err(Error::Coverage { .. })));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let ords: Vec<f64> = (1..200)
            .map(|k| (k as f64).sqrt() * 7.123_456_789_012_345 + 0.1)
            .collect();
        let t = ZeroTable::on_line(ords, "synthetic").unwrap();
        let back = ZeroTable::parse(&t.serialize(), "mem").unwrap();
        assert_eq!(back.ordinates(), t.ordinates());
    }

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
