//! Subcommand drivers.

use std::fmt;
use std::path::{Path, PathBuf};

use explicit_formula::descriptor::SelbergDescriptor;
use explicit_formula::li::{
    li_arithmetic, li_asymptotic, li_positivity_report, li_zero_sum, li_zero_sum_completed, LiCoefficient,
    PrecisionContext,
};
use explicit_formula::quad::QuadratureSpec;
use explicit_formula::summation::SumOrder;
use explicit_formula::testfn::TestFunction;
use explicit_formula::weil::{thm2_sweep, weil_closure};
use explicit_formula::zeros::ZeroTable;
use explicit_formula::zerosum::{classify_shift, landau_sum, parse_shift, thm1_report, ShiftClass, ZeroSumParams};

use crate::output::{write_report, Cell, Format, Table};

/// Environment variable naming the default data directory.
pub const DATA_DIR_ENV: &str = "EFV_DATA_DIR";

/// Default band for `|sum − main term|` at `v ∈ {0, u}`.
pub const THM1_MAIN_BAND: f64 = 5.0;
/// Default band for `|sum − prime term|` at `v = ±log m`.
pub const THM1_PRIME_BAND: f64 = 2.0;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(explicit_formula::Error),
    Write(PathBuf, std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Write(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<explicit_formula::Error> for CliError {
    fn from(e: explicit_formula::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub struct RunConfig {
    pub descriptor: SelbergDescriptor,
    pub zeros: ZeroTable,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub order: SumOrder,
    pub spec: QuadratureSpec,
}

/// `$EFV_DATA_DIR`, else `./data`, else the repository's data directory.
pub fn default_data_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("data");
    if local.is_dir() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

impl RunConfig {
    pub fn from_args(
        descriptor: Option<PathBuf>,
        zeros: Option<PathBuf>,
        format: Format,
        output: Option<PathBuf>,
        deterministic: bool,
        overrides: (Option<f64>, Option<f64>, Option<usize>),
    ) -> CliResult<Self> {
        let desc_path = descriptor.unwrap_or_else(|| default_data_dir().join("zeta.desc"));
        let zeros_path = zeros.unwrap_or_else(|| {
            let stem = desc_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            desc_path.with_file_name(format!("{stem}_zeros.txt"))
        });
        let descriptor = SelbergDescriptor::from_file(&desc_path)?;
        let zeros = ZeroTable::from_file(&zeros_path)?;
        let mut spec = QuadratureSpec::default();
        let (rel, abs, subdiv) = overrides;
        if let Some(r) = rel {
            spec.rel_tol = r;
        }
        if let Some(a) = abs {
            spec.abs_tol = a;
        }
        if let Some(m) = subdiv {
            spec.max_subdivisions = m;
        }
        spec.validate()?;
        Ok(Self {
            descriptor,
            zeros,
            format,
            output,
            order: if deterministic {
                SumOrder::Sequential
            } else {
                SumOrder::Chunked
            },
            spec,
        })
    }

    fn emit(&self, table: &Table) -> CliResult<()> {
        write_report(&table.render(self.format), self.output.as_deref())
            .map_err(|e| CliError::Write(self.output.clone().unwrap_or_else(|| "<stdout>".into()), e))
    }

    fn height(&self, t: Option<f64>) -> f64 {
        t.unwrap_or_else(|| self.zeros.max_ordinate())
    }
}

fn complex_cells(z: num_complex::Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

pub fn thm1(config: &RunConfig, us: &[f64], v_spec: &str, t: Option<f64>, band: Option<f64>) -> CliResult<Outcome> {
    if us.is_empty() {
        return Err(CliError::Usage("--u needs at least one value".into()));
    }
    let t = config.height(t);
    let mut table = Table::new(
        "thm1",
        &[
            "u",
            "v",
            "T",
            "computed_re",
            "computed_im",
            "predicted_re",
            "predicted_im",
            "residual_abs",
            "band",
            "zero_count_used",
            "truncation_bound",
            "pass",
        ],
    );
    let mut all = true;
    for &u in us {
        let v = parse_shift(v_spec, u)?;
        let class = classify_shift(u, v, 1e-12)?;
        let band = band.unwrap_or(match class {
            ShiftClass::LogM { .. } => THM1_PRIME_BAND,
            _ => THM1_MAIN_BAND,
        });
        let params = ZeroSumParams::new(u, v, t)?;
        let r = thm1_report(&config.descriptor, &config.zeros, &params, config.order)?;
        let pass = r.residual.norm() <= band + r.truncation_bound;
        all &= pass;
        let mut row = vec![u.into(), v.into(), t.into()];
        row.extend(complex_cells(r.computed));
        row.extend(complex_cells(r.predicted));
        row.extend([
            r.residual.norm().into(),
            band.into(),
            r.zero_count_used.into(),
            r.truncation_bound.into(),
            pass.into(),
        ]);
        table.push(row);
    }
    config.emit(&table)?;
    Ok(Outcome::from_pass(all))
}

pub fn weil(
    config: &RunConfig,
    f_spec: &str,
    u: f64,
    v: f64,
    t: Option<f64>,
    n_max: Option<u64>,
    tol: f64,
) -> CliResult<Outcome> {
    let f = TestFunction::parse(f_spec)?;
    let t = config.height(t);
    let r = weil_closure(
        &config.descriptor,
        &config.zeros,
        &f,
        u,
        v,
        t,
        n_max,
        &config.spec,
        config.order,
    )?;
    let mut table = Table::new("weil", &["quantity", "re", "im"]);
    let mut row = |name: &str, z: num_complex::Complex64| {
        let mut cells = vec![Cell::from(name)];
        cells.extend(complex_cells(z));
        table.push(cells);
    };
    row("zero_side", r.zero_side);
    for term in &r.term_breakdown {
        row(&term.label, term.value);
    }
    row("arithmetic_side", r.arithmetic_side);
    row("residual", r.residual);
    let allowed = tol * (1.0 + r.zero_side.norm()) + r.zero_tail_bound;
    let pass = r.residual.norm() <= allowed;
    table.note("f", f.to_string());
    table.note("u", u);
    table.note("v", v);
    table.note("T", t);
    table.note("zeros_used", r.zeros_used);
    table.note("n_max", r.n_max);
    table.note("zero_tail_estimate", r.zero_tail_estimate);
    table.note("zero_tail_bound", r.zero_tail_bound);
    table.note("allowed", allowed);
    table.note("pass", pass);
    config.emit(&table)?;
    Ok(Outcome::from_pass(pass))
}

pub fn weil_sweep(config: &RunConfig, f_spec: &str, v: f64, us: &[f64], slack: f64) -> CliResult<Outcome> {
    if us.is_empty() {
        return Err(CliError::Usage("--sweep-u needs at least one value".into()));
    }
    let f = TestFunction::parse(f_spec)?;
    let s = thm2_sweep(
        &config.descriptor,
        &config.zeros,
        &f,
        v,
        us,
        slack,
        &config.spec,
        config.order,
    )?;
    let mut table = Table::new(
        "weil-sweep",
        &[
            "u",
            "zero_side_re",
            "zero_side_im",
            "prediction_re",
            "prediction_im",
            "residual_abs",
            "ratio",
        ],
    );
    for r in &s.rows {
        let mut row = vec![r.u.into()];
        row.extend(complex_cells(r.zero_side));
        row.extend(complex_cells(r.prediction));
        row.extend([r.residual.norm().into(), r.ratio.into()]);
        table.push(row);
    }
    table.note("f", f.to_string());
    table.note("v", v);
    table.note("fitted_k", s.fitted_k);
    table.note("slack", s.slack);
    table.note("linear_decay", s.linear_decay);
    config.emit(&table)?;
    Ok(Outcome::from_pass(s.linear_decay))
}

/// Parses `a..b` (inclusive) or a single index; zero is rejected.
pub fn parse_index_range(spec: &str) -> CliResult<Vec<i64>> {
    let bad = || CliError::Usage(format!("--n expects `a..b` or an integer, got {spec:?}"));
    let (a, b) = match spec.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<i64>().map_err(|_| bad())?,
            b.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => {
            let n = spec.trim().parse::<i64>().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(CliError::Usage(format!("empty index range {spec:?}")));
    }
    if a <= 0 && b >= 0 {
        return Err(CliError::Usage("Li coefficients need n != 0".into()));
    }
    Ok((a..=b).collect())
}

#[allow(clippy::too_many_arguments)]
pub fn li(
    config: &RunConfig,
    n_spec: &str,
    methods: &[String],
    x: f64,
    t: Option<f64>,
    check_positivity: bool,
    working_digits: u32,
) -> CliResult<Outcome> {
    let ns = parse_index_range(n_spec)?;
    for m in methods {
        if !["zerosum", "completed", "arithmetic", "asymptotic"].contains(&m.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown method {m:?}; expected zerosum, completed, arithmetic or asymptotic"
            )));
        }
    }
    let t = config.height(t);
    let prec = PrecisionContext::new(working_digits)?;
    let desc = &config.descriptor;
    let mut table = Table::new("li", &["n", "method", "re", "im", "error_bar"]);
    let mut push = |c: &LiCoefficient| {
        let mut row = vec![Cell::from(c.n), Cell::from(c.method.name())];
        row.extend(complex_cells(c.value));
        row.push(c.error_bar.into());
        table.push(row);
    };
    // λ(n) from zeros and λ(−n) from primes are compared as conjugates.
    let mut zero_side = Vec::new();
    let mut prime_side = Vec::new();
    for &n in &ns {
        for m in methods {
            match m.as_str() {
                "zerosum" => {
                    let c = li_zero_sum(&config.zeros, desc, n, t, config.order)?;
                    zero_side.push(c);
                    push(&c);
                }
                "completed" => {
                    let c = li_zero_sum_completed(&config.zeros, desc, n, t, config.order)?;
                    push(&c);
                }
                "arithmetic" => {
                    if n < 0 {
                        return Err(CliError::Usage("the arithmetic formula is evaluated for n >= 1".into()));
                    }
                    let c = li_arithmetic(desc, n as u64, x, &prec)?;
                    prime_side.push(c);
                    push(&c);
                }
                _ => {
                    if n < 0 {
                        return Err(CliError::Usage("the asymptotic formula is evaluated for n >= 1".into()));
                    }
                    push(&li_asymptotic(desc, n as u64)?);
                }
            }
        }
    }
    let mut pass = true;
    let mut compared = 0usize;
    for a in &prime_side {
        if let Some(z) = zero_side.iter().find(|z| z.n == -a.n) {
            compared += 1;
            pass &= (a.value - z.value.conj()).norm() <= a.error_bar + z.error_bar;
        }
    }
    if compared > 0 {
        table.note("agreement_checked", compared);
        table.note("agreement", pass);
    }
    if check_positivity {
        let n_max = ns.iter().map(|n| n.unsigned_abs()).max().unwrap_or(1);
        let r = li_positivity_report(&config.zeros, desc, n_max, t, config.order)?;
        table.note("positivity_n_max", n_max);
        table.note("positivity_failures", r.failures);
        table.note("positivity_verdict", r.verdict);
        pass &= r.failures == 0;
    }
    config.emit(&table)?;
    Ok(Outcome::from_pass(pass))
}

/// Comma-separated heights or `start:stop:step`.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("bad grid {spec:?}: {why}"));
    let s = spec.trim();
    if s.is_empty() {
        return Err(bad("empty grid"));
    }
    let grid = if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected start:stop:step"))?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        if !(step > 0.0) {
            return Err(bad("step must be positive"));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if !(count >= 0.0) {
            return Err(bad("empty grid"));
        }
        (0..=count as usize).map(|k| start + k as f64 * step).collect()
    } else {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad("expected comma-separated numbers"))?
    };
    if grid.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(grid)
}

pub fn count(config: &RunConfig, grid: &str, band: f64) -> CliResult<Outcome> {
    let grid = parse_grid(grid)?;
    let profile = config.zeros.deviation_profile(&config.descriptor, &grid)?;
    let mut table = Table::new(
        "count",
        &["T", "empirical", "main_term", "deviation", "deviation_over_log_T"],
    );
    for s in &profile.snapshots {
        table.push(vec![
            s.t.into(),
            s.empirical.into(),
            s.main_term.into(),
            s.deviation.into(),
            (s.deviation / s.t.ln()).into(),
        ]);
    }
    let pass = profile.max_ratio <= band;
    table.note("max_ratio", profile.max_ratio);
    table.note("band", band);
    table.note("pass", pass);
    config.emit(&table)?;
    Ok(Outcome::from_pass(pass))
}

pub fn landau(config: &RunConfig, n: u64, t: f64, band: f64) -> CliResult<Outcome> {
    if n < 2 {
        return Err(CliError::Usage("landau needs --n >= 2".into()));
    }
    let (computed, predicted) = landau_sum(&config.zeros, &config.descriptor, n, t)?;
    let scale = (n as f64).powf(1.5) * t.ln();
    let ratio = (computed - predicted).norm() / scale;
    let pass = ratio <= band;
    let mut table = Table::new(
        "landau",
        &[
            "n",
            "T",
            "computed_re",
            "computed_im",
            "predicted_re",
            "predicted_im",
            "residual_abs",
            "ratio",
            "band",
            "pass",
        ],
    );
    let mut row = vec![n.into(), t.into()];
    row.extend(complex_cells(computed));
    row.extend(complex_cells(predicted));
    row.extend([
        (computed - predicted).norm().into(),
        ratio.into(),
        band.into(),
        pass.into(),
    ]);
    table.push(row);
    config.emit(&table)?;
    Ok(Outcome::from_pass(pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_ranges() {
        assert_eq!(parse_index_range("1..5").unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_index_range("-3").unwrap(), vec![-3]);
        assert!(parse_index_range("0").is_err());
        assert!(parse_index_range("-2..2").is_err());
        assert!(parse_index_range("5..1").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("50:200:50").unwrap(), vec![50.0, 100.0, 150.0, 200.0]);
        assert_eq!(parse_grid("10, 20").unwrap(), vec![10.0, 20.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid(",").is_err());
        assert!(parse_grid("5:1:1").is_err());
    }
}
