//! Parameter sweeps over the line geometry, rendered as CSV or key=value
//! reports.
//!
//! Settings arrive as string key/value pairs (from a config file and from
//! command-line flags, the latter taking precedence) and are validated into a
//! [`SweepSpec`]. The runners are deterministic: the same spec always yields
//! the same bytes.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::fmt::Write as _;

use thiserror::Error;

use crate::channel::{unit_noise_gains, NormalizedGains, PowerSplit};
use crate::energy::{
    ebn0_lower_full, ebn0_lower_half, ebn0_upper_full, ebn0_upper_full_fixed_split, ebn0_upper_half,
    ebn0_upper_half_fixed_lambda, ebn0_upper_half_fixed_split, traditional_cf_energy, EnergyBoundResult, BETA_MIN,
    LAMBDA_RANGE,
};
use crate::full_duplex::{cf_rate_full, cutset_full, optimize_ts_cf_full, ts_cf_rate_full};
use crate::half_duplex::{cf_rate_half, cutset_half, optimize_ts_cf_half, quant_noise_half, ts_cf_rate_half};
use crate::oracle::{grid_alpha, grid_lower_full, grid_lower_half, grid_upper, GridSpec, UpperObjective};
use crate::opt::{maximize_on, minimize_nd, Axis, OptimizerConfig};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SweepError {
    fn invalid(field: &str, message: impl Into<String>) -> Self {
        SweepError::Invalid {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Invalid { .. } => 2,
            SweepError::Io(_) => 1,
        }
    }
}

fn lib_err(field: &str) -> impl Fn(crate::Error) -> SweepError + '_ {
    move |e| SweepError::invalid(field, e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Full,
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// A single value or `n` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueRange {
    Single(f64),
    Range { lo: f64, hi: f64, n: usize },
}

impl ValueRange {
    /// Parses `v` or `lo:hi:n`.
    pub fn parse(field: &str, s: &str) -> Result<Self, SweepError> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| SweepError::invalid(field, format!("'{t}' is not a finite number")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(ValueRange::Single(num(v)?)),
            [lo, hi, n] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| SweepError::invalid(field, format!("'{n}' is not a point count")))?;
                if n == 0 {
                    return Err(SweepError::invalid(field, "range needs at least one point"));
                }
                if lo > hi {
                    return Err(SweepError::invalid(field, format!("lower end {lo} exceeds upper end {hi}")));
                }
                Ok(ValueRange::Range { lo, hi, n })
            }
            _ => Err(SweepError::invalid(field, format!("expected 'v' or 'lo:hi:n', got '{s}'"))),
        }
    }

    pub fn points(&self, spacing: Spacing) -> Vec<f64> {
        match *self {
            ValueRange::Single(v) => vec![v],
            ValueRange::Range { lo, n: 1, .. } => vec![lo],
            ValueRange::Range { lo, hi, n } => (0..n)
                .map(|i| {
                    let t = i as f64 / (n - 1) as f64;
                    match spacing {
                        Spacing::Linear if i + 1 == n => hi,
                        Spacing::Linear => lo + (hi - lo) * t,
                        Spacing::Log if i + 1 == n => hi,
                        Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
                    }
                })
                .collect(),
        }
    }

    fn single(&self) -> Option<f64> {
        match *self {
            ValueRange::Single(v) => Some(v),
            _ => None,
        }
    }

    fn all(&self, ok: impl Fn(f64) -> bool) -> bool {
        match *self {
            ValueRange::Single(v) => ok(v),
            ValueRange::Range { lo, hi, .. } => ok(lo) && ok(hi),
        }
    }
}

/// How a split parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Choice {
    Fixed(f64),
    Optimize,
    /// `β = (1-λ)/(2-λ)`: source and relay spend the same average power.
    EqualAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    RateImprovement,
    Ebn0Bounds,
    PointEval,
}

/// A validated sweep request.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub mode: Mode,
    pub d: ValueRange,
    pub power: ValueRange,
    pub beta: Choice,
    pub lambda: Choice,
    pub opt: OptimizerConfig,
    pub oracle: bool,
    pub oracle_grid: Option<usize>,
    pub strict: bool,
    /// `-` for standard output.
    pub out: String,
}

/// Keys accepted in config files and as flags.
pub const KEYS: &[&str] = &[
    "mode",
    "d",
    "power",
    "beta",
    "lambda",
    "out",
    "grid",
    "tol",
    "oracle",
    "oracle_grid",
    "strict",
];

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, SweepError> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| SweepError::invalid("config", format!("line {}: expected 'key = value'", no + 1)))?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(SweepError::invalid("config", format!("line {}: unknown key '{k}'", no + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn parse_bool(field: &str, v: &str) -> Result<bool, SweepError> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(SweepError::invalid(field, format!("'{v}' is not a boolean"))),
    }
}

fn parse_choice(field: &str, v: &str, ok: impl Fn(f64) -> bool, expected: &str) -> Result<Choice, SweepError> {
    if v.eq_ignore_ascii_case("opt") {
        return Ok(Choice::Optimize);
    }
    let x: f64 = v
        .parse()
        .map_err(|_| SweepError::invalid(field, format!("'{v}' is neither a number nor 'opt'")))?;
    if ok(x) {
        Ok(Choice::Fixed(x))
    } else {
        Err(SweepError::invalid(field, format!("{x} is out of range (expected {expected})")))
    }
}

impl SweepSpec {
    /// Builds a spec from merged settings. Missing keys take per-experiment
    /// defaults.
    pub fn from_settings(experiment: Experiment, s: &BTreeMap<String, String>) -> Result<Self, SweepError> {
        let get = |k: &str| s.get(k).map(String::as_str);
        let mode = match get("mode").unwrap_or("full") {
            "full" => Mode::Full,
            "half" => Mode::Half,
            other => return Err(SweepError::invalid("mode", format!("'{other}' is not 'full' or 'half'"))),
        };
        let d = ValueRange::parse("d", get("d").unwrap_or(match experiment {
            Experiment::Ebn0Bounds => "0.05:0.95:19",
            _ => "0.5",
        }))?;
        if !d.all(|v| v > 0.0 && v < 1.0) {
            return Err(SweepError::invalid("d", "distances must lie in (0, 1)"));
        }
        let power = ValueRange::parse("power", get("power").unwrap_or(match experiment {
            Experiment::RateImprovement => "1e-4:10:60",
            _ => "1",
        }))?;
        if !power.all(|v| v > 0.0) {
            return Err(SweepError::invalid("power", "powers must be > 0"));
        }
        let sweep_default = experiment != Experiment::Ebn0Bounds;
        let beta = match get("beta") {
            Some(v) => parse_choice("beta", v, |b| b > 0.0 && b <= 1.0, "0 < beta <= 1")?,
            None if !sweep_default => Choice::Optimize,
            None if mode == Mode::Half => Choice::EqualAverage,
            None => Choice::Fixed(0.5),
        };
        let lambda = match get("lambda") {
            Some(v) => parse_choice("lambda", v, |l| l > 0.0 && l < 1.0, "0 < lambda < 1")?,
            None if sweep_default => Choice::Fixed(0.5),
            None => Choice::Optimize,
        };
        let mut opt = OptimizerConfig::default();
        if let Some(v) = get("grid") {
            let n: usize = v
                .parse()
                .map_err(|_| SweepError::invalid("grid", format!("'{v}' is not a point count")))?;
            opt.coarse_points = n;
            opt.nd_points = n;
        }
        if let Some(v) = get("tol") {
            opt.refine_tol = v
                .parse()
                .map_err(|_| SweepError::invalid("tol", format!("'{v}' is not a number")))?;
        }
        opt.validate().map_err(|e| match e {
            crate::Error::Domain { name, .. } if name == "refine_tol" => SweepError::invalid("tol", e.to_string()),
            e => SweepError::invalid("grid", e.to_string()),
        })?;
        let oracle_grid = match get("oracle_grid") {
            Some(v) => Some(
                v.parse::<usize>()
                    .ok()
                    .filter(|&n| n >= 2)
                    .ok_or_else(|| SweepError::invalid("oracle_grid", format!("'{v}' is not a count >= 2")))?,
            ),
            None => None,
        };
        let spec = SweepSpec {
            experiment,
            mode,
            d,
            power,
            beta,
            lambda,
            opt,
            oracle: get("oracle").map(|v| parse_bool("oracle", v)).transpose()?.unwrap_or(false),
            oracle_grid,
            strict: get("strict").map(|v| parse_bool("strict", v)).transpose()?.unwrap_or(false),
            out: get("out").unwrap_or("-").to_string(),
        };
        if experiment == Experiment::PointEval {
            if spec.d.single().is_none() {
                return Err(SweepError::invalid("d", "eval needs a single distance"));
            }
            if spec.power.single().is_none() {
                return Err(SweepError::invalid("power", "eval needs a single power"));
            }
        }
        if mode == Mode::Full && spec.lambda != Choice::Optimize && get("lambda").is_some() {
            return Err(SweepError::invalid("lambda", "only meaningful with --mode half"));
        }
        Ok(spec)
    }

    fn grid(&self, default: usize) -> GridSpec {
        GridSpec::new(self.oracle_grid.unwrap_or(default)).unwrap()
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant), exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}

/// Rendered output and how many rows did not converge.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub text: String,
    pub unconverged: usize,
}

struct Csv {
    text: String,
}

impl Csv {
    fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { text }
    }

    fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }
}

const TOL: f64 = 1e-9;

fn status(converged: bool, ok: bool) -> &'static str {
    match (converged, ok) {
        (false, _) => "unconverged",
        (true, false) => "bound-violation",
        (true, true) => "ok",
    }
}

fn inner_cfg(cfg: &OptimizerConfig) -> OptimizerConfig {
    OptimizerConfig {
        coarse_points: cfg.coarse_points.min(64),
        nd_points: cfg.nd_points.min(32),
        ..cfg.clone()
    }
}

/// Rates at one operating point, for the resolved split.
#[derive(Debug, Clone, Copy)]
struct RatePoint {
    cf: f64,
    ts: f64,
    alpha: f64,
    cut: f64,
    beta: f64,
    lambda: Option<f64>,
    converged: bool,
}

fn resolve_beta(choice: Choice, lambda: Option<f64>) -> Option<f64> {
    match choice {
        Choice::Fixed(b) => Some(b),
        Choice::EqualAverage => Some(match lambda {
            Some(l) => PowerSplit::equal_average_beta(l),
            None => 0.5,
        }),
        Choice::Optimize => None,
    }
}

/// Maximizes `f(λ, β)` over whichever of them the sweep leaves free.
fn best_split(spec: &SweepSpec, mut f: impl FnMut(Option<f64>, f64) -> f64) -> (f64, Option<f64>, f64, bool) {
    let cfg = inner_cfg(&spec.opt);
    let beta_axis = Axis::linear(BETA_MIN, 1.0);
    let lambda_axis = Axis::linear(LAMBDA_RANGE.0, LAMBDA_RANGE.1);
    let lambda_free = spec.mode == Mode::Half && spec.lambda == Choice::Optimize;
    let fixed_lambda = match (spec.mode, spec.lambda) {
        (Mode::Half, Choice::Fixed(l)) => Some(l),
        _ => None,
    };
    match (lambda_free, spec.beta) {
        (false, Choice::Optimize) => {
            let r = maximize_on(|b| f(fixed_lambda, b), beta_axis, &cfg);
            (r.value, fixed_lambda, r.x(), r.converged)
        }
        (false, c) => {
            let b = resolve_beta(c, fixed_lambda).unwrap();
            (f(fixed_lambda, b), fixed_lambda, b, true)
        }
        (true, Choice::Optimize) => {
            let r = minimize_nd(|v| -f(Some(v[0]), v[1]), &[lambda_axis, beta_axis], &cfg);
            (-r.value, Some(r.arg[0]), r.arg[1], r.converged)
        }
        (true, c) => {
            let r = maximize_on(|l| f(Some(l), resolve_beta(c, Some(l)).unwrap()), lambda_axis, &cfg);
            let l = r.x();
            (r.value, Some(l), resolve_beta(c, Some(l)).unwrap(), r.converged)
        }
    }
}

fn half_powers(p: f64, lambda: f64, beta: f64) -> crate::channel::HalfDuplexPowers {
    PowerSplit::new(beta, p).unwrap().half_duplex(lambda).unwrap()
}

fn rate_point(spec: &SweepSpec, g: &NormalizedGains, p: f64) -> Result<RatePoint, SweepError> {
    let cfg = &spec.opt;
    let mut converged = true;
    let (cf, _, _, c1) = best_split(spec, |l, b| match l {
        None => cf_rate_full(g, &PowerSplit::new(b, p).unwrap().full_duplex()),
        Some(l) => cf_rate_half(g, &half_powers(p, l, b)).map(|r| r.rate).unwrap_or(f64::NEG_INFINITY),
    });
    let (ts, lambda, beta, c2) = best_split(spec, |l, b| match l {
        None => optimize_ts_cf_full(g, &PowerSplit::new(b, p).unwrap().full_duplex(), cfg).rate,
        Some(l) => optimize_ts_cf_half(g, &half_powers(p, l, b), cfg)
            .map(|r| r.rate)
            .unwrap_or(f64::NEG_INFINITY),
    });
    converged &= c1 && c2;
    let (alpha, cut) = match lambda {
        None => {
            let fp = PowerSplit::new(beta, p).map_err(lib_err("beta"))?.full_duplex();
            let r = optimize_ts_cf_full(g, &fp, cfg);
            converged &= r.converged;
            (r.alpha_opt.unwrap_or(1.0), cutset_full(g, &fp).rate)
        }
        Some(l) => {
            let hp = half_powers(p, l, beta);
            let r = optimize_ts_cf_half(g, &hp, cfg).map_err(lib_err("lambda"))?;
            converged &= r.converged;
            (r.alpha_opt.unwrap_or(1.0), cutset_half(g, &hp).map_err(lib_err("lambda"))?.rate)
        }
    };
    Ok(RatePoint {
        cf,
        ts,
        alpha,
        cut,
        beta,
        lambda,
        converged,
    })
}

fn gains_at(d: f64) -> Result<NormalizedGains, SweepError> {
    unit_noise_gains(d).map_err(lib_err("d"))
}

/// Rate-improvement sweep over distance × power.
///
/// Columns: `d,P,R_cf,R_ts,alpha_opt,relative_improvement,status`, then
/// `oracle_R_ts,oracle_alpha` with the oracle enabled.
pub fn run_rate_improvement(spec: &SweepSpec) -> Result<SweepOutput, SweepError> {
    let mut header = vec!["d", "P", "R_cf", "R_ts", "alpha_opt", "relative_improvement", "status"];
    if spec.oracle {
        header.extend(["oracle_R_ts", "oracle_alpha"]);
    }
    let mut csv = Csv::new(&header);
    let mut unconverged = 0;
    for d in spec.d.points(Spacing::Linear) {
        let g = gains_at(d)?;
        for p in spec.power.points(Spacing::Log) {
            let r = rate_point(spec, &g, p)?;
            let rel = if r.cf > 0.0 { (r.ts - r.cf) / r.cf } else { 0.0 };
            let mut ok = r.ts >= r.cf - TOL * r.cf.max(1e-300) && r.ts <= r.cut * (1.0 + TOL);
            let mut extra = Vec::new();
            if spec.oracle {
                let grid = spec.grid(2000);
                let o = match r.lambda {
                    None => {
                        let fp = PowerSplit::new(r.beta, p).unwrap().full_duplex();
                        grid_alpha(|a| ts_cf_rate_full(&g, &fp, a).unwrap(), &grid)
                    }
                    Some(l) => {
                        let hp = half_powers(p, l, r.beta);
                        grid_alpha(|a| ts_cf_rate_half(&g, &hp, a).unwrap().rate, &grid)
                    }
                };
                ok &= r.ts >= o.rate * (1.0 - TOL);
                extra = vec![fmt_sig(o.rate), fmt_sig(o.alpha)];
            }
            if !r.converged {
                unconverged += 1;
            }
            let mut cells = vec![
                fmt_sig(d),
                fmt_sig(p),
                fmt_sig(r.cf),
                fmt_sig(r.ts),
                fmt_sig(r.alpha),
                fmt_sig(rel),
                status(r.converged, ok).to_string(),
            ];
            cells.extend(extra);
            csv.row(&cells);
        }
    }
    Ok(SweepOutput {
        text: csv.text,
        unconverged,
    })
}

struct Bounds {
    lower: EnergyBoundResult,
    upper: EnergyBoundResult,
    traditional: f64,
    objective: UpperObjective,
}

fn bounds_at(spec: &SweepSpec, g: &NormalizedGains) -> Result<Bounds, SweepError> {
    let cfg = &spec.opt;
    match spec.mode {
        Mode::Full => {
            let lower = ebn0_lower_full(g);
            let (upper, objective) = match resolve_beta(spec.beta, None) {
                Some(b) => (
                    ebn0_upper_full_fixed_split(g, b, cfg).map_err(lib_err("beta"))?,
                    UpperObjective::FullFixed { beta: b },
                ),
                None => (ebn0_upper_full(g, cfg), UpperObjective::Full),
            };
            let traditional = traditional_cf_energy(g, resolve_beta(spec.beta, None).unwrap_or(1.0));
            Ok(Bounds {
                lower,
                upper,
                traditional,
                objective,
            })
        }
        Mode::Half => {
            let lower = ebn0_lower_half(g, cfg).map_err(lib_err("d"))?;
            let (upper, objective, trad_beta) = match (spec.lambda, spec.beta) {
                (Choice::Fixed(l), Choice::Optimize) => (
                    ebn0_upper_half_fixed_lambda(g, l, cfg).map_err(lib_err("lambda"))?,
                    UpperObjective::HalfFixedLambda { lambda: l },
                    1.0,
                ),
                (Choice::Fixed(l), c) => {
                    let b = resolve_beta(c, Some(l)).unwrap();
                    (
                        ebn0_upper_half_fixed_split(g, l, b, cfg).map_err(lib_err("beta"))?,
                        UpperObjective::HalfFixed { lambda: l, beta: b },
                        b,
                    )
                }
                (_, Choice::Optimize) => (ebn0_upper_half(g, cfg), UpperObjective::Half, 1.0),
                _ => {
                    return Err(SweepError::invalid(
                        "lambda",
                        "a fixed beta in ebn0-sweep needs a fixed lambda in half mode",
                    ))
                }
            };
            Ok(Bounds {
                lower,
                upper,
                traditional: traditional_cf_energy(g, trad_beta),
                objective,
            })
        }
    }
}

/// Energy-per-bit bounds over distance.
///
/// Columns: `d,lower,upper_ts,upper_traditional,status`, then
/// `oracle_lower,oracle_upper` with the oracle enabled.
pub fn run_ebn0_bounds(spec: &SweepSpec) -> Result<SweepOutput, SweepError> {
    let mut header = vec!["d", "lower", "upper_ts", "upper_traditional", "status"];
    if spec.oracle {
        header.extend(["oracle_lower", "oracle_upper"]);
    }
    let mut csv = Csv::new(&header);
    let mut unconverged = 0;
    for d in spec.d.points(Spacing::Linear) {
        let g = gains_at(d)?;
        let b = bounds_at(spec, &g)?;
        let converged = b.lower.converged && b.upper.converged;
        let mut ok = b.lower.value <= b.upper.value * (1.0 + TOL) && b.upper.value <= b.traditional * (1.0 + TOL);
        let mut extra = Vec::new();
        if spec.oracle {
            let grid = spec.grid(400);
            let (lower, c_prime, gap) = match spec.mode {
                Mode::Full => {
                    let o = grid_lower_full(&g, &grid);
                    (o.value, o.c_prime, o.gap)
                }
                Mode::Half => {
                    let o = grid_lower_half(&g, &grid);
                    (o.value, o.c_prime, o.gap)
                }
            };
            let c = LN_2 / b.lower.value;
            ok &= c >= c_prime * (1.0 - TOL) && c <= c_prime + gap + TOL;
            let up = grid_upper(b.objective, &g, &grid);
            ok &= b.upper.value <= up.value * (1.0 + TOL);
            extra = vec![fmt_sig(lower), fmt_sig(up.value)];
        }
        if !converged {
            unconverged += 1;
        }
        let mut cells = vec![
            fmt_sig(d),
            fmt_sig(b.lower.value),
            fmt_sig(b.upper.value),
            fmt_sig(b.traditional),
            status(converged, ok).to_string(),
        ];
        cells.extend(extra);
        csv.row(&cells);
    }
    Ok(SweepOutput {
        text: csv.text,
        unconverged,
    })
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(fmt_sig).unwrap_or_else(|| "none".into())
}

fn bound_lines(out: &mut String, key: &str, r: &EnergyBoundResult) {
    let _ = writeln!(out, "{key}={}", fmt_sig(r.value));
    let _ = writeln!(out, "{key}_db={}", fmt_sig(r.value_db));
    let _ = writeln!(out, "{key}_branch={}", r.branch.tag());
    let _ = writeln!(out, "{key}_beta={}", opt_cell(r.params.beta));
    let _ = writeln!(out, "{key}_rho={}", opt_cell(r.params.rho));
    let _ = writeln!(out, "{key}_lambda={}", opt_cell(r.params.lambda));
    let _ = writeln!(out, "{key}_a={}", opt_cell(r.params.a_ratio));
    let _ = writeln!(out, "{key}_converged={}", r.converged);
}

/// Every quantity at one `(d, P)` point as `key=value` lines.
pub fn run_point_eval(spec: &SweepSpec) -> Result<SweepOutput, SweepError> {
    let d = spec.d.single().unwrap();
    let p = spec.power.single().unwrap();
    let g = gains_at(d)?;
    let r = rate_point(spec, &g, p)?;
    let b = bounds_at(
        &SweepSpec {
            beta: Choice::Optimize,
            lambda: Choice::Optimize,
            ..spec.clone()
        },
        &g,
    )?;
    let mut out = String::new();
    let mode = match spec.mode {
        Mode::Full => "full",
        Mode::Half => "half",
    };
    let _ = writeln!(out, "mode={mode}");
    for (k, v) in [("d", d), ("P", p), ("g21", g.g21), ("g31", g.g31), ("g32", g.g32)] {
        let _ = writeln!(out, "{k}={}", fmt_sig(v));
    }
    let _ = writeln!(out, "beta={}", fmt_sig(r.beta));
    let _ = writeln!(out, "lambda={}", opt_cell(r.lambda));
    let _ = writeln!(out, "cf_rate={}", fmt_sig(r.cf));
    let _ = writeln!(out, "ts_rate={}", fmt_sig(r.ts));
    let _ = writeln!(out, "alpha_opt={}", fmt_sig(r.alpha));
    let _ = writeln!(out, "cutset={}", fmt_sig(r.cut));
    let rel = if r.cf > 0.0 { (r.ts - r.cf) / r.cf } else { 0.0 };
    let _ = writeln!(out, "relative_improvement={}", fmt_sig(rel));
    if let Some(l) = r.lambda {
        let q = quant_noise_half(&g, &half_powers(p, l, r.beta)).map_err(lib_err("lambda"))?;
        let _ = writeln!(out, "quant_noise_ratio={}", fmt_sig(q.ratio()));
    }
    bound_lines(&mut out, "ebn0_lower", &b.lower);
    bound_lines(&mut out, "ebn0_upper", &b.upper);
    let _ = writeln!(out, "ebn0_traditional={}", fmt_sig(b.traditional));
    let converged = r.converged && b.lower.converged && b.upper.converged;
    let _ = writeln!(out, "converged={converged}");
    Ok(SweepOutput {
        text: out,
        unconverged: usize::from(!converged),
    })
}

/// Runs the experiment the sweep settings name.
pub fn run(spec: &SweepSpec) -> Result<SweepOutput, SweepError> {
    match spec.experiment {
        Experiment::RateImprovement => run_rate_improvement(spec),
        Experiment::Ebn0Bounds => run_ebn0_bounds(spec),
        Experiment::PointEval => run_point_eval(spec),
    }
}
