//! Sweep specifications: parsing of states, grids and key=value configs.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use logiq::layout::{make_layout, CouplingGraph, LayoutKind};
use logiq::qec::{ClampRule, CodeName, ExperimentConfig, PhysicalArm, QecCode};
use logiq::{NoiseParams, PureState, SpamParams, T2Convention};

use crate::error::{invalid, CliError, Result};

/// Data-qubit input state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Zero,
    One,
    Plus,
    Minus,
    /// `Rx(theta)|1>`.
    Rx(f64),
}

impl InitialState {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "zero" | "0" => return Ok(Self::Zero),
            "one" | "1" => return Ok(Self::One),
            "plus" | "+" => return Ok(Self::Plus),
            "minus" | "-" => return Ok(Self::Minus),
            _ => {}
        }
        if let Some(a) = s.strip_prefix("rx:") {
            return Ok(Self::Rx(parse_angle(a)?));
        }
        Err(invalid(format!("unknown state '{s}' (zero, one, plus, minus, rx:<angle>)")))
    }

    pub fn state(&self) -> PureState {
        match *self {
            Self::Zero => PureState::zero(),
            Self::One => PureState::one(),
            Self::Plus => PureState::plus(),
            Self::Minus => PureState::minus(),
            Self::Rx(t) => PureState::rx_on_one(t),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("zero"),
            Self::One => f.write_str("one"),
            Self::Plus => f.write_str("plus"),
            Self::Minus => f.write_str("minus"),
            Self::Rx(t) => write!(f, "rx:{}", fmt_float(*t)),
        }
    }
}

/// Angles are plain numbers or `pi`, `pi/k`, `m*pi/k`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return finite(v, s);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), parse_f64(d)?),
        None => (s, 1.0),
    };
    let mult = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some("-") => -1.0,
        Some(m) => parse_f64(m.strip_suffix('*').unwrap_or(m))?,
        None => return Err(invalid(format!("bad angle '{s}'"))),
    };
    if den == 0.0 {
        return Err(invalid(format!("bad angle '{s}'")));
    }
    finite(mult * PI / den, s)
}

fn parse_f64(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = s.parse::<f64>().map_err(|_| invalid(format!("not a number: '{s}'")))?;
    finite(v, s)
}

/// Like a number, but `inf` switches the decay off.
fn parse_time_constant(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" => Ok(f64::INFINITY),
        v => parse_f64(v),
    }
}

fn finite(v: f64, s: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("not a finite number: '{s}'")))
    }
}

/// Pinned float format: 9 significant digits, lowercase exponent.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// Parses `a,b,c` or `start:stop:step` (inclusive of `stop` when it lies
/// on the grid).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h) = (parse_f64(start)?, parse_f64(stop)?, parse_f64(step)?);
            if h <= 0.0 || b < a {
                return Err(invalid(format!("bad range '{s}': need start <= stop and step > 0")));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(invalid(format!("range '{s}' has too many points")));
            }
            (0..=n).map(|i| a + h * i as f64).collect()
        }
        [list] => list.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?,
        _ => return Err(invalid(format!("bad grid '{s}'"))),
    };
    check_grid(&grid, s)?;
    Ok(grid)
}

fn check_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid(format!("grid '{what}' is empty")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("grid '{what}' must be strictly ascending")));
    }
    Ok(())
}

fn fmt_grid(g: &[f64]) -> String {
    g.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(",")
}

/// Builds a layout sized for `code`: all_to_all and linear span exactly the
/// code's qubits, the X layout always has 5 sites.
pub fn layout_for(kind: LayoutKind, code: &QecCode) -> Result<CouplingGraph> {
    let n = match kind {
        LayoutKind::XLayout => 5,
        _ => code.n_qubits(),
    };
    Ok(make_layout(kind, n)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub code: CodeName,
    pub state: InitialState,
    pub layout: LayoutKind,
    pub memory_times: Vec<f64>,
    pub gate_errors: Vec<f64>,
    /// Fixed 1-qubit gate error; `None` uses the grid value for both arities.
    pub gate_error_1q: Option<f64>,
    pub gate_time_1q: f64,
    pub gate_time_2q: f64,
    pub t1: f64,
    pub t2: f64,
    pub t2_convention: T2Convention,
    pub arm: PhysicalArm,
    pub clamp: ClampRule,
    pub spam: SpamParams,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            code: CodeName::Combined5,
            state: InitialState::One,
            layout: LayoutKind::AllToAll,
            memory_times: (0..=50).map(|i| 0.04 * i as f64).collect(),
            gate_errors: vec![1e-3],
            gate_error_1q: None,
            gate_time_1q: 1e-3,
            gate_time_2q: 1e-3,
            t1: 1.0,
            t2: 1.0,
            t2_convention: T2Convention::Paper,
            arm: PhysicalArm::MatchedTime,
            clamp: ClampRule::Either,
            spam: SpamParams::default(),
        }
    }
}

pub const SWEEP_KEYS: &[&str] = &[
    "code",
    "state",
    "layout",
    "memory_times",
    "gate_errors",
    "gate_error_1q",
    "gate_time",
    "gate_time_1q",
    "gate_time_2q",
    "t1",
    "t2",
    "t2_convention",
    "physical_arm",
    "clamp",
    "spam_prep",
    "spam_meas",
];

impl SweepSpec {
    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "code" => self.code = CodeName::parse(v).ok_or_else(|| invalid(format!("unknown code '{v}'")))?,
            "state" => self.state = InitialState::parse(v)?,
            "layout" => self.layout = LayoutKind::parse(v).ok_or_else(|| invalid(format!("unknown layout '{v}'")))?,
            "memory_times" => self.memory_times = parse_grid(v)?,
            "gate_errors" => self.gate_errors = parse_grid(v)?,
            "gate_error_1q" => self.gate_error_1q = if v == "grid" { None } else { Some(parse_f64(v)?) },
            "gate_time" => {
                self.gate_time_1q = parse_f64(v)?;
                self.gate_time_2q = self.gate_time_1q;
            }
            "gate_time_1q" => self.gate_time_1q = parse_f64(v)?,
            "gate_time_2q" => self.gate_time_2q = parse_f64(v)?,
            "t1" => self.t1 = parse_time_constant(v)?,
            "t2" => self.t2 = parse_time_constant(v)?,
            "t2_convention" => {
                self.t2_convention = match v {
                    "paper" => T2Convention::Paper,
                    "standard" => T2Convention::Standard,
                    _ => return Err(invalid(format!("t2_convention must be paper or standard, got '{v}'"))),
                }
            }
            "physical_arm" => {
                self.arm = match v {
                    "matched" => PhysicalArm::MatchedTime,
                    "memory_only" => PhysicalArm::MemoryOnly,
                    _ => return Err(invalid(format!("physical_arm must be matched or memory_only, got '{v}'"))),
                }
            }
            "clamp" => {
                self.clamp = match v {
                    "either" => ClampRule::Either,
                    "both" => ClampRule::Both,
                    "off" => ClampRule::Off,
                    _ => return Err(invalid(format!("clamp must be either, both or off, got '{v}'"))),
                }
            }
            "spam_prep" => self.spam.prep_flip = parse_f64(v)?,
            "spam_meas" => self.spam.meas_flip = parse_f64(v)?,
            k => return Err(invalid(format!("unknown config key '{k}'"))),
        }
        Ok(())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut s = Self::default();
        for (k, v) in pairs {
            s.set(k, v)?;
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_grid(&self.memory_times, "memory_times")?;
        check_grid(&self.gate_errors, "gate_errors")?;
        if self.memory_times[0] < 0.0 {
            return Err(invalid("memory times must be >= 0"));
        }
        if self.gate_errors[0] < 0.0 || *self.gate_errors.last().unwrap() > 1.0 {
            return Err(invalid("gate errors must lie in [0, 1]"));
        }
        // surfaces any remaining parameter error before the sweep starts
        self.noise_params(self.gate_errors[0])?;
        Ok(())
    }

    pub fn noise_params(&self, gate_error: f64) -> Result<NoiseParams> {
        let mut p = NoiseParams::uniform(self.t1, self.t2, gate_error, self.gate_time_1q)?;
        p.gate_time_2q = self.gate_time_2q;
        if let Some(p1) = self.gate_error_1q {
            p.gate_error_1q = p1;
        }
        Ok(p.with_t2_convention(self.t2_convention).with_spam(self.spam).validated()?)
    }

    pub fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            arm: self.arm,
            clamp: self.clamp,
            ..ExperimentConfig::default()
        }
    }

    pub fn qec_code(&self) -> QecCode {
        QecCode::new(self.code)
    }

    pub fn graph(&self) -> Result<CouplingGraph> {
        layout_for(self.layout, &self.qec_code())
    }

    /// Canonical `(key, value)` listing; the basis of the config hash.
    pub fn canonical(&self) -> Vec<(&'static str, String)> {
        vec![
            ("code", self.code.name().to_string()),
            ("state", self.state.to_string()),
            ("layout", self.layout.name().to_string()),
            ("memory_times", fmt_grid(&self.memory_times)),
            ("gate_errors", fmt_grid(&self.gate_errors)),
            ("gate_error_1q", self.gate_error_1q.map_or("grid".into(), fmt_float)),
            ("gate_time_1q", fmt_float(self.gate_time_1q)),
            ("gate_time_2q", fmt_float(self.gate_time_2q)),
            ("t1", fmt_float(self.t1)),
            ("t2", fmt_float(self.t2)),
            (
                "t2_convention",
                match self.t2_convention {
                    T2Convention::Paper => "paper",
                    T2Convention::Standard => "standard",
                }
                .into(),
            ),
            (
                "physical_arm",
                match self.arm {
                    PhysicalArm::MatchedTime => "matched",
                    PhysicalArm::MemoryOnly => "memory_only",
                }
                .into(),
            ),
            (
                "clamp",
                match self.clamp {
                    ClampRule::Either => "either",
                    ClampRule::Both => "both",
                    ClampRule::Off => "off",
                }
                .into(),
            ),
            ("spam_prep", fmt_float(self.spam.prep_flip)),
            ("spam_meas", fmt_float(self.spam.meas_flip)),
        ]
    }
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(src: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key = value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&src)
}
