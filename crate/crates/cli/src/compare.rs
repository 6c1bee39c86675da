//! Linear model against the density-matrix simulation.

use std::fmt::Write as _;

use logiq::linmodel::{critical_times, gain_linear, numeric_critical_times, LinParams};
use logiq::qec::{CodeName, GainPoint, PhysicalArm};

use crate::error::{invalid, Result};
use crate::spec::{fmt_float, SweepSpec};
use crate::sweep::run_sweep_labeled;

/// A memory time where a curve changes sign, linearly interpolated, with
/// the physical fidelity there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub memory_time: f64,
    pub fidelity: f64,
    /// True when the curve goes from `<= 0` to `> 0`.
    pub rising: bool,
}

/// Sign changes of `f` along `xs`, with `fid` interpolated at each.
pub fn crossings(xs: &[f64], f: &[f64], fid: &[f64]) -> Vec<Crossing> {
    let mut out = Vec::new();
    for i in 1..xs.len() {
        let (a, b) = (f[i - 1], f[i]);
        if (a <= 0.0) != (b <= 0.0) {
            let w = if a == b { 0.0 } else { a / (a - b) };
            out.push(Crossing {
                memory_time: xs[i - 1] + w * (xs[i] - xs[i - 1]),
                fidelity: fid[i - 1] + w * (fid[i] - fid[i - 1]),
                rising: b > 0.0,
            });
        }
    }
    out
}

pub fn raw_crossings(points: &[GainPoint]) -> Vec<Crossing> {
    let xs: Vec<f64> = points.iter().map(|p| p.memory_time).collect();
    let g: Vec<f64> = points.iter().map(|p| p.raw_gain).collect();
    let fp: Vec<f64> = points.iter().map(|p| p.fidelity_physical).collect();
    crossings(&xs, &g, &fp)
}

/// Interval where `f > 0`: from the first rising crossing (or the grid start
/// when already positive) to the next falling crossing (or the grid end).
pub fn positive_interval(xs: &[f64], f: &[f64]) -> Option<(f64, f64)> {
    let zeros = vec![0.0; xs.len()];
    let cs = crossings(xs, f, &zeros);
    let start = if f[0] > 0.0 {
        xs[0]
    } else {
        cs.iter().find(|c| c.rising)?.memory_time
    };
    let end = cs
        .iter()
        .find(|c| !c.rising && c.memory_time > start)
        .map_or(*xs.last().unwrap(), |c| c.memory_time);
    Some((start, end))
}

#[derive(Debug, Clone)]
pub struct CompareSpec {
    pub sweep: SweepSpec,
    /// Error rate per unit time of the linear model.
    pub p_e: f64,
    /// QEC time used by the linear model; `None` takes the scheduled time.
    pub t_qec: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub points: Vec<GainPoint>,
    pub linear_gain: Vec<f64>,
    pub t_qec: f64,
    pub simulated_window: Option<(f64, f64)>,
    /// Numeric roots of the exact linear model, if it has a positive window.
    pub linear_window: Option<(f64, f64)>,
    /// Closed-form `t_min`, `t_max`.
    pub closed_form: Option<(f64, f64)>,
    /// Closed-form `t_min` at or before the simulated onset.
    pub lower_bounds_onset: Option<bool>,
}

impl CompareReport {
    /// Onset and end differences between the simulated and closed-form
    /// windows.
    pub fn max_abs_delta(&self) -> Option<(f64, f64)> {
        let (s, l) = (self.simulated_window?, self.closed_form?);
        Some(((s.0 - l.0).abs(), (s.1 - l.1).abs()))
    }

    pub fn to_csv(&self, n: usize, p_e: f64) -> String {
        let mut out = String::from("memory_time,fidelity_physical,fidelity_logical,raw_gain,gain,linear_fidelity_physical,linear_fidelity_logical,linear_gain\n");
        for (p, &lg) in self.points.iter().zip(&self.linear_gain) {
            let lp = LinParams::new(p_e, self.t_qec, p.memory_time, n).expect("validated");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                fmt_float(p.memory_time),
                fmt_float(p.fidelity_physical),
                fmt_float(p.fidelity_logical),
                fmt_float(p.raw_gain),
                fmt_float(p.gain),
                fmt_float(logiq::linmodel::fidelity_physical(&lp)),
                fmt_float(logiq::linmodel::fidelity_logical(&lp)),
                fmt_float(lg),
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let w = |o: Option<(f64, f64)>| o.map_or("none".to_string(), |(a, b)| format!("[{a:.4}, {b:.4}]"));
        let mut s = format!(
            "t_qec = {:.4}\nsimulated window = {}\nlinear window (numeric) = {}\nlinear window (closed form) = {}\n",
            self.t_qec,
            w(self.simulated_window),
            w(self.linear_window),
            w(self.closed_form)
        );
        if let Some((d0, d1)) = self.max_abs_delta() {
            let _ = writeln!(s, "crossing deltas = {d0:.4} (onset), {d1:.4} (end)");
        }
        if let Some(b) = self.lower_bounds_onset {
            let _ = writeln!(s, "linear t_min lower-bounds simulated onset: {b}");
        }
        s
    }
}

pub fn code_size(code: CodeName) -> usize {
    match code {
        CodeName::Combined5 => 5,
        _ => 3,
    }
}

/// The simulated arm uses the memory-only physical reference, matching the
/// linear model's `F_P = 1 - P_M`.
pub fn compare_linear(cs: &CompareSpec) -> Result<CompareReport> {
    if cs.sweep.gate_errors.len() != 1 {
        return Err(invalid("compare-linear takes a single gate error"));
    }
    if !(cs.p_e.is_finite() && cs.p_e >= 0.0) {
        return Err(invalid(format!("p_e must be finite and >= 0, got {}", cs.p_e)));
    }
    let mut sweep = cs.sweep.clone();
    sweep.arm = PhysicalArm::MemoryOnly;
    let surface = run_sweep_labeled(&sweep, "compare")?;
    let points = surface.points;
    let t_qec = cs.t_qec.unwrap_or(points[0].qec_time);
    let n = code_size(sweep.code);
    let base = LinParams::new(cs.p_e, t_qec, 0.0, n)?;
    let xs: Vec<f64> = points.iter().map(|p| p.memory_time).collect();
    let linear_gain: Vec<f64> = xs.iter().map(|&t| gain_linear(&base.with_memory(t))).collect();
    // clamped: the unclamped curves need not cross back once F_P has decayed
    let gain: Vec<f64> = points.iter().map(|p| p.gain).collect();
    let simulated_window = positive_interval(&xs, &gain);
    let (linear_window, closed_form) = if cs.p_e > 0.0 {
        // the exact model can lack a positive window where the closed forms still give one
        let lw = match numeric_critical_times(&base) {
            Ok(nt) => (nt.max_gain > 0.0).then_some((nt.t_min, nt.t_max)),
            Err(logiq::Error::Undefined(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let ct = critical_times(&base)?;
        (lw, Some((ct.t_min, ct.t_max)))
    } else {
        (None, None)
    };
    let lower_bounds_onset = match (closed_form, simulated_window) {
        (Some(l), Some(s)) => Some(l.0 <= s.0),
        _ => None,
    };
    Ok(CompareReport {
        points,
        linear_gain,
        t_qec,
        simulated_window,
        linear_window,
        closed_form,
        lower_bounds_onset,
    })
}
