//! Linear approximation model of logical and physical fidelity.
//!
//! Errors are independent events with probability `p_e` per unit time, so
//! a memory interval `t_memory` fails with `P_M = p_e t_memory` and the QEC
//! circuitry with `P_QEC = p_e t_qec`. A code of `n` qubits survives at
//! most one memory error and no QEC error.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{validation, Error, Result};

/// Root of `(1-P)^3 (4P+1) = 1` on `(0, 1)`, as printed.
pub const MAX_ROOT_PRINTED: f64 = 0.1311;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinParams {
    pub p_e: f64,
    pub t_qec: f64,
    pub t_memory: f64,
    pub n: usize,
}

impl LinParams {
    pub fn new(p_e: f64, t_qec: f64, t_memory: f64, n: usize) -> Result<Self> {
        for (name, v) in [("p_e", p_e), ("t_qec", t_qec), ("t_memory", t_memory)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(validation(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if n != 3 && n != 5 {
            return Err(validation(format!("code size must be 3 or 5, got {n}")));
        }
        Ok(Self {
            p_e,
            t_qec,
            t_memory,
            n,
        })
    }

    pub fn with_memory(self, t_memory: f64) -> Self {
        Self { t_memory, ..self }
    }

    /// `P_M`, clamped to 1.
    pub fn p_memory(&self) -> f64 {
        clamp_probability(self.p_e * self.t_memory, "P_M")
    }

    /// `P_QEC`, clamped to 1.
    pub fn p_qec(&self) -> f64 {
        clamp_probability(self.p_e * self.t_qec, "P_QEC")
    }
}

fn clamp_probability(p: f64, name: &str) -> f64 {
    static WARNED: AtomicBool = AtomicBool::new(false);
    if p > 1.0 {
        if !WARNED.swap(true, Ordering::Relaxed) {
            log::warn!("{name} = {p} exceeds 1; clamped, the linear model does not apply here");
        }
        1.0
    } else {
        p
    }
}

/// `F_P = 1 - P_M`.
pub fn fidelity_physical(lp: &LinParams) -> f64 {
    1.0 - lp.p_memory()
}

/// Logical fidelity: no more than one memory error, no QEC error, plus the
/// `(P_M/n)(P_QEC/n)` cancellation term.
pub fn fidelity_logical(lp: &LinParams) -> f64 {
    let pm = lp.p_memory();
    let pq = lp.p_qec();
    let n = lp.n as i32;
    let at_most_one = (1.0 - pm).powi(n) + f64::from(n) * pm * (1.0 - pm).powi(n - 1);
    let qec_fail = 1.0 - (1.0 - pq).powi(n);
    1.0 - (1.0 - at_most_one) - qec_fail + (pm / f64::from(n)) * (pq / f64::from(n))
}

/// `G = F_L - F_P`, unclamped.
pub fn gain_linear(lp: &LinParams) -> f64 {
    fidelity_logical(lp) - fidelity_physical(lp)
}

/// Memory-time landmarks of the gain curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalTimes {
    pub t_min: f64,
    pub t_max: f64,
    pub t_best: f64,
    pub t_cycle: f64,
}

/// Closed-form approximations for the positive-gain window, the best
/// memory time, and the QEC cycle length.
pub fn critical_times(lp: &LinParams) -> Result<CriticalTimes> {
    if lp.p_e <= 0.0 {
        return Err(Error::Undefined("critical times need p_e > 0".into()));
    }
    let pq = lp.p_qec();
    Ok(CriticalTimes {
        t_min: 5.0 * lp.t_qec,
        t_max: MAX_ROOT_PRINTED / lp.p_e,
        t_best: (0.06 - 0.003 * pq) / lp.p_e,
        t_cycle: (0.06 + 0.997 * pq) / lp.p_e,
    })
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Option<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo < 1e-15 * hi.abs().max(1.0) {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Numeric root of `(1-P)^3 (4P+1) = 1` on `(0, 1)`, away from the trivial
/// root at 0.
pub fn max_root_probability() -> f64 {
    bisect(0.05, 0.5, |p| (1.0 - p).powi(3) * (4.0 * p + 1.0) - 1.0).expect("sign change on [0.05, 0.5]")
}

/// Exact roots and argmax of the gain curve in memory time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericTimes {
    pub t_min: f64,
    pub t_max: f64,
    pub t_best: f64,
    pub max_gain: f64,
}

/// Solves `G = 0` and `G' = 0` on the exact fidelity expressions. The
/// search covers `P_M` in `[0, 0.5]`, which contains the positive-gain
/// window whenever one exists.
pub fn numeric_critical_times(lp: &LinParams) -> Result<NumericTimes> {
    if lp.p_e <= 0.0 {
        return Err(Error::Undefined("critical times need p_e > 0".into()));
    }
    let g = |t: f64| gain_linear(&lp.with_memory(t));
    // G rises to a single maximum below P_M = 0.25, then falls
    let (mut a, mut b) = (0.0, 0.25 / lp.p_e);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-12 * b.max(1.0) {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if g(c) >= g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let t_best = 0.5 * (a + b);
    let max_gain = g(t_best);
    if max_gain <= 0.0 {
        return Err(Error::Undefined(format!(
            "no positive gain window (max gain {max_gain:.3e})"
        )));
    }
    let t_min = bisect(0.0, t_best, g).ok_or_else(|| Error::Undefined("gain is positive at zero memory time".into()))?;
    let t_max = bisect(t_best, 0.5 / lp.p_e, g).ok_or_else(|| Error::Undefined("no upper gain root".into()))?;
    Ok(NumericTimes {
        t_min,
        t_max,
        t_best,
        max_gain,
    })
}
