//! Fixed oracle-equivalence configurations.

use logiq::circuit::OneQubitTiming;
use logiq::layout::LayoutKind;
use logiq::oracle::{sample_logical_fidelity, Estimate, TrajectoryConfig};
use logiq::qec::{run_gain_experiment, CodeName, QecCode};
use logiq::{NoiseParams, SpamParams, T2Convention};

use crate::error::Result;
use crate::spec::{layout_for, InitialState};

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub code: CodeName,
    pub layout: LayoutKind,
    pub state: InitialState,
    pub memory_time: f64,
    pub gate_error: f64,
    pub gate_time: f64,
    pub t1: f64,
    pub t2: f64,
    pub t2_convention: T2Convention,
    pub spam: SpamParams,
}

impl OracleConfig {
    pub fn label(&self) -> String {
        format!(
            "{}/{}/{} t={} p={}",
            self.code,
            self.layout.name(),
            self.state,
            self.memory_time,
            self.gate_error
        )
    }

    pub fn params(&self) -> Result<NoiseParams> {
        Ok(NoiseParams::uniform(self.t1, self.t2, self.gate_error, self.gate_time)?
            .with_t2_convention(self.t2_convention)
            .with_spam(self.spam))
    }
}

const NO_SPAM: SpamParams = SpamParams {
    prep_flip: 0.0,
    meas_flip: 0.0,
};

fn cfg(code: CodeName, layout: LayoutKind, state: InitialState, memory_time: f64, gate_error: f64) -> OracleConfig {
    OracleConfig {
        code,
        layout,
        state,
        memory_time,
        gate_error,
        gate_time: 1e-3,
        t1: 1.0,
        t2: 1.0,
        t2_convention: T2Convention::Paper,
        spam: NO_SPAM,
    }
}

/// Ten configurations spanning all codes, layouts, T2 conventions and SPAM.
pub fn fixed_configs() -> Vec<OracleConfig> {
    use CodeName::*;
    use InitialState::*;
    use LayoutKind::*;
    let rx = Rx(std::f64::consts::FRAC_PI_4);
    vec![
        cfg(Bitflip3, AllToAll, One, 0.3, 1e-3),
        cfg(Bitflip3, Linear, rx, 0.1, 1e-2),
        cfg(Phaseflip3, AllToAll, Plus, 0.2, 1e-3),
        OracleConfig {
            t2: 0.6,
            t2_convention: T2Convention::Standard,
            ..cfg(Phaseflip3, XLayout, Minus, 0.15, 5e-3)
        },
        cfg(Combined5, AllToAll, One, 0.5, 1e-3),
        cfg(Combined5, XLayout, One, 0.3, 1e-2),
        cfg(Combined5, Linear, rx, 0.2, 1e-3),
        OracleConfig {
            t2: 0.8,
            ..cfg(Combined5, AllToAll, Plus, 0.1, 3e-2)
        },
        OracleConfig {
            spam: SpamParams {
                prep_flip: 0.02,
                meas_flip: 0.03,
            },
            ..cfg(Combined5, Linear, One, 0.25, 5e-3)
        },
        OracleConfig {
            t1: 0.7,
            t2: 0.5,
            gate_time: 2e-3,
            t2_convention: T2Convention::Standard,
            spam: SpamParams {
                prep_flip: 0.01,
                meas_flip: 0.02,
            },
            ..cfg(Bitflip3, XLayout, Zero, 0.4, 2e-2)
        },
    ]
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub config: OracleConfig,
    pub exact: f64,
    pub estimate: Estimate,
}

impl OracleResult {
    pub fn agrees(&self, k: f64) -> bool {
        self.estimate.agrees_with(self.exact, k)
    }
}

pub fn check_config(c: &OracleConfig, n_shots: usize, seed: u64) -> Result<OracleResult> {
    let code = QecCode::new(c.code);
    let graph = layout_for(c.layout, &code)?;
    let params = c.params()?;
    let input = c.state.state();
    let exact = run_gain_experiment(&code, &input, c.memory_time, &params, &graph)?.fidelity_logical;
    let tc = TrajectoryConfig::new(n_shots, seed)?;
    let estimate =
        sample_logical_fidelity(&code, &input, c.memory_time, &params, &graph, OneQubitTiming::Absorbed, &tc)?;
    Ok(OracleResult {
        config: *c,
        exact,
        estimate,
    })
}

/// Per-config seeds derive from `seed` so configs use distinct streams.
pub fn run_oracle_check(n_shots: usize, seed: u64) -> Result<Vec<OracleResult>> {
    fixed_configs()
        .iter()
        .enumerate()
        .map(|(i, c)| check_config(c, n_shots, seed.wrapping_add(i as u64)))
        .collect()
}
