//! Measurement-free repetition codes and the logical-vs-physical gain
//! experiment.
//!
//! Qubit 0 is the data qubit. Ancillas are numbered A1 = 1, A2 = 2 and, for
//! the 5-qubit code, A3 = 3, A4 = 4. Correction is coherent: Toffolis
//! controlled by the ancilla syndrome flip the data qubit back, and the
//! ancillas are left holding the syndrome.

use std::fmt;

use crate::circuit::{decompose_to_primitives, run_schedule, schedule_with, Circuit, GateKind, OneQubitTiming, Phase, Schedule};
use crate::error::{validation, Error, Result};
use crate::layout::{route, CouplingGraph, Placement};
use crate::noise::{bit_flip, idle_decoherence, NoiseParams};
use crate::qstate::{DensityMatrix, PureState};

/// Noiseless fidelity threshold for "corrected".
pub const CORRECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeName {
    Bitflip3,
    Phaseflip3,
    Combined5,
}

impl CodeName {
    pub const ALL: [CodeName; 3] = [CodeName::Bitflip3, CodeName::Phaseflip3, CodeName::Combined5];

    pub fn name(&self) -> &'static str {
        match self {
            CodeName::Bitflip3 => "bitflip3",
            CodeName::Phaseflip3 => "phaseflip3",
            CodeName::Combined5 => "combined5",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for CodeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QecCode {
    name: CodeName,
}

/// Looks a code up by name.
pub fn build_code(name: &str) -> Result<QecCode> {
    CodeName::parse(name)
        .map(QecCode::new)
        .ok_or_else(|| validation(format!("unknown code '{name}' (expected bitflip3, phaseflip3 or combined5)")))
}

impl QecCode {
    pub fn new(name: CodeName) -> Self {
        Self { name }
    }

    pub fn name(&self) -> CodeName {
        self.name
    }

    pub fn n_qubits(&self) -> usize {
        match self.name {
            CodeName::Bitflip3 | CodeName::Phaseflip3 => 3,
            CodeName::Combined5 => 5,
        }
    }

    pub fn data_index(&self) -> usize {
        0
    }

    /// Encoding subcircuit, tagged [`Phase::Encode`].
    pub fn encode(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits());
        c.set_phase(Phase::Encode);
        match self.name {
            CodeName::Bitflip3 => {
                c.cnot(0, 1).cnot(0, 2);
            }
            CodeName::Phaseflip3 => {
                c.cnot(0, 1).cnot(0, 2).h(0).h(1).h(2);
            }
            CodeName::Combined5 => {
                // inner phase-flip block on D, A1, A2, then the outer
                // bit-flip repetition of D onto A3, A4
                c.cnot(0, 1).cnot(0, 2).h(0).h(1).h(2);
                c.cnot(0, 3).cnot(0, 4);
            }
        }
        c
    }

    /// Detection and correction subcircuit, tagged [`Phase::DetectCorrect`].
    pub fn detect_correct(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits());
        c.set_phase(Phase::DetectCorrect);
        match self.name {
            CodeName::Bitflip3 => {
                c.cnot(0, 1).cnot(0, 2).toffoli(1, 2, 0);
            }
            CodeName::Phaseflip3 => {
                c.h(0).h(1).h(2).cnot(0, 1).cnot(0, 2).toffoli(1, 2, 0);
            }
            CodeName::Combined5 => {
                // the first Toffoli undoes an X on D; the Hadamards turn a
                // remaining Z into an X for the second
                c.cnot(0, 3).cnot(0, 4).toffoli(3, 4, 0);
                c.h(0).h(1).h(2).cnot(0, 1).cnot(0, 2).toffoli(1, 2, 0);
            }
        }
        c
    }

    /// Encode, idle for `memory_time`, then detect and correct.
    pub fn circuit(&self, memory_time: f64) -> Result<Circuit> {
        let mut c = self.encode();
        c.set_phase(Phase::Memory);
        c.push(GateKind::Wait(memory_time), &[])?;
        c.extend_from(&self.detect_correct())?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn gate(&self) -> GateKind {
        match self {
            Pauli::X => GateKind::X,
            Pauli::Y => GateKind::Y,
            Pauli::Z => GateKind::Z,
        }
    }
}

/// Noiselessly injects `error` on the data qubit between encode and
/// correct and reports whether the data qubit comes back intact. A generic
/// Bloch state is used so that no Pauli acts trivially on it.
pub fn correctable_error_check(code: &QecCode, error: Pauli) -> Result<bool> {
    let input = PureState::bloch(1.1, 0.7);
    Ok(injected_fidelity(code, Some(error), &input)? > 1.0 - CORRECTION_TOL)
}

/// Data-qubit fidelity after a noiseless encode, optional Pauli on data,
/// and detect/correct.
pub fn injected_fidelity(code: &QecCode, error: Option<Pauli>, input: &PureState) -> Result<f64> {
    if input.n_qubits() != 1 {
        return Err(validation("data state must be a single qubit"));
    }
    let mut c = code.encode();
    c.set_phase(Phase::Memory);
    if let Some(e) = error {
        c.push(e.gate(), &[code.data_index()])?;
    }
    c.extend_from(&code.detect_correct())?;
    let rho = DensityMatrix::from_pure(&register_state(input, code.n_qubits(), code.data_index())?)?;
    let out = rho.apply_unitary(&c.unitary()?, &(0..code.n_qubits()).collect::<Vec<_>>())?;
    out.partial_trace(&[code.data_index()])?.fidelity_with_pure(input)
}

/// `input` on `data_site`, `|0>` everywhere else.
fn register_state(input: &PureState, n: usize, data_site: usize) -> Result<PureState> {
    let mut psi: Option<PureState> = None;
    for s in 0..n {
        let f = if s == data_site { input.clone() } else { PureState::zero() };
        psi = Some(match psi {
            None => f,
            Some(p) => p.tensor(&f),
        });
    }
    psi.ok_or_else(|| validation("empty register"))
}

/// How long the physical reference qubit idles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhysicalArm {
    /// QEC time plus memory time, the same wall-clock span as the logical arm.
    #[default]
    MatchedTime,
    /// Memory time only.
    MemoryOnly,
}

/// When a gain is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClampRule {
    /// `F_L < 0.75` or `F_P < 0.5`.
    #[default]
    Either,
    /// `F_L < 0.75` and `F_P < 0.5`.
    Both,
    /// Never clamp.
    Off,
}

impl ClampRule {
    pub fn apply(self, f_logical: f64, f_physical: f64) -> f64 {
        let (low_l, low_p) = (f_logical < 0.75, f_physical < 0.5);
        let clamp = match self {
            ClampRule::Either => low_l || low_p,
            ClampRule::Both => low_l && low_p,
            ClampRule::Off => false,
        };
        if clamp {
            0.0
        } else {
            f_logical - f_physical
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExperimentConfig {
    pub arm: PhysicalArm,
    pub clamp: ClampRule,
    pub timing: OneQubitTiming,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPoint {
    pub memory_time: f64,
    pub gate_error_prob: f64,
    /// Non-memory duration of the scheduled logical circuit.
    pub qec_time: f64,
    pub swaps: usize,
    pub fidelity_physical: f64,
    pub fidelity_logical: f64,
    /// `F_L - F_P` before clamping.
    pub raw_gain: f64,
    pub gain: f64,
}

/// The logical arm prepared for repeated runs at different memory times.
#[derive(Debug, Clone)]
pub struct LogicalArm {
    code: QecCode,
    placement: Placement,
    n_sites: usize,
    timing: OneQubitTiming,
    graph: CouplingGraph,
}

impl LogicalArm {
    pub fn new(code: &QecCode, layout: &CouplingGraph, timing: OneQubitTiming) -> Result<Self> {
        let placement = Placement::centered(code.n_qubits(), layout)?;
        Ok(Self {
            code: *code,
            n_sites: layout.n_sites(),
            placement,
            timing,
            graph: layout.clone(),
        })
    }

    /// Routes, decomposes, and schedules the code circuit for one memory
    /// time.
    pub fn prepare(&self, memory_time: f64, params: &NoiseParams) -> Result<PreparedArm> {
        let c = self.code.circuit(memory_time)?;
        let routed = route(&c, &self.graph, &self.placement)?;
        let prim = decompose_to_primitives(&routed.circuit);
        Ok(PreparedArm {
            schedule: schedule_with(&prim, params, self.timing),
            data_in: self.placement.site_of(self.code.data_index()),
            data_out: routed.final_placement.site_of(self.code.data_index()),
            swaps: routed.swaps,
        })
    }

    /// Runs the prepared circuit from `input` on the data site and `|0>`
    /// elsewhere and returns the data-qubit state, the QEC time, and the
    /// SWAP count.
    pub fn run(&self, input: &PureState, memory_time: f64, params: &NoiseParams) -> Result<(DensityMatrix, f64, usize)> {
        let arm = self.prepare(memory_time, params)?;
        let mut rho = DensityMatrix::from_pure(&arm.initial_state(input)?)?;
        if params.spam.prep_flip > 0.0 {
            let flip = bit_flip(params.spam.prep_flip)?;
            for s in 0..self.n_sites {
                rho = rho.apply_channel(&flip, &[s])?;
            }
        }
        let rho = run_schedule(&arm.schedule, &rho, params)?;
        let mut data = rho.partial_trace(&[arm.data_out])?;
        if params.spam.meas_flip > 0.0 {
            data = data.apply_channel(&bit_flip(params.spam.meas_flip)?, &[0])?;
        }
        Ok((data, arm.schedule.active_duration(), arm.swaps))
    }
}

/// A scheduled logical arm over the layout's sites.
#[derive(Debug, Clone)]
pub struct PreparedArm {
    pub schedule: Schedule,
    /// Site holding the data qubit before and after the circuit.
    pub data_in: usize,
    pub data_out: usize,
    pub swaps: usize,
}

impl PreparedArm {
    /// `input` on the data site, `|0>` on every other site.
    pub fn initial_state(&self, input: &PureState) -> Result<PureState> {
        register_state(input, self.schedule.n_qubits, self.data_in)
    }
}

/// Fidelity of a bare qubit idling for `duration` with the SPAM errors of
/// `params`.
pub fn physical_fidelity(input: &PureState, duration: f64, params: &NoiseParams) -> Result<f64> {
    let mut rho = DensityMatrix::from_pure(input)?;
    if params.spam.prep_flip > 0.0 {
        rho = rho.apply_channel(&bit_flip(params.spam.prep_flip)?, &[0])?;
    }
    rho = idle_decoherence(&rho, &[0], duration, params)?;
    if params.spam.meas_flip > 0.0 {
        rho = rho.apply_channel(&bit_flip(params.spam.meas_flip)?, &[0])?;
    }
    rho.fidelity_with_pure(input)
}

pub fn run_gain_experiment(
    code: &QecCode,
    initial_data: &PureState,
    memory_time: f64,
    params: &NoiseParams,
    layout: &CouplingGraph,
) -> Result<GainPoint> {
    run_gain_experiment_with(code, initial_data, memory_time, params, layout, &ExperimentConfig::default())
}

/// Logical arm versus a bare qubit at one memory time.
pub fn run_gain_experiment_with(
    code: &QecCode,
    initial_data: &PureState,
    memory_time: f64,
    params: &NoiseParams,
    layout: &CouplingGraph,
    cfg: &ExperimentConfig,
) -> Result<GainPoint> {
    if !(memory_time.is_finite() && memory_time >= 0.0) {
        return Err(validation(format!("memory time must be finite and >= 0, got {memory_time}")));
    }
    if initial_data.n_qubits() != 1 {
        return Err(validation("data state must be a single qubit"));
    }
    let params = params.validated()?;
    let arm = LogicalArm::new(code, layout, cfg.timing)?;
    let (data, qec_time, swaps) = arm.run(initial_data, memory_time, &params)?;
    let f_l = data.fidelity_with_pure(initial_data)?;
    let idle = match cfg.arm {
        PhysicalArm::MatchedTime => qec_time + memory_time,
        PhysicalArm::MemoryOnly => memory_time,
    };
    let f_p = physical_fidelity(initial_data, idle, &params)?;
    Ok(GainPoint {
        memory_time,
        gate_error_prob: params.gate_error_2q,
        qec_time,
        swaps,
        fidelity_physical: f_p,
        fidelity_logical: f_l,
        raw_gain: f_l - f_p,
        gain: cfg.clamp.apply(f_l, f_p),
    })
}

/// The largest memory-time interval of consecutive grid points with
/// positive gain, as `(first, last)`.
pub fn positive_window(points: &[GainPoint]) -> Option<(f64, f64)> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, p) in points.iter().enumerate() {
        match (p.gain > 0.0, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| i - s > b - a + 1) {
                    best = Some((s, i - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        let e = points.len() - 1;
        if best.is_none_or(|(a, b)| e - s > b - a) {
            best = Some((s, e));
        }
    }
    best.map(|(a, b)| (points[a].memory_time, points[b].memory_time))
}

impl From<CodeName> for QecCode {
    fn from(name: CodeName) -> Self {
        Self::new(name)
    }
}

impl std::str::FromStr for CodeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        build_code(s).map(|c| c.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{make_layout, LayoutKind};
    use approx::assert_abs_diff_eq;

    fn all(n: usize) -> CouplingGraph {
        make_layout(LayoutKind::AllToAll, n).unwrap()
    }

    #[test]
    fn unknown_code_is_rejected() {
        assert!(build_code("steane7").is_err());
        assert_eq!(build_code("combined5").unwrap().n_qubits(), 5);
    }

    #[test]
    fn bitflip_encodes_one_as_111() {
        let code = build_code("bitflip3").unwrap();
        let rho = DensityMatrix::basis(3, 0b100).unwrap();
        let out = rho.apply_unitary(&code.encode().unitary().unwrap(), &[0, 1, 2]).unwrap();
        assert!(out.approx_eq(&DensityMatrix::basis(3, 0b111).unwrap(), 1e-12));
    }

    #[test]
    fn phaseflip_encodes_zero_as_plus_plus_plus() {
        let code = build_code("phaseflip3").unwrap();
        let rho = DensityMatrix::basis(3, 0).unwrap();
        let out = rho.apply_unitary(&code.encode().unitary().unwrap(), &[0, 1, 2]).unwrap();
        let ppp = PureState::plus().tensor(&PureState::plus()).tensor(&PureState::plus());
        assert_abs_diff_eq!(out.fidelity_with_pure(&ppp).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn correction_table() {
        let expect = |code: CodeName, p: Pauli| match code {
            CodeName::Bitflip3 => p == Pauli::X,
            CodeName::Phaseflip3 => p == Pauli::Z,
            CodeName::Combined5 => true,
        };
        for name in CodeName::ALL {
            for p in Pauli::ALL {
                assert_eq!(correctable_error_check(&QecCode::new(name), p).unwrap(), expect(name, p), "{name} {p:?}");
            }
        }
    }

    #[test]
    fn noiseless_round_trip_is_identity() {
        for name in CodeName::ALL {
            let code = QecCode::new(name);
            let input = PureState::bloch(0.4, -1.3);
            assert_abs_diff_eq!(injected_fidelity(&code, None, &input).unwrap(), 1.0, epsilon = 1e-10);
            let g = run_gain_experiment(&code, &input, 0.0, &NoiseParams::noiseless(1e-3), &all(code.n_qubits())).unwrap();
            assert_abs_diff_eq!(g.fidelity_logical, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(g.gain, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn qec_times_at_uniform_gate_time() {
        let p = NoiseParams::noiseless(1e-3);
        let bf = run_gain_experiment(&QecCode::new(CodeName::Bitflip3), &PureState::one(), 0.1, &p, &all(3)).unwrap();
        assert_abs_diff_eq!(bf.qec_time, 0.010, epsilon = 1e-12);
        let c5 = run_gain_experiment(&QecCode::new(CodeName::Combined5), &PureState::one(), 0.1, &p, &all(5)).unwrap();
        assert_abs_diff_eq!(c5.qec_time, 0.018, epsilon = 1e-12);
    }

    #[test]
    fn clamp_rules() {
        assert_eq!(ClampRule::Either.apply(0.7, 0.6), 0.0);
        assert_eq!(ClampRule::Either.apply(0.8, 0.4), 0.0);
        assert_abs_diff_eq!(ClampRule::Both.apply(0.8, 0.4), 0.4);
        assert_eq!(ClampRule::Both.apply(0.7, 0.4), 0.0);
        assert_abs_diff_eq!(ClampRule::Either.apply(0.9, 0.95), -0.05);
    }

    #[test]
    fn positive_window_picks_longest_run() {
        let mk = |t: f64, g: f64| GainPoint {
            memory_time: t,
            gate_error_prob: 0.0,
            qec_time: 0.0,
            swaps: 0,
            fidelity_physical: 0.0,
            fidelity_logical: 0.0,
            raw_gain: g,
            gain: g,
        };
        let pts = [mk(0.0, -0.1), mk(0.1, 0.1), mk(0.2, -0.1), mk(0.3, 0.2), mk(0.4, 0.1), mk(0.5, 0.1)];
        assert_eq!(positive_window(&pts), Some((0.3, 0.5)));
        assert_eq!(positive_window(&pts[..1]), None);
    }

    #[test]
    fn rejects_negative_memory_time() {
        let code = QecCode::new(CodeName::Bitflip3);
        let r = run_gain_experiment(&code, &PureState::one(), -0.1, &NoiseParams::noiseless(1e-3), &all(3));
        assert!(matches!(r, Err(Error::Validation(_))));
    }
}
