//! Time-layer scheduling and noisy execution.
//!
//! Each layer is executed as: every gate in the layer as a faulty-gate
//! channel, then relaxation followed by dephasing on every qubit for the
//! layer's duration. Gate-active qubits decohere during their own gate.
//!
//! With [`OneQubitTiming::Absorbed`] (the default) 1-qubit gates are
//! applied at the start of the next layer on their qubit and take no slot
//! of their own, so wall-clock time is set by 2-qubit gates and waits.
//! At uniform gate time this gives the reference QEC durations: 10 slots
//! for the 3-qubit bit-flip code and 18 for the 5-qubit code.
//! [`OneQubitTiming::Slotted`] schedules every gate as its own op.

use std::collections::HashMap;

use super::{Circuit, GateKind, GateOp};
use crate::error::{validation, Result};
use crate::matrix::LocalIndex;
use crate::noise::{faulty_gate_channel, IdleChannels, NoiseParams};
use crate::qstate::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OneQubitTiming {
    #[default]
    Absorbed,
    Slotted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// 1-qubit gates applied at the start of the layer (absorbed timing).
    pub pre: Vec<GateOp>,
    /// Gates occupying the layer; targets are pairwise disjoint.
    pub ops: Vec<GateOp>,
    pub duration: f64,
}

impl Layer {
    fn empty() -> Self {
        Self {
            pre: Vec::new(),
            ops: Vec::new(),
            duration: 0.0,
        }
    }

    pub fn is_wait(&self) -> bool {
        self.ops.iter().any(|g| g.kind.is_wait())
    }

    /// All gates in execution order.
    pub fn gates(&self) -> impl Iterator<Item = &GateOp> {
        self.pre.iter().chain(self.ops.iter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub n_qubits: usize,
    pub layers: Vec<Layer>,
}

impl Schedule {
    pub fn total_duration(&self) -> f64 {
        self.layers.iter().map(|l| l.duration).sum()
    }

    /// Time spent in wait layers.
    pub fn wait_duration(&self) -> f64 {
        self.layers.iter().filter(|l| l.is_wait()).map(|l| l.duration).sum()
    }

    /// Time spent outside wait layers: the QEC time of a code circuit.
    pub fn active_duration(&self) -> f64 {
        self.layers.iter().filter(|l| !l.is_wait()).map(|l| l.duration).sum()
    }

    /// Number of non-wait layers with nonzero duration.
    pub fn active_slots(&self) -> usize {
        self.layers.iter().filter(|l| !l.is_wait() && l.duration > 0.0).count()
    }

    /// True when no qubit appears twice among a layer's ops.
    pub fn is_well_formed(&self) -> bool {
        self.layers.iter().all(|l| {
            let mut seen = vec![false; self.n_qubits];
            l.ops.iter().flat_map(|g| g.targets.iter()).all(|&q| !std::mem::replace(&mut seen[q], true))
        })
    }
}

/// Wall-clock duration of a single op.
pub fn op_duration(kind: &GateKind, params: &NoiseParams) -> f64 {
    match *kind {
        GateKind::Wait(d) => d,
        GateKind::Cnot | GateKind::Cz => params.gate_time_2q,
        GateKind::Swap => 3.0 * params.gate_time_2q,
        GateKind::Toffoli => 6.0 * params.gate_time_2q,
        _ => params.gate_time_1q,
    }
}

pub fn schedule(c: &Circuit, params: &NoiseParams) -> Schedule {
    schedule_with(c, params, OneQubitTiming::default())
}

/// Greedy ASAP layering: each op enters the earliest layer in which all of
/// its qubits are free. A wait spans the whole register.
pub fn schedule_with(c: &Circuit, params: &NoiseParams, timing: OneQubitTiming) -> Schedule {
    let n = c.n_qubits();
    let mut frontier = vec![0usize; n];
    let mut layers: Vec<Layer> = Vec::new();
    let ensure = |layers: &mut Vec<Layer>, l: usize| {
        while layers.len() <= l {
            layers.push(Layer::empty());
        }
    };
    for g in c.ops() {
        if g.kind.is_wait() {
            let l = frontier.iter().copied().max().unwrap_or(0);
            ensure(&mut layers, l);
            layers[l].ops.push(g.clone());
            frontier.iter_mut().for_each(|f| *f = l + 1);
        } else if g.arity() == 1 && timing == OneQubitTiming::Absorbed {
            let l = frontier[g.targets[0]];
            ensure(&mut layers, l);
            layers[l].pre.push(g.clone());
        } else {
            let l = g.targets.iter().map(|&q| frontier[q]).max().unwrap_or(0);
            ensure(&mut layers, l);
            layers[l].ops.push(g.clone());
            for &q in &g.targets {
                frontier[q] = l + 1;
            }
        }
    }
    for layer in &mut layers {
        layer.duration = layer
            .ops
            .iter()
            .map(|g| op_duration(&g.kind, params))
            .fold(0.0, f64::max);
    }
    Schedule { n_qubits: n, layers }
}

/// Schedules `c` and runs it from `initial`.
pub fn run(c: &Circuit, initial: &DensityMatrix, params: &NoiseParams) -> Result<DensityMatrix> {
    run_schedule(&schedule(c, params), initial, params)
}

/// Executes a schedule: faulty gates, then idle decoherence for the layer.
pub fn run_schedule(s: &Schedule, initial: &DensityMatrix, params: &NoiseParams) -> Result<DensityMatrix> {
    if initial.n_qubits() != s.n_qubits {
        return Err(validation(format!(
            "schedule is over {} qubits, state has {}",
            s.n_qubits,
            initial.n_qubits()
        )));
    }
    let all: Vec<usize> = (0..s.n_qubits).collect();
    let mut idle_cache: HashMap<u64, IdleChannels> = HashMap::new();
    let mut rho = initial.clone();
    for layer in &s.layers {
        for g in layer.gates() {
            let Some(u) = g.kind.matrix() else { continue };
            let p = params.gate_error(g.arity());
            let ch = faulty_gate_channel(&u, p)?;
            let idx = LocalIndex::new(s.n_qubits, &g.targets)?;
            rho = rho.apply_kraus_indexed(ch.elements(), &idx);
        }
        if layer.duration > 0.0 {
            let idle = match idle_cache.entry(layer.duration.to_bits()) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(e) => e.insert(IdleChannels::new(layer.duration, params)?),
            };
            rho = idle.apply(&rho, &all)?;
        }
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{decompose_to_primitives, Phase};
    use crate::qstate::PureState;
    use approx::assert_abs_diff_eq;

    fn params() -> NoiseParams {
        NoiseParams::noiseless(1e-3)
    }

    #[test]
    fn empty_circuit_has_empty_schedule() {
        let s = schedule(&Circuit::new(3), &params());
        assert!(s.layers.is_empty());
        assert_eq!(s.total_duration(), 0.0);
    }

    #[test]
    fn disjoint_one_qubit_gates_share_a_slot() {
        let mut c = Circuit::new(2);
        c.h(0).x(1);
        let s = schedule_with(&c, &params(), OneQubitTiming::Slotted);
        assert_eq!(s.layers.len(), 1);
        assert_abs_diff_eq!(s.total_duration(), 1e-3);
    }

    #[test]
    fn encode_cnots_take_two_layers() {
        let mut c = Circuit::new(3);
        c.cnot(0, 1).cnot(0, 2);
        let s = schedule(&c, &params());
        assert_eq!(s.layers.len(), 2);
        assert!(s.is_well_formed());
    }

    #[test]
    fn bitflip_qec_time_is_ten_slots() {
        let mut c = Circuit::new(3);
        c.cnot(0, 1).cnot(0, 2);
        c.set_phase(Phase::Memory).wait(0.3);
        c.set_phase(Phase::DetectCorrect).cnot(0, 1).cnot(0, 2).toffoli(1, 2, 0);
        let s = schedule(&decompose_to_primitives(&c), &params());
        assert!(s.is_well_formed());
        assert_abs_diff_eq!(s.active_duration(), 0.010, epsilon = 1e-15);
        assert_abs_diff_eq!(s.wait_duration(), 0.3);
    }

    #[test]
    fn slotted_timing_charges_one_qubit_layers() {
        let mut c = Circuit::new(2);
        c.cnot(0, 1);
        let d = decompose_to_primitives(&c);
        assert_abs_diff_eq!(schedule(&d, &params()).total_duration(), 1e-3);
        assert_abs_diff_eq!(schedule_with(&d, &params(), OneQubitTiming::Slotted).total_duration(), 3e-3);
    }

    #[test]
    fn absorbed_gates_keep_program_order() {
        // H on qubit 1 must land after the first CZ and before the second
        let mut c = Circuit::new(2);
        c.cz(0, 1).h(1).cz(0, 1);
        let s = schedule(&c, &params());
        assert_eq!(s.layers.len(), 2);
        assert_eq!(s.layers[1].pre.len(), 1);
        let out = run_schedule(&s, &DensityMatrix::basis(2, 0b11).unwrap(), &params()).unwrap();
        let exact = DensityMatrix::basis(2, 0b11).unwrap().apply_unitary(&c.unitary().unwrap(), &[0, 1]).unwrap();
        assert!(out.approx_eq(&exact, 1e-12));
    }

    #[test]
    fn faulty_x_without_decoherence() {
        let mut c = Circuit::new(1);
        c.x(0);
        let p = NoiseParams::noiseless(1e-3).with_gate_error(0.1);
        let out = run(&c, &DensityMatrix::basis(1, 0).unwrap(), &p).unwrap();
        assert_abs_diff_eq!(out.fidelity_with_pure(&PureState::one()).unwrap(), 0.9, epsilon = 1e-12);
    }

    #[test]
    fn wait_on_excited_state_follows_t1_decay() {
        let mut c = Circuit::new(1);
        c.wait(0.4);
        let p = NoiseParams::uniform(1.0, 1.0, 0.0, 1e-3).unwrap();
        let out = run(&c, &DensityMatrix::basis(1, 1).unwrap(), &p).unwrap();
        assert_abs_diff_eq!(out.fidelity_with_pure(&PureState::one()).unwrap(), (-0.4f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn noiseless_run_is_unitary_evolution() {
        let mut c = Circuit::new(3);
        c.h(0).cnot(0, 1).toffoli(0, 1, 2).swap(0, 2);
        let init = DensityMatrix::from_pure(
            &PureState::bloch(0.3, 0.2).tensor(&PureState::bloch(1.1, 2.0)).tensor(&PureState::zero()),
        )
        .unwrap();
        let out = run(&decompose_to_primitives(&c), &init, &params()).unwrap();
        let exact = init.apply_unitary(&c.unitary().unwrap(), &[0, 1, 2]).unwrap();
        assert!(out.approx_eq(&exact, 1e-12));
    }
}
