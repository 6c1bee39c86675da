//! Gate-level circuit IR.
//!
//! A [`Circuit`] is a time-ordered list of [`GateOp`]s over numbered qubits,
//! each tagged with the QEC [`Phase`] it belongs to. Passes in
//! [`decompose`] lower it to the CZ + 1-qubit primitive set, [`schedule`]
//! packs it into time layers, and [`schedule::run`] evolves a density
//! matrix through it.

pub mod decompose;
pub mod schedule;
pub mod text;

use std::fmt;
use std::ops::Range;

use crate::error::{validation, Error, Result};
use crate::gates;
use crate::matrix::{embed, ComplexMatrix};

pub use decompose::{cancel_adjacent_inverses, decompose_to_primitives, decompose_toffoli, toffoli_template};
pub use schedule::{run, run_schedule, schedule, schedule_with, Layer, OneQubitTiming, Schedule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Cnot,
    Cz,
    Swap,
    Toffoli,
    /// Idle the whole register for the given duration.
    Wait(f64),
}

impl GateKind {
    /// Number of targets the gate takes; `Wait` takes none and spans the
    /// register.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Swap => 2,
            GateKind::Toffoli => 3,
            GateKind::Wait(_) => 0,
            _ => 1,
        }
    }

    pub fn is_wait(&self) -> bool {
        matches!(self, GateKind::Wait(_))
    }

    /// Local unitary; `None` for `Wait`.
    pub fn matrix(&self) -> Option<ComplexMatrix> {
        Some(match *self {
            GateKind::X => gates::x(),
            GateKind::Y => gates::y(),
            GateKind::Z => gates::z(),
            GateKind::H => gates::h(),
            GateKind::S => gates::s(),
            GateKind::Sdg => gates::sdg(),
            GateKind::T => gates::t(),
            GateKind::Tdg => gates::tdg(),
            GateKind::Rx(t) => gates::rx(t),
            GateKind::Ry(t) => gates::ry(t),
            GateKind::Rz(t) => gates::rz(t),
            GateKind::Cnot => gates::cnot(),
            GateKind::Cz => gates::cz(),
            GateKind::Swap => gates::swap(),
            GateKind::Toffoli => gates::toffoli(),
            GateKind::Wait(_) => return None,
        })
    }

    /// Lower-case mnemonic used by the text format.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx(_) => "rx",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::Cnot => "cnot",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Toffoli => "toffoli",
            GateKind::Wait(_) => "wait",
        }
    }

    /// Whether two consecutive copies on the same targets cancel.
    pub fn is_self_inverse(&self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Y | GateKind::Z | GateKind::H | GateKind::Cnot | GateKind::Cz | GateKind::Swap | GateKind::Toffoli
        )
    }

    fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Wait(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.angle() {
            Some(a) => write!(f, "{}({})", self.name(), a),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Self {
        Self { kind, targets }
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.targets.len() == 2
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for t in &self.targets {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

/// Stage of a QEC experiment an operation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Encode,
    Memory,
    DetectCorrect,
    Decode,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Encode, Phase::Memory, Phase::DetectCorrect, Phase::Decode];

    pub fn name(&self) -> &'static str {
        match self {
            Phase::Encode => "encode",
            Phase::Memory => "memory",
            Phase::DetectCorrect => "detect_correct",
            Phase::Decode => "decode",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    phases: Vec<Phase>,
    current: Phase,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
            phases: Vec::new(),
            current: Phase::Encode,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Phase tag of each op, parallel to [`Circuit::ops`].
    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GateOp, Phase)> {
        self.ops.iter().zip(self.phases.iter().copied())
    }

    /// Subsequent pushes are tagged with `phase`.
    pub fn set_phase(&mut self, phase: Phase) -> &mut Self {
        self.current = phase;
        self
    }

    pub fn current_phase(&self) -> Phase {
        self.current
    }

    /// Appends an operation after checking arity and target range.
    pub fn push(&mut self, kind: GateKind, targets: &[usize]) -> Result<&mut Self> {
        let op = GateOp::new(kind, targets.to_vec());
        self.check_op(&op)?;
        self.ops.push(op);
        self.phases.push(self.current);
        Ok(self)
    }

    pub(crate) fn push_tagged(&mut self, op: GateOp, phase: Phase) {
        self.ops.push(op);
        self.phases.push(phase);
    }

    fn check_op(&self, op: &GateOp) -> Result<()> {
        if op.targets.len() != op.kind.arity() {
            return Err(validation(format!(
                "{} takes {} target(s), got {}",
                op.kind.name(),
                op.kind.arity(),
                op.targets.len()
            )));
        }
        match op.kind {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) if !t.is_finite() => {
                return Err(validation(format!("rotation angle {t} is not finite")));
            }
            GateKind::Wait(d) if !(d.is_finite() && d >= 0.0) => {
                return Err(validation(format!("wait duration {d} must be finite and >= 0")));
            }
            _ => {}
        }
        if !op.targets.is_empty() {
            crate::matrix::check_targets(self.n_qubits, &op.targets)?;
        }
        Ok(())
    }

    /// Re-checks every operation.
    pub fn validate(&self) -> Result<()> {
        self.ops.iter().try_for_each(|op| self.check_op(op))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push(GateKind::X, &[q]).expect("valid x")
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push(GateKind::H, &[q]).expect("valid h")
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(GateKind::Cnot, &[control, target]).expect("valid cnot")
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.push(GateKind::Cz, &[a, b]).expect("valid cz")
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push(GateKind::Swap, &[a, b]).expect("valid swap")
    }

    pub fn toffoli(&mut self, c1: usize, c2: usize, target: usize) -> &mut Self {
        self.push(GateKind::Toffoli, &[c1, c2, target]).expect("valid toffoli")
    }

    pub fn wait(&mut self, duration: f64) -> &mut Self {
        self.push(GateKind::Wait(duration), &[]).expect("valid wait")
    }

    /// Appends all of `other`'s ops, keeping their phase tags.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Index(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.n_qubits, self.n_qubits
            )));
        }
        for (op, phase) in other.iter() {
            self.push_tagged(op.clone(), phase);
        }
        Ok(())
    }

    pub fn count(&self, pred: impl Fn(&GateKind) -> bool) -> usize {
        self.ops.iter().filter(|op| pred(&op.kind)).count()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.count(|k| std::mem::discriminant(k) == std::mem::discriminant(&kind))
    }

    /// Contiguous index range of each phase present in the circuit.
    ///
    /// Returns an error if a phase's ops are not contiguous.
    pub fn phase_ranges(&self) -> Result<Vec<(Phase, Range<usize>)>> {
        let mut out: Vec<(Phase, Range<usize>)> = Vec::new();
        for (i, &p) in self.phases.iter().enumerate() {
            match out.last_mut() {
                Some((last, r)) if *last == p => r.end = i + 1,
                _ => {
                    if out.iter().any(|(q, _)| *q == p) {
                        return Err(validation(format!("phase {} is not contiguous", p.name())));
                    }
                    out.push((p, i..i + 1));
                }
            }
        }
        Ok(out)
    }

    /// Dense unitary of the whole circuit (waits are identity).
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let mut u = ComplexMatrix::identity(1 << self.n_qubits);
        for op in &self.ops {
            if let Some(m) = op.kind.matrix() {
                u = embed(&m, &op.targets, self.n_qubits)?.matmul(&u)?;
            }
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_checks_arity_and_range() {
        let mut c = Circuit::new(2);
        assert!(c.push(GateKind::Cnot, &[0]).is_err());
        assert!(c.push(GateKind::X, &[2]).is_err());
        assert!(c.push(GateKind::Cz, &[1, 1]).is_err());
        assert!(c.push(GateKind::Rx(f64::NAN), &[0]).is_err());
        assert!(c.push(GateKind::Wait(-1.0), &[]).is_err());
        assert!(c.push(GateKind::Wait(0.5), &[]).is_ok());
    }

    #[test]
    fn phase_ranges_partition_ops() {
        let mut c = Circuit::new(3);
        c.cnot(0, 1).cnot(0, 2);
        c.set_phase(Phase::Memory).wait(0.1);
        c.set_phase(Phase::DetectCorrect).cnot(0, 1).cnot(0, 2).toffoli(1, 2, 0);
        let ranges = c.phase_ranges().unwrap();
        assert_eq!(
            ranges,
            vec![(Phase::Encode, 0..2), (Phase::Memory, 2..3), (Phase::DetectCorrect, 3..6)]
        );
    }

    #[test]
    fn unitary_of_bell_preparation() {
        let mut c = Circuit::new(2);
        c.h(0).cnot(0, 1);
        let u = c.unitary().unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[(0, 0)].re - h).abs() < 1e-15);
        assert!((u[(3, 0)].re - h).abs() < 1e-15);
    }
}
