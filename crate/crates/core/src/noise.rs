//! Error channels: faulty gates, T1 amplitude damping, T2 phase damping.
//!
//! Times are dimensionless, measured in units of the coherence time `T_c`.
//!
//! Amplitude damping uses the standard CPTP pair
//! `E0 = diag(1, sqrt(1-γ))`, `E1 = [[0, sqrt(γ)], [0, 0]]` with
//! `γ = 1 - exp(-t/T1)`. A commonly reprinted variant with an upper
//! triangular `E0` and `γ = 1 - exp(+t/T1)` is neither trace preserving
//! nor decaying, so it is not offered.
//!
//! Phase damping is `{sqrt(α) I, sqrt(1-α) Z}`. Under
//! [`T2Convention::Paper`] `α = (1 + exp(-t/(2 T2)))/2`, so coherences decay
//! as `exp(-t/(2 T2))`; [`T2Convention::Standard`] uses `exp(-t/T2)`.

use crate::error::{validation, Result};
use crate::gates;
use crate::matrix::{ComplexMatrix, LocalIndex, STRUCT_TOL};
use crate::qstate::DensityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    elements: Vec<ComplexMatrix>,
    label: String,
}

impl KrausChannel {
    /// Validates shape and the completeness relation `Σ E†E = I`.
    pub fn new(elements: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let Some(first) = elements.first() else {
            return Err(validation(format!("channel '{label}' has no Kraus elements")));
        };
        let d = first.rows();
        if !first.is_square() || !d.is_power_of_two() || d < 2 {
            return Err(validation(format!(
                "channel '{label}': Kraus elements must be 2^k x 2^k"
            )));
        }
        if elements.iter().any(|e| e.rows() != d || e.cols() != d) {
            return Err(validation(format!(
                "channel '{label}': Kraus elements differ in shape"
            )));
        }
        let ch = Self { elements, label };
        let dev = ch.completeness_deviation();
        if dev > STRUCT_TOL {
            return Err(validation(format!(
                "channel '{}' is not trace preserving (|Σ E†E - I| = {dev:.3e})",
                ch.label
            )));
        }
        Ok(ch)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    /// Max-entry deviation of `Σ E†E` from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        let d = self.dim();
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &self.elements {
            sum.add_assign(&e.adjoint().matmul(e).expect("square elements"));
        }
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.dim() != next.dim() {
            return Err(validation("cannot compose channels of different dimension"));
        }
        let mut elements = Vec::with_capacity(self.elements.len() * next.elements.len());
        for b in &next.elements {
            for a in &self.elements {
                elements.push(b.matmul(a)?);
            }
        }
        Self::new(elements, format!("{} ; {}", self.label, next.label))
    }
}

/// Which exponent the phase-damping channel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum T2Convention {
    /// Coherences decay as `exp(-t / (2 T2))`.
    #[default]
    Paper,
    /// Coherences decay as `exp(-t / T2)`.
    Standard,
}

impl T2Convention {
    pub fn coherence_factor(self, duration: f64, t2: f64) -> f64 {
        match self {
            T2Convention::Paper => (-duration / (2.0 * t2)).exp(),
            T2Convention::Standard => (-duration / t2).exp(),
        }
    }
}

/// Optional bit-flip errors at preparation and measurement.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpamParams {
    pub prep_flip: f64,
    pub meas_flip: f64,
}

impl SpamParams {
    pub fn is_off(&self) -> bool {
        self.prep_flip == 0.0 && self.meas_flip == 0.0
    }
}

/// Physical noise parameters, with times in units of `T_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub t1: f64,
    pub t2: f64,
    /// Failure probability of each 1-qubit gate.
    pub gate_error_1q: f64,
    /// Failure probability of each multi-qubit gate.
    pub gate_error_2q: f64,
    pub gate_time_1q: f64,
    pub gate_time_2q: f64,
    pub t2_convention: T2Convention,
    pub spam: SpamParams,
}

impl NoiseParams {
    /// Same error probability and duration for every gate.
    pub fn uniform(t1: f64, t2: f64, gate_error: f64, gate_time: f64) -> Result<Self> {
        Self {
            t1,
            t2,
            gate_error_1q: gate_error,
            gate_error_2q: gate_error,
            gate_time_1q: gate_time,
            gate_time_2q: gate_time,
            t2_convention: T2Convention::Paper,
            spam: SpamParams::default(),
        }
        .validated()
    }

    /// Perfect gates and infinite coherence; gates still take time.
    pub fn noiseless(gate_time: f64) -> Self {
        Self {
            t1: f64::INFINITY,
            t2: f64::INFINITY,
            gate_error_1q: 0.0,
            gate_error_2q: 0.0,
            gate_time_1q: gate_time,
            gate_time_2q: gate_time,
            t2_convention: T2Convention::Paper,
            spam: SpamParams::default(),
        }
    }

    pub fn validated(self) -> Result<Self> {
        for (name, t) in [("t1", self.t1), ("t2", self.t2)] {
            if t.is_nan() || t <= 0.0 {
                return Err(validation(format!("{name} must be > 0, got {t}")));
            }
        }
        for (name, t) in [("gate_time_1q", self.gate_time_1q), ("gate_time_2q", self.gate_time_2q)] {
            if !t.is_finite() || t < 0.0 {
                return Err(validation(format!("{name} must be finite and >= 0, got {t}")));
            }
        }
        for (name, p) in [
            ("gate_error_1q", self.gate_error_1q),
            ("gate_error_2q", self.gate_error_2q),
            ("spam.prep_flip", self.spam.prep_flip),
            ("spam.meas_flip", self.spam.meas_flip),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(validation(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.t2 > 2.0 * self.t1 {
            log::warn!("t2 = {} exceeds 2*t1 = {}; pair is unphysical", self.t2, 2.0 * self.t1);
        }
        Ok(self)
    }

    pub fn with_gate_error(mut self, p: f64) -> Self {
        self.gate_error_1q = p;
        self.gate_error_2q = p;
        self
    }

    pub fn with_t2_convention(mut self, c: T2Convention) -> Self {
        self.t2_convention = c;
        self
    }

    pub fn with_spam(mut self, spam: SpamParams) -> Self {
        self.spam = spam;
        self
    }

    /// Error probability charged to a gate on `arity` qubits.
    pub fn gate_error(&self, arity: usize) -> f64 {
        if arity <= 1 {
            self.gate_error_1q
        } else {
            self.gate_error_2q
        }
    }
}

/// `{sqrt(1-p) U, sqrt(p) I}`: with probability `p` the gate does nothing.
pub fn faulty_gate_channel(u: &ComplexMatrix, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(validation(format!("gate error probability {p} outside [0, 1]")));
    }
    if !u.is_unitary(STRUCT_TOL) {
        return Err(validation("faulty gate needs a unitary"));
    }
    let mut elements = Vec::with_capacity(2);
    if p < 1.0 {
        elements.push(u.scale_real((1.0 - p).sqrt()));
    }
    if p > 0.0 {
        elements.push(ComplexMatrix::identity(u.rows()).scale_real(p.sqrt()));
    }
    KrausChannel::new(elements, format!("faulty gate p={p}"))
}

fn check_duration(duration: f64, constant: f64, name: &str) -> Result<()> {
    if duration.is_nan() || duration < 0.0 {
        return Err(validation(format!("duration must be >= 0, got {duration}")));
    }
    if constant.is_nan() || constant <= 0.0 {
        return Err(validation(format!("{name} must be > 0, got {constant}")));
    }
    Ok(())
}

/// Decay probability `γ = 1 - exp(-duration / t1)`.
pub fn damping_gamma(duration: f64, t1: f64) -> f64 {
    -(-duration / t1).exp_m1()
}

/// T1 relaxation toward `|0>` over `duration`.
pub fn amplitude_damping(duration: f64, t1: f64) -> Result<KrausChannel> {
    check_duration(duration, t1, "t1")?;
    let gamma = damping_gamma(duration, t1);
    let e0 = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]]);
    let e1 = ComplexMatrix::from_real(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]]);
    KrausChannel::new(vec![e0, e1], format!("amplitude damping t={duration} T1={t1}"))
}

/// `α` of the phase-damping channel.
pub fn dephasing_alpha(duration: f64, t2: f64, convention: T2Convention) -> f64 {
    (1.0 + convention.coherence_factor(duration, t2)) / 2.0
}

/// T2 dephasing over `duration` with the default (half-rate) exponent.
pub fn phase_damping(duration: f64, t2: f64) -> Result<KrausChannel> {
    phase_damping_with(duration, t2, T2Convention::Paper)
}

pub fn phase_damping_with(duration: f64, t2: f64, convention: T2Convention) -> Result<KrausChannel> {
    check_duration(duration, t2, "t2")?;
    let alpha = dephasing_alpha(duration, t2, convention);
    let e0 = ComplexMatrix::identity(2).scale_real(alpha.sqrt());
    let e1 = gates::z().scale_real((1.0 - alpha).sqrt());
    KrausChannel::new(vec![e0, e1], format!("phase damping t={duration} T2={t2}"))
}

/// Symmetric bit-flip channel, used for SPAM errors.
pub fn bit_flip(p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(validation(format!("flip probability {p} outside [0, 1]")));
    }
    KrausChannel::new(
        vec![
            ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
            gates::x().scale_real(p.sqrt()),
        ],
        format!("bit flip p={p}"),
    )
}

/// The per-qubit relaxation-then-dephasing pair for one idle interval.
#[derive(Debug, Clone)]
pub struct IdleChannels {
    pub relaxation: KrausChannel,
    pub dephasing: KrausChannel,
}

impl IdleChannels {
    pub fn new(duration: f64, params: &NoiseParams) -> Result<Self> {
        Ok(Self {
            relaxation: amplitude_damping(duration, params.t1)?,
            dephasing: phase_damping_with(duration, params.t2, params.t2_convention)?,
        })
    }

    pub(crate) fn apply(&self, rho: &DensityMatrix, qubits: &[usize]) -> Result<DensityMatrix> {
        let mut out = rho.clone();
        for &q in qubits {
            let idx = LocalIndex::new(rho.n_qubits(), &[q])?;
            out = out.apply_kraus_indexed(self.relaxation.elements(), &idx);
            out = out.apply_kraus_indexed(self.dephasing.elements(), &idx);
        }
        Ok(out)
    }
}

/// Amplitude damping then phase damping for `duration` on each listed qubit.
pub fn idle_decoherence(
    rho: &DensityMatrix,
    qubits: &[usize],
    duration: f64,
    params: &NoiseParams,
) -> Result<DensityMatrix> {
    if duration == 0.0 {
        crate::matrix::check_targets(rho.n_qubits(), qubits)?;
        return Ok(rho.clone());
    }
    IdleChannels::new(duration, params)?.apply(rho, qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState;
    use approx::assert_abs_diff_eq;

    #[test]
    fn faulty_gate_limits() {
        let rho = DensityMatrix::from_pure(&PureState::bloch(1.0, 0.5)).unwrap();
        let perfect = rho.apply_unitary(&gates::h(), &[0]).unwrap();
        let p0 = faulty_gate_channel(&gates::h(), 0.0).unwrap();
        assert!(rho.apply_channel(&p0, &[0]).unwrap().approx_eq(&perfect, 1e-12));
        let p1 = faulty_gate_channel(&gates::h(), 1.0).unwrap();
        assert!(rho.apply_channel(&p1, &[0]).unwrap().approx_eq(&rho, 1e-12));
    }

    #[test]
    fn faulty_x_by_hand() {
        let ch = faulty_gate_channel(&gates::x(), 0.1).unwrap();
        let out = DensityMatrix::basis(1, 0).unwrap().apply_channel(&ch, &[0]).unwrap();
        assert_abs_diff_eq!(out.matrix()[(1, 1)].re, 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(out.matrix()[(0, 0)].re, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn faulty_gate_rejects_non_unitary() {
        let m = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.5]]);
        assert!(faulty_gate_channel(&m, 0.1).is_err());
        assert!(faulty_gate_channel(&gates::x(), 1.5).is_err());
    }

    #[test]
    fn amplitude_damping_examples() {
        let id = amplitude_damping(0.0, 1.0).unwrap();
        let rho = DensityMatrix::from_pure(&PureState::bloch(2.0, 1.0)).unwrap();
        assert!(rho.apply_channel(&id, &[0]).unwrap().approx_eq(&rho, 1e-15));

        let one = DensityMatrix::basis(1, 1).unwrap();
        let relaxed = one.apply_channel(&amplitude_damping(1e3, 1.0).unwrap(), &[0]).unwrap();
        assert!(relaxed.approx_eq(&DensityMatrix::basis(1, 0).unwrap(), 1e-12));

        let out = one.apply_channel(&amplitude_damping(1.0, 1.0).unwrap(), &[0]).unwrap();
        let e = (-1.0f64).exp();
        assert_abs_diff_eq!(out.matrix()[(0, 0)].re, 1.0 - e, epsilon = 1e-12);
        assert_abs_diff_eq!(out.fidelity_with_pure(&PureState::one()).unwrap(), e, epsilon = 1e-12);
        assert_abs_diff_eq!(e, 0.3679, epsilon = 1e-4);
    }

    #[test]
    fn phase_damping_examples() {
        let rho = DensityMatrix::from_pure(&PureState::bloch(2.0, 1.0)).unwrap();
        assert!(rho.apply_channel(&phase_damping(0.0, 1.0).unwrap(), &[0]).unwrap().approx_eq(&rho, 1e-15));

        let plus = DensityMatrix::from_pure(&PureState::plus()).unwrap();
        let full = plus.apply_channel(&phase_damping(1e4, 1.0).unwrap(), &[0]).unwrap();
        assert!(full.approx_eq(&DensityMatrix::maximally_mixed(1), 1e-12));

        let t2 = 0.7;
        let out = plus.apply_channel(&phase_damping(2.0 * t2, t2).unwrap(), &[0]).unwrap();
        let e = (-1.0f64).exp();
        assert_abs_diff_eq!(out.matrix()[(0, 1)].re, e / 2.0, epsilon = 1e-12);
        let f = out.fidelity_with_pure(&PureState::plus()).unwrap();
        assert_abs_diff_eq!(f, (1.0 + e) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f, 0.6839, epsilon = 1e-4);
    }

    #[test]
    fn standard_t2_convention_doubles_the_rate() {
        let plus = DensityMatrix::from_pure(&PureState::plus()).unwrap();
        let ch = phase_damping_with(1.0, 1.0, T2Convention::Standard).unwrap();
        let out = plus.apply_channel(&ch, &[0]).unwrap();
        assert_abs_diff_eq!(out.matrix()[(0, 1)].re, (-1.0f64).exp() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn negative_durations_rejected() {
        assert!(amplitude_damping(-1e-3, 1.0).is_err());
        assert!(phase_damping(-1e-3, 1.0).is_err());
        assert!(amplitude_damping(1.0, 0.0).is_err());
    }

    #[test]
    fn incomplete_kraus_set_rejected() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(KrausChannel::new(vec![half], "short").is_err());
        assert!(KrausChannel::new(vec![], "empty").is_err());
    }

    #[test]
    fn idle_examples() {
        let params = NoiseParams::uniform(1.0, 1e12, 0.0, 0.0).unwrap();
        let rho = DensityMatrix::from_pure(&PureState::bloch(0.4, 0.1).tensor(&PureState::one())).unwrap();
        assert!(idle_decoherence(&rho, &[0, 1], 0.0, &params).unwrap().approx_eq(&rho, 1e-15));

        let one = DensityMatrix::basis(1, 1).unwrap();
        for t in [0.1, 0.5, 2.0] {
            let out = idle_decoherence(&one, &[0], t, &params).unwrap();
            assert_abs_diff_eq!(out.fidelity_with_pure(&PureState::one()).unwrap(), (-t).exp(), epsilon = 1e-9);
        }
    }

    #[test]
    fn idle_on_diagonal_state_is_pure_relaxation() {
        let params = NoiseParams::uniform(0.8, 0.3, 0.0, 0.0).unwrap();
        let diag = DensityMatrix::from_matrix(ComplexMatrix::from_real(&[&[0.3, 0.0], &[0.0, 0.7]])).unwrap();
        let idle = idle_decoherence(&diag, &[0], 0.25, &params).unwrap();
        let ad = diag.apply_channel(&amplitude_damping(0.25, 0.8).unwrap(), &[0]).unwrap();
        assert!(idle.approx_eq(&ad, 1e-12));
    }

    #[test]
    fn composition_matches_manual_sequence() {
        let a = amplitude_damping(0.2, 1.0).unwrap();
        let b = phase_damping(0.2, 1.0).unwrap();
        let composed = a.then(&b).unwrap();
        let rho = DensityMatrix::from_pure(&PureState::bloch(1.3, 0.6)).unwrap();
        let seq = rho.apply_channel(&a, &[0]).unwrap().apply_channel(&b, &[0]).unwrap();
        assert!(rho.apply_channel(&composed, &[0]).unwrap().approx_eq(&seq, 1e-13));
    }
}
