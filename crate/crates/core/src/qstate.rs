//! Register states: pure states, density matrices, and the operations that
//! evolve and compare them.

use crate::error::{validation, Error, Result};
use crate::matrix::{
    apply_left, apply_right_adjoint, check_targets, ComplexMatrix, LocalIndex, C64, EQ_TOL,
    ONE, STRUCT_TOL, ZERO,
};
use crate::noise::KrausChannel;

/// Default cap on register size. Dense `2^n x 2^n` storage is cheap up to
/// here and every circuit in this crate fits.
pub const DEFAULT_QUBIT_CAP: usize = 5;

/// Largest norm deviation accepted when turning a pure state into a
/// density matrix.
pub const NORM_TOL: f64 = 1e-9;

/// Smallest eigenvalue tolerated for a density matrix (checked in tests).
pub const PSD_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wraps raw amplitudes. The length must be a power of two; the norm is
    /// not checked here (see [`PureState::normalized`]).
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(validation(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Wraps and rescales to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let mut s = Self::new(amplitudes)?;
        let norm = s.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(validation("cannot normalize a zero or non-finite vector"));
        }
        for a in &mut s.amplitudes {
            *a /= norm;
        }
        Ok(s)
    }

    /// Computational basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || index >= 1 << n_qubits {
            return Err(Error::Index(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        Self::new(amps)
    }

    pub fn zero() -> Self {
        Self::basis(1, 0).expect("valid basis state")
    }

    pub fn one() -> Self {
        Self::basis(1, 1).expect("valid basis state")
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(vec![C64::new(h, 0.0), C64::new(h, 0.0)]).expect("two amplitudes")
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(vec![C64::new(h, 0.0), C64::new(-h, 0.0)]).expect("two amplitudes")
    }

    /// `Rx(theta)|1>` with `Rx(theta) = exp(-i theta X / 2)`.
    pub fn rx_on_one(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::new(vec![C64::new(0.0, -s), C64::new(c, 0.0)]).expect("two amplitudes")
    }

    /// Bloch-sphere state `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::new(vec![C64::new(c, 0.0), C64::from_polar(s, phi)]).expect("two amplitudes")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn tensor(&self, rhs: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * rhs.dim());
        for a in &self.amplitudes {
            for b in &rhs.amplitudes {
                amps.push(a * b);
            }
        }
        Self::new(amps).expect("product of power-of-two lengths")
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(validation("dimension mismatch in inner product"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking shape, Hermiticity, and unit trace.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.rows();
        if !matrix.is_square() || dim < 2 || !dim.is_power_of_two() {
            return Err(validation(format!(
                "density matrix must be 2^n x 2^n, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian(STRUCT_TOL) {
            return Err(validation("density matrix is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > STRUCT_TOL {
            return Err(validation(format!("density matrix trace is {tr}, not 1")));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square() && matrix.rows().is_power_of_two());
        Self {
            n_qubits: matrix.rows().trailing_zeros() as usize,
            matrix,
        }
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &PureState) -> Result<Self> {
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(validation(format!("state norm is {norm}, expected 1")));
        }
        let amps = state.amplitudes();
        let d = amps.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// `|index><index|`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Self::from_pure(&PureState::basis(n_qubits, index)?)
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self::from_matrix_unchecked(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        self.matrix
            .matmul(&self.matrix)
            .map(|m| m.trace().re)
            .unwrap_or(f64::NAN)
    }

    /// Diagonal of the matrix: computational-basis populations.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Kronecker product `a ⊗ b` under the default qubit cap.
    pub fn tensor(&self, rhs: &Self) -> Result<Self> {
        self.tensor_capped(rhs, DEFAULT_QUBIT_CAP)
    }

    pub fn tensor_capped(&self, rhs: &Self, cap: usize) -> Result<Self> {
        let requested = self.n_qubits + rhs.n_qubits;
        if requested > cap {
            return Err(Error::Capacity { requested, cap });
        }
        Ok(Self::from_matrix_unchecked(self.matrix.kron(&rhs.matrix)))
    }

    /// `U ρ U†` with `u` acting on `targets`.
    pub fn apply_unitary(&self, u: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        let idx = self.local_index(u, targets)?;
        if !u.is_unitary(STRUCT_TOL) {
            return Err(validation("operator is not unitary"));
        }
        Ok(self.conjugate_by(u, &idx))
    }

    /// `Σ_k E_k ρ E_k†` with the channel acting on `targets`.
    pub fn apply_channel(&self, ch: &KrausChannel, targets: &[usize]) -> Result<Self> {
        let first = &ch.elements()[0];
        let idx = self.local_index(first, targets)?;
        Ok(self.apply_kraus_indexed(ch.elements(), &idx))
    }

    /// Kraus sum without re-validating the operators.
    pub(crate) fn apply_kraus_indexed(&self, elements: &[ComplexMatrix], idx: &LocalIndex) -> Self {
        let mut iter = elements.iter();
        let first = iter.next().expect("channel has at least one element");
        let mut acc = self.conjugate_by(first, idx).matrix;
        for e in iter {
            acc.add_assign(&self.conjugate_by(e, idx).matrix);
        }
        Self::from_matrix_unchecked(acc)
    }

    pub(crate) fn conjugate_by(&self, op: &ComplexMatrix, idx: &LocalIndex) -> Self {
        let left = apply_left(&self.matrix, op, idx);
        Self::from_matrix_unchecked(apply_right_adjoint(&left, op, idx))
    }

    pub(crate) fn local_index(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<LocalIndex> {
        let idx = LocalIndex::new(self.n_qubits, targets)?;
        if op.rows() != idx.local_dim() || op.cols() != idx.local_dim() {
            return Err(validation(format!(
                "{}x{} operator applied to {} qubit(s)",
                op.rows(),
                op.cols(),
                targets.len()
            )));
        }
        Ok(idx)
    }

    /// `<ψ|ρ|ψ>`, the fidelity against a pure target, clamped to `[0, 1]`.
    pub fn fidelity_with_pure(&self, target: &PureState) -> Result<f64> {
        if target.dim() != self.dim() {
            return Err(validation(format!(
                "fidelity between {}-dim state and {}-dim target",
                self.dim(),
                target.dim()
            )));
        }
        let amps = target.amplitudes();
        let mut acc = ZERO;
        for (i, a) in amps.iter().enumerate() {
            let ai = a.conj();
            if ai == ZERO {
                continue;
            }
            for (j, aj) in amps.iter().enumerate() {
                acc += ai * self.matrix[(i, j)] * aj;
            }
        }
        Ok(acc.re.clamp(0.0, 1.0))
    }

    /// Reduced state on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        check_targets(self.n_qubits, keep)?;
        let n = self.n_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let place = |bits: &[usize], value: usize| -> usize {
            let k = bits.len();
            bits.iter().enumerate().fold(0, |acc, (j, &q)| {
                acc | (((value >> (k - 1 - j)) & 1) << (n - 1 - q))
            })
        };
        let dk = 1 << keep.len();
        let de = 1 << traced.len();
        let keep_idx: Vec<usize> = (0..dk).map(|v| place(keep, v)).collect();
        let env_idx: Vec<usize> = (0..de).map(|v| place(&traced, v)).collect();
        let mut out = ComplexMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                out[(i, j)] = env_idx
                    .iter()
                    .map(|&e| self.matrix[(keep_idx[i] | e, keep_idx[j] | e)])
                    .sum();
            }
        }
        Ok(Self::from_matrix_unchecked(out))
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        self.matrix.approx_eq(&rhs.matrix, tol)
    }

    /// Structural validity: Hermitian and unit trace within the structural
    /// tolerance. Positivity is checked by the test suite.
    pub fn is_valid(&self) -> bool {
        self.matrix.is_hermitian(STRUCT_TOL) && (self.trace() - ONE).norm() <= STRUCT_TOL
    }
}

/// Default equality tolerance re-exported for downstream assertions.
pub const STATE_EQ_TOL: f64 = EQ_TOL;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use approx::assert_abs_diff_eq;

    fn close(a: &DensityMatrix, b: &DensityMatrix) {
        assert!(a.approx_eq(b, 1e-12), "{:?}\n!=\n{:?}", a, b);
    }

    #[test]
    fn from_pure_basis_and_superposition() {
        let rho = DensityMatrix::from_pure(&PureState::zero()).unwrap();
        close(&rho, &DensityMatrix::from_matrix(ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap());

        let plus = DensityMatrix::from_pure(&PureState::plus()).unwrap();
        for z in plus.matrix().as_slice() {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn from_pure_rx_quarter_pi_on_one() {
        let rho = DensityMatrix::from_pure(&PureState::rx_on_one(std::f64::consts::FRAC_PI_4)).unwrap();
        let s = (std::f64::consts::PI / 8.0).sin();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, s * s, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn from_pure_rejects_unnormalized() {
        let s = PureState::new(vec![ONE, ONE]).unwrap();
        assert!(matches!(DensityMatrix::from_pure(&s), Err(Error::Validation(_))));
    }

    #[test]
    fn tensor_products() {
        let zero = DensityMatrix::basis(1, 0).unwrap();
        let one = DensityMatrix::basis(1, 1).unwrap();
        close(&zero.tensor(&zero).unwrap(), &DensityMatrix::basis(2, 0).unwrap());
        close(&one.tensor(&zero).unwrap(), &DensityMatrix::basis(2, 0b10).unwrap());
        let mixed = DensityMatrix::from_pure(&PureState::rx_on_one(0.3))
            .unwrap()
            .tensor(&DensityMatrix::maximally_mixed(1))
            .unwrap();
        assert_abs_diff_eq!(mixed.trace().re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tensor_capacity() {
        let a = DensityMatrix::maximally_mixed(3);
        let b = DensityMatrix::maximally_mixed(3);
        assert_eq!(
            a.tensor(&b).unwrap_err(),
            Error::Capacity { requested: 6, cap: DEFAULT_QUBIT_CAP }
        );
        assert_eq!(a.tensor_capped(&b, 6).unwrap().n_qubits(), 6);
    }

    #[test]
    fn unitary_examples() {
        let zero = DensityMatrix::basis(1, 0).unwrap();
        close(&zero.apply_unitary(&gates::x(), &[0]).unwrap(), &DensityMatrix::basis(1, 1).unwrap());

        let ten = DensityMatrix::basis(2, 0b10).unwrap();
        close(&ten.apply_unitary(&gates::cnot(), &[0, 1]).unwrap(), &DensityMatrix::basis(2, 0b11).unwrap());

        let rho = DensityMatrix::from_pure(&PureState::bloch(0.9, 2.1)).unwrap();
        let hh = rho
            .apply_unitary(&gates::h(), &[0])
            .unwrap()
            .apply_unitary(&gates::h(), &[0])
            .unwrap();
        close(&hh, &rho);
    }

    #[test]
    fn unitary_errors() {
        let rho = DensityMatrix::basis(2, 0).unwrap();
        let not_unitary = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(rho.apply_unitary(&not_unitary, &[0]), Err(Error::Validation(_))));
        assert!(matches!(rho.apply_unitary(&gates::cnot(), &[1, 1]), Err(Error::Index(_))));
        assert!(matches!(rho.apply_unitary(&gates::x(), &[2]), Err(Error::Index(_))));
        assert!(matches!(rho.apply_unitary(&gates::cnot(), &[0]), Err(Error::Validation(_))));
    }

    #[test]
    fn channel_examples() {
        let rho = DensityMatrix::from_pure(&PureState::bloch(1.2, 0.4)).unwrap();
        let id = KrausChannel::new(vec![ComplexMatrix::identity(2)], "identity").unwrap();
        close(&rho.apply_channel(&id, &[0]).unwrap(), &rho);

        let dephase = KrausChannel::new(
            vec![
                ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]),
                ComplexMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]),
            ],
            "full dephasing",
        )
        .unwrap();
        let plus = DensityMatrix::from_pure(&PureState::plus()).unwrap();
        close(&plus.apply_channel(&dephase, &[0]).unwrap(), &DensityMatrix::maximally_mixed(1));

        // E0 = sqrt(0.9) X, E1 = sqrt(0.1) I on |0><0|
        let faulty = KrausChannel::new(
            vec![gates::x().scale_real(0.9f64.sqrt()), ComplexMatrix::identity(2).scale_real(0.1f64.sqrt())],
            "faulty X",
        )
        .unwrap();
        let out = DensityMatrix::basis(1, 0).unwrap().apply_channel(&faulty, &[0]).unwrap();
        let expected = ComplexMatrix::from_real(&[&[0.1, 0.0], &[0.0, 0.9]]);
        assert!(out.matrix().approx_eq(&expected, 1e-12));
    }

    #[test]
    fn fidelity_examples() {
        let one = DensityMatrix::basis(1, 1).unwrap();
        assert_abs_diff_eq!(one.fidelity_with_pure(&PureState::one()).unwrap(), 1.0);
        assert_abs_diff_eq!(one.fidelity_with_pure(&PureState::zero()).unwrap(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(1);
        for psi in [PureState::zero(), PureState::plus(), PureState::bloch(0.3, 1.9)] {
            assert_abs_diff_eq!(mixed.fidelity_with_pure(&psi).unwrap(), 0.5, epsilon = 1e-15);
        }
        assert!(matches!(
            DensityMatrix::maximally_mixed(2).fidelity_with_pure(&PureState::one()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let ten = DensityMatrix::basis(2, 0b10).unwrap();
        close(&ten.partial_trace(&[0]).unwrap(), &DensityMatrix::basis(1, 1).unwrap());
        close(&ten.partial_trace(&[1]).unwrap(), &DensityMatrix::basis(1, 0).unwrap());

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]).unwrap();
        let bell = DensityMatrix::from_pure(&bell).unwrap();
        close(&bell.partial_trace(&[0]).unwrap(), &DensityMatrix::maximally_mixed(1));
        close(&bell.partial_trace(&[1]).unwrap(), &DensityMatrix::maximally_mixed(1));

        let rho = DensityMatrix::from_pure(&PureState::bloch(0.7, 0.2).tensor(&PureState::bloch(2.0, 1.0))).unwrap();
        close(&rho.partial_trace(&[0, 1]).unwrap(), &rho);
        assert!(matches!(rho.partial_trace(&[0, 0]), Err(Error::Index(_))));
        assert!(matches!(rho.partial_trace(&[]), Err(Error::Index(_))));
    }

    #[test]
    fn partial_trace_reorders_kept_qubits() {
        let a = PureState::bloch(0.7, 0.2);
        let b = PureState::bloch(2.0, 1.0);
        let ab = DensityMatrix::from_pure(&a.tensor(&b)).unwrap();
        let ba = DensityMatrix::from_pure(&b.tensor(&a)).unwrap();
        close(&ab.partial_trace(&[1, 0]).unwrap(), &ba);
    }
}
