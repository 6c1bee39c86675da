//! Small dense complex matrices.
//!
//! Everything in this crate works on registers of at most a handful of
//! qubits, so a flat row-major `Vec<Complex64>` is the whole storage story.
//! The local kernels at the bottom apply a `2^k x 2^k` operator to selected
//! qubits of a `2^n`-dimensional index space without materializing the
//! embedded `2^n x 2^n` operator.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{validation, Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default per-entry tolerance for equality comparisons.
pub const EQ_TOL: f64 = 1e-12;
/// Tolerance for structural checks (unitarity, completeness, trace).
pub const STRUCT_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(validation(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input; intended
    /// for literal gate tables.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix literal");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Real-valued convenience constructor for literal tables.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix literal");
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Option<C64> {
        (r < self.rows && c < self.cols).then(|| self.data[r * self.cols + c])
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(validation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] =
                            a * rhs.data[k * rhs.cols + l];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub(crate) fn add_assign(&mut self, rhs: &Self) {
        debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    /// Largest entry-wise modulus of `self - rhs`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, rhs: &Self, tol: f64) -> bool {
        self.max_abs_diff(rhs) <= tol
    }

    /// Equality up to a global phase: finds the phase from the largest entry
    /// of `rhs` and compares `self` against the rephased `rhs`.
    pub fn approx_eq_up_to_phase(&self, rhs: &Self, tol: f64) -> bool {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return false;
        }
        let Some((idx, _)) = rhs
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        else {
            return true;
        };
        if rhs.data[idx].norm() < tol {
            return self.approx_eq(rhs, tol);
        }
        let phase = self.data[idx] / rhs.data[idx];
        if (phase.norm() - 1.0).abs() > tol.sqrt() {
            return false;
        }
        let phase = phase / phase.norm();
        self.approx_eq(&rhs.scale(phase), tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        match self.adjoint().matmul(self) {
            Ok(p) => p.approx_eq(&Self::identity(self.rows), tol),
            Err(_) => false,
        }
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(validation(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.data[r * self.cols + c];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Index bookkeeping for applying an operator to a subset of qubits.
///
/// Qubit 0 is the most significant bit of a basis index. `targets[0]` is
/// the most significant bit of the operator's local index, so the local
/// operator on targets `[a, b]` matches `kron(op_a, op_b)`.
#[derive(Debug, Clone)]
pub(crate) struct LocalIndex {
    offsets: Vec<usize>,
    bases: Vec<usize>,
}

impl LocalIndex {
    pub(crate) fn new(n_qubits: usize, targets: &[usize]) -> Result<Self> {
        check_targets(n_qubits, targets)?;
        let k = targets.len();
        let offsets = (0..1usize << k)
            .map(|local| {
                targets.iter().enumerate().fold(0, |acc, (j, &q)| {
                    let bit = (local >> (k - 1 - j)) & 1;
                    acc | (bit << (n_qubits - 1 - q))
                })
            })
            .collect();
        let mask = targets
            .iter()
            .fold(0usize, |m, &q| m | (1 << (n_qubits - 1 - q)));
        let bases = (0..1usize << n_qubits).filter(|i| i & mask == 0).collect();
        Ok(Self { offsets, bases })
    }

    pub(crate) fn local_dim(&self) -> usize {
        self.offsets.len()
    }
}

pub(crate) fn check_targets(n_qubits: usize, targets: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::Index("empty target list".into()));
    }
    for (i, &q) in targets.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::Index(format!(
                "qubit {q} out of range for a {n_qubits}-qubit register"
            )));
        }
        if targets[..i].contains(&q) {
            return Err(Error::Index(format!("duplicate target qubit {q}")));
        }
    }
    Ok(())
}

/// `op_full * a` where `op_full` embeds `op` on the indexed qubits.
pub(crate) fn apply_left(a: &ComplexMatrix, op: &ComplexMatrix, idx: &LocalIndex) -> ComplexMatrix {
    let d = idx.local_dim();
    let cols = a.cols;
    let mut out = ComplexMatrix::zeros(a.rows, cols);
    let mut gathered = vec![ZERO; d];
    for &base in &idx.bases {
        for c in 0..cols {
            for (g, &off) in gathered.iter_mut().zip(&idx.offsets) {
                *g = a.data[(base + off) * cols + c];
            }
            for (li, &off) in idx.offsets.iter().enumerate() {
                let row = &op.data[li * d..(li + 1) * d];
                let acc: C64 = row.iter().zip(&gathered).map(|(m, v)| m * v).sum();
                out.data[(base + off) * cols + c] = acc;
            }
        }
    }
    out
}

/// `a * op_full†` where `op_full` embeds `op` on the indexed qubits.
pub(crate) fn apply_right_adjoint(
    a: &ComplexMatrix,
    op: &ComplexMatrix,
    idx: &LocalIndex,
) -> ComplexMatrix {
    let d = idx.local_dim();
    let cols = a.cols;
    let mut out = ComplexMatrix::zeros(a.rows, cols);
    let mut gathered = vec![ZERO; d];
    for r in 0..a.rows {
        let row_in = &a.data[r * cols..(r + 1) * cols];
        for &base in &idx.bases {
            for (g, &off) in gathered.iter_mut().zip(&idx.offsets) {
                *g = row_in[base + off];
            }
            for (li, &off) in idx.offsets.iter().enumerate() {
                let op_row = &op.data[li * d..(li + 1) * d];
                let acc: C64 = op_row
                    .iter()
                    .zip(&gathered)
                    .map(|(m, v)| m.conj() * v)
                    .sum();
                out.data[r * cols + base + off] = acc;
            }
        }
    }
    out
}

/// Embeds `op` acting on `targets` into the full `2^n`-dimensional space.
pub fn embed(op: &ComplexMatrix, targets: &[usize], n_qubits: usize) -> Result<ComplexMatrix> {
    let idx = LocalIndex::new(n_qubits, targets)?;
    if op.rows != idx.local_dim() || op.cols != idx.local_dim() {
        return Err(validation(format!(
            "operator is {}x{} but {} targets need {}x{}",
            op.rows,
            op.cols,
            targets.len(),
            idx.local_dim(),
            idx.local_dim()
        )));
    }
    Ok(apply_left(&ComplexMatrix::identity(1 << n_qubits), op, &idx))
}
