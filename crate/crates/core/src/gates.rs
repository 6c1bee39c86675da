//! Gate matrices. Multi-qubit gates list their first target as the most
//! significant local bit, so `cnot()` on `[c, t]` is control `c`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::matrix::{ComplexMatrix, C64, I, ONE, ZERO};

pub fn x() -> ComplexMatrix {
    ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn z() -> ComplexMatrix {
    ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn h() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_real(&[&[h, h], &[h, -h]])
}

pub fn s() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, I])
}

pub fn sdg() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, -I])
}

pub fn t() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)])
}

pub fn tdg() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)])
}

/// `exp(-i theta X / 2)`.
pub fn rx(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_rows(&[&[C64::new(c, 0.0), C64::new(0.0, -s)], &[C64::new(0.0, -s), C64::new(c, 0.0)]])
}

/// `exp(-i theta Y / 2)`.
pub fn ry(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_real(&[&[c, -s], &[s, c]])
}

/// `exp(-i theta Z / 2)`.
pub fn rz(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)])
}

pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
}

pub fn cz() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, ONE, ONE, -ONE])
}

pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_real(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
}

/// Controls on the first two targets, target last.
pub fn toffoli() -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(8);
    m[(6, 6)] = ZERO;
    m[(7, 7)] = ZERO;
    m[(6, 7)] = ONE;
    m[(7, 6)] = ONE;
    m
}
