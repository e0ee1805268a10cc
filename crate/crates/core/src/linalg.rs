//! Small complex matrix helpers shared by the physics modules.

use nalgebra::{Matrix2, Matrix4, Vector3};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix2 = Matrix2<C64>;
pub type CMatrix4 = Matrix4<C64>;

/// Tolerance used when checking that a user-supplied direction is a unit vector.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Pauli matrix `σ_k` for `k ∈ {0, 1, 2}` (x, y, z).
pub fn pauli(k: usize) -> CMatrix2 {
    let (o, z) = (real(1.0), real(0.0));
    match k {
        0 => CMatrix2::new(z, o, o, z),
        1 => CMatrix2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
        2 => CMatrix2::new(o, z, z, -o),
        _ => panic!("pauli index {k} out of range"),
    }
}

pub fn paulis() -> [CMatrix2; 3] {
    [pauli(0), pauli(1), pauli(2)]
}

/// `v·σ` for a real 3-vector.
pub fn dot_sigma(v: &Vector3<f64>) -> CMatrix2 {
    pauli(0) * real(v.x) + pauli(1) * real(v.y) + pauli(2) * real(v.z)
}

/// Levi-Civita symbol on {0, 1, 2}.
#[inline]
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn frobenius<const N: usize>(m: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_defect<const N: usize>(m: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix2, b: &CMatrix2) -> CMatrix2 {
    a * b - b * a
}

pub fn commutator4(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
    a * b - b * a
}

/// Kronecker product of two 2×2 matrices, first factor acting on the high bit.
pub fn kron(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    CMatrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// Eigenvalues `(low, high)` of a 2×2 Hermitian matrix.
pub fn hermitian_eigenvalues2(m: &CMatrix2) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let half_trace = 0.5 * (a + d);
    let gap = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    (half_trace - gap, half_trace + gap)
}

/// Smallest eigenvalue of a 4×4 Hermitian matrix.
pub fn min_eigenvalue4(m: &CMatrix4) -> f64 {
    let sym = (m + m.adjoint()) * real(0.5);
    sym.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Returns the vector unchanged if its norm is within [`UNIT_TOLERANCE`] of one.
pub fn require_unit(v: &Vector3<f64>) -> Result<Vector3<f64>> {
    let n = v.norm();
    if !n.is_finite() || (n - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnitVector(n));
    }
    Ok(*v)
}

pub fn require_mass(m: f64) -> Result<f64> {
    if m.is_finite() && m > 0.0 {
        Ok(m)
    } else {
        Err(Error::NonPositiveMass(m))
    }
}

pub fn require_finite(p: &Vector3<f64>) -> Result<()> {
    if p.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("non-finite momentum {p:?}")))
    }
}

/// On-shell energy `√(m² + |p|²)`.
#[inline]
pub fn energy(m: f64, p: &Vector3<f64>) -> f64 {
    (m * m + p.norm_squared()).sqrt()
}
