//! Candidate spin observables at sharp momentum.
//!
//! Two kinds are built:
//!
//! * [`OperatorKind::Wigner`]: the rest-frame spin obtained by splitting the
//!   Pauli-Lubanski vector, which collapses to `σ/2` for every momentum.
//! * [`OperatorKind::NormalizedPL`]: the spatial Pauli-Lubanski components
//!   divided by the energy. On sharp-momentum states this is the same triple as
//!   the one-particle restriction of the Dirac spin `Σ/2`, namely
//!   `𝒮_k = Σ_l M_lk σ_l / 2` with the momentum contraction map
//!   `M(p) = (m/E)·1 + (1 − m/E)·nnᵀ`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, c, real, CMatrix2, C64};
use crate::lorentz::{self, Rotation3};
use crate::{Error, Result};

/// Tolerance for Hermiticity and POVM checks.
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    /// Rest-frame spin `σ/2`.
    Wigner,
    /// Energy-normalized Pauli-Lubanski spin, equal to the Dirac restriction.
    #[serde(rename = "pl")]
    NormalizedPL,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 2] = [OperatorKind::Wigner, OperatorKind::NormalizedPL];

    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorKind::Wigner => "wigner",
            OperatorKind::NormalizedPL => "pl",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wigner" => Ok(OperatorKind::Wigner),
            "pl" | "normalized-pl" | "czachor" | "dirac" => Ok(OperatorKind::NormalizedPL),
            _ => Err(Error::UnknownKind(s.to_owned())),
        }
    }
}

/// A 2×2 Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMatrix(CMatrix2);

impl SpinMatrix {
    pub fn new(m: CMatrix2) -> Result<Self> {
        let defect = linalg::hermitian_defect(&m);
        if !defect.is_finite() || defect > TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &CMatrix2 {
        &self.0
    }

    /// Eigenvalues `(low, high)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        linalg::hermitian_eigenvalues2(&self.0)
    }

    /// `ψ† S ψ`.
    pub fn expectation(&self, psi: &Vector2<C64>) -> f64 {
        (psi.adjoint() * self.0 * psi)[(0, 0)].re
    }
}

/// Three Hermitian matrices offered as a spin observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinTriple(pub [SpinMatrix; 3]);

impl SpinTriple {
    pub fn new(components: [CMatrix2; 3]) -> Result<Self> {
        let [x, y, z] = components;
        Ok(Self([SpinMatrix::new(x)?, SpinMatrix::new(y)?, SpinMatrix::new(z)?]))
    }

    /// The rest-frame triple `σ/2`.
    pub fn pauli_halves() -> Self {
        let s = linalg::paulis();
        Self(s.map(|m| SpinMatrix(m * real(0.5))))
    }

    /// `S_k = Σ_l coeffs[(l, k)] σ_l / 2`.
    pub fn from_pauli_coefficients(coeffs: &Matrix3<f64>) -> Self {
        let s = linalg::paulis();
        Self(std::array::from_fn(|k| {
            let mut m = CMatrix2::zeros();
            for (l, sigma) in s.iter().enumerate() {
                m += sigma * real(0.5 * coeffs[(l, k)]);
            }
            SpinMatrix(m)
        }))
    }

    pub fn component(&self, k: usize) -> &CMatrix2 {
        &self.0[k].0
    }

    /// `axis · S`.
    pub fn project(&self, axis: &Vector3<f64>) -> SpinMatrix {
        SpinMatrix(
            self.component(0) * real(axis.x) + self.component(1) * real(axis.y) + self.component(2) * real(axis.z),
        )
    }

    /// Componentwise `ψ† S_k ψ`.
    pub fn expectation(&self, psi: &Vector2<C64>) -> Vector3<f64> {
        Vector3::from_fn(|k, _| self.0[k].expectation(psi))
    }

    /// Largest entrywise deviation from another triple.
    pub fn max_deviation(&self, other: &SpinTriple) -> f64 {
        (0..3)
            .flat_map(|k| {
                (self.component(k) - other.component(k))
                    .iter()
                    .map(|z| z.norm())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }
}

/// Matrix-valued Pauli-Lubanski 4-vector `w^μ` at sharp momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PLVector {
    components: [CMatrix2; 4],
    mass: f64,
    momentum: Vector3<f64>,
}

impl PLVector {
    /// `w^μ`, `μ = 0..3`.
    pub fn component(&self, mu: usize) -> &CMatrix2 {
        &self.components[mu]
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn momentum(&self) -> &Vector3<f64> {
        &self.momentum
    }

    pub fn energy(&self) -> f64 {
        linalg::energy(self.mass, &self.momentum)
    }

    /// Componentwise `L_p⁻¹ w`, which should be `(0, mσ/2)`.
    pub fn to_rest_frame(&self) -> Result<[CMatrix2; 4]> {
        let inv = lorentz::standard_boost(self.mass, &self.momentum)?.inverse();
        Ok(mix(inv.matrix(), &self.components))
    }
}

fn mix(l: &nalgebra::Matrix4<f64>, v: &[CMatrix2; 4]) -> [CMatrix2; 4] {
    std::array::from_fn(|mu| {
        let mut acc = CMatrix2::zeros();
        for (nu, comp) in v.iter().enumerate() {
            acc += comp * real(l[(mu, nu)]);
        }
        acc
    })
}

/// `w^μ = m Σ_ν (L_p)^μ_ν S_R^ν` with rest-frame spin `S_R = (0, σ/2)`.
pub fn pauli_lubanski(m: f64, p: &Vector3<f64>) -> Result<PLVector> {
    let boost = lorentz::standard_boost(m, p)?;
    let s = linalg::paulis();
    let rest = [
        CMatrix2::zeros(),
        s[0] * real(0.5 * m),
        s[1] * real(0.5 * m),
        s[2] * real(0.5 * m),
    ];
    Ok(PLVector {
        components: mix(boost.matrix(), &rest),
        mass: m,
        momentum: *p,
    })
}

/// Wigner spin split out of the Pauli-Lubanski vector:
/// `S_k = (w^k − w⁰ p_k / (E + m)) / m`.
pub fn wigner_spin(m: f64, p: &Vector3<f64>) -> Result<SpinTriple> {
    let w = pauli_lubanski(m, p)?;
    let e = w.energy();
    let comps: [CMatrix2; 3] =
        std::array::from_fn(|k| (w.component(k + 1) - w.component(0) * real(p[k] / (e + m))) * real(1.0 / m));
    Ok(SpinTriple(comps.map(SpinMatrix)))
}

/// `M(p) = (m/E)·1 + (1 − m/E)·nnᵀ`, written as `(m/E)·1 + ppᵀ/(E(E+m))` so
/// that it extends continuously to `M(0) = 1`.
pub fn momentum_contraction(m: f64, p: &Vector3<f64>) -> Result<Matrix3<f64>> {
    linalg::require_mass(m)?;
    linalg::require_finite(p)?;
    let e = linalg::energy(m, p);
    Ok(Matrix3::identity() * (m / e) + p * p.transpose() / (e * (e + m)))
}

/// `α(a, p) = (m/p⁰) a + (1 − m/p⁰)(a·n) n`.
pub fn alpha_vector(a: &Vector3<f64>, m: f64, p: &Vector3<f64>) -> Result<Vector3<f64>> {
    let a = linalg::require_unit(a)?;
    Ok(momentum_contraction(m, p)? * a)
}

/// The kind's contraction map: identity for Wigner, `M(p)` for NormalizedPL.
pub fn contraction_for(kind: OperatorKind, m: f64, p: &Vector3<f64>) -> Result<Matrix3<f64>> {
    match kind {
        OperatorKind::Wigner => {
            linalg::require_mass(m)?;
            Ok(Matrix3::identity())
        }
        OperatorKind::NormalizedPL => momentum_contraction(m, p),
    }
}

pub fn restricted_spin(kind: OperatorKind, m: f64, p: &Vector3<f64>) -> Result<SpinTriple> {
    match kind {
        OperatorKind::Wigner => wigner_spin(m, p),
        OperatorKind::NormalizedPL => Ok(SpinTriple::from_pauli_coefficients(&momentum_contraction(m, p)?)),
    }
}

/// Second construction of the NormalizedPL triple: `w^k / E`.
pub fn normalized_pl_from_pauli_lubanski(m: f64, p: &Vector3<f64>) -> Result<SpinTriple> {
    let w = pauli_lubanski(m, p)?;
    let e = w.energy();
    Ok(SpinTriple(std::array::from_fn(|k| {
        SpinMatrix(w.component(k + 1) * real(1.0 / e))
    })))
}

fn require_normalized(psi: &Vector2<C64>) -> Result<()> {
    let n = psi.norm_squared();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// `tr(S_k ρ_ψ)` for the chosen kind.
pub fn spin_expectation(kind: OperatorKind, psi: &Vector2<C64>, m: f64, p: &Vector3<f64>) -> Result<Vector3<f64>> {
    require_normalized(psi)?;
    Ok(restricted_spin(kind, m, p)?.expectation(psi))
}

/// Eigenvalues `(s₋, s₊)` of `axis · S`.
pub fn spin_eigenvalues(kind: OperatorKind, m: f64, p: &Vector3<f64>, axis: &Vector3<f64>) -> Result<(f64, f64)> {
    let axis = linalg::require_unit(axis)?;
    Ok(restricted_spin(kind, m, p)?.project(&axis).eigenvalues())
}

/// Closed-form positive eigenvalue of `axis · 𝒮` for the NormalizedPL kind,
/// `½ √(E² + m² + p² cos 2θ) / (√2 E)` with `cos θ = n · axis`.
pub fn eigenvalue_closed_form(m: f64, p: &Vector3<f64>, axis: &Vector3<f64>) -> Result<f64> {
    linalg::require_mass(m)?;
    let axis = linalg::require_unit(axis)?;
    let p2 = p.norm_squared();
    if p2 == 0.0 {
        return Ok(0.5);
    }
    let e = linalg::energy(m, p);
    let cos = p.dot(&axis) / p2.sqrt();
    let cos2 = 2.0 * cos * cos - 1.0;
    Ok(0.5 * (e * e + m * m + p2 * cos2).sqrt() / (std::f64::consts::SQRT_2 * e))
}

/// Two-outcome POVM `P± = ½(1 ± 2 axis·S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Povm {
    minus: CMatrix2,
    plus: CMatrix2,
    axis: Vector3<f64>,
    mass: f64,
    momentum: Vector3<f64>,
}

impl Povm {
    pub fn plus(&self) -> &CMatrix2 {
        &self.plus
    }

    pub fn minus(&self) -> &CMatrix2 {
        &self.minus
    }

    pub fn axis(&self) -> &Vector3<f64> {
        &self.axis
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn momentum(&self) -> &Vector3<f64> {
        &self.momentum
    }

    /// `max |P₊ + P₋ − 1|`.
    pub fn completeness_defect(&self) -> f64 {
        (self.plus + self.minus - CMatrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue over both effects.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues2(&self.plus)
            .0
            .min(linalg::hermitian_eigenvalues2(&self.minus).0)
    }

    /// `P₊P₋`; zero for projective measurements.
    pub fn overlap(&self) -> CMatrix2 {
        self.plus * self.minus
    }

    pub fn overlap_norm(&self) -> f64 {
        linalg::frobenius(&self.overlap())
    }

    /// Outcome probabilities `(p₋, p₊)` for a normalized spinor.
    pub fn probabilities(&self, psi: &Vector2<C64>) -> (f64, f64) {
        let ev = |m: &CMatrix2| (psi.adjoint() * m * psi)[(0, 0)].re;
        (ev(&self.minus), ev(&self.plus))
    }
}

pub fn povm(kind: OperatorKind, m: f64, p: &Vector3<f64>, axis: &Vector3<f64>) -> Result<Povm> {
    let axis = linalg::require_unit(axis)?;
    let a = restricted_spin(kind, m, p)?.project(&axis);
    let twice = a.matrix() * real(2.0);
    let id = CMatrix2::identity();
    let out = Povm {
        minus: (id - twice) * real(0.5),
        plus: (id + twice) * real(0.5),
        axis,
        mass: m,
        momentum: *p,
    };
    if out.min_eigenvalue() < -TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "POVM effect not positive (min eigenvalue {:e})",
            out.min_eigenvalue()
        )));
    }
    Ok(out)
}

/// `max_{j,k} ‖[S_j, S_k] − i ε_jkl S_l‖_F`; zero iff the triple obeys the spin algebra.
pub fn commutator_defect(t: &SpinTriple) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..3 {
        for k in 0..3 {
            let mut d = linalg::commutator(t.component(j), t.component(k));
            for l in 0..3 {
                let e = linalg::levi_civita(j, k, l);
                if e != 0.0 {
                    d -= t.component(l) * c(0.0, e);
                }
            }
            worst = worst.max(linalg::frobenius(&d));
        }
    }
    worst
}

/// Deviation of the `p = 0` triple from the non-relativistic `σ/2`.
pub fn rest_frame_defect(kind: OperatorKind, m: f64) -> Result<f64> {
    Ok(restricted_spin(kind, m, &Vector3::zeros())?.max_deviation(&SpinTriple::pauli_halves()))
}

/// Vector-operator covariance under a rotation `R` with covering `D`:
/// `max_k ‖D S_k(p) D† − Σ_i R_ik S_i(Rp)‖_F`.
pub fn three_vector_defect(kind: OperatorKind, m: f64, p: &Vector3<f64>, r: &Rotation3) -> Result<f64> {
    let d = *lorentz::su2_of_rotation(r).matrix();
    let before = restricted_spin(kind, m, p)?;
    let after = restricted_spin(kind, m, &r.apply(p))?;
    let rm = r.matrix();
    let mut worst = 0.0f64;
    for k in 0..3 {
        let lhs = d * before.component(k) * d.adjoint();
        let mut rhs = CMatrix2::zeros();
        for i in 0..3 {
            rhs += after.component(i) * real(rm[(i, k)]);
        }
        worst = worst.max(linalg::frobenius(&(lhs - rhs)));
    }
    Ok(worst)
}
