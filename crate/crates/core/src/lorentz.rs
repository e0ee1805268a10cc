//! Minkowski 4-vectors, standard boosts, Wigner rotations and the SU(2) lift
//! that transports spinors of sharp-momentum states.
//!
//! Signature is (+, −, −, −). Matrices act on contravariant components
//! `(t, x, y, z)` and are active transformations.

use nalgebra::{Matrix3, Matrix4, Vector2, Vector3, Vector4};

use crate::linalg::{self, c, real, CMatrix2, C64};
use crate::{Error, Result};

/// Tolerance for single-matrix identities.
pub const MATRIX_TOLERANCE: f64 = 1e-12;

/// Branch-selection tolerance for axis-angle extraction.
const BRANCH_TOLERANCE: f64 = 1e-9;

fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    /// On-shell momentum `(E(p), p)` for mass `m`.
    pub fn on_shell(m: f64, p: &Vector3<f64>) -> Self {
        Self::from_parts(linalg::energy(m, p), p)
    }

    /// The standard momentum `(m, 0, 0, 0)`.
    pub fn rest(m: f64) -> Self {
        Self::new(m, 0.0, 0.0, 0.0)
    }

    pub fn from_parts(t: f64, spatial: &Vector3<f64>) -> Self {
        Self::new(t, spatial.x, spatial.y, spatial.z)
    }

    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.t, self.x, self.y, self.z)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    /// `t² − x² − y² − z²`.
    pub fn minkowski_norm_sq(&self) -> f64 {
        self.t * self.t - self.x * self.x - self.y * self.y - self.z * self.z
    }
}

/// A proper orthochronous Lorentz transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(Matrix4<f64>);

impl LorentzMatrix {
    /// Validates `ΛᵀgΛ = g`, `det Λ = +1` and `Λ⁰₀ ≥ 1`.
    ///
    /// The metric tolerance is [`MATRIX_TOLERANCE`] scaled by `max(1, (Λ⁰₀)²)`,
    /// since rounding in `ΛᵀgΛ` grows with the square of the boost factor.
    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        let candidate = Self(m);
        let scale = m[(0, 0)].abs().max(1.0).powi(2);
        let defect = candidate.metric_defect();
        if !defect.is_finite() || defect > MATRIX_TOLERANCE * scale {
            return Err(Error::NotLorentz { defect });
        }
        let det = m.determinant();
        if det < 0.0 || m[(0, 0)] < 1.0 - MATRIX_TOLERANCE * scale {
            return Err(Error::NotProperOrthochronous {
                det,
                time_component: m[(0, 0)],
            });
        }
        Ok(candidate)
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// `max |ΛᵀgΛ − g|`.
    pub fn metric_defect(&self) -> f64 {
        let g = metric();
        (self.0.transpose() * g * self.0 - g).abs().max()
    }

    /// `Λ⁻¹ = g Λᵀ g`.
    pub fn inverse(&self) -> Self {
        let g = metric();
        Self(g * self.0.transpose() * g)
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        FourVector::from_vector(&(self.0 * v.to_vector()))
    }

    /// Spatial 3×3 block.
    pub fn spatial_block(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(1, 1).into_owned()
    }
}

/// A proper rotation in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(Matrix3<f64>);

impl Rotation3 {
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let defect = (m.transpose() * m - Matrix3::identity()).abs().max();
        if !defect.is_finite() || defect > MATRIX_TOLERANCE || m.determinant() < 0.0 {
            return Err(Error::NotRotation { defect });
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Rodrigues rotation about a unit axis.
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Result<Self> {
        let n = linalg::require_unit(axis)?.normalize();
        let k = n.cross_matrix();
        let m = Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos());
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    /// Embeds the rotation as a Lorentz matrix with trivial time row/column.
    pub fn to_lorentz(&self) -> LorentzMatrix {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(&self.0);
        LorentzMatrix(m)
    }

    /// Rotation angle `θ ∈ [0, π]` and unit axis.
    ///
    /// Near `θ = π` the axis comes from the symmetric part of `R`; at
    /// `θ = π` (within the branch tolerance) the sign is fixed so that the
    /// first nonzero component is positive. At `θ = 0` the axis is `ẑ`.
    pub fn axis_angle(&self) -> (Vector3<f64>, f64) {
        let r = &self.0;
        // v = sinθ · n
        let v = 0.5 * Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
        let cos = (0.5 * (r.trace() - 1.0)).clamp(-1.0, 1.0);
        let sin = v.norm();
        let angle = sin.atan2(cos);
        if angle < BRANCH_TOLERANCE {
            return (Vector3::z(), angle);
        }
        if std::f64::consts::PI - angle > BRANCH_TOLERANCE && sin > BRANCH_TOLERANCE {
            return (v / sin, angle);
        }
        let axis = symmetric_axis(r, cos);
        if std::f64::consts::PI - angle <= BRANCH_TOLERANCE {
            (canonical_sign(axis), std::f64::consts::PI)
        } else if axis.dot(&v) < 0.0 {
            (-axis, angle)
        } else {
            (axis, angle)
        }
    }
}

/// Axis from `(R + Rᵀ)/2 = cosθ·1 + (1 − cosθ)·nnᵀ`, up to sign.
fn symmetric_axis(r: &Matrix3<f64>, cos: f64) -> Vector3<f64> {
    let sym = 0.5 * (r + r.transpose());
    let outer = (sym - Matrix3::identity() * cos) / (1.0 - cos);
    let col = (0..3)
        .max_by(|&a, &b| outer[(a, a)].total_cmp(&outer[(b, b)]))
        .unwrap_or(2);
    outer.column(col).normalize()
}

fn canonical_sign(axis: Vector3<f64>) -> Vector3<f64> {
    let first = axis.iter().copied().find(|x| x.abs() > BRANCH_TOLERANCE).unwrap_or(1.0);
    if first < 0.0 {
        -axis
    } else {
        axis
    }
}

/// A unitary 2×2 spin transformation `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinTransform(CMatrix2);

impl SpinTransform {
    pub fn from_matrix(m: CMatrix2) -> Result<Self> {
        let defect = (m.adjoint() * m - CMatrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > MATRIX_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "matrix is not unitary (defect {defect:e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &CMatrix2 {
        &self.0
    }

    pub fn apply(&self, spinor: &Vector2<C64>) -> Vector2<C64> {
        self.0 * spinor
    }
}

/// A spin-½ state `(α, β)|p⟩` with sharp momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumSpinState {
    spinor: Vector2<C64>,
    mass: f64,
    momentum: Vector3<f64>,
}

impl MomentumSpinState {
    pub fn new(spinor: Vector2<C64>, mass: f64, momentum: Vector3<f64>) -> Result<Self> {
        linalg::require_mass(mass)?;
        linalg::require_finite(&momentum)?;
        let norm = spinor.norm_squared();
        if (norm - 1.0).abs() > MATRIX_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { spinor, mass, momentum })
    }

    pub fn at_rest(spinor: Vector2<C64>, mass: f64) -> Result<Self> {
        Self::new(spinor, mass, Vector3::zeros())
    }

    pub fn spinor(&self) -> &Vector2<C64> {
        &self.spinor
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

    pub fn four_momentum(&self) -> FourVector {
        FourVector::on_shell(self.mass, &self.momentum)
    }
}

/// The canonical pure boost `L_p` taking `(m, 0, 0, 0)` to `(E, p)`:
///
/// ```text
/// L⁰₀ = E/m,  L⁰ᵢ = Lⁱ₀ = pᵢ/m,  Lⁱⱼ = δᵢⱼ + pᵢpⱼ / (m(m + E))
/// ```
pub fn standard_boost(m: f64, p: &Vector3<f64>) -> Result<LorentzMatrix> {
    linalg::require_mass(m)?;
    linalg::require_finite(p)?;
    let e = linalg::energy(m, p);
    let mut l = Matrix4::identity();
    l[(0, 0)] = e / m;
    for i in 0..3 {
        l[(0, i + 1)] = p[i] / m;
        l[(i + 1, 0)] = p[i] / m;
        for j in 0..3 {
            l[(i + 1, j + 1)] += p[i] * p[j] / (m * (m + e));
        }
    }
    Ok(LorentzMatrix(l))
}

/// Pure boost along a unit direction with the given rapidity.
pub fn boost_with_rapidity(direction: &Vector3<f64>, rapidity: f64) -> Result<LorentzMatrix> {
    let n = linalg::require_unit(direction)?;
    standard_boost(1.0, &(n * rapidity.sinh()))
}

/// Rotation about `axis` by `angle`, both as a Lorentz matrix and as a 3×3 rotation.
pub fn pure_rotation(axis: &Vector3<f64>, angle: f64) -> Result<(LorentzMatrix, Rotation3)> {
    let r = Rotation3::from_axis_angle(axis, angle)?;
    Ok((r.to_lorentz(), r))
}

/// Wigner rotation `W(Λ, p) = L⁻¹_{Λp} Λ L_p`, returned as its spatial block.
pub fn wigner_rotation(lambda: &LorentzMatrix, m: f64, p: &Vector3<f64>) -> Result<Rotation3> {
    let lp = standard_boost(m, p)?;
    let moved = lambda.apply(&FourVector::on_shell(m, p)).spatial();
    let l_moved = standard_boost(m, &moved)?;
    let w = l_moved.inverse().compose(lambda).compose(&lp);
    Ok(Rotation3::from_matrix_unchecked(w.spatial_block()))
}

/// Wigner rotation as a 4×4 matrix (fixes `k_R`); used to check the little-group property.
pub fn wigner_rotation_4(lambda: &LorentzMatrix, m: f64, p: &Vector3<f64>) -> Result<LorentzMatrix> {
    let lp = standard_boost(m, p)?;
    let moved = lambda.apply(&FourVector::on_shell(m, p)).spatial();
    let l_moved = standard_boost(m, &moved)?;
    Ok(l_moved.inverse().compose(lambda).compose(&lp))
}

/// The SU(2) element `exp(−iθ n·σ/2)` covering `R`.
pub fn su2_of_rotation(r: &Rotation3) -> SpinTransform {
    let (axis, angle) = r.axis_angle();
    let half = 0.5 * angle;
    let m = CMatrix2::identity() * real(half.cos()) - linalg::dot_sigma(&axis) * c(0.0, half.sin());
    SpinTransform(m)
}

/// Transforms a sharp-momentum spin state: `U(Λ)ψ|p⟩ = D[W(Λ,p)]ψ|Λp⟩`.
pub fn apply_lorentz(lambda: &LorentzMatrix, state: &MomentumSpinState) -> Result<MomentumSpinState> {
    let w = wigner_rotation(lambda, state.mass, &state.momentum)?;
    let d = su2_of_rotation(&w);
    let momentum = lambda.apply(&state.four_momentum()).spatial();
    Ok(MomentumSpinState {
        spinor: d.apply(&state.spinor),
        mass: state.mass,
        momentum,
    })
}
