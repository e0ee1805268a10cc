//! Gamma matrices, positive-energy plane-wave bispinors, the Dirac spin
//! expectation `Ψ†(Σ/4E)Ψ` and the free Foldy-Wouthuysen transformation.
//!
//! Spinors are normalized to `u†u = 2E`. With that convention the moving-frame
//! expectation `Ψ†ΣΨ/(4E)` reduces to `ψ†σψ/2` at rest.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Vector2, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, real, CMatrix2, CMatrix4, C64};
use crate::spinops::{self, OperatorKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Dirac-Pauli representation, `γ⁰ = diag(1, 1, −1, −1)`.
    #[default]
    Standard,
    /// Chiral representation, `γ⁰` off-diagonal.
    Weyl,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Standard => "standard",
            Representation::Weyl => "weyl",
        })
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "dirac" => Ok(Representation::Standard),
            "weyl" | "chiral" => Ok(Representation::Weyl),
            _ => Err(Error::UnknownRepresentation(s.to_owned())),
        }
    }
}

fn blocks(a: &CMatrix2, b: &CMatrix2, c: &CMatrix2, d: &CMatrix2) -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Unitary `T` with `γ_weyl = T γ_standard T†` and `u_weyl = T u_standard`.
fn standard_to_weyl() -> CMatrix4 {
    let h = CMatrix2::identity() * real(std::f64::consts::FRAC_1_SQRT_2);
    blocks(&h, &-h, &h, &h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet {
    gammas: [CMatrix4; 4],
    rep: Representation,
}

impl GammaSet {
    pub fn gamma(&self, mu: usize) -> &CMatrix4 {
        &self.gammas[mu]
    }

    pub fn representation(&self) -> Representation {
        self.rep
    }

    /// `Σ_k = (i/2) ε_kij γ^i γ^j`.
    pub fn sigma(&self, k: usize) -> CMatrix4 {
        let (i, j) = ((k + 1) % 3 + 1, (k + 2) % 3 + 1);
        linalg::commutator4(&self.gammas[i], &self.gammas[j]) * linalg::c(0.0, 0.5)
    }

    /// `γ^μ p_μ` for on-shell `p_μ = (E, −p)`.
    pub fn slash(&self, e: f64, p: &Vector3<f64>) -> CMatrix4 {
        self.gammas[0] * real(e) - self.gammas[1] * real(p.x) - self.gammas[2] * real(p.y) - self.gammas[3] * real(p.z)
    }

    /// `max_{μ,ν} |{γ^μ, γ^ν} − 2g^{μν}|`.
    pub fn clifford_defect(&self) -> f64 {
        let g = [1.0, -1.0, -1.0, -1.0];
        let mut worst = 0.0f64;
        for (mu, g_mu) in g.iter().enumerate() {
            for nu in 0..4 {
                let anti = self.gammas[mu] * self.gammas[nu] + self.gammas[nu] * self.gammas[mu];
                let target = if mu == nu {
                    CMatrix4::identity() * real(2.0 * g_mu)
                } else {
                    CMatrix4::zeros()
                };
                worst = worst.max((anti - target).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }
}

pub fn gamma_matrices(rep: Representation) -> GammaSet {
    let id = CMatrix2::identity();
    let zero = CMatrix2::zeros();
    let spatial: [CMatrix4; 3] = std::array::from_fn(|k| {
        let s = linalg::pauli(k);
        blocks(&zero, &s, &-s, &zero)
    });
    let g0 = match rep {
        Representation::Standard => blocks(&id, &zero, &zero, &-id),
        Representation::Weyl => blocks(&zero, &id, &id, &zero),
    };
    GammaSet {
        gammas: [g0, spatial[0], spatial[1], spatial[2]],
        rep,
    }
}

/// Spin label of a plane-wave solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinLabel {
    Up,
    Down,
}

impl SpinLabel {
    /// Rest-frame two-spinor `ξ_σ`.
    pub fn xi(&self) -> Vector2<C64> {
        match self {
            SpinLabel::Up => Vector2::new(real(1.0), real(0.0)),
            SpinLabel::Down => Vector2::new(real(0.0), real(1.0)),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            SpinLabel::Up => 0.5,
            SpinLabel::Down => -0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSpinor {
    components: Vector4<C64>,
    mass: f64,
    momentum: Vector3<f64>,
    spin: SpinLabel,
    rep: Representation,
}

impl DiracSpinor {
    pub fn components(&self) -> &Vector4<C64> {
        &self.components
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn representation(&self) -> Representation {
        self.rep
    }

    pub fn energy(&self) -> f64 {
        linalg::energy(self.mass, &self.momentum)
    }

    /// `‖(γ·p − m)u‖`.
    pub fn dirac_residual(&self) -> f64 {
        let g = gamma_matrices(self.rep);
        let op = g.slash(self.energy(), &self.momentum) - CMatrix4::identity() * real(self.mass);
        (op * self.components).norm()
    }

    /// `u†u`, which equals `2E`.
    pub fn norm_sqr(&self) -> f64 {
        self.components.norm_squared()
    }
}

/// `u^σ_p = √(E+m) (ξ_σ; (σ·p/(E+m)) ξ_σ)` in the standard representation,
/// transported unitarily into the Weyl representation when requested.
pub fn plane_wave_spinor(spin: SpinLabel, m: f64, p: &Vector3<f64>, rep: Representation) -> Result<DiracSpinor> {
    linalg::require_mass(m)?;
    linalg::require_finite(p)?;
    let e = linalg::energy(m, p);
    let xi = spin.xi();
    let lower = linalg::dot_sigma(p) * xi * real(1.0 / (e + m));
    let scale = real((e + m).sqrt());
    let standard = Vector4::new(xi[0], xi[1], lower[0], lower[1]) * scale;
    let components = match rep {
        Representation::Standard => standard,
        Representation::Weyl => standard_to_weyl() * standard,
    };
    Ok(DiracSpinor {
        components,
        mass: m,
        momentum: *p,
        spin,
        rep,
    })
}

/// `Ψ_p†(Σ/(4E))Ψ_p` with `Ψ_p = α u^{(+½)}_p + β u^{(−½)}_p`.
pub fn dispin_expectation(psi: &Vector2<C64>, m: f64, p: &Vector3<f64>, rep: Representation) -> Result<Vector3<f64>> {
    let n = psi.norm_squared();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(n));
    }
    let up = plane_wave_spinor(SpinLabel::Up, m, p, rep)?;
    let down = plane_wave_spinor(SpinLabel::Down, m, p, rep)?;
    let big_psi = up.components * psi[0] + down.components * psi[1];
    let g = gamma_matrices(rep);
    let e = up.energy();
    Ok(Vector3::from_fn(|k, _| {
        (big_psi.adjoint() * g.sigma(k) * big_psi)[(0, 0)].re / (4.0 * e)
    }))
}

/// Free Foldy-Wouthuysen operator `U = (E + m + βα·p) / √(2E(E+m))` in the
/// standard representation (`βα_i = γ^i`). It maps `u^σ_p` to `√(2E)(ξ_σ; 0)`.
pub fn foldy_wouthuysen(m: f64, p: &Vector3<f64>) -> Result<CMatrix4> {
    linalg::require_mass(m)?;
    linalg::require_finite(p)?;
    let e = linalg::energy(m, p);
    let g = gamma_matrices(Representation::Standard);
    let beta = g.gamma(0);
    let mut beta_alpha_p = CMatrix4::zeros();
    for i in 0..3 {
        let alpha = beta * g.gamma(i + 1);
        beta_alpha_p += beta * alpha * real(p[i]);
    }
    let u = (CMatrix4::identity() * real(e + m) + beta_alpha_p) * real(1.0 / (2.0 * e * (e + m)).sqrt());
    Ok(u)
}

/// Helicity `n · s̄` for either kind; undefined at `p = 0`.
pub fn helicity_expectation(psi: &Vector2<C64>, m: f64, p: &Vector3<f64>, kind: OperatorKind) -> Result<f64> {
    let norm = p.norm();
    if norm == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    let s = spinops::spin_expectation(kind, psi, m, p)?;
    Ok(s.dot(&(p / norm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use std::f64::consts::SQRT_2;

    fn up() -> Vector2<C64> {
        Vector2::new(real(1.0), real(0.0))
    }

    #[test]
    fn clifford_relations() {
        for rep in [Representation::Standard, Representation::Weyl] {
            let g = gamma_matrices(rep);
            assert!(g.clifford_defect() < 1e-12);
            assert!(linalg::hermitian_defect(g.gamma(0)) < 1e-15);
            for i in 1..4 {
                assert!((g.gamma(i) + g.gamma(i).adjoint()).norm() < 1e-15);
            }
            let anti = g.gamma(1) * g.gamma(2) + g.gamma(2) * g.gamma(1);
            assert_eq!(anti, CMatrix4::zeros());
        }
    }

    #[test]
    fn standard_gamma0_is_diagonal() {
        let g = gamma_matrices(Representation::Standard);
        let diag = CMatrix4::from_diagonal(&Vector4::new(real(1.0), real(1.0), real(-1.0), real(-1.0)));
        assert_eq!(*g.gamma(0), diag);
    }

    #[test]
    fn sigma_is_block_pauli_in_both_reps() {
        for rep in [Representation::Standard, Representation::Weyl] {
            let g = gamma_matrices(rep);
            for k in 0..3 {
                let s = linalg::pauli(k);
                let expected = blocks(&s, &CMatrix2::zeros(), &CMatrix2::zeros(), &s);
                assert!((g.sigma(k) - expected).norm() < 1e-15);
            }
            // (i/4)[γ², γ³]·2 = Σ₁
            let s23 = linalg::commutator4(g.gamma(2), g.gamma(3)) * c(0.0, 0.25);
            assert!((s23 * real(2.0) - g.sigma(0)).norm() < 1e-15);
        }
    }

    #[test]
    fn weyl_transform_relates_representations() {
        let t = standard_to_weyl();
        let (s, w) = (
            gamma_matrices(Representation::Standard),
            gamma_matrices(Representation::Weyl),
        );
        for mu in 0..4 {
            assert!((t * s.gamma(mu) * t.adjoint() - w.gamma(mu)).norm() < 1e-15);
        }
    }

    #[test]
    fn rest_spinor() {
        let u = plane_wave_spinor(SpinLabel::Up, 1.0, &Vector3::zeros(), Representation::Standard).unwrap();
        let expected = Vector4::new(real(SQRT_2), real(0.0), real(0.0), real(0.0));
        assert!((u.components() - expected).norm() < 1e-15);
        assert!(u.dirac_residual() < 1e-15);
    }

    #[test]
    fn spinor_along_z() {
        let u = plane_wave_spinor(SpinLabel::Up, 1.0, &Vector3::z(), Representation::Standard).unwrap();
        let k = 1.0 + SQRT_2;
        let expected = Vector4::new(real(1.0), real(0.0), real(1.0 / k), real(0.0)) * real(k.sqrt());
        assert!((u.components() - expected).norm() < 1e-15);
        assert!(u.dirac_residual() < 1e-10);
        assert!((u.norm_sqr() - 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn spin_down_along_z_is_negative_helicity() {
        let p = Vector3::new(0.0, 0.0, 2.5);
        let u = plane_wave_spinor(SpinLabel::Down, 0.7, &p, Representation::Standard).unwrap();
        let g = gamma_matrices(Representation::Standard);
        let h = g.sigma(2) * real(0.5);
        let lhs = h * u.components();
        assert!((lhs - u.components() * real(-0.5)).norm() < 1e-12);
    }

    #[test]
    fn dispin_examples() {
        let s = dispin_expectation(&up(), 1.0, &Vector3::zeros(), Representation::Standard).unwrap();
        assert!((s - Vector3::new(0.0, 0.0, 0.5)).norm() < 1e-15);

        let psi = Vector2::new(c(0.6, 0.0), c(0.0, 0.8));
        let p = Vector3::new(0.3, -1.2, 2.0);
        let a = dispin_expectation(&psi, 1.4, &p, Representation::Standard).unwrap();
        let b = dispin_expectation(&psi, 1.4, &p, Representation::Weyl).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn foldy_wouthuysen_examples() {
        assert!((foldy_wouthuysen(1.0, &Vector3::zeros()).unwrap() - CMatrix4::identity()).norm() < 1e-15);

        let p = Vector3::z();
        let u = foldy_wouthuysen(1.0, &p).unwrap();
        assert!((u.adjoint() * u - CMatrix4::identity()).norm() < 1e-12);
        let spinor = plane_wave_spinor(SpinLabel::Up, 1.0, &p, Representation::Standard).unwrap();
        let mapped = u * spinor.components();
        let expected = Vector4::new(real(2f64.powf(0.75)), real(0.0), real(0.0), real(0.0));
        assert!((mapped - expected).norm() < 1e-12);
    }

    #[test]
    fn helicity_examples() {
        for kind in OperatorKind::ALL {
            let h = helicity_expectation(&up(), 1.0, &Vector3::new(0.0, 0.0, 3.0), kind).unwrap();
            assert!((h - 0.5).abs() < 1e-12);
            let h = helicity_expectation(&up(), 1.0, &Vector3::x(), kind).unwrap();
            assert!(h.abs() < 1e-15);
        }
        assert!(matches!(
            helicity_expectation(&up(), 1.0, &Vector3::zeros(), OperatorKind::Wigner),
            Err(Error::UndefinedDirection)
        ));
    }

    #[test]
    fn representation_parsing() {
        assert_eq!("weyl".parse::<Representation>().unwrap(), Representation::Weyl);
        assert!(matches!(
            "majorana".parse::<Representation>(),
            Err(Error::UnknownRepresentation(_))
        ));
    }
}
