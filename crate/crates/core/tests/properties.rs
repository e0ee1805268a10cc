use proptest::prelude::*;
use relspin::bell::{self, OptimizerOptions, TwoParticleState};
use relspin::dirac::{self, Representation, SpinLabel};
use relspin::linalg::{self, c, frobenius, CMatrix2, C64};
use relspin::lorentz::{self, FourVector, LorentzMatrix, Rotation3};
use relspin::nalgebra::{Matrix3, Vector2, Vector3};
use relspin::reconstruct::{self, ExpectationTable};
use relspin::spinops::{self, SpinTriple};
use relspin::OperatorKind;

fn max_abs3(m: &Matrix3<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn unit() -> impl Strategy<Value = Vector3<f64>> {
    (-1.0f64..1.0, 0.0..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        Vector3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

fn mass() -> impl Strategy<Value = f64> {
    0.2f64..5.0
}

fn momentum() -> impl Strategy<Value = Vector3<f64>> {
    (unit(), 0.0f64..10.0).prop_map(|(n, p)| n * p)
}

fn rotation() -> impl Strategy<Value = Rotation3> {
    (unit(), 0.0..std::f64::consts::PI).prop_map(|(n, a)| Rotation3::from_axis_angle(&n, a).unwrap())
}

fn lorentz() -> impl Strategy<Value = LorentzMatrix> {
    (rotation(), unit(), -2.0f64..2.0)
        .prop_map(|(r, n, eta)| lorentz::boost_with_rapidity(&n, eta).unwrap().compose(&r.to_lorentz()))
}

fn spinor() -> impl Strategy<Value = Vector2<C64>> {
    (unit(), 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU).prop_map(|(n, a, b)| {
        let theta = n.z.clamp(-1.0, 1.0).acos();
        Vector2::new(
            C64::from_polar((theta / 2.0).cos(), a),
            C64::from_polar((theta / 2.0).sin(), b),
        )
    })
}

fn kind() -> impl Strategy<Value = OperatorKind> {
    prop_oneof![Just(OperatorKind::Wigner), Just(OperatorKind::NormalizedPL)]
}

fn rep() -> impl Strategy<Value = Representation> {
    prop_oneof![Just(Representation::Standard), Just(Representation::Weyl)]
}

fn pauli_vector(psi: &Vector2<C64>) -> Vector3<f64> {
    SpinTriple::pauli_halves().expectation(psi)
}

proptest! {
    #[test]
    fn standard_boost_preserves_metric_and_hits_momentum(m in mass(), p in momentum()) {
        let l = lorentz::standard_boost(m, &p).unwrap();
        let e = linalg::energy(m, &p);
        prop_assert!(l.metric_defect() < 1e-12 * e * e / (m * m));
        let k = l.apply(&FourVector::rest(m));
        let target = FourVector::on_shell(m, &p);
        prop_assert!((k.to_vector() - target.to_vector()).amax() < 1e-12 * e.max(1.0));
    }

    #[test]
    fn rotations_are_their_own_wigner_rotation(r in rotation(), m in mass(), p in momentum()) {
        let w = lorentz::wigner_rotation(&r.to_lorentz(), m, &p).unwrap();
        prop_assert!(max_abs3(&(w.matrix() - r.matrix())) < 1e-10);
    }

    #[test]
    fn wigner_rotation_cocycle(l1 in lorentz(), l2 in lorentz(), m in mass(), p in momentum()) {
        let p2 = l2.apply(&FourVector::on_shell(m, &p)).spatial();
        let lhs = lorentz::wigner_rotation(&l1.compose(&l2), m, &p).unwrap();
        let rhs = lorentz::wigner_rotation(&l1, m, &p2).unwrap()
            .compose(&lorentz::wigner_rotation(&l2, m, &p).unwrap());
        prop_assert!(max_abs3(&(lhs.matrix() - rhs.matrix())) < 1e-10);
    }

    #[test]
    fn covering_map_reproduces_adjoint_action(r in rotation()) {
        let d = *lorentz::su2_of_rotation(&r).matrix();
        let s = linalg::paulis();
        for k in 0..3 {
            let lhs = d * s[k] * d.adjoint();
            let rhs = (0..3).fold(CMatrix2::zeros(), |acc, i| acc + s[i] * c(r.matrix()[(i, k)], 0.0));
            prop_assert!(frobenius(&(lhs - rhs)) < 1e-10);
        }
    }

    #[test]
    fn pure_boosts_keep_the_rest_spinor(psi in spinor(), m in mass(), p in momentum()) {
        let l = lorentz::standard_boost(m, &p).unwrap();
        let out = lorentz::apply_lorentz(&l, &relspin::lorentz::MomentumSpinState::at_rest(psi, m).unwrap()).unwrap();
        prop_assert!((out.spinor() - psi).norm() < 1e-10);
    }

    #[test]
    fn wigner_spin_is_pauli_halves(m in mass(), p in momentum()) {
        let t = spinops::wigner_spin(m, &p).unwrap();
        prop_assert!(t.max_deviation(&SpinTriple::pauli_halves()) < 1e-12 * (1.0 + p.norm() / m));
    }

    #[test]
    fn normalized_pl_constructions_agree(m in mass(), p in momentum()) {
        let a = spinops::restricted_spin(OperatorKind::NormalizedPL, m, &p).unwrap();
        let b = spinops::normalized_pl_from_pauli_lubanski(m, &p).unwrap();
        prop_assert!(a.max_deviation(&b) < 1e-12);
    }

    #[test]
    fn eigenvalues_bounded_and_match_closed_form(m in mass(), p in momentum(), a in unit()) {
        let (lo, hi) = spinops::spin_eigenvalues(OperatorKind::NormalizedPL, m, &p, &a).unwrap();
        prop_assert!((lo + hi).abs() < 1e-12);
        prop_assert!(hi <= 0.5 + 1e-12);
        let closed = spinops::eigenvalue_closed_form(m, &p, &a).unwrap();
        prop_assert!((hi - closed).abs() < 1e-12);
        let alpha = spinops::alpha_vector(&a, m, &p).unwrap();
        prop_assert!((hi - alpha.norm() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn povm_is_complete_and_positive(k in kind(), m in mass(), p in momentum(), a in unit()) {
        let e = spinops::povm(k, m, &p, &a).unwrap();
        prop_assert!(e.completeness_defect() < 1e-12);
        prop_assert!(e.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn povm_overlap_positive_for_transverse_axis(m in mass(), n in unit(), pm in 0.01f64..10.0) {
        let axis = n.cross(&Vector3::new(n.z, n.x, -n.y)).normalize();
        let e = spinops::povm(OperatorKind::NormalizedPL, m, &(n * pm), &axis).unwrap();
        prop_assert!(e.overlap_norm() > 0.0);
    }

    #[test]
    fn helicity_agrees_between_kinds(psi in spinor(), m in mass(), n in unit(), pm in 0.01f64..10.0) {
        let p = n * pm;
        let w = dirac::helicity_expectation(&psi, m, &p, OperatorKind::Wigner).unwrap();
        let d = dirac::helicity_expectation(&psi, m, &p, OperatorKind::NormalizedPL).unwrap();
        prop_assert!((w - d).abs() < 1e-12);
    }

    #[test]
    fn commutator_defect_increases_with_momentum(m in mass(), n in unit(), a in 0.0f64..5.0, b in 0.0f64..5.0) {
        prop_assume!((a - b).abs() > 1e-3);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let d = |x: f64| spinops::commutator_defect(&spinops::restricted_spin(OperatorKind::NormalizedPL, m, &(n * x)).unwrap());
        prop_assert!(d(lo) < d(hi));
        let w = spinops::restricted_spin(OperatorKind::Wigner, m, &(n * hi)).unwrap();
        prop_assert!(spinops::commutator_defect(&w) < 1e-12);
    }

    #[test]
    fn dirac_spinors_solve_the_equation(s in prop_oneof![Just(SpinLabel::Up), Just(SpinLabel::Down)], r in rep(), m in mass(), p in momentum()) {
        let u = dirac::plane_wave_spinor(s, m, &p, r).unwrap();
        let e = linalg::energy(m, &p);
        prop_assert!(u.dirac_residual() < 1e-10 * e.max(1.0));
        prop_assert!((u.norm_sqr() - 2.0 * e).abs() < 1e-10 * e);
    }

    #[test]
    fn dirac_restriction_equals_contraction(psi in spinor(), r in rep(), m in mass(), p in momentum()) {
        let d = dirac::dispin_expectation(&psi, m, &p, r).unwrap();
        let expected = spinops::momentum_contraction(m, &p).unwrap() * pauli_vector(&psi);
        prop_assert!((d - expected).amax() < 1e-10);
    }

    #[test]
    fn foldy_wouthuysen_is_unitary_and_block_diagonalizes(s in prop_oneof![Just(SpinLabel::Up), Just(SpinLabel::Down)], m in mass(), p in momentum()) {
        let u = dirac::foldy_wouthuysen(m, &p).unwrap();
        prop_assert!(frobenius(&(u.adjoint() * u - relspin::linalg::CMatrix4::identity())) < 1e-12);
        let psi = dirac::plane_wave_spinor(s, m, &p, Representation::Standard).unwrap();
        let out = u * psi.components();
        let lower = (out[2].norm_sqr() + out[3].norm_sqr()).sqrt();
        prop_assert!(lower < 1e-10 * out.norm().max(1.0));
    }

    #[test]
    fn table_round_trip(k in kind(), m in mass(), p in momentum()) {
        let t = reconstruct::expectation_table(k, m, &p).unwrap();
        let back = reconstruct::reconstruct_operators(&t).unwrap();
        let direct = spinops::restricted_spin(k, m, &p).unwrap();
        prop_assert!(back.max_deviation(&direct) < 1e-12);
        let json = serde_json::to_string(&t).unwrap();
        let parsed: ExpectationTable = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(parsed, t);
    }

    #[test]
    fn lemma2_verdicts_agree(r in rotation(), noise in prop::array::uniform9(-1.0f64..1.0), scale in prop_oneof![Just(0.0), 1e-3f64..1.0]) {
        let n = Matrix3::from_iterator(noise.iter().copied());
        let coeffs = r.matrix() * (Matrix3::identity() + n * scale);
        let t = ExpectationTable::from_triple(&SpinTriple::from_pauli_coefficients(&coeffs));
        let report = reconstruct::lemma2_check(&t, 1e-9);
        prop_assert!(report.verdicts_agree());
        if scale == 0.0 {
            prop_assert!(report.pass);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimizer_never_beats_oracle(k in kind(), m in mass(), pa in momentum(), pb in momentum(), seed in any::<u64>()) {
        let s = TwoParticleState::singlet(m, pa, pb).unwrap();
        let opts = OptimizerOptions { restarts: 4, seed, max_evals: 3000, ..OptimizerOptions::default() };
        let r = bell::max_chsh_optimized(&s, k, &opts).unwrap();
        prop_assert!(r.value <= r.oracle_value + 1e-9);
    }

    #[test]
    fn sub_tsirelson_implies_non_projective(m in mass(), n in unit(), pm in 0.0f64..10.0, a1 in unit(), a2 in unit()) {
        let p = n * pm;
        let s = TwoParticleState::singlet(m, p, p).unwrap();
        let best = bell::max_chsh_oracle(&s, OperatorKind::NormalizedPL).unwrap();
        if best < bell::TSIRELSON - 1e-6 {
            let a1 = spinops::alpha_vector(&a1, m, &p).unwrap().norm();
            let a2 = spinops::alpha_vector(&a2, m, &p).unwrap().norm();
            prop_assert!(a1 < 1.0 || a2 < 1.0);
        }
    }

    #[test]
    fn normalized_pl_chsh_is_non_increasing(m in mass(), n in unit(), a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f = |x: f64| {
            let s = TwoParticleState::singlet(m, n * x, n * x).unwrap();
            bell::max_chsh_oracle(&s, OperatorKind::NormalizedPL).unwrap()
        };
        prop_assert!(f(hi) <= f(lo) + 1e-12);
        let w = TwoParticleState::singlet(m, n * hi, n * hi).unwrap();
        prop_assert!((bell::max_chsh_oracle(&w, OperatorKind::Wigner).unwrap() - bell::TSIRELSON).abs() < 1e-9);
    }
}
