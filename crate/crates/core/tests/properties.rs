//! Randomized invariants of the algebra, connection, curvature and bounds layers.

mod common;

use common::invariants::{self, algebra, any_algebra, example, scale};
use nalgebra::DMatrix;
use proptest::prelude::*;
use subriem_core::bounds::{
    bg_form, feasible_rho1, m_constant, m_constant_numeric, main_value, t1zero_value, SchurPencil,
    SeminormConvention,
};
use subriem_core::{check_axioms, optimize, Analysis, Connection, SrcAlgebra, SweepOptions};

fn holds(c: invariants::Check) -> Result<(), TestCaseError> {
    c.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_is_bilinear_antisymmetric_and_jacobi(
        alg in algebra(),
        u in prop::collection::vec(-1.0f64..1.0, 6),
        v in prop::collection::vec(-1.0f64..1.0, 6),
        w in prop::collection::vec(-1.0f64..1.0, 6),
        s in -2.0f64..2.0,
    ) {
        let n = alg.dim();
        let (u, v, w) = (&u[..n], &v[..n], &w[..n]);
        let tol = 1e-10 * scale(&alg).powi(2);
        let su: Vec<f64> = u.iter().zip(w).map(|(a, b)| s * a + b).collect();
        let lhs = alg.bracket(&su, v);
        let (a, b) = (alg.bracket(u, v), alg.bracket(w, v));
        for k in 0..n {
            prop_assert!((lhs[k] - (s * a[k] + b[k])).abs() < tol);
            prop_assert!((a[k] + alg.bracket(v, u)[k]).abs() < tol);
        }
        prop_assert!(alg.bracket(u, u).iter().all(|x| x.abs() < tol));
        let j1 = alg.bracket(u, &alg.bracket(v, w));
        let j2 = alg.bracket(v, &alg.bracket(w, u));
        let j3 = alg.bracket(w, &alg.bracket(u, v));
        for k in 0..n {
            prop_assert!((j1[k] + j2[k] + j3[k]).abs() < tol * scale(&alg));
        }
    }

    #[test]
    fn projections_split_the_space(alg in algebra(), u in prop::collection::vec(-1.0f64..1.0, 6)) {
        let u = &u[..alg.dim()];
        let h = alg.project_h(u);
        let v = alg.project_v(u);
        prop_assert_eq!(alg.project_h(&h), h.clone());
        for k in 0..u.len() {
            prop_assert_eq!(h[k] + v[k], u[k]);
        }
    }

    #[test]
    fn rescaling_preserves_validity(alg in any_algebra(), t in 0.01f64..100.0) {
        prop_assert!(alg.rescale_v(t).unwrap().is_valid());
    }

    #[test]
    fn canonical_connection_satisfies_axioms(alg in any_algebra()) {
        holds(invariants::connection_axioms(&alg))?;
    }

    #[test]
    fn perturbed_connection_violates_axioms(
        alg in any_algebra(),
        idx in (0usize..6, 0usize..6, 0usize..6),
        up in any::<bool>(),
    ) {
        let an = Analysis::new(alg.clone()).unwrap();
        let n = alg.dim();
        let mut g = an.connection.gamma().clone();
        g[(idx.0 % n, idx.1 % n, idx.2 % n)] += if up { 1e-3 } else { -1e-3 };
        let probe = Connection::from_gamma(alg.dim_h(), g);
        prop_assert!(!check_axioms(&alg, &probe).unwrap().is_empty());
    }

    #[test]
    fn sub_ricci_symmetric_on_examples_and_zero_on_hv(alg in example()) {
        holds(invariants::sub_ricci_symmetric_and_zero_on_hv(&alg))?;
    }

    /// On a general frame the torsion Bianchi identity gives
    /// `src(X,Y) − src(Y,X) = −2 (Σ_k ⟨TOR₂(E_k,X,Y),E_k⟩ + ⟨tr TOR₂(X),Y⟩ − ⟨tr TOR₂(Y),X⟩)`,
    /// which vanishes on strictly normal spaces.
    #[test]
    fn sub_ricci_antisymmetric_part(alg in any_algebra()) {
        holds(invariants::sub_ricci_antisymmetric_part(&alg))?;
    }

    #[test]
    fn rm_antisymmetries_and_psd_grams(alg in any_algebra()) {
        let an = Analysis::new(alg.clone()).unwrap();
        let rm = &an.curvature.rm;
        let n = alg.dim();
        let tol = 1e-10 * scale(&alg).powi(2);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        prop_assert!((rm[(i, j, k, l)] + rm[(j, i, k, l)]).abs() < tol);
                        prop_assert!((rm[(i, j, k, l)] + rm[(i, j, l, k)]).abs() < tol);
                    }
                }
            }
        }
        let g = &an.curvature.grams;
        for m in [&g.tau_hv, &g.tau_vh, &g.tau_h] {
            prop_assert!((m - m.transpose()).amax() < tol);
            prop_assert!(m.clone().symmetric_eigenvalues().min() > -tol);
        }
    }

    #[test]
    fn lemma_vv(alg in any_algebra()) {
        holds(invariants::lemma_vv(&alg))?;
    }

    #[test]
    fn lemma_hrn_on_h_rigid_spaces(alg in any_algebra()) {
        holds(invariants::lemma_hrn(&alg))?;
    }

    #[test]
    fn flag_implications_and_distortion(alg in any_algebra()) {
        holds(invariants::flag_implications(&alg))?;
    }

    #[test]
    fn bg_form_is_symmetric_and_affine(alg in any_algebra(), x0 in 0.0f64..0.3, x1 in 0.35f64..0.6, x2 in 0.65f64..0.99) {
        let an = Analysis::new(alg.clone()).unwrap();
        let conv = SeminormConvention::OrderedPairs;
        let q = |x| bg_form(&an, x, conv).unwrap().q;
        let (q0, q1, q2) = (q(x0), q(x1), q(x2));
        let tol = 1e-10 * scale(&alg).powi(3);
        prop_assert!((&q1 - q1.transpose()).amax() < tol);
        let lam = (x1 - x0) / (x2 - x0);
        let interp = &q0 * (1.0 - lam) + &q2 * lam;
        prop_assert!((interp - &q1).amax() < tol);
    }

    #[test]
    fn schur_matches_bisection(alg in any_algebra(), x in 0.0f64..0.95, r in 0.02f64..1.0) {
        let an = Analysis::new(alg.clone()).unwrap();
        let form = bg_form(&an, x, SeminormConvention::OrderedPairs).unwrap();
        let d = alg.dim_h();
        let schur = SchurPencil::new(&form.q, d);
        prop_assume!(schur.rho2_max() > 0.0);
        let rho2 = r * schur.rho2_max();
        let exact = schur.rho1(rho2);
        let bis = feasible_rho1(&form, d, rho2).unwrap();
        match (exact, bis) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-8 * scale(&alg).powi(2), "{a} vs {b}"),
            (None, None) => {}
            // The bisection only explores rho1 >= 0.
            (Some(a), None) => prop_assert!(a < 1e-8),
            (None, Some(b)) => prop_assert!(false, "bisection found {b}, Schur none"),
        }
    }

    #[test]
    fn t1zero_dominates_main(rho1 in 0.01f64..10.0, omega in 0.0f64..10.0, chi in 0.0f64..10.0, delta in 0.01f64..1.0) {
        let m = m_constant(omega, chi, 0.0).unwrap().value;
        if let Some(main) = main_value(rho1, m, delta, omega) {
            let (t1z, _) = t1zero_value(rho1, omega, chi, delta).expect("defined whenever main is");
            prop_assert!(t1z >= main - 1e-12 * main.max(1.0), "{t1z} < {main}");
        }
    }

    #[test]
    fn m_constant_numeric_agrees(omega in 1e-3f64..1e3, chi in 0.0f64..1e3, psi in 0.0f64..1e3) {
        let a = m_constant(omega, chi, psi).unwrap().value;
        let b = m_constant_numeric(omega, chi, psi).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn vertical_rescaling_leaves_bounds_unchanged(alg in any_algebra(), ti in 0usize..3) {
        holds(invariants::rescaling_invariance(&alg, [0.1, 1.0, 10.0][ti]))?;
    }
}

#[test]
fn m_constant_closed_forms_on_random_inputs() {
    invariants::m_constant_closed_forms(1000).unwrap();
}

#[test]
fn abelian_algebra_has_trivial_geometry() {
    let alg = SrcAlgebra::abelian(2, 1).unwrap();
    assert!(!alg.is_valid());
    let an = Analysis::new(alg).unwrap();
    assert!(an.connection.gamma().max_abs() == 0.0);
    assert!(an.torsion.tor().max_abs() == 0.0);
    assert!(an.curvature.rm.max_abs() == 0.0);
    assert!(an.curvature.flags.totally_rigid);
    let q = bg_form(&an, 0.0, SeminormConvention::OrderedPairs).unwrap().q;
    assert_eq!(q, DMatrix::zeros(3, 3));
    assert!(optimize(&an, &SweepOptions::default()).entries.is_empty());
}
