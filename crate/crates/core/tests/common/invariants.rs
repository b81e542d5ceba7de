//! Structural invariants shared by the property suite and the acceptance harness.

use proptest::prelude::*;
use subriem_core::{check_axioms, optimize, Analysis, SrcAlgebra, SweepOptions, Theorem};

use super::{builtin_at, random_algebra};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

pub fn algebra() -> impl Strategy<Value = SrcAlgebra> {
    (0usize..4, 0usize..3, prop::collection::vec(-1.0f64..1.0, 36))
        .prop_filter_map("ill-conditioned frame", |(w, d, c)| random_algebra(w, d, &c))
}

/// Builtins over their parameter ranges, which cover every flag combination used by the lemmas.
pub fn example() -> impl Strategy<Value = SrcAlgebra> {
    prop_oneof![
        (-1.0f64..1.0).prop_map(|c| builtin_at("so3_twisted", &[("c", c)]).algebra),
        (0.0f64..0.5).prop_map(|b| builtin_at("so4_twisted", &[("b", b)]).algebra),
        Just(builtin_at("so4_alt", &[]).algebra),
        Just(builtin_at("twisted_spheres", &[]).algebra),
    ]
}

pub fn any_algebra() -> impl Strategy<Value = SrcAlgebra> {
    prop_oneof![algebra(), example()]
}

pub fn scale(alg: &SrcAlgebra) -> f64 {
    alg.constants().max_abs().max(1.0)
}

pub fn connection_axioms(alg: &SrcAlgebra) -> Check {
    let an = Analysis::new(alg.clone()).map_err(|e| e.to_string())?;
    let violations = check_axioms(alg, &an.connection).map_err(|e| e.to_string())?;
    ensure!(violations.is_empty(), "axiom violations: {violations:?}");
    let t = an.torsion.tor();
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                ensure!((t[(i, j, k)] + t[(j, i, k)]).abs() < 1e-12 * scale(alg), "torsion not antisymmetric");
            }
        }
    }
    Ok(())
}

/// H×H symmetry of the sub-Ricci form and `src(X, T) = 0`.
pub fn sub_ricci_symmetric_and_zero_on_hv(alg: &SrcAlgebra) -> Check {
    let an = Analysis::new(alg.clone()).map_err(|e| e.to_string())?;
    let src = &an.curvature.sub_ricci;
    let (d, n) = (alg.dim_h(), alg.dim());
    let tol = 1e-10 * scale(alg).powi(2);
    for i in 0..d {
        for j in 0..d {
            ensure!((src[(i, j)] - src[(j, i)]).abs() < tol, "asymmetric at {i},{j}");
        }
        // src(T, X) is generally nonzero; only src(X, T) vanishes.
        for t in d..n {
            ensure!(src[(i, t)].abs() < tol, "src(X{i}, T{t}) = {}", src[(i, t)]);
        }
    }
    Ok(())
}

/// On a general frame the torsion Bianchi identity gives
/// `src(X,Y) − src(Y,X) = −2 (Σ_k ⟨TOR₂(E_k,X,Y),E_k⟩ + ⟨tr TOR₂(X),Y⟩ − ⟨tr TOR₂(Y),X⟩)`,
/// which vanishes on strictly normal spaces.
pub fn sub_ricci_antisymmetric_part(alg: &SrcAlgebra) -> Check {
    let an = Analysis::new(alg.clone()).map_err(|e| e.to_string())?;
    let src = &an.curvature.sub_ricci;
    let (t2, tr) = (an.torsion.tor2(), an.torsion.tr_tor2());
    let (d, n) = (alg.dim_h(), alg.dim());
    let tol = 1e-10 * scale(alg).powi(2);
    for x in 0..d {
        for y in 0..d {
            let p: f64 = (0..d).map(|k| t2[(k, x, y, k)]).sum::<f64>() + tr[(x, y)] - tr[(y, x)];
            let asym = src[(x, y)] - src[(y, x)];
            ensure!((asym + 2.0 * p).abs() < tol, "({x},{y}): {asym} vs {}", -2.0 * p);
            if an.curvature.flags.strictly_normal {
                ensure!(asym.abs() < tol, "strictly normal but asymmetric at {x},{y}");
            }
        }
        for t in d..n {
            ensure!(src[(x, t)].abs() < tol, "src(X{x}, T{t}) = {}", src[(x, t)]);
        }
    }
    Ok(())
}

/// Polarized form of `⟨T, tr TOR₂(T)⟩ = |τ_H^V(T)|²` on V.
pub fn lemma_vv(alg: &SrcAlgebra) -> Check {
    let an = Analysis::new(alg.clone()).map_err(|e| e.to_string())?;
    let (d, n) = (alg.dim_h(), alg.dim());
    let tr = an.torsion.tr_tor2();
    let g = &an.curvature.grams.tau_hv;
    let tol = 1e-10 * scale(alg).powi(2);
    for s in d..n {
        for t in d..n {
            let lhs = 0.5 * (tr[(s, t)] + tr[(t, s)]);
            ensure!((lhs - g[(s, t)]).abs() < tol, "({s},{t}): {lhs} vs {}", g[(s, t)]);
        }
    }
    Ok(())
}

/// `Σ_i ⟨∇Tor(E_i, T, X), E_i⟩ = 0` everywhere, and the other slot reading on H-rigid spaces.
pub fn lemma_hrn(alg: &SrcAlgebra) -> Check {
    let an = Analysis::new(alg.clone()).map_err(|e| e.to_string())?;
    let (d, n) = (alg.dim_h(), alg.dim());
    let nt = an.torsion.nabla_tor();
    let tol = 1e-10 * scale(alg).powi(3);
    for t in d..n {
        for x in 0..d {
            // nablaTor(A,B,C) = (nabla_B Tor)(A,C)
            let s: f64 = (0..d).map(|i| nt[(i, t, x, i)]).sum();
            ensure!(s.abs() < tol, "T={t} X={x}: {s}");
            if an.curvature.flags.h_rigid {
                let s: f64 = (0..d).map(|i| nt[(i, x, t, i)]).sum();
                ensure!(s.abs() < tol, "H-rigid, T={t} X={x}: {s}");
            }
        }
    }
    Ok(())
}

/// Flag implications, and H-normal ⇒ `T₂ = 0`, plus VM-integrable ⇒ `T₁ = 0`.
pub fn flag_implications(alg: &SrcAlgebra) -> Check {
    let an = Analysis::new(alg.clone()).map_err(|e| e.to_string())?;
    let f = an.curvature.flags;
    ensure!(!f.strictly_normal || (f.h_normal && f.v_normal), "strictly normal flags {f:?}");
    ensure!(!f.totally_rigid || (f.h_rigid && f.v_rigid), "totally rigid flags {f:?}");
    ensure!(
        f.almost_strictly_normal == (f.h_rigid && f.vm_integrable && f.v_normal),
        "almost strictly normal flags {f:?}"
    );
    let tol = 1e-10 * scale(alg).powi(3);
    let t2 = &an.distortion.t2;
    ensure!((t2 - t2.transpose()).amax() < tol, "T2 not symmetric");
    if f.h_normal {
        ensure!(t2.amax() < tol, "H-normal but T2 = {t2}");
        if f.vm_integrable {
            ensure!(an.distortion.t1.amax() < tol, "T1 = {}", an.distortion.t1);
        }
    }
    Ok(())
}

/// Reduced grid; rescaling invariance does not depend on resolution.
pub fn cheap() -> SweepOptions {
    SweepOptions {
        x_points: 200,
        rho2_per_decade: 40,
        ..SweepOptions::default()
    }
}

/// `κ` scales with `t`; `ω, χ, ψ`, `x` and every bound are unchanged under `rescale_V(t)`.
pub fn rescaling_invariance(alg: &SrcAlgebra, t: f64) -> Check {
    let a = Analysis::new(alg.clone()).map_err(|e| e.to_string())?;
    let b = Analysis::new(alg.rescale_v(t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let close = |p: f64, q: f64| (p - q).abs() <= 1e-8 * p.abs().max(1.0);
    ensure!(close(a.constants.kappa * t, b.constants.kappa), "kappa {} vs {}", a.constants.kappa, b.constants.kappa);
    let (ra, rb) = (optimize(&a, &cheap()), optimize(&b, &cheap()));
    let ids = |r: &[subriem_core::bounds::BoundEntry]| r.iter().map(|e| e.theorem).collect::<Vec<Theorem>>();
    ensure!(ids(&ra.entries) == ids(&rb.entries), "theorem sets differ");
    for (x, y) in ra.entries.iter().zip(&rb.entries) {
        ensure!(close(x.bound, y.bound), "{}: {} vs {}", x.theorem, x.bound, y.bound);
        ensure!(close(x.omega, y.omega), "{} omega {} vs {}", x.theorem, x.omega, y.omega);
        ensure!(close(x.chi, y.chi), "{} chi {} vs {}", x.theorem, x.chi, y.chi);
        ensure!(close(x.psi, y.psi), "{} psi {} vs {}", x.theorem, x.psi, y.psi);
        ensure!(close(x.x, y.x), "{} x: {} vs {}", x.theorem, x.x, y.x);
    }
    Ok(())
}

/// `m(ω,χ,0) = 2√(ωχ)`, `m(ω,0,ψ) = ∛(27ω²ψ/4)` and `m(ω,0,0) = 0` from the numeric
/// minimizer, to `1e-10`, on `cases` deterministic random draws.
pub fn m_constant_closed_forms(cases: usize) -> Check {
    use proptest::strategy::ValueTree;
    use subriem_core::bounds::m_constant_numeric;
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strat = (1e-3f64..1e3, 1e-3f64..1e3, 1e-3f64..1e3);
    let m = |w, c, p| m_constant_numeric(w, c, p).map(|m| m.value).map_err(|e| e.to_string());
    for _ in 0..cases {
        let (w, c, p) = strat.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let got = m(w, c, 0.0)?;
        let want = 2.0 * (w * c).sqrt();
        ensure!((got - want).abs() <= 1e-10 * want.max(1.0), "m({w},{c},0) = {got}, want {want}");
        let got = m(w, 0.0, p)?;
        let want = (27.0 * w * w * p / 4.0).cbrt();
        ensure!((got - want).abs() <= 1e-10 * want.max(1.0), "m({w},0,{p}) = {got}, want {want}");
        let got = m(w, 0.0, 0.0)?;
        ensure!(got.abs() <= 1e-10, "m({w},0,0) = {got}");
    }
    Ok(())
}
