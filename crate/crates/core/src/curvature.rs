//! Curvature, sub-Ricci, rigidity, torsion semi-norms and classification.

use nalgebra::DMatrix;

use crate::algebra::{SrcAlgebra, ZERO_TOL};
use crate::connection::{Connection, TorsionPack};
use crate::tensor::{Tensor3, Tensor4};

/// Geometry classes of an adapted frame; every flag is a zero test at `1e-12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    /// `Tor(H, V) ⊆ V`.
    pub h_normal: bool,
    /// `Tor(H, V) ⊆ H`.
    pub v_normal: bool,
    /// `Tor(H, V) = 0`.
    pub strictly_normal: bool,
    pub h_rigid: bool,
    pub v_rigid: bool,
    pub totally_rigid: bool,
    /// `[V, V] ⊆ V`.
    pub vm_integrable: bool,
    /// H-rigid, VM integrable and V-normal.
    pub almost_strictly_normal: bool,
}

impl Flags {
    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, bool); 8] {
        [
            ("H_normal", self.h_normal),
            ("V_normal", self.v_normal),
            ("strictly_normal", self.strictly_normal),
            ("H_rigid", self.h_rigid),
            ("V_rigid", self.v_rigid),
            ("totally_rigid", self.totally_rigid),
            ("VM_integrable", self.vm_integrable),
            ("almost_strictly_normal", self.almost_strictly_normal),
        ]
    }
}

/// Gram matrices of the torsion semi-norms, summed over ordered frame pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormGrams {
    /// `|τ_H^V(A)|² = Σ_{k∈H, i∈V} <Tor(A, E_k), U_i>²`.
    pub tau_hv: DMatrix<f64>,
    /// `|τ_V^H(A)|² = Σ_{k∈V, i∈H} <Tor(A, U_k), E_i>²`.
    pub tau_vh: DMatrix<f64>,
    /// `|τ_H(A)|² = Σ_{i,j∈H} <Tor(E_i, E_j), A>²`.
    pub tau_h: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub rm: Tensor4,
    pub tr_rm: DMatrix<f64>,
    pub sub_ricci: DMatrix<f64>,
    pub rigidity: Vec<f64>,
    pub grams: SeminormGrams,
    pub flags: Flags,
}

impl CurvatureReport {
    pub fn new(alg: &SrcAlgebra, conn: &Connection, pack: &TorsionPack) -> Self {
        let rm = riemann(alg, conn);
        let tr_rm = trace_rm(alg.dim_h(), &rm);
        let sub_ricci = sub_ricci(&tr_rm, pack);
        let rigidity = rigidity(alg.dim_h(), pack.tor());
        let grams = seminorm_grams(alg.dim_h(), pack.tor());
        let flags = classify(alg, pack.tor());
        Self {
            rm,
            tr_rm,
            sub_ricci,
            rigidity,
            grams,
            flags,
        }
    }
}

/// `<R(e_i, e_j) e_k, e_l>` stored at `[(i, j, k, l)]`, with
/// `R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z`.
pub fn riemann(alg: &SrcAlgebra, conn: &Connection) -> Tensor4 {
    let n = alg.dim();
    let g = conn.gamma();
    let mut out = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for p in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += g[(j, k, l)] * g[(i, l, p)] - g[(i, k, l)] * g[(j, l, p)]
                            - alg.c(i, j, l) * g[(l, k, p)];
                    }
                    out[(i, j, k, p)] = s;
                }
            }
        }
    }
    out
}

/// `tr Rm(A, B) = Σ_{k∈H} <R(E_k, A) B, E_k>`.
pub fn trace_rm(dim_h: usize, rm: &Tensor4) -> DMatrix<f64> {
    let n = rm.dim();
    DMatrix::from_fn(n, n, |a, b| (0..dim_h).map(|k| rm[(k, a, b, k)]).sum())
}

/// `tr Rm` minus, on the horizontal block, `½ Σ_k <TOR₂(E_k, A, B), E_k> + <tr TOR₂(A), B>`.
pub fn sub_ricci(tr_rm: &DMatrix<f64>, pack: &TorsionPack) -> DMatrix<f64> {
    let d = pack.dim_h();
    let t2 = pack.tor2();
    let tr = pack.tr_tor2();
    let mut out = tr_rm.clone();
    for a in 0..d {
        for b in 0..d {
            let half: f64 = (0..d).map(|k| t2[(k, a, b, k)]).sum::<f64>() * 0.5;
            out[(a, b)] -= half + tr[(a, b)];
        }
    }
    out
}

/// Components of the rigidity vector: `𝕽(e_a) = Σ_k <Tor(e_k, e_a), e_k>` over the whole frame.
pub fn rigidity(_dim_h: usize, tor: &Tensor3) -> Vec<f64> {
    let n = tor.dim();
    (0..n).map(|a| (0..n).map(|k| tor[(k, a, k)]).sum()).collect()
}

pub fn seminorm_grams(dim_h: usize, tor: &Tensor3) -> SeminormGrams {
    let n = tor.dim();
    let d = dim_h;
    let gram = |ks: std::ops::Range<usize>, is: std::ops::Range<usize>| {
        DMatrix::from_fn(n, n, |a, c| {
            let mut s = 0.0;
            for k in ks.clone() {
                for i in is.clone() {
                    s += tor[(a, k, i)] * tor[(c, k, i)];
                }
            }
            s
        })
    };
    let tau_hv = gram(0..d, d..n);
    let tau_vh = gram(d..n, 0..d);
    let tau_h = DMatrix::from_fn(n, n, |a, c| {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += tor[(i, j, a)] * tor[(i, j, c)];
            }
        }
        s
    });
    SeminormGrams { tau_hv, tau_vh, tau_h }
}

pub fn classify(alg: &SrcAlgebra, tor: &Tensor3) -> Flags {
    let n = alg.dim();
    let d = alg.dim_h();
    let tol = ZERO_TOL * alg.constants().max_abs().max(1.0);
    let zero = |v: f64| v.abs() <= tol;
    let mut h_normal = true;
    let mut v_normal = true;
    for x in 0..d {
        for t in d..n {
            for k in 0..n {
                if !zero(tor[(x, t, k)]) {
                    if k < d {
                        h_normal = false;
                    } else {
                        v_normal = false;
                    }
                }
            }
        }
    }
    let rig = rigidity(d, tor);
    let h_rigid = rig[..d].iter().all(|&v| zero(v));
    let v_rigid = rig[d..].iter().all(|&v| zero(v));
    let mut vm_integrable = true;
    for i in d..n {
        for j in d..n {
            for k in 0..d {
                if !zero(alg.c(i, j, k)) {
                    vm_integrable = false;
                }
            }
        }
    }
    Flags {
        h_normal,
        v_normal,
        strictly_normal: h_normal && v_normal,
        h_rigid,
        v_rigid,
        totally_rigid: h_rigid && v_rigid,
        vm_integrable,
        almost_strictly_normal: h_rigid && vm_integrable && v_normal,
    }
}
