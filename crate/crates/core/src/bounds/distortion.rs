//! Mixed and pure distortion tensors.

use nalgebra::DMatrix;

use crate::analysis::sym;
use crate::connection::TorsionPack;
use crate::curvature::CurvatureReport;

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionPack {
    /// `dim_v x dim_h`: `T₁(U_t, E_x)`.
    pub t1: DMatrix<f64>,
    /// `dim_h x dim_h`, symmetric: `T₂(E_a, E_b)`.
    pub t2: DMatrix<f64>,
}

/// `T₁(T,X) = Σ_k <TOR₂(E_k,T,X) − ∇Tor(E_k,T,X) + TOR₂(T,X,E_k), E_k> + 4<tr TOR₂(T), X>`,
/// `T₂(X,X) = 2|τ_V^H(X)|² + <tr_V ∇Tor(X), X> + <Tor(X, 𝕽_V), X>`.
pub fn distortion(pack: &TorsionPack, curv: &CurvatureReport) -> DistortionPack {
    let d = pack.dim_h();
    let n = pack.dim();
    let m = n - d;
    let t2s = pack.tor2();
    let nt = pack.nabla_tor();
    let tr = pack.tr_tor2();
    let t1 = DMatrix::from_fn(m, d, |ti, x| {
        let t = d + ti;
        let s: f64 = (0..d)
            .map(|k| t2s[(k, t, x, k)] - nt[(k, t, x, k)] + t2s[(t, x, k, k)])
            .sum();
        s + 4.0 * tr[(t, x)]
    });
    let tor = pack.tor();
    let rig_v: Vec<f64> = (0..n).map(|a| if a < d { 0.0 } else { curv.rigidity[a] }).collect();
    let raw = DMatrix::from_fn(d, d, |a, b| {
        let tor_r: f64 = (0..n).map(|q| tor[(a, q, b)] * rig_v[q]).sum();
        2.0 * curv.grams.tau_vh[(a, b)] + pack.tr_v_nabla_tor()[(a, b)] + tor_r
    });
    DistortionPack { t1, t2: sym(&raw) }
}
