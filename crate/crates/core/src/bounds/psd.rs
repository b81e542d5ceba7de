//! Curvature constants `(ρ₁, ρ₂)` with `Q − diag(ρ₁ I_d, ρ₂ I_m) ⪰ 0`.

use nalgebra::{DMatrix, DVector};

use super::bgform::BgForm;
use super::BoundsError;
use crate::analysis::min_eig;

/// Slack allowed on the minimum eigenvalue in PSD tests.
pub const PSD_TOL: f64 = 1e-12;
const BISECT_TOL: f64 = 1e-12;

/// Largest `ρ₁` such that `Q − diag(ρ₁ I_d, ρ₂ I_m)` is positive semidefinite,
/// by bisection on the minimum eigenvalue. `None` when even `ρ₁ = 0` fails.
pub fn feasible_rho1(form: &BgForm, dim_h: usize, rho2: f64) -> Result<Option<f64>, BoundsError> {
    if !(rho2.is_finite() && rho2 > 0.0) {
        return Err(BoundsError::BadRho2(rho2));
    }
    let q = &form.q;
    let n = q.nrows();
    let feasible = |rho1: f64| {
        let mut m = q.clone();
        for i in 0..n {
            m[(i, i)] -= if i < dim_h { rho1 } else { rho2 };
        }
        min_eig(&m) >= -PSD_TOL
    };
    if !feasible(0.0) {
        return Ok(None);
    }
    let mut lo = 0.0;
    let mut hi = min_eig(&q.view((0, 0), (dim_h, dim_h)).into_owned()).max(0.0) + PSD_TOL;
    if feasible(hi) {
        return Ok(Some(hi));
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Exact `ρ₁(ρ₂)` through the Schur complement
/// `S(ρ₂) = Q_HH − Σ_k u_k u_kᵀ / (λ_k − ρ₂)` over the eigenpairs `(λ_k, v_k)` of `Q_VV`,
/// with `u_k = Q_HV v_k`.
#[derive(Debug, Clone)]
pub struct SchurPencil {
    q_hh: DMatrix<f64>,
    lambdas: Vec<f64>,
    couplings: Vec<Option<DVector<f64>>>,
    rho2_max: f64,
    boundary_ok: bool,
}

impl SchurPencil {
    pub fn new(q: &DMatrix<f64>, dim_h: usize) -> Self {
        let n = q.nrows();
        let d = dim_h;
        let q_hh = q.view((0, 0), (d, d)).into_owned();
        let q_vv = q.view((d, d), (n - d, n - d)).into_owned();
        let q_hv = q.view((0, d), (d, n - d)).into_owned();
        let eig = q_vv.symmetric_eigen();
        let scale = q.amax().max(1.0);
        let mut lambdas = Vec::with_capacity(n - d);
        let mut couplings = Vec::with_capacity(n - d);
        for k in 0..n - d {
            let u = &q_hv * eig.eigenvectors.column(k);
            lambdas.push(eig.eigenvalues[k]);
            couplings.push((u.amax() > PSD_TOL * scale).then_some(u));
        }
        let rho2_max = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
        let boundary_ok = lambdas
            .iter()
            .zip(&couplings)
            .all(|(&l, u)| u.is_none() || l - rho2_max > PSD_TOL * scale);
        Self {
            q_hh,
            lambdas,
            couplings,
            rho2_max,
            boundary_ok,
        }
    }

    /// `λ_min(Q_VV)`: no admissible `ρ₂` exceeds it.
    pub fn rho2_max(&self) -> f64 {
        self.rho2_max
    }

    /// Whether `ρ₂ = rho2_max` itself is admissible (no coupling along the minimal eigenspace).
    pub fn boundary_feasible(&self) -> bool {
        self.boundary_ok && self.rho2_max > 0.0
    }

    pub fn admissible(&self, rho2: f64) -> bool {
        rho2 > 0.0 && (rho2 < self.rho2_max || (rho2 == self.rho2_max && self.boundary_feasible()))
    }

    pub fn matrix(&self, rho2: f64) -> Option<DMatrix<f64>> {
        if !self.admissible(rho2) {
            return None;
        }
        let mut s = self.q_hh.clone();
        for (&l, u) in self.lambdas.iter().zip(&self.couplings) {
            if let Some(u) = u {
                let gap = l - rho2;
                if gap <= 0.0 {
                    return None;
                }
                s -= u * u.transpose() / gap;
            }
        }
        Some(s)
    }

    /// Optimal `ρ₁` for this `ρ₂` (may be negative), or `None` if `ρ₂` is not admissible.
    pub fn rho1(&self, rho2: f64) -> Option<f64> {
        self.matrix(rho2).map(|s| min_eig(&s))
    }
}
