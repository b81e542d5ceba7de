//! All algebraic invariants of one algebra, computed once.

use nalgebra::DMatrix;

use crate::algebra::{SrcAlgebra, ZERO_TOL};
use crate::bounds::distortion::{distortion, DistortionPack};
use crate::connection::{canonical_connection, Connection, ConnectionError, TorsionPack};
use crate::curvature::CurvatureReport;

/// ρ₂-independent scalars feeding the eigenvalue bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricConstants {
    /// Largest eigenvalue of the `τ_H^V` Gram matrix on H.
    pub kappa: f64,
    /// `max(λ_max(T₂), 0)`; `χ = ρ₂ · t2_max`.
    pub t2_max: f64,
    /// Largest singular value of `T₁`; `ψ = ρ₂ σ²`.
    pub sigma: f64,
    /// `T₁ ≡ 0` to tolerance.
    pub t1_zero: bool,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub algebra: SrcAlgebra,
    pub connection: Connection,
    pub torsion: TorsionPack,
    pub curvature: CurvatureReport,
    pub distortion: DistortionPack,
    pub constants: GeometricConstants,
}

impl Analysis {
    /// Computes every invariant. Does not run [`SrcAlgebra::validate`]; callers
    /// that need a valid step-2 algebra should check it first.
    pub fn new(algebra: SrcAlgebra) -> Result<Self, ConnectionError> {
        let connection = canonical_connection(&algebra)?;
        let torsion = TorsionPack::new(&algebra, &connection);
        let curvature = CurvatureReport::new(&algebra, &connection, &torsion);
        let distortion = distortion(&torsion, &curvature);
        let d = algebra.dim_h();
        let kappa = max_eig(&curvature.grams.tau_hv.view((0, 0), (d, d)).into_owned()).max(0.0);
        let t2_max = max_eig(&distortion.t2).max(0.0);
        let sigma = if distortion.t1.is_empty() {
            0.0
        } else {
            distortion.t1.singular_values().max()
        };
        let scale = algebra.constants().max_abs().max(1.0);
        let t1_zero = distortion.t1.amax() <= ZERO_TOL * scale * scale;
        let constants = GeometricConstants {
            kappa,
            t2_max,
            sigma,
            t1_zero,
        };
        Ok(Self {
            algebra,
            connection,
            torsion,
            curvature,
            distortion,
            constants,
        })
    }

    pub fn dim_h(&self) -> usize {
        self.algebra.dim_h()
    }

    pub fn dim_v(&self) -> usize {
        self.algebra.dim_v()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `tr ∇Tor(X) = 0` for every horizontal `X`.
    pub fn horizontal_nabla_trace_vanishes(&self) -> bool {
        let d = self.dim_h();
        let scale = self.algebra.constants().max_abs().max(1.0);
        let m = self.torsion.tr_nabla_tor();
        m.rows(0, d).amax() <= ZERO_TOL * scale * scale
    }
}

pub(crate) fn max_eig(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.symmetric_eigenvalues().max()
}

pub(crate) fn min_eig(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    m.symmetric_eigenvalues().min()
}

pub(crate) fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}
