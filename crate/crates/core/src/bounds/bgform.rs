//! The BG-curvature quadratic forms `R^x`.

use nalgebra::DMatrix;

use super::BoundsError;
use crate::analysis::{sym, Analysis};

/// How the purely horizontal torsion semi-norm `|τ_H|²` counts frame pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeminormConvention {
    /// Sum over ordered pairs `(i, j)` and `(j, i)`.
    #[default]
    OrderedPairs,
    /// Sum over `i < j` only (half the ordered value).
    UnorderedPairs,
}

/// `AᵀQA = R^x(A, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BgForm {
    pub x: f64,
    pub q: DMatrix<f64>,
}

/// `Q(x) = q0 + x q1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BgPencil {
    pub q0: DMatrix<f64>,
    pub q1: DMatrix<f64>,
}

impl BgPencil {
    pub fn at(&self, x: f64) -> DMatrix<f64> {
        &self.q0 + &self.q1 * x
    }
}

fn check_x(x: f64) -> Result<(), BoundsError> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(BoundsError::XOutOfRange(x))
    }
}

/// Builds the affine family `R^x`; with `asn` the horizontal block also gets `2 sym(tr TOR₂)`.
pub fn bg_pencil(an: &Analysis, convention: SeminormConvention, asn: bool) -> BgPencil {
    let n = an.dim();
    let d = an.dim_h();
    let mut src = DMatrix::zeros(n, n);
    src.view_mut((0, 0), (d, d))
        .copy_from(&sym(&an.curvature.sub_ricci.view((0, 0), (d, d)).into_owned()));
    let mut mt = DMatrix::zeros(n, n);
    mt.rows_mut(0, d).copy_from(&an.torsion.tr_nabla_tor().rows(0, d));
    let mt = sym(&mt);
    let g = match convention {
        SeminormConvention::OrderedPairs => an.curvature.grams.tau_h.clone(),
        SeminormConvention::UnorderedPairs => &an.curvature.grams.tau_h * 0.5,
    };
    let mut nn = DMatrix::zeros(n, n);
    nn.view_mut((0, d), (d, n - d))
        .copy_from(&an.torsion.tr_tor2().view((0, d), (d, n - d)));
    let nn = sym(&nn);
    // (1−x) src + (1+x) M + (1+3x)/4 G − (1−x) N
    let mut q0 = &src + &mt + &g * 0.25 - &nn;
    let q1 = -&src + &mt + &g * 0.75 + &nn;
    if asn {
        let extra = sym(&an.torsion.tr_tor2().view((0, 0), (d, d)).into_owned()) * 2.0;
        let mut blk = q0.view_mut((0, 0), (d, d));
        blk += extra;
    }
    BgPencil { q0, q1 }
}

pub fn bg_form(an: &Analysis, x: f64, convention: SeminormConvention) -> Result<BgForm, BoundsError> {
    check_x(x)?;
    Ok(BgForm {
        x,
        q: bg_pencil(an, convention, false).at(x),
    })
}

/// `R^x(A,A) + 2<tr TOR₂(A_H), A_H>`, the quadratic part of the almost-strictly-normal form.
pub fn asn_form(an: &Analysis, x: f64, convention: SeminormConvention) -> Result<BgForm, BoundsError> {
    check_x(x)?;
    Ok(BgForm {
        x,
        q: bg_pencil(an, convention, true).at(x),
    })
}
