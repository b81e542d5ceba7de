//! Structure constants of a step-2 Lie algebra in an adapted orthonormal frame.
//!
//! Frame indices are 0-based internally: `0..dim_h` span the horizontal
//! distribution H and `dim_h..dim_h + dim_v` span the vertical complement V.
//! Diagnostics and file formats use 1-based indices.

use std::fmt;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::tensor::Tensor3;

/// Absolute tolerance for structural zero tests.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("structure constants have {found} entries, expected {expected} (dim_h = {dim_h}, dim_v = {dim_v})")]
    DimensionMismatch {
        dim_h: usize,
        dim_v: usize,
        expected: usize,
        found: usize,
    },
    #[error("horizontal dimension must be positive")]
    EmptyHorizontal,
    #[error("vertical dimension must be positive (a step-2 space needs a vertical complement)")]
    EmptyVertical,
    #[error("structure constant c[{0}][{1}][{2}] is not finite")]
    NonFinite(usize, usize, usize),
    #[error("rescaling factor must be positive and finite, got {0}")]
    BadScale(f64),
}

/// One violated structural invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `c[i][j][k] + c[j][i][k] != 0` (0-based indices).
    Antisymmetry { i: usize, j: usize, k: usize, defect: f64 },
    /// Largest component of the Jacobiator of `(e_i, e_j, e_k)`.
    Jacobi { i: usize, j: usize, k: usize, defect: f64 },
    /// `H + [H, H]` does not span the algebra.
    BracketGeneration { rank: usize, dim: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Diagnostic::Antisymmetry { i, j, k, defect } => write!(
                f,
                "antisymmetry violated at ({}, {}, {}): c[i][j][k] + c[j][i][k] = {defect:e}",
                i + 1,
                j + 1,
                k + 1
            ),
            Diagnostic::Jacobi { i, j, k, defect } => write!(
                f,
                "Jacobi identity violated at ({}, {}, {}): defect {defect:e}",
                i + 1,
                j + 1,
                k + 1
            ),
            Diagnostic::BracketGeneration { rank, dim } => write!(
                f,
                "not step-2 bracket generating: H + [H,H] has rank {rank} < {dim}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SrcAlgebra {
    name: String,
    dim_h: usize,
    dim_v: usize,
    c: Tensor3,
    params: Vec<(String, f64)>,
}

impl SrcAlgebra {
    /// Builds an algebra from a flat row-major array `c[(i*n + j)*n + k]`.
    pub fn new(
        name: impl Into<String>,
        dim_h: usize,
        dim_v: usize,
        consts: Vec<f64>,
    ) -> Result<Self, AlgebraError> {
        if dim_h == 0 {
            return Err(AlgebraError::EmptyHorizontal);
        }
        if dim_v == 0 {
            return Err(AlgebraError::EmptyVertical);
        }
        let n = dim_h + dim_v;
        if consts.len() != n * n * n {
            return Err(AlgebraError::DimensionMismatch {
                dim_h,
                dim_v,
                expected: n * n * n,
                found: consts.len(),
            });
        }
        let c = Tensor3::from_fn(n, |i, j, k| consts[(i * n + j) * n + k]);
        Self::from_tensor(name, dim_h, dim_v, c)
    }

    pub fn from_tensor(
        name: impl Into<String>,
        dim_h: usize,
        dim_v: usize,
        c: Tensor3,
    ) -> Result<Self, AlgebraError> {
        if dim_h == 0 {
            return Err(AlgebraError::EmptyHorizontal);
        }
        if dim_v == 0 {
            return Err(AlgebraError::EmptyVertical);
        }
        let n = dim_h + dim_v;
        if c.dim() != n {
            return Err(AlgebraError::DimensionMismatch {
                dim_h,
                dim_v,
                expected: n * n * n,
                found: c.as_slice().len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !c[(i, j, k)].is_finite() {
                        return Err(AlgebraError::NonFinite(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            dim_h,
            dim_v,
            c,
            params: Vec::new(),
        })
    }

    /// The abelian algebra of the given dimensions (never valid, useful as a degenerate input).
    pub fn abelian(dim_h: usize, dim_v: usize) -> Result<Self, AlgebraError> {
        let n = dim_h + dim_v;
        Self::new("abelian", dim_h, dim_v, vec![0.0; n * n * n])
    }

    pub fn with_params(mut self, params: Vec<(String, f64)>) -> Self {
        self.params = params;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim(&self) -> usize {
        self.dim_h + self.dim_v
    }

    pub fn is_horizontal(&self, i: usize) -> bool {
        i < self.dim_h
    }

    /// `c[i][j][k]`, the `e_k` component of `[e_i, e_j]`.
    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i, j, k)]
    }

    pub fn constants(&self) -> &Tensor3 {
        &self.c
    }

    /// Bracket of coefficient vectors.
    ///
    /// # Panics
    /// If either vector does not have length `dim()`.
    pub fn bracket(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(u.len(), n, "bracket: left operand has wrong length");
        assert_eq!(v.len(), n, "bracket: right operand has wrong length");
        let mut out = vec![0.0; n];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0.0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                let w = ui * vj;
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.c[(i, j, k)];
                }
            }
        }
        out
    }

    pub fn project_h(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| if i < self.dim_h { x } else { 0.0 })
            .collect()
    }

    pub fn project_v(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| if i < self.dim_h { 0.0 } else { x })
            .collect()
    }

    /// Unit coordinate vector `e_i`.
    pub fn basis(&self, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.dim()];
        e[i] = 1.0;
        e
    }

    /// Checks antisymmetry, the Jacobi identity and step-2 bracket generation.
    /// Returns every violation found; an empty list means the algebra is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let defect = self.c[(i, j, k)] + self.c[(j, i, k)];
                    if defect.abs() > ZERO_TOL {
                        out.push(Diagnostic::Antisymmetry { i, j, k, defect });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let defect = self.jacobiator(i, j, k).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    if defect > ZERO_TOL {
                        out.push(Diagnostic::Jacobi { i, j, k, defect });
                    }
                }
            }
        }
        let rank = self.generated_rank();
        if rank < n {
            out.push(Diagnostic::BracketGeneration { rank, dim: n });
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for l in 0..n {
                let w = self.c[(a, b, l)];
                if w == 0.0 {
                    continue;
                }
                for (m, o) in out.iter_mut().enumerate() {
                    *o += w * self.c[(l, c, m)];
                }
            }
        }
        out
    }

    /// Rank of the span of the horizontal frame together with all `[e_i, e_j]`, `i, j` horizontal.
    fn generated_rank(&self) -> usize {
        let n = self.dim();
        let d = self.dim_h;
        let pairs = d * (d - 1) / 2;
        let mut m = DMatrix::<f64>::zeros(d + pairs, n);
        for i in 0..d {
            m[(i, i)] = 1.0;
        }
        let mut row = d;
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..n {
                    m[(row, k)] = self.c[(i, j, k)];
                }
                row += 1;
            }
        }
        let sv = m.singular_values();
        let scale = sv.iter().fold(1.0f64, |a, &b| a.max(b));
        sv.iter().filter(|&&s| s > 1e-10 * scale).count()
    }

    /// Replaces each vertical frame vector `U` by `U / sqrt(t)`.
    pub fn rescale_v(&self, t: f64) -> Result<Self, AlgebraError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(AlgebraError::BadScale(t));
        }
        let d = self.dim_h;
        let s = |i: usize| if i < d { 1.0 } else { 1.0 / t.sqrt() };
        let c = Tensor3::from_fn(self.dim(), |i, j, k| self.c[(i, j, k)] * s(i) * s(j) / s(k));
        Ok(Self {
            name: self.name.clone(),
            dim_h: self.dim_h,
            dim_v: self.dim_v,
            c,
            params: self.params.clone(),
        })
    }
}
