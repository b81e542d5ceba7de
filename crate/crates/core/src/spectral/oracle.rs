//! Exact sub-Laplacian spectra on su(2)-built models via irrep enumeration.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use super::su2::{generators, C64};
use crate::algebra::SrcAlgebra;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// Left-invariant fields on SU(2) or SO(3); every allowed irrep appears.
    GroupRegular,
    /// Rotation fields on the round S²; integer spins only.
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinPolicy {
    /// `j ∈ ½ℤ`.
    HalfInteger,
    /// `j ∈ ℤ`.
    Integer,
}

/// Joint constraint on the spins of a multi-factor label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Any,
    /// `Σ j_f ∈ ℤ`, e.g. SO(4) = (SU(2) × SU(2)) / ±1.
    IntegerSum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub label: String,
    pub kind: FactorKind,
    pub spins: SpinPolicy,
}

/// Irrep label as twice the spin of each factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IrrepLabel(pub Vec<u32>);

impl IrrepLabel {
    pub fn casimir(&self) -> f64 {
        self.0
            .iter()
            .map(|&t| {
                let j = f64::from(t) / 2.0;
                j * (j + 1.0)
            })
            .sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&t| t == 0)
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|&t| t as usize + 1).product()
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if t % 2 == 0 {
                write!(f, "{}", t / 2)?;
            } else {
                write!(f, "{t}/2")?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("oracle needs at least one factor")]
    NoFactors,
    #[error("frame map is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    FrameMapShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("sphere factor '{0}' admits integer spins only")]
    SphereHalfSpin(String),
    #[error("spin {twice_j}/2 is not allowed for factor '{factor}'")]
    SpinNotAllowed { factor: String, twice_j: u32 },
    #[error("Casimir cutoff must be positive and finite, got {0}")]
    BadCutoff(f64),
    #[error("frame map is not injective: rank {rank} < {dim}")]
    NotInjective { rank: usize, dim: usize },
    #[error("frame map does not preserve brackets at (e{i}, e{j}): defect {defect:e}")]
    NotIsomorphism { i: usize, j: usize, defect: f64 },
    #[error("zero eigenvalue in nontrivial irrep {0}")]
    ZeroInNontrivial(IrrepLabel),
    #[error("no nontrivial irrep below Casimir cutoff {0}")]
    NoSpectrum(f64),
    #[error("Casimir cutoff {cutoff} is below 4x the bound {bound} being certified")]
    CutoffTooSmall { cutoff: f64, bound: f64 },
}

/// Description of an su(2)-built model and of how the frame maps into it.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    dim_h: usize,
    factors: Vec<Factor>,
    parity: Parity,
    /// Row `i` expresses frame vector `e_i` in the generators `(g^f_1, g^f_2, g^f_3)` of every factor `f`.
    frame_map: DMatrix<f64>,
    cutoff: f64,
    mu: f64,
    /// `(dim_v) x (#factors)`: norms of the vertical rows restricted to each factor.
    nu: DMatrix<f64>,
}

pub const DEFAULT_CUTOFF: f64 = 40.0;

impl OracleConfig {
    pub fn new(
        dim_h: usize,
        factors: Vec<Factor>,
        parity: Parity,
        frame_map: DMatrix<f64>,
        cutoff: f64,
    ) -> Result<Self, SpectralError> {
        if factors.is_empty() {
            return Err(SpectralError::NoFactors);
        }
        for f in &factors {
            if f.kind == FactorKind::Sphere && f.spins == SpinPolicy::HalfInteger {
                return Err(SpectralError::SphereHalfSpin(f.label.clone()));
            }
        }
        let cols = 3 * factors.len();
        if frame_map.ncols() != cols || frame_map.nrows() <= dim_h {
            return Err(SpectralError::FrameMapShape {
                rows: frame_map.nrows(),
                cols: frame_map.ncols(),
                expected_rows: frame_map.nrows().max(dim_h + 1),
                expected_cols: cols,
            });
        }
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(SpectralError::BadCutoff(cutoff));
        }
        let w = frame_map.transpose() * &frame_map;
        let mu = w.symmetric_eigenvalues().min().max(0.0);
        let n = frame_map.nrows();
        let nu = DMatrix::from_fn(n - dim_h, factors.len(), |k, f| {
            frame_map.view((dim_h + k, 3 * f), (1, 3)).norm()
        });
        Ok(Self {
            dim_h,
            factors,
            parity,
            frame_map,
            cutoff,
            mu,
            nu,
        })
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim(&self) -> usize {
        self.frame_map.nrows()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn frame_map(&self) -> &DMatrix<f64> {
        &self.frame_map
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn with_cutoff(&self, cutoff: f64) -> Result<Self, SpectralError> {
        Self::new(
            self.dim_h,
            self.factors.clone(),
            self.parity,
            self.frame_map.clone(),
            cutoff,
        )
    }

    /// Replaces the horizontal rows `F_H` by `q · F_H` (a change of orthonormal horizontal frame when `q` is orthogonal).
    pub fn rotate_horizontal(&self, q: &DMatrix<f64>) -> Result<Self, SpectralError> {
        let d = self.dim_h;
        let mut fm = self.frame_map.clone();
        let rotated = q * self.frame_map.rows(0, d);
        fm.rows_mut(0, d).copy_from(&rotated);
        Self::new(d, self.factors.clone(), self.parity, fm, self.cutoff)
    }

    /// Verifies that the frame map is an injective Lie algebra homomorphism into `su(2)^F`.
    pub fn check_isomorphism(&self, alg: &SrcAlgebra) -> Result<(), SpectralError> {
        let n = alg.dim();
        if self.dim() != n || self.dim_h != alg.dim_h() {
            return Err(SpectralError::FrameMapShape {
                rows: self.dim(),
                cols: self.frame_map.ncols(),
                expected_rows: n,
                expected_cols: self.frame_map.ncols(),
            });
        }
        let rank = self.frame_map.rank(1e-10);
        if rank < n {
            return Err(SpectralError::NotInjective { rank, dim: n });
        }
        let fm = &self.frame_map;
        let scale = alg.constants().max_abs().max(1.0) * fm.amax().max(1.0);
        for i in 0..n {
            for j in i + 1..n {
                let mut defect = 0.0f64;
                for f in 0..self.factors.len() {
                    let u = fm.fixed_view::<1, 3>(i, 3 * f).transpose();
                    let v = fm.fixed_view::<1, 3>(j, 3 * f).transpose();
                    let cross = u.cross(&v);
                    for a in 0..3 {
                        let image: f64 = (0..n).map(|k| alg.c(i, j, k) * fm[(k, 3 * f + a)]).sum();
                        defect = defect.max((cross[a] - image).abs());
                    }
                }
                if defect > 1e-12 * scale {
                    return Err(SpectralError::NotIsomorphism {
                        i: i + 1,
                        j: j + 1,
                        defect,
                    });
                }
            }
        }
        Ok(())
    }

    /// All allowed labels with Casimir sum `≤ cutoff`, in lexicographic order.
    pub fn labels(&self) -> Vec<IrrepLabel> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.factors.len());
        self.enumerate(0, 0.0, &mut cur, &mut out);
        out
    }

    fn enumerate(&self, f: usize, cas: f64, cur: &mut Vec<u32>, out: &mut Vec<IrrepLabel>) {
        if f == self.factors.len() {
            let total: u32 = cur.iter().sum();
            if self.parity == Parity::IntegerSum && total % 2 == 1 {
                return;
            }
            out.push(IrrepLabel(cur.clone()));
            return;
        }
        let step = match self.factors[f].spins {
            SpinPolicy::HalfInteger => 1,
            SpinPolicy::Integer => 2,
        };
        let mut tj = 0u32;
        loop {
            let j = f64::from(tj) / 2.0;
            let c = cas + j * (j + 1.0);
            if c > self.cutoff + 1e-12 {
                break;
            }
            cur.push(tj);
            self.enumerate(f + 1, c, cur, out);
            cur.pop();
            tj += step;
        }
    }

    /// Lower bound for the spectrum of the sub-Laplacian on one irrep:
    /// `μ Σ j_f(j_f+1) − Σ_{k∈V} (Σ_f ν_kf j_f)²`, where `μ` is the smallest
    /// eigenvalue of `FᵀF` and `ν_kf` the norm of vertical row `k` on factor `f`.
    pub fn irrep_lower_bound(&self, label: &IrrepLabel) -> f64 {
        let js: Vec<f64> = label.0.iter().map(|&t| f64::from(t) / 2.0).collect();
        let vert: f64 = (0..self.nu.nrows())
            .map(|k| {
                let s: f64 = js.iter().enumerate().map(|(f, j)| self.nu[(k, f)] * j).sum();
                s * s
            })
            .sum();
        self.mu * label.casimir() - vert
    }

    /// Lower bound for every irrep with Casimir sum above the cutoff, if one can be proved.
    fn tail_bound(&self) -> Option<f64> {
        let nf = self.factors.len();
        let nnt = self.nu.transpose() * &self.nu;
        let p_mat = DMatrix::<f64>::identity(nf, nf) * self.mu - nnt;
        let p = p_mat.symmetric_eigenvalues().min();
        if p < -1e-12 {
            return None;
        }
        let p = p.max(0.0);
        let r = self.cutoff;
        let fl = nf as f64;
        // |j|² + Σj > R with Σj ≤ √F |j| forces |j| > r*.
        let r_star = (-(fl.sqrt()) + (fl + 4.0 * r).sqrt()) / 2.0;
        Some((p * r).max(p * r_star * r_star + self.mu * r_star))
    }

    pub fn check_label(&self, label: &IrrepLabel) -> Result<(), SpectralError> {
        if label.0.len() != self.factors.len() {
            return Err(SpectralError::FrameMapShape {
                rows: label.0.len(),
                cols: 0,
                expected_rows: self.factors.len(),
                expected_cols: 0,
            });
        }
        for (f, &tj) in self.factors.iter().zip(&label.0) {
            if f.spins == SpinPolicy::Integer && tj % 2 == 1 {
                return Err(SpectralError::SpinNotAllowed {
                    factor: f.label.clone(),
                    twice_j: tj,
                });
            }
        }
        Ok(())
    }
}

/// Generator matrices of `factor` in the spin `twice_j / 2` irrep.
pub fn irrep_matrices(factor: &Factor, twice_j: u32) -> Result<[DMatrix<C64>; 3], SpectralError> {
    if factor.spins == SpinPolicy::Integer && twice_j % 2 == 1 {
        return Err(SpectralError::SpinNotAllowed {
            factor: factor.label.clone(),
            twice_j,
        });
    }
    Ok(generators(twice_j))
}

/// `−Σ_{i∈H} X̂_i²` on the irrep `label`, with `X̂_i = Σ_f Σ_a F[i][f,a] dπ_f(g_a)`.
///
/// Each `X̂_i` touches one tensor slot at a time, so it is assembled as sparse rows
/// and squared row by row.
pub fn hlap_matrix(config: &OracleConfig, label: &IrrepLabel) -> Result<DMatrix<C64>, SpectralError> {
    config.check_label(label)?;
    let dims: Vec<usize> = label.0.iter().map(|&t| t as usize + 1).collect();
    let total = label.dim();
    let mut strides = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let gens: Vec<[DMatrix<C64>; 3]> = config
        .factors
        .iter()
        .zip(&label.0)
        .map(|(factor, &tj)| irrep_matrices(factor, tj))
        .collect::<Result<_, _>>()?;
    let mut out = DMatrix::<C64>::zeros(total, total);
    let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); total];
    for i in 0..config.dim_h {
        let local: Vec<DMatrix<C64>> = gens
            .iter()
            .enumerate()
            .map(|(f, g)| {
                (0..3).fold(DMatrix::zeros(dims[f], dims[f]), |acc, a| {
                    acc + &g[a] * C64::new(config.frame_map[(i, 3 * f + a)], 0.0)
                })
            })
            .collect();
        for (r, row) in rows.iter_mut().enumerate() {
            row.clear();
            for (f, m) in local.iter().enumerate() {
                let mf = (r / strides[f]) % dims[f];
                for c in 0..dims[f] {
                    let v = m[(mf, c)];
                    if v != C64::new(0.0, 0.0) {
                        row.push((r + c * strides[f] - mf * strides[f], v));
                    }
                }
            }
        }
        for r in 0..total {
            for &(c, v) in &rows[r] {
                for &(k, w) in &rows[c] {
                    out[(r, k)] -= v * w;
                }
            }
        }
    }
    Ok(out)
}

/// Whether every eigenvalue of the Hermitian `h` exceeds `shift`, decided by attempting a
/// Cholesky factorization of `h − shift·I`. Complex square roots never fail, so the real
/// pivots are checked directly.
fn exceeds(h: &DMatrix<C64>, shift: f64) -> bool {
    let n = h.nrows();
    let mut l = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re - shift;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        // NaN pivots also fail
        if d.is_nan() || d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[(j, j)] = C64::new(d, 0.0);
        for i in j + 1..n {
            let mut v = h[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / d;
        }
    }
    true
}

/// Sorted eigenvalues of the sub-Laplacian on one irrep.
pub fn irrep_spectrum(config: &OracleConfig, label: &IrrepLabel) -> Result<Vec<f64>, SpectralError> {
    let h = hlap_matrix(config, label)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

#[derive(Debug, Clone, PartialEq)]
pub enum TailBound {
    /// Every irrep beyond the cutoff has spectrum above this value, which exceeds `lambda1`.
    Rigorous(f64),
    /// No operator inequality closes the gap; `lambda1` is the minimum over enumerated irreps.
    Heuristic,
}

impl fmt::Display for TailBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailBound::Rigorous(v) => write!(f, "rigorous tail (> {v:.6})"),
            TailBound::Heuristic => write!(f, "heuristic tail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrrepSpectrum {
    pub label: IrrepLabel,
    pub lower_bound: f64,
    /// `None` when the irrep was skipped because its spectrum provably lies above `lambda1`;
    /// `lower_bound` then holds the proven bound.
    pub eigenvalues: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub lambda1: f64,
    pub witnesses: Vec<IrrepLabel>,
    pub cutoff: f64,
    pub table: Vec<IrrepSpectrum>,
    pub tail: TailBound,
}

impl SpectrumResult {
    pub fn is_exact(&self) -> bool {
        matches!(self.tail, TailBound::Rigorous(_))
    }
}

const ZERO_EIG: f64 = 1e-9;
const TIE: f64 = 1e-9;

/// Smallest positive eigenvalue over all irreps with Casimir sum `≤ cutoff`.
///
/// Irreps are visited in order of increasing [`OracleConfig::irrep_lower_bound`];
/// an irrep whose bound exceeds the running minimum, or whose shifted matrix
/// admits a Cholesky factorization, cannot contribute and is recorded without
/// diagonalization.
pub fn lambda1(config: &OracleConfig) -> Result<SpectrumResult, SpectralError> {
    let mut labels: Vec<(f64, IrrepLabel)> = config
        .labels()
        .into_iter()
        .map(|l| (config.irrep_lower_bound(&l), l))
        .collect();
    labels.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut best = f64::INFINITY;
    let mut table = Vec::with_capacity(labels.len());
    for (lb, label) in labels {
        if label.is_trivial() {
            table.push(IrrepSpectrum {
                label,
                lower_bound: lb,
                eigenvalues: Some(vec![0.0]),
            });
            continue;
        }
        if lb > best + TIE {
            table.push(IrrepSpectrum {
                label,
                lower_bound: lb,
                eigenvalues: None,
            });
            continue;
        }
        let h = hlap_matrix(config, &label)?;
        if best.is_finite() && exceeds(&h, best + TIE) {
            table.push(IrrepSpectrum {
                label,
                lower_bound: lb.max(best + TIE),
                eigenvalues: None,
            });
            continue;
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let scale = ev.last().copied().unwrap_or(1.0).abs().max(1.0);
        if ev[0] <= ZERO_EIG * scale {
            return Err(SpectralError::ZeroInNontrivial(label));
        }
        best = best.min(ev[0]);
        table.push(IrrepSpectrum {
            label,
            lower_bound: lb,
            eigenvalues: Some(ev),
        });
    }
    if !best.is_finite() {
        return Err(SpectralError::NoSpectrum(config.cutoff));
    }
    table.sort_by(|a, b| a.label.cmp(&b.label));
    let witnesses = table
        .iter()
        .filter(|e| {
            e.eigenvalues
                .as_ref()
                .is_some_and(|ev| !e.label.is_trivial() && ev[0] <= best + TIE)
        })
        .map(|e| e.label.clone())
        .collect();
    let tail = match config.tail_bound() {
        Some(t) if t > best => TailBound::Rigorous(t),
        _ => TailBound::Heuristic,
    };
    Ok(SpectrumResult {
        lambda1: best,
        witnesses,
        cutoff: config.cutoff,
        table,
        tail,
    })
}
