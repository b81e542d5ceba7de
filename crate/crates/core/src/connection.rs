//! The canonical connection and its torsion objects.
//!
//! `gamma[(i, j, k)] = <∇_{e_i} e_j, e_k>`, `tor[(i, j, k)] = <Tor(e_i, e_j), e_k>`.
//! The covariant derivative of torsion uses the slot convention
//! `∇Tor(A, B, C) = (∇_B Tor)(A, C)`.

use std::fmt;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::algebra::{SrcAlgebra, ZERO_TOL};
use crate::tensor::{Tensor3, Tensor4};

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    dim_h: usize,
    gamma: Tensor3,
}

/// A defining condition of the canonical connection that fails (0-based indices).
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    /// `Γ[i][j][k] + Γ[i][k][j] != 0`.
    Metric { i: usize, j: usize, k: usize, defect: f64 },
    /// `∇_{e_i} e_j` has a component `e_k` in the other distribution.
    Splitting { i: usize, j: usize, k: usize, value: f64 },
    /// `Tor(e_i, e_j)` with both horizontal has horizontal component `e_k`.
    TorsionHH { i: usize, j: usize, k: usize, value: f64 },
    /// `Tor(e_i, e_j)` with both vertical has vertical component `e_k`.
    TorsionVV { i: usize, j: usize, k: usize, value: f64 },
    /// `<Tor(X,T),Y> != <X,Tor(Y,T)>`.
    MixedHorizontal { x: usize, t: usize, y: usize, defect: f64 },
    /// `<Tor(X,T),U> != <T,Tor(X,U)>`.
    MixedVertical { x: usize, t: usize, u: usize, defect: f64 },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Metric { i, j, k, defect } => write!(
                f,
                "metric compatibility fails at ({}, {}, {}): defect {defect:e}",
                i + 1,
                j + 1,
                k + 1
            ),
            Self::Splitting { i, j, k, value } => write!(
                f,
                "splitting not preserved: <∇_e{} e{}, e{}> = {value:e}",
                i + 1,
                j + 1,
                k + 1
            ),
            Self::TorsionHH { i, j, k, value } => write!(
                f,
                "Tor(e{}, e{}) has horizontal component e{} = {value:e}",
                i + 1,
                j + 1,
                k + 1
            ),
            Self::TorsionVV { i, j, k, value } => write!(
                f,
                "Tor(e{}, e{}) has vertical component e{} = {value:e}",
                i + 1,
                j + 1,
                k + 1
            ),
            Self::MixedHorizontal { x, t, y, defect } => write!(
                f,
                "<Tor(X,T),Y> not symmetric for X = e{}, T = e{}, Y = e{}: defect {defect:e}",
                x + 1,
                t + 1,
                y + 1
            ),
            Self::MixedVertical { x, t, u, defect } => write!(
                f,
                "<Tor(X,T),U> not symmetric for X = e{}, T = e{}, U = e{}: defect {defect:e}",
                x + 1,
                t + 1,
                u + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConnectionError {
    #[error("canonical connection failed verification: {0}")]
    Verification(AxiomViolation),
    #[error("connection has dimension {found}, algebra has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Connection {
    /// Wraps arbitrary coefficients, e.g. to probe the defining conditions.
    pub fn from_gamma(dim_h: usize, gamma: Tensor3) -> Self {
        Self { dim_h, gamma }
    }

    pub fn gamma(&self) -> &Tensor3 {
        &self.gamma
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `∇_{e_i} v` for a coefficient vector `v`.
    pub fn covariant(&self, i: usize, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += vj * self.gamma[(i, j, k)];
            }
        }
        out
    }
}

/// The unique metric connection preserving `H ⊕ V` whose torsion satisfies
/// `Tor(H,H) ⊆ V`, `Tor(V,V) ⊆ H` and the two mixed symmetry conditions.
///
/// Built from Koszul-type closed forms and then verified.
pub fn canonical_connection(alg: &SrcAlgebra) -> Result<Connection, ConnectionError> {
    let n = alg.dim();
    let d = alg.dim_h();
    let h = |i: usize| i < d;
    // components of brackets restricted to one distribution
    let ch = |i: usize, j: usize, k: usize| if h(k) { alg.c(i, j, k) } else { 0.0 };
    let cv = |i: usize, j: usize, k: usize| if h(k) { 0.0 } else { alg.c(i, j, k) };
    let gamma = Tensor3::from_fn(n, |i, j, k| {
        if h(j) != h(k) {
            return 0.0;
        }
        match (h(i), h(j)) {
            (true, true) => 0.5 * (ch(i, j, k) - ch(j, k, i) + ch(k, i, j)),
            (false, false) => 0.5 * (cv(i, j, k) - cv(j, k, i) + cv(k, i, j)),
            (false, true) => 0.5 * (ch(k, i, j) - ch(j, i, k)),
            (true, false) => 0.5 * (cv(k, i, j) - cv(j, i, k)),
        }
    });
    let conn = Connection { dim_h: d, gamma };
    match check_axioms(alg, &conn)?.into_iter().next() {
        Some(v) => Err(ConnectionError::Verification(v)),
        None => Ok(conn),
    }
}

/// Lists every defining condition of the canonical connection that `conn` violates.
pub fn check_axioms(alg: &SrcAlgebra, conn: &Connection) -> Result<Vec<AxiomViolation>, ConnectionError> {
    let n = alg.dim();
    if conn.dim() != n {
        return Err(ConnectionError::DimensionMismatch {
            expected: n,
            found: conn.dim(),
        });
    }
    let d = alg.dim_h();
    let tol = ZERO_TOL * alg.constants().max_abs().max(1.0);
    let g = &conn.gamma;
    let t = torsion(alg, conn);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let defect = g[(i, j, k)] + g[(i, k, j)];
                if defect.abs() > tol {
                    out.push(AxiomViolation::Metric { i, j, k, defect });
                }
            }
            for k in 0..n {
                if (j < d) != (k < d) && g[(i, j, k)].abs() > tol {
                    out.push(AxiomViolation::Splitting { i, j, k, value: g[(i, j, k)] });
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v = t[(i, j, k)];
                if v.abs() <= tol {
                    continue;
                }
                if i < d && j < d && k < d {
                    out.push(AxiomViolation::TorsionHH { i, j, k, value: v });
                } else if i >= d && j >= d && k >= d {
                    out.push(AxiomViolation::TorsionVV { i, j, k, value: v });
                }
            }
        }
    }
    for x in 0..d {
        for tv in d..n {
            for y in x..d {
                let defect = t[(x, tv, y)] - t[(y, tv, x)];
                if defect.abs() > tol {
                    out.push(AxiomViolation::MixedHorizontal { x, t: tv, y, defect });
                }
            }
            for u in tv..n {
                let defect = t[(x, tv, u)] - t[(x, u, tv)];
                if defect.abs() > tol {
                    out.push(AxiomViolation::MixedVertical { x, t: tv, u, defect });
                }
            }
        }
    }
    Ok(out)
}

/// `Tor(e_i, e_j) = ∇_{e_i} e_j − ∇_{e_j} e_i − [e_i, e_j]`.
pub fn torsion(alg: &SrcAlgebra, conn: &Connection) -> Tensor3 {
    let g = &conn.gamma;
    Tensor3::from_fn(alg.dim(), |i, j, k| g[(i, j, k)] - g[(j, i, k)] - alg.c(i, j, k))
}

/// Components `<(∇_{e_b} Tor)(e_a, e_c), e_l>` stored at `[(a, b, c, l)]`.
pub fn nabla_torsion(conn: &Connection, tor: &Tensor3) -> Tensor4 {
    let n = tor.dim();
    let g = &conn.gamma;
    let mut out = Tensor4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += tor[(a, c, k)] * g[(b, k, l)];
                        s -= g[(b, a, k)] * tor[(k, c, l)];
                        s -= g[(b, c, k)] * tor[(a, k, l)];
                    }
                    out[(a, b, c, l)] = s;
                }
            }
        }
    }
    out
}

/// Components of `TOR₂(e_a, e_b, e_c) = Tor(e_a, Tor(e_b, e_c))` stored at `[(a, b, c, k)]`.
pub fn tor2(tor: &Tensor3) -> Tensor4 {
    let n = tor.dim();
    Tensor4::from_fn(n, |a, b, c, k| (0..n).map(|l| tor[(b, c, l)] * tor[(a, l, k)]).sum())
}

/// Torsion together with its covariant derivative, `TOR₂`, and their horizontal traces.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionPack {
    dim_h: usize,
    tor: Tensor3,
    nabla_tor: Tensor4,
    tor2: Tensor4,
    tr_tor2: DMatrix<f64>,
    tr_nabla_tor: DMatrix<f64>,
    tr_v_nabla_tor: DMatrix<f64>,
}

impl TorsionPack {
    pub fn new(alg: &SrcAlgebra, conn: &Connection) -> Self {
        let n = alg.dim();
        let d = alg.dim_h();
        let tor = torsion(alg, conn);
        let nabla_tor = nabla_torsion(conn, &tor);
        let tor2 = tor2(&tor);
        let tr_tor2 = DMatrix::from_fn(n, n, |a, k| (0..d).map(|i| tor2[(i, i, a, k)]).sum());
        let tr_nabla_tor = DMatrix::from_fn(n, n, |a, k| (0..d).map(|i| nabla_tor[(a, i, i, k)]).sum());
        let tr_v_nabla_tor = DMatrix::from_fn(n, n, |a, k| (d..n).map(|i| nabla_tor[(a, i, i, k)]).sum());
        Self {
            dim_h: d,
            tor,
            nabla_tor,
            tor2,
            tr_tor2,
            tr_nabla_tor,
            tr_v_nabla_tor,
        }
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim(&self) -> usize {
        self.tor.dim()
    }

    pub fn tor(&self) -> &Tensor3 {
        &self.tor
    }

    pub fn nabla_tor(&self) -> &Tensor4 {
        &self.nabla_tor
    }

    pub fn tor2(&self) -> &Tensor4 {
        &self.tor2
    }

    /// Row `a` holds `tr TOR₂(e_a) = Σ_{i ∈ H} TOR₂(E_i, E_i, e_a)`.
    pub fn tr_tor2(&self) -> &DMatrix<f64> {
        &self.tr_tor2
    }

    /// Row `a` holds `tr ∇Tor(e_a) = Σ_{i ∈ H} ∇Tor(e_a, E_i, E_i)`.
    pub fn tr_nabla_tor(&self) -> &DMatrix<f64> {
        &self.tr_nabla_tor
    }

    /// Row `a` holds `tr_V ∇Tor(e_a) = Σ_{k ∈ V} ∇Tor(e_a, U_k, U_k)`.
    pub fn tr_v_nabla_tor(&self) -> &DMatrix<f64> {
        &self.tr_v_nabla_tor
    }

    /// `Tor(u, v)` for coefficient vectors.
    pub fn apply(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (i, &ui) in u.iter().enumerate().take(n) {
            for (j, &vj) in v.iter().enumerate().take(n) {
                let w = ui * vj;
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.tor[(i, j, k)];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2(dim_h: usize) -> SrcAlgebra {
        let mut c = Tensor3::zeros(3);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[(i, j, k)] = 1.0;
            c[(j, i, k)] = -1.0;
        }
        SrcAlgebra::from_tensor("su2", dim_h, 3 - dim_h, c).unwrap()
    }

    #[test]
    fn abelian_connection_vanishes() {
        let alg = SrcAlgebra::abelian(2, 2).unwrap();
        let conn = canonical_connection(&alg).unwrap();
        assert_eq!(conn.gamma().max_abs(), 0.0);
        let pack = TorsionPack::new(&alg, &conn);
        assert_eq!(pack.tor().max_abs(), 0.0);
        assert_eq!(pack.nabla_tor().max_abs(), 0.0);
        assert_eq!(pack.tor2().max_abs(), 0.0);
    }

    #[test]
    fn su2_torsion() {
        // H = span(e1, e2), V = span(e3); [e1,e2] = e3 so Tor(e1,e2) = -e3.
        let alg = su2(2);
        let conn = canonical_connection(&alg).unwrap();
        let pack = TorsionPack::new(&alg, &conn);
        assert!((pack.tor()[(0, 1, 2)] + 1.0).abs() < 1e-15);
        // ∇ on H×H vanishes because [H,H] ⊆ V.
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(conn.gamma()[(i, j, k)], 0.0);
                }
            }
        }
        // ∇_T rotates H by the skew part of ad_T.
        assert!((conn.gamma()[(2, 0, 1)] - 1.0).abs() < 1e-15);
        assert!(pack.apply(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn single_entry_perturbations_are_detected() {
        let alg = su2(2);
        let conn = canonical_connection(&alg).unwrap();
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for eps in [1e-3, -1e-3] {
                        let mut g = conn.gamma().clone();
                        g[(i, j, k)] += eps;
                        let probe = Connection::from_gamma(2, g);
                        assert!(!check_axioms(&alg, &probe).unwrap().is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn violation_messages_are_one_based() {
        let v = AxiomViolation::TorsionHH { i: 0, j: 1, k: 0, value: 1.0 };
        assert!(v.to_string().starts_with("Tor(e1, e2) has horizontal component e1"));
    }
}
