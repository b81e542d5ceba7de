#![allow(dead_code)]

pub mod invariants;

use nalgebra::{DMatrix, DVector};
use subriem_core::{builtin, Instance, SrcAlgebra, Tensor3};

/// `M_ij = E_ij - E_ji` in `so(n)`, 1-based.
pub fn m(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    a[(i - 1, j - 1)] = 1.0;
    a[(j - 1, i - 1)] = -1.0;
    a
}

/// Structure constants of the frame `frame` (a basis of a matrix Lie algebra),
/// obtained by expanding each commutator in the frame.
pub fn from_matrices(name: &str, dim_h: usize, frame: &[DMatrix<f64>]) -> SrcAlgebra {
    let n = frame.len();
    let rows = frame[0].len();
    let basis = DMatrix::from_fn(rows, n, |r, k| frame[k].as_slice()[r]);
    let svd = basis.clone().svd(true, true);
    let mut c = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let comm = &frame[i] * &frame[j] - &frame[j] * &frame[i];
            let rhs = DVector::from_column_slice(comm.as_slice());
            let coef = svd.solve(&rhs, 1e-14).expect("svd solve");
            let resid = (&basis * &coef - &rhs).norm();
            assert!(resid < 1e-9, "frame does not close under brackets ({resid})");
            for k in 0..n {
                c[(i, j, k)] = coef[k];
            }
        }
    }
    SrcAlgebra::from_tensor(name, dim_h, n - dim_h, c).unwrap()
}

pub fn builtin_at(name: &str, bindings: &[(&str, f64)]) -> Instance {
    let bind: Vec<(String, f64)> = bindings.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    builtin(name).unwrap().instantiate(&bind).unwrap()
}

/// Matrix bases of small Lie algebras used to draw random frames.
pub fn base_algebra(which: usize) -> (Vec<DMatrix<f64>>, &'static [usize]) {
    match which % 4 {
        0 => (vec![m(3, 1, 2), m(3, 1, 3), m(3, 2, 3)], &[2]),
        1 => (
            vec![m(4, 1, 2), m(4, 1, 3), m(4, 1, 4), m(4, 2, 3), m(4, 2, 4), m(4, 3, 4)],
            &[3, 4, 5],
        ),
        2 => {
            // Heisenberg algebra as strictly upper triangular 3x3 matrices.
            let e = |i: usize, j: usize| {
                let mut a = DMatrix::zeros(3, 3);
                a[(i, j)] = 1.0;
                a
            };
            (vec![e(0, 1), e(1, 2), e(0, 2)], &[2])
        }
        _ => {
            // so(3) + so(3) block diagonally in 6x6 matrices.
            let blk = |a: DMatrix<f64>, first: bool| {
                let mut z = DMatrix::zeros(6, 6);
                let off = if first { 0 } else { 3 };
                z.view_mut((off, off), (3, 3)).copy_from(&a);
                z
            };
            let mut v = Vec::new();
            for first in [true, false] {
                for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                    v.push(blk(m(3, i, j), first));
                }
            }
            (v, &[4, 5])
        }
    }
}

/// A random frame of a base algebra; `None` if the draw is ill-conditioned or
/// fails to bracket generate.
pub fn random_algebra(which: usize, dsel: usize, coeffs: &[f64]) -> Option<SrcAlgebra> {
    let (basis, dims) = base_algebra(which);
    let n = basis.len();
    let d = dims[dsel % dims.len()];
    let mix = DMatrix::from_fn(n, n, |i, j| coeffs[(i * n + j) % coeffs.len()]);
    let sv = mix.singular_values();
    if sv.min() < 0.2 {
        return None;
    }
    let frame: Vec<DMatrix<f64>> = (0..n)
        .map(|i| {
            let mut a = DMatrix::zeros(basis[0].nrows(), basis[0].ncols());
            for j in 0..n {
                a += &basis[j] * mix[(i, j)];
            }
            a
        })
        .collect();
    let alg = from_matrices("random", d, &frame);
    alg.is_valid().then_some(alg)
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}
