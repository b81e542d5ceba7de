//! Angular momentum matrices.

use nalgebra::DMatrix;
use nalgebra::Complex;

pub type C64 = Complex<f64>;

/// Hermitian `J_x, J_y, J_z` for spin `j = twice_j / 2` in the basis `m = j, j-1, ..., -j`.
pub fn spin_matrices(twice_j: u32) -> [DMatrix<C64>; 3] {
    let dim = twice_j as usize + 1;
    let j = f64::from(twice_j) / 2.0;
    let mut jx = DMatrix::<C64>::zeros(dim, dim);
    let mut jy = DMatrix::<C64>::zeros(dim, dim);
    let mut jz = DMatrix::<C64>::zeros(dim, dim);
    for r in 0..dim {
        let m = j - r as f64;
        jz[(r, r)] = C64::new(m, 0.0);
        if r + 1 < dim {
            // <m | J_+ | m-1>
            let mm = m - 1.0;
            let a = (j * (j + 1.0) - mm * (mm + 1.0)).sqrt();
            jx[(r, r + 1)] = C64::new(a / 2.0, 0.0);
            jx[(r + 1, r)] = C64::new(a / 2.0, 0.0);
            jy[(r, r + 1)] = C64::new(0.0, -a / 2.0);
            jy[(r + 1, r)] = C64::new(0.0, a / 2.0);
        }
    }
    [jx, jy, jz]
}

/// Anti-Hermitian generators `g_a = -i J_a`, so that `[g_1, g_2] = g_3` cyclically.
pub fn generators(twice_j: u32) -> [DMatrix<C64>; 3] {
    let minus_i = C64::new(0.0, -1.0);
    spin_matrices(twice_j).map(|m| m * minus_i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comm(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
        a * b - b * a
    }

    #[test]
    fn brackets_and_casimir() {
        for tj in 0..7 {
            let g = generators(tj);
            for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                let d = comm(&g[a], &g[b]) - &g[c];
                assert!(d.iter().all(|z| z.norm() < 1e-12), "twice_j = {tj}");
            }
            let j = f64::from(tj) / 2.0;
            let cas = -(&g[0] * &g[0] + &g[1] * &g[1] + &g[2] * &g[2]);
            for r in 0..cas.nrows() {
                for s in 0..cas.ncols() {
                    let want = if r == s { j * (j + 1.0) } else { 0.0 };
                    assert!((cas[(r, s)] - C64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spin_zero_is_trivial() {
        for m in generators(0) {
            assert_eq!(m.shape(), (1, 1));
            assert_eq!(m[(0, 0)], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let [jx, jy, jz] = spin_matrices(1);
        assert_eq!(jx[(0, 1)], C64::new(0.5, 0.0));
        assert_eq!(jy[(0, 1)], C64::new(0.0, -0.5));
        assert_eq!(jz[(1, 1)], C64::new(-0.5, 0.0));
    }
}
