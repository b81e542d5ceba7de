//! The non-quadratic term `2|τ_V^H(X)||τ_H^V(X)|` of the almost-strictly-normal bound.

use nalgebra::{DMatrix, DVector};

use super::theorems::golden_max;
use crate::analysis::min_eig;

/// `P(u) = 2 √(uᵀAu) √(uᵀBu)` on the horizontal block.
#[derive(Debug, Clone, PartialEq)]
pub enum ProductTerm {
    Zero,
    /// `A = αB`, so `P(u) = uᵀ G u` with `G = 2√α B`.
    Quadratic(DMatrix<f64>),
    General { a: DMatrix<f64>, b: DMatrix<f64> },
}

impl ProductTerm {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Self {
        let tol = 1e-12 * a.amax().max(b.amax()).max(1.0);
        if a.amax() <= tol || b.amax() <= tol {
            return ProductTerm::Zero;
        }
        let alpha = a.dot(&b) / b.dot(&b);
        if alpha > 0.0 && (&a - &b * alpha).amax() <= tol {
            return ProductTerm::Quadratic(b * (2.0 * alpha.sqrt()));
        }
        ProductTerm::General { a, b }
    }

    pub fn is_quadratic(&self) -> bool {
        !matches!(self, ProductTerm::General { .. })
    }

    pub fn eval(&self, u: &DVector<f64>) -> f64 {
        match self {
            ProductTerm::Zero => 0.0,
            ProductTerm::Quadratic(g) => u.dot(&(g * u)),
            ProductTerm::General { a, b } => {
                let ua = u.dot(&(a * u)).max(0.0);
                let ub = u.dot(&(b * u)).max(0.0);
                2.0 * (ua * ub).sqrt()
            }
        }
    }

    /// A lower bound for `min_{|u|=1} uᵀSu − P(u)`, exact unless the term is general.
    /// In the general case `2√(ab) = min_t (ta + b/t)` gives
    /// `max_t λ_min(S − tA − B/t)`, a concave maximization in `t`.
    pub fn rho1_lower(&self, s: &DMatrix<f64>) -> f64 {
        match self {
            ProductTerm::Zero => min_eig(s),
            ProductTerm::Quadratic(g) => min_eig(&(s - g)),
            ProductTerm::General { a, b } => {
                let t0 = (b.amax() / a.amax()).sqrt().ln();
                let f = |lt: f64| {
                    let t = lt.exp();
                    min_eig(&(s - a * t - b / t))
                };
                golden_max(f, t0 - 25.0, t0 + 25.0, 1e-13).1
            }
        }
    }

    /// `uᵀSu − P(u)` minimized over the unit sphere by deterministic sampling
    /// followed by projected-gradient descent from the best samples.
    pub fn sphere_minimum(&self, s: &DMatrix<f64>, samples: usize) -> (f64, DVector<f64>) {
        let d = s.nrows();
        let f = |u: &DVector<f64>| u.dot(&(s * u)) - self.eval(u);
        let mut scored: Vec<(f64, DVector<f64>)> = sphere_points(d, samples)
            .into_iter()
            .map(|u| (f(&u), u))
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        scored.truncate(8);
        let mut best = scored[0].clone();
        for (_, start) in scored {
            let (v, u) = self.polish(s, start);
            if v < best.0 {
                best = (v, u);
            }
        }
        best
    }

    fn grad(&self, s: &DMatrix<f64>, u: &DVector<f64>) -> DVector<f64> {
        let mut g = s * u * 2.0;
        match self {
            ProductTerm::Zero => {}
            ProductTerm::Quadratic(q) => g -= q * u * 2.0,
            ProductTerm::General { a, b } => {
                let au = a * u;
                let bu = b * u;
                let ua = u.dot(&au);
                let ub = u.dot(&bu);
                let prod = ua * ub;
                if prod > 1e-300 {
                    g -= (au * (2.0 * ub) + bu * (2.0 * ua)) / prod.sqrt();
                }
            }
        }
        g
    }

    fn polish(&self, s: &DMatrix<f64>, start: DVector<f64>) -> (f64, DVector<f64>) {
        let f = |u: &DVector<f64>| u.dot(&(s * u)) - self.eval(u);
        let mut u = start;
        let mut fu = f(&u);
        let mut step = 0.1 / s.amax().max(1.0);
        for _ in 0..2000 {
            let g = self.grad(s, &u);
            let rg = &g - &u * g.dot(&u);
            let gn = rg.norm();
            if gn < 1e-15 {
                break;
            }
            let mut improved = false;
            while step > 1e-18 {
                let cand = (&u - &rg * step).normalize();
                let fc = f(&cand);
                if fc < fu - 1e-4 * step * gn * gn {
                    u = cand;
                    fu = fc;
                    step *= 2.0;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        (fu, u)
    }
}

/// Deterministic, roughly uniform points on `S^{d−1}` (antipodal pairs identified where cheap).
pub fn sphere_points(d: usize, count: usize) -> Vec<DVector<f64>> {
    let count = count.max(1);
    match d {
        0 => Vec::new(),
        1 => vec![DVector::from_element(1, 1.0)],
        2 => (0..count)
            .map(|k| {
                let th = std::f64::consts::PI * k as f64 / count as f64;
                DVector::from_column_slice(&[th.cos(), th.sin()])
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * k as f64;
                    DVector::from_column_slice(&[r * phi.cos(), r * phi.sin(), z])
                })
                .collect()
        }
        _ => {
            const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
            let mut out = Vec::with_capacity(count);
            let mut k = 1u64;
            while out.len() < count {
                let v = DVector::from_fn(d, |i, _| 2.0 * radical_inverse(k, PRIMES[i % PRIMES.len()]) - 1.0);
                k += 1;
                let n = v.norm();
                if n > 1e-3 && n <= 1.0 {
                    out.push(v / n);
                }
            }
            out
        }
    }
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let b = DMatrix::<f64>::identity(2, 2);
        assert_eq!(ProductTerm::new(DMatrix::zeros(2, 2), b.clone()), ProductTerm::Zero);
        match ProductTerm::new(&b * 4.0, b.clone()) {
            ProductTerm::Quadratic(g) => assert!((g[(0, 0)] - 4.0).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        let a = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 0.0]));
        assert!(!ProductTerm::new(a, b).is_quadratic());
    }

    #[test]
    fn minimax_bound_is_tight_on_diagonal_example() {
        // S = 3I, A = diag(1, 0), B = diag(0, 1): P(u) = 2|u1||u2|, min = 3 − 1 = 2.
        let s = DMatrix::<f64>::identity(2, 2) * 3.0;
        let a = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 0.0]));
        let b = DMatrix::from_diagonal(&DVector::from_column_slice(&[0.0, 1.0]));
        let p = ProductTerm::new(a, b);
        let lower = p.rho1_lower(&s);
        let (upper, _) = p.sphere_minimum(&s, 2000);
        assert!(lower <= upper + 1e-12);
        assert!((upper - 2.0).abs() < 1e-10, "{upper}");
        assert!((upper - lower).abs() < 1e-8, "{lower} {upper}");
    }

    #[test]
    fn sphere_points_are_unit() {
        for d in 1..=6 {
            let pts = sphere_points(d, 500);
            assert!(!pts.is_empty());
            assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
        }
    }
}
