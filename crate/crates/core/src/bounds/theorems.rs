//! Closed-form eigenvalue bounds in terms of the curvature constants.

use super::BoundsError;

/// `Δ = (1−x)(d−1)/d`.
pub fn delta(x: f64, dim_h: usize) -> f64 {
    let d = dim_h as f64;
    (1.0 - x) * (d - 1.0) / d
}

/// `(ρ₁ − m)/(Δ + ω)` when `ρ₁ > m`.
pub fn main_value(rho1: f64, m: f64, delta: f64, omega: f64) -> Option<f64> {
    let den = delta + omega;
    (rho1 > m && den > 0.0).then(|| (rho1 - m) / den)
}

/// Value and optimal `t` of the bound for `T₁ ≡ 0`:
/// `sup_{0<t≤t_max} (ρ₁ + √(D − 4Δχt)) / (2(Δ + ω/t))` with `D = ρ₁² − 4ωχ`
/// and `t_max = min(1, D/(4Δχ))`. Requires `ρ₁ > 0` and `D > 0`.
///
/// At `t = 1` this is `(ρ₁ + √(ρ₁² − 4Δχ − 4ωχ))/(2(Δ+ω))`; at `t = t_max < 1` it is
/// `ρ₁/(Δ(2 + 8ωχ/D))`. The root function is unimodal in `t`, so the supremum is
/// located by golden-section search.
pub fn t1zero_value(rho1: f64, omega: f64, chi: f64, delta: f64) -> Option<(f64, f64)> {
    if rho1 <= 0.0 {
        return None;
    }
    let disc = rho1 * rho1 - 4.0 * omega * chi;
    if disc <= 0.0 {
        return None;
    }
    let a = 4.0 * delta * chi;
    let t_max = if a > 0.0 { (disc / a).min(1.0) } else { 1.0 };
    let r = |t: f64| {
        let inner = (disc - a * t).max(0.0);
        (rho1 + inner.sqrt()) / (2.0 * (delta + omega / t))
    };
    if omega == 0.0 {
        // without the ω/t term r decreases in t; the supremum is the limit t → 0
        return (delta > 0.0).then(|| (rho1 / delta, 0.0));
    }
    let (t, v) = golden_max(r, 0.0, t_max, 1e-15);
    let end = r(t_max);
    Some(if end >= v { (end, t_max) } else { (v, t) })
}

/// `ρ₁/(Δ + ω)` when `ρ₁ > 0`.
pub fn asn_value(rho1: f64, delta: f64, omega: f64) -> Option<f64> {
    main_value(rho1, 0.0, delta, omega)
}

/// Which dimension ratio multiplies `(1−x)` in the Hessian term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DimensionRatio {
    /// `(d−1)/d`.
    #[default]
    Standard,
    /// `d/(d−1)`.
    Inverted,
}

impl DimensionRatio {
    pub fn value(self, dim_h: usize) -> f64 {
        let d = dim_h as f64;
        match self {
            DimensionRatio::Standard => (d - 1.0) / d,
            DimensionRatio::Inverted => d / (d - 1.0),
        }
    }
}

/// `ρ₁/(r + 3ω/4)` with `r` the dimension ratio.
pub fn sntf_value(rho1: f64, omega: f64, ratio: f64) -> Option<f64> {
    main_value(rho1, 0.0, ratio, 0.75 * omega)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudohermitianBound {
    pub bound: f64,
    pub x: f64,
}

/// Bound for a pseudohermitian manifold of CR dimension `n` with pseudohermitian Ricci `≥ ρ`
/// and torsion constant `C`:
/// `max_x 2nρ(−3x² + (2−3C)x + 1 − C)/(−3(2n−1)x² + 2(2n−1)x + 2n + 3)`.
pub fn bound_pseudohermitian(n: u32, rho: f64, c: f64) -> Result<PseudohermitianBound, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Pseudohermitian("n must be at least 1"));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(BoundsError::Pseudohermitian("rho must be positive"));
    }
    if !(c.is_finite() && (0.0..1.0).contains(&c)) {
        return Err(BoundsError::Pseudohermitian("C must lie in [0, 1)"));
    }
    let nf = f64::from(n);
    let k = 2.0 * nf - 1.0;
    let f = |x: f64| {
        2.0 * nf * rho * (-3.0 * x * x + (2.0 - 3.0 * c) * x + 1.0 - c) / (-3.0 * k * x * x + 2.0 * k * x + 2.0 * nf + 3.0)
    };
    // stationarity: 9Ck x² + (24 + 6kC) x − 8 + (2n+11) C = 0
    let a = 9.0 * c * k;
    let b = 24.0 + 6.0 * k * c;
    let c0 = -8.0 + (2.0 * nf + 11.0) * c;
    let x = if c0 >= 0.0 {
        0.0
    } else if a == 0.0 {
        -c0 / b
    } else {
        // positive root, written to avoid cancellation
        2.0 * (-c0) / (b + (b * b - 4.0 * a * c0).sqrt())
    };
    let x = x.clamp(0.0, 1.0 - f64::EPSILON);
    let (bound, x) = if f(0.0) > f(x) { (f(0.0), 0.0) } else { (f(x), x) };
    Ok(PseudohermitianBound { bound, x })
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Relative depth of the level set used by [`level_set_centre`].
pub(crate) const LEVEL_DEPTH: f64 = 1e-12;

/// Centre of `{u ∈ [lo, hi] : f(u) ≥ fmax − δ}` around the maximizer `arg`, with
/// `δ = LEVEL_DEPTH·|fmax|`.
///
/// Comparing nearly equal values only locates a smooth maximum to about the square
/// root of the rounding error; the level-set centre is found by bisection on steep
/// flanks and is reproducible to far higher precision, at a value cost of at most `δ`.
pub(crate) fn level_set_centre(f: impl Fn(f64) -> f64, arg: f64, fmax: f64, lo: f64, hi: f64) -> f64 {
    let level = fmax - LEVEL_DEPTH * fmax.abs().max(f64::MIN_POSITIVE);
    let edge = |inside: f64, outside: f64| {
        if f(outside) >= level {
            return outside;
        }
        let (mut a, mut b) = (inside, outside);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            if f(m) >= level {
                a = m;
            } else {
                b = m;
            }
        }
        a
    };
    0.5 * (edge(arg, lo) + edge(arg, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_set_centre_is_symmetric_and_respects_bounds() {
        let f = |u: f64| 1.0 - (u - 0.3).powi(2);
        let c = level_set_centre(f, 0.3 + 1e-9, 1.0, 0.0, 1.0);
        assert!((c - 0.3).abs() < 1e-12);
        // maximum on the boundary: the centre stays within the level set
        let g = |u: f64| u;
        let c = level_set_centre(g, 1.0, 1.0, 0.0, 1.0);
        assert!(c <= 1.0 && g(c) >= 1.0 - 1e-12);
        // plateau: centre of the flat top
        let h = |u: f64| if (0.2..=0.6).contains(&u) { 1.0 } else { 0.0 };
        assert!((level_set_centre(h, 0.25, 1.0, 0.0, 1.0) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn t1zero_without_chi_matches_main() {
        let (v, t) = t1zero_value(2.0, 0.5, 0.0, 0.4).unwrap();
        assert!((v - 2.0 / 0.9).abs() < 1e-12);
        assert_eq!(t, 1.0);
    }

    #[test]
    fn t1zero_synthetic_case_two() {
        // ρ₁ = 4, ω = χ = 1, Δ = 1/2: D = 12 ≥ 4χΔ = 2.
        let (v, _) = t1zero_value(4.0, 1.0, 1.0, 0.5).unwrap();
        let closed = (4.0 + 10f64.sqrt()) / 3.0;
        assert!((v - closed).abs() < 1e-12);
        assert!(v > (4.0 - 2.0) / 1.5);
    }

    #[test]
    fn t1zero_endpoint_when_truncated() {
        // D < 4χΔ so t_max < 1; the value is at least the endpoint formula.
        let (rho1, omega, chi, delta) = (1.0, 0.1, 1.0, 0.8);
        let disc = rho1 * rho1 - 4.0 * omega * chi;
        assert!(disc < 4.0 * chi * delta);
        let (v, t) = t1zero_value(rho1, omega, chi, delta).unwrap();
        let end = rho1 / (delta * (2.0 + 8.0 * omega * chi / disc));
        assert!(v >= end - 1e-15 && t <= disc / (4.0 * chi * delta));
        assert!(t1zero_value(1.0, 1.0, 1.0, 0.5).is_none());
    }

    #[test]
    fn pseudohermitian_reference_points() {
        for n in 1..=6u32 {
            let nf = f64::from(n);
            let b = bound_pseudohermitian(n, 1.5, 0.0).unwrap();
            assert!((b.bound - nf * 1.5 / (nf + 1.0)).abs() < 1e-14);
            assert!((b.x - 1.0 / 3.0).abs() < 1e-15);
            let c = 8.0 / (2.0 * nf + 11.0);
            let b = bound_pseudohermitian(n, 1.5, c).unwrap();
            assert!((b.bound - 2.0 * nf * 1.5 * (1.0 - c) / (2.0 * nf + 3.0)).abs() < 1e-14);
            assert_eq!(b.x, 0.0);
        }
        assert!((bound_pseudohermitian(1, 2.0, 0.0).unwrap().bound - 1.0).abs() < 1e-15);
        assert!(bound_pseudohermitian(1, 1.0, 1.0).is_err());
        assert!(bound_pseudohermitian(0, 1.0, 0.0).is_err());
    }

    #[test]
    fn pseudohermitian_interior_optimum_beats_grid() {
        let b = bound_pseudohermitian(3, 1.0, 0.2).unwrap();
        let f = |x: f64| {
            6.0 * (-3.0 * x * x + (2.0 - 0.6) * x + 0.8) / (-15.0 * x * x + 10.0 * x + 9.0)
        };
        for k in 0..1000 {
            assert!(f(k as f64 / 1000.0) <= b.bound + 1e-12);
        }
    }

    #[test]
    fn dimension_ratios() {
        assert_eq!(DimensionRatio::Standard.value(3), 2.0 / 3.0);
        assert_eq!(DimensionRatio::Inverted.value(3), 1.5);
        assert!((sntf_value(2.0, 4.0, 2.0 / 3.0).unwrap() - 6.0 / 11.0).abs() < 1e-15);
        assert!((sntf_value(2.0, 4.0, 1.5).unwrap() - 4.0 / 9.0).abs() < 1e-15);
    }
}
