//! The torsion penalty `m(ω, χ, ψ) = inf_{s>0} (sω + χ/s + ψ/s²)`.

use super::BoundsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MConstant {
    pub value: f64,
    /// Minimizing `s`, when the infimum is attained.
    pub s: Option<f64>,
    /// `ω = 0`: the infimum is the limit `s → ∞`.
    pub degenerate: bool,
}

fn check(name: &'static str, v: f64) -> Result<(), BoundsError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(BoundsError::NegativeInput { name, value: v })
    }
}

fn objective(omega: f64, chi: f64, psi: f64, s: f64) -> f64 {
    s * omega + chi / s + psi / (s * s)
}

/// Closed forms where one of the inputs vanishes, otherwise the unique positive
/// root of `ωs³ − χs − 2ψ = 0`.
pub fn m_constant(omega: f64, chi: f64, psi: f64) -> Result<MConstant, BoundsError> {
    check("omega", omega)?;
    check("chi", chi)?;
    check("psi", psi)?;
    if omega == 0.0 {
        return Ok(MConstant {
            value: 0.0,
            s: None,
            degenerate: true,
        });
    }
    let m = if chi == 0.0 && psi == 0.0 {
        MConstant {
            value: 0.0,
            s: None,
            degenerate: false,
        }
    } else if psi == 0.0 {
        MConstant {
            value: 2.0 * (omega * chi).sqrt(),
            s: Some((chi / omega).sqrt()),
            degenerate: false,
        }
    } else if chi == 0.0 {
        MConstant {
            value: (27.0 * omega * omega * psi / 4.0).cbrt(),
            s: Some((2.0 * psi / omega).cbrt()),
            degenerate: false,
        }
    } else {
        let s = cubic_root(omega, chi, psi);
        MConstant {
            value: objective(omega, chi, psi, s),
            s: Some(s),
            degenerate: false,
        }
    };
    Ok(m)
}

/// Positive root of `p(s) = ωs³ − χs − 2ψ` (ω, ψ > 0): bracket, bisect, Newton-polish.
fn cubic_root(omega: f64, chi: f64, psi: f64) -> f64 {
    let p = |s: f64| omega * s * s * s - chi * s - 2.0 * psi;
    // p < 0 on (0, root), p > 0 beyond; Cauchy-type upper bound on the root.
    let mut hi = 1.0 + (chi / omega).sqrt() + (2.0 * psi / omega).cbrt();
    while p(hi) <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Direct numerical minimization: log-spaced grid, then bisection on the sign of
/// the stationarity cubic inside the bracketing cell. Used to cross-check the closed forms.
pub fn m_constant_numeric(omega: f64, chi: f64, psi: f64) -> Result<MConstant, BoundsError> {
    check("omega", omega)?;
    check("chi", chi)?;
    check("psi", psi)?;
    const POINTS: usize = 4000;
    let (lo_exp, hi_exp) = (-14.0f64, 14.0f64);
    let s_at = |k: usize| 10f64.powf(lo_exp + (hi_exp - lo_exp) * k as f64 / (POINTS - 1) as f64);
    let g = |s: f64| objective(omega, chi, psi, s);
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..POINTS {
        let v = g(s_at(k));
        if v < best_v {
            best_v = v;
            best = k;
        }
    }
    if best == 0 || best == POINTS - 1 {
        // infimum approached at an end of the range
        return Ok(MConstant {
            value: best_v,
            s: None,
            degenerate: best == POINTS - 1,
        });
    }
    let p = |s: f64| omega * s * s * s - chi * s - 2.0 * psi;
    let (mut lo, mut hi) = (s_at(best - 1), s_at(best + 1));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    Ok(MConstant {
        value: g(s).min(best_v),
        s: Some(s),
        degenerate: false,
    })
}
