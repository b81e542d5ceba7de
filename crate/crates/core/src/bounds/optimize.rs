//! Evaluation of the bounds at fixed `x` and the full `(x, ρ₂)` sweep.

use rayon::prelude::*;

use super::asn::ProductTerm;
use super::bgform::{bg_pencil, BgPencil, SeminormConvention};
use super::mconst::m_constant;
use super::psd::SchurPencil;
use super::report::{AltConvention, BoundEntry, BoundReport, DiscrepancyRecord, Skipped, Theorem};
use super::theorems::{
    asn_value, delta, golden_max, level_set_centre, main_value, sntf_value, t1zero_value, DimensionRatio,
};
use super::BoundsError;
use crate::analysis::{min_eig, sym, Analysis};

/// Grid resolution of the optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Uniform grid `k / x_points`, `k = 0..x_points`, on `[0, 1)`.
    pub x_points: usize,
    /// Log-spaced `ρ₂` points per decade.
    pub rho2_per_decade: usize,
    /// Width of the `ρ₂` grid in decades, centred on `κ`.
    pub rho2_decades: f64,
    pub convention: SeminormConvention,
    /// Golden-section refinement around the best grid cells.
    pub refine: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            x_points: 2000,
            rho2_per_decade: 200,
            rho2_decades: 6.0,
            convention: SeminormConvention::OrderedPairs,
            refine: true,
        }
    }
}

/// Sphere samples used to certify the asn `ρ₁`.
const SPHERE_SAMPLES: usize = 100_000;
const REFINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    rho1: f64,
    rho2: f64,
    m: f64,
    s: Option<f64>,
    t: Option<f64>,
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.value > x.value { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn value_of(c: Option<Candidate>) -> f64 {
    c.map_or(f64::NEG_INFINITY, |c| c.value)
}

struct Sweep {
    opts: SweepOptions,
    d: usize,
    kappa: f64,
    t2_max: f64,
    sigma: f64,
    main: BgPencil,
    asn: BgPencil,
    product: ProductTerm,
    grid: Vec<f64>,
}

impl Sweep {
    fn new(an: &Analysis, opts: SweepOptions) -> Self {
        let d = an.dim_h();
        let k = an.constants.kappa;
        let centre = if k > 0.0 { k } else { 1.0 };
        let per = opts.rho2_per_decade.max(1);
        let total = (opts.rho2_decades * per as f64).round().max(1.0) as usize;
        let grid = (0..=total)
            .map(|i| centre * 10f64.powf(-opts.rho2_decades / 2.0 + i as f64 / per as f64))
            .collect();
        let grams = &an.curvature.grams;
        let a = grams.tau_vh.view((0, 0), (d, d)).into_owned();
        let b = grams.tau_hv.view((0, 0), (d, d)).into_owned();
        Self {
            opts,
            d,
            kappa: k,
            t2_max: an.constants.t2_max,
            sigma: an.constants.sigma,
            main: bg_pencil(an, opts.convention, false),
            asn: bg_pencil(an, opts.convention, true),
            product: ProductTerm::new(sym(&a), sym(&b)),
            grid,
        }
    }

    /// Admissible `ρ₂` candidates for one Schur pencil, ascending.
    fn candidates(&self, schur: &SchurPencil) -> Vec<f64> {
        let max = schur.rho2_max();
        let mut c: Vec<f64> = self.grid.iter().copied().filter(|&r| r < max).collect();
        if schur.boundary_feasible() {
            c.push(max);
        }
        c
    }

    /// Best value of `eval` over the `ρ₂` grid plus golden refinement in `log ρ₂`.
    /// With `precise`, the reported `ρ₂` is the centre of the near-optimal level set.
    fn best_rho2(
        &self,
        schur: &SchurPencil,
        precise: bool,
        eval: impl Fn(f64) -> Option<Candidate>,
    ) -> Option<Candidate> {
        let cands = self.candidates(schur);
        let mut best: Option<(usize, Candidate)> = None;
        for (i, &r) in cands.iter().enumerate() {
            if let Some(c) = eval(r) {
                if best.is_none_or(|(_, b)| c.value > b.value) {
                    best = Some((i, c));
                }
            }
        }
        let (i, mut cand) = best?;
        if self.opts.refine && cands.len() > 1 {
            let lo = cands[i.saturating_sub(1)].ln();
            let hi = cands[(i + 1).min(cands.len() - 1)].ln();
            if hi > lo {
                let f = |lr: f64| value_of(eval(lr.exp()));
                let (lr, _) = golden_max(f, lo, hi, REFINE_TOL);
                cand = better(Some(cand), eval(lr.exp())).unwrap_or(cand);
                if precise {
                    let centre = level_set_centre(f, cand.rho2.ln(), cand.value, lo, hi);
                    if let Some(c) = eval(centre.exp()) {
                        cand = c;
                    }
                }
            }
        }
        Some(cand)
    }

    fn omega(&self, rho2: f64) -> f64 {
        self.kappa / rho2
    }

    fn main_at(&self, x: f64, precise: bool) -> Option<Candidate> {
        let schur = SchurPencil::new(&self.main.at(x), self.d);
        let dl = delta(x, self.d);
        self.best_rho2(&schur, precise, |rho2| {
            let rho1 = schur.rho1(rho2)?;
            let omega = self.omega(rho2);
            let mc = m_constant(omega, rho2 * self.t2_max, rho2 * self.sigma * self.sigma).ok()?;
            let value = main_value(rho1, mc.value, dl, omega)?;
            Some(Candidate {
                value,
                rho1,
                rho2,
                m: mc.value,
                s: mc.s,
                t: None,
            })
        })
    }

    fn t1zero_at(&self, x: f64, precise: bool) -> Option<Candidate> {
        let schur = SchurPencil::new(&self.main.at(x), self.d);
        let dl = delta(x, self.d);
        self.best_rho2(&schur, precise, |rho2| {
            let rho1 = schur.rho1(rho2)?;
            let omega = self.omega(rho2);
            let (value, t) = t1zero_value(rho1, omega, rho2 * self.t2_max, dl)?;
            Some(Candidate {
                value,
                rho1,
                rho2,
                m: 0.0,
                s: None,
                t: Some(t),
            })
        })
    }

    fn asn_at(&self, x: f64, precise: bool) -> Option<Candidate> {
        let schur = SchurPencil::new(&self.asn.at(x), self.d);
        let dl = delta(x, self.d);
        self.best_rho2(&schur, precise, |rho2| {
            let s = schur.matrix(rho2)?;
            let rho1 = self.product.rho1_lower(&s);
            let omega = self.omega(rho2);
            let value = asn_value(rho1, dl, omega)?;
            Some(Candidate {
                value,
                rho1,
                rho2,
                m: 0.0,
                s: None,
                t: None,
            })
        })
    }

    fn at(&self, theorem: Theorem, x: f64, precise: bool) -> Option<Candidate> {
        match theorem {
            Theorem::Main => self.main_at(x, precise),
            Theorem::T1Zero => self.t1zero_at(x, precise),
            Theorem::Asn => self.asn_at(x, precise),
            Theorem::Sntf => None,
        }
    }

    fn entry(&self, theorem: Theorem, x: f64, c: Candidate) -> BoundEntry {
        let omega = self.omega(c.rho2);
        let mut e = BoundEntry {
            theorem,
            bound: c.value,
            x,
            delta: delta(x, self.d),
            rho1: c.rho1,
            rho2: c.rho2,
            kappa: self.kappa,
            omega,
            chi: c.rho2 * self.t2_max,
            sigma: self.sigma,
            psi: c.rho2 * self.sigma * self.sigma,
            m: c.m,
            s: c.s,
            t: c.t,
            residual: None,
        };
        if theorem == Theorem::Asn {
            e.residual = Some(self.asn_residual(x, c.rho2, c.rho1));
        }
        e
    }

    /// `|sphere minimum − ρ₁|` at the chosen `(x, ρ₂)`.
    fn asn_residual(&self, x: f64, rho2: f64, rho1: f64) -> f64 {
        let schur = SchurPencil::new(&self.asn.at(x), self.d);
        match schur.matrix(rho2) {
            Some(s) => (self.product.sphere_minimum(&s, SPHERE_SAMPLES).0 - rho1).abs(),
            None => f64::INFINITY,
        }
    }

    fn at_fixed_x(&self, theorem: Theorem, x: f64) -> Option<BoundEntry> {
        self.at(theorem, x, true).map(|c| self.entry(theorem, x, c))
    }

    /// Sweeps the `x` grid for several theorems at once, then refines each.
    fn sweep(&self, theorems: &[Theorem]) -> Vec<Option<BoundEntry>> {
        let n = self.opts.x_points.max(1);
        let xs: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        let per_x: Vec<Vec<Option<Candidate>>> = xs
            .par_iter()
            .map(|&x| theorems.iter().map(|&t| self.at(t, x, false)).collect())
            .collect();
        theorems
            .iter()
            .enumerate()
            .map(|(ti, &th)| {
                let mut best: Option<(usize, Candidate)> = None;
                for (k, row) in per_x.iter().enumerate() {
                    if let Some(c) = row[ti] {
                        if best.is_none_or(|(_, b)| c.value > b.value) {
                            best = Some((k, c));
                        }
                    }
                }
                let (k, cand) = best?;
                let mut x = xs[k];
                let mut value = cand.value;
                if self.opts.refine {
                    let lo = if k == 0 { 0.0 } else { xs[k - 1] };
                    let hi = if k + 1 < n { xs[k + 1] } else { 1.0 - 1e-9 };
                    let f = |x: f64| value_of(self.at(th, x, false));
                    let (xr, vr) = golden_max(f, lo, hi, REFINE_TOL);
                    if vr > value {
                        x = xr;
                        value = vr;
                    }
                    x = level_set_centre(f, x, value, lo, hi);
                }
                let cand = self.at(th, x, true)?;
                Some(self.entry(th, x, cand))
            })
            .collect()
    }
}

fn check_x(x: f64) -> Result<(), BoundsError> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(BoundsError::XOutOfRange(x))
    }
}

/// Main bound at fixed `x`, optimized over `ρ₂`. `Ok(None)` means `ρ₁ ≤ m` for every admissible `ρ₂`.
pub fn bound_main(an: &Analysis, x: f64, opts: &SweepOptions) -> Result<Option<BoundEntry>, BoundsError> {
    check_x(x)?;
    Ok(Sweep::new(an, *opts).at_fixed_x(Theorem::Main, x))
}

/// Bound for `T₁ ≡ 0` at fixed `x`, optimized over `ρ₂`.
pub fn bound_t1zero(an: &Analysis, x: f64, opts: &SweepOptions) -> Result<Option<BoundEntry>, BoundsError> {
    check_x(x)?;
    applicable(an, Theorem::T1Zero)?;
    Ok(Sweep::new(an, *opts).at_fixed_x(Theorem::T1Zero, x))
}

/// Almost-strictly-normal bound at fixed `x`, optimized over `ρ₂`.
pub fn bound_asn(an: &Analysis, x: f64, opts: &SweepOptions) -> Result<Option<BoundEntry>, BoundsError> {
    check_x(x)?;
    applicable(an, Theorem::Asn)?;
    Ok(Sweep::new(an, *opts).at_fixed_x(Theorem::Asn, x))
}

/// Closed-form strictly-normal bound `ρ₁/(r + 3ω/4)`, with `ρ₁ = λ_min(src|_H)`,
/// `4ρ₂ = λ_min(|τ_H|² on V)` and `r` the dimension ratio.
pub fn bound_sntf(
    an: &Analysis,
    convention: SeminormConvention,
    ratio: DimensionRatio,
) -> Result<Option<BoundEntry>, BoundsError> {
    applicable(an, Theorem::Sntf)?;
    let d = an.dim_h();
    let n = an.dim();
    let rho1 = min_eig(&sym(&an.curvature.sub_ricci.view((0, 0), (d, d)).into_owned()));
    let mut g = an.curvature.grams.tau_h.view((d, d), (n - d, n - d)).into_owned();
    if convention == SeminormConvention::UnorderedPairs {
        g *= 0.5;
    }
    let rho2 = min_eig(&g) / 4.0;
    if rho2 <= 0.0 {
        return Ok(None);
    }
    let kappa = an.constants.kappa;
    let omega = kappa / rho2;
    let x = 1.0 / 3.0;
    Ok(sntf_value(rho1, omega, ratio.value(d)).map(|bound| BoundEntry {
        theorem: Theorem::Sntf,
        bound,
        x,
        delta: delta(x, d),
        rho1,
        rho2,
        kappa,
        omega,
        chi: 0.0,
        sigma: an.constants.sigma,
        psi: 0.0,
        m: 0.0,
        s: None,
        t: None,
        residual: None,
    }))
}

fn applicable(an: &Analysis, theorem: Theorem) -> Result<(), BoundsError> {
    let flags = an.curvature.flags;
    let reason = match theorem {
        Theorem::Main => None,
        Theorem::T1Zero => (!an.constants.t1_zero).then_some("mixed distortion tensor T1 is nonzero"),
        Theorem::Asn => (!flags.almost_strictly_normal).then_some("not almost strictly normal"),
        Theorem::Sntf => {
            if !flags.strictly_normal {
                Some("not strictly normal")
            } else if !an.horizontal_nabla_trace_vanishes() {
                Some("trace of nabla Tor on H is nonzero")
            } else {
                None
            }
        }
    };
    match reason {
        Some(r) => Err(BoundsError::Inapplicable {
            theorem,
            reason: r.to_string(),
        }),
        None => Ok(()),
    }
}

/// Evaluates every applicable bound, sweeping `x` and `ρ₂`.
pub fn optimize(an: &Analysis, opts: &SweepOptions) -> BoundReport {
    let sweep = Sweep::new(an, *opts);
    let mut skipped = Vec::new();
    let mut swept = Vec::new();
    for th in [Theorem::Main, Theorem::T1Zero, Theorem::Asn] {
        match applicable(an, th) {
            Ok(()) => swept.push(th),
            Err(BoundsError::Inapplicable { reason, .. }) => skipped.push(Skipped { theorem: th, reason }),
            Err(_) => unreachable!("applicability only reports inapplicable theorems"),
        }
    }
    let mut entries = Vec::new();
    for (th, e) in swept.iter().zip(sweep.sweep(&swept)) {
        match e {
            Some(e) => entries.push(e),
            None => skipped.push(Skipped {
                theorem: *th,
                reason: "no admissible curvature constants give a positive bound".into(),
            }),
        }
    }
    match bound_sntf(an, opts.convention, DimensionRatio::Standard) {
        Ok(Some(e)) => entries.push(e),
        Ok(None) => skipped.push(Skipped {
            theorem: Theorem::Sntf,
            reason: "no positive bound".into(),
        }),
        Err(BoundsError::Inapplicable { reason, .. }) => skipped.push(Skipped {
            theorem: Theorem::Sntf,
            reason,
        }),
        Err(e) => skipped.push(Skipped {
            theorem: Theorem::Sntf,
            reason: e.to_string(),
        }),
    }
    skipped.sort_by_key(|s| s.theorem);
    BoundReport {
        example: an.algebra.name().to_string(),
        params: an.algebra.params().to_vec(),
        dim_h: an.dim_h(),
        dim_v: an.dim_v(),
        kappa: an.constants.kappa,
        entries,
        skipped,
        discrepancies: Vec::new(),
    }
}

/// Recomputes the affected bound under `alt` and pairs it with the default-convention value.
pub fn discrepancy(
    an: &Analysis,
    opts: &SweepOptions,
    alt: AltConvention,
) -> Result<Option<DiscrepancyRecord>, BoundsError> {
    let pair = match alt {
        AltConvention::UnorderedPairs => {
            let base = SweepOptions {
                convention: SeminormConvention::OrderedPairs,
                ..*opts
            };
            let other = SweepOptions {
                convention: SeminormConvention::UnorderedPairs,
                ..*opts
            };
            let calibrated = Sweep::new(an, base).sweep(&[Theorem::Main]).pop().flatten();
            let alternative = Sweep::new(an, other).sweep(&[Theorem::Main]).pop().flatten();
            calibrated.zip(alternative)
        }
        AltConvention::InvertedDimensionRatio => {
            let calibrated = bound_sntf(an, opts.convention, DimensionRatio::Standard)?;
            let alternative = bound_sntf(an, opts.convention, DimensionRatio::Inverted)?;
            calibrated.zip(alternative)
        }
    };
    Ok(pair.map(|(calibrated, alternative)| DiscrepancyRecord {
        convention: alt,
        alternative,
        calibrated,
    }))
}
