//! Comparison of computed lower bounds against the exact first eigenvalue.

use std::fmt;

use super::oracle::{SpectralError, SpectrumResult, TailBound};
use crate::bounds::{BoundEntry, BoundReport, Theorem};

/// Slack allowed when comparing a bound with `λ₁`.
pub const CERT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CertLine {
    /// `main`, `asn`, ... or `main@unordered_pairs` for an alternative convention.
    pub label: String,
    pub theorem: Theorem,
    pub bound: f64,
    pub x: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub lambda1: f64,
    pub pass: bool,
}

impl fmt::Display for CertLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<32} bound = {:.12}  lambda1 = {:.12}  x = {:.6}  rho1 = {:.6}  rho2 = {:.6}",
            if self.pass { "PASS" } else { "FAIL" },
            self.label,
            self.bound,
            self.lambda1,
            self.x,
            self.rho1,
            self.rho2
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub lines: Vec<CertLine>,
    pub lambda1: f64,
    pub tail: TailBound,
}

impl Certification {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

fn line(label: String, e: &BoundEntry, lambda1: f64) -> CertLine {
    CertLine {
        label,
        theorem: e.theorem,
        bound: e.bound,
        x: e.x,
        rho1: e.rho1,
        rho2: e.rho2,
        lambda1,
        pass: e.bound <= lambda1 + CERT_TOL,
    }
}

/// Checks every bound of `report`, including alternative conventions, against `spectrum`.
///
/// The Casimir cutoff must be at least four times the largest bound so that the
/// enumerated irreps cover the range in which a violation could hide.
pub fn certify(report: &BoundReport, spectrum: &SpectrumResult) -> Result<Certification, SpectralError> {
    let lambda1 = spectrum.lambda1;
    let mut lines: Vec<CertLine> = report
        .entries
        .iter()
        .map(|e| line(e.theorem.id().to_string(), e, lambda1))
        .collect();
    for d in &report.discrepancies {
        lines.push(line(
            format!("{}@{}", d.alternative.theorem.id(), d.convention.id()),
            &d.alternative,
            lambda1,
        ));
    }
    let max_bound = lines.iter().map(|l| l.bound).fold(0.0_f64, f64::max);
    if spectrum.cutoff < 4.0 * max_bound {
        return Err(SpectralError::CutoffTooSmall {
            cutoff: spectrum.cutoff,
            bound: max_bound,
        });
    }
    Ok(Certification {
        lines,
        lambda1,
        tail: spectrum.tail.clone(),
    })
}
