//! Bound reports and their text and CSV serializations.

use std::fmt::{self, Write as _};

use super::BoundsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    /// `(ρ₁ − m(ω,χ,ψ))/(Δ + ω)`.
    Main,
    /// Two-case bound when the mixed distortion tensor vanishes.
    T1Zero,
    /// Almost strictly normal spaces.
    Asn,
    /// Strictly normal spaces with `tr ∇Tor(H) = 0`, closed form at `x = 1/3`.
    Sntf,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::Main, Theorem::T1Zero, Theorem::Asn, Theorem::Sntf];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Main => "main",
            Theorem::T1Zero => "t1zero",
            Theorem::Asn => "asn",
            Theorem::Sntf => "sntf",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One evaluated bound with the constants that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub theorem: Theorem,
    pub bound: f64,
    pub x: f64,
    pub delta: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub kappa: f64,
    pub omega: f64,
    pub chi: f64,
    pub sigma: f64,
    pub psi: f64,
    pub m: f64,
    /// Minimizer of `sω + χ/s + ψ/s²`.
    pub s: Option<f64>,
    /// Optimal auxiliary parameter of the `T₁ ≡ 0` bound.
    pub t: Option<f64>,
    /// Gap between the sphere-minimized and the reported `ρ₁` (asn only).
    pub residual: Option<f64>,
}

impl BoundEntry {
    /// `ρ₁` of the asn bound is certified when the sphere minimization agrees to `1e-8`.
    pub fn rho1_certified(&self) -> bool {
        self.residual.is_none_or(|r| r < 1e-8)
    }
}

/// Alternative normalization under which a bound is recomputed for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltConvention {
    /// `|τ_H|²` summed over unordered pairs, i.e. half the default.
    UnorderedPairs,
    /// `d/(d−1)` instead of `(d−1)/d` in the closed-form strictly-normal bound.
    InvertedDimensionRatio,
}

impl AltConvention {
    pub fn id(self) -> &'static str {
        match self {
            AltConvention::UnorderedPairs => "unordered_pairs",
            AltConvention::InvertedDimensionRatio => "inverted_dimension_ratio",
        }
    }
}

/// The same bound under the default and an alternative convention.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyRecord {
    pub convention: AltConvention,
    pub alternative: BoundEntry,
    pub calibrated: BoundEntry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub theorem: Theorem,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub example: String,
    pub params: Vec<(String, f64)>,
    pub dim_h: usize,
    pub dim_v: usize,
    pub kappa: f64,
    pub entries: Vec<BoundEntry>,
    pub skipped: Vec<Skipped>,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

/// Fixed column order of CSV output.
pub const CSV_COLUMNS: [&str; 10] = [
    "example", "theorem", "bound", "x", "rho1", "rho2", "omega", "chi", "psi", "m",
];

fn num(v: f64) -> String {
    format!("{v:.12}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), num)
}

impl BoundReport {
    /// Largest bound; ties resolve to the earliest entry.
    pub fn best(&self) -> Option<&BoundEntry> {
        self.entries
            .iter()
            .fold(None, |acc: Option<&BoundEntry>, e| match acc {
                Some(b) if b.bound >= e.bound => Some(b),
                _ => Some(e),
            })
    }

    pub fn entry(&self, theorem: Theorem) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.theorem == theorem)
    }

    pub fn params_string(&self) -> String {
        if self.params.is_empty() {
            return "none".into();
        }
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Flat `key = value` block.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "example = {}", self.example);
        let _ = writeln!(s, "params = {}", self.params_string());
        let _ = writeln!(s, "dim_h = {}", self.dim_h);
        let _ = writeln!(s, "dim_v = {}", self.dim_v);
        let _ = writeln!(s, "kappa = {}", num(self.kappa));
        for e in &self.entries {
            write_entry(&mut s, e.theorem.id(), e);
        }
        for sk in &self.skipped {
            let _ = writeln!(s, "{}.skipped = {}", sk.theorem, sk.reason);
        }
        for d in &self.discrepancies {
            let p = format!("discrepancy.{}", d.convention.id());
            let _ = writeln!(s, "{p}.theorem = {}", d.alternative.theorem);
            let _ = writeln!(s, "{p}.alternative = {}", num(d.alternative.bound));
            let _ = writeln!(s, "{p}.calibrated = {}", num(d.calibrated.bound));
            let _ = writeln!(s, "{p}.alternative_x = {}", num(d.alternative.x));
        }
        match self.best() {
            Some(b) => {
                let _ = writeln!(s, "best.theorem = {}", b.theorem);
                let _ = writeln!(s, "best.bound = {}", num(b.bound));
            }
            None => {
                let _ = writeln!(s, "best.theorem = none");
            }
        }
        s
    }

    /// CSV with [`CSV_COLUMNS`]; discrepancy rows use theorem ids of the form `main@unordered_pairs`.
    pub fn to_csv(&self, header: bool) -> Result<String, BoundsError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let io = |e: csv::Error| BoundsError::Serialize(e.to_string());
        if header {
            w.write_record(CSV_COLUMNS).map_err(io)?;
        }
        let mut rows: Vec<(String, &BoundEntry)> =
            self.entries.iter().map(|e| (e.theorem.id().to_string(), e)).collect();
        for d in &self.discrepancies {
            rows.push((format!("{}@{}", d.alternative.theorem, d.convention.id()), &d.alternative));
        }
        for (id, e) in rows {
            w.write_record([
                self.example.clone(),
                id,
                num(e.bound),
                num(e.x),
                num(e.rho1),
                num(e.rho2),
                num(e.omega),
                num(e.chi),
                num(e.psi),
                num(e.m),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| BoundsError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| BoundsError::Serialize(e.to_string()))
    }
}

fn write_entry(s: &mut String, p: &str, e: &BoundEntry) {
    let _ = writeln!(s, "{p}.bound = {}", num(e.bound));
    let _ = writeln!(s, "{p}.x = {}", num(e.x));
    let _ = writeln!(s, "{p}.delta = {}", num(e.delta));
    let _ = writeln!(s, "{p}.rho1 = {}", num(e.rho1));
    let _ = writeln!(s, "{p}.rho2 = {}", num(e.rho2));
    let _ = writeln!(s, "{p}.omega = {}", num(e.omega));
    let _ = writeln!(s, "{p}.chi = {}", num(e.chi));
    let _ = writeln!(s, "{p}.sigma = {}", num(e.sigma));
    let _ = writeln!(s, "{p}.psi = {}", num(e.psi));
    let _ = writeln!(s, "{p}.m = {}", num(e.m));
    let _ = writeln!(s, "{p}.s = {}", opt(e.s));
    let _ = writeln!(s, "{p}.t = {}", opt(e.t));
    if let Some(r) = e.residual {
        let _ = writeln!(s, "{p}.residual = {r:.3e}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(theorem: Theorem, bound: f64) -> BoundEntry {
        BoundEntry {
            theorem,
            bound,
            x: 0.5,
            delta: 0.25,
            rho1: 1.0,
            rho2: 1.0,
            kappa: 1.0,
            omega: 1.0,
            chi: 0.0,
            sigma: 0.0,
            psi: 0.0,
            m: 0.0,
            s: None,
            t: None,
            residual: None,
        }
    }

    fn report() -> BoundReport {
        BoundReport {
            example: "demo".into(),
            params: vec![("b".into(), 0.0)],
            dim_h: 2,
            dim_v: 1,
            kappa: 1.0,
            entries: vec![entry(Theorem::Main, 0.25), entry(Theorem::Asn, 0.5), entry(Theorem::Sntf, 0.5)],
            skipped: vec![],
            discrepancies: vec![],
        }
    }

    #[test]
    fn best_prefers_first_on_ties() {
        assert_eq!(report().best().unwrap().theorem, Theorem::Asn);
        let mut r = report();
        r.entries.clear();
        assert!(r.best().is_none());
    }

    #[test]
    fn csv_schema() {
        let csv = report().to_csv(true).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert!(lines.next().unwrap().starts_with("demo,main,0.250000000000,0.500000000000"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn text_block() {
        let t = report().to_text();
        assert!(t.contains("params = b=0\n"));
        assert!(t.contains("best.theorem = asn\n"));
        assert!(t.ends_with("best.bound = 0.500000000000\n"));
    }
}
