use crate::error::Result;
use crate::matrix::fmt_e12;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

/// Fixed registry of checks; report order follows declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Bezout,
    GyEqualsD,
    Inner,
    Tolokonnikov,
    Winding,
    KernelIdentity,
    Anticausality,
    Pythagoras,
    Decomposition,
    KappaBounds,
    HankelRank,
    SchurRoute,
}

impl CheckId {
    pub const REGISTRY: [CheckId; 12] = [
        CheckId::Bezout,
        CheckId::GyEqualsD,
        CheckId::Inner,
        CheckId::Tolokonnikov,
        CheckId::Winding,
        CheckId::KernelIdentity,
        CheckId::Anticausality,
        CheckId::Pythagoras,
        CheckId::Decomposition,
        CheckId::KappaBounds,
        CheckId::HankelRank,
        CheckId::SchurRoute,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Bezout => "bezout",
            CheckId::GyEqualsD => "gy_equals_d",
            CheckId::Inner => "inner",
            CheckId::Tolokonnikov => "tolokonnikov",
            CheckId::Winding => "winding",
            CheckId::KernelIdentity => "kernel_identity",
            CheckId::Anticausality => "anticausality",
            CheckId::Pythagoras => "pythagoras",
            CheckId::Decomposition => "decomposition",
            CheckId::KappaBounds => "kappa_bounds",
            CheckId::HankelRank => "hankel_rank",
            CheckId::SchurRoute => "schur_route",
        }
    }

    /// Checks run by a plain verification; the rest need `--full`.
    pub fn is_base(self) -> bool {
        self <= CheckId::Anticausality
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check: CheckId,
    /// Largest residual found; infinite when the check could not be evaluated.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Secondary quantities computed by the check.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportEntry {
    /// Entry passing iff `residual <= tolerance`.
    pub fn new(check: CheckId, residual: f64, tolerance: f64) -> Self {
        Self { check, residual, tolerance, pass: residual <= tolerance, metrics: BTreeMap::new(), note: None }
    }

    pub fn failed(check: CheckId, tolerance: f64, note: impl Into<String>) -> Self {
        Self {
            check,
            residual: f64::INFINITY,
            tolerance,
            pass: false,
            metrics: BTreeMap::new(),
            note: Some(note.into()),
        }
    }

    pub fn metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.insert(name.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Further condition the entry must satisfy.
    pub fn require(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub step: f64,
    pub horizon: f64,
    pub samples: usize,
    pub omega_max: f64,
    pub freq_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub grid: GridMetadata,
    pub entries: Vec<ReportEntry>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(grid: GridMetadata) -> Self {
        Self { grid, entries: Vec::new(), pass: true }
    }

    /// Inserts an entry keeping registry order.
    pub fn push(&mut self, entry: ReportEntry) {
        let at = self.entries.partition_point(|e| e.check <= entry.check);
        self.pass &= entry.pass;
        self.entries.insert(at, entry);
    }

    pub fn entry(&self, check: CheckId) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    /// Flat CSV: `check,residual,tolerance,pass`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "residual", "tolerance", "pass"])?;
        for e in &self.entries {
            w.write_record([e.check.as_str(), &fmt_e12(e.residual), &fmt_e12(e.tolerance), if e.pass { "true" } else { "false" }])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> GridMetadata {
        GridMetadata { step: 0.01, horizon: 30.0, samples: 3001, omega_max: 50.0, freq_count: 2001 }
    }

    #[test]
    fn overall_pass_is_conjunction_in_registry_order() {
        let mut r = ResidualReport::new(meta());
        r.push(ReportEntry::new(CheckId::Winding, 0.0, 0.0));
        r.push(ReportEntry::new(CheckId::Bezout, 1e-4, 1e-3));
        assert!(r.pass);
        r.push(ReportEntry::new(CheckId::Inner, 3.0, 1e-3));
        assert!(!r.pass);
        let order: Vec<_> = r.entries.iter().map(|e| e.check).collect();
        assert_eq!(order, vec![CheckId::Bezout, CheckId::Inner, CheckId::Winding]);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn serializations() {
        let mut r = ResidualReport::new(meta());
        r.push(ReportEntry::new(CheckId::GyEqualsD, 2.5e-4, 1e-3).metric("extra", 1.0));
        r.push(ReportEntry::failed(CheckId::SchurRoute, 1e-6, "solve failed"));
        let json = r.to_json().unwrap();
        assert!(json.contains("\"gy_equals_d\""));
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["pass"], false);
        assert_eq!(back["entries"][1]["residual"], serde_json::Value::Null);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("check,residual,tolerance,pass"));
        assert!(text.contains("gy_equals_d,2.500000000000e-04,1.000000000000e-03,true"));
    }

    #[test]
    fn registry_split() {
        let base: Vec<_> = CheckId::REGISTRY.iter().filter(|c| c.is_base()).map(|c| c.as_str()).collect();
        assert_eq!(base, ["bezout", "gy_equals_d", "inner", "tolokonnikov", "winding", "kernel_identity", "anticausality"]);
    }
}
