use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// How the two sides of a report are compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Orientation {
    /// `lhs ≤ rhs`
    Le,
    /// `lhs ≥ rhs`
    Ge,
    /// `|lhs − rhs| ≤ rel · max(|rhs|, 1e-300)`
    Eq { rel: f64 },
    /// `|lhs − rhs| ≤ abs`
    Agree { abs: f64 },
    /// `lhs` is finite; `rhs` is unused.
    Finite,
}

/// One side-by-side comparison of an inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub orientation: Orientation,
    pub lhs: f64,
    pub rhs: f64,
    /// Oriented so that a nonnegative margin means the claim holds.
    pub margin: f64,
    pub tol: f64,
    pub holds: bool,
    /// Non-binding reports are informational and never fail a run.
    pub binding: bool,
    pub params: BTreeMap<String, f64>,
    pub probes: usize,
}

/// Default reporting slack, `1e-7·max(1, |rhs|)`.
pub fn report_tolerance(rhs: f64) -> f64 {
    1e-7 * rhs.abs().max(1.0)
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, orientation: Orientation, lhs: f64, rhs: f64) -> Self {
        let (margin, tol) = match orientation {
            Orientation::Le => (rhs - lhs, report_tolerance(rhs)),
            Orientation::Ge => (lhs - rhs, report_tolerance(rhs)),
            Orientation::Eq { rel } => (-(lhs - rhs).abs(), rel * rhs.abs().max(1e-300)),
            Orientation::Agree { abs } => (-(lhs - rhs).abs(), abs),
            Orientation::Finite => (0.0, 0.0),
        };
        let holds = match orientation {
            Orientation::Finite => lhs.is_finite(),
            _ => margin >= -tol,
        };
        Self {
            name: name.into(),
            orientation,
            lhs,
            rhs,
            margin,
            tol,
            holds,
            binding: true,
            params: BTreeMap::new(),
            probes: 1,
        }
    }

    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, Orientation::Le, lhs, rhs)
    }

    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, Orientation::Ge, lhs, rhs)
    }

    pub fn eq_rel(name: impl Into<String>, lhs: f64, rhs: f64, rel: f64) -> Self {
        Self::new(name, Orientation::Eq { rel }, lhs, rhs)
    }

    pub fn agree(name: impl Into<String>, lhs: f64, rhs: f64, abs: f64) -> Self {
        Self::new(name, Orientation::Agree { abs }, lhs, rhs)
    }

    pub fn finite(name: impl Into<String>, value: f64) -> Self {
        Self::new(name, Orientation::Finite, value, 0.0)
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn probes(mut self, n: usize) -> Self {
        self.probes = n;
        self
    }

    pub fn informational(mut self) -> Self {
        self.binding = false;
        self
    }

    /// True unless this is a binding report that fails.
    pub fn passes(&self) -> bool {
        self.holds || !self.binding
    }
}

fn orientation_label(o: &Orientation) -> &'static str {
    match o {
        Orientation::Le => "le",
        Orientation::Ge => "ge",
        Orientation::Eq { .. } => "eq",
        Orientation::Agree { .. } => "agree",
        Orientation::Finite => "finite",
    }
}

/// Float formatting with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Flat CSV view: one row per report, parameters as `key=value` pairs.
pub fn write_reports_csv<W: Write>(reports: &[InequalityReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Spec(format!("writing CSV: {e}"));
    w.write_record([
        "name",
        "orientation",
        "lhs",
        "rhs",
        "margin",
        "tol",
        "holds",
        "binding",
        "probes",
        "params",
    ])
    .map_err(io)?;
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_float(*v)))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.name.clone(),
            orientation_label(&r.orientation).to_string(),
            fmt_float(r.lhs),
            fmt_float(r.rhs),
            fmt_float(r.margin),
            fmt_float(r.tol),
            r.holds.to_string(),
            r.binding.to_string(),
            r.probes.to_string(),
            params,
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Spec(format!("writing CSV: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_and_tolerance() {
        assert!(InequalityReport::le("a", 1.0, 1.0 - 5e-8).holds);
        assert!(!InequalityReport::le("a", 1.0, 1.0 - 2e-7).holds);
        assert!(InequalityReport::ge("b", 2.0, 1.0).margin == 1.0);
        assert!(InequalityReport::eq_rel("c", 2.0 + 1e-9, 2.0, 1e-8).holds);
        assert!(!InequalityReport::eq_rel("c", 2.0 + 1e-7, 2.0, 1e-8).holds);
        assert!(!InequalityReport::finite("d", f64::INFINITY).holds);
        let r = InequalityReport::le("e", 2.0, 1.0).informational();
        assert!(!r.holds && r.passes());
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let r = InequalityReport::le("x", 0.1, 1.0 / 3.0).param("r", 0.5);
        let mut buf = Vec::new();
        write_reports_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.contains("r=5.0000000000000000e-1"));
        let back: f64 = "3.3333333333333331e-1".parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }
}
