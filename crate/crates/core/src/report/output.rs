//! Report files: JSON, text and one CSV per table.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::report::runner::{Table, VerificationReport};

pub fn to_json(report: &VerificationReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6e}")
    } else {
        v.to_string()
    }
}

pub fn to_text(report: &VerificationReport) -> String {
    let h = &report.header;
    let mut s = String::new();
    let _ = writeln!(s, "{} {}  scenario {}  seed {}", h.artifact, h.version, h.scenario, h.seed);
    let _ = writeln!(s, "scenario hash {}", h.scenario_hash);
    let t = &h.tolerances;
    let _ = writeln!(s, "tolerances kernel {:e} quad {:e} cert {:e} cert_third {:e} psd {:e}", t.kernel, t.quad, t.cert, t.cert_third, t.psd_slack);
    for c in &report.checks {
        let _ = writeln!(s, "\n[{}] {}", c.verdict.label(), c.check);
        for a in &c.anchors {
            let _ = writeln!(s, "    {a}");
        }
        for (k, v) in &c.inputs {
            let _ = writeln!(s, "  input    {k} = {v}");
        }
        for (k, v) in &c.residuals {
            let _ = writeln!(s, "  value    {k} = {}", num(*v));
        }
        for v in &c.verdicts {
            let _ = writeln!(s, "  {:<8} {}", v.verdict.label(), v.label);
        }
    }
    let sm = &report.summary;
    let overall = sm.verdict.map_or("-", |v| v.label());
    let _ = writeln!(s, "\nsummary: {} checks, {} pass, {} fail, {} n/a, overall {}", sm.checks, sm.pass, sm.fail, sm.not_applicable, overall);
    s
}

/// Shortest round-trip form, in exponent notation for very small or large magnitudes.
fn csv_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn table_csv(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| csv_num(v))).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Writes `<stem>.json`, `<stem>.txt` and `<stem>.<index>-<check>-<table>.csv`
/// into `dir`; returns the paths written.
pub fn write_report(report: &VerificationReport, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let p = dir.join(name);
        std::fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    put(format!("{stem}.json"), to_json(report)?)?;
    put(format!("{stem}.txt"), to_text(report))?;
    for (i, c) in report.checks.iter().enumerate() {
        for t in &c.tables {
            put(format!("{stem}.{i}-{}-{}.csv", c.check, t.name), table_csv(t)?)?;
        }
    }
    Ok(written)
}
