//! Plain-text rendering of reports.

use std::fmt::Write;

use crate::linalg::{ComplexNumber, SpectrumSet};
use crate::report::{CheckReport, ValidationReport};
use crate::spectral::{AnalyticSpectrum, SpectralDecomposition, SpectrumSummary};

const ZERO: f64 = 1e-12;

fn real(x: f64) -> String {
    let x = if x.abs() < ZERO { 0.0 } else { x };
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

pub fn complex(z: ComplexNumber) -> String {
    if z.im.abs() < ZERO {
        real(z.re)
    } else if z.re.abs() < ZERO {
        format!("{}i", real(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", real(z.re), real(z.im.abs()))
    }
}

pub fn set(s: &SpectrumSet) -> String {
    let parts: Vec<String> = s.values().iter().map(|z| complex(*z)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn decomposition(d: &SpectralDecomposition) -> String {
    let mut out = String::from("local summands\n");
    let rows: Vec<Vec<String>> = d.local.iter().map(|(c, n)| vec![c.clone(), n.to_string()]).collect();
    out.push_str(&table(&["color", "dim"], &rows));
    if !d.cross.is_empty() {
        out.push_str("\ninteraction summands\n");
        let rows: Vec<Vec<String>> = d
            .cross
            .iter()
            .map(|r| {
                vec![
                    r.op.clone(),
                    format!("({})->{}", r.inputs.join(","), r.output_color),
                    r.rank.to_string(),
                    r.image_dim.to_string(),
                    r.provenance.join(" "),
                ]
            })
            .collect();
        out.push_str(&table(&["op", "signature", "rank", "dim", "spanned by"], &rows));
    }
    let t = d.totals;
    let _ = writeln!(out, "\ntotal {} (local {}, interaction {})", t.total, t.local, t.cross);
    out
}

pub fn spectrum(s: &SpectrumSummary<'_>) -> String {
    let mut out = String::new();
    let res: Vec<String> = s
        .residue
        .summands
        .iter()
        .map(|(c, n)| format!("{c}:{n}"))
        .collect();
    let _ = writeln!(out, "residue {} (total {})", res.join(" "), s.residue.total_dimension);
    let _ = writeln!(out, "hochschild dimension {}", s.hochschild_dimension);
    out.push('\n');
    let rows: Vec<Vec<String>> = s
        .blocks
        .iter()
        .map(|b| {
            vec![
                b.color.clone(),
                if b.operations.is_empty() { "-".into() } else { b.operations.join(",") },
                b.ambient_dimension.to_string(),
                b.coimage_dimension.to_string(),
                b.residue_dimension.to_string(),
                b.dimension.to_string(),
            ]
        })
        .collect();
    out.push_str(&table(&["color", "interaction ops", "ambient", "coimage", "residue", "dim"], &rows));
    let t = s.decomposition.totals;
    let _ = writeln!(
        out,
        "\ntotal dimension {} (local {}, interaction {})",
        s.total_dimension, t.local, t.cross
    );
    out
}

pub fn per_color(spectra: &std::collections::BTreeMap<String, SpectrumSet>) -> String {
    let rows: Vec<Vec<String>> = spectra.iter().map(|(c, s)| vec![c.clone(), set(s)]).collect();
    table(&["color", "spectrum"], &rows)
}

pub fn analytic(a: &AnalyticSpectrum) -> String {
    let mut out = String::new();
    if !a.per_color.is_empty() {
        out.push_str(&per_color(&a.per_color));
    }
    if !a.missing_distinguished.is_empty() {
        let _ = writeln!(out, "no distinguished map: {}", a.missing_distinguished.join(", "));
    }
    let _ = writeln!(out, "\nloops up to length {}", a.max_loop_length);
    if a.loops.is_empty() {
        out.push_str("none\n");
    } else {
        let rows: Vec<Vec<String>> = a
            .loops
            .iter()
            .map(|l| vec![l.base_color.clone(), l.operations.join(" then "), set(&l.spectrum)])
            .collect();
        out.push_str(&table(&["base", "operations", "spectrum"], &rows));
    }
    let _ = writeln!(out, "\ninteraction {}", set(&a.interaction));
    if !a.unrealized.is_empty() {
        let _ = writeln!(out, "unrealized {}", a.unrealized.join(", "));
    }
    let _ = writeln!(out, "union {}", set(&a.union));
    out
}

pub fn checks(reports: &[CheckReport]) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.details
                    .first()
                    .and_then(|d| d.strip_prefix("functor "))
                    .unwrap_or("-")
                    .to_string(),
                r.check.clone(),
                if r.pass { "pass" } else { "FAIL" }.to_string(),
                format!("{:.3e}", r.max_deviation),
            ]
        })
        .collect();
    let mut out = table(&["functor", "check", "result", "max deviation"], &rows);
    for r in reports.iter().filter(|r| !r.pass) {
        let _ = writeln!(out, "\n{} failed:", r.check);
        for d in &r.details {
            let _ = writeln!(out, "  {d}");
        }
    }
    out
}

pub fn validation(kind: &str, r: &ValidationReport) -> String {
    let mut out = String::new();
    if r.is_valid() {
        let _ = writeln!(out, "{kind} is valid ({} instances checked)", r.instances_checked);
    } else {
        let _ = writeln!(
            out,
            "{kind} has {} violation(s) in {} instances checked",
            r.violations.len(),
            r.instances_checked
        );
        let rows: Vec<Vec<String>> = r
            .violations
            .iter()
            .map(|v| vec![format!("{:?}", v.axiom), v.instance.clone(), format!("{:.3e}", v.discrepancy)])
            .collect();
        out.push_str(&table(&["axiom", "instance", "discrepancy"], &rows));
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
