//! Rendering of classification results: a hand-built JSON emitter with a
//! fixed key order and fixed number format so identical inputs produce
//! identical bytes, a terminal text layout, and the curve CSV.
//!
//! Numbers are printed with 16 fractional digits of scientific notation,
//! enough to reconstruct every f64 bit for bit on parse.

use crate::builtin::BuiltinEntry;
use crate::conservative::{CurveMethod, Parameterization, PeriodCurve};
use crate::criteria::{ClassificationReport, Conclusion, CriterionVerdict, Expansion, Witness};
use crate::system::SystemSpec;
use serde::Deserialize;
use std::fmt::Write as _;

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn conclusion_str(c: Conclusion) -> &'static str {
    match c {
        Conclusion::Increasing => "increasing",
        Conclusion::Decreasing => "decreasing",
        Conclusion::IsochronousCandidate => "isochronous_candidate",
        Conclusion::Inconclusive => "inconclusive",
        Conclusion::NotACenter => "not_a_center",
    }
}

fn parameterization_str(p: Parameterization) -> &'static str {
    match p {
        Parameterization::Energy => "energy",
        Parameterization::Amplitude => "amplitude",
    }
}

fn method_str(m: CurveMethod) -> &'static str {
    match m {
        CurveMethod::Quadrature => "quadrature",
        CurveMethod::ReturnMap => "return_map",
    }
}

fn push_system(out: &mut String, indent: &str, system: &SystemSpec) {
    let _ = write!(
        out,
        "{indent}\"system\": {{\n\
         {indent}  \"f\": \"{}\",\n\
         {indent}  \"g\": \"{}\",\n\
         {indent}  \"gamma\": {},\n\
         {indent}  \"conservative\": {},\n\
         {indent}  \"derivatives_at_0\": {{\n\
         {indent}    \"f_prime\": {},\n\
         {indent}    \"f_double_prime\": {},\n\
         {indent}    \"g_prime\": {},\n\
         {indent}    \"g_double_prime\": {},\n\
         {indent}    \"g_triple_prime\": {}\n\
         {indent}  }}\n\
         {indent}}}",
        json_escape(system.f_text()),
        json_escape(system.g_text()),
        fmt_num(system.gamma()),
        system.is_conservative(),
        fmt_num(system.fp0()),
        fmt_num(system.fpp0()),
        fmt_num(system.gamma()),
        fmt_num(system.gpp0()),
        fmt_num(system.gppp0()),
    );
}

fn push_expansion(out: &mut String, indent: &str, e: &Expansion) {
    let _ = write!(
        out,
        "{indent}\"expansion\": {{\n\
         {indent}  \"t0\": {},\n\
         {indent}  \"q\": {},\n\
         {indent}  \"b\": {},\n\
         {indent}  \"k\": {}\n\
         {indent}}}",
        fmt_num(e.t0),
        fmt_num(e.q),
        fmt_num(e.b),
        fmt_num(e.k),
    );
}

fn push_witness(out: &mut String, w: &Witness) {
    let _ = write!(
        out,
        "{{\"x\": {}, \"value\": {}}}",
        fmt_num(w.x),
        fmt_num(w.value)
    );
}

fn push_criterion(out: &mut String, indent: &str, v: &CriterionVerdict) {
    let _ = write!(
        out,
        "{indent}{{\n\
         {indent}  \"name\": \"{}\",\n\
         {indent}  \"applicable\": {},\n\
         {indent}  \"conclusion\": \"{}\",\n\
         {indent}  \"witnesses\": [",
        json_escape(v.name),
        v.applicable,
        conclusion_str(v.conclusion),
    );
    if v.witnesses.is_empty() {
        out.push(']');
    } else {
        for (i, w) in v.witnesses.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n{indent}    ");
            push_witness(out, w);
        }
        let _ = write!(out, "\n{indent}  ]");
    }
    let _ = write!(
        out,
        ",\n{indent}  \"reason\": \"{}\"\n{indent}}}",
        json_escape(&v.reason)
    );
}

fn push_curve(out: &mut String, indent: &str, curve: &PeriodCurve) {
    let _ = write!(
        out,
        "{indent}\"curve\": {{\n\
         {indent}  \"parameterization\": \"{}\",\n\
         {indent}  \"method\": \"{}\",\n\
         {indent}  \"tolerance\": {},\n\
         {indent}  \"samples\": [",
        parameterization_str(curve.parameterization),
        method_str(curve.method),
        fmt_num(curve.tolerance),
    );
    for (i, s) in curve.samples.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let disp = match s.displacement {
            Some(d) => fmt_num(d),
            None => "null".to_string(),
        };
        let _ = write!(
            out,
            "{sep}\n{indent}    {{\"param\": {}, \"period\": {}, \"displacement\": {}}}",
            fmt_num(s.param),
            fmt_num(s.period),
            disp,
        );
    }
    if curve.samples.is_empty() {
        let _ = write!(out, "]\n{indent}}}");
    } else {
        let _ = write!(out, "\n{indent}  ]\n{indent}}}");
    }
}

/// Every document carries this marker as its first key, so consumers can
/// gate on the exact layout they were written against.
const SCHEMA_VERSION: &str = "1";

fn push_report_body(out: &mut String, indent: &str, system: &SystemSpec, r: &ClassificationReport) {
    push_system(out, indent, system);
    out.push_str(",\n");
    push_expansion(out, indent, &r.expansion);
    let crosscheck = match r.conservative_crosscheck {
        None => "null".to_string(),
        Some(b) => b.to_string(),
    };
    let _ = write!(
        out,
        ",\n{indent}\"conclusion\": \"{}\",\n\
         {indent}\"agreement\": {},\n\
         {indent}\"conservative_crosscheck\": {},\n\
         {indent}\"criteria\": [\n",
        conclusion_str(r.conclusion),
        r.agreement,
        crosscheck,
    );
    for (i, v) in r.criteria.iter().enumerate() {
        if i > 0 {
            out.push_str(",\n");
        }
        push_criterion(out, &format!("{indent}  "), v);
    }
    let _ = write!(out, "\n{indent}],\n");
    match &r.curve {
        Some(curve) => push_curve(out, indent, curve),
        None => {
            let _ = write!(out, "{indent}\"curve\": null");
        }
    }
}

/// Full classification as a JSON document.
pub fn render_report_json(system: &SystemSpec, report: &ClassificationReport) -> String {
    let mut out = String::with_capacity(4096);
    out.push_str("{\n");
    let _ = write!(out, "  \"schema_version\": \"{SCHEMA_VERSION}\",\n");
    push_report_body(&mut out, "  ", system, report);
    out.push_str("\n}\n");
    out
}

/// Full classification as terminal text.
pub fn render_report_text(system: &SystemSpec, report: &ClassificationReport) -> String {
    let mut out = String::with_capacity(2048);
    let _ = writeln!(
        out,
        "system: x'' + f(x) x' + g(x) = 0 with f = {}, g = {}",
        system.f_text(),
        system.g_text()
    );
    let _ = writeln!(
        out,
        "  gamma = {}  conservative: {}",
        fmt_num(system.gamma()),
        if system.is_conservative() { "yes" } else { "no" }
    );
    let e = &report.expansion;
    let _ = writeln!(
        out,
        "expansion: t0 = {}  q = {}  b = {}  k = {}",
        fmt_num(e.t0),
        fmt_num(e.q),
        fmt_num(e.b),
        fmt_num(e.k)
    );
    let _ = writeln!(out, "conclusion: {}", conclusion_str(report.conclusion));
    let _ = writeln!(
        out,
        "agreement with sampled curve: {}",
        if report.agreement { "yes" } else { "no" }
    );
    match report.conservative_crosscheck {
        None => {}
        Some(b) => {
            let _ = writeln!(
                out,
                "damping curvature pairing check: {}",
                if b { "satisfied" } else { "violated" }
            );
        }
    }
    let _ = writeln!(out, "criteria:");
    for v in &report.criteria {
        let status = if v.applicable {
            conclusion_str(v.conclusion)
        } else {
            "inapplicable"
        };
        let _ = writeln!(out, "  {:<20} {:<22} {}", v.name, status, v.reason);
    }
    match &report.curve {
        None => {
            let _ = writeln!(out, "curve: none (stopped before sampling)");
        }
        Some(curve) => {
            let _ = writeln!(
                out,
                "curve ({} sweep via {}, tolerance {}):",
                parameterization_str(curve.parameterization),
                method_str(curve.method),
                fmt_num(curve.tolerance)
            );
            for s in &curve.samples {
                let disp = match s.displacement {
                    Some(d) => format!("  displacement {}", fmt_num(d)),
                    None => String::new(),
                };
                let _ = writeln!(
                    out,
                    "  param {}  period {}{}",
                    fmt_num(s.param),
                    fmt_num(s.period),
                    disp
                );
            }
        }
    }
    out
}

/// Curve samples as CSV. The third column holds the first-return
/// displacement and stays empty for energy sweeps, where orbits close by
/// construction.
pub fn render_curve_csv(curve: &PeriodCurve) -> String {
    let mut out = String::from("param,T,phi\n");
    for s in &curve.samples {
        let _ = write!(out, "{},{},", fmt_num(s.param), fmt_num(s.period));
        if let Some(d) = s.displacement {
            out.push_str(&fmt_num(d));
        }
        out.push('\n');
    }
    out
}

fn push_entry_meta(out: &mut String, indent: &str, entry: &BuiltinEntry) {
    let _ = write!(
        out,
        "{indent}\"key\": \"{}\",\n\
         {indent}\"title\": \"{}\",\n\
         {indent}\"f\": \"{}\",\n\
         {indent}\"g\": \"{}\",\n\
         {indent}\"expected\": \"{}\",\n\
         {indent}\"provenance\": \"{}\"",
        json_escape(entry.key),
        json_escape(entry.title),
        json_escape(entry.f),
        json_escape(entry.g),
        conclusion_str(entry.expected),
        json_escape(entry.provenance),
    );
}

/// Catalog entry plus its full report as one JSON document.
pub fn render_builtin_json(
    entry: &BuiltinEntry,
    system: &SystemSpec,
    report: &ClassificationReport,
) -> String {
    let mut out = String::with_capacity(4096);
    out.push_str("{\n");
    let _ = write!(out, "  \"schema_version\": \"{SCHEMA_VERSION}\",\n");
    push_entry_meta(&mut out, "  ", entry);
    out.push_str(",\n  \"report\": {\n");
    push_report_body(&mut out, "    ", system, report);
    out.push_str("\n  }\n}\n");
    out
}

/// Catalog listing as a JSON document.
pub fn render_builtin_list_json(entries: &[BuiltinEntry]) -> String {
    let mut out = String::from("{\n");
    let _ = write!(out, "  \"schema_version\": \"{SCHEMA_VERSION}\",\n");
    out.push_str("  \"builtins\": [\n");
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            out.push_str(",\n");
        }
        out.push_str("    {\n");
        push_entry_meta(&mut out, "      ", e);
        out.push_str("\n    }");
    }
    out.push_str("\n  ]\n}\n");
    out
}

/// Catalog listing as terminal text.
pub fn render_builtin_list_text(entries: &[BuiltinEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = writeln!(
            out,
            "{:<20} f = {:<8} g = {:<12} expected {:<22} {}",
            e.key,
            e.f,
            e.g,
            conclusion_str(e.expected),
            e.title
        );
    }
    out
}

/// Deserialization mirror of the report JSON, for consumers that read the
/// documents back.
#[derive(Debug, Deserialize)]
pub struct ParsedReport {
    pub schema_version: String,
    pub system: ParsedSystem,
    pub expansion: Expansion,
    pub conclusion: Conclusion,
    pub agreement: bool,
    pub conservative_crosscheck: Option<bool>,
    pub criteria: Vec<ParsedCriterion>,
    pub curve: Option<PeriodCurve>,
}

#[derive(Debug, Deserialize)]
pub struct ParsedSystem {
    pub f: String,
    pub g: String,
    pub gamma: f64,
    pub conservative: bool,
    pub derivatives_at_0: ParsedDerivatives,
}

#[derive(Debug, Deserialize)]
pub struct ParsedDerivatives {
    pub f_prime: f64,
    pub f_double_prime: f64,
    pub g_prime: f64,
    pub g_double_prime: f64,
    pub g_triple_prime: f64,
}

#[derive(Debug, Deserialize)]
pub struct ParsedCriterion {
    pub name: String,
    pub applicable: bool,
    pub conclusion: Conclusion,
    pub witnesses: Vec<Witness>,
    pub reason: String,
}
