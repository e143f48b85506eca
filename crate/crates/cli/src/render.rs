//! Plain-text views.

use std::fmt::Write;

use anstyle::{AnsiColor, Style};
use qsa_core::dsl::Diagnostic;
use qsa_core::engine::{Recommendation, WeightVector};
use qsa_core::{DecisionModel, Pattern};

#[derive(Debug, Clone, Copy)]
pub struct Paint {
    pub enabled: bool,
}

impl Paint {
    fn apply(self, style: Style, text: &str) -> String {
        if self.enabled && !text.is_empty() {
            format!("{style}{text}{style:#}")
        } else {
            text.to_string()
        }
    }

    pub fn bold(self, text: &str) -> String {
        self.apply(Style::new().bold(), text)
    }

    pub fn good(self, text: &str) -> String {
        self.apply(AnsiColor::Green.on_default(), text)
    }

    pub fn bad(self, text: &str) -> String {
        self.apply(AnsiColor::Red.on_default(), text)
    }

    pub fn warn(self, text: &str) -> String {
        self.apply(AnsiColor::Yellow.on_default(), text)
    }

    pub fn dim(self, text: &str) -> String {
        self.apply(Style::new().dimmed(), text)
    }
}

pub struct AreaRow {
    pub area: String,
    pub title: String,
    pub patterns: usize,
}

pub fn area_table(rows: &[AreaRow], paint: Paint) -> String {
    let width = rows.iter().map(|r| r.area.len()).max().unwrap_or(0).max(4);
    let mut out = String::new();
    let header = format!("{:<width$}  {:>8}  {}", "AREA", "PATTERNS", "TITLE");
    let _ = writeln!(out, "{}", paint.bold(&header));
    for r in rows {
        let _ = writeln!(out, "{:<width$}  {:>8}  {}", r.area, r.patterns, r.title);
    }
    let total: usize = rows.iter().map(|r| r.patterns).sum();
    let _ = writeln!(out, "{:<width$}  {:>8}", "total", total);
    out
}

fn impact_lines(out: &mut String, indent: &str, improves: &[&str], degrades: &[&str], paint: Paint) {
    if !improves.is_empty() {
        let _ = writeln!(out, "{indent}{}", paint.good(&format!("+ {}", improves.join(", "))));
    }
    if !degrades.is_empty() {
        let _ = writeln!(out, "{indent}{}", paint.bad(&format!("- {}", degrades.join(", "))));
    }
}

pub fn model_view(model: &DecisionModel, paint: Paint) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({})", paint.bold(&model.meta.title), model.area);
    if let Some(v) = &model.meta.version {
        let _ = writeln!(out, "version {v}");
    }
    let _ = writeln!(out, "{} patterns, {} gateways, start {}", model.patterns.len(), model.gateways.len(), model.start);
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", paint.bold("Gateways"));
    for g in model.gateways.values() {
        let _ = writeln!(out, "  {} [{}] {}", g.id, g.kind, g.question);
        for b in &g.branches {
            let _ = writeln!(out, "    {} -> {}  {}", b.label, b.target, paint.dim(&format!("({})", b.condition)));
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", paint.bold("Patterns"));
    for p in model.patterns.values() {
        let _ = writeln!(out, "  {}  {}", p.id, p.name);
        let up: Vec<&str> = p.improved().collect();
        let down: Vec<&str> = p.degraded().collect();
        impact_lines(&mut out, "    ", &up, &down, paint);
        if let Some(next) = &p.next {
            let _ = writeln!(out, "    then {next}");
        }
    }
    out
}

pub fn pattern_view(p: &Pattern, paint: Paint) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({})", paint.bold(&p.name), p.id);
    let _ = writeln!(out, "area: {}", p.area);
    if !p.summary.is_empty() {
        let _ = writeln!(out, "{}", p.summary);
    }
    let up: Vec<&str> = p.improved().collect();
    let down: Vec<&str> = p.degraded().collect();
    impact_lines(&mut out, "", &up, &down, paint);
    for c in &p.constraints {
        let _ = writeln!(out, "{}", paint.warn(&format!("! {c}")));
    }
    if !p.complements.is_empty() {
        let _ = writeln!(out, "complements: {}", p.complements.join(", "));
    }
    if let Some(next) = &p.next {
        let _ = writeln!(out, "then: {next}");
    }
    if let Some(c) = &p.canonical {
        let _ = writeln!(out, "canonical: {c}");
    }
    if !p.refs.is_empty() {
        let _ = writeln!(out, "refs: {}", p.refs.join(", "));
    }
    out
}

pub fn weights_line(weights: &WeightVector) -> String {
    if weights.is_zero() {
        return "weights: none".to_string();
    }
    let parts: Vec<String> = weights.iter().map(|(k, w)| format!("{k}={w}")).collect();
    format!("weights: {}", parts.join(" "))
}

pub fn recommendation_table(model: &DecisionModel, weights: &WeightVector, recs: &[Recommendation], paint: Paint) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({})", paint.bold(&model.meta.title), model.area);
    let _ = writeln!(out, "{}", weights_line(weights));
    let noun = if recs.len() == 1 { "recommendation" } else { "recommendations" };
    let _ = writeln!(out, "{} {noun}", recs.len());
    for (i, r) in recs.iter().enumerate() {
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>2}. {}  score {}  {}", i + 1, paint.bold(&r.name), r.score, paint.dim(&r.pattern));
        let up: Vec<&str> = r.improves.iter().map(String::as_str).collect();
        let down: Vec<&str> = r.degrades.iter().map(String::as_str).collect();
        impact_lines(&mut out, "    ", &up, &down, paint);
        for c in &r.constraints {
            let _ = writeln!(out, "    {}", paint.warn(&format!("! {c}")));
        }
        if !r.complements.is_empty() {
            let _ = writeln!(out, "    complements: {}", r.complements.join(", "));
        }
        let _ = writeln!(out, "    {}", paint.dim(&format!("via {}", r.path.join(" > "))));
    }
    out
}

pub fn diagnostic_line(file: &str, d: &Diagnostic, paint: Paint) -> String {
    let sev = d.severity.as_str();
    let sev = if d.is_error() { paint.bad(sev) } else { paint.warn(sev) };
    format!("{file}:{}:{}: {sev}[{}]: {}", d.span.line, d.span.column, d.code, d.message)
}
