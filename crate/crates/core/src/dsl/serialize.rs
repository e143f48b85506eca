//! Canonical `.qdm` writer.

use std::fmt::Write;

use crate::model::{DecisionModel, Direction, Pattern};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Writes `model` in canonical form: two-space indents, gateways then
/// patterns each sorted by id, branches in declaration order, LF endings.
pub fn serialize(model: &DecisionModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {} {} {{", model.area.as_str(), quote(&model.meta.title));
    let _ = writeln!(out, "  start -> {}", model.start);
    if let Some(v) = &model.meta.version {
        let _ = writeln!(out, "  version {}", quote(v));
    }
    for r in &model.meta.refs {
        let _ = writeln!(out, "  ref {}", quote(r));
    }
    for g in model.gateways.values() {
        let _ = writeln!(out, "  gateway {} kind={} question={} {{", g.id, g.kind.as_str(), quote(&g.question));
        for b in &g.branches {
            let _ = writeln!(out, "    branch {} when {} -> {}", b.label, quote(&b.condition), b.target);
        }
        out.push_str("  }\n");
    }
    for p in model.patterns.values() {
        write_pattern(&mut out, p);
    }
    out.push_str("}\n");
    out
}

fn write_pattern(out: &mut String, p: &Pattern) {
    let _ = writeln!(out, "  pattern {} name={} {{", p.id, quote(&p.name));
    if !p.summary.is_empty() {
        let _ = writeln!(out, "    summary {}", quote(&p.summary));
    }
    for (keyword, direction) in [("improves", Direction::Improves), ("degrades", Direction::Degrades)] {
        let attrs: Vec<&str> =
            p.impacts.iter().filter(|i| i.direction == direction).map(|i| i.attribute.as_str()).collect();
        if !attrs.is_empty() {
            let _ = writeln!(out, "    {keyword} {}", attrs.join(", "));
        }
    }
    for c in &p.constraints {
        let _ = writeln!(out, "    constraint {}", quote(c));
    }
    if !p.complements.is_empty() {
        let _ = writeln!(out, "    complements {}", p.complements.join(", "));
    }
    if let Some(next) = &p.next {
        let _ = writeln!(out, "    next -> {next}");
    }
    for r in &p.refs {
        let _ = writeln!(out, "    ref {}", quote(r));
    }
    if let Some(c) = &p.canonical {
        let _ = writeln!(out, "    canonical {c}");
    }
    out.push_str("  }\n");
}
