//! Graphviz export of a decision model.
//!
//! Gateways are diamonds labelled with their kind symbol (`X` exclusive,
//! `O` inclusive, `+` parallel), patterns rounded boxes with `+qa`/`−qa`
//! lines, constraints octagons hung off their pattern, complements
//! `dir=both` edges and conditional flows plain directed edges.

use std::fmt::Write;

use qsa_core::{DecisionModel, Direction, GatewayKind};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' | '\t' => out.push(' '),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Joins label lines; each line is escaped separately.
fn label(lines: &[String]) -> String {
    let escaped: Vec<String> = lines.iter().map(|l| {
        let q = quote(l);
        q[1..q.len() - 1].to_string()
    }).collect();
    format!("\"{}\"", escaped.join("\\n"))
}

fn symbol(kind: GatewayKind) -> &'static str {
    match kind {
        GatewayKind::Exclusive => "X",
        GatewayKind::Inclusive => "O",
        GatewayKind::Parallel => "+",
    }
}

pub fn export_dot(model: &DecisionModel) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "digraph {} {{", quote(model.area.as_str()));
    let _ = writeln!(w, "  graph [label={}, labelloc=t, rankdir=TB];", quote(&model.meta.title));
    let _ = writeln!(w, "  node [fontname=\"Helvetica\"];");
    let _ = writeln!(w, "  edge [fontname=\"Helvetica\", fontsize=10];");
    let _ = writeln!(w, "  \"__start\" [shape=circle, style=filled, fillcolor=black, label=\"\", width=0.2];");

    let mut ids: Vec<&str> = model.node_ids();
    ids.sort_unstable();
    for id in &ids {
        if let Some(g) = model.gateways.get(*id) {
            let lines = [symbol(g.kind).to_string(), g.id.clone(), g.question.clone()];
            let _ = writeln!(w, "  {} [shape=diamond, label={}];", quote(id), label(&lines));
        } else if let Some(p) = model.patterns.get(*id) {
            let mut lines = vec![p.name.clone()];
            for i in &p.impacts {
                let sign = match i.direction {
                    Direction::Improves => "+",
                    Direction::Degrades => "\u{2212}",
                };
                lines.push(format!("{sign}{}", i.attribute));
            }
            let _ = writeln!(w, "  {} [shape=box, style=rounded, label={}];", quote(id), label(&lines));
            for (n, c) in p.constraints.iter().enumerate() {
                let cid = format!("{id}#constraint-{}", n + 1);
                let _ = writeln!(w, "  {} [shape=octagon, fontsize=10, label={}];", quote(&cid), quote(c));
            }
        }
    }

    let _ = writeln!(w, "  \"__start\" -> {};", quote(&model.start));
    for id in &ids {
        if let Some(g) = model.gateways.get(*id) {
            for b in &g.branches {
                let _ = writeln!(
                    w,
                    "  {} -> {} [label={}, tooltip={}];",
                    quote(id),
                    quote(&b.target),
                    quote(&b.label),
                    quote(&b.condition)
                );
            }
        } else if let Some(p) = model.patterns.get(*id) {
            if let Some(next) = &p.next {
                let _ = writeln!(w, "  {} -> {};", quote(id), quote(next));
            }
            for n in 1..=p.constraints.len() {
                let cid = format!("{id}#constraint-{n}");
                let _ = writeln!(w, "  {} -> {} [style=dashed, arrowhead=none];", quote(id), quote(&cid));
            }
            for other in p.complements.iter().filter(|o| o.as_str() > *id) {
                let _ = writeln!(w, "  {} -> {} [dir=both, style=dotted];", quote(id), quote(other));
            }
        }
    }
    out.push_str("}\n");
    out
}
