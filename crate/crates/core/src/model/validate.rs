//! Structural validation, reachability and the QA inverse index.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{DecisionModel, Direction, GatewayKind, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
    pub message: String,
    /// Second node involved, e.g. the missing target of a dangling edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub related: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("model cannot be traversed: {}", codes.join(", "))]
    Unvalidated { codes: Vec<String> },
}

/// Codes that make traversal from `start` ill-defined.
const STRUCTURAL: [&str; 4] = ["missing-start", "dangling-target", "cycle", "duplicate-node"];

/// `[a-z][a-z0-9-]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')
}

struct Findings(Vec<Finding>);

impl Findings {
    fn push(&mut self, severity: Severity, code: &str, node: Option<&str>, message: String) {
        self.0.push(Finding {
            severity,
            code: code.to_string(),
            node: node.map(str::to_string),
            message,
            related: None,
        });
    }

    fn error(&mut self, code: &str, node: &str, message: String) {
        self.push(Severity::Error, code, Some(node), message);
    }

    fn warning(&mut self, code: &str, node: &str, message: String) {
        self.push(Severity::Warning, code, Some(node), message);
    }

    fn related(&mut self, related: &str) {
        if let Some(last) = self.0.last_mut() {
            last.related = Some(related.to_string());
        }
    }
}

/// Reports every invariant violation in `model`.
///
/// Findings are sorted by node id (model-level findings first), then code.
pub fn validate_model(model: &DecisionModel, vocabulary: &Vocabulary) -> ValidationReport {
    let mut out = Findings(Vec::new());

    for (key, g) in &model.gateways {
        if key != &g.id {
            out.error("key-mismatch", &g.id, format!("gateway `{}` is stored under key `{key}`", g.id));
        }
        if !is_identifier(&g.id) {
            out.error("invalid-id", &g.id, format!("gateway id `{}` is not lowercase-kebab", g.id));
        }
        if model.patterns.contains_key(&g.id) {
            out.error("duplicate-node", &g.id, format!("`{}` names both a gateway and a pattern", g.id));
        }
        match g.kind {
            GatewayKind::Exclusive if g.branches.len() < 2 => out.error(
                "exclusive-needs-two",
                &g.id,
                format!("exclusive gateway `{}` has {} branch(es); needs at least 2", g.id, g.branches.len()),
            ),
            GatewayKind::Inclusive | GatewayKind::Parallel if g.branches.is_empty() => out.error(
                "gateway-needs-branch",
                &g.id,
                format!("{} gateway `{}` has no branches", g.kind, g.id),
            ),
            _ => {}
        }
        let mut labels = BTreeSet::new();
        for b in &g.branches {
            if !is_identifier(&b.label) {
                out.error("invalid-label", &g.id, format!("branch label `{}` is not lowercase-kebab", b.label));
            }
            if !labels.insert(b.label.as_str()) {
                out.error("duplicate-branch", &g.id, format!("gateway `{}` repeats branch label `{}`", g.id, b.label));
            }
            if !model.contains(&b.target) {
                out.error(
                    "dangling-target",
                    &g.id,
                    format!("branch `{}` targets undefined node `{}`", b.label, b.target),
                );
                out.related(&b.target);
            }
        }
    }

    for (key, p) in &model.patterns {
        if key != &p.id {
            out.error("key-mismatch", &p.id, format!("pattern `{}` is stored under key `{key}`", p.id));
        }
        if !is_identifier(&p.id) {
            out.error("invalid-id", &p.id, format!("pattern id `{}` is not lowercase-kebab", p.id));
        }
        if p.area != model.area {
            out.error(
                "area-mismatch",
                &p.id,
                format!("pattern `{}` belongs to `{}` but the model is `{}`", p.id, p.area, model.area),
            );
        }
        if p.name.trim().is_empty() {
            out.error("empty-name", &p.id, format!("pattern `{}` has no name", p.id));
        }
        if let Some(next) = &p.next {
            if !model.contains(next) {
                out.error("dangling-target", &p.id, format!("`next` targets undefined node `{next}`"));
                out.related(next);
            }
        }
        let mut seen: BTreeMap<&str, Direction> = BTreeMap::new();
        for impact in &p.impacts {
            if !vocabulary.contains(&impact.attribute) {
                out.error(
                    "unknown-attribute",
                    &p.id,
                    format!("quality attribute `{}` is not in the vocabulary", impact.attribute),
                );
            }
            match seen.get(impact.attribute.as_str()) {
                Some(d) if *d != impact.direction => out.error(
                    "conflicting-impact",
                    &p.id,
                    format!("pattern `{}` both improves and degrades `{}`", p.id, impact.attribute),
                ),
                Some(_) => out.warning(
                    "duplicate-impact",
                    &p.id,
                    format!("`{}` is listed twice as {}", impact.attribute, impact.direction.as_str()),
                ),
                None => {
                    seen.insert(&impact.attribute, impact.direction);
                }
            }
        }
        for other in &p.complements {
            if other == &p.id {
                out.error("self-complement", &p.id, format!("pattern `{}` complements itself", p.id));
            } else if let Some(q) = model.patterns.get(other) {
                if !q.complements.contains(&p.id) {
                    out.warning(
                        "asymmetric-complements",
                        &p.id,
                        format!("`{}` complements `{other}` but not the reverse", p.id),
                    );
                    out.related(other);
                }
            } else {
                out.error("unknown-complement", &p.id, format!("complements unknown pattern `{other}`"));
                out.related(other);
            }
        }
        if p.refs.is_empty() {
            out.warning("missing-provenance", &p.id, format!("pattern `{}` has no `ref`", p.id));
        }
    }

    if !model.contains(&model.start) {
        out.push(
            Severity::Error,
            "missing-start",
            None,
            format!("start node `{}` is not defined", model.start),
        );
    } else {
        let reached = reach(model);
        for id in model.node_ids() {
            if !reached.contains(id) {
                out.error("unreachable-node", id, format!("`{id}` is not reachable from start"));
            }
        }
    }

    for (from, to) in back_edges(model) {
        out.error("cycle", &from, format!("edge `{from}` -> `{to}` closes a cycle"));
        out.related(&to);
    }

    let mut findings = out.0;
    findings.sort_by(|a, b| {
        (&a.node, &a.code, &a.message).cmp(&(&b.node, &b.code, &b.message))
    });
    let ok = !findings.iter().any(|f| f.severity == Severity::Error);
    ValidationReport { ok, findings }
}

/// Node ids reachable from `start` over existing edges.
fn reach(model: &DecisionModel) -> BTreeSet<&str> {
    let mut seen = BTreeSet::new();
    let Some(start) = model.node(&model.start) else {
        return seen;
    };
    let mut queue = VecDeque::from([start.id()]);
    seen.insert(start.id());
    while let Some(id) = queue.pop_front() {
        let Some(node) = model.node(id) else { continue };
        for succ in node.successors() {
            if model.contains(succ) && seen.insert(succ) {
                queue.push_back(succ);
            }
        }
    }
    seen
}

/// Back edges found by a depth-first search rooted at every node in id order.
fn back_edges(model: &DecisionModel) -> Vec<(String, String)> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    let mut found = Vec::new();
    for root in model.node_ids() {
        if marks.contains_key(root) {
            continue;
        }
        // (node, index of next successor to visit)
        let mut stack: Vec<(&str, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Open);
        while let Some(&mut (id, ref mut idx)) = stack.last_mut() {
            let succs = model.node(id).map(|n| n.successors()).unwrap_or_default();
            if *idx < succs.len() {
                let succ = succs[*idx];
                *idx += 1;
                if !model.contains(succ) {
                    continue;
                }
                match marks.get(succ) {
                    Some(Mark::Open) => found.push((id.to_string(), succ.to_string())),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(succ, Mark::Open);
                        stack.push((succ, 0));
                    }
                }
            } else {
                marks.insert(id, Mark::Done);
                stack.pop();
            }
        }
    }
    found
}

/// Fails when the model cannot be walked from `start`.
pub(crate) fn check_traversable(model: &DecisionModel) -> Result<(), ModelError> {
    let mut codes: Vec<String> = Vec::new();
    if !model.contains(&model.start) {
        codes.push("missing-start".into());
    }
    let dangling = model.gateways.values().flat_map(|g| g.branches.iter().map(|b| &b.target))
        .chain(model.patterns.values().filter_map(|p| p.next.as_ref()))
        .any(|t| !model.contains(t));
    if dangling {
        codes.push("dangling-target".into());
    }
    if model.gateways.keys().any(|k| model.patterns.contains_key(k)) {
        codes.push("duplicate-node".into());
    }
    if !back_edges(model).is_empty() {
        codes.push("cycle".into());
    }
    debug_assert!(codes.iter().all(|c| STRUCTURAL.contains(&c.as_str())));
    if codes.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Unvalidated { codes })
    }
}

/// [`check_traversable`] plus the gateway arity rules sessions rely on.
pub(crate) fn check_executable(model: &DecisionModel) -> Result<(), ModelError> {
    let mut codes = match check_traversable(model) {
        Ok(()) => Vec::new(),
        Err(ModelError::Unvalidated { codes }) => codes,
    };
    for g in model.gateways.values() {
        let code = if g.branches.is_empty() {
            Some("gateway-needs-branch")
        } else if g.kind == GatewayKind::Exclusive && g.branches.len() < 2 {
            Some("exclusive-needs-two")
        } else if g.branches.iter().enumerate().any(|(i, b)| g.branches[..i].iter().any(|o| o.label == b.label)) {
            Some("duplicate-branch")
        } else {
            None
        };
        if let Some(code) = code {
            if !codes.iter().any(|c| c == code) {
                codes.push(code.to_string());
            }
        }
    }
    if codes.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Unvalidated { codes })
    }
}

/// Pattern ids reachable from start via any branch or `next` path, ascending.
pub fn reachable_patterns(model: &DecisionModel) -> Result<BTreeSet<String>, ModelError> {
    check_traversable(model)?;
    Ok(reach(model)
        .into_iter()
        .filter(|id| model.patterns.contains_key(*id))
        .map(str::to_string)
        .collect())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaUsage {
    pub improved_by: BTreeSet<String>,
    pub degraded_by: BTreeSet<String>,
}

/// Inverse index attribute -> patterns improving / degrading it.
pub fn qa_usage(model: &DecisionModel) -> BTreeMap<String, QaUsage> {
    let mut index: BTreeMap<String, QaUsage> = BTreeMap::new();
    for p in model.patterns.values() {
        for impact in &p.impacts {
            let entry = index.entry(impact.attribute.clone()).or_default();
            match impact.direction {
                Direction::Improves => entry.improved_by.insert(p.id.clone()),
                Direction::Degrades => entry.degraded_by.insert(p.id.clone()),
            };
        }
    }
    index
}
