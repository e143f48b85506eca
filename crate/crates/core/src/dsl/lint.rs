//! Style checks layered over the parser.

use super::parser::{parse_document, PATTERN_ITEMS};
use super::{sort_diagnostics, Diagnostic};
use crate::model::Vocabulary;

/// Parse diagnostics plus ordering warnings, using the standard vocabulary.
pub fn lint(text: &str) -> Vec<Diagnostic> {
    lint_with(text, &Vocabulary::standard())
}

pub fn lint_with(text: &str, vocabulary: &Vocabulary) -> Vec<Diagnostic> {
    let outcome = parse_document(text, vocabulary);
    let layout = &outcome.layout;
    let mut diags = outcome.diagnostics;

    let mut prev: Option<(u8, &str)> = None;
    for (rank, key, span) in &layout.statements {
        let here = (*rank, key.as_str());
        if let Some(p) = prev {
            if here < p {
                let what = if key.is_empty() { "statement".to_string() } else { format!("`{key}`") };
                diags.push(Diagnostic::warning(
                    "non-canonical-order",
                    *span,
                    format!("{what} belongs earlier: order is start, version, ref, gateways by id, patterns by id"),
                ));
                continue;
            }
        }
        prev = Some(here);
    }

    let mut last: Option<(&str, u8)> = None;
    for (pattern, rank, span) in &layout.pattern_items {
        if let Some((p, r)) = last {
            if p == pattern && *rank < r {
                diags.push(Diagnostic::warning(
                    "non-canonical-order",
                    *span,
                    format!("`{}` belongs before `{}`", PATTERN_ITEMS[*rank as usize], PATTERN_ITEMS[r as usize]),
                ));
                continue;
            }
        }
        last = Some((pattern, *rank));
    }

    let mut seen_question: Option<&str> = None;
    for (node, prop, span) in &layout.properties {
        if prop == "question" {
            seen_question = Some(node);
        } else if prop == "kind" && seen_question == Some(node.as_str()) {
            diags.push(Diagnostic::warning("non-canonical-order", *span, "`kind` belongs before `question`".into()));
        }
    }

    sort_diagnostics(&mut diags);
    diags
}
