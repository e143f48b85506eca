//! The `.qdm` authoring language.
//!
//! One model per file, line-oriented statements and `{}` blocks:
//!
//! ```text
//! model communication "demo" {
//!   start -> g1
//!   gateway g1 kind=exclusive question="Direct or collective?" {
//!     branch p2p when "two nodes" -> quantum-point-to-point
//!     branch multi when "many nodes" -> quantum-collective
//!   }
//!   pattern quantum-point-to-point name="Quantum Point-to-Point Communication" {
//!     improves performance, reliability
//!     degrades latency, scalability
//!     ref "catalog"
//!   }
//!   pattern quantum-collective name="Quantum Collective Communication" {
//!     improves scalability, performance, reusability
//!     degrades flexibility
//!     ref "catalog"
//!   }
//! }
//! ```
//!
//! Identifiers are lowercase-kebab, strings are double-quoted with `\"`,
//! `\\`, `\n`, `\t` and `\r` escapes, and `#` comments run to end of line.
//! QA lists accept canonical ids or vocabulary aliases (`fault recovery`);
//! aliases are normalized with a `qa-alias` warning.

mod lexer;
mod lint;
mod parser;
mod serialize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{DecisionModel, Severity, Vocabulary};

pub use lexer::MAX_DEPTH;
pub use lint::{lint, lint_with};
pub use serialize::serialize;

/// File extension for decision model documents.
pub const EXTENSION: &str = "qdm";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceSpan {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    /// At least 1.
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        SourceSpan { line: line.max(1), column: column.max(1), length: length.max(1) }
    }

    pub fn with_len(self, length: usize) -> Self {
        SourceSpan::new(self.line, self.column, length)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: SourceSpan,
    pub code: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: &str, span: SourceSpan, message: String) -> Self {
        Diagnostic { severity: Severity::Error, span, code: code.to_string(), message }
    }

    pub fn warning(code: &str, span: SourceSpan, message: String) -> Self {
        Diagnostic { severity: Severity::Warning, span, code: code.to_string(), message }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}[{}]: {}", self.span, self.severity.as_str(), self.code, self.message)
    }
}

/// A successfully parsed document together with its warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub model: DecisionModel,
    pub warnings: Vec<Diagnostic>,
}

/// Parses with the standard vocabulary.
pub fn parse(text: &str) -> Result<Parsed, Vec<Diagnostic>> {
    parse_with(text, &Vocabulary::standard())
}

pub fn parse_with(text: &str, vocabulary: &Vocabulary) -> Result<Parsed, Vec<Diagnostic>> {
    let outcome = parser::parse_document(text, vocabulary);
    if outcome.diagnostics.iter().any(Diagnostic::is_error) {
        return Err(outcome.diagnostics);
    }
    match outcome.model {
        Some(model) => Ok(Parsed { model, warnings: outcome.diagnostics }),
        None => Err(outcome.diagnostics),
    }
}

/// Like [`parse`] but accepts arbitrary bytes, reporting invalid UTF-8.
pub fn parse_bytes(bytes: &[u8]) -> Result<Parsed, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(vec![Diagnostic::error(
                "invalid-utf8",
                SourceSpan::new(line, column, 1),
                format!("invalid UTF-8 at byte {}", e.valid_up_to()),
            )])
        }
    }
}

fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (a.span.line, a.span.column, &a.code, &a.message)
            .cmp(&(b.span.line, b.span.column, &b.code, &b.message))
    });
}
