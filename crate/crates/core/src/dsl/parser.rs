//! Recursive-descent parser producing a [`DecisionModel`] plus diagnostics.

use std::collections::BTreeMap;

use super::lexer::{tokenize, Token, TokenKind};
use super::{sort_diagnostics, Diagnostic, SourceSpan};
use crate::model::{
    is_identifier, validate_model, Branch, DecisionModel, DesignArea, Direction, Gateway,
    GatewayKind, ModelMeta, Pattern, QualityImpact, Vocabulary,
};

/// Source positions kept for mapping findings back to the text and for lint.
#[derive(Debug, Default)]
pub(super) struct Layout {
    pub model_kw: Option<SourceSpan>,
    pub start: Option<SourceSpan>,
    pub nodes: BTreeMap<String, SourceSpan>,
    /// (source node, target node) -> span of the target token.
    pub edges: BTreeMap<(String, String), SourceSpan>,
    /// (pattern, other) -> span of the complements entry.
    pub complements: BTreeMap<(String, String), SourceSpan>,
    /// Top-level statements in source order: (rank, sort key, span).
    pub statements: Vec<(u8, String, SourceSpan)>,
    /// Pattern body statements in source order: (pattern, rank, span).
    pub pattern_items: Vec<(String, u8, SourceSpan)>,
    /// Header properties in source order: (node, property, span).
    pub properties: Vec<(String, String, SourceSpan)>,
}

pub(super) struct Outcome {
    pub model: Option<DecisionModel>,
    pub diagnostics: Vec<Diagnostic>,
    pub layout: Layout,
}

/// Ranks of top-level statements in canonical order.
pub(super) const RANK_START: u8 = 0;
pub(super) const RANK_VERSION: u8 = 1;
pub(super) const RANK_REF: u8 = 2;
pub(super) const RANK_GATEWAY: u8 = 3;
pub(super) const RANK_PATTERN: u8 = 4;

/// Canonical order of pattern body statements.
pub(super) const PATTERN_ITEMS: [&str; 8] =
    ["summary", "improves", "degrades", "constraint", "complements", "next", "ref", "canonical"];

struct Parser<'v> {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    /// Set once a lexical or syntax error is seen; validation is skipped then.
    broken: bool,
    vocabulary: &'v Vocabulary,
    layout: Layout,
}

pub(super) fn parse_document(text: &str, vocabulary: &Vocabulary) -> Outcome {
    let (tokens, lex_diags) = tokenize(text);
    let broken = !lex_diags.is_empty();
    let mut p = Parser { tokens, pos: 0, diags: lex_diags, broken, vocabulary, layout: Layout::default() };
    let mut model = p.document();

    if let Some(m) = model.as_mut() {
        for (from, to) in m.close_complements() {
            let span = p.layout.complements.get(&(from.clone(), to.clone())).copied();
            p.diags.push(Diagnostic::warning(
                "asymmetric-complements",
                span.unwrap_or_else(|| p.node_span(&from)),
                format!("`{from}` complements `{to}`; added the reverse link on `{to}`"),
            ));
        }
        if !p.broken {
            p.add_validation(m);
        }
    }

    let mut diagnostics = p.diags;
    sort_diagnostics(&mut diagnostics);
    diagnostics.dedup();
    Outcome { model, diagnostics, layout: p.layout }
}

impl Parser<'_> {
    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, offset: usize) -> &TokenKind {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].kind
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn syntax(&mut self, span: SourceSpan, message: String) {
        self.broken = true;
        self.diags.push(Diagnostic::error("syntax-error", span, message));
    }

    fn semantic(&mut self, code: &str, span: SourceSpan, message: String) {
        self.diags.push(Diagnostic::error(code, span, message));
    }

    fn unexpected(&mut self, expected: &str) {
        let tok = self.tokens[self.pos].clone();
        if tok.kind == TokenKind::Eof {
            self.broken = true;
            self.diags.push(Diagnostic::error(
                "unexpected-eof",
                tok.span,
                format!("expected {expected}, found end of file"),
            ));
        } else {
            self.syntax(tok.span, format!("expected {expected}, found {}", tok.kind.describe()));
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == TokenKind::Newline {
            self.advance();
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), TokenKind::Word(w) if w == word)
    }

    fn expect_word(&mut self, what: &str) -> Option<(String, SourceSpan)> {
        if let TokenKind::Word(w) = self.peek() {
            let w = w.clone();
            let span = self.advance().span;
            Some((w, span))
        } else {
            self.unexpected(what);
            None
        }
    }

    fn expect_string(&mut self, what: &str) -> Option<(String, SourceSpan)> {
        if let TokenKind::Str(s) = self.peek() {
            let s = s.clone();
            let span = self.advance().span;
            Some((s, span))
        } else {
            self.unexpected(what);
            None
        }
    }

    fn expect_ident(&mut self, what: &str) -> Option<(String, SourceSpan)> {
        let (w, span) = self.expect_word(what)?;
        if !is_identifier(&w) {
            self.semantic("invalid-id", span, format!("`{w}` is not a lowercase-kebab identifier"));
        }
        Some((w, span))
    }

    /// Statement terminator: newline, or a closing brace / end of file left
    /// for the caller.
    fn end_of_line(&mut self) {
        match self.peek() {
            TokenKind::Newline => {
                self.advance();
            }
            TokenKind::RBrace | TokenKind::Eof => {}
            _ => {
                self.unexpected("end of line");
                self.recover();
            }
        }
    }

    /// Skips the rest of a malformed statement, including any block it opens.
    /// Stops before a `}` that closes the enclosing block.
    fn recover(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                TokenKind::Eof => return,
                TokenKind::Newline if depth == 0 => {
                    self.advance();
                    return;
                }
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                    if depth == 0 {
                        self.advance();
                        self.end_of_line();
                        return;
                    }
                }
                _ => {}
            }
            self.advance();
        }
    }

    fn node_span(&self, id: &str) -> SourceSpan {
        self.layout
            .nodes
            .get(id)
            .or(self.layout.model_kw.as_ref())
            .copied()
            .unwrap_or(SourceSpan::new(1, 1, 1))
    }

    fn document(&mut self) -> Option<DecisionModel> {
        self.skip_newlines();
        if !self.is_word("model") {
            self.unexpected("`model`");
            return None;
        }
        let kw = self.advance().span;
        self.layout.model_kw = Some(kw);

        let area = match self.expect_word("design area") {
            Some((w, span)) => match w.parse::<DesignArea>() {
                Ok(a) => Some(a),
                Err(_) => {
                    let known: Vec<&str> = DesignArea::ALL.iter().map(|a| a.as_str()).collect();
                    self.semantic(
                        "unknown-area",
                        span,
                        format!("unknown design area `{w}`; expected one of {}", known.join(", ")),
                    );
                    None
                }
            },
            None => None,
        };
        let title = self.expect_string("model title").map(|(s, _)| s).unwrap_or_default();
        if !self.eat(&TokenKind::LBrace) {
            self.unexpected("`{`");
            return None;
        }
        self.end_of_line();

        let area_or_placeholder = area.unwrap_or(DesignArea::Communication);
        let mut model = DecisionModel {
            area: area_or_placeholder,
            start: String::new(),
            gateways: BTreeMap::new(),
            patterns: BTreeMap::new(),
            meta: ModelMeta { title, version: None, refs: Vec::new() },
        };
        let mut seen_start = false;

        loop {
            self.skip_newlines();
            match self.peek().clone() {
                TokenKind::RBrace => {
                    self.advance();
                    break;
                }
                TokenKind::Eof => {
                    self.unexpected("`}` closing the model");
                    break;
                }
                TokenKind::Word(w) => match w.as_str() {
                    "start" => {
                        let span = self.advance().span;
                        if !self.eat(&TokenKind::Arrow) {
                            self.unexpected("`->`");
                            self.recover();
                            continue;
                        }
                        if let Some((target, tspan)) = self.expect_ident("start node") {
                            if seen_start {
                                self.semantic("duplicate-property", span, "`start` is given twice".into());
                            } else {
                                model.start = target;
                                self.layout.start = Some(tspan);
                            }
                            seen_start = true;
                            self.layout.statements.push((RANK_START, String::new(), span));
                            self.end_of_line();
                        } else {
                            self.recover();
                        }
                    }
                    "version" => {
                        let span = self.advance().span;
                        if let Some((v, _)) = self.expect_string("version string") {
                            if model.meta.version.is_some() {
                                self.semantic("duplicate-property", span, "`version` is given twice".into());
                            }
                            model.meta.version = Some(v);
                            self.layout.statements.push((RANK_VERSION, String::new(), span));
                            self.end_of_line();
                        } else {
                            self.recover();
                        }
                    }
                    "ref" => {
                        let span = self.advance().span;
                        if let Some((r, _)) = self.expect_string("reference string") {
                            model.meta.refs.push(r);
                            self.layout.statements.push((RANK_REF, String::new(), span));
                            self.end_of_line();
                        } else {
                            self.recover();
                        }
                    }
                    "gateway" => self.gateway(&mut model),
                    "pattern" => self.pattern(&mut model),
                    _ => {
                        let span = self.span();
                        self.syntax(
                            span,
                            format!("unknown statement `{w}`; expected start, version, ref, gateway or pattern"),
                        );
                        self.recover();
                    }
                },
                _ => {
                    self.unexpected("a statement");
                    self.recover();
                }
            }
        }

        self.skip_newlines();
        if *self.peek() != TokenKind::Eof {
            let span = self.span();
            self.syntax(span, "only one model is allowed per document".into());
        }

        if !seen_start {
            self.semantic("missing-start", kw, "model has no `start -> <node>` statement".into());
        }
        area.map(|_| model)
    }

    /// Parses `name=value` pairs up to the opening brace.
    fn properties(&mut self, node: &str) -> Vec<(String, SourceSpan, Token)> {
        let mut props = Vec::new();
        while let (TokenKind::Word(name), TokenKind::Eq) = (self.peek().clone(), self.peek_at(1).clone()) {
            let span = self.advance().span;
            self.advance();
            let value = self.advance();
            match value.kind {
                TokenKind::Word(_) | TokenKind::Str(_) => {
                    if props.iter().any(|(n, _, _)| n == &name) {
                        self.semantic("duplicate-property", span, format!("`{name}` is given twice"));
                    } else {
                        self.layout.properties.push((node.to_string(), name.clone(), span));
                        props.push((name, span, value));
                    }
                }
                other => {
                    self.syntax(value.span, format!("expected a value for `{name}`, found {}", other.describe()));
                }
            }
        }
        props
    }

    fn claim_id(&mut self, model: &DecisionModel, id: &str, span: SourceSpan) -> bool {
        if model.contains(id) || self.layout.nodes.contains_key(id) {
            self.semantic("duplicate-id", span, format!("`{id}` is already defined"));
            false
        } else {
            self.layout.nodes.insert(id.to_string(), span);
            true
        }
    }

    fn gateway(&mut self, model: &mut DecisionModel) {
        let kw = self.advance().span;
        let Some((id, id_span)) = self.expect_ident("gateway id") else {
            self.recover();
            return;
        };
        let fresh = self.claim_id(model, &id, id_span);
        self.layout.statements.push((RANK_GATEWAY, id.clone(), kw));

        let mut kind = None;
        let mut question = None;
        for (name, span, value) in self.properties(&id) {
            match (name.as_str(), &value.kind) {
                ("kind", TokenKind::Word(k) | TokenKind::Str(k)) => match GatewayKind::parse(k) {
                    Some(parsed) => kind = Some(parsed),
                    None => {
                        self.semantic(
                            "unknown-gateway-kind",
                            value.span,
                            format!("unknown gateway kind `{k}`; expected inclusive, exclusive or parallel"),
                        );
                        // Inclusive accepts any branch count, so no follow-on findings.
                        kind = Some(GatewayKind::Inclusive);
                    }
                },
                ("question", TokenKind::Str(q)) => question = Some(q.clone()),
                ("question", _) => {
                    self.semantic("invalid-property", value.span, "`question` must be a string".into())
                }
                _ => self.semantic("unknown-property", span, format!("gateways have no `{name}` property")),
            }
        }
        if kind.is_none() {
            self.semantic("missing-property", id_span, format!("gateway `{id}` needs `kind=`"));
        }
        if question.is_none() {
            self.semantic("missing-property", id_span, format!("gateway `{id}` needs `question=`"));
        }
        if !self.eat(&TokenKind::LBrace) {
            self.unexpected("`{`");
            self.recover();
            return;
        }
        self.end_of_line();

        let mut gateway = Gateway::new(id.clone(), kind.unwrap_or(GatewayKind::Inclusive), question.unwrap_or_default());
        loop {
            self.skip_newlines();
            match self.peek().clone() {
                TokenKind::RBrace => {
                    self.advance();
                    self.end_of_line();
                    break;
                }
                TokenKind::Eof => {
                    self.unexpected("`}` closing the gateway");
                    break;
                }
                TokenKind::Word(w) if w == "branch" => {
                    if let Some(branch) = self.branch(&id) {
                        gateway.branches.push(branch);
                    }
                }
                _ => {
                    self.unexpected("`branch` or `}`");
                    self.recover();
                }
            }
        }
        if fresh {
            model.gateways.insert(id, gateway);
        }
    }

    fn branch(&mut self, gateway: &str) -> Option<Branch> {
        self.advance();
        let result = (|| {
            let (label, label_span) = self.expect_word("branch label")?;
            if !is_identifier(&label) {
                self.semantic("invalid-label", label_span, format!("`{label}` is not a lowercase-kebab label"));
            }
            if !self.is_word("when") {
                self.unexpected("`when`");
                return None;
            }
            self.advance();
            let (condition, _) = self.expect_string("branch condition")?;
            if !self.eat(&TokenKind::Arrow) {
                self.unexpected("`->`");
                return None;
            }
            let (target, tspan) = self.expect_ident("branch target")?;
            self.layout.edges.entry((gateway.to_string(), target.clone())).or_insert(tspan);
            Some(Branch { label, condition, target })
        })();
        if result.is_some() {
            self.end_of_line();
        } else {
            self.recover();
        }
        result
    }

    fn pattern(&mut self, model: &mut DecisionModel) {
        let kw = self.advance().span;
        let Some((id, id_span)) = self.expect_ident("pattern id") else {
            self.recover();
            return;
        };
        let fresh = self.claim_id(model, &id, id_span);
        self.layout.statements.push((RANK_PATTERN, id.clone(), kw));

        let mut pattern = Pattern::new(id.clone(), String::new(), model.area);
        let mut named = false;
        for (name, span, value) in self.properties(&id) {
            match (name.as_str(), &value.kind) {
                ("name", TokenKind::Str(n)) => {
                    pattern.name = n.clone();
                    named = true;
                }
                ("name", _) => self.semantic("invalid-property", value.span, "`name` must be a string".into()),
                _ => self.semantic("unknown-property", span, format!("patterns have no `{name}` property")),
            }
        }
        if !named {
            self.semantic("missing-property", id_span, format!("pattern `{id}` needs `name=`"));
        }
        if !self.eat(&TokenKind::LBrace) {
            self.unexpected("`{`");
            self.recover();
            return;
        }
        self.end_of_line();

        let mut improves = Vec::new();
        let mut degrades = Vec::new();
        let mut once: Vec<&'static str> = Vec::new();
        loop {
            self.skip_newlines();
            let (word, span) = match self.peek().clone() {
                TokenKind::RBrace => {
                    self.advance();
                    self.end_of_line();
                    break;
                }
                TokenKind::Eof => {
                    self.unexpected("`}` closing the pattern");
                    break;
                }
                TokenKind::Word(w) => (w, self.span()),
                _ => {
                    self.unexpected("a pattern statement or `}`");
                    self.recover();
                    continue;
                }
            };
            let Some(rank) = PATTERN_ITEMS.iter().position(|k| *k == word) else {
                self.syntax(
                    span,
                    format!("unknown pattern statement `{word}`; expected one of {}", PATTERN_ITEMS.join(", ")),
                );
                self.recover();
                continue;
            };
            self.advance();
            let keyword = PATTERN_ITEMS[rank];
            if matches!(keyword, "summary" | "next" | "canonical") {
                if once.contains(&keyword) {
                    self.semantic("duplicate-property", span, format!("`{keyword}` is given twice"));
                }
                once.push(keyword);
            }
            self.layout.pattern_items.push((id.clone(), rank as u8, span));
            let ok = match keyword {
                "summary" => self.expect_string("summary text").map(|(s, _)| pattern.summary = s).is_some(),
                "improves" => self.qa_list(&mut improves),
                "degrades" => self.qa_list(&mut degrades),
                "constraint" => self.expect_string("constraint text").map(|(s, _)| pattern.constraints.push(s)).is_some(),
                "complements" => self.complements(&id, &mut pattern.complements),
                "next" => {
                    if self.eat(&TokenKind::Arrow) {
                        self.expect_ident("next node").map(|(t, tspan)| {
                            self.layout.edges.entry((id.clone(), t.clone())).or_insert(tspan);
                            pattern.next = Some(t);
                        }).is_some()
                    } else {
                        self.unexpected("`->`");
                        false
                    }
                }
                "ref" => self.expect_string("reference string").map(|(s, _)| pattern.refs.push(s)).is_some(),
                "canonical" => self.expect_ident("canonical id").map(|(c, _)| pattern.canonical = Some(c)).is_some(),
                _ => unreachable!("keyword table covers every rank"),
            };
            if ok {
                self.end_of_line();
            } else {
                self.recover();
            }
        }

        pattern.impacts = improves
            .into_iter()
            .map(|a| QualityImpact { attribute: a, direction: Direction::Improves })
            .chain(degrades.into_iter().map(|a| QualityImpact { attribute: a, direction: Direction::Degrades }))
            .collect();
        pattern.complements.sort();
        pattern.complements.dedup();
        if fresh {
            model.patterns.insert(id, pattern);
        }
    }

    /// Comma-separated QA terms; a term is a quoted string or a run of words.
    fn qa_list(&mut self, out: &mut Vec<String>) -> bool {
        loop {
            let (term, span) = match self.peek().clone() {
                TokenKind::Str(s) => (s, self.advance().span),
                TokenKind::Word(first) => {
                    let start = self.advance().span;
                    let mut words = vec![first];
                    let mut end = start;
                    while let TokenKind::Word(w) = self.peek().clone() {
                        words.push(w);
                        end = self.advance().span;
                    }
                    let len = if end.line == start.line { end.column + end.length - start.column } else { start.length };
                    (words.join(" "), start.with_len(len))
                }
                _ => {
                    self.unexpected("a quality attribute");
                    return false;
                }
            };
            match self.vocabulary.resolve(&term) {
                Some(resolved) => {
                    if resolved.via_alias {
                        self.diags.push(Diagnostic::warning(
                            "qa-alias",
                            span,
                            format!("`{term}` is an alias; write `{}`", resolved.ids.join(", ")),
                        ));
                    }
                    out.extend(resolved.ids);
                }
                None => self.semantic("unknown-qa", span, format!("unknown quality attribute `{term}`")),
            }
            if !self.eat(&TokenKind::Comma) {
                return true;
            }
        }
    }

    fn complements(&mut self, id: &str, out: &mut Vec<String>) -> bool {
        loop {
            let Some((other, span)) = self.expect_ident("pattern id") else {
                return false;
            };
            self.layout.complements.entry((id.to_string(), other.clone())).or_insert(span);
            out.push(other);
            if !self.eat(&TokenKind::Comma) {
                return true;
            }
        }
    }

    fn add_validation(&mut self, model: &DecisionModel) {
        let report = validate_model(model, self.vocabulary);
        for f in report.findings {
            // Parse reports these itself with better spans.
            if f.code == "missing-start" && self.layout.start.is_none() {
                continue;
            }
            let span = match (&f.node, &f.related) {
                (Some(node), Some(rel)) => self
                    .layout
                    .edges
                    .get(&(node.clone(), rel.clone()))
                    .or_else(|| self.layout.complements.get(&(node.clone(), rel.clone())))
                    .copied()
                    .unwrap_or_else(|| self.node_span(node)),
                (Some(node), None) => self.node_span(node),
                (None, _) if f.code == "missing-start" => {
                    self.layout.start.unwrap_or_else(|| self.node_span(""))
                }
                (None, _) => self.node_span(""),
            };
            self.diags.push(Diagnostic { severity: f.severity, span, code: f.code, message: f.message });
        }
    }
}
