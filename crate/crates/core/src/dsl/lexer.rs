//! Tokenizer for `.qdm` documents.

use super::{Diagnostic, SourceSpan};

/// Deepest `{` nesting accepted.
pub const MAX_DEPTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    Arrow,
    Eq,
    Comma,
    Newline,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Str(_) => "string".to_string(),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::Arrow => "`->`".to_string(),
            TokenKind::Eq => "`=`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Newline => "end of line".to_string(),
            TokenKind::Eof => "end of file".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn at(&self, len: usize) -> SourceSpan {
        SourceSpan::new(self.line, self.column, len)
    }
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

/// Splits `text` into tokens. Lexical problems become diagnostics and the
/// offending characters are skipped, so the token stream always ends in `Eof`.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { chars: text.chars().peekable(), line: 1, column: 1 };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut depth = 0usize;

    while let Some(c) = cur.peek() {
        let start = cur.at(1);
        match c {
            ' ' | '\t' | '\r' => {
                cur.bump();
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            '\n' => {
                cur.bump();
                tokens.push(Token { kind: TokenKind::Newline, span: start });
            }
            '{' => {
                cur.bump();
                depth += 1;
                if depth > MAX_DEPTH {
                    diags.push(Diagnostic::error(
                        "nesting-too-deep",
                        start,
                        format!("blocks nest deeper than {MAX_DEPTH} levels"),
                    ));
                    break;
                }
                tokens.push(Token { kind: TokenKind::LBrace, span: start });
            }
            '}' => {
                cur.bump();
                depth = depth.saturating_sub(1);
                tokens.push(Token { kind: TokenKind::RBrace, span: start });
            }
            '=' => {
                cur.bump();
                tokens.push(Token { kind: TokenKind::Eq, span: start });
            }
            ',' => {
                cur.bump();
                tokens.push(Token { kind: TokenKind::Comma, span: start });
            }
            '-' => {
                cur.bump();
                if cur.peek() == Some('>') {
                    cur.bump();
                    tokens.push(Token { kind: TokenKind::Arrow, span: start.with_len(2) });
                } else {
                    diags.push(Diagnostic::error(
                        "unexpected-character",
                        start,
                        "unexpected `-` (did you mean `->`?)".to_string(),
                    ));
                }
            }
            '"' => lex_string(&mut cur, &mut tokens, &mut diags),
            c if is_word_start(c) => {
                let mut word = String::new();
                while let Some(c) = cur.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    if c == '-' {
                        // `a->b` is a word followed by an arrow.
                        let mut ahead = cur.chars.clone();
                        ahead.next();
                        if ahead.next() == Some('>') {
                            break;
                        }
                    }
                    word.push(c);
                    cur.bump();
                }
                let len = word.chars().count();
                tokens.push(Token { kind: TokenKind::Word(word), span: start.with_len(len) });
            }
            other => {
                cur.bump();
                diags.push(Diagnostic::error(
                    "unexpected-character",
                    start,
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    tokens.push(Token { kind: TokenKind::Eof, span: cur.at(1) });
    (tokens, diags)
}

fn lex_string(cur: &mut Cursor<'_>, tokens: &mut Vec<Token>, diags: &mut Vec<Diagnostic>) {
    let start = cur.at(1);
    cur.bump();
    let mut value = String::new();
    let mut len = 1;
    loop {
        match cur.peek() {
            None | Some('\n') => {
                diags.push(Diagnostic::error(
                    "unterminated-string",
                    start.with_len(len),
                    "string is not closed before the end of the line".to_string(),
                ));
                return;
            }
            Some('"') => {
                cur.bump();
                len += 1;
                break;
            }
            Some('\\') => {
                let esc_span = cur.at(2);
                cur.bump();
                len += 1;
                match cur.peek() {
                    Some(c @ ('"' | '\\' | 'n' | 't' | 'r')) => {
                        cur.bump();
                        len += 1;
                        value.push(match c {
                            'n' => '\n',
                            't' => '\t',
                            'r' => '\r',
                            other => other,
                        });
                    }
                    Some('\n') | None => {}
                    Some(other) => {
                        cur.bump();
                        len += 1;
                        diags.push(Diagnostic::error(
                            "invalid-escape",
                            esc_span,
                            format!("unknown escape `\\{other}`"),
                        ));
                    }
                }
            }
            Some(c) => {
                cur.bump();
                len += 1;
                value.push(c);
            }
        }
    }
    tokens.push(Token { kind: TokenKind::Str(value), span: start.with_len(len) });
}
