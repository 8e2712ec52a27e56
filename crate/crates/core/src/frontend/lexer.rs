//! Tokenizer.
//!
//! Besides splitting text into tokens it enforces the line rule: every line
//! that holds tokens ends with `;`, so no statement continues onto the next
//! line.

use super::ident::{is_ident_char, is_ident_start, MAX_IDENT_LEN};
use super::token::{Keyword, Token, TokenKind};
use crate::builtins::Registry;
use crate::diag::{Diagnostic, SourcePos};

struct Cursor {
    chars: Vec<char>,
    at: usize,
    line: u32,
    column: u32,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.at + n).copied()
    }

    fn pos(&self) -> SourcePos {
        SourcePos::new(self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|d| d.eq_ignore_ascii_case(&c)))
    }
}

/// Tokenizes `text` with the operator spellings of the standard registry.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    tokenize_with(text, Registry::global())
}

pub fn tokenize_with(text: &str, registry: &Registry) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let mut symbols = registry.symbol_operators();
    symbols.push(":=".to_string());
    symbols.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));

    let mut cur = Cursor {
        chars: text.chars().collect(),
        at: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    'outer: while let Some(c) = cur.peek() {
        let pos = cur.pos();
        if c.is_whitespace() || c == '\u{feff}' {
            cur.bump();
            continue;
        }
        if c == '{' {
            cur.bump();
            loop {
                match cur.bump() {
                    Some('}') => continue 'outer,
                    Some(_) => {}
                    None => {
                        diags.push(Diagnostic::error(pos, "unterminated comment"));
                        break 'outer;
                    }
                }
            }
        }
        if c == '}' {
            diags.push(Diagnostic::error(pos, "'}' without an opening '{'"));
            cur.bump();
            continue;
        }
        if c == '\'' {
            cur.bump();
            let mut value = String::new();
            let mut raw = String::from("'");
            loop {
                match cur.peek() {
                    Some('\'') if cur.peek_at(1) == Some('\'') => {
                        cur.bump();
                        cur.bump();
                        value.push('\'');
                        raw.push_str("''");
                    }
                    Some('\'') => {
                        cur.bump();
                        raw.push('\'');
                        break;
                    }
                    Some('\n') | None => {
                        diags.push(Diagnostic::error(pos, "unterminated string literal"));
                        continue 'outer;
                    }
                    Some(ch) => {
                        cur.bump();
                        value.push(ch);
                        raw.push(ch);
                    }
                }
            }
            tokens.push(Token {
                kind: TokenKind::Str(value),
                text: raw,
                pos,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                text.push(d);
                cur.bump();
            }
            let is_real = cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit());
            if is_real {
                text.push('.');
                cur.bump();
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    text.push(d);
                    cur.bump();
                }
            }
            if cur.peek().is_some_and(is_ident_start) {
                diags.push(Diagnostic::error(cur.pos(), "identifier cannot start with a digit"));
                while cur.peek().is_some_and(is_ident_char) {
                    cur.bump();
                }
                continue;
            }
            let kind = if is_real {
                match text.parse::<f64>() {
                    Ok(x) if x.is_finite() => TokenKind::Real(x),
                    _ => {
                        diags.push(Diagnostic::error(pos, format!("number {text} is out of range")));
                        continue;
                    }
                }
            } else {
                match text.parse::<i64>() {
                    Ok(i) => TokenKind::Integer(i),
                    Err(_) => {
                        diags.push(Diagnostic::error(pos, format!("integer {text} does not fit Целое")));
                        continue;
                    }
                }
            };
            tokens.push(Token { kind, text, pos });
            continue;
        }
        if is_ident_start(c) {
            let mut word = String::new();
            let mut bad = None;
            while let Some(ch) = cur.peek() {
                if is_ident_char(ch) {
                    word.push(ch);
                } else if ch.is_alphanumeric() {
                    bad.get_or_insert((cur.pos(), ch));
                    word.push(ch);
                } else {
                    break;
                }
                cur.bump();
            }
            if let Some((at, ch)) = bad {
                diags.push(Diagnostic::error(
                    at,
                    format!("character '{ch}' is not allowed in identifiers"),
                ));
                continue;
            }
            let len = word.chars().count();
            if len > MAX_IDENT_LEN {
                diags.push(Diagnostic::error(
                    pos,
                    format!("identifier '{word}' is {len} characters long; the limit is {MAX_IDENT_LEN}"),
                ));
                continue;
            }
            let kind = if let Some(k) = Keyword::from_word(&word) {
                TokenKind::Keyword(k)
            } else if registry.is_word_operator(&word) && word.is_ascii() {
                TokenKind::Operator
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token { kind, text: word, pos });
            continue;
        }
        if let Some(op) = symbols.iter().find(|s| cur.starts_with(s)) {
            let len = op.chars().count();
            for _ in 0..len {
                cur.bump();
            }
            tokens.push(Token {
                kind: TokenKind::Operator,
                text: op.clone(),
                pos,
            });
            continue;
        }
        let punct = if c == '.' && cur.peek_at(1) == Some('.') {
            Some("..")
        } else {
            match c {
                ';' => Some(";"),
                ':' => Some(":"),
                ',' => Some(","),
                '.' => Some("."),
                '(' => Some("("),
                ')' => Some(")"),
                '[' => Some("["),
                ']' => Some("]"),
                _ => None,
            }
        };
        match punct {
            Some(p) => {
                for _ in 0..p.len() {
                    cur.bump();
                }
                tokens.push(Token {
                    kind: TokenKind::Punct,
                    text: p.to_string(),
                    pos,
                });
            }
            None => {
                diags.push(Diagnostic::error(
                    pos,
                    if c.is_alphabetic() {
                        format!("character '{c}' is not allowed in identifiers")
                    } else {
                        format!("unexpected character '{c}'")
                    },
                ));
                cur.bump();
            }
        }
    }

    check_line_ends(&tokens, &mut diags);
    if diags.is_empty() {
        Ok(tokens)
    } else {
        crate::diag::sort_diagnostics(&mut diags);
        Err(diags)
    }
}

/// The last token of every line must be `;`.
fn check_line_ends(tokens: &[Token], diags: &mut Vec<Diagnostic>) {
    for (i, t) in tokens.iter().enumerate() {
        let last_on_line = tokens
            .get(i + 1)
            .is_none_or(|next| next.pos.line != t.pos.line);
        if last_on_line && !t.is_punct(";") {
            diags.push(Diagnostic::error(
                t.pos,
                "statement must end with ';' on the same line",
            ));
        }
    }
}
