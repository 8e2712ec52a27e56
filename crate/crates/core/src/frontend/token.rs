use std::fmt;

use crate::diag::SourcePos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Program,
    EndProgram,
    Type,
    EndType,
    Var,
    EndVar,
    Record,
    EndRecord,
    Array,
    Of,
    If,
    Else,
    EndIf,
    Case,
    On,
    OnElse,
    EndCase,
    Goto,
    Exit,
}

impl Keyword {
    pub const ALL: [Keyword; 19] = [
        Keyword::Program,
        Keyword::EndProgram,
        Keyword::Type,
        Keyword::EndType,
        Keyword::Var,
        Keyword::EndVar,
        Keyword::Record,
        Keyword::EndRecord,
        Keyword::Array,
        Keyword::Of,
        Keyword::If,
        Keyword::Else,
        Keyword::EndIf,
        Keyword::Case,
        Keyword::On,
        Keyword::OnElse,
        Keyword::EndCase,
        Keyword::Goto,
        Keyword::Exit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Program => "program",
            Keyword::EndProgram => "endprogram",
            Keyword::Type => "type",
            Keyword::EndType => "endtype",
            Keyword::Var => "var",
            Keyword::EndVar => "endvar",
            Keyword::Record => "record",
            Keyword::EndRecord => "endrecord",
            Keyword::Array => "array",
            Keyword::Of => "of",
            Keyword::If => "if",
            Keyword::Else => "else",
            Keyword::EndIf => "endif",
            Keyword::Case => "case",
            Keyword::On => "on",
            Keyword::OnElse => "onelse",
            Keyword::EndCase => "endcase",
            Keyword::Goto => "goto",
            Keyword::Exit => "exit",
        }
    }

    /// Keywords are ASCII words matched without regard to case.
    pub fn from_word(word: &str) -> Option<Keyword> {
        Keyword::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(word))
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Keyword(Keyword),
    Identifier,
    Integer(i64),
    Real(f64),
    /// Unescaped contents.
    Str(String),
    /// `;` `:` `,` `.` `..` `(` `)` `[` `]`
    Punct,
    /// Registry operators plus `:=`.
    Operator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source spelling.
    pub text: String,
    pub pos: SourcePos,
}

impl Token {
    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }

    pub fn is_op(&self, op: &str) -> bool {
        self.kind == TokenKind::Operator && self.text.eq_ignore_ascii_case(op)
    }

    pub fn is_keyword(&self, k: Keyword) -> bool {
        self.kind == TokenKind::Keyword(k)
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Identifier
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TokenKind::Str(_) => write!(f, "string {}", self.text),
            TokenKind::Integer(_) | TokenKind::Real(_) => write!(f, "number {}", self.text),
            TokenKind::Identifier => write!(f, "identifier '{}'", self.text),
            _ => write!(f, "'{}'", self.text),
        }
    }
}
