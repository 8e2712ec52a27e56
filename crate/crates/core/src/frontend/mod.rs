//! Lexer, parser, redundant-parentheses check and canonical printer.

pub mod ast;
pub mod ident;
pub mod lexer;
pub mod parens;
pub mod parser;
pub mod pretty;
pub mod token;

pub use ast::Program;
pub use lexer::{tokenize, tokenize_with};
pub use parens::{check_redundant_parens, parenthesize};
pub use parser::{parse, parse_with};
pub use pretty::pretty_print;
pub use token::{Keyword, Token, TokenKind};

use crate::builtins::Registry;
use crate::diag::Diagnostic;

/// Tokenizes, parses and rejects redundant parentheses.
pub fn parse_program(text: &str) -> Result<Program, Vec<Diagnostic>> {
    parse_program_with(text, Registry::global())
}

pub fn parse_program_with(text: &str, registry: &Registry) -> Result<Program, Vec<Diagnostic>> {
    let tokens = tokenize_with(text, registry)?;
    let program = parse_with(&tokens, registry)?;
    let diags = parens::check_with(&program, registry);
    if diags.is_empty() {
        Ok(program)
    } else {
        Err(diags)
    }
}
