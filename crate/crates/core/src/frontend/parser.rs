//! Statement and expression parser.
//!
//! The token stream is first cut at `;` into statements; each statement is
//! parsed on its own, so one bad statement yields one diagnostic and parsing
//! resumes at the next.

use std::collections::HashMap;

use super::ast::*;
use super::ident::fold;
use super::token::{Keyword, Token, TokenKind};
use crate::builtins::{Assoc, Fixity, Registry};
use crate::diag::{Diagnostic, SourcePos};

type PResult<T> = Result<T, Diagnostic>;

pub fn parse(tokens: &[Token]) -> Result<Program, Vec<Diagnostic>> {
    parse_with(tokens, Registry::global())
}

pub fn parse_with(tokens: &[Token], registry: &Registry) -> Result<Program, Vec<Diagnostic>> {
    let mut stmts = Vec::new();
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        if t.is_punct(";") {
            stmts.push(Statement {
                tokens: &tokens[start..i],
                end: t.pos,
            });
            start = i + 1;
        }
    }
    if start < tokens.len() {
        let last = tokens.last().map(|t| t.pos).unwrap_or_default();
        stmts.push(Statement {
            tokens: &tokens[start..],
            end: last,
        });
    }
    let mut p = Parser {
        stmts,
        at: 0,
        registry,
        diags: Vec::new(),
    };
    let program = p.program();
    let mut diags = p.diags;
    if let Some(program) = &program {
        check_labels(program, &mut diags);
    }
    match program {
        Some(prog) if diags.is_empty() => Ok(prog),
        _ => {
            crate::diag::sort_diagnostics(&mut diags);
            Err(diags)
        }
    }
}

#[derive(Clone, Copy)]
struct Statement<'t> {
    tokens: &'t [Token],
    /// Position of the terminating `;`.
    end: SourcePos,
}

impl Statement<'_> {
    fn pos(&self) -> SourcePos {
        self.tokens.first().map(|t| t.pos).unwrap_or(self.end)
    }

    fn keyword(&self) -> Option<Keyword> {
        match self.tokens.first()?.kind {
            TokenKind::Keyword(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Else,
    EndIf,
    On,
    OnElse,
    EndCase,
    EndProgram,
    Eof,
}

struct Parser<'t, 'r> {
    stmts: Vec<Statement<'t>>,
    at: usize,
    registry: &'r Registry,
    diags: Vec<Diagnostic>,
}

impl<'t> Parser<'t, '_> {
    fn peek(&self) -> Option<Statement<'t>> {
        self.stmts.get(self.at).copied()
    }

    fn next(&mut self) -> Option<Statement<'t>> {
        let s = self.peek();
        if s.is_some() {
            self.at += 1;
        }
        s
    }

    fn end_pos(&self) -> SourcePos {
        self.stmts.last().map(|s| s.end).unwrap_or(SourcePos::new(1, 1))
    }

    fn error(&mut self, pos: SourcePos, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(pos, msg));
    }

    fn program(&mut self) -> Option<Program> {
        let Some(first) = self.next() else {
            self.error(SourcePos::new(1, 1), "empty source: expected PROGRAM");
            return None;
        };
        if first.keyword() != Some(Keyword::Program) {
            self.error(first.pos(), "program must start with PROGRAM");
            return None;
        }
        let name_tokens = &first.tokens[1..];
        if name_tokens.is_empty() {
            self.error(first.end, "PROGRAM needs a name");
        }
        let name = name_tokens
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let mut program = Program {
            name,
            types: Vec::new(),
            vars: Vec::new(),
            body: Vec::new(),
            pos: first.pos(),
        };

        if self.peek().and_then(|s| s.keyword()) == Some(Keyword::Type) {
            self.single_keyword();
            program.types = self.type_section();
        }
        if self.peek().and_then(|s| s.keyword()) == Some(Keyword::Var) {
            self.single_keyword();
            program.vars = self.var_section();
        }

        loop {
            let (mut stmts, stop) = self.block();
            program.body.append(&mut stmts);
            match stop {
                Stop::EndProgram => {
                    self.single_keyword();
                    break;
                }
                Stop::Eof => {
                    let pos = self.end_pos();
                    self.error(pos, "missing ENDPROGRAM");
                    break;
                }
                other => {
                    let s = self.next().unwrap();
                    let msg = match other {
                        Stop::Else | Stop::EndIf => format!("{} outside IF", s.tokens[0].text),
                        _ => format!("{} outside CASE", s.tokens[0].text),
                    };
                    self.error(s.pos(), msg);
                }
            }
        }
        if let Some(extra) = self.next() {
            self.error(extra.pos(), "text after ENDPROGRAM");
        }
        if program.body.is_empty() {
            self.error(
                program.pos,
                "исполняемая часть обязательна: the program has no executable statements",
            );
        }
        Some(program)
    }

    /// Consumes a statement that must consist of its keyword alone.
    fn single_keyword(&mut self) {
        let s = self.next().unwrap();
        if let Some(extra) = s.tokens.get(1) {
            self.error(
                extra.pos,
                format!("unexpected {extra} after {}", s.tokens[0].text),
            );
        }
    }

    fn type_section(&mut self) -> Vec<TypeDecl> {
        let mut decls = Vec::new();
        loop {
            let Some(s) = self.peek() else {
                let pos = self.end_pos();
                self.error(pos, "missing ENDTYPE");
                return decls;
            };
            match s.keyword() {
                Some(Keyword::EndType) => {
                    self.single_keyword();
                    return decls;
                }
                Some(Keyword::Var | Keyword::EndProgram) => {
                    self.error(s.pos(), "missing ENDTYPE");
                    return decls;
                }
                _ => {}
            }
            self.next();
            match self.type_decl(s) {
                Ok(d) => decls.push(d),
                Err(e) => self.diags.push(e),
            }
        }
    }

    fn type_decl(&mut self, s: Statement<'t>) -> PResult<TypeDecl> {
        let eq = s
            .tokens
            .iter()
            .position(|t| t.is_op("="))
            .ok_or_else(|| Diagnostic::error(s.pos(), "type declaration needs '='"))?;
        let name = type_name(&s.tokens[..eq], s.pos())?;
        let rest = &s.tokens[eq + 1..];
        let def = if rest.len() == 1 && rest[0].is_keyword(Keyword::Record) {
            TypeExpr::Record(self.record_fields(s.pos())?)
        } else {
            type_expr(rest, s.tokens[eq].pos)?
        };
        Ok(TypeDecl {
            name,
            def,
            pos: s.pos(),
        })
    }

    fn record_fields(&mut self, start: SourcePos) -> PResult<Vec<FieldDecl>> {
        let mut fields = Vec::new();
        loop {
            let Some(s) = self.peek() else {
                return Err(Diagnostic::error(start, "RECORD without ENDRECORD"));
            };
            match s.keyword() {
                Some(Keyword::EndRecord) => {
                    self.single_keyword();
                    return Ok(fields);
                }
                Some(Keyword::EndType | Keyword::Var | Keyword::EndProgram) => {
                    return Err(Diagnostic::error(start, "RECORD without ENDRECORD"));
                }
                _ => {}
            }
            self.next();
            match declaration(s) {
                Ok((names, ty)) => fields.push(FieldDecl {
                    names,
                    ty,
                    pos: s.pos(),
                }),
                Err(e) => self.diags.push(e),
            }
        }
    }

    fn var_section(&mut self) -> Vec<VarDecl> {
        let mut decls = Vec::new();
        loop {
            let Some(s) = self.peek() else {
                let pos = self.end_pos();
                self.error(pos, "missing ENDVAR");
                return decls;
            };
            match s.keyword() {
                Some(Keyword::EndVar) => {
                    self.single_keyword();
                    return decls;
                }
                Some(Keyword::EndProgram) => {
                    self.error(s.pos(), "missing ENDVAR");
                    return decls;
                }
                Some(Keyword::Type) => {
                    self.next();
                    self.error(s.pos(), "TYPE section must precede VAR");
                    continue;
                }
                _ => {}
            }
            self.next();
            match declaration(s) {
                Ok((names, ty)) => decls.push(VarDecl {
                    names,
                    ty,
                    pos: s.pos(),
                }),
                Err(e) => self.diags.push(e),
            }
        }
    }

    fn block(&mut self) -> (Vec<Stmt>, Stop) {
        let mut out = Vec::new();
        loop {
            let Some(s) = self.peek() else {
                return (out, Stop::Eof);
            };
            let stop = match s.keyword() {
                Some(Keyword::Else) => Some(Stop::Else),
                Some(Keyword::EndIf) => Some(Stop::EndIf),
                Some(Keyword::On) => Some(Stop::On),
                Some(Keyword::OnElse) => Some(Stop::OnElse),
                Some(Keyword::EndCase) => Some(Stop::EndCase),
                Some(Keyword::EndProgram) => Some(Stop::EndProgram),
                _ => None,
            };
            if let Some(stop) = stop {
                return (out, stop);
            }
            self.next();
            match self.statement(s) {
                Ok(Some(st)) => out.push(st),
                Ok(None) => {}
                Err(e) => self.diags.push(e),
            }
        }
    }

    fn statement(&mut self, s: Statement<'t>) -> PResult<Option<Stmt>> {
        let pos = s.pos();
        let toks = s.tokens;
        let Some(first) = toks.first() else {
            return Err(Diagnostic::error(s.end, "empty statement"));
        };
        let kind = match &first.kind {
            TokenKind::Keyword(Keyword::If) => {
                let cond = self.expr_all(&toks[1..], s.end)?;
                return Ok(Some(self.if_block(cond, pos)));
            }
            TokenKind::Keyword(Keyword::Case) => {
                if let Some(extra) = toks.get(1) {
                    return Err(Diagnostic::error(extra.pos, format!("unexpected {extra} after CASE")));
                }
                return Ok(Some(self.case_block(pos)));
            }
            TokenKind::Keyword(Keyword::Goto) => match &toks[1..] {
                [t] if t.is_ident() => StmtKind::Goto(t.text.clone()),
                _ => return Err(Diagnostic::error(pos, "GOTO needs one label name")),
            },
            TokenKind::Keyword(Keyword::Exit) => {
                if let Some(extra) = toks.get(1) {
                    return Err(Diagnostic::error(extra.pos, format!("unexpected {extra} after EXIT")));
                }
                StmtKind::Exit
            }
            TokenKind::Keyword(k @ (Keyword::Type | Keyword::Var)) => {
                return Err(Diagnostic::error(
                    pos,
                    format!("{} section must precede the executable part", k.as_str().to_uppercase()),
                ));
            }
            TokenKind::Keyword(k) => {
                return Err(Diagnostic::error(pos, format!("unexpected keyword {}", k.as_str().to_uppercase())));
            }
            TokenKind::Identifier => {
                if toks.len() == 2 && toks[1].is_punct(":") {
                    StmtKind::Label(first.text.clone())
                } else if toks.len() == 1 {
                    StmtKind::BareCall(first.text.clone())
                } else if toks[1].is_punct("(") {
                    let mut ep = ExprParser::new(toks, s.end, self.registry);
                    let e = ep.primary()?;
                    ep.expect_end()?;
                    match e.kind {
                        ExprKind::Call { name, args } => StmtKind::Call { name, args },
                        _ => unreachable!("identifier followed by '(' parses as a call"),
                    }
                } else {
                    let mut ep = ExprParser::new(toks, s.end, self.registry);
                    let target = ep.path()?;
                    match ep.peek() {
                        Some(t) if t.is_op(":=") => {
                            ep.at += 1;
                        }
                        Some(t) => {
                            return Err(Diagnostic::error(t.pos, format!("expected ':=', found {t}")))
                        }
                        None => return Err(Diagnostic::error(s.end, "expected ':='")),
                    }
                    let value = ep.expr(0)?;
                    ep.expect_end()?;
                    StmtKind::Assign { target, value }
                }
            }
            _ => return Err(Diagnostic::error(pos, format!("a statement cannot start with {first}"))),
        };
        Ok(Some(Stmt { kind, pos }))
    }

    fn expr_all(&self, toks: &'t [Token], end: SourcePos) -> PResult<Expr> {
        let mut ep = ExprParser::new(toks, end, self.registry);
        let e = ep.expr(0)?;
        ep.expect_end()?;
        Ok(e)
    }

    fn if_block(&mut self, cond: Expr, pos: SourcePos) -> Stmt {
        let (then, stop) = self.block();
        let mut otherwise = None;
        let mut stop = stop;
        if stop == Stop::Else {
            self.single_keyword();
            let (o, s) = self.block();
            otherwise = Some(o);
            stop = s;
        }
        if stop == Stop::EndIf {
            self.single_keyword();
        } else {
            self.error(pos, "IF without ENDIF");
        }
        Stmt {
            kind: StmtKind::If {
                cond,
                then,
                otherwise,
            },
            pos,
        }
    }

    fn case_block(&mut self, pos: SourcePos) -> Stmt {
        let (stray, mut stop) = self.block();
        if let Some(s) = stray.first() {
            self.error(s.pos, "statements between CASE and the first ON");
        }
        let mut arms = Vec::new();
        while stop == Stop::On {
            let s = self.next().unwrap();
            let cond = self.expr_all(&s.tokens[1..], s.end);
            let (body, next) = self.block();
            match cond {
                Ok(cond) => arms.push(CaseArm {
                    cond,
                    body,
                    pos: s.pos(),
                }),
                Err(e) => self.diags.push(e),
            }
            stop = next;
        }
        let mut otherwise = None;
        if stop == Stop::OnElse {
            self.single_keyword();
            let (o, next) = self.block();
            otherwise = Some(o);
            stop = next;
            if stop == Stop::On {
                let p = self.peek().unwrap().pos();
                self.error(p, "ON after ONELSE");
            }
        }
        if arms.is_empty() {
            self.error(pos, "CASE needs at least one ON");
        }
        if stop == Stop::EndCase {
            self.single_keyword();
        } else {
            self.error(pos, "CASE without ENDCASE");
        }
        Stmt {
            kind: StmtKind::Case { arms, otherwise },
            pos,
        }
    }
}

/// Joins identifier tokens into one (possibly multi-word) name.
fn type_name(toks: &[Token], pos: SourcePos) -> PResult<String> {
    if toks.is_empty() {
        return Err(Diagnostic::error(pos, "expected a type name"));
    }
    if let Some(bad) = toks.iter().find(|t| !t.is_ident()) {
        return Err(Diagnostic::error(bad.pos, format!("unexpected {bad} in type name")));
    }
    Ok(toks.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" "))
}

fn type_expr(toks: &[Token], pos: SourcePos) -> PResult<TypeExpr> {
    match toks.first() {
        Some(t) if t.is_keyword(Keyword::Array) => {
            let mut i = 1;
            let expect = |i: usize, p: &str| -> PResult<()> {
                match toks.get(i) {
                    Some(t) if t.is_punct(p) => Ok(()),
                    Some(t) => Err(Diagnostic::error(t.pos, format!("expected '{p}', found {t}"))),
                    None => Err(Diagnostic::error(pos, format!("expected '{p}'"))),
                }
            };
            let bound = |i: &mut usize| -> PResult<i64> {
                let neg = toks.get(*i).is_some_and(|t| t.is_op("-"));
                if neg {
                    *i += 1;
                }
                match toks.get(*i) {
                    Some(Token {
                        kind: TokenKind::Integer(v),
                        ..
                    }) => {
                        *i += 1;
                        Ok(if neg { -v } else { *v })
                    }
                    Some(t) => Err(Diagnostic::error(t.pos, format!("expected an integer bound, found {t}"))),
                    None => Err(Diagnostic::error(pos, "expected an integer bound")),
                }
            };
            expect(i, "[")?;
            i += 1;
            let lo = bound(&mut i)?;
            expect(i, "..")?;
            i += 1;
            let hi = bound(&mut i)?;
            expect(i, "]")?;
            i += 1;
            match toks.get(i) {
                Some(t) if t.is_keyword(Keyword::Of) => {}
                Some(t) => return Err(Diagnostic::error(t.pos, format!("expected OF, found {t}"))),
                None => return Err(Diagnostic::error(pos, "expected OF")),
            }
            let elem = type_expr(&toks[i + 1..], toks[i].pos)?;
            Ok(TypeExpr::Array {
                lo,
                hi,
                elem: Box::new(elem),
            })
        }
        Some(t) if t.is_keyword(Keyword::Record) => Err(Diagnostic::error(
            t.pos,
            "records are declared in the TYPE section",
        )),
        Some(t) => Ok(TypeExpr::Named(type_name(toks, t.pos)?, t.pos)),
        None => Err(Diagnostic::error(pos, "expected a type")),
    }
}

/// `a, b : Type`
fn declaration(s: Statement<'_>) -> PResult<(Vec<String>, TypeExpr)> {
    let toks = s.tokens;
    let colon = toks
        .iter()
        .position(|t| t.is_punct(":"))
        .ok_or_else(|| Diagnostic::error(s.pos(), "declaration needs ':'"))?;
    let mut names = Vec::new();
    let mut expect_name = true;
    for t in &toks[..colon] {
        if expect_name && t.is_ident() {
            names.push(t.text.clone());
        } else if !expect_name && t.is_punct(",") {
        } else {
            return Err(Diagnostic::error(t.pos, format!("unexpected {t} in declaration")));
        }
        expect_name = !expect_name;
    }
    if names.is_empty() || expect_name {
        return Err(Diagnostic::error(toks[colon].pos, "expected a name before ':'"));
    }
    let ty = type_expr(&toks[colon + 1..], toks[colon].pos)?;
    Ok((names, ty))
}

struct ExprParser<'t, 'r> {
    toks: &'t [Token],
    at: usize,
    end: SourcePos,
    registry: &'r Registry,
}

impl<'t, 'r> ExprParser<'t, 'r> {
    fn new(toks: &'t [Token], end: SourcePos, registry: &'r Registry) -> Self {
        Self {
            toks,
            at: 0,
            end,
            registry,
        }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.at)
    }

    fn expect_end(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Diagnostic::error(t.pos, format!("unexpected {t}"))),
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<SourcePos> {
        match self.peek() {
            Some(t) if t.is_punct(p) => {
                self.at += 1;
                Ok(t.pos)
            }
            Some(t) => Err(Diagnostic::error(t.pos, format!("expected '{p}', found {t}"))),
            None => Err(Diagnostic::error(self.end, format!("expected '{p}'"))),
        }
    }

    fn infix_op(&self) -> Option<(u8, Assoc, &'t Token)> {
        let t = self.peek()?;
        if t.kind != TokenKind::Operator {
            return None;
        }
        let d = self.registry.lookup_infix(&t.text)?;
        let Fixity::Infix(assoc) = d.fixity else {
            return None;
        };
        Some((d.precedence?, assoc, t))
    }

    fn expr(&mut self, min: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some((prec, assoc, tok)) = self.infix_op() {
            if prec < min {
                break;
            }
            self.at += 1;
            let next = if assoc == Assoc::Right { prec } else { prec + 1 };
            let rhs = self.expr(next)?;
            let pos = lhs.pos;
            lhs = Expr::new(
                ExprKind::Binary {
                    op: tok.text.clone(),
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                pos,
            );
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Operator {
                if let Some(d) = self.registry.lookup_prefix(&t.text) {
                    self.at += 1;
                    let operand = self.expr(d.precedence.unwrap_or(u8::MAX))?;
                    return Ok(Expr::new(
                        ExprKind::Unary {
                            op: t.text.clone(),
                            operand: Box::new(operand),
                        },
                        t.pos,
                    ));
                }
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let Some(t) = self.peek() else {
            return Err(Diagnostic::error(self.end, "expected an expression"));
        };
        let kind = match &t.kind {
            TokenKind::Integer(v) => ExprKind::Int(*v),
            TokenKind::Real(v) => ExprKind::Real(*v),
            TokenKind::Str(s) => ExprKind::Str(s.clone()),
            TokenKind::Punct if t.text == "(" => {
                self.at += 1;
                let inner = self.expr(0)?;
                self.expect_punct(")")?;
                return Ok(Expr::new(ExprKind::Paren(Box::new(inner)), t.pos));
            }
            TokenKind::Identifier => {
                if self.toks.get(self.at + 1).is_some_and(|n| n.is_punct("(")) {
                    self.at += 2;
                    let mut args = Vec::new();
                    if self.peek().is_some_and(|n| n.is_punct(")")) {
                        self.at += 1;
                    } else {
                        loop {
                            args.push(self.expr(0)?);
                            match self.peek() {
                                Some(n) if n.is_punct(",") => self.at += 1,
                                _ => break,
                            }
                        }
                        self.expect_punct(")")?;
                    }
                    return Ok(Expr::new(
                        ExprKind::Call {
                            name: t.text.clone(),
                            args,
                        },
                        t.pos,
                    ));
                }
                return Ok(Expr::new(ExprKind::Path(self.path()?), t.pos));
            }
            _ => return Err(Diagnostic::error(t.pos, format!("expected an expression, found {t}"))),
        };
        self.at += 1;
        Ok(Expr::new(kind, t.pos))
    }

    fn path(&mut self) -> PResult<Path> {
        let root = match self.peek() {
            Some(t) if t.is_ident() => t,
            Some(t) => return Err(Diagnostic::error(t.pos, format!("expected a name, found {t}"))),
            None => return Err(Diagnostic::error(self.end, "expected a name")),
        };
        self.at += 1;
        let mut path = Path::simple(&root.text, root.pos);
        loop {
            match self.peek() {
                Some(t) if t.is_punct(".") => {
                    self.at += 1;
                    match self.peek() {
                        Some(f) if f.is_ident() => {
                            self.at += 1;
                            path.segments.push(Segment::Field(f.text.clone(), f.pos));
                        }
                        Some(f) => {
                            return Err(Diagnostic::error(f.pos, format!("expected a field name, found {f}")))
                        }
                        None => return Err(Diagnostic::error(self.end, "expected a field name")),
                    }
                }
                Some(t) if t.is_punct("[") => {
                    self.at += 1;
                    let index = self.expr(0)?;
                    self.expect_punct("]")?;
                    path.segments.push(Segment::Index(index));
                }
                _ => return Ok(path),
            }
        }
    }
}

/// Duplicate labels and jumps to labels that do not exist.
fn check_labels(program: &Program, diags: &mut Vec<Diagnostic>) {
    let mut labels: HashMap<String, SourcePos> = HashMap::new();
    let mut gotos = Vec::new();
    program.walk_stmts(&mut |s| match &s.kind {
        StmtKind::Label(name) => {
            if let Some(prev) = labels.insert(fold(name), s.pos) {
                diags.push(Diagnostic::error(
                    s.pos,
                    format!("duplicate label '{name}' (first defined at {prev})"),
                ));
            }
        }
        StmtKind::Goto(name) => gotos.push((name, s.pos)),
        _ => {}
    });
    for (name, pos) in gotos {
        if !labels.contains_key(&fold(name)) {
            diags.push(Diagnostic::error(pos, format!("GOTO to undeclared label '{name}'")));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::lexer::tokenize;

    fn parse_text(text: &str) -> Result<Program, Vec<Diagnostic>> {
        parse(&tokenize(text)?)
    }

    fn body(text: &str) -> Vec<Stmt> {
        parse_text(text).unwrap().body
    }

    #[test]
    fn minimal_program() {
        let p = parse_text("program P; x := 1; endprogram;").unwrap();
        assert_eq!(p.name, "P");
        assert_eq!(p.body.len(), 1);
        assert!(matches!(p.body[0].kind, StmtKind::Assign { .. }));
    }

    #[test]
    fn empty_body_is_an_error() {
        let d = parse_text("program P; endprogram;").unwrap_err();
        assert!(d[0].message.contains("исполняемая часть обязательна"));
    }

    #[test]
    fn missing_endprogram() {
        let d = parse_text("program P;\nx := 1;").unwrap_err();
        assert!(d.iter().any(|d| d.message.contains("missing ENDPROGRAM")));
    }

    #[test]
    fn multiword_names() {
        let p = parse_text(
            "program Оголовок вентпанелей;\nvar;\nр : Линейный размер;\nendvar;\nexit;\nendprogram;",
        )
        .unwrap();
        assert_eq!(p.name, "Оголовок вентпанелей");
        assert_eq!(
            p.vars[0].ty,
            TypeExpr::Named("Линейный размер".into(), SourcePos::new(3, 5))
        );
    }

    #[test]
    fn type_section() {
        let p = parse_text(
            "program P;\ntype;\nПара = record;\nA : Целое;\nB : Точка;\nendrecord;\nРяд = array [0..15] of Точка;\nendtype;\nexit;\nendprogram;",
        )
        .unwrap();
        assert_eq!(p.types.len(), 2);
        match &p.types[0].def {
            TypeExpr::Record(f) => assert_eq!(f.len(), 2),
            other => panic!("{other:?}"),
        }
        match &p.types[1].def {
            TypeExpr::Array { lo, hi, .. } => assert_eq!((*lo, *hi), (0, 15)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn section_order() {
        let d = parse_text("program P;\nvar;\nx : Целое;\nendvar;\ntype;\nendtype;\nx := 1;\nendprogram;")
            .unwrap_err();
        assert!(d.iter().any(|d| d.message.contains("TYPE section must precede")));
    }

    #[test]
    fn precedence_and_associativity() {
        let b = body("program P; x := a + b * c ^ d ^ e - -f; endprogram;");
        let StmtKind::Assign { value, .. } = &b[0].kind else { panic!() };
        // ((a + (b * (c ^ (d ^ e)))) - (-f))
        let ExprKind::Binary { op, lhs, rhs } = &value.kind else { panic!() };
        assert_eq!(op, "-");
        assert!(matches!(rhs.kind, ExprKind::Unary { .. }));
        let ExprKind::Binary { op, rhs: mul, .. } = &lhs.kind else { panic!() };
        assert_eq!(op, "+");
        let ExprKind::Binary { op, rhs: pow, .. } = &mul.kind else { panic!() };
        assert_eq!(op, "*");
        let ExprKind::Binary { op, rhs: pow2, .. } = &pow.kind else { panic!() };
        assert_eq!(op, "^");
        assert!(matches!(&pow2.kind, ExprKind::Binary { op, .. } if op == "^"));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let b = body("program P; x := -a ^ 2; endprogram;");
        let StmtKind::Assign { value, .. } = &b[0].kind else { panic!() };
        let ExprKind::Unary { operand, .. } = &value.kind else { panic!() };
        assert!(matches!(operand.kind, ExprKind::Binary { .. }));
    }

    #[test]
    fn if_else_and_case() {
        let b = body(
            "program P;\nif a = 0; exit; else; x := 1; endif;\ncase;\non a = 1; x := 2;\non a = 2; x := 3;\nonelse; x := 4;\nendcase;\nendprogram;",
        );
        let StmtKind::If { then, otherwise, .. } = &b[0].kind else { panic!() };
        assert_eq!(then.len(), 1);
        assert_eq!(otherwise.as_ref().unwrap().len(), 1);
        let StmtKind::Case { arms, otherwise } = &b[1].kind else { panic!() };
        assert_eq!(arms.len(), 2);
        assert!(otherwise.is_some());
    }

    #[test]
    fn structural_errors() {
        let d = parse_text("program P;\non a = 1;\nendprogram;").unwrap_err();
        assert!(d.iter().any(|d| d.message.contains("outside CASE")));
        let d = parse_text("program P;\nelse;\nx := 1;\nendprogram;").unwrap_err();
        assert!(d.iter().any(|d| d.message.contains("outside IF")));
        let d = parse_text("program P;\nif a;\nx := 1;\nendprogram;").unwrap_err();
        assert!(d.iter().any(|d| d.message.contains("IF without ENDIF")));
    }

    #[test]
    fn labels() {
        let b = body("program P;\nm :;\ngoto m;\nendprogram;");
        assert_eq!(b[0].kind, StmtKind::Label("m".into()));
        assert_eq!(b[1].kind, StmtKind::Goto("m".into()));
        let d = parse_text("program P;\nm :;\nm :;\nendprogram;").unwrap_err();
        assert!(d[0].message.contains("duplicate label"));
        let d = parse_text("program P;\ngoto nowhere;\nendprogram;").unwrap_err();
        assert!(d[0].message.contains("undeclared label"));
    }

    #[test]
    fn calls_paths_and_bare_names() {
        let b = body("program P;\nЛРазмСтрелки (3, SQRT (2), 3, SQRT (2));\nШапка.Цвет := Черный;\nУглы[i + 1].X := 0;\nРедактор;\nendprogram;");
        let StmtKind::Call { name, args } = &b[0].kind else { panic!() };
        assert_eq!(name, "ЛРазмСтрелки");
        assert_eq!(args.len(), 4);
        let StmtKind::Assign { target, .. } = &b[1].kind else { panic!() };
        assert_eq!(target.segments.len(), 1);
        let StmtKind::Assign { target, .. } = &b[2].kind else { panic!() };
        assert!(matches!(target.segments[0], Segment::Index(_)));
        assert_eq!(b[3].kind, StmtKind::BareCall("Редактор".into()));
    }

    #[test]
    fn recovers_after_bad_statement() {
        let d = parse_text("program P;\nx := ;\ny := 1 +;\nz := 2;\nendprogram;").unwrap_err();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].pos.line, 2);
        assert_eq!(d[1].pos.line, 3);
    }
}
