//! Canonical source printer: one statement per line, two-space indents.
//! Parentheses are printed exactly where the tree has `Paren` nodes.

use std::fmt::Write;

use super::ast::*;

pub fn pretty_print(program: &Program) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "program {};", program.name);
    if !program.types.is_empty() {
        out.push_str("type;\n");
        for t in &program.types {
            match &t.def {
                TypeExpr::Record(fields) => {
                    let _ = writeln!(out, "  {} = record;", t.name);
                    for f in fields {
                        let _ = writeln!(out, "    {} : {};", f.names.join(", "), type_expr(&f.ty));
                    }
                    out.push_str("  endrecord;\n");
                }
                other => {
                    let _ = writeln!(out, "  {} = {};", t.name, type_expr(other));
                }
            }
        }
        out.push_str("endtype;\n");
    }
    if !program.vars.is_empty() {
        out.push_str("var;\n");
        for v in &program.vars {
            let _ = writeln!(out, "  {} : {};", v.names.join(", "), type_expr(&v.ty));
        }
        out.push_str("endvar;\n");
    }
    block(&mut out, &program.body, 0);
    out.push_str("endprogram;\n");
    out
}

fn type_expr(t: &TypeExpr) -> String {
    match t {
        TypeExpr::Named(n, _) => n.clone(),
        TypeExpr::Array { lo, hi, elem } => format!("array [{lo}..{hi}] of {}", type_expr(elem)),
        TypeExpr::Record(_) => "record".to_string(),
    }
}

fn line(out: &mut String, depth: usize, text: &str) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(text);
    out.push_str(";\n");
}

fn block(out: &mut String, stmts: &[Stmt], depth: usize) {
    for s in stmts {
        statement(out, s, depth);
    }
}

fn statement(out: &mut String, s: &Stmt, depth: usize) {
    match &s.kind {
        StmtKind::Assign { target, value } => {
            line(out, depth, &format!("{} := {}", path(target), expr(value)))
        }
        StmtKind::Call { name, args } => line(out, depth, &call(name, args)),
        StmtKind::BareCall(name) => line(out, depth, name),
        StmtKind::Goto(l) => line(out, depth, &format!("goto {l}")),
        StmtKind::Label(l) => line(out, depth, &format!("{l} :")),
        StmtKind::Exit => line(out, depth, "exit"),
        StmtKind::If {
            cond,
            then,
            otherwise,
        } => {
            line(out, depth, &format!("if {}", expr(cond)));
            block(out, then, depth + 1);
            if let Some(o) = otherwise {
                line(out, depth, "else");
                block(out, o, depth + 1);
            }
            line(out, depth, "endif");
        }
        StmtKind::Case { arms, otherwise } => {
            line(out, depth, "case");
            for a in arms {
                line(out, depth, &format!("on {}", expr(&a.cond)));
                block(out, &a.body, depth + 1);
            }
            if let Some(o) = otherwise {
                line(out, depth, "onelse");
                block(out, o, depth + 1);
            }
            line(out, depth, "endcase");
        }
    }
}

fn call(name: &str, args: &[Expr]) -> String {
    let args: Vec<String> = args.iter().map(expr).collect();
    format!("{name} ({})", args.join(", "))
}

fn path(p: &Path) -> String {
    let mut s = p.root.clone();
    for seg in &p.segments {
        match seg {
            Segment::Field(f, _) => {
                s.push('.');
                s.push_str(f);
            }
            Segment::Index(i) => {
                let _ = write!(s, "[{}]", expr(i));
            }
        }
    }
    s
}

/// Real literal text that re-reads as the same value and as a real.
pub fn real_literal(x: f64) -> String {
    let s = format!("{x}");
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

pub fn string_literal(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

pub fn expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Int(i) => i.to_string(),
        ExprKind::Real(x) => real_literal(*x),
        ExprKind::Str(s) => string_literal(s),
        ExprKind::Path(p) => path(p),
        ExprKind::Unary { op, operand } => {
            let inner = expr(operand);
            if op.chars().all(char::is_alphabetic) || inner.starts_with('-') {
                format!("{op} {inner}")
            } else {
                format!("{op}{inner}")
            }
        }
        ExprKind::Binary { op, lhs, rhs } => format!("{} {op} {}", expr(lhs), expr(rhs)),
        ExprKind::Call { name, args } => call(name, args),
        ExprKind::Paren(inner) => format!("({})", expr(inner)),
    }
}
