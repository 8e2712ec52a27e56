//! Redundant-parentheses detection.
//!
//! A pair is redundant when dropping it leaves the tree unchanged under the
//! operator table. That is decided structurally from the parent operator and
//! the side the parenthesized node sits on.

use super::ast::*;
use crate::builtins::{Assoc, Fixity, Registry};
use crate::diag::Diagnostic;

/// Where an expression sits relative to its parent operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Statement expression, call argument or index.
    Top,
    Operand { prec: u8 },
    Left { prec: u8, assoc: Assoc },
    Right { prec: u8, assoc: Assoc },
}

fn binary_level(registry: &Registry, op: &str) -> (u8, Assoc) {
    match registry.lookup_infix(op) {
        Some(d) => match d.fixity {
            Fixity::Infix(a) => (d.precedence.unwrap_or(0), a),
            _ => (0, Assoc::Left),
        },
        None => (0, Assoc::Left),
    }
}

fn unary_level(registry: &Registry, op: &str) -> u8 {
    registry
        .lookup_prefix(op)
        .and_then(|d| d.precedence)
        .unwrap_or(u8::MAX)
}

/// True when `inner` must be parenthesized in `slot` to keep its shape.
pub fn needs_parens(registry: &Registry, inner: &Expr, slot: Slot) -> bool {
    match &inner.kind {
        ExprKind::Unary { op, .. } => match slot {
            Slot::Left { prec, .. } => unary_level(registry, op) < prec,
            _ => false,
        },
        ExprKind::Binary { op, .. } => {
            let (c, _) = binary_level(registry, op);
            match slot {
                Slot::Top => false,
                Slot::Operand { prec } => c < prec,
                Slot::Left { prec, assoc } => c < prec || (c == prec && assoc == Assoc::Right),
                Slot::Right { prec, assoc } => c < prec || (c == prec && assoc == Assoc::Left),
            }
        }
        _ => false,
    }
}

/// Reports every redundant pair in the program, once each, at its `(`.
pub fn check_redundant_parens(program: &Program) -> Vec<Diagnostic> {
    check_with(program, Registry::global())
}

pub fn check_with(program: &Program, registry: &Registry) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    program.walk_exprs(&mut |e| visit(registry, e, Slot::Top, &mut diags));
    diags
}

/// Redundant pairs within one expression.
pub fn check_expr(registry: &Registry, e: &Expr) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    visit(registry, e, Slot::Top, &mut diags);
    diags
}

fn visit(registry: &Registry, e: &Expr, slot: Slot, diags: &mut Vec<Diagnostic>) {
    match &e.kind {
        ExprKind::Paren(inner) => {
            if inner.is_atom() || !needs_parens(registry, inner, slot) {
                diags.push(Diagnostic::error(e.pos, "redundant parentheses"));
            }
            visit(registry, inner, Slot::Top, diags);
        }
        ExprKind::Unary { op, operand } => {
            let prec = unary_level(registry, op);
            visit(registry, operand, Slot::Operand { prec }, diags);
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let (prec, assoc) = binary_level(registry, op);
            visit(registry, lhs, Slot::Left { prec, assoc }, diags);
            visit(registry, rhs, Slot::Right { prec, assoc }, diags);
        }
        ExprKind::Call { args, .. } => {
            for a in args {
                visit(registry, a, Slot::Top, diags);
            }
        }
        ExprKind::Path(p) => {
            for s in &p.segments {
                if let Segment::Index(i) = s {
                    visit(registry, i, Slot::Top, diags);
                }
            }
        }
        ExprKind::Int(_) | ExprKind::Real(_) | ExprKind::Str(_) => {}
    }
}

/// Inserts exactly the parentheses the tree needs; existing `Paren` nodes are
/// dropped first.
pub fn parenthesize(registry: &Registry, e: &Expr) -> Expr {
    fn go(registry: &Registry, e: &Expr, slot: Slot) -> Expr {
        let kind = match &e.kind {
            ExprKind::Paren(inner) => return go(registry, inner, slot),
            ExprKind::Unary { op, operand } => {
                let prec = unary_level(registry, op);
                ExprKind::Unary {
                    op: op.clone(),
                    operand: Box::new(go(registry, operand, Slot::Operand { prec })),
                }
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let (prec, assoc) = binary_level(registry, op);
                ExprKind::Binary {
                    op: op.clone(),
                    lhs: Box::new(go(registry, lhs, Slot::Left { prec, assoc })),
                    rhs: Box::new(go(registry, rhs, Slot::Right { prec, assoc })),
                }
            }
            ExprKind::Call { name, args } => ExprKind::Call {
                name: name.clone(),
                args: args.iter().map(|a| go(registry, a, Slot::Top)).collect(),
            },
            ExprKind::Path(p) => ExprKind::Path(Path {
                root: p.root.clone(),
                segments: p
                    .segments
                    .iter()
                    .map(|s| match s {
                        Segment::Index(i) => Segment::Index(go(registry, i, Slot::Top)),
                        f => f.clone(),
                    })
                    .collect(),
                pos: p.pos,
            }),
            k => k.clone(),
        };
        let out = Expr::new(kind, e.pos);
        if needs_parens(registry, &out, slot) {
            Expr::new(ExprKind::Paren(Box::new(out)), e.pos)
        } else {
            out
        }
    }
    go(registry, &e.strip_parens(), Slot::Top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{lexer::tokenize, parser::parse};

    fn diags_for(expr: &str) -> Vec<Diagnostic> {
        let text = format!("program P; x := {expr}; endprogram;");
        let prog = parse(&tokenize(&text).unwrap()).unwrap();
        check_redundant_parens(&prog)
    }

    #[test]
    fn spec_examples() {
        assert!(diags_for("(a + b) * c").is_empty());
        assert_eq!(diags_for("a + (b * c)").len(), 1);
        assert_eq!(diags_for("((a))").len(), 2);
    }

    #[test]
    fn associativity_matters() {
        assert!(diags_for("a - (b - c)").is_empty());
        assert_eq!(diags_for("(a - b) - c").len(), 1);
        assert!(diags_for("a + (b + c)").is_empty());
        assert!(diags_for("(a ^ b) ^ c").is_empty());
        assert_eq!(diags_for("a ^ (b ^ c)").len(), 1);
    }

    #[test]
    fn unary_cases() {
        assert!(diags_for("(-a) ^ 2").is_empty());
        assert_eq!(diags_for("-(a ^ 2)").len(), 1);
        assert!(diags_for("-(a * b)").is_empty());
        assert_eq!(diags_for("a * (-b)").len(), 1);
        assert_eq!(diags_for("(-a) * b").len(), 1);
        assert!(diags_for("NOT (a AND b)").is_empty());
        assert!(diags_for("(a < b) AND (c < d)").len() == 2);
    }

    #[test]
    fn call_arguments_and_top_level() {
        assert!(diags_for("SQRT (2)").is_empty());
        assert_eq!(diags_for("SQRT ((2))").len(), 1);
        assert_eq!(diags_for("(a + b)").len(), 1);
        assert_eq!(diags_for("v[(i + 1)]").len(), 1);
    }

    #[test]
    fn positions_point_at_open_paren() {
        let d = diags_for("a + (b * c)");
        assert_eq!(d[0].pos, crate::diag::SourcePos::new(1, 21));
    }
}
