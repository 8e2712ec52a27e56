//! Syntax tree. Every node keeps its source position; [`Program::normalized`]
//! clears them for structural comparison.

use crate::diag::SourcePos;

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub name: String,
    pub types: Vec<TypeDecl>,
    pub vars: Vec<VarDecl>,
    pub body: Vec<Stmt>,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeDecl {
    pub name: String,
    pub def: TypeExpr,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypeExpr {
    /// A type name, possibly of several words (`Линейный размер`).
    Named(String, SourcePos),
    Record(Vec<FieldDecl>),
    Array {
        lo: i64,
        hi: i64,
        elem: Box<TypeExpr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecl {
    pub names: Vec<String>,
    pub ty: TypeExpr,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub names: Vec<String>,
    pub ty: TypeExpr,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Assign { target: Path, value: Expr },
    Call { name: String, args: Vec<Expr> },
    /// A bare name used as a statement (`Редактор;`).
    BareCall(String),
    Goto(String),
    Label(String),
    Exit,
    If {
        cond: Expr,
        then: Vec<Stmt>,
        otherwise: Option<Vec<Stmt>>,
    },
    Case {
        arms: Vec<CaseArm>,
        otherwise: Option<Vec<Stmt>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseArm {
    pub cond: Expr,
    pub body: Vec<Stmt>,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Real(f64),
    Str(String),
    Path(Path),
    Unary { op: String, operand: Box<Expr> },
    Binary { op: String, lhs: Box<Expr>, rhs: Box<Expr> },
    Call { name: String, args: Vec<Expr> },
    Paren(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub root: String,
    pub segments: Vec<Segment>,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Field(String, SourcePos),
    Index(Expr),
}

impl Expr {
    pub fn new(kind: ExprKind, pos: SourcePos) -> Self {
        Self { kind, pos }
    }

    /// Literals, variable paths, calls and parenthesized expressions.
    pub fn is_atom(&self) -> bool {
        !matches!(self.kind, ExprKind::Unary { .. } | ExprKind::Binary { .. })
    }

    /// The same tree with every `Paren` node removed.
    pub fn strip_parens(&self) -> Expr {
        let kind = match &self.kind {
            ExprKind::Paren(inner) => return inner.strip_parens(),
            ExprKind::Unary { op, operand } => ExprKind::Unary {
                op: op.clone(),
                operand: Box::new(operand.strip_parens()),
            },
            ExprKind::Binary { op, lhs, rhs } => ExprKind::Binary {
                op: op.clone(),
                lhs: Box::new(lhs.strip_parens()),
                rhs: Box::new(rhs.strip_parens()),
            },
            ExprKind::Call { name, args } => ExprKind::Call {
                name: name.clone(),
                args: args.iter().map(Expr::strip_parens).collect(),
            },
            ExprKind::Path(p) => ExprKind::Path(p.map_exprs(&Expr::strip_parens)),
            k => k.clone(),
        };
        Expr::new(kind, self.pos)
    }

    fn normalized(&self) -> Expr {
        let kind = match &self.kind {
            ExprKind::Paren(inner) => ExprKind::Paren(Box::new(inner.normalized())),
            ExprKind::Unary { op, operand } => ExprKind::Unary {
                op: op.to_ascii_lowercase(),
                operand: Box::new(operand.normalized()),
            },
            ExprKind::Binary { op, lhs, rhs } => ExprKind::Binary {
                op: op.to_ascii_lowercase(),
                lhs: Box::new(lhs.normalized()),
                rhs: Box::new(rhs.normalized()),
            },
            ExprKind::Call { name, args } => ExprKind::Call {
                name: name.clone(),
                args: args.iter().map(Expr::normalized).collect(),
            },
            ExprKind::Path(p) => ExprKind::Path(p.normalized()),
            k => k.clone(),
        };
        Expr::new(kind, SourcePos::default())
    }
}

impl Path {
    pub fn simple(root: &str, pos: SourcePos) -> Self {
        Self {
            root: root.to_string(),
            segments: Vec::new(),
            pos,
        }
    }

    fn map_exprs(&self, f: &dyn Fn(&Expr) -> Expr) -> Path {
        Path {
            root: self.root.clone(),
            segments: self
                .segments
                .iter()
                .map(|s| match s {
                    Segment::Field(n, p) => Segment::Field(n.clone(), *p),
                    Segment::Index(e) => Segment::Index(f(e)),
                })
                .collect(),
            pos: self.pos,
        }
    }

    fn normalized(&self) -> Path {
        let mut p = self.map_exprs(&Expr::normalized);
        p.pos = SourcePos::default();
        for s in &mut p.segments {
            if let Segment::Field(_, pos) = s {
                *pos = SourcePos::default();
            }
        }
        p
    }
}

impl TypeExpr {
    fn normalized(&self) -> TypeExpr {
        match self {
            TypeExpr::Named(n, _) => TypeExpr::Named(n.clone(), SourcePos::default()),
            TypeExpr::Record(fields) => TypeExpr::Record(
                fields
                    .iter()
                    .map(|f| FieldDecl {
                        names: f.names.clone(),
                        ty: f.ty.normalized(),
                        pos: SourcePos::default(),
                    })
                    .collect(),
            ),
            TypeExpr::Array { lo, hi, elem } => TypeExpr::Array {
                lo: *lo,
                hi: *hi,
                elem: Box::new(elem.normalized()),
            },
        }
    }
}

fn normalize_block(stmts: &[Stmt]) -> Vec<Stmt> {
    stmts.iter().map(Stmt::normalized).collect()
}

impl Stmt {
    fn normalized(&self) -> Stmt {
        let kind = match &self.kind {
            StmtKind::Assign { target, value } => StmtKind::Assign {
                target: target.normalized(),
                value: value.normalized(),
            },
            StmtKind::Call { name, args } => StmtKind::Call {
                name: name.clone(),
                args: args.iter().map(Expr::normalized).collect(),
            },
            StmtKind::If {
                cond,
                then,
                otherwise,
            } => StmtKind::If {
                cond: cond.normalized(),
                then: normalize_block(then),
                otherwise: otherwise.as_deref().map(normalize_block),
            },
            StmtKind::Case { arms, otherwise } => StmtKind::Case {
                arms: arms
                    .iter()
                    .map(|a| CaseArm {
                        cond: a.cond.normalized(),
                        body: normalize_block(&a.body),
                        pos: SourcePos::default(),
                    })
                    .collect(),
                otherwise: otherwise.as_deref().map(normalize_block),
            },
            k => k.clone(),
        };
        Stmt {
            kind,
            pos: SourcePos::default(),
        }
    }
}

impl Program {
    /// Copy with all positions cleared and word-operator spelling unified,
    /// for structural comparison.
    pub fn normalized(&self) -> Program {
        Program {
            name: self.name.clone(),
            types: self
                .types
                .iter()
                .map(|t| TypeDecl {
                    name: t.name.clone(),
                    def: t.def.normalized(),
                    pos: SourcePos::default(),
                })
                .collect(),
            vars: self
                .vars
                .iter()
                .map(|v| VarDecl {
                    names: v.names.clone(),
                    ty: v.ty.normalized(),
                    pos: SourcePos::default(),
                })
                .collect(),
            body: normalize_block(&self.body),
            pos: SourcePos::default(),
        }
    }

    /// Visits every statement, depth first, in source order.
    pub fn walk_stmts<'a>(&'a self, f: &mut dyn FnMut(&'a Stmt)) {
        fn go<'a>(stmts: &'a [Stmt], f: &mut dyn FnMut(&'a Stmt)) {
            for s in stmts {
                f(s);
                match &s.kind {
                    StmtKind::If { then, otherwise, .. } => {
                        go(then, f);
                        if let Some(o) = otherwise {
                            go(o, f);
                        }
                    }
                    StmtKind::Case { arms, otherwise } => {
                        for a in arms {
                            go(&a.body, f);
                        }
                        if let Some(o) = otherwise {
                            go(o, f);
                        }
                    }
                    _ => {}
                }
            }
        }
        go(&self.body, f);
    }

    /// Every expression directly owned by a statement (conditions, assigned
    /// values, call arguments, index expressions in targets).
    pub fn walk_exprs<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        self.walk_stmts(&mut |s| match &s.kind {
            StmtKind::Assign { target, value } => {
                for seg in &target.segments {
                    if let Segment::Index(e) = seg {
                        f(e);
                    }
                }
                f(value);
            }
            StmtKind::Call { args, .. } => args.iter().for_each(&mut *f),
            StmtKind::If { cond, .. } => f(cond),
            StmtKind::Case { arms, .. } => arms.iter().for_each(|a| f(&a.cond)),
            _ => {}
        });
    }
}
