//! Typed program: the analyzed form the code generator consumes.

use crate::diag::SourcePos;
use crate::types::Ty;
use crate::vm::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct TypedProgram {
    pub name: String,
    /// Declared variables in slot order.
    pub vars: Vec<VarInfo>,
    /// Label names by label id.
    pub labels: Vec<String>,
    pub body: Vec<TStmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarInfo {
    pub name: String,
    pub ty: Ty,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TExpr {
    pub kind: TExprKind,
    pub ty: Ty,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TExprKind {
    Const(Value),
    Place(Place),
    /// A built-in operation applied to evaluated arguments.
    Op {
        opcode: u16,
        name: String,
        args: Vec<TExpr>,
    },
}

/// A variable, optionally followed by field and index steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Place {
    pub var: usize,
    pub steps: Vec<Step>,
    /// Type of the addressed value.
    pub ty: Ty,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Field { index: u16, ty: Ty },
    Index { index: Box<TExpr>, ty: Ty },
}

impl Step {
    pub fn ty(&self) -> &Ty {
        match self {
            Step::Field { ty, .. } | Step::Index { ty, .. } => ty,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TStmt {
    Assign {
        target: Place,
        value: TExpr,
        pos: SourcePos,
    },
    Call {
        opcode: u16,
        name: String,
        args: Vec<TExpr>,
        result: Option<Ty>,
        pos: SourcePos,
    },
    Goto {
        label: usize,
        pos: SourcePos,
    },
    Label(usize),
    Exit(SourcePos),
    If {
        cond: TExpr,
        then: Vec<TStmt>,
        otherwise: Vec<TStmt>,
    },
    Case {
        arms: Vec<(TExpr, Vec<TStmt>)>,
        otherwise: Vec<TStmt>,
    },
}
