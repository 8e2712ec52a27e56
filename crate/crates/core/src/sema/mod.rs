//! Name resolution and type checking.

mod typed;

pub use typed::*;

use std::collections::HashMap;

use crate::builtins::{Fixity, Registry};
use crate::diag::{Diagnostic, SourcePos};
use crate::frontend::ast::{self, ExprKind, Segment, StmtKind, TypeExpr};
use crate::frontend::ident::fold;
use crate::types::{catalog, Ty};
use crate::vm::Value;

/// Largest array length a declaration may ask for.
pub const MAX_ARRAY_LEN: i64 = 65_536;

pub fn analyze(program: &ast::Program) -> Result<TypedProgram, Vec<Diagnostic>> {
    analyze_with(program, Registry::global())
}

pub fn analyze_with(program: &ast::Program, registry: &Registry) -> Result<TypedProgram, Vec<Diagnostic>> {
    let mut s = Sema {
        registry,
        diags: Vec::new(),
        user_types: HashMap::new(),
        vars: Vec::new(),
        var_index: HashMap::new(),
        labels: Vec::new(),
        label_index: HashMap::new(),
    };
    s.build_type_table(&program.types);
    s.declare_vars(&program.vars);
    s.collect_labels(program);
    let body = s.block(&program.body);
    if s.diags.is_empty() {
        Ok(TypedProgram {
            name: program.name.clone(),
            vars: s.vars,
            labels: s.labels,
            body,
        })
    } else {
        crate::diag::sort_diagnostics(&mut s.diags);
        Err(s.diags)
    }
}

/// Resolves the TYPE section alone.
pub fn build_type_table(decls: &[ast::TypeDecl]) -> Result<HashMap<String, Ty>, Vec<Diagnostic>> {
    let mut s = Sema {
        registry: Registry::global(),
        diags: Vec::new(),
        user_types: HashMap::new(),
        vars: Vec::new(),
        var_index: HashMap::new(),
        labels: Vec::new(),
        label_index: HashMap::new(),
    };
    s.build_type_table(decls);
    if s.diags.is_empty() {
        Ok(s.user_types)
    } else {
        Err(s.diags)
    }
}

struct Sema<'r> {
    registry: &'r Registry,
    diags: Vec<Diagnostic>,
    user_types: HashMap<String, Ty>,
    vars: Vec<VarInfo>,
    var_index: HashMap<String, usize>,
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mark {
    Visiting,
    Failed,
}

type SResult<T> = Result<T, Diagnostic>;

fn err<T>(pos: SourcePos, msg: impl Into<String>) -> SResult<T> {
    Err(Diagnostic::error(pos, msg))
}

impl Sema<'_> {
    fn build_type_table(&mut self, decls: &[ast::TypeDecl]) {
        let mut by_name: HashMap<String, &ast::TypeDecl> = HashMap::new();
        for d in decls {
            let key = fold(&d.name);
            if catalog().lookup(&d.name).is_some() {
                self.diags.push(Diagnostic::error(
                    d.pos,
                    format!("'{}' is a built-in type and cannot be redeclared", d.name),
                ));
            } else if by_name.insert(key, d).is_some() {
                self.diags.push(Diagnostic::error(d.pos, format!("type '{}' is declared twice", d.name)));
            }
        }
        let mut marks: HashMap<String, Mark> = HashMap::new();
        for d in decls {
            let key = fold(&d.name);
            if by_name.get(&key).is_some_and(|x| std::ptr::eq(*x, d)) {
                let _ = self.resolve_decl(&key, &by_name, &mut marks);
            }
        }
    }

    fn resolve_decl(
        &mut self,
        key: &str,
        decls: &HashMap<String, &ast::TypeDecl>,
        marks: &mut HashMap<String, Mark>,
    ) -> Option<Ty> {
        if let Some(t) = self.user_types.get(key) {
            return Some(t.clone());
        }
        let decl = decls[key];
        match marks.get(key) {
            Some(Mark::Visiting) => {
                self.diags.push(Diagnostic::error(
                    decl.pos,
                    format!("recursive type '{}'", decl.name),
                ));
                marks.insert(key.to_string(), Mark::Failed);
                return None;
            }
            Some(Mark::Failed) => return None,
            None => {}
        }
        marks.insert(key.to_string(), Mark::Visiting);
        let ty = self.type_expr(&decl.def, Some(&decl.name), decl.pos, &mut |s, name, pos| {
            let k = fold(name);
            if decls.contains_key(&k) {
                s.resolve_decl(&k, decls, marks)
            } else {
                s.named_type(name, pos)
            }
        });
        match ty {
            Some(t) => {
                marks.remove(key);
                self.user_types.insert(key.to_string(), t.clone());
                Some(t)
            }
            None => {
                marks.insert(key.to_string(), Mark::Failed);
                None
            }
        }
    }

    /// Built-in or already resolved user type.
    fn named_type(&mut self, name: &str, pos: SourcePos) -> Option<Ty> {
        if let Some(t) = self.user_types.get(&fold(name)) {
            return Some(t.clone());
        }
        if let Some(t) = catalog().lookup(name) {
            return Some(t.clone());
        }
        self.diags.push(Diagnostic::error(pos, format!("unknown type '{name}'")));
        None
    }

    fn type_expr(
        &mut self,
        t: &TypeExpr,
        name: Option<&str>,
        pos: SourcePos,
        lookup: &mut dyn FnMut(&mut Self, &str, SourcePos) -> Option<Ty>,
    ) -> Option<Ty> {
        match t {
            TypeExpr::Named(n, p) => lookup(self, n, *p),
            TypeExpr::Array { lo, hi, elem } => {
                let elem = self.type_expr(elem, None, pos, lookup)?;
                if lo > hi {
                    self.diags.push(Diagnostic::error(pos, format!("array bounds {lo}..{hi} are reversed")));
                    return None;
                }
                let fits = |v: i64| i32::try_from(v).is_ok();
                if !fits(*lo) || !fits(*hi) || hi - lo + 1 > MAX_ARRAY_LEN {
                    self.diags.push(Diagnostic::error(
                        pos,
                        format!("array {lo}..{hi} is larger than {MAX_ARRAY_LEN} elements"),
                    ));
                    return None;
                }
                Some(Ty::array(name, *lo, *hi, elem))
            }
            TypeExpr::Record(fields) => {
                let mut out: Vec<(String, Ty)> = Vec::new();
                let mut seen = HashMap::new();
                let mut ok = true;
                for f in fields {
                    let ty = self.type_expr(&f.ty, None, f.pos, lookup);
                    for n in &f.names {
                        if seen.insert(fold(n), ()).is_some() {
                            self.diags.push(Diagnostic::error(f.pos, format!("field '{n}' is declared twice")));
                            ok = false;
                        }
                        match &ty {
                            Some(t) => out.push((n.clone(), t.clone())),
                            None => ok = false,
                        }
                    }
                }
                if out.is_empty() && ok {
                    self.diags.push(Diagnostic::error(pos, "record has no fields"));
                    return None;
                }
                ok.then(|| Ty::record(name, out.iter().map(|(n, t)| (n.as_str(), t.clone())).collect()))
            }
        }
    }

    fn name_taken(&self, name: &str) -> Option<&'static str> {
        let key = fold(name);
        if self.var_index.contains_key(&key) {
            Some("a variable")
        } else if self.user_types.contains_key(&key) || catalog().lookup(name).is_some() {
            Some("a type")
        } else if self.registry.constants().lookup(name).is_some() {
            Some("a built-in constant")
        } else if self.registry.lookup(name).is_some() {
            Some("a built-in operation")
        } else {
            None
        }
    }

    fn declare_vars(&mut self, decls: &[ast::VarDecl]) {
        for d in decls {
            let ty = self.type_expr(&d.ty, None, d.pos, &mut |s, n, p| s.named_type(n, p));
            for name in &d.names {
                if let Some(what) = self.name_taken(name) {
                    self.diags
                        .push(Diagnostic::error(d.pos, format!("'{name}' is already {what}")));
                    continue;
                }
                let Some(ty) = ty.clone() else { continue };
                if ty == Ty::Addr {
                    self.diags.push(Diagnostic::error(
                        d.pos,
                        format!("variable '{name}': Адрес is internal and cannot be declared"),
                    ));
                    continue;
                }
                self.var_index.insert(fold(name), self.vars.len());
                self.vars.push(VarInfo {
                    name: name.clone(),
                    ty,
                    pos: d.pos,
                });
            }
        }
    }

    fn collect_labels(&mut self, program: &ast::Program) {
        let mut found = Vec::new();
        program.walk_stmts(&mut |s| {
            if let StmtKind::Label(name) = &s.kind {
                found.push((name.clone(), s.pos));
            }
        });
        for (name, pos) in found {
            let key = fold(&name);
            if self.var_index.contains_key(&key) {
                self.diags.push(Diagnostic::error(pos, format!("label '{name}' clashes with a variable")));
            }
            if !self.label_index.contains_key(&key) {
                self.label_index.insert(key, self.labels.len());
                self.labels.push(name);
            }
        }
    }

    fn block(&mut self, stmts: &[ast::Stmt]) -> Vec<TStmt> {
        let mut out = Vec::new();
        for s in stmts {
            match self.statement(s) {
                Ok(t) => out.push(t),
                Err(d) => self.diags.push(d),
            }
        }
        out
    }

    fn statement(&mut self, s: &ast::Stmt) -> SResult<TStmt> {
        let pos = s.pos;
        Ok(match &s.kind {
            StmtKind::Assign { target, value } => {
                let target = self.target(target)?;
                let value = self.expr(value)?;
                if !target.ty.accepts(&value.ty) {
                    return err(
                        value.pos,
                        format!("type mismatch: cannot assign {} to {}", value.ty, target.ty),
                    );
                }
                TStmt::Assign { target, value, pos }
            }
            StmtKind::Call { name, args } => {
                let (opcode, name, args, result) = self.call(name, args, pos, true)?;
                TStmt::Call {
                    opcode,
                    name,
                    args,
                    result,
                    pos,
                }
            }
            StmtKind::BareCall(name) => {
                let (opcode, name, args, result) = self.bare(name, pos)?;
                TStmt::Call {
                    opcode,
                    name,
                    args,
                    result,
                    pos,
                }
            }
            StmtKind::Goto(l) => match self.label_index.get(&fold(l)) {
                Some(&label) => TStmt::Goto { label, pos },
                None => return err(pos, format!("GOTO to undeclared label '{l}'")),
            },
            StmtKind::Label(l) => TStmt::Label(self.label_index[&fold(l)]),
            StmtKind::Exit => TStmt::Exit(pos),
            StmtKind::If {
                cond,
                then,
                otherwise,
            } => {
                let cond = self.condition(cond, "IF");
                let then = self.block(then);
                let otherwise = otherwise.as_deref().map(|o| self.block(o)).unwrap_or_default();
                TStmt::If {
                    cond: cond?,
                    then,
                    otherwise,
                }
            }
            StmtKind::Case { arms, otherwise } => {
                let mut out = Vec::new();
                let mut first_err = None;
                for a in arms {
                    let cond = self.condition(&a.cond, "ON");
                    let body = self.block(&a.body);
                    match cond {
                        Ok(c) => out.push((c, body)),
                        Err(e) => {
                            first_err.get_or_insert(e);
                        }
                    }
                }
                let otherwise = otherwise.as_deref().map(|o| self.block(o)).unwrap_or_default();
                if let Some(e) = first_err {
                    return Err(e);
                }
                TStmt::Case {
                    arms: out,
                    otherwise,
                }
            }
        })
    }

    fn condition(&mut self, e: &ast::Expr, what: &str) -> SResult<TExpr> {
        let c = self.expr(e)?;
        if c.ty != Ty::Bool {
            return err(c.pos, format!("{what} condition must be Логическое, got {}", c.ty));
        }
        Ok(c)
    }

    fn target(&mut self, p: &ast::Path) -> SResult<Place> {
        if !self.var_index.contains_key(&fold(&p.root)) {
            if self.registry.constants().lookup(&p.root).is_some() {
                return err(p.pos, format!("assignment to a built-in constant '{}'", p.root));
            }
            if self.registry.lookup(&p.root).is_some() {
                return err(p.pos, format!("cannot assign to built-in operation '{}'", p.root));
            }
        }
        self.place(p)
    }

    fn place(&mut self, p: &ast::Path) -> SResult<Place> {
        let Some(&var) = self.var_index.get(&fold(&p.root)) else {
            return err(p.pos, format!("unknown identifier '{}'", p.root));
        };
        let mut ty = self.vars[var].ty.clone();
        let mut steps = Vec::new();
        for seg in &p.segments {
            match seg {
                Segment::Field(name, pos) => {
                    let Some(rec) = ty.as_record() else {
                        return err(*pos, format!("field access '.{name}' on non-record type {ty}"));
                    };
                    if name.starts_with('_') {
                        return err(*pos, format!("field '{name}' is reserved"));
                    }
                    let Some(index) = rec.field_index(name) else {
                        return err(*pos, format!("{ty} has no field '{name}'"));
                    };
                    ty = rec.fields[index].ty.clone();
                    steps.push(Step::Field {
                        index: index as u16,
                        ty: ty.clone(),
                    });
                }
                Segment::Index(e) => {
                    let Some(arr) = ty.as_array() else {
                        return err(e.pos, format!("indexing a non-array type {ty}"));
                    };
                    let (lo, hi) = (arr.lo, arr.hi);
                    let elem = arr.elem.clone();
                    let index = self.expr(e)?;
                    if index.ty != Ty::Int {
                        return err(index.pos, format!("array index must be Целое, got {}", index.ty));
                    }
                    if let TExprKind::Const(Value::Int(i)) = index.kind {
                        if i < lo || i > hi {
                            return err(index.pos, format!("index {i} is outside {lo}..{hi}"));
                        }
                    }
                    ty = elem;
                    steps.push(Step::Index {
                        index: Box::new(index),
                        ty: ty.clone(),
                    });
                }
            }
        }
        Ok(Place { var, steps, ty })
    }

    fn bare(&mut self, name: &str, pos: SourcePos) -> SResult<(u16, String, Vec<TExpr>, Option<Ty>)> {
        match self.registry.lookup_callable(name) {
            Some(d) if d.fixity == Fixity::Bare || (d.fixity == Fixity::Call && d.arity() == 0) => {
                let result = d.check(&[]).map_err(|m| Diagnostic::error(pos, m))?;
                Ok((d.opcode, d.name.clone(), Vec::new(), result))
            }
            Some(d) if d.fixity == Fixity::Call => {
                err(pos, format!("'{}' needs an argument list", d.name))
            }
            Some(d) => err(pos, format!("'{}' cannot be used here", d.name)),
            None if self.var_index.contains_key(&fold(name)) => {
                err(pos, format!("'{name}' is a variable, not an operation"))
            }
            None => err(pos, format!("unknown operation '{name}'")),
        }
    }

    fn call(
        &mut self,
        name: &str,
        args: &[ast::Expr],
        pos: SourcePos,
        statement: bool,
    ) -> SResult<(u16, String, Vec<TExpr>, Option<Ty>)> {
        let Some(d) = self.registry.lookup_callable(name) else {
            if self.var_index.contains_key(&fold(name)) {
                return err(pos, format!("'{name}' is a variable, not an operation"));
            }
            return err(pos, format!("unknown operation '{name}'"));
        };
        match d.fixity {
            Fixity::Bare => return err(pos, format!("'{}' is used without parentheses", d.name)),
            Fixity::Control => return err(pos, format!("'{}' cannot be used here", d.name)),
            _ => {}
        }
        let (opcode, dname) = (d.opcode, d.name.clone());
        let mut targs = Vec::with_capacity(args.len());
        let mut first_err = None;
        for a in args {
            match self.expr(a) {
                Ok(t) => targs.push(t),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        if let Some(e) = first_err {
            return Err(e);
        }
        let d = self.registry.lookup_callable(name).unwrap();
        let tys: Vec<Ty> = targs.iter().map(|t| t.ty.clone()).collect();
        let result = d.check(&tys).map_err(|m| Diagnostic::error(pos, m))?;
        if !statement && result.is_none() {
            return err(pos, format!("'{dname}' does not return a value"));
        }
        self.check_form_binding(&dname, &targs)?;
        Ok((opcode, dname, targs, result))
    }

    /// Form fields name a variable by a string; check it when literal.
    fn check_form_binding(&self, name: &str, args: &[TExpr]) -> SResult<()> {
        let key = fold(name);
        if key != fold("Новое_поле") && key != fold("Новое_полеXY") {
            return Ok(());
        }
        let Some(arg) = args.get(1) else { return Ok(()) };
        let TExprKind::Const(Value::Str(var)) = &arg.kind else {
            return Ok(());
        };
        let Some(&i) = self.var_index.get(&fold(var)) else {
            return err(arg.pos, format!("form field is bound to unknown variable '{var}'"));
        };
        match self.vars[i].ty {
            Ty::Int | Ty::Real | Ty::Str => Ok(()),
            ref t => err(
                arg.pos,
                format!("form field variable '{var}' has type {t}; expected Целое, Вещественное or Строка"),
            ),
        }
    }

    fn expr(&mut self, e: &ast::Expr) -> SResult<TExpr> {
        let pos = e.pos;
        let (kind, ty) = match &e.kind {
            ExprKind::Int(i) => (TExprKind::Const(Value::Int(*i)), Ty::Int),
            ExprKind::Real(x) => (TExprKind::Const(Value::Real(*x)), Ty::Real),
            ExprKind::Str(s) => (TExprKind::Const(Value::Str(s.clone())), Ty::Str),
            ExprKind::Paren(inner) => return self.expr(inner),
            ExprKind::Path(p) => {
                if self.var_index.contains_key(&fold(&p.root)) {
                    let place = self.place(p)?;
                    let ty = place.ty.clone();
                    (TExprKind::Place(place), ty)
                } else if let Some(v) = self.registry.constants().lookup(&p.root) {
                    if !p.segments.is_empty() {
                        return err(pos, format!("'{}' is a constant and has no fields", p.root));
                    }
                    (TExprKind::Const(v.clone()), v.ty())
                } else if self.registry.lookup_callable(&p.root).is_some() {
                    if !p.segments.is_empty() {
                        return err(pos, format!("'{}' is an operation and has no fields", p.root));
                    }
                    let (opcode, name, args, result) = self.bare(&p.root, pos)?;
                    let Some(ty) = result else {
                        return err(pos, format!("'{name}' does not return a value"));
                    };
                    (TExprKind::Op { opcode, name, args }, ty)
                } else {
                    return err(pos, format!("unknown identifier '{}'", p.root));
                }
            }
            ExprKind::Call { name, args } => {
                let (opcode, name, args, result) = self.call(name, args, pos, false)?;
                (TExprKind::Op { opcode, name, args }, result.unwrap())
            }
            ExprKind::Unary { op, operand } => {
                let operand = self.expr(operand)?;
                let d = self
                    .registry
                    .lookup_prefix(op)
                    .ok_or_else(|| Diagnostic::error(pos, format!("unknown operator '{op}'")))?;
                let ty = d
                    .check(std::slice::from_ref(&operand.ty))
                    .map_err(|m| Diagnostic::error(pos, format!("type mismatch: {m}")))?
                    .ok_or_else(|| Diagnostic::error(pos, format!("'{op}' has no result")))?;
                (
                    TExprKind::Op {
                        opcode: d.opcode,
                        name: d.name.clone(),
                        args: vec![operand],
                    },
                    ty,
                )
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let lhs = self.expr(lhs)?;
                let rhs = self.expr(rhs)?;
                let d = self
                    .registry
                    .lookup_infix(op)
                    .ok_or_else(|| Diagnostic::error(pos, format!("unknown operator '{op}'")))?;
                let ty = d
                    .check(&[lhs.ty.clone(), rhs.ty.clone()])
                    .map_err(|m| Diagnostic::error(pos, format!("type mismatch: {m}")))?
                    .ok_or_else(|| Diagnostic::error(pos, format!("'{op}' has no result")))?;
                (
                    TExprKind::Op {
                        opcode: d.opcode,
                        name: d.name.clone(),
                        args: vec![lhs, rhs],
                    },
                    ty,
                )
            }
        };
        Ok(TExpr { kind, ty, pos })
    }
}
