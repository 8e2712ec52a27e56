//! Lowering of a typed program to three-address commands over frame slots.
//!
//! The frame holds the declared variables first, then temporaries, then
//! constants. Temporaries are reused from one statement to the next.

use std::collections::HashMap;

use thiserror::Error;

use super::opcode::*;
use super::program::{CompiledProgram, Const, Slot, SlotKind, TypeEntry, NO_NAME, VERSION};
use crate::sema::{Place, Step, TExpr, TExprKind, TStmt, TypedProgram};
use crate::types::Ty;
use crate::vm::Value;

pub const MAX_WORDS: usize = u16::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("code exceeds {MAX_WORDS} words ({0})")]
    CodeTooLarge(usize),
    #[error("frame exceeds 65535 slots ({0})")]
    TooManySlots(usize),
    #[error("too many {what} ({count})")]
    PoolOverflow { what: &'static str, count: usize },
    #[error("string constant of {0} bytes is too long")]
    StringTooLong(usize),
    #[error("constant of type {0} cannot be stored")]
    UnsupportedConstant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SlotRef {
    Var(usize),
    Temp(usize),
    Const(usize),
}

#[derive(Debug, Clone, Copy)]
enum Operand {
    Slot(SlotRef),
    Jump(usize),
    Word(u16),
}

enum Item {
    Command(u16, Vec<Operand>),
    Mark(usize),
}

#[derive(Clone, PartialEq)]
enum ConstKey {
    Bool(bool),
    Int(i64),
    Real(u64),
    Str(String),
}

struct Lowering<'a> {
    program: &'a TypedProgram,
    items: Vec<Item>,
    labels: usize,
    temps: Vec<Ty>,
    temp_busy: Vec<bool>,
    consts: Vec<ConstKey>,
}

pub fn compile(program: &TypedProgram) -> Result<CompiledProgram, CompileError> {
    let mut l = Lowering {
        program,
        items: Vec::new(),
        labels: program.labels.len(),
        temps: Vec::new(),
        temp_busy: Vec::new(),
        consts: Vec::new(),
    };
    l.block(&program.body)?;
    l.items.push(Item::Command(END, Vec::new()));
    l.finish()
}

impl Lowering<'_> {
    fn new_label(&mut self) -> usize {
        self.labels += 1;
        self.labels - 1
    }

    fn emit(&mut self, opcode: u16, operands: Vec<Operand>) {
        self.items.push(Item::Command(opcode, operands));
    }

    fn temp(&mut self, ty: &Ty) -> SlotRef {
        for (i, t) in self.temps.iter().enumerate() {
            if !self.temp_busy[i] && t == ty && same_names(t, ty) {
                self.temp_busy[i] = true;
                return SlotRef::Temp(i);
            }
        }
        self.temps.push(ty.clone());
        self.temp_busy.push(true);
        SlotRef::Temp(self.temps.len() - 1)
    }

    fn constant(&mut self, v: &Value) -> Result<SlotRef, CompileError> {
        let key = match v {
            Value::Bool(b) => ConstKey::Bool(*b),
            Value::Int(i) => ConstKey::Int(*i),
            Value::Real(x) => ConstKey::Real(x.to_bits()),
            Value::Str(s) => {
                if s.len() > u16::MAX as usize {
                    return Err(CompileError::StringTooLong(s.len()));
                }
                ConstKey::Str(s.clone())
            }
            other => return Err(CompileError::UnsupportedConstant(other.ty().to_string())),
        };
        let i = match self.consts.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                self.consts.push(key);
                self.consts.len() - 1
            }
        };
        Ok(SlotRef::Const(i))
    }

    fn block(&mut self, stmts: &[TStmt]) -> Result<(), CompileError> {
        for s in stmts {
            self.temp_busy.iter_mut().for_each(|b| *b = false);
            self.stmt(s)?;
        }
        Ok(())
    }

    fn stmt(&mut self, s: &TStmt) -> Result<(), CompileError> {
        match s {
            TStmt::Assign { target, value, .. } => self.assign(target, value)?,
            TStmt::Call {
                opcode, args, result, ..
            } => {
                let mut ops = self.args(args)?;
                if let Some(ty) = result {
                    ops.push(Operand::Slot(self.temp(ty)));
                }
                self.emit(*opcode, ops);
            }
            TStmt::Goto { label, .. } => self.emit(JUMP, vec![Operand::Jump(*label)]),
            TStmt::Label(id) => self.items.push(Item::Mark(*id)),
            TStmt::Exit(_) => self.emit(EXIT, Vec::new()),
            TStmt::If {
                cond,
                then,
                otherwise,
            } => {
                let c = self.expr(cond, None)?;
                let else_label = self.new_label();
                self.emit(JUMP_IF_FALSE, vec![Operand::Slot(c), Operand::Jump(else_label)]);
                self.block(then)?;
                if otherwise.is_empty() {
                    self.items.push(Item::Mark(else_label));
                } else {
                    let end = self.new_label();
                    self.emit(JUMP, vec![Operand::Jump(end)]);
                    self.items.push(Item::Mark(else_label));
                    self.block(otherwise)?;
                    self.items.push(Item::Mark(end));
                }
            }
            TStmt::Case { arms, otherwise } => {
                let end = self.new_label();
                for (cond, body) in arms {
                    self.temp_busy.iter_mut().for_each(|b| *b = false);
                    let c = self.expr(cond, None)?;
                    let next = self.new_label();
                    self.emit(JUMP_IF_FALSE, vec![Operand::Slot(c), Operand::Jump(next)]);
                    self.block(body)?;
                    self.emit(JUMP, vec![Operand::Jump(end)]);
                    self.items.push(Item::Mark(next));
                }
                self.block(otherwise)?;
                self.items.push(Item::Mark(end));
            }
        }
        Ok(())
    }

    fn args(&mut self, args: &[TExpr]) -> Result<Vec<Operand>, CompileError> {
        args.iter()
            .map(|a| self.expr(a, None).map(Operand::Slot))
            .collect()
    }

    /// Evaluates `e`, into `dest` when given, and returns the slot holding it.
    fn expr(&mut self, e: &TExpr, dest: Option<SlotRef>) -> Result<SlotRef, CompileError> {
        match &e.kind {
            TExprKind::Const(v) => {
                let c = self.constant(v)?;
                Ok(self.move_to(c, dest))
            }
            TExprKind::Place(p) if p.steps.is_empty() => Ok(self.move_to(SlotRef::Var(p.var), dest)),
            TExprKind::Place(p) => self.read_place(p, dest),
            TExprKind::Op { opcode, args, .. } => {
                let mut ops = self.args(args)?;
                let out = match dest {
                    Some(d) => d,
                    None => self.temp(&e.ty),
                };
                ops.push(Operand::Slot(out));
                self.emit(*opcode, ops);
                Ok(out)
            }
        }
    }

    fn move_to(&mut self, from: SlotRef, dest: Option<SlotRef>) -> SlotRef {
        match dest {
            Some(d) => {
                self.emit(MOVE, vec![Operand::Slot(from), Operand::Slot(d)]);
                d
            }
            None => from,
        }
    }

    /// Slot operand selecting each step: a field number or an index slot.
    fn selectors(&mut self, steps: &[Step]) -> Result<Vec<Operand>, CompileError> {
        steps
            .iter()
            .map(|s| match s {
                Step::Field { index, .. } => Ok(Operand::Word(*index)),
                Step::Index { index, .. } => self.expr(index, None).map(Operand::Slot),
            })
            .collect()
    }

    /// Copies every step but the last into temporaries; returns the chain of
    /// containers starting at the variable.
    fn descend(&mut self, p: &Place, sel: &[Operand]) -> Vec<SlotRef> {
        let mut chain = vec![SlotRef::Var(p.var)];
        for (step, s) in p.steps.iter().zip(sel).take(p.steps.len() - 1) {
            let t = self.temp(step.ty());
            let cur = *chain.last().unwrap();
            let op = match step {
                Step::Field { .. } => COPY_FIELD,
                Step::Index { .. } => COPY_INDEX,
            };
            self.emit(op, vec![Operand::Slot(cur), *s, Operand::Slot(t)]);
            chain.push(t);
        }
        chain
    }

    fn read_place(&mut self, p: &Place, dest: Option<SlotRef>) -> Result<SlotRef, CompileError> {
        let sel = self.selectors(&p.steps)?;
        let chain = self.descend(p, &sel);
        let last = p.steps.last().unwrap();
        let out = match dest {
            Some(d) => d,
            None => self.temp(last.ty()),
        };
        let op = match last {
            Step::Field { .. } => GET_FIELD,
            Step::Index { .. } => GET_INDEX,
        };
        self.emit(
            op,
            vec![
                Operand::Slot(*chain.last().unwrap()),
                *sel.last().unwrap(),
                Operand::Slot(out),
            ],
        );
        Ok(out)
    }

    fn assign(&mut self, target: &Place, value: &TExpr) -> Result<(), CompileError> {
        if target.steps.is_empty() {
            self.expr(value, Some(SlotRef::Var(target.var)))?;
            return Ok(());
        }
        let v = self.expr(value, None)?;
        let sel = self.selectors(&target.steps)?;
        let chain = self.descend(target, &sel);
        let n = target.steps.len();
        let set = |step: &Step, put: bool| match (step, put) {
            (Step::Field { .. }, false) => SET_FIELD,
            (Step::Index { .. }, false) => SET_INDEX,
            (Step::Field { .. }, true) => PUT_FIELD,
            (Step::Index { .. }, true) => PUT_INDEX,
        };
        self.emit(
            set(&target.steps[n - 1], false),
            vec![Operand::Slot(v), sel[n - 1], Operand::Slot(chain[n - 1])],
        );
        for i in (0..n - 1).rev() {
            self.emit(
                set(&target.steps[i], true),
                vec![Operand::Slot(chain[i + 1]), sel[i], Operand::Slot(chain[i])],
            );
        }
        Ok(())
    }

    fn finish(self) -> Result<CompiledProgram, CompileError> {
        let nv = self.program.vars.len();
        let nt = self.temps.len();
        let total = nv + nt + self.consts.len();
        if total > u16::MAX as usize {
            return Err(CompileError::TooManySlots(total));
        }
        let slot_index = |r: SlotRef| match r {
            SlotRef::Var(i) => i,
            SlotRef::Temp(i) => nv + i,
            SlotRef::Const(i) => nv + nt + i,
        } as u16;

        let mut targets = vec![0usize; self.labels];
        let mut len = 0usize;
        for item in &self.items {
            match item {
                Item::Mark(l) => targets[*l] = len,
                Item::Command(_, ops) => len += 1 + ops.len(),
            }
        }
        if len > MAX_WORDS {
            return Err(CompileError::CodeTooLarge(len));
        }
        let mut code = Vec::with_capacity(len);
        for item in &self.items {
            if let Item::Command(op, ops) = item {
                code.push(*op);
                for o in ops {
                    code.push(match *o {
                        Operand::Slot(s) => slot_index(s),
                        Operand::Jump(l) => targets[l] as u16,
                        Operand::Word(w) => w,
                    });
                }
            }
        }

        let mut tables = Tables::default();
        let mut slots = Vec::with_capacity(total);
        for v in &self.program.vars {
            let ty = tables.ty(&v.ty)?;
            let aux = tables.string(&v.name)?;
            slots.push(Slot {
                ty,
                kind: SlotKind::Var,
                aux,
            });
        }
        for t in &self.temps {
            slots.push(Slot {
                ty: tables.ty(t)?,
                kind: SlotKind::Temp,
                aux: NO_NAME,
            });
        }
        let mut consts = Vec::with_capacity(self.consts.len());
        for (i, k) in self.consts.iter().enumerate() {
            let (c, ty) = match k {
                ConstKey::Bool(b) => (Const::Bool(*b), Ty::Bool),
                ConstKey::Int(v) => (Const::Int(*v), Ty::Int),
                ConstKey::Real(bits) => (Const::Real(f64::from_bits(*bits)), Ty::Real),
                ConstKey::Str(s) => (Const::Str(tables.string(s)?), Ty::Str),
            };
            consts.push(c);
            slots.push(Slot {
                ty: tables.ty(&ty)?,
                kind: SlotKind::Const,
                aux: i as u16,
            });
        }
        let name = self.program.name.clone();
        if name.len() > u16::MAX as usize {
            return Err(CompileError::StringTooLong(name.len()));
        }
        Ok(CompiledProgram {
            name,
            version: VERSION,
            strings: tables.strings,
            types: tables.types,
            consts,
            slots,
            code,
        })
    }
}

/// Record and array names take part in slot typing so that temporaries keep
/// the declared name of the value they hold.
fn same_names(a: &Ty, b: &Ty) -> bool {
    match (a, b) {
        (Ty::Record(x), Ty::Record(y)) => x.name == y.name,
        (Ty::Array(x), Ty::Array(y)) => x.name == y.name,
        _ => true,
    }
}

#[derive(Default)]
struct Tables {
    strings: Vec<String>,
    string_index: HashMap<String, u16>,
    types: Vec<TypeEntry>,
    type_keys: Vec<Ty>,
}

impl Tables {
    fn string(&mut self, s: &str) -> Result<u16, CompileError> {
        if let Some(&i) = self.string_index.get(s) {
            return Ok(i);
        }
        if s.len() > u16::MAX as usize {
            return Err(CompileError::StringTooLong(s.len()));
        }
        let i = self.strings.len();
        if i >= NO_NAME as usize {
            return Err(CompileError::PoolOverflow { what: "strings", count: i + 1 });
        }
        self.strings.push(s.to_string());
        self.string_index.insert(s.to_string(), i as u16);
        Ok(i as u16)
    }

    fn ty(&mut self, ty: &Ty) -> Result<u16, CompileError> {
        if let Some(i) = self
            .type_keys
            .iter()
            .position(|k| k == ty && deep_names_eq(k, ty))
        {
            return Ok(i as u16);
        }
        let entry = match ty {
            Ty::Bool => TypeEntry::Bool,
            Ty::Int => TypeEntry::Int,
            Ty::Real => TypeEntry::Real,
            Ty::Str => TypeEntry::Str,
            Ty::Addr => TypeEntry::Addr,
            Ty::Record(r) => {
                let mut fields = Vec::with_capacity(r.fields.len());
                for f in &r.fields {
                    let t = self.ty(&f.ty)?;
                    fields.push((self.string(&f.name)?, t));
                }
                let name = match &r.name {
                    Some(n) => self.string(n)?,
                    None => NO_NAME,
                };
                TypeEntry::Record { name, fields }
            }
            Ty::Array(a) => {
                let elem = self.ty(&a.elem)?;
                let name = match &a.name {
                    Some(n) => self.string(n)?,
                    None => NO_NAME,
                };
                TypeEntry::Array {
                    name,
                    lo: a.lo as i32,
                    hi: a.hi as i32,
                    elem,
                }
            }
        };
        let i = self.types.len();
        if i >= u16::MAX as usize {
            return Err(CompileError::PoolOverflow { what: "types", count: i + 1 });
        }
        self.types.push(entry);
        self.type_keys.push(ty.clone());
        Ok(i as u16)
    }
}

fn deep_names_eq(a: &Ty, b: &Ty) -> bool {
    match (a, b) {
        (Ty::Record(x), Ty::Record(y)) => {
            x.name == y.name
                && x.fields
                    .iter()
                    .zip(&y.fields)
                    .all(|(f, g)| f.name == g.name && deep_names_eq(&f.ty, &g.ty))
        }
        (Ty::Array(x), Ty::Array(y)) => x.name == y.name && deep_names_eq(&x.elem, &y.elem),
        _ => true,
    }
}
