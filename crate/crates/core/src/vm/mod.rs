//! Checked execution of compiled programs.
//!
//! Every slot starts undefined. Before each command every input operand is
//! checked to be defined and of an acceptable type; results are converted to
//! the type of the slot that receives them. Global drawing settings are
//! restored when the run ends, however it ends.

mod error;
mod value;

pub use error::{ErrorKind, OpError, RuntimeError};
pub use value::Value;

use std::collections::HashMap;
use std::path::Path;

use crate::builtins::{ExecCtx, Registry, Signature};
use crate::bytecode::opcode::*;
use crate::bytecode::{CompiledProgram, SlotKind};
use crate::canvas::{Canvas, CanvasError, Point};
use crate::frontend::ident::fold;
use crate::interaction::{DialogState, FieldKind, FormBinding, FormValue, Interactor};
use crate::types::Ty;

pub const STEP_LIMIT_ENV: &str = "PGEN_STEP_LIMIT";
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;
pub const DEFAULT_MAX_ELEMENTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: u64,
    pub max_elements: usize,
}

impl Default for Limits {
    /// The step limit may be overridden through `PGEN_STEP_LIMIT`.
    fn default() -> Self {
        Self::with_step_override(std::env::var(STEP_LIMIT_ENV).ok().as_deref())
    }
}

impl Limits {
    /// Default limits, with the step limit taken from `value` when it is a
    /// positive integer.
    pub fn with_step_override(value: Option<&str>) -> Self {
        let max_steps = value
            .and_then(|v| v.trim().parse().ok())
            .filter(|&n: &u64| n > 0)
            .unwrap_or(DEFAULT_MAX_STEPS);
        Self {
            max_steps,
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Completed,
    HaltedByExit,
    Error(RuntimeError),
}

impl RunOutcome {
    pub fn is_error(&self) -> bool {
        matches!(self, RunOutcome::Error(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            RunOutcome::Completed => "completed",
            RunOutcome::HaltedByExit => "halted-by-exit",
            RunOutcome::Error(_) => "error",
        }
    }
}

/// Slot values of a running program, with variable lookup by name.
#[derive(Debug, Clone)]
pub struct Frame {
    pub values: Vec<Value>,
    pub types: Vec<Ty>,
    names: HashMap<String, usize>,
}

impl Frame {
    pub fn new(cp: &CompiledProgram) -> Self {
        let table = cp.resolve_types();
        let types: Vec<Ty> = cp.slots.iter().map(|s| table[s.ty as usize].clone()).collect();
        let values = cp
            .slots
            .iter()
            .zip(&types)
            .map(|(s, ty)| match s.kind {
                SlotKind::Const => cp.const_value(&cp.consts[s.aux as usize]),
                _ => Value::undefined(ty),
            })
            .collect();
        let names = cp
            .slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == SlotKind::Var)
            .map(|(i, s)| (fold(&cp.strings[s.aux as usize]), i))
            .collect();
        Self {
            values,
            types,
            names,
        }
    }

    pub fn var(&self, name: &str) -> Option<&Value> {
        self.names.get(&fold(name)).map(|&i| &self.values[i])
    }

    fn slot_of(&self, name: &str) -> Result<usize, String> {
        self.names
            .get(&fold(name))
            .copied()
            .ok_or_else(|| format!("no variable named {name}"))
    }
}

impl FormBinding for Frame {
    fn field_kind(&self, name: &str) -> Result<FieldKind, String> {
        let slot = self.slot_of(name)?;
        match &self.types[slot] {
            Ty::Int => Ok(FieldKind::Integer),
            Ty::Real => Ok(FieldKind::Number),
            Ty::Str => Ok(FieldKind::Text),
            other => Err(format!("{name} of type {other} cannot be edited in a form")),
        }
    }

    fn current(&self, name: &str) -> Option<FormValue> {
        match self.var(name)? {
            Value::Int(i) => Some(FormValue::Integer(*i)),
            Value::Real(x) => Some(FormValue::Number(*x)),
            Value::Str(s) => Some(FormValue::Text(s.clone())),
            _ => None,
        }
    }

    fn assign(&mut self, name: &str, value: &FormValue) -> Result<(), String> {
        let slot = self.slot_of(name)?;
        let v = match (&self.types[slot], value) {
            (Ty::Int, FormValue::Integer(i)) => Value::Int(*i),
            (Ty::Real, FormValue::Integer(i)) => Value::Real(*i as f64),
            (Ty::Real, FormValue::Number(x)) if x.is_finite() => Value::Real(*x),
            (Ty::Str, FormValue::Text(s)) => Value::Str(s.clone()),
            (ty, v) => return Err(format!("{v:?} is not a valid {ty} for {name}")),
        };
        self.values[slot] = v;
        Ok(())
    }
}

/// Checks that `v` is defined and usable as `expected`, converting integers
/// to reals where reals are expected.
pub fn check_operand(v: &Value, expected: &Ty) -> Result<Value, OpError> {
    if !v.is_defined() {
        return Err(OpError::new(ErrorKind::UndefinedOperand, "value is undefined"));
    }
    v.clone()
        .coerce(expected)
        .map_err(|v| OpError::type_violation(format!("expected {expected}, got {}", v.ty())))
}

/// Moves the generated batch and optionally recolors it.
pub fn finalize_placement(
    canvas: &mut Canvas,
    batch: &[u32],
    offset: Point,
    color_override: Option<i64>,
) -> Result<(), CanvasError> {
    canvas.finalize_placement(batch, offset, color_override)
}

pub fn run(
    cp: &CompiledProgram,
    canvas: &mut Canvas,
    interactor: &mut dyn Interactor,
    limits: Limits,
) -> RunOutcome {
    Machine::new(cp, Registry::global()).run(canvas, interactor, limits)
}

pub fn run_with(
    cp: &CompiledProgram,
    canvas: &mut Canvas,
    interactor: &mut dyn Interactor,
    limits: Limits,
    registry: &Registry,
    base_dir: Option<&Path>,
) -> RunOutcome {
    let mut m = Machine::new(cp, registry);
    m.base_dir = base_dir;
    m.run(canvas, interactor, limits)
}

/// One execution of a program. Kept after the run so the final variable
/// values can be inspected.
pub struct Machine<'a> {
    cp: &'a CompiledProgram,
    registry: &'a Registry,
    pub base_dir: Option<&'a Path>,
    pub frame: Frame,
    pub steps: u64,
}

struct Cmd {
    at: usize,
    opcode: u16,
    args: std::ops::Range<usize>,
}

type Step<T> = Result<T, RuntimeError>;

enum Flow {
    Next,
    Jump(usize),
    Halt(RunOutcome),
}

impl<'a> Machine<'a> {
    pub fn new(cp: &'a CompiledProgram, registry: &'a Registry) -> Self {
        Self {
            cp,
            registry,
            base_dir: None,
            frame: Frame::new(cp),
            steps: 0,
        }
    }

    pub fn run(&mut self, canvas: &mut Canvas, interactor: &mut dyn Interactor, limits: Limits) -> RunOutcome {
        let snapshot = canvas.snapshot_settings();
        canvas.set_element_limit(limits.max_elements);
        canvas.begin_batch();
        let mut dialog = DialogState::new();
        let outcome = match self.execute(canvas, interactor, &mut dialog, limits) {
            Ok(o) => o,
            Err(e) => RunOutcome::Error(e),
        };
        canvas.discard_pending_text();
        canvas.restore_settings(snapshot);
        outcome
    }

    fn decode(&self) -> Step<(Vec<Cmd>, Vec<usize>)> {
        let mut cmds = Vec::new();
        let mut index = vec![usize::MAX; self.cp.code.len()];
        let mut at = 0;
        let code = &self.cp.code;
        while at < code.len() {
            let info = op_info(code[at], self.registry).ok_or_else(|| RuntimeError {
                kind: ErrorKind::TypeViolation,
                op: format!("{:#06x}", code[at]),
                message: "unknown opcode".into(),
                position: at,
            })?;
            index[at] = cmds.len();
            cmds.push(Cmd {
                at,
                opcode: code[at],
                args: at + 1..(at + info.width()).min(code.len()),
            });
            at += info.width();
        }
        Ok((cmds, index))
    }

    fn execute(
        &mut self,
        canvas: &mut Canvas,
        interactor: &mut dyn Interactor,
        dialog: &mut DialogState,
        limits: Limits,
    ) -> Step<RunOutcome> {
        let (cmds, index) = self.decode()?;
        let mut pc = 0;
        while let Some(cmd) = cmds.get(pc) {
            self.steps += 1;
            if self.steps > limits.max_steps {
                return Err(RuntimeError {
                    kind: ErrorKind::StepLimit,
                    op: self.mnemonic(cmd.opcode),
                    message: format!("step limit of {} commands exceeded", limits.max_steps),
                    position: cmd.at,
                });
            }
            let ops = &self.cp.code[cmd.args.clone()];
            let flow = self
                .command(cmd.opcode, ops, canvas, interactor, dialog)
                .map_err(|e| RuntimeError {
                    kind: e.kind,
                    op: self.mnemonic(cmd.opcode),
                    message: e.message,
                    position: cmd.at,
                })?;
            pc = match flow {
                Flow::Next => pc + 1,
                Flow::Jump(target) => match index.get(target) {
                    Some(&i) if i != usize::MAX => i,
                    _ => {
                        return Err(RuntimeError {
                            kind: ErrorKind::RangeViolation,
                            op: self.mnemonic(cmd.opcode),
                            message: format!("jump target {target} is not a command"),
                            position: cmd.at,
                        })
                    }
                },
                Flow::Halt(o) => return Ok(o),
            };
        }
        Ok(RunOutcome::Completed)
    }

    fn mnemonic(&self, opcode: u16) -> String {
        op_info(opcode, self.registry)
            .map(|i| i.mnemonic)
            .unwrap_or_else(|| format!("{opcode:#06x}"))
    }

    fn slot(&self, s: u16) -> Result<usize, OpError> {
        let i = s as usize;
        if i < self.frame.values.len() {
            Ok(i)
        } else {
            Err(OpError::range(format!("slot {s} is outside the frame")))
        }
    }

    /// Checked read of operand `n` (0-based) from slot `s`.
    fn read(&self, n: usize, s: u16, expected: &Ty) -> Result<Value, OpError> {
        let i = self.slot(s)?;
        check_operand(&self.frame.values[i], expected).map_err(|e| {
            OpError::new(
                e.kind,
                format!("operand {} ({}): {}", n + 1, self.cp.slot_name(i), e.message),
            )
        })
    }

    fn read_index(&self, n: usize, s: u16) -> Result<i64, OpError> {
        Ok(self.read(n, s, &Ty::Int)?.as_int().unwrap())
    }

    fn store(&mut self, s: u16, v: Value) -> Result<(), OpError> {
        let i = self.slot(s)?;
        if self.cp.slots[i].kind == SlotKind::Const {
            return Err(OpError::type_violation(format!("slot {i} is read-only")));
        }
        let ty = &self.frame.types[i];
        let v = v.coerce(ty).map_err(|v| {
            OpError::type_violation(format!(
                "cannot store {} into {} of type {ty}",
                v.ty(),
                self.cp.slot_name(i)
            ))
        })?;
        self.frame.values[i] = v;
        Ok(())
    }

    fn record_part(&self, s: u16, field: u16) -> Result<(usize, usize), OpError> {
        let i = self.slot(s)?;
        match &self.frame.values[i] {
            Value::Record(_, parts) if (field as usize) < parts.len() => Ok((i, field as usize)),
            Value::Record(..) => Err(OpError::range(format!("no field {field} in {}", self.cp.slot_name(i)))),
            v => Err(OpError::type_violation(format!(
                "{} of type {} is not a record",
                self.cp.slot_name(i),
                v.ty()
            ))),
        }
    }

    fn array_part(&self, s: u16, index: i64) -> Result<(usize, usize), OpError> {
        let i = self.slot(s)?;
        match &self.frame.values[i] {
            Value::Array(a, _) if index >= a.lo && index <= a.hi => Ok((i, (index - a.lo) as usize)),
            Value::Array(a, _) => Err(OpError::range(format!(
                "index {index} is outside {}..{} of {}",
                a.lo,
                a.hi,
                self.cp.slot_name(i)
            ))),
            v => Err(OpError::type_violation(format!(
                "{} of type {} is not an array",
                self.cp.slot_name(i),
                v.ty()
            ))),
        }
    }

    fn part(&self, (slot, k): (usize, usize)) -> &Value {
        match &self.frame.values[slot] {
            Value::Record(_, p) | Value::Array(_, p) => &p[k],
            _ => unreachable!(),
        }
    }

    /// Writes a component, converting to the component's type.
    fn set_part(&mut self, (slot, k): (usize, usize), v: Value, checked: bool) -> Result<(), OpError> {
        if checked && !v.is_defined() {
            return Err(OpError::new(ErrorKind::UndefinedOperand, "value is undefined"));
        }
        let name = self.cp.slot_name(slot);
        let target = self.part((slot, k)).ty();
        let v = v.coerce(&target).map_err(|v| {
            OpError::type_violation(format!("cannot store {} into a {target} part of {name}", v.ty()))
        })?;
        match &mut self.frame.values[slot] {
            Value::Record(_, p) | Value::Array(_, p) => p[k] = v,
            _ => unreachable!(),
        }
        Ok(())
    }

    fn get_part(&mut self, at: (usize, usize), out: u16, checked: bool) -> Result<(), OpError> {
        let v = self.part(at).clone();
        if checked && !v.is_defined() {
            return Err(OpError::new(
                ErrorKind::UndefinedOperand,
                format!("operand 1 ({}): component is undefined", self.cp.slot_name(at.0)),
            ));
        }
        self.store(out, v)
    }

    fn command(
        &mut self,
        opcode: u16,
        ops: &[u16],
        canvas: &mut Canvas,
        interactor: &mut dyn Interactor,
        dialog: &mut DialogState,
    ) -> Result<Flow, OpError> {
        let need = |n: usize| {
            if ops.len() < n {
                Err(OpError::range("command is cut off by the end of code"))
            } else {
                Ok(())
            }
        };
        match opcode {
            END => return Ok(Flow::Halt(RunOutcome::Completed)),
            EXIT => return Ok(Flow::Halt(RunOutcome::HaltedByExit)),
            JUMP => {
                need(1)?;
                return Ok(Flow::Jump(ops[0] as usize));
            }
            JUMP_IF_FALSE => {
                need(2)?;
                if !self.read(0, ops[0], &Ty::Bool)?.as_bool().unwrap() {
                    return Ok(Flow::Jump(ops[1] as usize));
                }
            }
            MOVE => {
                need(2)?;
                let i = self.slot(ops[0])?;
                let v = self.read(0, ops[0], &self.frame.types[i].clone())?;
                self.store(ops[1], v)?;
            }
            GET_FIELD | COPY_FIELD => {
                need(3)?;
                let at = self.record_part(ops[0], ops[1])?;
                self.get_part(at, ops[2], opcode == GET_FIELD)?;
            }
            GET_INDEX | COPY_INDEX => {
                need(3)?;
                let idx = self.read_index(1, ops[1])?;
                let at = self.array_part(ops[0], idx)?;
                self.get_part(at, ops[2], opcode == GET_INDEX)?;
            }
            SET_FIELD | PUT_FIELD => {
                need(3)?;
                let at = self.record_part(ops[2], ops[1])?;
                let v = self.frame.values[self.slot(ops[0])?].clone();
                let checked = opcode == SET_FIELD;
                self.set_part(at, v, checked).map_err(|e| self.name_operand(e, ops[0]))?;
            }
            SET_INDEX | PUT_INDEX => {
                need(3)?;
                let idx = self.read_index(1, ops[1])?;
                let at = self.array_part(ops[2], idx)?;
                let v = self.frame.values[self.slot(ops[0])?].clone();
                let checked = opcode == SET_INDEX;
                self.set_part(at, v, checked).map_err(|e| self.name_operand(e, ops[0]))?;
            }
            _ => return self.builtin(opcode, ops, canvas, interactor, dialog),
        }
        Ok(Flow::Next)
    }

    fn name_operand(&self, e: OpError, s: u16) -> OpError {
        OpError::new(
            e.kind,
            format!("operand 1 ({}): {}", self.cp.slot_name(s as usize), e.message),
        )
    }

    fn builtin(
        &mut self,
        opcode: u16,
        ops: &[u16],
        canvas: &mut Canvas,
        interactor: &mut dyn Interactor,
        dialog: &mut DialogState,
    ) -> Result<Flow, OpError> {
        let registry = self.registry;
        let desc = registry
            .by_opcode(opcode)
            .ok_or_else(|| OpError::type_violation(format!("unknown opcode {opcode:#06x}")))?;
        let arity = desc.arity();
        let (params, returns): (Option<&[Ty]>, bool) = match &desc.signature {
            Signature::Fixed { params, result } => (Some(params), result.is_some()),
            Signature::Rule { .. } => (None, true),
        };
        if ops.len() < arity + returns as usize {
            return Err(OpError::range("command is cut off by the end of code"));
        }
        let mut args = Vec::with_capacity(arity);
        for (n, &s) in ops[..arity].iter().enumerate() {
            let expected = match params {
                Some(p) => p[n].clone(),
                None => self.frame.types[self.slot(s)?].clone(),
            };
            args.push(self.read(n, s, &expected)?);
        }
        if let Signature::Rule { rule, .. } = &desc.signature {
            let tys: Vec<Ty> = args.iter().map(Value::ty).collect();
            rule(&tys).map_err(OpError::type_violation)?;
        }
        let result = {
            let mut ctx = ExecCtx {
                canvas,
                interactor,
                dialog,
                vars: &mut self.frame,
                base_dir: self.base_dir,
            };
            (desc.handler)(&mut ctx, &args)?
        };
        if returns {
            let v = result.ok_or_else(|| OpError::type_violation("operation produced no value"))?;
            self.store(ops[arity], v)?;
        }
        Ok(Flow::Next)
    }
}
