//! Compiled program and its binary container.
//!
//! Layout (little-endian): magic `PPGX`, u16 version, name (u16 byte length +
//! UTF-8), string pool, type table, constant pool, slot table, code. Every
//! table starts with a u16 count; strings are u16-length-prefixed UTF-8.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use super::opcode::{op_info, OperandKind};
use crate::builtins::Registry;
use crate::types::{ArrayTy, Field, RecordTy, Ty};
use crate::vm::Value;

pub const MAGIC: &[u8; 4] = b"PPGX";
pub const VERSION: u16 = 1;
/// Marks an absent string reference.
pub const NO_NAME: u16 = 0xFFFF;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeEntry {
    Bool,
    Int,
    Real,
    Str,
    Addr,
    Record { name: u16, fields: Vec<(u16, u16)> },
    Array { name: u16, lo: i32, hi: i32, elem: u16 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Const {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(u16),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Var,
    Temp,
    Const,
}

/// One frame slot. `aux` is the name string for variables, the constant
/// index for constants and [`NO_NAME`] for temporaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub ty: u16,
    pub kind: SlotKind,
    pub aux: u16,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledProgram {
    pub name: String,
    pub version: u16,
    pub strings: Vec<String>,
    pub types: Vec<TypeEntry>,
    pub consts: Vec<Const>,
    pub slots: Vec<Slot>,
    pub code: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("unexpected end of data")]
    UnexpectedEnd,
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u16),
    #[error("invalid UTF-8 in string")]
    BadString,
    #[error("{0} trailing bytes after code")]
    TrailingBytes(usize),
    #[error("{what} index {index} out of range")]
    PoolIndex { what: &'static str, index: u16 },
    #[error("unknown tag {tag} in {what}")]
    BadTag { what: &'static str, tag: u8 },
    #[error("unknown opcode {opcode:#06x} at word {at}")]
    UnknownOpcode { at: usize, opcode: u16 },
    #[error("command at word {at} is cut off by the end of code")]
    TruncatedCommand { at: usize },
    #[error("operand {operand} of command at word {at} is out of range: {message}")]
    OperandOutOfRange {
        at: usize,
        operand: usize,
        message: String,
    },
    #[error("invalid program: {0}")]
    Invalid(String),
}

impl CompiledProgram {
    /// Resolved type of every type-table entry.
    pub fn resolve_types(&self) -> Vec<Ty> {
        let mut out: Vec<Ty> = Vec::with_capacity(self.types.len());
        let name = |i: u16| (i != NO_NAME).then(|| self.strings[i as usize].clone());
        for entry in &self.types {
            let ty = match entry {
                TypeEntry::Bool => Ty::Bool,
                TypeEntry::Int => Ty::Int,
                TypeEntry::Real => Ty::Real,
                TypeEntry::Str => Ty::Str,
                TypeEntry::Addr => Ty::Addr,
                TypeEntry::Record { name: n, fields } => Ty::Record(Arc::new(RecordTy {
                    name: name(*n),
                    fields: fields
                        .iter()
                        .map(|(f, t)| Field {
                            name: self.strings[*f as usize].clone(),
                            ty: out[*t as usize].clone(),
                        })
                        .collect(),
                })),
                TypeEntry::Array { name: n, lo, hi, elem } => Ty::Array(Arc::new(ArrayTy {
                    name: name(*n),
                    lo: *lo as i64,
                    hi: *hi as i64,
                    elem: out[*elem as usize].clone(),
                })),
            };
            out.push(ty);
        }
        out
    }

    pub fn const_value(&self, c: &Const) -> Value {
        match c {
            Const::Bool(b) => Value::Bool(*b),
            Const::Int(i) => Value::Int(*i),
            Const::Real(x) => Value::Real(*x),
            Const::Str(s) => Value::Str(self.strings[*s as usize].clone()),
        }
    }

    /// Display name of a slot: variable name, constant text or `tN`.
    pub fn slot_name(&self, index: usize) -> String {
        match self.slots.get(index) {
            Some(Slot {
                kind: SlotKind::Var,
                aux,
                ..
            }) => self.strings[*aux as usize].clone(),
            Some(Slot {
                kind: SlotKind::Const,
                aux,
                ..
            }) => match self.const_value(&self.consts[*aux as usize]) {
                Value::Str(s) => crate::frontend::pretty::string_literal(&s),
                v => v.to_string(),
            },
            Some(_) => format!("t{index}"),
            None => format!("?{index}"),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(MAGIC);
        w.u16(self.version);
        w.str(&self.name);
        w.u16(self.strings.len() as u16);
        for s in &self.strings {
            w.str(s);
        }
        w.u16(self.types.len() as u16);
        for t in &self.types {
            match t {
                TypeEntry::Bool => w.u8(0),
                TypeEntry::Int => w.u8(1),
                TypeEntry::Real => w.u8(2),
                TypeEntry::Str => w.u8(3),
                TypeEntry::Addr => w.u8(4),
                TypeEntry::Record { name, fields } => {
                    w.u8(5);
                    w.u16(*name);
                    w.u16(fields.len() as u16);
                    for (n, t) in fields {
                        w.u16(*n);
                        w.u16(*t);
                    }
                }
                TypeEntry::Array { name, lo, hi, elem } => {
                    w.u8(6);
                    w.u16(*name);
                    w.0.extend_from_slice(&lo.to_le_bytes());
                    w.0.extend_from_slice(&hi.to_le_bytes());
                    w.u16(*elem);
                }
            }
        }
        w.u16(self.consts.len() as u16);
        for c in &self.consts {
            match c {
                Const::Bool(b) => {
                    w.u8(0);
                    w.u8(*b as u8);
                }
                Const::Int(i) => {
                    w.u8(1);
                    w.0.extend_from_slice(&i.to_le_bytes());
                }
                Const::Real(x) => {
                    w.u8(2);
                    w.0.extend_from_slice(&x.to_bits().to_le_bytes());
                }
                Const::Str(s) => {
                    w.u8(3);
                    w.u16(*s);
                }
            }
        }
        w.u16(self.slots.len() as u16);
        for s in &self.slots {
            w.u16(s.ty);
            w.u8(match s.kind {
                SlotKind::Var => 0,
                SlotKind::Temp => 1,
                SlotKind::Const => 2,
            });
            w.u16(s.aux);
        }
        w.u16(self.code.len() as u16);
        for word in &self.code {
            w.u16(*word);
        }
        w.0
    }

    /// Parses and validates a container against the operations of `registry`.
    pub fn decode(bytes: &[u8], registry: &Registry) -> Result<CompiledProgram, DecodeError> {
        let mut r = Reader { bytes, at: 0 };
        if r.take(4)? != MAGIC {
            return Err(DecodeError::BadMagic);
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(DecodeError::UnsupportedVersion(version));
        }
        let name = r.str()?;
        let n = r.u16()?;
        let mut strings = Vec::with_capacity(n as usize);
        for _ in 0..n {
            strings.push(r.str()?);
        }
        let string_ref = |i: u16, allow_none: bool| {
            if (allow_none && i == NO_NAME) || (i as usize) < strings.len() {
                Ok(i)
            } else {
                Err(DecodeError::PoolIndex { what: "string", index: i })
            }
        };
        let n = r.u16()?;
        let mut types = Vec::with_capacity(n as usize);
        for own in 0..n {
            let earlier = |i: u16| {
                if i < own {
                    Ok(i)
                } else {
                    Err(DecodeError::PoolIndex { what: "type", index: i })
                }
            };
            let t = match r.u8()? {
                0 => TypeEntry::Bool,
                1 => TypeEntry::Int,
                2 => TypeEntry::Real,
                3 => TypeEntry::Str,
                4 => TypeEntry::Addr,
                5 => {
                    let name = string_ref(r.u16()?, true)?;
                    let count = r.u16()?;
                    let mut fields = Vec::with_capacity(count as usize);
                    for _ in 0..count {
                        fields.push((string_ref(r.u16()?, false)?, earlier(r.u16()?)?));
                    }
                    TypeEntry::Record { name, fields }
                }
                6 => {
                    let name = string_ref(r.u16()?, true)?;
                    let lo = r.i32()?;
                    let hi = r.i32()?;
                    let elem = earlier(r.u16()?)?;
                    if lo > hi {
                        return Err(DecodeError::Invalid(format!("array bounds {lo}..{hi}")));
                    }
                    TypeEntry::Array { name, lo, hi, elem }
                }
                tag => return Err(DecodeError::BadTag { what: "type table", tag }),
            };
            types.push(t);
        }
        let n = r.u16()?;
        let mut consts = Vec::with_capacity(n as usize);
        for _ in 0..n {
            consts.push(match r.u8()? {
                0 => match r.u8()? {
                    0 => Const::Bool(false),
                    1 => Const::Bool(true),
                    tag => return Err(DecodeError::BadTag { what: "boolean constant", tag }),
                },
                1 => Const::Int(i64::from_le_bytes(r.take(8)?.try_into().unwrap())),
                2 => {
                    let x = f64::from_bits(u64::from_le_bytes(r.take(8)?.try_into().unwrap()));
                    if !x.is_finite() {
                        return Err(DecodeError::Invalid("non-finite real constant".into()));
                    }
                    Const::Real(x)
                }
                3 => Const::Str(string_ref(r.u16()?, false)?),
                tag => return Err(DecodeError::BadTag { what: "constant pool", tag }),
            });
        }
        let n = r.u16()?;
        let mut slots = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let ty = r.u16()?;
            if ty as usize >= types.len() {
                return Err(DecodeError::PoolIndex { what: "type", index: ty });
            }
            let kind = match r.u8()? {
                0 => SlotKind::Var,
                1 => SlotKind::Temp,
                2 => SlotKind::Const,
                tag => return Err(DecodeError::BadTag { what: "slot table", tag }),
            };
            let aux = r.u16()?;
            match kind {
                SlotKind::Var => {
                    string_ref(aux, false)?;
                }
                SlotKind::Temp if aux != NO_NAME => {
                    return Err(DecodeError::Invalid(format!("temporary slot with aux {aux}")));
                }
                SlotKind::Temp => {}
                SlotKind::Const => {
                    let c = consts
                        .get(aux as usize)
                        .ok_or(DecodeError::PoolIndex { what: "constant", index: aux })?;
                    let fits = matches!(
                        (c, &types[ty as usize]),
                        (Const::Bool(_), TypeEntry::Bool)
                            | (Const::Int(_), TypeEntry::Int)
                            | (Const::Real(_), TypeEntry::Real)
                            | (Const::Str(_), TypeEntry::Str)
                    );
                    if !fits {
                        return Err(DecodeError::Invalid(format!(
                            "constant {aux} does not match its slot type"
                        )));
                    }
                }
            }
            slots.push(Slot { ty, kind, aux });
        }
        let n = r.u16()?;
        let mut code = Vec::with_capacity(n as usize);
        for _ in 0..n {
            code.push(r.u16()?);
        }
        if r.at != bytes.len() {
            return Err(DecodeError::TrailingBytes(bytes.len() - r.at));
        }
        let program = CompiledProgram {
            name,
            version,
            strings,
            types,
            consts,
            slots,
            code,
        };
        program.validate_code(registry)?;
        Ok(program)
    }

    /// Checks every command: known opcode, complete operands, slot operands
    /// in range and writable where written, field numbers valid for the
    /// record they index, jumps on command starts.
    pub fn validate_code(&self, registry: &Registry) -> Result<(), DecodeError> {
        let mut starts = HashSet::new();
        let mut jumps = Vec::new();
        let mut at = 0;
        while at < self.code.len() {
            let opcode = self.code[at];
            let info = op_info(opcode, registry).ok_or(DecodeError::UnknownOpcode { at, opcode })?;
            if at + info.width() > self.code.len() {
                return Err(DecodeError::TruncatedCommand { at });
            }
            starts.insert(at);
            let ops = &self.code[at + 1..at + info.width()];
            for (i, (&word, kind)) in ops.iter().zip(&info.operands).enumerate() {
                let bad = |message: String| DecodeError::OperandOutOfRange {
                    at,
                    operand: i,
                    message,
                };
                match kind {
                    k if k.is_slot() => {
                        let slot = self
                            .slots
                            .get(word as usize)
                            .ok_or_else(|| bad(format!("slot {word} of {}", self.slots.len())))?;
                        if k.writes() && slot.kind == SlotKind::Const {
                            return Err(bad(format!("slot {word} is a constant")));
                        }
                    }
                    OperandKind::Jump => jumps.push((at, i, word)),
                    OperandKind::Field { of } => {
                        let rec = ops[*of] as usize;
                        let count = self.slots.get(rec).and_then(|s| match &self.types[s.ty as usize] {
                            TypeEntry::Record { fields, .. } => Some(fields.len()),
                            _ => None,
                        });
                        match count {
                            Some(n) if (word as usize) < n => {}
                            Some(n) => return Err(bad(format!("field {word} of {n}"))),
                            None => return Err(bad(format!("slot {rec} is not a record"))),
                        }
                    }
                    _ => unreachable!(),
                }
            }
            at += info.width();
        }
        for (at, operand, target) in jumps {
            if !starts.contains(&(target as usize)) {
                return Err(DecodeError::OperandOutOfRange {
                    at,
                    operand,
                    message: format!("jump target {target} is not a command start"),
                });
            }
        }
        Ok(())
    }
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }

    fn u16(&mut self, v: u16) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn str(&mut self, s: &str) {
        self.u16(s.len() as u16);
        self.0.extend_from_slice(s.as_bytes());
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        let end = self.at.checked_add(n).ok_or(DecodeError::UnexpectedEnd)?;
        let s = self.bytes.get(self.at..end).ok_or(DecodeError::UnexpectedEnd)?;
        self.at = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> Result<i32, DecodeError> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn str(&mut self) -> Result<String, DecodeError> {
        let n = self.u16()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| DecodeError::BadString)
    }
}
