//! Command walk and human-readable listing.

use std::fmt::Write as _;

use super::opcode::{op_info, OperandKind};
use super::program::{CompiledProgram, DecodeError};
use crate::builtins::Registry;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    /// Word index of the opcode.
    pub at: usize,
    pub opcode: u16,
    pub mnemonic: String,
    pub operands: Vec<(OperandKind, u16)>,
}

/// Walks the code from word 0, one command at a time.
pub fn commands(cp: &CompiledProgram, registry: &Registry) -> Result<Vec<Command>, DecodeError> {
    let mut out = Vec::new();
    let mut at = 0;
    while at < cp.code.len() {
        let opcode = cp.code[at];
        let info = op_info(opcode, registry).ok_or(DecodeError::UnknownOpcode { at, opcode })?;
        if at + info.width() > cp.code.len() {
            return Err(DecodeError::TruncatedCommand { at });
        }
        let words = &cp.code[at + 1..at + info.width()];
        out.push(Command {
            at,
            opcode,
            operands: info.operands.iter().copied().zip(words.iter().copied()).collect(),
            mnemonic: info.mnemonic,
        });
        at += 1 + words.len();
    }
    Ok(out)
}

pub fn disassemble(cp: &CompiledProgram, registry: &Registry) -> Result<String, DecodeError> {
    let mut out = String::new();
    writeln!(out, "; {}", cp.name).unwrap();
    writeln!(out, "; {} slots, {} words", cp.slots.len(), cp.code.len()).unwrap();
    for cmd in commands(cp, registry)? {
        let ops: Vec<String> = cmd
            .operands
            .iter()
            .map(|(kind, w)| match kind {
                OperandKind::Jump => format!("@{w}"),
                OperandKind::Field { .. } => format!("#{w}"),
                _ => format!("[{w}] {}", cp.slot_name(*w as usize)),
            })
            .collect();
        writeln!(out, "{:5}  {:<16} {}", cmd.at, cmd.mnemonic, ops.join(", "))
            .unwrap();
    }
    Ok(out)
}
