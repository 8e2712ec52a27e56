//! Core command set and operand layouts.

use crate::builtins::{Fixity, Registry};

pub const END: u16 = 0;
pub const EXIT: u16 = 1;
pub const JUMP: u16 = 2;
pub const JUMP_IF_FALSE: u16 = 3;
pub const MOVE: u16 = 4;
/// Checked read of one record field.
pub const GET_FIELD: u16 = 5;
pub const SET_FIELD: u16 = 6;
/// Checked read of one array element.
pub const GET_INDEX: u16 = 7;
pub const SET_INDEX: u16 = 8;
/// Unchecked copies, used to walk into nested places.
pub const COPY_FIELD: u16 = 9;
pub const COPY_INDEX: u16 = 10;
/// Unchecked stores, used to write nested places back.
pub const PUT_FIELD: u16 = 11;
pub const PUT_INDEX: u16 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperandKind {
    /// Slot read; the value must be defined.
    Read,
    /// Slot read that tolerates undefined parts.
    ReadRaw,
    /// Slot overwritten by the command.
    Write,
    /// Slot updated in place.
    Modify,
    /// Absolute code-word index of a command.
    Jump,
    /// Field number within the record in operand `of`.
    Field { of: usize },
}

impl OperandKind {
    pub fn is_slot(self) -> bool {
        matches!(
            self,
            OperandKind::Read | OperandKind::ReadRaw | OperandKind::Write | OperandKind::Modify
        )
    }

    pub fn writes(self) -> bool {
        matches!(self, OperandKind::Write | OperandKind::Modify)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpInfo {
    pub mnemonic: String,
    pub operands: Vec<OperandKind>,
}

impl OpInfo {
    pub fn width(&self) -> usize {
        1 + self.operands.len()
    }
}

fn core(mnemonic: &str, operands: &[OperandKind]) -> OpInfo {
    OpInfo {
        mnemonic: mnemonic.to_string(),
        operands: operands.to_vec(),
    }
}

/// Layout of `opcode`, or `None` when it is neither a core command nor a
/// registered operation.
pub fn op_info(opcode: u16, registry: &Registry) -> Option<OpInfo> {
    use OperandKind::*;
    Some(match opcode {
        END => core("END", &[]),
        EXIT => core("EXIT", &[]),
        JUMP => core("JUMP", &[Jump]),
        JUMP_IF_FALSE => core("JUMP_IF_FALSE", &[Read, Jump]),
        MOVE => core("MOVE", &[Read, Write]),
        GET_FIELD => core("GET_FIELD", &[ReadRaw, Field { of: 0 }, Write]),
        SET_FIELD => core("SET_FIELD", &[Read, Field { of: 2 }, Modify]),
        GET_INDEX => core("GET_INDEX", &[ReadRaw, Read, Write]),
        SET_INDEX => core("SET_INDEX", &[Read, Read, Modify]),
        COPY_FIELD => core("COPY_FIELD", &[ReadRaw, Field { of: 0 }, Write]),
        COPY_INDEX => core("COPY_INDEX", &[ReadRaw, Read, Write]),
        PUT_FIELD => core("PUT_FIELD", &[ReadRaw, Field { of: 2 }, Modify]),
        PUT_INDEX => core("PUT_INDEX", &[ReadRaw, Read, Modify]),
        _ => {
            let d = registry.by_opcode(opcode)?;
            if d.fixity == Fixity::Control {
                return None;
            }
            let mut operands = vec![Read; d.arity()];
            let returns = match &d.signature {
                crate::builtins::Signature::Fixed { result, .. } => result.is_some(),
                crate::builtins::Signature::Rule { .. } => true,
            };
            if returns {
                operands.push(Write);
            }
            OpInfo {
                mnemonic: d.name.clone(),
                operands,
            }
        }
    })
}
