//! Compact executable code: commands of 16-bit words, the `.ppgc` container,
//! the disassembler and the compile protocol.

mod compile;
mod disasm;
mod log;
pub mod opcode;
mod program;

pub use compile::{compile, CompileError, MAX_WORDS};
pub use disasm::{commands, disassemble, Command};
pub use log::{write_compile_log, CompileLog};
pub use opcode::{op_info, OpInfo, OperandKind};
pub use program::{CompiledProgram, Const, DecodeError, Slot, SlotKind, TypeEntry, MAGIC, NO_NAME, VERSION};

#[cfg(test)]
mod tests;
