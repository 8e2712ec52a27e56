//! Compiler, checked virtual machine, drawing model and library store for
//! parametric drawing-generation programs.

pub mod builtins;
pub mod bytecode;
pub mod canvas;
pub mod diag;
pub mod frontend;
pub mod interaction;
pub mod sema;
pub mod types;
pub mod vm;
pub mod pipeline;
pub mod library;
pub mod svg;
pub mod batch;
