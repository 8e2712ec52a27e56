//! Source-to-code driver shared by the command line and the session service.

use crate::builtins::Registry;
use crate::bytecode::{compile, CompileLog, CompiledProgram};
use crate::diag::{sort_diagnostics, Diagnostic, SourcePos};
use crate::frontend::parse_program_with;
use crate::sema::analyze_with;

pub fn compile_source(text: &str) -> Result<CompiledProgram, Vec<Diagnostic>> {
    compile_source_with(text, Registry::global())
}

pub fn compile_source_with(text: &str, registry: &Registry) -> Result<CompiledProgram, Vec<Diagnostic>> {
    compile_logged(text, "<source>", registry).0
}

/// Compiles and records every stage in a protocol named after `source`.
pub fn compile_logged(
    text: &str,
    source: &str,
    registry: &Registry,
) -> (Result<CompiledProgram, Vec<Diagnostic>>, CompileLog) {
    let mut log = CompileLog::new(source);
    let result = run_stages(text, registry, &mut log);
    match &result {
        Ok(cp) => log.succeed(cp.code.len(), cp.slots.len()),
        Err(diags) => log.fail(diags.iter().cloned()),
    }
    (result, log)
}

fn run_stages(
    text: &str,
    registry: &Registry,
    log: &mut CompileLog,
) -> Result<CompiledProgram, Vec<Diagnostic>> {
    log.stage("parse");
    let ast = parse_program_with(text, registry).map_err(sorted)?;
    log.stage("analyze");
    let typed = analyze_with(&ast, registry).map_err(sorted)?;
    log.stage("generate code");
    compile(&typed).map_err(|e| vec![Diagnostic::error(SourcePos::new(1, 1), e.to_string())])
}

fn sorted(mut diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    sort_diagnostics(&mut diags);
    diags
}
