//! Compile protocol.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use chrono::{DateTime, Local};

use crate::diag::Diagnostic;

#[derive(Debug, Clone)]
pub struct CompileLog {
    pub source: String,
    pub stages: Vec<(DateTime<Local>, String)>,
    pub diagnostics: Vec<Diagnostic>,
    pub success: bool,
    pub code_words: Option<usize>,
    pub slot_count: Option<usize>,
}

impl CompileLog {
    pub fn new(source: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            stages: Vec::new(),
            diagnostics: Vec::new(),
            success: false,
            code_words: None,
            slot_count: None,
        }
    }

    pub fn stage(&mut self, name: impl Into<String>) {
        self.stages.push((Local::now(), name.into()));
    }

    pub fn succeed(&mut self, code_words: usize, slot_count: usize) {
        self.success = true;
        self.code_words = Some(code_words);
        self.slot_count = Some(slot_count);
    }

    pub fn fail(&mut self, diagnostics: impl IntoIterator<Item = Diagnostic>) {
        self.success = false;
        self.diagnostics.extend(diagnostics);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "compile {}", self.source).unwrap();
        for (at, name) in &self.stages {
            writeln!(out, "[{}] {name}", at.format("%Y-%m-%d %H:%M:%S%.3f")).unwrap();
        }
        for d in &self.diagnostics {
            writeln!(out, "{d}").unwrap();
        }
        if self.success {
            writeln!(out, "OK").unwrap();
            if let Some(w) = self.code_words {
                writeln!(out, "code size: {w} words").unwrap();
            }
            if let Some(s) = self.slot_count {
                writeln!(out, "slots: {s}").unwrap();
            }
        } else {
            let errors = self.diagnostics.iter().filter(|d| d.is_error()).count();
            writeln!(out, "FAILED: {errors} error(s)").unwrap();
        }
        out
    }
}

pub fn write_compile_log(log: &CompileLog, path: &Path) -> io::Result<()> {
    std::fs::write(path, log.render())
}
