//! Many independent runs of one program, or many compilations.
//!
//! Each job owns its canvas and interactor, so jobs run on the rayon pool
//! when the `parallel` feature is on and one after another otherwise. Both
//! orders give identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bytecode::CompiledProgram;
use crate::canvas::Canvas;
use crate::diag::Diagnostic;
use crate::interaction::{Answer, ScriptedInteractor};
use crate::pipeline::compile_source;
use crate::vm::{run, Limits, RunOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub canvas: Canvas,
}

fn run_one(cp: &CompiledProgram, answers: &[Answer], limits: Limits) -> RunResult {
    let mut canvas = Canvas::new();
    let mut interactor = ScriptedInteractor::new(answers.iter().cloned());
    let outcome = run(cp, &mut canvas, &mut interactor, limits);
    RunResult { outcome, canvas }
}

/// Runs `cp` once per answer script, results in script order.
pub fn run_batch(cp: &CompiledProgram, scripts: &[Vec<Answer>], limits: Limits) -> Vec<RunResult> {
    #[cfg(feature = "parallel")]
    {
        scripts.par_iter().map(|s| run_one(cp, s, limits)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(cp, scripts, limits)
    }
}

pub fn run_batch_sequential(cp: &CompiledProgram, scripts: &[Vec<Answer>], limits: Limits) -> Vec<RunResult> {
    scripts.iter().map(|s| run_one(cp, s, limits)).collect()
}

pub fn compile_batch(sources: &[String]) -> Vec<Result<CompiledProgram, Vec<Diagnostic>>> {
    #[cfg(feature = "parallel")]
    {
        sources.par_iter().map(|s| compile_source(s)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        compile_batch_sequential(sources)
    }
}

pub fn compile_batch_sequential(sources: &[String]) -> Vec<Result<CompiledProgram, Vec<Diagnostic>>> {
    sources.iter().map(|s| compile_source(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING: &str = include_str!("../tests/fixtures/ogolovok.ppg");

    #[test]
    fn parallel_and_sequential_agree() {
        let cp = compile_source(LISTING).unwrap();
        let scripts: Vec<Vec<Answer>> = (0..40).map(|i| vec![Answer::Menu(i % 4)]).collect();
        let a = run_batch(&cp, &scripts, Limits::default());
        let b = run_batch_sequential(&cp, &scripts, Limits::default());
        assert_eq!(a, b);
        assert_eq!(a[1].canvas.elements().len(), 4);
        assert_eq!(a[0].outcome, RunOutcome::HaltedByExit);
    }

    #[test]
    fn compile_batch_keeps_order() {
        let sources = vec![LISTING.to_string(), "program X;\nendprogram;".to_string()];
        let out = compile_batch(&sources);
        assert_eq!(out, compile_batch_sequential(&sources));
        assert!(out[0].is_ok() && out[1].is_err());
    }
}
