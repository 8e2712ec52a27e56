use std::collections::VecDeque;

use super::{Answer, InteractionError, Interactor, Prompt};

/// Replays a fixed list of answers, one per prompt.
///
/// Messages are acknowledged automatically: an explicit `"ack"` at the head
/// of the script is consumed, otherwise the message passes without using an
/// entry.
#[derive(Debug, Clone, Default)]
pub struct ScriptedInteractor {
    answers: VecDeque<Answer>,
}

impl ScriptedInteractor {
    pub fn new(answers: impl IntoIterator<Item = Answer>) -> Self {
        Self {
            answers: answers.into_iter().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.answers.len()
    }
}

impl Interactor for ScriptedInteractor {
    fn ask(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        if let Prompt::Message { .. } = prompt {
            if self.answers.front() == Some(&Answer::Ack) {
                self.answers.pop_front();
            }
            return Ok(Answer::Ack);
        }
        let answer = self.answers.pop_front().ok_or_else(|| {
            InteractionError::Aborted(format!("answer script exhausted at {} prompt", prompt.kind()))
        })?;
        if !answer.fits(prompt) {
            return Err(InteractionError::Aborted(format!(
                "script answer for a {} does not fit a {} prompt",
                answer.kind(),
                prompt.kind()
            )));
        }
        Ok(answer)
    }
}

/// Wraps a provider and records every answered prompt for later replay.
#[derive(Debug)]
pub struct Recorder<I> {
    inner: I,
    transcript: Vec<(Prompt, Answer)>,
}

impl<I: Interactor> Recorder<I> {
    pub fn new(inner: I) -> Self {
        Self {
            inner,
            transcript: Vec::new(),
        }
    }

    pub fn transcript(&self) -> &[(Prompt, Answer)] {
        &self.transcript
    }

    /// The recorded answers, suitable for a [`ScriptedInteractor`].
    pub fn answers(&self) -> Vec<Answer> {
        self.transcript.iter().map(|(_, a)| a.clone()).collect()
    }

    pub fn into_inner(self) -> I {
        self.inner
    }
}

impl<I: Interactor> Interactor for Recorder<I> {
    fn ask(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        let answer = self.inner.ask(prompt)?;
        self.transcript.push((prompt.clone(), answer.clone()));
        Ok(answer)
    }
}
