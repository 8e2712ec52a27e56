//! One running program per session. The VM runs on its own thread and
//! blocks in [`RemoteInteractor::ask`] until the socket side answers.

use std::sync::mpsc;
use std::sync::{Arc, Mutex, MutexGuard};
use std::thread;

use pgen_core::bytecode::CompiledProgram;
use pgen_core::canvas::{dump, Canvas};
use pgen_core::interaction::{Answer, InteractionError, Interactor, Prompt};
use pgen_core::svg::{render, RenderOptions};
use pgen_core::vm::{run, Limits, RunOutcome};
use serde::Serialize;
use tokio::sync::watch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum State {
    Running,
    AwaitingPromptAnswer,
    Finished,
    Error,
}

#[derive(Debug, Clone)]
pub struct Finished {
    pub outcome: RunOutcome,
    pub svg: String,
    pub dump: String,
}

#[derive(Debug, Clone)]
pub struct View {
    pub state: State,
    /// Pending prompt with its sequence number.
    pub pending: Option<(u64, Prompt)>,
    pub result: Option<Finished>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubmitError {
    NoPendingPrompt,
    WrongKind { expected: &'static str, got: &'static str },
    Closed,
}

impl SubmitError {
    pub fn status(&self) -> u16 {
        match self {
            SubmitError::NoPendingPrompt | SubmitError::Closed => 409,
            SubmitError::WrongKind { .. } => 400,
        }
    }

    pub fn message(&self) -> String {
        match self {
            SubmitError::NoPendingPrompt => "no prompt is waiting for an answer".into(),
            SubmitError::WrongKind { expected, got } => format!("expected a {expected} answer, got {got}"),
            SubmitError::Closed => "session no longer accepts answers".into(),
        }
    }
}

struct Shared {
    state: State,
    prompt_seq: u64,
    pending: Option<Prompt>,
    result: Option<Finished>,
}

pub struct Session {
    pub id: String,
    shared: Mutex<Shared>,
    answers: Mutex<Option<mpsc::Sender<Answer>>>,
    changed: watch::Sender<u64>,
}

impl Session {
    /// Starts running `cp` on a new thread.
    pub fn start(id: String, cp: CompiledProgram, limits: Limits) -> Arc<Session> {
        let (tx, rx) = mpsc::channel();
        let session = Arc::new(Session {
            id,
            shared: Mutex::new(Shared {
                state: State::Running,
                prompt_seq: 0,
                pending: None,
                result: None,
            }),
            answers: Mutex::new(Some(tx)),
            changed: watch::Sender::new(0),
        });
        let worker = Arc::clone(&session);
        thread::spawn(move || {
            let mut canvas = Canvas::new();
            let mut remote = RemoteInteractor {
                session: Arc::clone(&worker),
                answers: rx,
            };
            let outcome = run(&cp, &mut canvas, &mut remote, limits);
            let done = Finished {
                svg: render(&canvas, &RenderOptions::default()),
                dump: dump(&canvas),
                outcome,
            };
            worker.answers.lock().unwrap().take();
            worker.update(|s| {
                s.state = if done.outcome.is_error() { State::Error } else { State::Finished };
                s.pending = None;
                s.result = Some(done);
            });
        });
        session
    }

    fn lock(&self) -> MutexGuard<'_, Shared> {
        self.shared.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn update(&self, f: impl FnOnce(&mut Shared)) {
        f(&mut self.lock());
        self.changed.send_modify(|n| *n += 1);
    }

    pub fn subscribe(&self) -> watch::Receiver<u64> {
        self.changed.subscribe()
    }

    pub fn view(&self) -> View {
        let s = self.lock();
        View {
            state: s.state,
            pending: s.pending.clone().map(|p| (s.prompt_seq, p)),
            result: s.result.clone(),
        }
    }

    pub fn submit(&self, answer: Answer) -> Result<(), SubmitError> {
        let mut s = self.lock();
        let Some(prompt) = &s.pending else {
            return Err(SubmitError::NoPendingPrompt);
        };
        if !answer.fits(prompt) {
            return Err(SubmitError::WrongKind {
                expected: prompt.kind(),
                got: answer.kind(),
            });
        }
        let tx = self.answers.lock().unwrap().clone().ok_or(SubmitError::Closed)?;
        tx.send(answer).map_err(|_| SubmitError::Closed)?;
        s.pending = None;
        s.state = State::Running;
        drop(s);
        self.changed.send_modify(|n| *n += 1);
        Ok(())
    }

    /// Stops accepting answers; a pending or later prompt aborts the run.
    pub fn abort(&self) {
        self.answers.lock().unwrap().take();
    }
}

struct RemoteInteractor {
    session: Arc<Session>,
    answers: mpsc::Receiver<Answer>,
}

impl Interactor for RemoteInteractor {
    fn ask(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        if self.session.answers.lock().unwrap().is_none() {
            return Err(InteractionError::Aborted("client disconnected".into()));
        }
        self.session.update(|s| {
            s.prompt_seq += 1;
            s.pending = Some(prompt.clone());
            s.state = State::AwaitingPromptAnswer;
        });
        self.answers
            .recv()
            .map_err(|_| InteractionError::Aborted("client disconnected".into()))
    }
}
