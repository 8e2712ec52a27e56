//! Dialog primitives raised by running programs, and the providers that
//! answer them.
//!
//! Prompts and answers share one JSON codec across the scripted provider,
//! answer files and the session service. Answer encoding:
//!
//! | prompt    | answer JSON                                              |
//! |-----------|----------------------------------------------------------|
//! | message   | `"ack"`                                                  |
//! | query     | `{"query": "yes" \| "no" \| "cancel"}`                   |
//! | menu      | `{"menu": <option value>}` (`0` cancels)                 |
//! | form      | `{"form": {"accept": true, "values": {"<key>": <value>}}}` |
//!
//! Form value keys are the bound variable names; scale fields use the key
//! [`SCALE_KEY`] and a `"1 : 25"`-style string.

mod dialog;
mod script;

pub use dialog::{DialogState, FieldBinding, FieldSpec, FormBinding, FormBuilder, MenuBuilder};
pub use script::{Recorder, ScriptedInteractor};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Form value key of scale fields.
pub const SCALE_KEY: &str = "$scale";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Center,
    Infobar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MenuOption {
    pub text: String,
    pub value: i64,
    pub enabled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Text,
    Number,
    Integer,
    Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x: i64,
    pub y: i64,
}

/// A scalar carried by a form field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormValue {
    Integer(i64),
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormField {
    pub label: String,
    pub kind: FieldKind,
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    /// Current value shown as the default; `None` when undefined.
    #[serde(default)]
    pub value: Option<FormValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub choices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Prompt {
    Message {
        text: String,
        placement: Placement,
    },
    Query {
        text: String,
    },
    Menu {
        title: String,
        options: Vec<MenuOption>,
        /// 1-based ordinal of the initially highlighted option.
        initial: i64,
    },
    Form {
        title: String,
        fields: Vec<FormField>,
    },
}

impl Prompt {
    pub fn kind(&self) -> &'static str {
        match self {
            Prompt::Message { .. } => "message",
            Prompt::Query { .. } => "query",
            Prompt::Menu { .. } => "menu",
            Prompt::Form { .. } => "form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryAnswer {
    Yes,
    No,
    Cancel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormAnswer {
    pub accept: bool,
    #[serde(default)]
    pub values: BTreeMap<String, FormValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Answer {
    Ack,
    Query(QueryAnswer),
    Menu(i64),
    Form(FormAnswer),
}

impl Answer {
    pub fn kind(&self) -> &'static str {
        match self {
            Answer::Ack => "message",
            Answer::Query(_) => "query",
            Answer::Menu(_) => "menu",
            Answer::Form(_) => "form",
        }
    }

    /// True when this answer is of the shape `prompt` expects.
    pub fn fits(&self, prompt: &Prompt) -> bool {
        self.kind() == prompt.kind()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InteractionError {
    #[error("interaction aborted: {0}")]
    Aborted(String),
}

/// Answers prompts on behalf of a user. Calls block until an answer exists.
pub trait Interactor {
    fn ask(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError>;
}

impl<T: Interactor + ?Sized> Interactor for &mut T {
    fn ask(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        (**self).ask(prompt)
    }
}

impl<T: Interactor + ?Sized> Interactor for Box<T> {
    fn ask(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        (**self).ask(prompt)
    }
}

/// Parses an answer script: a JSON array of answers.
pub fn parse_script(json: &str) -> Result<Vec<Answer>, serde_json::Error> {
    serde_json::from_str(json)
}
