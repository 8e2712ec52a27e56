//! JSON messages exchanged over the session socket.

use pgen_core::interaction::{Answer, Prompt};
use pgen_core::vm::{RunOutcome, RuntimeError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ServerMessage {
    Prompt {
        prompt: Prompt,
    },
    Result {
        svg: String,
        outcome: Outcome,
        error: Option<RuntimeError>,
    },
    /// Rejected client message; `status` mirrors the HTTP code of the
    /// equivalent request.
    Error {
        status: u16,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ClientMessage {
    Answer { answer: Answer },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Completed,
    Exit,
    Error,
}

impl ServerMessage {
    pub fn result(outcome: &RunOutcome, svg: String) -> Self {
        let (outcome, error) = match outcome {
            RunOutcome::Completed => (Outcome::Completed, None),
            RunOutcome::HaltedByExit => (Outcome::Exit, None),
            RunOutcome::Error(e) => (Outcome::Error, Some(e.clone())),
        };
        ServerMessage::Result { svg, outcome, error }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("wire messages serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SessionRequest {
    Library(LibraryRef),
    Source(SourceRef),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryRef {
    pub lib: String,
    pub entry: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceRef {
    pub source: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn answer_message_decodes() {
        let m: ClientMessage = serde_json::from_str(r#"{"type":"answer","answer":{"menu":1}}"#).unwrap();
        assert_eq!(m, ClientMessage::Answer { answer: Answer::Menu(1) });
    }

    #[test]
    fn unknown_fields_are_rejected() {
        for bad in [
            r#"{"type":"answer","answer":{"menu":1},"extra":0}"#,
            r#"{"type":"answer"}"#,
            r#"{"type":"question","answer":"ack"}"#,
            r#"{"type":"answer","answer":{"menu":1,"x":2}}"#,
        ] {
            assert!(serde_json::from_str::<ClientMessage>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn result_shape() {
        let m = ServerMessage::result(&RunOutcome::HaltedByExit, "<svg/>".into());
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["type"], "result");
        assert_eq!(v["outcome"], "exit");
        assert!(v["error"].is_null());
    }

    #[test]
    fn session_request_forms() {
        let r: SessionRequest = serde_json::from_str(r#"{"lib":"a.ppglib","entry":"x"}"#).unwrap();
        assert!(matches!(r, SessionRequest::Library(_)));
        let r: SessionRequest = serde_json::from_str(r#"{"source":"program P; exit; endprogram;"}"#).unwrap();
        assert!(matches!(r, SessionRequest::Source(_)));
        assert!(serde_json::from_str::<SessionRequest>(r#"{"lib":"a","entry":"x","y":1}"#).is_err());
    }
}
