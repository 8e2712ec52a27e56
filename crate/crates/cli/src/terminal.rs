//! Prompts answered on a terminal: questions go to `out`, replies are read
//! line by line from `input`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use pgen_core::interaction::{
    Answer, FieldKind, FormAnswer, FormValue, InteractionError, Interactor, Prompt, QueryAnswer,
};

pub struct TerminalInteractor<R, W> {
    input: R,
    out: W,
}

impl<R: BufRead, W: Write> TerminalInteractor<R, W> {
    pub fn new(input: R, out: W) -> Self {
        Self { input, out }
    }

    fn say(&mut self, text: &str) -> Result<(), InteractionError> {
        write!(self.out, "{text}")
            .and_then(|_| self.out.flush())
            .map_err(|e| InteractionError::Aborted(e.to_string()))
    }

    fn line(&mut self) -> Result<String, InteractionError> {
        let mut s = String::new();
        match self.input.read_line(&mut s) {
            Ok(0) => Err(InteractionError::Aborted("end of input".into())),
            Ok(_) => Ok(s.trim_end_matches(['\r', '\n']).to_string()),
            Err(e) => Err(InteractionError::Aborted(e.to_string())),
        }
    }

    fn query(&mut self, text: &str) -> Result<Answer, InteractionError> {
        loop {
            self.say(&format!("{text} [y/n/c]: "))?;
            let reply = self.line()?.trim().to_lowercase();
            let a = match reply.as_str() {
                "y" | "yes" | "д" | "да" => QueryAnswer::Yes,
                "n" | "no" | "н" | "нет" => QueryAnswer::No,
                "c" | "cancel" | "о" | "отказ" => QueryAnswer::Cancel,
                _ => continue,
            };
            return Ok(Answer::Query(a));
        }
    }

    fn menu(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        let Prompt::Menu { title, options, initial } = prompt else {
            unreachable!()
        };
        let mut text = format!("{title}\n");
        for (i, o) in options.iter().enumerate() {
            let mark = if i as i64 + 1 == *initial { '*' } else { ' ' };
            let off = if o.enabled { "" } else { " (unavailable)" };
            text += &format!("{mark}{:>3}) {}{off}\n", o.value, o.text);
        }
        text += "  0) cancel\n";
        self.say(&text)?;
        loop {
            self.say("choice: ")?;
            let Ok(v) = self.line()?.trim().parse::<i64>() else {
                continue;
            };
            if v == 0 || options.iter().any(|o| o.enabled && o.value == v) {
                return Ok(Answer::Menu(v));
            }
        }
    }

    fn form(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        let Prompt::Form { title, fields } = prompt else {
            unreachable!()
        };
        self.say(&format!("{title} (empty keeps the value, '!' cancels)\n"))?;
        let mut values = BTreeMap::new();
        for f in fields {
            let current = match &f.value {
                Some(FormValue::Integer(i)) => i.to_string(),
                Some(FormValue::Number(x)) => x.to_string(),
                Some(FormValue::Text(s)) => s.clone(),
                None => String::new(),
            };
            loop {
                self.say(&format!("{} [{current}]: ", f.label))?;
                let reply = self.line()?;
                let reply = reply.trim();
                if reply == "!" {
                    return Ok(Answer::Form(FormAnswer {
                        accept: false,
                        values: BTreeMap::new(),
                    }));
                }
                if reply.is_empty() {
                    break;
                }
                let v = match f.kind {
                    FieldKind::Integer => reply.parse().ok().map(FormValue::Integer),
                    FieldKind::Number => reply.parse().ok().map(FormValue::Number),
                    FieldKind::Text | FieldKind::Scale => Some(FormValue::Text(reply.to_string())),
                };
                if let Some(v) = v {
                    values.insert(f.key.clone(), v);
                    break;
                }
            }
        }
        Ok(Answer::Form(FormAnswer { accept: true, values }))
    }
}

impl<R: BufRead, W: Write> Interactor for TerminalInteractor<R, W> {
    fn ask(&mut self, prompt: &Prompt) -> Result<Answer, InteractionError> {
        match prompt {
            Prompt::Message { text, .. } => {
                self.say(&format!("{text}\n"))?;
                Ok(Answer::Ack)
            }
            Prompt::Query { text } => self.query(text),
            Prompt::Menu { .. } => self.menu(prompt),
            Prompt::Form { .. } => self.form(prompt),
        }
    }
}
