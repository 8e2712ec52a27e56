use std::path::Path;

use super::{
    Answer, FieldKind, FormField, FormValue, Grid, Interactor, MenuOption, Placement, Prompt,
    QueryAnswer, SCALE_KEY,
};
use crate::canvas::{Canvas, Scale, STANDARD_SCALES};
use crate::vm::OpError;

type Result<T> = std::result::Result<T, OpError>;

/// Access to program variables by name, used by forms.
pub trait FormBinding {
    /// Field kind matching the variable's type, or a message naming why the
    /// variable cannot be bound.
    fn field_kind(&self, name: &str) -> std::result::Result<FieldKind, String>;
    /// Current value, `None` when undefined.
    fn current(&self, name: &str) -> Option<FormValue>;
    fn assign(&mut self, name: &str, value: &FormValue) -> std::result::Result<(), String>;
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MenuBuilder {
    pub title: String,
    pub options: Vec<MenuOption>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldBinding {
    Variable(String),
    Scale,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub label: String,
    pub binding: FieldBinding,
    pub grid: Option<Grid>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormBuilder {
    pub title: String,
    pub fields: Vec<FieldSpec>,
}

/// Menu and form under construction plus the last menu choice.
#[derive(Debug, Clone, Default)]
pub struct DialogState {
    menu: Option<MenuBuilder>,
    last_choice: Option<String>,
    form: Option<FormBuilder>,
}

impl DialogState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn menu(&self) -> Option<&MenuBuilder> {
        self.menu.as_ref()
    }

    pub fn form(&self) -> Option<&FormBuilder> {
        self.form.as_ref()
    }

    pub fn new_menu(&mut self, title: &str) {
        self.menu = Some(MenuBuilder {
            title: title.to_string(),
            options: Vec::new(),
        });
    }

    fn open_menu(&mut self) -> Result<&mut MenuBuilder> {
        self.menu
            .as_mut()
            .ok_or_else(|| OpError::domain("no menu has been created"))
    }

    pub fn add_option(&mut self, text: &str, value: i64, enabled: bool) -> Result<()> {
        if value == 0 {
            return Err(OpError::range("option value 0 is reserved for cancel"));
        }
        self.open_menu()?.options.push(MenuOption {
            text: text.to_string(),
            value,
            enabled,
        });
        Ok(())
    }

    /// Adds the non-empty texts as enabled options numbered on from the
    /// current option count.
    pub fn add_5_options(&mut self, texts: [&str; 5]) -> Result<()> {
        let menu = self.open_menu()?;
        for text in texts.into_iter().filter(|t| !t.is_empty()) {
            let value = menu.options.len() as i64 + 1;
            menu.options.push(MenuOption {
                text: text.to_string(),
                value,
                enabled: true,
            });
        }
        Ok(())
    }

    fn choose(&mut self, menu: &MenuBuilder, initial: i64, interactor: &mut dyn Interactor) -> Result<i64> {
        if menu.options.is_empty() {
            return Err(OpError::domain("menu has no options"));
        }
        let prompt = Prompt::Menu {
            title: menu.title.clone(),
            options: menu.options.clone(),
            initial,
        };
        let value = match interactor.ask(&prompt)? {
            Answer::Menu(v) => v,
            other => {
                return Err(OpError::abort(format!(
                    "expected a menu answer, got a {} answer",
                    other.kind()
                )))
            }
        };
        if value == 0 {
            self.last_choice = Some(String::new());
            return Ok(0);
        }
        match menu.options.iter().find(|o| o.value == value && o.enabled) {
            Some(opt) => {
                self.last_choice = Some(opt.text.clone());
                Ok(value)
            }
            None if menu.options.iter().any(|o| o.value == value) => {
                Err(OpError::abort(format!("menu option {value} is disabled")))
            }
            None => Err(OpError::abort(format!("menu has no option {value}"))),
        }
    }

    /// Shows the current menu. Returns the chosen value, 0 on cancel.
    pub fn show_menu(&mut self, initial: i64, interactor: &mut dyn Interactor) -> Result<i64> {
        let menu = self.open_menu()?.clone();
        self.choose(&menu, initial, interactor)
    }

    /// Shows a menu whose options are the lines of a text file, valued by
    /// 1-based line number.
    pub fn menu_from_file(&mut self, path: &Path, interactor: &mut dyn Interactor) -> Result<i64> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| OpError::domain(format!("cannot read menu file {}: {e}", path.display())))?;
        let options: Vec<MenuOption> = text
            .lines()
            .enumerate()
            .map(|(i, line)| MenuOption {
                text: line.trim_end_matches('\r').to_string(),
                value: i as i64 + 1,
                enabled: true,
            })
            .collect();
        if options.is_empty() {
            return Err(OpError::domain(format!("menu file {} is empty", path.display())));
        }
        let menu = MenuBuilder {
            title: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
            options,
        };
        self.choose(&menu, 1, interactor)
    }

    /// Text of the last chosen option; empty after a cancel.
    pub fn option_text(&self) -> Result<String> {
        self.last_choice
            .clone()
            .ok_or_else(|| OpError::domain("no menu choice has been made yet"))
    }

    pub fn message(&mut self, text: &str, placement: Placement, interactor: &mut dyn Interactor) -> Result<()> {
        match interactor.ask(&Prompt::Message {
            text: text.to_string(),
            placement,
        })? {
            Answer::Ack => Ok(()),
            other => Err(OpError::abort(format!(
                "expected an acknowledgement, got a {} answer",
                other.kind()
            ))),
        }
    }

    /// Yes/no/cancel question: 1 = yes, 2 = no, 0 = cancel.
    pub fn query(&mut self, text: &str, interactor: &mut dyn Interactor) -> Result<i64> {
        match interactor.ask(&Prompt::Query {
            text: text.to_string(),
        })? {
            Answer::Query(QueryAnswer::Yes) => Ok(1),
            Answer::Query(QueryAnswer::No) => Ok(2),
            Answer::Query(QueryAnswer::Cancel) => Ok(0),
            other => Err(OpError::abort(format!(
                "expected a query answer, got a {} answer",
                other.kind()
            ))),
        }
    }

    pub fn new_form(&mut self, title: &str) {
        self.form = Some(FormBuilder {
            title: title.to_string(),
            fields: Vec::new(),
        });
    }

    pub fn add_field(&mut self, label: &str, binding: FieldBinding, grid: Option<Grid>) -> Result<()> {
        self.form
            .as_mut()
            .ok_or_else(|| OpError::domain("no form has been created"))?
            .fields
            .push(FieldSpec {
                label: label.to_string(),
                binding,
                grid,
            });
        Ok(())
    }

    /// Shows the form with the bound variables' current values. On accept
    /// every supplied value is checked first, then all are written; returns
    /// `false` on cancel without writing anything.
    pub fn run_editor(
        &mut self,
        vars: &mut dyn FormBinding,
        canvas: &mut Canvas,
        interactor: &mut dyn Interactor,
    ) -> Result<bool> {
        let form = self
            .form
            .clone()
            .ok_or_else(|| OpError::domain("no form has been created"))?;
        if form.fields.is_empty() {
            return Err(OpError::domain("form has no fields"));
        }
        let mut fields = Vec::with_capacity(form.fields.len());
        for spec in &form.fields {
            let field = match &spec.binding {
                FieldBinding::Variable(name) => FormField {
                    label: spec.label.clone(),
                    kind: vars.field_kind(name).map_err(|m| {
                        OpError::type_violation(format!("form field '{}': {m}", spec.label))
                    })?,
                    key: name.clone(),
                    grid: spec.grid,
                    value: vars.current(name),
                    choices: Vec::new(),
                },
                FieldBinding::Scale => FormField {
                    label: spec.label.clone(),
                    kind: FieldKind::Scale,
                    key: SCALE_KEY.to_string(),
                    grid: spec.grid,
                    value: Some(FormValue::Text(canvas.settings().scale.label())),
                    choices: STANDARD_SCALES.iter().map(Scale::label).collect(),
                },
            };
            fields.push(field);
        }
        let prompt = Prompt::Form {
            title: form.title.clone(),
            fields,
        };
        let Prompt::Form { fields, .. } = &prompt else {
            unreachable!()
        };
        let answer = match interactor.ask(&prompt)? {
            Answer::Form(f) => f,
            other => {
                return Err(OpError::abort(format!(
                    "expected a form answer, got a {} answer",
                    other.kind()
                )))
            }
        };
        if !answer.accept {
            return Ok(false);
        }

        enum Write {
            Var(String, FormValue),
            Scale(Scale),
        }
        let mut writes = Vec::new();
        for (key, value) in &answer.values {
            let field = fields
                .iter()
                .find(|f| &f.key == key)
                .ok_or_else(|| OpError::abort(format!("form has no field bound to '{key}'")))?;
            let bad = || {
                OpError::abort(format!(
                    "value {} does not fit {:?} field '{}'",
                    serde_json::to_string(value).unwrap_or_default(),
                    field.kind,
                    field.label
                ))
            };
            let write = match (field.kind, value) {
                (FieldKind::Text, FormValue::Text(_)) => Write::Var(key.clone(), value.clone()),
                (FieldKind::Integer, FormValue::Integer(_)) => Write::Var(key.clone(), value.clone()),
                (FieldKind::Integer, FormValue::Number(n))
                    if n.fract() == 0.0 && n.abs() < 9.0e15 =>
                {
                    Write::Var(key.clone(), FormValue::Integer(*n as i64))
                }
                (FieldKind::Number, FormValue::Integer(i)) => {
                    Write::Var(key.clone(), FormValue::Number(*i as f64))
                }
                (FieldKind::Number, FormValue::Number(n)) if n.is_finite() => {
                    Write::Var(key.clone(), value.clone())
                }
                (FieldKind::Scale, FormValue::Text(t)) => Write::Scale(Scale::parse(t).ok_or_else(bad)?),
                _ => return Err(bad()),
            };
            writes.push(write);
        }
        for w in writes {
            match w {
                Write::Var(name, value) => vars
                    .assign(&name, &value)
                    .map_err(|m| OpError::type_violation(format!("form field '{name}': {m}")))?,
                Write::Scale(s) => canvas.set_scale(s),
            }
        }
        Ok(true)
    }
}
