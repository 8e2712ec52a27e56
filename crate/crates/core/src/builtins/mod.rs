//! Registry of built-in operations and constants.
//!
//! Each operation is one [`BuiltinDescriptor`]: its name, opcode, fixity and
//! precedence drive the lexer and parser, its [`Signature`] drives type
//! checking, and its handler runs it. Nothing outside the descriptor knows
//! about an individual operation, so adding one means registering one
//! descriptor.

mod catalog;
mod constants;
mod dialog;
mod drawing;
mod numeric;
mod text;

pub use constants::{ConstantCatalog, COLOR_NAMES, LINE_TYPE_NAMES};
pub use numeric::format_number;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, LazyLock};

use thiserror::Error;

use crate::canvas::Canvas;
use crate::frontend::ident::fold;
use crate::interaction::{DialogState, FormBinding, Interactor};
use crate::types::Ty;
use crate::vm::{OpError, Value};

/// Opcodes below this value are reserved for core commands.
pub const FIRST_BUILTIN_OPCODE: u16 = 0x10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assoc {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixity {
    Infix(Assoc),
    Prefix,
    /// Called with a parenthesized argument list.
    Call,
    /// Zero-argument operation written without parentheses.
    Bare,
    /// Control keyword (`GOTO`, `IF`, …); lowers to core jump commands.
    Control,
}

pub type TypeRule = fn(&[Ty]) -> Result<Option<Ty>, String>;

#[derive(Clone)]
pub enum Signature {
    /// Exact parameter types (integers widen to reals) and result.
    Fixed { params: Vec<Ty>, result: Option<Ty> },
    /// Fixed arity with a typing rule relating the argument types.
    Rule { arity: usize, rule: TypeRule },
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Fixed { params, result } => {
                let ps: Vec<String> = params.iter().map(Ty::to_string).collect();
                write!(f, "({})", ps.join(", "))?;
                if let Some(r) = result {
                    write!(f, " -> {r}")?;
                }
                Ok(())
            }
            Signature::Rule { arity, .. } => write!(f, "rule/{arity}"),
        }
    }
}

/// Everything a handler may touch while running.
pub struct ExecCtx<'a> {
    pub canvas: &'a mut Canvas,
    pub interactor: &'a mut dyn Interactor,
    pub dialog: &'a mut DialogState,
    pub vars: &'a mut dyn FormBinding,
    /// Directory relative file names (menu files) resolve against.
    pub base_dir: Option<&'a Path>,
}

pub type Handler =
    Arc<dyn Fn(&mut ExecCtx<'_>, &[Value]) -> Result<Option<Value>, OpError> + Send + Sync>;

#[derive(Clone)]
pub struct BuiltinDescriptor {
    pub name: String,
    pub opcode: u16,
    pub fixity: Fixity,
    pub precedence: Option<u8>,
    pub signature: Signature,
    pub handler: Handler,
}

impl fmt::Debug for BuiltinDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BuiltinDescriptor")
            .field("name", &self.name)
            .field("opcode", &self.opcode)
            .field("fixity", &self.fixity)
            .field("precedence", &self.precedence)
            .field("signature", &self.signature)
            .finish()
    }
}

impl BuiltinDescriptor {
    pub fn new(
        name: &str,
        opcode: u16,
        fixity: Fixity,
        signature: Signature,
        handler: impl Fn(&mut ExecCtx<'_>, &[Value]) -> Result<Option<Value>, OpError>
            + Send
            + Sync
            + 'static,
    ) -> Self {
        Self {
            name: name.to_string(),
            opcode,
            fixity,
            precedence: None,
            signature,
            handler: Arc::new(handler),
        }
    }

    pub fn with_precedence(mut self, level: u8) -> Self {
        self.precedence = Some(level);
        self
    }

    pub fn arity(&self) -> usize {
        match &self.signature {
            Signature::Fixed { params, .. } => params.len(),
            Signature::Rule { arity, .. } => *arity,
        }
    }

    /// Result type for the given argument types, or a message describing
    /// the mismatch.
    pub fn check(&self, args: &[Ty]) -> Result<Option<Ty>, String> {
        if args.len() != self.arity() {
            return Err(format!(
                "{} takes {} argument(s), got {}",
                self.name,
                self.arity(),
                args.len()
            ));
        }
        match &self.signature {
            Signature::Fixed { params, result } => {
                for (i, (p, a)) in params.iter().zip(args).enumerate() {
                    if !p.accepts(a) {
                        return Err(format!(
                            "argument {} of {}: expected {p}, got {a}",
                            i + 1,
                            self.name
                        ));
                    }
                }
                Ok(result.clone())
            }
            Signature::Rule { rule, .. } => {
                rule(args).map_err(|m| format!("{}: {m}", self.name))
            }
        }
    }

    /// Declared parameter types, when fixed.
    pub fn fixed_params(&self) -> Option<&[Ty]> {
        match &self.signature {
            Signature::Fixed { params, .. } => Some(params),
            Signature::Rule { .. } => None,
        }
    }

    pub fn is_operator(&self) -> bool {
        matches!(self.fixity, Fixity::Infix(_) | Fixity::Prefix)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("operation '{0}' is already registered")]
    DuplicateName(String),
    #[error("opcode {0:#06x} is already used by '{1}'")]
    DuplicateOpcode(u16, String),
    #[error("opcode {0:#06x} is reserved for core commands")]
    ReservedOpcode(u16),
    #[error("'{0}' is a built-in constant")]
    ConstantName(String),
    #[error("operator '{0}' needs a precedence level")]
    MissingPrecedence(String),
}

#[derive(Clone)]
pub struct Registry {
    ops: Vec<Arc<BuiltinDescriptor>>,
    by_opcode: HashMap<u16, usize>,
    callables: HashMap<String, usize>,
    infix: HashMap<String, usize>,
    prefix: HashMap<String, usize>,
    constants: ConstantCatalog,
}

static STANDARD: LazyLock<Registry> = LazyLock::new(Registry::standard);

impl Registry {
    /// An empty registry with the constant catalog only.
    pub fn empty() -> Self {
        Self {
            ops: Vec::new(),
            by_opcode: HashMap::new(),
            callables: HashMap::new(),
            infix: HashMap::new(),
            prefix: HashMap::new(),
            constants: ConstantCatalog::standard(),
        }
    }

    /// All standard operations.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        for desc in catalog::standard_operations() {
            r.register_builtin(desc)
                .expect("standard operation table is consistent");
        }
        r
    }

    /// Process-wide shared standard registry.
    pub fn global() -> &'static Registry {
        &STANDARD
    }

    pub fn register_builtin(&mut self, desc: BuiltinDescriptor) -> Result<(), RegistryError> {
        let key = fold(&desc.name);
        if self.constants.lookup(&desc.name).is_some() {
            return Err(RegistryError::ConstantName(desc.name));
        }
        let table = match desc.fixity {
            Fixity::Infix(_) => &self.infix,
            Fixity::Prefix => &self.prefix,
            Fixity::Call | Fixity::Bare | Fixity::Control => &self.callables,
        };
        if table.contains_key(&key) {
            return Err(RegistryError::DuplicateName(desc.name));
        }
        if desc.is_operator() && desc.precedence.is_none() {
            return Err(RegistryError::MissingPrecedence(desc.name));
        }
        if desc.fixity != Fixity::Control {
            if desc.opcode < FIRST_BUILTIN_OPCODE {
                return Err(RegistryError::ReservedOpcode(desc.opcode));
            }
            if let Some(&i) = self.by_opcode.get(&desc.opcode) {
                return Err(RegistryError::DuplicateOpcode(
                    desc.opcode,
                    self.ops[i].name.clone(),
                ));
            }
        }
        let idx = self.ops.len();
        match desc.fixity {
            Fixity::Infix(_) => self.infix.insert(key, idx),
            Fixity::Prefix => self.prefix.insert(key, idx),
            _ => self.callables.insert(key, idx),
        };
        if desc.fixity != Fixity::Control {
            self.by_opcode.insert(desc.opcode, idx);
        }
        self.ops.push(Arc::new(desc));
        Ok(())
    }

    /// Case-insensitive lookup across callables, infix and prefix operators.
    pub fn lookup(&self, name: &str) -> Option<&BuiltinDescriptor> {
        let key = fold(name);
        self.callables
            .get(&key)
            .or_else(|| self.infix.get(&key))
            .or_else(|| self.prefix.get(&key))
            .map(|&i| &*self.ops[i])
    }

    /// Callable (call, bare or control) operation by name.
    pub fn lookup_callable(&self, name: &str) -> Option<&BuiltinDescriptor> {
        self.callables.get(&fold(name)).map(|&i| &*self.ops[i])
    }

    pub fn lookup_infix(&self, name: &str) -> Option<&BuiltinDescriptor> {
        self.infix.get(&fold(name)).map(|&i| &*self.ops[i])
    }

    pub fn lookup_prefix(&self, name: &str) -> Option<&BuiltinDescriptor> {
        self.prefix.get(&fold(name)).map(|&i| &*self.ops[i])
    }

    pub fn by_opcode(&self, opcode: u16) -> Option<&BuiltinDescriptor> {
        self.by_opcode.get(&opcode).map(|&i| &*self.ops[i])
    }

    pub fn operations(&self) -> impl Iterator<Item = &BuiltinDescriptor> {
        self.ops.iter().map(|d| &**d)
    }

    pub fn constants(&self) -> &ConstantCatalog {
        &self.constants
    }

    /// True when `name` is an operator spelled as a word (`DIV`, `NOT`, …).
    pub fn is_word_operator(&self, name: &str) -> bool {
        let key = fold(name);
        self.infix.contains_key(&key) || self.prefix.contains_key(&key)
    }

    /// Operator spellings made of symbols, longest first.
    pub fn symbol_operators(&self) -> Vec<String> {
        let mut syms: Vec<String> = self
            .ops
            .iter()
            .filter(|d| d.is_operator() && !d.name.chars().any(char::is_alphanumeric))
            .map(|d| d.name.clone())
            .collect();
        syms.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
        syms.dedup();
        syms
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("operations", &self.ops.len())
            .finish()
    }
}

pub(crate) fn arg(args: &[Value], i: usize) -> Result<&Value, OpError> {
    args.get(i)
        .ok_or_else(|| OpError::type_violation(format!("missing argument {}", i + 1)))
}

pub(crate) fn arg_real(args: &[Value], i: usize) -> Result<f64, OpError> {
    let v = arg(args, i)?;
    v.as_real().ok_or_else(|| {
        OpError::type_violation(format!("argument {}: expected a number, got {}", i + 1, v.ty()))
    })
}

pub(crate) fn arg_int(args: &[Value], i: usize) -> Result<i64, OpError> {
    let v = arg(args, i)?;
    v.as_int().ok_or_else(|| {
        OpError::type_violation(format!("argument {}: expected Целое, got {}", i + 1, v.ty()))
    })
}

pub(crate) fn arg_bool(args: &[Value], i: usize) -> Result<bool, OpError> {
    let v = arg(args, i)?;
    v.as_bool().ok_or_else(|| {
        OpError::type_violation(format!("argument {}: expected Логическое, got {}", i + 1, v.ty()))
    })
}

pub(crate) fn arg_str(args: &[Value], i: usize) -> Result<&str, OpError> {
    let v = arg(args, i)?;
    v.as_str().ok_or_else(|| {
        OpError::type_violation(format!("argument {}: expected Строка, got {}", i + 1, v.ty()))
    })
}

#[cfg(test)]
mod tests;
