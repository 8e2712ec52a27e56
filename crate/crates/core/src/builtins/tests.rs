use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::interaction::{FieldKind, FormValue, ScriptedInteractor};
use crate::vm::ErrorKind;

struct NoVars;

impl FormBinding for NoVars {
    fn field_kind(&self, name: &str) -> Result<FieldKind, String> {
        Err(format!("unknown variable {name}"))
    }
    fn current(&self, _: &str) -> Option<FormValue> {
        None
    }
    fn assign(&mut self, name: &str, _: &FormValue) -> Result<(), String> {
        Err(format!("unknown variable {name}"))
    }
}

fn apply_with(reg: &Registry, desc: &BuiltinDescriptor, args: &[Value]) -> Result<Option<Value>, OpError> {
    let _ = reg;
    let mut canvas = Canvas::new();
    let mut interactor = ScriptedInteractor::default();
    let mut dialog = DialogState::new();
    let mut vars = NoVars;
    let mut ctx = ExecCtx {
        canvas: &mut canvas,
        interactor: &mut interactor,
        dialog: &mut dialog,
        vars: &mut vars,
        base_dir: None,
    };
    (desc.handler)(&mut ctx, args)
}

fn call(name: &str, args: &[Value]) -> Result<Value, OpError> {
    let reg = Registry::global();
    let desc = reg.lookup_callable(name).expect(name);
    apply_with(reg, desc, args).map(|v| v.expect("value"))
}

fn infix(name: &str, a: Value, b: Value) -> Result<Value, OpError> {
    let reg = Registry::global();
    let desc = reg.lookup_infix(name).expect(name);
    apply_with(reg, desc, &[a, b]).map(|v| v.expect("value"))
}

#[test]
fn lookup_examples() {
    let reg = Registry::global();
    let sqrt = reg.lookup("SQRT").unwrap();
    assert_eq!(sqrt.fixity, Fixity::Call);
    assert_eq!(sqrt.fixed_params(), Some(&[Ty::Real][..]));
    assert_eq!(sqrt.check(&[Ty::Real]), Ok(Some(Ty::Real)));

    let attr = reg.lookup("Глоб_Атр").unwrap();
    assert_eq!(attr.fixity, Fixity::Bare);
    assert_eq!(attr.arity(), 0);
    assert_eq!(
        attr.check(&[]),
        Ok(Some(crate::types::catalog().attribute.clone()))
    );

    assert!(reg.lookup("НЕТТАКОЙ").is_none());
    assert!(reg.lookup("sqrt").is_some());
    assert!(reg.lookup("глоб_атр").is_some());
}

#[test]
fn precedence_table() {
    let reg = Registry::global();
    let level = |n: &str| reg.lookup_infix(n).unwrap().precedence.unwrap();
    assert_eq!(level("^"), 7);
    assert_eq!(reg.lookup_prefix("-").unwrap().precedence, Some(6));
    assert_eq!(reg.lookup_prefix("not").unwrap().precedence, Some(6));
    for op in ["*", "/", "DIV", "MOD"] {
        assert_eq!(level(op), 5, "{op}");
    }
    for op in ["+", "-"] {
        assert_eq!(level(op), 4, "{op}");
    }
    for op in ["=", "<>", "<", "<=", ">", ">="] {
        assert_eq!(level(op), 3, "{op}");
    }
    assert_eq!(level("AND"), 2);
    assert_eq!(level("OR"), 1);
    assert_eq!(level("XOR"), 1);
    assert_eq!(reg.lookup_infix("^").unwrap().fixity, Fixity::Infix(Assoc::Right));
    assert_eq!(reg.lookup_infix("-").unwrap().fixity, Fixity::Infix(Assoc::Left));
}

#[test]
fn symbol_operators_longest_first() {
    let syms = Registry::global().symbol_operators();
    let pos = |s: &str| syms.iter().position(|x| x == s).unwrap();
    assert!(pos("<=") < pos("<"));
    assert!(pos("<>") < pos(">"));
    assert!(!syms.iter().any(|s| s == "DIV"));
}

#[test]
fn duplicate_registration_fails() {
    let mut reg = Registry::standard();
    let sqrt = reg.lookup("SQRT").unwrap().clone();
    assert_eq!(
        reg.register_builtin(BuiltinDescriptor { opcode: 0x3F0, ..sqrt.clone() }),
        Err(RegistryError::DuplicateName("SQRT".into()))
    );
    let other = BuiltinDescriptor { name: "КОРЕНЬ".into(), ..sqrt };
    assert!(matches!(
        reg.register_builtin(other),
        Err(RegistryError::DuplicateOpcode(0x44, _))
    ));
    let reserved = BuiltinDescriptor::new("X1", 0x05, Fixity::Call, Signature::Fixed { params: vec![], result: None }, |_, _| Ok(None));
    assert_eq!(reg.register_builtin(reserved), Err(RegistryError::ReservedOpcode(5)));
    let constant = BuiltinDescriptor::new("Pi", 0x300, Fixity::Call, Signature::Fixed { params: vec![], result: None }, |_, _| Ok(None));
    assert!(matches!(reg.register_builtin(constant), Err(RegistryError::ConstantName(_))));
}

#[test]
fn opcodes_unique() {
    let reg = Registry::global();
    let mut seen = std::collections::HashSet::new();
    for op in reg.operations().filter(|d| d.fixity != Fixity::Control) {
        assert!(seen.insert(op.opcode), "{} reuses {:#x}", op.name, op.opcode);
        assert!(op.opcode >= FIRST_BUILTIN_OPCODE);
        assert_eq!(reg.by_opcode(op.opcode).unwrap().name, op.name);
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn numeric_examples() {
    assert_eq!(infix("MOD", Value::Int(7), Value::Int(3)).unwrap(), Value::Int(1));
    assert_eq!(infix("MOD", Value::Int(-7), Value::Int(3)).unwrap(), Value::Int(-1));
    assert_eq!(infix("DIV", Value::Int(-7), Value::Int(2)).unwrap(), Value::Int(-3));
    assert_eq!(call("SQRT", &[Value::Real(2.0)]).unwrap(), Value::Real(1.4142135623730951));
    assert_eq!(
        call("IIF", &[Value::Bool(true), Value::Int(10), Value::Int(20)]).unwrap(),
        Value::Int(10)
    );
    assert_eq!(
        call("IIF", &[Value::Bool(false), Value::Int(10), Value::Int(20)]).unwrap(),
        Value::Int(20)
    );
    assert_eq!(call("ИзГрадВРад", &[Value::Real(180.0)]).unwrap(), Value::Real(PI));
    assert_eq!(infix("+", Value::Int(2), Value::Int(3)).unwrap(), Value::Int(5));
    assert_eq!(infix("+", Value::Int(2), Value::Real(0.5)).unwrap(), Value::Real(2.5));
    assert_eq!(infix("/", Value::Int(880), Value::Int(6)).unwrap(), Value::Real(880.0 / 6.0));
    assert_eq!(call("ROUND", &[Value::Real(2.5)]).unwrap(), Value::Int(3));
    assert_eq!(call("ROUND", &[Value::Real(-2.5)]).unwrap(), Value::Int(-3));
    assert_eq!(call("INT", &[Value::Real(-2.7)]).unwrap(), Value::Real(-2.0));
    assert_eq!(call("ABS", &[Value::Int(-4)]).unwrap(), Value::Int(4));
}

#[test]
fn numeric_errors() {
    let e = infix("/", Value::Real(1.0), Value::Real(0.0)).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DivisionByZero);
    let e = infix("MOD", Value::Int(1), Value::Int(0)).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DivisionByZero);
    let e = call("SQRT", &[Value::Real(-1.0)]).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DomainError);
    let e = call("LN", &[Value::Real(0.0)]).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DomainError);
    let e = infix("^", Value::Real(-8.0), Value::Real(1.0 / 3.0)).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DomainError);
    assert_eq!(infix("^", Value::Real(-2.0), Value::Real(3.0)).unwrap(), Value::Real(-8.0));
    let e = infix("*", Value::Int(i64::MAX), Value::Int(2)).unwrap_err();
    assert_eq!(e.kind, ErrorKind::RangeViolation);
}

#[test]
fn string_examples() {
    assert_eq!(
        infix("+", Value::Str("аб".into()), Value::Str("в".into())).unwrap(),
        Value::Str("абв".into())
    );
    assert_eq!(
        call("Подстрока", &[Value::Str("фундамент".into()), Value::Int(1), Value::Int(4)]).unwrap(),
        Value::Str("фунд".into())
    );
    assert_eq!(
        call("Подстрока", &[Value::Str("абв".into()), Value::Int(2), Value::Int(10)]).unwrap(),
        Value::Str("бв".into())
    );
    let e = call("Подстрока", &[Value::Str("абв".into()), Value::Int(0), Value::Int(1)]).unwrap_err();
    assert_eq!(e.kind, ErrorKind::RangeViolation);
    let e = call("Подстрока", &[Value::Str("абв".into()), Value::Int(1), Value::Int(-1)]).unwrap_err();
    assert_eq!(e.kind, ErrorKind::RangeViolation);
    assert_eq!(
        infix("<", Value::Str("а".into()), Value::Str("б".into())).unwrap(),
        Value::Bool(true)
    );
}

#[test]
fn conversion_examples() {
    assert_eq!(call("ЧислоВСтроку", &[Value::Real(880.0)]).unwrap(), Value::Str("880".into()));
    assert_eq!(call("ЧислоВСтроку", &[Value::Real(112.5)]).unwrap(), Value::Str("112.5".into()));
    assert_eq!(call("ЧислоВСтроку", &[Value::Real(1.0 / 3.0)]).unwrap(), Value::Str("0.333333".into()));
    assert_eq!(call("СтрокаВЦелое", &[Value::Str("25".into())]).unwrap(), Value::Int(25));
    let e = call("СтрокаВЦелое", &[Value::Str("1:25".into())]).unwrap_err();
    assert_eq!(e.kind, ErrorKind::DomainError);
    assert_eq!(call("СтрокаВЧисло", &[Value::Str("-2.5".into())]).unwrap(), Value::Real(-2.5));
}

#[test]
fn iif_typing() {
    let iif = Registry::global().lookup("IIF").unwrap();
    assert_eq!(iif.check(&[Ty::Bool, Ty::Int, Ty::Int]), Ok(Some(Ty::Int)));
    assert!(iif.check(&[Ty::Bool, Ty::Int, Ty::Str]).is_err());
    assert!(iif.check(&[Ty::Int, Ty::Int, Ty::Int]).is_err());
    assert!(iif.check(&[Ty::Bool, Ty::Int]).is_err());
}

#[test]
fn extension_registers_new_operation() {
    let mut reg = Registry::standard();
    let attr = crate::types::catalog().attribute.clone();
    reg.register_builtin(BuiltinDescriptor::new(
        "ОтрезПунктир",
        0x3F0,
        Fixity::Call,
        Signature::Fixed {
            params: vec![attr, Ty::Real, Ty::Real, Ty::Real, Ty::Real],
            result: Some(Ty::Int),
        },
        |_, _| Ok(Some(Value::Int(0))),
    ))
    .unwrap();
    assert_eq!(reg.lookup("отрезпунктир").unwrap().arity(), 5);
}

proptest! {
    #[test]
    fn arcsin_inverts_sin(x in -PI / 2.0..=PI / 2.0) {
        let s = call("SIN", &[Value::Real(x)]).unwrap();
        let back = call("ARCSIN", &[s]).unwrap().as_real().unwrap();
        prop_assert!((back - x).abs() <= 1e-12);
    }

    #[test]
    fn iif_returns_selected_operand(c: bool, a: i64, b: i64) {
        let r = call("IIF", &[Value::Bool(c), Value::Int(a), Value::Int(b)]).unwrap();
        prop_assert_eq!(r, Value::Int(if c { a } else { b }));
    }
}
