//! Arithmetic, comparison, logic and elementary functions.

use std::cmp::Ordering;

use super::{arg, arg_bool, arg_int, arg_real, ExecCtx};
use crate::types::Ty;
use crate::vm::{ErrorKind, OpError, Value};

type OpResult = Result<Option<Value>, OpError>;

fn finite(name: &str, x: f64) -> Result<Option<Value>, OpError> {
    if x.is_finite() {
        Ok(Some(Value::Real(x)))
    } else {
        Err(OpError::domain(format!("{name}: result is not a finite number")))
    }
}

fn overflow(name: &str) -> OpError {
    OpError::range(format!("{name}: integer overflow"))
}

fn mismatch(name: &str, a: &Value, b: &Value) -> OpError {
    OpError::type_violation(format!("{name} is not defined for {} and {}", a.ty(), b.ty()))
}

// ---- typing rules ----

pub(super) fn numeric_join(args: &[Ty]) -> Result<Option<Ty>, String> {
    match args {
        [Ty::Int, Ty::Int] => Ok(Some(Ty::Int)),
        [a, b] if a.is_numeric() && b.is_numeric() => Ok(Some(Ty::Real)),
        [a, b] => Err(format!("expected numbers, got {a} and {b}")),
        _ => Err("expected two operands".into()),
    }
}

pub(super) fn plus_rule(args: &[Ty]) -> Result<Option<Ty>, String> {
    match args {
        [Ty::Str, Ty::Str] => Ok(Some(Ty::Str)),
        _ => numeric_join(args),
    }
}

pub(super) fn real_quotient(args: &[Ty]) -> Result<Option<Ty>, String> {
    numeric_join(args).map(|_| Some(Ty::Real))
}

pub(super) fn same_numeric(args: &[Ty]) -> Result<Option<Ty>, String> {
    match args {
        [t] if t.is_numeric() => Ok(Some(t.clone())),
        [t] => Err(format!("expected a number, got {t}")),
        _ => Err("expected one operand".into()),
    }
}

pub(super) fn ordering_rule(args: &[Ty]) -> Result<Option<Ty>, String> {
    match args {
        [a, b] if a.is_numeric() && b.is_numeric() => Ok(Some(Ty::Bool)),
        [Ty::Str, Ty::Str] => Ok(Some(Ty::Bool)),
        [a, b] => Err(format!("cannot order {a} and {b}")),
        _ => Err("expected two operands".into()),
    }
}

pub(super) fn equality_rule(args: &[Ty]) -> Result<Option<Ty>, String> {
    match args {
        [Ty::Bool, Ty::Bool] => Ok(Some(Ty::Bool)),
        _ => ordering_rule(args).map_err(|_| {
            format!("cannot compare {} and {}", args[0], args[1])
        }),
    }
}

pub(super) fn iif_rule(args: &[Ty]) -> Result<Option<Ty>, String> {
    match args {
        [Ty::Bool, a, b] if a == b => Ok(Some(a.clone())),
        [Ty::Bool, a, b] => Err(format!("both arms must have one type, got {a} and {b}")),
        [c, _, _] => Err(format!("condition must be Логическое, got {c}")),
        _ => Err("expected three operands".into()),
    }
}

// ---- arithmetic ----

pub(super) fn add(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let (a, b) = (arg(args, 0)?, arg(args, 1)?);
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Ok(Some(Value::Int(x.checked_add(*y).ok_or_else(|| overflow("+"))?))),
        (Value::Str(x), Value::Str(y)) => Ok(Some(Value::Str(format!("{x}{y}")))),
        _ => match (a.as_real(), b.as_real()) {
            (Some(x), Some(y)) => finite("+", x + y),
            _ => Err(mismatch("+", a, b)),
        },
    }
}

fn int_or_real(
    name: &str,
    args: &[Value],
    int: fn(i64, i64) -> Option<i64>,
    real: fn(f64, f64) -> f64,
) -> OpResult {
    let (a, b) = (arg(args, 0)?, arg(args, 1)?);
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Ok(Some(Value::Int(int(*x, *y).ok_or_else(|| overflow(name))?))),
        _ => match (a.as_real(), b.as_real()) {
            (Some(x), Some(y)) => finite(name, real(x, y)),
            _ => Err(mismatch(name, a, b)),
        },
    }
}

pub(super) fn sub(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    int_or_real("-", args, i64::checked_sub, |x, y| x - y)
}

pub(super) fn mul(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    int_or_real("*", args, i64::checked_mul, |x, y| x * y)
}

pub(super) fn divide(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let x = arg_real(args, 0)?;
    let y = arg_real(args, 1)?;
    if y == 0.0 {
        return Err(OpError::new(ErrorKind::DivisionByZero, "/: division by zero"));
    }
    finite("/", x / y)
}

pub(super) fn int_div(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let x = arg_int(args, 0)?;
    let y = arg_int(args, 1)?;
    if y == 0 {
        return Err(OpError::new(ErrorKind::DivisionByZero, "DIV: division by zero"));
    }
    // truncates toward zero
    Ok(Some(Value::Int(x.checked_div(y).ok_or_else(|| overflow("DIV"))?)))
}

pub(super) fn modulo(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let x = arg_int(args, 0)?;
    let y = arg_int(args, 1)?;
    if y == 0 {
        return Err(OpError::new(ErrorKind::DivisionByZero, "MOD: division by zero"));
    }
    // result takes the dividend's sign
    Ok(Some(Value::Int(x.checked_rem(y).ok_or_else(|| overflow("MOD"))?)))
}

pub(super) fn power(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let base = arg_real(args, 0)?;
    let exp = arg_real(args, 1)?;
    if base < 0.0 && exp.fract() != 0.0 {
        return Err(OpError::domain(format!(
            "^: negative base {base} with non-integer exponent {exp}"
        )));
    }
    if base == 0.0 && exp < 0.0 {
        return Err(OpError::domain("^: zero raised to a negative power"));
    }
    finite("^", base.powf(exp))
}

pub(super) fn negate(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    match arg(args, 0)? {
        Value::Int(x) => Ok(Some(Value::Int(x.checked_neg().ok_or_else(|| overflow("-"))?))),
        Value::Real(x) => Ok(Some(Value::Real(-x))),
        v => Err(OpError::type_violation(format!("unary - is not defined for {}", v.ty()))),
    }
}

pub(super) fn abs(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    match arg(args, 0)? {
        Value::Int(x) => Ok(Some(Value::Int(x.checked_abs().ok_or_else(|| overflow("ABS"))?))),
        Value::Real(x) => Ok(Some(Value::Real(x.abs()))),
        v => Err(OpError::type_violation(format!("ABS is not defined for {}", v.ty()))),
    }
}

pub(super) fn trunc(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    Ok(Some(Value::Real(arg_real(args, 0)?.trunc())))
}

pub(super) fn frac(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let x = arg_real(args, 0)?;
    Ok(Some(Value::Real(x - x.trunc())))
}

pub(super) fn round(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    // f64::round rounds half away from zero
    let r = arg_real(args, 0)?.round();
    if !(-9.223_372_036_854_775e18..9.223_372_036_854_775e18).contains(&r) {
        return Err(OpError::range(format!("ROUND: {r} does not fit Целое")));
    }
    Ok(Some(Value::Int(r as i64)))
}

/// Real function with a domain predicate.
pub(super) fn real_fn(
    name: &'static str,
    f: fn(f64) -> f64,
    domain: fn(f64) -> bool,
    domain_text: &'static str,
) -> impl Fn(&mut ExecCtx<'_>, &[Value]) -> OpResult + Send + Sync + 'static {
    move |_, args| {
        let x = arg_real(args, 0)?;
        if !domain(x) {
            return Err(OpError::domain(format!("{name}({x}): argument must be {domain_text}")));
        }
        finite(name, f(x))
    }
}

pub(super) fn any_real(_: f64) -> bool {
    true
}

pub(super) fn deg_to_rad(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    finite("ИзГрадВРад", arg_real(args, 0)?.to_radians())
}

pub(super) fn rad_to_deg(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    finite("ИзРадВГрад", arg_real(args, 0)?.to_degrees())
}

// ---- comparison and logic ----

fn compare(name: &str, a: &Value, b: &Value) -> Result<Ordering, OpError> {
    match (a, b) {
        (Value::Str(x), Value::Str(y)) => Ok(x.cmp(y)),
        _ => match (a.as_real(), b.as_real()) {
            (Some(x), Some(y)) => x.partial_cmp(&y).ok_or_else(|| mismatch(name, a, b)),
            _ => Err(mismatch(name, a, b)),
        },
    }
}

pub(super) fn comparison(
    name: &'static str,
    test: fn(Ordering) -> bool,
    allow_bool: bool,
) -> impl Fn(&mut ExecCtx<'_>, &[Value]) -> OpResult + Send + Sync + 'static {
    move |_, args| {
        let (a, b) = (arg(args, 0)?, arg(args, 1)?);
        if let (Value::Bool(x), Value::Bool(y)) = (a, b) {
            if allow_bool {
                return Ok(Some(Value::Bool(test(x.cmp(y)))));
            }
            return Err(mismatch(name, a, b));
        }
        Ok(Some(Value::Bool(test(compare(name, a, b)?))))
    }
}

pub(super) fn not(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    Ok(Some(Value::Bool(!arg_bool(args, 0)?)))
}

pub(super) fn logic(f: fn(bool, bool) -> bool) -> impl Fn(&mut ExecCtx<'_>, &[Value]) -> OpResult + Send + Sync + 'static {
    move |_, args| Ok(Some(Value::Bool(f(arg_bool(args, 0)?, arg_bool(args, 1)?))))
}

pub(super) fn iif(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let pick = if arg_bool(args, 0)? { 1 } else { 2 };
    let (a, b) = (arg(args, 1)?, arg(args, 2)?);
    if a.ty() != b.ty() {
        return Err(mismatch("IIF", a, b));
    }
    Ok(Some(arg(args, pick)?.clone()))
}

/// Number to text: integral values print without a decimal point, others
/// with up to six fractional digits, trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
