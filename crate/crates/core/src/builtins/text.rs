//! String operations and number/text conversions.

use super::numeric::format_number;
use super::{arg_int, arg_real, arg_str, ExecCtx};
use crate::vm::{OpError, Value};

type OpResult = Result<Option<Value>, OpError>;

/// `Подстрока(s, start, len)`: 1-based start, clamped at the string end.
pub(super) fn substring(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let s = arg_str(args, 0)?;
    let start = arg_int(args, 1)?;
    let len = arg_int(args, 2)?;
    if start < 1 {
        return Err(OpError::range(format!("Подстрока: start {start} is below 1")));
    }
    if len < 0 {
        return Err(OpError::range(format!("Подстрока: negative length {len}")));
    }
    let out: String = s
        .chars()
        .skip(start as usize - 1)
        .take(len as usize)
        .collect();
    Ok(Some(Value::Str(out)))
}

pub(super) fn number_to_string(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    Ok(Some(Value::Str(format_number(arg_real(args, 0)?))))
}

fn is_decimal(text: &str, allow_fraction: bool) -> bool {
    let body = text.strip_prefix(['+', '-']).unwrap_or(text);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) if allow_fraction => (i, Some(f)),
        Some(_) => return false,
        None => (body, None),
    };
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    match frac {
        None => !int.is_empty() && digits(int),
        Some(f) => (!int.is_empty() || !f.is_empty()) && digits(int) && digits(f),
    }
}

pub(super) fn string_to_int(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let s = arg_str(args, 0)?;
    let t = s.trim();
    if !is_decimal(t, false) {
        return Err(OpError::domain(format!("СтрокаВЦелое: '{s}' is not an integer")));
    }
    t.parse::<i64>()
        .map(|i| Some(Value::Int(i)))
        .map_err(|_| OpError::range(format!("СтрокаВЦелое: '{s}' does not fit Целое")))
}

pub(super) fn string_to_real(_: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let s = arg_str(args, 0)?;
    let t = s.trim();
    if !is_decimal(t, true) {
        return Err(OpError::domain(format!("СтрокаВЧисло: '{s}' is not a number")));
    }
    t.parse::<f64>()
        .map(|x| Some(Value::Real(x)))
        .map_err(|_| OpError::domain(format!("СтрокаВЧисло: '{s}' is not a number")))
}

#[cfg(test)]
mod tests {
    use super::is_decimal;

    #[test]
    fn decimal_shapes() {
        assert!(is_decimal("25", false));
        assert!(is_decimal("-7", false));
        assert!(is_decimal("+7", false));
        assert!(!is_decimal("1:25", false));
        assert!(!is_decimal("2.5", false));
        assert!(is_decimal("2.5", true));
        assert!(is_decimal(".5", true));
        assert!(!is_decimal(".", true));
        assert!(!is_decimal("inf", true));
        assert!(!is_decimal("1e5", true));
        assert!(!is_decimal("", true));
    }
}
