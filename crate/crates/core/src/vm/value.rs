use std::fmt;
use std::sync::Arc;

use crate::canvas::{Attribute, Point};
use crate::types::{catalog, ArrayTy, RecordTy, Ty};

use super::OpError;

/// A runtime cell. Scalars carry their type in the variant; composites carry
/// their type descriptor; undefined scalars remember the type they await.
/// A composite is defined iff every component is.
#[derive(Debug, Clone)]
pub enum Value {
    Undefined(Ty),
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    Addr(u32),
    Record(Arc<RecordTy>, Vec<Value>),
    Array(Arc<ArrayTy>, Vec<Value>),
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Undefined(a), Value::Undefined(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Real(a), Value::Real(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Addr(a), Value::Addr(b)) => a == b,
            (Value::Record(a, p), Value::Record(b, q)) => {
                Ty::Record(a.clone()) == Ty::Record(b.clone()) && p == q
            }
            (Value::Array(a, p), Value::Array(b, q)) => {
                Ty::Array(a.clone()) == Ty::Array(b.clone()) && p == q
            }
            _ => false,
        }
    }
}

impl Value {
    /// The "не определено" value of a type; composites get undefined parts.
    pub fn undefined(ty: &Ty) -> Value {
        match ty {
            Ty::Record(r) => Value::Record(
                r.clone(),
                r.fields.iter().map(|f| Value::undefined(&f.ty)).collect(),
            ),
            Ty::Array(a) => Value::Array(a.clone(), vec![Value::undefined(&a.elem); a.len()]),
            scalar => Value::Undefined(scalar.clone()),
        }
    }

    pub fn ty(&self) -> Ty {
        match self {
            Value::Undefined(t) => t.clone(),
            Value::Bool(_) => Ty::Bool,
            Value::Int(_) => Ty::Int,
            Value::Real(_) => Ty::Real,
            Value::Str(_) => Ty::Str,
            Value::Addr(_) => Ty::Addr,
            Value::Record(r, _) => Ty::Record(r.clone()),
            Value::Array(a, _) => Ty::Array(a.clone()),
        }
    }

    pub fn is_defined(&self) -> bool {
        match self {
            Value::Undefined(_) => false,
            Value::Record(_, parts) | Value::Array(_, parts) => parts.iter().all(Value::is_defined),
            _ => true,
        }
    }

    /// Converts to `ty`, widening integers to reals at every level.
    /// Returns the value unchanged as the error when the types differ.
    pub fn coerce(self, ty: &Ty) -> Result<Value, Value> {
        match (self, ty) {
            (Value::Int(i), Ty::Real) => Ok(Value::Real(i as f64)),
            (Value::Undefined(Ty::Int), Ty::Real) => Ok(Value::Undefined(Ty::Real)),
            (Value::Record(r, parts), Ty::Record(target))
                if r.fields.len() == target.fields.len() =>
            {
                if Arc::ptr_eq(&r, target) {
                    return Ok(Value::Record(r, parts));
                }
                let mut out = Vec::with_capacity(parts.len());
                for (i, (v, f)) in parts.iter().cloned().zip(&target.fields).enumerate() {
                    if crate::frontend::ident::fold(&r.fields[i].name)
                        != crate::frontend::ident::fold(&f.name)
                    {
                        return Err(Value::Record(r, parts));
                    }
                    match v.coerce(&f.ty) {
                        Ok(v) => out.push(v),
                        Err(_) => return Err(Value::Record(r, parts)),
                    }
                }
                Ok(Value::Record(target.clone(), out))
            }
            (Value::Array(a, items), Ty::Array(target))
                if a.lo == target.lo && a.hi == target.hi =>
            {
                if Arc::ptr_eq(&a, target) {
                    return Ok(Value::Array(a, items));
                }
                let mut out = Vec::with_capacity(items.len());
                for v in items.iter().cloned() {
                    match v.coerce(&target.elem) {
                        Ok(v) => out.push(v),
                        Err(_) => return Err(Value::Array(a, items)),
                    }
                }
                Ok(Value::Array(target.clone(), out))
            }
            (v, ty) if v.ty() == *ty => Ok(v),
            (v, _) => Err(v),
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    /// Reads a number as real, widening integers.
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Real(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn fields(&self) -> Option<&[Value]> {
        match self {
            Value::Record(_, parts) => Some(parts),
            _ => None,
        }
    }

    pub fn point(p: Point) -> Value {
        let Ty::Record(r) = &catalog().point else {
            unreachable!()
        };
        Value::Record(r.clone(), vec![Value::Real(p.x), Value::Real(p.y)])
    }

    pub fn to_point(&self) -> Result<Point, OpError> {
        let bad = || OpError::type_violation(format!("expected Точка, got {}", self.ty()));
        let parts = self.fields().ok_or_else(bad)?;
        match parts {
            [x, y] => Ok(Point::new(
                x.as_real().ok_or_else(bad)?,
                y.as_real().ok_or_else(bad)?,
            )),
            _ => Err(bad()),
        }
    }

    pub fn attribute(a: Attribute) -> Value {
        let Ty::Record(r) = &catalog().attribute else {
            unreachable!()
        };
        Value::Record(r.clone(), a.as_ints().into_iter().map(Value::Int).collect())
    }

    /// Reads an `Атрибут` record, checking every field's natural range.
    pub fn to_attribute(&self) -> Result<Attribute, OpError> {
        let bad = || OpError::type_violation(format!("expected Атрибут, got {}", self.ty()));
        let parts = self.fields().ok_or_else(bad)?;
        let ints: Vec<i64> = parts
            .iter()
            .map(|v| v.as_int().ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        match ints[..] {
            [layer, color, lt, units] => Ok(Attribute::new(layer, color, lt, units)?),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Undefined(_) => f.write_str("<не определено>"),
            Value::Bool(true) => f.write_str("Да"),
            Value::Bool(false) => f.write_str("Нет"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
            Value::Str(s) => write!(f, "'{}'", s.replace('\'', "''")),
            Value::Addr(a) => write!(f, "@{a}"),
            Value::Record(r, parts) => {
                f.write_str("(")?;
                for (i, (field, v)) in r.fields.iter().zip(parts).enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}: {v}", field.name)?;
                }
                f.write_str(")")
            }
            Value::Array(_, items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}
