//! Type descriptors and the closed catalog of built-in composite types.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock};

use crate::frontend::ident::fold;

pub const BOOL_NAME: &str = "Логическое";
pub const INT_NAME: &str = "Целое";
pub const REAL_NAME: &str = "Вещественное";
pub const STR_NAME: &str = "Строка";
pub const ADDR_NAME: &str = "Адрес";

/// A resolved type. Composite types compare structurally; their names are
/// kept only for messages.
#[derive(Debug, Clone)]
pub enum Ty {
    Bool,
    Int,
    Real,
    Str,
    /// Internal handle type, never declarable from user code.
    Addr,
    Record(Arc<RecordTy>),
    Array(Arc<ArrayTy>),
}

#[derive(Debug, Clone)]
pub struct RecordTy {
    pub name: Option<String>,
    pub fields: Vec<Field>,
}

#[derive(Debug, Clone)]
pub struct Field {
    pub name: String,
    pub ty: Ty,
}

#[derive(Debug, Clone)]
pub struct ArrayTy {
    pub name: Option<String>,
    pub lo: i64,
    pub hi: i64,
    pub elem: Ty,
}

impl PartialEq for Ty {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Ty::Bool, Ty::Bool)
            | (Ty::Int, Ty::Int)
            | (Ty::Real, Ty::Real)
            | (Ty::Str, Ty::Str)
            | (Ty::Addr, Ty::Addr) => true,
            (Ty::Record(a), Ty::Record(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.fields.len() == b.fields.len()
                        && a.fields.iter().zip(&b.fields).all(|(x, y)| {
                            fold(&x.name) == fold(&y.name) && x.ty == y.ty
                        }))
            }
            (Ty::Array(a), Ty::Array(b)) => {
                Arc::ptr_eq(a, b) || (a.lo == b.lo && a.hi == b.hi && a.elem == b.elem)
            }
            _ => false,
        }
    }
}

impl Eq for Ty {}

impl Ty {
    pub fn record(name: Option<&str>, fields: Vec<(&str, Ty)>) -> Ty {
        Ty::Record(Arc::new(RecordTy {
            name: name.map(str::to_string),
            fields: fields
                .into_iter()
                .map(|(n, ty)| Field {
                    name: n.to_string(),
                    ty,
                })
                .collect(),
        }))
    }

    pub fn array(name: Option<&str>, lo: i64, hi: i64, elem: Ty) -> Ty {
        Ty::Array(Arc::new(ArrayTy {
            name: name.map(str::to_string),
            lo,
            hi,
            elem,
        }))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Ty::Int | Ty::Real)
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, Ty::Record(_) | Ty::Array(_))
    }

    /// True when a value of `from` may be stored where `self` is expected.
    /// Integer-to-real widening is the only implicit conversion.
    pub fn accepts(&self, from: &Ty) -> bool {
        self == from || (matches!(self, Ty::Real) && matches!(from, Ty::Int))
    }

    pub fn as_record(&self) -> Option<&RecordTy> {
        match self {
            Ty::Record(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&ArrayTy> {
        match self {
            Ty::Array(a) => Some(a),
            _ => None,
        }
    }

    /// True when the type (or any nested component) is `Адрес`.
    pub fn contains_addr(&self) -> bool {
        match self {
            Ty::Addr => true,
            Ty::Record(r) => r.fields.iter().any(|f| f.ty.contains_addr()),
            Ty::Array(a) => a.elem.contains_addr(),
            _ => false,
        }
    }
}

impl RecordTy {
    pub fn field_index(&self, name: &str) -> Option<usize> {
        let key = fold(name);
        self.fields.iter().position(|f| fold(&f.name) == key)
    }
}

impl ArrayTy {
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Bool => f.write_str(BOOL_NAME),
            Ty::Int => f.write_str(INT_NAME),
            Ty::Real => f.write_str(REAL_NAME),
            Ty::Str => f.write_str(STR_NAME),
            Ty::Addr => f.write_str(ADDR_NAME),
            Ty::Record(r) => match &r.name {
                Some(n) => f.write_str(n),
                None => {
                    f.write_str("record {")?;
                    for (i, field) in r.fields.iter().enumerate() {
                        if i > 0 {
                            f.write_str("; ")?;
                        }
                        write!(f, "{}: {}", field.name, field.ty)?;
                    }
                    f.write_str("}")
                }
            },
            Ty::Array(a) => match &a.name {
                Some(n) => f.write_str(n),
                None => write!(f, "array [{}..{}] of {}", a.lo, a.hi, a.elem),
            },
        }
    }
}

/// The built-in composite types, shared process-wide.
pub struct Catalog {
    pub length: Ty,
    pub point: Ty,
    pub segment: Ty,
    pub circle: Ty,
    pub arc: Ty,
    pub corners: Ty,
    pub polyline: Ty,
    pub ray: Ty,
    pub text: Ty,
    pub linear_dim: Ty,
    pub attribute: Ty,
    by_name: HashMap<String, Ty>,
}

/// Largest corner count of a polyline (`Массив углов` is `[0..15]`).
pub const MAX_POLYLINE_POINTS: usize = 16;

static CATALOG: LazyLock<Catalog> = LazyLock::new(Catalog::build);

pub fn catalog() -> &'static Catalog {
    &CATALOG
}

impl Catalog {
    fn build() -> Catalog {
        let length = Ty::record(Some("Длина"), vec![("R", Ty::Real)]);
        let point = Ty::record(Some("Точка"), vec![("X", Ty::Real), ("Y", Ty::Real)]);
        let segment = Ty::record(
            Some("Отрезок"),
            vec![("Начало", point.clone()), ("Конец", point.clone())],
        );
        let circle = Ty::record(
            Some("Окружность"),
            vec![("Центр", point.clone()), ("R", Ty::Real)],
        );
        let arc = Ty::record(
            Some("Дуга"),
            vec![
                ("Окр_ть", circle.clone()),
                ("Угол1", Ty::Real),
                ("Угол2", Ty::Real),
            ],
        );
        let corners = Ty::array(Some("Массив углов"), 0, 15, point.clone());
        let polyline = Ty::record(
            Some("Ломаная"),
            vec![("Нотр", Ty::Int), ("Углы", corners.clone())],
        );
        let ray = Ty::record(
            Some("Луч"),
            vec![("Начало", point.clone()), ("Угол", Ty::Real)],
        );
        let text = Ty::record(
            Some("Текст"),
            vec![
                ("Сноска", point.clone()),
                ("ЛучТекста", ray.clone()),
                ("_АдрТекста", Ty::Addr),
            ],
        );
        let linear_dim = Ty::record(
            Some("Линейный размер"),
            vec![
                ("База", segment.clone()),
                ("Начало", point.clone()),
                ("ЛучТекста", ray.clone()),
                ("Текст", Ty::Str),
            ],
        );
        let attribute = Ty::record(
            Some("Атрибут"),
            vec![
                ("Слой", Ty::Int),
                ("Цвет", Ty::Int),
                ("Тип_Линии", Ty::Int),
                ("Сист_Отсчета", Ty::Int),
            ],
        );

        let mut by_name = HashMap::new();
        for (name, ty) in [
            (BOOL_NAME, Ty::Bool),
            (INT_NAME, Ty::Int),
            (REAL_NAME, Ty::Real),
            (STR_NAME, Ty::Str),
            (ADDR_NAME, Ty::Addr),
            ("Длина", length.clone()),
            ("Точка", point.clone()),
            ("Отрезок", segment.clone()),
            ("Окружность", circle.clone()),
            ("Дуга", arc.clone()),
            ("Массив углов", corners.clone()),
            ("Ломаная", polyline.clone()),
            ("Луч", ray.clone()),
            ("Текст", text.clone()),
            ("Линейный размер", linear_dim.clone()),
            ("Атрибут", attribute.clone()),
        ] {
            by_name.insert(fold(name), ty);
        }

        Catalog {
            length,
            point,
            segment,
            circle,
            arc,
            corners,
            polyline,
            ray,
            text,
            linear_dim,
            attribute,
            by_name,
        }
    }

    /// Resolves a (possibly multi-word) built-in type name.
    pub fn lookup(&self, name: &str) -> Option<&Ty> {
        self.by_name.get(&fold(name))
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.by_name.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_array_matches_inline_declaration() {
        let inline = Ty::array(None, 0, 15, catalog().point.clone());
        assert_eq!(inline, catalog().corners);
        assert_eq!(catalog().corners.as_array().unwrap().len(), MAX_POLYLINE_POINTS);
    }

    #[test]
    fn records_compare_structurally() {
        let p = Ty::record(None, vec![("x", Ty::Real), ("y", Ty::Real)]);
        assert_eq!(p, catalog().point);
        let q = Ty::record(None, vec![("X", Ty::Real), ("Z", Ty::Real)]);
        assert_ne!(q, catalog().point);
    }

    #[test]
    fn widening_is_one_way() {
        assert!(Ty::Real.accepts(&Ty::Int));
        assert!(!Ty::Int.accepts(&Ty::Real));
    }

    #[test]
    fn lookup_multiword_names() {
        assert!(catalog().lookup("Массив углов").is_some());
        assert!(catalog().lookup("линейный размер").is_some());
        assert!(catalog().lookup("Нечто").is_none());
        assert!(catalog().text.contains_addr());
    }
}
