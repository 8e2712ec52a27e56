use std::collections::HashMap;
use std::f64::consts::PI;

use crate::frontend::ident::fold;
use crate::vm::Value;

/// The 16 colors in palette order (classic text-mode order).
pub const COLOR_NAMES: [&str; 16] = [
    "Черный",
    "Синий",
    "Зеленый",
    "Голубой",
    "Красный",
    "Фиолетовый",
    "Коричневый",
    "Светло_серый",
    "Темно_серый",
    "Ярко_синий",
    "Ярко_зеленый",
    "Ярко_голубой",
    "Ярко_красный",
    "Ярко_фиолетовый",
    "Желтый",
    "Белый",
];

pub const LINE_TYPE_NAMES: [&str; 7] = [
    "Сплош_осн",
    "Сплош_тонк",
    "Штрих_утол",
    "Штриховая",
    "Пункт_тонк",
    "Пункт_утол",
    "Разомкнутая",
];

/// Read-only named values visible to every program.
#[derive(Debug, Clone)]
pub struct ConstantCatalog {
    entries: Vec<(String, Value)>,
    index: HashMap<String, usize>,
}

impl ConstantCatalog {
    pub fn standard() -> Self {
        let mut entries: Vec<(String, Value)> = vec![
            ("Pi".into(), Value::Real(PI)),
            ("Да".into(), Value::Bool(true)),
            ("Нет".into(), Value::Bool(false)),
            ("Натура".into(), Value::Int(0)),
            ("Бумага".into(), Value::Int(1)),
        ];
        entries.extend(
            COLOR_NAMES
                .iter()
                .enumerate()
                .map(|(i, n)| (n.to_string(), Value::Int(i as i64))),
        );
        entries.extend(
            LINE_TYPE_NAMES
                .iter()
                .enumerate()
                .map(|(i, n)| (n.to_string(), Value::Int(i as i64))),
        );
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (fold(n), i))
            .collect();
        Self { entries, index }
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.index.get(&fold(name)).map(|&i| &self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v))
    }
}
