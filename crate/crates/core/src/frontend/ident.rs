//! Identifier rules and the case/look-alike folding used for name lookup.

/// Maximum identifier length in characters.
pub const MAX_IDENT_LEN: usize = 30;

/// Characters allowed inside identifiers: Latin and basic Cyrillic letters,
/// digits and underscore. `ё`/`Ё` fall outside `а..я`/`А..Я` and are rejected.
pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || ('а'..='я').contains(&c) || ('А'..='Я').contains(&c)
}

/// Characters that may start an identifier.
pub fn is_ident_start(c: char) -> bool {
    is_ident_char(c) && !c.is_ascii_digit()
}

/// Lookup key for an identifier.
///
/// Names compare case-insensitively, and Latin letters that render the same
/// as a Cyrillic letter are folded onto it, so `B` and `В` name the same thing.
pub fn fold(name: &str) -> String {
    name.chars()
        .flat_map(char::to_lowercase)
        .map(|c| match c {
            'a' => 'а',
            'b' => 'в',
            'c' => 'с',
            'e' => 'е',
            'h' => 'н',
            'k' => 'к',
            'm' => 'м',
            'o' => 'о',
            'p' => 'р',
            't' => 'т',
            'x' => 'х',
            'y' => 'у',
            other => other,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_is_case_insensitive() {
        assert_eq!(fold("Шапка"), fold("шАПКА"));
        assert_eq!(fold("SQRT"), fold("sqrt"));
    }

    #[test]
    fn fold_merges_latin_lookalikes() {
        assert_eq!(fold("H"), fold("Н"));
        assert_eq!(fold("B"), fold("В"));
        assert_eq!(fold("b"), fold("В"));
        assert_ne!(fold("L"), fold("Л"));
        assert_ne!(fold("n1"), fold("п1"));
    }

    #[test]
    fn ident_charset() {
        assert!(is_ident_char('я'));
        assert!(is_ident_char('Z'));
        assert!(is_ident_char('_'));
        assert!(!is_ident_char('ё'));
        assert!(!is_ident_char('é'));
        assert!(!is_ident_start('1'));
    }
}
