//! The standard operation table.

use std::cmp::Ordering;

use super::numeric as num;
use super::{dialog, drawing, text};
use super::{Assoc, BuiltinDescriptor, ExecCtx, Fixity, Signature};
use crate::types::{catalog, Ty};
use crate::vm::{OpError, Value};

type OpResult = Result<Option<Value>, OpError>;

fn fixed(params: &[Ty], result: Option<Ty>) -> Signature {
    Signature::Fixed {
        params: params.to_vec(),
        result,
    }
}

fn rule(arity: usize, rule: super::TypeRule) -> Signature {
    Signature::Rule { arity, rule }
}

fn control(_: &mut ExecCtx<'_>, _: &[Value]) -> OpResult {
    Err(OpError::abort("control keyword has no run-time handler"))
}

fn label_rule(_: &[Ty]) -> Result<Option<Ty>, String> {
    Ok(None)
}

fn infix(
    name: &str,
    opcode: u16,
    level: u8,
    assoc: Assoc,
    signature: Signature,
    handler: impl Fn(&mut ExecCtx<'_>, &[Value]) -> OpResult + Send + Sync + 'static,
) -> BuiltinDescriptor {
    BuiltinDescriptor::new(name, opcode, Fixity::Infix(assoc), signature, handler).with_precedence(level)
}

fn call(
    name: &str,
    opcode: u16,
    signature: Signature,
    handler: impl Fn(&mut ExecCtx<'_>, &[Value]) -> OpResult + Send + Sync + 'static,
) -> BuiltinDescriptor {
    BuiltinDescriptor::new(name, opcode, Fixity::Call, signature, handler)
}

fn real1(
    name: &'static str,
    opcode: u16,
    f: fn(f64) -> f64,
    domain: fn(f64) -> bool,
    text: &'static str,
) -> BuiltinDescriptor {
    call(
        name,
        opcode,
        fixed(&[Ty::Real], Some(Ty::Real)),
        num::real_fn(name, f, domain, text),
    )
}

pub(super) fn standard_operations() -> Vec<BuiltinDescriptor> {
    use Assoc::{Left, Right};
    let (b, i, r, s) = (Ty::Bool, Ty::Int, Ty::Real, Ty::Str);
    let attr = catalog().attribute.clone();
    let pt = catalog().point.clone();
    let r2 = || vec![Ty::Real; 2];

    let mut ops = vec![
        // operators
        infix("*", 0x10, 5, Left, rule(2, num::numeric_join), num::mul),
        infix("/", 0x11, 5, Left, rule(2, num::real_quotient), num::divide),
        infix("DIV", 0x12, 5, Left, fixed(&[i.clone(), i.clone()], Some(i.clone())), num::int_div),
        infix("MOD", 0x13, 5, Left, fixed(&[i.clone(), i.clone()], Some(i.clone())), num::modulo),
        infix("+", 0x14, 4, Left, rule(2, num::plus_rule), num::add),
        infix("-", 0x15, 4, Left, rule(2, num::numeric_join), num::sub),
        infix("^", 0x16, 7, Right, rule(2, num::real_quotient), num::power),
        BuiltinDescriptor::new("-", 0x17, Fixity::Prefix, rule(1, num::same_numeric), num::negate)
            .with_precedence(6),
        BuiltinDescriptor::new("NOT", 0x18, Fixity::Prefix, fixed(std::slice::from_ref(&b), Some(b.clone())), num::not)
            .with_precedence(6),
        infix("=", 0x19, 3, Left, rule(2, num::equality_rule), num::comparison("=", Ordering::is_eq, true)),
        infix("<>", 0x1A, 3, Left, rule(2, num::equality_rule), num::comparison("<>", Ordering::is_ne, true)),
        infix("<", 0x1B, 3, Left, rule(2, num::ordering_rule), num::comparison("<", Ordering::is_lt, false)),
        infix("<=", 0x1C, 3, Left, rule(2, num::ordering_rule), num::comparison("<=", Ordering::is_le, false)),
        infix(">", 0x1D, 3, Left, rule(2, num::ordering_rule), num::comparison(">", Ordering::is_gt, false)),
        infix(">=", 0x1E, 3, Left, rule(2, num::ordering_rule), num::comparison(">=", Ordering::is_ge, false)),
        infix("AND", 0x1F, 2, Left, fixed(&[b.clone(), b.clone()], Some(b.clone())), num::logic(|x, y| x && y)),
        infix("OR", 0x20, 1, Left, fixed(&[b.clone(), b.clone()], Some(b.clone())), num::logic(|x, y| x || y)),
        infix("XOR", 0x21, 1, Left, fixed(&[b.clone(), b.clone()], Some(b.clone())), num::logic(|x, y| x ^ y)),
        // numeric and text functions
        call("INT", 0x40, fixed(std::slice::from_ref(&r), Some(r.clone())), num::trunc),
        call("FRAC", 0x41, fixed(std::slice::from_ref(&r), Some(r.clone())), num::frac),
        call("ROUND", 0x42, fixed(std::slice::from_ref(&r), Some(i.clone())), num::round),
        call("ABS", 0x43, rule(1, num::same_numeric), num::abs),
        real1("SQRT", 0x44, f64::sqrt, |x| x >= 0.0, "non-negative"),
        real1("LN", 0x45, f64::ln, |x| x > 0.0, "positive"),
        real1("EXP", 0x46, f64::exp, num::any_real, "finite"),
        real1("LG", 0x47, f64::log10, |x| x > 0.0, "positive"),
        call("IIF", 0x48, rule(3, num::iif_rule), num::iif),
        call("ИзГрадВРад", 0x49, fixed(std::slice::from_ref(&r), Some(r.clone())), num::deg_to_rad),
        call("ИзРадВГрад", 0x4A, fixed(std::slice::from_ref(&r), Some(r.clone())), num::rad_to_deg),
        call("ЧислоВСтроку", 0x4B, fixed(std::slice::from_ref(&r), Some(s.clone())), text::number_to_string),
        call("СтрокаВЦелое", 0x4C, fixed(std::slice::from_ref(&s), Some(i.clone())), text::string_to_int),
        call("Подстрока", 0x4D, fixed(&[s.clone(), i.clone(), i.clone()], Some(s.clone())), text::substring),
        call("СтрокаВЧисло", 0x4E, fixed(std::slice::from_ref(&s), Some(r.clone())), text::string_to_real),
        real1("SIN", 0x4F, f64::sin, num::any_real, "finite"),
        real1("COS", 0x50, f64::cos, num::any_real, "finite"),
        real1("TG", 0x51, f64::tan, num::any_real, "finite"),
        real1("ARCSIN", 0x52, f64::asin, |x| (-1.0..=1.0).contains(&x), "within [-1, 1]"),
        real1("ARCCOS", 0x53, f64::acos, |x| (-1.0..=1.0).contains(&x), "within [-1, 1]"),
        real1("ARCTG", 0x54, f64::atan, num::any_real, "finite"),
        real1("SH", 0x55, f64::sinh, num::any_real, "finite"),
        real1("CH", 0x56, f64::cosh, num::any_real, "finite"),
        real1("TH", 0x57, f64::tanh, num::any_real, "finite"),
        real1("ARSH", 0x58, f64::asinh, num::any_real, "finite"),
        real1("ARCH", 0x59, f64::acosh, |x| x >= 1.0, "at least 1"),
        real1("ARTH", 0x5A, f64::atanh, |x| x > -1.0 && x < 1.0, "within (-1, 1)"),
        // dialog
        call("Сообщение", 0x80, fixed(std::slice::from_ref(&s), None), dialog::message),
        call("Информация", 0x81, fixed(std::slice::from_ref(&s), None), dialog::information),
        call("Запрос", 0x82, fixed(std::slice::from_ref(&s), Some(i.clone())), dialog::query),
        call("НовоеМеню", 0x83, fixed(std::slice::from_ref(&s), None), dialog::new_menu),
        call("ДобОпцию", 0x84, fixed(&[s.clone(), i.clone(), b.clone()], None), dialog::add_option),
        call("Доб_5_Опций", 0x85, fixed(&vec![s.clone(); 5], None), dialog::add_5_options),
        call("ПоказМеню", 0x86, fixed(std::slice::from_ref(&i), Some(i.clone())), dialog::show_menu),
        call("МенюИзФайла", 0x87, fixed(std::slice::from_ref(&s), Some(i.clone())), dialog::menu_from_file),
        BuiltinDescriptor::new("ТекстОпции", 0x88, Fixity::Bare, fixed(&[], Some(s.clone())), dialog::option_text),
        call("Новая_форма", 0x89, fixed(std::slice::from_ref(&s), None), dialog::new_form),
        call("Новое_поле", 0x8A, fixed(&[s.clone(), s.clone()], None), dialog::new_field),
        call(
            "Новое_полеXY",
            0x8B,
            fixed(&[s.clone(), s.clone(), i.clone(), i.clone()], None),
            dialog::new_field_xy,
        ),
        call("Масштаб_поле", 0x8C, fixed(&[s.clone(), i.clone(), i.clone()], None), dialog::scale_field),
        BuiltinDescriptor::new("Редактор", 0x8D, Fixity::Bare, fixed(&[], Some(b.clone())), dialog::editor),
        // drawing
        BuiltinDescriptor::new("Глоб_Атр", 0xC0, Fixity::Bare, fixed(&[], Some(attr.clone())), drawing::global_attr),
        call("Уст_Атр", 0xC1, fixed(std::slice::from_ref(&attr), None), drawing::set_attr),
        call("Отрез", 0xC2, fixed(&[vec![attr.clone()], vec![Ty::Real; 4]].concat(), Some(i.clone())), drawing::segment),
        call("Прямоуг", 0xC3, fixed(&[vec![attr.clone()], vec![Ty::Real; 4]].concat(), Some(i.clone())), drawing::rectangle),
        call("ДугаОкружн", 0xC4, fixed(&[vec![attr.clone()], vec![Ty::Real; 5]].concat(), Some(i.clone())), drawing::arc),
        call("ЛРазмСноски", 0xC5, fixed(std::slice::from_ref(&b), None), drawing::dim_leaders),
        call("ЛРазмТочн", 0xC6, fixed(std::slice::from_ref(&i), None), drawing::dim_precision),
        call("ЛРазмВынос", 0xC7, fixed(&vec![Ty::Real; 3], None), drawing::dim_extension),
        call("ЛРазмШрифт", 0xC8, fixed(&vec![Ty::Real; 3], None), drawing::dim_font),
        call("ЛРазмСтрелки", 0xC9, fixed(&vec![Ty::Real; 4], None), drawing::dim_arrows),
        call(
            "ГорРазмер1",
            0xCA,
            fixed(&[attr.clone(), pt.clone(), pt.clone(), r.clone()], Some(i.clone())),
            drawing::horizontal_dim,
        ),
        call(
            "ВерРазмер1",
            0xCB,
            fixed(&[attr.clone(), pt.clone(), pt.clone(), r.clone()], Some(i.clone())),
            drawing::vertical_dim,
        ),
        call("РамкаРазм", 0xCC, fixed(&[vec![attr.clone()], vec![Ty::Real; 5]].concat(), Some(i.clone())), drawing::dim_frame),
        call("ТекстСноска", 0xCD, fixed(std::slice::from_ref(&b), None), drawing::text_leader),
        call("ТекстШрифт", 0xCE, fixed(&vec![Ty::Real; 4], None), drawing::text_font),
        call("ДлинаСтроки", 0xCF, fixed(std::slice::from_ref(&s), Some(r.clone())), drawing::string_width),
        call("НачатьТекст", 0xD0, fixed(std::slice::from_ref(&s), None), drawing::begin_text),
        call("ДобСтроку", 0xD1, fixed(std::slice::from_ref(&s), None), drawing::append_line),
        call("ЗавершитьТекст", 0xD2, fixed(&[vec![attr.clone()], r2()].concat(), Some(i.clone())), drawing::commit_text),
        call("ОтмВысоты", 0xD3, fixed(&[attr.clone(), pt.clone(), s.clone()], Some(i.clone())), drawing::height_mark),
        call(
            "ОбрывТрубы",
            0xD4,
            fixed(&[attr.clone(), pt.clone(), r.clone(), r.clone()], Some(i.clone())),
            drawing::pipe_break,
        ),
        call(
            "ОбрывПоДуге",
            0xD5,
            fixed(&[attr.clone(), pt.clone(), pt.clone(), r.clone()], Some(i.clone())),
            drawing::arc_break,
        ),
        call("УбратьИзЧерт", 0xD6, fixed(std::slice::from_ref(&i), None), drawing::remove),
    ];

    // Control keywords lower to core jump commands; they are listed so the
    // registry names every operation of the language.
    for (name, opcode, sig) in [
        ("GOTO", 2, rule(1, label_rule)),
        ("EXIT", 1, fixed(&[], None)),
        ("IF", 3, fixed(std::slice::from_ref(&b), None)),
        ("ELSE", 2, fixed(&[], None)),
        ("ENDIF", 2, fixed(&[], None)),
        ("CASE", 2, fixed(&[], None)),
        ("ON", 3, fixed(std::slice::from_ref(&b), None)),
        ("ONELSE", 2, fixed(&[], None)),
        ("ENDCASE", 2, fixed(&[], None)),
    ] {
        ops.push(BuiltinDescriptor::new(name, opcode, Fixity::Control, sig, control));
    }
    ops
}
