use proptest::prelude::*;

use super::opcode::*;
use super::*;
use crate::builtins::Registry;
use crate::diag::{Diagnostic, SourcePos};
use crate::pipeline::{compile_logged, compile_source};
use crate::sema::TypedProgram;

const LISTING: &str = include_str!("../../tests/fixtures/ogolovok.ppg");

fn reg() -> &'static Registry {
    Registry::global()
}

fn build(text: &str) -> CompiledProgram {
    compile_source(text).unwrap_or_else(|d| panic!("{d:#?}"))
}

fn op(name: &str) -> u16 {
    reg().lookup(name).unwrap().opcode
}

#[test]
fn assignment_of_sum_is_one_command() {
    let cp = build("program P;\nvar;\na, b, x : Целое;\nendvar;\nx := a + b;\nendprogram;");
    assert_eq!(cp.code, vec![op("+"), 0, 1, 2, END]);
}

#[test]
fn exit_is_a_single_word() {
    let cp = build("program P;\nexit;\nendprogram;");
    assert_eq!(cp.code, vec![EXIT, END]);
}

#[test]
fn empty_body_compiles_to_end() {
    let tp = TypedProgram {
        name: "E".into(),
        vars: Vec::new(),
        labels: Vec::new(),
        body: Vec::new(),
    };
    let cp = compile(&tp).unwrap();
    assert_eq!(cp.code, vec![END]);
    assert!(cp.strings.is_empty() && cp.consts.is_empty() && cp.slots.is_empty());
    let bytes = cp.encode();
    // magic, version, name "E", four empty tables, code count 1, END
    assert_eq!(bytes.len(), 4 + 2 + 3 + 2 * 4 + 2 + 2);
    assert_eq!(CompiledProgram::decode(&bytes, reg()).unwrap(), cp);
}

#[test]
fn frame_layout_vars_then_temps_then_consts() {
    let cp = build("program P;\nvar;\nx, y : Вещественное;\nendvar;\nx := (y + 1) * (y + 2);\nendprogram;");
    let kinds: Vec<SlotKind> = cp.slots.iter().map(|s| s.kind).collect();
    assert_eq!(
        kinds,
        vec![SlotKind::Var, SlotKind::Var, SlotKind::Temp, SlotKind::Temp, SlotKind::Const, SlotKind::Const]
    );
    assert_eq!(cp.slot_name(0), "x");
    assert_eq!(cp.slot_name(4), "1");
}

#[test]
fn temporaries_are_reused_between_statements() {
    let cp = build(
        "program P;\nvar;\nx, y : Вещественное;\nendvar;\nx := (y + 1) * 2;\ny := (x + 1) * 3;\nendprogram;",
    );
    assert_eq!(cp.slots.iter().filter(|s| s.kind == SlotKind::Temp).count(), 1);
}

#[test]
fn constants_are_pooled_once() {
    let cp = build("program P;\nvar;\nx : Целое;\nendvar;\nx := 7; x := x + 7; x := 7 * x;\nendprogram;");
    assert_eq!(cp.consts, vec![Const::Int(7)]);
}

#[test]
fn if_lowers_to_conditional_jump() {
    let cp = build("program P;\nvar;\nx : Целое;\nendvar;\nif x = 0; x := 1; else; x := 2; endif;\nendprogram;");
    let cmds = commands(&cp, reg()).unwrap();
    let names: Vec<&str> = cmds.iter().map(|c| c.mnemonic.as_str()).collect();
    assert_eq!(names, ["=", "JUMP_IF_FALSE", "MOVE", "JUMP", "MOVE", "END"]);
    assert_eq!(cmds[1].operands[1].1 as usize, cmds[4].at);
    assert_eq!(cmds[3].operands[0].1 as usize, cmds[5].at);
}

#[test]
fn goto_targets_label_position() {
    let cp = build("program P;\nvar;\nx : Целое;\nendvar;\nx := 0;\nm :;\nx := x + 1;\nif x < 3; goto m; endif;\nendprogram;");
    let cmds = commands(&cp, reg()).unwrap();
    let jump = cmds.iter().find(|c| c.opcode == JUMP).unwrap();
    assert_eq!(jump.operands[0].1, 3);
    assert_eq!(cmds[1].at, 3);
}

#[test]
fn nested_store_copies_down_and_puts_back() {
    let cp = build(
        "program P;\ntype;\nРяд = array [1..3] of Точка;\nendtype;\nvar;\nр : Ряд;\nendvar;\nр[2].X := 5;\nendprogram;",
    );
    let names: Vec<String> = commands(&cp, reg()).unwrap().into_iter().map(|c| c.mnemonic).collect();
    assert_eq!(names, ["COPY_INDEX", "SET_FIELD", "PUT_INDEX", "END"]);
}

#[test]
fn nested_read_copies_then_gets() {
    let cp = build(
        "program P;\ntype;\nРяд = array [1..3] of Точка;\nendtype;\nvar;\nр : Ряд;\nx : Вещественное;\nendvar;\nx := р[2].X;\nendprogram;",
    );
    let names: Vec<String> = commands(&cp, reg()).unwrap().into_iter().map(|c| c.mnemonic).collect();
    assert_eq!(names, ["COPY_INDEX", "GET_FIELD", "END"]);
}

fn assert_walk(cp: &CompiledProgram) {
    let cmds = commands(cp, reg()).unwrap();
    let mut visited = vec![0u8; cp.code.len()];
    let starts: std::collections::HashSet<usize> = cmds.iter().map(|c| c.at).collect();
    for c in &cmds {
        for v in &mut visited[c.at..=c.at + c.operands.len()] {
            *v += 1;
        }
        for (kind, word) in &c.operands {
            if *kind == OperandKind::Jump {
                assert!(starts.contains(&(*word as usize)), "jump to {word}");
            }
            if kind.is_slot() {
                assert!((*word as usize) < cp.slots.len());
            }
        }
    }
    assert!(visited.iter().all(|&v| v == 1));
}

#[test]
fn listing_walk_and_roundtrip() {
    let cp = build(LISTING);
    assert_walk(&cp);
    let bytes = cp.encode();
    let back = CompiledProgram::decode(&bytes, reg()).unwrap();
    assert_eq!(back, cp);
    assert_eq!(back.encode(), bytes);
}

#[test]
fn disassembly_names_slots() {
    let cp = build(LISTING);
    let text = disassemble(&cp, reg()).unwrap();
    assert!(text.contains("Прямоуг"));
    assert!(text.contains("Шапка"));
    assert_eq!(text.lines().filter(|l| l.contains("Прямоуг")).count(), 6);
}

#[test]
fn decode_rejects_truncation() {
    let bytes = build(LISTING).encode();
    for cut in [0, 3, 5, 20, bytes.len() / 2, bytes.len() - 1] {
        let err = CompiledProgram::decode(&bytes[..cut], reg()).unwrap_err();
        assert_eq!(err, DecodeError::UnexpectedEnd, "cut at {cut}");
        assert_eq!(err.to_string(), "unexpected end of data");
    }
}

#[test]
fn decode_rejects_bad_magic_and_version() {
    let mut bytes = build(LISTING).encode();
    let mut bad = bytes.clone();
    bad[..4].copy_from_slice(b"XXXX");
    let err = CompiledProgram::decode(&bad, reg()).unwrap_err();
    assert_eq!(err, DecodeError::BadMagic);
    assert!(err.to_string().contains("bad magic"));
    bytes[4] = 2;
    assert_eq!(
        CompiledProgram::decode(&bytes, reg()).unwrap_err(),
        DecodeError::UnsupportedVersion(2)
    );
}

fn doctor(cp: &CompiledProgram, f: impl FnOnce(&mut CompiledProgram)) -> Result<CompiledProgram, DecodeError> {
    let mut c = cp.clone();
    f(&mut c);
    CompiledProgram::decode(&c.encode(), reg())
}

#[test]
fn decode_rejects_doctored_operands() {
    let cp = build("program P;\nvar;\na, b, x : Целое;\nendvar;\nx := a + b;\nendprogram;");
    let n = cp.slots.len() as u16;
    let err = doctor(&cp, |c| c.code[2] = n).unwrap_err();
    assert!(matches!(err, DecodeError::OperandOutOfRange { at: 0, operand: 1, .. }), "{err}");

    let cp = build("program P;\nvar;\nx : Целое;\nendvar;\nx := 1;\nendprogram;");
    // MOVE const -> x; redirect the write to the constant slot
    let err = doctor(&cp, |c| c.code[2] = c.code[1]).unwrap_err();
    assert!(err.to_string().contains("constant"), "{err}");

    let cp = build("program P;\nvar;\nx : Целое;\nendvar;\nif x = 0; exit; endif;\nendprogram;");
    let err = doctor(&cp, |c| c.code[6] = 1).unwrap_err();
    assert!(err.to_string().contains("not a command start"), "{err}");

    let err = doctor(&cp, |c| c.code[0] = 0x7777).unwrap_err();
    assert!(matches!(err, DecodeError::UnknownOpcode { at: 0, opcode: 0x7777 }));

    let err = doctor(&cp, |c| {
        c.code.truncate(6);
    })
    .unwrap_err();
    assert!(matches!(err, DecodeError::TruncatedCommand { .. }), "{err}");
}

#[test]
fn decode_rejects_pool_overflow() {
    let cp = build("program P;\nvar;\nx : Целое;\nendvar;\nx := 1;\nendprogram;");
    let err = doctor(&cp, |c| c.slots[0].aux = 99).unwrap_err();
    assert!(matches!(err, DecodeError::PoolIndex { what: "string", index: 99 }));
    let err = doctor(&cp, |c| c.slots[0].ty = 99).unwrap_err();
    assert!(matches!(err, DecodeError::PoolIndex { what: "type", .. }));
    let err = doctor(&cp, |c| c.consts[0] = Const::Str(0)).unwrap_err();
    assert!(matches!(err, DecodeError::Invalid(_)), "{err}");
}

#[test]
fn decode_rejects_bad_field_numbers() {
    let cp = build("program P;\nvar;\nt : Точка;\nx : Вещественное;\nendvar;\nt.Y := 1; x := t.Y;\nendprogram;");
    let get = commands(&cp, reg()).unwrap().into_iter().find(|c| c.opcode == GET_FIELD).unwrap();
    let err = doctor(&cp, |c| c.code[get.at + 2] = 2).unwrap_err();
    assert!(err.to_string().contains("field 2 of 2"), "{err}");
}

#[test]
fn decode_rejects_trailing_bytes() {
    let mut bytes = build(LISTING).encode();
    bytes.push(0);
    assert_eq!(
        CompiledProgram::decode(&bytes, reg()).unwrap_err(),
        DecodeError::TrailingBytes(1)
    );
}

#[test]
fn compiled_code_uses_registered_opcodes_only() {
    let cp = build(LISTING);
    for c in commands(&cp, reg()).unwrap() {
        assert!(c.opcode <= PUT_INDEX || reg().by_opcode(c.opcode).is_some());
    }
}

#[test]
fn log_success_has_ok_and_size() {
    let (res, log) = compile_logged(LISTING, "ogolovok.ppg", reg());
    let cp = res.unwrap();
    let text = log.render();
    assert!(text.lines().any(|l| l == "OK"));
    assert!(text.contains(&format!("code size: {} words", cp.code.len())));
    assert!(text.contains(&format!("slots: {}", cp.slots.len())));
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 3);
}

#[test]
fn log_failure_lists_positions() {
    let (res, log) = compile_logged("program P;\nx := 1;\ny := (2);\nendprogram;", "bad.ppg", reg());
    let diags = res.unwrap_err();
    let text = log.render();
    assert!(!text.lines().any(|l| l == "OK"));
    assert!(text.contains("FAILED"));
    for d in &diags {
        assert!(text.contains(&format!("{}:{}", d.pos.line, d.pos.column)));
    }
}

#[test]
fn log_is_written_without_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.log");
    let mut log = CompileLog::new("x.ppg");
    log.succeed(2, 0);
    write_compile_log(&log, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("OK"));
    assert!(text.contains("code size: 2 words"));
    let mut failed = CompileLog::new("y.ppg");
    failed.fail([Diagnostic::error(SourcePos::new(4, 7), "boom")]);
    assert!(failed.render().contains("4:7: error: boom"));
}

#[test]
fn log_write_failure_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let log = CompileLog::new("x.ppg");
    assert!(write_compile_log(&log, &dir.path().join("missing/dir/out.log")).is_err());
}

#[derive(Debug, Clone)]
enum E {
    Var(usize),
    Num(i64),
    Bin(&'static str, Box<E>, Box<E>),
}

fn expr() -> impl Strategy<Value = E> {
    let leaf = prop_oneof![(0..4usize).prop_map(E::Var), (0..100i64).prop_map(E::Num)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        (prop::sample::select(vec!["+", "-", "*"]), inner.clone(), inner)
            .prop_map(|(o, l, r)| E::Bin(o, Box::new(l), Box::new(r)))
    })
}

fn show(e: &E) -> String {
    match e {
        E::Var(i) => format!("v{i}"),
        E::Num(n) => n.to_string(),
        E::Bin(o, l, r) => format!("({} {o} {})", show(l), show(r)),
    }
}

fn program(stmts: &[(usize, E)]) -> String {
    let mut s = String::from("program Gen;\nvar;\nv0, v1, v2, v3 : Целое;\nendvar;\n");
    for (t, e) in stmts {
        let text = show(e);
        let text = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).filter(|_| matches!(e, E::Bin(..))).map(str::to_string).unwrap_or(text);
        s.push_str(&format!("v{t} := {text};\n"));
    }
    s.push_str("endprogram;\n");
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_programs_roundtrip(stmts in prop::collection::vec((0..4usize, expr()), 1..8)) {
        let src = program(&stmts);
        let cp = match compile_source(&src) {
            Ok(cp) => cp,
            // generated text may contain parentheses the checker calls redundant
            Err(d) => {
                prop_assert!(d.iter().all(|d| d.message.contains("redundant")), "{d:?}");
                return Ok(());
            }
        };
        assert_walk(&cp);
        let bytes = cp.encode();
        let back = CompiledProgram::decode(&bytes, reg()).unwrap();
        prop_assert_eq!(back.encode(), bytes);
        prop_assert_eq!(back, cp);
    }
}
