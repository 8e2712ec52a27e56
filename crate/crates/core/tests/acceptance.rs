mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pgen_core::builtins::{Fixity, Registry};
use pgen_core::bytecode::{commands, CompiledProgram, DecodeError, OperandKind};
use pgen_core::canvas::{Canvas, Shape};
use pgen_core::frontend::ast::{
    CaseArm, Expr, ExprKind, FieldDecl, Path, Program, Segment, Stmt, StmtKind, TypeDecl, TypeExpr,
    VarDecl,
};
use pgen_core::frontend::{parenthesize, parse, parse_program, pretty, pretty_print, tokenize};
use pgen_core::interaction::{Answer, ScriptedInteractor};
use pgen_core::library::Library;
use pgen_core::pipeline::compile_source;
use pgen_core::svg::{render, RenderOptions};
use pgen_core::vm::{run, ErrorKind, Limits, RunOutcome, STEP_LIMIT_ENV};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn compiled_listing() -> Result<CompiledProgram, String> {
    compile_source(&common::listing()).map_err(|d| format!("listing does not compile: {d:?}"))
}

fn run_script(cp: &CompiledProgram, answers: Vec<Answer>) -> (RunOutcome, Canvas) {
    let mut canvas = Canvas::new();
    let mut who = ScriptedInteractor::new(answers);
    let outcome = run(cp, &mut canvas, &mut who, Limits::default());
    (outcome, canvas)
}

fn rects(canvas: &Canvas) -> Vec<[f64; 4]> {
    canvas
        .visible()
        .filter_map(|e| match e.shape {
            Shape::Rectangle { origin, width, height } => Some([origin.x, origin.y, width, height]),
            _ => None,
        })
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    if b == 0.0 {
        a.abs() <= 1e-9
    } else {
        ((a - b) / b).abs() <= 1e-9
    }
}

fn expect_rects(canvas: &Canvas, want: &[[f64; 4]]) -> Result<(), String> {
    let got = rects(canvas);
    ensure!(
        canvas.visible().count() == want.len(),
        "expected {} elements, got {}",
        want.len(),
        canvas.visible().count()
    );
    ensure!(got.len() == want.len(), "expected {} rectangles, got {got:?}", want.len());
    for (g, w) in got.iter().zip(want) {
        ensure!(g.iter().zip(w).all(|(a, b)| close(*a, *b)), "rectangle {g:?} != {w:?}");
    }
    Ok(())
}

// Hand evaluation of the top view: n1 = 450/2, n2 = 880/6, n3 = n2/2, n4 = n1/2,
// then n3 advances by 1.5 n2 and by 2.5 n2.
const TOP_VIEW: [[f64; 4]; 4] = [
    [0.0, 0.0, 880.0, 450.0],
    [220.0 / 3.0, 112.5, 440.0 / 3.0, 225.0],
    [880.0 / 3.0, 112.5, 880.0 / 3.0, 225.0],
    [660.0, 112.5, 440.0 / 3.0, 225.0],
];

fn a1() -> Check {
    let started = Instant::now();
    let cp = compiled_listing()?;
    let (outcome, canvas) = run_script(&cp, vec![Answer::Menu(1)]);
    let elapsed = started.elapsed();
    ensure!(matches!(outcome, RunOutcome::Completed), "outcome {outcome:?}");
    expect_rects(&canvas, &TOP_VIEW)?;
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("4 rectangles match the hand trace in {elapsed:?}"))
}

fn a2() -> Check {
    let cp = compiled_listing()?;
    let (o, c) = run_script(&cp, vec![Answer::Menu(2)]);
    ensure!(matches!(o, RunOutcome::Completed), "menu 2: {o:?}");
    expect_rects(&c, &[[0.0, 0.0, 880.0, 600.0]]).map_err(|e| format!("menu 2: {e}"))?;
    let (o, c) = run_script(&cp, vec![Answer::Menu(3)]);
    ensure!(matches!(o, RunOutcome::Completed), "menu 3: {o:?}");
    expect_rects(&c, &[[0.0, 0.0, 450.0, 600.0]]).map_err(|e| format!("menu 3: {e}"))?;
    let (o, c) = run_script(&cp, vec![Answer::Menu(0)]);
    ensure!(matches!(o, RunOutcome::HaltedByExit), "menu 0: {o:?}");
    ensure!(c.elements().is_empty(), "menu 0 left {} elements", c.elements().len());
    Ok("menu 2, 3 and 0 arms as traced".into())
}

fn a3() -> Check {
    let cp = compiled_listing()?;
    for (label, answers, want_error) in [
        ("completed run", vec![Answer::Menu(1)], false),
        ("aborted run", vec![], true),
    ] {
        let mut canvas = Canvas::new();
        let before = canvas.snapshot_settings();
        let mut who = ScriptedInteractor::new(answers);
        let outcome = run(&cp, &mut canvas, &mut who, Limits::default());
        ensure!(outcome.is_error() == want_error, "{label}: outcome {outcome:?}");
        ensure!(*canvas.settings() == before, "{label}: settings changed");
    }
    Ok("settings equal the snapshot after success and after an error".into())
}

fn runtime_error(src: &str, limits: Limits) -> Result<pgen_core::vm::RuntimeError, String> {
    let cp = compile_source(src).map_err(|d| format!("{d:?}"))?;
    let mut canvas = Canvas::new();
    let mut who = ScriptedInteractor::new(vec![]);
    match run(&cp, &mut canvas, &mut who, limits) {
        RunOutcome::Error(e) => {
            ensure!(e.position < cp.code.len(), "position {} outside code", e.position);
            Ok(e)
        }
        other => Err(format!("expected an error, got {other:?}")),
    }
}

fn a4() -> Check {
    let e = runtime_error(
        "program P;\nvar;\na, b : Целое;\nendvar;\nb := a + 1;\nendprogram;",
        Limits::default(),
    )?;
    ensure!(e.kind == ErrorKind::UndefinedOperand, "(a) kind {}", e.kind);
    ensure!(e.to_string().contains("(a)"), "(a) slot not named: {e}");

    let e = runtime_error(
        "program P;\nvar;\nШ : Атрибут;\nendvar;\nШ := Глоб_Атр; Ш.Цвет := 16; Уст_Атр (Ш);\nendprogram;",
        Limits::default(),
    )?;
    ensure!(e.kind == ErrorKind::RangeViolation, "(b) kind {}", e.kind);

    std::env::set_var(STEP_LIMIT_ENV, "1000");
    let limits = Limits::default();
    std::env::remove_var(STEP_LIMIT_ENV);
    ensure!(limits.max_steps == 1000, "(c) env override gave {}", limits.max_steps);
    let e = runtime_error("program P;\nm:; goto m;\nendprogram;", limits)?;
    ensure!(e.kind == ErrorKind::StepLimit, "(c) kind {}", e.kind);
    Ok("undefined operand, colour 16 and endless loop stopped with positions".into())
}

fn first_error(src: &str) -> Result<(u32, u32, String), String> {
    match compile_source(src) {
        Ok(_) => Err(format!("accepted: {src:?}")),
        Err(d) => {
            let d = &d[0];
            Ok((d.pos.line, d.pos.column, d.message.clone()))
        }
    }
}

fn a5() -> Check {
    let long = "д".repeat(31);
    let cases = [
        (format!("program P;\nvar;\n{long} : Целое;\nendvar;\nexit;\nendprogram;"), (3, 1)),
        ("program P;\nvar;\na, b, c : Целое;\nendvar;\na := 1; b := 2; c := 3;\na := a + (b * c);\nendprogram;".into(), (6, 10)),
        ("program P;\nvar;\na, b : Целое;\nendvar;\na := 1;\nb := ((a));\nendprogram;".into(), (6, 6)),
        ("program P;\nvar;\nx : Целое;\nendvar;\nx := 'текст';\nendprogram;".into(), (5, 6)),
        ("program P;\nm :;\ngoto n;\nendprogram;".into(), (3, 1)),
        ("program P;\nvar;\nШ : Атрибут;\nн : Целое;\nendvar;\nШ := Глоб_Атр;\nн := Прямоуг (Ш, 0, 0, 1, 1, 1);\nendprogram;".into(), (7, 6)),
    ];
    let mut seen = Vec::new();
    for (src, (line, col)) in &cases {
        let (l, c, msg) = first_error(src)?;
        ensure!((l, c) == (*line, *col), "expected {line}:{col}, got {l}:{c} ({msg})");
        seen.push(format!("{l}:{c}"));
    }
    compiled_listing()?;
    Ok(format!("rejected at {}; listing clean", seen.join(", ")))
}

fn a6() -> Check {
    let reg = Registry::global();
    let corpus = common::corpus();
    ensure!(corpus.len() >= 10, "corpus has {} programs", corpus.len());
    let mut doctored = false;
    for item in &corpus {
        let cp = compile_source(&item.source).map_err(|d| format!("{}: {d:?}", item.name))?;
        let bytes = cp.encode();
        let back = CompiledProgram::decode(&bytes, reg).map_err(|e| format!("{}: {e}", item.name))?;
        ensure!(back == cp, "{}: structure differs", item.name);
        ensure!(back.encode() == bytes, "{}: bytes differ", item.name);

        let cmds = commands(&cp, reg).map_err(|e| format!("{}: {e}", item.name))?;
        let mut next = 0;
        for c in &cmds {
            ensure!(c.at == next, "{}: walk skipped to {}", item.name, c.at);
            next += 1 + c.operands.len();
        }
        ensure!(next == cp.code.len(), "{}: walk covered {next} of {}", item.name, cp.code.len());

        if let Some((at, i)) = cmds.iter().find_map(|c| {
            c.operands
                .iter()
                .position(|(k, _)| matches!(k, OperandKind::Read | OperandKind::Write))
                .map(|i| (c.at, i))
        }) {
            let mut bad = cp.clone();
            bad.code[at + 1 + i] = cp.slots.len() as u16 + 7;
            match CompiledProgram::decode(&bad.encode(), reg) {
                Err(DecodeError::OperandOutOfRange { .. }) => doctored = true,
                other => return Err(format!("{}: doctored operand gave {other:?}", item.name)),
            }
        }
    }
    ensure!(doctored, "no operand was doctored");
    Ok(format!("{} programs roundtrip; walks exact; doctored operands rejected", corpus.len()))
}

fn a7() -> Check {
    let reg = Registry::global();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("panels.ppglib");
    let cp = compiled_listing()?;
    let mut lib = Library::open(&path).map_err(|e| e.to_string())?;
    lib.add_entry("Оголовок", "вентпанели", &cp, reg).map_err(|e| e.to_string())?;

    let lib = Library::open_existing(&path).map_err(|e| e.to_string())?;
    let loaded = lib.load_entry("Оголовок", reg).map_err(|e| e.to_string())?;
    let (_, direct) = run_script(&cp, vec![Answer::Menu(1)]);
    let (outcome, canvas) = run_script(&loaded, vec![Answer::Menu(1)]);
    ensure!(matches!(outcome, RunOutcome::Completed), "loaded run {outcome:?}");
    ensure!(canvas.elements() == direct.elements(), "loaded canvas differs");
    expect_rects(&canvas, &TOP_VIEW)?;

    let before = std::fs::read(&path).map_err(|e| e.to_string())?;
    let torn = pgen_core::library::write_atomic_with(&path, |f| {
        use std::io::Write;
        f.write_all(&before[..before.len() / 2])?;
        Err(std::io::Error::other("power cut"))
    });
    ensure!(torn.is_err(), "torn write reported success");
    ensure!(std::fs::read(&path).map_err(|e| e.to_string())? == before, "torn write changed the file");
    Library::open_existing(&path).map_err(|e| format!("after torn write: {e}"))?;

    let mut lib = lib;
    lib.remove_entry("Оголовок").map_err(|e| e.to_string())?;
    let lib = Library::open_existing(&path).map_err(|e| e.to_string())?;
    ensure!(lib.load_entry("Оголовок", reg).is_err(), "removed entry still loads");
    Ok("add, load, run, torn write and remove behave".into())
}

fn a8() -> Check {
    let cp = compiled_listing()?;
    let svg = || {
        let (_, canvas) = run_script(&cp, vec![Answer::Menu(1)]);
        render(&canvas, &RenderOptions::default())
    };
    let (first, second) = (svg(), svg());
    ensure!(first == second, "renders differ");
    let n = first.matches("<rect").count();
    ensure!(n == 4, "{n} <rect> nodes");
    Ok(format!("{} identical bytes, 4 <rect> nodes", first.len()))
}

const IDENTS: &[&str] = &["x", "y1", "Длина", "Ширина_2", "а", "Точки", "n3", "Шапка", "Вид", "НомерЭл"];
const FIELDS: &[&str] = &["X", "Y", "Цвет", "Слой", "Углы"];
const TYPES: &[&str] = &["Целое", "Вещественное", "Строка", "Точка", "Атрибут", "Линейный размер"];
const CALLS: &[(&str, usize)] = &[("SQRT", 1), ("IIF", 3), ("Подстрока", 3), ("ABS", 1), ("Глоб", 0)];
const BINARY: &[&str] = &[
    "*", "/", "DIV", "MOD", "+", "-", "^", "=", "<>", "<", "<=", ">", ">=", "AND", "OR", "XOR",
];
const LABEL: &str = "м1";

fn pick(pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    proptest::sample::select(pool).prop_map(str::to_string)
}

fn e(kind: ExprKind) -> Expr {
    Expr::new(kind, Default::default())
}

fn path_of(root: String, segments: Vec<Segment>) -> Path {
    Path {
        root,
        segments,
        pos: Default::default(),
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    let segment = prop_oneof![
        pick(FIELDS).prop_map(|f| Segment::Field(f, Default::default())),
        (0i64..20).prop_map(|i| Segment::Index(e(ExprKind::Int(i)))),
    ];
    prop_oneof![
        (0i64..100_000).prop_map(|i| e(ExprKind::Int(i))),
        (0u32..40_000).prop_map(|n| e(ExprKind::Real(n as f64 / 8.0))),
        "[абвxyz' Ё0-9]{0,6}".prop_map(|s| e(ExprKind::Str(s))),
        (pick(IDENTS), proptest::collection::vec(segment, 0..3))
            .prop_map(|(r, s)| e(ExprKind::Path(path_of(r, s)))),
    ]
}

/// Expression trees without parentheses.
fn bare_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 3, |inner| {
        prop_oneof![
            4 => (pick(BINARY), inner.clone(), inner.clone()).prop_map(|(op, l, r)| e(ExprKind::Binary {
                op,
                lhs: Box::new(l),
                rhs: Box::new(r),
            })),
            2 => (proptest::sample::select(&["-", "NOT"][..]), inner.clone()).prop_map(|(op, x)| e(ExprKind::Unary {
                op: op.to_string(),
                operand: Box::new(x),
            })),
            1 => (proptest::sample::select(CALLS), proptest::collection::vec(inner.clone(), 3))
                .prop_map(|((name, n), mut args)| {
                    args.truncate(n);
                    e(ExprKind::Call { name: name.to_string(), args })
                }),
            1 => (pick(IDENTS), inner).prop_map(|(r, i)| e(ExprKind::Path(path_of(r, vec![Segment::Index(i)])))),
        ]
    })
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    bare_expr().prop_map(|x| parenthesize(Registry::global(), &x))
}

fn stmt(kind: StmtKind) -> Stmt {
    Stmt {
        kind,
        pos: Default::default(),
    }
}

fn simple_stmt() -> impl Strategy<Value = Stmt> {
    let target = (pick(IDENTS), proptest::collection::vec(pick(FIELDS), 0..3)).prop_map(|(r, fs)| {
        path_of(r, fs.into_iter().map(|f| Segment::Field(f, Default::default())).collect())
    });
    prop_oneof![
        4 => (target, expr_strategy()).prop_map(|(target, value)| stmt(StmtKind::Assign { target, value })),
        2 => (proptest::sample::select(&["Прямоуг", "ЛРазмТочн", "Сообщение"][..]), proptest::collection::vec(expr_strategy(), 0..4))
            .prop_map(|(name, args)| stmt(StmtKind::Call { name: name.to_string(), args })),
        1 => pick(IDENTS).prop_map(|n| stmt(StmtKind::BareCall(n))),
        1 => Just(stmt(StmtKind::Goto(LABEL.to_string()))),
        1 => Just(stmt(StmtKind::Exit)),
    ]
}

fn block_of(s: impl Strategy<Value = Stmt>) -> impl Strategy<Value = Vec<Stmt>> {
    proptest::collection::vec(s, 1..4)
}

fn stmt_strategy() -> impl Strategy<Value = Stmt> {
    simple_stmt().prop_recursive(3, 40, 4, |inner| {
        let arm = (expr_strategy(), block_of(inner.clone())).prop_map(|(cond, body)| CaseArm {
            cond,
            body,
            pos: Default::default(),
        });
        prop_oneof![
            (expr_strategy(), block_of(inner.clone()), proptest::option::of(block_of(inner.clone())))
                .prop_map(|(cond, then, otherwise)| stmt(StmtKind::If { cond, then, otherwise })),
            (proptest::collection::vec(arm, 1..3), proptest::option::of(block_of(inner)))
                .prop_map(|(arms, otherwise)| stmt(StmtKind::Case { arms, otherwise })),
        ]
    })
}

fn named(n: String) -> TypeExpr {
    TypeExpr::Named(n, Default::default())
}

fn names() -> impl Strategy<Value = Vec<String>> {
    proptest::sample::subsequence(IDENTS, 1..4).prop_map(|v| v.into_iter().map(str::to_string).collect())
}

fn type_decl() -> impl Strategy<Value = (String, TypeExpr)> {
    let field = (names(), pick(TYPES)).prop_map(|(names, t)| FieldDecl {
        names,
        ty: named(t),
        pos: Default::default(),
    });
    prop_oneof![
        (pick(&["Пара", "Контур"]), proptest::collection::vec(field, 1..4))
            .prop_map(|(n, f)| (n, TypeExpr::Record(f))),
        (pick(&["Ряд", "Сетка"]), 0i64..5, 0i64..10, pick(TYPES)).prop_map(|(n, lo, len, t)| {
            (n, TypeExpr::Array { lo, hi: lo + len, elem: Box::new(named(t)) })
        }),
    ]
}

fn program_strategy() -> impl Strategy<Value = Program> {
    let var = (names(), pick(TYPES)).prop_map(|(names, t)| VarDecl {
        names,
        ty: named(t),
        pos: Default::default(),
    });
    (
        pick(&["P", "Оголовок вентпанелей", "Проба три"]),
        proptest::collection::vec(type_decl(), 0..3),
        proptest::collection::vec(var, 0..4),
        proptest::collection::vec(stmt_strategy(), 1..6),
    )
        .prop_map(|(name, types, vars, mut body)| {
            body.insert(0, stmt(StmtKind::Label(LABEL.to_string())));
            Program {
                name,
                types: types
                    .into_iter()
                    .map(|(name, def)| TypeDecl { name, def, pos: Default::default() })
                    .collect(),
                vars,
                body,
                pos: Default::default(),
            }
        })
}

fn runner() -> TestRunner {
    let config = Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn sample<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut r = runner();
    (0..n)
        .map(|_| strategy.new_tree(&mut r).expect("generator").current())
        .collect()
}

fn full_parens(x: &Expr) -> String {
    match &x.kind {
        ExprKind::Binary { op, lhs, rhs } => format!("({} {op} {})", full_parens(lhs), full_parens(rhs)),
        ExprKind::Unary { op, operand } => format!("({op} {})", full_parens(operand)),
        ExprKind::Call { name, args } => {
            let args: Vec<_> = args.iter().map(full_parens).collect();
            format!("{name} ({})", args.join(", "))
        }
        ExprKind::Path(p) => {
            let mut s = p.root.clone();
            for seg in &p.segments {
                match seg {
                    Segment::Field(f, _) => s += &format!(".{f}"),
                    Segment::Index(i) => s += &format!("[{}]", full_parens(i)),
                }
            }
            s
        }
        ExprKind::Paren(inner) => full_parens(inner),
        _ => pretty::expr(x),
    }
}

fn assign_program(value: Expr) -> Program {
    Program {
        name: "P".into(),
        types: vec![],
        vars: vec![],
        body: vec![stmt(StmtKind::Assign {
            target: path_of("x".into(), vec![]),
            value,
        })],
        pos: Default::default(),
    }
}

fn parsed_value(text: &str, checked: bool) -> Result<Expr, String> {
    let src = format!("program P;\nx := {text};\nendprogram;");
    let p = if checked {
        parse_program(&src).map_err(|d| format!("{text}: {d:?}"))?
    } else {
        parse(&tokenize(&src).map_err(|d| format!("{d:?}"))?).map_err(|d| format!("{text}: {d:?}"))?
    };
    match &p.body[..] {
        [Stmt { kind: StmtKind::Assign { value, .. }, .. }] => Ok(value.strip_parens()),
        _ => Err(format!("{text}: unexpected body")),
    }
}

fn a9() -> Check {
    for ast in sample(program_strategy(), 200) {
        let text = pretty_print(&ast);
        let back = parse_program(&text).map_err(|d| format!("{d:?}\n{text}"))?;
        ensure!(back.normalized() == ast.normalized(), "AST changed through\n{text}");
    }
    for x in sample(bare_expr(), 200) {
        let oracle = assign_program(x.clone()).normalized();
        let minimal = pretty::expr(&parenthesize(Registry::global(), &x));
        let full = full_parens(&x);
        let by_precedence = assign_program(parsed_value(&minimal, true)?).normalized();
        let by_parens = assign_program(parsed_value(&full, false)?).normalized();
        ensure!(by_parens == oracle, "fully parenthesized parse differs: {full}");
        ensure!(by_precedence == by_parens, "precedence parse of {minimal} differs from {full}");
    }
    Ok("200 programs and 200 expressions".into())
}

// The language's operation list and operation tables, with the arity of each
// documented parameter list.
const DOCUMENTED_OPERATIONS: &[(&str, usize)] = &[
    ("*", 2), ("+", 2), ("-", 2), ("/", 2), ("DIV", 2), ("MOD", 2), ("INT", 1), ("FRAC", 1),
    ("ROUND", 1), ("ABS", 1), ("^", 2), ("SQRT", 1), ("LN", 1), ("EXP", 1), ("LG", 1), ("IIF", 3),
    ("ИзГрадВРад", 1), ("ИзРадВГрад", 1), ("ЧислоВСтроку", 1), ("СтрокаВЦелое", 1), ("Подстрока", 3),
    ("СтрокаВЧисло", 1), ("<", 2), ("<=", 2), ("<>", 2), ("=", 2), (">", 2), (">=", 2), ("NOT", 1),
    ("AND", 2), ("OR", 2), ("XOR", 2), ("SIN", 1), ("COS", 1), ("TG", 1), ("ARCSIN", 1),
    ("ARCCOS", 1), ("ARCTG", 1), ("SH", 1), ("CH", 1), ("TH", 1), ("ARSH", 1), ("ARCH", 1),
    ("ARTH", 1),
    ("GOTO", 1), ("EXIT", 0), ("IF", 1), ("ELSE", 0), ("ENDIF", 0), ("CASE", 0), ("ON", 1),
    ("ONELSE", 0), ("ENDCASE", 0),
    ("Сообщение", 1), ("Информация", 1), ("Запрос", 1), ("НовоеМеню", 1), ("ДобОпцию", 3),
    ("Доб_5_Опций", 5), ("ПоказМеню", 1), ("МенюИзФайла", 1), ("ТекстОпции", 0), ("Новая_форма", 1),
    ("Новое_поле", 2), ("Новое_полеXY", 4), ("Масштаб_поле", 3), ("Редактор", 0),
    ("Глоб_Атр", 0), ("Уст_Атр", 1), ("Отрез", 5), ("Прямоуг", 5), ("ДугаОкружн", 6),
    ("ЛРазмСноски", 1),
    ("ЛРазмТочн", 1), ("ЛРазмВынос", 3), ("ЛРазмШрифт", 3), ("ЛРазмСтрелки", 4), ("ГорРазмер1", 4),
    ("ВерРазмер1", 4), ("РамкаРазм", 6), ("ТекстСноска", 1), ("ТекстШрифт", 4), ("ДлинаСтроки", 1),
    ("НачатьТекст", 1), ("ДобСтроку", 1), ("ОтмВысоты", 3), ("ОбрывТрубы", 4), ("ОбрывПоДуге", 4),
    ("УбратьИзЧерт", 1),
];

fn a10() -> Check {
    let reg = Registry::global();
    let mut missing = Vec::new();
    for &(name, arity) in DOCUMENTED_OPERATIONS {
        let found = if arity == 2 {
            reg.lookup_infix(name).or_else(|| reg.lookup(name))
        } else if arity == 1 && (name == "-" || name == "NOT") {
            reg.lookup_prefix(name)
        } else {
            reg.lookup(name)
        };
        match found {
            Some(d) if d.arity() == arity => {}
            Some(d) => missing.push(format!("{name}/{arity} has arity {}", d.arity())),
            None => missing.push(format!("{name} not found")),
        }
    }
    let minus = reg.lookup_prefix("-").map(|d| (d.fixity, d.arity()));
    ensure!(minus == Some((Fixity::Prefix, 1)), "unary minus: {minus:?}");
    ensure!(missing.is_empty(), "{}", missing.join("; "));
    Ok(format!("{} operations resolve with their arities", DOCUMENTED_OPERATIONS.len()))
}

fn main() -> ExitCode {
    let checks: [Criterion; 10] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
    ];
    let mut failed = 0;
    for (id, check) in checks {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(note) => println!("{id} PASS  {note}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL  {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
