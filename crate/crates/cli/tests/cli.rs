use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn listing_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/ogolovok.ppg")
}

fn pgen(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgen"))
        .current_dir(dir)
        .args(args)
        .env_remove("PGEN_STEP_LIMIT")
        .output()
        .unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(listing_path(), dir.path().join("o.ppg")).unwrap();
    dir
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rect_lines(dump: &str) -> Vec<String> {
    dump.lines().filter(|l| l.contains(" rect ")).map(|l| l.to_string()).collect()
}

#[test]
fn compile_writes_program_and_log() {
    let dir = setup();
    let o = pgen(dir.path(), &["compile", "o.ppg", "--log", "o.log"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(dir.path().join("o.ppgc").exists());
    let log = std::fs::read_to_string(dir.path().join("o.log")).unwrap();
    assert!(log.contains("OK") && log.contains("code size: 187 words"), "{log}");

    let o = pgen(dir.path(), &["compile", "o.ppg", "-o", "copy.ppgc", "--disasm"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("END"));
    assert_eq!(
        std::fs::read(dir.path().join("o.ppgc")).unwrap(),
        std::fs::read(dir.path().join("copy.ppgc")).unwrap()
    );
}

fn is_diagnostic(line: &str, path: &str) -> bool {
    let Some(rest) = line.strip_prefix(&format!("{path}:")) else {
        return false;
    };
    let mut parts = rest.splitn(3, ':');
    let (Some(l), Some(c), Some(tail)) = (parts.next(), parts.next(), parts.next()) else {
        return false;
    };
    l.parse::<u32>().is_ok()
        && c.parse::<u32>().is_ok()
        && (tail.starts_with(" error: ") || tail.starts_with(" warning: "))
}

#[test]
fn compile_errors_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.ppg"),
        "program P;\nvar;\nx : Целое;\nendvar;\nx := 'a';\ngoto нет;\nendprogram;",
    )
    .unwrap();
    let o = pgen(dir.path(), &["compile", "bad.ppg", "--log", "bad.log"]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(!err.is_empty());
    for line in err.lines() {
        assert!(is_diagnostic(line, "bad.ppg"), "{line}");
    }
    assert!(!dir.path().join("bad.ppgc").exists());
    let log = std::fs::read_to_string(dir.path().join("bad.log")).unwrap();
    assert!(log.contains("FAILED"), "{log}");
}

#[test]
fn run_listing_top_view_dump() {
    let dir = setup();
    let o = pgen(dir.path(), &["run", "o.ppg", "--answers", r#"[{"menu":1}]"#, "--dump", "c.txt"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dump = std::fs::read_to_string(dir.path().join("c.txt")).unwrap();
    let rects = rect_lines(&dump);
    assert_eq!(rects.len(), 4, "{dump}");
    assert!(rects[0].ends_with("x=0 y=0 w=880 h=450"));
    assert!(rects[3].ends_with("x=660 y=112.5 w=146.66666666666666 h=225"));
}

#[test]
fn run_exit_arm_leaves_empty_canvas() {
    let dir = setup();
    let o = pgen(dir.path(), &["run", "o.ppg", "--answers", r#"[{"menu":0}]"#, "--dump", "-"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "# pgen canvas v1\n");
    assert!(stderr(&o).contains("halted-by-exit"));
}

#[test]
fn answers_file_place_and_color() {
    let dir = setup();
    std::fs::write(dir.path().join("a.json"), r#"[{"menu":2}]"#).unwrap();
    let o = pgen(
        dir.path(),
        &["run", "o.ppg", "--answers", "a.json", "--place", "-10,5", "--color", "4", "--dump", "-"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8_lossy(&o.stdout).into_owned();
    let rects = rect_lines(&out);
    assert_eq!(rects.len(), 1);
    assert!(rects[0].contains("color=4"), "{out}");
    assert!(rects[0].ends_with("x=-10 y=5 w=880 h=600"), "{out}");

    let o = pgen(dir.path(), &["run", "o.ppg", "--answers", r#"[{"menu":2}]"#, "--color", "16"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = setup();
    for out in ["a.svg", "b.svg"] {
        let o = pgen(dir.path(), &["run", "o.ppg", "--answers", r#"[{"menu":1}]"#, "--render", out]);
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(dir.path().join("a.svg")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.svg")).unwrap());
    assert_eq!(String::from_utf8_lossy(&a).matches("<rect").count(), 4);
}

#[test]
fn exit_codes() {
    let dir = setup();
    let o = pgen(dir.path(), &["run", "o.ppg"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("interaction-abort"), "{}", stderr(&o));
    assert_eq!(code(&pgen(dir.path(), &["run", "missing.ppg"])), 3);
    assert_eq!(code(&pgen(dir.path(), &["frobnicate"])), 4);
    assert_eq!(code(&pgen(dir.path(), &["run"])), 4);
    assert_eq!(code(&pgen(dir.path(), &["run", "o.ppg", "--answers", "[{\"menu\":\"x\"}]"])), 4);
    assert_eq!(code(&pgen(dir.path(), &["run", "o.ppg", "--answers", "[]", "--interactive"])), 4);
    std::fs::write(dir.path().join("junk.ppgc"), b"PPGX junk").unwrap();
    assert_eq!(code(&pgen(dir.path(), &["run", "junk.ppgc"])), 3);
}

#[test]
fn step_limit_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("loop.ppg"), "program P;\nm:; goto m;\nendprogram;").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pgen"))
        .current_dir(dir.path())
        .args(["run", "loop.ppg"])
        .env("PGEN_STEP_LIMIT", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("step-limit"), "{}", stderr(&o));
}

#[test]
fn interactive_run_reads_stdin() {
    let dir = setup();
    let mut child = Command::new(env!("CARGO_BIN_EXE_pgen"))
        .current_dir(dir.path())
        .args(["run", "o.ppg", "--interactive", "--dump", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"7\n1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("Оголовок вентпанелей"));
    assert_eq!(rect_lines(&String::from_utf8_lossy(&o.stdout)).len(), 4);
}

#[test]
fn library_lifecycle() {
    let dir = setup();
    let ok = |args: &[&str]| {
        let o = pgen(dir.path(), args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
        String::from_utf8_lossy(&o.stdout).into_owned()
    };
    ok(&["lib", "p.ppglib", "add", "Оголовок", "o.ppg", "--comment", "вентпанели"]);
    assert_eq!(ok(&["lib", "p.ppglib", "list"]), "Оголовок\tвентпанели\n");
    let dump = ok(&["lib", "p.ppglib", "run", "Оголовок", "--answers", r#"[{"menu":1}]"#, "--dump", "-"]);
    let direct = ok(&["run", "o.ppg", "--answers", r#"[{"menu":1}]"#, "--dump", "-"]);
    assert_eq!(dump, direct);

    let dup = pgen(dir.path(), &["lib", "p.ppglib", "add", "Оголовок", "o.ppg"]);
    assert_eq!(code(&dup), 3);
    ok(&["lib", "p.ppglib", "remove", "Оголовок"]);
    assert_eq!(ok(&["lib", "p.ppglib", "list"]), "");
    assert_eq!(code(&pgen(dir.path(), &["lib", "p.ppglib", "run", "Оголовок"])), 3);
    assert_eq!(code(&pgen(dir.path(), &["lib", "none.ppglib", "list"])), 3);
}
