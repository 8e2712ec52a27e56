mod terminal;

use std::fs;
use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pgen_core::builtins::Registry;
use pgen_core::bytecode::{disassemble, write_compile_log, CompiledProgram};
use pgen_core::canvas::{dump, Canvas, Point};
use pgen_core::diag::Diagnostic;
use pgen_core::interaction::{parse_script, Interactor, ScriptedInteractor};
use pgen_core::library::{write_atomic, Library};
use pgen_core::pipeline::{compile_logged, compile_source};
use pgen_core::svg::{render, RenderOptions};
use pgen_core::vm::{finalize_placement, run_with, Limits, RunOutcome};

use terminal::TerminalInteractor;

#[derive(Parser)]
#[command(name = "pgen", version, about = "Compile, run and store parametric drawing programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a source file to a .ppgc program
    Compile {
        source: PathBuf,
        /// Output file (default: the source path with a .ppgc extension)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the compile log here
        #[arg(long)]
        log: Option<PathBuf>,
        /// Print a disassembly of the generated code
        #[arg(long)]
        disasm: bool,
    },
    /// Run a .ppg source or a compiled .ppgc program
    Run {
        program: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Manage a program library
    Lib {
        library: PathBuf,
        #[command(subcommand)]
        action: LibAction,
    },
    /// Serve interactive sessions over HTTP and WebSocket
    Serve {
        #[arg(long, default_value_t = pgen_server::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory holding .ppglib files
        #[arg(long, default_value = ".")]
        libs: PathBuf,
    },
}

#[derive(Subcommand)]
enum LibAction {
    /// List entries as name, tab, comment
    List,
    /// Compile a source file and add it under a name
    Add {
        name: String,
        source: PathBuf,
        #[arg(long, default_value = "")]
        comment: String,
    },
    Remove {
        name: String,
    },
    Run {
        name: String,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Answer script: inline JSON array or a file holding one
    #[arg(long, conflicts_with = "interactive")]
    answers: Option<String>,
    /// Answer prompts on the terminal
    #[arg(long)]
    interactive: bool,
    /// Move the generated elements by dx,dy
    #[arg(long, value_parser = parse_offset, allow_hyphen_values = true)]
    place: Option<Point>,
    /// Recolor the generated elements
    #[arg(long)]
    color: Option<i64>,
    /// Write the drawing as SVG
    #[arg(long)]
    render: Option<PathBuf>,
    /// Write the canvas fixture dump ("-" for stdout)
    #[arg(long)]
    dump: Option<PathBuf>,
}

fn parse_offset(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected dx,dy")?;
    let n = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Point::new(n(x)?, n(y)?))
}

enum Failure {
    Compile,
    Runtime,
    Io(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compile => 1,
            Failure::Runtime => 2,
            Failure::Io(_) => 3,
            Failure::Usage(_) => 4,
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn report(path: &Path, diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{}:{}:{}: {}: {}", path.display(), d.pos.line, d.pos.column, d.severity, d.message);
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn compile_file(path: &Path) -> Result<CompiledProgram, Failure> {
    compile_source(&read(path)?).map_err(|d| {
        report(path, &d);
        Failure::Compile
    })
}

fn load_program(path: &Path) -> Result<CompiledProgram, Failure> {
    if path.extension().is_some_and(|e| e == "ppgc") {
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        CompiledProgram::decode(&bytes, Registry::global()).map_err(|e| io_err(path, e))
    } else {
        compile_file(path)
    }
}

fn compile(source: &Path, output: Option<PathBuf>, log: Option<PathBuf>, disasm: bool) -> Outcome {
    let text = read(source)?;
    let (result, compile_log) = compile_logged(&text, &source.display().to_string(), Registry::global());
    if let Some(log) = &log {
        write_compile_log(&compile_log, log).map_err(|e| io_err(log, e))?;
    }
    let cp = result.map_err(|d| {
        report(source, &d);
        Failure::Compile
    })?;
    let output = output.unwrap_or_else(|| source.with_extension("ppgc"));
    write_atomic(&output, &cp.encode()).map_err(|e| io_err(&output, e))?;
    if disasm {
        print!("{}", disassemble(&cp, Registry::global()).map_err(|e| io_err(&output, e))?);
    }
    Ok(())
}

fn interactor(opts: &RunOpts) -> Result<Box<dyn Interactor>, Failure> {
    if opts.interactive {
        return Ok(Box::new(TerminalInteractor::new(io::stdin().lock(), io::stderr())));
    }
    let script = match &opts.answers {
        None => return Ok(Box::new(ScriptedInteractor::new(vec![]))),
        Some(s) if s.trim_start().starts_with('[') => s.clone(),
        Some(path) => read(Path::new(path))?,
    };
    let answers = parse_script(&script).map_err(|e| Failure::Usage(format!("answer script: {e}")))?;
    Ok(Box::new(ScriptedInteractor::new(answers)))
}

fn write_output(path: &Path, text: &str) -> Outcome {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    write_atomic(path, text.as_bytes()).map_err(|e| io_err(path, e))
}

fn execute(label: &Path, cp: &CompiledProgram, base_dir: Option<&Path>, opts: &RunOpts) -> Outcome {
    let mut who = interactor(opts)?;
    let mut canvas = Canvas::new();
    let outcome = run_with(cp, &mut canvas, &mut who, Limits::default(), Registry::global(), base_dir);
    if !outcome.is_error() && (opts.place.is_some() || opts.color.is_some()) {
        let batch = canvas.batch().to_vec();
        let offset = opts.place.unwrap_or_default();
        if let Err(e) = finalize_placement(&mut canvas, &batch, offset, opts.color) {
            eprintln!("{}: error: {e}", label.display());
            return Err(Failure::Runtime);
        }
    }
    if let Some(path) = &opts.render {
        write_output(path, &render(&canvas, &RenderOptions::default()))?;
    }
    if let Some(path) = &opts.dump {
        write_output(path, &dump(&canvas))?;
    }
    match outcome {
        RunOutcome::Error(e) => {
            eprintln!("{}: error: {e}", label.display());
            Err(Failure::Runtime)
        }
        o => {
            eprintln!("{}: {}, {} element(s)", label.display(), o.label(), canvas.visible().count());
            Ok(())
        }
    }
}

fn library_command(path: &Path, action: LibAction) -> Outcome {
    let lib_err = |e: pgen_core::library::LibraryError| io_err(path, e);
    match action {
        LibAction::List => {
            let lib = Library::open_existing(path).map_err(lib_err)?;
            for (name, comment) in lib.list_entries() {
                println!("{name}\t{comment}");
            }
            Ok(())
        }
        LibAction::Add { name, source, comment } => {
            let cp = compile_file(&source)?;
            let mut lib = Library::open(path).map_err(lib_err)?;
            lib.add_entry(&name, &comment, &cp, Registry::global()).map_err(lib_err)
        }
        LibAction::Remove { name } => {
            let mut lib = Library::open_existing(path).map_err(lib_err)?;
            lib.remove_entry(&name).map_err(lib_err)
        }
        LibAction::Run { name, opts } => {
            let lib = Library::open_existing(path).map_err(lib_err)?;
            let cp = lib.load_entry(&name, Registry::global()).map_err(lib_err)?;
            execute(&path.join(&name), &cp, path.parent(), &opts)
        }
    }
}

fn serve(host: &str, port: u16, libs: PathBuf) -> Outcome {
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| Failure::Usage(format!("{host}:{port}: {e}")))?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    eprintln!("serving {} on http://{addr}", libs.display());
    rt.block_on(pgen_server::serve(addr, libs))
        .map_err(|e| Failure::Io(format!("{addr}: {e}")))
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Compile { source, output, log, disasm } => compile(&source, output, log, disasm),
        Command::Run { program, opts } => {
            let cp = load_program(&program)?;
            execute(&program, &cp, program.parent(), &opts)
        }
        Command::Lib { library, action } => library_command(&library, action),
        Command::Serve { port, host, libs } => serve(&host, port, libs),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(4);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Io(m) | Failure::Usage(m) => eprintln!("pgen: error: {m}"),
                Failure::Compile | Failure::Runtime => {}
            }
            ExitCode::from(f.code())
        }
    }
}
