use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use higher_dirac::depth::{self, DepthError};
use higher_dirac::fuzz::{run_fuzz, FuzzSummary};

const EXIT_CHECK: u8 = 1;
const EXIT_SHALLOW: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "higher-dirac", version, about = "Higher Dirac cohomology of sl(2) weight modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on one module and print its report.
    Analyze(Target),
    /// Run every checker and print a verdict per check.
    Verify(Target),
    /// Check random planted operators and sequences.
    Fuzz(FuzzArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Target {
    /// Builtin module name or module spec file.
    #[arg(long, conflicts_with = "ses", required_unless_present = "ses")]
    module: Option<String>,
    /// Builtin sequence name or sequence spec file; the middle term is analyzed.
    #[arg(long)]
    ses: Option<String>,
    /// Truncation depth for infinite-dimensional builtins.
    #[arg(long, default_value_t = 8, value_parser = depth_parser)]
    depth: usize,
    /// Order of the N-differential (default: smallest even N with D^N = 0).
    #[arg(long = "bigN")]
    big_n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn depth_parser(s: &str) -> Result<usize, String> {
    let d: usize = s.parse().map_err(|e| format!("{e}"))?;
    if d < 3 {
        return Err("depth must be at least 3".into());
    }
    Ok(d)
}

enum Failure {
    Shallow { depth: usize, detail: String, suggested: Option<usize> },
    Input(String),
}

impl From<DepthError> for Failure {
    fn from(e: DepthError) -> Self {
        match e {
            DepthError::Shallow { depth, detail, suggested } => Failure::Shallow { depth, detail, suggested },
            DepthError::Input(e) => Failure::Input(e.to_string()),
        }
    }
}

impl Target {
    fn target(&self) -> depth::Target {
        match (&self.module, &self.ses) {
            (Some(m), _) => depth::Target::Module(m.clone()),
            (_, Some(s)) => depth::Target::Ses(s.clone()),
            _ => unreachable!("clap requires --module or --ses"),
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn analyze(t: &Target) -> Result<bool, Failure> {
    let r = t.target().stable_report(t.depth, t.big_n)?;
    let text = match t.format {
        Format::Json => with_newline(r.to_json()),
        Format::Table => r.to_table(),
    };
    emit(&text, t.out.as_ref())?;
    Ok(r.passed())
}

fn verify(t: &Target) -> Result<bool, Failure> {
    // Establishes that the depth is sufficient before checking anything.
    let target = t.target();
    target.stable_report(t.depth, t.big_n)?;
    let s = target.verify_at(t.depth).map_err(|e| Failure::Input(e.to_string()))?;
    let text = match t.format {
        Format::Json => with_newline(serde_json::to_string_pretty(&s).expect("summary serializes")),
        Format::Table => s.to_table(),
    };
    emit(&text, t.out.as_ref())?;
    Ok(s.passed())
}

fn fuzz_table(s: &FuzzSummary) -> String {
    let mut out = format!(
        "seed {}\ncases {} ({} operators, {} sequences)\ncounterexamples {}\n",
        s.seed,
        s.cases,
        s.operator_cases,
        s.sequence_cases,
        s.counterexamples.len()
    );
    for c in &s.counterexamples {
        out.push_str(&format!("  case {} {} {}\n", c.case, c.kind, c.planted));
        for f in &c.failures {
            out.push_str(&format!("    {f}\n"));
        }
    }
    out
}

fn fuzz(args: &FuzzArgs) -> Result<bool, Failure> {
    let s = run_fuzz(args.seed, args.cases);
    let text = match args.format {
        Format::Json => with_newline(serde_json::to_string_pretty(&s).expect("summary serializes")),
        Format::Table => fuzz_table(&s),
    };
    emit(&text, args.out.as_ref())?;
    Ok(s.counterexamples.is_empty())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    let (label, result) = match &cli.command {
        Command::Analyze(t) => (t.target().name().to_string(), analyze(t)),
        Command::Verify(t) => (t.target().name().to_string(), verify(t)),
        Command::Fuzz(f) => (format!("fuzz seed {}", f.seed), fuzz(f)),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{label}: some checks failed");
            ExitCode::from(EXIT_CHECK)
        }
        Err(Failure::Shallow { depth, detail, suggested }) => {
            match suggested {
                Some(d) => eprintln!("{label}: depth {depth} is too shallow ({detail}); rerun with --depth {d}"),
                None => eprintln!("{label}: depth {depth} is too shallow ({detail})"),
            }
            ExitCode::from(EXIT_SHALLOW)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("{label}: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
