use clap::{Args, Parser, Subcommand, ValueEnum};
use kfiltr::io::{any_failed, CommandError, Format, ProblemFile, RationalText, Report, Session, TaskSpec};
use kfiltr::rational::parse_rational;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kfiltr", version, about = "Exact invariants of filtrations on toric lattice polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ehrhart polynomial of the polytope.
    Hilbert(TaskArgs),
    /// Leading coefficients, norms and extremes of a filtration.
    Invariants(TaskArgs),
    /// Donaldson-Futaki invariant.
    Df(TaskArgs),
    /// Relative Donaldson-Futaki invariant and torus projection.
    DfRel(TaskArgs),
    /// Futaki invariant of a one-parameter subgroup or of each torus generator.
    Futaki(TaskArgs),
    /// Chow weight in degree r.
    Chow(TaskArgs),
    /// Relative Chow weight in degree r.
    ChowRel(TaskArgs),
    /// Tautological approximation generated in degree r.
    Approx(TaskArgs),
    /// Blowup body and induced filtration at a vertex.
    Blowup(TaskArgs),
    /// Threshold Λ and the weight ν of the blown-up filtration.
    Nu(TaskArgs),
    /// Relative degree-one Chow weights of the approximations for r = 1..R.
    ChowInf(TaskArgs),
    /// Difference of CM degrees between two filtrations.
    CmDiff(TaskArgs),
    /// Cross-validates every filtration of the file against the oracles.
    Check(TaskArgs),
    /// Runs the tasks listed in the file.
    Run(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Problem file (JSON).
    file: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TaskArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    filtration: Option<String>,
    #[arg(long)]
    against: Option<String>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    p: Option<u32>,
    /// Vertex index for `blowup` and `nu`.
    #[arg(long)]
    vertex: Option<usize>,
    /// Threshold for `nu`, as "p/q"; defaults to Λ_F.
    #[arg(long, value_parser = |s: &str| parse_rational(s).map(RationalText))]
    lambda: Option<RationalText>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Table,
}

fn task(name: &str, a: TaskArgs) -> (CommonArgs, TaskSpec) {
    let spec = TaskSpec {
        command: name.to_string(),
        filtration: a.filtration,
        against: a.against,
        k: a.k,
        r: a.r,
        m: a.m,
        p: a.p,
        vertex: a.vertex,
        lambda: a.lambda,
    };
    (a.common, spec)
}

fn split(c: Command) -> (CommonArgs, Option<TaskSpec>) {
    let (name, a) = match c {
        Command::Run(common) => return (common, None),
        Command::Hilbert(a) => ("hilbert", a),
        Command::Invariants(a) => ("invariants", a),
        Command::Df(a) => ("df", a),
        Command::DfRel(a) => ("df-rel", a),
        Command::Futaki(a) => ("futaki", a),
        Command::Chow(a) => ("chow", a),
        Command::ChowRel(a) => ("chow-rel", a),
        Command::Approx(a) => ("approx", a),
        Command::Blowup(a) => ("blowup", a),
        Command::Nu(a) => ("nu", a),
        Command::ChowInf(a) => ("chow-inf", a),
        Command::CmDiff(a) => ("cm-diff", a),
        Command::Check(a) => ("check", a),
    };
    let (common, spec) = task(name, a);
    (common, Some(spec))
}

fn configure_threads() -> Result<(), CommandError> {
    let Ok(v) = std::env::var("KFILTR_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CommandError::Usage(format!("KFILTR_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CommandError::Usage(e.to_string()))
}

fn execute(cli: Cli) -> Result<bool, CommandError> {
    configure_threads()?;
    let (common, spec) = split(cli.command);
    let session = Session::new(ProblemFile::from_path(&common.file)?)?;
    let (report, failed) = match spec {
        None => {
            let r = session.run_tasks()?;
            let failed = r.sections.iter().any(|s| s.title == "check" && any_failed(s));
            (r, failed)
        }
        Some(t) => {
            let sections = session.run(&t)?;
            let failed = t.command == "check" && sections.iter().any(any_failed);
            (Report { sections }, failed)
        }
    };
    let format = match common.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Table => Format::Table,
    };
    let text = report.render(format);
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CommandError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: check: some properties failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
