use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ast_schemes::axioms::{is_symmetric, slot_completion_counts, validate_ast, EnabledChecks};
use ast_schemes::classify::{classify, ClassificationJob, OrderSelection, PipelineOrder};
use ast_schemes::error::Error;
use ast_schemes::suite::{run_reference_suite, SuiteOptions};
use ast_schemes::{AstDocument, CoordPerm, GroupSpec};

/// Enumerate, verify and classify association schemes on triples.
#[derive(Parser)]
#[command(name = "ast-schemes", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify all schemes invariant under a group action.
    Enumerate(EnumerateArgs),
    /// Check a scheme document against the axioms.
    Verify { path: PathBuf },
    /// Print the numeric invariants of a scheme document.
    Invariants { path: PathBuf },
    /// Run the built-in reproduction suite of reference classifications.
    PaperSuite(SuiteArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Invariance group: trivial, coord-s3, cyclic:(...), or perm:...
    #[arg(long)]
    group: String,
    /// A single order m >= 4, or `all`.
    #[arg(long, default_value = "all")]
    orders: String,
    /// Write one document per class into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Group candidates into isomorphism classes before the axiom checks,
    /// validating only a transversal.
    #[arg(long)]
    legacy_order: bool,
    #[arg(long, value_enum, hide = true)]
    disable_check: Vec<Check>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    legacy_order: bool,
    #[arg(long, value_enum, hide = true)]
    disable_check: Vec<Check>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Check {
    Valency,
    Closure,
    Regularity,
}

fn checks_from(disabled: &[Check]) -> EnabledChecks {
    EnabledChecks {
        valency: !disabled.contains(&Check::Valency),
        closure: !disabled.contains(&Check::Closure),
        regularity: !disabled.contains(&Check::Regularity),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Verify { path } => cmd_verify(&path),
        Command::Invariants { path } => cmd_invariants(&path),
        Command::PaperSuite(args) => cmd_paper_suite(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 2 for usage and parse problems, 1 for everything else.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::DocumentParse { .. }
        | Error::InvalidGroupSpec { .. }
        | Error::InvalidJob(_)
        | Error::LabelOutOfRange { .. }
        | Error::BlockCountOutOfRange { .. }
        | Error::VertexCountTooSmall(_)
        | Error::VertexCountTooLarge(_) => 2,
        _ => 1,
    }
}

fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, Error> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidJob(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<ExitCode, Error> {
    let spec = GroupSpec::parse(&args.group)?;
    let orders = match args.orders.as_str() {
        "all" => OrderSelection::All,
        m => OrderSelection::Single(m.parse().map_err(|_| {
            Error::InvalidJob(format!("--orders expects an integer or `all`, got `{m}`"))
        })?),
    };
    let mut job = ClassificationJob::new(args.n, spec.to_action(args.n)?, orders);
    job.group_label = Some(spec.to_string());
    job.pipeline = if args.legacy_order {
        PipelineOrder::IsomorphismFirst
    } else {
        PipelineOrder::AxiomsFirst
    };
    job.checks = checks_from(&args.disable_check);

    let result = with_pool(args.threads, || classify(&job))??;

    println!(
        "n={} group={} (order {}) orders={} pipeline={}",
        result.n,
        spec,
        job.action.group().order(),
        args.orders,
        if args.legacy_order { "legacy" } else { "default" },
    );
    for stats in &result.per_order {
        let transversal = stats
            .transversal
            .map(|t| format!(", transversal {t}"))
            .unwrap_or_default();
        println!(
            "order {}: enumerated {}, valency {}, closure {}, regularity {}{}, classes {}",
            stats.order,
            stats.enumerated,
            stats.valency_pass,
            stats.closure_pass,
            stats.regularity_pass,
            transversal,
            stats.classes,
        );
    }
    println!("classes: {}", result.classes.len());
    println!("elapsed: {:.3}s", result.elapsed.as_secs_f64());

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| {
            Error::InvalidJob(format!("cannot create output directory {dir:?}: {e}"))
        })?;
    }
    for (i, class) in result.classes.iter().enumerate() {
        let report = validate_ast(&class.representative);
        let doc = AstDocument::from_candidate(
            &class.representative,
            job.group_label.clone(),
            report.valencies.as_ref(),
        );
        let rendered = match args.format {
            Format::Text => doc.to_text(),
            Format::Json => doc.to_json(),
        };
        match &args.out {
            Some(dir) => {
                let ext = match args.format {
                    Format::Text => "ast",
                    Format::Json => "json",
                };
                let path = dir.join(format!("class_{:03}.{ext}", i + 1));
                fs::write(&path, rendered).map_err(|e| {
                    Error::InvalidJob(format!("cannot write {path:?}: {e}"))
                })?;
                println!(
                    "class {}: order {}, members {}, orbit size {} -> {}",
                    i + 1,
                    class.order,
                    class.members_found,
                    class.orbit_size,
                    path.display(),
                );
            }
            None => {
                println!(
                    "--- class {}: order {}, members {}, orbit size {}",
                    i + 1,
                    class.order,
                    class.members_found,
                    class.orbit_size,
                );
                print!("{rendered}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_document(path: &Path) -> Result<AstDocument, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::DocumentParse {
        line: 0,
        col: 0,
        msg: format!("cannot read {path:?}: {e}"),
    })?;
    AstDocument::parse(&text)
}

/// Document loading and structural validation are the parse stage: any
/// failure here is exit code 2, as opposed to axiom failures (exit 1).
fn read_candidate(path: &Path) -> Result<(AstDocument, ast_schemes::AstCandidate), Error> {
    let doc = read_document(path)?;
    let candidate = doc.to_candidate().map_err(|e| match e {
        Error::DocumentParse { .. } => e,
        other => Error::DocumentParse {
            line: 0,
            col: 0,
            msg: other.to_string(),
        },
    })?;
    Ok((doc, candidate))
}

fn cmd_verify(path: &Path) -> Result<ExitCode, Error> {
    let (doc, candidate) = read_candidate(path)?;
    println!("n: {}, order: {}", candidate.n(), candidate.order());
    let report = validate_ast(&candidate);
    let failed = report.failure.as_ref().map(|f| f.condition());
    let status = |condition: usize, ran: bool| -> &'static str {
        match failed {
            Some(f) if f == condition => "fail",
            _ if ran => "pass",
            _ => "skipped",
        }
    };
    println!(
        "condition 1 (valency): {}",
        status(1, report.valencies.is_some())
    );
    println!(
        "condition 3 (coordinate closure): {}",
        status(3, report.coord_table.is_some())
    );
    println!(
        "condition 2 (regularity): {}",
        status(2, report.tensor.is_some())
    );
    if let Some(failure) = &report.failure {
        println!("verdict: not a scheme ({failure})");
        return Ok(ExitCode::from(1));
    }
    let valencies = report.valencies.as_ref().expect("pass implies valencies");
    println!("valencies: {valencies}");
    if let Some(claimed) = &doc.valencies {
        if claimed != valencies.counts() {
            println!(
                "verdict: document claims valencies {:?} but they are {valencies}",
                claimed
            );
            return Ok(ExitCode::from(1));
        }
    }
    let tensor = report.tensor.as_ref().expect("pass implies tensor");
    let nonzero = tensor.nonzero().count();
    println!(
        "tensor: {nonzero} nonzero cells, every slice sums to {}",
        candidate.n()
    );
    println!("verdict: scheme");
    Ok(ExitCode::SUCCESS)
}

fn cmd_invariants(path: &Path) -> Result<ExitCode, Error> {
    let (_doc, candidate) = read_candidate(path)?;
    let report = validate_ast(&candidate);
    if let Some(failure) = &report.failure {
        eprintln!("not a scheme: {failure}");
        return Ok(ExitCode::from(1));
    }
    println!("n: {}, order: {}", candidate.n(), candidate.order());
    println!(
        "valencies: {}",
        report.valencies.as_ref().expect("validated")
    );
    let tensor = report.tensor.as_ref().expect("validated");
    let cells: Vec<String> = tensor
        .nonzero()
        .map(|((i, j, k, l), v)| format!("{i},{j},{k},{l}={v}"))
        .collect();
    println!("tensor nonzero cells: {}", cells.len());
    println!("tensor: {}", cells.join(" "));
    let table = report.coord_table.as_ref().expect("validated");
    for perm in CoordPerm::ALL {
        let row: Vec<String> = (0..=candidate.order())
            .map(|i| table.get(perm, i).to_string())
            .collect();
        println!("coord {}: [{}]", perm, row.join(" "));
    }
    for slot in 0..3 {
        let counts: Vec<String> = slot_completion_counts(&candidate, slot)
            .iter()
            .map(|c| c.map_or("-".to_string(), |v| v.to_string()))
            .collect();
        println!("slot {} completions: ({})", slot + 1, counts.join(","));
    }
    println!("symmetric: {}", is_symmetric(&candidate, table));
    println!("circulant: {}", candidate.is_circulant());
    Ok(ExitCode::SUCCESS)
}

fn cmd_paper_suite(args: SuiteArgs) -> Result<ExitCode, Error> {
    let opts = SuiteOptions {
        pipeline: if args.legacy_order {
            PipelineOrder::IsomorphismFirst
        } else {
            PipelineOrder::AxiomsFirst
        },
        checks: checks_from(&args.disable_check),
    };
    let outcome = with_pool(args.threads, || run_reference_suite(opts))??;
    for row in &outcome.rows {
        if row.passed {
            println!("PASS  {}", row.name);
        } else {
            println!("FAIL  {} — {}", row.name, row.detail);
        }
    }
    if outcome.all_passed() {
        println!("reproduction suite: all {} jobs match", outcome.rows.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("reproduction suite: MISMATCH");
        Ok(ExitCode::from(1))
    }
}
