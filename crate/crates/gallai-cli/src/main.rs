//! Command surface tying construction, verification, search, and bound
//! derivation into reproducible shell pipelines.
//!
//! Exit codes: 0 success or certified; 1 verification failed or no witness
//! (findings printed); 2 usage or input error; 3 capacity or budget error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gallai::bounds::{
    derive_bounds, figure1_table, parse_manifest, render_figure1, write_manifest,
};
use gallai::certificate::{read_certificate, write_certificate, AvoidList, Certificate};
use gallai::construct;
use gallai::search::{
    exact_number, search_witness, search_witness_parallel, ExactOutcome, SearchProblem,
    SearchStatus,
};
use gallai::verify::{verify_witness, verify_witness_parallel};
use gallai::Error;

#[derive(Parser)]
#[command(
    name = "gallai",
    version,
    about = "Build, verify, and search edge colorings witnessing Ramsey-type lower bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructOp {
    /// Lift a 2-uniform coloring to uniformity 3 (targets become K_{2s-1}-e).
    Lift,
    /// Substitute the second coloring into every vertex of the first.
    Substitute,
    /// Blow up along a weak coloring of --target, adding one color.
    Burr,
    /// Lexicographic composition of two same-palette colorings.
    Lexcompose,
    /// Square a 3-uniform coloring, adding two colors.
    Square3,
    /// Square a 4-uniform coloring, adding two colors.
    Square4,
}

impl ConstructOp {
    fn label(self) -> &'static str {
        match self {
            ConstructOp::Lift => "lift",
            ConstructOp::Substitute => "substitute",
            ConstructOp::Burr => "burr",
            ConstructOp::Lexcompose => "lexcompose",
            ConstructOp::Square3 => "square3",
            ConstructOp::Square4 => "square4",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a new coloring certificate from existing ones.
    Construct {
        /// Construction to apply.
        #[arg(long, value_enum)]
        op: ConstructOp,
        /// Primary input certificate.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Second input certificate (substitute, lexcompose).
        #[arg(long = "in2", value_name = "FILE")]
        input2: Option<PathBuf>,
        /// Target pattern for the burr blow-up, e.g. K4 or K5-e.
        #[arg(long, value_name = "PATTERN")]
        target: Option<String>,
        /// Output certificate path.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Exhaustively verify a certificate against an avoid list.
    Verify {
        /// Certificate to check.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Comma-separated per-color patterns, e.g. K4-e,K4-e,K4,K4.
        #[arg(long, value_name = "LIST")]
        avoid: String,
        /// Also require the coloring to be rainbow-simplex-free.
        #[arg(long)]
        gallai: bool,
        /// Worker threads for the scans (1 = serial).
        #[arg(long, default_value_t = 1, value_name = "N")]
        threads: usize,
    },
    /// Search for a coloring of K_n^(r) avoiding the listed patterns.
    Search {
        /// Uniformity r.
        #[arg(long)]
        r: usize,
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        /// Number of colors.
        #[arg(long)]
        t: u16,
        /// Comma-separated per-color patterns.
        #[arg(long, value_name = "LIST")]
        avoid: String,
        /// Forbid rainbow simplices as well.
        #[arg(long)]
        gallai: bool,
        /// Node budget; the search stops indeterminate when it runs out.
        #[arg(long, value_name = "NODES")]
        budget: Option<u64>,
        /// Write the found witness to this certificate path.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Worker threads (1 = serial; parallel runs shard the prefix tree).
        #[arg(long, default_value_t = 1, value_name = "N")]
        threads: usize,
    },
    /// Determine an exact Ramsey-type number by exhausting orders upward.
    Exact {
        /// Uniformity r.
        #[arg(long)]
        r: usize,
        /// Number of colors.
        #[arg(long)]
        t: u16,
        /// Comma-separated per-color patterns.
        #[arg(long, value_name = "LIST")]
        avoid: String,
        /// Highest order to try before giving up.
        #[arg(long, value_name = "N")]
        cap: usize,
        /// Compute the rainbow-free variant of the number.
        #[arg(long)]
        gallai: bool,
        /// Node budget per order.
        #[arg(long, value_name = "NODES")]
        budget: Option<u64>,
    },
    /// Work with the registry of known lower bounds.
    Bounds {
        /// Replay the published derivation chains and compare values.
        #[arg(long)]
        figure1: bool,
        /// Registry manifest to load.
        #[arg(long, value_name = "FILE")]
        registry: Option<PathBuf>,
        /// Close the registry under the derivation rules.
        #[arg(long)]
        derive: bool,
        /// Repeat derivation to a fixpoint instead of a single step.
        #[arg(long)]
        iterate: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooManyEdges { .. } | Error::OrderCap { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Construct {
            op,
            input,
            input2,
            target,
            out,
        } => run_construct(op, &input, input2.as_deref(), target.as_deref(), &out),
        Command::Verify {
            input,
            avoid,
            gallai,
            threads,
        } => run_verify(&input, &avoid, gallai, threads),
        Command::Search {
            r,
            n,
            t,
            avoid,
            gallai,
            budget,
            out,
            threads,
        } => {
            let problem = SearchProblem {
                n,
                r,
                t,
                avoid: AvoidList::parse(&avoid, r)?,
                gallai_mode: gallai,
                node_budget: budget.unwrap_or(u64::MAX),
            };
            run_search(&problem, out.as_deref(), threads)
        }
        Command::Exact {
            r,
            t,
            avoid,
            cap,
            gallai,
            budget,
        } => run_exact(r, t, &avoid, cap, gallai, budget),
        Command::Bounds {
            figure1,
            registry,
            derive,
            iterate,
        } => run_bounds(figure1, registry.as_deref(), derive, iterate),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_cert(path: &Path) -> Result<Certificate, Failure> {
    Ok(read_certificate(&read_text(path)?)?)
}

fn provenance_of(cert: &Certificate) -> &str {
    cert.provenance.as_deref().unwrap_or("unlabeled")
}

/// Block-packed outputs note their vertex layout so downstream tooling can
/// map vertices back to (block, inner) pairs.
fn packed(label: String, inner_order: usize) -> String {
    format!("{label} [vertex (b,v) -> b*{inner_order}+v]")
}

fn run_construct(
    op: ConstructOp,
    input: &Path,
    input2: Option<&Path>,
    target: Option<&str>,
    out: &Path,
) -> Result<u8, Failure> {
    let first = read_cert(input)?;
    let second = match op {
        ConstructOp::Substitute | ConstructOp::Lexcompose => {
            Some(read_cert(input2.ok_or_else(|| {
                Failure::usage(format!("--op {} needs --in2", op.label()))
            })?)?)
        }
        _ => {
            if input2.is_some() {
                return Err(Failure::usage(format!(
                    "--op {} takes no --in2",
                    op.label()
                )));
            }
            None
        }
    };
    if target.is_some() && op != ConstructOp::Burr {
        return Err(Failure::usage(format!(
            "--op {} takes no --target",
            op.label()
        )));
    }

    let a = &first.coloring;
    let (result, provenance) = match op {
        ConstructOp::Lift => (
            construct::lift_graph(a)?,
            format!("lift({})", provenance_of(&first)),
        ),
        ConstructOp::Substitute => {
            let b = second.as_ref().expect("checked above");
            (
                construct::gallai_substitute(a, &b.coloring)?,
                packed(
                    format!(
                        "substitute({}, {})",
                        provenance_of(&first),
                        provenance_of(b)
                    ),
                    b.coloring.order(),
                ),
            )
        }
        ConstructOp::Burr => {
            let text =
                target.ok_or_else(|| Failure::usage("--op burr needs --target".to_string()))?;
            let pattern = gallai::certificate::parse_pattern(text, a.uniformity())?;
            let blown = construct::burr_blowup(a, &pattern.realize(a.uniformity())?)?;
            (
                blown,
                packed(
                    format!("burr({}, {pattern})", provenance_of(&first)),
                    a.order(),
                ),
            )
        }
        ConstructOp::Lexcompose => {
            let b = second.as_ref().expect("checked above");
            (
                construct::lex_compose(a, &b.coloring)?,
                packed(
                    format!(
                        "lexcompose({}, {})",
                        provenance_of(&first),
                        provenance_of(b)
                    ),
                    b.coloring.order(),
                ),
            )
        }
        ConstructOp::Square3 => (
            construct::square3(a)?,
            packed(format!("square3({})", provenance_of(&first)), a.order()),
        ),
        ConstructOp::Square4 => (
            construct::square4(a)?,
            packed(format!("square4({})", provenance_of(&first)), a.order()),
        ),
    };

    write_text(out, &write_certificate(&result, Some(&provenance))?)?;
    println!(
        "wrote {}: {} vertices, {} colors, uniformity {}",
        out.display(),
        result.order(),
        result.color_count(),
        result.uniformity()
    );
    Ok(0)
}

fn set_thread_pool(threads: usize) {
    if threads > 1 {
        // Ignore the error: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn format_vertices(vertices: &[usize]) -> String {
    let parts: Vec<String> = vertices.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn run_verify(input: &Path, avoid: &str, gallai: bool, threads: usize) -> Result<u8, Failure> {
    let cert = read_cert(input)?;
    let list = AvoidList::parse(avoid, cert.coloring.uniformity())?;
    set_thread_pool(threads);
    let report = if threads > 1 {
        verify_witness_parallel(&cert.coloring, &list, gallai)?
    } else {
        verify_witness(&cert.coloring, &list, gallai)?
    };
    if let Some(bound) = &report.certified {
        println!("certified: {bound}");
        return Ok(0);
    }
    if let Some(w) = &report.rainbow_witness {
        println!("rainbow simplex at {}", format_vertices(w));
    }
    for (i, finding) in report.per_color_findings.iter().enumerate() {
        if let Some(w) = finding {
            println!(
                "color {} contains {} at {}",
                i + 1,
                list.patterns()[i],
                format_vertices(w)
            );
        }
    }
    Ok(1)
}

fn run_search(problem: &SearchProblem, out: Option<&Path>, threads: usize) -> Result<u8, Failure> {
    set_thread_pool(threads);
    let outcome = if threads > 1 {
        search_witness_parallel(problem)?
    } else {
        search_witness(problem)?
    };
    match outcome.status {
        SearchStatus::Found(coloring) => {
            println!(
                "witness found: {} vertices, {} colors ({} nodes)",
                coloring.order(),
                coloring.color_count(),
                outcome.nodes_visited
            );
            if let Some(path) = out {
                write_text(path, &write_certificate(&coloring, Some("search"))?)?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        SearchStatus::ExhaustedNone => {
            println!(
                "no witness exists at order {} ({} nodes)",
                problem.n, outcome.nodes_visited
            );
            Ok(1)
        }
        SearchStatus::BudgetExceeded => {
            println!(
                "node budget exhausted after {} nodes",
                outcome.nodes_visited
            );
            Ok(3)
        }
    }
}

fn run_exact(
    r: usize,
    t: u16,
    avoid: &str,
    cap: usize,
    gallai: bool,
    budget: Option<u64>,
) -> Result<u8, Failure> {
    let list = AvoidList::parse(avoid, r)?;
    let outcome = exact_number(r, t, &list, gallai, cap, budget.unwrap_or(u64::MAX))?;
    match outcome {
        ExactOutcome::Exact {
            value,
            witness_nodes,
            exhausted_nodes,
            ..
        } => {
            let names: Vec<String> = list.patterns().iter().map(ToString::to_string).collect();
            println!(
                "exact: {}({};{}) = {}",
                if gallai { "gr" } else { "R" },
                names.join(","),
                r,
                value
            );
            println!("witness search {witness_nodes} nodes, exhaustion {exhausted_nodes} nodes");
            Ok(0)
        }
        ExactOutcome::Indeterminate { reason } => {
            println!("indeterminate: {reason}");
            Ok(3)
        }
    }
}

fn run_bounds(
    figure1: bool,
    registry: Option<&Path>,
    derive: bool,
    iterate: bool,
) -> Result<u8, Failure> {
    if figure1 == registry.is_some() {
        return Err(Failure::usage(
            "pass exactly one of --figure1 or --registry FILE",
        ));
    }
    if figure1 {
        if derive || iterate {
            return Err(Failure::usage("--derive and --iterate need --registry"));
        }
        print!("{}", render_figure1(&figure1_table()));
        return Ok(0);
    }
    if iterate && !derive {
        return Err(Failure::usage("--iterate needs --derive"));
    }
    let path = registry.expect("checked above");
    let records = parse_manifest(&read_text(path)?)?;
    if derive {
        let derived = derive_bounds(&records, iterate);
        print!("{}", write_manifest(&derived.records));
        for line in &derived.skipped {
            eprintln!("skipped: {line}");
        }
    } else {
        print!("{}", write_manifest(&records));
    }
    Ok(0)
}
