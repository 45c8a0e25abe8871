//! Command-line driver: parse an input document, run the requested analysis,
//! and emit the report (text to stdout, optional JSON and DOT files).
//!
//! Exit codes: 0 all checks pass, 2 input error, 3 assumption violation,
//! 4 theorem-check failure, 5 internal inconsistency.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jacfol::input::{canonical_document, parse_document};
use jacfol::report::{run_pipeline, Command as PipelineCommand};

#[derive(Parser)]
#[command(
    name = "jacfol",
    about = "Exact analysis of the jacobian curve of two plane singular foliations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Input document (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Seed override for seeded draws
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation override for branch parametrizations
    #[arg(long)]
    truncation: Option<u32>,
    /// Write the dual graph(s) in DOT format
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the report as JSON
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Index tables, divisor classification and M(z) per divisor
    Analyze(CommonArgs),
    /// Analysis plus the packet decomposition and intersection identities
    Decompose(CommonArgs),
    /// Analysis plus exact initial-form verification at every divisor
    Verify(CommonArgs),
    /// Contact tree of the separatrix pair (hamiltonian inputs)
    Tree(CommonArgs),
    /// Generic polar curve of the first foliation
    Polar(CommonArgs),
    /// Semiroot verification and the induced jacobian decomposition
    Semiroot(CommonArgs),
    /// Parse, validate and re-emit the canonical form of a document
    Canonicalize {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> jacfol::Result<ExitCode> {
    let (args, pipeline_cmd) = match cli.command {
        Cmd::Analyze(a) => (a, PipelineCommand::Analyze),
        Cmd::Decompose(a) => (a, PipelineCommand::Decompose),
        Cmd::Verify(a) => (a, PipelineCommand::Verify),
        Cmd::Tree(a) => (a, PipelineCommand::Tree),
        Cmd::Polar(a) => (a, PipelineCommand::Polar),
        Cmd::Semiroot(a) => (a, PipelineCommand::Semiroot),
        Cmd::Canonicalize { input } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| jacfol::Error::Input(format!("cannot read {}: {e}", input.display())))?;
            let doc = parse_document(&text)?;
            let canon = canonical_document(&doc)?;
            println!("{}", serde_json::to_string_pretty(&canon).unwrap());
            return Ok(ExitCode::SUCCESS);
        }
    };
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| jacfol::Error::Input(format!("cannot read {}: {e}", args.input.display())))?;
    let mut doc = parse_document(&text)?;
    if let Some(s) = args.seed {
        doc.options.seed = s;
    }
    if let Some(t) = args.truncation {
        doc.options.truncation = Some(t);
    }
    let out = run_pipeline(&doc, pipeline_cmd)?;
    print!("{}", out.report.render_text());
    if let Some(path) = args.json {
        std::fs::write(&path, out.report.to_json())
            .map_err(|e| jacfol::Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = args.dot {
        let mut dot = String::new();
        if let Some(a) = &out.analysis {
            dot.push_str(&a.res.upstairs.to_dot());
            if a.res.ram.order > 1 {
                dot.push('\n');
                dot.push_str(&a.res.downstairs_dot());
            }
        } else {
            dot.push_str("// first-divisor analysis: no graph to draw\n");
        }
        std::fs::write(&path, dot)
            .map_err(|e| jacfol::Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    if out.report.all_checks_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(4))
    }
}
