//! `genme` command line interface.
//!
//! Subcommands: `query` classifies a ground atom, `explain` prints
//! local explanations for a positive example, `nearmiss` runs the
//! near-miss generation and prints a report. Exit codes: 0 success /
//! positive, 1 negative or not-positive target, 2 any parse, IO or
//! configuration error. `GENME_THREADS` caps worker threads (0 = auto).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use genme_core::{
    config, explain, parse_ground_atom, parse_theory, report, search, TemplateTable, Theory,
};

#[derive(Parser)]
#[command(name = "genme", about = "Contrastive near-miss explanations for clausal theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a ground atom against a theory
    Query {
        theory: PathBuf,
        atom: String,
    },
    /// Print local explanations for a positive example
    Explain {
        theory: PathBuf,
        atom: String,
        /// Sentence template table (JSON)
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Print only the explanation with this index
        #[arg(long)]
        index: Option<usize>,
    },
    /// Generate near-miss explanations for the configured target
    Nearmiss {
        theory: PathBuf,
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Override the configured degree cutoff
        #[arg(long)]
        max_degree: Option<usize>,
    },
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_theory(path: &PathBuf) -> Result<Theory, String> {
    parse_theory(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn init_threads() {
    #[cfg(feature = "parallel")]
    if let Ok(value) = std::env::var("GENME_THREADS") {
        if let Ok(n) = value.parse::<usize>() {
            if n > 0 {
                // ignore failure if a pool is already installed
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn cmd_query(theory: &PathBuf, atom: &str) -> ExitCode {
    let theory = match load_theory(theory) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let atom = match parse_ground_atom(atom) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    match theory.models_atom(&atom) {
        Ok(true) => {
            println!("positive");
            ExitCode::SUCCESS
        }
        Ok(false) => {
            println!("negative");
            ExitCode::from(1)
        }
        Err(e) => fail(e),
    }
}

fn cmd_explain(
    theory: &PathBuf,
    atom: &str,
    templates: Option<&PathBuf>,
    index: Option<usize>,
) -> ExitCode {
    let theory = match load_theory(theory) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let atom = match parse_ground_atom(atom) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let table = match templates {
        None => None,
        Some(path) => match read(path).and_then(|text| {
            TemplateTable::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
        }) {
            Ok(t) => Some(t),
            Err(e) => return fail(e),
        },
    };
    let explanations = match explain::local_explanations(&theory, &atom) {
        Ok(exps) => exps,
        Err(genme_core::Error::NotPositive(a)) => {
            eprintln!("error: `{a}` is not a positive example");
            return ExitCode::from(1);
        }
        Err(e) => return fail(e),
    };
    let selected: Vec<_> = match index {
        None => explanations.iter().collect(),
        Some(i) => match explanations.get(i) {
            Some(e) => vec![e],
            None => {
                return fail(format!(
                    "index {i} out of range: {} explanation(s)",
                    explanations.len()
                ))
            }
        },
    };
    for exp in selected {
        match explain::render_explanation(&exp.ground_clause, false, table.as_ref()) {
            Ok(text) => println!("{text}"),
            Err(e) => return fail(e),
        }
    }
    ExitCode::SUCCESS
}

fn cmd_nearmiss(
    theory_path: &PathBuf,
    config_path: &PathBuf,
    format: Format,
    max_degree: Option<usize>,
) -> ExitCode {
    let theory = match load_theory(theory_path) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let mut run_config = match read(config_path).and_then(|text| {
        config::parse_config(&text, &theory).map_err(|e| format!("{}: {e}", config_path.display()))
    }) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if max_degree.is_some() {
        run_config.max_degree = max_degree;
    }
    let started = std::time::Instant::now();
    let family = match search::genme(&theory, &run_config.target.clone(), &run_config) {
        Ok(f) => f,
        Err(genme_core::Error::NotPositive(a)) => {
            eprintln!("error: target `{a}` is not a positive example");
            return ExitCode::from(1);
        }
        Err(e) => return fail(e),
    };
    let elapsed = started.elapsed();
    let run_report = report::build_report(&family, &run_config);
    match format {
        Format::Json => print!("{}", report::to_json(&run_report)),
        Format::Text => print!("{}", report::to_text(&run_report)),
    }
    // timing goes to stderr so the report itself stays byte-identical
    eprintln!("completed in {:.1} ms", elapsed.as_secs_f64() * 1000.0);
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match &cli.command {
        Command::Query { theory, atom } => cmd_query(theory, atom),
        Command::Explain {
            theory,
            atom,
            templates,
            index,
        } => cmd_explain(theory, atom, templates.as_ref(), *index),
        Command::Nearmiss {
            theory,
            config,
            format,
            max_degree,
        } => cmd_nearmiss(theory, config, *format, *max_degree),
    }
}
