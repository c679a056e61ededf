//! Command line entry point: parse a `.pun` file, typecheck it, run its
//! properties, and report. Exit code 0 means everything passed, 1 means a
//! property failed or aborted, 2 means the file did not parse or typecheck.

use std::process::ExitCode;

use clap::Parser;

use pun::eval::{eval, Fuel};
use pun::parser::parse_program;
use pun::runner::{check_all, render_outcome, RunConfig};
use pun::typecheck::check_program;

#[derive(Parser, Debug)]
#[command(
    name = "pun",
    version,
    about = "Check the properties declared in a pun program against random well-typed inputs"
)]
struct CliOptions {
    /// The .pun source file.
    input: std::path::PathBuf,

    /// Number of random tests per property.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    tests: u32,

    /// Seed for input generation; derived from system entropy when absent.
    /// The seed in effect is echoed, so any run can be reproduced.
    #[arg(long)]
    seed: Option<u64>,

    /// Largest generation size; tests ramp up to it.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    max_size: u32,

    /// Evaluation step budget per test.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,

    /// Parse and typecheck only; run no properties.
    #[arg(long, conflicts_with = "eval")]
    check: bool,

    /// Evaluate an argument-free definition and print its value.
    #[arg(long, value_name = "NAME")]
    eval: Option<String>,
}

fn main() -> ExitCode {
    let options = CliOptions::parse();

    let source = match std::fs::read_to_string(&options.input) {
        Ok(source) => source,
        Err(e) => {
            eprintln!("pun: cannot read {}: {e}", options.input.display());
            return ExitCode::from(2);
        }
    };
    let program = match parse_program(&source) {
        Ok(program) => program,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let typed = match check_program(&program) {
        Ok(typed) => typed,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };

    if options.check {
        return ExitCode::SUCCESS;
    }

    if let Some(name) = &options.eval {
        let is_nullary = typed.program.declarations.iter().any(|d| {
            matches!(d, pun::ast::Declaration::Definition { name: n, params, .. }
                     if n == name && params.is_empty())
        });
        if !is_nullary {
            eprintln!("pun: `{name}` is not an argument-free definition");
            return ExitCode::from(2);
        }
        let term = typed.definition(name).cloned().expect("definition exists");
        return match eval(&term, &mut Fuel::new(options.fuel)) {
            Ok(value) => {
                println!("{value}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("pun: evaluating `{name}`: {e}");
                ExitCode::FAILURE
            }
        };
    }

    let cfg = RunConfig {
        tests: options.tests,
        seed: options.seed.unwrap_or_else(rand::random),
        max_size: options.max_size,
        fuel: options.fuel,
    };
    println!("-- seed: {}", cfg.seed);
    let outcomes = check_all(&typed, &cfg);
    let mut all_passed = true;
    for (name, outcome) in &outcomes {
        println!("{}", render_outcome(name, outcome));
        all_passed &= outcome.passed();
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
