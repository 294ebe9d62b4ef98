use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use varsub_cli::{catalog, run, Command, Options, Outcome, Problem};

#[derive(Parser)]
#[command(name = "varsub", version, about = "Variationality of ODE systems and their constraint submanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Helmholtz conditions of the system
    Helmholtz(FileArgs),
    /// Euler-Lagrange expressions of the Lagrangian
    El(FileArgs),
    /// Source form induced on the embedded submanifold
    Induce(FileArgs),
    /// Full pipeline: original, induced and global verdicts
    Check(FileArgs),
    /// Built-in embeddings and topologies
    Catalog {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct FileArgs {
    file: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: bool,
    /// Also run the Helmholtz test on the result
    #[arg(long)]
    check: bool,
}

fn emit(o: &Outcome, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(&o.json).unwrap_or_default());
    } else {
        print!("{}", o.text);
    }
    ExitCode::from(o.code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match cli.command {
        Cmd::Catalog { json } => return emit(&catalog(), json),
        Cmd::Helmholtz(a) => (Command::Helmholtz, a),
        Cmd::El(a) => (Command::El, a),
        Cmd::Induce(a) => (Command::Induce, a),
        Cmd::Check(a) => (Command::Check, a),
    };
    let opts = Options {
        seed: args.seed,
        samples: args.samples,
        tol: args.tol,
        check: args.check,
    };
    match Problem::load(&args.file).and_then(|p| run(cmd, &p, &opts)) {
        Ok(o) => emit(&o, args.json),
        Err(e) => {
            eprintln!("error: {}: {e}", args.file);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
