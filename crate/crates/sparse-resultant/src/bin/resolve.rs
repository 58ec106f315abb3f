use clap::{Parser, Subcommand, ValueEnum};
use sparse_resultant::cli::{self, CliError, CliResult};
use sparse_resultant::symbolic::DEFAULT_SIZE_CAP;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "resolve", about = "Sylvester-type matrices and sparse resultants")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Problem file (JSON); standard input when omitted.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Overrides the seed in the problem file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 10)]
    trials: usize,
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Largest matrix handled by the symbolic determinant.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Codimension, essential subfamilies and resultant degrees.
    Essential,
    /// Row contents, cells and entries of the matrix.
    Build,
    /// The resultant as det M / det E, and the extraneous factor.
    Resultant,
    /// Property checks at integer specializations.
    Verify,
    /// Macaulay's homogeneous matrix against the sparse build.
    Classical {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
        #[arg(long)]
        t: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn read_problem(args: &Args) -> CliResult<cli::Problem> {
    let text = match &args.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Parse(e.to_string()))?;
            s
        }
    };
    let mut p = cli::parse_problem(&text)?;
    if let Some(seed) = args.seed {
        p.opts.seed = seed;
    }
    Ok(p)
}

fn render<T: serde::Serialize>(format: Format, value: &T, table: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Table => table(value),
    }
}

fn run(args: &Args) -> CliResult<(String, bool)> {
    let seed = args.seed.unwrap_or(0);
    match &args.command {
        Command::Essential => {
            let p = read_problem(args)?;
            let r = cli::cmd_essential(&p.system);
            Ok((render(args.format, &r, cli::essential_table), true))
        }
        Command::Build => {
            let p = read_problem(args)?;
            let (m, delta) = cli::build(&p)?;
            let out = match args.format {
                Format::Json => {
                    serde_json::to_string_pretty(&cli::to_artifact(&m, delta.as_deref())).expect("serializable") + "\n"
                }
                Format::Table => cli::build_table(&m),
            };
            Ok((out, true))
        }
        Command::Resultant => {
            let p = read_problem(args)?;
            let (m, _) = cli::build(&p)?;
            let r = cli::cmd_resultant(&m, args.cap)?;
            Ok((render(args.format, &r, cli::resultant_table), true))
        }
        Command::Verify => {
            let p = read_problem(args)?;
            let r = cli::cmd_verify(&p, seed, args.trials)?;
            Ok((render(args.format, &r, cli::verify_table), r.passed()))
        }
        Command::Classical { degrees, t } => {
            let r = cli::cmd_classical(degrees, *t, seed, args.cap)?;
            Ok((render(args.format, &r, cli::classical_table), r.agree))
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok((out, ok)) => {
            let written = match &args.output {
                Some(path) => std::fs::write(path, &out).map_err(|e| e.to_string()),
                None => {
                    print!("{out}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
