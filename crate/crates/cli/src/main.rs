use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use stringy_cli::{run, Command, Format, JobSpec, CACHE_ENV, DEFAULT_SAMPLES};

/// Integral stringy Chow rings of global quotient orbifolds.
#[derive(Parser, Debug)]
#[command(name = "stringy", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// JSON input document, `-` for stdin.
    #[arg(long, short)]
    input: PathBuf,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    /// Directory for cached outputs.
    #[arg(long, env = CACHE_ENV)]
    cache: Option<PathBuf>,

    #[arg(long, default_value_t = stringy_core::DEFAULT_MAX_ORDER)]
    max_group_order: usize,

    /// Seed for randomized property sampling in `verify`.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of random triples sampled by `verify`.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let job = JobSpec {
        command: args.command,
        input_path: args.input,
        output: args.format,
        cache_dir: args.cache,
        max_group_order: args.max_group_order,
        seed: args.seed,
        samples: args.samples,
    };
    let out = run(&job);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.status as u8)
}
