mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use qdbis_core::Error;

use args::Cli;
use commands::Context;

fn exit_code(e: &Error) -> u8 {
    if e.is_capacity() {
        3
    } else {
        match e {
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match cli.global.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    };
    // scans use the global pool; ignore a pool that already exists
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    let ctx = Context {
        global: cli.global,
        threads,
    };
    let result =
        commands::run(&ctx, &cli.command).and_then(|(out, path)| commands::emit(&out, &ctx, path));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qdbis: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
