//! The `spweb` binary.

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use spweb_cli::app::{run, Cli};

fn print(v: &serde_json::Value, pretty: bool) {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    println!("{}", s.expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("cannot configure {j} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print(&out.value, cli.pretty);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            print(&json!({ "error": f.0 }), cli.pretty);
            ExitCode::from(1)
        }
    }
}
