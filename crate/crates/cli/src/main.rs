mod args;
mod commands;

use std::collections::hash_map::RandomState;
use std::hash::{BuildHasher, Hasher};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use recdag::graph_model::GENERATOR_FAMILY;

use args::{Cli, Command};
use commands::Failure;

fn entropy_seed() -> u64 {
    let mut h = RandomState::new().build_hasher();
    h.write_u128(
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos()),
    );
    h.finish()
}

fn seed_slot(command: &mut Command) -> Option<&mut Option<u64>> {
    match command {
        Command::Generate(a) => Some(&mut a.graph.seed),
        Command::Stats(a) => Some(&mut a.graph.seed),
        Command::Simulate(a) => Some(&mut a.seed),
        Command::Tailcheck(a) => Some(&mut a.seed),
        Command::Minrcheck(a) => Some(&mut a.seed),
        Command::Maxrcheck(a) => Some(&mut a.seed),
        Command::Brw(a) => Some(&mut a.seed),
        Command::Constants(_) | Command::Tailbound(_) | Command::Compare(_) | Command::Export(_) => None,
    }
}

fn main() -> ExitCode {
    let version = format!("{} (generator {GENERATOR_FAMILY})", recdag::VERSION);
    let matches = Cli::command().version(version).get_matches();
    let mut cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };

    if let Some(slot) = seed_slot(&mut cli.command) {
        if slot.is_none() {
            let s = entropy_seed();
            eprintln!("recdag: no --seed given, using --seed {s}");
            *slot = Some(s);
        }
    }
    let resolved = serde_json::json!({
        "version": recdag::VERSION,
        "generator": GENERATOR_FAMILY,
        "threads": cli.threads,
        "config": &cli.command,
    });
    eprintln!("recdag: resolved {resolved}");

    match commands::run(&cli.command, cli.threads) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage { flag, msg } => eprintln!("error: invalid value for '{flag}': {msg}"),
                Failure::Check(msg) => eprintln!("check failed: {msg}"),
                Failure::Run(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
