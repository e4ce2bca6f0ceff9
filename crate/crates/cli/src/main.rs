use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgAction, Parser, Subcommand};

mod cache;
mod commands;
mod error;
mod names;
mod report;

use cache::Cache;
use commands::{FanAction, GroupsAction, HodgeAction, PolytopeAction, PolytopeName, SectionsAction};
use error::CliError;
use report::Format;

/// Exact toric and group-theoretic computations for quotients of the
/// Calabi-Yau hypersurfaces in the resolved dual of (P^1)^4.
#[derive(Debug, Parser)]
#[command(name = "hypermirror", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[arg(long, global = true, env = "HYPERMIRROR_CACHE", default_value = ".hypermirror")]
    cache_dir: PathBuf,

    /// Canonical ordering and no timing fields, so repeated runs are
    /// byte-identical.
    #[arg(long, global = true, action = ArgAction::Set, default_value_t = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lattice-point census, faces and duality of the hypercube or 16-cell.
    Polytope {
        #[arg(value_enum)]
        which: PolytopeName,
        #[arg(value_enum, default_value = "info")]
        action: PolytopeAction,
    },
    /// The flag subdivision: build, check, and involution intersections.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Subgroups of the hyperoctahedral group B4.
    Groups {
        #[command(subcommand)]
        action: GroupsAction,
    },
    /// Invariant Picard ranks for all order-16 subgroup classes.
    Table,
    /// Hodge numbers of free quotients, the orbifold, and mirror matching.
    Hodge {
        #[command(subcommand)]
        action: HodgeAction,
    },
    /// Anticanonical sections: eigenspaces, fixed loci, singular points,
    /// freeness.
    Sections {
        #[command(subcommand)]
        action: SectionsAction,
    },
}

pub struct Context {
    pub cache: Cache,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Context { cache: Cache::new(&cli.cache_dir) };
    let start = Instant::now();
    let result = match cli.command {
        Command::Polytope { which, action } => commands::polytope(which, action),
        Command::Fan { action } => commands::fan(&ctx, action),
        Command::Groups { action } => commands::groups(&ctx, action),
        Command::Table => commands::table(&ctx),
        Command::Hodge { action } => commands::hodge(action),
        Command::Sections { action } => commands::sections(action),
    };
    let outcome = result.and_then(|mut report| {
        if !cli.deterministic {
            if let Some(obj) = report.data.as_object_mut() {
                obj.insert("elapsed_ms".into(), (start.elapsed().as_millis() as u64).into());
            }
        }
        print!("{}", report.render(cli.format)?);
        match report.mismatch {
            Some(diff) => Err(CliError::Mismatch(diff)),
            None => Ok(()),
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
