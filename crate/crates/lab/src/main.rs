use clap::Parser;
use kgsl_lab::cli::{execute, Cli};
use kgsl_lab::error::{EXIT_BLOW_UP, EXIT_FAILURE};

fn main() {
    let cli = Cli::parse();
    // one thread unless a sweep is explicitly parallelized
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(1).max(1))
        .build_global()
    {
        eprintln!("kgsl: {e}");
        std::process::exit(EXIT_FAILURE);
    }
    match execute(&cli) {
        Ok(outcome) => {
            if let Some(message) = outcome.message {
                println!("{message}");
            }
            if outcome.truncated {
                eprintln!("kgsl: trajectory truncated by a blow-up; see summary.json");
                std::process::exit(EXIT_BLOW_UP);
            }
        }
        Err(e) => {
            eprintln!("kgsl: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
