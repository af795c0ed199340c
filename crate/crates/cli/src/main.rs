use clap::Parser;
use sce_cli::{cmd_run, cmd_sweep, Cli, Command, Result, RunConfig};

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => {
            let cfg = RunConfig::from_args(a.k, &a.common)?;
            cmd_run(&cfg).map(|_| ())
        }
        Command::Sweep(a) => cmd_sweep(&a.common, &a.k_list).map(|_| ()),
    }
}

fn main() {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = dispatch(cli) {
        eprintln!("sce: {e}");
        std::process::exit(e.exit_code());
    }
}
