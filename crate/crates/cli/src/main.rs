use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qvgr_cli::{load_seed, run, server, Cli, CliError, Command, Outcome};

fn serve(a: &qvgr_cli::ServeArgs) -> Result<Outcome, CliError> {
    let seed = load_seed(&a.seed)?;
    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build()?;
    rt.block_on(server::serve(seed, a.port))?;
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let res = match &cli.command {
        Command::Serve(a) => serve(a),
        cmd => run(cmd, &mut out),
    };
    let _ = out.flush();
    match res {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
