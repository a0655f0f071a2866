use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use metallic_lightlike::cli::{load_manifest, run, Command, HintOverride, RunOptions};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Analyze,
    Classify,
    Verify,
    Frames,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
}

/// Lightlike submanifolds of metallic semi-Riemannian spaces, checked exactly.
#[derive(Debug, Parser)]
#[command(name = "mll", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    manifest: PathBuf,
    /// Comma-separated check ids, or `all`.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "json")]
    output: Output,
    /// Screen spanned by frame names or 1-based coordinate indices; `none`
    /// ignores the manifest hint.
    #[arg(long)]
    screen_hint: Option<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = match args.command {
        Cmd::Analyze => Command::Analyze,
        Cmd::Classify => Command::Classify,
        Cmd::Verify => Command::Verify,
        Cmd::Frames => Command::Frames,
    };
    let opts = RunOptions {
        checks: args.checks,
        screen_hint: args.screen_hint.as_deref().map(HintOverride::parse),
    };
    let result = load_manifest(&args.manifest)
        .map_err(metallic_lightlike::Error::from)
        .and_then(|m| run(command, &m, &opts));
    match result {
        Ok(report) => {
            let body = match args.output {
                Output::Json => report.to_json(),
                Output::Text => report.to_text(),
            };
            // a closed pipe is not a verification failure
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("mll: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
