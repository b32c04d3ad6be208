use std::io::{Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use nori::cli::{failure_document, merge, parse_job, run, Cli, Failure, JobSpec, Outcome};

fn read_job(cli: &Cli) -> Result<JobSpec, Failure> {
    let Some(path) = &cli.input else {
        return Ok(JobSpec::default());
    };
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_job(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match read_job(&cli).and_then(|doc| merge(doc, cli.flag_job())) {
        Ok(job) => run(&job),
        Err(f) => failure_document(Some(cli.command), &f),
    };
    let Outcome {
        document,
        exit,
        diagnostics,
    } = outcome;
    if let Some(d) = diagnostics {
        eprintln!("{d}");
    }
    eprintln!(
        "{} finished in {:.3}s",
        cli.command,
        started.elapsed().as_secs_f64()
    );

    let mut text = serde_json::to_string_pretty(&document).expect("document serializes");
    text.push('\n');
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(5);
    }
    ExitCode::from(exit as u8)
}
