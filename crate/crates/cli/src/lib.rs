//! Command-line scenario runner for the quantum eraser models.
//!
//! Exit status: 0 on success, 1 when `check` finds a failing invariant,
//! 2 for parse errors, 3 for validation errors and 4 for I/O errors.
//! Errors are reported on stderr as `{"error": ..., "message": ...}`.

pub mod args;
pub mod config;
pub mod emit;
pub mod error;
pub mod scenario;
pub mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use eraser_core::checks;

use crate::args::{Cli, Command};
use crate::config::{Format, Kind, Parameters, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::scenario::{Outcome, Scenario};

/// Runs one invocation and returns the process exit status.
pub fn run(cli: Cli) -> CliResult<u8> {
    let (subcommand_kind, flag_params) = match &cli.command {
        Command::Check => return Ok(run_checks()),
        Command::Run => (None, Parameters::default()),
        Command::Nchannel(a) => (Some(Kind::Nchannel), a.parameters()),
        Command::Twoslit(a) => (Some(Kind::Twoslit), a.parameters()),
        Command::Epr(a) => (Some(Kind::Epr), a.parameters()),
        Command::Sample(a) => (Some(Kind::Sample), a.parameters()),
    };
    let file = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    let kind = match (subcommand_kind, file.kind) {
        (Some(cmd), Some(cfg)) if cmd != cfg => {
            return Err(CliError::Validation(format!("config kind `{cfg}` does not match subcommand `{cmd}`")))
        }
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => return Err(CliError::Validation("`run` needs a config file with `kind` set".into())),
    };
    let flags = ScenarioConfig { kind: Some(kind), format: cli.format, output: cli.output.clone(), parameters: flag_params };
    let merged = file.overlay(flags);
    let format = merged.format.unwrap_or(Format::Csv);
    let scenario = scenario::resolve(kind, format, merged.parameters)?;
    let destination = destination(merged.output, cli.output_dir.as_deref(), kind, format)?;
    write_artifact(scenario, destination.as_deref())?;
    Ok(0)
}

fn run_checks() -> u8 {
    let outcomes = checks::run_all();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    for o in &outcomes {
        println!("[{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    println!("{passed}/{} checks passed", outcomes.len());
    u8::from(passed != outcomes.len())
}

/// `None` means stdout.
fn destination(output: Option<PathBuf>, dir: Option<&Path>, kind: Kind, format: Format) -> CliResult<Option<PathBuf>> {
    match (output, dir) {
        (Some(p), _) if p.as_os_str() == "-" => Ok(None),
        (Some(p), _) => Ok(Some(p)),
        (None, Some(dir)) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
            Ok(Some(dir.join(format!("{kind}.{format}"))))
        }
        (None, None) => Ok(None),
    }
}

fn write_artifact(scenario: Scenario, path: Option<&Path>) -> CliResult<()> {
    match path {
        None => {
            let stdout = io::stdout();
            write_to(scenario, BufWriter::new(stdout.lock()))
        }
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            write_to(scenario, BufWriter::new(file))
                .map_err(|e| match e {
                    CliError::Io(msg) => CliError::Io(format!("writing {}: {msg}", path.display())),
                    other => other,
                })
        }
    }
}

fn write_to<W: Write>(scenario: Scenario, mut out: W) -> CliResult<()> {
    let config = &scenario.effective;
    match (&scenario.outcome, config.format) {
        (Outcome::Pattern(p), Format::Csv) => emit::emit_pattern_csv(&mut out, p, config)?,
        (Outcome::Pattern(p), Format::Json) => emit::emit_pattern_json(&mut out, p, config)?,
        (Outcome::Pattern(p), Format::Svg) => emit::emit_pattern_svg(&mut out, p)?,
        (Outcome::Table(t), Format::Csv) => emit::emit_joint_csv(&mut out, t, config)?,
        (Outcome::Table(t), Format::Json) => emit::emit_joint_json(&mut out, t, config)?,
        (Outcome::Table(t), Format::Svg) => {
            let (a1, a2) = (config.parameters.basis1, config.parameters.basis2);
            let title = format!(
                "spin-pair joint probabilities, spin 1 along {}, spin 2 along {}",
                a1.map_or("z", |a| a.tag()),
                a2.map_or("z", |a| a.tag())
            );
            emit::emit_joint_svg(&mut out, t, &title)?
        }
        (Outcome::Events(_), _) => {}
    }
    if let Outcome::Events(events) = scenario.outcome {
        emit::emit_event_log(&mut out, events)?;
    }
    out.flush()?;
    Ok(())
}
