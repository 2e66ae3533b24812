//! The `cswalls` command-line tool as a library, so tests can run it in-process.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::commands::{Context, Output};
use crate::config::{Config, CONFIG_ENV};
use crate::error::CliError;

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs with the config file named by `CSWALLS_CONFIG`, if any.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = std::env::var_os(CONFIG_ENV).filter(|s| !s.is_empty()).map(PathBuf::from);
    run_with_config(argv, config.as_deref())
}

pub fn run_with_config<I, T>(argv: I, config_file: Option<&Path>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                    if e.exit_code() == 0 =>
                {
                    Outcome { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let mut warnings = Vec::new();
    let result = execute(cli, config_file, &mut warnings);
    let mut stderr: String = warnings.iter().map(|w| format!("{w}\n")).collect();
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr },
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            Outcome { code: e.exit_code(), stdout: String::new(), stderr }
        }
    }
}

fn execute(cli: Cli, config_file: Option<&Path>, warnings: &mut Vec<String>) -> Result<String, CliError> {
    let config = Config::resolve(cli.global.overrides(), config_file)?;
    let mut ctx = Context { config: &config, use_cache: !cli.global.no_cache, warnings: Vec::new() };
    let out = commands::execute(cli.command, &mut ctx);
    warnings.append(&mut ctx.warnings);
    match out? {
        Output::Report(r) => r.render(config.format),
        Output::Raw(s) => Ok(s),
    }
}
