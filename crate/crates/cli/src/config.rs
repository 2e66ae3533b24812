//! Run configuration: command-line flags override the JSON file named by
//! `CSWALLS_CONFIG`, which overrides the built-in defaults.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use cswalls_core::bnfunction::UserEnvelopes;
use cswalls_core::{make_model, BNModel, Genus, ModelKind, Window};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CONFIG_ENV: &str = "CSWALLS_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Which Brill–Noether envelopes to use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSpec {
    Builtin(ModelKind),
    User(PathBuf),
}

impl ModelSpec {
    pub fn parse(s: &str) -> Result<ModelSpec, String> {
        match s.trim() {
            "general" => Ok(ModelSpec::Builtin(ModelKind::General)),
            "mercat" => Ok(ModelSpec::Builtin(ModelKind::Mercat)),
            "elliptic" => Ok(ModelSpec::Builtin(ModelKind::Elliptic)),
            t => match t.strip_prefix("user:") {
                Some(path) if !path.is_empty() => Ok(ModelSpec::User(PathBuf::from(path))),
                _ => Err(format!("unknown model {t:?}; expected general, mercat, elliptic or user:<path>")),
            },
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Builtin(kind) => write!(f, "{kind}"),
            ModelSpec::User(path) => write!(f, "user:{}", path.display()),
        }
    }
}

/// Values a caller may override, from either flags or a config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub genus: Option<i64>,
    pub model: Option<String>,
    pub window: Option<String>,
    pub rank_bound: Option<u32>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Overrides, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            genus: self.genus.or(base.genus),
            model: self.model.or(base.model),
            window: self.window.or(base.window),
            rank_bound: self.rank_bound.or(base.rank_bound),
            tol: self.tol.or(base.tol),
            format: self.format.or(base.format),
            cache_dir: self.cache_dir.or(base.cache_dir),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub genus: Genus,
    pub model: ModelSpec,
    pub window: Window,
    pub rank_bound: u32,
    pub tol: f64,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl Config {
    pub const DEFAULT_WINDOW: &'static str = "-4,4,1/4,8";

    pub fn resolve(flags: Overrides, config_file: Option<&Path>) -> Result<Config, CliError> {
        let file = match config_file {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        let merged = flags.over(file);
        let usage = |e: cswalls_core::Error| CliError::Usage(e.to_string());
        let genus = Genus::new(merged.genus.unwrap_or(2)).map_err(usage)?;
        let model = ModelSpec::parse(merged.model.as_deref().unwrap_or("general")).map_err(CliError::Usage)?;
        match (&model, genus.get()) {
            (ModelSpec::Builtin(ModelKind::Mercat), g) if g <= 3 => {
                return Err(CliError::Usage(format!("the mercat model needs genus at least 4, got {g}")));
            }
            (ModelSpec::Builtin(ModelKind::Elliptic), g) if g != 1 => {
                return Err(CliError::Usage(format!("the elliptic model needs genus 1, got {g}")));
            }
            _ => {}
        }
        let window = Window::parse(merged.window.as_deref().unwrap_or(Self::DEFAULT_WINDOW)).map_err(usage)?;
        let tol = merged.tol.unwrap_or(1e-9);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::Usage(format!("tolerance must be a nonnegative number, got {tol}")));
        }
        Ok(Config {
            genus,
            model,
            window,
            rank_bound: merged.rank_bound.unwrap_or(3),
            tol,
            format: merged.format.unwrap_or(Format::Text),
            cache_dir: merged.cache_dir,
        })
    }

    pub fn build_model(&self) -> Result<BNModel, CliError> {
        match &self.model {
            ModelSpec::Builtin(kind) => Ok(make_model(*kind, self.genus, None)?),
            ModelSpec::User(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read model {}: {e}", path.display())))?;
                let env: UserEnvelopes = serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("invalid model {}: {e}", path.display())))?;
                Ok(make_model(ModelKind::User, self.genus, Some(env))?)
            }
        }
    }
}
