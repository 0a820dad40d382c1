//! Flags, config files and their merge.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Evolve,
    Pmax,
    Sweep,
    Predict,
    Bell,
    Figure,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    /// Analytic inside 0 < a² < 2, oracle elsewhere.
    #[default]
    Auto,
    Analytic,
    Oracle,
    /// Both routes plus a cross-validation report.
    Both,
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

/// One run. Keys mirror the long flags; absent keys take command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` win.
    pub fn merged(mut self, top: RunConfig) -> Self {
        overlay!(self, top; command, n, a, t, t_max, dt, a_min, a_max, a_steps, a_list, n_list,
                 method, figure, full, jobs, out, report, vectors);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Quantum state transfer through spin wires with tunable end couplings.
#[derive(Debug, Parser)]
#[command(name = "spinwire", version)]
pub struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Flat JSON file with the same keys as the long flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the fully resolved config to this file.
    #[arg(long)]
    pub save_config: Option<PathBuf>,
    /// Internal wire length.
    #[arg(long)]
    pub n: Option<usize>,
    /// End coupling.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Evaluation time for `bell`.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub a_steps: Option<usize>,
    /// Explicit coupling values, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub a_list: Option<Vec<f64>>,
    /// Wire lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,
    /// fig1 .. fig5.
    #[arg(long)]
    pub figure: Option<String>,
    /// `evolve`: one column per site instead of `P0,Pend,Pnet`.
    #[arg(long)]
    pub full: bool,
    /// Worker threads for `sweep` and `figure`.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// CSV output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cross-validation report for `--method both`.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// `spectrum`: eigenvector dump as JSON.
    #[arg(long)]
    pub vectors: Option<PathBuf>,
}

impl Cli {
    pub fn flags(&self) -> RunConfig {
        RunConfig {
            command: self.command,
            n: self.n,
            a: self.a,
            t: self.t,
            t_max: self.t_max,
            dt: self.dt,
            a_min: self.a_min,
            a_max: self.a_max,
            a_steps: self.a_steps,
            a_list: self.a_list.clone(),
            n_list: self.n_list.clone(),
            method: self.method,
            figure: self.figure.clone(),
            full: self.full.then_some(true),
            jobs: self.jobs,
            out: self.out.clone(),
            report: self.report.clone(),
            vectors: self.vectors.clone(),
        }
    }

    /// Config file (if any) overlaid with the flags.
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(base.merged(self.flags()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(r#"{"command":"evolve","n":10,"a":0.5,"t-max":40}"#).unwrap();
        let flags = RunConfig { a: Some(0.2), ..Default::default() };
        let c = file.merged(flags);
        assert_eq!(c.command, Some(Command::Evolve));
        assert_eq!(c.a, Some(0.2));
        assert_eq!(c.t_max, Some(40.0));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"nn":3}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = RunConfig {
            command: Some(Command::Sweep),
            n_list: Some(vec![4, 6]),
            a_list: Some(vec![0.1, 0.2]),
            method: Some(MethodChoice::Both),
            ..Default::default()
        };
        let back: RunConfig = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from(["spinwire", "spectrum", "--n", "2", "--a", "1", "--method", "both"]).unwrap();
        let c = cli.flags();
        assert_eq!(c.command, Some(Command::Spectrum));
        assert_eq!(c.method, Some(MethodChoice::Both));
        let cli = Cli::try_parse_from(["spinwire", "sweep", "--n-list", "10,12", "--a-list", "0.1,0.2"]).unwrap();
        assert_eq!(cli.n_list, Some(vec![10, 12]));
    }
}
