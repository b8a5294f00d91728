use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};

use crate::scenario::{CostValue, Resolved, Scenario};

#[derive(Debug, Parser)]
#[command(name = "hypotest", version, about = "Cost-optimal and Neyman-Pearson likelihood-ratio tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cost-optimal test: threshold, error rates and expected cost.
    Design(DesignArgs),
    /// Fixed-size Neyman-Pearson test.
    Np(DesignArgs),
    /// Neyman-Pearson and cost-optimal tests side by side.
    Compare(DesignArgs),
    /// Seeded Monte Carlo estimate of both tests' error rates and costs.
    Simulate(SimulateArgs),
    /// Check tightness of the relaxation over [0, 1]-valued tests.
    VerifyRelaxation(VerifyArgs),
    /// The cost table for c0 in {1, e, e^2, e^3} and c1 = 1.
    ReproduceTable(TableArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Scenario JSON file; defaults to N(0, 36) vs N(1.2, 36), N = 100.
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Cost of rejecting a true H0 (number, `e` or `e^k`).
    #[arg(long, value_name = "COST", allow_hyphen_values = true)]
    pub c0: Option<CostValue>,
    /// Cost of accepting a false H0.
    #[arg(long, value_name = "COST", allow_hyphen_values = true)]
    pub c1: Option<CostValue>,
    /// Size of the Neyman-Pearson test.
    #[arg(long, value_name = "ALPHA", allow_hyphen_values = true)]
    pub size: Option<f64>,
    /// Write the resolved scenario as JSON.
    #[arg(long, value_name = "PATH")]
    pub emit_scenario: Option<PathBuf>,
}

impl ScenarioArgs {
    /// The scenario after command-line overrides, and where it came from.
    pub fn scenario(&self) -> Result<(Scenario, String)> {
        let (mut s, origin) = match &self.scenario {
            Some(path) => (Scenario::load(path)?, path.display().to_string()),
            None => (Scenario::builtin(), "built-in".to_string()),
        };
        if let Some(c0) = &self.c0 {
            s.costs.c0 = c0.clone();
        }
        if let Some(c1) = &self.c1 {
            s.costs.c1 = c1.clone();
        }
        if let Some(size) = self.size {
            s.np_size = Some(size);
        }
        Ok((s, origin))
    }

    pub fn resolve(&self) -> Result<(Resolved, String)> {
        let (s, origin) = self.scenario()?;
        if let Some(path) = &self.emit_scenario {
            std::fs::write(path, s.to_json()).map_err(|e| anyhow!("cannot write scenario to {}: {e}", path.display()))?;
        }
        Ok((s.resolve()?, origin))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Also write the results as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Discretize this scenario instead of drawing random instances.
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Grid `lo:hi:n` for continuous scenarios.
    #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value_t = 12)]
    pub max_atoms: usize,
    /// Random directions per instance, on top of the single-atom flips.
    #[arg(long, default_value_t = 1000)]
    pub directions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Print each cell with the mixed precision of the reference table.
    #[arg(long)]
    pub paper_rounding: bool,
}

/// Parses `lo:hi:n`.
pub fn parse_grid(text: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || anyhow!("invalid `--grid` value `{text}`: expected lo:hi:n");
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse().map_err(|_| bad())?;
    let hi = parts[1].trim().parse().map_err(|_| bad())?;
    let n = parts[2].trim().parse().map_err(|_| bad())?;
    Ok((lo, hi, n))
}
