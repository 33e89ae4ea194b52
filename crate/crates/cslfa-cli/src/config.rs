//! Experiment configuration: a TOML file per experiment, any key
//! overridable from the command line with `--set key=value`.

use anyhow::{anyhow, bail, Context, Result};
use cslfa::kgrid::Smoother;
use cslfa::multigrid::Depth;
use cslfa::symbols::Dimension;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BetaCurve,
    SmootherCurve,
    AmplificationProfile,
    Heatmap,
    IterationMinimum,
    HpcCurve,
    ConvfactorTable,
    InvarianceCheck,
}

impl ExperimentKind {
    pub fn subcommand(self) -> &'static str {
        match self {
            ExperimentKind::BetaCurve => "beta-min",
            ExperimentKind::SmootherCurve => "smoother",
            ExperimentKind::AmplificationProfile => "amp-profile",
            ExperimentKind::Heatmap => "heatmap",
            ExperimentKind::IterationMinimum => "iter-min",
            ExperimentKind::HpcCurve => "hpc",
            ExperimentKind::ConvfactorTable => "convfactor",
            ExperimentKind::InvarianceCheck => "invariance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelsSpec {
    Count(u32),
    Word(FullWord),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FullWord {
    Full,
}

impl LevelsSpec {
    pub fn to_depth(self) -> Depth {
        match self {
            LevelsSpec::Count(k) => Depth::Levels(k),
            LevelsSpec::Word(FullWord::Full) => Depth::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmootherKind {
    Jacobi,
    GaussSeidel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Gmres,
    Bicgstab,
}

/// Wavenumber sampling: an explicit list or a strictly negative range,
/// log- or linearly spaced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaSpec {
    Values { values: Vec<f64> },
    Range(SigmaRange),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

impl SigmaSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match self {
            SigmaSpec::Values { values } => values.clone(),
            SigmaSpec::Range(r) => {
                if r.count == 0 {
                    bail!("sigma range must have at least one sample");
                }
                if !(r.start < 0.0 && r.stop < 0.0) {
                    bail!(
                        "sigma range endpoints must be strictly negative, got [{}, {}]",
                        r.start,
                        r.stop
                    );
                }
                if r.count == 1 {
                    vec![r.start]
                } else {
                    (0..r.count)
                        .map(|i| {
                            let t = i as f64 / (r.count - 1) as f64;
                            match r.spacing {
                                Spacing::Linear => r.start + t * (r.stop - r.start),
                                Spacing::Log => {
                                    // interpolate magnitudes on a log scale
                                    let a = r.start.abs().ln();
                                    let b = r.stop.abs().ln();
                                    -((a + t * (b - a)).exp())
                                }
                            }
                        })
                        .collect()
                }
            }
        };
        if values.is_empty() {
            bail!("sigma sampling is empty");
        }
        if let Some(bad) = values.iter().find(|s| !(**s < 0.0)) {
            bail!("sigma values must be strictly negative, got {bad}");
        }
        Ok(values)
    }
}

/// Shift sampling: an explicit list, a fixed value, or a step grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Fixed(f64),
    Values { values: Vec<f64> },
    Grid(BetaGrid),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl BetaSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match self {
            BetaSpec::Fixed(v) => vec![*v],
            BetaSpec::Values { values } => values.clone(),
            BetaSpec::Grid(g) => {
                if !(g.step > 0.0) {
                    bail!("beta grid step must be positive");
                }
                let count = ((g.stop - g.start) / g.step + 1.5).floor() as usize;
                (0..count).map(|i| g.start + g.step * i as f64).collect()
            }
        };
        if values.is_empty() {
            bail!("beta sampling is empty");
        }
        if let Some(bad) = values.iter().find(|b| !(**b >= 0.0)) {
            bail!("beta values must be non-negative, got {bad}");
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    One(u32),
    Many(Vec<u32>),
}

impl Default for MuSpec {
    fn default() -> Self {
        MuSpec::One(1)
    }
}

impl MuSpec {
    pub fn values(&self) -> Result<Vec<u32>> {
        let v = match self {
            MuSpec::One(m) => vec![*m],
            MuSpec::Many(ms) => ms.clone(),
        };
        if v.is_empty() || v.contains(&0) {
            bail!("mu must contain at least one positive cycle count");
        }
        Ok(v)
    }
}

fn default_nu1() -> u32 {
    1
}

fn default_omega() -> f64 {
    2.0 / 3.0
}

fn default_smoother() -> SmootherKind {
    SmootherKind::Jacobi
}

fn default_method() -> MethodKind {
    MethodKind::Gmres
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_seed() -> u64 {
    1
}

fn default_iterations() -> u32 {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    /// Free-form description of what the run reproduces.
    #[serde(default)]
    pub comment: String,
    pub dimension: u32,
    pub n: u32,
    pub levels: LevelsSpec,
    #[serde(default = "default_nu1")]
    pub nu1: u32,
    #[serde(default)]
    pub nu2: u32,
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default = "default_smoother")]
    pub smoother: SmootherKind,
    #[serde(default)]
    pub sigma: Option<SigmaSpec>,
    #[serde(default)]
    pub beta: Option<BetaSpec>,
    #[serde(default)]
    pub mu: MuSpec,
    #[serde(default = "default_method")]
    pub method: MethodKind,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub max_iterations: Option<usize>,
    /// Power-iteration length for measured convergence factors.
    #[serde(default = "default_iterations")]
    pub iterations: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn dimension(&self) -> Result<Dimension> {
        match self.dimension {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            d => bail!("dimension must be 1 or 2, got {d}"),
        }
    }

    pub fn smoother(&self) -> Smoother {
        match self.smoother {
            SmootherKind::Jacobi => Smoother::Jacobi { omega: self.omega },
            SmootherKind::GaussSeidel => Smoother::GaussSeidel,
        }
    }

    /// Structural validation beyond what serde enforces; returns the full
    /// list of violations.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.dimension == 1 || self.dimension == 2) {
            out.push(format!("dimension must be 1 or 2, got {}", self.dimension));
        }
        if !self.n.is_power_of_two() {
            out.push(format!("n must be a power of two, got {}", self.n));
        }
        if self.nu1 + self.nu2 == 0 {
            out.push("nu1 + nu2 must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.omega) {
            out.push(format!("omega must lie in [0, 1], got {}", self.omega));
        }
        if self.smoother == SmootherKind::GaussSeidel && self.dimension == 2 {
            out.push("gauss-seidel smoothing is one-dimensional only".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            out.push(format!("tolerance must lie in (0, 1), got {}", self.tolerance));
        }
        if let Some(sigma) = &self.sigma {
            if let Err(e) = sigma.values() {
                out.push(e.to_string());
            }
        }
        if let Some(beta) = &self.beta {
            if let Err(e) = beta.values() {
                out.push(e.to_string());
            }
        }
        if let Err(e) = self.mu.values() {
            out.push(e.to_string());
        }
        if self.sigma.is_none() {
            out.push("this experiment kind needs a sigma sampling".into());
        }
        match self.kind {
            ExperimentKind::AmplificationProfile | ExperimentKind::ConvfactorTable => {
                if self.beta.is_none() {
                    out.push(format!(
                        "kind {} needs a beta sampling",
                        self.kind.subcommand()
                    ));
                }
            }
            _ => {}
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            bail!("invalid config:\n  - {}", violations.join("\n  - "))
        }
    }
}

/// Load a TOML config and apply `--set key=value` overrides before
/// deserializing. Override values are parsed as TOML (numbers, booleans,
/// arrays) and fall back to strings.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<(RunConfig, String)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let mut table: toml::Table = text
        .parse()
        .with_context(|| format!("config {} is not valid TOML", path.display()))?;
    for entry in overrides {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("override '{entry}' is not of the form key=value"))?;
        apply_override(&mut table, key.trim(), parse_override_value(value.trim()))?;
    }
    let canonical = toml::to_string(&table).context("cannot re-serialize config")?;
    // Deserialize from the canonical text: the document deserializer
    // enforces deny_unknown_fields, which the Table path does not.
    let config: RunConfig =
        toml::from_str(&canonical).context("config does not match the expected schema")?;
    Ok((config, canonical))
}

/// Parse an override value as TOML (number, boolean, array, quoted
/// string); bare words fall back to strings.
fn parse_override_value(value: &str) -> toml::Value {
    let wrapped = format!("v = {value}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("wrapper key"),
        Err(_) => toml::Value::String(value.to_string()),
    }
}

fn apply_override(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    match key.split_once('.') {
        None => {
            table.insert(key.to_string(), value);
        }
        Some((head, rest)) => {
            let entry = table
                .entry(head.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            match entry.as_table_mut() {
                Some(t) => apply_override(t, rest, value)?,
                None => bail!("cannot descend into non-table key '{head}'"),
            }
        }
    }
    Ok(())
}
