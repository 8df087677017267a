//! Report types and their JSON, CSV and table renderings.

use std::io::Write;

use gmqd_core::{GammaDiscordResult, OptimizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDescriptor {
    File { path: String },
    Family { spec: String },
}

impl std::fmt::Display for InputDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputDescriptor::File { path } => write!(f, "file {path}"),
            InputDescriptor::Family { spec } => write!(f, "family {spec}"),
        }
    }
}

/// Optimizer settings as used for the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub restarts: usize,
    pub restarts_large: usize,
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub initial_step: f64,
}

impl From<&OptimizerConfig> for ConfigEcho {
    fn from(c: &OptimizerConfig) -> Self {
        ConfigEcho {
            seed: c.master_seed,
            restarts: c.restarts,
            restarts_large: c.restarts_large,
            max_iterations: c.max_iterations,
            objective_tolerance: c.objective_tolerance,
            initial_step: c.initial_step,
        }
    }
}

impl From<&ConfigEcho> for OptimizerConfig {
    fn from(c: &ConfigEcho) -> Self {
        OptimizerConfig {
            restarts: c.restarts,
            restarts_large: c.restarts_large,
            max_iterations: c.max_iterations,
            objective_tolerance: c.objective_tolerance,
            initial_step: c.initial_step,
            master_seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub partition: String,
    pub value: f64,
    /// Objective at the returned angles before clipping at zero.
    pub raw_value: f64,
    pub restart_spread: f64,
    pub best_restart: usize,
    pub evaluations: usize,
    /// Chart angles of the optimal basis, `(θ, φ)` per rotation.
    pub angles: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl PartitionResult {
    pub fn new(r: &GammaDiscordResult, wall_time_s: Option<f64>) -> Self {
        PartitionResult {
            partition: r.gamma.label(),
            value: r.value,
            raw_value: r.raw_value,
            restart_spread: r.restart_spread(),
            best_restart: r.best_restart,
            evaluations: r.evaluations,
            angles: r.best_params.angles().to_vec(),
            wall_time_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Genuine {
    pub value: f64,
    pub argmin: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: InputDescriptor,
    pub dims: Vec<usize>,
    pub config: ConfigEcho,
    pub partitions: Vec<PartitionResult>,
    /// Present when every partition was evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genuine: Option<Genuine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub partition: String,
    pub disturbance: f64,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub input: InputDescriptor,
    pub dims: Vec<usize>,
    pub config: ConfigEcho,
    pub tolerance: f64,
    pub classical: bool,
    pub genuine: Genuine,
    pub witness: Option<WitnessReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub discord: Vec<f64>,
    pub genuine: f64,
    pub argmin: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub parameter: String,
    pub partitions: Vec<String>,
    pub config: ConfigEcho,
    pub rows: Vec<SweepRow>,
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn config_line(c: &ConfigEcho) -> String {
    format!(
        "seed={} restarts={} restarts_large={} max_iters={} tol={:e}",
        c.seed, c.restarts, c.restarts_large, c.max_iterations, c.objective_tolerance
    )
}

impl RunReport {
    pub fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        let timed = self.partitions.iter().any(|p| p.wall_time_s.is_some());
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![
            "partition",
            "value",
            "raw_value",
            "restart_spread",
            "best_restart",
            "evaluations",
        ];
        if timed {
            header.push("wall_time_s");
        }
        w.write_record(&header)?;
        for p in &self.partitions {
            let mut row = vec![
                p.partition.clone(),
                p.value.to_string(),
                p.raw_value.to_string(),
                p.restart_spread.to_string(),
                p.best_restart.to_string(),
                p.evaluations.to_string(),
            ];
            if timed {
                row.push(p.wall_time_s.map(|t| t.to_string()).unwrap_or_default());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_table(&self, out: &mut dyn Write) -> CliResult<()> {
        writeln!(out, "input:  {}", self.input)?;
        writeln!(out, "config: {}", config_line(&self.config))?;
        let width = self
            .partitions
            .iter()
            .map(|p| p.partition.len())
            .max()
            .unwrap_or(0)
            .max(9);
        write!(
            out,
            "{:<width$}  {:>12}  {:>10}",
            "partition", "discord", "spread"
        )?;
        let timed = self.partitions.iter().any(|p| p.wall_time_s.is_some());
        if timed {
            write!(out, "  {:>9}", "time [s]")?;
        }
        writeln!(out)?;
        for p in &self.partitions {
            write!(
                out,
                "{:<width$}  {:>12.9}  {:>10.2e}",
                p.partition, p.value, p.restart_spread
            )?;
            if let Some(t) = p.wall_time_s {
                write!(out, "  {t:>9.3}")?;
            }
            writeln!(out)?;
        }
        if let Some(g) = &self.genuine {
            writeln!(out, "genuine discord: {:.9} (argmin {})", g.value, g.argmin)?;
        }
        Ok(())
    }
}

impl ClassifyReport {
    pub fn write_table(&self, out: &mut dyn Write) -> CliResult<()> {
        writeln!(out, "input:   {}", self.input)?;
        writeln!(out, "config:  {}", config_line(&self.config))?;
        let verdict = if self.classical {
            "classical"
        } else {
            "nonclassical"
        };
        writeln!(out, "verdict: {verdict}")?;
        writeln!(
            out,
            "genuine discord: {:.9} (argmin {}, tolerance {:e})",
            self.genuine.value, self.genuine.argmin, self.tolerance
        )?;
        if let Some(w) = &self.witness {
            let angles: Vec<String> = w.angles.iter().map(|a| format!("{a:.6}")).collect();
            writeln!(out, "witness partition: {}", w.partition)?;
            writeln!(out, "witness disturbance: {:.3e}", w.disturbance)?;
            writeln!(out, "witness angles: [{}]", angles.join(", "))?;
        }
        Ok(())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["classical", "genuine", "argmin", "witness", "disturbance"])?;
        let (part, dist) = match &self.witness {
            Some(wi) => (wi.partition.clone(), wi.disturbance.to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([
            self.classical.to_string(),
            self.genuine.value.to_string(),
            self.genuine.argmin.clone(),
            part,
            dist,
        ])?;
        w.flush()?;
        Ok(())
    }
}

impl SweepReport {
    /// Header `<param>,D_<label>...,genuine,argmin`.
    pub fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![self.parameter.clone()];
        header.extend(self.partitions.iter().map(|l| format!("D_{l}")));
        header.push("genuine".into());
        header.push("argmin".into());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.value.to_string()];
            rec.extend(row.discord.iter().map(|v| v.to_string()));
            rec.push(row.genuine.to_string());
            rec.push(row.argmin.clone());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_table(&self, out: &mut dyn Write) -> CliResult<()> {
        writeln!(out, "family: {}", self.family)?;
        writeln!(out, "config: {}", config_line(&self.config))?;
        write!(out, "{:>10}", self.parameter)?;
        for l in &self.partitions {
            write!(out, "  {:>12}", format!("D_{l}"))?;
        }
        writeln!(out, "  {:>12}  argmin", "genuine")?;
        for row in &self.rows {
            write!(out, "{:>10.6}", row.value)?;
            for v in &row.discord {
                write!(out, "  {v:>12.9}")?;
            }
            writeln!(out, "  {:>12.9}  {}", row.genuine, row.argmin)?;
        }
        Ok(())
    }
}
