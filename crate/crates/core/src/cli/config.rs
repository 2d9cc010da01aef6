//! Command-line flags, the optional TOML file, and their merge.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "hasts", version, about = "Hierarchical analysis-suitable T-splines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check validity and analysis-suitability of a T-mesh.
    Validate,
    /// Write the Bezier extraction of a mesh or hierarchy.
    Extract,
    /// Refine a hierarchy by element indices, or uniformly.
    Refine,
    /// Run the adaptive solver on a benchmark problem.
    Solve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Skew45,
    Manufactured,
    None,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with any of the options below; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// T-mesh or hierarchy file. Without it a mesh is generated.
    #[arg(long, global = true)]
    pub mesh: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<usize>,
    #[arg(long, global = true)]
    pub q: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long = "max-levels", global = true)]
    pub max_levels: Option<usize>,
    #[arg(long, value_enum, global = true)]
    pub benchmark: Option<Benchmark>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Knot spans per direction of a generated start mesh.
    #[arg(long, global = true)]
    pub spans: Option<usize>,
    /// Maximum number of solves.
    #[arg(long, global = true)]
    pub iterations: Option<usize>,
    /// Points per direction of the sampled solution field.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Element indices to refine, comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    pub mark: Option<Vec<usize>>,
    /// Refine every element.
    #[arg(long, global = true)]
    pub uniform: bool,
}

/// Same keys as the flags, with `-` spelled `_`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mesh: Option<PathBuf>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub tol: Option<f64>,
    pub beta: Option<f64>,
    pub max_levels: Option<usize>,
    pub benchmark: Option<Benchmark>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub spans: Option<usize>,
    pub iterations: Option<usize>,
    pub grid: Option<usize>,
    pub mark: Option<Vec<usize>>,
    pub uniform: Option<bool>,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub mesh: Option<PathBuf>,
    /// Degrees requested on the command line; checked against the mesh.
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub tol: f64,
    pub beta: Option<f64>,
    pub max_levels: usize,
    pub benchmark: Benchmark,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub spans: Option<usize>,
    pub iterations: usize,
    pub grid: usize,
    pub mark: Vec<usize>,
    pub uniform: bool,
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => FileConfig::read(path)?,
            None => FileConfig::default(),
        };
        let cfg = RunConfig {
            command,
            mesh: flags.mesh.or(file.mesh),
            p: flags.p.or(file.p),
            q: flags.q.or(file.q),
            tol: flags.tol.or(file.tol).unwrap_or(1e-3),
            beta: flags.beta.or(file.beta),
            max_levels: flags.max_levels.or(file.max_levels).unwrap_or(crate::hierarchy::DEFAULT_MAX_LEVELS),
            benchmark: flags.benchmark.or(file.benchmark).unwrap_or(Benchmark::Skew45),
            out: flags.out.or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            spans: flags.spans.or(file.spans),
            iterations: flags.iterations.or(file.iterations).unwrap_or(5),
            grid: flags.grid.or(file.grid).unwrap_or(101),
            mark: flags.mark.or(file.mark).unwrap_or_default(),
            uniform: flags.uniform || file.uniform.unwrap_or(false),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if let Some(b) = self.beta {
            if !(b > 0.0) {
                return bad(format!("beta must be positive, got {b}"));
            }
        }
        if !(1..=16).contains(&self.max_levels) {
            return bad(format!("max-levels must lie in 1..=16, got {}", self.max_levels));
        }
        if self.p == Some(0) || self.q == Some(0) {
            return bad("degrees must be at least 1".into());
        }
        if self.spans == Some(0) || self.iterations == 0 || self.grid < 2 {
            return bad("spans and iterations must be positive and grid at least 2".into());
        }
        Ok(())
    }
}
