//! Batch experiment driver. Every command is a pure function of its
//! [`RunConfig`]: the same configuration and seed produce the same bytes.

mod commands;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use expander_core::algebra::AlgebraError;
use expander_core::archimedean::ArchimedeanError;
use expander_core::groups::GroupError;
use expander_core::growth::GrowthError;
use expander_core::spectral::SpectralError;
use expander_core::walks::WalkError;

pub use commands::{run, Command};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything a command reads. Unset fields fall back to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Coefficients of the monic defining polynomial, constant term first.
    pub f: Option<Vec<i64>>,
    /// Moduli: a comma list whose items are integers or `a..b` (the primes in `[a, b]`).
    pub q: Option<String>,
    /// Generator file; the default set is the two elementary unipotents.
    pub gens: Option<PathBuf>,
    pub k: Option<usize>,
    pub lmax: Option<usize>,
    pub method: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    /// Subgroup for `escape`: center, borel, split-torus, nonsplit-torus,
    /// torus-normalizer or nonsplit-torus-normalizer.
    pub subgroup: Option<String>,
    /// Flattening exponent: the target is `|G|^{-1/2+ε}`.
    pub epsilon: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// `self` overridden field by field by whatever `flags` sets.
    pub fn merged(self, flags: RunConfig) -> Self {
        Self {
            f: flags.f.or(self.f),
            q: flags.q.or(self.q),
            gens: flags.gens.or(self.gens),
            k: flags.k.or(self.k),
            lmax: flags.lmax.or(self.lmax),
            method: flags.method.or(self.method),
            seed: flags.seed.or(self.seed),
            out: flags.out.or(self.out),
            format: flags.format.or(self.format),
            subgroup: flags.subgroup.or(self.subgroup),
            epsilon: flags.epsilon.or(self.epsilon),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Archimedean(#[from] ArchimedeanError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Exit status of a completed command; errors map to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    HypothesisNotMet,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::HypothesisNotMet => 2,
        }
    }
}

/// A rendered report and its exit status.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: String,
    pub outcome: Outcome,
    /// One human-readable line for stderr.
    pub summary: String,
}
