//! Run configuration: a JSON document, then command-line overrides.

use std::path::{Path, PathBuf};

use hilbert_kernel::kernelsum::{Branch, TruncationParams};
use hilbert_kernel::numberfield::FieldSelector;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 1729;
pub const ENV_THREADS: &str = "HKERNEL_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Effective settings of one invocation. `threads` and `output` change
/// neither values nor their order, so they are not echoed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub field: FieldSelector,
    pub prec_bits: u32,
    pub truncation: TruncationParams,
    pub format: Format,
    /// significant digits of decimal output
    pub digits: usize,
    pub seed: u64,
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldSelector::Q,
            prec_bits: 256,
            truncation: TruncationParams::default(),
            format: Format::Json,
            digits: 30,
            seed: DEFAULT_SEED,
            threads: None,
            output: None,
        }
    }
}

/// Flags that override the file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// JSON configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// q, sqrt2, sqrt5, sqrt13 or sqrt17
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// working precision in bits
    #[arg(long = "prec", global = true)]
    pub prec_bits: Option<u32>,
    /// bound on |N(a)|
    #[arg(long, global = true)]
    pub amax: Option<u64>,
    /// bound on |N(c)|
    #[arg(long, global = true)]
    pub cmax: Option<u64>,
    /// unit exponents |m| ≤ munits
    #[arg(long, global = true)]
    pub munits: Option<u32>,
    /// hyperbolic cut |N(a)N(c)| ≤ pmax
    #[arg(long, global = true)]
    pub pmax: Option<u64>,
    /// relative size below which terms are skipped
    #[arg(long, global = true)]
    pub quad_target: Option<f64>,
    /// PB or AV
    #[arg(long, global = true)]
    pub branch: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// significant digits of decimal output
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    /// seed of randomized checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// worker threads
    #[arg(long, global = true, env = ENV_THREADS)]
    pub threads: Option<usize>,
    /// write to this file instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => load(p)?,
            None => RunConfig::default(),
        };
        if let Some(f) = &self.field {
            c.field = f.parse().map_err(usage)?;
        }
        let t = &mut c.truncation;
        macro_rules! set {
            ($dst:expr, $src:expr) => {
                if let Some(v) = $src {
                    $dst = v;
                }
            };
        }
        set!(c.prec_bits, self.prec_bits);
        set!(t.a_max, self.amax);
        set!(t.c_max, self.cmax);
        set!(t.m_units, self.munits);
        set!(t.quad_target, self.quad_target);
        if self.pmax.is_some() {
            t.p_max = self.pmax;
        }
        if let Some(b) = &self.branch {
            t.branch = b.parse::<Branch>().map_err(usage)?;
        }
        set!(c.format, self.format);
        set!(c.digits, self.digits);
        set!(c.seed, self.seed);
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        if self.output.is_some() {
            c.output = self.output.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.truncation.validate().map_err(usage)?;
        if !(64..=1 << 16).contains(&self.prec_bits) {
            return Err(usage(format!("precision {} bits outside [64, 65536]", self.prec_bits)));
        }
        if !(1..=1000).contains(&self.digits) {
            return Err(usage("digits must lie in [1, 1000]"));
        }
        if self.threads == Some(0) {
            return Err(usage("threads must be ≥ 1"));
        }
        Ok(())
    }
}
