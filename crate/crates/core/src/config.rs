use std::path::PathBuf;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::analysis::{DimMethod, Resolution};
use crate::cf::Symbol;
use crate::interval::rat_to_f64;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidArgument(format!("unknown output format {other:?}"))),
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: Symbol,
    pub window: usize,
    pub r_max: u32,
    pub tol: BigRational,
    /// Worker threads; `None` lets the pool pick one per core.
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub output: OutputFormat,
    pub budget: u128,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("{what} must be positive")));
        if self.n == 0 {
            return bad("N");
        }
        if self.window == 0 {
            return bad("window");
        }
        if self.r_max == 0 {
            return bad("rmax");
        }
        if !self.tol.is_positive() {
            return bad("tol");
        }
        if self.threads == Some(0) {
            return bad("threads");
        }
        if self.budget == 0 {
            return bad("budget");
        }
        Ok(())
    }

    pub fn resolution(&self, method: DimMethod) -> Resolution {
        let mut res = Resolution::new(self.n, self.window)
            .with_r_max(self.r_max)
            .with_method(method);
        res.tol = rat_to_f64(&self.tol);
        res.state_budget = self.budget;
        res
    }
}
