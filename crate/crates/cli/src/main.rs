//! `pgcode`: command-line driver for building projective-geometry codes,
//! verifying weight statements on instances, and certifying blocking sets.
//!
//! Exit codes: 0 complete, 1 counterexample, 2 inconclusive (budgeted or
//! budget exhausted), 3 parameter or input error.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgcode_core::Budget;
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_COUNTEREXAMPLE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_PARAMETER: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "pgcode", version, about = "Codes of points and subspaces of PG(n,q): build, verify, certify")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Largest incidence structure (subspaces x points) to materialize.
    #[arg(long, global = true, default_value_t = Budget::default().cells)]
    pub budget_cells: u64,
    /// Exhaustive-enumeration threshold on p^dim and step cap of searches.
    #[arg(long, global = true, default_value_t = Budget::default().steps)]
    pub budget_steps: u64,
    /// Random information sets drawn by budgeted searches.
    #[arg(long, global = true, default_value_t = Budget::default().samples)]
    pub samples: u64,
    /// Incidence rows combined in the sparse search phase.
    #[arg(long, global = true, default_value_t = Budget::default().sparse_rows)]
    pub sparse_rows: usize,
    /// Message weight enumerated per information set.
    #[arg(long, global = true, default_value_t = Budget::default().info_weight)]
    pub info_weight: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(skip)]
    pub format: Format,
    /// Report file (default: standard output). For `build`, the directory
    /// receiving the matrix files.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn budget(&self) -> Budget {
        Budget {
            cells: self.budget_cells,
            steps: self.budget_steps,
            samples: self.samples,
            sparse_rows: self.sparse_rows,
            info_weight: self.info_weight,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Geo {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub h: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Code,
    Dual,
    Hull,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build C_k(n,q) and its dual; write generator files and a manifest.
    Build {
        #[command(flatten)]
        #[serde(flatten)]
        geo: Geo,
        #[arg(long)]
        k: usize,
    },
    /// Check a statement (see `list`) on one instance; `all` runs every
    /// statement that applies.
    Verify {
        id: String,
        #[command(flatten)]
        #[serde(flatten)]
        geo: Geo,
        /// Required unless the statement fixes k.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Build the Desarguesian spread of PG((n+1)h-1, p).
    Spread {
        #[command(flatten)]
        #[serde(flatten)]
        geo: Geo,
    },
    /// Certify B(U) for an hk-dimensional U, or a point set of PG(n,q).
    Blocking {
        #[command(flatten)]
        #[serde(flatten)]
        geo: Geo,
        #[arg(long)]
        k: usize,
        /// Spanning vectors of U over F_p, one per line.
        #[arg(long, conflicts_with_all = ["point_file", "random_subspace"])]
        subspace_file: Option<PathBuf>,
        /// Point set in `# pointset` format.
        #[arg(long, conflicts_with = "random_subspace")]
        point_file: Option<PathBuf>,
        /// Use a seeded random hk-dimensional U.
        #[arg(long)]
        random_subspace: bool,
        /// Residue dimensions as `lo..hi` (inclusive; default 0..n-k).
        #[arg(long)]
        dims: Option<String>,
        /// Write the certified point set here.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Weight distribution (exhaustive) or minimum weight (budgeted).
    Spectrum {
        #[command(flatten)]
        #[serde(flatten)]
        geo: Geo,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Which::Code)]
        code: Which,
    },
    /// List statement identifiers.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(w) = cli.common.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARAMETER);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code_for(&e))
        }
    }
}
