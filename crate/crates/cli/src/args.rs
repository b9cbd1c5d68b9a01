//! Command-line argument surface and the run-configuration/report types the
//! commands share.

use circuit_forge_core::report::{ReportFormat, Row};
use circuit_forge_core::types::{Alpha, OracleCaps};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "circuit-forge",
    about = "Circuit, cycle, cut and lattice-vector enumeration over binary matroids and decomposition trees",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Base seed; trial i derives seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Multiplicative factor, an exact rational like `2` or `3/2`.
    #[arg(long, global = true, default_value = "1")]
    pub alpha: Alpha,

    /// Promised lower bound: no circuit of size (or weight) at most r.
    #[arg(long, global = true)]
    pub r: Option<u64>,

    /// Output format for data rows on stdout.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    /// Trials for statistical commands.
    #[arg(long, global = true, default_value_t = 1)]
    pub trials: u64,

    /// Cross-check mode; `oracle` re-verifies against brute force.
    #[arg(long, global = true)]
    pub verify: Option<String>,

    /// Enumeration caps as `m=24,n=16,tu=8` (any subset of keys).
    #[arg(long, global = true)]
    pub caps: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Jsonl => ReportFormat::Jsonl,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate circuits of a matroid given as a matrix, graph or tree.
    Circuits {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        udt: Option<PathBuf>,
        /// Keep only circuits with at most this many elements.
        #[arg(long)]
        max_size: Option<u64>,
        /// Labels that every circuit must contain (comma separated).
        #[arg(long, value_delimiter = ',')]
        required: Vec<u32>,
        /// Labels that no circuit may contain (comma separated).
        #[arg(long, value_delimiter = ',')]
        forbidden: Vec<u32>,
    },

    /// Enumerate weight-capped simple cycles of a graph by path search.
    Cycles {
        #[arg(long)]
        graph: PathBuf,
        /// Required edge labels (comma separated).
        #[arg(long, value_delimiter = ',')]
        r_labels: Vec<u32>,
        /// Total weight cap.
        #[arg(long)]
        cap: Option<u64>,
    },

    /// Enumerate weight-capped minimal cut-sets of a graph.
    Cuts {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        r_labels: Vec<u32>,
        #[arg(long)]
        cap: Option<u64>,
    },

    /// Sample minimal cut-sets by seeded random contraction.
    Smallcut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        r_labels: Vec<u32>,
    },

    /// Enumerate near-minimum circuits of a decomposition tree and report
    /// the observed counts against the closed-form bounds.
    NearMin {
        #[arg(long)]
        udt: PathBuf,
        /// Emit the circuit rows instead of the bound report.
        #[arg(long)]
        emit_circuits: bool,
    },

    /// Totally unimodular matrix toolbox: verification, signed circuits,
    /// conformal decomposition and short-vector enumeration.
    Lattice {
        #[arg(long)]
        matrix: PathBuf,
        /// Check total unimodularity and report the verdict.
        #[arg(long)]
        check_tu: bool,
        /// Fail (exit 5) unless the matrix is totally unimodular.
        #[arg(long)]
        require_tu: bool,
        /// Enumerate the signed circuits.
        #[arg(long)]
        circuits: bool,
        /// Squared-norm cap for circuit enumeration.
        #[arg(long)]
        norm2_cap: Option<u64>,
        /// Enumerate kernel vectors of squared norm <= alpha^2 * lambda2.
        #[arg(long)]
        shortvec: bool,
        /// Promised squared length: no nonzero kernel vector this short.
        #[arg(long)]
        lambda2: Option<u64>,
        /// Decompose the given vector (comma-separated integers) into
        /// conformal circuits.
        #[arg(long)]
        decompose: Option<String>,
    },

    /// Write seeded random instance files.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        out: PathBuf,
        /// Decomposition-tree leaves.
        #[arg(long, default_value_t = 3)]
        leaves: usize,
        #[arg(long, default_value_t = 3)]
        leaf_min: usize,
        #[arg(long, default_value_t = 7)]
        leaf_max: usize,
        /// Leaf kinds to draw from (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = vec!["graphic".to_string(), "cographic".to_string()])]
        types: Vec<String>,
        /// Composed ground-set cap for generated trees.
        #[arg(long)]
        max_m: Option<usize>,
        /// Graph vertices (wgr) or matrix height (gf2m).
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Graph edges (wgr) or matrix columns (gf2m).
        #[arg(long, default_value_t = 9)]
        m: usize,
        /// Maximum edge weight for generated graphs.
        #[arg(long, default_value_t = 4)]
        max_weight: u64,
    },

    /// Sweep seeded random trees, re-verify the enumerator against the
    /// oracle and check every closed-form bound.
    VerifyBounds {
        /// Verify an existing tree file instead of generating instances.
        #[arg(long)]
        udt: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        instances: u64,
        /// Alphas to sweep (comma separated rationals).
        #[arg(long, value_delimiter = ',', default_values_t = vec!["1".to_string(), "3/2".to_string(), "2".to_string()])]
        alphas: Vec<String>,
        #[arg(long, default_value_t = 2)]
        leaves_min: usize,
        #[arg(long, default_value_t = 4)]
        leaves_max: usize,
        /// Composed ground-set cap for generated instances.
        #[arg(long, default_value_t = 20)]
        max_m: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Udt,
    Wgr,
    Gf2m,
}

/// Everything a command run depends on besides its own flags.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub alpha: Alpha,
    pub r: Option<u64>,
    pub format: ReportFormat,
    pub trials: u64,
    pub verify_oracle: bool,
    pub caps: OracleCaps,
}

impl RunConfig {
    pub fn from_global(g: &GlobalArgs) -> Result<RunConfig, String> {
        if !g.alpha.at_least_one() {
            return Err("alpha must be at least 1".into());
        }
        if g.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        let mut caps = OracleCaps::default();
        if let Some(spec) = &g.caps {
            for part in spec.split(',') {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| format!("bad caps entry {part:?}, expected key=value"))?;
                let v: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad caps value {value:?}"))?;
                match key.trim() {
                    "m" => caps.max_m = v,
                    "n" => caps.max_cut_n = v,
                    "tu" => caps.max_tu = v,
                    other => return Err(format!("unknown caps key {other:?}")),
                }
            }
        }
        let verify_oracle = match g.verify.as_deref() {
            None => false,
            Some("oracle") => true,
            Some(other) => return Err(format!("unknown verify mode {other:?}")),
        };
        Ok(RunConfig {
            seed: g.seed,
            alpha: g.alpha,
            r: g.r,
            format: g.format.into(),
            trials: g.trials,
            verify_oracle,
            caps,
        })
    }
}

/// Data rows plus command metadata; rows go to stdout in the configured
/// format, the metadata to stderr.
#[derive(Clone, Debug)]
pub struct Report {
    pub rows: Vec<Row>,
    pub command: String,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn emit(&self, format: ReportFormat) {
        print!("{}", format.emit(&self.rows));
        eprintln!(
            "# {}: {} rows, elapsed {} ms",
            self.command,
            self.rows.len(),
            self.elapsed_ms
        );
    }
}
