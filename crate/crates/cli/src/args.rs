use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// σ_t of a word product as a polynomial
    Sigma,
    /// Trace of a word product and its canonical class
    Trace,
    /// Minimal generators up to --maxdeg
    Mingens,
    /// Check that the standard generating set generates up to --maxdeg
    Generation,
    /// Verify a homogeneous system of parameters
    Hsp,
    /// Replay the nullcone certificates
    Certificate,
    /// Build a canonical matrix from --blocks
    Canon,
    /// Evaluate σ_t of a word at the matrices in --matrices
    Eval,
    /// Run the identity suite
    Identities,
    /// Run every acceptance criterion
    Report,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Sigma => "sigma",
            Verb::Trace => "trace",
            Verb::Mingens => "mingens",
            Verb::Generation => "generation",
            Verb::Hsp => "hsp",
            Verb::Certificate => "certificate",
            Verb::Canon => "canon",
            Verb::Eval => "eval",
            Verb::Identities => "identities",
            Verb::Report => "report",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    A,
    B,
    C,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Modular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Exact O(n)-invariants of tuples of skew-symmetric matrices.
#[derive(Debug, Parser)]
#[command(name = "skewinv", version)]
pub struct Args {
    pub verb: Verb,

    /// Matrix size
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of matrices
    #[arg(long)]
    pub d: Option<usize>,

    /// Coefficient index of σ_t
    #[arg(long)]
    pub t: Option<usize>,

    /// Comma-separated 1-based letters, e.g. 1,2,2
    #[arg(long)]
    pub word: Option<String>,

    /// Total-degree bound
    #[arg(long, default_value_t = 8)]
    pub maxdeg: u32,

    #[arg(long = "case", value_enum, ignore_case = true)]
    pub case: Option<CaseArg>,

    /// Block list such as "K3;0:1"
    #[arg(long)]
    pub blocks: Option<String>,

    /// JSON file with the numeric matrices
    #[arg(long)]
    pub matrices: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 5)]
    pub retries: usize,

    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,

    /// Prime for the modular backend
    #[arg(long, default_value_t = 1_000_003)]
    pub prime: u64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Also write the report to this file
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// With `canon`: check σ_t = 0 for t = 1..n
    #[arg(long)]
    pub check_sigma: bool,

    /// With `report`: run every criterion
    #[arg(long)]
    pub all: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let a = Args::try_parse_from(["skewinv", "identities"]).unwrap();
        assert_eq!((a.maxdeg, a.seed, a.retries, a.prime), (8, 0, 5, 1_000_003));
        assert_eq!(a.backend, BackendArg::Exact);
        assert_eq!(a.format, Format::Json);
    }

    #[test]
    fn case_is_case_insensitive() {
        let a = Args::try_parse_from(["skewinv", "hsp", "--case", "b"]).unwrap();
        assert_eq!(a.case, Some(CaseArg::B));
        assert!(Args::try_parse_from(["skewinv", "hsp", "--case", "E"]).is_err());
    }
}
