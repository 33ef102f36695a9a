use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "chainforge", version, about = "Exact weighted chains: OPS construction, cospectrality, state transfer, PTE")]
pub struct Cli {
    /// Worker threads for scans and searches (overrides CHAINFORGE_WORKERS).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write a run manifest (inputs, options, output digests) to this file.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a chain whose p_m and p_{d+1} are the given polynomials.
    Build(BuildArgs),
    /// Spectral data of a chain.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Cospectral vertex pairs.
    #[command(subcommand)]
    Cospec(CospecCmd),
    /// Perfect state transfer.
    #[command(subcommand)]
    Pst(PstCmd),
    /// Prouhet-Tarry-Escott solutions.
    #[command(subcommand)]
    Pte(PteCmd),
    /// Rebuild the published examples and check them.
    #[command(subcommand)]
    Repro(ReproCmd),
    /// CSV table of |<m|exp(itJ)|l>|^2 over a time grid.
    Fidelity(FidelityArgs),
}

/// A chain from a JSON file, from explicit lists, or the unweighted path.
#[derive(Args, Debug, Clone)]
pub struct ChainInput {
    /// JSON document {"a": [...], "lambda_sq": [...]}, rationals as strings.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Diagonal entries, comma separated (e.g. "0,1/2,-1").
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Squared couplings, comma separated.
    #[arg(long = "lambda-sq", allow_hyphen_values = true)]
    pub lambda_sq: Option<String>,
    /// The unweighted path on this many vertices.
    #[arg(long)]
    pub path: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// q_m as lowest-first coefficients ("-5/2,0,1") or "roots:r1,r2,...".
    #[arg(long, allow_hyphen_values = true)]
    pub qm: Option<String>,
    /// q_{d+1}, same format.
    #[arg(long, allow_hyphen_values = true)]
    pub qtop: Option<String>,
    /// JSON document {"q_m": ..., "q_top": ...} instead of the flags.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// One value per empty interval, from the top of the spectrum down.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Weights on the common zeros.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Override for the scale of the non-common weights.
    #[arg(long)]
    pub lambda_cap: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ChainCmd {
    /// Eigenvalues (exact where rational) and unit eigenvectors.
    Eigen(ChainInput),
    /// The orthogonal polynomials p_0..p_{d+1}.
    Ops(ChainInput),
    /// The rational function of a vertex.
    Alpha {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        vertex: usize,
    },
    /// Transition amplitude <m|exp(itJ)|l>.
    Amplitude {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Exact,
    Numeric,
    Auto,
}

#[derive(Subcommand, Debug)]
pub enum CospecCmd {
    /// Certify that l and m are cospectral.
    Check {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
    },
    /// Construct a d-chain with l and m cospectral.
    Construct {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
    },
    /// Extend a chain with cospectral (l, m) k times on both ends.
    Extend {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum PstCmd {
    /// Certify perfect state transfer between l and m.
    Check {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        /// Grid size of the numeric time search used for irrational spectra.
        #[arg(long, default_value_t = 4000)]
        steps: usize,
    },
    /// Chain with the given integer spectrum and transfer between 0 and m.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        spectrum: String,
        #[arg(long)]
        m: usize,
    },
    /// Drop eigenvalues down to d_target and rebuild.
    Shrink {
        #[arg(long, allow_hyphen_values = true)]
        spectrum: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d_target: usize,
    },
    /// Search integer spectra for transfer between 0 and ceil((d+1)/2).
    Scan {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        bound: u32,
    },
}

/// A PTE pair from a JSON file or from two lists.
#[derive(Args, Debug, Clone)]
pub struct PteInput {
    /// JSON document {"E": [...], "F": [...]}.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClassArg {
    Any,
    Pte1,
    Pte0,
}

#[derive(Subcommand, Debug)]
pub enum PteCmd {
    /// Verify and classify a solution.
    Verify(PteInput),
    /// Exhaustive search in a window.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, allow_hyphen_values = true)]
        hi: i64,
        #[arg(long, value_enum, default_value = "any")]
        class: ClassArg,
        /// Lift the n <= 5, hi - lo <= 16 limits.
        #[arg(long)]
        force: bool,
    },
    /// Chain with 0 and n periodic and cospectral.
    ToChain {
        #[command(flatten)]
        input: PteInput,
        /// Use the even-length route even for a repeat-free solution.
        #[arg(long)]
        even: bool,
    },
    /// Chain with perfect state transfer from a solution with one odd element per set.
    ToPstChain(PteInput),
    /// Read a solution off a chain.
    FromChain {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum ReproCmd {
    /// The 3-chain with transfer between 0 and 2.
    #[command(name = "example-6-1")]
    Example61,
    /// The 7-chain with transfer between 0 and 5.
    #[command(name = "sec-6-1-seven-chain")]
    SevenChain,
    /// The 6-chain obtained by shrinking the 7-chain.
    #[command(name = "sec-6-1-six-chain")]
    SixChain,
    /// The two five-term solutions.
    #[command(name = "pte5-list")]
    Pte5List,
}

#[derive(Args, Debug)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub input: ChainInput,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}
