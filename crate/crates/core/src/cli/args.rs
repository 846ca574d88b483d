use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "whitlocal", version, about = "Exact unramified local computations for GL(n+1) x GL(n) Rankin-Selberg integrals")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,

    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = "WHITLOCAL_JOBS")]
    pub jobs: Option<usize>,

    /// Include per-check wall-clock times (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Unramified,
    L,
    Q,
}

/// Representation inputs shared by the computing subcommands. Omitted
/// representations are fully symbolic.
#[derive(Args, Debug, Clone, Default)]
pub struct RepArgs {
    /// First representation as JSON, e.g. '{"rank":2,"satake":["a1","a2"]}'.
    #[arg(long)]
    pub rep_a: Option<String>,
    /// Second representation as JSON.
    #[arg(long)]
    pub rep_b: Option<String>,
    /// Third representation as JSON (weight at unramified places only).
    #[arg(long)]
    pub rep_c: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Rankin-Selberg L-factor of GL(n+1) x GL(n) and its expansion.
    Lfactor {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, short = 'N', default_value_t = 6)]
        order: usize,
        #[command(flatten)]
        reps: RepArgs,
    },
    /// Spherical Whittaker value at diag(w^mu), or the twisted vector with --level.
    Whittaker {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Comma-separated cocharacter, e.g. 2,1,0.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, short = 'm')]
        level: Option<u32>,
        #[arg(long, default_value = "symbolic")]
        p: String,
        /// Conductor exponent of the additive character.
        #[arg(long, default_value_t = 0)]
        psi_cond: u32,
        /// Evaluate the contragredient model through its matrix definition.
        #[arg(long)]
        contragredient: bool,
        #[arg(long)]
        rep: Option<String>,
    },
    /// Local zeta integral of GL(n+1) x GL(n) as a lattice sum.
    Zeta {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, short = 'N', default_value_t = 6)]
        order: usize,
        #[command(flatten)]
        reps: RepArgs,
    },
    /// Local weight H_v.
    Weight {
        #[arg(long, value_enum, default_value_t = Place::Unramified)]
        place: Place,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, short = 'm', default_value_t = 1)]
        level: u32,
        #[arg(long, short = 'N', default_value_t = 6)]
        order: usize,
        /// Conductor exponent of pi_v (place q).
        #[arg(long, default_value_t = 0)]
        cond: u32,
        #[arg(long, default_value = "symbolic")]
        p: String,
        /// Impose trivial central character on the first representation of
        /// the pair before reporting (place l).
        #[arg(long)]
        trivial_central: bool,
        #[command(flatten)]
        reps: RepArgs,
    },
    /// Index of K_0(w^m) in GL(n, o).
    Index {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "symbolic")]
        p: String,
        #[arg(long, short = 'm', default_value_t = 1)]
        level: u32,
        /// Also count cosets by enumeration (prime p only).
        #[arg(long)]
        bruteforce: bool,
    },
    /// Additive character sum over (m^{-m}/o)^r.
    Charsum {
        #[arg(long, default_value = "symbolic")]
        p: String,
        #[arg(long, short = 'm', default_value_t = 1)]
        level: u32,
        /// Comma-separated valuations v(h_i).
        #[arg(long, allow_hyphen_values = true)]
        valuations: String,
        /// Rank used for the printed constant p^{(n-2)m}.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        psi_cond: u32,
    },
    /// The reciprocity parameter map.
    Params {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "s", allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value = "w", allow_hyphen_values = true)]
        w: String,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Upper rank bound, overriding each suite's default.
        #[arg(long)]
        n_max: Option<usize>,
        /// Truncation order, overriding each suite's default.
        #[arg(long, short = 'N')]
        order: Option<usize>,
    },
}
