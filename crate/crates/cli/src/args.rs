use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ncgauss", version, about = "Exact cumulant, Wick and characterization computations with JSON output")]
pub struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Set partitions and their lattices.
    #[command(subcommand)]
    Partitions(PartitionsCmd),
    /// Moment-cumulant transforms.
    #[command(subcommand)]
    Cumulants(CumulantsCmd),
    /// Moment of a word in a Gaussian family.
    Wick(WickArgs),
    /// Exact finite-N central limit moments.
    Clt(CltArgs),
    /// Quadratic and linear forms.
    #[command(subcommand)]
    Qform(QformCmd),
    /// Characterization checks; exit code 1 when the check fails.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Matrix predicates.
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Lists every subcommand with the library operation behind it.
    Commands,
}

/// Inline JSON or a file holding it.
#[derive(Args, Debug, Clone, Default)]
pub struct Payload {
    /// Inline JSON input.
    #[arg(long)]
    pub json: Option<String>,
    /// Path to a JSON cumulant spec (or the command's main JSON input).
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct MatrixInput {
    /// Path to a JSON matrix.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Inline JSON matrix.
    #[arg(long = "matrix-json")]
    pub matrix_json: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum PartitionsCmd {
    /// Enumerate a partition family in RGS-lexicographic order.
    Enum {
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Mobius function mu(p, q); q defaults to the one-block partition.
    Mobius {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: Option<String>,
    },
    /// Kernel of a comma-separated word.
    Kernel {
        #[arg(long)]
        word: String,
    },
    /// Members of a family whose join with the grouping is the top element.
    Connect {
        #[arg(long)]
        grouping: String,
        #[arg(long, default_value = "pair")]
        family: String,
    },
    /// Join of two partitions.
    Join {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Refinement order p <= q.
    Leq {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Crossing number of a pair partition.
    Crossing {
        #[arg(long)]
        p: String,
    },
    /// Number of maps into a pool of the given size with kernel exactly p.
    CountMaps {
        #[arg(long)]
        p: String,
        #[arg(long)]
        pool: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CumulantsCmd {
    /// Moments of a cumulant spec: all tuples up to --max-order, or one --word.
    ToMoments {
        #[command(flatten)]
        input: Payload,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long)]
        word: Option<String>,
        /// Print one partitioned cumulant K_p(word) instead.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Cumulants of a moment table in the calculus --family.
    FromMoments {
        #[command(flatten)]
        input: Payload,
        #[arg(long)]
        family: String,
    },
    /// Cumulant of linear forms Y = C X of independent variables.
    /// Input JSON: {"specs":[one single-label spec per column], "args":[1-based rows]}.
    LinearForm {
        #[command(flatten)]
        input: Payload,
        #[command(flatten)]
        matrix: MatrixInput,
    },
}

#[derive(Args, Debug)]
pub struct WickArgs {
    #[arg(long, default_value = "classical")]
    pub weight: String,
    /// Comma-separated labels.
    #[arg(long)]
    pub word: String,
}

#[derive(Args, Debug)]
pub struct CltArgs {
    /// Number of summands N.
    #[arg(long)]
    pub n: u64,
    /// Moment degree.
    #[arg(long)]
    pub max_order: usize,
    /// Univariate moments m1,m2,... of an i.i.d. sequence; the table is
    /// phi(p) = prod over blocks of m_|B|.
    #[arg(long)]
    pub moments: Option<String>,
    /// Inline JSON table {"1,2|3,4": "1/1", ...} over all partitions of the degree.
    #[arg(long)]
    pub json: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum QformCmd {
    /// K_n(Q) = tr(A^n) K_n(X^2) for n = 1..max-order.
    Single {
        #[command(flatten)]
        matrix: MatrixInput,
        #[arg(long, default_value = "classical")]
        weight: String,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Joint cumulant of forms; input JSON {"matrices":[...]}.
    Joint {
        #[command(flatten)]
        input: Payload,
        #[arg(long, default_value = "classical")]
        weight: String,
        #[arg(long, default_value = "1")]
        variance: String,
    },
    /// Independence data for two symmetric forms; input JSON {"a":..., "b":...}.
    Independence {
        #[command(flatten)]
        input: Payload,
        #[arg(long, default_value = "classical")]
        weight: String,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Independence data for a linear and a quadratic form.
    Lq {
        #[command(flatten)]
        matrix: MatrixInput,
        /// Coefficients b of the linear form.
        #[arg(long)]
        vector: String,
        #[arg(long, default_value = "classical")]
        weight: String,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
    /// Cumulants of sum (X_i + a_i)^2 by expansion and by decomposition.
    Shifted {
        #[arg(long)]
        vector: String,
        #[arg(long, default_value = "classical")]
        weight: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        /// Allow a calculus that does not match the weight.
        #[arg(long)]
        override_pairing: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Fixed point of sum a_i X_i under the spec's cumulants.
    Stability {
        #[command(flatten)]
        input: Payload,
        #[arg(long)]
        vector: String,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
    },
    /// Forward Maxwell check for an orthogonal matrix.
    Maxwell {
        #[command(flatten)]
        matrix: MatrixInput,
        #[arg(long, default_value = "classical")]
        weight: String,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
    },
    /// Bernstein check; --vector alpha,beta,gamma,delta and JSON {"specs":[s1,s2]}.
    Bernstein {
        #[command(flatten)]
        input: Payload,
        #[arg(long)]
        vector: String,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
    },
    /// Free Skitovich-Darmois counterexample.
    Skitovic {
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
    /// Hankel minors of the eps-deformed free moment sequence.
    Cramer {
        #[arg(long)]
        eps: Option<String>,
        /// Comma-separated eps values; reports the first with a non-positive minor.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 5)]
        hankel_size: usize,
    },
    /// Skitovich-Darmois cumulant identities; JSON {"specs":[...]}.
    SdIdentity {
        #[command(flatten)]
        input: Payload,
        #[arg(long)]
        vector: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
    },
    /// Sample mean against sample variation.
    Lukacs {
        /// Number of variables.
        #[arg(long)]
        n: usize,
        /// Gaussian weight; otherwise a single-label spec is read.
        #[arg(long)]
        weight: Option<String>,
        #[command(flatten)]
        input: Payload,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MatrixCmd {
    Orthogonal {
        #[command(flatten)]
        matrix: MatrixInput,
    },
    Irreducible {
        #[command(flatten)]
        matrix: MatrixInput,
    },
}
