use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use divfree_core::sample::DEFAULT_SEED;

/// Exact computations in generalized Witt algebras and their
/// divergence-free subalgebras.
#[derive(Debug, Parser)]
#[command(name = "divfree", version)]
pub struct Cli {
    #[command(flatten)]
    pub algebra: AlgebraArgs,

    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for sampled inputs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct AlgebraArgs {
    /// Shape `L1,L2,L3`. Defaults to `0,0,n` with `n` the arity of the first
    /// `x[...]` factor in the arguments (3 if there is none).
    #[arg(long, global = true, value_name = "L1,L2,L3")]
    pub params: Option<String>,

    /// Base point, raw coordinates.
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "a,b,...")]
    pub rho: Option<String>,

    /// JSON lattice generators; the standard lattice when absent.
    #[arg(long, global = true, value_name = "FILE")]
    pub gamma_gens: Option<PathBuf>,
}

/// The second algebra of an isomorphism question; each field falls back to
/// the source algebra.
#[derive(Debug, Args, Clone, Default)]
pub struct TargetArgs {
    #[arg(long, value_name = "L1,L2,L3")]
    pub target_params: Option<String>,

    #[arg(long, allow_hyphen_values = true, value_name = "a,b,...")]
    pub target_rho: Option<String>,

    #[arg(long, value_name = "FILE")]
    pub target_gamma_gens: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lie bracket of two Witt elements.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
    },

    /// Divergence of a Witt element.
    Div {
        #[arg(allow_hyphen_values = true)]
        u: String,
    },

    /// Whether a Witt element lies in S.
    InS {
        #[arg(allow_hyphen_values = true)]
        u: String,
    },

    /// The generator `D_{p,q}(f)` for an algebra element `f`.
    Dpq {
        p: usize,
        q: usize,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },

    /// Homogeneous components of a Witt element.
    Grade {
        #[arg(allow_hyphen_values = true)]
        u: String,
    },

    /// Leading term of the degree-`alpha` component.
    Lead {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },

    /// An element of `S_alpha` with prescribed leading term.
    BuildLead {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Exponents of `t`, comma separated (empty for none).
        #[arg(long, default_value = "")]
        ivec: String,
        /// Derivation coefficients, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },

    /// The automorphism `psi` moving the base point.
    Psi {
        #[arg(allow_hyphen_values = true)]
        u: String,
        /// Shifts `alpha^(1);...;alpha^(l1)`, each comma separated.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "to_rho")]
        shifts: Option<String>,
        /// Target base point; uses the shifts `(rho - rho', 0, ..., 0)`.
        #[arg(long, allow_hyphen_values = true)]
        to_rho: Option<String>,
    },

    /// Checks a derivation handle on sampled pairs of S.
    DeriveCheck {
        /// One of inner, outer_w_rho0, character, combined, t_degree.
        #[arg(long)]
        kind: String,
        /// Element for inner, outer_w_rho0 and combined handles.
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        /// Character values on the canonical basis, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },

    /// Smallest `n` with `(ad u)^n v = 0`, up to a bound.
    Nilprobe {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },

    /// Checks a group element as an isomorphism witness.
    IsoVerify {
        #[command(flatten)]
        target: TargetArgs,
        /// JSON group element, or `identity`.
        #[arg(long, default_value = "identity")]
        witness: String,
    },

    /// Bounded search for an isomorphism witness.
    IsoSearch {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },

    /// Shape, canonical lattice and base point.
    Descriptor,

    /// Runs the acceptance suites.
    Selftest {
        /// Criterion number or law name; repeatable.
        #[arg(long)]
        only: Vec<String>,
    },
}
