//! Jet spaces, vector fields and their prolongations, point transformations and
//! invariance checks, with the built-in catalog of algebras, invariants and systems.

pub mod catalog;
pub mod error;
pub mod invariance;
pub mod jetspace;
pub mod liefield;
pub mod pointtransform;
pub mod verdict;

pub use error::CoreError;
pub use invariance::{
    conditional_invariance, functional_rank, invariance_on_locus, manifold_invariance, orbit_rank, rank_balance, solve_linear,
    strict_invariance, CheckOutcome, PdeSystem, RankReport,
};
pub use jetspace::{JetSpace, MultiIndex};
pub use liefield::{jacobi_failures, verify_table, CommutatorTable, PairStatus, ProlongedField, TableReport, VectorField};
pub use pointtransform::PointTransformation;
pub use verdict::{check_seed, Verdict};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20100901;
