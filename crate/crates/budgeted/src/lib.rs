//! Budget-constrained combinatorial optimization on random instances.
//!
//! Two problems, both on edge sets whose weights and costs are independent
//! draws from the power distribution F(x) = x^alpha on (0,1):
//!
//! * minimum spanning trees of `K_n` under `r` cost budgets
//!   ([`spanning_tree`]), and
//! * minimum-weight perfect matchings of `K_{n,n}` under a single cost
//!   budget ([`assignment`]).
//!
//! Both solvers maximize the concave piecewise-linear Lagrangean dual
//! `phi(lambda)`, recover the tied minimizers at the dual optimum, and then
//! convert a near-optimal candidate into a strictly budget-feasible
//! solution: trees by deleting cost-expensive edges and reconnecting the
//! forest through a cheap threshold subgraph, matchings by rotating along
//! the symmetric-difference cycle of the two breakpoint matchings and
//! completing the matching inside the cheap graph. The dual value is kept
//! as a lower-bound certificate, so every run reports how far the feasible
//! output sits above the bound.
//!
//! [`oracle`] holds exhaustive enumeration solvers used as ground truth at
//! tiny sizes, and [`harness`] runs seeded trial batches that check the
//! statistical claims at desk scale.

pub mod assignment;
pub mod harness;
pub mod instance;
pub mod oracle;
pub mod spanning_tree;
pub mod util;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// No minimizer satisfies the budgets even at astronomically large
    /// multipliers; the budget sits below the cheapest achievable cost.
    #[error("budget unconstrainable: subgradient stayed positive up to lambda = 2^60")]
    BudgetUnconstrainable,

    #[error("threshold subgraph failed to repair the tree after {escalations} psi escalations")]
    RepairFailed { escalations: u32 },

    #[error("no augmenting path in the cheap graph after {escalations} theta escalations")]
    AugmentationFailed { escalations: u32 },

    #[error("cyclic sequence is not zero-sum: |sum| = {sum:e}")]
    NotZeroSum { sum: f64 },

    #[error("exhaustive enumeration is limited to n <= {limit}, got n = {n}")]
    OracleTooLarge { n: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
