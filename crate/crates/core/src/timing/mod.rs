//! Statistical model of how long one neighborhood-wide update takes.
//!
//! The neighborhood is abstracted as a hops array: each column is a cluster
//! with `rows` hops, and the cluster leaders form the top row. Every hop
//! costs a uniform 1..=10 units. An update takes
//! `T_u = t_c + t_cl + t_c'` units.

mod model;
pub mod report;
mod stats;
mod sweep;

pub use model::{simulate_detailed, simulate_once, HopsArrayDims, TimingMode, TrialDetail, UpdateTiming};
pub use stats::{percentile, ComponentStats, BAND_HIGH, BAND_LOW};
pub use sweep::{
    factor_pairs, figure9_curve, find_optimum, monte_carlo, sweep, trial_stream, Figure9Point, Optimum, SweepRow,
};

/// Totals covered by the published timing tables.
pub const TABLE_TOTALS: [u64; 4] = [256, 512, 1024, 2048];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TimingError {
    #[error("invalid hops array {rows}x{columns}: both sides must be at least 1")]
    InvalidDims { rows: u32, columns: u32 },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("{dims} does not multiply to {total}")]
    NotAFactorization { total: u64, dims: HopsArrayDims },
    #[error("{0} hops: expected a power of two of at least 16")]
    UnsupportedTotal(u64),
    #[error("unknown timing mode {0:?}")]
    UnknownMode(String),
}
