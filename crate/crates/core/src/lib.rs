//! Simulation and analysis toolkit for serverless peer-to-peer
//! applications: instances that discover each other, organize into
//! address-local neighborhoods, and keep scoped attributes consistent
//! without a central server.

pub mod discovery;
pub mod queueing;
pub mod scenario;
pub mod simcore;
pub mod sync;
pub mod timing;
pub mod topology;

/// Seed used when none is given, so default runs are reproducible.
pub const DEFAULT_SEED: u64 = 0x5EED;

// Compiles and runs every snippet in the guide under `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
    #[doc = include_str!("../../../book/src/timing.md")]
    mod timing {}
    #[doc = include_str!("../../../book/src/queueing.md")]
    mod queueing {}
    #[doc = include_str!("../../../book/src/neighborhoods.md")]
    mod neighborhoods {}
    #[doc = include_str!("../../../book/src/synchronization.md")]
    mod synchronization {}
    #[doc = include_str!("../../../book/src/discovery.md")]
    mod discovery {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
