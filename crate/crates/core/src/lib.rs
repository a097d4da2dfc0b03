//! Planning of hybrid fiber/mmWave fronthaul for ultra-dense networks.
//!
//! [`scenario`] draws deployments, [`channel`] prices every AP-DU link,
//! [`optimizer`] finds the cheapest feasible technology mix, [`benchmarks`]
//! builds reference plans and [`metrics`] runs Monte-Carlo sweeps. The guide
//! in `book/` walks through each stage.

pub mod benchmarks;
pub mod channel;
pub mod cli;
pub mod config;
pub mod cost;
pub mod error;
pub mod instance;
pub mod io;
pub mod lp;
pub mod metrics;
pub mod optimizer;
pub mod rng;
pub mod scenario;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/cost.md")]
    mod cost {}
    #[doc = include_str!("../../../book/src/optimizer.md")]
    mod optimizer {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
