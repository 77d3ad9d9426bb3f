//! Rescaled dualities verified by Monte Carlo: exact Gillespie jump chains,
//! the Euler-Maruyama diffusion limit, and the convergence experiments.

pub mod experiments;
pub mod gillespie;
pub mod sde;

pub use experiments::{
    mc_moment_duality, monotone_limit_check, rescaling_csv, rescaling_experiment,
    MomentDualityConfig, MonotoneLimitConfig, RateSchedule, RescalingConfig, RescalingReport,
    RescalingRow,
};
pub use gillespie::{
    simulate_annihilating_count_chain, simulate_ba_dual, simulate_count_chain,
    simulate_count_chain_path, simulate_kingman_block, BranchingAnnihilatingSpec, CountChainSpec,
};
pub use sde::{simulate_wf_sde, SdePath, SdeSpec};
