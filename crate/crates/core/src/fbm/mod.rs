//! Correlated fractional Brownian motions `(B¹, B²)` with Hurst parameters
//! `H₁, H₂ ∈ (1/2, 1)` built from correlated Brownian motions through the
//! Volterra kernel `K_H`.

mod covariance;
mod hurst;
mod kernel;
mod simulate;

pub use covariance::{cross_covariance, fbm_covariance};
pub use hurst::HurstParam;
pub use kernel::{normalization_constant, volterra_kernel, KernelTable};
pub use simulate::{
    simulate_fbm_pair, CorrelatedFbmSpec, DriverGrid, FbmPairSampler, GaussianPathPair,
    DEFAULT_CELLS_PER_UNIT,
};
