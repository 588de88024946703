//! Simulation of correlated fractional Brownian motions with distinct Hurst
//! parameters, lead-lag models built on them, non-synchronous observation
//! schemes, and lead-lag estimation by maximizing the shifted
//! Hayashi-Yoshida correlation contrast over a grid.
//!
//! The pipeline is
//!
//! 1. [`fbm`]: Volterra-kernel simulation of the driving pair `(B¹, B²)`,
//!    plus the covariance functions used to validate it.
//! 2. [`model`]: latent processes `X¹_t = X¹_0 + σ₁B¹_{t+θ} + A¹_t` and
//!    `X²_t = X²_0 + σ₂B²_t + A²_t` (mirrored for negative `θ`).
//! 3. [`sampling`]: observation times, packaging into an
//!    [`sampling::ObservationSet`], sampling diagnostics and estimator grids.
//! 4. [`estimator`]: the contrast curve and its largest `|U|` argmax.
//! 5. [`experiment`]: seeded Monte Carlo replication across `(ρ, n)` cells.
//!
//! ```
//! use fraclead::model::LatentSimulator;
//! use fraclead::sampling::{GridVariant, SamplingScheme};
//! use fraclead::{build_grid, estimate_leadlag, generate_times, observe, HurstParam, LeadLagModel};
//!
//! let model = LeadLagModel::pure_fbm(HurstParam::new(0.6)?, HurstParam::new(0.7)?, 0.75, 0.02, 1.0, 1.0)?;
//! let sim = LatentSimulator::new(model)?;
//! let scheme = SamplingScheme::poisson(500.0, 2.0);
//! let latent = sim.simulate(&generate_times(&scheme, 1)?, &generate_times(&scheme, 2)?, 3)?;
//! let obs = observe(&latent, 1.0, 1.0)?;
//! let grid = build_grid(&GridVariant::Affine { step: 1e-3 }, 1.0)?;
//! let est = estimate_leadlag(&obs, &grid)?;
//! assert!((est.theta_hat - 0.02).abs() < 0.01);
//! # Ok::<(), fraclead::Error>(())
//! ```

// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimator;
pub mod experiment;
pub mod fbm;
pub mod io;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
pub use estimator::{
    contrast_curve, contrast_curve_with, estimate_leadlag, estimate_leadlag_with, hy_contrast,
    hy_contrast_with, ContrastCurve, ContrastOptions, EstimateResult,
};
pub use experiment::{run_experiment, summarize, ExperimentConfig, ExperimentReport, Summary};
pub use fbm::{
    cross_covariance, fbm_covariance, normalization_constant, simulate_fbm_pair, volterra_kernel,
    CorrelatedFbmSpec, DriverGrid, FbmPairSampler, GaussianPathPair, HurstParam,
};
pub use model::{simulate_latent_pair, simulate_sde_euler, DriftSpec, LatentPair, LeadLagModel};
pub use sampling::{
    build_grid, diagnostics, generate_times, observe, Diagnostics, GridSpec, GridVariant,
    ObservationSet, SamplingScheme,
};
