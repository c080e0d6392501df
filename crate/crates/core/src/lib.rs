//! Gibbs-posterior inference on the Lévy density of a Lévy process observed
//! at high frequency.
//!
//! The pipeline: simulate increments ([`process`]), project them onto a sieve
//! basis ([`basis`], [`estimator`]), and sample the conjugate Gibbs posterior
//! with a prior on the basis size ([`posterior`]). [`harness`] runs the
//! variance-gamma study end to end.

pub mod basis;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod io;
pub mod posterior;
pub mod process;
pub mod quadrature;
pub mod rng;
pub mod summation;

pub use basis::{project_density, BasisFamily, BasisFeatures, BasisSystem, Window};
pub use error::{LevyError, Result};
pub use estimator::{
    empirical_coefficients, empirical_risk, l2_error_on, population_risk, CoefficientRole,
    CoefficientVector, L2Reference, RiskValue,
};
pub use harness::{run_regime, ExperimentReport, RegimeSpec, StudyOptions};
pub use posterior::{
    conditional_posterior, credible_band, marginal_k, posterior_mean_function, sample_posterior,
    validate_config, BandMetric, ConditionalPosterior, GibbsConfig, MarginalK, PosteriorDraws,
};
pub use process::{
    simulate_compound_poisson, simulate_vg, true_density_vg, true_density_vg_with,
    CompoundPoissonParams, ExponentSign, IncrementSeries, IncrementSource, JumpLaw, SamplingScheme,
    TrueLevyDensity, VarianceGammaParams,
};
