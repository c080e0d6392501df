//! The variance-gamma study: three sampling regimes, Gibbs posterior fits,
//! error tables and posterior-over-K summaries.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFeatures, BasisSystem};
use crate::error::{LevyError, Result};
use crate::estimator::{empirical_coefficients, l2_error_on, trapezoid_l2, L2Reference};
use crate::posterior::{
    concentration_probability, credible_band, marginal_k, posterior_mean_function, sample_posterior,
    validate_config, BandMetric, ConfigDiagnostics, GibbsConfig, MarginalK,
};
use crate::process::{true_density_vg_with, ExponentSign, SamplingScheme, VarianceGammaParams, VgSimulator};
use crate::rng::derive_seed;

/// `(μ, σ, ν) = (0, 3.7·10^{-1.5}, 2·10⁻³)`.
pub fn study_vg_params() -> VarianceGammaParams {
    VarianceGammaParams { mu: 0.0, sigma: 3.7 * 10f64.powf(-1.5), nu: 2e-3 }
}

/// Sampling regime `j`: `Δ = 10⁻³·2^{-3j}`, `n = ⌈0.05·Δ^{-5/3}⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub j: u32,
    pub scheme: SamplingScheme,
}

impl RegimeSpec {
    pub fn new(j: u32) -> Result<Self> {
        if !(1..=3).contains(&j) {
            return Err(LevyError::parameter(format!("regime j must be 1, 2 or 3, got {j}")));
        }
        let delta = 1e-3 * 2f64.powi(-3 * j as i32);
        Ok(RegimeSpec { j, scheme: SamplingScheme::new(delta, regime_n(delta))? })
    }

    pub fn delta(&self) -> f64 {
        self.scheme.delta
    }

    pub fn n(&self) -> usize {
        self.scheme.n
    }

    pub fn t_n(&self) -> f64 {
        self.scheme.t_n
    }
}

/// `⌈0.05·Δ^{-5/3}⌉`. A product that lands within rounding of an integer is
/// taken as that integer rather than bumped up by the ceiling.
pub fn regime_n(delta: f64) -> usize {
    let x = 0.05 * delta.powf(-5.0 / 3.0);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Which handling of the complexity index the sampling-frequency check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexityCase {
    FixedK,
    IncreasingK,
    PriorOnK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaDiagnostics {
    pub case: ComplexityCase,
    pub bound: f64,
    /// `F₁²(κ) n Δ³`.
    pub f1_term: f64,
    /// `F₂(κ) Δ`.
    pub f2_term: f64,
    pub n_delta3: f64,
    pub n_delta2: f64,
    pub n_delta_5_3: f64,
    /// `max(F₁²nΔ³, F₂Δ) <= bound`.
    pub general_pass: bool,
    /// The case-specific reduction: `nΔ³`, `nΔ²` or `nΔ^{5/3}` against `bound`.
    pub case_pass: bool,
}

/// Sampling-frequency diagnostics for features evaluated at the largest `K` in play.
pub fn delta_condition(
    features: &BasisFeatures,
    scheme: &SamplingScheme,
    case: ComplexityCase,
    bound: f64,
) -> DeltaDiagnostics {
    let n = scheme.n as f64;
    let d = scheme.delta;
    let f1_term = features.f1 * features.f1 * n * d.powi(3);
    let f2_term = features.f2 * d;
    let n_delta3 = n * d.powi(3);
    let n_delta2 = n * d * d;
    let n_delta_5_3 = n * d.powf(5.0 / 3.0);
    let case_value = match case {
        ComplexityCase::FixedK => n_delta3,
        ComplexityCase::IncreasingK => n_delta2,
        ComplexityCase::PriorOnK => n_delta_5_3,
    };
    DeltaDiagnostics {
        case,
        bound,
        f1_term,
        f2_term,
        n_delta3,
        n_delta2,
        n_delta_5_3,
        general_pass: f1_term.max(f2_term) <= bound,
        case_pass: case_value <= bound,
    }
}

/// Knobs of a study run that are not part of the Gibbs posterior itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    pub num_draws: usize,
    /// Nominal level of the sup-metric credible band.
    pub band_level: f64,
    /// Smoothness assumed by the rate and no-overfit diagnostics.
    pub alpha: f64,
    pub tau: f64,
    /// Concentration radius as a fraction of `‖ψ★‖_{L₂(D)}`.
    pub radius_fraction: f64,
    /// Refuse regimes with more increments than this.
    pub max_increments: usize,
    pub sign: ExponentSign,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            num_draws: 1000,
            band_level: 0.9,
            alpha: 2.0,
            tau: 2.0,
            radius_fraction: 0.5,
            max_increments: 400_000_000,
            sign: ExponentSign::Decaying,
        }
    }
}

/// Everything a single regime run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub regime: RegimeSpec,
    pub seed: u64,
    pub vg_params: VarianceGammaParams,
    pub config: GibbsConfig,
    pub options: StudyOptions,
    pub k_max: usize,
    pub in_window_increments: u64,
    pub k_mode: usize,
    pub k_mean: f64,
    pub k_posterior: MarginalK,
    /// L₂(D) error of the projection estimator truncated at the posterior mode of `K`.
    pub err_projection: f64,
    /// L₂(D) error of the posterior mean function.
    pub err_postmean: f64,
    pub truth_l2_norm: f64,
    pub band_radius: f64,
    pub band_contains_truth: bool,
    pub concentration_radius: f64,
    pub concentration_prob: f64,
    pub delta_check: DeltaDiagnostics,
    pub config_check: ConfigDiagnostics,
    pub grid: Vec<f64>,
    pub psi_true: Vec<f64>,
    pub psi_mean: Vec<f64>,
    pub band_lo: Vec<f64>,
    pub band_hi: Vec<f64>,
    /// Wall-clock seconds; not serialized so reports stay byte-identical.
    #[serde(skip)]
    pub runtime_secs: f64,
}

impl ExperimentReport {
    /// `K_n = ⌈t_n^{1/(2α+1)}⌉`.
    pub fn oracle_k(&self, alpha: f64) -> usize {
        oracle_k(self.regime.t_n(), alpha)
    }
}

pub fn oracle_k(t_n: f64, alpha: f64) -> usize {
    t_n.powf(1.0 / (2.0 * alpha + 1.0)).ceil() as usize
}

/// Simulates regime `spec`, fits the Gibbs posterior and measures it against the true density.
///
/// Increments are streamed: only the in-window accumulators survive the simulation.
pub fn run_regime(
    spec: &RegimeSpec,
    vg: VarianceGammaParams,
    config: &GibbsConfig,
    options: &StudyOptions,
    seed: u64,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    config.validate()?;
    if spec.n() > options.max_increments {
        return Err(LevyError::Resource(format!(
            "regime j={} has {} increments, above the limit of {}; raise max_increments to run it",
            spec.j,
            spec.n(),
            options.max_increments
        )));
    }
    let truth = true_density_vg_with(&vg, options.sign)?;
    let t_n = spec.t_n();
    let k_max = config.k_max_for(t_n);
    let basis = BasisSystem::trigonometric(config.d_prime, k_max)?;

    let sim = VgSimulator::new(vg, spec.scheme, derive_seed(seed, &format!("simulation/j{}", spec.j)))?;
    let theta_hat = empirical_coefficients(&sim, &basis)?;
    let in_window = count_in_window(&theta_hat, t_n);

    let pmf = marginal_k(&theta_hat, t_n, config)?;
    let draws = sample_posterior(
        &theta_hat,
        t_n,
        config,
        options.num_draws,
        derive_seed(seed, &format!("draws/j{}", spec.j)),
    )?;
    let mean = posterior_mean_function(&draws)?;
    let band = credible_band(&draws, options.band_level, BandMetric::Sup)?;

    let psi_true: Vec<f64> = mean.x.iter().map(|&x| truth.eval(x)).collect::<Result<_>>()?;
    let width = config.d.width();
    let diff: Vec<f64> = mean.values.iter().zip(&psi_true).map(|(m, t)| m - t).collect();
    let err_postmean = trapezoid_l2(&diff, width);
    let truth_l2_norm = trapezoid_l2(&psi_true, width);

    let k_mode = pmf.mode();
    let projection = theta_hat.truncate(k_mode)?;
    let err_projection = l2_error_on(&projection, L2Reference::Density(&truth), &config.d, config.grid_points)?;

    let concentration_radius = options.radius_fraction * truth_l2_norm;
    let concentration_prob = concentration_probability(&draws, &truth, concentration_radius)?;

    let features = basis.features();
    let delta_check = delta_condition(&features, &spec.scheme, ComplexityCase::PriorOnK, 1.0);
    let psi_sup = psi_true.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let config_check = validate_config(config, psi_sup, options.tau);

    Ok(ExperimentReport {
        regime: *spec,
        seed,
        vg_params: vg,
        config: *config,
        options: *options,
        k_max,
        in_window_increments: in_window,
        k_mode,
        k_mean: pmf.mean(),
        band_radius: band.radius,
        band_contains_truth: band.contains(&psi_true),
        k_posterior: pmf,
        err_projection,
        err_postmean,
        truth_l2_norm,
        concentration_radius,
        concentration_prob,
        delta_check,
        config_check,
        grid: mean.x,
        psi_true,
        psi_mean: mean.values,
        band_lo: band.lower,
        band_hi: band.upper,
        runtime_secs: started.elapsed().as_secs_f64(),
    })
}

/// The constant basis function is `(b-a)^{-1/2}` on the window, so its
/// coefficient times `t_n·(b-a)^{1/2}` recovers the in-window count.
fn count_in_window(theta_hat: &crate::estimator::CoefficientVector, t_n: f64) -> u64 {
    (theta_hat.values[0] * t_n * theta_hat.basis.window().width().sqrt()).round() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverfitRow {
    pub j: u32,
    pub t_n: f64,
    pub k_oracle: usize,
    pub threshold: f64,
    pub mass_above: f64,
}

/// Posterior mass on `{K > τK_n}` per regime.
pub fn no_overfit_diagnostic(reports: &[ExperimentReport], tau: f64, alpha: f64) -> Result<Vec<OverfitRow>> {
    let inputs: Vec<(u32, f64, &MarginalK)> =
        reports.iter().map(|r| (r.regime.j, r.regime.t_n(), &r.k_posterior)).collect();
    overfit_rows(&inputs, tau, alpha)
}

/// [`no_overfit_diagnostic`] on bare `(j, t_n, pmf)` triples.
pub fn overfit_rows(inputs: &[(u32, f64, &MarginalK)], tau: f64, alpha: f64) -> Result<Vec<OverfitRow>> {
    if !(tau > 1.0) {
        return Err(LevyError::parameter(format!("tau must exceed 1, got {tau}")));
    }
    if !(alpha > 0.0) {
        return Err(LevyError::parameter(format!("alpha must be positive, got {alpha}")));
    }
    Ok(inputs
        .iter()
        .map(|&(j, t_n, pmf)| {
            let k_oracle = oracle_k(t_n, alpha);
            let threshold = tau * k_oracle as f64;
            OverfitRow { j, t_n, k_oracle, threshold, mass_above: pmf.mass_above(threshold) }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub j: u32,
    pub t_n: f64,
    pub err_projection: f64,
    /// Posterior-mean error.
    pub error: f64,
    /// `(log t_n)^{1/2} t_n^{-α/(2α+1)}`.
    pub eps_n: f64,
    pub ratio: f64,
}

pub fn eps_n(t_n: f64, alpha: f64) -> f64 {
    t_n.ln().sqrt() * t_n.powf(-alpha / (2.0 * alpha + 1.0))
}

/// Posterior-mean error against the adaptive rate `ε_n`, one row per regime.
pub fn rate_table(reports: &[ExperimentReport], alpha: f64) -> Result<Vec<RateRow>> {
    let inputs: Vec<RateInput> = reports
        .iter()
        .map(|r| RateInput {
            j: r.regime.j,
            t_n: r.regime.t_n(),
            err_projection: r.err_projection,
            error: r.err_postmean,
        })
        .collect();
    rate_rows(&inputs, alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInput {
    pub j: u32,
    pub t_n: f64,
    pub err_projection: f64,
    pub error: f64,
}

pub fn rate_rows(inputs: &[RateInput], alpha: f64) -> Result<Vec<RateRow>> {
    if inputs.is_empty() {
        return Err(LevyError::parameter("rate table needs at least one regime"));
    }
    Ok(inputs
        .iter()
        .map(|r| {
            let e = eps_n(r.t_n, alpha);
            RateRow { j: r.j, t_n: r.t_n, err_projection: r.err_projection, error: r.error, eps_n: e, ratio: r.error / e }
        })
        .collect())
}
