//! Gibbs posterior with a Gaussian prior on the coefficients and a
//! `e^{-βK log K}` prior on the complexity index.
//!
//! With the iid `N(0, σ₀²)` prior, `exp(-ω t_n R_n(θ))` is conjugate: given `K`
//! the coefficients are independent normals with mean
//! `θ̂_k (1 + (2ωt_n)⁻¹σ₀⁻²)⁻¹` and variance `(2ωt_n + σ₀⁻²)⁻¹`, and the
//! marginal posterior of `K` is available in closed form. Sampling is plain
//! independent Monte Carlo: draw `K` by inverse CDF, then the coefficients.

use rand_distr::{Distribution, StandardNormal};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisSystem, Window};
use crate::error::{LevyError, Result};
use crate::estimator::{trapezoid_l2, CoefficientRole, CoefficientVector, MIN_GRID_POINTS};
use crate::process::TrueLevyDensity;
use crate::rng::stream_rng;

/// Draws generated per random stream.
pub const DRAW_BLOCK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsConfig {
    /// Learning rate ω.
    pub omega: f64,
    /// Prior standard deviation σ₀ of each coefficient.
    pub sigma0: f64,
    /// Complexity prior coefficient β.
    pub beta: f64,
    /// Truncation of the prior on `K`; `None` means `⌈t_n⌉`.
    pub k_max: Option<usize>,
    /// Point-mass prior on a single `K`.
    pub fixed_k: Option<usize>,
    /// Window the density is reported on.
    pub d: Window,
    /// Wider window the basis lives on.
    pub d_prime: Window,
    /// Evaluation grid size on `D`.
    pub grid_points: usize,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        GibbsConfig {
            omega: 1e-5,
            sigma0: 1e3,
            beta: 0.5,
            k_max: None,
            fixed_k: None,
            d: Window { a: 0.006, b: 0.014 },
            d_prime: Window { a: 0.005, b: 0.015 },
            grid_points: MIN_GRID_POINTS,
        }
    }
}

impl GibbsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(LevyError::parameter(format!("{name} must be positive, got {v}")))
            }
        };
        positive("omega", self.omega)?;
        positive("sigma0", self.sigma0)?;
        positive("beta", self.beta)?;
        if self.k_max == Some(0) {
            return Err(LevyError::parameter("k_max must be at least 1"));
        }
        if self.fixed_k == Some(0) {
            return Err(LevyError::parameter("fixed K must be at least 1"));
        }
        Window::new(self.d.a, self.d.b)?;
        Window::new(self.d_prime.a, self.d_prime.b)?;
        if !self.d_prime.contains_window(&self.d) {
            return Err(LevyError::Window("D must lie inside D'".into()));
        }
        if self.grid_points < 2 {
            return Err(LevyError::parameter("grid needs at least 2 points"));
        }
        Ok(())
    }

    /// Effective prior truncation for horizon `t_n`.
    pub fn k_max_for(&self, t_n: f64) -> usize {
        self.k_max.unwrap_or_else(|| default_k_max(t_n))
    }
}

/// `⌈t_n⌉`, ignoring floating-point fuzz of a few ulps above an integer.
pub fn default_k_max(t_n: f64) -> usize {
    let r = t_n.round();
    let c = if (t_n - r).abs() <= 1e-9 * t_n.abs().max(1.0) { r } else { t_n.ceil() };
    (c as usize).max(1)
}

/// Closed-form conditional posterior of `θ_K` given `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalPosterior {
    pub k: usize,
    pub means: Vec<f64>,
    /// Common variance `(2ωt_n + σ₀⁻²)⁻¹`.
    pub variance: f64,
    /// `(1 + (2ωt_n)⁻¹σ₀⁻²)⁻¹`, the factor applied to each `θ̂_k`.
    pub shrinkage: f64,
}

fn check_horizon(t_n: f64) -> Result<()> {
    if t_n > 0.0 && t_n.is_finite() {
        Ok(())
    } else {
        Err(LevyError::parameter(format!("t_n must be positive, got {t_n}")))
    }
}

fn shrinkage(omega: f64, t_n: f64, sigma0: f64) -> f64 {
    1.0 / (1.0 + 1.0 / (2.0 * omega * t_n * sigma0 * sigma0))
}

pub fn conditional_posterior(
    theta_hat: &CoefficientVector,
    t_n: f64,
    config: &GibbsConfig,
) -> Result<ConditionalPosterior> {
    check_horizon(t_n)?;
    let k = theta_hat.k();
    if k == 0 {
        return Err(LevyError::parameter("empty coefficient vector"));
    }
    let s = shrinkage(config.omega, t_n, config.sigma0);
    let variance = 1.0 / (2.0 * config.omega * t_n + 1.0 / (config.sigma0 * config.sigma0));
    Ok(ConditionalPosterior {
        k,
        means: theta_hat.values.iter().map(|t| t * s).collect(),
        variance,
        shrinkage: s,
    })
}

/// Marginal posterior pmf of `K` over `1..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalK {
    /// Unnormalized log weights, index `K - 1`. `-inf` where the prior is zero.
    pub log_weights: Vec<f64>,
    pub probs: Vec<f64>,
    #[serde(skip)]
    cdf: Vec<f64>,
}

impl MarginalK {
    /// Normalizes log weights with max-subtraction.
    pub fn from_log_weights(log_weights: Vec<f64>) -> Result<Self> {
        if log_weights.is_empty() {
            return Err(LevyError::parameter("k_max must be at least 1"));
        }
        let max = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(LevyError::State(format!("no finite log weight (max = {max})")));
        }
        let raw: Vec<f64> = log_weights.iter().map(|w| (w - max).exp()).collect();
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|r| r / total).collect();
        let mut cdf = Vec::with_capacity(probs.len());
        let mut run = 0.0;
        for p in &probs {
            run += p;
            cdf.push(run);
        }
        Ok(MarginalK { log_weights, probs, cdf })
    }

    pub fn k_max(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, k: usize) -> f64 {
        if k == 0 || k > self.probs.len() {
            0.0
        } else {
            self.probs[k - 1]
        }
    }

    /// Most probable `K` (smallest on ties).
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] {
                best = i;
            }
        }
        best + 1
    }

    /// Posterior mass on `{K > threshold}`.
    pub fn mass_above(&self, threshold: f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i + 1) as f64 > threshold)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum()
    }

    /// Inverse CDF at `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> usize {
        let idx = self.cdf.partition_point(|&c| c <= u);
        // rounding can leave the last cumulative value a hair below 1
        let idx = idx.min(self.cdf.len() - 1);
        // never return a K with zero mass
        let idx = (0..=idx).rev().find(|&i| self.probs[i] > 0.0).unwrap_or_else(|| {
            self.probs.iter().position(|&p| p > 0.0).expect("normalized pmf has mass")
        });
        idx + 1
    }
}

/// `K log K`, with the `K = 1` value taken as its limit 0.
fn k_log_k(k: usize) -> f64 {
    if k <= 1 {
        0.0
    } else {
        let kf = k as f64;
        kf * kf.ln()
    }
}

/// Marginal Gibbs posterior of `K` from the nested-basis estimate `θ̂` at `k_max`.
///
/// The log weight of `K` is
/// `Σ_{k≤K} ωt_nθ̂_k²/(1+(2ωt_n)⁻¹σ₀⁻²) − (K/2)log(2ωt_nσ₀²+1) − βK log K`.
pub fn marginal_k(theta_hat_full: &CoefficientVector, t_n: f64, config: &GibbsConfig) -> Result<MarginalK> {
    check_horizon(t_n)?;
    if let Some(k0) = config.fixed_k {
        if k0 > theta_hat_full.k() {
            return Err(LevyError::Dimension { expected: k0, got: theta_hat_full.k() });
        }
        let mut lw = vec![f64::NEG_INFINITY; k0];
        lw[k0 - 1] = 0.0;
        return MarginalK::from_log_weights(lw);
    }
    if !theta_hat_full.basis.nested() {
        return Err(LevyError::parameter(
            "the prior on K needs a nested (trigonometric) basis",
        ));
    }
    let k_max = config.k_max_for(t_n);
    if k_max == 0 {
        return Err(LevyError::parameter("k_max must be at least 1"));
    }
    if theta_hat_full.k() < k_max {
        return Err(LevyError::Dimension { expected: k_max, got: theta_hat_full.k() });
    }
    let wt = config.omega * t_n;
    let s = shrinkage(config.omega, t_n, config.sigma0);
    let half_log_det = 0.5 * (2.0 * wt * config.sigma0 * config.sigma0).ln_1p();
    let mut fit = 0.0;
    let log_weights = (1..=k_max)
        .map(|k| {
            let th = theta_hat_full.values[k - 1];
            fit += wt * th * th * s;
            fit - k as f64 * half_log_det - config.beta * k_log_k(k)
        })
        .collect();
    MarginalK::from_log_weights(log_weights)
}

/// A collection of posterior draws and their values on a grid in `D`.
#[derive(Debug, Clone)]
pub struct PosteriorDraws {
    /// Basis at full size; each draw uses its first `K` functions.
    pub basis: BasisSystem,
    pub draws: Vec<CoefficientVector>,
    pub grid: Vec<f64>,
    /// `grid_values[i][g]` is draw `i` evaluated at `grid[g]`.
    pub grid_values: Vec<Vec<f64>>,
}

impl PosteriorDraws {
    /// Evaluates `draws` on `grid`.
    pub fn from_draws(basis: BasisSystem, draws: Vec<CoefficientVector>, grid: Vec<f64>) -> Result<Self> {
        let k_top = draws.iter().map(|d| d.k()).max().unwrap_or(0);
        if k_top > basis.k() {
            return Err(LevyError::Dimension { expected: basis.k(), got: k_top });
        }
        // basis values on the grid, k-major
        let table: Vec<Vec<f64>> = grid.iter().map(|&x| basis.eval_all(x)).collect();
        let grid_values = draws
            .par_iter()
            .map(|d| {
                table
                    .iter()
                    .map(|fs| d.values.iter().zip(fs).map(|(t, f)| t * f).sum())
                    .collect()
            })
            .collect();
        Ok(PosteriorDraws { basis, draws, grid, grid_values })
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Spacing-weighted L₂ norm on the grid (trapezoid).
    fn grid_l2(&self, values: &[f64]) -> f64 {
        let width = match (self.grid.first(), self.grid.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        };
        trapezoid_l2(values, width)
    }
}

/// Independent draws from the Gibbs posterior of `(K, θ_K)`.
///
/// Draws are produced in blocks of [`DRAW_BLOCK`]; block `b` uses random
/// stream `b` of `seed`, and blocks are concatenated in order.
pub fn sample_posterior(
    theta_hat_full: &CoefficientVector,
    t_n: f64,
    config: &GibbsConfig,
    num_draws: usize,
    seed: u64,
) -> Result<PosteriorDraws> {
    config.validate()?;
    if num_draws == 0 {
        return Err(LevyError::parameter("num_draws must be at least 1"));
    }
    let pmf = marginal_k(theta_hat_full, t_n, config)?;
    let k_max = pmf.k_max();
    let basis = theta_hat_full.basis.with_k(k_max)?;
    let cond = conditional_posterior(&theta_hat_full.truncate_any(k_max)?, t_n, config)?;
    let sd = cond.variance.sqrt();

    let blocks: Vec<Vec<CoefficientVector>> = (0..num_draws.div_ceil(DRAW_BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let count = DRAW_BLOCK.min(num_draws - b * DRAW_BLOCK);
            (0..count)
                .map(|_| {
                    let u: f64 = rng.random();
                    let k = pmf.quantile(u);
                    let values = cond.means[..k]
                        .iter()
                        .map(|m| {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            m + sd * z
                        })
                        .collect();
                    CoefficientVector {
                        basis: basis.with_k(k).expect("k <= k_max"),
                        role: CoefficientRole::Draw,
                        t_n: Some(t_n),
                        values,
                    }
                })
                .collect()
        })
        .collect();
    let draws = blocks.concat();
    PosteriorDraws::from_draws(basis, draws, config.d.grid(config.grid_points))
}

/// Draws at a single known `K`.
pub fn sample_fixed_k(
    theta_hat: &CoefficientVector,
    t_n: f64,
    config: &GibbsConfig,
    k: usize,
    num_draws: usize,
    seed: u64,
) -> Result<PosteriorDraws> {
    let cfg = GibbsConfig { fixed_k: Some(k), ..*config };
    sample_posterior(theta_hat, t_n, &cfg, num_draws, seed)
}

impl CoefficientVector {
    /// First `k` coefficients; for non-nested bases only `k == K` is allowed.
    fn truncate_any(&self, k: usize) -> Result<CoefficientVector> {
        if k == self.k() {
            Ok(self.clone())
        } else {
            self.truncate(k)
        }
    }
}

/// Values of a function on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

/// Pointwise average of the sampled `ψ` (mixing over `K`).
pub fn posterior_mean_function(draws: &PosteriorDraws) -> Result<GridFunction> {
    if draws.is_empty() {
        return Err(LevyError::State("no posterior draws".into()));
    }
    let n = draws.len() as f64;
    let mut mean = vec![0.0; draws.grid.len()];
    for row in &draws.grid_values {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    Ok(GridFunction { x: draws.grid.clone(), values: mean })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BandMetric {
    #[default]
    Sup,
    L2,
}

impl std::str::FromStr for BandMetric {
    type Err = LevyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(BandMetric::Sup),
            "l2" | "L2" => Ok(BandMetric::L2),
            _ => Err(LevyError::parameter(format!("unknown band metric `{s}`"))),
        }
    }
}

/// Credible set `{ψ : d(ψ, ψ̂) ≤ c}` around the posterior mean `ψ̂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CredibleBand {
    pub metric: BandMetric,
    pub level: f64,
    pub radius: f64,
    pub center: GridFunction,
    /// For the sup metric `ψ̂ ± c`; for L₂ the pointwise envelope of the draws
    /// inside the credible set.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl CredibleBand {
    /// Whether `values` (on the band grid) lies inside the envelope everywhere.
    pub fn contains(&self, values: &[f64]) -> bool {
        values
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }
}

/// `c` is the empirical `level`-quantile of `d(ψ_draw, ψ̂)` over the draws
/// (order statistic `⌈level·N⌉`).
pub fn credible_band(draws: &PosteriorDraws, level: f64, metric: BandMetric) -> Result<CredibleBand> {
    if !(level > 0.0 && level < 1.0) {
        return Err(LevyError::parameter(format!("level must be in (0, 1), got {level}")));
    }
    let center = posterior_mean_function(draws)?;
    let dist: Vec<f64> = draws
        .grid_values
        .iter()
        .map(|row| {
            let diff: Vec<f64> = row.iter().zip(&center.values).map(|(v, m)| v - m).collect();
            match metric {
                BandMetric::Sup => diff.iter().fold(0.0f64, |acc, d| acc.max(d.abs())),
                BandMetric::L2 => draws.grid_l2(&diff),
            }
        })
        .collect();
    let mut sorted = dist.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = ((level * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let radius = sorted[rank - 1];

    let (lower, upper) = match metric {
        BandMetric::Sup => (
            center.values.iter().map(|m| m - radius).collect(),
            center.values.iter().map(|m| m + radius).collect(),
        ),
        BandMetric::L2 => {
            let mut lo = center.values.clone();
            let mut hi = center.values.clone();
            for (row, d) in draws.grid_values.iter().zip(&dist) {
                if *d <= radius {
                    for (g, v) in row.iter().enumerate() {
                        lo[g] = lo[g].min(*v);
                        hi[g] = hi[g].max(*v);
                    }
                }
            }
            (lo, hi)
        }
    };
    Ok(CredibleBand { metric, level, radius, center, lower, upper })
}

/// Fraction of draws with `‖ψ_draw − ψ★‖_{L₂(D)} > radius`.
pub fn concentration_probability(
    draws: &PosteriorDraws,
    psi_star: &TrueLevyDensity,
    radius: f64,
) -> Result<f64> {
    if draws.is_empty() {
        return Err(LevyError::State("no posterior draws".into()));
    }
    let truth: Vec<f64> = draws.grid.iter().map(|&x| psi_star.eval(x)).collect::<Result<_>>()?;
    let outside = draws
        .grid_values
        .iter()
        .filter(|row| {
            let diff: Vec<f64> = row.iter().zip(&truth).map(|(v, t)| v - t).collect();
            draws.grid_l2(&diff) > radius
        })
        .count();
    Ok(outside as f64 / draws.len() as f64)
}

/// Finite-sample check of the conditions relating `β`, `ω` and `sup_D ψ★`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigDiagnostics {
    pub psi_sup: f64,
    /// `C² = 2 sup_D ψ`.
    pub c_squared: f64,
    /// `ωC²`.
    pub omega_c_squared: f64,
    /// `β > ωC²`.
    pub beta_condition: bool,
    /// `β − ωC²`.
    pub beta_margin: f64,
    pub tau: f64,
    /// `τ(τ−1)⁻¹C²ω`.
    pub tau_threshold: f64,
    /// `β > τ(τ−1)⁻¹C²ω`.
    pub tau_condition: bool,
}

/// Reports, never fails. `tau` must exceed 1 for the second flag to be meaningful;
/// at `tau <= 1` the threshold is infinite and the flag is false.
pub fn validate_config(config: &GibbsConfig, psi_sup_estimate: f64, tau: f64) -> ConfigDiagnostics {
    let c_squared = 2.0 * psi_sup_estimate;
    let omega_c_squared = config.omega * c_squared;
    let tau_threshold = if tau > 1.0 { tau / (tau - 1.0) * omega_c_squared } else { f64::INFINITY };
    ConfigDiagnostics {
        psi_sup: psi_sup_estimate,
        c_squared,
        omega_c_squared,
        beta_condition: config.beta > omega_c_squared,
        beta_margin: config.beta - omega_c_squared,
        tau,
        tau_threshold,
        tau_condition: config.beta > tau_threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trig(k: usize) -> BasisSystem {
        BasisSystem::trigonometric(Window::new(0.005, 0.015).unwrap(), k).unwrap()
    }

    fn hat(values: Vec<f64>) -> CoefficientVector {
        CoefficientVector::new(trig(values.len()), values, CoefficientRole::Empirical).unwrap()
    }

    #[test]
    fn flat_prior_limit() {
        let cfg = GibbsConfig { sigma0: 1e12, omega: 1e-5, ..Default::default() };
        let th = hat(vec![3.0, -1.5]);
        let c = conditional_posterior(&th, 320.0, &cfg).unwrap();
        for (m, t) in c.means.iter().zip(&th.values) {
            assert!((m / t - 1.0).abs() < 1e-9);
        }
        assert!((c.variance * (2.0 * 1e-5 * 320.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn study_constants() {
        // ω = 1e-5, t_n = 320, σ₀ = 1e3: 2ωt_n = 6.4e-3, σ₀⁻² = 1e-6
        let c = conditional_posterior(&hat(vec![1.0]), 320.0, &GibbsConfig::default()).unwrap();
        assert!((c.shrinkage - 0.999_843_774_410_248_4).abs() < 1e-15);
        assert!((c.variance - 156.225_589_751_601_3).abs() < 1e-10);
    }

    #[test]
    fn shrinks_toward_zero() {
        let cfg = GibbsConfig { sigma0: 0.1, ..Default::default() };
        let th = hat(vec![5.0, -4.0, 0.0, 2.5]);
        let c = conditional_posterior(&th, 20.0, &cfg).unwrap();
        for (m, t) in c.means.iter().zip(&th.values) {
            assert!(m.abs() <= t.abs());
            if *t != 0.0 {
                assert!(m.abs() < t.abs());
            }
        }
        assert!(conditional_posterior(&th, 0.0, &cfg).is_err());
    }

    #[test]
    fn zero_estimate_gives_decreasing_weights() {
        let cfg = GibbsConfig { k_max: Some(50), ..Default::default() };
        let m = marginal_k(&hat(vec![0.0; 50]), 20.0, &cfg).unwrap();
        assert!(m.log_weights.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(m.mode(), 1);
        assert!((m.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_k_is_point_mass() {
        let cfg = GibbsConfig { fixed_k: Some(3), ..Default::default() };
        let m = marginal_k(&hat(vec![1.0; 5]), 20.0, &cfg).unwrap();
        assert_eq!(m.probs, vec![0.0, 0.0, 1.0]);
        for u in [0.0, 0.3, 0.999_999] {
            assert_eq!(m.quantile(u), 3);
        }
    }

    #[test]
    fn k_max_default_and_validation() {
        assert_eq!(default_k_max(320.0), 320);
        assert_eq!(default_k_max(320.0 + 1e-13), 320);
        assert_eq!(default_k_max(19.2), 20);
        let cfg = GibbsConfig::default();
        assert!(matches!(
            marginal_k(&hat(vec![0.0; 10]), 20.0, &cfg),
            Err(LevyError::Dimension { expected: 20, got: 10 })
        ));
        let bad = GibbsConfig { k_max: Some(0), ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn legendre_rejected_for_hierarchical_mode() {
        let b = BasisSystem::piecewise_legendre(Window::new(0.005, 0.015).unwrap(), 2, 2).unwrap();
        let v = CoefficientVector::new(b, vec![1.0; 4], CoefficientRole::Empirical).unwrap();
        let cfg = GibbsConfig { k_max: Some(4), ..Default::default() };
        assert!(marginal_k(&v, 5.0, &cfg).is_err());
        let fixed = GibbsConfig { fixed_k: Some(4), ..Default::default() };
        let draws = sample_posterior(&v, 5.0, &fixed, 10, 1).unwrap();
        assert!(draws.draws.iter().all(|d| d.k() == 4));
    }

    #[test]
    fn identical_draws_have_zero_band() {
        let basis = trig(3);
        let d = CoefficientVector::new(basis, vec![1.0, 2.0, 3.0], CoefficientRole::Draw).unwrap();
        let grid = Window::new(0.006, 0.014).unwrap().grid(512);
        let draws = PosteriorDraws::from_draws(basis, vec![d.clone(); 20], grid.clone()).unwrap();
        let mean = posterior_mean_function(&draws).unwrap();
        let direct = basis.synthesize_on(&d.values, &grid).unwrap();
        for (a, b) in mean.values.iter().zip(&direct) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
        let band = credible_band(&draws, 0.9, BandMetric::Sup).unwrap();
        assert!(band.radius < 1e-9);
        assert!(credible_band(&draws, 1.0, BandMetric::Sup).is_err());
        assert!(credible_band(&draws, 0.0, BandMetric::L2).is_err());
    }

    #[test]
    fn empty_draws_are_a_state_error() {
        let draws = PosteriorDraws::from_draws(trig(2), vec![], vec![0.01, 0.011]).unwrap();
        assert!(matches!(posterior_mean_function(&draws), Err(LevyError::State(_))));
    }

    #[test]
    fn config_diagnostics() {
        let cfg = GibbsConfig { beta: 0.0, ..Default::default() };
        let d = validate_config(&cfg, 1000.0, 2.0);
        assert!(!d.beta_condition && !d.tau_condition);
        assert!((d.tau_threshold - 2.0 * d.omega_c_squared).abs() < 1e-15);
        assert_eq!(d.c_squared, 2000.0);
    }
}
