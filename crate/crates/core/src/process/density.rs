//! True Lévy densities of the simulated families.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CompoundPoissonParams, JumpLaw, VarianceGammaParams};
use crate::error::{LevyError, Result};

/// Sign convention for the positive branch of the VG Lévy density.
///
/// The closed form usually quoted for this model reads `ν⁻¹|x|⁻¹e^{x/η⁺}` for
/// `x > 0`, which grows with `x`. The Lévy density of the simulated process
/// decays on both sides, `ν⁻¹|x|⁻¹e^{-|x|/η^±}`. The negative branch is the
/// same under both conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentSign {
    /// `e^{x/η⁺}` on `x > 0`.
    #[default]
    Growing,
    /// `e^{-x/η⁺}` on `x > 0`.
    Decaying,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VgDensity {
    pub params: VarianceGammaParams,
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub sign: ExponentSign,
}

impl VgDensity {
    fn eval(&self, x: f64) -> f64 {
        let nu = self.params.nu;
        let prefactor = 1.0 / (nu * x.abs());
        if x > 0.0 {
            match self.sign {
                ExponentSign::Growing => prefactor * (x / self.eta_plus).exp(),
                ExponentSign::Decaying => prefactor * (-x / self.eta_plus).exp(),
            }
        } else {
            prefactor * (x / self.eta_minus).exp()
        }
    }
}

/// `η± = (μ²ν²/4 + σ²ν/2)^{1/2} ± μν/2`.
pub fn vg_eta(params: &VarianceGammaParams) -> (f64, f64) {
    let VarianceGammaParams { mu, sigma, nu } = *params;
    let root = (mu * mu * nu * nu / 4.0 + sigma * sigma * nu / 2.0).sqrt();
    (root + mu * nu / 2.0, root - mu * nu / 2.0)
}

/// A Lévy density `ψ★` on ℝ∖{0}, used as ground truth for error measurement.
#[derive(Clone)]
pub enum TrueLevyDensity {
    VarianceGamma(VgDensity),
    /// `λ g(x)` for a jump law with a Lebesgue density `g`.
    CompoundPoisson { lambda: f64, jump: JumpLaw },
    Custom { name: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl fmt::Debug for TrueLevyDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrueLevyDensity::VarianceGamma(d) => f.debug_tuple("VarianceGamma").field(d).finish(),
            TrueLevyDensity::CompoundPoisson { lambda, jump } => f
                .debug_struct("CompoundPoisson")
                .field("lambda", lambda)
                .field("jump", jump)
                .finish(),
            TrueLevyDensity::Custom { name, .. } => f.debug_struct("Custom").field("name", name).finish(),
        }
    }
}

impl TrueLevyDensity {
    pub fn family(&self) -> &'static str {
        match self {
            TrueLevyDensity::VarianceGamma(_) => "variance-gamma",
            TrueLevyDensity::CompoundPoisson { .. } => "compound-poisson",
            TrueLevyDensity::Custom { .. } => "custom",
        }
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        TrueLevyDensity::Custom { name: name.into(), f: Arc::new(f) }
    }

    /// `ψ★(x)`. The origin is outside the domain of any Lévy density.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(LevyError::Domain("the Lévy density is undefined at x = 0".into()));
        }
        if !x.is_finite() {
            return Err(LevyError::Domain(format!("non-finite abscissa {x}")));
        }
        Ok(match self {
            TrueLevyDensity::VarianceGamma(d) => d.eval(x),
            TrueLevyDensity::CompoundPoisson { lambda, jump } => {
                lambda * jump.density(x).expect("constructor checked the jump law has a density")
            }
            TrueLevyDensity::Custom { f, .. } => f(x),
        })
    }

    /// Largest value of `ψ★` over `grid_points` equally spaced abscissae of `[a, b]`.
    pub fn sup_on(&self, a: f64, b: f64, grid_points: usize) -> Result<f64> {
        let m = grid_points.max(2);
        let h = (b - a) / (m - 1) as f64;
        let mut best = f64::NEG_INFINITY;
        for i in 0..m {
            best = best.max(self.eval(a + h * i as f64)?);
        }
        Ok(best)
    }
}

/// The VG Lévy density in its usually quoted form, growing on `x > 0`.
pub fn true_density_vg(params: &VarianceGammaParams) -> Result<TrueLevyDensity> {
    true_density_vg_with(params, ExponentSign::Growing)
}

pub fn true_density_vg_with(params: &VarianceGammaParams, sign: ExponentSign) -> Result<TrueLevyDensity> {
    if params.mu == 0.0 && params.sigma == 0.0 {
        return Err(LevyError::parameter(
            "VG Lévy density needs sigma or mu nonzero (eta would vanish)",
        ));
    }
    let (eta_plus, eta_minus) = vg_eta(params);
    if !(eta_plus > 0.0 && eta_minus > 0.0) {
        return Err(LevyError::parameter(format!(
            "degenerate VG scales eta+={eta_plus}, eta-={eta_minus}"
        )));
    }
    Ok(TrueLevyDensity::VarianceGamma(VgDensity { params: *params, eta_plus, eta_minus, sign }))
}

/// `λ g` for compound Poisson with an absolutely continuous jump law.
pub fn true_density_compound_poisson(params: &CompoundPoissonParams) -> Result<TrueLevyDensity> {
    if params.jump.density(1.0).is_none() {
        return Err(LevyError::parameter(format!(
            "jump law {:?} has no Lebesgue density",
            params.jump
        )));
    }
    Ok(TrueLevyDensity::CompoundPoisson { lambda: params.lambda, jump: params.jump })
}
