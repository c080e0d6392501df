//! Projection estimator and contrast functions.
//!
//! The empirical coefficient of basis function `f_k` is
//! `θ̂_k = t_n⁻¹ Σ_i f_k(Y_i)`, and the empirical risk of a coefficient vector
//! is `R_n(θ) = -2⟨θ, θ̂⟩ + ‖θ‖²`, minimized at `θ = θ̂`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisSystem, Window};
use crate::error::{LevyError, Result};
use crate::process::{IncrementSource, TrueLevyDensity, CHUNK_LEN};
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientRole {
    Empirical,
    Projected,
    Draw,
}

/// Basis coefficients together with the basis they refer to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub basis: BasisSystem,
    pub role: CoefficientRole,
    /// Observation horizon the coefficients were estimated from, when known.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_n: Option<f64>,
    pub values: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(basis: BasisSystem, values: Vec<f64>, role: CoefficientRole) -> Result<Self> {
        if values.len() != basis.k() {
            return Err(LevyError::Dimension { expected: basis.k(), got: values.len() });
        }
        Ok(CoefficientVector { basis, role, t_n: None, values })
    }

    pub fn zeros(basis: BasisSystem, role: CoefficientRole) -> Self {
        CoefficientVector { basis, role, t_n: None, values: vec![0.0; basis.k()] }
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// The first `k` coefficients, as a vector on the size-`k` nested basis.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if !self.basis.nested() {
            return Err(LevyError::parameter("only nested bases can be truncated"));
        }
        if k == 0 || k > self.k() {
            return Err(LevyError::Index { index: k, k: self.k() });
        }
        Ok(CoefficientVector {
            basis: self.basis.with_k(k)?,
            role: self.role,
            t_n: self.t_n,
            values: self.values[..k].to_vec(),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.basis.synthesize(&self.values, x).expect("length checked at construction")
    }
}

/// Per-coefficient compensated sums of `f_k(Y_i)` over a run of increments.
#[derive(Debug, Clone)]
pub struct CoefficientAccumulator {
    sums: Vec<CompensatedSum>,
    in_window: u64,
    scratch: Vec<f64>,
}

impl CoefficientAccumulator {
    pub fn new(k: usize) -> Self {
        CoefficientAccumulator { sums: vec![CompensatedSum::new(); k], in_window: 0, scratch: vec![0.0; k] }
    }

    /// Adds the increments in `ys`. Values outside the basis window are dropped
    /// before any basis evaluation.
    pub fn push_all(&mut self, basis: &BasisSystem, ys: &[f64]) {
        let window = basis.window();
        for &y in ys.iter().filter(|&&y| window.contains(y)) {
            basis.eval_into(y, &mut self.scratch);
            for (s, v) in self.sums.iter_mut().zip(&self.scratch) {
                s.add(*v);
            }
            self.in_window += 1;
        }
    }

    pub fn merge(&mut self, other: &CoefficientAccumulator) {
        for (s, o) in self.sums.iter_mut().zip(&other.sums) {
            s.merge(o);
        }
        self.in_window += other.in_window;
    }

    /// Number of increments that fell inside the window.
    pub fn in_window(&self) -> u64 {
        self.in_window
    }

    pub fn finish(&self, basis: BasisSystem, t_n: f64) -> Result<CoefficientVector> {
        if !(t_n > 0.0 && t_n.is_finite()) {
            return Err(LevyError::parameter(format!("t_n must be positive, got {t_n}")));
        }
        let values = self.sums.iter().map(|s| s.value() / t_n).collect();
        let mut v = CoefficientVector::new(basis, values, CoefficientRole::Empirical)?;
        v.t_n = Some(t_n);
        Ok(v)
    }
}

/// `θ̂_k = t_n⁻¹ Σ_i f_k(Y_i)` over every increment of `source`.
///
/// Chunks are generated and accumulated in parallel, then merged in chunk
/// order, so the result does not depend on the number of worker threads.
pub fn empirical_coefficients<S: IncrementSource + ?Sized>(
    source: &S,
    basis: &BasisSystem,
) -> Result<CoefficientVector> {
    let scheme = source.scheme();
    let k = basis.k();
    let partials: Vec<Option<CoefficientAccumulator>> = (0..scheme.num_chunks())
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(CHUNK_LEN),
            |buf, c| {
                source.fill_chunk(c, buf);
                let window = basis.window();
                if !buf.iter().any(|&y| window.contains(y)) {
                    return None;
                }
                let mut acc = CoefficientAccumulator::new(k);
                acc.push_all(basis, buf);
                Some(acc)
            },
        )
        .collect();
    let mut total = CoefficientAccumulator::new(k);
    for p in partials.iter().flatten() {
        total.merge(p);
    }
    total.finish(*basis, scheme.t_n)
}

/// Same estimate from a plain slice, accumulated in chunks of `chunk_len`.
pub fn empirical_coefficients_chunked(
    values: &[f64],
    t_n: f64,
    basis: &BasisSystem,
    chunk_len: usize,
) -> Result<CoefficientVector> {
    let mut total = CoefficientAccumulator::new(basis.k());
    for chunk in values.chunks(chunk_len.max(1)) {
        let mut acc = CoefficientAccumulator::new(basis.k());
        acc.push_all(basis, chunk);
        total.merge(&acc);
    }
    total.finish(*basis, t_n)
}

/// Value of a contrast function at some `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskValue {
    pub value: f64,
    pub k: usize,
    pub t_n: Option<f64>,
}

fn contrast(theta: &CoefficientVector, target: &CoefficientVector) -> Result<RiskValue> {
    if theta.k() != target.k() {
        return Err(LevyError::Dimension { expected: target.k(), got: theta.k() });
    }
    let mut acc = CompensatedSum::new();
    for (t, h) in theta.values.iter().zip(&target.values) {
        acc.add(t * t - 2.0 * t * h);
    }
    Ok(RiskValue { value: acc.value(), k: theta.k(), t_n: target.t_n })
}

/// `R_n(θ) = -2⟨θ, θ̂⟩ + ‖θ‖²`.
pub fn empirical_risk(theta: &CoefficientVector, theta_hat: &CoefficientVector) -> Result<RiskValue> {
    contrast(theta, theta_hat)
}

/// `R(θ) = -2⟨θ, θ⊥⟩ + ‖θ‖²`.
pub fn population_risk(theta: &CoefficientVector, theta_perp: &CoefficientVector) -> Result<RiskValue> {
    contrast(theta, theta_perp)
}

/// What an estimate is compared against in [`l2_error_on`].
#[derive(Debug, Clone, Copy)]
pub enum L2Reference<'a> {
    Density(&'a TrueLevyDensity),
    Coefficients(&'a CoefficientVector),
}

/// Minimum number of grid points for L₂ and sup metrics on `D`.
pub const MIN_GRID_POINTS: usize = 512;

/// Trapezoid approximation of `∫_a^b g²` from equally spaced samples.
pub fn trapezoid_l2(values: &[f64], width: f64) -> f64 {
    let m = values.len();
    if m < 2 {
        return 0.0;
    }
    let h = width / (m - 1) as f64;
    let mut acc = CompensatedSum::new();
    for (i, v) in values.iter().enumerate() {
        let w = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
        acc.add(w * v * v);
    }
    (acc.value() * h).sqrt()
}

/// `‖ψ_θ - ref‖_{L₂(D)}` by the trapezoid rule on `grid_points` (at least 512)
/// equally spaced points of `D`.
pub fn l2_error_on(
    theta: &CoefficientVector,
    reference: L2Reference<'_>,
    d: &Window,
    grid_points: usize,
) -> Result<f64> {
    if !theta.basis.window().contains_window(d) {
        return Err(LevyError::Window(format!(
            "D = [{}, {}] is not inside the basis window [{}, {}]",
            d.a,
            d.b,
            theta.basis.window().a,
            theta.basis.window().b
        )));
    }
    let grid = d.grid(grid_points.max(MIN_GRID_POINTS));
    let estimate = theta.basis.synthesize_on(&theta.values, &grid)?;
    let target: Vec<f64> = match reference {
        L2Reference::Density(psi) => grid.iter().map(|&x| psi.eval(x)).collect::<Result<_>>()?,
        L2Reference::Coefficients(c) => c.basis.synthesize_on(&c.values, &grid)?,
    };
    let diff: Vec<f64> = estimate.iter().zip(&target).map(|(e, t)| e - t).collect();
    Ok(trapezoid_l2(&diff, d.width()))
}
