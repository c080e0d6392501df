//! Discretely sampled Lévy processes.
//!
//! Increments are produced in fixed-size chunks. Chunk `c` of a series with
//! seed `s` is drawn from ChaCha8 stream `c` of key `s`, so a series can be
//! materialized, streamed, or generated in parallel and always yields the same
//! values.

mod density;
mod gamma;

use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use density::{
    true_density_compound_poisson, true_density_vg, true_density_vg_with, vg_eta, ExponentSign,
    TrueLevyDensity, VgDensity,
};
pub use gamma::{GammaSampler, SMALL_SHAPE};

use crate::error::{LevyError, Result};
use crate::rng::stream_rng;

/// Number of increments per generation chunk.
pub const CHUNK_LEN: usize = 1 << 16;

/// Equally spaced observation times `t_i = iΔ`, `i = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingScheme {
    pub delta: f64,
    pub n: usize,
    pub t_n: f64,
}

impl SamplingScheme {
    pub fn new(delta: f64, n: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(LevyError::parameter(format!("delta must be positive, got {delta}")));
        }
        if n == 0 {
            return Err(LevyError::parameter("n must be at least 1"));
        }
        let t_n = n as f64 * delta;
        if !t_n.is_finite() {
            return Err(LevyError::Range(format!("horizon n*delta overflows (n={n}, delta={delta})")));
        }
        Ok(SamplingScheme { delta, n, t_n })
    }

    pub fn num_chunks(&self) -> usize {
        self.n.div_ceil(CHUNK_LEN)
    }

    /// Index range of chunk `c`.
    pub fn chunk_range(&self, c: usize) -> std::ops::Range<usize> {
        let lo = c * CHUNK_LEN;
        lo..(lo + CHUNK_LEN).min(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceGammaParams {
    pub mu: f64,
    pub sigma: f64,
    pub nu: f64,
}

impl VarianceGammaParams {
    pub fn new(mu: f64, sigma: f64, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(LevyError::parameter(format!("nu must be positive, got {nu}")));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(LevyError::parameter(format!("sigma must be nonnegative, got {sigma}")));
        }
        if !mu.is_finite() {
            return Err(LevyError::parameter(format!("mu must be finite, got {mu}")));
        }
        Ok(VarianceGammaParams { mu, sigma, nu })
    }
}

/// Jump size law `G` of a compound Poisson process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum JumpLaw {
    PointMass(f64),
    Normal { mean: f64, sd: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl JumpLaw {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            JumpLaw::PointMass(c) => c.is_finite(),
            JumpLaw::Normal { mean, sd } => mean.is_finite() && sd > 0.0 && sd.is_finite(),
            JumpLaw::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
        };
        if ok {
            Ok(())
        } else {
            Err(LevyError::parameter(format!("invalid jump law {self:?}")))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            JumpLaw::PointMass(c) => c,
            JumpLaw::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            JumpLaw::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
        }
    }

    /// Lebesgue density of `G`, if it has one.
    pub fn density(&self, x: f64) -> Option<f64> {
        match *self {
            JumpLaw::PointMass(_) => None,
            JumpLaw::Normal { mean, sd } => {
                let z = (x - mean) / sd;
                Some((-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt()))
            }
            JumpLaw::Uniform { lo, hi } => Some(if x > lo && x < hi { 1.0 / (hi - lo) } else { 0.0 }),
        }
    }
}

/// Parses `point:c`, `normal:mean,sd` and `uniform:lo,hi`.
impl FromStr for JumpLaw {
    type Err = LevyError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| LevyError::parameter(format!("jump law `{s}` should look like kind:args")))?;
        let args: Vec<f64> = rest
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| LevyError::parameter(format!("jump law `{s}`: {e}")))?;
        let law = match (kind.trim(), args.as_slice()) {
            ("point", [c]) => JumpLaw::PointMass(*c),
            ("normal", [m, sd]) => JumpLaw::Normal { mean: *m, sd: *sd },
            ("uniform", [lo, hi]) => JumpLaw::Uniform { lo: *lo, hi: *hi },
            _ => return Err(LevyError::parameter(format!("unrecognized jump law `{s}`"))),
        };
        law.validate()?;
        Ok(law)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompoundPoissonParams {
    pub lambda: f64,
    pub jump: JumpLaw,
}

impl CompoundPoissonParams {
    pub fn new(lambda: f64, jump: JumpLaw) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(LevyError::parameter(format!("lambda must be positive, got {lambda}")));
        }
        jump.validate()?;
        Ok(CompoundPoissonParams { lambda, jump })
    }
}

/// Anything that can hand out the increments of a series chunk by chunk.
pub trait IncrementSource: Sync {
    fn scheme(&self) -> SamplingScheme;

    /// Replaces `out` with the increments of chunk `chunk`.
    fn fill_chunk(&self, chunk: usize, out: &mut Vec<f64>);
}

/// A materialized series of increments `Y_i = X(t_i) - X(t_{i-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSeries {
    pub scheme: SamplingScheme,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl IncrementSeries {
    pub fn new(scheme: SamplingScheme, values: Vec<f64>, seed: u64) -> Result<Self> {
        if values.len() != scheme.n {
            return Err(LevyError::Dimension { expected: scheme.n, got: values.len() });
        }
        Ok(IncrementSeries { scheme, values, seed })
    }

    /// Collects every chunk of `source` (in parallel, order preserved).
    pub fn materialize<S: IncrementSource + ?Sized>(source: &S, seed: u64) -> Self {
        let scheme = source.scheme();
        let chunks: Vec<Vec<f64>> = (0..scheme.num_chunks())
            .into_par_iter()
            .map(|c| {
                let mut buf = Vec::with_capacity(CHUNK_LEN);
                source.fill_chunk(c, &mut buf);
                buf
            })
            .collect();
        IncrementSeries { scheme, values: chunks.concat(), seed }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

impl IncrementSource for IncrementSeries {
    fn scheme(&self) -> SamplingScheme {
        self.scheme
    }

    fn fill_chunk(&self, chunk: usize, out: &mut Vec<f64>) {
        out.clear();
        out.extend_from_slice(&self.values[self.scheme.chunk_range(chunk)]);
    }
}

/// VG increments: `U ~ Gamma(Δ/ν, ν)`, `Y | U ~ N(μU, σ²U)`.
#[derive(Debug, Clone)]
pub struct VgSimulator {
    params: VarianceGammaParams,
    scheme: SamplingScheme,
    seed: u64,
    gamma: GammaSampler,
}

impl VgSimulator {
    pub fn new(params: VarianceGammaParams, scheme: SamplingScheme, seed: u64) -> Result<Self> {
        let params = VarianceGammaParams::new(params.mu, params.sigma, params.nu)?;
        let gamma = GammaSampler::new(scheme.delta / params.nu, params.nu)?;
        Ok(VgSimulator { params, scheme, seed, gamma })
    }

    pub fn params(&self) -> &VarianceGammaParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl IncrementSource for VgSimulator {
    fn scheme(&self) -> SamplingScheme {
        self.scheme
    }

    fn fill_chunk(&self, chunk: usize, out: &mut Vec<f64>) {
        let range = self.scheme.chunk_range(chunk);
        let mut rng = stream_rng(self.seed, chunk as u64);
        let VarianceGammaParams { mu, sigma, .. } = self.params;
        out.clear();
        out.extend(range.map(|_| {
            let u = self.gamma.sample(&mut rng);
            let z: f64 = StandardNormal.sample(&mut rng);
            mu * u + sigma * u.sqrt() * z
        }));
    }
}

/// Each increment is the sum of `Poisson(λΔ)` draws from the jump law.
#[derive(Debug, Clone)]
pub struct CompoundPoissonSimulator {
    params: CompoundPoissonParams,
    scheme: SamplingScheme,
    seed: u64,
    counts: Poisson<f64>,
}

impl CompoundPoissonSimulator {
    pub fn new(params: CompoundPoissonParams, scheme: SamplingScheme, seed: u64) -> Result<Self> {
        let params = CompoundPoissonParams::new(params.lambda, params.jump)?;
        let counts = Poisson::new(params.lambda * scheme.delta)
            .map_err(|e| LevyError::parameter(format!("Poisson rate lambda*delta: {e}")))?;
        Ok(CompoundPoissonSimulator { params, scheme, seed, counts })
    }
}

impl IncrementSource for CompoundPoissonSimulator {
    fn scheme(&self) -> SamplingScheme {
        self.scheme
    }

    fn fill_chunk(&self, chunk: usize, out: &mut Vec<f64>) {
        let range = self.scheme.chunk_range(chunk);
        let mut rng = stream_rng(self.seed, chunk as u64);
        out.clear();
        out.extend(range.map(|_| {
            let count = self.counts.sample(&mut rng) as u64;
            match self.params.jump {
                // exact integer multiple of the atom
                JumpLaw::PointMass(c) => count as f64 * c,
                law => (0..count).map(|_| law.sample(&mut rng)).sum(),
            }
        }));
    }
}

pub fn simulate_vg(params: VarianceGammaParams, scheme: SamplingScheme, seed: u64) -> Result<IncrementSeries> {
    let sim = VgSimulator::new(params, scheme, seed)?;
    Ok(IncrementSeries::materialize(&sim, seed))
}

pub fn simulate_compound_poisson(
    params: CompoundPoissonParams,
    scheme: SamplingScheme,
    seed: u64,
) -> Result<IncrementSeries> {
    let sim = CompoundPoissonSimulator::new(params, scheme, seed)?;
    Ok(IncrementSeries::materialize(&sim, seed))
}
