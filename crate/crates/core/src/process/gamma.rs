//! Gamma variates for shapes far below one.
//!
//! The VG increments need `Gamma(Δ/ν, ν)` with `Δ/ν` as small as ~10⁻³. At that
//! shape the usual boost `G(a+1)·U^{1/a}` underflows for most uniforms, so for
//! small shapes we sample `log X` directly with the rejection scheme of Liu,
//! Martin and Syring (2017): with `Z = -a log X` the density of `Z` is
//! proportional to `exp(-z - e^{-z/a})`, which is enveloped by an exponential
//! on `z >= 0` and by `e^{-1} e^{λz}`, `λ = 1/a - 1`, on `z < 0`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{LevyError, Result};

/// Below this shape the log-scale rejection sampler is used.
pub const SMALL_SHAPE: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct GammaSampler {
    shape: f64,
    scale: f64,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Small { lambda: f64, r: f64 },
    Regular(Gamma<f64>),
}

impl GammaSampler {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(LevyError::parameter(format!("gamma shape must be positive, got {shape}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(LevyError::parameter(format!("gamma scale must be positive, got {scale}")));
        }
        let kind = if shape < SMALL_SHAPE {
            let lambda = 1.0 / shape - 1.0;
            let w = shape / (std::f64::consts::E * (1.0 - shape));
            Kind::Small { lambda, r: 1.0 / (1.0 + w) }
        } else {
            let g = Gamma::new(shape, 1.0)
                .map_err(|e| LevyError::parameter(format!("gamma distribution: {e}")))?;
            Kind::Regular(g)
        };
        Ok(GammaSampler { shape, scale, kind })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    /// `log X` for `X ~ Gamma(shape, 1)`. Finite even when `X` itself would underflow.
    pub fn sample_log_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            Kind::Small { lambda, r } => {
                let a = self.shape;
                loop {
                    let u: f64 = rng.random();
                    let z = if u <= *r {
                        -(u / r).ln()
                    } else {
                        let v: f64 = rng.random();
                        // (0, 1] keeps the log finite
                        (1.0 - v).ln() / lambda
                    };
                    // log h(z) - log envelope(z)
                    let log_ratio = if z >= 0.0 {
                        -(-z / a).exp()
                    } else {
                        -z - (-z / a).exp() + 1.0 - lambda * z
                    };
                    let v: f64 = rng.random();
                    if v.ln() <= log_ratio {
                        return -z / a;
                    }
                }
            }
            Kind::Regular(g) => g.sample(rng).ln(),
        }
    }

    /// A `Gamma(shape, scale)` variate (density ∝ x^{shape-1} e^{-x/scale}).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            Kind::Regular(g) => self.scale * g.sample(rng),
            Kind::Small { .. } => self.scale * self.sample_log_unit(rng).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use statrs::function::gamma::digamma;

    fn trigamma(x: f64) -> f64 {
        // recurrence up to x >= 10, then the asymptotic series
        let mut x = x;
        let mut acc = 0.0;
        while x < 10.0 {
            acc += 1.0 / (x * x);
            x += 1.0;
        }
        let x2 = x * x;
        acc + 1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x2 * x) - 1.0 / (30.0 * x2 * x2 * x)
            + 1.0 / (42.0 * x2 * x2 * x2 * x)
    }

    fn check_log_moments(shape: f64) {
        let s = GammaSampler::new(shape, 1.0).unwrap();
        let mut rng = stream_rng(11, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| s.sample_log_unit(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let expect_mean = digamma(shape);
        let expect_var = trigamma(shape);
        let se = (expect_var / n as f64).sqrt();
        assert!((mean - expect_mean).abs() < 4.0 * se, "shape {shape}: mean {mean} vs {expect_mean}");
        assert!((var / expect_var - 1.0).abs() < 0.03, "shape {shape}: var {var} vs {expect_var}");
    }

    #[test]
    fn log_moments_match_digamma_trigamma() {
        for shape in [1e-3, 1e-2, 0.0625, 0.3, 0.5, 2.0] {
            check_log_moments(shape);
        }
    }

    #[test]
    fn mean_and_variance_at_tiny_shape() {
        let shape = 9.765625e-4;
        let s = GammaSampler::new(shape, 1.0).unwrap();
        let mut rng = stream_rng(3, 0);
        let n = 2_000_000;
        let xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        // Var X = shape, so SE of the mean is sqrt(shape / n)
        let se = (shape / n as f64).sqrt();
        assert!((mean - shape).abs() < 4.0 * se, "mean {mean} vs {shape}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GammaSampler::new(0.0, 1.0).is_err());
        assert!(GammaSampler::new(1.0, -1.0).is_err());
        assert!(GammaSampler::new(f64::NAN, 1.0).is_err());
    }
}
