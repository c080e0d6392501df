//! Test-only oracles, independent of the crate's quadrature and summation code.
#![allow(dead_code)]

/// 5-point Gauss–Legendre rule on [-1, 1] (tabulated constants).
const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Nodes and weights of a composite 5-point rule with `panels` panels on [a, b].
pub fn gl5_composite(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(5 * panels);
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        for i in 0..5 {
            out.push((mid + 0.5 * h * GL5_X[i], 0.5 * h * GL5_W[i]));
        }
    }
    out
}

/// Composite Simpson rule with `intervals` (even) subintervals.
pub fn simpson(a: f64, b: f64, intervals: usize, f: impl Fn(f64) -> f64) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance and the standard error of the sample variance.
pub fn variance_with_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    (m2, ((m4 - m2 * m2) / n).sqrt())
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Study value of σ, restated independently of the crate.
pub fn study_sigma() -> f64 {
    3.7 * 10f64.powf(-1.5)
}

/// `ν⁻¹|x|⁻¹e^{-|x|/η}` with `η = σ(ν/2)^{1/2}` (driftless VG).
pub fn vg_density_decaying(x: f64) -> f64 {
    let nu = 2e-3;
    let eta = study_sigma() * (nu / 2.0f64).sqrt();
    (-x.abs() / eta).exp() / (nu * x.abs())
}

/// log of `exp(−ωt_n R_n(θ)) · N(θ; 0, σ₀² I)` in `K = θ.len()` dimensions.
pub fn log_gibbs_integrand(theta: &[f64], theta_hat: &[f64], wt: f64, sigma0: f64) -> f64 {
    let k = theta.len() as f64;
    let risk: f64 = theta.iter().zip(theta_hat).map(|(t, h)| t * t - 2.0 * t * h).sum();
    let norm: f64 = theta.iter().map(|t| t * t).sum();
    -wt * risk - norm / (2.0 * sigma0 * sigma0) - 0.5 * k * (2.0 * std::f64::consts::PI * sigma0 * sigma0).ln()
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}


/// Evidence of each `K ≤ 3` by tensor Gauss–Legendre quadrature.
pub fn tensor_evidence(theta_hat: &[f64], wt: f64, sigma0: f64, k: usize) -> (f64, Vec<f64>) {
    let prec = 2.0 * wt + 1.0 / (sigma0 * sigma0);
    let sd = prec.recip().sqrt();
    let rules: Vec<Vec<(f64, f64)>> = (0..k)
        .map(|i| {
            let c = 2.0 * wt * theta_hat[i] / prec;
            gl5_composite(c - 12.0 * sd, c + 12.0 * sd, 60)
        })
        .collect();
    let (mut z, mut first) = (0.0, vec![0.0; k]);
    let mut idx = vec![0usize; k];
    let len = rules[0].len();
    let mut theta = vec![0.0; k];
    loop {
        let mut w = 1.0;
        for d in 0..k {
            theta[d] = rules[d][idx[d]].0;
            w *= rules[d][idx[d]].1;
        }
        let f = w * log_gibbs_integrand(&theta, &theta_hat[..k], wt, sigma0).exp();
        z += f;
        for d in 0..k {
            first[d] += f * theta[d];
        }
        let mut d = 0;
        while d < k {
            idx[d] += 1;
            if idx[d] < len {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == k {
            break;
        }
    }
    (z, first.iter().map(|f| f / z).collect())
}

