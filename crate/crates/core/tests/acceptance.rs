//! Acceptance criteria. Runs without the libtest harness so every line prints:
//!
//! ```text
//! cargo test --release --test acceptance
//! ```

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{log_sum_exp, tensor_evidence, variance_with_se};
use levy_gibbs::harness::{
    no_overfit_diagnostic, rate_table, regime_n, run_regime, study_vg_params, ExperimentReport, RegimeSpec,
    StudyOptions,
};
use levy_gibbs::process::VgSimulator;
use levy_gibbs::{
    conditional_posterior, empirical_coefficients, empirical_risk, marginal_k, sample_posterior, simulate_vg,
    BasisSystem, CoefficientRole, CoefficientVector, GibbsConfig, SamplingScheme, VarianceGammaParams, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASTER_SEED: u64 = 7;

// Regression fixture for MASTER_SEED, frozen from the first verified run.
const FIXTURE_K_MODE: [usize; 3] = [5, 9, 15];
const FIXTURE_ERR_POSTMEAN: [f64; 3] = [147.064_667_581_509_3, 70.037_674_689_348_05, 29.351_613_302_662_784];
const FIXTURE_MASS_ABOVE: [f64; 2] = [0.998_249_075_124_985, 0.999_999_999_878_053_5];
const FIXTURE_REL_TOL: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn d_prime() -> Window {
    Window::new(0.005, 0.015).unwrap()
}

fn regime_arithmetic() -> Outcome {
    let spec = RegimeSpec::new(3).unwrap();
    // Δ^{-5/3} = (1e3·2^9)^{5/3} = 1e5·2^15, so 0.05Δ^{-5/3} = 163 840 000 with no rounding
    let n_exact = 163_840_000usize;
    let t_err = (spec.t_n() - 320.0).abs();
    let pass = spec.n() == n_exact && regime_n(spec.delta()) == n_exact && t_err <= 1e-9;
    outcome(pass, format!("n = {}, t_n = {} (|t_n - 320| = {t_err:.1e}, tol 1e-9)", spec.n(), spec.t_n()))
}

fn max_identity_deviation(g: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

fn basis_correctness() -> Outcome {
    let trig = BasisSystem::trigonometric(d_prime(), 20).unwrap().gram_matrix(2000).unwrap();
    let leg = BasisSystem::piecewise_legendre(d_prime(), 3, 4).unwrap().gram_matrix(2000).unwrap();
    let (a, b) = (max_identity_deviation(&trig), max_identity_deviation(&leg));
    outcome(a < 1e-8 && b < 1e-8, format!("trig K=20 dev {a:.1e}, Legendre J=3 L=4 dev {b:.1e} (tol 1e-8)"))
}

fn conjugacy_oracle() -> Outcome {
    let t_n = 20.0;
    let cfg = GibbsConfig { k_max: Some(3), ..Default::default() };
    let wt = cfg.omega * t_n;
    let th = [200.0, 130.0, 110.0];
    let basis = BasisSystem::trigonometric(d_prime(), 3).unwrap();
    let hat = |k: usize| {
        CoefficientVector::new(basis.with_k(k).unwrap(), th[..k].to_vec(), CoefficientRole::Empirical).unwrap()
    };
    let mk = marginal_k(&hat(3), t_n, &cfg).unwrap();
    let mut logs = Vec::new();
    let mut mean_err = 0.0f64;
    for k in 1..=3 {
        let (z, means) = tensor_evidence(&th, wt, cfg.sigma0, k);
        let kf = k as f64;
        logs.push(z.ln() - cfg.beta * if k == 1 { 0.0 } else { kf * kf.ln() });
        let c = conditional_posterior(&hat(k), t_n, &cfg).unwrap();
        for (a, b) in c.means.iter().zip(&means) {
            mean_err = mean_err.max((a - b).abs() / b.abs());
        }
    }
    let norm = log_sum_exp(&logs);
    let pmf_err = (1..=3).map(|k| (mk.prob(k) - (logs[k - 1] - norm).exp()).abs()).fold(0.0f64, f64::max);
    outcome(
        mean_err < 1e-6 && pmf_err < 1e-8,
        format!("means rel err {mean_err:.1e} (tol 1e-6), pmf abs err {pmf_err:.1e} (tol 1e-8)"),
    )
}

fn risk_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let basis = BasisSystem::trigonometric(d_prime(), 20).unwrap();
    let mut vec = |scale: f64| {
        let v = (0..20).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
        CoefficientVector::new(basis, v, CoefficientRole::Draw).unwrap()
    };
    let dist = |a: &CoefficientVector, b: &CoefficientVector| -> f64 {
        a.values.iter().zip(&b.values).map(|(x, y)| (x - y).powi(2)).sum()
    };
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (hat, t1, t2) = (vec(100.0), vec(100.0), vec(100.0));
        let lhs = empirical_risk(&t1, &hat).unwrap().value - empirical_risk(&t2, &hat).unwrap().value;
        let rhs = dist(&t1, &hat) - dist(&t2, &hat);
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    outcome(worst < 1e-12, format!("max rel err {worst:.1e} over 1000 pairs (tol 1e-12)"))
}

fn simulator_moments() -> Outcome {
    let sigma = common::study_sigma();
    let p = VarianceGammaParams::new(0.0, sigma, 2e-3).unwrap();
    let s = SamplingScheme::new(1e-3, 1_000_000).unwrap();
    let y = simulate_vg(p, s, MASTER_SEED).unwrap().values;
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let (var, var_se) = variance_with_se(&y);
    let mean_se = (var / n).sqrt();
    let target = sigma * sigma * 1e-3;
    let (zm, zv) = (mean / mean_se, (var - target) / var_se);
    outcome(zm.abs() < 4.0 && zv.abs() < 4.0, format!("mean z = {zm:.2}, variance z = {zv:.2} (tol 4 SE)"))
}

fn fixture_matches(got: f64, frozen: f64) -> bool {
    (got - frozen).abs() <= FIXTURE_REL_TOL * frozen.abs().max(1e-300)
}

fn concentration_direction(reports: &[ExperimentReport]) -> Outcome {
    let errs: Vec<f64> = reports.iter().map(|r| r.err_postmean).collect();
    let modes: Vec<usize> = reports.iter().map(|r| r.k_mode).collect();
    let strictly_decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let nondecreasing = modes.windows(2).all(|w| w[1] >= w[0]);
    let frozen = errs.iter().zip(FIXTURE_ERR_POSTMEAN).all(|(&g, f)| fixture_matches(g, f))
        && modes.iter().zip(FIXTURE_K_MODE).all(|(&g, f)| g == f);
    outcome(
        strictly_decreasing && nondecreasing && frozen,
        format!("err_postmean {errs:?}, K mode {modes:?}, fixture {}", if frozen { "ok" } else { "MISMATCH" }),
    )
}

fn no_overfit(reports: &[ExperimentReport]) -> Outcome {
    let rows = no_overfit_diagnostic(reports, 2.0, 2.0).unwrap();
    let mass: Vec<f64> = rows.iter().map(|r| r.mass_above).collect();
    let thresholds: Vec<f64> = rows.iter().map(|r| r.threshold).collect();
    let frozen = mass.iter().zip(FIXTURE_MASS_ABOVE).all(|(&g, f)| fixture_matches(g, f));
    outcome(
        mass[1] <= mass[0] && frozen,
        format!(
            "P(K > 2K_n) = {mass:?} at thresholds {thresholds:?}; need j=2 <= j=1, fixture {}",
            if frozen { "ok" } else { "MISMATCH" }
        ),
    )
}

fn pmf_hygiene(report: &ExperimentReport) -> Outcome {
    let pmf = &report.k_posterior;
    let sum: f64 = pmf.probs.iter().sum();
    let finite = pmf.probs.iter().all(|p| p.is_finite() && *p >= 0.0) && pmf.log_weights.iter().all(|w| w.is_finite());
    let top = pmf.log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // exp(top) overflows f64 beyond ~709.78, so only a log-space normalization survives
    outcome(
        pmf.k_max() == 320 && finite && (sum - 1.0).abs() < 1e-12 && top > 709.78,
        format!("k_max = {}, |sum - 1| = {:.1e} (tol 1e-12), max log weight {top:.1}", pmf.k_max(), (sum - 1.0).abs()),
    )
}

fn sampler_frequencies() -> Outcome {
    let spec = RegimeSpec::new(1).unwrap();
    let sim = VgSimulator::new(study_vg_params(), spec.scheme, MASTER_SEED).unwrap();
    let basis = BasisSystem::trigonometric(d_prime(), 20).unwrap();
    let hat = empirical_coefficients(&sim, &basis).unwrap();
    let cfg = GibbsConfig { grid_points: 2, ..Default::default() };
    let pmf = marginal_k(&hat, spec.t_n(), &cfg).unwrap();
    let n = 100_000;
    let draws = sample_posterior(&hat, spec.t_n(), &cfg, n, MASTER_SEED).unwrap();
    let mut counts = vec![0usize; pmf.k_max()];
    for d in &draws.draws {
        counts[d.k() - 1] += 1;
    }
    // 3 SE per cell; over the m cells with p > 1e-6 the family-wise false-alarm rate is at most m·0.27%
    let mut worst = 0.0f64;
    let mut cells = 0;
    let mut pass = true;
    for (k, &c) in counts.iter().enumerate() {
        let p = pmf.prob(k + 1);
        let f = c as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        if p > 1e-6 {
            cells += 1;
            let z = (f - p).abs() / se;
            worst = worst.max(z);
            pass &= z < 3.0;
        } else {
            // expected count below 0.1: any hit at all is implausible
            pass &= c <= 1;
        }
    }
    outcome(
        pass,
        format!("max |z| = {worst:.2} over {cells} cells (tol 3 SE, family-wise rate <= {:.1}%)", cells as f64 * 0.27),
    )
}

fn rate_boundedness(reports: &[ExperimentReport]) -> Outcome {
    let rows = rate_table(reports, 2.0).unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    outcome(hi / lo <= 4.0, format!("error/eps_n = {ratios:.1?}, spread {:.2} (tol 4)", hi / lo))
}

fn main() -> ExitCode {
    let mut results: Vec<(String, Outcome)> = Vec::new();
    let mut record = |name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!(
            "{} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push((name.to_string(), o));
    };

    record("1 regime arithmetic", &mut regime_arithmetic);
    record("2 basis correctness", &mut basis_correctness);
    record("3 conjugacy oracle", &mut conjugacy_oracle);
    record("4 risk identity", &mut risk_identity);
    record("5 simulator moments", &mut simulator_moments);

    let started = Instant::now();
    let options = StudyOptions::default();
    let reports: Vec<ExperimentReport> = (1..=3)
        .map(|j| {
            run_regime(&RegimeSpec::new(j).unwrap(), study_vg_params(), &GibbsConfig::default(), &options, MASTER_SEED)
                .unwrap()
        })
        .collect();
    println!("     study regimes j=1..3 with seed {MASTER_SEED} [{:.1}s]", started.elapsed().as_secs_f64());

    record("6 concentration direction", &mut || concentration_direction(&reports));
    record("7 no-overfit diagnostic", &mut || no_overfit(&reports[..2]));
    record("8 pmf hygiene", &mut || pmf_hygiene(&reports[2]));
    record("9 hierarchical sampler", &mut sampler_frequencies);
    record("rate-table boundedness", &mut || rate_boundedness(&reports));

    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| n.as_str()).collect();
    println!("\n{} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
