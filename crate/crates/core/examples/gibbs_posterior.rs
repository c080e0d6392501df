//! Gibbs posterior for one regime: the pmf of K, a sup-norm credible band and
//! the posterior mean, written as CSV to a temporary directory.
//!
//! ```text
//! cargo run --release --example gibbs_posterior -- [seed] [j]
//! ```

use std::fs;

use levy_gibbs::harness::{study_vg_params, RegimeSpec};
use levy_gibbs::io::{band_csv, k_posterior_csv};
use levy_gibbs::posterior::sample_fixed_k;
use levy_gibbs::process::VgSimulator;
use levy_gibbs::{
    credible_band, empirical_coefficients, marginal_k, sample_posterior, true_density_vg_with, BandMetric,
    BasisSystem, ExponentSign, GibbsConfig,
};

fn main() -> levy_gibbs::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let j: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let spec = RegimeSpec::new(j)?;
    let config = GibbsConfig::default();
    let t_n = spec.t_n();
    let basis = BasisSystem::trigonometric(config.d_prime, config.k_max_for(t_n))?;
    let hat = empirical_coefficients(&VgSimulator::new(study_vg_params(), spec.scheme, seed)?, &basis)?;

    let pmf = marginal_k(&hat, t_n, &config)?;
    println!("j={j} t_n={t_n}: K mode {} mean {:.2}", pmf.mode(), pmf.mean());
    for k in 1..=pmf.k_max() {
        if pmf.prob(k) > 1e-3 {
            println!("  P(K={k}) = {:.4}", pmf.prob(k));
        }
    }

    let draws = sample_posterior(&hat, t_n, &config, 2000, seed)?;
    let truth = true_density_vg_with(&study_vg_params(), ExponentSign::Decaying)?;
    let psi: Vec<f64> = draws.grid.iter().map(|&x| truth.eval(x)).collect::<levy_gibbs::Result<_>>()?;
    for metric in [BandMetric::Sup, BandMetric::L2] {
        let band = credible_band(&draws, 0.9, metric)?;
        println!("  90% {metric:?} band: radius {:.1}, contains truth {}", band.radius, band.contains(&psi));
    }

    let fixed = sample_fixed_k(&hat, t_n, &config, pmf.mode(), 2000, seed)?;
    let fixed_band = credible_band(&fixed, 0.9, BandMetric::Sup)?;
    println!("  fixed K={} sup band radius {:.1}", pmf.mode(), fixed_band.radius);

    let dir = std::env::temp_dir().join(format!("levy_gibbs_posterior_j{j}"));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("k_posterior.csv"), k_posterior_csv(&[(Some(j), &pmf)]))?;
    fs::write(dir.join("band.csv"), band_csv(&credible_band(&draws, 0.9, BandMetric::Sup)?, Some(&psi)))?;
    println!("wrote {}", dir.display());
    Ok(())
}
