//! End-to-end variance-gamma study over the three sampling regimes.
//!
//! ```text
//! cargo run --release --example variance_gamma_study -- [seed] [max_j]
//! ```

use levy_gibbs::harness::{no_overfit_diagnostic, rate_table, run_regime, study_vg_params, RegimeSpec, StudyOptions};
use levy_gibbs::GibbsConfig;

fn main() -> levy_gibbs::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let max_j: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);

    let config = GibbsConfig::default();
    let options = StudyOptions::default();
    let mut reports = Vec::new();
    for j in 1..=max_j {
        let spec = RegimeSpec::new(j)?;
        let r = run_regime(&spec, study_vg_params(), &config, &options, seed)?;
        println!(
            "j={} n={} t_n={} in-window={} K mode={} mean={:.2} err(proj)={:.1} err(mean)={:.1} \
             band c={:.1} covers={} P(far)={:.3} [{:.1}s]",
            j,
            spec.n(),
            spec.t_n(),
            r.in_window_increments,
            r.k_mode,
            r.k_mean,
            r.err_projection,
            r.err_postmean,
            r.band_radius,
            r.band_contains_truth,
            r.concentration_prob,
            r.runtime_secs
        );
        println!(
            "    |psi*|_L2(D)={:.1} radius={:.1} tau-check: beta>{:.3} ok={} / beta>omega C^2={:.3} ok={}",
            r.truth_l2_norm,
            r.concentration_radius,
            r.config_check.tau_threshold,
            r.config_check.tau_condition,
            r.config_check.omega_c_squared,
            r.config_check.beta_condition
        );
        reports.push(r);
    }
    if reports.len() >= 2 {
        println!("\nj  t_n     error      eps_n    ratio");
        for row in rate_table(&reports, options.alpha)? {
            println!("{}  {:<6}  {:<9.2}  {:.4}  {:.1}", row.j, row.t_n, row.error, row.eps_n, row.ratio);
        }
        println!("\nj  K_n  tau*K_n  P(K > tau*K_n)");
        for row in no_overfit_diagnostic(&reports, options.tau, options.alpha)? {
            println!("{}  {:<3}  {:<7}  {:.4}", row.j, row.k_oracle, row.threshold, row.mass_above);
        }
    }
    Ok(())
}
