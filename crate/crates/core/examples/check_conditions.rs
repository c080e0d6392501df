//! Sampling-frequency and learning-rate conditions across the study regimes.
//!
//! ```text
//! cargo run --release --example check_conditions
//! ```

use levy_gibbs::harness::{delta_condition, study_vg_params, ComplexityCase, RegimeSpec};
use levy_gibbs::{true_density_vg_with, validate_config, BasisSystem, ExponentSign, GibbsConfig};

fn main() -> levy_gibbs::Result<()> {
    let config = GibbsConfig::default();
    for j in 1..=3 {
        let spec = RegimeSpec::new(j)?;
        let k = config.k_max_for(spec.t_n());
        let features = BasisSystem::trigonometric(config.d_prime, k)?.features();
        println!("j={j} delta={:e} n={} t_n={} K={k}", spec.delta(), spec.n(), spec.t_n());
        let general = delta_condition(&features, &spec.scheme, ComplexityCase::PriorOnK, 1.0);
        println!(
            "  n d^3={:.3e} n d^2={:.3e} n d^(5/3)={:.4}  F1^2 n d^3={:.3e} F2 d={:.3e} general {}",
            general.n_delta3,
            general.n_delta2,
            general.n_delta_5_3,
            general.f1_term,
            general.f2_term,
            general.general_pass
        );
        for case in [ComplexityCase::FixedK, ComplexityCase::IncreasingK, ComplexityCase::PriorOnK] {
            println!("  {case:?}: {}", delta_condition(&features, &spec.scheme, case, 1.0).case_pass);
        }
    }

    let truth = true_density_vg_with(&study_vg_params(), ExponentSign::Decaying)?;
    let sup = truth.sup_on(config.d.a, config.d.b, 2048)?;
    println!("sup_D psi = {sup:.1}");
    for tau in [1.5, 2.0, 3.0, 5.0] {
        let c = validate_config(&config, sup, tau);
        println!(
            "  tau={tau}: omega C^2={:.4} beta ok {} (margin {:.4}); threshold {:.4} ok {}",
            c.omega_c_squared, c.beta_condition, c.beta_margin, c.tau_threshold, c.tau_condition
        );
    }
    Ok(())
}
