//! Projection estimate of the variance-gamma Lévy density against the
//! projection of the true density, for growing basis sizes.
//!
//! ```text
//! cargo run --release --example projection_estimator -- [seed]
//! ```

use levy_gibbs::harness::{study_vg_params, RegimeSpec};
use levy_gibbs::process::VgSimulator;
use levy_gibbs::{
    empirical_coefficients, empirical_risk, l2_error_on, population_risk, project_density, true_density_vg_with,
    BasisSystem, ExponentSign, L2Reference, Window,
};

fn main() -> levy_gibbs::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let spec = RegimeSpec::new(2)?;
    let params = study_vg_params();
    let truth = true_density_vg_with(&params, ExponentSign::Decaying)?;
    let (d_prime, d) = (Window::new(0.005, 0.015)?, Window::new(0.006, 0.014)?);

    let big = BasisSystem::trigonometric(d_prime, 40)?;
    let sim = VgSimulator::new(params, spec.scheme, seed)?;
    let hat = empirical_coefficients(&sim, &big)?;
    let perp = project_density(&big, &truth, 4096)?.coefficients;
    println!("regime j={} n={} t_n={}", spec.j, spec.n(), spec.t_n());
    println!("  K    |est - psi|   |proj - psi|   R_n(theta_hat)   R(theta_perp)");
    for k in [1usize, 3, 5, 9, 15, 25, 40] {
        let h = hat.truncate(k)?;
        let p = perp.truncate(k)?;
        let e_hat = l2_error_on(&h, L2Reference::Density(&truth), &d, 1024)?;
        let e_perp = l2_error_on(&p, L2Reference::Density(&truth), &d, 1024)?;
        println!(
            "  {k:<3}  {e_hat:<12.2}  {e_perp:<13.2}  {:<15.1}  {:.1}",
            empirical_risk(&h, &h)?.value,
            population_risk(&p, &p)?.value
        );
    }
    Ok(())
}
