//! Simulates a variance-gamma and a compound Poisson series and compares the
//! sample moments with the analytic ones.
//!
//! ```text
//! cargo run --release --example simulate_processes -- [seed]
//! ```

use levy_gibbs::io::save_increments;
use levy_gibbs::{
    simulate_compound_poisson, simulate_vg, CompoundPoissonParams, JumpLaw, SamplingScheme, VarianceGammaParams,
};

fn moments(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n)
}

fn main() -> levy_gibbs::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);

    let vg = VarianceGammaParams::new(0.5, 0.1, 1e-2)?;
    let scheme = SamplingScheme::new(1e-3, 1_000_000)?;
    let series = simulate_vg(vg, scheme, seed)?;
    let (m, v) = moments(&series.values);
    println!("variance gamma  mu={} sigma={} nu={}  delta={} n={}", vg.mu, vg.sigma, vg.nu, scheme.delta, scheme.n);
    println!("  mean     {m:.6e}  (exact {:.6e})", vg.mu * scheme.delta);
    println!(
        "  variance {v:.6e}  (exact {:.6e})",
        (vg.sigma * vg.sigma + vg.mu * vg.mu * vg.nu) * scheme.delta
    );

    for jump in ["point:1", "normal:0,1", "uniform:-1,2"] {
        let law: JumpLaw = jump.parse()?;
        let p = CompoundPoissonParams::new(2.0, law)?;
        let s = SamplingScheme::new(0.5, 200_000)?;
        let y = simulate_compound_poisson(p, s, seed)?;
        let (m, v) = moments(&y.values);
        let zeros = y.values.iter().filter(|&&x| x == 0.0).count() as f64 / s.n as f64;
        println!("compound poisson lambda=2 jump={jump}: mean {m:.4} variance {v:.4} P(no jump) {zeros:.4} (exact {:.4})", (-1.0f64).exp());
    }

    let out = std::env::temp_dir().join("levy_gibbs_vg_increments.txt");
    let small = simulate_vg(vg, SamplingScheme::new(1e-3, 1000)?, seed)?;
    save_increments(&small, &out)?;
    println!("wrote 1000 increments to {}", out.display());
    Ok(())
}
