//! Orthonormality and the smoothness features of both basis families.
//!
//! ```text
//! cargo run --release --example basis_features
//! ```

use levy_gibbs::{BasisSystem, Window};

fn max_dev(g: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

fn main() -> levy_gibbs::Result<()> {
    let window = Window::new(0.005, 0.015)?;

    println!("trigonometric");
    println!("  K      F1          F2          Gram deviation");
    for k in [1usize, 5, 20, 80, 320] {
        let b = BasisSystem::trigonometric(window, k)?;
        let f = b.features();
        let dev = max_dev(&b.gram_matrix(8 * k.max(256))?);
        println!("  {k:<5}  {:<10.4e}  {:<10.4e}  {dev:.1e}", f.f1, f.f2);
    }

    println!("piecewise Legendre");
    println!("  J  L    K     F1          F2          Gram deviation");
    for (j, l) in [(1usize, 4usize), (3, 4), (3, 16), (5, 64)] {
        let b = BasisSystem::piecewise_legendre(window, j, l)?;
        let f = b.features();
        let dev = max_dev(&b.gram_matrix(4096)?);
        println!("  {j}  {l:<3}  {:<4}  {:<10.4e}  {:<10.4e}  {dev:.1e}", b.k(), f.f1, f.f2);
    }

    let b = BasisSystem::piecewise_legendre(window, 2, 3)?;
    println!("Legendre J=2 L=3 breakpoints {:?}", b.breakpoints());
    Ok(())
}
