//! Matrix toolkit properties on random symmetric matrices: sorted spectra
//! are 1-Lipschitz in the operator norm, the operator and Frobenius norms
//! sandwich each other, and a rank-two diagonal perturbation saturates the
//! perturbation bound.
//!
//!     cargo run --example weyl_check

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

use curvlab::linalg::{norm_sandwich_check, weyl_gap};

fn random_symmetric(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.random_range(-1.0..1.0);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

fn main() -> curvlab::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let trials = 2000;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_sandwich = f64::NEG_INFINITY;
    for t in 0..trials {
        let n = 2 + t % 11;
        let a = random_symmetric(n, &mut rng);
        let b = random_symmetric(n, &mut rng);
        let gap = weyl_gap(&a, &b)?;
        worst_excess = worst_excess.max(gap.max_gap - gap.bound);
        let s = norm_sandwich_check(&a)?;
        worst_sandwich = worst_sandwich
            .max(s.op - s.frob)
            .max(s.frob - (n as f64).sqrt() * s.op);
        assert!(gap.holds && s.holds);
    }
    println!("{trials} random symmetric pairs up to 12x12");
    println!("  worst perturbation excess  max_gap - bound = {worst_excess:+.3e}");
    println!("  worst sandwich excess                      = {worst_sandwich:+.3e}");

    let delta = 0.37;
    let a = DMatrix::zeros(2, 2);
    let b = DMatrix::from_diagonal(&nalgebra::dvector![delta, -delta]);
    let gap = weyl_gap(&a, &b)?;
    println!("\nequality case A = 0, B = diag({delta}, {})", -delta);
    println!(
        "  max_gap {:.12}  bound {:.12}  |difference| {:.2e}",
        gap.max_gap,
        gap.bound,
        (gap.max_gap - gap.bound).abs()
    );
    Ok(())
}
