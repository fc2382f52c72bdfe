//! Direct numerical verification of the graded curvature-term lower bound:
//! with kappa the clamped average of the bottom m-p operator eigenvalues,
//! every unit k-form of admissible degree satisfies
//! `<Ric(alpha), alpha> >= kappa k(m-k)`.
//!
//!     cargo run --example pw_check

use curvlab::weitzenbock::{pw_bound_check, weitzenbock_constant};
use curvlab::{catalog_get, curvature_at};

fn main() -> curvlab::Result<()> {
    curvlab::verify_sign_convention()?;

    let cases: &[(&str, Option<&[f64]>)] = &[
        ("sphere[4,1]", Some(&[1.2, 0.8, 1.9, 2.5])),
        ("flat_torus[1,1,1,1]", Some(&[0.3, 0.4, 0.5, 0.6])),
        ("fubini_study_cp2", Some(&[0.2, 0.5, -0.1, 0.3])),
        ("berger_sphere[0.5]", None),
        ("heisenberg_nil[0.5]", None),
    ];

    for (name, x) in cases {
        let spec = catalog_get(name, &[])?;
        let cp = curvature_at(&spec, *x)?;
        println!("{name}");
        for p in 1..=cp.m / 2 {
            let rep = pw_bound_check(&cp, p, 1000, 42)?;
            println!(
                "  p = {p}: kappa {:+.8}  min slack {:+.3e}  holds {}",
                rep.kappa, rep.min_slack, rep.holds
            );
            for (k, slack) in &rep.per_degree {
                println!("      degree {k}: worst slack {slack:+.3e}");
            }
        }
        println!();
    }

    println!("uniform constant C(n) = max_k k(2n-k):");
    for n in 1..=6 {
        println!("  n = {n}: C = {}", weitzenbock_constant(n)?);
    }
    Ok(())
}
