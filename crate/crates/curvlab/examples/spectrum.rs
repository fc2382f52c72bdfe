//! Curvature-operator spectra of catalog metrics, with the norm pair and
//! partial eigenvalue sums that the eigenvalue conditions are built from.
//!
//!     cargo run --example spectrum

use curvlab::{assemble_curv_op, catalog_get, curvature_at, partial_eig_sum};

fn main() -> curvlab::Result<()> {
    curvlab::verify_sign_convention()?;

    let cases: &[(&str, Option<&[f64]>)] = &[
        ("sphere[4,1]", Some(&[1.2, 0.8, 1.9, 2.5])),
        ("flat_torus[1,1,1,1]", Some(&[0.3, 0.4, 0.5, 0.6])),
        ("product:sphere[2,1],sphere[2,1]", Some(&[1.0, 2.0, 0.9, 3.0])),
        ("fubini_study_cp2", Some(&[0.3, -0.2, 0.7, 1.1])),
        ("berger_sphere[0.5]", None),
        ("heisenberg_nil[0.5]", None),
    ];

    for (name, x) in cases {
        let spec = catalog_get(name, &[])?;
        let cp = curvature_at(&spec, *x)?;
        let op = assemble_curv_op(&cp)?;
        let spectrum: Vec<String> = op.spectrum.iter().map(|l| format!("{l:+.8}")).collect();
        println!("{name}");
        println!("  spectrum  [{}]", spectrum.join(", "));
        println!("  op norm   {:.8}", op.op_norm);
        println!("  frob norm {:.8}", op.frob_norm);
        // leading partial sums, the quantities graded positivity reads off
        let sums: Vec<String> = (1..=op.n.min(3))
            .map(|c| format!("{:+.8}", partial_eig_sum(&op, c).unwrap()))
            .collect();
        println!("  partial sums (1..={}) [{}]", op.n.min(3), sums.join(", "));
        println!();
    }
    Ok(())
}
