//! Tour of the manifold catalog: every standard entry with its analytic
//! metadata and the curvature data at one representative point.
//!
//!     cargo run --example catalog_tour

use curvlab::catalog::{standard_entries, Geometry};
use curvlab::{assemble_curv_op, curvature_at, verify_sign_convention};

fn representative_point(spec: &curvlab::ManifoldSpec) -> Vec<f64> {
    fn rec(spec: &curvlab::ManifoldSpec, out: &mut Vec<f64>) {
        match &spec.geometry {
            Geometry::Chart(c) => {
                for (lo, hi) in c.domain() {
                    out.push(0.5 * (lo + hi) + 0.07 * (hi - lo));
                }
            }
            Geometry::Homogeneous(_) => {}
            Geometry::Product(a, b) => {
                rec(a, out);
                rec(b, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(spec, &mut out);
    out
}

fn main() -> curvlab::Result<()> {
    verify_sign_convention()?;
    for spec in standard_entries() {
        let x = representative_point(&spec);
        let cp = curvature_at(&spec, Some(&x))?;
        let op = assemble_curv_op(&cp)?;
        println!("{}", spec.name);
        println!("  dim {}, chi {:?}", spec.dim(), spec.euler_char);
        if let Some(d) = spec.diameter {
            println!(
                "  diameter {:.6} ({})",
                d.value,
                if d.is_exact() { "exact" } else { "upper bound" }
            );
        }
        if let Some(v) = spec.volume {
            println!("  volume   {v:.6}");
        }
        println!("  scalar curvature {:.6}", cp.scalar);
        let spectrum: Vec<String> = op.spectrum.iter().map(|l| format!("{l:+.6}")).collect();
        println!("  operator spectrum [{}]", spectrum.join(", "));
        println!();
    }
    Ok(())
}
