//! The certified quantity lambda_k * diam^2 is invariant under constant
//! metric rescaling: eigenvalues scale by 1/c^2, squared diameters by c^2.
//!
//!     cargo run --example scale_check

use curvlab::anco::scale_invariance_check;
use curvlab::catalog_get;

fn main() -> curvlab::Result<()> {
    curvlab::verify_sign_convention()?;

    let entries = [
        "sphere[2,1]",
        "sphere[4,1]",
        "flat_torus[1,1,1,1]",
        "product:sphere[2,1],sphere[2,1]",
        "fubini_study_cp2",
    ];
    println!("max relative deviation of lambda_k * diam^2 under g -> c^2 g\n");
    for name in entries {
        let spec = catalog_get(name, &[])?;
        print!("  {name:<36}");
        for c in [0.5, 2.0, 10.0] {
            let dev = scale_invariance_check(&spec, c, 8)?;
            print!("  c={c:<4} {dev:.2e}");
        }
        println!();
    }
    println!("\nentries with only an upper-bound diameter refuse the check:");
    let heis = catalog_get("heisenberg_nil[0.5]", &[])?;
    match scale_invariance_check(&heis, 2.0, 1) {
        Err(e) => println!("  heisenberg_nil[0.5]: {e}"),
        Ok(_) => unreachable!("upper-bound diameter must be refused"),
    }
    Ok(())
}
