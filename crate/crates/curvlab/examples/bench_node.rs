use std::time::Instant;
use curvlab::*;
fn main() {
    for (name, order) in [("flat_torus[1,1,1,1]", 16), ("sphere[4,1]", 16), ("fubini_study_cp2", 16), ("product:sphere[2,1],sphere[2,1]", 16)] {
        let spec = catalog_get(name, &[]).unwrap();
        let t = Instant::now();
        let run = gauss_bonnet::euler_characteristic(&spec, order).unwrap();
        let el = t.elapsed();
        println!("{name:<36} order {order}: {} nodes in {:?} -> {:.2} us/node, chi {}", run.nodes, el, el.as_secs_f64()*1e6/run.nodes as f64, run.chi_est);
    }
}
