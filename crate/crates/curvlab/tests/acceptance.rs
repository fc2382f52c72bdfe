//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured quantities (run with `-- --nocapture` to see them).
//!
//! Every tolerance and runtime budget is pinned here in code.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use curvlab::anco::{certify_condition, scale_invariance_check, Condition, FamilySpec};
use curvlab::catalog::{catalog_get, standard_entries, Geometry, ManifoldSpec};
use curvlab::gauss_bonnet::{
    euler_characteristic, nonneg_operator_implies_nonneg_integrand, volume_lower_bound_check,
    GaussBonnetOptions,
};
use curvlab::linalg::{norm_sandwich_check, weyl_gap};
use curvlab::weitzenbock::{pw_bound_check, ric_form_matrix, weitzenbock_constant};
use curvlab::{assemble_curv_op, curvature_at, partial_eig_sum, verify_sign_convention};

fn report(name: &str, pass: bool, details: &str) {
    println!(
        "ACCEPTANCE {name}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {details}");
}

fn random_point(spec: &ManifoldSpec, rng: &mut impl Rng) -> Vec<f64> {
    fn rec(spec: &ManifoldSpec, rng: &mut impl Rng, out: &mut Vec<f64>) {
        match &spec.geometry {
            Geometry::Chart(c) => {
                for (lo, hi) in c.domain() {
                    let pad = 0.1 * (hi - lo);
                    out.push(rng.random_range(lo + pad..hi - pad));
                }
            }
            Geometry::Homogeneous(_) => {}
            Geometry::Product(a, b) => {
                rec(a, rng, out);
                rec(b, rng, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(spec, rng, &mut out);
    out
}

struct ChiCase {
    name: &'static str,
    chi: f64,
    tol: f64,
    order: usize,
    budget: Duration,
}

#[test]
fn euler_characteristics_via_quadrature() {
    verify_sign_convention().unwrap();
    let cases = [
        ChiCase {
            name: "sphere[2,1]",
            chi: 2.0,
            tol: 1e-6,
            order: 32,
            budget: Duration::from_secs(1),
        },
        ChiCase {
            // integrand is identically zero; a small grid is already exact
            name: "flat_torus[1,1,1,1]",
            chi: 0.0,
            tol: 1e-9,
            order: 8,
            budget: Duration::from_secs(1),
        },
        ChiCase {
            name: "sphere[4,1]",
            chi: 2.0,
            tol: 1e-3,
            order: 32,
            budget: Duration::from_secs(30),
        },
        ChiCase {
            name: "product:sphere[2,1],sphere[2,1]",
            chi: 4.0,
            tol: 1e-3,
            order: 32,
            budget: Duration::from_secs(60),
        },
        ChiCase {
            name: "fubini_study_cp2",
            chi: 3.0,
            tol: 1e-2,
            order: 32,
            budget: Duration::from_secs(300),
        },
    ];
    for case in cases {
        let spec = catalog_get(case.name, &[]).unwrap();
        let started = Instant::now();
        let run = euler_characteristic(&spec, case.order).unwrap();
        let elapsed = started.elapsed();
        let residual = (run.chi_est - case.chi).abs();
        let rounded_ok = run.chi_est.round() == case.chi;
        let pass = residual <= case.tol && rounded_ok && elapsed <= case.budget;
        report(
            "euler_characteristics_via_quadrature",
            pass,
            &format!(
                "{}: chi_est {:.8}, residual {:.2e} <= {:.0e}, rounded exact {}, {:.2?} <= {:?}",
                case.name, run.chi_est, residual, case.tol, rounded_ok, elapsed, case.budget
            ),
        );
    }
}

#[test]
fn curvature_operator_spectra() {
    let s4 = catalog_get("sphere[4,1]", &[]).unwrap();
    let op = assemble_curv_op(&curvature_at(&s4, Some(&[1.2, 0.8, 1.9, 2.5])).unwrap()).unwrap();
    let dev = op
        .spectrum
        .iter()
        .map(|l| (l - 1.0).abs())
        .fold(0.0f64, f64::max);
    report(
        "curvature_operator_spectra",
        dev <= 1e-8,
        &format!("unit S4 spectrum deviation from (1,..,1): {dev:.2e} <= 1e-8"),
    );

    let prod = catalog_get("product:sphere[2,1],sphere[2,1]", &[]).unwrap();
    let op = assemble_curv_op(&curvature_at(&prod, Some(&[1.0, 2.0, 0.9, 3.0])).unwrap()).unwrap();
    let expect = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0];
    let dev = op
        .spectrum
        .iter()
        .zip(expect)
        .map(|(l, e)| (l - e).abs())
        .fold(0.0f64, f64::max);
    let sum2 = partial_eig_sum(&op, 2).unwrap();
    report(
        "curvature_operator_spectra",
        dev <= 1e-8 && sum2.abs() <= 1e-8,
        &format!(
            "S2xS2 spectrum deviation from (0,0,0,0,1,1): {dev:.2e} <= 1e-8, \
             lambda1+lambda2 = {sum2:.2e} (2-nonnegativity boundary)"
        ),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for lengths in [vec![1.0; 2], vec![1.0, 2.0, 3.0], vec![1.0; 4], vec![1.0; 6]] {
        let name = format!(
            "flat_torus[{}]",
            lengths
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let spec = catalog_get(&name, &[]).unwrap();
        let x = random_point(&spec, &mut rng);
        let op = assemble_curv_op(&curvature_at(&spec, Some(&x)).unwrap()).unwrap();
        let dev = op.spectrum.iter().map(|l| l.abs()).fold(0.0f64, f64::max);
        report(
            "curvature_operator_spectra",
            dev <= 1e-12,
            &format!("{name} spectrum identically 0: max |lambda| = {dev:.2e} <= 1e-12"),
        );
    }
}

#[test]
fn petersen_wink_bound_on_catalog() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut worst = f64::INFINITY;
    let mut checks = 0usize;
    for spec in standard_entries() {
        let points = if spec.coord_dim() == 0 { 1 } else { 4 };
        for _ in 0..points {
            let x = random_point(&spec, &mut rng);
            let cp = curvature_at(&spec, Some(&x)).unwrap();
            for p in 1..=cp.m / 2 {
                for seed in [11u64, 22, 33] {
                    let rep = pw_bound_check(&cp, p, 1000, seed).unwrap();
                    worst = worst.min(rep.min_slack);
                    checks += 1;
                    assert!(
                        rep.holds,
                        "{} p={p} seed={seed}: min_slack {}",
                        spec.name, rep.min_slack
                    );
                }
            }
        }
    }
    let elapsed = started.elapsed();
    let budget = Duration::from_secs(120);
    report(
        "petersen_wink_bound_on_catalog",
        worst >= -1e-8 && elapsed <= budget,
        &format!(
            "{checks} checks (all entries, all p, 1000 forms per degree, 3 seeds): \
             min slack {worst:.3e} >= -1e-8, {elapsed:.2?} <= {budget:?}"
        ),
    );
}

#[test]
fn degree_one_weitzenbock_is_ricci() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for spec in standard_entries() {
        for _ in 0..100 {
            let x = random_point(&spec, &mut rng);
            let cp = curvature_at(&spec, Some(&x)).unwrap();
            let mat = ric_form_matrix(&cp, 1).unwrap();
            worst = worst.max((&mat - &cp.ricci).amax());
        }
    }
    report(
        "degree_one_weitzenbock_is_ricci",
        worst <= 1e-9,
        &format!("100 random points per entry: max |Ric_1 - ricci| = {worst:.3e} <= 1e-9"),
    );
}

#[test]
fn weyl_perturbation_and_norm_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 10_000usize;
    let mut worst_weyl = f64::NEG_INFINITY;
    let mut worst_sandwich = f64::NEG_INFINITY;
    let sym = |n: usize, rng: &mut ChaCha8Rng| {
        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.random_range(-1.0..1.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        a
    };
    for t in 0..trials {
        let n = 2 + t % 11; // sizes 2..=12
        let a = sym(n, &mut rng);
        let b = sym(n, &mut rng);
        let gap = weyl_gap(&a, &b).unwrap();
        worst_weyl = worst_weyl.max(gap.max_gap - gap.bound);
        let s = norm_sandwich_check(&a).unwrap();
        worst_sandwich = worst_sandwich
            .max(s.op - s.frob)
            .max(s.frob - (n as f64).sqrt() * s.op);
    }
    let delta = 0.5;
    let eq = weyl_gap(
        &DMatrix::zeros(2, 2),
        &DMatrix::from_diagonal(&nalgebra::dvector![delta, -delta]),
    )
    .unwrap();
    let eq_err = (eq.max_gap - eq.bound).abs();
    report(
        "weyl_perturbation_and_norm_sandwich",
        worst_weyl <= 1e-10 && worst_sandwich <= 1e-10 && eq_err <= 1e-12,
        &format!(
            "{trials} pairs up to 12x12: worst perturbation excess {worst_weyl:.3e} <= 1e-10, \
             worst sandwich excess {worst_sandwich:.3e} <= 1e-10, \
             rank-2 diagonal equality error {eq_err:.3e} <= 1e-12"
        ),
    );
}

#[test]
fn scaled_quantity_invariance() {
    let mut worst = 0.0f64;
    for spec in standard_entries() {
        let exact = spec.diameter.map(|d| d.is_exact()).unwrap_or(false);
        if !exact {
            continue;
        }
        for c in [0.5, 2.0, 10.0] {
            let dev = scale_invariance_check(&spec, c, 8).unwrap();
            worst = worst.max(dev);
            assert!(dev <= 1e-10, "{} c={c}: dev {dev:.3e}", spec.name);
        }
    }
    report(
        "scaled_quantity_invariance",
        worst <= 1e-10,
        &format!("c in {{0.5, 2, 10}} on all exact-diameter entries: max rel dev {worst:.3e} <= 1e-10"),
    );
}

#[test]
fn collapsing_family_evidence() {
    let members = 50usize;
    let fam = FamilySpec {
        base: "heisenberg_nil".into(),
        schedule: (1..=members).map(|i| 1.0 / i as f64).collect(),
        condition: Condition::AncoAll,
        thresholds: None,
    };
    let report_data = certify_condition(&fam, 1).unwrap();
    let mut oracle_dev = 0.0f64;
    let mut all_negative = true;
    for m in &report_data.members {
        let eps = m.param;
        all_negative &= m.lambda_min < 0.0;
        // closed-form structure-constant oracle: lambda_1 = -3 eps^2 / 4,
        // which encodes the O(eps^2) collapse rate
        oracle_dev = oracle_dev.max((m.lambda_min - (-0.75 * eps * eps)).abs());
    }
    let i0 = report_data.tail_from;
    let tail_ok = match i0 {
        Some(i0) => report_data
            .members
            .iter()
            .filter(|m| m.index >= i0)
            .all(|m| m.verdict),
        None => false,
    };
    let consistency = report_data
        .metadata_consistency
        .as_ref()
        .map(|n| n.consistent == Some(true) && n.observed_euler_char == Some(0))
        .unwrap_or(false);
    report(
        "collapsing_family_evidence",
        all_negative && oracle_dev <= 1e-10 && tail_ok && consistency,
        &format!(
            "eps_i = 1/i, i <= {members}: lambda_1 < 0 for all members {all_negative}, \
             oracle deviation {oracle_dev:.3e} <= 1e-10 (O(eps^2) rate), \
             anco_all certified for i >= {i0:?}, chi = 0 consistent {consistency}"
        ),
    );
}

#[test]
fn volume_lower_bound_on_nonzero_chi_entries() {
    // even-dimensional entries with chi != 0, with their operator caps
    let cases = [
        ("sphere[2,1]", 1.0, true),
        ("sphere[4,1]", 1.0, true),
        ("fubini_study_cp2", 6.0, false),
        ("product:sphere[2,1],sphere[2,1]", 1.0, false),
    ];
    for (name, cap, is_round_sphere) in cases {
        let spec = catalog_get(name, &[]).unwrap();
        let vb = volume_lower_bound_check(&spec, cap, 10, GaussBonnetOptions::default()).unwrap();
        let equality_ok = !is_round_sphere || vb.residual.abs() <= 1e-6;
        report(
            "volume_lower_bound_on_nonzero_chi_entries",
            vb.holds && equality_ok,
            &format!(
                "{name}: |chi| <= sup|P| vol holds {}, residual {:+.3e}{}",
                vb.holds,
                vb.residual,
                if is_round_sphere {
                    " (equality required <= 1e-6)"
                } else {
                    ""
                }
            ),
        );
    }
}

#[test]
fn nonneg_operator_integrand_mechanism() {
    let cases = [
        ("sphere[2,1]", 32),
        ("flat_torus[1,1,1,1]", 8),
        ("sphere[4,1]", 12),
        ("product:sphere[2,1],sphere[2,1]", 10),
        ("fubini_study_cp2", 12),
    ];
    for (name, order) in cases {
        let spec = catalog_get(name, &[]).unwrap();
        let check =
            nonneg_operator_implies_nonneg_integrand(&spec, order, GaussBonnetOptions::default())
                .unwrap();
        report(
            "nonneg_operator_integrand_mechanism",
            check.violations == 0 && check.nonneg_nodes == check.nodes,
            &format!(
                "{name}: {} violations at {} nonneg nodes of {}",
                check.violations, check.nonneg_nodes, check.nodes
            ),
        );
    }
}

#[test]
fn weitzenbock_constant_closed_form() {
    let mut ok = true;
    for n in 1..=10usize {
        let direct = weitzenbock_constant(n).unwrap();
        let exhaustive = (1..=2 * n).map(|k| (k * (2 * n - k)) as u64).max().unwrap();
        ok &= direct == exhaustive && direct == (n * n) as u64;
    }
    report(
        "weitzenbock_constant_closed_form",
        ok,
        "C(n) = n^2 matches exhaustive max of k(2n-k) for n <= 10",
    );
}
