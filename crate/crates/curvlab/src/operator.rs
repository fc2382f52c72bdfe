//! The curvature operator as a symmetric matrix over the lexicographic wedge
//! basis of 2-forms, with its sorted spectrum and norms.

use nalgebra::DMatrix;

use crate::curvature::CurvaturePoint;
use crate::error::{Error, Result};
use crate::exterior::pair_rank;
use crate::linalg;

/// Curvature operator matrix `M[rank(i,j), rank(k,l)] = R_ijkl` over the
/// orthonormal wedge basis, `N = m(m-1)/2`, plus spectral data.
#[derive(Debug, Clone)]
pub struct CurvOpMatrix {
    pub m: usize,
    pub n: usize,
    pub entries: DMatrix<f64>,
    /// Eigenvalues sorted ascending.
    pub spectrum: Vec<f64>,
    pub op_norm: f64,
    pub frob_norm: f64,
}

impl CurvOpMatrix {
    pub fn lambda_min(&self) -> f64 {
        self.spectrum[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectrum[self.n - 1]
    }
}

/// Assembles the curvature operator of a curvature point and computes its
/// spectrum with a dense symmetric eigensolver.
pub fn assemble_curv_op(cp: &CurvaturePoint) -> Result<CurvOpMatrix> {
    let m = cp.m;
    if m < 2 {
        return Err(Error::Domain(format!(
            "curvature operator needs dimension >= 2, got {m}"
        )));
    }
    let n = m * (m - 1) / 2;
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..m {
        for j in i + 1..m {
            let r = pair_rank(m, i, j);
            for k in 0..m {
                for l in k + 1..m {
                    entries[(r, pair_rank(m, k, l))] = cp.riemann.get(i, j, k, l);
                }
            }
        }
    }
    let scale = entries.amax().max(1.0);
    if linalg::symmetry_residual(&entries) > 1e-10 * scale {
        return Err(Error::Consistency(
            "curvature operator matrix not symmetric to 1e-10; pair symmetry of R is broken".into(),
        ));
    }
    let entries = (&entries + entries.transpose()).scale(0.5);
    let spectrum = linalg::sorted_eigenvalues(&entries)?;
    let op_norm = spectrum[0].abs().max(spectrum[n - 1].abs());
    let frob_norm = linalg::frobenius_norm(&entries);
    Ok(CurvOpMatrix {
        m,
        n,
        entries,
        spectrum,
        op_norm,
        frob_norm,
    })
}

/// Partial eigenvalue sum `lambda_1 + ... + lambda_count` of the sorted
/// spectrum.
pub fn partial_eig_sum(op: &CurvOpMatrix, count: usize) -> Result<f64> {
    if count == 0 || count > op.n {
        return Err(Error::Domain(format!(
            "partial sum count {count} outside 1..={}",
            op.n
        )));
    }
    Ok(op.spectrum[..count].iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;
    use crate::curvature::{curvature_at, rotate_orthonormal};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn op_for(name: &str, x: Option<&[f64]>) -> CurvOpMatrix {
        let spec = catalog_get(name, &[]).unwrap();
        assemble_curv_op(&curvature_at(&spec, x).unwrap()).unwrap()
    }

    #[test]
    fn sphere4_operator_is_identity() {
        let op = op_for("sphere[4,1]", Some(&[1.2, 0.8, 1.9, 2.5]));
        assert_eq!(op.n, 6);
        for v in &op.spectrum {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(op.op_norm, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(op.frob_norm, 6.0f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn flat_torus_operator_is_zero() {
        let op = op_for("flat_torus[1,1,1,1]", Some(&[0.2, 0.3, 0.4, 0.5]));
        for v in &op.spectrum {
            assert_eq!(*v, 0.0);
        }
        assert_eq!(partial_eig_sum(&op, 3).unwrap(), 0.0);
    }

    #[test]
    fn product_of_spheres_spectrum() {
        let op = op_for("product:sphere[2,1],sphere[2,1]", Some(&[1.0, 2.0, 0.9, 3.0]));
        let expect = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0];
        for (got, want) in op.spectrum.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
        // boundary case of 2-nonnegativity
        assert_abs_diff_eq!(partial_eig_sum(&op, 2).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn sphere4_partial_sum_of_three() {
        let op = op_for("sphere[4,1]", Some(&[1.0, 1.0, 1.0, 1.0]));
        assert_abs_diff_eq!(partial_eig_sum(&op, 3).unwrap(), 3.0, epsilon = 1e-9);
        assert!(partial_eig_sum(&op, 0).is_err());
        assert!(partial_eig_sum(&op, 7).is_err());
    }

    #[test]
    fn berger_spectrum_closed_form() {
        for eps in [1.0, 0.5, 0.25] {
            let spec = catalog_get("berger_sphere", &[eps]).unwrap();
            let op = assemble_curv_op(&curvature_at(&spec, None).unwrap()).unwrap();
            let mut expect = [eps * eps, eps * eps, 4.0 - 3.0 * eps * eps];
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (got, want) in op.spectrum.iter().zip(expect) {
                assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fubini_study_spectrum() {
        // Kaehler-Einstein structure: eigenvalues (0,0,2,2,2,6) in the
        // holomorphic-sectional-curvature-4 normalization.
        let spec = catalog_get("fubini_study_cp2", &[]).unwrap();
        let op = assemble_curv_op(&curvature_at(&spec, Some(&[0.1, -0.4, 0.8, 0.2])).unwrap())
            .unwrap();
        let expect = [0.0, 0.0, 2.0, 2.0, 2.0, 6.0];
        for (got, want) in op.spectrum.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-7);
        }
    }

    #[test]
    fn scale_equivariance_of_spectrum() {
        let base = catalog_get("sphere[4,1]", &[]).unwrap();
        let x = [1.2, 0.8, 1.9, 2.5];
        let op0 = assemble_curv_op(&curvature_at(&base, Some(&x)).unwrap()).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let scaled = catalog_get("scaled:sphere[4,1]", &[c]).unwrap();
            let op1 = assemble_curv_op(&curvature_at(&scaled, Some(&x)).unwrap()).unwrap();
            for (a, b) in op0.spectrum.iter().zip(&op1.spectrum) {
                let rel = (b - a / (c * c)).abs() / (a / (c * c)).abs().max(1e-15);
                assert!(rel < 1e-10, "c={c} rel={rel}");
            }
        }
    }

    #[test]
    fn spectrum_is_frame_independent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let spec = catalog_get("fubini_study_cp2", &[]).unwrap();
        let cp = curvature_at(&spec, Some(&[0.5, 0.1, -0.3, 0.9])).unwrap();
        let op0 = assemble_curv_op(&cp).unwrap();
        for _ in 0..5 {
            let a = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
            let q = a.qr().q();
            let rotated = rotate_orthonormal(&cp, &q).unwrap();
            let op1 = assemble_curv_op(&rotated).unwrap();
            for (x, y) in op0.spectrum.iter().zip(&op1.spectrum) {
                assert_abs_diff_eq!(*x, *y, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn sectionals_lie_in_spectral_hull() {
        for spec in crate::catalog::standard_entries() {
            let x: Vec<f64> = match spec.coord_dim() {
                0 => vec![],
                d => {
                    // mid-domain point of each chart factor
                    let mut v = Vec::with_capacity(d);
                    collect_mid(&spec, &mut v);
                    v
                }
            };
            let cp = curvature_at(&spec, Some(&x)).unwrap();
            let op = assemble_curv_op(&cp).unwrap();
            for i in 0..cp.m {
                for j in i + 1..cp.m {
                    let k = cp.sectional(i, j);
                    assert!(k >= op.lambda_min() - 1e-10 && k <= op.lambda_max() + 1e-10);
                    assert!(k.abs() <= op.op_norm + 1e-10);
                }
            }
        }
    }

    fn collect_mid(spec: &crate::catalog::ManifoldSpec, out: &mut Vec<f64>) {
        use crate::catalog::Geometry;
        match &spec.geometry {
            Geometry::Chart(c) => {
                for (lo, hi) in c.domain() {
                    out.push(0.5 * (lo + hi) + 0.05 * (hi - lo));
                }
            }
            Geometry::Homogeneous(_) => {}
            Geometry::Product(a, b) => {
                collect_mid(a, out);
                collect_mid(b, out);
            }
        }
    }

    use nalgebra::DMatrix;
}
