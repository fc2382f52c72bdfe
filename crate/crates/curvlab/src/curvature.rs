//! Curvature computation: Christoffel symbols, the Riemann tensor in an
//! orthonormal frame, and derived curvatures.
//!
//! Sign convention. The curvature tensor follows
//! `R(X,Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_{[X,Y]} Z`
//! with `R_ijkl = <R(e_i,e_j)e_k, e_l>`, normalized so that the unit round
//! sphere has `R_ijij = +1` in an orthonormal frame. [`verify_sign_convention`]
//! asserts this normalization by direct computation; run it once at startup.

use nalgebra::DMatrix;

use crate::catalog::{metric_derivatives, Geometry, HomogeneousSpec, ManifoldSpec, MetricChart};
use crate::error::{Error, Result};

/// Dense (0,4) curvature tensor over an m-dimensional frame.
#[derive(Debug, Clone)]
pub struct Riemann {
    m: usize,
    data: Vec<f64>,
}

impl Riemann {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            data: vec![0.0; m * m * m * m],
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[((i * self.m + j) * self.m + k) * self.m + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.data[((i * self.m + j) * self.m + k) * self.m + l] = v;
    }

    /// Largest absolute component.
    pub fn amax(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Contracts every index with the columns of `f`:
    /// `R'_ijkl = F_ai F_bj F_ck F_dl R_abcd`.
    pub fn change_frame(&self, f: &DMatrix<f64>) -> Riemann {
        let m = self.m;
        let mut cur = self.data.clone();
        // Contract one slot at a time; slot 0 is the fastest-varying after
        // each pass because we rotate the index order (a,b,c,d) -> (b,c,d,i).
        for _ in 0..4 {
            let mut next = vec![0.0; m * m * m * m];
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        for i in 0..m {
                            let mut acc = 0.0;
                            for a in 0..m {
                                acc += f[(a, i)] * cur[((a * m + b) * m + c) * m + d];
                            }
                            next[((b * m + c) * m + d) * m + i] = acc;
                        }
                    }
                }
            }
            cur = next;
        }
        Riemann { m, data: cur }
    }
}

/// Worst-case residuals of the algebraic curvature symmetries.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryResiduals {
    pub antisym_first: f64,
    pub antisym_last: f64,
    pub pair: f64,
    pub bianchi: f64,
}

impl SymmetryResiduals {
    pub fn worst(&self) -> f64 {
        self.antisym_first
            .max(self.antisym_last)
            .max(self.pair)
            .max(self.bianchi)
    }
}

pub fn symmetry_residuals(r: &Riemann) -> SymmetryResiduals {
    let m = r.dim();
    let mut res = SymmetryResiduals {
        antisym_first: 0.0,
        antisym_last: 0.0,
        pair: 0.0,
        bianchi: 0.0,
    };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v = r.get(i, j, k, l);
                    res.antisym_first = res.antisym_first.max((v + r.get(j, i, k, l)).abs());
                    res.antisym_last = res.antisym_last.max((v + r.get(i, j, l, k)).abs());
                    res.pair = res.pair.max((v - r.get(k, l, i, j)).abs());
                    res.bianchi = res
                        .bianchi
                        .max((v + r.get(j, k, i, l) + r.get(k, i, j, l)).abs());
                }
            }
        }
    }
    res
}

/// All curvature data at one point, in an orthonormal frame.
#[derive(Debug, Clone)]
pub struct CurvaturePoint {
    pub m: usize,
    /// Columns are the frame vectors in chart coordinates; `None` for
    /// homogeneous geometries (the declared frame is already orthonormal).
    pub frame: Option<DMatrix<f64>>,
    pub riemann: Riemann,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

impl CurvaturePoint {
    /// Sectional curvature `K(e_i, e_j) = R_ijij` of a frame plane.
    pub fn sectional(&self, i: usize, j: usize) -> f64 {
        self.riemann.get(i, j, i, j)
    }
}

const SYMMETRY_TOL: f64 = 1e-8;

/// Projects onto the antisymmetry/pair-symmetry span of algebraic curvature
/// tensors. Exact tensors are fixed points (the average divides by 8, which
/// is exact), so this only removes rounding noise picked up by the frame
/// contraction; the Bianchi direction is untouched and keeps signalling
/// genuine accuracy problems.
fn project_curvature_symmetries(r: &Riemann) -> Riemann {
    let m = r.dim();
    let mut out = Riemann::zeros(m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v = (r.get(i, j, k, l) - r.get(j, i, k, l) - r.get(i, j, l, k)
                        + r.get(j, i, l, k)
                        + r.get(k, l, i, j)
                        - r.get(l, k, i, j)
                        - r.get(k, l, j, i)
                        + r.get(l, k, j, i))
                        / 8.0;
                    out.set(i, j, k, l, v);
                }
            }
        }
    }
    out
}

fn finish_point(m: usize, frame: Option<DMatrix<f64>>, riemann: Riemann) -> Result<CurvaturePoint> {
    let res = symmetry_residuals(&riemann);
    let scale = riemann.amax().max(1e-14);
    if res.worst() > SYMMETRY_TOL * scale {
        return Err(Error::Consistency(format!(
            "curvature symmetry residual {:.3e} exceeds {:.0e} relative to |R| = {:.3e}; \
             metric derivatives are likely inaccurate",
            res.worst(),
            SYMMETRY_TOL,
            scale
        )));
    }
    let riemann = project_curvature_symmetries(&riemann);
    let mut ricci = DMatrix::zeros(m, m);
    for i in 0..m {
        for k in 0..m {
            let mut acc = 0.0;
            for j in 0..m {
                acc += riemann.get(i, j, k, j);
            }
            ricci[(i, k)] = acc;
        }
    }
    let scalar = ricci.trace();
    Ok(CurvaturePoint {
        m,
        frame,
        riemann,
        ricci,
        scalar,
    })
}

/// Christoffel symbols of the second kind,
/// `Gamma^c_ab = 1/2 g^cd (d_a g_bd + d_b g_ad - d_d g_ab)`.
///
/// Returned as `gamma[c][(a, b)]`, symmetric in `(a, b)`.
pub fn christoffel(chart: &dyn MetricChart, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
    let der = metric_derivatives(chart, x)?;
    let chol = der
        .g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("singular metric in Christoffel computation".into()))?;
    christoffel_from(&chol.inverse(), &der.dg).map(|(second, _)| second)
}

/// Christoffels of both kinds from the inverse metric and first partials:
/// `(Gamma^c_ab, Gamma_{c,ab})`.
fn christoffel_from(
    g_inv: &DMatrix<f64>,
    dg: &[DMatrix<f64>],
) -> Result<(Vec<DMatrix<f64>>, Vec<DMatrix<f64>>)> {
    let m = g_inv.nrows();
    let mut first = vec![DMatrix::zeros(m, m); m]; // Gamma_{d,ab}
    for d in 0..m {
        for a in 0..m {
            for b in a..m {
                let v = 0.5 * (dg[a][(b, d)] + dg[b][(a, d)] - dg[d][(a, b)]);
                first[d][(a, b)] = v;
                first[d][(b, a)] = v;
            }
        }
    }
    let mut second = vec![DMatrix::zeros(m, m); m]; // Gamma^c_{ab}
    for c in 0..m {
        for a in 0..m {
            for b in a..m {
                let mut acc = 0.0;
                for d in 0..m {
                    acc += g_inv[(c, d)] * first[d][(a, b)];
                }
                second[c][(a, b)] = acc;
                second[c][(b, a)] = acc;
            }
        }
    }
    Ok((second, first))
}

/// Coordinate-frame curvature of a chart metric via the lowered formula
/// `R_abcd = 1/2 (d_b d_c g_ad + d_a d_d g_bc - d_b d_d g_ac - d_a d_c g_bd)
///  + Gamma_{f,ad} Gamma^f_bc - Gamma_{f,bd} Gamma^f_ac`.
fn chart_curvature(chart: &dyn MetricChart, x: &[f64]) -> Result<(Riemann, DMatrix<f64>)> {
    let der = metric_derivatives(chart, x)?;
    let m = chart.dim();

    // Diagonal preconditioning: work in per-node rescaled coordinates
    // y_a = x_a / s_a with s_a = 1/sqrt(g_aa), making the metric unit
    // diagonal. Near coordinate degeneracies (poles of spherical charts)
    // this removes the division of tiny curvature components by tiny
    // metric entries; the orthonormal frame is unchanged because
    // Gram-Schmidt is invariant under positive scaling of its input.
    let s: Vec<f64> = (0..m).map(|a| 1.0 / der.g[(a, a)].sqrt()).collect();
    let mut g = der.g.clone();
    for i in 0..m {
        for j in 0..m {
            g[(i, j)] *= s[i] * s[j];
        }
    }
    let mut dg = der.dg.clone();
    for a in 0..m {
        for i in 0..m {
            for j in 0..m {
                dg[a][(i, j)] *= s[a] * s[i] * s[j];
            }
        }
    }
    let mut d2g = der.d2g.clone();
    for a in 0..m {
        for b in 0..m {
            for i in 0..m {
                for j in 0..m {
                    d2g[a][b][(i, j)] *= s[a] * s[b] * s[i] * s[j];
                }
            }
        }
    }

    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("singular metric in curvature computation".into()))?;
    let (second, first) = christoffel_from(&chol.inverse(), &dg)?;
    let mut rm = Riemann::zeros(m);
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let dd = 0.5
                        * (d2g[b][c][(a, d)] + d2g[a][d][(b, c)]
                            - d2g[b][d][(a, c)]
                            - d2g[a][c][(b, d)]);
                    let mut gg = 0.0;
                    for f in 0..m {
                        gg += first[f][(a, d)] * second[f][(b, c)]
                            - first[f][(b, d)] * second[f][(a, c)];
                    }
                    rm.set(a, b, c, d, dd + gg);
                }
            }
        }
    }

    // Orthonormal frame by (deterministic, pivot-free) Gram-Schmidt on the
    // coordinate frame, realized as the inverse transpose Cholesky factor.
    let frame_scaled = chol
        .l()
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("Cholesky factor not invertible".into()))?;
    let on = rm.change_frame(&frame_scaled);
    // frame columns back in original chart coordinates
    let mut frame = frame_scaled;
    for a in 0..m {
        for i in 0..m {
            frame[(a, i)] *= s[a];
        }
    }
    Ok((on, frame))
}

/// Curvature of a left-invariant metric from structure constants: the
/// connection matrices come from the Koszul formula
/// `nabla_{e_i} e_j = 1/2 sum_k (c_ijk - c_jki + c_kij) e_k`,
/// curvature from the same bracket formula as charts. Exact.
fn homogeneous_curvature(alg: &HomogeneousSpec) -> Riemann {
    let m = alg.dim();
    let nabla: Vec<DMatrix<f64>> = (0..m)
        .map(|i| {
            let mut n = DMatrix::zeros(m, m);
            for j in 0..m {
                for k in 0..m {
                    n[(k, j)] = 0.5 * (alg.c(i, j, k) - alg.c(j, k, i) + alg.c(k, i, j));
                }
            }
            n
        })
        .collect();
    let mut rm = Riemann::zeros(m);
    for i in 0..m {
        for j in 0..m {
            let mut op = &nabla[j] * &nabla[i] - &nabla[i] * &nabla[j];
            for l in 0..m {
                let c = alg.c(i, j, l);
                if c != 0.0 {
                    op += nabla[l].scale(c);
                }
            }
            // <R(e_i,e_j) e_k, e_l> = op[(l, k)]
            for k in 0..m {
                for l in 0..m {
                    rm.set(i, j, k, l, op[(l, k)]);
                }
            }
        }
    }
    rm
}

/// Embeds a factor curvature tensor into a product, offset by `shift`.
fn embed(into: &mut Riemann, from: &Riemann, shift: usize) {
    let f = from.dim();
    for i in 0..f {
        for j in 0..f {
            for k in 0..f {
                for l in 0..f {
                    into.set(
                        i + shift,
                        j + shift,
                        k + shift,
                        l + shift,
                        from.get(i, j, k, l),
                    );
                }
            }
        }
    }
}

/// Computes all curvature data of `spec` at a point.
///
/// Chart geometries require `x` (interior chart coordinates); homogeneous
/// geometries ignore it. For products, `x` carries the concatenated chart
/// coordinates of the chart factors and the curvature tensor is the direct
/// sum of the factor tensors.
pub fn curvature_at(spec: &ManifoldSpec, x: Option<&[f64]>) -> Result<CurvaturePoint> {
    match &spec.geometry {
        Geometry::Chart(chart) => {
            let x = x.ok_or_else(|| {
                Error::Domain(format!("chart geometry {} needs a point", spec.name))
            })?;
            let (riemann, frame) = chart_curvature(chart.as_ref(), x)?;
            finish_point(chart.dim(), Some(frame), riemann)
        }
        Geometry::Homogeneous(alg) => {
            let riemann = homogeneous_curvature(alg);
            finish_point(alg.dim(), None, riemann)
        }
        Geometry::Product(a, b) => {
            let coords = x.unwrap_or(&[]);
            if coords.len() != spec.coord_dim() {
                return Err(Error::Domain(format!(
                    "product {} needs {} chart coordinates, got {}",
                    spec.name,
                    spec.coord_dim(),
                    coords.len()
                )));
            }
            let (xa, xb) = coords.split_at(a.coord_dim());
            let cpa = curvature_at(a, Some(xa))?;
            let cpb = curvature_at(b, Some(xb))?;
            let m = cpa.m + cpb.m;
            let mut riemann = Riemann::zeros(m);
            embed(&mut riemann, &cpa.riemann, 0);
            embed(&mut riemann, &cpb.riemann, cpa.m);
            let frame = match (&cpa.frame, &cpb.frame) {
                (Some(fa), Some(fb)) => {
                    let mut f = DMatrix::zeros(m, m);
                    f.view_mut((0, 0), (cpa.m, cpa.m)).copy_from(fa);
                    f.view_mut((cpa.m, cpa.m), (cpb.m, cpb.m)).copy_from(fb);
                    Some(f)
                }
                _ => None,
            };
            finish_point(m, frame, riemann)
        }
    }
}

/// Re-expresses a curvature point in the rotated orthonormal frame `Q`
/// (columns = new frame vectors in the old frame). The spectrum of the
/// assembled operator must not change.
pub fn rotate_orthonormal(cp: &CurvaturePoint, q: &DMatrix<f64>) -> Result<CurvaturePoint> {
    if q.nrows() != cp.m || q.ncols() != cp.m {
        return Err(Error::Domain("rotation has wrong dimensions".into()));
    }
    let riemann = cp.riemann.change_frame(q);
    finish_point(cp.m, None, riemann)
}

/// One-time convention self-test: the unit round 2-sphere must come out with
/// `R_0101 = +1` in its orthonormal frame. Call at startup; a failure means
/// the build's sign conventions are broken.
pub fn verify_sign_convention() -> Result<()> {
    let spec = crate::catalog::catalog_get("sphere", &[2.0, 1.0])?;
    let cp = curvature_at(&spec, Some(&[1.1, 2.3]))?;
    let k = cp.sectional(0, 1);
    if (k - 1.0).abs() > 1e-10 {
        return Err(Error::Consistency(format!(
            "unit sphere sectional curvature computed as {k}, expected +1; sign convention broken"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_get, charts, Geometry};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn sphere_point(m: usize, rng: &mut impl Rng) -> Vec<f64> {
        let mut x: Vec<f64> = (0..m - 1).map(|_| rng.random_range(0.4..2.7)).collect();
        x.push(rng.random_range(0.4..5.8));
        x
    }

    /// Constant-curvature oracle `R_ijkl = K (d_ik d_jl - d_il d_jk)`.
    fn constant_curvature_tensor(m: usize, k: f64) -> Riemann {
        let mut r = Riemann::zeros(m);
        for i in 0..m {
            for j in 0..m {
                r.set(i, j, i, j, k);
                r.set(i, j, j, i, -k);
                if i == j {
                    r.set(i, j, i, j, 0.0);
                }
            }
        }
        r
    }

    fn max_diff(a: &Riemann, b: &Riemann) -> f64 {
        let m = a.dim();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        worst = worst.max((a.get(i, j, k, l) - b.get(i, j, k, l)).abs());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn sign_convention_self_test_passes() {
        verify_sign_convention().unwrap();
    }

    #[test]
    fn flat_torus_is_flat() {
        let spec = catalog_get("flat_torus[1,1,1,1]", &[]).unwrap();
        let Geometry::Chart(chart) = &spec.geometry else {
            panic!()
        };
        let gamma = christoffel(chart.as_ref(), &[0.3, 0.4, 0.5, 0.6]).unwrap();
        for c in &gamma {
            assert_eq!(c.amax(), 0.0);
        }
        let cp = curvature_at(&spec, Some(&[0.3, 0.4, 0.5, 0.6])).unwrap();
        assert_eq!(cp.riemann.amax(), 0.0);
        assert_eq!(cp.ricci.amax(), 0.0);
        assert_eq!(cp.scalar, 0.0);
    }

    #[test]
    fn sphere_christoffels() {
        let chart = charts::SphereChart::new(2, 1.0).unwrap();
        // At the equator both nontrivial symbols vanish.
        let g = christoffel(&chart, &[std::f64::consts::FRAC_PI_2, 1.0]).unwrap();
        assert_abs_diff_eq!(g[0][(1, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1][(0, 1)], 0.0, epsilon = 1e-12);
        // Generic latitude: Gamma^theta_phiphi = -sin cos, Gamma^phi_thetaphi = cot.
        let theta = 0.7;
        let g = christoffel(&chart, &[theta, 1.0]).unwrap();
        assert_abs_diff_eq!(g[0][(1, 1)], -theta.sin() * theta.cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(g[1][(0, 1)], theta.cos() / theta.sin(), epsilon = 1e-12);
    }

    #[test]
    fn christoffels_are_scale_invariant() {
        let base: Arc<dyn crate::catalog::MetricChart> =
            Arc::new(charts::SphereChart::new(2, 1.0).unwrap());
        let scaled = charts::ScaledChart::new(base.clone(), 3.0).unwrap();
        let x = [0.9, 2.0];
        let g0 = christoffel(base.as_ref(), &x).unwrap();
        let g1 = christoffel(&scaled, &x).unwrap();
        for (a, b) in g0.iter().zip(&g1) {
            assert!((a - b).amax() < 1e-12);
        }
    }

    #[test]
    fn unit_spheres_have_constant_curvature_tensor() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for m in [2usize, 3, 4] {
            let spec = catalog_get("sphere", &[m as f64, 1.0]).unwrap();
            let oracle = constant_curvature_tensor(m, 1.0);
            for _ in 0..5 {
                let x = sphere_point(m, &mut rng);
                let cp = curvature_at(&spec, Some(&x)).unwrap();
                assert!(
                    max_diff(&cp.riemann, &oracle) < 1e-9,
                    "m={m} deviation {}",
                    max_diff(&cp.riemann, &oracle)
                );
                assert_abs_diff_eq!(cp.scalar, (m * (m - 1)) as f64, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn both_sphere_chart_routes_match_the_oracle() {
        // the catalog uses stereographic coordinates above dimension 2; the
        // classical spherical-coordinate chart must give the same tensor
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for m in [3usize, 4] {
            let oracle = constant_curvature_tensor(m, 1.0);
            let spherical = ManifoldSpec {
                name: "spherical-route".into(),
                geometry: Geometry::Chart(Arc::new(charts::SphereChart::new(m, 1.0).unwrap())),
                euler_char: None,
                diameter: None,
                volume: None,
                infinite_pi1: None,
            };
            for _ in 0..5 {
                let x = sphere_point(m, &mut rng);
                let cp = curvature_at(&spherical, Some(&x)).unwrap();
                assert!(max_diff(&cp.riemann, &oracle) < 1e-9);
            }
        }
    }

    #[test]
    fn radius_scales_curvature() {
        let spec = catalog_get("sphere", &[2.0, 2.0]).unwrap();
        let cp = curvature_at(&spec, Some(&[1.2, 0.8])).unwrap();
        assert_abs_diff_eq!(cp.sectional(0, 1), 0.25, epsilon = 1e-10);
    }

    #[test]
    fn heisenberg_sectionals_match_closed_form() {
        for eps in [1.0, 0.5, 0.1] {
            let spec = catalog_get("heisenberg_nil", &[eps]).unwrap();
            let cp = curvature_at(&spec, None).unwrap();
            assert_abs_diff_eq!(cp.sectional(0, 1), -0.75 * eps * eps, epsilon = 1e-13);
            assert_abs_diff_eq!(cp.sectional(0, 2), 0.25 * eps * eps, epsilon = 1e-13);
            assert_abs_diff_eq!(cp.sectional(1, 2), 0.25 * eps * eps, epsilon = 1e-13);
        }
    }

    #[test]
    fn milnor_frame_sectionals_match_closed_form() {
        // [e0,e1] = c e2, [e1,e2] = a e0, [e2,e0] = b e1 with orthonormal e_i:
        // K(e0,e1) = (a-b)^2/4 - 3c^2/4 + c(a+b)/2, and cyclically.
        let cases = [(2.0, 2.0, 2.0), (1.0, 2.0, 3.0), (0.5, 0.0, 1.5)];
        for (a, b, c) in cases {
            let m = 3;
            let mut consts = vec![0.0; 27];
            let mut set = |i: usize, j: usize, k: usize, v: f64| {
                consts[(i * m + j) * m + k] = v;
                consts[(j * m + i) * m + k] = -v;
            };
            set(0, 1, 2, c);
            set(1, 2, 0, a);
            set(2, 0, 1, b);
            let alg = HomogeneousSpec::new(m, consts).unwrap();
            let spec = ManifoldSpec {
                name: "milnor".into(),
                geometry: Geometry::Homogeneous(alg),
                euler_char: None,
                diameter: None,
                volume: None,
                infinite_pi1: None,
            };
            let cp = curvature_at(&spec, None).unwrap();
            let k01 = 0.25 * (a - b).powi(2) - 0.75 * c * c + 0.5 * c * (a + b);
            let k12 = 0.25 * (b - c).powi(2) - 0.75 * a * a + 0.5 * a * (b + c);
            let k20 = 0.25 * (c - a).powi(2) - 0.75 * b * b + 0.5 * b * (c + a);
            assert_abs_diff_eq!(cp.sectional(0, 1), k01, epsilon = 1e-12);
            assert_abs_diff_eq!(cp.sectional(1, 2), k12, epsilon = 1e-12);
            assert_abs_diff_eq!(cp.sectional(2, 0), k20, epsilon = 1e-12);
        }
    }

    #[test]
    fn round_sphere_via_berger_at_unit_fiber() {
        let spec = catalog_get("berger_sphere", &[1.0]).unwrap();
        let cp = curvature_at(&spec, None).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert_abs_diff_eq!(cp.sectional(i, j), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn product_curvature_matches_product_chart_route() {
        // Direct-sum assembly against brute-force evaluation of the block
        // product chart.
        let spec = catalog_get("product:sphere[2,1],sphere[2,1]", &[]).unwrap();
        let x = [1.0, 2.0, 0.8, 4.0];
        let cp = curvature_at(&spec, Some(&x)).unwrap();

        let s2: Arc<dyn crate::catalog::MetricChart> =
            Arc::new(charts::SphereChart::new(2, 1.0).unwrap());
        let chart = charts::product_chart(s2.clone(), s2).unwrap();
        let spec_chart = ManifoldSpec {
            name: "product-chart".into(),
            geometry: Geometry::Chart(chart),
            euler_char: None,
            diameter: None,
            volume: None,
            infinite_pi1: None,
        };
        let cp_chart = curvature_at(&spec_chart, Some(&x)).unwrap();
        assert!(max_diff(&cp.riemann, &cp_chart.riemann) < 1e-9);
    }

    #[test]
    fn fubini_study_is_einstein_with_expected_scalar() {
        // Ric = 6 g, s = 24 in the holomorphic-sectional-curvature-4
        // normalization; curvature is homogeneous so any point works.
        let spec = catalog_get("fubini_study_cp2", &[]).unwrap();
        for x in [[0.0, 0.0, 0.0, 0.0], [0.3, -0.2, 0.7, 1.1]] {
            let cp = curvature_at(&spec, Some(&x)).unwrap();
            let id = DMatrix::<f64>::identity(4, 4);
            assert!((cp.ricci.clone() - id.scale(6.0)).amax() < 1e-8);
            assert_abs_diff_eq!(cp.scalar, 24.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn curvature_requires_point_for_charts() {
        let spec = catalog_get("sphere[2,1]", &[]).unwrap();
        assert!(curvature_at(&spec, None).is_err());
    }
}
