//! Left-invariant metrics described by Lie-algebra structure constants in a
//! declared orthonormal frame. Curvature is constant over the manifold and
//! computable exactly, so one point suffices.

use crate::error::{Error, Result};

/// Structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k` of a metric Lie
/// algebra whose declared frame is orthonormal.
#[derive(Debug, Clone)]
pub struct HomogeneousSpec {
    m: usize,
    c: Vec<f64>,
}

const JACOBI_TOL: f64 = 1e-12;

impl HomogeneousSpec {
    pub fn new(m: usize, constants: Vec<f64>) -> Result<Self> {
        if constants.len() != m * m * m {
            return Err(Error::Validation(format!(
                "expected {} structure constants for dimension {m}, got {}",
                m * m * m,
                constants.len()
            )));
        }
        let spec = Self { m, c: constants };
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let anti = spec.c(i, j, k) + spec.c(j, i, k);
                    if anti.abs() > JACOBI_TOL {
                        return Err(Error::Validation(format!(
                            "structure constants not antisymmetric at ({i},{j},{k}): residual {anti:.3e}"
                        )));
                    }
                }
            }
        }
        let jac = spec.jacobi_residual();
        if jac > JACOBI_TOL {
            return Err(Error::Validation(format!(
                "Jacobi identity violated: residual {jac:.3e} > {JACOBI_TOL:.0e}"
            )));
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// `c[i][j][k]` with `[e_i, e_j] = sum_k c_ijk e_k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.m + j) * self.m + k]
    }

    /// Worst absolute residual of `[[e_i,e_j],e_k] + cyclic = 0`.
    pub fn jacobi_residual(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for target in 0..m {
                        let mut sum = 0.0;
                        for l in 0..m {
                            sum += self.c(i, j, l) * self.c(l, k, target)
                                + self.c(j, k, l) * self.c(l, i, target)
                                + self.c(k, i, l) * self.c(l, j, target);
                        }
                        worst = worst.max(sum.abs());
                    }
                }
            }
        }
        worst
    }

    /// Structure constants of the metric `c_scale^2 g`: the orthonormal frame
    /// shrinks by `1/c_scale`, so the constants divide by `c_scale`.
    pub fn scaled(&self, c_scale: f64) -> Result<Self> {
        if c_scale <= 0.0 || !c_scale.is_finite() {
            return Err(Error::Config(format!(
                "scale factor must be positive, got {c_scale}"
            )));
        }
        let c = self.c.iter().map(|v| v / c_scale).collect();
        // antisymmetry and Jacobi survive scaling exactly
        Ok(Self { m: self.m, c })
    }
}

fn set(c: &mut [f64], m: usize, i: usize, j: usize, k: usize, v: f64) {
    c[(i * m + j) * m + k] = v;
    c[(j * m + i) * m + k] = -v;
}

/// Berger sphere: `su(2)` with the fiber direction `e_2` scaled by `eps`.
///
/// In the orthonormal frame the brackets read `[e_0, e_1] = 2 eps e_2`,
/// `[e_1, e_2] = (2/eps) e_0`, `[e_2, e_0] = (2/eps) e_1`; `eps = 1` is the
/// unit round sphere. Sectional curvatures are `4 - 3 eps^2` on the base
/// plane and `eps^2` on the two fiber planes.
pub fn berger_sphere(eps: f64) -> Result<HomogeneousSpec> {
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::Config(format!("berger_sphere requires eps > 0, got {eps}")));
    }
    let m = 3;
    let mut c = vec![0.0; m * m * m];
    set(&mut c, m, 0, 1, 2, 2.0 * eps);
    set(&mut c, m, 1, 2, 0, 2.0 / eps);
    set(&mut c, m, 2, 0, 1, 2.0 / eps);
    HomogeneousSpec::new(m, c)
}

/// Heisenberg nilmanifold metric: `[e_0, e_1] = eps e_2`, all other brackets
/// zero. The family collapses the central circle as `eps -> 0`; sectional
/// curvatures are `-3 eps^2 / 4` and `eps^2 / 4` (twice).
pub fn heisenberg_nil(eps: f64) -> Result<HomogeneousSpec> {
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::Config(format!("heisenberg_nil requires eps > 0, got {eps}")));
    }
    let m = 3;
    let mut c = vec![0.0; m * m * m];
    set(&mut c, m, 0, 1, 2, eps);
    HomogeneousSpec::new(m, c)
}
