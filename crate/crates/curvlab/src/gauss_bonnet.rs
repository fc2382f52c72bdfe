//! Chern-Gauss-Bonnet machinery: the curvature polynomial `P(K)` whose
//! integral over a closed even-dimensional manifold is the Euler
//! characteristic, quadrature of that integrand, and the pointwise
//! nonnegativity and volume-bound consequences.
//!
//! `P(K)` is realized as the permutation double sum
//! `P = c(m) sum_{sigma,tau} sgn(sigma) sgn(tau)
//!      prod_i R_{sigma(2i-1) sigma(2i) tau(2i-1) tau(2i)}`
//! over orthonormal-frame components. The normalization constants `c(m)` are
//! not taken on faith from any reference: they are fixed by the calibration
//! `chi(S^m) = 2` and frozen below; a test re-derives them from the
//! enumeration (the double sum evaluates to `m! 2^{m/2}` on the unit sphere).

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::catalog::ManifoldSpec;
use crate::curvature::{curvature_at, CurvaturePoint};
use crate::error::{Error, Result};
use crate::linalg::pairwise_sum;
use crate::operator::assemble_curv_op;
use crate::quadrature::{grid_for_spec, QuadratureGrid};

/// Calibrated normalization `c(m) = 1 / ((8 pi)^{m/2} (m/2)!)`, frozen for
/// `m in {2, 4, 6}` from the sphere calibration runs.
pub fn calibration_constant(m: usize) -> Result<f64> {
    match m {
        2 => Ok(1.0 / (8.0 * PI)),
        4 => Ok(1.0 / (128.0 * PI * PI)),
        6 => Ok(1.0 / (3072.0 * PI * PI * PI)),
        _ if m % 2 == 1 => Err(Error::Domain(format!(
            "Euler integrand undefined in odd dimension {m}"
        ))),
        _ => Err(Error::Unsupported(format!(
            "Euler integrand not implemented for dimension {m} (supported: 2, 4, 6)"
        ))),
    }
}

/// All permutations of `0..m` with their signs.
fn permutations_with_signs(m: usize) -> Vec<(Vec<u8>, f64)> {
    fn rec(current: &mut Vec<u8>, used: &mut Vec<bool>, m: usize, out: &mut Vec<(Vec<u8>, f64)>) {
        if current.len() == m {
            let mut inversions = 0usize;
            for a in 0..m {
                for b in a + 1..m {
                    if current[a] > current[b] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            out.push((current.clone(), sign));
            return;
        }
        for v in 0..m {
            if !used[v] {
                used[v] = true;
                current.push(v as u8);
                rec(current, used, m, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], m, &mut out);
    out
}

/// Permutations with `p[2i] < p[2i+1]` in every index pair. Flipping a pair
/// flips both the permutation sign and the paired curvature component, so
/// each such representative stands for `2^{m/2}` equal terms of the full
/// sum (the stored tensor is exactly antisymmetric after projection).
fn perm_table(m: usize) -> &'static [(Vec<u8>, f64)] {
    static TABLES: [OnceLock<Vec<(Vec<u8>, f64)>>; 3] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match m {
        2 => 0,
        4 => 1,
        6 => 2,
        _ => unreachable!("perm_table called for unsupported dimension"),
    };
    TABLES[slot].get_or_init(|| {
        permutations_with_signs(m)
            .into_iter()
            .filter(|(p, _)| (0..m / 2).all(|i| p[2 * i] < p[2 * i + 1]))
            .collect()
    })
}

/// The raw permutation double sum (no normalization constant), folded over
/// pair-increasing representatives with weight `4^{m/2}`.
fn double_sum(cp: &CurvaturePoint) -> f64 {
    let m = cp.m;
    let half = m / 2;
    let perms = perm_table(m);
    let r = &cp.riemann;
    let mut total = 0.0;
    for (sigma, ssign) in perms {
        for (tau, tsign) in perms {
            let mut prod = ssign * tsign;
            for i in 0..half {
                let v = r.get(
                    sigma[2 * i] as usize,
                    sigma[2 * i + 1] as usize,
                    tau[2 * i] as usize,
                    tau[2 * i + 1] as usize,
                );
                if v == 0.0 {
                    prod = 0.0;
                    break;
                }
                prod *= v;
            }
            total += prod;
        }
    }
    total * 4f64.powi(half as i32)
}

/// The Gauss-Bonnet integrand `P(K)` at one point; reduces to `K / (2 pi)`
/// in dimension 2.
pub fn euler_integrand(cp: &CurvaturePoint) -> Result<f64> {
    let c = calibration_constant(cp.m)?;
    Ok(c * double_sum(cp))
}

/// Independent 4-dimensional cross-check: in dimension 4 the integrand
/// equals `(|M|_F^2 - 4 |Ric|_F^2 + s^2) / (8 pi^2)` where `M` is the
/// curvature operator matrix. Computed directly from tensor norms, not
/// through the permutation sum.
pub fn euler_integrand_norm_oracle_4d(cp: &CurvaturePoint) -> Result<f64> {
    if cp.m != 4 {
        return Err(Error::Domain(format!(
            "norm-identity oracle is specific to dimension 4, got {}",
            cp.m
        )));
    }
    let m = cp.m;
    let mut op_frob2 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            for k in 0..m {
                for l in k + 1..m {
                    let v = cp.riemann.get(i, j, k, l);
                    op_frob2 += v * v;
                }
            }
        }
    }
    let ric_frob2: f64 = cp.ricci.iter().map(|v| v * v).sum();
    let s = cp.scalar;
    Ok((op_frob2 - 4.0 * ric_frob2 + s * s) / (8.0 * PI * PI))
}

/// Options for Euler-characteristic quadrature.
#[derive(Debug, Clone, Copy)]
pub struct GaussBonnetOptions {
    /// Dimension-6 integrands cost `(6!)^2` products per node; integration
    /// is refused unless explicitly enabled.
    pub allow_dim6: bool,
}

impl Default for GaussBonnetOptions {
    fn default() -> Self {
        Self { allow_dim6: false }
    }
}

/// Result of one Gauss-Bonnet quadrature run.
#[derive(Debug, Clone)]
pub struct GaussBonnetRun {
    pub chi_est: f64,
    /// `|chi_est - chi|` when the spec carries Euler metadata.
    pub residual: Option<f64>,
    pub nodes: usize,
    pub sup_abs_integrand: f64,
    pub min_integrand: f64,
}

fn check_dimension(spec: &ManifoldSpec, opts: GaussBonnetOptions) -> Result<usize> {
    let m = spec.dim();
    if m % 2 == 1 {
        return Err(Error::Domain(format!(
            "Euler characteristic quadrature needs even dimension, {} has m = {m}",
            spec.name
        )));
    }
    if m == 6 && !opts.allow_dim6 {
        return Err(Error::Unsupported(format!(
            "dimension-6 integration of {} is gated behind allow_dim6 (runtime cost)",
            spec.name
        )));
    }
    calibration_constant(m)?;
    Ok(m)
}

fn integrand_over_grid(spec: &ManifoldSpec, grid: &QuadratureGrid) -> Result<Vec<f64>> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let pt = grid.point(i);
            let cp = curvature_at(spec, Some(pt))?;
            euler_integrand(&cp)
        })
        .collect()
}

/// Estimates the Euler characteristic by tensor Gauss-Legendre quadrature of
/// the curvature polynomial at `order` nodes per axis.
pub fn euler_characteristic(spec: &ManifoldSpec, order: usize) -> Result<GaussBonnetRun> {
    euler_characteristic_with(spec, order, GaussBonnetOptions::default())
}

pub fn euler_characteristic_with(
    spec: &ManifoldSpec,
    order: usize,
    opts: GaussBonnetOptions,
) -> Result<GaussBonnetRun> {
    check_dimension(spec, opts)?;
    let grid = grid_for_spec(spec, order)?;
    let values = integrand_over_grid(spec, &grid)?;
    let weighted: Vec<f64> = values
        .iter()
        .zip(&grid.weights)
        .map(|(p, w)| p * w)
        .collect();
    let chi_est = pairwise_sum(&weighted);
    let sup_abs = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let min_integrand = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GaussBonnetRun {
        chi_est,
        residual: spec.euler_char.map(|chi| (chi_est - chi as f64).abs()),
        nodes: grid.len(),
        sup_abs_integrand: sup_abs,
        min_integrand,
    })
}

/// Pointwise mechanism behind "nonnegative curvature operator implies
/// nonnegative Euler characteristic".
#[derive(Debug, Clone, Copy)]
pub struct NonnegCheck {
    /// Nodes with `lambda_1 >= -1e-10` where the integrand fell below
    /// `-1e-10`.
    pub violations: usize,
    /// Nodes with nonnegative operator spectrum.
    pub nonneg_nodes: usize,
    pub nodes: usize,
}

/// Over all quadrature nodes with nonnegative operator spectrum, counts
/// nodes whose integrand is negative beyond tolerance.
pub fn nonneg_operator_implies_nonneg_integrand(
    spec: &ManifoldSpec,
    order: usize,
    opts: GaussBonnetOptions,
) -> Result<NonnegCheck> {
    check_dimension(spec, opts)?;
    let grid = grid_for_spec(spec, order)?;
    let flags: Vec<(bool, bool)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let cp = curvature_at(spec, Some(grid.point(i)))?;
            let op = assemble_curv_op(&cp)?;
            let nonneg = op.lambda_min() >= -1e-10;
            let negative_integrand = euler_integrand(&cp)? < -1e-10;
            Ok((nonneg, negative_integrand))
        })
        .collect::<Result<Vec<_>>>()?;
    let nonneg_nodes = flags.iter().filter(|(n, _)| *n).count();
    let violations = flags.iter().filter(|(n, v)| *n && *v).count();
    Ok(NonnegCheck {
        violations,
        nonneg_nodes,
        nodes: grid.len(),
    })
}

/// Quantitative volume bound: with `|lambda_k| <= cap` everywhere, the
/// integrand is bounded and `Vol >= |chi| / sup |P|`.
#[derive(Debug, Clone, Copy)]
pub struct VolumeBound {
    pub sup_p: f64,
    pub vol: f64,
    pub holds: bool,
    /// `sup_p * vol - |chi|`; near zero when the bound is tight.
    pub residual: f64,
}

pub fn volume_lower_bound_check(
    spec: &ManifoldSpec,
    lambda_cap: f64,
    order: usize,
    opts: GaussBonnetOptions,
) -> Result<VolumeBound> {
    check_dimension(spec, opts)?;
    let chi = spec.euler_char.ok_or_else(|| {
        Error::Precondition(format!("{} lacks Euler characteristic metadata", spec.name))
    })?;
    let grid = grid_for_spec(spec, order)?;
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let cp = curvature_at(spec, Some(grid.point(i)))?;
            let op = assemble_curv_op(&cp)?;
            // relative slop absorbs eigenvalue noise at ill-conditioned
            // chart nodes (polar regions of spherical coordinates)
            if op.op_norm > lambda_cap * (1.0 + 1e-8) + 1e-12 {
                return Err(Error::Precondition(format!(
                    "operator eigenvalue bound violated at node {i} of {}: |lambda| = {} > {}",
                    spec.name, op.op_norm, lambda_cap
                )));
            }
            euler_integrand(&cp)
        })
        .collect::<Result<Vec<_>>>()?;
    let sup_p = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let vol = match spec.volume {
        Some(v) => v,
        None => grid.total_weight(),
    };
    let chi_abs = (chi as f64).abs();
    Ok(VolumeBound {
        sup_p,
        vol,
        holds: chi_abs <= sup_p * vol + 1e-6,
        residual: sup_p * vol - chi_abs,
    })
}
