//! Tensor-product Gauss-Legendre quadrature over catalog manifolds, with
//! node weights carrying the Riemannian volume density `sqrt(det g)` and any
//! compactification Jacobian.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::catalog::{Geometry, ManifoldSpec};
use crate::error::{Error, Result};
use crate::linalg::pairwise_sum;

/// Gauss-Legendre nodes and weights on `(-1, 1)`, by Newton iteration on the
/// Legendre recurrence. Accurate to machine precision for the orders used
/// here (<= a few hundred).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "quadrature order must be positive");
    let mut out = vec![(0.0, 0.0); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..64 {
            // p0, p1 carry P_{k-1}, P_k of the recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x.abs(), w);
        out[n - 1 - i] = (x.abs(), w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

/// Quadrature nodes over a spec, stored flat: node `i` occupies
/// `points[i*coord_dim .. (i+1)*coord_dim]` (chart coordinates of all chart
/// factors concatenated; homogeneous factors contribute none) and weight
/// `weights[i]` (Gauss-Legendre weight times Jacobian times `sqrt(det g)`,
/// or the analytic volume for a homogeneous geometry).
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub coord_dim: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        if self.coord_dim == 0 {
            &[]
        } else {
            &self.points[i * self.coord_dim..(i + 1) * self.coord_dim]
        }
    }

    /// Total mass, i.e. the quadrature estimate of the Riemannian volume.
    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    fn tensor(a: QuadratureGrid, b: QuadratureGrid) -> QuadratureGrid {
        let coord_dim = a.coord_dim + b.coord_dim;
        let n = a.len() * b.len();
        let mut points = Vec::with_capacity(n * coord_dim);
        let mut weights = Vec::with_capacity(n);
        for i in 0..a.len() {
            for j in 0..b.len() {
                points.extend_from_slice(a.point(i));
                points.extend_from_slice(b.point(j));
                weights.push(a.weights[i] * b.weights[j]);
            }
        }
        QuadratureGrid {
            coord_dim,
            points,
            weights,
        }
    }
}

fn det_sqrt(g: &DMatrix<f64>) -> Result<f64> {
    let det = g.determinant();
    if !(det > 0.0) {
        return Err(Error::Validation(format!(
            "metric determinant {det} not positive at a quadrature node"
        )));
    }
    Ok(det.sqrt())
}

/// Builds the tensor-product grid of a spec at `order` nodes per axis.
///
/// Chart geometries must cover full measure; homogeneous geometries need
/// volume metadata and produce a single node. Products tensor their factor
/// grids.
pub fn grid_for_spec(spec: &ManifoldSpec, order: usize) -> Result<QuadratureGrid> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be >= 1".into()));
    }
    match &spec.geometry {
        Geometry::Chart(chart) => {
            if !chart.covers_full_measure() {
                return Err(Error::Unsupported(format!(
                    "chart of {} does not cover full measure; integration unsupported",
                    spec.name
                )));
            }
            let imap = chart.integration();
            let bounds = imap.integration_box(&chart.domain());
            let m = bounds.len();
            let gl = gauss_legendre(order);
            // per-axis affine rescaling of the reference nodes
            let axes: Vec<Vec<(f64, f64)>> = bounds
                .iter()
                .map(|&(lo, hi)| {
                    gl.iter()
                        .map(|&(x, w)| (0.5 * (hi + lo) + 0.5 * (hi - lo) * x, 0.5 * (hi - lo) * w))
                        .collect()
                })
                .collect();
            let n_nodes = order.pow(m as u32);
            let node_data: Vec<(Vec<f64>, f64)> = (0..n_nodes)
                .into_par_iter()
                .map(|flat| {
                    // decode axis indices, last axis fastest-varying
                    let mut rem = flat;
                    let mut idxs = vec![0usize; m];
                    for axis in (0..m).rev() {
                        idxs[axis] = rem % order;
                        rem /= order;
                    }
                    let mut u = Vec::with_capacity(m);
                    let mut w = 1.0;
                    for axis in 0..m {
                        let (x, wx) = axes[axis][idxs[axis]];
                        u.push(x);
                        w *= wx;
                    }
                    let (x, jac) = imap.to_chart(&u);
                    let dens = det_sqrt(&chart.metric(&x))?;
                    Ok((x, w * jac * dens))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut points = Vec::with_capacity(n_nodes * m);
            let mut weights = Vec::with_capacity(n_nodes);
            for (x, w) in node_data {
                points.extend_from_slice(&x);
                weights.push(w);
            }
            Ok(QuadratureGrid {
                coord_dim: m,
                points,
                weights,
            })
        }
        Geometry::Homogeneous(_) => {
            let vol = spec.volume.ok_or_else(|| {
                Error::Unsupported(format!(
                    "homogeneous entry {} lacks volume metadata; integration unsupported",
                    spec.name
                ))
            })?;
            Ok(QuadratureGrid {
                coord_dim: 0,
                points: vec![],
                weights: vec![vol],
            })
        }
        Geometry::Product(a, b) => {
            let ga = grid_for_spec(a, order)?;
            let gb = grid_for_spec(b, order)?;
            Ok(QuadratureGrid::tensor(ga, gb))
        }
    }
}

/// A small deterministic grid with roughly `target_points` nodes, used for
/// worst-case-over-nodes sampling of chart spectra.
pub fn sample_grid(spec: &ManifoldSpec, target_points: usize) -> Result<QuadratureGrid> {
    let d = spec.coord_dim();
    if d == 0 {
        // homogeneous everywhere: one node carries the whole manifold
        return grid_for_spec(spec, 1);
    }
    let order = ((target_points.max(1) as f64).powf(1.0 / d as f64).ceil() as usize).max(2);
    grid_for_spec(spec, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // order n is exact through degree 2n-1
        let gl = gauss_legendre(5);
        let total: f64 = gl.iter().map(|(_, w)| w).sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
        let x8: f64 = gl.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert_abs_diff_eq!(x8, 2.0 / 9.0, epsilon = 1e-13);
        let x3: f64 = gl.iter().map(|(x, w)| w * x.powi(3)).sum();
        assert_abs_diff_eq!(x3, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn volumes_match_metadata() {
        let cases = [
            "sphere[2,1]",
            "sphere[3,1]",
            "sphere[4,1]",
            "flat_torus[1,1,1,1]",
            "product:sphere[2,1],sphere[2,1]",
            "fubini_study_cp2",
        ];
        for name in cases {
            let spec = catalog_get(name, &[]).unwrap();
            // keep the 4d grids modest here; order-32 convergence is
            // exercised by the acceptance suite
            let order = if spec.dim() <= 3 { 32 } else { 16 };
            let grid = grid_for_spec(&spec, order).unwrap();
            let vol = grid.total_weight();
            let expect = spec.volume.unwrap();
            let rel = (vol - expect).abs() / expect;
            assert!(rel < 1e-3, "{name}: vol {vol} vs {expect} (rel {rel:.2e})");
        }
    }

    #[test]
    fn sphere2_volume_tight_at_order_32() {
        let spec = catalog_get("sphere[2,1]", &[]).unwrap();
        let grid = grid_for_spec(&spec, 32).unwrap();
        assert_abs_diff_eq!(grid.total_weight(), 4.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn homogeneous_grid_is_single_volume_node() {
        let spec = catalog_get("berger_sphere[0.5]", &[]).unwrap();
        let grid = grid_for_spec(&spec, 32).unwrap();
        assert_eq!(grid.len(), 1);
        assert_eq!(grid.coord_dim, 0);
        assert_abs_diff_eq!(grid.weights[0], 2.0 * PI * PI * 0.5, epsilon = 1e-12);
    }

    #[test]
    fn scaled_grid_scales_volume() {
        let spec = catalog_get("scaled:flat_torus[1,1,1,1]", &[2.0]).unwrap();
        let grid = grid_for_spec(&spec, 4).unwrap();
        assert_abs_diff_eq!(grid.total_weight(), 16.0, epsilon = 1e-10);
    }

    #[test]
    fn sample_grid_has_roughly_requested_nodes() {
        let spec = catalog_get("sphere[2,1]", &[]).unwrap();
        let grid = sample_grid(&spec, 60).unwrap();
        assert!(grid.len() >= 60);
        assert!(grid.len() <= 100);
    }
}
