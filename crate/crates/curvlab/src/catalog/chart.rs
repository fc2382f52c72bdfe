//! Coordinate-chart metrics: evaluation of metric components and their first
//! and second partials, with a Richardson-extrapolated finite-difference
//! fallback for charts that do not supply closed forms.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// First and second metric partials at a point.
///
/// `dg[a]` is the matrix of `d g_ij / d x_a`; `d2g[a][b]` the matrix of
/// `d^2 g_ij / d x_a d x_b`, symmetric in both the metric and the derivative
/// index pairs.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
    pub d2g: Vec<Vec<DMatrix<f64>>>,
}

/// How quadrature nodes map into chart coordinates.
///
/// Most charts integrate directly over their own domain. The Fubini-Study
/// chart compactifies each complex radius through `r = tan(rho)` so that the
/// unbounded affine chart becomes a finite box.
#[derive(Debug, Clone)]
pub enum IntegrationMap {
    /// Integration box equals the chart domain; Jacobian 1.
    Identity,
    /// Per complex coordinate pair `(x_a, y_a)`: integration variables
    /// `(rho_a, theta_a)` in `(0, pi/2) x (0, 2 pi)`, mapped by
    /// `x_a = tan(rho_a) cos(theta_a)`, `y_a = tan(rho_a) sin(theta_a)`.
    TanPolar { pairs: usize },
    /// Radial compactification of all of `R^dim`: polar-angle variables
    /// `(theta, beta_1..beta_{dim-2}, phi)` with radius `r = tan(theta/2)`
    /// and the iterated-sine unit vector in the `beta`/`phi` angles. For a
    /// stereographic sphere chart, `theta` is the polar distance.
    TanRadial { dim: usize },
}

impl IntegrationMap {
    /// The box over which Gauss-Legendre nodes are placed.
    pub fn integration_box(&self, chart_domain: &[(f64, f64)]) -> Vec<(f64, f64)> {
        match self {
            IntegrationMap::Identity => chart_domain.to_vec(),
            IntegrationMap::TanPolar { pairs } => {
                let mut b = Vec::with_capacity(2 * pairs);
                for _ in 0..*pairs {
                    b.push((0.0, std::f64::consts::FRAC_PI_2));
                    b.push((0.0, 2.0 * std::f64::consts::PI));
                }
                b
            }
            IntegrationMap::TanRadial { dim } => {
                let mut b = vec![(0.0, std::f64::consts::PI); dim - 1];
                b.push((0.0, 2.0 * std::f64::consts::PI));
                b
            }
        }
    }

    /// Maps an integration-box point to chart coordinates, returning the
    /// absolute Jacobian determinant of the map.
    pub fn to_chart(&self, u: &[f64]) -> (Vec<f64>, f64) {
        match self {
            IntegrationMap::Identity => (u.to_vec(), 1.0),
            IntegrationMap::TanPolar { pairs } => {
                let mut x = Vec::with_capacity(2 * pairs);
                let mut jac = 1.0;
                for a in 0..*pairs {
                    let rho = u[2 * a];
                    let theta = u[2 * a + 1];
                    let r = rho.tan();
                    let sec2 = 1.0 + r * r;
                    x.push(r * theta.cos());
                    x.push(r * theta.sin());
                    // dx dy = r dr dtheta, dr = sec^2(rho) drho
                    jac *= r * sec2;
                }
                (x, jac)
            }
            IntegrationMap::TanRadial { dim } => {
                let m = *dim;
                let theta = u[0];
                let half = 0.5 * theta;
                let r = half.tan();
                let dr_dtheta = 0.5 * (1.0 + r * r);
                // iterated-sine unit vector in the remaining angles
                let mut omega = Vec::with_capacity(m);
                let mut sines = 1.0;
                for &ang in &u[1..] {
                    omega.push(sines * ang.cos());
                    sines *= ang.sin();
                }
                omega.push(sines);
                let x: Vec<f64> = omega.iter().map(|w| r * w).collect();
                // dy = r^{m-1} dr dOmega with the iterated-sine area element
                let mut jac = r.powi(m as i32 - 1) * dr_dtheta;
                for (k, &ang) in u[1..u.len() - 1].iter().enumerate() {
                    jac *= ang.sin().powi((m - 2 - k) as i32);
                }
                (x, jac.abs())
            }
        }
    }
}

/// A coordinate chart carrying metric components and optional closed-form
/// derivatives. Implementations must return exactly symmetric matrices.
pub trait MetricChart: Send + Sync {
    fn dim(&self) -> usize;

    /// Axis-aligned open box of valid coordinates.
    fn domain(&self) -> Vec<(f64, f64)>;

    /// Metric components at `x` (assumed interior).
    fn metric(&self, x: &[f64]) -> DMatrix<f64>;

    /// Closed-form first partials, when available.
    fn metric_d1(&self, _x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        None
    }

    /// Closed-form second partials, when available.
    fn metric_d2(&self, _x: &[f64]) -> Option<Vec<Vec<DMatrix<f64>>>> {
        None
    }

    /// Whether the chart covers the manifold up to a measure-zero set.
    fn covers_full_measure(&self) -> bool;

    fn integration(&self) -> IntegrationMap {
        IntegrationMap::Identity
    }
}

pub type ChartRef = Arc<dyn MetricChart>;

/// Step for Richardson-extrapolated central first differences.
fn step_first(coord: f64) -> f64 {
    f64::EPSILON.powf(1.0 / 3.0) * coord.abs().max(1.0)
}

/// Step for Richardson-extrapolated direct second differences. The larger
/// exponent balances h^4 truncation against eps/h^2 roundoff.
fn step_second(coord: f64) -> f64 {
    f64::EPSILON.powf(1.0 / 6.0) * coord.abs().max(1.0)
}

fn check_interior(chart: &dyn MetricChart, x: &[f64], margin: &[f64]) -> Result<()> {
    let dom = chart.domain();
    if x.len() != dom.len() {
        return Err(Error::Domain(format!(
            "point has {} coordinates, chart has {}",
            x.len(),
            dom.len()
        )));
    }
    for (a, (&xa, &(lo, hi))) in x.iter().zip(dom.iter()).enumerate() {
        let need = margin.get(a).copied().unwrap_or(0.0);
        if xa - lo <= need || hi - xa <= need {
            return Err(Error::Domain(format!(
                "coordinate {a} = {xa} too close to domain boundary ({lo}, {hi}) for stencil margin {need:.3e}"
            )));
        }
    }
    Ok(())
}

fn offset(x: &[f64], a: usize, da: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[a] += da;
    y
}

fn offset2(x: &[f64], a: usize, da: f64, b: usize, db: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[a] += da;
    y[b] += db;
    y
}

/// Richardson-extrapolated central difference of a matrix-valued map.
fn fd_first<F>(f: &F, x: &[f64], a: usize) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let h = step_first(x[a]);
    let d = |h: f64| (f(&offset(x, a, h)) - f(&offset(x, a, -h))) / (2.0 * h);
    let coarse = d(h);
    let fine = d(h / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

/// Richardson-extrapolated direct second difference along one axis.
fn fd_second_diag<F>(f: &F, x: &[f64], a: usize) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let h = step_second(x[a]);
    let center = f(x);
    let s = |h: f64| {
        (f(&offset(x, a, h)) + f(&offset(x, a, -h)) - center.scale(2.0)) / (h * h)
    };
    let coarse = s(h);
    let fine = s(h / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

/// Richardson-extrapolated cross stencil for a mixed second partial.
fn fd_second_mixed<F>(f: &F, x: &[f64], a: usize, b: usize) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let ha = step_second(x[a]);
    let hb = step_second(x[b]);
    let m = |ha: f64, hb: f64| {
        (f(&offset2(x, a, ha, b, hb)) - f(&offset2(x, a, ha, b, -hb))
            - f(&offset2(x, a, -ha, b, hb))
            + f(&offset2(x, a, -ha, b, -hb)))
            / (4.0 * ha * hb)
    };
    let coarse = m(ha, hb);
    let fine = m(ha / 2.0, hb / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

/// Metric components and first/second partials at `x`.
///
/// Exact when the chart supplies closed forms; otherwise central differences
/// with one Richardson extrapolation level. Outputs are symmetrized in the
/// metric indices and (for second partials) in the derivative indices.
pub fn metric_derivatives(chart: &dyn MetricChart, x: &[f64]) -> Result<Derivatives> {
    let m = chart.dim();
    let closed_d1 = chart.metric_d1(x);
    let closed_d2 = chart.metric_d2(x);
    let need_fd1 = closed_d1.is_none();
    let need_fd2 = closed_d2.is_none();
    let margin: Vec<f64> = x
        .iter()
        .map(|&xa| {
            let mut need = 0.0f64;
            if need_fd1 {
                need = need.max(2.0 * step_first(xa));
            }
            if need_fd2 {
                need = need.max(2.0 * step_second(xa));
            }
            need
        })
        .collect();
    check_interior(chart, x, &margin)?;

    let g = chart.metric(x);
    if g.nrows() != m || g.ncols() != m {
        return Err(Error::Validation(format!(
            "chart returned {}x{} metric in dimension {m}",
            g.nrows(),
            g.ncols()
        )));
    }
    if g.clone().cholesky().is_none() {
        return Err(Error::Validation(format!(
            "metric not positive definite at {x:?}"
        )));
    }

    let eval = |y: &[f64]| chart.metric(y);

    let mut dg: Vec<DMatrix<f64>> = match closed_d1 {
        Some(d) => d,
        None => (0..m).map(|a| fd_first(&eval, x, a)).collect(),
    };

    let mut d2g: Vec<Vec<DMatrix<f64>>> = match closed_d2 {
        Some(d) => d,
        None => {
            if !need_fd1 {
                // differentiate the closed-form first partials
                let mut out = vec![vec![DMatrix::zeros(m, m); m]; m];
                for b in 0..m {
                    let comp = |y: &[f64]| {
                        chart
                            .metric_d1(y)
                            .expect("chart advertises closed-form first partials")[b]
                            .clone()
                    };
                    for a in 0..m {
                        out[b][a] = fd_first(&comp, x, a); // d_a d_b g
                    }
                }
                out
            } else {
                let mut out = vec![vec![DMatrix::zeros(m, m); m]; m];
                for a in 0..m {
                    out[a][a] = fd_second_diag(&eval, x, a);
                    for b in a + 1..m {
                        let mixed = fd_second_mixed(&eval, x, a, b);
                        out[a][b] = mixed.clone();
                        out[b][a] = mixed;
                    }
                }
                out
            }
        }
    };

    // Closed forms are constructed exactly symmetric; only finite-difference
    // output needs symmetrization.
    if need_fd1 || need_fd2 {
        for a in 0..m {
            for b in a + 1..m {
                let avg = (&d2g[a][b] + &d2g[b][a]).scale(0.5);
                d2g[a][b] = avg.clone();
                d2g[b][a] = avg;
            }
        }
        let symmetrize = |mat: &mut DMatrix<f64>| {
            let s = (mat.clone() + mat.transpose()).scale(0.5);
            *mat = s;
        };
        if need_fd1 {
            for mat in dg.iter_mut() {
                symmetrize(mat);
            }
        }
        for row in d2g.iter_mut() {
            for mat in row.iter_mut() {
                symmetrize(mat);
            }
        }
    }

    Ok(Derivatives { g, dg, d2g })
}
