//! The chart-based catalog metrics: round spheres in spherical coordinates,
//! flat tori, the Fubini-Study metric on an affine chart, and the scaled and
//! product combinators.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::chart::{ChartRef, IntegrationMap, MetricChart};
use crate::error::{Error, Result};

/// Flat torus `R^m / (L_0 Z x ... x L_{m-1} Z)` in the obvious chart.
pub struct TorusChart {
    lengths: Vec<f64>,
}

impl TorusChart {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if lengths.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
            return Err(Error::Config(format!("torus lengths must be positive: {lengths:?}")));
        }
        Ok(Self { lengths })
    }
}

impl MetricChart for TorusChart {
    fn dim(&self) -> usize {
        self.lengths.len()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        self.lengths.iter().map(|&l| (0.0, l)).collect()
    }

    fn metric(&self, _x: &[f64]) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    fn metric_d1(&self, _x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let m = self.dim();
        Some(vec![DMatrix::zeros(m, m); m])
    }

    fn metric_d2(&self, _x: &[f64]) -> Option<Vec<Vec<DMatrix<f64>>>> {
        let m = self.dim();
        Some(vec![vec![DMatrix::zeros(m, m); m]; m])
    }

    fn covers_full_measure(&self) -> bool {
        true
    }
}

/// Round sphere `S^m(r)` in spherical coordinates: angles
/// `x_0..x_{m-2} in (0, pi)`, azimuth `x_{m-1} in (0, 2 pi)`, with
/// `g_jj = r^2 prod_{a<j} sin^2 x_a`. The excluded polar set has measure
/// zero, so the chart covers full measure.
pub struct SphereChart {
    m: usize,
    radius: f64,
}

impl SphereChart {
    pub fn new(m: usize, radius: f64) -> Result<Self> {
        if !(2..=6).contains(&m) {
            return Err(Error::Config(format!("sphere dimension {m} outside supported range 2..=6")));
        }
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::Config(format!("sphere radius must be positive, got {radius}")));
        }
        Ok(Self { m, radius })
    }

    /// Diagonal entries `g_jj`.
    fn diag(&self, x: &[f64]) -> Vec<f64> {
        let r2 = self.radius * self.radius;
        let mut d = vec![r2; self.m];
        let mut acc = r2;
        for j in 1..self.m {
            let s = x[j - 1].sin();
            acc *= s * s;
            d[j] = acc;
        }
        d
    }
}

impl MetricChart for SphereChart {
    fn dim(&self) -> usize {
        self.m
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        let mut d = vec![(0.0, PI); self.m - 1];
        d.push((0.0, 2.0 * PI));
        d
    }

    fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.diag(x)))
    }

    fn metric_d1(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let m = self.m;
        let diag = self.diag(x);
        let mut out = vec![DMatrix::zeros(m, m); m];
        for c in 0..m.saturating_sub(1) {
            let cot = x[c].cos() / x[c].sin();
            for j in c + 1..m {
                out[c][(j, j)] = 2.0 * cot * diag[j];
            }
        }
        Some(out)
    }

    fn metric_d2(&self, x: &[f64]) -> Option<Vec<Vec<DMatrix<f64>>>> {
        let m = self.m;
        let diag = self.diag(x);
        let cot: Vec<f64> = (0..m.saturating_sub(1)).map(|a| x[a].cos() / x[a].sin()).collect();
        let mut out = vec![vec![DMatrix::zeros(m, m); m]; m];
        for c in 0..m.saturating_sub(1) {
            for d in 0..m.saturating_sub(1) {
                for j in c.max(d) + 1..m {
                    out[c][d][(j, j)] = if c == d {
                        (2.0 * cot[c] * cot[c] - 2.0) * diag[j]
                    } else {
                        4.0 * cot[c] * cot[d] * diag[j]
                    };
                }
            }
        }
        Some(out)
    }

    fn covers_full_measure(&self) -> bool {
        true
    }
}

/// Round sphere `S^m(r)` in the stereographic chart from one pole:
/// conformally flat `g_ij = c(y) delta_ij` with `c = 4 r^2 / (1 + |y|^2)^2`
/// on all of `R^m`, covering the sphere minus a single point.
///
/// Unlike iterated spherical coordinates, this chart is uniformly
/// well-conditioned: the curvature assembly never divides by near-zero
/// metric entries, so quadrature grids may approach the excluded pole
/// without losing accuracy. Integration compactifies the radius through
/// `r = tan(theta/2)` (the polar distance of the round metric).
pub struct StereographicSphereChart {
    m: usize,
    radius: f64,
    sample_halfwidth: f64,
}

impl StereographicSphereChart {
    pub fn new(m: usize, radius: f64) -> Result<Self> {
        if !(2..=6).contains(&m) {
            return Err(Error::Config(format!(
                "sphere dimension {m} outside supported range 2..=6"
            )));
        }
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::Config(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            m,
            radius,
            sample_halfwidth: 20.0,
        })
    }
}

impl MetricChart for StereographicSphereChart {
    fn dim(&self) -> usize {
        self.m
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        vec![(-self.sample_halfwidth, self.sample_halfwidth); self.m]
    }

    fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        let w = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
        let c = 4.0 * self.radius * self.radius / (w * w);
        DMatrix::identity(self.m, self.m).scale(c)
    }

    fn metric_d1(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let m = self.m;
        let w = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
        let w3 = w * w * w;
        let r2 = self.radius * self.radius;
        Some(
            (0..m)
                .map(|a| {
                    let dc = -16.0 * r2 * x[a] / w3;
                    DMatrix::identity(m, m).scale(dc)
                })
                .collect(),
        )
    }

    fn metric_d2(&self, x: &[f64]) -> Option<Vec<Vec<DMatrix<f64>>>> {
        let m = self.m;
        let w = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
        let w3 = w * w * w;
        let w4 = w3 * w;
        let r2 = self.radius * self.radius;
        let mut out = vec![vec![DMatrix::zeros(m, m); m]; m];
        for a in 0..m {
            for b in a..m {
                let delta = if a == b { 1.0 } else { 0.0 };
                let ddc = -16.0 * r2 * (delta / w3 - 6.0 * x[a] * x[b] / w4);
                let mat = DMatrix::identity(m, m).scale(ddc);
                out[a][b] = mat.clone();
                out[b][a] = mat;
            }
        }
        Some(out)
    }

    fn covers_full_measure(&self) -> bool {
        true
    }

    fn integration(&self) -> IntegrationMap {
        IntegrationMap::TanRadial { dim: self.m }
    }
}

/// Fubini-Study metric on `CP^n` in the affine chart `[1 : z_1 : ... : z_n]`,
/// in the normalization with holomorphic sectional curvature 4 (sectional
/// curvatures in `[1, 4]`, `diam = pi/2`, `Vol(CP^2) = pi^2/2`).
///
/// Real coordinates are interleaved `(x_1, y_1, ..., x_n, y_n)` with
/// `z_a = x_a + i y_a`. The Hermitian components are
/// `h_ab = delta_ab / w - conj(z_a) z_b / w^2`, `w = 1 + |z|^2`, and the real
/// metric is `G(u, v) = Re sum h_ab u_a conj(v_b)` over the complexified
/// tangent components. All derivatives are closed-form.
pub struct FubiniStudyChart {
    pairs: usize,
    /// Half-width of the sampling box for pointwise evaluation; the chart is
    /// valid on all of R^{2n}, integration runs through the tan-polar map.
    sample_halfwidth: f64,
}

impl FubiniStudyChart {
    pub fn new(pairs: usize) -> Self {
        Self {
            pairs,
            sample_halfwidth: 20.0,
        }
    }

    fn z(&self, x: &[f64]) -> Vec<Complex64> {
        (0..self.pairs)
            .map(|a| Complex64::new(x[2 * a], x[2 * a + 1]))
            .collect()
    }

    /// Unit complex factor of the real basis direction `xi`.
    fn dir(xi: usize) -> Complex64 {
        if xi % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        }
    }

    /// Projects a Hermitian matrix-valued quantity to real metric components.
    fn to_real(&self, h: &[Vec<Complex64>]) -> DMatrix<f64> {
        let m = 2 * self.pairs;
        let mut g = DMatrix::zeros(m, m);
        for mu in 0..m {
            for nu in 0..m {
                let a = mu / 2;
                let b = nu / 2;
                let v = h[a][b] * Self::dir(mu) * Self::dir(nu).conj();
                g[(mu, nu)] = v.re;
            }
        }
        g
    }

    fn hermitian(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        let z = self.z(x);
        let w = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let n = self.pairs;
        let mut h = vec![vec![Complex64::ZERO; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut v = -z[a].conj() * z[b] / (w * w);
                if a == b {
                    v += Complex64::new(1.0 / w, 0.0);
                }
                h[a][b] = v;
            }
        }
        h
    }
}

impl MetricChart for FubiniStudyChart {
    fn dim(&self) -> usize {
        2 * self.pairs
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        vec![(-self.sample_halfwidth, self.sample_halfwidth); 2 * self.pairs]
    }

    fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        self.to_real(&self.hermitian(x))
    }

    fn metric_d1(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.pairs;
        let m = 2 * n;
        let z = self.z(x);
        let w = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let w2 = w * w;
        let w3 = w2 * w;
        let mut out = Vec::with_capacity(m);
        for xi in 0..m {
            let c = xi / 2;
            let f = Self::dir(xi);
            let w_xi = 2.0 * x[xi];
            let mut dh = vec![vec![Complex64::ZERO; n]; n];
            for a in 0..n {
                for b in 0..n {
                    let p = z[a].conj() * z[b];
                    // P_xi = conj(f) delta_{a c} z_b + conj(z_a) f delta_{b c}
                    let mut p_xi = Complex64::ZERO;
                    if a == c {
                        p_xi += f.conj() * z[b];
                    }
                    if b == c {
                        p_xi += z[a].conj() * f;
                    }
                    let mut v = -p_xi / w2 + 2.0 * p * w_xi / w3;
                    if a == b {
                        v -= Complex64::new(w_xi / w2, 0.0);
                    }
                    dh[a][b] = v;
                }
            }
            out.push(self.to_real(&dh));
        }
        Some(out)
    }

    fn metric_d2(&self, x: &[f64]) -> Option<Vec<Vec<DMatrix<f64>>>> {
        let n = self.pairs;
        let m = 2 * n;
        let z = self.z(x);
        let w = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let w2 = w * w;
        let w3 = w2 * w;
        let w4 = w2 * w2;
        let mut out = vec![vec![DMatrix::zeros(m, m); m]; m];
        for xi in 0..m {
            for eta in xi..m {
                let (cx, fx, wx) = (xi / 2, Self::dir(xi), 2.0 * x[xi]);
                let (ce, fe, we) = (eta / 2, Self::dir(eta), 2.0 * x[eta]);
                let w_xe = if xi == eta { 2.0 } else { 0.0 };
                let mut d2h = vec![vec![Complex64::ZERO; n]; n];
                for a in 0..n {
                    for b in 0..n {
                        let p = z[a].conj() * z[b];
                        let mut p_x = Complex64::ZERO;
                        if a == cx {
                            p_x += fx.conj() * z[b];
                        }
                        if b == cx {
                            p_x += z[a].conj() * fx;
                        }
                        let mut p_e = Complex64::ZERO;
                        if a == ce {
                            p_e += fe.conj() * z[b];
                        }
                        if b == ce {
                            p_e += z[a].conj() * fe;
                        }
                        let mut p_xe = Complex64::ZERO;
                        if a == cx && b == ce {
                            p_xe += fx.conj() * fe;
                        }
                        if a == ce && b == cx {
                            p_xe += fe.conj() * fx;
                        }
                        let mut v = -p_xe / w2 + 2.0 * (p_x * we + p_e * wx) / w3
                            + 2.0 * p * w_xe / w3
                            - 6.0 * p * wx * we / w4;
                        if a == b {
                            v += Complex64::new(2.0 * wx * we / w3 - w_xe / w2, 0.0);
                        }
                        d2h[a][b] = v;
                    }
                }
                let real = self.to_real(&d2h);
                out[xi][eta] = real.clone();
                out[eta][xi] = real;
            }
        }
        Some(out)
    }

    fn covers_full_measure(&self) -> bool {
        true
    }

    fn integration(&self) -> IntegrationMap {
        IntegrationMap::TanPolar { pairs: self.pairs }
    }
}

/// Conformally constant rescaling `g -> c^2 g` of an inner chart.
pub struct ScaledChart {
    inner: ChartRef,
    c2: f64,
}

impl ScaledChart {
    pub fn new(inner: ChartRef, c: f64) -> Result<Self> {
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::Config(format!("scale factor must be positive, got {c}")));
        }
        Ok(Self { inner, c2: c * c })
    }
}

impl MetricChart for ScaledChart {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        self.inner.domain()
    }

    fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        self.inner.metric(x).scale(self.c2)
    }

    fn metric_d1(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        self.inner
            .metric_d1(x)
            .map(|d| d.into_iter().map(|mat| mat.scale(self.c2)).collect())
    }

    fn metric_d2(&self, x: &[f64]) -> Option<Vec<Vec<DMatrix<f64>>>> {
        self.inner.metric_d2(x).map(|d| {
            d.into_iter()
                .map(|row| row.into_iter().map(|mat| mat.scale(self.c2)).collect())
                .collect()
        })
    }

    fn covers_full_measure(&self) -> bool {
        self.inner.covers_full_measure()
    }

    fn integration(&self) -> IntegrationMap {
        self.inner.integration()
    }
}

/// Riemannian product of two charts: concatenated coordinates, block-diagonal
/// metric. Used as the brute-force route for product curvature checks.
pub struct ProductChart {
    a: ChartRef,
    b: ChartRef,
}

impl ProductChart {
    pub fn new(a: ChartRef, b: ChartRef) -> Result<Self> {
        if !matches!(a.integration(), IntegrationMap::Identity)
            || !matches!(b.integration(), IntegrationMap::Identity)
        {
            return Err(Error::Unsupported(
                "product charts require identity integration maps on both factors".into(),
            ));
        }
        Ok(Self { a, b })
    }

    fn split<'x>(&self, x: &'x [f64]) -> (&'x [f64], &'x [f64]) {
        x.split_at(self.a.dim())
    }
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(a);
    out.view_mut((na, na), (nb, nb)).copy_from(b);
    out
}

impl MetricChart for ProductChart {
    fn dim(&self) -> usize {
        self.a.dim() + self.b.dim()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        let mut d = self.a.domain();
        d.extend(self.b.domain());
        d
    }

    fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        let (xa, xb) = self.split(x);
        block_diag(&self.a.metric(xa), &self.b.metric(xb))
    }

    fn metric_d1(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let (xa, xb) = self.split(x);
        let (ma, mb) = (self.a.dim(), self.b.dim());
        let da = self.a.metric_d1(xa)?;
        let db = self.b.metric_d1(xb)?;
        let za = DMatrix::zeros(ma, ma);
        let zb = DMatrix::zeros(mb, mb);
        let mut out = Vec::with_capacity(ma + mb);
        for mat in &da {
            out.push(block_diag(mat, &zb));
        }
        for mat in &db {
            out.push(block_diag(&za, mat));
        }
        Some(out)
    }

    fn metric_d2(&self, x: &[f64]) -> Option<Vec<Vec<DMatrix<f64>>>> {
        let (xa, xb) = self.split(x);
        let (ma, mb) = (self.a.dim(), self.b.dim());
        let m = ma + mb;
        let da = self.a.metric_d2(xa)?;
        let db = self.b.metric_d2(xb)?;
        let za = DMatrix::zeros(ma, ma);
        let zb = DMatrix::zeros(mb, mb);
        let mut out = vec![vec![DMatrix::zeros(m, m); m]; m];
        for p in 0..m {
            for q in 0..m {
                out[p][q] = if p < ma && q < ma {
                    block_diag(&da[p][q], &zb)
                } else if p >= ma && q >= ma {
                    block_diag(&za, &db[p - ma][q - ma])
                } else {
                    DMatrix::zeros(m, m)
                };
            }
        }
        Some(out)
    }

    fn covers_full_measure(&self) -> bool {
        self.a.covers_full_measure() && self.b.covers_full_measure()
    }
}

/// Convenience constructor used by tests and the catalog.
pub fn product_chart(a: ChartRef, b: ChartRef) -> Result<ChartRef> {
    Ok(Arc::new(ProductChart::new(a, b)?))
}
