//! The manifold catalog: chart-based and left-invariant test metrics with
//! trusted analytic metadata (dimension, Euler characteristic, diameter,
//! volume), plus product and rescaling constructions.
//!
//! Diameters are never computed numerically. Entries either carry an exact
//! closed-form diameter or a documented upper bound; certifications that need
//! a diameter must use the stored value conservatively or refuse.

pub mod chart;
pub mod charts;
pub mod homogeneous;

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::sync::Arc;

pub use chart::{metric_derivatives, ChartRef, Derivatives, IntegrationMap, MetricChart};
pub use homogeneous::HomogeneousSpec;

use crate::error::{Error, Result};

/// Whether a stored diameter is exact or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterKind {
    Exact,
    UpperBound,
}

#[derive(Debug, Clone, Copy)]
pub struct Diameter {
    pub value: f64,
    pub kind: DiameterKind,
}

impl Diameter {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            kind: DiameterKind::Exact,
        }
    }

    pub fn upper_bound(value: f64) -> Self {
        Self {
            value,
            kind: DiameterKind::UpperBound,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == DiameterKind::Exact
    }
}

/// Geometric payload of a catalog entry.
#[derive(Clone)]
pub enum Geometry {
    Chart(ChartRef),
    Homogeneous(HomogeneousSpec),
    Product(Box<ManifoldSpec>, Box<ManifoldSpec>),
}

/// A catalog entry: geometry plus analytic metadata.
#[derive(Clone)]
pub struct ManifoldSpec {
    pub name: String,
    pub geometry: Geometry,
    pub euler_char: Option<i64>,
    pub diameter: Option<Diameter>,
    pub volume: Option<f64>,
    /// User-asserted topological metadata; not verifiable numerically.
    pub infinite_pi1: Option<bool>,
}

impl ManifoldSpec {
    pub fn dim(&self) -> usize {
        match &self.geometry {
            Geometry::Chart(c) => c.dim(),
            Geometry::Homogeneous(h) => h.dim(),
            Geometry::Product(a, b) => a.dim() + b.dim(),
        }
    }

    /// Number of chart coordinates a sample point must carry (homogeneous
    /// factors need no point).
    pub fn coord_dim(&self) -> usize {
        match &self.geometry {
            Geometry::Chart(c) => c.dim(),
            Geometry::Homogeneous(_) => 0,
            Geometry::Product(a, b) => a.coord_dim() + b.coord_dim(),
        }
    }

    /// Copy of this spec with the stored diameter replaced; used by
    /// conservativeness checks.
    pub fn with_diameter(&self, d: Diameter) -> Self {
        let mut s = self.clone();
        s.diameter = Some(d);
        s
    }
}

/// Surface volume of the unit m-sphere, by the recursion
/// `A_m = 2 pi A_{m-2} / (m - 1)` with `A_0 = 2`, `A_1 = 2 pi`.
pub fn unit_sphere_volume(m: usize) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * unit_sphere_volume(m - 2) / (m - 1) as f64,
    }
}

fn sphere_spec(m: usize, r: f64) -> Result<ManifoldSpec> {
    // m = 2 keeps classical spherical coordinates (a well-conditioned chart
    // in one angle pair); higher spheres use the stereographic chart, whose
    // conditioning is uniform all the way to the excluded pole.
    let chart: ChartRef = if m == 2 {
        Arc::new(charts::SphereChart::new(m, r)?)
    } else {
        Arc::new(charts::StereographicSphereChart::new(m, r)?)
    };
    Ok(ManifoldSpec {
        name: format!("sphere[{m},{r}]"),
        geometry: Geometry::Chart(chart),
        euler_char: Some(if m % 2 == 0 { 2 } else { 0 }),
        diameter: Some(Diameter::exact(PI * r)),
        volume: Some(unit_sphere_volume(m) * r.powi(m as i32)),
        infinite_pi1: Some(false),
    })
}

fn torus_spec(lengths: Vec<f64>) -> Result<ManifoldSpec> {
    let m = lengths.len();
    if !(2..=6).contains(&m) {
        return Err(Error::Config(format!(
            "flat_torus dimension {m} outside supported range 2..=6"
        )));
    }
    let diam = 0.5 * lengths.iter().map(|l| l * l).sum::<f64>().sqrt();
    let vol = lengths.iter().product();
    let name = format!(
        "flat_torus[{}]",
        lengths
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(ManifoldSpec {
        name,
        geometry: Geometry::Chart(Arc::new(charts::TorusChart::new(lengths)?)),
        euler_char: Some(0),
        diameter: Some(Diameter::exact(diam)),
        volume: Some(vol),
        infinite_pi1: Some(true),
    })
}

fn berger_spec(eps: f64) -> Result<ManifoldSpec> {
    let alg = homogeneous::berger_sphere(eps)?;
    Ok(ManifoldSpec {
        name: format!("berger_sphere[{eps}]"),
        geometry: Geometry::Homogeneous(alg),
        euler_char: Some(0),
        // Shrinking the fiber (eps <= 1) only shortens distances from the
        // round metric, whose diameter is pi; inflating scales at most by eps.
        diameter: Some(Diameter::upper_bound(PI * eps.max(1.0))),
        volume: Some(2.0 * PI * PI * eps),
        infinite_pi1: Some(false),
    })
}

fn heisenberg_spec(eps: f64) -> Result<ManifoldSpec> {
    if eps > 1.0 {
        return Err(Error::Config(format!(
            "heisenberg_nil stores a diameter bound valid for eps <= 1; got eps = {eps}"
        )));
    }
    let alg = homogeneous::heisenberg_nil(eps)?;
    Ok(ManifoldSpec {
        name: format!("heisenberg_nil[{eps}]"),
        geometry: Geometry::Homogeneous(alg),
        euler_char: Some(0),
        // Fixed bound for the standard lattice quotient, valid for all
        // eps <= 1: horizontal travel <= diam T^2 = 1/sqrt(2), vertical
        // travel <= eps/2.
        diameter: Some(Diameter::upper_bound(2.0)),
        volume: Some(eps),
        infinite_pi1: Some(true),
    })
}

fn fubini_study_spec() -> Result<ManifoldSpec> {
    Ok(ManifoldSpec {
        name: "fubini_study_cp2".into(),
        geometry: Geometry::Chart(Arc::new(charts::FubiniStudyChart::new(2))),
        euler_char: Some(3),
        diameter: Some(Diameter::exact(PI / 2.0)),
        volume: Some(PI * PI / 2.0),
        infinite_pi1: Some(false),
    })
}

fn product_spec(a: ManifoldSpec, b: ManifoldSpec) -> ManifoldSpec {
    let euler_char = match (a.euler_char, b.euler_char) {
        (Some(x), Some(y)) => Some(x * y),
        _ => None,
    };
    let diameter = match (a.diameter, b.diameter) {
        (Some(da), Some(db)) => {
            let kind = if da.is_exact() && db.is_exact() {
                DiameterKind::Exact
            } else {
                DiameterKind::UpperBound
            };
            Some(Diameter {
                value: (da.value * da.value + db.value * db.value).sqrt(),
                kind,
            })
        }
        _ => None,
    };
    let volume = match (a.volume, b.volume) {
        (Some(x), Some(y)) => Some(x * y),
        _ => None,
    };
    let infinite_pi1 = match (a.infinite_pi1, b.infinite_pi1) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    };
    ManifoldSpec {
        name: format!("product:{},{}", a.name, b.name),
        geometry: Geometry::Product(Box::new(a), Box::new(b)),
        euler_char,
        diameter,
        volume,
        infinite_pi1,
    }
}

fn scale_geometry(g: &Geometry, c: f64) -> Result<Geometry> {
    Ok(match g {
        Geometry::Chart(chart) => {
            Geometry::Chart(Arc::new(charts::ScaledChart::new(chart.clone(), c)?))
        }
        Geometry::Homogeneous(h) => Geometry::Homogeneous(h.scaled(c)?),
        Geometry::Product(a, b) => Geometry::Product(
            Box::new(scale_spec((**a).clone(), c)?),
            Box::new(scale_spec((**b).clone(), c)?),
        ),
    })
}

/// The spec for the metric `c^2 g`: diameter scales by `c`, volume by `c^m`.
pub fn scale_spec(spec: ManifoldSpec, c: f64) -> Result<ManifoldSpec> {
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::Config(format!("scale factor must be positive, got {c}")));
    }
    let m = spec.dim();
    let geometry = scale_geometry(&spec.geometry, c)?;
    Ok(ManifoldSpec {
        name: format!("scaled[{c}]:{}", spec.name),
        geometry,
        euler_char: spec.euler_char,
        diameter: spec.diameter.map(|d| Diameter {
            value: c * d.value,
            kind: d.kind,
        }),
        volume: spec.volume.map(|v| v * c.powi(m as i32)),
        infinite_pi1: spec.infinite_pi1,
    })
}

fn as_dim(v: f64, what: &str) -> Result<usize> {
    if !v.is_finite() || v < 0.0 || v.fract().abs() > 1e-9 {
        return Err(Error::Config(format!("{what} must be a nonnegative integer, got {v}")));
    }
    Ok(v as usize)
}

/// Splits `s` at top-level commas, respecting `[...]` and `(...)` nesting.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_bracket_params(s: &str) -> Result<(&str, Option<Vec<f64>>)> {
    if let Some(open) = s.find('[') {
        if !s.ends_with(']') {
            return Err(Error::Config(format!("unbalanced brackets in {s:?}")));
        }
        let name = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        let vals = body
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad numeric parameter {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((name, Some(vals)))
    } else {
        Ok((s, None))
    }
}

fn parse_entry(name: &str, queue: &mut VecDeque<f64>) -> Result<ManifoldSpec> {
    let name = name.trim();
    let name = name
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(name);

    if let Some(rest) = name.strip_prefix("scaled:") {
        let c = queue.pop_front().ok_or_else(|| {
            Error::Config("scaled:<entry> requires the scale factor as a parameter".into())
        })?;
        let inner = parse_entry(rest, queue)?;
        return scale_spec(inner, c);
    }
    if let Some(rest) = name.strip_prefix("product:") {
        let parts = split_top_level(rest);
        if parts.len() != 2 {
            return Err(Error::Config(format!(
                "product:<a>,<b> takes exactly two factors, got {} in {name:?} \
                 (parenthesize nested products)",
                parts.len()
            )));
        }
        let a = parse_entry(parts[0], queue)?;
        let b = parse_entry(parts[1], queue)?;
        return Ok(product_spec(a, b));
    }

    let (atom, bracket) = parse_bracket_params(name)?;
    let params: Vec<f64> = match bracket {
        Some(p) => p,
        None => queue.drain(..).collect(),
    };
    match atom {
        "sphere" => {
            if params.len() != 2 {
                return Err(Error::Config(format!(
                    "sphere takes [m, r], got {params:?}"
                )));
            }
            sphere_spec(as_dim(params[0], "sphere dimension")?, params[1])
        }
        "flat_torus" => torus_spec(params),
        "berger_sphere" => {
            if params.len() != 1 {
                return Err(Error::Config(format!(
                    "berger_sphere takes [eps], got {params:?}"
                )));
            }
            berger_spec(params[0])
        }
        "heisenberg_nil" => {
            if params.len() != 1 {
                return Err(Error::Config(format!(
                    "heisenberg_nil takes [eps], got {params:?}"
                )));
            }
            heisenberg_spec(params[0])
        }
        "fubini_study_cp2" => {
            if !params.is_empty() {
                return Err(Error::Config(format!(
                    "fubini_study_cp2 takes no parameters, got {params:?}"
                )));
            }
            fubini_study_spec()
        }
        other => Err(Error::Config(format!("unknown catalog entry {other:?}"))),
    }
}

/// Resolves a catalog name plus parameter list into a fully populated spec.
///
/// Atom parameters may be embedded in the name (`sphere[4,1]`) or passed in
/// `params` for a bare atom. Composite names consume `params` left to right:
/// each `scaled:` prefix pops one scale factor.
pub fn catalog_get(name: &str, params: &[f64]) -> Result<ManifoldSpec> {
    let mut queue: VecDeque<f64> = params.iter().copied().collect();
    let spec = parse_entry(name, &mut queue)?;
    if !queue.is_empty() {
        return Err(Error::Config(format!(
            "{} unused parameters for catalog entry {name:?}",
            queue.len()
        )));
    }
    Ok(spec)
}

/// The named roster that "every catalog manifold" loops run over.
pub fn standard_entries() -> Vec<ManifoldSpec> {
    [
        "sphere[2,1]",
        "sphere[3,1]",
        "sphere[4,1]",
        "flat_torus[1,1,1,1]",
        "berger_sphere[0.5]",
        "heisenberg_nil[0.5]",
        "fubini_study_cp2",
        "product:sphere[2,1],sphere[2,1]",
    ]
    .iter()
    .map(|n| catalog_get(n, &[]).expect("standard catalog entries are valid"))
    .collect()
}
