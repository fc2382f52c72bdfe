//! Certification of scaled eigenvalue conditions on one-parameter metric
//! families, and consistency bookkeeping against stored topology metadata.
//!
//! All conditions are stated in the scale-invariant form
//! `lambda * diam^2 >= threshold`. When a member's diameter is only an upper
//! bound, the scaled quantity is evaluated conservatively: at the bound when
//! the eigenvalue quantity is negative, and floored at zero otherwise (the
//! true quantity can only be larger). Upper-side certifications against a
//! cap are refused for upper-bound diameters.

use serde::{Deserialize, Serialize};

use crate::catalog::{catalog_get, scale_spec, ManifoldSpec};
use crate::curvature::curvature_at;
use crate::error::{Error, Result};
use crate::operator::assemble_curv_op;
use crate::quadrature::sample_grid;
use crate::weitzenbock::weitzenbock_constant;

/// The certified condition of a family run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Condition {
    /// Every eigenvalue: `lambda_j * diam^2 >= -1/i`.
    AncoAll,
    /// Partial sum: `(lambda_1 + .. + lambda_count) * diam^2 >= -count/i`.
    SumCount { count: usize },
    /// Two-sided: lower threshold per member on `lambda_1 * diam^2`, and
    /// `lambda_N * diam^2 <= cap`.
    TwoSided { cap: f64 },
}

/// A one-parameter catalog family with a certification request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySpec {
    /// Catalog name with one scalar parameter slot, e.g. `heisenberg_nil`
    /// or `scaled:sphere[4,1]`.
    pub base: String,
    /// Member parameters; member `i` (1-based) uses `schedule[i-1]`.
    pub schedule: Vec<f64>,
    pub condition: Condition,
    /// Lower thresholds for [`Condition::TwoSided`]; defaults to `-1/i`.
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() {
            return Err(Error::Config("family schedule must be nonempty".into()));
        }
        if self.schedule.iter().any(|&p| p <= 0.0 || !p.is_finite()) {
            return Err(Error::Config(format!(
                "family parameters must be positive: {:?}",
                self.schedule
            )));
        }
        if let Some(t) = &self.thresholds {
            if t.len() != self.schedule.len() {
                return Err(Error::Config(format!(
                    "threshold schedule length {} does not match member count {}",
                    t.len(),
                    self.schedule.len()
                )));
            }
        }
        Ok(())
    }

    pub fn member(&self, idx: usize) -> Result<ManifoldSpec> {
        let spec = catalog_get(&self.base, &[self.schedule[idx]])?;
        if spec.diameter.is_none() {
            return Err(Error::Unsupported(format!(
                "family member {} lacks diameter metadata; scaled certification refused",
                spec.name
            )));
        }
        Ok(spec)
    }
}

/// Worst-case spectral data of one family member, minimized over sample
/// nodes for chart geometries (homogeneous members have a single spectrum).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberSpectrum {
    /// 1-based member index.
    pub index: usize,
    pub param: f64,
    pub dim: usize,
    /// Spectrum at the node with the smallest bottom eigenvalue.
    pub spectrum: Vec<f64>,
    /// `min over nodes of (lambda_1 + .. + lambda_c)` for each count `c`.
    pub min_partial_sums: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub diameter: f64,
    pub diameter_is_upper_bound: bool,
    /// Number of nodes inspected; 1 for homogeneous members.
    pub sampled_points: usize,
}

/// Evaluates the certification spectrum of every family member. Chart
/// members are sampled at roughly `sample_points` quadrature nodes and
/// reduced to their worst case.
pub fn spectrum_over_family(fam: &FamilySpec, sample_points: usize) -> Result<Vec<MemberSpectrum>> {
    fam.validate()?;
    let mut out = Vec::with_capacity(fam.schedule.len());
    for (idx, &param) in fam.schedule.iter().enumerate() {
        let spec = fam.member(idx)?;
        let diam = spec.diameter.expect("validated in member()");
        let grid = sample_grid(&spec, sample_points)?;
        let mut min_sums: Vec<f64> = Vec::new();
        let mut lambda_min = f64::INFINITY;
        let mut lambda_max = f64::NEG_INFINITY;
        let mut rep: Vec<f64> = Vec::new();
        for i in 0..grid.len() {
            let cp = curvature_at(&spec, Some(grid.point(i)))?;
            let op = assemble_curv_op(&cp)?;
            if min_sums.is_empty() {
                min_sums = vec![f64::INFINITY; op.n];
            }
            let mut acc = 0.0;
            for (c, &l) in op.spectrum.iter().enumerate() {
                acc += l;
                min_sums[c] = min_sums[c].min(acc);
            }
            if op.lambda_min() < lambda_min {
                lambda_min = op.lambda_min();
                rep = op.spectrum.clone();
            }
            lambda_max = lambda_max.max(op.lambda_max());
        }
        out.push(MemberSpectrum {
            index: idx + 1,
            param,
            dim: spec.dim(),
            spectrum: rep,
            min_partial_sums: min_sums,
            lambda_min,
            lambda_max,
            diameter: diam.value,
            diameter_is_upper_bound: !diam.is_exact(),
            sampled_points: grid.len(),
        });
    }
    Ok(out)
}

/// Conservative scaled quantity `value * diam^2` under the stored diameter.
fn scaled_quantity(value: f64, diam_value: f64, upper_bound: bool) -> f64 {
    if upper_bound && value >= 0.0 {
        // true quantity is >= 0 regardless of the unknown true diameter
        0.0
    } else {
        value * diam_value * diam_value
    }
}

/// Per-member certification record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberRecord {
    pub index: usize,
    pub param: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Eigenvalue quantity entering the condition (bottom eigenvalue or
    /// partial sum), before diameter scaling.
    pub quantity: f64,
    pub diam: f64,
    pub diam_is_upper_bound: bool,
    pub scaled_quantity: f64,
    pub threshold: f64,
    pub slack: f64,
    pub upper_quantity: Option<f64>,
    pub upper_slack: Option<f64>,
    pub verdict: bool,
    pub sampled_points: usize,
}

/// Consistency of a certified conclusion against stored topology metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetadataConsistency {
    pub claim: String,
    pub observed_euler_char: Option<i64>,
    pub infinite_pi1: Option<bool>,
    /// `None` when the metadata needed for the comparison is absent, or the
    /// run only accumulates open-question evidence.
    pub consistent: Option<bool>,
}

/// Outcome of certifying a family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AncoReport {
    pub condition: Condition,
    pub members: Vec<MemberRecord>,
    /// Every member passes.
    pub family_verdict: bool,
    /// Smallest index `i0` such that members `i0..` all pass.
    pub tail_from: Option<usize>,
    pub metadata_consistency: Option<MetadataConsistency>,
}

impl AncoReport {
    pub fn worst_slack(&self) -> f64 {
        self.members
            .iter()
            .flat_map(|m| std::iter::once(m.slack).chain(m.upper_slack))
            .fold(f64::INFINITY, f64::min)
    }
}

const VERDICT_TOL: f64 = 1e-10;

/// Certifies the family's condition member by member, conservatively under
/// upper-bound diameters, and attaches a metadata-consistency note for the
/// certified conclusion.
pub fn certify_condition(fam: &FamilySpec, sample_points: usize) -> Result<AncoReport> {
    fam.validate()?;
    let spectra = spectrum_over_family(fam, sample_points)?;
    let mut members = Vec::with_capacity(spectra.len());
    for ms in &spectra {
        let i = ms.index;
        let (quantity, threshold) = match fam.condition {
            Condition::AncoAll => (ms.lambda_min, -1.0 / i as f64),
            Condition::SumCount { count } => {
                if count == 0 || count > ms.min_partial_sums.len() {
                    return Err(Error::Domain(format!(
                        "partial-sum count {count} outside 1..={} for member {}",
                        ms.min_partial_sums.len(),
                        i
                    )));
                }
                (ms.min_partial_sums[count - 1], -(count as f64) / i as f64)
            }
            Condition::TwoSided { .. } => {
                let t = match &fam.thresholds {
                    Some(t) => t[i - 1],
                    None => -1.0 / i as f64,
                };
                (ms.lambda_min, t)
            }
        };
        let scaled = scaled_quantity(quantity, ms.diameter, ms.diameter_is_upper_bound);
        let slack = scaled - threshold;
        let (upper_quantity, upper_slack) = match fam.condition {
            Condition::TwoSided { cap } => {
                if ms.diameter_is_upper_bound {
                    return Err(Error::Unsupported(format!(
                        "member {} has only an upper-bound diameter; certification of the \
                         upper-side bound <= {cap} is refused",
                        i
                    )));
                }
                let uq = ms.lambda_max * ms.diameter * ms.diameter;
                (Some(uq), Some(cap - uq))
            }
            _ => (None, None),
        };
        let verdict =
            slack >= -VERDICT_TOL && upper_slack.map(|u| u >= -VERDICT_TOL).unwrap_or(true);
        members.push(MemberRecord {
            index: i,
            param: ms.param,
            lambda_min: ms.lambda_min,
            lambda_max: ms.lambda_max,
            quantity,
            diam: ms.diameter,
            diam_is_upper_bound: ms.diameter_is_upper_bound,
            scaled_quantity: scaled,
            threshold,
            slack,
            upper_quantity,
            upper_slack,
            verdict,
            sampled_points: ms.sampled_points,
        });
    }
    let family_verdict = members.iter().all(|m| m.verdict);
    let tail_from = members
        .iter()
        .rev()
        .take_while(|m| m.verdict)
        .last()
        .map(|m| m.index);
    let metadata_consistency = consistency_note(fam, tail_from.is_some())?;
    Ok(AncoReport {
        condition: fam.condition,
        members,
        family_verdict,
        tail_from,
        metadata_consistency,
    })
}

fn consistency_note(fam: &FamilySpec, certified: bool) -> Result<Option<MetadataConsistency>> {
    if !certified {
        return Ok(None);
    }
    // metadata is shared across members; read it off the first
    let spec = fam.member(0)?;
    let chi = spec.euler_char;
    let pi1 = spec.infinite_pi1;
    let note = if pi1 == Some(true) {
        // vanishing conclusion under infinite fundamental group (automatic
        // in odd dimensions, where chi = 0 for any closed manifold)
        MetadataConsistency {
            claim: "vanishing conclusion: chi = 0 (requires infinite pi1, user-asserted)".into(),
            observed_euler_char: chi,
            infinite_pi1: pi1,
            consistent: chi.map(|c| c == 0),
        }
    } else {
        match fam.condition {
            Condition::TwoSided { .. } => MetadataConsistency {
                claim: "two-sided bound conclusion: chi >= 0".into(),
                observed_euler_char: chi,
                infinite_pi1: pi1,
                consistent: chi.map(|c| c >= 0),
            },
            _ => MetadataConsistency {
                claim: "open-question evidence: almost nonnegative operator family with \
                        recorded chi (no conclusion without further hypotheses)"
                    .into(),
                observed_euler_char: chi,
                infinite_pi1: pi1,
                consistent: None,
            },
        }
    };
    Ok(Some(note))
}

/// Largest relative deviation of `lambda_k(c^2 g) diam^2(c^2 g)` from
/// `lambda_k(g) diam^2(g)` over all eigenvalues at matched sample points.
pub fn scale_invariance_check(spec: &ManifoldSpec, c: f64, sample_points: usize) -> Result<f64> {
    let diam = spec
        .diameter
        .ok_or_else(|| Error::Unsupported(format!("{} lacks diameter metadata", spec.name)))?;
    if !diam.is_exact() {
        return Err(Error::Unsupported(format!(
            "{} has only an upper-bound diameter; scale-invariance check needs an exact one",
            spec.name
        )));
    }
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!("scale factor must be positive, got {c}")));
    }
    let scaled = scale_spec(spec.clone(), c)?;
    let d2_base = diam.value * diam.value;
    let d2_scaled = scaled
        .diameter
        .expect("scaling preserves metadata")
        .value
        .powi(2);
    let grid = sample_grid(spec, sample_points)?;
    let mut worst: f64 = 0.0;
    for i in 0..grid.len() {
        let x = grid.point(i);
        let op0 = assemble_curv_op(&curvature_at(spec, Some(x))?)?;
        let op1 = assemble_curv_op(&curvature_at(&scaled, Some(x))?)?;
        // spectrum scale of the invariant products, for the zero-mode guard
        let scale = op0
            .spectrum
            .iter()
            .zip(&op1.spectrum)
            .map(|(l0, l1)| (l0 * d2_base).abs().max((l1 * d2_scaled).abs()))
            .fold(0.0f64, f64::max);
        for (l0, l1) in op0.spectrum.iter().zip(&op1.spectrum) {
            let q0 = l0 * d2_base;
            let q1 = l1 * d2_scaled;
            // kernel eigenvalues reappear as eigensolver noise of size
            // eps * |spectrum|; when both products are numerical zeros at
            // the spectrum scale they agree by any meaningful measure
            if q0.abs() <= 1e-12 * scale && q1.abs() <= 1e-12 * scale {
                continue;
            }
            worst = worst.max((q1 - q0).abs() / q0.abs().max(1e-15));
        }
    }
    Ok(worst)
}

/// One member of the normalized eigenvalue-average sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaRecord {
    pub index: usize,
    pub param: f64,
    /// `(lambda_1 + .. + lambda_n) / n` after diameter normalization,
    /// conservative under upper-bound diameters.
    pub kappa: f64,
    /// `-1/i`, the schedule the certified condition guarantees.
    pub kappa_threshold: f64,
    /// Whether this member certifies the partial-sum condition.
    pub certified: bool,
    /// Uniform curvature-term lower bound `C(n) min(0, kappa)` implied by
    /// this member's kappa.
    pub ric_bound: f64,
    /// The schedule form `-C(n)/i` of the same bound.
    pub ric_bound_schedule: f64,
}

/// Computes the `kappa_i` sequence of a family on an even-dimensional
/// manifold (`m = 2n`), normalizing diameters to 1 by working with the
/// scale-invariant products. For certified members, `kappa_i >= -1/i`.
pub fn kappa_sequence(fam: &FamilySpec, sample_points: usize) -> Result<Vec<KappaRecord>> {
    fam.validate()?;
    let spectra = spectrum_over_family(fam, sample_points)?;
    let mut out = Vec::with_capacity(spectra.len());
    for ms in &spectra {
        if ms.dim % 2 == 1 {
            return Err(Error::Domain(format!(
                "kappa sequence needs even dimension, member {} has m = {}",
                ms.index, ms.dim
            )));
        }
        let n = ms.dim / 2;
        let sum = ms.min_partial_sums[n - 1];
        let scaled = scaled_quantity(sum, ms.diameter, ms.diameter_is_upper_bound);
        let kappa = scaled / n as f64;
        let i = ms.index;
        let threshold = -1.0 / i as f64;
        let certified = scaled >= -(n as f64) / i as f64 - VERDICT_TOL;
        let cn = weitzenbock_constant(n)? as f64;
        if certified && kappa < threshold - VERDICT_TOL {
            return Err(Error::Consistency(format!(
                "member {i}: certified partial sum but kappa {kappa} < {threshold}"
            )));
        }
        out.push(KappaRecord {
            index: i,
            param: ms.param,
            kappa,
            kappa_threshold: threshold,
            certified,
            ric_bound: cn * kappa.min(0.0),
            ric_bound_schedule: -cn / i as f64,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Diameter, DiameterKind};
    use approx::assert_abs_diff_eq;

    fn heisenberg_family(n: usize) -> FamilySpec {
        FamilySpec {
            base: "heisenberg_nil".into(),
            schedule: (1..=n).map(|i| 1.0 / i as f64).collect(),
            condition: Condition::AncoAll,
            thresholds: None,
        }
    }

    #[test]
    fn heisenberg_spectra_match_structure_constant_oracle() {
        let fam = heisenberg_family(10);
        let spectra = spectrum_over_family(&fam, 1).unwrap();
        for ms in &spectra {
            let eps = ms.param;
            // closed form: diag(-3/4 eps^2, 1/4 eps^2, 1/4 eps^2)
            assert_abs_diff_eq!(ms.lambda_min, -0.75 * eps * eps, epsilon = 1e-10);
            assert!(ms.lambda_min < 0.0);
            assert_abs_diff_eq!(ms.lambda_max, 0.25 * eps * eps, epsilon = 1e-10);
            assert_eq!(ms.sampled_points, 1);
        }
    }

    #[test]
    fn heisenberg_anco_all_certifies_from_index_three() {
        // With the stored diameter bound 2, the scaled quantity is
        // -3 eps_i^2 = -3/i^2, which clears -1/i exactly from i = 3 on.
        let fam = heisenberg_family(20);
        let report = certify_condition(&fam, 1).unwrap();
        assert!(!report.family_verdict);
        assert_eq!(report.tail_from, Some(3));
        for m in &report.members {
            assert_eq!(m.verdict, m.index >= 3, "member {}", m.index);
            assert!(m.diam_is_upper_bound);
        }
        let note = report.metadata_consistency.unwrap();
        assert_eq!(note.consistent, Some(true));
        assert_eq!(note.observed_euler_char, Some(0));
    }

    #[test]
    fn conservativeness_under_smaller_true_diameter() {
        // A pass with the upper-bound diameter must survive any smaller
        // true diameter.
        let fam = heisenberg_family(20);
        let base = certify_condition(&fam, 1).unwrap();
        for shrink in [0.5, 0.9] {
            for (idx, _) in fam.schedule.iter().enumerate() {
                let member = fam.member(idx).unwrap();
                let d = member.diameter.unwrap();
                let smaller = member.with_diameter(Diameter {
                    value: d.value * shrink,
                    kind: DiameterKind::UpperBound,
                });
                // re-evaluate the scaled quantity against the same threshold
                let cp = curvature_at(&smaller, None).unwrap();
                let op = assemble_curv_op(&cp).unwrap();
                let scaled =
                    scaled_quantity(op.lambda_min(), smaller.diameter.unwrap().value, true);
                let i = idx + 1;
                let slack = scaled + 1.0 / i as f64;
                if base.members[idx].verdict {
                    assert!(slack >= -VERDICT_TOL, "shrink {shrink} member {i}");
                }
            }
        }
    }

    #[test]
    fn scaled_torus_family_is_identically_zero() {
        let fam = FamilySpec {
            base: "scaled:flat_torus[1,1,1,1]".into(),
            schedule: vec![1.0, 2.0, 3.0],
            condition: Condition::AncoAll,
            thresholds: None,
        };
        let report = certify_condition(&fam, 16).unwrap();
        assert!(report.family_verdict);
        for m in &report.members {
            assert_eq!(m.lambda_min, 0.0);
            assert_eq!(m.scaled_quantity, 0.0);
            assert_abs_diff_eq!(m.slack, 1.0 / m.index as f64, epsilon = 1e-15);
        }
        // infinite pi1 + certified: vanishing conclusion, chi = 0 consistent
        let note = report.metadata_consistency.unwrap();
        assert_eq!(note.consistent, Some(true));
    }

    #[test]
    fn scaled_sphere_family_two_sided() {
        use std::f64::consts::PI;
        // spectrum of c^2 g on S^4 is 1/c^2, diameter c pi: both scaled
        // quantities are pi^2 independently of c.
        let fam = FamilySpec {
            base: "scaled:sphere[4,1]".into(),
            schedule: (1..=5).map(|i| i as f64).collect(),
            condition: Condition::TwoSided { cap: PI * PI + 1e-6 },
            thresholds: None,
        };
        let report = certify_condition(&fam, 16).unwrap();
        assert!(report.family_verdict);
        for m in &report.members {
            assert_abs_diff_eq!(m.scaled_quantity, PI * PI, epsilon = 1e-8);
            assert_abs_diff_eq!(m.upper_quantity.unwrap(), PI * PI, epsilon = 1e-8);
        }
        let note = report.metadata_consistency.unwrap();
        assert_eq!(note.consistent, Some(true)); // chi = 2 >= 0
    }

    #[test]
    fn two_sided_refused_for_upper_bound_diameter() {
        let fam = FamilySpec {
            base: "heisenberg_nil".into(),
            schedule: vec![0.5],
            condition: Condition::TwoSided { cap: 1.0 },
            thresholds: None,
        };
        assert!(matches!(
            certify_condition(&fam, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn sum_condition_on_product_boundary_case() {
        // S^2 x S^2 has lambda_1 + lambda_2 = 0: the sum condition passes
        // with the scaled quantity at the boundary value zero.
        let fam = FamilySpec {
            base: "scaled:product:sphere[2,1],sphere[2,1]".into(),
            schedule: vec![1.0, 2.0],
            condition: Condition::SumCount { count: 2 },
            thresholds: None,
        };
        let report = certify_condition(&fam, 16).unwrap();
        assert!(report.family_verdict);
        for m in &report.members {
            assert_abs_diff_eq!(m.scaled_quantity, 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn scale_invariance_on_exact_diameter_entries() {
        for name in [
            "sphere[4,1]",
            "flat_torus[1,1,1,1]",
            "product:sphere[2,1],sphere[2,1]",
        ] {
            let spec = catalog_get(name, &[]).unwrap();
            for c in [0.5, 2.0, 10.0] {
                let dev = scale_invariance_check(&spec, c, 8).unwrap();
                assert!(dev <= 1e-10, "{name} c={c}: dev {dev:.3e}");
            }
        }
    }

    #[test]
    fn scale_invariance_refuses_upper_bound_diameter() {
        let spec = catalog_get("heisenberg_nil[0.5]", &[]).unwrap();
        assert!(matches!(
            scale_invariance_check(&spec, 2.0, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn kappa_sequence_flat_torus_is_zero() {
        let fam = FamilySpec {
            base: "scaled:flat_torus[1,1,1,1]".into(),
            schedule: vec![1.0, 1.0, 1.0],
            condition: Condition::SumCount { count: 2 },
            thresholds: None,
        };
        let ks = kappa_sequence(&fam, 8).unwrap();
        for (i, k) in ks.iter().enumerate() {
            assert_eq!(k.kappa, 0.0);
            assert!(k.certified);
            assert_eq!(k.ric_bound, 0.0);
            assert_abs_diff_eq!(
                k.ric_bound_schedule,
                -4.0 / (i + 1) as f64,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn kappa_sequence_positive_for_normalized_spheres() {
        let fam = FamilySpec {
            base: "scaled:sphere[4,1]".into(),
            schedule: (1..=4).map(|i| i as f64).collect(),
            condition: Condition::SumCount { count: 2 },
            thresholds: None,
        };
        let ks = kappa_sequence(&fam, 8).unwrap();
        for k in &ks {
            assert!(k.kappa > 0.0);
            assert!(k.certified);
            assert!(k.kappa >= k.kappa_threshold);
        }
    }

    #[test]
    fn kappa_sequence_rejects_odd_dimension() {
        let fam = heisenberg_family(3);
        assert!(matches!(kappa_sequence(&fam, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn family_validation_errors() {
        let empty = FamilySpec {
            base: "heisenberg_nil".into(),
            schedule: vec![],
            condition: Condition::AncoAll,
            thresholds: None,
        };
        assert!(empty.validate().is_err());
        let negative = FamilySpec {
            base: "heisenberg_nil".into(),
            schedule: vec![-0.5],
            condition: Condition::AncoAll,
            thresholds: None,
        };
        assert!(negative.validate().is_err());
    }
}
