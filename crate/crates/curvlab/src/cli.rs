//! Declarative run configurations and machine-readable reports.
//!
//! A run is described by one TOML file (strictly parsed; unknown keys are
//! rejected) naming a command, a manifold or family block, and numeric
//! options. Reports embed the resolved configuration so a run can be
//! reproduced from its own output; identical configurations (including the
//! seed) produce byte-identical JSON up to the `runtime_ms` field.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::anco::{self, Condition, FamilySpec};
use crate::catalog::{catalog_get, ManifoldSpec};
use crate::curvature::curvature_at;
use crate::error::{Error, Result};
use crate::gauss_bonnet::{euler_characteristic_with, GaussBonnetOptions};
use crate::linalg::{norm_sandwich_check, weyl_gap};
use crate::operator::assemble_curv_op;
use crate::quadrature::sample_grid;
use crate::weitzenbock::pw_bound_check;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    GaussBonnet,
    PwCheck,
    WeylCheck,
    AncoCertify,
    ScaleCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

/// Manifold block: maps 1:1 onto catalog names and parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldConfig {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl ManifoldConfig {
    pub fn resolve(&self) -> Result<ManifoldSpec> {
        catalog_get(&self.name, &self.params)
    }
}

/// Family block for `anco-certify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub base: String,
    /// Explicit member parameters; mutually exclusive with `inverse_range`.
    #[serde(default)]
    pub schedule: Option<Vec<f64>>,
    /// Shorthand for the collapsing schedule `param_i = 1/i`, `i = 1..=n`.
    #[serde(default)]
    pub inverse_range: Option<usize>,
    /// One of `anco_all`, `sum_n`, `two_sided`.
    pub condition: String,
    /// Partial-sum length for `sum_n`.
    #[serde(default)]
    pub count: Option<usize>,
    /// Upper cap for `two_sided`.
    #[serde(default)]
    pub lambda_cap: Option<f64>,
    /// Per-member lower thresholds for `two_sided`; defaults to `-1/i`.
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
}

impl FamilyConfig {
    pub fn resolve(&self) -> Result<FamilySpec> {
        let schedule = match (&self.schedule, self.inverse_range) {
            (Some(s), None) => s.clone(),
            (None, Some(n)) if n >= 1 => (1..=n).map(|i| 1.0 / i as f64).collect(),
            (None, Some(_)) => {
                return Err(Error::Config("inverse_range must be >= 1".into()));
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "family block takes either schedule or inverse_range, not both".into(),
                ));
            }
            (None, None) => {
                return Err(Error::Config(
                    "family block needs schedule or inverse_range".into(),
                ));
            }
        };
        let condition = match self.condition.as_str() {
            "anco_all" => Condition::AncoAll,
            "sum_n" => {
                let count = self.count.ok_or_else(|| {
                    Error::Config("condition sum_n requires the count field".into())
                })?;
                Condition::SumCount { count }
            }
            "two_sided" => {
                let cap = self.lambda_cap.ok_or_else(|| {
                    Error::Config("condition two_sided requires lambda_cap".into())
                })?;
                Condition::TwoSided { cap }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown condition {other:?} (expected anco_all, sum_n, two_sided)"
                )));
            }
        };
        let fam = FamilySpec {
            base: self.base.clone(),
            schedule,
            condition,
            thresholds: self.thresholds.clone(),
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// Numeric options; every field has a default so run files stay short.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    /// Quadrature order (nodes per axis).
    pub order: usize,
    /// Random unit forms per degree (pw-check) or random pairs (weyl-check).
    pub samples: usize,
    /// Target node count for worst-case chart sampling.
    pub sample_points: usize,
    pub seed: u64,
    /// Bochner grade for pw-check; all admissible values when absent.
    pub p: Option<usize>,
    /// Scale factors for scale-check.
    pub scales: Vec<f64>,
    /// Verdict tolerance override (residual for gauss-bonnet, deviation for
    /// scale-check).
    pub tolerance: Option<f64>,
    /// Largest matrix size for weyl-check.
    pub max_dim: usize,
    pub allow_dim6: bool,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            order: 32,
            samples: 1000,
            sample_points: 16,
            seed: 0,
            p: None,
            scales: vec![0.5, 2.0, 10.0],
            tolerance: None,
            max_dim: 12,
            allow_dim6: false,
            threads: None,
            output: None,
            format: ReportFormat::Json,
        }
    }
}

/// One complete run description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub manifold: Option<ManifoldConfig>,
    #[serde(default)]
    pub family: Option<FamilyConfig>,
    #[serde(default)]
    pub options: Options,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    fn manifold(&self) -> Result<&ManifoldConfig> {
        self.manifold.as_ref().ok_or_else(|| {
            Error::Config(format!("command {:?} requires a [manifold] block", self.command))
        })
    }

    fn family(&self) -> Result<&FamilyConfig> {
        self.family.as_ref().ok_or_else(|| {
            Error::Config(format!("command {:?} requires a [family] block", self.command))
        })
    }
}

/// Typed per-record payloads of a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Spectrum {
        point: Vec<f64>,
        spectrum: Vec<f64>,
        lambda_min: f64,
        lambda_max: f64,
        op_norm: f64,
        frob_norm: f64,
    },
    GaussBonnet {
        chi_est: f64,
        chi_metadata: Option<i64>,
        residual: Option<f64>,
        rounded: i64,
        nodes: usize,
        order: usize,
        sup_abs_integrand: f64,
    },
    Pw {
        point_index: usize,
        p: usize,
        kappa: f64,
        min_slack: f64,
        holds: bool,
        samples: usize,
        seed: u64,
    },
    Weyl {
        dim: usize,
        trials: usize,
        worst_weyl_excess: f64,
        worst_sandwich_excess: f64,
        holds: bool,
    },
    WeylEquality {
        delta: f64,
        max_gap: f64,
        bound: f64,
        error: f64,
        holds: bool,
    },
    AncoMember(anco::MemberRecord),
    AncoConsistency(anco::MetadataConsistency),
    Scale {
        c: f64,
        max_rel_dev: f64,
        tolerance: f64,
        holds: bool,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub verdict: bool,
    pub worst_slack: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Command,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub runtime_ms: u64,
}

impl Report {
    /// Structural re-validation of an emitted report.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "unknown schema version {}",
                self.schema_version
            )));
        }
        let finite = |v: f64, what: &str| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!("non-finite {what} in report")))
            }
        };
        for r in &self.records {
            match r {
                Record::Spectrum {
                    spectrum, op_norm, ..
                } => {
                    for v in spectrum {
                        finite(*v, "eigenvalue")?;
                    }
                    finite(*op_norm, "op_norm")?;
                }
                Record::GaussBonnet { chi_est, .. } => finite(*chi_est, "chi_est")?,
                Record::Pw { min_slack, .. } => finite(*min_slack, "min_slack")?,
                Record::Weyl {
                    worst_weyl_excess, ..
                } => finite(*worst_weyl_excess, "weyl excess")?,
                Record::WeylEquality { error, .. } => finite(*error, "equality error")?,
                Record::AncoMember(m) => finite(m.slack, "member slack")?,
                Record::AncoConsistency(_) => {}
                Record::Scale { max_rel_dev, .. } => finite(*max_rel_dev, "deviation")?,
            }
        }
        if let Some(w) = self.summary.worst_slack {
            finite(w, "worst_slack")?;
        }
        Ok(())
    }
}

/// A structured error record, written with exit code 2 so downstream
/// tooling always has a parseable file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReport {
    pub schema_version: u32,
    pub error: String,
}

fn run_spectrum(config: &RunConfig) -> Result<(Vec<Record>, Summary)> {
    let spec = config.manifold()?.resolve()?;
    let grid = sample_grid(&spec, config.options.sample_points)?;
    let mut records = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let cp = curvature_at(&spec, Some(grid.point(i)))?;
        let op = assemble_curv_op(&cp)?;
        records.push(Record::Spectrum {
            point: grid.point(i).to_vec(),
            lambda_min: op.lambda_min(),
            lambda_max: op.lambda_max(),
            op_norm: op.op_norm,
            frob_norm: op.frob_norm,
            spectrum: op.spectrum,
        });
    }
    Ok((
        records,
        Summary {
            verdict: true,
            worst_slack: None,
        },
    ))
}

fn run_gauss_bonnet(config: &RunConfig) -> Result<(Vec<Record>, Summary)> {
    let spec = config.manifold()?.resolve()?;
    let opts = GaussBonnetOptions {
        allow_dim6: config.options.allow_dim6,
    };
    let run = euler_characteristic_with(&spec, config.options.order, opts)?;
    let tolerance = config.options.tolerance.unwrap_or(1e-3);
    let rounded = run.chi_est.round() as i64;
    let verdict = match spec.euler_char {
        Some(chi) => run.residual.unwrap() <= tolerance && rounded == chi,
        None => true,
    };
    let worst_slack = run.residual.map(|r| tolerance - r);
    let record = Record::GaussBonnet {
        chi_est: run.chi_est,
        chi_metadata: spec.euler_char,
        residual: run.residual,
        rounded,
        nodes: run.nodes,
        order: config.options.order,
        sup_abs_integrand: run.sup_abs_integrand,
    };
    Ok((vec![record], Summary { verdict, worst_slack }))
}

fn run_pw_check(config: &RunConfig) -> Result<(Vec<Record>, Summary)> {
    let spec = config.manifold()?.resolve()?;
    let m = spec.dim();
    let grades: Vec<usize> = match config.options.p {
        Some(p) => vec![p],
        None => (1..=m / 2).collect(),
    };
    let grid = sample_grid(&spec, config.options.sample_points.min(8))?;
    let mut records = Vec::new();
    let mut verdict = true;
    let mut worst = f64::INFINITY;
    for i in 0..grid.len() {
        let cp = curvature_at(&spec, Some(grid.point(i)))?;
        for &p in &grades {
            let rep = pw_bound_check(&cp, p, config.options.samples, config.options.seed)?;
            verdict &= rep.holds;
            worst = worst.min(rep.min_slack);
            records.push(Record::Pw {
                point_index: i,
                p,
                kappa: rep.kappa,
                min_slack: rep.min_slack,
                holds: rep.holds,
                samples: config.options.samples,
                seed: config.options.seed,
            });
        }
    }
    Ok((
        records,
        Summary {
            verdict,
            worst_slack: Some(worst),
        },
    ))
}

fn run_weyl_check(config: &RunConfig) -> Result<(Vec<Record>, Summary)> {
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};

    let max_dim = config.options.max_dim.max(2);
    let trials = config.options.samples;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.options.seed);
    let dims: Vec<usize> = (2..=max_dim).collect();
    let mut per_dim: Vec<(usize, f64, f64)> = dims.iter().map(|&d| (d, 0.0, 0.0)).collect();
    let mut counts = vec![0usize; dims.len()];
    for t in 0..trials {
        let slot = t % dims.len();
        let n = dims[slot];
        let sym = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut a = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v: f64 = rng.random_range(-1.0..1.0);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            a
        };
        let a = sym(&mut rng);
        let b = sym(&mut rng);
        let gap = weyl_gap(&a, &b)?;
        let excess = gap.max_gap - gap.bound;
        let sa = norm_sandwich_check(&a)?;
        let sb = norm_sandwich_check(&b)?;
        // sandwich excess: how far either inequality is from holding
        let sx = {
            let n_f = n as f64;
            (sa.op - sa.frob)
                .max(sa.frob - n_f.sqrt() * sa.op)
                .max(sb.op - sb.frob)
                .max(sb.frob - n_f.sqrt() * sb.op)
        };
        per_dim[slot].1 = per_dim[slot].1.max(excess);
        per_dim[slot].2 = per_dim[slot].2.max(sx);
        counts[slot] += 1;
    }
    let mut records = Vec::new();
    let mut verdict = true;
    let mut worst = f64::INFINITY;
    for (slot, &(dim, weyl_excess, sandwich_excess)) in per_dim.iter().enumerate() {
        let holds = weyl_excess <= 1e-10 && sandwich_excess <= 1e-10;
        verdict &= holds;
        worst = worst.min(-weyl_excess).min(-sandwich_excess);
        records.push(Record::Weyl {
            dim,
            trials: counts[slot],
            worst_weyl_excess: weyl_excess,
            worst_sandwich_excess: sandwich_excess,
            holds,
        });
    }
    // rank-two diagonal perturbation achieves equality in the bound
    let delta = 0.5;
    let a = DMatrix::zeros(2, 2);
    let b = DMatrix::from_diagonal(&nalgebra::dvector![delta, -delta]);
    let gap = weyl_gap(&a, &b)?;
    let error = (gap.max_gap - gap.bound).abs();
    let eq_holds = error <= 1e-12;
    verdict &= eq_holds;
    records.push(Record::WeylEquality {
        delta,
        max_gap: gap.max_gap,
        bound: gap.bound,
        error,
        holds: eq_holds,
    });
    Ok((
        records,
        Summary {
            verdict,
            worst_slack: Some(worst),
        },
    ))
}

fn run_anco_certify(config: &RunConfig) -> Result<(Vec<Record>, Summary)> {
    let fam = config.family()?.resolve()?;
    let report = anco::certify_condition(&fam, config.options.sample_points)?;
    let mut records: Vec<Record> = report
        .members
        .iter()
        .cloned()
        .map(Record::AncoMember)
        .collect();
    let consistency_ok = report
        .metadata_consistency
        .as_ref()
        .map(|n| n.consistent != Some(false))
        .unwrap_or(true);
    if let Some(note) = report.metadata_consistency.clone() {
        records.push(Record::AncoConsistency(note));
    }
    // The certified object is a sequence: a passing tail witnesses the
    // condition even when early members fail their (tighter) thresholds.
    let verdict = report.tail_from.is_some() && consistency_ok;
    Ok((
        records,
        Summary {
            verdict,
            worst_slack: Some(report.worst_slack()),
        },
    ))
}

fn run_scale_check(config: &RunConfig) -> Result<(Vec<Record>, Summary)> {
    let spec = config.manifold()?.resolve()?;
    let tolerance = config.options.tolerance.unwrap_or(1e-10);
    let mut records = Vec::new();
    let mut verdict = true;
    let mut worst = f64::INFINITY;
    for &c in &config.options.scales {
        let dev = anco::scale_invariance_check(&spec, c, config.options.sample_points)?;
        let holds = dev <= tolerance;
        verdict &= holds;
        worst = worst.min(tolerance - dev);
        records.push(Record::Scale {
            c,
            max_rel_dev: dev,
            tolerance,
            holds,
        });
    }
    Ok((
        records,
        Summary {
            verdict,
            worst_slack: Some(worst),
        },
    ))
}

/// Executes a resolved run configuration.
pub fn run(config: &RunConfig) -> Result<Report> {
    let started = Instant::now();
    let dispatch = |config: &RunConfig| match config.command {
        Command::Spectrum => run_spectrum(config),
        Command::GaussBonnet => run_gauss_bonnet(config),
        Command::PwCheck => run_pw_check(config),
        Command::WeylCheck => run_weyl_check(config),
        Command::AncoCertify => run_anco_certify(config),
        Command::ScaleCheck => run_scale_check(config),
    };
    let (records, summary) = match config.options.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(config))?
        }
        None => dispatch(config)?,
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: config.command,
        config: config.clone(),
        records,
        summary,
        runtime_ms: started.elapsed().as_millis() as u64,
    };
    report.validate()?;
    Ok(report)
}

fn record_csv_row(record: &Record) -> Option<(Vec<&'static str>, Vec<String>)> {
    fn join(v: &[f64]) -> String {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
    match record {
        Record::Spectrum {
            point,
            spectrum,
            lambda_min,
            lambda_max,
            op_norm,
            frob_norm,
        } => Some((
            vec!["point", "spectrum", "lambda_min", "lambda_max", "op_norm", "frob_norm"],
            vec![
                join(point),
                join(spectrum),
                lambda_min.to_string(),
                lambda_max.to_string(),
                op_norm.to_string(),
                frob_norm.to_string(),
            ],
        )),
        Record::GaussBonnet {
            chi_est,
            chi_metadata,
            residual,
            rounded,
            nodes,
            order,
            sup_abs_integrand,
        } => Some((
            vec!["chi_est", "chi_metadata", "residual", "rounded", "nodes", "order", "sup_abs_integrand"],
            vec![
                chi_est.to_string(),
                chi_metadata.map(|v| v.to_string()).unwrap_or_default(),
                residual.map(|v| v.to_string()).unwrap_or_default(),
                rounded.to_string(),
                nodes.to_string(),
                order.to_string(),
                sup_abs_integrand.to_string(),
            ],
        )),
        Record::Pw {
            point_index,
            p,
            kappa,
            min_slack,
            holds,
            samples,
            seed,
        } => Some((
            vec!["point_index", "p", "kappa", "min_slack", "holds", "samples", "seed"],
            vec![
                point_index.to_string(),
                p.to_string(),
                kappa.to_string(),
                min_slack.to_string(),
                holds.to_string(),
                samples.to_string(),
                seed.to_string(),
            ],
        )),
        Record::Weyl {
            dim,
            trials,
            worst_weyl_excess,
            worst_sandwich_excess,
            holds,
        } => Some((
            vec!["dim", "trials", "worst_weyl_excess", "worst_sandwich_excess", "holds"],
            vec![
                dim.to_string(),
                trials.to_string(),
                worst_weyl_excess.to_string(),
                worst_sandwich_excess.to_string(),
                holds.to_string(),
            ],
        )),
        Record::AncoMember(m) => Some((
            vec![
                "index",
                "param",
                "lambda_min",
                "lambda_max",
                "quantity",
                "diam",
                "diam_is_upper_bound",
                "scaled_quantity",
                "threshold",
                "slack",
                "upper_quantity",
                "upper_slack",
                "verdict",
                "sampled_points",
            ],
            vec![
                m.index.to_string(),
                m.param.to_string(),
                m.lambda_min.to_string(),
                m.lambda_max.to_string(),
                m.quantity.to_string(),
                m.diam.to_string(),
                m.diam_is_upper_bound.to_string(),
                m.scaled_quantity.to_string(),
                m.threshold.to_string(),
                m.slack.to_string(),
                m.upper_quantity.map(|v| v.to_string()).unwrap_or_default(),
                m.upper_slack.map(|v| v.to_string()).unwrap_or_default(),
                m.verdict.to_string(),
                m.sampled_points.to_string(),
            ],
        )),
        Record::Scale {
            c,
            max_rel_dev,
            tolerance,
            holds,
        } => Some((
            vec!["c", "max_rel_dev", "tolerance", "holds"],
            vec![
                c.to_string(),
                max_rel_dev.to_string(),
                tolerance.to_string(),
                holds.to_string(),
            ],
        )),
        // equality construction and consistency notes live in the summary JSON
        Record::WeylEquality { .. } | Record::AncoConsistency(_) => None,
    }
}

pub fn report_to_json(report: &Report) -> Result<String> {
    serde_json::to_string_pretty(report)
        .map_err(|e| Error::Validation(format!("report serialization: {e}")))
}

/// Writes the report.
///
/// JSON goes to `output` (or stdout when absent). CSV flattens the
/// per-record table to `output` and writes the full report minus the
/// records to the sibling `<output>.summary.json`.
pub fn write_report(report: &Report, output: Option<&Path>, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Json => {
            let text = report_to_json(report)?;
            match output {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    writeln!(stdout, "{text}")?;
                }
            }
        }
        ReportFormat::Csv => {
            let path = output.ok_or_else(|| {
                Error::Config("csv format requires an output path".into())
            })?;
            let mut writer = csv::Writer::from_path(path)?;
            let mut wrote_header = false;
            for record in &report.records {
                if let Some((header, row)) = record_csv_row(record) {
                    if !wrote_header {
                        writer.write_record(&header)?;
                        wrote_header = true;
                    }
                    writer.write_record(&row)?;
                }
            }
            writer.flush()?;
            let mut summary_report = report.clone();
            summary_report.records.retain(|r| {
                matches!(r, Record::WeylEquality { .. } | Record::AncoConsistency(_))
            });
            let sidecar = path.with_extension("summary.json");
            std::fs::write(sidecar, report_to_json(&summary_report)? + "\n")?;
        }
    }
    Ok(())
}

/// Writes a structured error record (exit code 2 path).
pub fn write_error_report(err: &Error, output: Option<&Path>) {
    let record = ErrorReport {
        schema_version: SCHEMA_VERSION,
        error: err.to_string(),
    };
    let text = serde_json::to_string_pretty(&record).unwrap_or_else(|_| format!("{{\"error\": \"{err}\"}}"));
    match output {
        Some(path) => {
            let _ = std::fs::write(path, text + "\n");
        }
        None => eprintln!("{text}"),
    }
}
