//! JSON reports. Every struct here has a schema under `schemas/`.

use num_complex::Complex64;
use serde::Serialize;

use stabpath_core::sod::{AsymptoticFit, LatticeCheck, SodResult, SpanningReport, SpanningStatus};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        C { re: z.re, im: z.im }
    }
}

pub fn cvec(v: &[Complex64]) -> Vec<C> {
    v.iter().map(|&z| z.into()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberReport {
    pub label: String,
    pub class: Vec<C>,
    pub beta: C,
    #[serde(rename = "limit_Z")]
    pub limit_z: C,
    pub residual_sup: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    pub alpha: C,
    pub gamma: C,
    pub members: Vec<MemberReport>,
    pub lattice_basis: Vec<Vec<C>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub direct: bool,
    pub rank: usize,
    pub generators: usize,
    pub min_rel_singular: f64,
}

impl From<&LatticeCheck> for LatticeReport {
    fn from(l: &LatticeCheck) -> Self {
        LatticeReport {
            direct: l.direct,
            rank: l.rank,
            generators: l.generators,
            min_rel_singular: l.min_rel_singular,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericityReport {
    pub ok: bool,
    pub tol: f64,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanningEntry {
    pub r: f64,
    #[serde(rename = "dim_F")]
    pub dim_f: usize,
    pub dim_span: usize,
    pub status: &'static str,
    pub rates: Vec<f64>,
}

impl From<&SpanningReport> for SpanningEntry {
    fn from(s: &SpanningReport) -> Self {
        SpanningEntry {
            r: s.r,
            dim_f: s.dim_f,
            dim_span: s.dim_span,
            status: match s.status {
                SpanningStatus::Holds => "holds",
                SpanningStatus::Deficient => "deficient",
            },
            rates: s.rates.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub label: String,
    pub alpha: C,
    pub gamma: C,
    pub beta: C,
    pub residual_sup: f64,
    pub nested_residuals: Vec<f64>,
    pub quasi_convergent: bool,
    pub accepted: bool,
}

impl From<&AsymptoticFit> for FitReport {
    fn from(f: &AsymptoticFit) -> Self {
        FitReport {
            label: f.label.clone(),
            alpha: f.alpha.into(),
            gamma: f.gamma.into(),
            beta: f.beta.into(),
            residual_sup: f.residual_sup,
            nested_residuals: f.nested_residuals.clone(),
            quasi_convergent: f.quasi_convergent,
            accepted: f.accepted,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SodReport {
    pub clusters: Vec<ClusterReport>,
    pub lattice_check: Option<LatticeReport>,
    pub genericity: GenericityReport,
    pub spanning: Vec<SpanningEntry>,
    pub phase_witness: Option<bool>,
    pub fits: Vec<FitReport>,
}

impl SodReport {
    pub fn from_result(sod: &SodResult, fits: &[AsymptoticFit], tol: f64, phase_witness: Option<bool>) -> Self {
        let residual = |label: &str| {
            fits.iter()
                .find(|f| f.label == label)
                .map(|f| f.residual_sup)
                .unwrap_or(f64::NAN)
        };
        SodReport {
            clusters: sod
                .clusters
                .iter()
                .map(|c| ClusterReport {
                    alpha: c.alpha.into(),
                    gamma: c.gamma.into(),
                    members: c
                        .members
                        .iter()
                        .map(|m| MemberReport {
                            label: m.label.clone(),
                            class: cvec(&m.class_v),
                            beta: m.beta.into(),
                            limit_z: m.limit_z.into(),
                            residual_sup: residual(&m.label),
                        })
                        .collect(),
                    lattice_basis: c.lattice_basis.iter().map(|v| cvec(v)).collect(),
                })
                .collect(),
            lattice_check: Some((&sod.lattice_check).into()),
            genericity: GenericityReport {
                ok: true,
                tol,
                violation: None,
            },
            spanning: sod.spanning.iter().map(SpanningEntry::from).collect(),
            phase_witness,
            fits: fits.iter().map(FitReport::from).collect(),
        }
    }

    /// Report for a fit list that failed the genericity condition.
    pub fn non_generic(fits: &[AsymptoticFit], tol: f64, first: String, second: String) -> Self {
        SodReport {
            clusters: Vec::new(),
            lattice_check: None,
            genericity: GenericityReport {
                ok: false,
                tol,
                violation: Some(Violation { first, second }),
            },
            spanning: Vec::new(),
            phase_witness: None,
            fits: fits.iter().map(FitReport::from).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Summary {
    pub b: C,
    pub a: C,
    pub kappa: C,
    pub chart_k: i64,
    pub boundary_case: bool,
    pub eventual_t_star: Option<f64>,
    pub meets_slope_strip: bool,
    pub asymptotic_constant: C,
    pub asymptotic_defect: f64,
    pub asymptotic_law_holds: bool,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueSummary {
    pub points: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub phase: f64,
    pub kappa: C,
    pub chart_k: i64,
    pub status: String,
    pub alphas: Vec<C>,
    pub labels: Vec<Vec<String>>,
    pub spanning: Vec<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveSummary {
    pub genus: u32,
    pub theta: f64,
    pub a_param: C,
    pub tau0: C,
    pub tau_inf: C,
    pub lifts: bool,
    pub lifts_on_grid: bool,
    pub converges_to_tau_inf: bool,
    pub limit_is_boundary: bool,
    pub filtration: Option<&'static str>,
    pub first_exit: Option<f64>,
    pub last_s: f64,
    pub last_tau: C,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContourReport {
    pub kind: &'static str,
    pub kappa: C,
    pub t: f64,
    pub theta: Option<f64>,
    pub value: C,
    pub oracle: C,
    pub abs_diff: f64,
    pub est_error: f64,
    pub evaluations: usize,
    pub cutoff: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QdeSummary {
    pub model: String,
    pub z: C,
    pub scale_omega: f64,
    pub gauge: &'static str,
    pub initial: &'static str,
    pub t0: f64,
    pub t1: f64,
    pub points: usize,
    pub asymptotic_eigenvalues: Vec<C>,
    pub ramification: Option<u32>,
    pub column_growth_rates: Vec<f64>,
    pub min_det_ratio: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rescalings: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub model: String,
    pub dim_x: u32,
    pub rank: usize,
    pub passed: bool,
    pub violations: Vec<String>,
    pub admissible_classes: Vec<String>,
    pub scale_omega: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationSummary {
    pub word: String,
    pub classes_up_to_sign: Vec<Vec<i64>>,
}
