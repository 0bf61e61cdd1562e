//! Machine-readable analysis report. Every exact quantity is serialized as
//! a decimal string of a rational (or an `a+b*sqrt(D)` string); floats only
//! appear in the numerical-verification outputs.

use crate::adapt::{CaseTag, ChartStep, PSStatus};
use crate::algebra::LinearMap3;
use crate::pipeline::Analysis;
use crate::structure::DecompKind;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Debug)]
pub struct AnalysisReport {
    pub schema_version: u32,
    /// Canonical printed form of the input.
    pub input: String,
    pub hessian_vanishes: bool,
    pub case: String,
    pub decomposition: DecompositionJson,
    pub chart: Vec<ChartStepJson>,
    pub adapted_polynomial: String,
    pub h: String,
    pub nu: u8,
    pub d_original: String,
    pub d_adapted: String,
    pub face_dim: usize,
    pub face_compact: bool,
    pub linearly_adapted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form_constants: Option<FormConstantsJson>,
    pub exponents: ExponentsJson,
    pub newton: NewtonJson,
    pub rank_at_origin: usize,
    pub timings_ms: TimingsJson,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct DecompositionJson {
    pub case: String,
    pub matrix: [[String; 3]; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_var: Option<OneVarJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_var: Option<TwoVarJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<FormJson>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct OneVarJson {
    pub nu: u32,
    pub q: String,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct TwoVarJson {
    pub psi: String,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct FormJson {
    pub q1: String,
    pub q2: String,
    pub q3: String,
    /// "inf" when Q₁ ≡ 0.
    pub nu1: String,
    pub nu2: u32,
    pub nu3: u32,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChartStepJson {
    Linear { matrix: [[String; 3]; 3] },
    Shear { target: String, source: String, coeff: String, power: u32 },
}

#[derive(Serialize, Deserialize, Debug)]
pub struct FormConstantsJson {
    pub c1: String,
    pub c2: String,
    pub c3: String,
    pub b: [[String; 3]; 3],
}

#[derive(Serialize, Deserialize, Debug)]
pub struct ExponentsJson {
    /// Decay exponent 1/h of the Fourier transform of the surface measure.
    pub beta: String,
    pub log_flag: u8,
    pub p_s: String,
    pub p_s_status: String,
    pub indexes: IndexesJson,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct IndexesJson {
    pub beta_uniform: String,
    pub beta: String,
    pub gamma_uniform: String,
    pub gamma: String,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct NewtonJson {
    pub generators: Vec<[u32; 3]>,
    pub facets: Vec<FacetJson>,
    pub distance: String,
    pub principal_face_points: Vec<[u32; 3]>,
    pub face_dim: usize,
    pub compact: bool,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Serialize, Deserialize, Debug, Default)]
pub struct TimingsJson {
    pub analyze_ms: u128,
}

fn matrix_json(m: &LinearMap3) -> [[String; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m.entry(i, j).to_string()))
}

fn var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

impl AnalysisReport {
    pub fn from_analysis(a: &Analysis, analyze_ms: u128) -> Self {
        let case = format!("{:?}", a.height.case);
        let decomposition = match &a.decomposition.kind {
            DecompKind::OneVar { nu, q } => DecompositionJson {
                case: "OneVar".into(),
                matrix: matrix_json(&a.decomposition.matrix),
                one_var: Some(OneVarJson { nu: *nu, q: q.to_string() }),
                two_var: None,
                form: None,
            },
            DecompKind::TwoVar { psi } => DecompositionJson {
                case: "TwoVar".into(),
                matrix: matrix_json(&a.decomposition.matrix),
                one_var: None,
                two_var: Some(TwoVarJson { psi: psi.to_string() }),
                form: None,
            },
            DecompKind::Form { q1, q2, q3, nu1, nu2, nu3 } => DecompositionJson {
                case: "Form".into(),
                matrix: matrix_json(&a.decomposition.matrix),
                one_var: None,
                two_var: None,
                form: Some(FormJson {
                    q1: q1.to_string(),
                    q2: q2.to_string(),
                    q3: q3.to_string(),
                    nu1: nu1.map_or("inf".into(), |n| n.to_string()),
                    nu2: *nu2,
                    nu3: *nu3,
                }),
            },
        };
        let chart = a
            .chart
            .steps
            .iter()
            .map(|s| match s {
                ChartStep::Linear(m) => ChartStepJson::Linear { matrix: matrix_json(m) },
                ChartStep::Shear { target, source, coeff, power } => ChartStepJson::Shear {
                    target: var_name(*target),
                    source: var_name(*source),
                    coeff: coeff.to_string(),
                    power: *power,
                },
            })
            .collect();
        let beta = a.exponents.beta.to_string();
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            input: a.phi.to_string(),
            hessian_vanishes: a.hessian.vanishes,
            case,
            decomposition,
            chart,
            adapted_polynomial: a.chart.final_poly.to_string(),
            h: a.height.height.to_string(),
            nu: a.height.nu,
            d_original: a.height.d_original.to_string(),
            d_adapted: a.height.d_adapted.to_string(),
            face_dim: a.height.face_dim,
            face_compact: a.height.face_compact,
            linearly_adapted: a.height.linearly_adapted,
            form_constants: a.height.form_constants.as_ref().map(|fc| FormConstantsJson {
                c1: fc.c1.to_string(),
                c2: fc.c2.to_string(),
                c3: fc.c3.to_string(),
                b: matrix_json(&fc.b),
            }),
            exponents: ExponentsJson {
                beta: beta.clone(),
                log_flag: a.exponents.log_flag,
                p_s: a.exponents.p_s.to_string(),
                p_s_status: match a.exponents.p_s_status {
                    PSStatus::Exact => "exact".into(),
                    PSStatus::LowerBoundOnly => "lower-bound-only".into(),
                    PSStatus::CurvatureCase => "curvature-case".into(),
                },
                indexes: IndexesJson {
                    beta_uniform: beta.clone(),
                    beta: beta.clone(),
                    gamma_uniform: beta.clone(),
                    gamma: beta,
                },
            },
            newton: NewtonJson {
                generators: a.newton.generators.points.clone(),
                facets: a
                    .newton
                    .facets
                    .iter()
                    .map(|f| FacetJson {
                        normal: f.normal[..a.newton.dim as usize]
                            .iter()
                            .map(|w| w.to_string())
                            .collect(),
                        offset: f.offset.to_string(),
                    })
                    .collect(),
                distance: a.principal.distance.to_string(),
                principal_face_points: a.principal.face_points.clone(),
                face_dim: a.principal.face_dim,
                compact: a.principal.compact,
            },
            rank_at_origin: a.rank_at_origin,
            timings_ms: TimingsJson { analyze_ms },
        }
    }
}

/// Marker so `CaseTag` keeps serializing as its debug name.
impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;
    use crate::pipeline::analyze;

    #[test]
    fn report_roundtrips_exact_scalars() {
        let phi = Polynomial::parse("x1^3+x1^2*x2+x1^4*x3", 3).unwrap();
        let a = analyze(&phi).unwrap();
        let report = AnalysisReport::from_analysis(&a, 1);
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.h, report.h);
        assert_eq!(back.exponents.beta, report.exponents.beta);
        assert_eq!(back.exponents.p_s, report.exponents.p_s);
        assert_eq!(back.decomposition.matrix, report.decomposition.matrix);
        assert_eq!(back.input, report.input);
        // exact strings, never floats
        assert_eq!(report.h, "2");
        assert_eq!(report.exponents.beta, "1/2");
    }

    #[test]
    fn report_of_two_var_case() {
        let phi = Polynomial::parse("x2^2-2*x1^2*x2+x1^4+x1^5", 3).unwrap();
        let a = analyze(&phi).unwrap();
        let report = AnalysisReport::from_analysis(&a, 0);
        assert_eq!(report.h, "10/7");
        assert_eq!(report.case, "TwoVar");
        assert!(matches!(report.chart[1], ChartStepJson::Shear { .. }));
    }
}
