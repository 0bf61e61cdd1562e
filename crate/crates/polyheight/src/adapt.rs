//! Adapted coordinate systems, the height h(φ), the Varchenko exponent
//! ν(φ), and the exponent report (decay, boundedness, oscillation/contact
//! indexes).
//!
//! The 2D engine iterates shear substitutions that remove the principal
//! part's excess-multiplicity root until the coordinate system is adapted.
//! The 3D pipeline dispatches on the structural decomposition: a linear
//! witness map alone (one-variable and form cases) or the witness map
//! followed by the 2D engine (two-variable case).

use crate::algebra::linalg::rank;
use crate::algebra::roots::{describe_real_roots, squarefree_decomposition, uni_is_zero, SturmChain};
use crate::algebra::{LinearMap3, Monomial, Polynomial, Scalar};
use crate::newton::{analyze_polyhedron, principal_part, PrincipalData};
use crate::structure::{DecompKind, Decomposition};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdaptError {
    #[error("edge weight ratio {0}/{1} is not a positive integer while an excess root exists")]
    NonIntegerExponentRatio(BigRational, BigRational),
    #[error("excess root lies beyond ℚ(√D); isolating interval ({lo}, {hi}] of factor {factor}")]
    IrrationalRoot { lo: String, hi: String, factor: String },
    #[error("2D adaptation did not terminate within {cap} steps")]
    IterationCapExceeded { cap: u32, steps_taken: usize },
}

/// One coordinate change of an adapted chart.
#[derive(Debug, Clone)]
pub enum ChartStep {
    Linear(LinearMap3),
    /// Triangular substitution x_target ← x_target + coeff · x_source^power.
    Shear {
        target: usize,
        source: usize,
        coeff: Scalar,
        power: u32,
    },
}

impl ChartStep {
    pub fn apply(&self, phi: &Polynomial) -> Polynomial {
        match self {
            ChartStep::Linear(a) => phi.compose_linear(a),
            ChartStep::Shear { target, source, coeff, power } => {
                let mut m = Monomial::one();
                m.0[*source] = *power;
                let repl = Polynomial::var(*target, phi.nvars())
                    .add(&Polynomial::monomial(m, coeff.clone(), phi.nvars()));
                phi.substitute(*target, &repl)
            }
        }
    }
}

/// Ordered coordinate changes together with the resulting polynomial.
#[derive(Debug, Clone)]
pub struct AdaptedChart {
    pub steps: Vec<ChartStep>,
    pub final_poly: Polynomial,
}

impl AdaptedChart {
    /// Re-applies every step to `phi`; equals `final_poly` for a valid chart.
    pub fn apply(&self, phi: &Polynomial) -> Polynomial {
        let mut p = phi.clone();
        for s in &self.steps {
            p = s.apply(&p);
        }
        p
    }

    pub fn is_linear(&self) -> bool {
        self.steps.iter().all(|s| matches!(s, ChartStep::Linear(_)))
    }
}

/// Kind of the 2D principal face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    Vertex,
    CompactEdge,
    UnboundedEdge,
    /// Full facet (only in 3D reports).
    Facet,
}

/// Outcome of the 2D adaptedness test (Proposition-style trichotomy).
#[derive(Debug, Clone)]
pub struct Adaptedness2d {
    pub adapted: bool,
    pub distance: BigRational,
    pub face: FaceKind,
    /// Maximal real-root multiplicity of the principal part on the unit
    /// circle (compact-edge case only).
    pub max_multiplicity: Option<u32>,
    pub kappa: Option<[BigRational; 2]>,
}

fn face_kind_2d(pd: &PrincipalData) -> FaceKind {
    match (pd.face_dim, pd.compact) {
        (0, _) => FaceKind::Vertex,
        (_, true) => FaceKind::CompactEdge,
        (_, false) => FaceKind::UnboundedEdge,
    }
}

fn assert_2d_input(psi: &Polynomial) {
    assert_eq!(psi.nvars(), 2, "2D engine expects a bivariate polynomial");
    assert!(!psi.is_zero(), "zero polynomial");
    assert!(psi.constant_term().is_zero(), "ψ(0) must vanish");
    assert!(
        psi.coeff(&Monomial::var(0)).is_zero() && psi.coeff(&Monomial::var(1)).is_zero(),
        "∇ψ(0) must vanish"
    );
}

/// Maximal order of vanishing of the principal part along the unit circle,
/// computed on the four affine charts (±1, t) and (t, ±1).
fn circle_multiplicity(pr: &Polynomial) -> u32 {
    let mut m = 0u32;
    for (fixed_var, t_var) in [(0usize, 1usize), (1, 0)] {
        for sign in [1i64, -1] {
            let chart = pr.substitute(
                fixed_var,
                &Polynomial::constant(Scalar::from_int(sign), pr.nvars()),
            );
            if chart.is_zero() {
                continue;
            }
            let coeffs = chart.univariate_in(t_var).expect("chart must be univariate");
            if uni_is_zero(&coeffs) {
                continue;
            }
            for (mult, factor) in squarefree_decomposition(&coeffs) {
                if mult > m && SturmChain::new(&factor).count_all() > 0 {
                    m = mult;
                }
            }
        }
    }
    m
}

/// Adaptedness of the given 2D coordinate system: vertex or unbounded-edge
/// principal faces are adapted; a compact edge is adapted iff the circle
/// multiplicity of the principal part does not exceed the distance.
pub fn adaptedness_2d(psi: &Polynomial) -> Adaptedness2d {
    assert_2d_input(psi);
    let (n, pd) = analyze_polyhedron(psi).expect("support is nonempty");
    let face = face_kind_2d(&pd);
    match face {
        FaceKind::Vertex | FaceKind::UnboundedEdge | FaceKind::Facet => Adaptedness2d {
            adapted: true,
            distance: pd.distance.clone(),
            face,
            max_multiplicity: None,
            kappa: pd.kappa.clone(),
        },
        FaceKind::CompactEdge => {
            let pr = principal_part(psi, &n, &pd);
            let m = circle_multiplicity(&pr);
            let adapted =
                BigRational::from_integer(BigInt::from(m)) <= pd.distance;
            Adaptedness2d {
                adapted,
                distance: pd.distance.clone(),
                face,
                max_multiplicity: Some(m),
                kappa: pd.kappa.clone(),
            }
        }
    }
}

/// The shear removing the excess-multiplicity root of the principal part.
pub fn varchenko_step_2d(psi: &Polynomial) -> Result<ChartStep, AdaptError> {
    varchenko_step_inner(psi, false)
}

/// `include_boundary` also accepts a root of multiplicity exactly d; used to
/// expose the vertex behind an adapted compact edge with m(φ_pr) = d.
fn varchenko_step_inner(
    psi: &Polynomial,
    include_boundary: bool,
) -> Result<ChartStep, AdaptError> {
    assert_2d_input(psi);
    let (n, pd) = analyze_polyhedron(psi).expect("support is nonempty");
    assert_eq!(face_kind_2d(&pd), FaceKind::CompactEdge, "step needs a compact edge");
    let kappa = pd.kappa.clone().expect("compact edge carries a weight");
    let d = &pd.distance;
    let pr = principal_part(psi, &n, &pd);

    // roots with multiplicity > d live in the charts of the smaller weight
    let (fixed_var, t_var, ratio) = if kappa[0] <= kappa[1] {
        (0usize, 1usize, &kappa[1] / &kappa[0])
    } else {
        (1, 0, &kappa[0] / &kappa[1])
    };
    if !ratio.is_integer() {
        return Err(AdaptError::NonIntegerExponentRatio(
            kappa[t_var].clone(),
            kappa[fixed_var].clone(),
        ));
    }
    let power = ratio.to_integer().to_string().parse::<u32>().expect("small exponent");

    for sign in [1i64, -1] {
        let chart = pr.substitute(
            fixed_var,
            &Polynomial::constant(Scalar::from_int(sign), pr.nvars()),
        );
        if chart.is_zero() {
            continue;
        }
        let coeffs = chart.univariate_in(t_var).expect("chart must be univariate");
        for (mult, factor) in squarefree_decomposition(&coeffs) {
            let mult_rat = BigRational::from_integer(BigInt::from(mult));
            let qualifies = if include_boundary { mult_rat >= *d } else { mult_rat > *d };
            if !qualifies {
                continue;
            }
            if SturmChain::new(&factor).count_all() == 0 {
                continue;
            }
            let descs = describe_real_roots(&factor);
            let root = descs.first().expect("real root exists");
            let Some(t0) = root.as_scalar() else {
                let (lo, hi) = match root {
                    crate::algebra::RootDesc::Interval { lo, hi } => (lo, hi),
                    _ => unreachable!(),
                };
                let fp = Polynomial::from_univariate(&factor, 0, 1);
                return Err(AdaptError::IrrationalRoot {
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                    factor: fp.to_string(),
                });
            };
            debug_assert!(!t0.is_zero(), "axis roots cannot exceed the distance");
            // chart (−1, t): the branch coefficient is (−1)^power · t0
            let coeff = if sign == 1 || power % 2 == 0 {
                t0
            } else {
                -t0
            };
            return Ok(ChartStep::Shear {
                target: t_var,
                source: fixed_var,
                coeff,
                power,
            });
        }
    }
    unreachable!("compact edge with m > d must expose an excess root");
}

/// Height data of a fully adapted 2D polynomial.
#[derive(Debug, Clone)]
pub struct Adapt2dResult {
    pub steps: Vec<ChartStep>,
    pub final_poly: Polynomial,
    pub height: BigRational,
    pub face: FaceKind,
    /// ν per the vertex test: principal face is a vertex and h ≥ 2.
    pub nu: u8,
}

/// Iterates Varchenko steps until the coordinate system is adapted.
///
/// The boundary case of an adapted compact edge carrying a root of
/// multiplicity exactly d (with d ≥ 2) gets one extra shear: the resulting
/// polynomial is divisible by x₂^d, which makes the coordinate facet tight
/// at (d, d) and exposes the principal vertex. The height does not change,
/// but the Varchenko exponent is then read off a vertex face, independent
/// of which adapted system the iteration happened to reach first.
pub fn adapt_2d(psi: &Polynomial) -> Result<Adapt2dResult, AdaptError> {
    assert_2d_input(psi);
    let cap = 4 * psi.degree();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut current = psi.clone();
    let mut steps: Vec<ChartStep> = Vec::new();
    let mut last_d: Option<BigRational> = None;
    loop {
        let check = adaptedness_2d(&current);
        if let Some(prev) = &last_d {
            debug_assert!(check.distance > *prev, "distance must strictly increase");
        }
        last_d = Some(check.distance.clone());
        if check.adapted {
            let boundary_edge = check.face == FaceKind::CompactEdge
                && check.distance >= two
                && check
                    .max_multiplicity
                    .map_or(false, |m| {
                        BigRational::from_integer(BigInt::from(m)) == check.distance
                    });
            if boundary_edge {
                let step = varchenko_step_inner(&current, true)?;
                current = step.apply(&current);
                steps.push(step);
                let after = adaptedness_2d(&current);
                debug_assert!(after.adapted, "boundary shear must stay adapted");
                debug_assert_eq!(after.distance, check.distance);
                debug_assert_eq!(after.face, FaceKind::Vertex);
                let nu = u8::from(after.face == FaceKind::Vertex && after.distance >= two);
                return Ok(Adapt2dResult {
                    steps,
                    final_poly: current,
                    height: after.distance,
                    face: after.face,
                    nu,
                });
            }
            let nu = u8::from(check.face == FaceKind::Vertex && check.distance >= two);
            return Ok(Adapt2dResult {
                steps,
                final_poly: current,
                height: check.distance,
                face: check.face,
                nu,
            });
        }
        if steps.len() as u32 >= cap {
            return Err(AdaptError::IterationCapExceeded { cap, steps_taken: steps.len() });
        }
        let step = varchenko_step_2d(&current)?;
        current = step.apply(&current);
        steps.push(step);
    }
}

/// Case provenance of the 3D pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CaseTag {
    OneVar,
    TwoVar,
    FormCase1,
    FormCase2,
}

/// Constants and matrix of the second form case.
#[derive(Debug, Clone)]
pub struct FormConstants {
    pub c1: Scalar,
    pub c2: Scalar,
    pub c3: Scalar,
    pub b: LinearMap3,
}

/// Height and face data in adapted coordinates.
#[derive(Debug, Clone)]
pub struct HeightReport {
    pub height: BigRational,
    pub d_original: BigRational,
    pub d_adapted: BigRational,
    pub nu: u8,
    /// Dimension of the principal face in adapted coordinates (the 2D face
    /// for the ≤2-variable cases, the 3D face for the form cases).
    pub face_dim: usize,
    pub face_compact: bool,
    pub case: CaseTag,
    pub linearly_adapted: bool,
    pub form_constants: Option<FormConstants>,
}

/// Varchenko exponent: 1 only for ≤2-variable reductions whose adapted
/// principal face is a vertex with h ≥ 2; identically 0 in the form cases.
pub fn varchenko_exponent(case: CaseTag, face_is_vertex: bool, h: &BigRational) -> u8 {
    match case {
        CaseTag::FormCase1 | CaseTag::FormCase2 => 0,
        CaseTag::OneVar | CaseTag::TwoVar => {
            let two = BigRational::from_integer(BigInt::from(2));
            u8::from(face_is_vertex && *h >= two)
        }
    }
}

/// Builds the adapted chart and height report for a decomposed polynomial.
pub fn adapt_3d(
    phi: &Polynomial,
    dec: &Decomposition,
) -> Result<(AdaptedChart, HeightReport), AdaptError> {
    let (_, pd0) = analyze_polyhedron(phi).expect("valid input");
    let d_original = pd0.distance;

    let (chart, mut report) = match &dec.kind {
        DecompKind::OneVar { nu, q } => {
            let final_poly = phi.compose_linear(&dec.matrix);
            let chart = AdaptedChart {
                steps: vec![ChartStep::Linear(dec.matrix.clone())],
                final_poly: final_poly.clone(),
            };
            // ν(φ) via the vertex test on the univariate-embedded 2D support
            let embedded = final_poly.shrink_nvars(2);
            let (_, pd2) = analyze_polyhedron(&embedded).expect("valid payload");
            let h = BigRational::from_integer(BigInt::from(*nu));
            let case = CaseTag::OneVar;
            let nu_flag = varchenko_exponent(case, pd2.face_dim == 0, &h);
            let _ = q;
            let report = HeightReport {
                height: h.clone(),
                d_original: BigRational::zero(),
                d_adapted: h,
                nu: nu_flag,
                face_dim: pd2.face_dim,
                face_compact: pd2.compact,
                case,
                linearly_adapted: true,
                form_constants: None,
            };
            (chart, report)
        }
        DecompKind::TwoVar { psi } => {
            let res = adapt_2d(psi)?;
            let mut steps = vec![ChartStep::Linear(dec.matrix.clone())];
            steps.extend(res.steps.iter().cloned());
            let mut p = phi.compose_linear(&dec.matrix);
            for s in &res.steps {
                p = s.apply(&p);
            }
            debug_assert_eq!(p.shrink_nvars(2), res.final_poly);
            let chart = AdaptedChart { steps, final_poly: p };
            let case = CaseTag::TwoVar;
            let nu_flag = varchenko_exponent(case, res.face == FaceKind::Vertex, &res.height);
            let linearly_adapted = res.steps.is_empty();
            let report = HeightReport {
                height: res.height.clone(),
                d_original: BigRational::zero(),
                d_adapted: res.height,
                nu: nu_flag,
                face_dim: match res.face {
                    FaceKind::Vertex => 0,
                    _ => 1,
                },
                face_compact: res.face != FaceKind::UnboundedEdge,
                case,
                linearly_adapted,
                form_constants: None,
            };
            (chart, report)
        }
        DecompKind::Form { q1, q2, q3, nu1, nu2, nu3 } => {
            let case1 = matches!(nu1, Some(n1) if *n1 <= *nu2);
            if case1 {
                let final_poly = phi.compose_linear(&dec.matrix);
                let chart = AdaptedChart {
                    steps: vec![ChartStep::Linear(dec.matrix.clone())],
                    final_poly: final_poly.clone(),
                };
                let (n3, pd3) = analyze_polyhedron(&final_poly).expect("valid payload");
                let h = BigRational::from_integer(BigInt::from(nu1.unwrap()));
                debug_assert_eq!(n3.distance(), h);
                let report = HeightReport {
                    height: h.clone(),
                    d_original: BigRational::zero(),
                    d_adapted: h,
                    nu: 0,
                    face_dim: pd3.face_dim,
                    face_compact: pd3.compact,
                    case: CaseTag::FormCase1,
                    linearly_adapted: true,
                    form_constants: None,
                };
                (chart, report)
            } else {
                // ν₂ = min: pass to z₂ = c₁x₁ + c₂x₂ + c₃x₃
                let tilde_at_zero = |q: &Polynomial, nu: u32| -> Scalar {
                    let coeffs = q.univariate_in(0).expect("payload univariate");
                    coeffs[nu as usize].clone()
                };
                let c1 = match nu1 {
                    Some(n1) if *n1 == nu2 + 1 => tilde_at_zero(q1, *n1),
                    _ => Scalar::zero(),
                };
                let c2 = tilde_at_zero(q2, *nu2);
                assert!(!c2.is_zero(), "Q̃₂(0) must be nonzero");
                let c3 = if nu3 == nu2 {
                    tilde_at_zero(q3, *nu3)
                } else {
                    Scalar::zero()
                };
                let m = LinearMap3::new([
                    [Scalar::one(), Scalar::zero(), Scalar::zero()],
                    [
                        -(&c1 / &c2),
                        c2.inv(),
                        -(&c3 / &c2),
                    ],
                    [Scalar::zero(), Scalar::zero(), Scalar::one()],
                ])
                .expect("triangular map is invertible");
                let b = dec.matrix.mul(&m);
                let final_poly = phi.compose_linear(&b);
                let chart = AdaptedChart {
                    steps: vec![
                        ChartStep::Linear(dec.matrix.clone()),
                        ChartStep::Linear(m),
                    ],
                    final_poly: final_poly.clone(),
                };
                // the monomial z1^{ν2} z2 must appear with coefficient 1
                let marker = Monomial([*nu2, 1, 0]);
                debug_assert!(final_poly.coeff(&marker).is_one());
                let (n3, pd3) = analyze_polyhedron(&final_poly).expect("valid payload");
                let h = BigRational::from_integer(BigInt::from(*nu2));
                debug_assert_eq!(n3.distance(), h);
                let report = HeightReport {
                    height: h.clone(),
                    d_original: BigRational::zero(),
                    d_adapted: h,
                    nu: 0,
                    face_dim: pd3.face_dim,
                    face_compact: pd3.compact,
                    case: CaseTag::FormCase2,
                    linearly_adapted: true,
                    form_constants: Some(FormConstants { c1, c2, c3, b }),
                };
                (chart, report)
            }
        }
    };

    report.d_original = d_original;
    debug_assert!(report.height >= report.d_original, "h must dominate d");
    debug_assert_eq!(chart.apply(phi), chart.final_poly);
    Ok((chart, report))
}

// ---------------------------------------------------------------------------
// Exponent report
// ---------------------------------------------------------------------------

/// Status of the boundedness exponent p(S).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PSStatus {
    /// p(S) equals the reported value exactly.
    Exact,
    /// Only p(S) ≥ h is known (one nonzero principal curvature, open case).
    LowerBoundOnly,
    /// Two nonzero principal curvatures: bounded for p > 3/2, exact value in
    /// [h, 3/2] not determined.
    CurvatureCase,
}

/// Sharp exponents attached to the analyzed surface.
#[derive(Debug, Clone)]
pub struct ExponentReport {
    /// Oscillatory decay exponent 1/h.
    pub beta: BigRational,
    /// Logarithmic factor flag ν.
    pub log_flag: u8,
    pub p_s: BigRational,
    pub p_s_status: PSStatus,
    /// Uniform oscillation, oscillation, uniform contact and contact
    /// indexes; all equal 1/h here.
    pub indexes: BigRational,
}

/// Rank of D²φ(0), read off the quadratic part.
pub fn hessian_rank_at_origin(phi: &Polynomial) -> usize {
    let n = phi.nvars() as usize;
    let mut m: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); n]; n];
    for (mon, c) in phi.terms() {
        if mon.degree() != 2 {
            continue;
        }
        let vars: Vec<usize> = (0..3).filter(|&v| mon.0[v] > 0).collect();
        match vars.as_slice() {
            [i] => m[*i][*i] = &Scalar::from_int(2) * c,
            [i, j] => {
                m[*i][*j] = c.clone();
                m[*j][*i] = c.clone();
            }
            _ => unreachable!(),
        }
    }
    rank(&m)
}

/// Assembles the exponent report from (h, ν, rank D²φ(0)).
pub fn exponent_report(h: &BigRational, nu: u8, rank_at_origin: usize) -> ExponentReport {
    let beta = h.recip();
    let two = BigRational::from_integer(BigInt::from(2));
    let (p_s, p_s_status) = if *h >= two {
        (h.clone(), PSStatus::Exact)
    } else {
        match rank_at_origin {
            0 => (h.clone(), PSStatus::Exact),
            2 => (
                BigRational::new(BigInt::from(3), BigInt::from(2)),
                PSStatus::CurvatureCase,
            ),
            _ => (h.clone(), PSStatus::LowerBoundOnly),
        }
    };
    ExponentReport {
        beta: beta.clone(),
        log_flag: nu,
        p_s,
        p_s_status,
        indexes: beta,
    }
}
