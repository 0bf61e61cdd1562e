//! Structural decomposition of trivariate polynomials with identically
//! vanishing Hessian determinant: a witnessing invertible matrix A such that
//! φ(Ax) depends on at most two variables, or has the shape
//! Q₁(x₁) + Q₂(x₁)x₂ + Q₃(x₁)x₃.
//!
//! The witness plane for the second shape is found by factoring one
//! coefficient form of the Hessian matrix: any admissible plane must lie in
//! the zero set of every coefficient form, and the zero set of a rank-≤2
//! form is a union of at most two planes. Candidates are validated exactly
//! against all coefficient forms before a matrix is produced.

use crate::algebra::linalg::{kernel3, rank};
use crate::algebra::{LinearMap3, Monomial, Polynomial, Scalar};

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("Hessian determinant does not vanish identically; witness point {witness:?}")]
    NotDegenerate { witness: [i64; 3], value: String },
    #[error("no structural decomposition found: {0}")]
    Unrepresentable(String),
    #[error("witness plane requires a field beyond ℚ(√D); minimal polynomial {min_poly}")]
    CandidateIrrational { min_poly: String },
    #[error("input violates preconditions: {0}")]
    Precondition(String),
}

/// Result of the exact vanishing test for det(D²φ).
#[derive(Debug, Clone)]
pub struct HessianReport {
    pub vanishes: bool,
    /// Lattice point with det(D²φ) ≠ 0, with the exact value, when not vanishing.
    pub witness: Option<([i64; 3], Scalar)>,
}

/// Structural case of the decomposition, with its payload.
#[derive(Debug, Clone)]
pub enum DecompKind {
    /// φ(Ax) = x₁^ν Q(x₁) with Q(0) ≠ 0, ν ≥ 2.
    OneVar { nu: u32, q: Polynomial },
    /// φ(Ax) = ψ(x₁, x₂).
    TwoVar { psi: Polynomial },
    /// φ(Ax) = Q₁(x₁) + Q₂(x₁)x₂ + Q₃(x₁)x₃ with Q₂, Q₃ ≠ 0 and ν₃ ≥ ν₂.
    Form {
        q1: Polynomial,
        q2: Polynomial,
        q3: Polynomial,
        /// Multiplicity of x₁ = 0 in Q₁; `None` encodes ν₁ = ∞ (Q₁ ≡ 0).
        nu1: Option<u32>,
        nu2: u32,
        nu3: u32,
    },
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub matrix: LinearMap3,
    pub kind: DecompKind,
}

impl Decomposition {
    pub fn case_name(&self) -> &'static str {
        match self.kind {
            DecompKind::OneVar { .. } => "OneVar",
            DecompKind::TwoVar { .. } => "TwoVar",
            DecompKind::Form { .. } => "Form",
        }
    }

    /// The declared shape as a trivariate polynomial.
    pub fn shape(&self) -> Polynomial {
        match &self.kind {
            DecompKind::OneVar { nu, q } => {
                let coeffs = q.univariate_in(0).expect("OneVar payload must be univariate");
                let mut shape = Polynomial::zero(3);
                for (j, c) in coeffs.iter().enumerate() {
                    let m = Monomial([*nu + j as u32, 0, 0]);
                    shape = shape.add(&Polynomial::monomial(m, c.clone(), 3));
                }
                shape
            }
            DecompKind::TwoVar { psi } => psi.with_nvars(3),
            DecompKind::Form { q1, q2, q3, .. } => {
                let embed = |q: &Polynomial| q.with_nvars(3);
                let x2 = Polynomial::var(1, 3);
                let x3 = Polynomial::var(2, 3);
                embed(q1).add(&embed(q2).mul(&x2)).add(&embed(q3).mul(&x3))
            }
        }
    }

    /// Checks the exact identity φ(Ax) = declared shape.
    pub fn verify(&self, phi: &Polynomial) -> bool {
        phi.compose_linear(&self.matrix) == self.shape()
    }
}

/// Exact test of det(D²φ) ≡ 0; on failure, searches lattice shells for a
/// witness point (guaranteed to exist within the degree bound).
pub fn hessian_vanishes(phi: &Polynomial) -> HessianReport {
    let det = phi.hessian_det();
    if det.is_zero() {
        return HessianReport { vanishes: true, witness: None };
    }
    let deg = det.degree() as i64;
    let radius = deg / 2 + 1;
    for r in 0..=radius {
        for i in -r..=r {
            for j in -r..=r {
                for k in -r..=r {
                    if i.abs().max(j.abs()).max(k.abs()) != r {
                        continue;
                    }
                    let point = [
                        Scalar::from_int(i),
                        Scalar::from_int(j),
                        Scalar::from_int(k),
                    ];
                    let v = det.eval(&point);
                    if !v.is_zero() {
                        return HessianReport { vanishes: false, witness: Some(([i, j, k], v)) };
                    }
                }
            }
        }
    }
    unreachable!("nonzero polynomial vanished on a grid exceeding its degree");
}

/// Basis of the constant directions v with v·∇φ ≡ 0, solved exactly from
/// the stacked coefficients of the three partials.
pub fn kernel_directions(phi: &Polynomial) -> Vec<[Scalar; 3]> {
    assert_eq!(phi.nvars(), 3);
    let d: Vec<Polynomial> = (0..3).map(|i| phi.derivative(i)).collect();
    let mut rows_by_monomial: BTreeMap<Monomial, [Scalar; 3]> = BTreeMap::new();
    for (i, di) in d.iter().enumerate() {
        for (m, c) in di.terms() {
            let row = rows_by_monomial
                .entry(*m)
                .or_insert_with(|| [Scalar::zero(), Scalar::zero(), Scalar::zero()]);
            row[i] = c.clone();
        }
    }
    let rows: Vec<[Scalar; 3]> = rows_by_monomial.into_values().collect();
    kernel3(&rows)
}

/// Completes `dirs` to a basis with standard vectors in front and the given
/// directions as the trailing columns.
fn completion_matrix(dirs: &[[Scalar; 3]]) -> LinearMap3 {
    let k = dirs.len();
    assert!((1..=2).contains(&k));
    let mut cols: Vec<[Scalar; 3]> = Vec::new();
    for i in 0..3 {
        if cols.len() == 3 - k {
            break;
        }
        let mut e = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        e[i] = Scalar::one();
        let mut trial: Vec<Vec<Scalar>> = cols.iter().map(|c| c.to_vec()).collect();
        trial.push(e.to_vec());
        for d in dirs {
            trial.push(d.to_vec());
        }
        if rank(&trial) == trial.len() {
            cols.push(e);
        }
    }
    assert_eq!(cols.len(), 3 - k, "direction set is not independent");
    for d in dirs {
        cols.push(d.clone());
    }
    LinearMap3::from_columns([cols[0].clone(), cols[1].clone(), cols[2].clone()])
        .expect("completed basis is invertible")
}

/// Reduces φ along kernel directions, yielding the OneVar or TwoVar case.
pub fn reduce_variables(phi: &Polynomial, dirs: &[[Scalar; 3]]) -> Decomposition {
    assert!(!dirs.is_empty());
    let a = completion_matrix(dirs);
    let composed = phi.compose_linear(&a);
    for v in 3 - dirs.len()..3 {
        assert!(
            !composed.depends_on(v),
            "reduction failed: result still depends on an eliminated variable"
        );
    }
    if dirs.len() == 2 {
        let coeffs = composed
            .univariate_in(0)
            .expect("composed polynomial must be univariate");
        let nu = composed.min_degree_in(0);
        let q_coeffs: Vec<Scalar> = coeffs[nu as usize..].to_vec();
        let q = Polynomial::from_univariate(&q_coeffs, 0, 1);
        debug_assert!(!q.constant_term().is_zero());
        let dec = Decomposition { matrix: a, kind: DecompKind::OneVar { nu, q } };
        debug_assert!(dec.verify(phi));
        dec
    } else {
        let psi = composed.shrink_nvars(2);
        let dec = Decomposition { matrix: a, kind: DecompKind::TwoVar { psi } };
        debug_assert!(dec.verify(phi));
        dec
    }
}

/// Symmetric 3×3 coefficient matrices M_γ of the Hessian polynomial matrix.
fn hessian_coefficient_forms(phi: &Polynomial) -> Vec<(Monomial, [[Scalar; 3]; 3])> {
    let h = phi.hessian();
    let mut forms: BTreeMap<Monomial, [[Scalar; 3]; 3]> = BTreeMap::new();
    for i in 0..3 {
        for j in i..3 {
            for (m, c) in h[i][j].terms() {
                let entry = forms.entry(*m).or_insert_with(|| {
                    std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero()))
                });
                entry[i][j] = c.clone();
                entry[j][i] = c.clone();
            }
        }
    }
    forms.into_iter().collect()
}

fn matrix_rank3(m: &[[Scalar; 3]; 3]) -> usize {
    rank(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

/// Linear form ℓ·w as a coefficient triple.
type Form3 = [Scalar; 3];

fn form_is_zero(f: &Form3) -> bool {
    f.iter().all(|c| c.is_zero())
}

/// Factors the quadratic form of M (rank 1 or 2) into candidate planes
/// {ℓ = 0}; returns None when the form is definite (no real plane).
fn candidate_planes(m: &[[Scalar; 3]; 3]) -> Result<Vec<Form3>, StructureError> {
    let r = matrix_rank3(m);
    match r {
        0 => Ok(vec![]),
        1 => {
            // q = c (ℓ·w)²: the zero set is the plane spanned by ker, cut by any nonzero row
            let row = m
                .iter()
                .find(|row| !row.iter().all(|c| c.is_zero()))
                .expect("rank 1 matrix has a nonzero row");
            Ok(vec![row.clone()])
        }
        2 => factor_rank2(m),
        _ => Ok(vec![]), // rank 3 admits no real 2-plane
    }
}

/// Rank-2 case: diagonalize by completing squares, q = a L₁² + b L₂²;
/// indefinite forms split as a(L₁ - sL₂)(L₁ + sL₂) over ℚ or ℚ(√D).
fn factor_rank2(m: &[[Scalar; 3]; 3]) -> Result<Vec<Form3>, StructureError> {
    // ensure a nonzero diagonal entry, transforming w = C u if necessary
    let diag_idx = (0..3).find(|&i| !m[i][i].is_zero());
    let (mm, back): ([[Scalar; 3]; 3], Option<(usize, usize)>) = match diag_idx {
        Some(_) => (m.clone(), None),
        None => {
            let (i, j) = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_zero())
                .expect("nonzero matrix");
            // substitution w_i = u_i + u_j, w_j = u_i - u_j
            let mut c: [[Scalar; 3]; 3] = std::array::from_fn(|r| {
                std::array::from_fn(|s| if r == s { Scalar::one() } else { Scalar::zero() })
            });
            c[i][i] = Scalar::one();
            c[i][j] = Scalar::one();
            c[j][i] = Scalar::one();
            c[j][j] = -Scalar::one();
            let cm = mat_mul(&mat_mul_t(&c, m), &c);
            (cm, Some((i, j)))
        }
    };

    let p = (0..3).find(|&i| !mm[i][i].is_zero()).expect("diagonal entry exists");
    let a = mm[p][p].clone();
    // L1 = w_p + sum_{k≠p} (M[p][k]/a) w_k
    let mut l1: Form3 = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
    l1[p] = Scalar::one();
    for k in 0..3 {
        if k != p {
            l1[k] = &mm[p][k] / &a;
        }
    }
    // q2 = q - a L1², a rank-1 form in the other two variables
    let others: Vec<usize> = (0..3).filter(|&k| k != p).collect();
    let mut n = [[Scalar::zero(); 1]; 1];
    let _ = &mut n;
    let mut q2 = [[Scalar::zero(), Scalar::zero()], [Scalar::zero(), Scalar::zero()]];
    for (ii, &gi) in others.iter().enumerate() {
        for (jj, &gj) in others.iter().enumerate() {
            let val = &mm[gi][gj] - &(&(&a * &l1[gi]) * &l1[gj]);
            q2[ii][jj] = val;
        }
    }
    // q2 = b L2²
    let (b, l2_local): (Scalar, [Scalar; 2]) = if !q2[0][0].is_zero() {
        let b = q2[0][0].clone();
        let ratio = &q2[0][1] / &b;
        (b, [Scalar::one(), ratio])
    } else if !q2[1][1].is_zero() {
        (q2[1][1].clone(), [Scalar::zero(), Scalar::one()])
    } else {
        // both diagonals zero but rank(q2)=1 is impossible; rank 0 means rank(m)=1
        return Ok(vec![]);
    };
    let mut l2: Form3 = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
    l2[others[0]] = l2_local[0].clone();
    l2[others[1]] = l2_local[1].clone();

    // q = a L1² + b L2²; real factorization needs -b/a >= 0
    let t = -(&b / &a);
    let sign = t.sign();
    let planes_local: Vec<Form3> = if sign < 0 {
        vec![] // definite: no real plane
    } else if sign == 0 {
        vec![l1.clone()]
    } else {
        let s = match t.as_rational() {
            Some(r) => Scalar::sqrt_of_rational(r),
            None => t.sqrt_in_field(),
        };
        let Some(s) = s else {
            return Err(StructureError::CandidateIrrational {
                min_poly: format!("z^2 - ({t})"),
            });
        };
        let minus: Form3 = std::array::from_fn(|k| &l1[k] - &(&s * &l2[k]));
        let plus: Form3 = std::array::from_fn(|k| &l1[k] + &(&s * &l2[k]));
        vec![minus, plus]
    };

    // transform candidates back through w = C u if a basis change was used:
    // ℓ'(u) = ℓ(w) with u_i = (w_i+w_j)/2, u_j = (w_i-w_j)/2
    let planes = match back {
        None => planes_local,
        Some((i, j)) => planes_local
            .into_iter()
            .map(|l| {
                let mut out = l.clone();
                let half = Scalar::from_ratio(1, 2);
                out[i] = &(&l[i] + &l[j]) * &half;
                out[j] = &(&l[i] - &l[j]) * &half;
                out
            })
            .collect(),
    };
    Ok(planes.into_iter().filter(|l| !form_is_zero(l)).collect())
}

fn mat_mul(a: &[[Scalar; 3]; 3], b: &[[Scalar; 3]; 3]) -> [[Scalar; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = Scalar::zero();
            for k in 0..3 {
                s = &s + &(&a[i][k] * &b[k][j]);
            }
            s
        })
    })
}

fn mat_mul_t(c: &[[Scalar; 3]; 3], m: &[[Scalar; 3]; 3]) -> [[Scalar; 3]; 3] {
    // Cᵀ · M
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = Scalar::zero();
            for k in 0..3 {
                s = &s + &(&c[k][i] * &m[k][j]);
            }
            s
        })
    })
}

/// Two independent vectors spanning the plane {ℓ·w = 0}.
fn plane_basis(l: &Form3) -> [[Scalar; 3]; 2] {
    let p = (0..3).find(|&k| !l[k].is_zero()).expect("zero linear form");
    let mut basis: Vec<[Scalar; 3]> = Vec::new();
    for k in 0..3 {
        if k == p {
            continue;
        }
        let mut v = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        v[k] = l[p].clone();
        v[p] = -l[k].clone();
        basis.push(v);
    }
    [basis[0].clone(), basis[1].clone()]
}

/// Searches for the de Bondt form witness plane; `Ok(None)` means no plane
/// validates (the case is then impossible for genuinely degenerate inputs).
pub fn detect_form(phi: &Polynomial) -> Result<Option<Decomposition>, StructureError> {
    let forms = hessian_coefficient_forms(phi);
    if forms.is_empty() {
        return Ok(None);
    }
    let max_rank = forms.iter().map(|(_, m)| matrix_rank3(m)).max().unwrap();
    if max_rank == 0 || max_rank == 3 {
        return Ok(None);
    }
    let pivot = forms
        .iter()
        .find(|(_, m)| matrix_rank3(m) == max_rank)
        .unwrap();
    let candidates = candidate_planes(&pivot.1)?;
    for l in candidates {
        let basis = plane_basis(&l);
        let valid = forms.iter().all(|(_, m)| {
            basis.iter().all(|u| {
                basis.iter().all(|v| {
                    let mut s = Scalar::zero();
                    for i in 0..3 {
                        for j in 0..3 {
                            s = &s + &(&(&u[i] * &m[i][j]) * &v[j]);
                        }
                    }
                    s.is_zero()
                })
            })
        });
        if !valid {
            continue;
        }
        return Ok(Some(build_form_decomposition(phi, &basis)?));
    }
    Ok(None)
}

/// Assembles the Form decomposition from a validated plane basis, enforcing
/// ν₃ ≥ ν₂ by swapping x₂ and x₃ when necessary.
fn build_form_decomposition(
    phi: &Polynomial,
    basis: &[[Scalar; 3]; 2],
) -> Result<Decomposition, StructureError> {
    // column 1: first standard vector completing the basis
    let mut a = None;
    for i in 0..3 {
        let mut e = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        e[i] = Scalar::one();
        if let Ok(map) =
            LinearMap3::from_columns([e, basis[0].clone(), basis[1].clone()])
        {
            a = Some(map);
            break;
        }
    }
    let a = a.expect("plane basis extends to a basis of R^3");
    read_off_form(phi, a)
}

/// Reads the form payloads off φ(Ax), re-dispatching to the reduced cases
/// when a payload vanishes.
fn read_off_form(phi: &Polynomial, a: LinearMap3) -> Result<Decomposition, StructureError> {
    let composed = phi.compose_linear(&a);

    // the composed polynomial must be affine in (x2, x3) with no cross term
    for (m, _) in composed.terms() {
        if m.0[1] + m.0[2] > 1 {
            return Err(StructureError::Unrepresentable(
                "validated plane did not linearize the trailing variables".into(),
            ));
        }
    }
    let mut q1 = Vec::new();
    let mut q2 = Vec::new();
    let mut q3 = Vec::new();
    for (m, c) in composed.terms() {
        let target = if m.0[1] == 1 {
            &mut q2
        } else if m.0[2] == 1 {
            &mut q3
        } else {
            &mut q1
        };
        let deg = m.0[0] as usize;
        if target.len() <= deg {
            target.resize(deg + 1, Scalar::zero());
        }
        target[deg] = c.clone();
    }
    let to_poly = |v: &[Scalar]| Polynomial::from_univariate(v, 0, 1);
    let (q1, q2, q3) = (to_poly(&q1), to_poly(&q2), to_poly(&q3));

    // degenerate payloads re-dispatch to the reduced cases
    if q2.is_zero() && q3.is_zero() {
        let nu = q1.min_degree_in(0);
        let coeffs = q1.univariate_in(0).unwrap();
        let q = Polynomial::from_univariate(&coeffs[nu as usize..], 0, 1);
        let dec = Decomposition { matrix: a, kind: DecompKind::OneVar { nu, q } };
        debug_assert!(dec.verify(phi));
        return Ok(dec);
    }
    if q2.is_zero() || q3.is_zero() {
        // make the vanishing payload the x3 one, then ψ = Q1 + Q2 x2
        let (a, q2) = if q2.is_zero() {
            (a.with_swapped_columns(1, 2), q3)
        } else {
            (a, q2)
        };
        let psi = q1.with_nvars(2).add(&q2.with_nvars(2).mul(&Polynomial::var(1, 2)));
        let dec = Decomposition { matrix: a, kind: DecompKind::TwoVar { psi } };
        debug_assert!(dec.verify(phi));
        return Ok(dec);
    }

    let nu2 = q2.min_degree_in(0);
    let nu3 = q3.min_degree_in(0);
    let (a, q2, q3, nu2, nu3) = if nu3 >= nu2 {
        (a, q2, q3, nu2, nu3)
    } else {
        (a.with_swapped_columns(1, 2), q3, q2, nu3, nu2)
    };
    let nu1 = if q1.is_zero() { None } else { Some(q1.min_degree_in(0)) };
    if let Some(n1) = nu1 {
        debug_assert!(n1 >= 2);
    }
    debug_assert!(nu2 >= 1 && nu3 >= 1);

    let dec = Decomposition {
        matrix: a,
        kind: DecompKind::Form { q1, q2, q3, nu1, nu2, nu3 },
    };
    debug_assert!(dec.verify(phi));
    Ok(dec)
}

fn check_preconditions(phi: &Polynomial) -> Result<(), StructureError> {
    if phi.nvars() != 3 {
        return Err(StructureError::Precondition("expected a trivariate polynomial".into()));
    }
    if phi.is_zero() {
        return Err(StructureError::Precondition("polynomial is identically zero".into()));
    }
    if !phi.constant_term().is_zero() {
        return Err(StructureError::Precondition("φ(0) must vanish".into()));
    }
    for i in 0..3 {
        if !phi.coeff(&Monomial::var(i)).is_zero() {
            return Err(StructureError::Precondition("∇φ(0) must vanish".into()));
        }
    }
    Ok(())
}

/// Full structural decomposition per the vanishing-Hessian trichotomy.
pub fn decompose(phi: &Polynomial) -> Result<Decomposition, StructureError> {
    check_preconditions(phi)?;
    let hess = hessian_vanishes(phi);
    if !hess.vanishes {
        let (witness, value) = hess.witness.unwrap();
        return Err(StructureError::NotDegenerate { witness, value: value.to_string() });
    }
    let dirs = kernel_directions(phi);
    if !dirs.is_empty() {
        let dec = reduce_variables(phi, &dirs);
        if !dec.verify(phi) {
            panic!("shape identity failed after variable reduction");
        }
        return Ok(dec);
    }
    match detect_form(phi)? {
        Some(dec) => {
            if !dec.verify(phi) {
                panic!("shape identity failed for detected form");
            }
            Ok(dec)
        }
        None => Err(StructureError::Unrepresentable(
            "no kernel direction and no validating plane".into(),
        )),
    }
}

/// Validates a user-supplied witness matrix and classifies φ(Ax) directly.
pub fn decomposition_from_matrix(
    phi: &Polynomial,
    a: LinearMap3,
) -> Result<Decomposition, StructureError> {
    check_preconditions(phi)?;
    let hess = hessian_vanishes(phi);
    if !hess.vanishes {
        let (witness, value) = hess.witness.unwrap();
        return Err(StructureError::NotDegenerate { witness, value: value.to_string() });
    }
    let composed = phi.compose_linear(&a);
    let dec = match (composed.depends_on(1), composed.depends_on(2)) {
        (false, false) => {
            let coeffs = composed
                .univariate_in(0)
                .expect("composed polynomial must be univariate");
            let nu = composed.min_degree_in(0);
            let q = Polynomial::from_univariate(&coeffs[nu as usize..], 0, 1);
            Decomposition { matrix: a, kind: DecompKind::OneVar { nu, q } }
        }
        (true, false) => {
            let psi = composed.shrink_nvars(2);
            Decomposition { matrix: a, kind: DecompKind::TwoVar { psi } }
        }
        (false, true) => {
            let a = a.with_swapped_columns(1, 2);
            let psi = phi.compose_linear(&a).shrink_nvars(2);
            Decomposition { matrix: a, kind: DecompKind::TwoVar { psi } }
        }
        (true, true) => {
            if composed.terms().any(|(m, _)| m.0[1] + m.0[2] > 1) {
                return Err(StructureError::Unrepresentable(
                    "supplied matrix witnesses neither a two-variable reduction nor the form shape"
                        .into(),
                ));
            }
            read_off_form(phi, a)?
        }
    };
    if !dec.verify(phi) {
        return Err(StructureError::Unrepresentable(
            "shape identity failed for the supplied matrix".into(),
        ));
    }
    Ok(dec)
}
