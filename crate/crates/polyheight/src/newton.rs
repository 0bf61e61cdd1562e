//! Newton polyhedra of polynomials at the origin: the upward-closed hull
//! conv(⋃ α+ℝⁿ₊), its irredundant facet description, the Newton distance,
//! and the principal face / principal part.
//!
//! Facets are found by exact candidate enumeration: triples of support
//! points, pairs combined with a recession axis, and the coordinate facets
//! tᵢ ≥ min αᵢ, each validated against the whole support and kept only when
//! its tight set has facet dimension. Supports here are tiny, so this stays
//! well inside budget while keeping every number rational.

use crate::algebra::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NewtonError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial has a nonzero constant term")]
    NonzeroConstantTerm,
}

/// Exponent vectors of the nonzero terms (the Taylor support).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    pub dim: u8,
    pub points: Vec<[u32; 3]>,
}

impl SupportSet {
    pub fn new(dim: u8, mut points: Vec<[u32; 3]>) -> Self {
        assert!((2..=3).contains(&dim));
        points.sort();
        points.dedup();
        for p in &points {
            for v in dim as usize..3 {
                assert_eq!(p[v], 0, "support point uses variable outside dim");
            }
        }
        SupportSet { dim, points }
    }
}

/// Supporting halfspace `normal · t >= offset` with primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: [i64; 3],
    pub offset: i64,
}

impl Facet {
    /// Nontrivial facets have at least two positive normal components or a
    /// positive offset along a single axis.
    pub fn is_coordinate(&self) -> bool {
        self.normal.iter().filter(|&&w| w != 0).count() == 1
    }

    fn dot_point(&self, p: &[u32; 3]) -> i64 {
        (0..3).map(|i| self.normal[i] * p[i] as i64).sum()
    }

    fn dot_rational(&self, t: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..t.len().min(3) {
            acc += BigRational::from_integer(BigInt::from(self.normal[i])) * &t[i];
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    pub dim: u8,
    pub generators: SupportSet,
    pub facets: Vec<Facet>,
    pub vertices: Vec<[u32; 3]>,
}

/// Data attached to the principal face at (d, ..., d).
#[derive(Clone, Debug)]
pub struct PrincipalData {
    pub distance: BigRational,
    /// Indices into the polyhedron's facet list that are tight at (d,...,d).
    pub tight_facets: Vec<usize>,
    /// Support points lying on the principal face.
    pub face_points: Vec<[u32; 3]>,
    pub face_dim: usize,
    pub compact: bool,
    /// Weight κ with κ·α = 1 on the face (2D compact edge only).
    pub kappa: Option<[BigRational; 2]>,
    /// Homogeneous distance 1/(κ₁+κ₂) (2D compact edge only).
    pub homogeneous_distance: Option<BigRational>,
}

/// The Taylor support 𝒯(φ) = {α ≠ 0 : c_α ≠ 0}.
pub fn taylor_support(phi: &Polynomial) -> Result<SupportSet, NewtonError> {
    if phi.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    if !phi.constant_term().is_zero() {
        return Err(NewtonError::NonzeroConstantTerm);
    }
    let points: Vec<[u32; 3]> = phi.terms().map(|(m, _)| m.0).collect();
    Ok(SupportSet::new(phi.nvars().max(2), points))
}

/// Builds the complete irredundant facet description of conv(s) + ℝⁿ₊.
pub fn build_polyhedron(s: &SupportSet) -> NewtonPolyhedron {
    assert!(!s.points.is_empty(), "empty support");
    let facets = if s.dim == 2 { facets_2d(s) } else { facets_3d(s) };
    let vertices = extreme_points(s, &facets);
    NewtonPolyhedron { dim: s.dim, generators: s.clone(), facets, vertices }
}

fn coordinate_facets(s: &SupportSet) -> Vec<Facet> {
    (0..s.dim as usize)
        .map(|i| {
            let min = s.points.iter().map(|p| p[i]).min().unwrap() as i64;
            let mut normal = [0i64; 3];
            normal[i] = 1;
            Facet { normal, offset: min }
        })
        .collect()
}

fn facets_2d(s: &SupportSet) -> Vec<Facet> {
    let mut facets = coordinate_facets(s);
    // Pareto-minimal staircase, sorted by first coordinate
    let mut frontier: Vec<[u32; 3]> = s
        .points
        .iter()
        .filter(|p| {
            !s.points
                .iter()
                .any(|q| q != *p && q[0] <= p[0] && q[1] <= p[1])
        })
        .cloned()
        .collect();
    frontier.sort();
    // lower convex chain over the frontier
    let mut hull: Vec<[u32; 3]> = Vec::new();
    for p in frontier {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep b only if a→b→p turns counterclockwise (b below segment a-p)
            let cross = (b[0] as i64 - a[0] as i64) * (p[1] as i64 - a[1] as i64)
                - (b[1] as i64 - a[1] as i64) * (p[0] as i64 - a[0] as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut n = [a[1] as i64 - b[1] as i64, b[0] as i64 - a[0] as i64, 0];
        debug_assert!(n[0] > 0 && n[1] > 0);
        let g = gcd(n[0], n[1]);
        n[0] /= g;
        n[1] /= g;
        let offset = n[0] * a[0] as i64 + n[1] * a[1] as i64;
        facets.push(Facet { normal: n, offset });
    }
    facets.sort();
    facets.dedup();
    facets
}

fn facets_3d(s: &SupportSet) -> Vec<Facet> {
    let pts = &s.points;
    let mut candidates: BTreeSet<Facet> = coordinate_facets(s).into_iter().collect();

    let add_candidate = |n: [i64; 3]| {
        let mut n = n;
        if n == [0, 0, 0] {
            return None;
        }
        if n.iter().all(|&w| w <= 0) {
            n = [-n[0], -n[1], -n[2]];
        }
        if n.iter().any(|&w| w < 0) {
            return None;
        }
        let g = n.iter().filter(|&&w| w != 0).fold(0i64, |acc, &w| gcd(acc, w.abs()));
        let n = [n[0] / g, n[1] / g, n[2] / g];
        let offset = pts
            .iter()
            .map(|p| (0..3).map(|i| n[i] * p[i] as i64).sum::<i64>())
            .min()
            .unwrap();
        Some(Facet { normal: n, offset })
    };

    let axes: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let u = diff(&pts[j], &pts[i]);
            for k in j + 1..pts.len() {
                let v = diff(&pts[k], &pts[i]);
                if let Some(f) = add_candidate(cross(u, v)) {
                    candidates.insert(f);
                }
            }
            for axis in axes {
                if let Some(f) = add_candidate(cross(u, axis)) {
                    candidates.insert(f);
                }
            }
        }
    }

    // keep only genuine facets: the tight set must span dimension 2
    let mut facets: Vec<Facet> = candidates
        .into_iter()
        .filter(|f| face_dimension(s, std::slice::from_ref(f)) == 2)
        .collect();
    facets.sort();
    facets
}

/// Affine dimension of the face cut out by a set of tight inequalities:
/// span of (tight support points − base) together with the recession axes
/// orthogonal to every listed normal.
fn face_dimension(s: &SupportSet, tight: &[Facet]) -> usize {
    let tight_points: Vec<&[u32; 3]> = s
        .points
        .iter()
        .filter(|p| tight.iter().all(|f| f.dot_point(p) == f.offset))
        .collect();
    if tight_points.is_empty() {
        return 0;
    }
    let base = tight_points[0];
    let mut rows: Vec<[i64; 3]> = tight_points[1..].iter().map(|p| diff(p, base)).collect();
    for i in 0..s.dim as usize {
        if tight.iter().all(|f| f.normal[i] == 0) {
            let mut e = [0i64; 3];
            e[i] = 1;
            rows.push(e);
        }
    }
    int_rank(&rows)
}

fn extreme_points(s: &SupportSet, facets: &[Facet]) -> Vec<[u32; 3]> {
    s.points
        .iter()
        .filter(|p| {
            let normals: Vec<[i64; 3]> = facets
                .iter()
                .filter(|f| f.dot_point(p) == f.offset)
                .map(|f| f.normal)
                .collect();
            int_rank(&normals) == s.dim as usize
        })
        .cloned()
        .collect()
}

fn diff(a: &[u32; 3], b: &[u32; 3]) -> [i64; 3] {
    [
        a[0] as i64 - b[0] as i64,
        a[1] as i64 - b[1] as i64,
        a[2] as i64 - b[2] as i64,
    ]
}

fn cross(u: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 { 1 } else { a }
}

/// Rank of a small integer matrix via fraction-free elimination.
fn int_rank(rows: &[[i64; 3]]) -> usize {
    let mut m: Vec<[i128; 3]> = rows
        .iter()
        .map(|r| [r[0] as i128, r[1] as i128, r[2] as i128])
        .collect();
    let mut rank = 0;
    for col in 0..3 {
        let pivot = (rank..m.len()).find(|&r| m[r][col] != 0);
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let pv = m[rank][col];
        for r in rank + 1..m.len() {
            let factor = m[r][col];
            if factor != 0 {
                for c in 0..3 {
                    m[r][c] = m[r][c] * pv - m[rank][c] * factor;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl NewtonPolyhedron {
    /// Membership via the facet inequalities.
    pub fn contains(&self, t: &[BigRational]) -> bool {
        self.facets.iter().all(|f| {
            f.dot_rational(t) >= BigRational::from_integer(BigInt::from(f.offset))
        })
    }

    /// Newton distance: least t with (t,...,t) in the polyhedron.
    pub fn distance(&self) -> BigRational {
        self.facets
            .iter()
            .map(|f| {
                let s: i64 = f.normal.iter().take(self.dim as usize).sum();
                debug_assert!(s > 0);
                BigRational::new(BigInt::from(f.offset), BigInt::from(s))
            })
            .max()
            .expect("polyhedron with no facets")
    }

    /// The minimal-dimension face containing (d, ..., d).
    pub fn principal_face(&self, d: &BigRational) -> PrincipalData {
        let diag: Vec<BigRational> = (0..self.dim as usize).map(|_| d.clone()).collect();
        let tight_facets: Vec<usize> = self
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                f.dot_rational(&diag) == BigRational::from_integer(BigInt::from(f.offset))
            })
            .map(|(i, _)| i)
            .collect();
        assert!(!tight_facets.is_empty(), "(d,...,d) is not on the boundary");
        let tight: Vec<Facet> = tight_facets.iter().map(|&i| self.facets[i].clone()).collect();
        let face_points: Vec<[u32; 3]> = self
            .generators
            .points
            .iter()
            .filter(|p| tight.iter().all(|f| f.dot_point(p) == f.offset))
            .cloned()
            .collect();
        let face_dim = face_dimension(&self.generators, &tight);
        let compact = (0..self.dim as usize)
            .all(|i| tight.iter().any(|f| f.normal[i] != 0));

        let (kappa, homogeneous_distance) = if self.dim == 2 && compact && face_dim == 1 {
            // the edge lies on a unique line κ·t = 1
            debug_assert_eq!(tight.len(), 1);
            let f = &tight[0];
            debug_assert!(f.offset > 0);
            let c = BigRational::from_integer(BigInt::from(f.offset));
            let k0 = BigRational::from_integer(BigInt::from(f.normal[0])) / &c;
            let k1 = BigRational::from_integer(BigInt::from(f.normal[1])) / &c;
            let dh = (&k0 + &k1).recip();
            (Some([k0, k1]), Some(dh))
        } else {
            (None, None)
        };

        PrincipalData {
            distance: d.clone(),
            tight_facets,
            face_points,
            face_dim,
            compact,
            kappa,
            homogeneous_distance,
        }
    }
}

/// Sum of the terms of φ supported on the principal face.
pub fn principal_part(phi: &Polynomial, n: &NewtonPolyhedron, pd: &PrincipalData) -> Polynomial {
    let tight: Vec<&Facet> = pd.tight_facets.iter().map(|&i| &n.facets[i]).collect();
    Polynomial::from_terms(
        phi.nvars(),
        phi.terms().filter_map(|(m, c)| {
            if tight.iter().all(|f| f.dot_point(&m.0) == f.offset) {
                Some((*m, c.clone()))
            } else {
                None
            }
        }),
    )
}

/// Convenience: support → polyhedron → distance → principal data, in one call.
pub fn analyze_polyhedron(phi: &Polynomial) -> Result<(NewtonPolyhedron, PrincipalData), NewtonError> {
    let s = taylor_support(phi)?;
    let n = build_polyhedron(&s);
    let d = n.distance();
    let pd = n.principal_face(&d);
    Ok((n, pd))
}

// -- JSON mirror ------------------------------------------------------------

#[derive(Serialize)]
pub struct PolyhedronJson {
    pub generators: Vec<[u32; 3]>,
    pub facets: Vec<FacetJson>,
    pub distance: String,
    pub principal_face_points: Vec<[u32; 3]>,
    pub face_dim: usize,
    pub compact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneous_distance: Option<String>,
}

#[derive(Serialize)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub offset: String,
}

impl PolyhedronJson {
    pub fn new(n: &NewtonPolyhedron, pd: &PrincipalData) -> Self {
        PolyhedronJson {
            generators: n.generators.points.clone(),
            facets: n
                .facets
                .iter()
                .map(|f| FacetJson {
                    normal: f.normal[..n.dim as usize]
                        .iter()
                        .map(|w| w.to_string())
                        .collect(),
                    offset: f.offset.to_string(),
                })
                .collect(),
            distance: pd.distance.to_string(),
            principal_face_points: pd.face_points.clone(),
            face_dim: pd.face_dim,
            compact: pd.compact,
            kappa: pd.kappa.as_ref().map(|k| [k[0].to_string(), k[1].to_string()]),
            homogeneous_distance: pd.homogeneous_distance.as_ref().map(|d| d.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Scalar;

    fn support3(points: &[[u32; 3]]) -> SupportSet {
        SupportSet::new(3, points.to_vec())
    }

    fn support2(points: &[[u32; 2]]) -> SupportSet {
        SupportSet::new(2, points.iter().map(|p| [p[0], p[1], 0]).collect())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn support_of_examples() {
        let phi = Polynomial::parse("x1^2*x2", 3).unwrap();
        let s = taylor_support(&phi).unwrap();
        assert_eq!(s.points, vec![[2, 1, 0]]);

        let phi = Polynomial::parse("x1^3+x1^2*x2+x1^4*x3", 3).unwrap();
        let s = taylor_support(&phi).unwrap();
        assert_eq!(s.points, vec![[2, 1, 0], [3, 0, 0], [4, 0, 1]]);

        let phi = Polynomial::parse("x2-x1^2", 2).unwrap().pow(2);
        let s = taylor_support(&phi).unwrap();
        assert_eq!(s.points, vec![[0, 2, 0], [2, 1, 0], [4, 0, 0]]);

        assert!(matches!(
            taylor_support(&Polynomial::zero(3)),
            Err(NewtonError::ZeroPolynomial)
        ));
        assert!(matches!(
            taylor_support(&Polynomial::parse("1+x1", 3).unwrap()),
            Err(NewtonError::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn single_point_polyhedron() {
        let n = build_polyhedron(&support3(&[[3, 0, 0]]));
        // nontrivial facet t1 >= 3 plus coordinate facets t2 >= 0, t3 >= 0
        assert_eq!(n.facets.len(), 3);
        assert!(n.facets.contains(&Facet { normal: [1, 0, 0], offset: 3 }));
        assert!(n.facets.contains(&Facet { normal: [0, 1, 0], offset: 0 }));
        assert!(n.facets.contains(&Facet { normal: [0, 0, 1], offset: 0 }));
        assert_eq!(n.distance(), rat(3, 1));
    }

    #[test]
    fn form_case_polyhedron() {
        // support {(ν2,1,0),(ν1,0,0),(ν3,0,1)} with (ν1,ν2,ν3)=(2,3,3):
        // the only nontrivial facet is t1 >= 2
        let n = build_polyhedron(&support3(&[[3, 1, 0], [2, 0, 0], [3, 0, 1]]));
        let nontrivial: Vec<&Facet> = n.facets.iter().filter(|f| !f.is_coordinate() || f.offset > 0).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0], &Facet { normal: [1, 0, 0], offset: 2 });
        assert_eq!(n.distance(), rat(2, 1));
    }

    #[test]
    fn staircase_2d() {
        let n = build_polyhedron(&support2(&[[0, 2], [2, 1], [4, 0]]));
        assert!(n.facets.contains(&Facet { normal: [1, 2, 0], offset: 4 }));
        assert_eq!(n.distance(), rat(4, 3));

        let n = build_polyhedron(&support2(&[[2, 1], [0, 4]]));
        assert_eq!(n.distance(), rat(8, 5));
    }

    #[test]
    fn principal_face_cases() {
        // support of x1^2 x2: principal face is the 2-dim facet t1 = 2
        let n = build_polyhedron(&support3(&[[2, 1, 0]]));
        let d = n.distance();
        assert_eq!(d, rat(2, 1));
        let pd = n.principal_face(&d);
        assert!(!pd.compact);
        assert_eq!(pd.face_dim, 2);

        // 2D vertex case
        let n = build_polyhedron(&support2(&[[2, 2]]));
        let d = n.distance();
        assert_eq!(d, rat(2, 1));
        let pd = n.principal_face(&d);
        assert!(pd.compact);
        assert_eq!(pd.face_dim, 0);
        assert_eq!(pd.face_points, vec![[2, 2, 0]]);

        // 2D compact edge with weight
        let n = build_polyhedron(&support2(&[[0, 2], [2, 1], [4, 0]]));
        let d = n.distance();
        let pd = n.principal_face(&d);
        assert!(pd.compact);
        assert_eq!(pd.face_dim, 1);
        let kappa = pd.kappa.unwrap();
        assert_eq!(kappa, [rat(1, 4), rat(1, 2)]);
        assert_eq!(pd.homogeneous_distance.unwrap(), rat(4, 3));
    }

    #[test]
    fn principal_part_examples() {
        // φ = x1^2 + x2^3 in 2D: both points on the compact edge
        let phi = Polynomial::parse("x1^2+x2^3", 2).unwrap();
        let (n, pd) = analyze_polyhedron(&phi).unwrap();
        assert_eq!(pd.distance, rat(6, 5));
        assert_eq!(principal_part(&phi, &n, &pd), phi);

        let phi = Polynomial::parse("x1^2*x2^2", 2).unwrap();
        let (n, pd) = analyze_polyhedron(&phi).unwrap();
        assert_eq!(principal_part(&phi, &n, &pd), phi);

        let phi = Polynomial::parse("x2^2+x1^9", 2).unwrap();
        let (n, pd) = analyze_polyhedron(&phi).unwrap();
        assert_eq!(pd.distance, rat(18, 11));
        assert_eq!(principal_part(&phi, &n, &pd), phi);
    }

    #[test]
    fn membership_basics() {
        let n = build_polyhedron(&support3(&[[2, 1, 0], [0, 3, 0]]));
        assert!(n.contains(&[rat(2, 1), rat(1, 1), rat(0, 1)]));
        assert!(n.contains(&[rat(5, 1), rat(5, 1), rat(5, 1)]));
        assert!(!n.contains(&[rat(0, 1), rat(0, 1), rat(5, 1)]));
    }

    #[test]
    fn permutation_equivariance() {
        let pts = [[2, 1, 0], [0, 3, 1], [4, 0, 2]];
        let n = build_polyhedron(&support3(&pts));
        let permuted: Vec<[u32; 3]> = pts.iter().map(|p| [p[2], p[0], p[1]]).collect();
        let np = build_polyhedron(&SupportSet::new(3, permuted));
        assert_eq!(n.distance(), np.distance());
        assert_eq!(n.facets.len(), np.facets.len());
    }

    #[test]
    fn monotonicity_of_distance() {
        let base = vec![[3, 0, 0], [0, 4, 0], [0, 0, 5]];
        let n0 = build_polyhedron(&support3(&base));
        let d0 = n0.distance();
        let mut bigger = base.clone();
        bigger.push([1, 1, 0]);
        let n1 = build_polyhedron(&support3(&bigger));
        assert!(n1.distance() <= d0);
    }

    #[test]
    fn diagonal_point_is_on_boundary() {
        let n = build_polyhedron(&support3(&[[2, 1, 0], [0, 0, 3], [1, 2, 2]]));
        let d = n.distance();
        let diag = vec![d.clone(), d.clone(), d.clone()];
        assert!(n.contains(&diag));
        let pd = n.principal_face(&d);
        assert!(!pd.tight_facets.is_empty());
        let _ = Scalar::zero();
    }
}
