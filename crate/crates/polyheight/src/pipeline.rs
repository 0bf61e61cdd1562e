//! End-to-end analysis: decomposition → adapted chart → height → exponents.

use crate::adapt::{
    adapt_3d, exponent_report, hessian_rank_at_origin, AdaptError, AdaptedChart, ExponentReport,
    HeightReport,
};
use crate::algebra::{LinearMap3, Polynomial};
use crate::newton::{analyze_polyhedron, NewtonError, NewtonPolyhedron, PrincipalData};
use crate::structure::{
    decompose, decomposition_from_matrix, hessian_vanishes, Decomposition, HessianReport,
    StructureError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Adapt(#[from] AdaptError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

/// Complete analysis of one polynomial.
pub struct Analysis {
    pub phi: Polynomial,
    pub hessian: HessianReport,
    pub decomposition: Decomposition,
    pub chart: AdaptedChart,
    pub height: HeightReport,
    pub exponents: ExponentReport,
    pub rank_at_origin: usize,
    pub newton: NewtonPolyhedron,
    pub principal: PrincipalData,
}

pub fn analyze(phi: &Polynomial) -> Result<Analysis, AnalyzeError> {
    let decomposition = decompose(phi)?;
    finish(phi, decomposition)
}

/// Analysis with a user-supplied witness matrix instead of the search.
pub fn analyze_with_matrix(phi: &Polynomial, a: LinearMap3) -> Result<Analysis, AnalyzeError> {
    let decomposition = decomposition_from_matrix(phi, a)?;
    finish(phi, decomposition)
}

fn finish(phi: &Polynomial, decomposition: Decomposition) -> Result<Analysis, AnalyzeError> {
    let hessian = hessian_vanishes(phi);
    let (newton, principal) = analyze_polyhedron(phi)?;
    let (chart, height) = adapt_3d(phi, &decomposition)?;
    let rank_at_origin = hessian_rank_at_origin(phi);
    let exponents = exponent_report(&height.height, height.nu, rank_at_origin);
    Ok(Analysis {
        phi: phi.clone(),
        hessian,
        decomposition,
        chart,
        height,
        exponents,
        rank_at_origin,
        newton,
        principal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::CaseTag;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn analyze_form_example() {
        let phi = Polynomial::parse("x1^3+x1^2*x2+x1^4*x3", 3).unwrap();
        let a = analyze(&phi).unwrap();
        assert!(a.hessian.vanishes);
        assert_eq!(a.height.case, CaseTag::FormCase2);
        assert_eq!(a.height.height, rat(2, 1));
        assert_eq!(a.height.nu, 0);
        assert_eq!(a.exponents.beta, rat(1, 2));
        assert_eq!(a.exponents.p_s, rat(2, 1));
    }

    #[test]
    fn analyze_with_identity_matrix() {
        let phi = Polynomial::parse("x1^2*x2^2", 3).unwrap();
        let a = analyze_with_matrix(&phi, LinearMap3::identity()).unwrap();
        assert_eq!(a.height.case, CaseTag::TwoVar);
        assert_eq!(a.height.height, rat(2, 1));
        assert_eq!(a.height.nu, 1);
    }

    #[test]
    fn analyze_rejects_nondegenerate() {
        let phi = Polynomial::parse("x1^2+x2^2+x3^2", 3).unwrap();
        assert!(matches!(
            analyze(&phi),
            Err(AnalyzeError::Structure(StructureError::NotDegenerate { .. }))
        ));
    }
}
