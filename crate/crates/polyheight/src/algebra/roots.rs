//! Real-root analysis for exact univariate polynomials: Yun square-free
//! decomposition, Sturm sequences, bisection isolation, and exact extraction
//! of rational and quadratic-irrational roots.

use super::poly::{AlgebraError, Polynomial};
use super::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Default isolating-interval width: 2^-32.
pub fn default_isolation_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1u64 << 32))
}

pub type UniPoly = Vec<Scalar>;

pub fn uni_deg(p: &[Scalar]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn uni_trim(mut p: UniPoly) -> UniPoly {
    while matches!(p.last(), Some(c) if c.is_zero()) {
        p.pop();
    }
    p
}

pub fn uni_is_zero(p: &[Scalar]) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn uni_eval(p: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

pub fn uni_eval_rat(p: &[Scalar], x: &BigRational) -> Scalar {
    uni_eval(p, &Scalar::from_rational(x.clone()))
}

pub fn uni_derivative(p: &[Scalar]) -> UniPoly {
    if p.len() <= 1 {
        return vec![];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &Scalar::from_int(k as i64))
        .collect()
}

fn uni_sub(a: &[Scalar], b: &[Scalar]) -> UniPoly {
    let n = a.len().max(b.len());
    let mut out = vec![Scalar::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    uni_trim(out)
}

fn uni_scale(a: &[Scalar], c: &Scalar) -> UniPoly {
    uni_trim(a.iter().map(|x| x * c).collect())
}

/// Euclidean division: returns (quotient, remainder).
pub fn uni_divmod(a: &[Scalar], b: &[Scalar]) -> (UniPoly, UniPoly) {
    let db = uni_deg(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut rem: UniPoly = a.to_vec();
    let mut quot = vec![Scalar::zero(); a.len().saturating_sub(db)];
    loop {
        let dr = match uni_deg(&rem) {
            Some(d) if d >= db => d,
            _ => break,
        };
        let factor = &rem[dr] / &lead;
        let shift = dr - db;
        quot[shift] = &quot[shift] + &factor;
        for (i, c) in b.iter().enumerate().take(db + 1) {
            rem[i + shift] = &rem[i + shift] - &(&factor * c);
        }
        rem[dr] = Scalar::zero();
    }
    (uni_trim(quot), uni_trim(rem))
}

/// Monic greatest common divisor.
pub fn uni_gcd(a: &[Scalar], b: &[Scalar]) -> UniPoly {
    let mut x = uni_trim(a.to_vec());
    let mut y = uni_trim(b.to_vec());
    while !uni_is_zero(&y) {
        let (_, r) = uni_divmod(&x, &y);
        x = y;
        y = r;
    }
    match uni_deg(&x) {
        Some(d) => {
            let lead = x[d].clone();
            uni_scale(&x, &lead.inv())
        }
        None => x,
    }
}

/// Yun square-free decomposition: `p = lc · ∏ factor_k ^ k` with the returned
/// factors monic, square-free and pairwise coprime.
pub fn squarefree_decomposition(p: &[Scalar]) -> Vec<(u32, UniPoly)> {
    let dp = uni_deg(p).expect("zero polynomial has no square-free decomposition");
    if dp == 0 {
        return vec![];
    }
    let deriv = uni_derivative(p);
    let a = uni_gcd(p, &deriv);
    if uni_deg(&a) == Some(0) {
        let lead = p[dp].clone();
        return vec![(1, uni_scale(p, &lead.inv()))];
    }
    let (mut b, _) = uni_divmod(p, &a);
    let (c0, _) = uni_divmod(&deriv, &a);
    let mut d = uni_sub(&c0, &uni_derivative(&b));
    let mut out = Vec::new();
    let mut i = 1u32;
    while uni_deg(&b).map_or(false, |deg| deg > 0) {
        let ai = uni_gcd(&b, &d);
        if uni_deg(&ai).map_or(false, |deg| deg > 0) {
            out.push((i, ai.clone()));
        }
        let (b_next, _) = uni_divmod(&b, &ai);
        let (c, _) = uni_divmod(&d, &ai);
        b = b_next;
        d = uni_sub(&c, &uni_derivative(&b));
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Sturm sequences and isolation
// ---------------------------------------------------------------------------

pub struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &[Scalar]) -> Self {
        let mut seq = Vec::new();
        let p = uni_trim(p.to_vec());
        assert!(!uni_is_zero(&p), "Sturm chain of the zero polynomial");
        let dp = uni_derivative(&p);
        seq.push(p);
        if !uni_is_zero(&dp) {
            seq.push(dp);
            loop {
                let n = seq.len();
                let (_, r) = uni_divmod(&seq[n - 2], &seq[n - 1]);
                if uni_is_zero(&r) {
                    break;
                }
                seq.push(uni_scale(&r, &(-Scalar::one())));
            }
        }
        SturmChain { seq }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        let signs: Vec<i32> = self
            .seq
            .iter()
            .map(|p| uni_eval_rat(p, x).sign())
            .filter(|s| *s != 0)
            .collect();
        count_changes(&signs)
    }

    fn variations_at_inf(&self, positive: bool) -> usize {
        let signs: Vec<i32> = self
            .seq
            .iter()
            .map(|p| {
                let d = uni_deg(p).unwrap();
                let lead = p[d].sign();
                if positive || d % 2 == 0 {
                    lead
                } else {
                    -lead
                }
            })
            .filter(|s| *s != 0)
            .collect();
        count_changes(&signs)
    }

    /// Number of distinct real roots in the half-open interval (lo, hi].
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations_at(lo) - self.variations_at(hi)
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_inf(false) - self.variations_at_inf(true)
    }
}

fn count_changes(signs: &[i32]) -> usize {
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Rational bound B with all real roots of p inside (-B, B).
pub fn root_bound(p: &[Scalar]) -> BigRational {
    let d = uni_deg(p).expect("zero polynomial");
    let lead_low = scalar_abs_lower(&p[d]);
    let mut max = BigRational::zero();
    for c in p.iter().take(d) {
        let m = scalar_abs_upper(c);
        if m > max {
            max = m;
        }
    }
    BigRational::one() + max / lead_low
}

/// Upper bound on |a + b sqrt(d)| as a rational.
fn scalar_abs_upper(s: &Scalar) -> BigRational {
    let a = s.rational_part().abs();
    let b = s.radical_part().abs();
    if b.is_zero() {
        a
    } else {
        let sq = BigInt::from((s.radicand() as f64).sqrt().ceil() as u64 + 1);
        a + b * BigRational::from_integer(sq)
    }
}

/// Positive lower bound on |s| for s != 0.
fn scalar_abs_lower(s: &Scalar) -> BigRational {
    if let Some(r) = s.as_rational() {
        return r.abs();
    }
    // |s| >= |norm(s)| / (|a| + |b| sqrt(d)) since norm = s * conj(s)
    let n = s.norm().abs();
    let upper = scalar_abs_upper(s);
    n / upper
}

/// Isolates the distinct real roots of a square-free polynomial.
///
/// Returns sorted intervals; a degenerate interval (lo == hi) marks an exact
/// rational root found during bisection.
pub fn isolate_real_roots(p: &[Scalar]) -> Vec<(BigRational, BigRational)> {
    let p = uni_trim(p.to_vec());
    if matches!(uni_deg(&p), None | Some(0)) {
        return vec![];
    }
    let chain = SturmChain::new(&p);
    let bound = root_bound(&p);
    let lo = -bound.clone();
    let hi = bound;
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), chain.count_in(&lo, &hi))];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(refine_to_isolation(&p, &chain, a, b)),
            _ => {
                let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
                if uni_eval_rat(&p, &mid).is_zero() {
                    out.push((mid.clone(), mid.clone()));
                    // exclude the exact root when recursing
                    let left = chain.count_in(&a, &mid);
                    if left > 1 {
                        stack.push((a, mid.clone(), left - 1));
                    } else if left == 1 {
                        // the only root in (a, mid] is mid itself
                    }
                    let right = chain.count_in(&mid, &b);
                    if right > 0 {
                        stack.push((mid, b, right));
                    }
                } else {
                    let left = chain.count_in(&a, &mid);
                    let right = n - left;
                    if left > 0 {
                        stack.push((a, mid.clone(), left));
                    }
                    if right > 0 {
                        stack.push((mid, b, right));
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Shrinks an interval known to contain exactly one root until the contained
/// root is strictly inside and endpoints are non-roots.
fn refine_to_isolation(
    p: &[Scalar],
    chain: &SturmChain,
    mut lo: BigRational,
    mut hi: BigRational,
) -> (BigRational, BigRational) {
    // a few bisection steps to tighten; detects exact rational hits
    for _ in 0..4 {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if uni_eval_rat(p, &mid).is_zero() {
            return (mid.clone(), mid);
        }
        if chain.count_in(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Bisects an isolating interval until `hi - lo <= width`.
pub fn refine_interval(
    p: &[Scalar],
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    if lo == hi {
        return (lo, hi);
    }
    let sl = uni_eval_rat(p, &lo).sign();
    debug_assert!(sl != 0, "left endpoint is a root");
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let sm = uni_eval_rat(p, &mid).sign();
        if sm == 0 {
            return (mid.clone(), mid);
        }
        if sm == sl {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Finds the unique rational root inside an isolating interval of a
/// rational-coefficient square-free polynomial, if one exists.
pub fn rational_root_in_interval(
    p: &[Scalar],
    lo: &BigRational,
    hi: &BigRational,
) -> Option<BigRational> {
    if lo == hi {
        return Some(lo.clone());
    }
    // primitive integer coefficients
    let mut den_lcm = BigInt::one();
    for c in p {
        let r = c.as_rational()?;
        den_lcm = den_lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&den_lcm / r.denom())
        })
        .collect();
    let dlead = uni_deg(p)?;
    let lead = ints[dlead].abs();
    // rationals with denominator <= lead differ by at least 1/lead^2
    let threshold = BigRational::new(BigInt::one(), BigInt::from(2) * &lead * &lead);
    let (mut a, mut b) = (lo.clone(), hi.clone());
    while &b - &a >= threshold {
        let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
        let v = uni_eval_rat(p, &mid);
        if v.is_zero() {
            return Some(mid);
        }
        // keep the sub-interval with the sign change
        let sa = uni_eval_rat(p, &a).sign();
        if v.sign() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let cand = simplest_rational_between(&a, &b);
    if uni_eval_rat(p, &cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

/// The rational of smallest denominator strictly between lo and hi.
pub fn simplest_rational_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi);
    if lo.is_negative() && hi.is_positive() {
        return BigRational::zero();
    }
    if !hi.is_positive() {
        return -simplest_rational_between(&-hi.clone(), &-lo.clone());
    }
    // 0 <= lo < hi
    simplest_nonneg(lo, hi)
}

fn simplest_nonneg(lo: &BigRational, hi: &BigRational) -> BigRational {
    let fl = lo.floor();
    let next_int = &fl + BigRational::one();
    if next_int < *hi {
        // an integer lies strictly inside (floor(lo) < lo always, or lo integer
        // in which case next_int > lo as well)
        return next_int;
    }
    if lo == &fl {
        // lo is an integer and hi <= lo + 1: take lo + 1/k for minimal k
        let gap = hi - lo;
        let k = gap.recip().floor() + BigRational::one();
        return lo + k.recip();
    }
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    let inner = simplest_nonneg(&frac_hi.recip(), &frac_lo.recip());
    fl + inner.recip()
}

// ---------------------------------------------------------------------------
// Root descriptions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum RootDesc {
    /// Exact rational root.
    Rational(BigRational),
    /// Exact root in a quadratic extension.
    Quadratic(Scalar),
    /// Irrational root beyond ℚ(√D), bracketed exactly.
    Interval { lo: BigRational, hi: BigRational },
}

impl RootDesc {
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self {
            RootDesc::Rational(r) => Some(Scalar::from_rational(r.clone())),
            RootDesc::Quadratic(s) => Some(s.clone()),
            RootDesc::Interval { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootInfo {
    pub desc: RootDesc,
    pub multiplicity: u32,
}

/// Real roots of a univariate polynomial with multiplicities, exact where the
/// root lies in ℚ or in the coefficient field's quadratic extension.
pub fn real_root_multiplicities(
    q: &Polynomial,
    var: usize,
) -> Result<Vec<RootInfo>, AlgebraError> {
    let coeffs = q
        .univariate_in(var)
        .expect("polynomial is not univariate in the requested variable");
    if uni_is_zero(&coeffs) {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (mult, factor) in squarefree_decomposition(&coeffs) {
        for desc in describe_real_roots(&factor) {
            out.push(RootInfo { desc, multiplicity: mult });
        }
    }
    out.sort_by(|a, b| root_sort_key(&a.desc).cmp(&root_sort_key(&b.desc)));
    Ok(out)
}

fn root_sort_key(d: &RootDesc) -> BigRational {
    match d {
        RootDesc::Rational(r) => r.clone(),
        RootDesc::Quadratic(s) => {
            BigRational::new(BigInt::from((s.to_f64() * 1e12) as i64), BigInt::from(10u64.pow(12)))
        }
        RootDesc::Interval { lo, hi } => (lo + hi) / BigRational::from_integer(BigInt::from(2)),
    }
}

/// Describes every real root of a square-free factor as exactly as possible.
pub fn describe_real_roots(factor: &[Scalar]) -> Vec<RootDesc> {
    let mut intervals = isolate_real_roots(factor);
    if intervals.is_empty() {
        return vec![];
    }
    let width = default_isolation_width();
    let mut out: Vec<Option<RootDesc>> = vec![None; intervals.len()];
    let all_rational = factor.iter().all(|c| c.is_rational());

    let mut remaining = factor.to_vec();
    if all_rational {
        // strip rational roots one at a time
        for (i, (lo, hi)) in intervals.iter().enumerate() {
            if let Some(r) = rational_root_in_interval(&remaining, lo, hi) {
                out[i] = Some(RootDesc::Rational(r.clone()));
                let lin = vec![
                    Scalar::from_rational(-r.clone()),
                    Scalar::one(),
                ];
                let (q, rem) = uni_divmod(&remaining, &lin);
                debug_assert!(uni_is_zero(&rem));
                remaining = q;
            }
        }
    }
    // a quadratic remainder yields exact quadratic-extension roots
    if uni_deg(&remaining) == Some(2) {
        let roots = quadratic_roots(&remaining);
        for root in roots {
            // match the exact root to its isolating interval
            for (i, (lo, hi)) in intervals.iter().enumerate() {
                if out[i].is_some() {
                    continue;
                }
                if scalar_in_interval(&root, lo, hi) {
                    out[i] = Some(RootDesc::Quadratic(root.clone()));
                    break;
                }
            }
        }
    } else if uni_deg(&remaining) == Some(1) {
        let r = -(&remaining[0] / &remaining[1]);
        for (i, (lo, hi)) in intervals.iter().enumerate() {
            if out[i].is_none() && scalar_in_interval(&r, lo, hi) {
                out[i] = Some(match r.as_rational() {
                    Some(rr) => RootDesc::Rational(rr.clone()),
                    None => RootDesc::Quadratic(r.clone()),
                });
                break;
            }
        }
    }
    for (i, slot) in out.iter_mut().enumerate() {
        if slot.is_none() {
            let (lo, hi) = refine_interval(factor, &intervals[i].0, &intervals[i].1, &width);
            intervals[i] = (lo.clone(), hi.clone());
            *slot = Some(if lo == hi {
                RootDesc::Rational(lo)
            } else {
                RootDesc::Interval { lo, hi }
            });
        }
    }
    out.into_iter().map(|o| o.unwrap()).collect()
}

fn scalar_in_interval(s: &Scalar, lo: &BigRational, hi: &BigRational) -> bool {
    if lo == hi {
        return s.as_rational().map_or(false, |r| r == lo);
    }
    let slo = Scalar::from_rational(lo.clone());
    let shi = Scalar::from_rational(hi.clone());
    (s - &slo).sign() > 0 && (s - &shi).sign() <= 0
}

/// Real roots of a degree-2 polynomial, exact in the coefficient field or a
/// quadratic extension of ℚ.
pub fn quadratic_roots(p: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(uni_deg(p), Some(2));
    let (c, b, a) = (&p[0], &p[1], &p[2]);
    let four = Scalar::from_int(4);
    let disc = &(b * b) - &(&four * &(a * c));
    match disc.sign() {
        s if s < 0 => vec![],
        0 => {
            // double root cannot arise from a square-free factor; handle anyway
            let half = Scalar::from_ratio(1, 2);
            vec![&(-b.clone()) * &(&half / a)]
        }
        _ => {
            let sq = if let Some(r) = disc.as_rational() {
                Scalar::sqrt_of_rational(r)
            } else {
                disc.sqrt_in_field()
            };
            match sq {
                Some(sq) => {
                    let two_a = &Scalar::from_int(2) * a;
                    let r1 = &(&(-b.clone()) + &sq) / &two_a;
                    let r2 = &(&(-b.clone()) - &sq) / &two_a;
                    vec![r1, r2]
                }
                None => vec![],
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn upoly(coeffs: &[i64]) -> UniPoly {
        coeffs.iter().map(|&c| Scalar::from_int(c)).collect()
    }

    #[test]
    fn squarefree_examples() {
        // (t-1)^2 (t+2) = t^3 - 3t + 2
        let p = upoly(&[2, -3, 0, 1]);
        let sf = squarefree_decomposition(&p);
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0].0, 1);
        assert_eq!(uni_deg(&sf[0].1), Some(1)); // t + 2
        assert_eq!(sf[1].0, 2);
        assert_eq!(uni_deg(&sf[1].1), Some(1)); // t - 1

        // t^4 - 2t^2 + 1 = (t^2-1)^2
        let p = upoly(&[1, 0, -2, 0, 1]);
        let sf = squarefree_decomposition(&p);
        assert_eq!(sf.len(), 1);
        assert_eq!(sf[0].0, 2);
        assert_eq!(uni_deg(&sf[0].1), Some(2));
    }

    #[test]
    fn multiplicity_degree_identity() {
        // sum over k of k * deg(s_k) = deg q
        for coeffs in [
            vec![2i64, -3, 0, 1],
            vec![1, 0, -2, 0, 1],
            vec![0, 0, 1, 3, 3, 1],
            vec![-6, 11, -6, 1],
        ] {
            let p = upoly(&coeffs);
            let dq = uni_deg(&p).unwrap();
            let total: usize = squarefree_decomposition(&p)
                .iter()
                .map(|(k, s)| *k as usize * uni_deg(s).unwrap())
                .sum();
            assert_eq!(total, dq);
        }
    }

    #[test]
    fn root_multiplicities_examples() {
        let q = Polynomial::parse("x1^3 - 3*x1 + 2", 1).unwrap(); // (t-1)^2 (t+2)
        let roots = real_root_multiplicities(&q, 0).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].desc, RootDesc::Rational(rat(-2, 1)));
        assert_eq!(roots[0].multiplicity, 1);
        assert_eq!(roots[1].desc, RootDesc::Rational(rat(1, 1)));
        assert_eq!(roots[1].multiplicity, 2);

        let q = Polynomial::parse("x1^2 + 1", 1).unwrap();
        assert!(real_root_multiplicities(&q, 0).unwrap().is_empty());

        let q = Polynomial::parse("x1^4 - 2*x1^2 + 1", 1).unwrap();
        let roots = real_root_multiplicities(&q, 0).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.multiplicity == 2));
    }

    #[test]
    fn quadratic_irrational_roots() {
        // t^2 - 2: roots ±sqrt(2)
        let q = Polynomial::parse("x1^2 - 2", 1).unwrap();
        let roots = real_root_multiplicities(&q, 0).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            match &r.desc {
                RootDesc::Quadratic(s) => {
                    assert_eq!(s.radicand(), 2);
                    let sq = s * s;
                    assert_eq!(sq.as_rational().unwrap(), &rat(2, 1));
                }
                other => panic!("expected quadratic root, got {other:?}"),
            }
        }
    }

    #[test]
    fn cubic_irrational_gets_interval() {
        // t^3 - 2: single real root 2^(1/3), not quadratic
        let q = Polynomial::parse("x1^3 - 2", 1).unwrap();
        let roots = real_root_multiplicities(&q, 0).unwrap();
        assert_eq!(roots.len(), 1);
        match &roots[0].desc {
            RootDesc::Interval { lo, hi } => {
                let cbrt2 = 2f64.powf(1.0 / 3.0);
                let lo_f = lo.numer().to_string().parse::<f64>().unwrap()
                    / lo.denom().to_string().parse::<f64>().unwrap();
                let hi_f = hi.numer().to_string().parse::<f64>().unwrap()
                    / hi.denom().to_string().parse::<f64>().unwrap();
                assert!(lo_f < cbrt2 && cbrt2 < hi_f);
                assert!(hi_f - lo_f <= 2f64.powi(-32) * 1.0001);
            }
            other => panic!("expected interval, got {other:?}"),
        }
    }

    #[test]
    fn sturm_counts() {
        // (t-1)(t-2)(t-3)
        let p = upoly(&[-6, 11, -6, 1]);
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count_all(), 3);
        assert_eq!(chain.count_in(&rat(0, 1), &rat(5, 2)), 2);
    }

    #[test]
    fn simplest_rational() {
        let r = simplest_rational_between(&rat(2, 7), &rat(1, 3));
        assert_eq!(r, rat(3, 10));
        let r = simplest_rational_between(&rat(-1, 2), &rat(1, 5));
        assert_eq!(r, rat(0, 1));
        let r = simplest_rational_between(&rat(7, 5), &rat(3, 2));
        assert_eq!(r, rat(10, 7));
    }

    #[test]
    fn isolation_alternates_sign() {
        // simple roots: sign of p at interval endpoints differs
        let p = upoly(&[-6, 11, -6, 1]);
        for (lo, hi) in isolate_real_roots(&p) {
            if lo != hi {
                let a = uni_eval_rat(&p, &lo).sign();
                let b = uni_eval_rat(&p, &hi).sign();
                assert_eq!(a * b, -1);
            }
        }
    }
}
