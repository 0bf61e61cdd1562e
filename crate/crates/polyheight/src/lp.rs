//! Exact-rational linear programming used as an independent oracle for the
//! Newton polyhedron: membership of a point in conv(points) + ℝⁿ₊ and the
//! exact Newton distance, both by two-phase simplex with Bland's rule.
//!
//! This is deliberately a second code path: nothing here is shared with the
//! facet-enumeration hull in `newton`, so the two can check each other.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// min c·x subject to A x = b, x >= 0, all data exact rationals.
struct Simplex {
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

enum LpOutcome {
    Optimal(BigRational),
    Infeasible,
}

impl Simplex {
    /// `a` is m×n with `b >= 0`; artificial columns are appended internally.
    fn new(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Self {
        let m = a.len();
        let n = if m > 0 { a[0].len() } else { 0 };
        for i in 0..m {
            if b[i].is_negative() {
                for x in a[i].iter_mut() {
                    *x = -x.clone();
                }
                b[i] = -b[i].clone();
            }
        }
        // append identity artificials
        for (i, row) in a.iter_mut().enumerate() {
            for j in 0..m {
                row.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
        }
        let basis = (n..n + m).collect();
        Simplex { a, b, basis, ncols: n + m }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pv = self.a[row][col].clone();
        for x in self.a[row].iter_mut() {
            *x /= &pv;
        }
        self.b[row] /= &pv;
        for r in 0..self.a.len() {
            if r == row {
                continue;
            }
            let factor = self.a[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.ncols {
                let delta = &factor * &self.a[row][c];
                self.a[r][c] -= delta;
            }
            let delta = &factor * &self.b[row];
            self.b[r] -= delta;
        }
        self.basis[row] = col;
    }

    /// Runs simplex for cost vector `cost` (length ncols), allowing only
    /// columns with `allowed(j)`. Returns the optimal objective value.
    fn optimize(
        &mut self,
        cost: &[BigRational],
        allowed: impl Fn(usize) -> bool,
    ) -> BigRational {
        loop {
            // reduced costs r_j = c_j - c_B · B^{-1} A_j on the current tableau
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !cost[bi].is_zero() {
                        r -= &cost[bi] * &self.a[i][j];
                    }
                }
                if r.is_negative() {
                    entering = Some(j); // Bland: smallest index
                    break;
                }
            }
            let Some(col) = entering else { break };
            // ratio test, Bland tie-break on smallest basis variable
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.a.len() {
                if self.a[i][col].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][col];
                    match &leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < *lr
                                || (ratio == *lr && self.basis[i] < self.basis[*li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                // unbounded: cannot happen for our bounded feasibility problems
                panic!("unbounded linear program");
            };
            self.pivot(row, col);
        }
        let mut obj = BigRational::zero();
        for (i, &bi) in self.basis.iter().enumerate() {
            obj += &cost[bi] * &self.b[i];
        }
        obj
    }

    /// Phase 1: drive the artificials to zero. Returns false when infeasible.
    fn phase1(&mut self, n_real: usize) -> bool {
        let cost: Vec<BigRational> = (0..self.ncols)
            .map(|j| if j >= n_real { BigRational::one() } else { BigRational::zero() })
            .collect();
        let opt = self.optimize(&cost, |_| true);
        opt.is_zero()
    }
}

fn solve(
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    cost: Vec<BigRational>,
) -> LpOutcome {
    let n_real = if a.is_empty() { 0 } else { a[0].len() };
    let mut s = Simplex::new(a, b);
    if !s.phase1(n_real) {
        return LpOutcome::Infeasible;
    }
    let mut full_cost = cost;
    full_cost.resize(s.ncols, BigRational::zero());
    // artificials may stay basic at zero; they are barred from re-entering
    let opt = s.optimize(&full_cost, |j| j < n_real);
    LpOutcome::Optimal(opt)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Feasibility oracle: is `t` in conv(points) + ℝⁿ₊ ?
///
/// Solves  Σ λ_i α_i + s = t,  Σ λ_i = 1,  λ, s >= 0.
pub fn lp_contains(points: &[[u32; 3]], dim: usize, t: &[BigRational]) -> bool {
    let m = points.len();
    let nvar = m + dim;
    let mut a = Vec::with_capacity(dim + 1);
    let mut b = Vec::with_capacity(dim + 1);
    for j in 0..dim {
        let mut row = vec![BigRational::zero(); nvar];
        for (i, p) in points.iter().enumerate() {
            row[i] = rat(p[j] as i64);
        }
        row[m + j] = BigRational::one();
        a.push(row);
        b.push(t[j].clone());
    }
    let mut row = vec![BigRational::zero(); nvar];
    for x in row.iter_mut().take(m) {
        *x = BigRational::one();
    }
    a.push(row);
    b.push(BigRational::one());
    matches!(
        solve(a, b, vec![BigRational::zero(); nvar]),
        LpOutcome::Optimal(_)
    )
}

/// Exact Newton distance by LP: min d with (d,...,d) in conv(points) + ℝⁿ₊.
///
/// Solves  Σ λ_i α_i + s - d·1 = 0,  Σ λ_i = 1,  λ, s, d >= 0, minimizing d.
pub fn lp_distance(points: &[[u32; 3]], dim: usize) -> BigRational {
    let m = points.len();
    let nvar = m + dim + 1;
    let dcol = m + dim;
    let mut a = Vec::with_capacity(dim + 1);
    let mut b = Vec::with_capacity(dim + 1);
    for j in 0..dim {
        let mut row = vec![BigRational::zero(); nvar];
        for (i, p) in points.iter().enumerate() {
            row[i] = rat(p[j] as i64);
        }
        row[m + j] = BigRational::one();
        row[dcol] = -BigRational::one();
        a.push(row);
        b.push(BigRational::zero());
    }
    let mut row = vec![BigRational::zero(); nvar];
    for x in row.iter_mut().take(m) {
        *x = BigRational::one();
    }
    a.push(row);
    b.push(BigRational::one());
    let mut cost = vec![BigRational::zero(); nvar];
    cost[dcol] = BigRational::one();
    match solve(a, b, cost) {
        LpOutcome::Optimal(v) => v,
        LpOutcome::Infeasible => unreachable!("distance LP is always feasible"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn membership_simple() {
        let pts = [[3, 0, 0]];
        assert!(lp_contains(&pts, 3, &[r(3, 1), r(0, 1), r(0, 1)]));
        assert!(lp_contains(&pts, 3, &[r(4, 1), r(2, 1), r(1, 1)]));
        assert!(!lp_contains(&pts, 3, &[r(2, 1), r(5, 1), r(5, 1)]));
    }

    #[test]
    fn membership_convex_combination() {
        // midpoint of (2,0,0) and (0,2,0) is in the hull; (0.9,0.9,0) is not
        let pts = [[2, 0, 0], [0, 2, 0]];
        assert!(lp_contains(&pts, 3, &[r(1, 1), r(1, 1), r(0, 1)]));
        assert!(!lp_contains(&pts, 3, &[r(9, 10), r(9, 10), r(0, 1)]));
    }

    #[test]
    fn distance_matches_known_values() {
        assert_eq!(lp_distance(&[[3, 0, 0]], 3), r(3, 1));
        assert_eq!(
            lp_distance(&[[0, 2, 0], [2, 1, 0], [4, 0, 0]], 2),
            r(4, 3)
        );
        assert_eq!(lp_distance(&[[2, 1, 0], [0, 4, 0]], 2), r(8, 5));
        // form-shape support with ν = (2,3,3)
        assert_eq!(
            lp_distance(&[[3, 1, 0], [2, 0, 0], [3, 0, 1]], 3),
            r(2, 1)
        );
    }
}
