//! Small exact linear-algebra helpers over [`Scalar`].

use super::scalar::Scalar;

/// Rank by Gaussian elimination.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..ncols {
                    let delta = &f * &m[r][cc];
                    m[i][cc] = &m[i][cc] - &delta;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Basis of the kernel {v : Mv = 0} for an n×3 matrix, via reduced row
/// echelon form; free variables set to 1 in index order.
pub fn kernel3(rows: &[[Scalar; 3]]) -> Vec<[Scalar; 3]> {
    let mut m: Vec<[Scalar; 3]> = rows.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..3 {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..3 {
                    let delta = &f * &m[r][cc];
                    m[i][cc] = &m[i][cc] - &delta;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..3 {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        v[free] = Scalar::one();
        for &(pr, pc) in &pivots {
            v[pc] = -m[pr][free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![[s(2), s(2), s(0)], [s(2), s(2), s(0)]];
        assert_eq!(rank(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()), 1);
        let k = kernel3(&rows);
        assert_eq!(k.len(), 2);
        // kernel vectors satisfy 2v1 + 2v2 = 0
        for v in &k {
            assert!((&(&v[0] + &v[1]) * &s(2)).is_zero());
        }
    }

    #[test]
    fn full_rank_kernel_empty() {
        let rows = vec![
            [s(1), s(0), s(0)],
            [s(0), s(1), s(0)],
            [s(0), s(0), s(1)],
        ];
        assert!(kernel3(&rows).is_empty());
    }
}
