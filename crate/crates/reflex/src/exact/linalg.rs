//! Exact linear algebra: Bareiss determinants, rational solving,
//! and signatures of symmetric matrices by congruence diagonalization.

use super::{ExactError, Int, IntMatrix, Rat};
use num_traits::{Signed, Zero};

/// Determinant by fraction-free Bareiss elimination.
pub fn det(a: &IntMatrix) -> Result<Int, ExactError> {
    if !a.is_square() {
        return Err(ExactError::DimensionMismatch("determinant of non-square".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Int::from(1));
    }
    let mut m: Vec<Vec<Int>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut sign = 1i32;
    let mut prev = Int::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(Int::zero());
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { -d } else { d })
}

/// Solve A x = b exactly over the rationals.
pub fn rat_solve(a: &IntMatrix, b: &[Rat]) -> Result<Vec<Rat>, ExactError> {
    if !a.is_square() {
        return Err(ExactError::DimensionMismatch("solve with non-square".into()));
    }
    let n = a.rows();
    if b.len() != n {
        return Err(ExactError::DimensionMismatch(format!(
            "matrix {}x{} vs rhs {}",
            n,
            n,
            b.len()
        )));
    }
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| a.row(i).iter().map(|x| Rat::from(x.clone())).collect())
        .collect();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Err(ExactError::SingularMatrix);
        };
        m.swap(k, p);
        rhs.swap(k, p);
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
            let t = &f * &rhs[k];
            rhs[i] -= t;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in k + 1..n {
            acc -= &m[k][j] * &x[j];
        }
        x[k] = acc / &m[k][k];
    }
    Ok(x)
}

/// Signature (p, m) of a symmetric nondegenerate matrix: counts of
/// positive and negative diagonal entries after exact congruence
/// diagonalization. No floating point is involved.
pub fn signature(g: &IntMatrix) -> Result<(usize, usize), ExactError> {
    if !g.is_square() || !g.is_symmetric() {
        return Err(ExactError::NotSymmetric);
    }
    let n = g.rows();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| g.row(i).iter().map(|x| Rat::from(x.clone())).collect())
        .collect();
    let (mut pos, mut neg) = (0usize, 0usize);
    for k in 0..n {
        if a[k][k].is_zero() {
            // prefer a symmetric swap with a later nonzero diagonal entry;
            // otherwise complete the pivot from a nonzero off-diagonal
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // all remaining diagonals are zero, so adding row/col j
                // to row/col k makes the pivot 2*a[k][j] != 0
                for t in 0..n {
                    let v = a[j][t].clone();
                    a[k][t] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] += v;
                }
            } else {
                return Err(ExactError::SingularMatrix);
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for t in 0..n {
                let v = &f * &a[k][t];
                a[i][t] -= v;
            }
            for row in a.iter_mut() {
                let v = &f * &row[k];
                row[i] -= v;
            }
        }
    }
    Ok((pos, neg))
}
