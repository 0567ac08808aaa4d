//! Smith normal form with unimodular transforms.

use super::{Int, IntMatrix};
use num_traits::{Signed, Zero};

/// Diagonalize an integer matrix over the integers.
///
/// Returns `(U, S, V)` with `U * A * V = S`, where `U` and `V` are
/// unimodular and `S` is diagonal with nonnegative entries forming a
/// divisibility chain d1 | d2 | ... (unit entries included). Total on
/// all integer matrices.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (n, m) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(m);

    for t in 0..n.min(m) {
        loop {
            let Some((pi, pj)) = pivot(&s, t) else { break };
            if pi != t {
                swap_rows(&mut s, &mut u, pi, t);
            }
            if pj != t {
                swap_cols(&mut s, &mut v, pj, t);
            }
            if s[(t, t)].is_negative() {
                negate_row(&mut s, &mut u, t);
            }
            let mut dirty = false;
            for i in t + 1..n {
                let q = div_floor(&s[(i, t)], &s[(t, t)]);
                if !q.is_zero() {
                    row_op(&mut s, &mut u, i, t, &-q);
                }
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..m {
                let q = div_floor(&s[(t, j)], &s[(t, t)]);
                if !q.is_zero() {
                    col_op(&mut s, &mut v, j, t, &-q);
                }
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // the pivot must divide every remaining entry, otherwise fold
            // the offending row into row t and keep reducing
            let offender = (t + 1..n).find(|&i| {
                (t + 1..m).any(|j| !(&s[(i, j)] % &s[(t, t)]).is_zero())
            });
            match offender {
                Some(i) => row_op(&mut s, &mut u, t, i, &Int::from(1)),
                None => break,
            }
        }
    }
    (u, s, v)
}

/// Position of a smallest-magnitude nonzero entry in the trailing block.
fn pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            if s[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(b) if s[b].abs() <= s[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn div_floor(a: &Int, b: &Int) -> Int {
    num_integer::Integer::div_floor(a, b)
}

/// row i += c * row j, mirrored on the row transform.
fn row_op(s: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize, c: &Int) {
    for k in 0..s.cols() {
        let d = c * &s[(j, k)];
        s[(i, k)] += d;
    }
    for k in 0..u.cols() {
        let d = c * &u[(j, k)];
        u[(i, k)] += d;
    }
}

/// col i += c * col j, mirrored on the column transform.
fn col_op(s: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize, c: &Int) {
    for k in 0..s.rows() {
        let d = c * &s[(k, j)];
        s[(k, i)] += d;
    }
    for k in 0..v.rows() {
        let d = c * &v[(k, j)];
        v[(k, i)] += d;
    }
}

fn swap_rows(s: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    for k in 0..s.cols() {
        let tmp = s[(i, k)].clone();
        s[(i, k)] = s[(j, k)].clone();
        s[(j, k)] = tmp;
    }
    for k in 0..u.cols() {
        let tmp = u[(i, k)].clone();
        u[(i, k)] = u[(j, k)].clone();
        u[(j, k)] = tmp;
    }
}

fn swap_cols(s: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    for k in 0..s.rows() {
        let tmp = s[(k, i)].clone();
        s[(k, i)] = s[(k, j)].clone();
        s[(k, j)] = tmp;
    }
    for k in 0..v.rows() {
        let tmp = v[(k, i)].clone();
        v[(k, i)] = v[(k, j)].clone();
        v[(k, j)] = tmp;
    }
}

fn negate_row(s: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
    for k in 0..s.cols() {
        let neg = -s[(i, k)].clone();
        s[(i, k)] = neg;
    }
    for k in 0..u.cols() {
        let neg = -u[(i, k)].clone();
        u[(i, k)] = neg;
    }
}

#[cfg(test)]
mod tests {
    use super::super::{det, int};
    use super::*;
    use num_traits::One;

    fn assert_snf_contract(a: &IntMatrix) {
        let (u, s, v) = snf(a);
        assert_eq!(u.mul(a).unwrap().mul(&v).unwrap(), s, "U*A*V != S");
        assert!(det(&u).unwrap().abs().is_one(), "U not unimodular");
        assert!(det(&v).unwrap().abs().is_one(), "V not unimodular");
        let k = a.rows().min(a.cols());
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j {
                    assert!(s[(i, j)].is_zero(), "S not diagonal");
                }
            }
        }
        for i in 0..k {
            assert!(!s[(i, i)].is_negative(), "negative diagonal");
        }
        for i in 0..k.saturating_sub(1) {
            let (d0, d1) = (&s[(i, i)], &s[(i + 1, i + 1)]);
            if d0.is_zero() {
                assert!(d1.is_zero(), "zero before nonzero in the chain");
            } else {
                assert!((d1 % d0).is_zero(), "divisibility chain broken");
            }
        }
    }

    #[test]
    fn one_by_one() {
        let a = IntMatrix::from_rows(vec![vec![2i64]]).unwrap();
        let (u, s, v) = snf(&a);
        assert_eq!(s, a);
        assert_eq!(u, IntMatrix::identity(1));
        assert_eq!(v, IntMatrix::identity(1));
    }

    #[test]
    fn hyperbolic_block_scaled_by_four() {
        let a = IntMatrix::from_rows(vec![vec![0i64, 4], vec![4, 0]]).unwrap();
        let (_, s, _) = snf(&a);
        assert_eq!(s[(0, 0)], int(4));
        assert_eq!(s[(1, 1)], int(4));
        assert_snf_contract(&a);
    }

    #[test]
    fn rank_deficient_matrix() {
        let a = IntMatrix::from_rows(vec![vec![2i64, 4], vec![1, 2]]).unwrap();
        let (_, s, _) = snf(&a);
        assert_eq!(s[(0, 0)], int(1));
        assert_eq!(s[(1, 1)], int(0));
        assert_snf_contract(&a);
    }

    #[test]
    fn divisibility_fold_is_triggered() {
        // minors force a genuine gcd fold: diag(2,3) has SNF diag(1,6)
        let a = IntMatrix::from_rows(vec![vec![2i64, 0], vec![0, 3]]).unwrap();
        let (_, s, _) = snf(&a);
        assert_eq!(s[(0, 0)], int(1));
        assert_eq!(s[(1, 1)], int(6));
        assert_snf_contract(&a);
    }

    #[test]
    fn non_square_matrices() {
        let a = IntMatrix::from_rows(vec![vec![6i64, 4, 2], vec![2, 8, 4]]).unwrap();
        assert_snf_contract(&a);
        assert_snf_contract(&a.transpose());
    }
}
