//! Arbitrary-precision integers, rationals, and exact integer-matrix
//! algorithms. Everything downstream (lattices, reflections, graphs)
//! is built on the types in this module; no floating point exists
//! anywhere in the crate.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

mod linalg;
mod snf;

pub use linalg::{det, rat_solve, signature};
pub use snf::snf;

/// Arbitrary-precision signed integer.
pub type Int = num_bigint::BigInt;

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Shorthand for small integer constants.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Reduce into the half-open interval [0, m) for positive rational m.
pub fn rem_euclid(x: &Rat, m: &Rat) -> Rat {
    debug_assert!(m.is_positive());
    let q = (x / m).floor();
    x - q * m
}

/// Dense integer matrix, row-major. All access is bounds-checked.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows<R, T>(rows: R) -> Result<Self, ExactError>
    where
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
        T: Into<Int>,
    {
        let data: Vec<Vec<Int>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        let nrows = data.len();
        let ncols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != ncols) {
            return Err(ExactError::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix { rows: nrows, cols: ncols, data: data.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row(&self, i: usize) -> &[Int] {
        assert!(i < self.rows, "row index out of bounds");
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product over the rationals.
    pub fn mul_rat_vec(&self, v: &[Rat]) -> Result<Vec<Rat>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * vec{}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| Rat::from(a.clone()) * x)
                    .sum()
            })
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Int::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    #[test]
    fn from_rows_rejects_ragged() {
        let r = IntMatrix::from_rows(vec![vec![1i64, 2], vec![3]]);
        assert!(matches!(r, Err(ExactError::DimensionMismatch(_))));
    }

    #[test]
    fn identity_multiplication() {
        let a = IntMatrix::from_rows(vec![vec![0i64, 4], vec![4, 0]]).unwrap();
        let i = IntMatrix::identity(2);
        assert_eq!(a.mul(&i).unwrap(), a);
        assert_eq!(i.mul(&a).unwrap(), a);
    }

    #[test]
    fn rem_euclid_maps_into_range() {
        assert_eq!(rem_euclid(&rat(-1, 4), &rat(1, 1)), rat(3, 4));
        assert_eq!(rem_euclid(&rat(5, 2), &rat(2, 1)), rat(1, 2));
        assert_eq!(rem_euclid(&rat(0, 1), &rat(2, 1)), rat(0, 1));
    }

    #[test]
    fn rat_parses_and_prints_fraction_form() {
        let x: Rat = "5/10".parse().unwrap();
        assert_eq!(x, rat(1, 2));
        assert_eq!(x.to_string(), "1/2");
        let y: Rat = "-3".parse().unwrap();
        assert_eq!(y.to_string(), "-3");
    }

    proptest! {
        #[test]
        fn rat_field_laws(a in -50i64..50, b in 1i64..20, c in -50i64..50,
                          d in 1i64..20, e in -50i64..50, f in 1i64..20) {
            let (x, y, z) = (rat(a, b), rat(c, d), rat(e, f));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        }

        #[test]
        fn rat_normalization_idempotent(a in -100i64..100, b in 1i64..100) {
            let x = rat(a, b);
            let renorm = Rat::new(x.numer().clone(), x.denom().clone());
            prop_assert_eq!(&renorm, &x);
            prop_assert!(x.denom().to_i64().unwrap() >= 1);
        }
    }
}
