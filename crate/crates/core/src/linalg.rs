//! Exact rank and inverse over the Gaussian rationals.
//!
//! Rank clears denominators row by row and runs fraction-free (Bareiss)
//! elimination over the Gaussian integers Z[i]; every division in the
//! elimination is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::scalar::{GaussianRational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// `self / d`, which must be exact.
    fn div_exact(&self, d: &Self) -> Self {
        let norm = &d.re * &d.re + &d.im * &d.im;
        // self * conj(d)
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        let (qr, rr) = re.div_rem(&norm);
        let (qi, ri) = im.div_rem(&norm);
        assert!(rr.is_zero() && ri.is_zero(), "inexact Bareiss division");
        Self { re: qr, im: qi }
    }
}

/// Scales a row of Gaussian rationals to Gaussian integers (rank-preserving).
fn integer_row(row: &[GaussianRational]) -> Vec<GaussInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, z| acc.lcm(z.re().denom()).lcm(z.im().denom()));
    let scale = BigRational::from_integer(lcm);
    row.iter()
        .map(|z| {
            let re = z.re() * &scale;
            let im = z.im() * &scale;
            debug_assert!(re.is_integer() && im.is_integer());
            GaussInt { re: re.to_integer(), im: im.to_integer() }
        })
        .collect()
}

/// Rank of a rectangular matrix given as rows, by fraction-free elimination.
pub fn rank_of_rows(rows: &[Vec<GaussianRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<GaussInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let nrows = m.len();
    let one = GaussInt { re: BigInt::one(), im: BigInt::zero() };
    let mut prev = one;
    let mut rank = 0;
    for col in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            let factor = m[r][col].clone();
            for c in col + 1..cols {
                let t = pivot.mul(&m[r][c]).sub(&factor.mul(&m[rank][c]));
                m[r][c] = t.div_exact(&prev);
            }
            m[r][col] = GaussInt { re: BigInt::zero(), im: BigInt::zero() };
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank of a square matrix.
pub fn rank(a: &QMatrix) -> usize {
    let rows: Vec<Vec<GaussianRational>> = a.rows().map(<[_]>::to_vec).collect();
    rank_of_rows(&rows)
}

/// Rank of the span of `mats` after vectorization (column-stacking).
pub fn family_rank(mats: &[QMatrix]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let vecs: Vec<Vec<GaussianRational>> = mats.iter().map(QMatrix::vectorize).collect();
    // Row rank equals column rank; use the vectors as rows so the elimination
    // runs over the short side.
    rank_of_rows(&vecs)
}

/// Whether the vectorized family is linearly independent.
pub fn is_independent(mats: &[QMatrix]) -> bool {
    family_rank(mats) == mats.len()
}

/// Exact inverse by Gauss–Jordan elimination.
pub fn inverse(a: &QMatrix) -> Result<QMatrix> {
    let n = a.dim();
    let mut left: Vec<Vec<GaussianRational>> = a.rows().map(<[_]>::to_vec).collect();
    let mut right: Vec<Vec<GaussianRational>> =
        QMatrix::identity(n).rows().map(<[_]>::to_vec).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !left[r][col].is_zero()).ok_or(Error::Singular)?;
        left.swap(col, p);
        right.swap(col, p);
        let inv = left[col][col].recip().ok_or(Error::Singular)?;
        for x in left[col].iter_mut().chain(right[col].iter_mut()) {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r == col || left[r][col].is_zero() {
                continue;
            }
            let f = left[r][col].clone();
            for c in 0..n {
                let t = &f * &left[col][c];
                left[r][c] = &left[r][c] - &t;
                let t = &f * &right[col][c];
                right[r][c] = &right[r][c] - &t;
            }
        }
    }
    QMatrix::from_rows(right)
}

impl QMatrix {
    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        inverse(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(p, d)
    }

    #[test]
    fn rank_basics() {
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::unit(3, 0, 1).rank(), 1);
        assert_eq!(QMatrix::zeros(2).rank(), 0);
        let fam = [QMatrix::identity(2), QMatrix::unit(2, 0, 1)];
        assert_eq!(family_rank(&fam), 2);
        let dep = [QMatrix::identity(2), QMatrix::identity(2).scale(&q(-3, 7))];
        assert_eq!(family_rank(&dep), 1);
    }

    #[test]
    fn rank_with_skipped_columns() {
        // First column zero, second and third proportional.
        let a = QMatrix::from_int_rows(&[&[0, 1, 2], &[0, 2, 4], &[0, 0, 1]]).unwrap();
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn rank_complex_dependency() {
        let i = GaussianRational::i();
        let one = GaussianRational::one();
        // Second row is i times the first.
        let rows = vec![vec![one.clone(), i.clone()], vec![i.clone(), &i * &i]];
        assert_eq!(rank_of_rows(&rows), 1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(QMatrix::identity(3).inverse().unwrap(), QMatrix::identity(3));
        let d = QMatrix::diagonal(vec![q(2, 1), q(1, 3)]);
        assert_eq!(d.inverse().unwrap(), QMatrix::diagonal(vec![q(1, 2), q(3, 1)]));
        let n = QMatrix::unit(2, 0, 1);
        let id = QMatrix::identity(2);
        assert_eq!((&id + &n).inverse().unwrap(), &id - &n);
        assert_eq!(n.inverse(), Err(Error::Singular));
    }
}
