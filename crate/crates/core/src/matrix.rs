//! Dense square matrices over a [`Scalar`] backend.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Scalar};

/// Square matrix stored row-major. `dim >= 1`.
#[derive(Clone, PartialEq)]
pub struct Matrix<S = GaussianRational> {
    dim: usize,
    entries: Vec<S>,
}

/// Exact matrix over the Gaussian rationals.
pub type QMatrix = Matrix<GaussianRational>;

fn mismatch(op: &str, a: usize, b: usize) -> Error {
    Error::DimensionMismatch(format!("{op}: {a} vs {b}"))
}

impl<S: Scalar> Matrix<S> {
    pub fn new(dim: usize, entries: Vec<S>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(mismatch("entry count", entries.len(), dim * dim));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(mismatch("row length", bad.len(), dim));
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    /// Builds from integer rows; convenient for fixtures and tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| S::zero())
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diagonal(diag: Vec<S>) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * dim + i] = d;
        }
        m
    }

    /// Single-entry matrix `E_{ij}` (zero-based indices).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.entries[i * dim + j] = S::one();
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.dim)
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    /// Entrywise conversion to another scalar type.
    pub fn map_to<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(S::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    fn check_same(&self, rhs: &Self, op: &str) -> Result<()> {
        if self.dim == rhs.dim {
            Ok(())
        } else {
            Err(mismatch(op, self.dim, rhs.dim))
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "add")?;
        Ok(self.zip_with(rhs, S::plus))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "sub")?;
        Ok(self.zip_with(rhs, S::minus))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "mul")?;
        let n = self.dim;
        let mut out = vec![S::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        let cell = &mut out[i * n + j];
                        *cell = cell.plus(&a.times(b));
                    }
                }
            }
        }
        Ok(Self { dim: n, entries: out })
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| c.times(x))
    }

    /// `self^k`, with `self^0 = I`. Uses repeated squaring.
    pub fn pow(&self, mut k: usize) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(S::conjugate)
    }

    /// Adjoint `A*`.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conjugate())
    }

    /// Kronecker product, dimension `dim(a)·dim(b)`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, p) = (self.dim, rhs.dim);
        Self::from_fn(n * p, |i, j| self.get(i / p, j / p).times(rhs.get(i % p, j % p)))
    }

    /// Block-diagonal `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let (n, p) = (self.dim, rhs.dim);
        Self::from_fn(n + p, |i, j| match (i < n, j < n) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => rhs.get(i - n, j - n).clone(),
            _ => S::zero(),
        })
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(rhs)?.checked_sub(&rhs.checked_mul(self)?)
    }

    pub fn commutes_with(&self, rhs: &Self) -> Result<bool> {
        Ok(self.commutator(rhs)?.is_zero())
    }

    /// Column-stacking vectorization.
    pub fn vectorize(&self) -> Vec<S> {
        let n = self.dim;
        (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect()
    }

    /// Smallest `k >= 1` with `self^k = 0`, or `None` if `self^dim != 0`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let mut power = self.clone();
        for k in 1..=self.dim {
            if power.is_zero() {
                return Some(k);
            }
            power = &power * self;
        }
        None
    }
}

impl<'a, S: Scalar> Add<&'a Matrix<S>> for &'a Matrix<S> {
    type Output = Matrix<S>;
    /// Panics on dimension mismatch; use [`Matrix::checked_add`] for fallible code.
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.checked_add(rhs).expect("matrix dimension mismatch")
    }
}

impl<'a, S: Scalar> Sub<&'a Matrix<S>> for &'a Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.checked_sub(rhs).expect("matrix dimension mismatch")
    }
}

impl<'a, S: Scalar> Mul<&'a Matrix<S>> for &'a Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.checked_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.map(S::negated)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.rows().enumerate() {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, x) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.dim)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn construction_validates_shape() {
        assert!(QMatrix::new(0, vec![]).is_err());
        assert!(QMatrix::new(2, vec![GaussianRational::zero(); 3]).is_err());
        assert!(QMatrix::from_rows(vec![vec![GaussianRational::zero(); 2]]).is_err());
    }

    #[test]
    fn pow_zero_is_identity_and_identity_is_neutral() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.pow(0), QMatrix::identity(2));
        assert_eq!(&a * &QMatrix::identity(2), a);
        assert_eq!(a.pow(3), &(&a * &a) * &a);
    }

    #[test]
    fn e12_is_two_nilpotent() {
        let e12 = QMatrix::unit(2, 0, 1);
        assert!(e12.pow(2).is_zero());
        assert_eq!(e12.nilpotency_index(), Some(2));
        assert_eq!(QMatrix::zeros(3).nilpotency_index(), Some(1));
        assert_eq!(QMatrix::identity(3).nilpotency_index(), None);
    }

    #[test]
    fn commutator_e12_e21() {
        let e12 = QMatrix::unit(2, 0, 1);
        let e21 = QMatrix::unit(2, 1, 0);
        assert_eq!(e12.commutator(&e21).unwrap(), m(&[&[1, 0], &[0, -1]]));
        let a = m(&[&[1, 2], &[3, 4]]);
        assert!(a.commutator(&a.pow(2)).unwrap().is_zero());
    }

    #[test]
    fn kron_identities() {
        assert_eq!(QMatrix::identity(2).kron(&QMatrix::identity(3)), QMatrix::identity(6));
        let a = m(&[&[1, 2], &[0, 3]]);
        let b = m(&[&[0, 1, 0], &[4, 0, 1], &[1, 1, 1]]);
        let lhs = &a.kron(&QMatrix::identity(3)) * &QMatrix::identity(2).kron(&b);
        assert_eq!(lhs, a.kron(&b));
        let e12 = QMatrix::unit(2, 0, 1);
        let k = e12.kron(&e12);
        assert!(!k.is_zero());
        assert!(k.pow(2).is_zero());
    }

    #[test]
    fn vectorize_stacks_columns() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let v: Vec<_> = [1, 3, 2, 4].iter().map(|&x| GaussianRational::from_int(x)).collect();
        assert_eq!(a.vectorize(), v);
    }

    #[test]
    fn conj_transpose_of_complex() {
        let z = GaussianRational::complex(1, 1, 2, 1);
        let mut a = QMatrix::zeros(2);
        a.set(0, 1, z.clone());
        let h = a.conj_transpose();
        assert_eq!(h.get(1, 0), &z.conj());
        assert_eq!(h.conj_transpose(), a);
        assert_eq!(QMatrix::identity(3).conj_transpose(), QMatrix::identity(3));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = QMatrix::identity(2);
        let b = QMatrix::identity(3);
        assert!(matches!(a.checked_mul(&b), Err(Error::DimensionMismatch(_))));
        assert!(a.checked_add(&b).is_err());
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn direct_sum_blocks() {
        let a = m(&[&[2]]);
        let b = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(a.direct_sum(&b), m(&[&[2, 0, 0], &[0, 0, 1], &[0, 0, 0]]));
    }
}
