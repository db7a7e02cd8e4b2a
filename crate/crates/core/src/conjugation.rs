use crate::error::{Error, Result};
use crate::matrix::QMatrix;

/// Antilinear involution `x ↦ u·conj(x)` with `u` real and `u·conj(u) = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Conjugation {
    u: QMatrix,
}

impl Conjugation {
    pub fn new(u: QMatrix) -> Result<Self> {
        if let Some(z) = u.entries().iter().find(|z| !z.is_real()) {
            return Err(Error::InvalidConjugation(format!("entry {z} is not real")));
        }
        if !(&u * &u.conj()).is_identity() {
            return Err(Error::InvalidConjugation("u·conj(u) is not the identity".into()));
        }
        Ok(Self { u })
    }

    /// Entrywise conjugation `D(x) = conj(x)`.
    pub fn identity(dim: usize) -> Self {
        Self { u: QMatrix::identity(dim) }
    }

    /// Coordinate reversal `C(x_1, …, x_n) = (conj x_n, …, conj x_1)`.
    pub fn flip(dim: usize) -> Self {
        let mut u = QMatrix::zeros(dim);
        for i in 0..dim {
            u.set(i, dim - 1 - i, crate::scalar::Scalar::one());
        }
        Self { u }
    }

    pub fn u(&self) -> &QMatrix {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// The linear map `C·A·C = u·conj(A)·u`.
    pub fn apply(&self, a: &QMatrix) -> Result<QMatrix> {
        self.u.checked_mul(&a.conj())?.checked_mul(&self.u)
    }

    /// `C·D = D·C` as antilinear maps, i.e. `u_C·u_D = u_D·u_C` for real `u`.
    pub fn commutes_with(&self, other: &Conjugation) -> Result<bool> {
        self.u.commutes_with(&other.u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    #[test]
    fn rejects_non_involutions() {
        let u = QMatrix::from_int_rows(&[&[1, 1], &[0, 1]]).unwrap();
        assert!(Conjugation::new(u).is_err());
        let mut c = QMatrix::identity(2);
        c.set(0, 0, GaussianRational::i());
        assert!(matches!(Conjugation::new(c), Err(Error::InvalidConjugation(_))));
        assert!(Conjugation::new(Conjugation::flip(3).u().clone()).is_ok());
    }

    #[test]
    fn apply_is_an_involution() {
        let mut a = QMatrix::from_int_rows(&[&[1, 2, 0], &[0, 3, 4], &[5, 0, 6]]).unwrap();
        a.set(0, 2, GaussianRational::complex(1, 2, -1, 3));
        for c in [Conjugation::identity(3), Conjugation::flip(3)] {
            assert_eq!(c.apply(&c.apply(&a).unwrap()).unwrap(), a);
        }
        assert_eq!(Conjugation::identity(3).apply(&a).unwrap(), a.conj());
    }

    #[test]
    fn flip_and_identity_commute() {
        let c = Conjugation::flip(3);
        let d = Conjugation::identity(3);
        assert!(c.commutes_with(&d).unwrap());
    }
}
