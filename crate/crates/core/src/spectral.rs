//! Floating-point eigenstructure, used only to split an algebraic isometry
//! into its unitary and nilpotent parts.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Eigenvalues closer than this (absolute) belong to one cluster.
pub const CLUSTER_GAP: f64 = 1e-6;
/// Relative tolerance for floating verification.
pub const REL_TOL: f64 = 1e-9;

type CMatrix = Matrix<Complex64>;

fn to_dmatrix(m: &CMatrix) -> DMatrix<Complex64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| *m.get(i, j))
}

fn from_dmatrix(d: &DMatrix<Complex64>) -> CMatrix {
    Matrix::from_fn(d.nrows(), |i, j| d[(i, j)])
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.entries().iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Eigenvalues from the diagonal of a complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let (_, t) = Schur::new(to_dmatrix(m)).unpack();
    (0..m.dim()).map(|i| t[(i, i)]).collect()
}

/// Single-linkage clusters at absolute distance `gap`: `(mean, multiplicity)`.
pub fn cluster(eigs: &[Complex64], gap: f64) -> Vec<(Complex64, usize)> {
    let n = eigs.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= gap {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = root(&mut label, i);
        match out.iter_mut().find(|c| c.0 == r) {
            Some(c) => {
                c.1 += eigs[i];
                c.2 += 1;
            }
            None => out.push((r, eigs[i], 1)),
        }
    }
    out.into_iter().map(|(_, sum, k)| (sum / k as f64, k)).collect()
}

/// Orthonormal basis of the numerical null space of `m`.
fn null_space(m: &DMatrix<Complex64>) -> Vec<nalgebra::DVector<Complex64>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let tol = f64::EPSILON.sqrt() * smax;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect()
}

/// Semisimple/nilpotent split `B = U + N` via generalized eigenspaces:
/// `U = Σ λᵢ Pᵢ`, `N = B − U`.
pub fn semisimple_split(b: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = b.dim();
    let bd = to_dmatrix(b);
    let clusters = cluster(&eigenvalues(b), CLUSTER_GAP);
    let mut basis = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for &(lambda, k) in &clusters {
        let shifted = &bd - DMatrix::identity(n, n) * lambda;
        let mut power = DMatrix::identity(n, n);
        for _ in 0..k {
            power = &power * &shifted;
        }
        let vecs = null_space(&power);
        if vecs.len() != k {
            return Err(Error::NumericallyDegenerate(format!(
                "eigenvalue {lambda}: cluster of {k} but generalized eigenspace of dimension {}",
                vecs.len()
            )));
        }
        diag.extend(std::iter::repeat(lambda).take(k));
        basis.extend(vecs);
    }
    let v = DMatrix::from_columns(&basis);
    let v_inv = v
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericallyDegenerate("generalized eigenbasis is singular".into()))?;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    let u = from_dmatrix(&(&v * d * v_inv));
    let nil = b - &u;
    Ok((u, nil))
}
