//! Defect sequences `d^m_{A,B}(I)` of the elementary operators
//! `Δ_{A,B}(X) = AXB − X` and `δ_{A,B}(X) = AX − XB`.
//!
//! The left and right multiplications `L_A`, `R_B` are not given a type of
//! their own; they act through [`OperatorPair::step`] and plain matrix
//! products.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{family_rank, is_independent};
use crate::matrix::QMatrix;
use crate::scalar::GaussianRational;

/// Bound used when an operation needs a minimal order but takes no bound.
pub const DEFAULT_MAX_ORDER: usize = 12;

/// Which elementary operator a pair defines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `Δ_{A,B}(X) = AXB − X`
    Delta,
    /// `δ_{A,B}(X) = AX − XB`
    DeltaC,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Delta => "delta",
            Kind::DeltaC => "deltac",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A pair `(A, B)` together with the operator it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPair {
    a: QMatrix,
    b: QMatrix,
    kind: Kind,
}

impl OperatorPair {
    pub fn new(a: QMatrix, b: QMatrix, kind: Kind) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(format!("pair: {} vs {}", a.dim(), b.dim())));
        }
        Ok(Self { a, b, kind })
    }

    pub fn a(&self) -> &QMatrix {
        &self.a
    }

    pub fn b(&self) -> &QMatrix {
        &self.b
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Same kind, new matrices.
    pub fn with(&self, a: QMatrix, b: QMatrix) -> Result<Self> {
        Self::new(a, b, self.kind)
    }

    /// One application of `d_{A,B}` to `x`.
    pub fn step(&self, x: &QMatrix) -> QMatrix {
        match self.kind {
            Kind::Delta => &(&(&self.a * x) * &self.b) - x,
            Kind::DeltaC => &(&self.a * x) - &(x * &self.b),
        }
    }

    /// `d_{A,B}^k(x)`.
    pub fn iterate(&self, x: &QMatrix, k: usize) -> QMatrix {
        (0..k).fold(x.clone(), |acc, _| self.step(&acc))
    }

    /// `(Aⁿ, Bⁿ)`.
    pub fn power(&self, n: usize) -> Self {
        Self { a: self.a.pow(n), b: self.b.pow(n), kind: self.kind }
    }

    /// `(A⁻¹, B⁻¹)`.
    pub fn inverse(&self) -> Result<Self> {
        Ok(Self { a: self.a.inverse()?, b: self.b.inverse()?, kind: self.kind })
    }

    pub fn identity(dim: usize, kind: Kind) -> Self {
        Self { a: QMatrix::identity(dim), b: QMatrix::identity(dim), kind }
    }
}

/// `d^0(I), …, d^R(I)` for one pair.
#[derive(Clone, Debug)]
pub struct DefectSequence {
    pub pair: OperatorPair,
    pub defects: Vec<QMatrix>,
}

impl DefectSequence {
    pub fn get(&self, r: usize) -> &QMatrix {
        &self.defects[r]
    }

    pub fn upto(&self) -> usize {
        self.defects.len() - 1
    }
}

/// `d^m_{A,B}(I)` by the recurrence `d^r = d(d^{r-1})`.
pub fn defect(pair: &OperatorPair, m: usize) -> QMatrix {
    pair.iterate(&QMatrix::identity(pair.dim()), m)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `d^m_{A,B}(I)` from the closed binomial sum; independent of [`defect`].
///
/// Δ: `Σ_j (−1)^j C(m,j) A^{m−j} B^{m−j}`; δ: `Σ_j (−1)^j C(m,j) A^{m−j} B^j`.
pub fn defect_binomial(pair: &OperatorPair, m: usize) -> QMatrix {
    let n = pair.dim();
    let mut total = QMatrix::zeros(n);
    for j in 0..=m {
        let mut c = binomial(m, j);
        if j % 2 == 1 {
            c = -c;
        }
        let coeff = GaussianRational::real(BigRational::from_integer(c));
        let term = match pair.kind() {
            Kind::Delta => &pair.a().pow(m - j) * &pair.b().pow(m - j),
            Kind::DeltaC => &pair.a().pow(m - j) * &pair.b().pow(j),
        };
        total = &total + &term.scale(&coeff);
    }
    total
}

pub fn defect_sequence(pair: &OperatorPair, upto: usize) -> DefectSequence {
    let mut defects = Vec::with_capacity(upto + 1);
    defects.push(QMatrix::identity(pair.dim()));
    for r in 1..=upto {
        let next = pair.step(&defects[r - 1]);
        defects.push(next);
    }
    DefectSequence { pair: pair.clone(), defects }
}

/// `(A, B) ∈ d^m(I)`.
pub fn is_member(pair: &OperatorPair, m: usize) -> bool {
    defect(pair, m).is_zero()
}

/// `(A, B) ∈ strict-d^m(I)`: `d^m(I) = 0` and `d^{m−1}(I) ≠ 0`.
pub fn is_strict_member(pair: &OperatorPair, m: usize) -> bool {
    if m == 0 {
        return false;
    }
    let before = defect(pair, m - 1);
    !before.is_zero() && pair.step(&before).is_zero()
}

/// Outcome of a bounded minimal-order search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub minimal_order: Option<usize>,
    pub checked_up_to: usize,
}

impl Classification {
    /// Strict at exactly `m`.
    pub fn is_strict_at(&self, m: usize) -> bool {
        self.minimal_order == Some(m)
    }

    /// Member at `m` (persistence makes every order above the minimal one a member).
    pub fn is_member_at(&self, m: usize) -> Option<bool> {
        match self.minimal_order {
            Some(k) => Some(m >= k),
            None if m <= self.checked_up_to => Some(false),
            None => None,
        }
    }
}

/// Least `m ∈ [1, max_m]` with `d^m(I) = 0`.
pub fn classify(pair: &OperatorPair, max_m: usize) -> Classification {
    let mut current = QMatrix::identity(pair.dim());
    for r in 1..=max_m {
        current = pair.step(&current);
        if current.is_zero() {
            // Persistence: d^{r+1}(I) = d(0) = 0.
            assert!(pair.step(&current).is_zero(), "defect persistence failed");
            return Classification { minimal_order: Some(r), checked_up_to: max_m };
        }
    }
    Classification { minimal_order: None, checked_up_to: max_m }
}

/// Minimal order within [`DEFAULT_MAX_ORDER`], or `NotClassified`.
pub fn minimal_order(pair: &OperatorPair) -> Result<usize> {
    classify(pair, DEFAULT_MAX_ORDER).minimal_order.ok_or(Error::NotClassified(DEFAULT_MAX_ORDER))
}

/// `{d^r(I)}_{r=0}^{m−1}` is linearly independent, `m` the minimal order.
pub fn defect_family_independent(pair: &OperatorPair) -> Result<bool> {
    let m = minimal_order(pair)?;
    let seq = defect_sequence(pair, m - 1);
    Ok(is_independent(&seq.defects))
}

/// Sign of the exponent shift in the twisted families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn exponent(self, base: usize, r: usize) -> usize {
        match self {
            Sign::Plus => base + r,
            Sign::Minus => base - r,
        }
    }
}

/// Which multiplications twist the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyShape {
    /// `L_A^{t±r} d^r(I)`
    Left,
    /// `R_B^{s±r} d^r(I)`
    Right,
    /// `L_A^{t±r} R_B^{s±r} d^r(I)`
    TwoSided,
}

/// The family `{L_A^{t±r} R_B^{s±r} d^r(I)}_{r=0}^{m−1}` (or its one-sided variant).
/// Works for either kind.
pub fn twisted_family(
    pair: &OperatorPair,
    m: usize,
    t: usize,
    s: usize,
    sign: Sign,
    shape: FamilyShape,
) -> Result<Vec<QMatrix>> {
    if m == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    let short = |e: usize| e + 1 < m;
    let too_short = match shape {
        FamilyShape::Left => short(t),
        FamilyShape::Right => short(s),
        FamilyShape::TwoSided => short(t) || short(s),
    };
    if sign == Sign::Minus && too_short {
        return Err(Error::Precondition(format!("t = {t}, s = {s} must be at least m − 1 = {}", m - 1)));
    }
    let seq = defect_sequence(pair, m - 1);
    Ok((0..m)
        .map(|r| {
            let d = seq.get(r);
            match shape {
                FamilyShape::Left => &pair.a().pow(sign.exponent(t, r)) * d,
                FamilyShape::Right => d * &pair.b().pow(sign.exponent(s, r)),
                FamilyShape::TwoSided => {
                    &(&pair.a().pow(sign.exponent(t, r)) * d) * &pair.b().pow(sign.exponent(s, r))
                }
            }
        })
        .collect())
}

/// For a strict Δ-pair of order `m`, whether all three twisted families
/// (left, right, two-sided) have rank `m`.
pub fn lemma21_sets_independent(pair: &OperatorPair, t: usize, s: usize, sign: Sign) -> Result<bool> {
    if pair.kind() != Kind::Delta {
        return Err(Error::WrongKind { expected: "delta", actual: pair.kind().name() });
    }
    let m = minimal_order(pair).map_err(|_| Error::NotStrict)?;
    if t + 1 < m || s + 1 < m {
        return Err(Error::Precondition(format!("t = {t}, s = {s} must be at least m − 1 = {}", m - 1)));
    }
    for shape in [FamilyShape::Left, FamilyShape::Right, FamilyShape::TwoSided] {
        if family_rank(&twisted_family(pair, m, t, s, sign, shape)?) != m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Descent: if `Δ^{m+i}(I)·B^{n−1−i} = 0` for every `0 ≤ i ≤ n−1`, then `Δ^m(I) = 0`.
///
/// Returns whether the hypothesis holds; a hypothesis that holds with a
/// nonzero `Δ^m(I)` is reported as a violation.
pub fn descent_reduce(pair: &OperatorPair, m: usize, n: usize) -> Result<bool> {
    if pair.kind() != Kind::Delta {
        return Err(Error::WrongKind { expected: "delta", actual: pair.kind().name() });
    }
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and n must be at least 1".into()));
    }
    let seq = defect_sequence(pair, m + n - 1);
    let hypothesis = (0..n).all(|i| (seq.get(m + i) * &pair.b().pow(n - 1 - i)).is_zero());
    if hypothesis && !seq.get(m).is_zero() {
        return Err(Error::Violation(format!("descent hypothesis holds but Δ^{m}(I) ≠ 0")));
    }
    Ok(hypothesis)
}

/// Tensor independence: with `{B_i}` independent, `Σ A_i ⊗ B_i = 0` forces
/// every `A_i = 0`. Returns whether the sum vanished (and the conclusion was confirmed).
pub fn tensor_sum_independent_factors_zero(terms: &[(QMatrix, QMatrix)]) -> Result<bool> {
    let Some((a0, b0)) = terms.first() else {
        return Err(Error::Precondition("at least one term required".into()));
    };
    for (a, b) in terms {
        if a.dim() != a0.dim() || b.dim() != b0.dim() {
            return Err(Error::DimensionMismatch("tensor terms have differing shapes".into()));
        }
    }
    let rights: Vec<QMatrix> = terms.iter().map(|(_, b)| b.clone()).collect();
    if !is_independent(&rights) {
        return Err(Error::DependentFactors);
    }
    let mut sum = QMatrix::zeros(a0.dim() * b0.dim());
    for (a, b) in terms {
        sum = &sum + &a.kron(b);
    }
    if !sum.is_zero() {
        return Ok(false);
    }
    if let Some(i) = terms.iter().position(|(a, _)| !a.is_zero()) {
        return Err(Error::Violation(format!("tensor sum vanishes but A_{} ≠ 0", i + 1)));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex22(a: i64, b: i64) -> OperatorPair {
        let m = QMatrix::from_int_rows(&[&[0, a, 0], &[0, 0, b], &[0, 0, 0]]).unwrap();
        OperatorPair::new(m.conj_transpose(), m, Kind::DeltaC).unwrap()
    }

    #[test]
    fn identity_pair() {
        let p = OperatorPair::identity(3, Kind::Delta);
        assert!(defect(&p, 1).is_zero());
        assert!(is_member(&p, 1));
        assert_eq!(classify(&p, 5).minimal_order, Some(1));
        let seq = defect_sequence(&p, 3);
        assert_eq!(seq.defects[0], QMatrix::identity(3));
        assert!(seq.defects[1..].iter().all(QMatrix::is_zero));
        assert!(defect_family_independent(&p).unwrap());
        assert!(lemma21_sets_independent(&p, 0, 0, Sign::Minus).unwrap());
        assert!(lemma21_sets_independent(&p, 4, 7, Sign::Plus).unwrap());
    }

    #[test]
    fn ex22_defects() {
        // δ⁴ has a single nonzero term, C(4,2)·(A*)²·A² = 6·diag(0,0,a²b²).
        let p = ex22(1, 2);
        assert_eq!(defect(&p, 4), QMatrix::from_int_rows(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 24]]).unwrap());
        assert_eq!(defect_binomial(&p, 4), defect(&p, 4));
        assert!(defect(&p, 5).is_zero());
        assert!(is_member(&p, 5));
        assert!(!is_member(&p, 4));
        assert!(is_strict_member(&p, 5));
        assert_eq!(classify(&p, 12).minimal_order, Some(5));
        assert!(defect_family_independent(&p).unwrap());
        let fam = twisted_family(&p, 5, 4, 0, Sign::Minus, FamilyShape::Left).unwrap();
        assert!(fam[0].is_zero() && fam[1].is_zero());
        assert!(family_rank(&fam) < 5);
    }

    #[test]
    fn binomial_at_zero_is_identity() {
        let p = ex22(3, 5);
        assert_eq!(defect_binomial(&p, 0), QMatrix::identity(3));
        assert_eq!(binomial(6, 3), BigInt::from(20));
    }

    #[test]
    fn lemma21_wrong_kind_and_unclassified() {
        assert_eq!(
            lemma21_sets_independent(&ex22(1, 2), 4, 4, Sign::Minus),
            Err(Error::WrongKind { expected: "delta", actual: "deltac" })
        );
        let never = OperatorPair::new(
            QMatrix::from_int_rows(&[&[2]]).unwrap(),
            QMatrix::from_int_rows(&[&[1]]).unwrap(),
            Kind::Delta,
        )
        .unwrap();
        assert_eq!(lemma21_sets_independent(&never, 1, 1, Sign::Plus), Err(Error::NotStrict));
        assert!(matches!(defect_family_independent(&never), Err(Error::NotClassified(_))));
    }

    #[test]
    fn lemma21_precondition_on_exponents() {
        // (I, I+E12) is strict-Δ².
        let b = &QMatrix::identity(2) + &QMatrix::unit(2, 0, 1);
        let p = OperatorPair::new(QMatrix::identity(2), b, Kind::Delta).unwrap();
        assert_eq!(minimal_order(&p).unwrap(), 2);
        assert!(matches!(lemma21_sets_independent(&p, 0, 3, Sign::Minus), Err(Error::Precondition(_))));
        assert!(lemma21_sets_independent(&p, 1, 1, Sign::Minus).unwrap());
    }

    #[test]
    fn descent_cases() {
        let p = OperatorPair::identity(2, Kind::Delta);
        assert!(descent_reduce(&p, 1, 1).unwrap());
        let b = &QMatrix::identity(2) + &QMatrix::unit(2, 0, 1);
        let strict2 = OperatorPair::new(QMatrix::identity(2), b, Kind::Delta).unwrap();
        assert!(descent_reduce(&strict2, 2, 2).unwrap());
        assert!(!descent_reduce(&strict2, 1, 2).unwrap());
        let never = OperatorPair::new(QMatrix::identity(2).scale(&GaussianRational::from_int(2)), QMatrix::identity(2), Kind::Delta).unwrap();
        assert!(!descent_reduce(&never, 2, 3).unwrap());
        assert!(matches!(descent_reduce(&ex22(1, 2), 1, 1), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn tensor_lemma_cases() {
        let z = QMatrix::zeros(2);
        let id = QMatrix::identity(2);
        assert!(tensor_sum_independent_factors_zero(&[(z.clone(), id.clone())]).unwrap());
        let a = QMatrix::unit(2, 0, 1);
        assert_eq!(
            tensor_sum_independent_factors_zero(&[(a.clone(), id.clone()), (-&a, id.clone())]),
            Err(Error::DependentFactors)
        );
        let terms = [(z.clone(), id.clone()), (z.clone(), QMatrix::unit(2, 1, 0))];
        assert!(tensor_sum_independent_factors_zero(&terms).unwrap());
        let terms = [(a.clone(), id.clone()), (z, QMatrix::unit(2, 1, 0))];
        assert!(!tensor_sum_independent_factors_zero(&terms).unwrap());
    }
}
