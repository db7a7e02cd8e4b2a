//! Certified constructions: products, tensor products, nilpotent perturbations,
//! δ-sums, and the commuting / algebraic-isometry decompositions.
//!
//! Every engine checks its conclusion by computing defects directly. Where a
//! strictness criterion is available it is evaluated on its own and compared
//! with [`classify`]; disagreement is a [`Error::Violation`].
//!
//! The strictness witnesses compose operators rather than multiply matrices:
//! for pairs `p1`, `p2` the witness starts from `d₁^{m−1}(d₂^{n−1}(I))`, i.e.
//! `d_{A₁,B₁}` applied `m−1` times to the matrix `d₂^{n−1}(I)`. When all four
//! matrices commute this equals the product `d₁^{m−1}(I)·d₂^{n−1}(I)`, which is
//! also recorded for reference.

use num_complex::Complex64;

use crate::calculus::{classify, defect, defect_sequence, is_member, is_strict_member, minimal_order, Kind, OperatorPair};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, QMatrix};
use crate::scalar::Scalar;
use crate::spectral;

fn unclassified(e: Error) -> Error {
    match e {
        Error::NotClassified(k) => Error::NotClassified(k),
        other => other,
    }
}

fn require_commuting(x: &QMatrix, y: &QMatrix, label: &'static str) -> Result<()> {
    if x.commutes_with(y)? {
        Ok(())
    } else {
        Err(Error::NotCommuting(label))
    }
}

fn require_same_kind(p1: &OperatorPair, p2: &OperatorPair) -> Result<Kind> {
    if p1.kind() == p2.kind() {
        Ok(p1.kind())
    } else {
        Err(Error::KindMismatch)
    }
}

fn cross_check(label: &str, criterion: bool, bound: usize, minimal: Option<usize>) -> Result<()> {
    let by_classify = minimal == Some(bound);
    if criterion != by_classify {
        return Err(Error::Violation(format!(
            "{label}: strictness criterion says {criterion}, classify gives minimal order {minimal:?} (bound {bound})"
        )));
    }
    Ok(())
}

/// Result of combining two classified pairs (product, tensor product, or δ-sum).
#[derive(Clone, Debug)]
pub struct ProductCertificate {
    pub pair1: OperatorPair,
    pub pair2: OperatorPair,
    /// The combined pair.
    pub product: OperatorPair,
    pub order1: usize,
    pub order2: usize,
    /// `order1 + order2 − 1`.
    pub order_bound: usize,
    /// Strictness at `order_bound` from the criterion; equals the classify verdict.
    pub strict: bool,
    /// Criterion matrix; nonzero exactly when `strict`.
    pub witness: QMatrix,
    /// `d₁^{m−1}(I)·d₂^{n−1}(I)`, the componentwise product.
    pub componentwise_product: QMatrix,
    /// Minimal order of the combined pair (classified up to `order_bound`).
    pub minimal_order: Option<usize>,
}

/// `(A₁A₂, B₁B₂)` for same-kind pairs with `[A₁,A₂] = 0 = [B₁,B₂]`.
pub fn product_pair(p1: &OperatorPair, p2: &OperatorPair) -> Result<ProductCertificate> {
    let kind = require_same_kind(p1, p2)?;
    require_commuting(p1.a(), p2.a(), "A1,A2")?;
    require_commuting(p1.b(), p2.b(), "B1,B2")?;
    let m = minimal_order(p1).map_err(unclassified)?;
    let n = minimal_order(p2).map_err(unclassified)?;
    let bound = m + n - 1;
    let product = p1.with(p1.a() * p2.a(), p1.b() * p2.b())?;
    if !is_member(&product, bound) {
        return Err(Error::Violation(format!("product is not a member at order {bound}")));
    }

    let d1 = defect(p1, m - 1);
    let d2 = defect(p2, n - 1);
    let composed = p1.iterate(&d2, m - 1);
    let witness = match kind {
        // (L_{A₂}R_{B₂})^{m−1} Δ₁^{m−1} Δ₂^{n−1}(I)
        Kind::Delta => &(&p2.a().pow(m - 1) * &composed) * &p2.b().pow(m - 1),
        // L_{A₂}^{m−1} R_{B₁}^{n−1} δ₁^{m−1} δ₂^{n−1}(I)
        Kind::DeltaC => {
            let first = &(&p2.a().pow(m - 1) * &composed) * &p1.b().pow(n - 1);
            let second = &(&p1.a().pow(n - 1) * &composed) * &p2.b().pow(m - 1);
            if first != second {
                return Err(Error::Violation("twisted δ-product witnesses differ".into()));
            }
            first
        }
    };
    let strict = !witness.is_zero();
    let minimal = classify(&product, bound).minimal_order;
    cross_check("product", strict, bound, minimal)?;
    Ok(ProductCertificate {
        pair1: p1.clone(),
        pair2: p2.clone(),
        product,
        order1: m,
        order2: n,
        order_bound: bound,
        strict,
        witness,
        componentwise_product: &d1 * &d2,
        minimal_order: minimal,
    })
}

fn tensor_of(p1: &OperatorPair, p2: &OperatorPair) -> Result<OperatorPair> {
    p1.with(p1.a().kron(p2.a()), p1.b().kron(p2.b()))
}

/// `(A₁⊗A₂, B₁⊗B₂)` for same-kind classified pairs.
pub fn tensor_pair(p1: &OperatorPair, p2: &OperatorPair) -> Result<ProductCertificate> {
    let kind = require_same_kind(p1, p2)?;
    let m = minimal_order(p1).map_err(unclassified)?;
    let n = minimal_order(p2).map_err(unclassified)?;
    let bound = m + n - 1;
    let tensor = tensor_of(p1, p2)?;
    if !is_member(&tensor, bound) {
        return Err(Error::Violation(format!("tensor pair is not a member at order {bound}")));
    }
    let d1 = defect(p1, m - 1);
    let d2 = defect(p2, n - 1);
    let witness = match kind {
        Kind::Delta => d1.kron(&(&(&p2.a().pow(m - 1) * &d2) * &p2.b().pow(m - 1))),
        Kind::DeltaC => {
            let left = p1.a().pow(n - 1).kron(&p2.a().pow(m - 1));
            let id1 = QMatrix::identity(p1.dim());
            let id2 = QMatrix::identity(p2.dim());
            &(&left * &d1.kron(&id2)) * &id1.kron(&d2)
        }
    };
    let strict = !witness.is_zero();
    let minimal = classify(&tensor, bound).minimal_order;
    cross_check("tensor", strict, bound, minimal)?;
    if kind == Kind::Delta {
        // Both factors are strict by construction, so the tensor must be too.
        let flags = tensor_two_of_three(p1, m, p2, n)?;
        if flags != (true, true, true) {
            return Err(Error::Violation(format!("tensor strictness flags {flags:?}")));
        }
    }
    Ok(ProductCertificate {
        pair1: p1.clone(),
        pair2: p2.clone(),
        product: tensor,
        order1: m,
        order2: n,
        order_bound: bound,
        strict,
        witness,
        componentwise_product: d1.kron(&d2),
        minimal_order: minimal,
    })
}

/// The three strictness facts for a tensor product at declared orders:
/// `(p1 strict at m, p2 strict at n, p1⊗p2 strict at m+n−1)`.
pub fn tensor_two_of_three(p1: &OperatorPair, m: usize, p2: &OperatorPair, n: usize) -> Result<(bool, bool, bool)> {
    require_same_kind(p1, p2)?;
    if m == 0 || n == 0 {
        return Err(Error::Precondition("orders must be at least 1".into()));
    }
    let tensor = tensor_of(p1, p2)?;
    Ok((is_strict_member(p1, m), is_strict_member(p2, n), is_strict_member(&tensor, m + n - 1)))
}

/// True unless exactly two of the three flags hold.
pub fn two_of_three_consistent(flags: (bool, bool, bool)) -> bool {
    [flags.0, flags.1, flags.2].iter().filter(|&&f| f).count() != 2
}

/// Perturbation of a classified pair by commuting nilpotents.
#[derive(Clone, Debug)]
pub struct PerturbationCertificate {
    pub base: OperatorPair,
    pub base_order: usize,
    /// Nilpotent added to `A` with its index (`n₂`); must commute with `A`.
    pub left: Option<(QMatrix, usize)>,
    /// Nilpotent added to `B` with its index (`n₁`); must commute with `B`.
    pub right: Option<(QMatrix, usize)>,
    pub perturbed: OperatorPair,
    /// `m + n₁ + n₂ − 2`, with an absent side counting as index 1.
    pub order_bound: usize,
    pub strict: bool,
    pub witness: QMatrix,
    pub minimal_order: Option<usize>,
}

fn checked_nilpotent(n: &QMatrix, partner: &QMatrix, label: &'static str) -> Result<usize> {
    if n.dim() != partner.dim() {
        return Err(Error::DimensionMismatch(format!("nilpotent {} vs {}", n.dim(), partner.dim())));
    }
    let index = n.nilpotency_index().ok_or(Error::NotNilpotent)?;
    require_commuting(partner, n, label)?;
    Ok(index)
}

/// `(A + N₂, B + N₁)` with `[B, N₁] = 0 = [A, N₂]`.
///
/// Strictness at the bound: with `B' = B + N₁`,
/// Δ: `N₂^{n₂−1}·A^{n₁−1}Δ^{m−1}(I)N₁^{n₁−1}·B'^{n₂−1} ≠ 0`,
/// δ: `N₂^{n₂−1}·δ^{m−1}(I)N₁^{n₁−1} ≠ 0` (binomial constants dropped).
pub fn perturb(
    base: &OperatorPair,
    right_nilpotent: Option<&QMatrix>,
    left_nilpotent: Option<&QMatrix>,
) -> Result<PerturbationCertificate> {
    let m = minimal_order(base).map_err(unclassified)?;
    let right = right_nilpotent
        .map(|n| checked_nilpotent(n, base.b(), "B,N_right").map(|k| (n.clone(), k)))
        .transpose()?;
    let left = left_nilpotent
        .map(|n| checked_nilpotent(n, base.a(), "A,N_left").map(|k| (n.clone(), k)))
        .transpose()?;
    let n1 = right.as_ref().map_or(1, |r| r.1);
    let n2 = left.as_ref().map_or(1, |l| l.1);
    let bound = m + n1 + n2 - 2;

    let b_prime = match &right {
        Some((n, _)) => base.b() + n,
        None => base.b().clone(),
    };
    let a_prime = match &left {
        Some((n, _)) => base.a() + n,
        None => base.a().clone(),
    };
    let perturbed = base.with(a_prime, b_prime.clone())?;
    if !is_member(&perturbed, bound) {
        return Err(Error::Violation(format!("perturbed pair is not a member at order {bound}")));
    }

    let d = defect(base, m - 1);
    let right_power = right.as_ref().map_or_else(|| QMatrix::identity(base.dim()), |(n, k)| n.pow(k - 1));
    let stage_one = match base.kind() {
        Kind::Delta => &(&base.a().pow(n1 - 1) * &d) * &right_power,
        Kind::DeltaC => &d * &right_power,
    };
    let witness = match &left {
        None => stage_one,
        Some((n, k)) => match base.kind() {
            Kind::Delta => &(&n.pow(k - 1) * &stage_one) * &b_prime.pow(k - 1),
            Kind::DeltaC => &n.pow(k - 1) * &stage_one,
        },
    };
    let strict = !witness.is_zero();
    let minimal = classify(&perturbed, bound).minimal_order;
    cross_check("perturbation", strict, bound, minimal)?;
    Ok(PerturbationCertificate {
        base: base.clone(),
        base_order: m,
        left,
        right,
        perturbed,
        order_bound: bound,
        strict,
        witness,
        minimal_order: minimal,
    })
}

/// `(A₁ + A₂, B₁ + B₂)` for δ-pairs with `[A₁,A₂] = 0 = [B₁,B₂]`.
pub fn sum_pair_deltac(p1: &OperatorPair, p2: &OperatorPair) -> Result<ProductCertificate> {
    require_same_kind(p1, p2)?;
    if p1.kind() != Kind::DeltaC {
        return Err(Error::WrongKind { expected: "deltac", actual: p1.kind().name() });
    }
    require_commuting(p1.a(), p2.a(), "A1,A2")?;
    require_commuting(p1.b(), p2.b(), "B1,B2")?;
    let m = minimal_order(p1).map_err(unclassified)?;
    let n = minimal_order(p2).map_err(unclassified)?;
    let bound = m + n - 1;
    let sum = p1.with(p1.a() + p2.a(), p1.b() + p2.b())?;
    if !is_member(&sum, bound) {
        return Err(Error::Violation(format!("sum is not a member at order {bound}")));
    }
    let d1 = defect(p1, m - 1);
    let d2 = defect(p2, n - 1);
    let witness = p1.iterate(&d2, m - 1);
    let strict = !witness.is_zero();
    let minimal = classify(&sum, bound).minimal_order;
    cross_check("δ-sum", strict, bound, minimal)?;
    Ok(ProductCertificate {
        pair1: p1.clone(),
        pair2: p2.clone(),
        product: sum,
        order1: m,
        order2: n,
        order_bound: bound,
        strict,
        witness,
        componentwise_product: &d1 * &d2,
        minimal_order: minimal,
    })
}

/// Evaluates, for the tensor-built pair `(A⊗I + I⊗N, B⊗I)`:
/// (i) `(A,B)` strict at `m`; (ii) `N` has nilpotency index exactly `n`;
/// (iii) the tensor pair is strict at `m+n−1`.
pub fn tensor_nilpotent_two_of_three(
    pair: &OperatorPair,
    n_matrix: &QMatrix,
    m: usize,
    n: usize,
) -> Result<(bool, bool, bool)> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and n must be at least 1".into()));
    }
    let k = n_matrix.dim();
    let id_pair = QMatrix::identity(pair.dim());
    let id_n = QMatrix::identity(k);
    let a = &pair.a().kron(&id_n) + &id_pair.kron(n_matrix);
    let b = pair.b().kron(&id_n);
    let tensor = pair.with(a, b)?;
    Ok((
        is_strict_member(pair, m),
        n_matrix.nilpotency_index() == Some(n),
        is_strict_member(&tensor, m + n - 1),
    ))
}

/// `A = B⁻¹ + N` (Δ) or `A = B + N` (δ) for a commuting member pair.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutingDecomposition {
    /// `B⁻¹` for Δ, `B` for δ.
    pub invertible_part: QMatrix,
    pub nilpotent_part: QMatrix,
    pub nil_index: usize,
}

pub fn commuting_decompose(pair: &OperatorPair) -> Result<CommutingDecomposition> {
    require_commuting(pair.a(), pair.b(), "A,B")?;
    let m = minimal_order(pair).map_err(unclassified)?;
    let invertible_part = match pair.kind() {
        Kind::Delta => pair.b().inverse().map_err(|_| {
            Error::Violation("Δ-member with commuting A, B has singular B".into())
        })?,
        Kind::DeltaC => pair.b().clone(),
    };
    let nilpotent = pair.a() - &invertible_part;
    if !nilpotent.pow(m).is_zero() {
        return Err(Error::Violation(format!("N^{m} ≠ 0")));
    }
    require_commuting(pair.b(), &nilpotent, "B,N").map_err(|_| Error::Violation("[B, N] ≠ 0".into()))?;
    let nil_index = nilpotent.nilpotency_index().ok_or(Error::NotNilpotent)?;
    if nil_index != m {
        return Err(Error::Violation(format!("nilpotency index {nil_index} differs from order {m}")));
    }
    Ok(CommutingDecomposition { invertible_part, nilpotent_part: nilpotent, nil_index })
}

/// For a member of order 2: Δ checks `B invertible ⟺ [A,B] = 0`; δ checks `[A,B] = 0`.
/// Returns `true` when the statement holds, a violation otherwise.
pub fn order2_commutativity(pair: &OperatorPair) -> Result<bool> {
    if !is_member(pair, 2) {
        return Err(Error::NotMember(2));
    }
    let commutes = pair.a().commutes_with(pair.b())?;
    match pair.kind() {
        Kind::Delta => {
            let invertible = pair.b().is_invertible();
            if invertible != commutes {
                return Err(Error::Violation(format!(
                    "B invertible = {invertible} but [A,B] = 0 is {commutes}"
                )));
            }
        }
        Kind::DeltaC => {
            if !commutes {
                return Err(Error::Violation("δ²-member with [A,B] ≠ 0".into()));
            }
        }
    }
    Ok(true)
}

/// `B = U + N` with `U` unitary, `[U, N] = 0`, and `N` of index `(m+1)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryDecomposition<S: Scalar = crate::scalar::GaussianRational> {
    pub unitary_part: Matrix<S>,
    pub nilpotent_part: Matrix<S>,
    pub nil_index: usize,
}

/// The `(B*, B)` Δ-pair whose membership makes `B` an m-isometry.
pub fn isometry_pair(b: &QMatrix) -> OperatorPair {
    OperatorPair::new(b.conj_transpose(), b.clone(), Kind::Delta).expect("square matrix")
}

fn check_strict_isometry(b: &QMatrix, m: usize) -> Result<()> {
    if m == 0 || !is_strict_member(&isometry_pair(b), m) {
        return Err(Error::NotStrictIsometry(m));
    }
    if m % 2 == 0 {
        return Err(Error::EvenOrder(m));
    }
    Ok(())
}

/// Exact check of an isometry certificate against `B` and its strict order `m`.
pub fn verify_isometry_certificate(b: &QMatrix, cert: &IsometryDecomposition, m: usize) -> Result<()> {
    check_strict_isometry(b, m)?;
    let (u, n) = (&cert.unitary_part, &cert.nilpotent_part);
    let fail = |what: &str| Err(Error::Violation(format!("isometry certificate: {what}")));
    if &(u + n) != b {
        return fail("B ≠ U + N");
    }
    if !(u * &u.conj_transpose()).is_identity() {
        return fail("U·U* ≠ I");
    }
    if !u.commutes_with(n)? {
        return fail("[U, N] ≠ 0");
    }
    if n.nilpotency_index() != Some(cert.nil_index) {
        return fail("nilpotency index mismatch");
    }
    if 2 * cert.nil_index - 1 != m {
        return fail("order ≠ 2·(nil index) − 1");
    }
    Ok(())
}

/// Accepts a known exact certificate for `B` after verifying it.
pub fn isometry_decompose_certified(
    b: &QMatrix,
    m: usize,
    cert: &IsometryDecomposition,
) -> Result<IsometryDecomposition> {
    verify_isometry_certificate(b, cert, m)?;
    Ok(cert.clone())
}

/// Spectral split of an algebraic strict m-isometry in the floating backend.
///
/// Membership and parity are checked exactly first; the split itself
/// clusters eigenvalues (gap [`spectral::CLUSTER_GAP`]) and is verified to
/// [`spectral::REL_TOL`].
pub fn isometry_decompose(b: &QMatrix, m: usize) -> Result<IsometryDecomposition<Complex64>> {
    check_strict_isometry(b, m)?;
    let bf: Matrix<Complex64> = b.map_to(|z| z.to_complex64());
    let (u, n) = spectral::semisimple_split(&bf)?;
    let nil_index = (m + 1) / 2;
    let scale = spectral::frobenius(&bf).max(1.0);
    let tol = spectral::REL_TOL;
    let residual = |x: &Matrix<Complex64>| spectral::frobenius(x);
    let unitary_defect = residual(&(&(&u * &u.conj_transpose()) - &Matrix::identity(u.dim())));
    if unitary_defect > tol * (u.dim() as f64).sqrt() {
        return Err(Error::NumericallyDegenerate(format!("‖UU* − I‖ = {unitary_defect:e}")));
    }
    let comm = residual(&(&(&u * &n) - &(&n * &u)));
    if comm > tol * scale * scale {
        return Err(Error::NumericallyDegenerate(format!("‖[U,N]‖ = {comm:e}")));
    }
    let np = residual(&n.pow(nil_index));
    if np > tol * scale.powi(nil_index as i32) {
        return Err(Error::NumericallyDegenerate(format!("‖N^{nil_index}‖ = {np:e}")));
    }
    Ok(IsometryDecomposition { unitary_part: u, nilpotent_part: n, nil_index })
}

/// n-Jordan operators: with `S` Hermitian, `[S,N] = 0`, `Nⁿ = 0`,
/// `A = S + N` satisfies `δ^{2n−1}_{A*,A}(I) = 0`. Returns the minimal order of `(A*, A)`.
pub fn jordan_order_bound(s: &QMatrix, n_matrix: &QMatrix) -> Result<usize> {
    if s.conj_transpose() != *s {
        return Err(Error::Precondition("S is not Hermitian".into()));
    }
    require_commuting(s, n_matrix, "S,N")?;
    let n = n_matrix.nilpotency_index().ok_or(Error::NotNilpotent)?;
    let a = s + n_matrix;
    let pair = OperatorPair::new(a.conj_transpose(), a, Kind::DeltaC)?;
    let bound = 2 * n - 1;
    if !is_member(&pair, bound) {
        return Err(Error::Violation(format!("(A*, A) is not a δ-member of order {bound}")));
    }
    let seq = defect_sequence(&pair, bound);
    Ok((1..=bound).find(|&r| seq.get(r).is_zero()).unwrap_or(bound))
}
