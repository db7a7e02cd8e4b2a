//! Seeded random instances with construction certificates, and the fixed
//! worked examples.
//!
//! Every generator is a pure function of its [`GeneratorConfig`]; the same
//! seed always yields the same matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{Kind, OperatorPair};
use crate::conjugation::Conjugation;
use crate::constructions::IsometryDecomposition;
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::scalar::{GaussianRational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub dim: usize,
    /// Integer entries of random coefficients lie in `[-entry_bound, entry_bound]`.
    pub entry_bound: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { seed: 0, dim: 3, entry_bound: 5 }
    }
}

impl GeneratorConfig {
    pub fn new(seed: u64, dim: usize, entry_bound: u32) -> Result<Self> {
        let cfg = Self { seed, dim, entry_bound };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be at least 1".into()));
        }
        if self.entry_bound == 0 {
            return Err(Error::InvalidConfig("entry_bound must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_dim(self, dim: usize) -> Self {
        Self { dim, ..self }
    }

    /// Independent stream per generator, so different generators with one
    /// seed do not share randomness.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn bound(&self) -> i64 {
        i64::from(self.entry_bound)
    }
}

/// What the generator knows about its output, independent of any classifier.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `A = B⁻¹ + N` (Δ) or `A = B + N` (δ) with `[B, N] = 0`.
    Commuting { base: QMatrix, nilpotent: QMatrix },
    /// The pair is `(B*, B)` with `B = U + N`.
    Isometry(IsometryDecomposition),
    /// The pair is `(A*, A)` with `A = S + N`, `S` Hermitian, `[S, N] = 0`.
    Jordan { selfadjoint: QMatrix, nilpotent: QMatrix },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedPair {
    pub pair: OperatorPair,
    /// Minimal order known from the construction.
    pub certified_order: usize,
    pub certificate: Certificate,
}

fn int_in(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

fn nonzero_rational(rng: &mut ChaCha8Rng, bound: i64) -> GaussianRational {
    GaussianRational::ratio(nonzero_int(rng, bound), rng.gen_range(1..=bound))
}

/// Block sizes summing to `dim`, the first equal to `index`, none larger.
fn block_sizes(rng: &mut ChaCha8Rng, dim: usize, index: usize) -> Vec<usize> {
    let mut sizes = vec![index];
    let mut left = dim - index;
    while left > 0 {
        let s = rng.gen_range(1..=left.min(index));
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// Nilpotent Jordan form with the given blocks.
fn jordan_shift(sizes: &[usize]) -> QMatrix {
    let dim = sizes.iter().sum();
    let mut j = QMatrix::zeros(dim);
    let mut start = 0;
    for &s in sizes {
        for k in 0..s.saturating_sub(1) {
            j.set(start + k, start + k + 1, GaussianRational::one());
        }
        start += s;
    }
    j
}

/// Unimodular integer `P = L·U` with its exact inverse.
fn unimodular(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> (QMatrix, QMatrix) {
    let c = bound.min(2);
    let lower = QMatrix::from_fn(dim, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => GaussianRational::one(),
        std::cmp::Ordering::Greater => GaussianRational::from_int(int_in(rng, c)),
        std::cmp::Ordering::Less => GaussianRational::zero(),
    });
    let upper = QMatrix::from_fn(dim, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => GaussianRational::one(),
        std::cmp::Ordering::Less => GaussianRational::from_int(int_in(rng, c)),
        std::cmp::Ordering::Greater => GaussianRational::zero(),
    });
    let p = &lower * &upper;
    let p_inv = p.inverse().expect("unit triangular factors");
    (p, p_inv)
}

fn nilpotent_with(rng: &mut ChaCha8Rng, dim: usize, index: usize, bound: i64) -> QMatrix {
    let j = jordan_shift(&block_sizes(rng, dim, index));
    let (p, p_inv) = unimodular(rng, dim, bound);
    &(&p * &j) * &p_inv
}

fn check_index(index: usize, dim: usize) -> Result<()> {
    if index == 0 {
        return Err(Error::Precondition("nilpotency index must be at least 1".into()));
    }
    if index > dim {
        return Err(Error::IndexTooLarge { index, dim });
    }
    Ok(())
}

/// Nilpotent of dimension `cfg.dim` with index exactly `index`.
pub fn gen_nilpotent(cfg: &GeneratorConfig, index: usize) -> Result<QMatrix> {
    cfg.validate()?;
    check_index(index, cfg.dim)?;
    Ok(nilpotent_with(&mut cfg.rng(1), cfg.dim, index, cfg.bound()))
}

/// `c₀I + Σ_{j≥1} c_j N^j` with `c₀ ≠ 0`: invertible and commuting with `N`.
fn unit_polynomial(rng: &mut ChaCha8Rng, n: &QMatrix, index: usize, bound: i64) -> QMatrix {
    let mut b = QMatrix::identity(n.dim()).scale(&nonzero_rational(rng, bound));
    let mut power = QMatrix::identity(n.dim());
    for _ in 1..index {
        power = &power * n;
        b = &b + &power.scale(&GaussianRational::from_int(int_in(rng, bound)));
    }
    b
}

fn commuting_pair(kind: Kind, b: QMatrix, n: QMatrix, order: usize) -> GeneratedPair {
    let a = match kind {
        Kind::Delta => &b.inverse().expect("unit polynomial is invertible") + &n,
        Kind::DeltaC => &b + &n,
    };
    GeneratedPair {
        pair: OperatorPair::new(a, b.clone(), kind).expect("same dimension"),
        certified_order: order,
        certificate: Certificate::Commuting { base: b, nilpotent: n },
    }
}

/// Commuting member of minimal order `m`: `A = B⁻¹ + N` (Δ) or `A = B + N` (δ).
pub fn gen_commuting_member(cfg: &GeneratorConfig, kind: Kind, m: usize) -> Result<GeneratedPair> {
    cfg.validate()?;
    check_index(m, cfg.dim)?;
    let mut rng = cfg.rng(2);
    let n = nilpotent_with(&mut rng, cfg.dim, m, cfg.bound());
    let b = unit_polynomial(&mut rng, &n, m, cfg.bound());
    Ok(commuting_pair(kind, b, n, m))
}

/// `count` commuting members whose `A`s and `B`s all commute with each other:
/// every matrix is a polynomial in one nilpotent `N₀`.
pub fn gen_commuting_family(cfg: &GeneratorConfig, kind: Kind, count: usize) -> Result<Vec<GeneratedPair>> {
    cfg.validate()?;
    let mut rng = cfg.rng(3);
    let bound = cfg.bound();
    let k = rng.gen_range(1..=cfg.dim);
    let n0 = nilpotent_with(&mut rng, cfg.dim, k, bound);
    let powers: Vec<QMatrix> = (0..k.max(1)).scan(QMatrix::identity(cfg.dim), |p, _| {
        let cur = p.clone();
        *p = &*p * &n0;
        Some(cur)
    }).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let j0 = rng.gen_range(1..=k);
        let mut n = QMatrix::zeros(cfg.dim);
        for (j, p) in powers.iter().enumerate().skip(j0) {
            let c = if j == j0 { nonzero_int(&mut rng, bound) } else { int_in(&mut rng, bound) };
            n = &n + &p.scale(&GaussianRational::from_int(c));
        }
        let b = unit_polynomial(&mut rng, &n0, k, bound);
        // N = N₀^{j0}·(unit), so its index is that of N₀^{j0}.
        out.push(commuting_pair(kind, b, n, k.div_ceil(j0)));
    }
    Ok(out)
}

const PYTHAGOREAN: [(i64, i64, i64); 5] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];

/// A unit-modulus Gaussian rational.
fn unimodular_scalar(rng: &mut ChaCha8Rng) -> GaussianRational {
    let choice = rng.gen_range(0..PYTHAGOREAN.len() + 1);
    let (a, b, c) = if choice == PYTHAGOREAN.len() { (1, 0, 1) } else { PYTHAGOREAN[choice] };
    let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
    let sa = if rng.gen_bool(0.5) { a } else { -a };
    let sb = if rng.gen_bool(0.5) { b } else { -b };
    GaussianRational::complex(sa, c, sb, c)
}

/// Rational orthogonal matrix by the Cayley transform `(I − K)(I + K)⁻¹` of a
/// skew-symmetric integer `K`.
fn rational_orthogonal(rng: &mut ChaCha8Rng, dim: usize) -> QMatrix {
    let mut k = QMatrix::zeros(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v = int_in(rng, 1);
            k.set(i, j, GaussianRational::from_int(v));
            k.set(j, i, GaussianRational::from_int(-v));
        }
    }
    let id = QMatrix::identity(dim);
    &(&id - &k) * &(&id + &k).inverse().expect("I + K is invertible for real skew K")
}

/// Block-scalar plus commuting nilpotent: `(⊕ λᵢI, ⊕ Mᵢ)` with the first
/// block of size and index `index`, optionally conjugated by a rational
/// orthogonal `Q`.
fn block_structure(
    rng: &mut ChaCha8Rng,
    dim: usize,
    index: usize,
    bound: i64,
    mut scalar: impl FnMut(&mut ChaCha8Rng) -> GaussianRational,
) -> (QMatrix, QMatrix) {
    let mut diag = Vec::with_capacity(dim);
    let mut nil: Option<QMatrix> = None;
    for (b, &size) in block_sizes(rng, dim, index).iter().enumerate() {
        let lambda = scalar(rng);
        let block_index = if b == 0 { index } else { rng.gen_range(1..=size) };
        let m = nilpotent_with(rng, size, block_index, bound);
        diag.extend(std::iter::repeat(lambda).take(size));
        nil = Some(match nil {
            None => m,
            Some(acc) => acc.direct_sum(&m),
        });
    }
    let nil = nil.expect("at least one block");
    let s = QMatrix::diagonal(diag);
    if rng.gen_bool(0.5) {
        let q = rational_orthogonal(rng, dim);
        let qt = q.transpose();
        (&(&q * &s) * &qt, &(&q * &nil) * &qt)
    } else {
        (s, nil)
    }
}

/// `B = U + N`, `U` unitary with Pythagorean eigenvalues, `[U, N] = 0`,
/// `N` of index `(m+1)/2`; `B` is a strict m-isometry. Dimension is
/// `max(cfg.dim, (m+1)/2)`.
pub fn gen_algebraic_isometry(cfg: &GeneratorConfig, m: usize) -> Result<(QMatrix, IsometryDecomposition)> {
    cfg.validate()?;
    if m % 2 == 0 {
        return Err(Error::EvenOrderRequested(m));
    }
    let k = (m + 1) / 2;
    let dim = cfg.dim.max(k);
    let mut rng = cfg.rng(4);
    let (u, n) = block_structure(&mut rng, dim, k, cfg.bound(), unimodular_scalar);
    let b = &u + &n;
    Ok((b, IsometryDecomposition { unitary_part: u, nilpotent_part: n, nil_index: k }))
}

/// The Δ-pair `(B*, B)` of a generated algebraic m-isometry.
pub fn gen_isometry_pair(cfg: &GeneratorConfig, m: usize) -> Result<GeneratedPair> {
    let (b, cert) = gen_algebraic_isometry(cfg, m)?;
    Ok(GeneratedPair {
        pair: OperatorPair::new(b.conj_transpose(), b, Kind::Delta)?,
        certified_order: m,
        certificate: Certificate::Isometry(cert),
    })
}

/// `A = S + N` with `S` Hermitian (real symmetric), `[S, N] = 0`, `N` of
/// index `n`; the δ-pair `(A*, A)` has minimal order `2n − 1`.
pub fn gen_jordan_operator(cfg: &GeneratorConfig, n: usize) -> Result<GeneratedPair> {
    cfg.validate()?;
    check_index(n, cfg.dim)?;
    let mut rng = cfg.rng(5);
    let bound = cfg.bound();
    let (s, nil) = block_structure(&mut rng, cfg.dim, n, bound, |r| GaussianRational::from_int(int_in(r, bound)));
    let a = &s + &nil;
    Ok(GeneratedPair {
        pair: OperatorPair::new(a.conj_transpose(), a, Kind::DeltaC)?,
        certified_order: 2 * n - 1,
        certificate: Certificate::Jordan { selfadjoint: s, nilpotent: nil },
    })
}

/// Worked 3×3 example: `A = [[0,a,0],[0,0,b],[0,0,0]]`, `D` entrywise
/// conjugation, and the δ-pair `(A*, DAD)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ex22 {
    pub a_param: GaussianRational,
    pub b_param: GaussianRational,
    pub a: QMatrix,
    pub d: Conjugation,
    pub pair: OperatorPair,
}

impl Ex22 {
    pub fn new(a_param: GaussianRational, b_param: GaussianRational) -> Result<Self> {
        if !a_param.is_real() || !b_param.is_real() || a_param.is_zero() || b_param.is_zero() || a_param == b_param {
            return Err(Error::Precondition("a and b must be distinct non-zero reals".into()));
        }
        let z = GaussianRational::zero();
        let a = QMatrix::from_rows(vec![
            vec![z.clone(), a_param.clone(), z.clone()],
            vec![z.clone(), z.clone(), b_param.clone()],
            vec![z.clone(), z.clone(), z],
        ])?;
        let d = Conjugation::identity(3);
        let pair = OperatorPair::new(a.conj_transpose(), d.apply(&a)?, Kind::DeltaC)?;
        Ok(Self { a_param, b_param, a, d, pair })
    }
}

impl Default for Ex22 {
    fn default() -> Self {
        Self::new(GaussianRational::from_int(1), GaussianRational::from_int(2)).expect("valid defaults")
    }
}

/// Extends [`Ex22`] with the coordinate flip `C`, the δ-pair `(A*, CAC)`,
/// and the product pair `((A*)², CAC·DAD)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ex32 {
    pub base: Ex22,
    pub c: Conjugation,
    pub cac: QMatrix,
    pub pair_c: OperatorPair,
    pub product: OperatorPair,
}

impl Ex32 {
    pub fn new(base: Ex22) -> Result<Self> {
        let c = Conjugation::flip(3);
        let cac = c.apply(&base.a)?;
        let a_star = base.a.conj_transpose();
        let pair_c = OperatorPair::new(a_star.clone(), cac.clone(), Kind::DeltaC)?;
        let product = OperatorPair::new(a_star.pow(2), &cac * base.pair.b(), Kind::DeltaC)?;
        Ok(Self { base, c, cac, pair_c, product })
    }
}

impl Default for Ex32 {
    fn default() -> Self {
        Self::new(Ex22::default()).expect("valid defaults")
    }
}

/// Direct-sum perturbation: inner commuting pair `(A₁, B₁)` of order `m`,
/// nilpotent `N₁` of index `n`, base `(I ⊕ A₁, I ⊕ B₁)`, and the perturbed
/// pair `(I ⊕ A₁, (I + N₁) ⊕ B₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ex44 {
    pub kind: Kind,
    pub m: usize,
    pub n: usize,
    pub inner: GeneratedPair,
    pub n1: QMatrix,
    pub base: OperatorPair,
    pub perturbation: QMatrix,
    pub perturbed: OperatorPair,
}

pub const EX44_SEED: u64 = 44;

impl Ex44 {
    pub fn new(kind: Kind, m: usize, n: usize, seed: u64) -> Result<Self> {
        let dim = m.max(n).max(1);
        let cfg = GeneratorConfig::new(seed, dim, 3)?;
        let inner = gen_commuting_member(&cfg, kind, m)?;
        let n1 = gen_nilpotent(&cfg, n)?;
        let id = QMatrix::identity(dim);
        let base = OperatorPair::new(id.direct_sum(inner.pair.a()), id.direct_sum(inner.pair.b()), kind)?;
        let perturbation = n1.direct_sum(&QMatrix::zeros(dim));
        let perturbed = base.with(base.a().clone(), base.b() + &perturbation)?;
        Ok(Self { kind, m, n, inner, n1, base, perturbation, perturbed })
    }
}

impl Default for Ex44 {
    fn default() -> Self {
        Self::new(Kind::Delta, 2, 2, EX44_SEED).expect("valid defaults")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureName {
    Ex22,
    Ex32,
    Ex44,
}

impl FixtureName {
    pub const ALL: [FixtureName; 3] = [FixtureName::Ex22, FixtureName::Ex32, FixtureName::Ex44];

    pub fn name(self) -> &'static str {
        match self {
            FixtureName::Ex22 => "ex22",
            FixtureName::Ex32 => "ex32",
            FixtureName::Ex44 => "ex44",
        }
    }
}

impl std::str::FromStr for FixtureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown fixture {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fixture {
    Ex22(Ex22),
    Ex32(Ex32),
    Ex44(Ex44),
}

/// The fixture with its default parameters.
pub fn paper_fixture(name: FixtureName) -> Fixture {
    match name {
        FixtureName::Ex22 => Fixture::Ex22(Ex22::default()),
        FixtureName::Ex32 => Fixture::Ex32(Ex32::default()),
        FixtureName::Ex44 => Fixture::Ex44(Ex44::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::classify;

    #[test]
    fn nilpotent_has_exact_index() {
        for seed in 0..20 {
            let cfg = GeneratorConfig::new(seed, 4, 5).unwrap();
            for k in 1..=4 {
                assert_eq!(gen_nilpotent(&cfg, k).unwrap().nilpotency_index(), Some(k));
            }
        }
        let cfg = GeneratorConfig::default();
        assert_eq!(gen_nilpotent(&cfg, 4), Err(Error::IndexTooLarge { index: 4, dim: 3 }));
    }

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig::new(7, 3, 4).unwrap();
        assert_eq!(gen_commuting_member(&cfg, Kind::Delta, 3), gen_commuting_member(&cfg, Kind::Delta, 3));
        assert_ne!(gen_nilpotent(&cfg, 3), gen_nilpotent(&cfg.with_seed(8), 3));
    }

    #[test]
    fn invalid_config() {
        assert!(GeneratorConfig::new(0, 0, 1).is_err());
        assert!(GeneratorConfig::new(0, 2, 0).is_err());
    }

    #[test]
    fn certified_orders_match_classify() {
        for seed in 0..10 {
            let cfg = GeneratorConfig::new(seed, 3, 3).unwrap();
            for kind in [Kind::Delta, Kind::DeltaC] {
                for m in 1..=3 {
                    let g = gen_commuting_member(&cfg, kind, m).unwrap();
                    assert_eq!(classify(&g.pair, 12).minimal_order, Some(m));
                }
                for g in gen_commuting_family(&cfg, kind, 3).unwrap() {
                    assert_eq!(classify(&g.pair, 12).minimal_order, Some(g.certified_order));
                }
            }
            for m in [1, 3, 5] {
                let g = gen_isometry_pair(&cfg, m).unwrap();
                assert_eq!(classify(&g.pair, 12).minimal_order, Some(m));
            }
            for n in 1..=3 {
                let g = gen_jordan_operator(&cfg, n).unwrap();
                assert_eq!(classify(&g.pair, 12).minimal_order, Some(2 * n - 1), "seed {seed} n {n}");
            }
        }
    }

    #[test]
    fn isometry_rejects_even_order() {
        assert_eq!(gen_algebraic_isometry(&GeneratorConfig::default(), 4), Err(Error::EvenOrderRequested(4)));
    }

    #[test]
    fn fixtures_build() {
        let e = Ex22::default();
        assert_eq!(e.pair.b(), &e.a);
        assert!(Ex22::new(GaussianRational::from_int(1), GaussianRational::from_int(1)).is_err());
        let x = Ex32::default();
        assert_eq!(x.cac, QMatrix::from_int_rows(&[&[0, 0, 0], &[2, 0, 0], &[0, 1, 0]]).unwrap());
        let f = Ex44::default();
        assert_eq!(f.base.dim(), 4);
        assert_eq!("ex32".parse::<FixtureName>().unwrap(), FixtureName::Ex32);
    }
}
