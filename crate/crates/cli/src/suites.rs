//! Randomized property suites, one per result.
//!
//! Each trial draws its instances from its own seed (derived from the run
//! seed and the trial index), so trials are independent and may run in
//! parallel; results are sorted by trial index before they are reported.

use std::collections::BTreeMap;

use elemop::constructions::{
    commuting_decompose, isometry_decompose, isometry_pair, jordan_order_bound, order2_commutativity, perturb,
    product_pair, sum_pair_deltac, tensor_nilpotent_two_of_three, tensor_pair, tensor_two_of_three,
    two_of_three_consistent, verify_isometry_certificate,
};
use elemop::generators::{
    gen_algebraic_isometry, gen_commuting_family, gen_commuting_member, gen_isometry_pair, gen_jordan_operator,
    gen_nilpotent, Certificate, Ex44, GeneratedPair, GeneratorConfig,
};
use elemop::spectral::frobenius;
use elemop::{
    classify, defect, defect_binomial, defect_family_independent, defect_sequence, descent_reduce, is_member,
    lemma21_sets_independent, Error, GaussianRational, Kind, OperatorPair, QMatrix, Sign,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::Witness;

pub const SUITES: [&str; 17] = [
    "persistence",
    "powers",
    "inverse",
    "lemma21",
    "descent",
    "thm31-product",
    "prop33-tensor",
    "thm41-perturb",
    "cor42",
    "cor43",
    "prop45-sum",
    "prop47-two-of-three",
    "thm51-decompose",
    "thm51b-order2",
    "prop52-isometry",
    "oracle",
    "rem46-jordan",
];

/// Largest order the suites classify up to.
const MAX_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub dim: usize,
    pub entry_bound: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { trials: 100, seed: 0, dim: 3, entry_bound: 5 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub trial: usize,
    pub message: String,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub trials: usize,
    pub violations: Vec<Violation>,
    /// Tag counts over all trials (instance kinds, orders seen, ...).
    pub tags: BTreeMap<String, usize>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn tag_summary(&self) -> String {
        self.tags.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ")
    }
}

/// A failed trial.
#[derive(Debug)]
pub struct Fail {
    message: String,
    witnesses: Vec<Witness>,
}

impl Fail {
    fn new(message: impl Into<String>) -> Self {
        Self { message: message.into(), witnesses: Vec::new() }
    }

    fn with(mut self, name: &str, m: &QMatrix) -> Self {
        self.witnesses.push(Witness::new(name, m));
        self
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::new(e.to_string())
    }
}

type Trial = std::result::Result<Vec<String>, Fail>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> std::result::Result<(), Fail> {
    if cond {
        Ok(())
    } else {
        Err(Fail::new(message()))
    }
}

/// Per-trial randomness and a generator config with the trial's seed.
struct Ctx {
    index: usize,
    cfg: GeneratorConfig,
    rng: ChaCha8Rng,
}

impl Ctx {
    fn new(opts: &SuiteOptions, index: usize) -> Result<Self, Error> {
        let seed = opts.seed.wrapping_mul(1_000_003).wrapping_add(index as u64);
        let cfg = GeneratorConfig::new(seed, opts.dim, opts.entry_bound)?;
        Ok(Self { index, cfg, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    /// Config with a fresh seed, for a second independent instance.
    fn fresh(&mut self) -> GeneratorConfig {
        self.cfg.with_seed(self.rng.gen())
    }

    /// Kinds alternate with the trial index.
    fn kind(&self) -> Kind {
        if self.index % 2 == 0 {
            Kind::Delta
        } else {
            Kind::DeltaC
        }
    }

    fn upto(&mut self, hi: usize) -> usize {
        self.rng.gen_range(1..=hi)
    }

    /// A member of the given kind from one of the generator families.
    fn member(&mut self, kind: Kind) -> Result<(GeneratedPair, &'static str), Error> {
        let cfg = self.fresh();
        let dim = cfg.dim;
        match (kind, self.rng.gen_range(0..3)) {
            (Kind::Delta, 0) => {
                let m = 2 * self.rng.gen_range(0..dim.min(3)) + 1;
                Ok((gen_isometry_pair(&cfg, m)?, "isometry"))
            }
            (Kind::DeltaC, 0) => {
                let n = self.upto(dim);
                Ok((gen_jordan_operator(&cfg, n)?, "jordan"))
            }
            _ => {
                let m = self.upto(dim);
                Ok((gen_commuting_member(&cfg, kind, m)?, "commuting"))
            }
        }
    }
}

/// `Σ_{j ≥ j0} c_j N^j` with `c_{j0} ≠ 0`; its index is `⌈k / j0⌉` when `N` has index `k`.
fn nilpotent_polynomial(rng: &mut ChaCha8Rng, n: &QMatrix, k: usize, j0: usize, bound: i64) -> QMatrix {
    let mut out = QMatrix::zeros(n.dim());
    let mut power = n.pow(j0);
    for j in j0..k {
        let c = if j == j0 {
            rng.gen_range(1..=bound) * if rng.gen_bool(0.5) { 1 } else { -1 }
        } else {
            rng.gen_range(-bound..=bound)
        };
        out = &out + &power.scale(&GaussianRational::from_int(c));
        power = &power * n;
    }
    out
}

/// `c₀I + Σ c_j N^j` with `c₀ ≠ 0`.
fn unit_polynomial(rng: &mut ChaCha8Rng, n: &QMatrix, k: usize, bound: i64) -> QMatrix {
    let c0 = GaussianRational::ratio(rng.gen_range(1..=bound), rng.gen_range(1..=bound));
    let mut b = QMatrix::identity(n.dim()).scale(&c0);
    let mut power = QMatrix::identity(n.dim());
    for _ in 1..k {
        power = &power * n;
        b = &b + &power.scale(&GaussianRational::from_int(rng.gen_range(-bound..=bound)));
    }
    b
}

fn certified_nilpotent(g: &GeneratedPair) -> Option<&QMatrix> {
    match &g.certificate {
        Certificate::Commuting { nilpotent, .. } => Some(nilpotent),
        _ => None,
    }
}

/// A nilpotent commuting with every polynomial in the member's own
/// nilpotent, and its index. Falls back to a fresh nilpotent when the
/// member is scalar (order 1), where everything commutes.
fn commuting_nilpotent(ctx: &mut Ctx, g: &GeneratedPair) -> Result<(QMatrix, usize), Error> {
    let n = certified_nilpotent(g).expect("commuting member");
    let bound = i64::from(ctx.cfg.entry_bound);
    let k = g.certified_order;
    if k == 1 {
        let idx = ctx.upto(ctx.cfg.dim);
        let cfg = ctx.fresh();
        return Ok((gen_nilpotent(&cfg, idx)?, idx));
    }
    let j0 = ctx.upto(k - 1);
    let p = nilpotent_polynomial(&mut ctx.rng, n, k, j0, bound);
    Ok((p, k.div_ceil(j0)))
}

fn persistence(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (g, family) = ctx.member(kind)?;
    let m = g.certified_order;
    let seq = defect_sequence(&g.pair, m + 3);
    ensure(!seq.get(m - 1).is_zero(), || format!("d^{}(I) = 0 for certified order {m}", m - 1))?;
    for r in m..=m + 3 {
        if !seq.get(r).is_zero() {
            return Err(Fail::new(format!("d^{m}(I) = 0 but d^{r}(I) ≠ 0")).with("defect", seq.get(r)));
        }
    }
    let c = classify(&g.pair, MAX_ORDER);
    ensure(c.minimal_order == Some(m), || format!("classify gives {:?}, certified {m}", c.minimal_order))?;
    Ok(vec![format!("{}-{family}", kind.name())])
}

fn powers(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (g, family) = ctx.member(kind)?;
    let m = g.certified_order;
    for n in 1..=4 {
        let p = g.pair.power(n);
        if !is_member(&p, m) {
            return Err(Fail::new(format!("(A^{n}, B^{n}) is not a member at order {m}")).with("defect", &defect(&p, m)));
        }
        // The converse holds on families whose invertible part survives powers.
        if family != "jordan" {
            let c = classify(&p, MAX_ORDER).minimal_order;
            ensure(c == Some(m), || format!("(A^{n}, B^{n}) has minimal order {c:?}, base {m}"))?;
        }
    }
    Ok(vec![family.to_string()])
}

fn inverse(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (g, family) = ctx.member(kind)?;
    if !(g.pair.a().is_invertible() && g.pair.b().is_invertible()) {
        ensure(kind == Kind::DeltaC, || "Δ-member with a singular factor".into())?;
        return Ok(vec!["singular-skipped".into()]);
    }
    let inv = g.pair.inverse()?;
    let c = classify(&inv, MAX_ORDER).minimal_order;
    ensure(c == Some(g.certified_order), || format!("inverse pair has order {c:?}, base {}", g.certified_order))?;
    Ok(vec![family.to_string()])
}

fn lemma21(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (g, family) = ctx.member(kind)?;
    ensure(defect_family_independent(&g.pair)?, || "defect family is dependent".into())?;
    if kind == Kind::Delta {
        let m = g.certified_order;
        let t = m - 1 + ctx.rng.gen_range(0..3);
        let s = m - 1 + ctx.rng.gen_range(0..3);
        let sign = if ctx.rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        ensure(lemma21_sets_independent(&g.pair, t, s, sign)?, || {
            format!("twisted families dependent at t = {t}, s = {s}, {sign:?}")
        })?;
    }
    Ok(vec![format!("{}-{family}", kind.name())])
}

fn descent(ctx: &mut Ctx) -> Trial {
    let (g, family) = ctx.member(Kind::Delta)?;
    let m = g.certified_order;
    let n = ctx.upto(3);
    ensure(descent_reduce(&g.pair, m, n)?, || format!("hypothesis fails at the true order {m}, n = {n}"))?;
    if m >= 2 {
        ensure(!descent_reduce(&g.pair, m - 1, n)?, || format!("hypothesis holds below the true order, n = {n}"))?;
    }
    Ok(vec![family.to_string()])
}

fn strict_tag(strict: bool) -> String {
    if strict { "strict" } else { "not-strict" }.to_string()
}

/// Two pairs with `[A₁,A₂] = 0 = [B₁,B₂]`.
fn commuting_two(ctx: &mut Ctx, kind: Kind) -> Result<(OperatorPair, OperatorPair, &'static str), Error> {
    let cfg = ctx.fresh();
    if ctx.rng.gen_bool(0.3) {
        // A member and one of its own powers.
        let (g, family) = ctx.member(kind)?;
        let j = ctx.upto(3);
        return Ok((g.pair.clone(), g.pair.power(j), family));
    }
    let fam = gen_commuting_family(&cfg, kind, 2)?;
    Ok((fam[0].pair.clone(), fam[1].pair.clone(), "family"))
}

fn thm31_product(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (p1, p2, family) = commuting_two(ctx, kind)?;
    let c = product_pair(&p1, &p2)?;
    Ok(vec![format!("{}-{family}", kind.name()), strict_tag(c.strict)])
}

fn prop33_tensor(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (g1, _) = ctx.member(kind)?;
    let (g2, _) = ctx.member(kind)?;
    let c = tensor_pair(&g1.pair, &g2.pair)?;
    if kind == Kind::Delta {
        let m = (g1.certified_order + ctx.rng.gen_range(0..3)).saturating_sub(1).max(1);
        let n = (g2.certified_order + ctx.rng.gen_range(0..3)).saturating_sub(1).max(1);
        let flags = tensor_two_of_three(&g1.pair, m, &g2.pair, n)?;
        ensure(two_of_three_consistent(flags), || format!("exactly two of three hold: {flags:?} at m = {m}, n = {n}"))?;
    }
    Ok(vec![kind.name().to_string(), strict_tag(c.strict)])
}

/// A member with a commuting right nilpotent, or the direct-sum shape.
fn perturbation_instance(ctx: &mut Ctx, kind: Kind) -> Result<(OperatorPair, QMatrix, Option<QMatrix>), Error> {
    if ctx.rng.gen_bool(0.25) {
        let m = ctx.rng.gen_range(2..=3);
        let n = ctx.rng.gen_range(2..=3);
        let seed = ctx.rng.gen();
        let ex = Ex44::new(kind, m, n, seed)?;
        return Ok((ex.base, ex.perturbation, None));
    }
    let cfg = ctx.fresh();
    let m = ctx.upto(cfg.dim);
    let g = gen_commuting_member(&cfg, kind, m)?;
    let (right, _) = commuting_nilpotent(ctx, &g)?;
    let (left, _) = commuting_nilpotent(ctx, &g)?;
    Ok((g.pair, right, Some(left)))
}

fn thm41_perturb(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (base, right, _) = perturbation_instance(ctx, kind)?;
    let c = perturb(&base, Some(&right), None)?;
    Ok(vec![kind.name().to_string(), strict_tag(c.strict)])
}

fn cor42(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (base, right, left) = perturbation_instance(ctx, kind)?;
    let Some(left) = left else {
        // Direct-sum shape: perturb on the right only.
        perturb(&base, Some(&right), None)?;
        return Ok(vec!["direct-sum".into()]);
    };
    let c = perturb(&base, Some(&right), Some(&left))?;
    ensure(is_member(&c.perturbed, c.order_bound), || "order bound fails".into())?;
    Ok(vec![kind.name().to_string(), strict_tag(c.strict)])
}

fn cor43(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let bound = i64::from(ctx.cfg.entry_bound);
    let k = ctx.upto(ctx.cfg.dim);
    let cfg = ctx.fresh();
    let n0 = gen_nilpotent(&cfg, k)?;
    let b = unit_polynomial(&mut ctx.rng, &n0, k, bound);
    let j0 = ctx.upto(k);
    let n = nilpotent_polynomial(&mut ctx.rng, &n0, k, j0, bound);
    let index = n.nilpotency_index().ok_or(Error::NotNilpotent)?;
    let a = match kind {
        Kind::Delta => b.inverse()?,
        Kind::DeltaC => b.clone(),
    };
    let base = OperatorPair::new(a, b, kind)?;
    ensure(is_member(&base, 1), || "base is not an order-1 member".into())?;
    let c = perturb(&base, Some(&n), None)?;
    let order = classify(&c.perturbed, MAX_ORDER).minimal_order;
    ensure(order == Some(index), || format!("minimal order {order:?}, nilpotency index {index}"))?;
    ensure(c.strict, || "criterion reports non-strict".into())?;
    Ok(vec![format!("n={index}")])
}

fn prop45_sum(ctx: &mut Ctx) -> Trial {
    let (p1, p2, family) = commuting_two(ctx, Kind::DeltaC)?;
    let c = sum_pair_deltac(&p1, &p2)?;
    Ok(vec![family.to_string(), strict_tag(c.strict)])
}

fn prop47_two_of_three(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let (g, _) = ctx.member(kind)?;
    let k = ctx.upto(ctx.cfg.dim.min(3));
    let true_index = ctx.upto(k);
    let cfg = ctx.fresh().with_dim(k);
    let nil = gen_nilpotent(&cfg, true_index)?;
    let m = if ctx.rng.gen_bool(0.5) { g.certified_order } else { ctx.upto(g.certified_order + 1) };
    let n = if ctx.rng.gen_bool(0.5) { true_index } else { ctx.upto(k) };
    let flags = tensor_nilpotent_two_of_three(&g.pair, &nil, m, n)?;
    ensure(two_of_three_consistent(flags), || format!("exactly two of three hold: {flags:?} at m = {m}, n = {n}"))?;
    Ok(vec![format!("{}{}{}", flags.0 as u8, flags.1 as u8, flags.2 as u8)])
}

fn thm51_decompose(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let m = ctx.upto(ctx.cfg.dim);
    let cfg = ctx.fresh();
    let g = gen_commuting_member(&cfg, kind, m)?;
    let Certificate::Commuting { base, nilpotent } = &g.certificate else { unreachable!() };
    let d = commuting_decompose(&g.pair)?;
    let expected_inv = match kind {
        Kind::Delta => base.inverse()?,
        Kind::DeltaC => base.clone(),
    };
    ensure(d.invertible_part == expected_inv, || "invertible part differs from construction".into())?;
    if &d.nilpotent_part != nilpotent {
        return Err(Fail::new("nilpotent part differs from construction").with("N", &d.nilpotent_part));
    }
    ensure(d.nilpotent_part.pow(m).is_zero(), || format!("N^{m} ≠ 0"))?;
    ensure(g.pair.b().commutes_with(&d.nilpotent_part)?, || "[B, N] ≠ 0".into())?;
    ensure(d.nil_index == m, || format!("index {} ≠ {m}", d.nil_index))?;
    Ok(vec![kind.name().to_string()])
}

fn thm51b_order2(ctx: &mut Ctx) -> Trial {
    let kind = ctx.kind();
    let m = ctx.upto(2.min(ctx.cfg.dim));
    let cfg = ctx.fresh();
    let g = gen_commuting_member(&cfg, kind, m)?;
    ensure(order2_commutativity(&g.pair)?, || "order-2 statement fails".into())?;
    ensure(g.pair.a().commutes_with(g.pair.b())?, || "[A, B] ≠ 0".into())?;
    if kind == Kind::Delta {
        ensure(g.pair.b().is_invertible(), || "B is singular".into())?;
    }
    Ok(vec![format!("{}-m{m}", kind.name())])
}

fn prop52_isometry(ctx: &mut Ctx) -> Trial {
    let m = [1, 3, 5, 7][ctx.index % 4];
    let cfg = ctx.fresh();
    let (b, cert) = gen_algebraic_isometry(&cfg, m)?;
    let order = classify(&isometry_pair(&b), MAX_ORDER).minimal_order;
    ensure(order == Some(m), || format!("classified order {order:?}, constructed {m}"))?;
    ensure(m % 2 == 1 && 2 * cert.nil_index - 1 == m, || "order is not 2·(nil index) − 1".into())?;
    verify_isometry_certificate(&b, &cert, m)?;
    if m == 1 {
        // Diagonalizable unitary: the floating finder must return N ≈ 0.
        let f = isometry_decompose(&b, m)?;
        let n = frobenius(&f.nilpotent_part);
        ensure(n < 1e-9, || format!("floating nilpotent part has norm {n:e}"))?;
    }
    Ok(vec![format!("order={m}")])
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> QMatrix {
    QMatrix::from_fn(dim, |_, _| {
        let re = rng.gen_range(-bound..=bound);
        let im = if rng.gen_bool(0.25) { rng.gen_range(-bound..=bound) } else { 0 };
        GaussianRational::complex(re, 1, im, 1)
    })
}

fn oracle(ctx: &mut Ctx) -> Trial {
    let dim = ctx.upto(4);
    let bound = i64::from(ctx.cfg.entry_bound.min(3));
    let kind = ctx.kind();
    let pair = OperatorPair::new(random_matrix(&mut ctx.rng, dim, bound), random_matrix(&mut ctx.rng, dim, bound), kind)?;
    for m in 0..=6 {
        let (r, b) = (defect(&pair, m), defect_binomial(&pair, m));
        if r != b {
            return Err(Fail::new(format!("recurrence and binomial sum differ at m = {m}"))
                .with("recurrence", &r)
                .with("binomial", &b));
        }
    }
    Ok(vec![format!("dim={dim}")])
}

fn rem46_jordan(ctx: &mut Ctx) -> Trial {
    let n = ctx.upto(ctx.cfg.dim);
    let cfg = ctx.fresh();
    let g = gen_jordan_operator(&cfg, n)?;
    let Certificate::Jordan { selfadjoint, nilpotent } = &g.certificate else { unreachable!() };
    let bound = jordan_order_bound(selfadjoint, nilpotent)?;
    ensure(bound == 2 * n - 1, || format!("minimal order {bound}, expected {}", 2 * n - 1))?;
    let c = classify(&g.pair, MAX_ORDER).minimal_order;
    ensure(c == Some(2 * n - 1), || format!("classify gives {c:?}"))?;
    Ok(vec![format!("n={n}")])
}

fn trial_fn(name: &str) -> Option<fn(&mut Ctx) -> Trial> {
    Some(match name {
        "persistence" => persistence,
        "powers" => powers,
        "inverse" => inverse,
        "lemma21" => lemma21,
        "descent" => descent,
        "thm31-product" => thm31_product,
        "prop33-tensor" => prop33_tensor,
        "thm41-perturb" => thm41_perturb,
        "cor42" => cor42,
        "cor43" => cor43,
        "prop45-sum" => prop45_sum,
        "prop47-two-of-three" => prop47_two_of_three,
        "thm51-decompose" => thm51_decompose,
        "thm51b-order2" => thm51b_order2,
        "prop52-isometry" => prop52_isometry,
        "oracle" => oracle,
        "rem46-jordan" => rem46_jordan,
        _ => return None,
    })
}

pub fn is_suite(name: &str) -> bool {
    trial_fn(name).is_some()
}

/// Runs a suite; `None` for an unknown name.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Option<SuiteResult> {
    let f = trial_fn(name)?;
    let mut results: Vec<(usize, Trial)> = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let outcome = match Ctx::new(opts, i) {
                Ok(mut ctx) => f(&mut ctx),
                Err(e) => Err(e.into()),
            };
            (i, outcome)
        })
        .collect();
    results.sort_by_key(|r| r.0);
    let mut tags = BTreeMap::new();
    let mut violations = Vec::new();
    for (trial, outcome) in results {
        match outcome {
            Ok(ts) => {
                for t in ts {
                    *tags.entry(t).or_insert(0) += 1;
                }
            }
            Err(f) => violations.push(Violation { trial, message: f.message, witnesses: f.witnesses }),
        }
    }
    Some(SuiteResult { name: name.to_string(), trials: opts.trials, violations, tags })
}
