//! Witness search for the sharpness of strictness criteria.
//!
//! `*-strictness` targets look for instances whose components are strict
//! (each `d^{k−1}(I) ≠ 0`) while the combined pair is not strict at the
//! summed order. `*-criterion` targets look for disagreement between a
//! strictness criterion and direct classification; by the theorems none
//! exists, so those searches are expected to exhaust their budget.

use elemop::constructions::{perturb, product_pair, sum_pair_deltac, tensor_pair};
use elemop::generators::{gen_commuting_family, gen_commuting_member, gen_nilpotent, Ex32, Ex44, GeneratorConfig};
use elemop::{classify, defect, Error, Kind, OperatorPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::Witness;

pub const TARGETS: [&str; 9] = [
    "product-delta-strictness",
    "product-deltac-strictness",
    "sum-strictness",
    "perturb-strictness",
    "product-criterion-delta",
    "product-criterion-deltac",
    "perturb-criterion",
    "sum-criterion",
    "tensor-criterion",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub candidate: usize,
    pub description: String,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub target: String,
    pub budget: usize,
    pub found: Option<Found>,
}

type Candidate = Result<Option<(String, Vec<Witness>)>, Error>;

struct Ctx {
    rng: ChaCha8Rng,
    index: usize,
}

impl Ctx {
    fn cfg(&mut self, dim: usize) -> GeneratorConfig {
        GeneratorConfig { seed: self.rng.gen(), dim, entry_bound: 3 }
    }
}

fn order_text(o: Option<usize>) -> String {
    o.map_or_else(|| "none".to_string(), |m| m.to_string())
}

fn pair_witnesses(prefix: &str, p: &OperatorPair) -> Vec<Witness> {
    vec![Witness::new(format!("{prefix}.A"), p.a()), Witness::new(format!("{prefix}.B"), p.b())]
}

/// The fixed 3×3 product instance: both component defects nonzero,
/// twisted product witness zero.
fn ex32_candidate() -> Candidate {
    let ex = Ex32::default();
    let a_star = ex.base.a.conj_transpose();
    let d2 = defect(&ex.pair_c, 2);
    let d4 = defect(&ex.base.pair, 4);
    let twisted = &(&(&a_star.pow(2) * &ex.base.d.apply(&a_star.pow(4))?) * &d2) * &d4;
    if d2.is_zero() || d4.is_zero() || !twisted.is_zero() {
        return Ok(None);
    }
    let mut w = pair_witnesses("p1", &ex.pair_c);
    w.extend(pair_witnesses("p2", &ex.base.pair));
    w.push(Witness::new("delta2_p1", &d2));
    w.push(Witness::new("delta4_p2", &d4));
    w.push(Witness::new("twisted_witness", &twisted));
    Ok(Some(("fixed 3×3 instance: δ²₁(I) ≠ 0 ≠ δ⁴₂(I), twisted witness = 0".into(), w)))
}

fn product_strictness(ctx: &mut Ctx, kind: Kind) -> Candidate {
    if kind == Kind::DeltaC && ctx.index == 0 {
        return ex32_candidate();
    }
    let dim = ctx.rng.gen_range(2..=3);
    let fam = gen_commuting_family(&ctx.cfg(dim), kind, 2)?;
    let c = product_pair(&fam[0].pair, &fam[1].pair)?;
    if c.strict {
        return Ok(None);
    }
    let mut w = pair_witnesses("p1", &c.pair1);
    w.extend(pair_witnesses("p2", &c.pair2));
    Ok(Some((
        format!(
            "strict orders {} and {}, product minimal order {} < {}",
            c.order1,
            c.order2,
            order_text(c.minimal_order),
            c.order_bound
        ),
        w,
    )))
}

fn sum_strictness(ctx: &mut Ctx) -> Candidate {
    let dim = ctx.rng.gen_range(2..=3);
    let fam = gen_commuting_family(&ctx.cfg(dim), Kind::DeltaC, 2)?;
    let c = sum_pair_deltac(&fam[0].pair, &fam[1].pair)?;
    if c.strict {
        return Ok(None);
    }
    let mut w = pair_witnesses("p1", &c.pair1);
    w.extend(pair_witnesses("p2", &c.pair2));
    Ok(Some((
        format!(
            "strict orders {} and {}, sum minimal order {} < {}",
            c.order1,
            c.order2,
            order_text(c.minimal_order),
            c.order_bound
        ),
        w,
    )))
}

fn perturb_strictness(ctx: &mut Ctx) -> Candidate {
    let kind = if ctx.rng.gen_bool(0.5) { Kind::Delta } else { Kind::DeltaC };
    let m = ctx.rng.gen_range(2..=3);
    let n = ctx.rng.gen_range(2..=3);
    let ex = Ex44::new(kind, m, n, ctx.rng.gen())?;
    let base_defect = defect(&ex.base, m - 1);
    let n_power = ex.perturbation.pow(n - 1);
    let a_power = ex.base.a().pow(n - 1);
    if base_defect.is_zero() || n_power.is_zero() || a_power.is_zero() {
        return Ok(None);
    }
    let c = perturb(&ex.base, Some(&ex.perturbation), None)?;
    if c.strict {
        return Ok(None);
    }
    let mut w = pair_witnesses("base", &ex.base);
    w.push(Witness::new("N", &ex.perturbation));
    Ok(Some((
        format!(
            "{} direct sum: base strict order {m}, N of index {n}, perturbed minimal order {} < {}",
            kind.name(),
            order_text(classify(&c.perturbed, 12).minimal_order),
            c.order_bound
        ),
        w,
    )))
}

/// A criterion/classify disagreement surfaces as a `Violation` error.
fn disagreement(result: Result<(), Error>) -> Candidate {
    match result {
        Err(Error::Violation(msg)) => Ok(Some((msg, Vec::new()))),
        Err(e) => Err(e),
        Ok(()) => Ok(None),
    }
}

fn product_criterion(ctx: &mut Ctx, kind: Kind) -> Candidate {
    let dim = ctx.rng.gen_range(2..=3);
    let fam = gen_commuting_family(&ctx.cfg(dim), kind, 2)?;
    let out = disagreement(product_pair(&fam[0].pair, &fam[1].pair).map(|_| ()))?;
    Ok(out.map(|(m, _)| {
        let mut w = pair_witnesses("p1", &fam[0].pair);
        w.extend(pair_witnesses("p2", &fam[1].pair));
        (m, w)
    }))
}

fn perturb_criterion(ctx: &mut Ctx) -> Candidate {
    let kind = if ctx.rng.gen_bool(0.5) { Kind::Delta } else { Kind::DeltaC };
    let dim = ctx.rng.gen_range(2..=3);
    let m = ctx.rng.gen_range(1..=dim);
    let g = gen_commuting_member(&ctx.cfg(dim), kind, m)?;
    // A nilpotent commuting with B: a power of the member's own nilpotent,
    // or any nilpotent when B is scalar.
    let elemop::generators::Certificate::Commuting { nilpotent, .. } = &g.certificate else {
        unreachable!("commuting member")
    };
    let right = if m == 1 {
        let idx = ctx.rng.gen_range(1..=dim);
        gen_nilpotent(&ctx.cfg(dim), idx)?
    } else {
        nilpotent.pow(ctx.rng.gen_range(1..m))
    };
    let out = disagreement(perturb(&g.pair, Some(&right), None).map(|_| ()))?;
    Ok(out.map(|(msg, _)| {
        let mut w = pair_witnesses("base", &g.pair);
        w.push(Witness::new("N", &right));
        (msg, w)
    }))
}

fn sum_criterion(ctx: &mut Ctx) -> Candidate {
    let dim = ctx.rng.gen_range(2..=3);
    let fam = gen_commuting_family(&ctx.cfg(dim), Kind::DeltaC, 2)?;
    disagreement(sum_pair_deltac(&fam[0].pair, &fam[1].pair).map(|_| ()))
}

fn tensor_criterion(ctx: &mut Ctx) -> Candidate {
    let kind = if ctx.rng.gen_bool(0.5) { Kind::Delta } else { Kind::DeltaC };
    let dim = 2;
    let m1 = ctx.rng.gen_range(1..=dim);
    let m2 = ctx.rng.gen_range(1..=dim);
    let p1 = gen_commuting_member(&ctx.cfg(dim), kind, m1)?;
    let p2 = gen_commuting_member(&ctx.cfg(dim), kind, m2)?;
    disagreement(tensor_pair(&p1.pair, &p2.pair).map(|_| ()))
}

fn candidate_fn(target: &str) -> Option<fn(&mut Ctx) -> Candidate> {
    Some(match target {
        "product-delta-strictness" => |c| product_strictness(c, Kind::Delta),
        "product-deltac-strictness" => |c| product_strictness(c, Kind::DeltaC),
        "sum-strictness" => sum_strictness,
        "perturb-strictness" => perturb_strictness,
        "product-criterion-delta" => |c| product_criterion(c, Kind::Delta),
        "product-criterion-deltac" => |c| product_criterion(c, Kind::DeltaC),
        "perturb-criterion" => perturb_criterion,
        "sum-criterion" => sum_criterion,
        "tensor-criterion" => tensor_criterion,
        _ => return None,
    })
}

pub fn is_target(name: &str) -> bool {
    candidate_fn(name).is_some()
}

const CHUNK: usize = 16;

/// Evaluates candidates `0..budget` (in parallel chunks) and returns the
/// lowest-index witness. `None` for an unknown target.
pub fn run_search(target: &str, budget: usize, seed: u64) -> Option<SearchResult> {
    let f = candidate_fn(target)?;
    let mut found = None;
    let mut start = 0;
    while start < budget && found.is_none() {
        let end = (start + CHUNK).min(budget);
        found = (start..end)
            .into_par_iter()
            .filter_map(|i| {
                let rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
                let mut ctx = Ctx { rng, index: i };
                // Candidates whose construction fails are skipped.
                f(&mut ctx).ok().flatten().map(|(description, witnesses)| Found { candidate: i, description, witnesses })
            })
            .min_by_key(|f| f.candidate);
        start = end;
    }
    Some(SearchResult { target: target.to_string(), budget, found })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strictness_targets_find_witnesses() {
        for t in ["product-delta-strictness", "product-deltac-strictness", "sum-strictness", "perturb-strictness"] {
            let r = run_search(t, 200, 0).unwrap();
            assert!(r.found.is_some(), "{t}");
        }
        let r = run_search("product-deltac-strictness", 1, 0).unwrap();
        assert_eq!(r.found.unwrap().candidate, 0);
    }

    #[test]
    fn criterion_targets_exhaust() {
        for t in ["product-criterion-delta", "product-criterion-deltac", "perturb-criterion", "sum-criterion", "tensor-criterion"] {
            let r = run_search(t, 40, 1).unwrap();
            assert!(r.found.is_none(), "{t}: {:?}", r.found);
        }
    }

    #[test]
    fn unknown_target() {
        assert!(run_search("nope", 1, 0).is_none());
    }
}
