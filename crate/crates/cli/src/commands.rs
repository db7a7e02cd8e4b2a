//! Command implementations. Each returns a [`Run`]: the report plus the exit code.
//!
//! Commands take file contents rather than paths so they can be driven
//! without touching the filesystem; the binary does the reading.

use elemop::constructions::{commuting_decompose, perturb};
use elemop::generators::{Ex22, Ex32, Ex44, FixtureName};
use elemop::json::{conjugation_to_json, matrix_from_json, matrix_to_json};
use elemop::linalg::family_rank;
use elemop::{
    classify, defect, is_member, is_strict_member, twisted_family, FamilyShape, GaussianRational, Kind,
    OperatorPair, QMatrix, Sign,
};

use crate::report::{digest, Check, Run, RunReport, EXIT_BUDGET, EXIT_OK};
use crate::search::run_search;
use crate::suites::{run_suite, SuiteOptions, SUITES};

fn order_text(o: Option<usize>, max: usize) -> String {
    o.map_or_else(|| format!("none ≤ {max}"), |m| m.to_string())
}

fn parse_pair(a_json: &str, b_json: &str, kind: Kind) -> elemop::Result<OperatorPair> {
    let a = matrix_from_json(a_json)?;
    let b = matrix_from_json(b_json)?;
    OperatorPair::new(a, b, kind)
}

/// Membership of `(A, B)` at order `m` and its minimal order up to `max_order`.
pub fn cmd_check(a_json: &str, b_json: &str, kind: Kind, m: usize, max_order: usize) -> Run {
    let inputs = digest([a_json, b_json, kind.name(), &m.to_string(), &max_order.to_string()]);
    let pair = match parse_pair(a_json, b_json, kind) {
        Ok(p) => p,
        Err(e) => return Run::usage("check", inputs, e),
    };
    let mut report = RunReport::new("check", inputs);
    let d = defect(&pair, m);
    let mut member = Check::new(format!("{}^{m}(I) = 0", kind.name()), "zero", if d.is_zero() { "zero" } else { "nonzero" }, d.is_zero());
    if !member.passed {
        member = member.with_witness(format!("{}^{m}(I)", kind.name()), &d);
    }
    report.push(member);
    let c = classify(&pair, max_order);
    report.push(Check::new("minimal order", "-", order_text(c.minimal_order, max_order), true));
    Run::from_report(report)
}

fn zero_check(name: &str, m: &QMatrix) -> Check {
    Check::matrix(name, &QMatrix::zeros(m.dim()), m)
}

fn nonzero_check(name: &str, m: &QMatrix) -> Check {
    Check::new(name, "nonzero", if m.is_zero() { "zero" } else { "nonzero" }, !m.is_zero())
}

fn order_check(name: &str, pair: &OperatorPair, expected: usize) -> Check {
    let bound = expected.max(12);
    let c = classify(pair, bound).minimal_order;
    let mut check = Check::new(name, expected, order_text(c, bound), c == Some(expected));
    if !check.passed {
        check = check.with_witness(format!("d^{expected}(I)"), &defect(pair, expected));
    }
    check
}

fn reproduce_ex22(ex: &Ex22) -> Vec<Check> {
    let (a, b) = (&ex.a_param, &ex.b_param);
    let ab = a * b;
    let ab2 = &ab * &ab;
    let a_star = ex.a.conj_transpose();
    let corner = |i: usize, j: usize, v: &GaussianRational| {
        let mut m = QMatrix::zeros(3);
        m.set(i, j, v.clone());
        m
    };
    let d4 = defect(&ex.pair, 4);
    let mut checks = vec![
        zero_check("A^3 = 0", &ex.a.pow(3)),
        Check::matrix("DAD = A", &ex.a, ex.pair.b()),
        zero_check("delta^5(I) = 0", &defect(&ex.pair, 5)),
        Check::matrix("(A*)^2 as displayed", &corner(2, 0, &ab), &a_star.pow(2)),
        Check::matrix("DA^2D as displayed", &corner(0, 2, &ab), &ex.d.apply(&ex.a.pow(2)).expect("3×3")),
        Check::matrix("delta^4(I) = diag(0,0,a^2b^2) as displayed", &corner(2, 2, &ab2), &d4),
        Check::matrix(
            "delta^4(I) = C(4,2)·(A*)^2·A^2 = diag(0,0,6a^2b^2)",
            &corner(2, 2, &(&GaussianRational::from_int(6) * &ab2)),
            &d4,
        ),
        nonzero_check("delta^4(I) != 0", &d4),
        order_check("(A*, DAD) strict order", &ex.pair, 5),
    ];
    let fam = twisted_family(&ex.pair, 5, 4, 0, Sign::Minus, FamilyShape::Left).expect("t = m − 1");
    checks.push(zero_check("L_{A*}^4 delta^0(I) = 0", &fam[0]));
    checks.push(zero_check("L_{A*}^3 delta^1(I) = 0", &fam[1]));
    let defects: Vec<QMatrix> = (0..5).map(|r| defect(&ex.pair, r)).collect();
    let r1 = family_rank(&defects);
    checks.push(Check::new("rank {delta^r(I)}, r = 0..4", "5", r1, r1 == 5));
    let r2 = family_rank(&fam);
    checks.push(Check::new("rank {L_{A*}^{4-r} delta^r(I)}, r = 0..4", "< 5", r2, r2 < 5));
    checks
}

fn reproduce_ex32(ex: &Ex32) -> Vec<Check> {
    let a_star = ex.base.a.conj_transpose();
    let d2 = defect(&ex.pair_c, 2);
    let d4 = defect(&ex.base.pair, 4);
    let twisted = &(&(&a_star.pow(2) * &ex.base.d.apply(&a_star.pow(4)).expect("3×3")) * &d2) * &d4;
    vec![
        Check::new(
            "[C, D] = 0",
            "true",
            ex.c.commutes_with(&ex.base.d).expect("3×3"),
            ex.c.commutes_with(&ex.base.d).expect("3×3"),
        ),
        order_check("(A*, CAC) strict order", &ex.pair_c, 3),
        order_check("(A*, DAD) strict order", &ex.base.pair, 5),
        order_check("((A*)^2, CAC·DAD) strict order", &ex.product, 7),
        zero_check("(A*)^2 D(A*)^4D delta_{A*,CAC}^2(I) delta_{A*,DAD}^4(I) = 0", &twisted),
        nonzero_check("delta_{A*,CAC}^2(I) != 0", &d2),
        nonzero_check("delta_{A*,DAD}^4(I) != 0", &d4),
    ]
}

fn reproduce_ex44(m: usize, n: usize, seed: u64) -> elemop::Result<Vec<Check>> {
    let mut checks = Vec::new();
    for kind in [Kind::Delta, Kind::DeltaC] {
        let ex = Ex44::new(kind, m, n, seed)?;
        let k = kind.name();
        let dim = ex.n1.dim();
        checks.push(nonzero_check(&format!("{k}: d^{}_{{A,B}}(I) != 0", m - 1), &defect(&ex.base, m - 1)));
        checks.push(nonzero_check(&format!("{k}: N^{} != 0", n - 1), &ex.perturbation.pow(n - 1)));
        checks.push(nonzero_check(&format!("{k}: A^{} != 0", n - 1), &ex.base.a().pow(n - 1)));
        let shifted = OperatorPair::new(QMatrix::identity(dim), &QMatrix::identity(dim) + &ex.n1, kind)?;
        let block_ok = (0..=m + n).all(|r| defect(&ex.perturbed, r) == defect(&shifted, r).direct_sum(&defect(&ex.inner.pair, r)));
        checks.push(Check::new(
            format!("{k}: d^r_{{A,B+N}}(I⊕I) = d^r_{{I,I+N1}}(I) ⊕ d^r_{{A1,B1}}(I), r ≤ {}", m + n),
            "true",
            block_ok,
            block_ok,
        ));
        checks.push(Check::new(
            format!("{k}: (I, I+N1) strict order {n}"),
            "true",
            is_strict_member(&shifted, n),
            is_strict_member(&shifted, n),
        ));
        checks.push(order_check(&format!("{k}: (A1, B1) strict order"), &ex.inner.pair, m));
        let t = m.max(n);
        checks.push(order_check(&format!("{k}: (A, B+N) strict order max{{m,n}}"), &ex.perturbed, t));
        checks.push(Check::new(format!("{k}: max{{m,n}} < m+n-1"), "true", t < m + n - 1, t < m + n - 1));
        let d = defect(&ex.base, m - 1);
        let witness = match kind {
            Kind::Delta => &(&ex.base.a().pow(n - 1) * &d) * &ex.perturbation.pow(n - 1),
            Kind::DeltaC => &d * &ex.perturbation.pow(n - 1),
        };
        let label = match kind {
            Kind::Delta => "L_A^{n-1} R_N^{n-1} Delta^{m-1}(I) = 0",
            Kind::DeltaC => "R_N^{n-1} delta^{m-1}(I) = 0",
        };
        checks.push(zero_check(&format!("{k}: {label}"), &witness));
        let cert = perturb(&ex.base, Some(&ex.perturbation), None)?;
        checks.push(Check::new(format!("{k}: perturbation engine agrees"), "not strict", if cert.strict { "strict" } else { "not strict" }, !cert.strict && cert.witness == witness));
    }
    Ok(checks)
}

/// Parameters of `reproduce`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReproduceParams {
    pub a: GaussianRational,
    pub b: GaussianRational,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

impl Default for ReproduceParams {
    fn default() -> Self {
        Self {
            a: GaussianRational::from_int(1),
            b: GaussianRational::from_int(2),
            m: 2,
            n: 2,
            seed: elemop::generators::EX44_SEED,
        }
    }
}

pub fn cmd_reproduce(example: &str, params: &ReproduceParams) -> Run {
    let inputs = digest([
        example.to_string(),
        params.a.to_wire(),
        params.b.to_wire(),
        params.m.to_string(),
        params.n.to_string(),
        params.seed.to_string(),
    ]);
    let command = format!("reproduce {example}");
    let checks = match example.parse::<FixtureName>() {
        Ok(FixtureName::Ex22) => Ex22::new(params.a.clone(), params.b.clone()).map(|e| reproduce_ex22(&e)),
        Ok(FixtureName::Ex32) => Ex22::new(params.a.clone(), params.b.clone())
            .and_then(Ex32::new)
            .map(|e| reproduce_ex32(&e)),
        Ok(FixtureName::Ex44) => {
            if params.m < 2 || params.n < 2 {
                Err(elemop::Error::Precondition("ex44 needs m, n ≥ 2".into()))
            } else {
                reproduce_ex44(params.m, params.n, params.seed)
            }
        }
        Err(e) => Err(e),
    };
    match checks {
        Ok(checks) => {
            let mut report = RunReport::new(command, inputs);
            checks.into_iter().for_each(|c| report.push(c));
            Run::from_report(report)
        }
        Err(e) => Run::usage(&command, inputs, e),
    }
}

/// Runs one suite, or all of them for `"all"`.
pub fn cmd_verify(name: &str, opts: &SuiteOptions) -> Run {
    let inputs = digest([
        name.to_string(),
        opts.trials.to_string(),
        opts.seed.to_string(),
        opts.dim.to_string(),
        opts.entry_bound.to_string(),
    ]);
    let command = format!("verify {name}");
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    if opts.dim == 0 || opts.entry_bound == 0 {
        return Run::usage(&command, inputs, "dim and entry-bound must be at least 1");
    }
    let mut report = RunReport::new(command.clone(), inputs.clone());
    for s in names {
        let Some(result) = run_suite(s, opts) else {
            return Run::usage(&command, inputs, format!("unknown theorem name {s:?}"));
        };
        let mut check = Check::new(
            s,
            format!("0 violations in {} trials", result.trials),
            format!("{} violations; {}", result.violations.len(), result.tag_summary()),
            result.passed(),
        );
        if let Some(v) = result.violations.first() {
            check.actual = format!("{} violations; first at trial {}: {}", result.violations.len(), v.trial, v.message);
            check.witnesses = v.witnesses.clone();
        }
        report.push(check);
    }
    Run::from_report(report)
}

pub fn cmd_search(target: &str, budget: usize, seed: u64) -> Run {
    let inputs = digest([target.to_string(), budget.to_string(), seed.to_string()]);
    let command = format!("search {target}");
    let Some(result) = run_search(target, budget, seed) else {
        return Run::usage(&command, inputs, format!("unknown search target {target:?}"));
    };
    let mut report = RunReport::new(command, inputs);
    match result.found {
        Some(f) => {
            let mut c = Check::new("witness", "found", format!("candidate {}: {}", f.candidate, f.description), true);
            c.witnesses = f.witnesses;
            report.push(c);
            Run::new(report.finish(), EXIT_OK)
        }
        None => {
            report.push(Check::new("witness", "found", format!("none in {budget} candidates"), false));
            Run::new(report.finish(), EXIT_BUDGET)
        }
    }
}

/// `A = B⁻¹ + N` (Δ) or `A = B + N` (δ) for a commuting member pair.
pub fn cmd_decompose(a_json: &str, b_json: &str, kind: Kind) -> Run {
    let inputs = digest([a_json, b_json, kind.name()]);
    let pair = match parse_pair(a_json, b_json, kind) {
        Ok(p) => p,
        Err(e) => return Run::usage("decompose", inputs, e),
    };
    let mut report = RunReport::new("decompose", inputs);
    match commuting_decompose(&pair) {
        Ok(d) => {
            let m = d.nil_index;
            report.push(Check::matrix("A = invertible part + N", pair.a(), &(&d.invertible_part + &d.nilpotent_part)));
            report.push(zero_check(&format!("N^{m} = 0"), &d.nilpotent_part.pow(m)));
            report.push(zero_check("[B, N] = 0", &pair.b().commutator(&d.nilpotent_part).expect("same dim")));
            report.push(Check::new("minimal order = nilpotency index", m, order_text(classify(&pair, 12).minimal_order, 12), is_member(&pair, m)));
            let inv_name = match kind {
                Kind::Delta => "B^-1",
                Kind::DeltaC => "B",
            };
            report.push(
                Check::new("decomposition", "found", format!("nilpotency index {m}"), true)
                    .with_witness("N", &d.nilpotent_part)
                    .with_witness(inv_name, &d.invertible_part),
            );
        }
        Err(e) => report.push(Check::new("decomposition", "found", e, false)),
    }
    Run::from_report(report)
}

/// Fixture matrices as `(file stem, JSON)` pairs.
pub fn fixture_files(name: FixtureName) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut put = |stem: &str, m: &QMatrix| out.push((format!("{}_{stem}", name.name()), matrix_to_json(m)));
    match name {
        FixtureName::Ex22 => {
            let e = Ex22::default();
            put("a", &e.a);
            put("a_star", e.pair.a());
            put("dad", e.pair.b());
        }
        FixtureName::Ex32 => {
            let e = Ex32::default();
            put("a_star", e.pair_c.a());
            put("cac", &e.cac);
            put("dad", e.base.pair.b());
            put("product_a", e.product.a());
            put("product_b", e.product.b());
        }
        FixtureName::Ex44 => {
            let e = Ex44::default();
            put("a", e.base.a());
            put("b", e.base.b());
            put("n", &e.perturbation);
            put("perturbed_b", e.perturbed.b());
        }
    }
    match name {
        FixtureName::Ex22 => out.push(("ex22_d".into(), conjugation_to_json(&Ex22::default().d))),
        FixtureName::Ex32 => out.push(("ex32_c".into(), conjugation_to_json(&Ex32::default().c))),
        FixtureName::Ex44 => {}
    }
    out
}

/// Report listing the exported fixture files; the binary writes them.
pub fn cmd_export(name: &str) -> (Run, Vec<(String, String)>) {
    let inputs = digest([name]);
    let command = format!("export {name}");
    let Ok(fixture) = name.parse::<FixtureName>() else {
        return (Run::usage(&command, inputs, format!("unknown fixture {name:?}")), Vec::new());
    };
    let files = fixture_files(fixture);
    let mut report = RunReport::new(command, inputs);
    for (stem, json) in &files {
        report.push(Check::new(format!("{stem}.json"), "written", format!("{} bytes", json.len()), true));
    }
    (Run::from_report(report), files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Outcome, EXIT_NEGATIVE, EXIT_USAGE};

    fn id_json(n: usize) -> String {
        matrix_to_json(&QMatrix::identity(n))
    }

    #[test]
    fn check_identity_pair() {
        let r = cmd_check(&id_json(2), &id_json(2), Kind::Delta, 1, 12);
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(r.report.outcome, Outcome::Pass);
    }

    #[test]
    fn check_ex22_pair() {
        let files = fixture_files(FixtureName::Ex22);
        let get = |s: &str| files.iter().find(|f| f.0 == s).unwrap().1.clone();
        let r = cmd_check(&get("ex22_a_star"), &get("ex22_dad"), Kind::DeltaC, 5, 12);
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(r.report.details[1].actual, "5");
        let r = cmd_check(&get("ex22_a_star"), &get("ex22_dad"), Kind::DeltaC, 4, 12);
        assert_eq!(r.exit_code, EXIT_NEGATIVE);
        assert!(!r.report.details[0].witnesses.is_empty());
    }

    #[test]
    fn check_usage_errors() {
        assert_eq!(cmd_check("{", &id_json(2), Kind::Delta, 1, 12).exit_code, EXIT_USAGE);
        assert_eq!(cmd_check(&id_json(3), &id_json(2), Kind::Delta, 1, 12).exit_code, EXIT_USAGE);
    }

    #[test]
    fn decompose_identity_and_non_commuting() {
        let r = cmd_decompose(&id_json(2), &id_json(2), Kind::Delta);
        assert_eq!(r.exit_code, EXIT_OK);
        let files = fixture_files(FixtureName::Ex22);
        let get = |s: &str| files.iter().find(|f| f.0 == s).unwrap().1.clone();
        let r = cmd_decompose(&get("ex22_a_star"), &get("ex22_dad"), Kind::DeltaC);
        assert_eq!(r.exit_code, EXIT_NEGATIVE);
        assert!(r.report.details[0].actual.contains("commutator"), "{:?}", r.report.details);
    }

    #[test]
    fn reproduce_ex44_passes() {
        let r = cmd_reproduce("ex44", &ReproduceParams::default());
        assert_eq!(r.exit_code, EXIT_OK, "{}", r.report.to_text());
    }

    #[test]
    fn unknown_names_are_usage_errors() {
        assert_eq!(cmd_reproduce("ex99", &ReproduceParams::default()).exit_code, EXIT_USAGE);
        assert_eq!(cmd_verify("nope", &SuiteOptions::default()).exit_code, EXIT_USAGE);
        assert_eq!(cmd_search("nope", 1, 0).exit_code, EXIT_USAGE);
        assert_eq!(cmd_export("nope").0.exit_code, EXIT_USAGE);
    }
}
