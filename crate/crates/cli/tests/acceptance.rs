//! Acceptance gate: one line per criterion.
//!
//! Criteria 1 and 2 assert displayed values that exact arithmetic refutes.
//! They are evaluated as stated and reported FAIL; the run only errors if
//! they fail on anything other than those refuted sub-checks, or if any
//! other criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use elemop::constructions::isometry_decompose;
use elemop::spectral::frobenius;
use elemop::QMatrix;
use elemop_cli::commands::{cmd_reproduce, ReproduceParams};
use elemop_cli::report::RunReport;
use elemop_cli::suites::{run_suite, SuiteOptions};

struct Line {
    id: u32,
    title: &'static str,
    passed: bool,
    note: String,
    /// Failure that is analysed and expected; does not fail the run.
    expected_red: bool,
}

fn failing_checks(r: &RunReport) -> Vec<String> {
    r.details.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
}

fn reproduction(id: u32, title: &'static str, example: &str, refuted: &[&str]) -> Line {
    let t = Instant::now();
    let run = cmd_reproduce(example, &ReproduceParams::default());
    let elapsed = t.elapsed();
    let failing = failing_checks(&run.report);
    let fast = elapsed < Duration::from_secs(1);
    let passed = failing.is_empty() && fast;
    let only_refuted = fast && !failing.is_empty() && failing.iter().all(|f| refuted.contains(&f.as_str()));
    let mut note = format!("{} checks, runtime {:.3}s", run.report.details.len(), elapsed.as_secs_f64());
    for c in run.report.details.iter().filter(|c| !c.passed) {
        note.push_str(&format!("; {}: expected {}, actual {}", c.name, c.expected, c.actual));
    }
    Line { id, title, passed, note, expected_red: only_refuted }
}

fn suites(id: u32, title: &'static str, runs: &[(&str, usize)]) -> Line {
    let mut notes = Vec::new();
    let mut passed = true;
    for &(name, trials) in runs {
        let opts = SuiteOptions { trials, ..SuiteOptions::default() };
        let r = run_suite(name, &opts).expect("known suite");
        passed &= r.passed();
        notes.push(format!("{name} {}/{} ({})", r.trials - r.violations.len(), r.trials, r.tag_summary()));
        for v in r.violations.iter().take(3) {
            notes.push(format!("  trial {}: {}", v.trial, v.message));
        }
    }
    Line { id, title, passed, note: notes.join("; "), expected_red: false }
}

fn isometries() -> Line {
    let mut line = suites(9, "algebraic m-isometries: odd order, certificate, float finder", &[("prop52-isometry", 20)]);
    let b = QMatrix::from_int_rows(&[&[1, 1], &[0, 1]]).unwrap();
    let cx = |m: &QMatrix| m.map_to(|z| z.to_complex64());
    match isometry_decompose(&b, 3) {
        Ok(d) => {
            let eu = frobenius(&(&d.unitary_part - &cx(&QMatrix::identity(2))));
            let en = frobenius(&(&d.nilpotent_part - &cx(&QMatrix::unit(2, 0, 1))));
            let ok = eu <= 1e-9 && en <= 1e-9 && d.nil_index == 2;
            line.passed &= ok;
            line.note.push_str(&format!("; I+E12 finder |U-I| = {eu:.1e}, |N-E12| = {en:.1e}, nil index {}", d.nil_index));
        }
        Err(e) => {
            line.passed = false;
            line.note.push_str(&format!("; I+E12 finder error: {e}"));
        }
    }
    line
}

fn full_cli() -> Line {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_elemop")).args(["verify", "all"]).output().expect("run elemop");
    let elapsed = t.elapsed();
    let code = out.status.code();
    let passed = code == Some(0) && elapsed < Duration::from_secs(60);
    Line {
        id: 10,
        title: "`elemop verify all` under 60 s, exit 0",
        passed,
        note: format!("exit {code:?}, runtime {:.1}s", elapsed.as_secs_f64()),
        expected_red: false,
    }
}

fn main() {
    let lines = vec![
        reproduction(
            1,
            "3×3 δ fixture (a=1, b=2) reproduction",
            "ex22",
            &["delta^4(I) = diag(0,0,a^2b^2) as displayed"],
        ),
        reproduction(2, "3×3 product fixture reproduction", "ex32", &["((A*)^2, CAC·DAD) strict order"]),
        reproduction(3, "direct-sum perturbation fixture (m=n=2), both kinds", "ex44", &[]),
        suites(4, "recurrence = binomial oracle, dim ≤ 4, m ≤ 6", &[("oracle", 500)]),
        suites(5, "persistence, power, inverse closure", &[("persistence", 100), ("powers", 100), ("inverse", 100)]),
        suites(6, "product and tensor criteria vs classify, 50 per kind", &[("thm31-product", 100), ("prop33-tensor", 100)]),
        suites(
            7,
            "perturbation, sum, and two-of-three bounds",
            &[("thm41-perturb", 50), ("cor42", 50), ("cor43", 50), ("prop45-sum", 50), ("prop47-two-of-three", 50)],
        ),
        suites(
            8,
            "commuting decomposition (100 per kind) and order-2 commutativity (50 per kind)",
            &[("thm51-decompose", 200), ("thm51b-order2", 100)],
        ),
        isometries(),
        full_cli(),
    ];

    let mut unexpected = 0;
    for l in &lines {
        let verdict = if l.passed { "PASS" } else { "FAIL" };
        let tag = if !l.passed && l.expected_red { " [known: displayed value refuted]" } else { "" };
        println!("criterion {:>2} {verdict}{tag}  {}  ({})", l.id, l.title, l.note);
        if !l.passed && !l.expected_red {
            unexpected += 1;
        }
    }
    let passed = lines.iter().filter(|l| l.passed).count();
    println!("acceptance: {passed}/{} pass, {unexpected} unexpected failure(s)", lines.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
