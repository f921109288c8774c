//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as its own test target without the libtest harness so every line
//! is printed. A criterion listed in `DOCUMENTED_FAILURES` is still
//! evaluated and still reported as FAIL, but does not fail the target.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use toricbv::bv::{
    admissible_family_builds, build_operator, classify_round_trip, existence, verify_operator, vertex_consequence,
};
use toricbv::fanfile::{corpus, corpus_fan};
use toricbv::oracles::{
    compare_chart_bracket, compare_lattice_points, oracle_axioms, oracle_closure, oracle_contraction_lemma,
    oracle_torus, AlgebraTables, OracleReport, DEFAULT_SEED,
};
use toricbv::{CharacterVector, Fan, PolyvectorSpace};

/// Criteria whose literal target is known to be unattainable, with the reason.
const DOCUMENTED_FAILURES: [(usize, &str); 1] = [(
    1,
    "F1 has 6 global vector fields (2 torus directions + 4 Demazure roots); the target value 7 does not hold",
)];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Block-sum count: a point of codimension i contributes C(n − i, k − i).
fn block_sum(space: &PolyvectorSpace) -> Vec<usize> {
    let n = space.dim();
    (0..=n)
        .map(|k| space.points().iter().filter(|p| p.stratum <= k).map(|p| binomial(n - p.stratum, k - p.stratum)).sum())
        .collect()
}

/// Demazure roots of a complete surface fan: m with ⟨m, ρ⟩ = −1 for exactly
/// one ray and ⟨m, ρ'⟩ ≥ 0 for the others. For small fans the roots lie in
/// a small box.
fn demazure_roots(fan: &Fan) -> usize {
    let r = 6i64;
    let mut count = 0;
    for a in -r..=r {
        for b in -r..=r {
            let pairs: Vec<i64> = fan.rays().iter().map(|e| a * e.coords()[0] + b * e.coords()[1]).collect();
            if pairs.iter().filter(|&&v| v == -1).count() == 1 && pairs.iter().all(|&v| v >= -1) {
                count += 1;
            }
        }
    }
    count
}

fn first_failure(reports: &[OracleReport]) -> Option<String> {
    reports
        .iter()
        .find(|r| !r.passed)
        .map(|r| format!("{} on {}: {}", r.check, r.instance, r.counterexample.clone().unwrap_or_default()))
}

fn space(name: &str) -> PolyvectorSpace {
    PolyvectorSpace::new(&corpus_fan(name).expect("bundled fan")).expect("valid fan")
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> (T, bool, Duration) {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    (out, took <= limit, took)
}

fn criterion_1() -> Outcome {
    let expected: [(&str, &[usize]); 3] = [("P1", &[1, 3]), ("P2", &[1, 8, 10]), ("P1xP1", &[1, 6, 9])];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, dims) in expected {
        let (s, fast, _) = timed(Duration::from_secs(1), || space(name));
        let good = s.dims() == dims && block_sum(&s) == dims && fast;
        ok &= good;
        notes.push(format!("{name} {:?}", s.dims()));
    }
    let p3 = space("P3");
    let pgl4 = 4 * 4 - 1;
    ok &= p3.dims()[1] == pgl4 && block_sum(&p3) == p3.dims();
    notes.push(format!("P3 degree 1 = {} (PGL4: {pgl4})", p3.dims()[1]));
    for s in corpus().iter().map(|f| PolyvectorSpace::new(f).unwrap()) {
        ok &= s.dims()[s.dim()] == s.points().len() && block_sum(&s) == s.dims();
        if s.dim() == 2 {
            // degree 1 = dim Aut⁰ = 2 + number of Demazure roots
            ok &= s.dims()[1] == 2 + demazure_roots(s.fan());
        }
    }
    let f1 = space("F1");
    let f1_deg1 = f1.dims()[1];
    let f1_ok = f1_deg1 == 7;
    notes.push(format!("F1 degree 1 = {f1_deg1} (target 7, Demazure count {})", 2 + demazure_roots(f1.fan())));
    outcome(ok && f1_ok, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["P1", "P2", "P3", "P1xP1", "F0", "F1", "F2", "F3", "dP6", "blowup16"] {
        let (sol, fast, _) = timed(Duration::from_secs(1), || {
            let s = space(name);
            existence(s.polytope(), s.points()).unwrap()
        });
        let want = name == "blowup16";
        let shape = if want { sol.solution_dim() == Some(2) } else { sol.certificate.is_some() };
        ok &= sol.exists == want && shape && fast;
        notes.push(format!("{name}: {}", if sol.exists { format!("exists (dim {})", sol.kernel.len()) } else { "none".into() }));
    }
    outcome(ok, notes.join(", "))
}

fn criterion_3() -> Outcome {
    let s = space("blowup16");
    let ((failure, cases), fast, took) = timed(Duration::from_secs(10), || {
        let mut failure = None;
        let mut cases = 0;
        for d in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            let op = build_operator(&CharacterVector::from_i64(&d), &s).unwrap();
            let report = verify_operator(&op, &s, DEFAULT_SEED);
            cases += report.checks.iter().map(|c| c.cases).sum::<usize>();
            failure = failure.or(first_failure(&report.checks));
        }
        (failure, cases)
    });
    outcome(failure.is_none() && fast, failure.unwrap_or(format!("4 deltas, {cases} cases, {took:.2?}")))
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for fan in corpus() {
        let s = PolyvectorSpace::new(&fan).unwrap();
        let (reports, fast, took) = timed(Duration::from_secs(60), || {
            oracle_axioms(&AlgebraTables::from_space(&s, None).unwrap(), DEFAULT_SEED)
        });
        if let Some(f) = first_failure(&reports) {
            notes.push(f);
        }
        ok &= reports.iter().all(|r| r.passed) && fast;
        let triples = reports.iter().find(|r| r.check == "Jacobi identity").unwrap().cases;
        notes.push(format!("{} ({} basis, {triples} triples, {took:.1?})", fan.name().unwrap(), s.total_dim()));
    }
    outcome(ok, notes.join(", "))
}

fn criterion_5() -> Outcome {
    let reports: Vec<OracleReport> =
        corpus().iter().map(|f| oracle_closure(&PolyvectorSpace::new(f).unwrap()).unwrap()).collect();
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let failure = first_failure(&reports);
    outcome(failure.is_none(), failure.unwrap_or(format!("{cases} products and brackets checked")))
}

fn criterion_6() -> Outcome {
    let mut reports = Vec::new();
    let mut controls = 0;
    for fan in corpus() {
        let s = PolyvectorSpace::new(&fan).unwrap();
        let sol = existence(s.polytope(), s.points()).unwrap();
        reports.push(vertex_consequence(&s, &sol));
        reports.push(admissible_family_builds(&s, &sol));
        let rt = classify_round_trip(&s, &sol);
        controls += if sol.exists { rt.cases - sol.sample_deltas().len() } else { rt.cases };
        reports.push(rt);
    }
    let failure = first_failure(&reports);
    outcome(failure.is_none() && controls >= 3, failure.unwrap_or(format!("{controls} negative controls rejected")))
}

fn criterion_7() -> Outcome {
    let mut reports: Vec<OracleReport> = corpus().iter().filter(|f| f.dim() <= 3).map(compare_lattice_points).collect();
    let contraction = oracle_contraction_lemma(200, DEFAULT_SEED, 3).unwrap();
    let mut pairs = Vec::new();
    for name in ["P1", "P2"] {
        let r = compare_chart_bracket(&space(name), 20, DEFAULT_SEED).unwrap();
        pairs.push(r.cases);
        reports.push(r);
    }
    let enough = contraction.cases >= 200 && pairs.iter().all(|&p| p >= 20);
    reports.push(contraction);
    let failure = first_failure(&reports);
    outcome(failure.is_none() && enough, failure.unwrap_or(format!("chart pairs {pairs:?}, 200 contraction trials")))
}

fn criterion_8() -> Outcome {
    let (reports, fast, took) = timed(Duration::from_secs(5), || oracle_torus(2, 2).unwrap());
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let failure = first_failure(&reports);
    outcome(failure.is_none() && fast, failure.unwrap_or(format!("{cases} cases in {took:.2?}")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("dimension table", criterion_1),
        ("BV existence", criterion_2),
        ("operator verification", criterion_3),
        ("Gerstenhaber axioms", criterion_4),
        ("closure", criterion_5),
        ("solution-space consequences", criterion_6),
        ("oracle equivalence", criterion_7),
        ("torus algebra", criterion_8),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        let o = run();
        let documented = DOCUMENTED_FAILURES.iter().find(|(n, _)| *n == number);
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {number} [{status}] {name}: {}", o.detail);
        match (o.passed, documented) {
            (false, Some((_, why))) => println!("    documented failure: {why}"),
            (false, None) => unexpected += 1,
            (true, _) => {}
        }
    }
    if unexpected == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
