//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use popbranch::augment::{delta_w, total_cost};
use popbranch::certificate::{verify_feasible, verify_popularity};
use popbranch::gen::GenParams;
use popbranch::io::{InstanceFile, ResultFile};
use popbranch::oracle::{
    brute_popular_exists, brute_popular_set, is_popular_exact, min_cost_arborescence, DEFAULT_CAP,
};
use popbranch::solver::{solve, NoneReason, SolveOptions, SolveOutcome};
use popbranch::{Arborescence, AugmentedDigraph, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus, corpus_params, instance, CORPUS_SIZE};

const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const SCALE_BUDGET: Duration = Duration::from_secs(10);
const COST_PAIRS: usize = 10_000;

/// Checks a certificate must pass on top of feasibility and objective.
const STRUCTURE_CHECKS: [&str; 7] = [
    "laminar",
    "two_layer",
    "entry_bijection",
    "non_entry_singletons",
    "single_entry",
    "tight_tree_edges",
    "entry_min_weight_in_bottom",
];

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

struct Record {
    params: GenParams,
    found: bool,
    hijackable: bool,
    /// Min-cost oracle agrees the output is popular.
    exact_ok: bool,
    report: Option<Report>,
    brute_nonempty: bool,
}

fn unweighted(d: &AugmentedDigraph) -> bool {
    d.vertices().all(|v| d.weight(v) == 1)
}

fn sweep() -> (Vec<Record>, Vec<bool>, Duration) {
    let start = Instant::now();
    let mut records = Vec::new();
    let mut unit = Vec::new();
    for (params, d) in corpus() {
        let outcome = solve(&d, SolveOptions::default()).expect("solver does not error");
        let (found, hijackable, exact_ok, report) = match &outcome {
            SolveOutcome::PopularFound {
                arborescence,
                certificate,
            } => {
                let exact = is_popular_exact(&d, arborescence).popular;
                let report = verify_feasible(&d, arborescence, certificate)
                    .merge(verify_popularity(&d, arborescence, certificate));
                (true, false, exact, Some(report))
            }
            SolveOutcome::NoneExists(reason) => (
                false,
                matches!(reason, NoneReason::Hijackable(_)),
                true,
                None,
            ),
            SolveOutcome::AssumptionViolated { .. } => {
                panic!("corpus enforces the weight condition")
            }
        };
        let brute_nonempty =
            brute_popular_exists(&d, DEFAULT_CAP).expect("corpus fits the enumeration cap");
        unit.push(unweighted(&d));
        records.push(Record {
            params,
            found,
            hijackable,
            exact_ok,
            report,
            brute_nonempty,
        });
    }
    (records, unit, start.elapsed())
}

fn soundness<'a>(records: impl Iterator<Item = &'a Record>) -> (usize, Vec<String>) {
    let mut found = 0;
    let mut bad = Vec::new();
    for r in records.filter(|r| r.found) {
        found += 1;
        let cert_ok = r.report.as_ref().is_some_and(|rep| rep.passed());
        if !r.exact_ok || !cert_ok {
            bad.push(format!("seed {}", r.params.seed));
        }
    }
    (found, bad)
}

fn completeness<'a>(records: impl Iterator<Item = &'a Record>) -> (usize, usize, Vec<String>) {
    let (mut total, mut none) = (0, 0);
    let mut bad = Vec::new();
    for r in records {
        total += 1;
        if !r.found {
            none += 1;
        }
        if r.found != r.brute_nonempty {
            bad.push(format!(
                "seed {} solver={} brute={}",
                r.params.seed, r.found, r.brute_nonempty
            ));
        }
    }
    (total, none, bad)
}

fn criterion_soundness(records: &[Record], elapsed: Duration) -> Verdict {
    let (found, bad) = soundness(records.iter());
    verdict(
        bad.is_empty() && elapsed < SWEEP_BUDGET,
        format!(
            "{found} popular_found of {} instances, {} failed oracle or certificate {:?}; sweep {:.1}s (budget {}s)",
            records.len(),
            bad.len(),
            bad.iter().take(5).collect::<Vec<_>>(),
            elapsed.as_secs_f64(),
            SWEEP_BUDGET.as_secs()
        ),
    )
}

fn criterion_completeness(records: &[Record]) -> Verdict {
    let (total, none, bad) = completeness(records.iter());
    verdict(
        bad.is_empty(),
        format!(
            "{}/{total} agree with brute force ({none} none_exists); disagreements {:?}",
            total - bad.len(),
            bad.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn criterion_unweighted(records: &[Record], unit: &[bool]) -> Verdict {
    let subset = || records.iter().zip(unit).filter(|(_, &u)| u).map(|(r, _)| r);
    let (found, unsound) = soundness(subset());
    let (total, none, disagree) = completeness(subset());
    verdict(
        total > 0 && unsound.is_empty() && disagree.is_empty(),
        format!(
            "{total} instances with w = 1: {found} popular_found all verified={}, {none} none_exists, {} disagreements",
            unsound.is_empty(),
            disagree.len()
        ),
    )
}

fn random_arborescence(d: &AugmentedDigraph, rng: &mut ChaCha8Rng) -> Arborescence {
    let costs: Vec<u64> = (0..d.base().edges().len() + d.n())
        .map(|_| rng.gen_range(0..1000))
        .collect();
    min_cost_arborescence(d, &costs).0
}

fn criterion_cost_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let graphs: Vec<AugmentedDigraph> = corpus().map(|(_, d)| d).collect();
    let mut failures = Vec::new();
    for k in 0..COST_PAIRS {
        let d = &graphs[k % graphs.len()];
        let a = random_arborescence(d, &mut rng);
        let b = random_arborescence(d, &mut rng);
        let lhs = total_cost(d, &a, &b) as i64 - total_cost(d, &a, &a) as i64;
        if lhs != delta_w(d, &a, &b) || total_cost(d, &a, &a) != d.total_weight() {
            failures.push(k);
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{COST_PAIRS} pairs, {} mismatches {:?}",
            failures.len(),
            &failures[..failures.len().min(5)]
        ),
    )
}

fn criterion_structure(records: &[Record]) -> Verdict {
    let mut certificates = 0;
    let mut violations = 0;
    let mut failing = Vec::new();
    let mut new_vertex_notes = 0;
    for r in records {
        let Some(report) = &r.report else { continue };
        certificates += 1;
        for name in
            STRUCTURE_CHECKS
                .iter()
                .chain(&["support_sets_valid", "edge_loads", "objective"])
        {
            let check = report.check(name).expect("report lists every check");
            if !check.passed {
                violations += check.violations.len().max(1);
                failing.push(format!("seed {} {name}", r.params.seed));
            }
        }
        if report.check("one_new_vertex").is_some_and(|c| !c.passed) {
            new_vertex_notes += 1;
        }
    }
    verdict(
        certificates > 0 && violations == 0,
        format!(
            "{certificates} certificates, {violations} violations {:?}; one-new-vertex notes (informational): {new_vertex_notes}",
            failing.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn tree_text(d: &AugmentedDigraph, a: &Arborescence) -> Vec<String> {
    let mut edges: Vec<String> = a.edges().map(|e| d.describe_edge(e)).collect();
    edges.sort();
    edges
}

fn criterion_worked_examples() -> Verdict {
    use popbranch::fixtures::{cycle3, pair};
    let mut problems = Vec::new();

    let d = pair();
    match solve(&d, SolveOptions::default()) {
        Ok(SolveOutcome::PopularFound { arborescence, .. }) => {
            if tree_text(&d, &arborescence) != ["(a,b)", "(r,a)"] {
                problems.push(format!("pair tree {:?}", tree_text(&d, &arborescence)));
            }
            if !is_popular_exact(&d, &arborescence).popular {
                problems.push("pair not popular by oracle".into());
            }
        }
        other => problems.push(format!("pair outcome {other:?}")),
    }

    let d = cycle3(&[3, 2, 2]);
    match solve(&d, SolveOptions::default()) {
        Ok(SolveOutcome::PopularFound {
            arborescence,
            certificate,
        }) => {
            if tree_text(&d, &arborescence) != ["(b,c)", "(c,a)", "(r,b)"] {
                problems.push(format!("cycle tree {:?}", tree_text(&d, &arborescence)));
            }
            let mut sets: Vec<(Vec<String>, u64)> = certificate
                .sets
                .iter()
                .map(|s| {
                    (
                        s.members
                            .iter()
                            .map(|v| d.vertex_label(v).to_owned())
                            .collect(),
                        s.y,
                    )
                })
                .collect();
            sets.sort();
            let expected = vec![
                (vec!["a".to_owned()], 3),
                (vec!["a".to_owned(), "b".to_owned(), "c".to_owned()], 2),
                (vec!["c".to_owned()], 2),
            ];
            if sets != expected || certificate.objective() != 7 {
                problems.push(format!("cycle certificate {sets:?}"));
            }
            if !is_popular_exact(&d, &arborescence).popular {
                problems.push("cycle not popular by oracle".into());
            }
        }
        other => problems.push(format!("cycle outcome {other:?}")),
    }

    let d = cycle3(&[1, 1, 1]);
    let popular = brute_popular_set(&d, DEFAULT_CAP).expect("tiny instance");
    match solve(&d, SolveOptions::default()) {
        Ok(SolveOutcome::PopularFound { arborescence, .. }) => {
            if popular.len() != 3 || !popular.contains(&arborescence) {
                problems.push(format!(
                    "unit cycle: {} popular, output {:?}",
                    popular.len(),
                    tree_text(&d, &arborescence)
                ));
            }
        }
        other => problems.push(format!("unit cycle outcome {other:?}")),
    }

    verdict(
        problems.is_empty(),
        if problems.is_empty() {
            "pair, weighted 3-cycle with certificate 3+2+2=7, unit 3-cycle in its 3-element popular set".to_owned()
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_hijack_fixture() -> Verdict {
    let fixture_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/hijackable.json");
    let frozen: InstanceFile =
        serde_json::from_slice(&std::fs::read(&fixture_path).expect("fixture present"))
            .expect("fixture parses");

    let mut first = None;
    let mut hits = 0;
    for i in 0..CORPUS_SIZE {
        let params = corpus_params(i);
        let d = instance(&params);
        if let Ok(SolveOutcome::NoneExists(NoneReason::Hijackable(_))) =
            solve(&d, SolveOptions::default())
        {
            hits += 1;
            first.get_or_insert(params);
        }
    }
    let Some(params) = first else {
        return verdict(false, "seeded search found no instance");
    };
    let regenerated = popbranch::gen::generate_random(&params).unwrap();
    let d = AugmentedDigraph::new(frozen.to_digraph().expect("fixture is valid"));
    let outcome = solve(&d, SolveOptions::default()).expect("solver does not error");
    let hijackable = matches!(
        &outcome,
        SolveOutcome::NoneExists(NoneReason::Hijackable(_))
    );
    let empty = !brute_popular_exists(&d, DEFAULT_CAP).expect("small fixture");
    let reason = serde_json::to_string(&ResultFile::from_outcome(&d, &outcome).reason).unwrap();
    verdict(
        regenerated == frozen && hijackable && empty,
        format!(
            "search hit {hits} times, first at seed {} (n={}), matches frozen fixture={}; solver hijackable={hijackable}, brute force empty={empty}; {reason}",
            params.seed,
            params.n,
            regenerated == frozen
        ),
    )
}

fn criterion_scale() -> Verdict {
    let params = GenParams {
        n: 1000,
        density: 10_000.0 / (1000.0 * 999.0),
        max_weight: 5,
        tie_prob: 0.3,
        enforce_assumption: true,
        seed: 8,
    };
    let d = instance(&params);
    let m = d.base().edges().len();
    let start = Instant::now();
    let outcome = solve(&d, SolveOptions::default()).expect("solver does not error");
    let elapsed = start.elapsed();
    let (status, ok) = match &outcome {
        SolveOutcome::PopularFound { arborescence, .. } => {
            let verdict = is_popular_exact(&d, arborescence);
            ("popular_found", verdict.popular)
        }
        SolveOutcome::NoneExists(_) => ("none_exists", true),
        SolveOutcome::AssumptionViolated { .. } => ("assumption_violated", false),
    };
    verdict(
        ok && elapsed < SCALE_BUDGET && (9_000..=11_000).contains(&m),
        format!(
            "n=1000 m={m}: {status} in {:.2}s (budget {}s), min-cost oracle ok={ok}",
            elapsed.as_secs_f64(),
            SCALE_BUDGET.as_secs()
        ),
    )
}

fn main() {
    let (records, unit, elapsed) = sweep();
    let results = [
        ("soundness", criterion_soundness(&records, elapsed)),
        ("completeness", criterion_completeness(&records)),
        ("unweighted", criterion_unweighted(&records, &unit)),
        ("cost identity", criterion_cost_identity()),
        ("certificate structure", criterion_structure(&records)),
        ("worked examples", criterion_worked_examples()),
        ("hijackable fixture", criterion_hijack_fixture()),
        ("scale", criterion_scale()),
    ];
    let mut failed = 0;
    for (i, (name, v)) in results.iter().enumerate() {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {}", i + 1, v.detail);
        failed += usize::from(!v.passed);
    }
    let hijackable_total = records.iter().filter(|r| r.hijackable).count();
    println!(
        "corpus: {} instances, {hijackable_total} fully hijackable",
        records.len()
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
