use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use popbranch::augment::check_weight_assumption;
use popbranch::certificate::{verify_feasible, verify_popularity};
use popbranch::dot::to_dot;
use popbranch::gen::{generate_random, GenParams};
use popbranch::io::{arcs, parse_instance, parse_result, ResultFile, Status};
use popbranch::oracle::{brute_popular_exists, brute_popular_set, is_popular_exact};
use popbranch::solver::{solve_traced, SolveOptions, SolveOutcome};
use popbranch::AugmentedDigraph;
use rayon::prelude::*;
use serde_json::json;

use crate::{EnumerateArgs, GenArgs, SolveArgs, VerifyArgs};

pub const POPULAR_FOUND: u8 = 0;
pub const INPUT_ERROR: u8 = 1;
pub const NONE_EXISTS: u8 = 2;
pub const ASSUMPTION_VIOLATED: u8 = 3;
pub const VERIFY_FAILED: u8 = 4;
pub const CAP_EXCEEDED: u8 = 5;

fn load(path: &Path) -> Result<AugmentedDigraph> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let g = parse_instance(&bytes).with_context(|| format!("in {}", path.display()))?;
    Ok(AugmentedDigraph::new(g))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn triple_text(
    d: &AugmentedDigraph,
    (s, t, u): (
        popbranch::VertexId,
        popbranch::VertexId,
        popbranch::VertexId,
    ),
) -> String {
    format!(
        "w({}) + w({}) = {} <= w({}) = {}",
        d.vertex_label(s),
        d.vertex_label(t),
        d.weight(s) + d.weight(t),
        d.vertex_label(u),
        d.weight(u)
    )
}

pub fn solve(args: &SolveArgs) -> Result<u8> {
    let d = load(&args.instance)?;
    let weights = check_weight_assumption(d.base().weights());
    let (outcome, trace) = solve_traced(&d, SolveOptions { force: args.force })?;

    let mut result = ResultFile::from_outcome(&d, &outcome);
    if let (true, Some(triple)) = (args.force, weights.violation) {
        // Certified outputs stay popular without the condition; refusals may be wrong.
        let warning = format!(
            "weight condition fails ({}); a none_exists status is not conclusive",
            triple_text(&d, triple)
        );
        eprintln!("warning: {warning}");
        result.warnings.push(warning);
    }

    if let Some(path) = &args.dot {
        let tree = match &outcome {
            SolveOutcome::PopularFound { arborescence, .. } => Some(arborescence),
            _ => None,
        };
        write_file(path, &to_dot(&d, trace.as_ref().map(|t| &t.family), tree))?;
    }

    if let Some(path) = &args.output {
        write_file(path, &result.to_json())?;
    } else if args.json {
        println!("{}", result.to_json());
    } else {
        print_text(&d, &outcome, args.certificate);
    }

    Ok(match outcome {
        SolveOutcome::PopularFound { .. } => POPULAR_FOUND,
        SolveOutcome::NoneExists(_) => NONE_EXISTS,
        SolveOutcome::AssumptionViolated { triple } => {
            eprintln!("weight condition fails: {}", triple_text(&d, triple));
            eprintln!("rerun with --force to solve anyway");
            ASSUMPTION_VIOLATED
        }
    })
}

fn print_text(d: &AugmentedDigraph, outcome: &SolveOutcome, with_certificate: bool) {
    match outcome {
        SolveOutcome::PopularFound {
            arborescence,
            certificate,
        } => {
            println!("popular_found");
            for e in arborescence.edges() {
                println!("  {} {}", d.describe_edge(e), d.edge_label(e));
            }
            if with_certificate {
                println!("certificate (objective {}):", certificate.objective());
                for set in &certificate.sets {
                    let members: Vec<&str> =
                        set.members.iter().map(|v| d.vertex_label(v)).collect();
                    println!(
                        "  y({{{}}}) = {}  owner {}",
                        members.join(","),
                        set.y,
                        d.vertex_label(set.owner)
                    );
                }
                let report = verify_feasible(d, arborescence, certificate)
                    .merge(verify_popularity(d, arborescence, certificate));
                print!("{report}");
            }
        }
        SolveOutcome::NoneExists(_) => {
            let result = ResultFile::from_outcome(d, outcome);
            println!("none_exists");
            if let Some(reason) = result.reason {
                println!(
                    "  {}",
                    serde_json::to_string(&reason).expect("reason serializes")
                );
            }
        }
        SolveOutcome::AssumptionViolated { .. } => println!("assumption_violated"),
    }
}

/// Pass or fail with the reasons, for one instance/result pair.
fn verify_one(instance: &Path, result: &Path, cap: usize) -> Result<(bool, Vec<String>)> {
    let d = load(instance)?;
    let bytes = fs::read(result).with_context(|| format!("reading {}", result.display()))?;
    let file = parse_result(&bytes).with_context(|| format!("in {}", result.display()))?;
    file.validate_shape()?;
    let mut notes = Vec::new();

    let passed = match file.status {
        Status::PopularFound => {
            let a = file.arborescence(&d)?.expect("shape checked");
            let y = file.certificate(&d)?.expect("shape checked");
            let verdict = is_popular_exact(&d, &a);
            if !verdict.popular {
                notes.push(format!(
                    "min-cost oracle: {} < w(V) = {}",
                    verdict.min_cost,
                    d.total_weight()
                ));
            }
            let report = verify_feasible(&d, &a, &y).merge(verify_popularity(&d, &a, &y));
            for check in report.failures() {
                notes.push(format!("certificate check `{}` failed", check.name));
                notes.extend(check.violations.iter().take(5).cloned());
            }
            verdict.popular && report.passed()
        }
        Status::NoneExists => match brute_popular_exists(&d, cap) {
            Ok(false) => true,
            Ok(true) => {
                notes.push("brute force found a popular arborescence".into());
                false
            }
            Err(err) => {
                notes.push(format!("cannot confirm emptiness: {err}"));
                false
            }
        },
        Status::AssumptionViolated => {
            let holds = check_weight_assumption(d.base().weights()).holds;
            if holds {
                notes.push("weight condition actually holds".into());
            }
            !holds
        }
    };
    Ok((passed, notes))
}

fn instances_in(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        let name = path
            .file_name()
            .and_then(|s| s.to_str())
            .unwrap_or_default();
        if name.ends_with(".json") && !name.ends_with(".result.json") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn result_path(dir: &Path, instance: &Path) -> PathBuf {
    let stem = instance
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    dir.join(format!("{stem}.result.json"))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?)
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    if !args.instance.is_dir() {
        let (passed, notes) = verify_one(&args.instance, &args.result, args.cap)?;
        for note in &notes {
            eprintln!("{note}");
        }
        println!("{}", if passed { "pass" } else { "fail" });
        return Ok(if passed { POPULAR_FOUND } else { VERIFY_FAILED });
    }
    if !args.result.is_dir() {
        bail!(
            "{} is a directory but {} is not",
            args.instance.display(),
            args.result.display()
        );
    }
    let paths = instances_in(&args.instance)?;
    let outcomes: Vec<_> = pool(args.jobs)?.install(|| {
        paths
            .par_iter()
            .map(|p| verify_one(p, &result_path(&args.result, p), args.cap))
            .collect()
    });
    let mut code = POPULAR_FOUND;
    for (path, outcome) in paths.iter().zip(outcomes) {
        match outcome {
            Ok((true, _)) => println!("pass  {}", path.display()),
            Ok((false, notes)) => {
                println!("fail  {}", path.display());
                for note in notes {
                    eprintln!("{}: {note}", path.display());
                }
                if code == POPULAR_FOUND {
                    code = VERIFY_FAILED;
                }
            }
            Err(err) => {
                println!("error {}", path.display());
                eprintln!("{}: {err:#}", path.display());
                code = INPUT_ERROR;
            }
        }
    }
    Ok(code)
}

fn enumerate_one(path: &Path, cap: usize) -> Result<Result<serde_json::Value, String>> {
    let d = load(path)?;
    Ok(match brute_popular_set(&d, cap) {
        Ok(set) => {
            let trees: Vec<_> = set.iter().map(|a| arcs(&d, a)).collect();
            Ok(json!({ "count": trees.len(), "arborescences": trees }))
        }
        Err(err) => Err(err.to_string()),
    })
}

pub fn enumerate(args: &EnumerateArgs) -> Result<u8> {
    if !args.instance.is_dir() {
        return Ok(match enumerate_one(&args.instance, args.cap)? {
            Ok(value) => {
                println!("{}", serde_json::to_string_pretty(&value)?);
                POPULAR_FOUND
            }
            Err(msg) => {
                eprintln!("{msg}");
                CAP_EXCEEDED
            }
        });
    }
    let paths = instances_in(&args.instance)?;
    let outcomes: Vec<_> = pool(args.jobs)?.install(|| {
        paths
            .par_iter()
            .map(|p| enumerate_one(p, args.cap))
            .collect()
    });
    let mut code = POPULAR_FOUND;
    for (path, outcome) in paths.iter().zip(outcomes) {
        let line = match outcome {
            Ok(Ok(value)) => json!({ "instance": path, "count": value["count"] }),
            Ok(Err(msg)) => {
                eprintln!("{}: {msg}", path.display());
                code = code.max(CAP_EXCEEDED);
                json!({ "instance": path, "error": msg })
            }
            Err(err) => {
                eprintln!("{}: {err:#}", path.display());
                if code == POPULAR_FOUND {
                    code = INPUT_ERROR;
                }
                json!({ "instance": path, "error": format!("{err:#}") })
            }
        };
        println!("{line}");
    }
    Ok(code)
}

pub fn gen(args: &GenArgs) -> Result<u8> {
    if args.n == 0 {
        bail!("--n must be at least 1");
    }
    let file = generate_random(&GenParams {
        n: args.n,
        density: args.density,
        max_weight: args.max_weight,
        tie_prob: args.tie_prob,
        enforce_assumption: args.enforce_assumption,
        seed: args.seed,
    })?;
    let text = file.to_json();
    match &args.output {
        Some(path) => write_file(path, &text)?,
        None => println!("{text}"),
    }
    Ok(0)
}

pub fn check(path: &Path) -> Result<u8> {
    let d = load(path)?;
    let w = check_weight_assumption(d.base().weights());
    println!("vertices: {}", d.n());
    println!("edges: {}", d.base().edges().len());
    println!("total weight: {}", d.total_weight());
    println!(
        "weight condition (distinct s, t): {}",
        if w.holds { "holds" } else { "fails" }
    );
    if let Some(triple) = w.violation {
        println!("  violated by {}", triple_text(&d, triple));
    }
    println!(
        "weight condition (2 w_min > w_max): {}",
        if w.holds_with_repeats {
            "holds"
        } else {
            "fails"
        }
    );
    Ok(if w.holds { 0 } else { ASSUMPTION_VIOLATED })
}
