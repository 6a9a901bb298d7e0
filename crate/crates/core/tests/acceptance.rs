//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fidsolve_core::ingest::{export_dot, generate_random, parse_diagram, serialize_diagram};
use fidsolve_core::oracle::Oracle;
use fidsolve_core::partition::find_partitions;
use fidsolve_core::transforms::{
    compute_logical, preprocess, propagate_certainty, reduce_grandfathers, remove_into_successor,
    reverse_arc, trim_barren, REVERSAL_SENTINEL,
};
use fidsolve_core::{
    oracle_top_probability, solve, solve_with, EventKind, FaultDiagram, SolveOptions, TieOrder,
    Trace,
};

use common::*;

const SOLVE_TOL: f64 = 1e-9;
const EXACT_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names<'a>(ids: impl IntoIterator<Item = &'a fidsolve_core::NodeId>) -> Vec<String> {
    ids.into_iter().map(|i| i.to_string()).collect()
}

fn subjects(trace: &Trace, kind: EventKind) -> Vec<String> {
    trace
        .of_kind(kind)
        .map(|e| e.subjects[0].to_string())
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for seed in 1..=500u64 {
        let d = random(seed);
        let exact = oracle_top_probability(&d).map_err(|e| format!("seed {seed}: {e}"))?;
        match solve(&d) {
            Ok((p, _)) => {
                let delta = (p - exact).abs();
                worst = worst.max(delta);
                if delta > SOLVE_TOL {
                    failures.push(format!("seed {seed}: solve {p} oracle {exact}"));
                }
            }
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), || {
        format!("{} failures; first: {}", failures.len(), failures[0])
    })?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "500/500 within {SOLVE_TOL:e}, max delta {worst:.2e}, {elapsed:.2?}"
    ))
}

fn preserved(
    label: &str,
    k: usize,
    before: &FaultDiagram,
    after: &FaultDiagram,
) -> Result<f64, String> {
    let a = oracle_top_probability(before).map_err(|e| e.to_string())?;
    let b = oracle_top_probability(after).map_err(|e| e.to_string())?;
    let delta = (a - b).abs();
    ensure(delta <= EXACT_TOL, || {
        format!("{label} case {k}: {a} -> {b}")
    })?;
    Ok(delta)
}

fn criterion_2() -> Outcome {
    const N: usize = 200;
    let mut worst = 0.0f64;

    for seed in 1..=N as u64 {
        let d = with_barren(seed);
        let (t, trace) = trim_barren(&d);
        ensure(trace.count(EventKind::Trim) > 0, || {
            format!("trim case {seed} trimmed nothing")
        })?;
        worst = worst.max(preserved("trim_barren", seed as usize, &d, &t)?);
    }
    for seed in 1..=N as u64 {
        let d = with_certainty(seed);
        let (t, _) = propagate_certainty(&d);
        worst = worst.max(preserved("propagate_certainty", seed as usize, &d, &t)?);
    }
    for (k, (d, n)) in computable_cases(N).iter().enumerate() {
        let (t, _) = compute_logical(d, n).map_err(|e| e.to_string())?;
        worst = worst.max(preserved("compute_logical", k, d, &t)?);
    }
    for (k, (d, n)) in removable_cases(N).iter().enumerate() {
        let (t, _) = remove_into_successor(d, n).map_err(|e| e.to_string())?;
        worst = worst.max(preserved("remove_into_successor", k, d, &t)?);
    }
    let oracle = Oracle::default();
    for (k, (d, i, j)) in reversal_cases(N).iter().enumerate() {
        let (t, _) = reverse_arc(d, i, j).map_err(|e| e.to_string())?;
        worst = worst.max(preserved("reverse_arc", k, d, &t)?);
        let before = oracle.marginals(d).map_err(|e| e.to_string())?;
        let after = oracle.marginals(&t).map_err(|e| e.to_string())?;
        for (id, p) in &before {
            let delta = (p - after[id]).abs();
            ensure(delta <= EXACT_TOL, || {
                format!("reverse_arc case {k}: marginal of {id} moved by {delta:e}")
            })?;
            worst = worst.max(delta);
        }
    }
    let mut reduced = 0;
    for (k, d) in grandfather_cases(N).iter().enumerate() {
        let (t, trace) = reduce_grandfathers(d);
        reduced += usize::from(trace.count(EventKind::Remove) > 0);
        worst = worst.max(preserved("reduce_grandfathers", k, d, &t)?);
    }
    ensure(reduced > 0, || "no grandfather was ever reduced".into())?;
    for seed in 1..=N as u64 {
        let d = random(seed);
        let (t, _) = preprocess(&d);
        worst = worst.max(preserved("preprocess", seed as usize, &d, &t)?);
    }
    Ok(format!("7 transforms x {N} cases within {EXACT_TOL:e}, {reduced} grandfather reductions, max delta {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let fig1 = fixture("fixture_fig1.json");

    // (a) pre-processing
    let (fig2, pre) = preprocess(&fig1);
    let removed: BTreeSet<String> = names(pre.deleted_nodes()).into_iter().collect();
    let named: BTreeSet<String> = ["X", "W", "G", "U", "V", "E", "L", "M"]
        .map(String::from)
        .into();
    ensure(named.is_subset(&removed), || {
        format!("named nodes not all removed: {removed:?}")
    })?;
    // The remaining casualties are implied rather than named: F is the certain
    // OR left without successors, S and Y are absorbed when D is computed and
    // D in turn when C is.
    let implied: BTreeSet<String> = removed.difference(&named).cloned().collect();
    ensure(
        implied == ["D", "F", "S", "Y"].map(String::from).into(),
        || format!("unexpected removals {implied:?}"),
    )?;
    let compute_d = pre
        .of_kind(EventKind::Compute)
        .find(|e| e.subjects[0].as_str() == "D")
        .ok_or("D not computed")?;
    ensure(names(&compute_d.deleted) == ["S", "Y"], || {
        format!("COMPUTE D deleted {:?}", compute_d.deleted)
    })?;
    ensure(subjects(&pre, EventKind::Compute) == ["D", "C"], || {
        format!("computed {:?}", subjects(&pre, EventKind::Compute))
    })?;
    ensure(fig2 == fixture("fixture_fig2.json"), || {
        "preprocessed state differs from fixture_fig2.json".into()
    })?;

    // (b) partitions
    let parts: Vec<Vec<String>> = find_partitions(&fig2)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| names(&p.members))
        .collect();
    let expected = vec![
        vec!["C"],
        vec!["H", "I", "J", "K"],
        vec!["N", "O", "P", "Q"],
    ];
    ensure(parts == expected, || format!("partitions {parts:?}"))?;

    // (c), (d), (e) the full solve
    let opts = SolveOptions {
        tie_order: TieOrder::Paper,
        ..SolveOptions::default()
    };
    let s = solve_with(&fig1, &opts).map_err(|e| e.to_string())?;
    let modules = subjects(&s.trace, EventKind::Module);
    ensure(modules == ["B", "A"], || format!("modules {modules:?}"))?;
    let mut per_module: Vec<BTreeSet<String>> = Vec::new();
    for e in s.trace.events() {
        match e.kind {
            EventKind::Module => per_module.push(BTreeSet::new()),
            EventKind::Instantiate => {
                per_module
                    .last_mut()
                    .ok_or("instantiation outside a module")?
                    .insert(e.subjects[0].to_string());
            }
            _ => {}
        }
    }
    let wanted: Vec<BTreeSet<String>> = vec![["Q".to_string()].into(), ["K".to_string()].into()];
    ensure(per_module == wanted, || {
        format!("instantiation sets {per_module:?}")
    })?;
    let last = s.trace.events().last().ok_or("empty trace")?;
    ensure(
        last.kind == EventKind::Compute && last.subjects[0].as_str() == "T",
        || format!("final step is {last}"),
    )?;
    let exact = oracle_top_probability(&fig1).map_err(|e| e.to_string())?;
    let delta = (s.probability - exact).abs();
    ensure(delta <= SOLVE_TOL, || {
        format!("solve {} oracle {exact}", s.probability)
    })?;
    Ok(format!(
        "modules B, A; instantiations {{Q}}, {{K}}; p={:.9} delta {delta:.2e}",
        s.probability
    ))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 1..=100u64 {
        let d = fault_tree(seed);
        let (p, trace) = solve(&d).map_err(|e| format!("tree {seed}: {e}"))?;
        for kind in [EventKind::Instantiate, EventKind::Module] {
            ensure(trace.count(kind) == 0, || {
                format!("tree {seed} recorded {}", kind.label())
            })?;
        }
        let delta = (p - oracle_top_probability(&d).map_err(|e| e.to_string())?).abs();
        ensure(delta <= EXACT_TOL, || {
            format!("tree {seed}: delta {delta:e}")
        })?;
        worst = worst.max(delta);
    }
    Ok(format!(
        "100 trees, no instantiation, max delta {worst:.2e}"
    ))
}

fn criterion_5() -> Outcome {
    let fig1 = fixture("fixture_fig1.json");
    let opts = SolveOptions {
        tie_order: TieOrder::Paper,
        ..SolveOptions::default()
    };
    let trace = solve_with(&fig1, &opts).map_err(|e| e.to_string())?.trace;
    let variables: BTreeSet<String> = subjects(&trace, EventKind::Instantiate)
        .into_iter()
        .collect();
    let branches = trace.count(EventKind::Instantiate);
    let k = fig1.chance_count();
    let joint = Oracle::default()
        .enumerate_joint(&fig1)
        .map_err(|e| e.to_string())?
        .count();
    ensure(variables.len() == 2, || {
        format!("instantiated {variables:?}")
    })?;
    ensure(branches == 4, || format!("{branches} branches"))?;
    ensure(k >= 10 && joint == 1 << k, || {
        format!("k={k}, joint={joint}")
    })?;
    Ok(format!(
        "2 variables, {branches} branches vs {joint} joint assignments (k={k})"
    ))
}

fn criterion_6() -> Outcome {
    let fixtures = fixture_names();
    for name in &fixtures {
        let d = fixture(name);
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == d, || format!("{name}: round trip differs"))?;
        ensure(serialize_diagram(&back) == text, || {
            format!("{name}: serialization not canonical")
        })?;
        ensure(export_dot(&d) == export_dot(&back), || {
            format!("{name}: DOT unstable")
        })?;
    }
    for seed in 1..=1000u64 {
        let mut p = params(seed);
        p.chance_count = 1 + (seed % 20) as usize;
        p.logical_count = (seed % 12) as usize;
        p.max_parents = 1 + (seed % 4) as usize;
        let d = generate_random(&p).map_err(|e| format!("seed {seed}: {e}"))?;
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == d, || format!("seed {seed}: round trip differs"))?;
        ensure(export_dot(&d) == export_dot(&back), || {
            format!("seed {seed}: DOT unstable")
        })?;
    }
    Ok(format!(
        "{} fixtures and 1000 generated diagrams",
        fixtures.len()
    ))
}

fn criterion_7() -> Outcome {
    let boundary = [
        "boundary_certainty.json",
        "boundary_not_chain.json",
        "boundary_top_certain.json",
        "boundary_zero_mass.json",
    ];
    let mut worst = 0.0f64;
    for name in boundary {
        let d = fixture(name);
        let (p, _) = solve(&d).map_err(|e| format!("{name}: {e}"))?;
        let delta = (p - oracle_top_probability(&d).map_err(|e| e.to_string())?).abs();
        ensure(delta <= EXACT_TOL, || format!("{name}: delta {delta:e}"))?;
        worst = worst.max(delta);
    }

    let d = fixture("boundary_zero_mass.json");
    let (_, trace) = solve(&d).map_err(|e| e.to_string())?;
    ensure(
        trace
            .of_kind(EventKind::Reverse)
            .any(|e| e.note.as_deref() == Some("zero-mass-rows=1")),
        || "no zero-mass reversal in the solve trace".into(),
    )?;
    let (reversed, _) = reverse_arc(&d, "L", "H").map_err(|e| e.to_string())?;
    let sentinel = reversed
        .cpt_probability_by_key("L", "sf")
        .map_err(|e| e.to_string())?;
    ensure(sentinel == REVERSAL_SENTINEL, || {
        format!("zero-mass row holds {sentinel}")
    })?;
    Ok(format!(
        "{} fixtures, max delta {worst:.2e}, sentinel row {sentinel}",
        boundary.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("differential correctness", criterion_1),
        ("transform preservation", criterion_2),
        ("worked example walkthrough", criterion_3),
        ("fault tree degeneracy", criterion_4),
        ("instantiation count", criterion_5),
        ("format round trip", criterion_6),
        ("boundary fixtures", criterion_7),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} {label}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {label}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
