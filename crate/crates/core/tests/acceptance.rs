//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::sync::OnceLock;

use mcds::analysis::{
    branching_number, growth_check, render_trace, step6_vector, verify_measure_trace,
    BranchingVector,
};
use mcds::enumerator::{enumerate_mcds, EnumOptions, EnumerationResult};
use mcds::format::solution_file;
use mcds::generators::{lower_bound_graph, random_convex_graph, RandomParams};
use mcds::graph::ConvexBipartiteGraph;
use mcds::oracle::{check_lemmas, enumerate_mcds_bruteforce, SolutionSet};

const CORPUS_TARGET: usize = 500;

fn alpha(entries: &[u32]) -> f64 {
    branching_number(&BranchingVector::new(entries.to_vec()).unwrap(), 1e-12).unwrap()
}

/// Seeded corpus of connected instances with both sides in 2..=8.
fn corpus() -> &'static Vec<ConvexBipartiteGraph> {
    static CORPUS: OnceLock<Vec<ConvexBipartiteGraph>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut graphs = Vec::new();
        for n_u in 2..=8usize {
            for n_w in 2..=8usize {
                for round in 0..11u64 {
                    let seed = (n_u as u64) * 1_000_000 + (n_w as u64) * 1_000 + round;
                    let p = RandomParams {
                        n_u,
                        n_w,
                        seed,
                        max_retries: 2000,
                    };
                    if let Ok(g) = random_convex_graph(&p) {
                        graphs.push(g);
                    }
                }
            }
        }
        graphs
    })
}

/// Oracle output per corpus instance, computed once.
fn corpus_oracle() -> &'static Vec<SolutionSet> {
    static ORACLE: OnceLock<Vec<SolutionSet>> = OnceLock::new();
    ORACLE.get_or_init(|| {
        corpus()
            .iter()
            .map(|g| enumerate_mcds_bruteforce(g, 24).expect("corpus fits the cap"))
            .collect()
    })
}

fn traced(g: &ConvexBipartiteGraph) -> EnumerationResult {
    enumerate_mcds(
        g,
        &EnumOptions {
            collect_trace: true,
        },
    )
}

#[test]
fn criterion_1_branching_number_fixtures() {
    let a_pair = alpha(&[2, 2, 3]);
    assert!(
        (a_pair - 1.618_033_988_7).abs() <= 1e-6,
        "alpha(2,2,3) = {a_pair}"
    );

    let a_multi = alpha(&[3, 4, 4, 1]);
    assert!(
        (a_multi - 1.7254).abs() <= 1e-3,
        "alpha(3,4,4,1) = {a_multi}"
    );

    let a_select = alpha(&[3, 3, 3]);
    assert!(
        (a_select - 1.442_249_570_3).abs() <= 1e-6,
        "alpha(3,3,3) = {a_select}"
    );

    // (3,4,4,1) dominates every vector the search can declare.
    let mut vectors = vec![
        BranchingVector::new(vec![2, 2]).unwrap(),
        BranchingVector::new(vec![2, 2, 3]).unwrap(),
    ];
    for t in 3..=12 {
        vectors.push(step6_vector(t).unwrap());
    }
    for t in 2..=12u32 {
        vectors.push(BranchingVector::new(vec![t; t as usize]).unwrap());
    }
    let max = vectors
        .iter()
        .map(|v| branching_number(v, 1e-12).unwrap())
        .fold(f64::MIN, f64::max);
    assert!(
        (max - a_multi).abs() <= 1e-9,
        "maximum branching number {max} is not alpha(3,4,4,1) = {a_multi}"
    );

    println!("criterion 1 (branching-number fixtures): pass");
}

#[test]
fn criterion_2_lower_bound_family_counts() {
    for (k, expected) in [(3usize, 27usize), (5, 243), (7, 2187)] {
        let g = lower_bound_graph(k).unwrap();
        assert_eq!(g.n(), 3 * k + 2);
        let result = enumerate_mcds(&g, &EnumOptions::default());
        assert_eq!(
            result.solutions.count(),
            expected,
            "enumerator count for k = {k}"
        );
    }
    for (k, expected) in [(3usize, 27usize), (5, 243)] {
        let g = lower_bound_graph(k).unwrap();
        let sols = enumerate_mcds_bruteforce(&g, 24).unwrap();
        assert_eq!(sols.count(), expected, "oracle count for k = {k}");
    }
    println!("criterion 2 (lower-bound family counts 27/243/2187): pass");
}

#[test]
fn criterion_3_differential_completeness() {
    let graphs = corpus();
    let oracles = corpus_oracle();
    assert!(
        graphs.len() >= CORPUS_TARGET,
        "corpus has only {} instances",
        graphs.len()
    );
    for (g, expected) in graphs.iter().zip(oracles.iter()) {
        let result = enumerate_mcds(g, &EnumOptions::default());
        assert_eq!(
            &result.solutions,
            expected,
            "solution sets differ on nU={} nW={} intervals={:?}",
            g.n_u(),
            g.n_w(),
            g.intervals()
        );
    }
    println!(
        "criterion 3 (differential completeness, {} instances): pass",
        graphs.len()
    );
}

#[test]
fn criterion_4_structural_properties_hold() {
    let graphs = corpus();
    let oracles = corpus_oracle();
    let mut checked = 0usize;
    for (g, sols) in graphs.iter().zip(oracles.iter()) {
        let report = check_lemmas(g, sols).unwrap();
        assert!(
            report.is_clean(),
            "violations on nU={} nW={} intervals={:?}: {:?}",
            g.n_u(),
            g.n_w(),
            g.intervals(),
            report.violations
        );
        let cut = g.cut_vertices().unwrap();
        for d in sols.iter() {
            assert!(
                cut.is_subset_of(d),
                "cut vertices {cut} missing from solution {d}"
            );
        }
        checked += sols.count();
    }
    println!("criterion 4 (structural checks over {checked} oracle solutions): pass");
}

#[test]
fn criterion_5_growth_and_measure() {
    let mut instances: Vec<ConvexBipartiteGraph> = corpus().clone();
    for k in [3usize, 5, 7] {
        instances.push(lower_bound_graph(k).unwrap());
    }
    for g in &instances {
        let result = traced(g);
        assert!(
            growth_check(&result.stats, g.n()),
            "leaf bound exceeded on nU={} nW={}: {} leaves",
            g.n_u(),
            g.n_w(),
            result.stats.leaves
        );
        assert_eq!(result.stats.measure_violations, 0);
        let report = verify_measure_trace(&render_trace(&result.trace)).unwrap();
        assert!(
            report.is_clean(),
            "measure violations on nU={} nW={} intervals={:?}: {:?}",
            g.n_u(),
            g.n_w(),
            g.intervals(),
            report.violations
        );
    }
    println!(
        "criterion 5 (growth bound and measure traces, {} instances): pass",
        instances.len()
    );
}

#[test]
fn criterion_6_special_cases() {
    // Stars in both orientations, including a large one.
    for (n_u, n_w, intervals) in [
        (1usize, 4usize, vec![(1usize, 4usize)]),
        (1, 40, vec![(1, 40)]),
        (4, 1, vec![(1, 1); 4]),
        (7, 1, vec![(1, 1); 7]),
    ] {
        let g = ConvexBipartiteGraph::new(n_u, n_w, &intervals).unwrap();
        let report = g.validate();
        assert!(report.is_star);
        let result = enumerate_mcds(&g, &EnumOptions::default());
        assert_eq!(result.solutions.count(), 1);
        let only = result.solutions.iter().next().unwrap();
        assert_eq!(only.len(), 1);
        assert!(only.contains(report.star_center.unwrap()));
    }

    // Disconnected inputs have no solutions.
    for g in [
        ConvexBipartiteGraph::new(2, 2, &[(1, 1), (2, 2)]).unwrap(),
        ConvexBipartiteGraph::new(3, 4, &[(1, 2), (1, 1), (4, 4)]).unwrap(),
    ] {
        assert!(!g.validate().connected);
        let result = enumerate_mcds(&g, &EnumOptions::default());
        assert!(result.solutions.is_empty());
    }

    // Exhaustive agreement with the oracle on every graph with n <= 4.
    let mut connected_checked = 0usize;
    for (n_u, n_w) in [(1usize, 1usize), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)] {
        let choices: Vec<(usize, usize)> = (1..=n_w)
            .flat_map(|l| (l..=n_w).map(move |r| (l, r)))
            .collect();
        let mut assignment = vec![0usize; n_u];
        loop {
            let intervals: Vec<(usize, usize)> = assignment.iter().map(|&c| choices[c]).collect();
            let g = ConvexBipartiteGraph::new(n_u, n_w, &intervals).unwrap();
            let fast = enumerate_mcds(&g, &EnumOptions::default());
            let slow = enumerate_mcds_bruteforce(&g, 24).unwrap();
            assert_eq!(
                fast.solutions, slow,
                "divergence on nU={n_u} nW={n_w} intervals={intervals:?}"
            );
            if g.validate().connected {
                connected_checked += 1;
                assert!(!slow.is_empty());
            }
            // Next assignment in mixed radix.
            let mut pos = 0;
            loop {
                if pos == n_u {
                    break;
                }
                assignment[pos] += 1;
                if assignment[pos] < choices.len() {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
            if pos == n_u {
                break;
            }
        }
    }
    assert!(connected_checked >= 10);

    println!(
        "criterion 6 (stars, disconnected inputs, {} exhaustive small graphs): pass",
        connected_checked
    );
}

#[test]
fn criterion_7_determinism() {
    let mut instances = vec![lower_bound_graph(5).unwrap()];
    instances.extend(corpus().iter().take(25).cloned());
    for g in &instances {
        let a = traced(g);
        let b = traced(g);
        assert_eq!(solution_file(&a.solutions), solution_file(&b.solutions));
        assert_eq!(render_trace(&a.trace), render_trace(&b.trace));
        assert_eq!(a.duplicates_discarded, b.duplicates_discarded);
        assert_eq!(a.duplicates_discarded, 0);
        assert_eq!(a.stats, b.stats);
    }
    println!(
        "criterion 7 (byte-identical reruns on {} instances): pass",
        instances.len()
    );
}
