//! Branching vectors, branching numbers, search-tree statistics, and the
//! measure-trace verifier.
//!
//! The search assigns every node the measure `μ = |undecided U| + |W \ F|`
//! (with the available-`W` pool standing in for `W` once vertices start
//! being consumed in stage 4). Each branching rule declares how much μ
//! drops per child; the branching number of that declaration bounds the
//! number of leaves by `O*(α^n)`. The verifier replays a recorded trace
//! and confirms that every edge actually decreased μ by at least its
//! declared amount and that the declarations match the rule families.
//!
//! Trace file format: one node per line, preorder,
//! `"<depth> <step> <measure> <name>/<declared>"`, whitespace-separated.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// Growth base of the whole search: the largest branching number over all
/// rules, reached by the degree-3 multiway step `(3, 4, 4, 1)`.
pub const GROWTH_BASE: f64 = 1.7254;

/// Per-child measure decreases `(c_1, .., c_t)` of one branching step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingVector {
    entries: Vec<u32>,
}

impl BranchingVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() || entries.contains(&0) {
            return Err(Error::InvalidBranchingVector);
        }
        Ok(BranchingVector { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `p(x) = x^c - Σ_i x^(c - c_i)` with `c = max c_i`. Its unique
    /// positive root is the branching number.
    pub fn characteristic_eval(&self, x: f64) -> f64 {
        let c = *self.entries.iter().max().expect("nonempty") as i32;
        let mut value = x.powi(c);
        for &ci in &self.entries {
            value -= x.powi(c - ci as i32);
        }
        value
    }
}

impl fmt::Display for BranchingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The unique positive root of the characteristic polynomial, found by
/// bisection (derivative-free, robust for every vector the search can
/// produce). `tol` bounds `|p(root)|`.
pub fn branching_number(v: &BranchingVector, tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::NonPositiveTolerance);
    }
    // A single child collapses p to x^c - x^(c-c_1), whose positive root
    // is exactly 1.
    if v.len() == 1 {
        return Ok(1.0);
    }
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    while v.characteristic_eval(hi) <= 0.0 {
        hi *= 2.0;
        assert!(hi < 1e9, "characteristic polynomial never became positive");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if v.characteristic_eval(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let achieved = v.characteristic_eval(root).abs();
    if achieved > tol {
        return Err(Error::ToleranceUnreached { achieved });
    }
    Ok(root)
}

/// The multiway rule's vector for degree `t >= 3`: one child keeping only
/// the far neighbour (drop `t`), up to `t-1` children keeping a pair and
/// forbidding at least one `W` vertex (drop `t+1` each), and one child
/// discarding the far neighbour (drop `1`).
pub fn step6_vector(t: u32) -> Result<BranchingVector> {
    if t < 3 {
        return Err(Error::BranchArity { t });
    }
    let mut entries = vec![t];
    entries.extend(std::iter::repeat_n(t + 1, t as usize - 1));
    entries.push(1);
    BranchingVector::new(entries)
}

/// Aggregate counters of one enumeration run (or one parsed trace).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub solutions_emitted: usize,
    pub duplicates: usize,
    pub max_depth: usize,
    /// Node count per step token (`seed`, `s2.1`, ... `s4.3`, `trivial`).
    pub step_counts: BTreeMap<String, usize>,
    pub measure_violations: usize,
}

/// Empirical growth bound: leaf count within `n^2 * 1.7254^n`. The
/// polynomial factor stands in for the suppressed polynomial of the
/// `O*` bound.
pub fn growth_check(stats: &TreeStats, n: usize) -> bool {
    let bound = (n as f64).powi(2) * GROWTH_BASE.powf(n as f64);
    (stats.leaves as f64) <= bound
}

/// One line of a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode {
    pub depth: usize,
    pub step: String,
    pub measure: usize,
    /// `"<name>/<declared measure decrease>"`.
    pub label: String,
}

impl fmt::Display for TraceNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.depth, self.step, self.measure, self.label
        )
    }
}

/// Render a whole trace as the line-oriented file format.
pub fn render_trace(nodes: &[TraceNode]) -> String {
    let mut out = String::new();
    for node in nodes {
        out.push_str(&node.to_string());
        out.push('\n');
    }
    out
}

const STEP_TOKENS: [&str; 13] = [
    "root", "trivial", "seed", "s2.1", "s2.3", "s2.4", "s2.5a", "s2.5b", "s2.6", "s3", "s4.1",
    "s4.2", "s4.3",
];

pub fn parse_trace(text: &str) -> Result<Vec<TraceNode>> {
    let mut nodes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::TraceParse {
                line,
                message: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let depth: usize = fields[0].parse().map_err(|_| Error::TraceParse {
            line,
            message: "depth must be an integer".into(),
        })?;
        let measure: usize = fields[2].parse().map_err(|_| Error::TraceParse {
            line,
            message: "measure must be an integer".into(),
        })?;
        if !STEP_TOKENS.contains(&fields[1]) {
            return Err(Error::TraceParse {
                line,
                message: format!("unknown step `{}`", fields[1]),
            });
        }
        nodes.push(TraceNode {
            depth,
            step: fields[1].to_string(),
            measure,
            label: fields[3].to_string(),
        });
    }
    if nodes.is_empty() {
        return Err(Error::TraceParse {
            line: 0,
            message: "empty trace".into(),
        });
    }
    Ok(nodes)
}

/// A failed edge or declaration check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureViolation {
    /// 1-based index into the parsed node list.
    pub node: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MeasureReport {
    pub violations: Vec<MeasureViolation>,
}

impl MeasureReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn split_label(label: &str) -> Option<(&str, usize)> {
    let (name, declared) = label.rsplit_once('/')?;
    declared.parse().ok().map(|d| (name, d))
}

type TraceTree = (Vec<Option<usize>>, Vec<Vec<usize>>);

/// Tree structure of a parsed trace: parent index per node plus children
/// lists. Errors on depth jumps or multiple roots.
fn tree_structure(nodes: &[TraceNode]) -> Result<TraceTree> {
    let mut parents: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    // path[d] = index of the latest node seen at depth d.
    let mut path: Vec<usize> = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        if node.depth == 0 {
            if i != 0 {
                return Err(Error::TraceParse {
                    line: i + 1,
                    message: "second root".into(),
                });
            }
            path.push(0);
            continue;
        }
        if node.depth > path.len() {
            return Err(Error::TraceParse {
                line: i + 1,
                message: format!("depth jumps from {} to {}", path.len() - 1, node.depth),
            });
        }
        path.truncate(node.depth);
        let parent = path[node.depth - 1];
        parents[i] = Some(parent);
        children[parent].push(i);
        path.push(i);
    }
    Ok((parents, children))
}

/// Verify a trace against the declared branching vectors.
///
/// Per edge: the actual μ decrease must be at least the declared one.
/// Per rule family: declarations must match the rule — reductions declare
/// exactly 1, bookkeeping nodes 0, the paired rules 2/2 and 2/2/3, the
/// multiway rule `(t, t+1, .., t+1, 1)` consistently across siblings, the
/// stage-4 selection `t` across exactly `t` siblings, and seeding the
/// number of seeds.
pub fn verify_measure_trace(text: &str) -> Result<MeasureReport> {
    let nodes = parse_trace(text)?;
    let (parents, children) = tree_structure(&nodes)?;
    let mut report = MeasureReport::default();
    let mut blame = |node: usize, message: String| {
        report.violations.push(MeasureViolation {
            node: node + 1,
            message,
        });
    };

    let mut declared = vec![0usize; nodes.len()];
    for (i, node) in nodes.iter().enumerate() {
        match split_label(&node.label) {
            Some((_, d)) => declared[i] = d,
            None => {
                return Err(Error::TraceParse {
                    line: i + 1,
                    message: format!("label `{}` is missing `/declared`", node.label),
                })
            }
        }
    }

    // Edge checks.
    for (i, node) in nodes.iter().enumerate() {
        let Some(p) = parents[i] else { continue };
        let parent_mu = nodes[p].measure;
        if node.measure > parent_mu {
            blame(
                i,
                format!("measure increased from {parent_mu} to {}", node.measure),
            );
            continue;
        }
        let actual = parent_mu - node.measure;
        if actual < declared[i] {
            blame(
                i,
                format!("measure decreased by {actual}, declared {}", declared[i]),
            );
        }
    }

    // Family checks.
    for (i, node) in nodes.iter().enumerate() {
        if parents[i].is_none() {
            continue;
        }
        let name = split_label(&node.label).expect("validated").0;
        let d = declared[i];
        match node.step.as_str() {
            "s2.1" | "s2.4" => {
                if d != 1 {
                    blame(i, format!("{} must declare 1, declared {d}", node.step));
                }
            }
            "trivial" | "s2.3" | "s3" | "s4.1" | "s4.2" => {
                if d != 0 {
                    blame(i, format!("{} must declare 0, declared {d}", node.step));
                }
            }
            "s2.5a" => {
                if d != 2 {
                    blame(i, format!("paired rule must declare 2, declared {d}"));
                }
            }
            "s2.5b" => {
                let want = match name {
                    "i" | "ii" => 2,
                    "iii" => 3,
                    _ => {
                        blame(i, format!("unknown branch name `{name}` for s2.5b"));
                        continue;
                    }
                };
                if d != want {
                    blame(
                        i,
                        format!("s2.5b branch {name} must declare {want}, declared {d}"),
                    );
                }
            }
            _ => {}
        }
    }

    for (p, kids) in children.iter().enumerate() {
        let seeds: Vec<usize> = kids
            .iter()
            .copied()
            .filter(|&c| nodes[c].step == "seed")
            .collect();
        for &c in &seeds {
            if declared[c] != seeds.len() {
                blame(
                    c,
                    format!(
                        "seed must declare the seed count {}, declared {}",
                        seeds.len(),
                        declared[c]
                    ),
                );
            }
        }

        let selects: Vec<usize> = kids
            .iter()
            .copied()
            .filter(|&c| nodes[c].step == "s4.3")
            .collect();
        if !selects.is_empty() {
            let t = declared[selects[0]];
            if selects.iter().any(|&c| declared[c] != t) || selects.len() != t {
                blame(
                    selects[0],
                    format!(
                        "s4.3 group under node {} must be t siblings declaring t, got {} declaring {:?}",
                        p + 1,
                        selects.len(),
                        selects.iter().map(|&c| declared[c]).collect::<Vec<_>>()
                    ),
                );
            }
        }

        let multi: Vec<usize> = kids
            .iter()
            .copied()
            .filter(|&c| nodes[c].step == "s2.6")
            .collect();
        if !multi.is_empty() {
            let far = multi
                .iter()
                .copied()
                .find(|&c| split_label(&nodes[c].label).expect("validated").0 == "i");
            match far {
                None => blame(multi[0], "multiway group without branch i".into()),
                Some(fi) => {
                    let t = declared[fi];
                    if t < 3 {
                        blame(
                            fi,
                            format!("multiway branch i must declare >= 3, declared {t}"),
                        );
                    }
                    for &c in &multi {
                        let name = split_label(&nodes[c].label).expect("validated").0;
                        let want = match name {
                            "i" => t,
                            "ii" => t + 1,
                            "iii" => 1,
                            _ => {
                                blame(c, format!("unknown branch name `{name}` for s2.6"));
                                continue;
                            }
                        };
                        if declared[c] != want {
                            blame(
                                c,
                                format!(
                                    "multiway branch {name} must declare {want}, declared {}",
                                    declared[c]
                                ),
                            );
                        }
                    }
                }
            }
        }
    }

    Ok(report)
}

/// Rebuild run statistics from a parsed trace.
pub fn stats_from_trace(nodes: &[TraceNode]) -> Result<TreeStats> {
    let (_, children) = tree_structure(nodes)?;
    let mut stats = TreeStats {
        nodes: nodes.len(),
        ..TreeStats::default()
    };
    for (i, node) in nodes.iter().enumerate() {
        stats.max_depth = stats.max_depth.max(node.depth);
        *stats.step_counts.entry(node.step.clone()).or_default() += 1;
        if children[i].is_empty() {
            stats.leaves += 1;
        }
        if let Some((name, _)) = split_label(&node.label) {
            match name {
                "emit" => stats.solutions_emitted += 1,
                "dup" => stats.duplicates += 1,
                _ => {}
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(entries: &[u32]) -> BranchingVector {
        BranchingVector::new(entries.to_vec()).unwrap()
    }

    fn alpha(entries: &[u32]) -> f64 {
        branching_number(&vector(entries), 1e-12).unwrap()
    }

    #[test]
    fn golden_roots() {
        // x^3 - 2x - 1 = (x + 1)(x^2 - x - 1): golden ratio.
        assert!((alpha(&[2, 2, 3]) - 1.618_033_988_749_895).abs() < 1e-9);
        assert!((alpha(&[3, 4, 4, 1]) - 1.7254).abs() < 1e-3);
        // x^3 = 3.
        assert!((alpha(&[3, 3, 3]) - 3f64.powf(1.0 / 3.0)).abs() < 1e-9);
        assert_eq!(alpha(&[1]), 1.0);
        assert!((alpha(&[2, 2]) - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn root_respects_tolerance_contract() {
        let v = vector(&[2, 2, 3]);
        let root = branching_number(&v, 1e-12).unwrap();
        assert!(v.characteristic_eval(root).abs() <= 1e-12);
        assert_eq!(branching_number(&v, 0.0), Err(Error::NonPositiveTolerance));
        assert_eq!(branching_number(&v, -1.0), Err(Error::NonPositiveTolerance));
    }

    #[test]
    fn step6_vectors() {
        assert_eq!(step6_vector(3).unwrap().entries(), &[3, 4, 4, 1]);
        assert_eq!(step6_vector(4).unwrap().entries(), &[4, 5, 5, 5, 1]);
        assert_eq!(step6_vector(5).unwrap().entries(), &[5, 6, 6, 6, 6, 1]);
        assert_eq!(step6_vector(2), Err(Error::BranchArity { t: 2 }));
        // The family is worst at t = 3 and falls off monotonically.
        let roots: Vec<f64> = (3..=10)
            .map(|t| branching_number(&step6_vector(t).unwrap(), 1e-12).unwrap())
            .collect();
        for pair in roots.windows(2) {
            assert!(pair[0] > pair[1]);
        }
        assert!(roots[0] < 1.7254);
    }

    #[test]
    fn maximum_branching_number_over_all_rules() {
        let reference = alpha(&[3, 4, 4, 1]);
        let mut vectors = vec![vector(&[2, 2]), vector(&[2, 2, 3])];
        for t in 3..=12 {
            vectors.push(step6_vector(t).unwrap());
        }
        for t in 2..=12u32 {
            vectors.push(vector(&vec![t; t as usize]));
        }
        let max = vectors
            .iter()
            .map(|v| branching_number(v, 1e-12).unwrap())
            .fold(0.0f64, f64::max);
        assert!((max - reference).abs() < 1e-9);
        assert!(max < GROWTH_BASE);
    }

    #[test]
    fn stage4_family_peaks_at_three() {
        let roots: Vec<f64> = (2..=12u32)
            .map(|t| branching_number(&vector(&vec![t; t as usize]), 1e-12).unwrap())
            .collect();
        let best = roots
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert_eq!(best.0, 1); // t = 3 is the second entry
        assert!((roots[1] - 3f64.powf(1.0 / 3.0)).abs() < 1e-9);
    }

    #[test]
    fn monotonicity_of_roots() {
        // Adding a child never shrinks the root; slowing a child's measure
        // drop (smaller entry) never shrinks it either.
        let base = vec![2u32, 3, 4];
        let with_extra = alpha(&[2, 3, 4, 5]);
        assert!(with_extra >= alpha(&base) - 1e-12);
        let slowed = alpha(&[1, 3, 4]);
        assert!(slowed >= alpha(&base) - 1e-12);
    }

    #[test]
    fn invalid_vectors_are_rejected() {
        assert!(BranchingVector::new(vec![]).is_err());
        assert!(BranchingVector::new(vec![2, 0]).is_err());
    }

    #[test]
    fn growth_check_small() {
        let mut stats = TreeStats {
            leaves: 1,
            ..TreeStats::default()
        };
        assert!(growth_check(&stats, 5));
        stats.leaves = 10_000_000;
        assert!(!growth_check(&stats, 5));
    }

    #[test]
    fn trace_roundtrip_and_verify() {
        let text = "0 root 10 -/0\n1 seed 8 u1/2\n1 seed 8 u2/2\n2 s3 8 ok/0\n3 s4.1 8 emit/0\n";
        let nodes = parse_trace(text).unwrap();
        assert_eq!(render_trace(&nodes), text);
        let report = verify_measure_trace(text).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        let stats = stats_from_trace(&nodes).unwrap();
        assert_eq!(stats.nodes, 5);
        assert_eq!(stats.leaves, 2);
        assert_eq!(stats.solutions_emitted, 1);
        assert_eq!(stats.max_depth, 3);
    }

    #[test]
    fn verify_flags_underdecreasing_pair_branch() {
        // The third child of the overlapping-pair rule must drop μ by 3;
        // here it only drops by 2.
        let text = "\
0 root 10 -/0
1 s2.5b 8 i/2
1 s2.5b 8 ii/2
1 s2.5b 8 iii/3
";
        let report = verify_measure_trace(text).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].node, 4);
    }

    #[test]
    fn verify_flags_bad_declarations() {
        let text = "0 root 10 -/0\n1 s2.1 9 u3/2\n";
        let report = verify_measure_trace(text).unwrap();
        assert_eq!(report.violations.len(), 2); // wrong declaration and drop < declared

        let text = "0 root 10 -/0\n1 s2.5b 7 iii/2\n";
        let report = verify_measure_trace(text).unwrap();
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn malformed_traces_are_parse_errors() {
        assert!(matches!(
            verify_measure_trace("0 root 10\n"),
            Err(Error::TraceParse { .. })
        ));
        assert!(matches!(
            verify_measure_trace("0 root 10 -/0\n2 s3 10 ok/0\n"),
            Err(Error::TraceParse { .. })
        ));
        assert!(matches!(
            verify_measure_trace("0 root 10 -/0\n1 bogus 9 x/1\n"),
            Err(Error::TraceParse { .. })
        ));
        assert!(matches!(
            verify_measure_trace(""),
            Err(Error::TraceParse { .. })
        ));
        assert!(matches!(
            verify_measure_trace("0 root 10 -/0\n1 s3 10 ok\n"),
            Err(Error::TraceParse { .. })
        ));
    }
}
