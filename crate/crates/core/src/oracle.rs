//! Definition-level brute force and executable structural checks.
//!
//! [`enumerate_mcds_bruteforce`] scans every subset of the vertex set and
//! keeps exactly those passing the definitional minimality test. It is the
//! ground truth the branching enumerator is differentially tested against,
//! so it must stay independent of the search machinery: nothing here knows
//! about stages, measures, or branching.
//!
//! [`check_lemmas`] turns the structural facts that justify the branching
//! rules into assertions over an enumerated solution family. They are
//! theorems for this graph class, so any reported violation points at an
//! implementation bug, never at the input.

use std::collections::BTreeSet;
use std::fmt;

use crate::generators::SplitMix64;
use crate::graph::{low_mask, ConvexBipartiteGraph, VertexRef, VertexSet};
use crate::{Error, Result};

/// Default cap on brute-force instance size: 2^24 subsets with cheap
/// bitmask checks is the practical desk-scale limit.
pub const DEFAULT_MAX_N: usize = 24;

/// A duplicate-free family of solutions in canonical lexicographic order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionSet {
    solutions: BTreeSet<VertexSet>,
}

impl SolutionSet {
    pub fn new() -> Self {
        SolutionSet::default()
    }

    /// Returns true when the set was not already present.
    pub fn insert(&mut self, d: VertexSet) -> bool {
        self.solutions.insert(d)
    }

    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, d: &VertexSet) -> bool {
        self.solutions.contains(d)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexSet> + '_ {
        self.solutions.iter()
    }

    /// `(only in self, only in other)`, each in canonical order.
    pub fn symmetric_difference(&self, other: &SolutionSet) -> (Vec<VertexSet>, Vec<VertexSet>) {
        let left = self
            .solutions
            .difference(&other.solutions)
            .cloned()
            .collect();
        let right = other
            .solutions
            .difference(&self.solutions)
            .cloned()
            .collect();
        (left, right)
    }
}

impl FromIterator<VertexSet> for SolutionSet {
    fn from_iter<I: IntoIterator<Item = VertexSet>>(iter: I) -> Self {
        SolutionSet {
            solutions: iter.into_iter().collect(),
        }
    }
}

/// How the brute force walks the subset space. Both modes produce the same
/// family; keeping them both is a self-check on the minimality logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// Plain scan of all `2^n` codes, minimality tested per subset via
    /// single-vertex removals.
    Full,
    /// Cardinality-ascending scan; a connected dominating set is minimal
    /// iff no smaller solution found so far is a proper subset of it.
    CardinalityAscending,
}

/// All minimal connected dominating sets of `g`, by exhaustive scan.
///
/// Refuses graphs with more than `max_n` vertices. Works for any interval
/// list, connected or not.
pub fn enumerate_mcds_bruteforce(g: &ConvexBipartiteGraph, max_n: usize) -> Result<SolutionSet> {
    enumerate_mcds_bruteforce_with(g, max_n, ScanMode::Full)
}

pub fn enumerate_mcds_bruteforce_with(
    g: &ConvexBipartiteGraph,
    max_n: usize,
    mode: ScanMode,
) -> Result<SolutionSet> {
    let n = g.n();
    if n > max_n {
        return Err(Error::SubsetCapExceeded { n, max_n });
    }
    let n_u = g.n_u();
    let sols = match mode {
        ScanMode::Full => {
            let mut sols = SolutionSet::new();
            for code in 0u64..(1u64 << n) {
                let d = decode(code, n_u);
                if g.is_minimal_cds_definitional(&d) {
                    sols.insert(d);
                }
            }
            sols
        }
        ScanMode::CardinalityAscending => {
            let mut found: Vec<VertexSet> = Vec::new();
            for card in 0..=n {
                for code in subsets_of_cardinality(n, card) {
                    let d = decode(code, n_u);
                    if g.is_cds(&d) && !found.iter().any(|f| f != &d && f.is_subset_of(&d)) {
                        found.push(d);
                    }
                }
            }
            found.into_iter().collect()
        }
    };
    spot_check(g, &sols);
    Ok(sols)
}

fn decode(code: u64, n_u: usize) -> VertexSet {
    VertexSet::from_bits(code & low_mask(n_u), code >> n_u)
}

/// Gosper-style walk over all `n`-bit words with exactly `card` bits set.
fn subsets_of_cardinality(n: usize, card: usize) -> impl Iterator<Item = u64> {
    let end = 1u64 << n;
    let mut current = if card == 0 {
        Some(0u64)
    } else {
        Some(low_mask(card))
    };
    std::iter::from_fn(move || {
        let value = current?;
        if value >= end {
            current = None;
            return None;
        }
        current = if value == 0 {
            None
        } else {
            let c = value & value.wrapping_neg();
            let r = value + c;
            match r {
                0 => None,
                _ => Some(r | (((value ^ r) >> 2) / c)),
            }
        };
        Some(value)
    })
}

/// Re-verify up to 100 pseudo-randomly chosen members against the
/// definitional test. The oracle is correct by construction; this guards
/// against regressions in the shared predicates.
fn spot_check(g: &ConvexBipartiteGraph, sols: &SolutionSet) {
    if sols.is_empty() {
        return;
    }
    let members: Vec<&VertexSet> = sols.iter().collect();
    let mut rng = SplitMix64::new(members.len() as u64);
    for _ in 0..100.min(members.len()) {
        let d = members[rng.next_below(members.len() as u64) as usize];
        assert!(
            g.is_minimal_cds_definitional(d),
            "oracle self-check failed on {d}"
        );
    }
}

/// Identifier of one structural check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StructuralCheck {
    /// Every vertex of the graph has a neighbour inside the solution.
    NeighborInSolution,
    /// Two `U` vertices with nested intervals never both belong to a
    /// solution.
    NestedAtMostOne,
    /// Two `U` vertices sharing a left or right endpoint never both belong
    /// to a solution.
    EqualEndpointAtMostOne,
    /// Every pair of consecutive `W` positions is co-covered by a selected
    /// `U` vertex.
    ConsecutiveCoCover,
    /// Consecutive selected `W` vertices share a selected `U` neighbour.
    SelectedCoCover,
    /// If a selected interval sits strictly inside the union of two
    /// overlapping selected intervals, their intersection holds no
    /// selected `W` vertex.
    SandwichedForbidsIntersection,
    /// At most one selected interval sits strictly inside the union of two
    /// overlapping selected intervals.
    SandwichedAtMostOne,
}

impl StructuralCheck {
    pub const ALL: [StructuralCheck; 7] = [
        StructuralCheck::NeighborInSolution,
        StructuralCheck::NestedAtMostOne,
        StructuralCheck::EqualEndpointAtMostOne,
        StructuralCheck::ConsecutiveCoCover,
        StructuralCheck::SelectedCoCover,
        StructuralCheck::SandwichedForbidsIntersection,
        StructuralCheck::SandwichedAtMostOne,
    ];
}

impl fmt::Display for StructuralCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StructuralCheck::NeighborInSolution => "neighbor-in-solution",
            StructuralCheck::NestedAtMostOne => "nested-at-most-one",
            StructuralCheck::EqualEndpointAtMostOne => "equal-endpoint-at-most-one",
            StructuralCheck::ConsecutiveCoCover => "consecutive-co-cover",
            StructuralCheck::SelectedCoCover => "selected-co-cover",
            StructuralCheck::SandwichedForbidsIntersection => "sandwiched-forbids-intersection",
            StructuralCheck::SandwichedAtMostOne => "sandwiched-at-most-one",
        };
        f.write_str(name)
    }
}

/// One failed check: which rule, on which solution, with the witnesses
/// that broke it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaViolation {
    pub check: StructuralCheck,
    pub solution: VertexSet,
    pub witnesses: Vec<VertexRef>,
}

/// Outcome of [`check_lemmas`]: empty violation list means all checks hold
/// on every solution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count_for(&self, check: StructuralCheck) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }
}

/// Run every structural check over an enumerated solution family.
///
/// Requires a connected graph with at least two vertices per side (the
/// checks assume solutions of size >= 2), and errors out if `sols`
/// contains anything that is not a minimal connected dominating set — a
/// corrupted family must not be silently scored.
pub fn check_lemmas(g: &ConvexBipartiteGraph, sols: &SolutionSet) -> Result<LemmaReport> {
    if g.n_u() < 2 || g.n_w() < 2 || !g.validate().connected {
        return Err(Error::CheckPrecondition);
    }
    for d in sols.iter() {
        if !g.is_minimal_cds(d) {
            return Err(Error::NotMinimal { set: d.to_string() });
        }
    }

    let mut report = LemmaReport::default();
    for d in sols.iter() {
        check_neighbor_in_solution(g, d, &mut report);
        check_interval_pairs(g, d, &mut report);
        check_consecutive_co_cover(g, d, &mut report);
        check_selected_co_cover(g, d, &mut report);
        check_sandwiched(g, d, &mut report);
    }
    Ok(report)
}

fn check_neighbor_in_solution(g: &ConvexBipartiteGraph, d: &VertexSet, report: &mut LemmaReport) {
    for v in g.all_vertices().iter() {
        let nb = g.neighbors(v).expect("in range");
        if nb.intersection(d).is_empty() {
            report.violations.push(LemmaViolation {
                check: StructuralCheck::NeighborInSolution,
                solution: *d,
                witnesses: vec![v],
            });
        }
    }
}

fn check_interval_pairs(g: &ConvexBipartiteGraph, d: &VertexSet, report: &mut LemmaReport) {
    let selected: Vec<usize> = d
        .iter()
        .filter(|v| v.side == crate::graph::Side::U)
        .map(|v| v.index)
        .collect();
    for (a, &i) in selected.iter().enumerate() {
        for &j in &selected[a + 1..] {
            let (ii, ij) = (g.interval(i), g.interval(j));
            if ii.is_subset_of(&ij) || ij.is_subset_of(&ii) {
                report.violations.push(LemmaViolation {
                    check: StructuralCheck::NestedAtMostOne,
                    solution: *d,
                    witnesses: vec![VertexRef::u(i), VertexRef::u(j)],
                });
            }
            if ii.left() == ij.left() || ii.right() == ij.right() {
                report.violations.push(LemmaViolation {
                    check: StructuralCheck::EqualEndpointAtMostOne,
                    solution: *d,
                    witnesses: vec![VertexRef::u(i), VertexRef::u(j)],
                });
            }
        }
    }
}

fn check_consecutive_co_cover(g: &ConvexBipartiteGraph, d: &VertexSet, report: &mut LemmaReport) {
    for j in 1..g.n_w() {
        let both = g.w_mask_of(j) & g.w_mask_of(j + 1) & d.u_bits();
        if both == 0 {
            report.violations.push(LemmaViolation {
                check: StructuralCheck::ConsecutiveCoCover,
                solution: *d,
                witnesses: vec![VertexRef::w(j), VertexRef::w(j + 1)],
            });
        }
    }
}

fn check_selected_co_cover(g: &ConvexBipartiteGraph, d: &VertexSet, report: &mut LemmaReport) {
    let selected_w: Vec<usize> = d
        .iter()
        .filter(|v| v.side == crate::graph::Side::W)
        .map(|v| v.index)
        .collect();
    for pair in selected_w.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if g.w_mask_of(a) & g.w_mask_of(b) & d.u_bits() == 0 {
            report.violations.push(LemmaViolation {
                check: StructuralCheck::SelectedCoCover,
                solution: *d,
                witnesses: vec![VertexRef::w(a), VertexRef::w(b)],
            });
        }
    }
}

fn check_sandwiched(g: &ConvexBipartiteGraph, d: &VertexSet, report: &mut LemmaReport) {
    let selected: Vec<usize> = d
        .iter()
        .filter(|v| v.side == crate::graph::Side::U)
        .map(|v| v.index)
        .collect();
    for (a, &i) in selected.iter().enumerate() {
        for &j in &selected[a + 1..] {
            let (ii, ij) = (g.interval(i), g.interval(j));
            let Some(common) = ii.intersection(&ij) else {
                continue;
            };
            let union_left = ii.left().min(ij.left());
            let union_right = ii.right().max(ij.right());
            let inside: Vec<usize> = selected
                .iter()
                .copied()
                .filter(|&k| k != i && k != j)
                .filter(|&k| {
                    let ik = g.interval(k);
                    ik.left() >= union_left
                        && ik.right() <= union_right
                        && ik.len() < union_right - union_left + 1
                })
                .collect();
            if !inside.is_empty() && common.w_mask() & d.w_bits() != 0 {
                report.violations.push(LemmaViolation {
                    check: StructuralCheck::SandwichedForbidsIntersection,
                    solution: *d,
                    witnesses: vec![VertexRef::u(i), VertexRef::u(j), VertexRef::u(inside[0])],
                });
            }
            if inside.len() > 1 {
                report.violations.push(LemmaViolation {
                    check: StructuralCheck::SandwichedAtMostOne,
                    solution: *d,
                    witnesses: inside.iter().map(|&k| VertexRef::u(k)).collect(),
                });
            }
        }
    }
}
