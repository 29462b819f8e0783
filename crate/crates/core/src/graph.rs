//! Convex bipartite graphs and the polynomial-time predicates everything
//! else builds on.
//!
//! Vertices are addressed 1-based on each side: `u1..u|U|` and `w1..w|W|`.
//! The `W` ordering is the convex ordering, so the neighbourhood of each
//! `u` is a single [`Interval`] of `W` positions. Vertex sets are a pair of
//! 64-bit masks, which caps each side at [`MAX_SIDE`] vertices — far beyond
//! anything an exponential-time enumeration can touch.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Maximum number of vertices per side (one bit each in a `u64`).
pub const MAX_SIDE: usize = 64;

/// Bitmask with the lowest `n` bits set.
#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    debug_assert!(n <= 64);
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Which side of the bipartition a vertex lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    U,
    W,
}

/// A vertex: side plus 1-based index within that side.
///
/// The derived order (`U` before `W`, then by index) is the canonical
/// vertex order used for all deterministic iteration and output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

impl VertexRef {
    pub fn u(index: usize) -> Self {
        VertexRef {
            side: Side::U,
            index,
        }
    }

    pub fn w(index: usize) -> Self {
        VertexRef {
            side: Side::W,
            index,
        }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::U => write!(f, "u{}", self.index),
            Side::W => write!(f, "w{}", self.index),
        }
    }
}

impl FromStr for VertexRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::VertexOutOfRange {
            vertex: s.to_string(),
        };
        let (side, rest) = match s.as_bytes().first() {
            Some(b'u') => (Side::U, &s[1..]),
            Some(b'w') => (Side::W, &s[1..]),
            _ => return Err(err()),
        };
        let index: usize = rest.parse().map_err(|_| err())?;
        if index == 0 {
            return Err(err());
        }
        Ok(VertexRef { side, index })
    }
}

/// A nonempty contiguous range `[left, right]` of 1-based `W` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    left: usize,
    right: usize,
}

impl Interval {
    /// Build an interval; `1 <= left <= right` is a caller contract.
    pub fn new(left: usize, right: usize) -> Self {
        assert!(
            1 <= left && left <= right,
            "empty interval [{left}, {right}]"
        );
        Interval { left, right }
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    /// Number of positions; intervals are nonempty by construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn contains(&self, j: usize) -> bool {
        self.left <= j && j <= self.right
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.left <= self.left && self.right <= other.right
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.left <= other.right && other.left <= self.right
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let left = self.left.max(other.left);
        let right = self.right.min(other.right);
        (left <= right).then(|| Interval::new(left, right))
    }

    /// Bitmask over `W` (bit `j-1` set for each member `w_j`).
    pub(crate) fn w_mask(&self) -> u64 {
        low_mask(self.right) & !low_mask(self.left - 1)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

/// Iterator over the set bits of a `u64`, ascending.
#[derive(Clone)]
struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(bit)
    }
}

/// A subset of `U ∪ W` as two bitmasks. Supports the usual set algebra and
/// iterates in canonical order (`U` ascending, then `W` ascending).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    u: u64,
    w: u64,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet::default()
    }

    pub(crate) fn from_bits(u: u64, w: u64) -> Self {
        VertexSet { u, w }
    }

    pub(crate) fn u_bits(&self) -> u64 {
        self.u
    }

    pub(crate) fn w_bits(&self) -> u64 {
        self.w
    }

    pub fn insert(&mut self, v: VertexRef) {
        debug_assert!(v.index >= 1 && v.index <= MAX_SIDE);
        match v.side {
            Side::U => self.u |= 1u64 << (v.index - 1),
            Side::W => self.w |= 1u64 << (v.index - 1),
        }
    }

    pub fn remove(&mut self, v: VertexRef) {
        match v.side {
            Side::U => self.u &= !(1u64 << (v.index - 1)),
            Side::W => self.w &= !(1u64 << (v.index - 1)),
        }
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        if v.index == 0 || v.index > MAX_SIDE {
            return false;
        }
        match v.side {
            Side::U => self.u & (1u64 << (v.index - 1)) != 0,
            Side::W => self.w & (1u64 << (v.index - 1)) != 0,
        }
    }

    #[must_use]
    pub fn with(&self, v: VertexRef) -> Self {
        let mut s = *self;
        s.insert(v);
        s
    }

    #[must_use]
    pub fn without(&self, v: VertexRef) -> Self {
        let mut s = *self;
        s.remove(v);
        s
    }

    #[must_use]
    pub fn union(&self, other: &VertexSet) -> Self {
        VertexSet {
            u: self.u | other.u,
            w: self.w | other.w,
        }
    }

    #[must_use]
    pub fn intersection(&self, other: &VertexSet) -> Self {
        VertexSet {
            u: self.u & other.u,
            w: self.w & other.w,
        }
    }

    #[must_use]
    pub fn difference(&self, other: &VertexSet) -> Self {
        VertexSet {
            u: self.u & !other.u,
            w: self.w & !other.w,
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.u & !other.u == 0 && self.w & !other.w == 0
    }

    pub fn len(&self) -> usize {
        (self.u.count_ones() + self.w.count_ones()) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.u == 0 && self.w == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexRef> + '_ {
        BitIter(self.u)
            .map(|i| VertexRef::u(i + 1))
            .chain(BitIter(self.w).map(|j| VertexRef::w(j + 1)))
    }

    /// First member in canonical order.
    pub fn first(&self) -> Option<VertexRef> {
        self.iter().next()
    }
}

impl FromIterator<VertexRef> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexRef>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Ord for VertexSet {
    /// Lexicographic over the canonical member sequence, so e.g.
    /// `{u1} < {u1, u2} < {u1, w5}`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// What `validate` found. A report never fails; it carries the findings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub connected: bool,
    /// True iff the graph is a star `K_{1,n-1}` with `n >= 3`, i.e. it has
    /// a unique internal vertex adjacent to all others. A single edge has
    /// no internal vertex and is not a star.
    pub is_star: bool,
    pub star_center: Option<VertexRef>,
    pub isolated_vertices: VertexSet,
    /// `(u index, message)` per malformed interval; empty for any graph
    /// that was actually constructed.
    pub interval_errors: Vec<(usize, String)>,
}

/// A convex bipartite graph: `n_u` interval neighbourhoods over an ordered
/// `W` of size `n_w`. Immutable after construction; every operation is
/// read-only, so sharing a graph across threads is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexBipartiteGraph {
    n_u: usize,
    n_w: usize,
    intervals: Vec<Interval>,
    /// Per `u`: mask of adjacent `W` positions.
    u_masks: Vec<u64>,
    /// Per `w`: mask of adjacent `U` vertices.
    w_masks: Vec<u64>,
}

impl ConvexBipartiteGraph {
    pub fn new(n_u: usize, n_w: usize, intervals: &[(usize, usize)]) -> Result<Self> {
        if n_u == 0 || n_w == 0 {
            return Err(Error::EmptySide);
        }
        if n_u > MAX_SIDE {
            return Err(Error::SideLimit {
                side: 'U',
                size: n_u,
                max: MAX_SIDE,
            });
        }
        if n_w > MAX_SIDE {
            return Err(Error::SideLimit {
                side: 'W',
                size: n_w,
                max: MAX_SIDE,
            });
        }
        if intervals.len() != n_u {
            return Err(Error::IntervalCount {
                expected: n_u,
                got: intervals.len(),
            });
        }
        for (i, &(left, right)) in intervals.iter().enumerate() {
            if left == 0 || left > right || right > n_w {
                return Err(Error::IntervalRange {
                    u: i + 1,
                    left,
                    right,
                    n_w,
                });
            }
        }
        let intervals: Vec<Interval> = intervals
            .iter()
            .map(|&(l, r)| Interval::new(l, r))
            .collect();
        let u_masks: Vec<u64> = intervals.iter().map(|iv| iv.w_mask()).collect();
        let mut w_masks = vec![0u64; n_w];
        for (i, iv) in intervals.iter().enumerate() {
            for j in iv.left()..=iv.right() {
                w_masks[j - 1] |= 1u64 << i;
            }
        }
        Ok(ConvexBipartiteGraph {
            n_u,
            n_w,
            intervals,
            u_masks,
            w_masks,
        })
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn n_w(&self) -> usize {
        self.n_w
    }

    /// Total number of vertices.
    pub fn n(&self) -> usize {
        self.n_u + self.n_w
    }

    pub fn edge_count(&self) -> usize {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Neighbour interval of `u_index` (1-based).
    pub fn interval(&self, u_index: usize) -> Interval {
        self.intervals[u_index - 1]
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub(crate) fn full_u_mask(&self) -> u64 {
        low_mask(self.n_u)
    }

    pub(crate) fn full_w_mask(&self) -> u64 {
        low_mask(self.n_w)
    }

    /// Every vertex of the graph as a set.
    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::from_bits(self.full_u_mask(), self.full_w_mask())
    }

    /// `W` positions adjacent to at least one `u` in `u_bits`.
    pub(crate) fn w_cover(&self, u_bits: u64) -> u64 {
        let mut cover = 0u64;
        let mut bits = u_bits;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cover |= self.u_masks[i];
        }
        cover
    }

    /// `U` vertices adjacent to at least one `w` in `w_bits`.
    pub(crate) fn u_cover(&self, w_bits: u64) -> u64 {
        let mut cover = 0u64;
        let mut bits = w_bits;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cover |= self.w_masks[j];
        }
        cover
    }

    pub(crate) fn u_mask_of(&self, u_index: usize) -> u64 {
        self.u_masks[u_index - 1]
    }

    pub(crate) fn w_mask_of(&self, w_index: usize) -> u64 {
        self.w_masks[w_index - 1]
    }

    fn check_vertex(&self, v: VertexRef) -> Result<()> {
        let limit = match v.side {
            Side::U => self.n_u,
            Side::W => self.n_w,
        };
        if v.index == 0 || v.index > limit {
            return Err(Error::VertexOutOfRange {
                vertex: v.to_string(),
            });
        }
        Ok(())
    }

    /// Open neighbourhood of `v`.
    pub fn neighbors(&self, v: VertexRef) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(match v.side {
            Side::U => VertexSet::from_bits(0, self.u_masks[v.index - 1]),
            Side::W => VertexSet::from_bits(self.w_masks[v.index - 1], 0),
        })
    }

    pub fn degree(&self, v: VertexRef) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    /// Connectivity, star shape, and isolated vertices in one pass.
    pub fn validate(&self) -> ValidationReport {
        let mut isolated = VertexSet::new();
        for j in 1..=self.n_w {
            if self.w_masks[j - 1] == 0 {
                isolated.insert(VertexRef::w(j));
            }
        }
        let connected = self.is_connected_induced(&self.all_vertices());

        // A star needs an internal vertex: degree n-1 >= 2, all others leaves.
        let mut is_star = false;
        let mut star_center = None;
        if connected && self.n() >= 3 {
            if self.n_u == 1 && self.intervals[0].len() == self.n_w {
                is_star = true;
                star_center = Some(VertexRef::u(1));
            } else if self.n_w == 1 {
                is_star = true;
                star_center = Some(VertexRef::w(1));
            }
        }

        ValidationReport {
            connected,
            is_star,
            star_center,
            isolated_vertices: isolated,
            interval_errors: Vec::new(),
        }
    }

    /// Is `G[D]` connected? The empty set counts as disconnected, a
    /// singleton as connected.
    pub fn is_connected_induced(&self, d: &VertexSet) -> bool {
        if d.is_empty() {
            return false;
        }
        let (du, dw) = (d.u_bits(), d.w_bits());
        let (mut vu, mut vw) = if du != 0 {
            (du & du.wrapping_neg(), 0)
        } else {
            (0, dw & dw.wrapping_neg())
        };
        loop {
            let nu = vu | (self.u_cover(vw) & du);
            let nw = vw | (self.w_cover(vu) & dw);
            if nu == vu && nw == vw {
                break;
            }
            vu = nu;
            vw = nw;
        }
        vu == du && vw == dw
    }

    /// Does `D` dominate every vertex (member or neighbour of a member)?
    pub fn is_dominating(&self, d: &VertexSet) -> bool {
        let covered_w = d.w_bits() | self.w_cover(d.u_bits());
        let covered_u = d.u_bits() | self.u_cover(d.w_bits());
        covered_u == self.full_u_mask() && covered_w == self.full_w_mask()
    }

    /// Connected dominating set.
    pub fn is_cds(&self, d: &VertexSet) -> bool {
        self.is_dominating(d) && self.is_connected_induced(d)
    }

    /// Does `v` dominate some vertex that the rest of `d` does not?
    fn has_private_neighbor(&self, d: &VertexSet, v: VertexRef) -> bool {
        let rest = d.without(v);
        match v.side {
            Side::U => {
                // v itself: dominated by rest only via a W neighbour.
                if self.u_mask_of(v.index) & rest.w_bits() == 0 {
                    return true;
                }
                let mut candidates = BitIter(self.u_mask_of(v.index) & !rest.w_bits());
                candidates.any(|j| self.w_masks[j] & rest.u_bits() == 0)
            }
            Side::W => {
                if self.w_mask_of(v.index) & rest.u_bits() == 0 {
                    return true;
                }
                let mut candidates = BitIter(self.w_mask_of(v.index) & !rest.u_bits());
                candidates.any(|i| self.u_masks[i] & rest.w_bits() == 0)
            }
        }
    }

    /// Minimality via the characterisation: a CDS is minimal iff every
    /// member has a private neighbour or is a cut vertex of `G[D]`. This is
    /// the fast path; [`Self::is_minimal_cds_definitional`] is the oracle
    /// it is tested against.
    pub fn is_minimal_cds(&self, d: &VertexSet) -> bool {
        if !self.is_cds(d) {
            return false;
        }
        d.iter()
            .all(|v| self.has_private_neighbor(d, v) || !self.is_connected_induced(&d.without(v)))
    }

    /// Minimality straight from the definition: no single removal leaves a
    /// connected dominating set. (Removing one vertex at a time is enough:
    /// any CDS strictly inside `D` can be reached by peeling vertices off
    /// one by one while staying a CDS.)
    pub fn is_minimal_cds_definitional(&self, d: &VertexSet) -> bool {
        if !self.is_cds(d) {
            return false;
        }
        d.iter().all(|v| !self.is_cds(&d.without(v)))
    }

    /// Articulation points of the whole graph.
    pub fn cut_vertices(&self) -> Result<VertexSet> {
        let all = self.all_vertices();
        if !self.is_connected_induced(&all) {
            return Err(Error::DisconnectedGraph);
        }
        let mut cut = VertexSet::new();
        if self.n() <= 2 {
            return Ok(cut);
        }
        for v in all.iter() {
            if !self.is_connected_induced(&all.without(v)) {
                cut.insert(v);
            }
        }
        Ok(cut)
    }
}

/// Validate raw parts without constructing a graph first. Interval errors
/// are collected per `u`; when any exist the structural fields default to
/// "not connected, not a star".
pub fn validate_parts(n_u: usize, n_w: usize, intervals: &[(usize, usize)]) -> ValidationReport {
    let mut interval_errors = Vec::new();
    for (i, &(left, right)) in intervals.iter().enumerate() {
        if left == 0 || left > right || right > n_w {
            interval_errors.push((
                i + 1,
                format!("interval [{left}, {right}] out of range for |W| = {n_w}"),
            ));
        }
    }
    if intervals.len() != n_u {
        interval_errors.push((
            0,
            format!("expected {n_u} intervals, got {}", intervals.len()),
        ));
    }
    if !interval_errors.is_empty() || n_u == 0 || n_w == 0 || n_u > MAX_SIDE || n_w > MAX_SIDE {
        return ValidationReport {
            connected: false,
            is_star: false,
            star_center: None,
            isolated_vertices: VertexSet::new(),
            interval_errors,
        };
    }
    ConvexBipartiteGraph::new(n_u, n_w, intervals)
        .expect("parts were checked")
        .validate()
}

/// Is `ordering` a convex ordering for the given bipartite adjacency?
///
/// `adjacency[i]` lists the 1-based `W` indices adjacent to `u_{i+1}`;
/// `ordering` is a permutation of `1..=n_w` giving the proposed left-to-
/// right layout of `W`. Returns true iff every adjacency list occupies
/// consecutive positions under that layout.
pub fn check_convex_ordering(
    adjacency: &[Vec<usize>],
    n_w: usize,
    ordering: &[usize],
) -> Result<bool> {
    if ordering.len() != n_w {
        return Err(Error::NotAPermutation { n_w });
    }
    let mut position = vec![0usize; n_w + 1];
    let mut seen = vec![false; n_w + 1];
    for (pos, &w) in ordering.iter().enumerate() {
        if w == 0 || w > n_w || seen[w] {
            return Err(Error::NotAPermutation { n_w });
        }
        seen[w] = true;
        position[w] = pos + 1;
    }
    for list in adjacency {
        let mut lo = usize::MAX;
        let mut hi = 0usize;
        let mut distinct = std::collections::BTreeSet::new();
        for &w in list {
            if w == 0 || w > n_w {
                return Err(Error::VertexOutOfRange {
                    vertex: format!("w{w}"),
                });
            }
            let p = position[w];
            lo = lo.min(p);
            hi = hi.max(p);
            distinct.insert(p);
        }
        if distinct.is_empty() {
            continue;
        }
        if hi - lo + 1 != distinct.len() {
            return Ok(false);
        }
    }
    Ok(true)
}
