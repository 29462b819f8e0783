//! Enumeration of minimal connected dominating sets (MCDS) in convex
//! bipartite graphs.
//!
//! A bipartite graph `G = (U, W, E)` is *convex* when the vertices of `W`
//! can be ordered so that every `u ∈ U` is adjacent to a contiguous run of
//! `W`. Each `u` is then described by a single interval over the positions
//! of `W`, and a whole graph is just a list of intervals. On this class the
//! set of all minimal connected dominating sets can be enumerated by a
//! four-stage branch-and-reduce search whose tree has at most
//! `O(1.7254^n)` leaves.
//!
//! The crate is organised as follows:
//!
//! * [`graph`] — the interval representation, vertex sets backed by
//!   bitmasks, and every polynomial-time predicate (domination, induced
//!   connectivity, minimality, cut vertices, convex-ordering checks).
//! * [`oracle`] — a definition-level brute-force enumerator used as the
//!   ground truth in differential tests, plus executable checks of the
//!   structural facts that justify the branching rules.
//! * [`enumerator`] — the four-stage search itself.
//! * [`analysis`] — branching vectors, branching numbers, search-tree
//!   statistics, and the measure-trace verifier.
//! * [`generators`] — the `3^k`-solution lower-bound family and seeded
//!   random instances.
//! * [`format`] — the `cbg` text format, solution files, and helpers for
//!   the `mcds` command-line tool.

pub mod analysis;
pub mod enumerator;
pub mod format;
pub mod generators;
pub mod graph;
pub mod oracle;

mod error;

pub use error::{Error, Result};
