//! Text formats: the `cbg` graph file and the solution listing.
//!
//! Graph file (UTF-8, LF):
//!
//! ```text
//! cbg 1
//! <nU> <nW>
//! <left> <right>      one line per u, 1-based W positions
//! ```
//!
//! Lines starting with `#` and blank lines are ignored anywhere.
//! Solution files carry one solution per line (members in canonical order,
//! space-separated), lines sorted, and a final `count <N>` line.

use crate::graph::ConvexBipartiteGraph;
use crate::oracle::SolutionSet;
use crate::{Error, Result};

fn is_skippable(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

fn two_fields(line_no: usize, line: &str, expected: &'static str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next();
    let b = it.next();
    let rest = it.next();
    match (a, b, rest) {
        (Some(a), Some(b), None) => {
            let a: usize = a.parse().map_err(|_| Error::NonInteger {
                line: line_no,
                expected,
            })?;
            let b: usize = b.parse().map_err(|_| Error::NonInteger {
                line: line_no,
                expected,
            })?;
            Ok((a, b))
        }
        _ => Err(Error::NonInteger {
            line: line_no,
            expected,
        }),
    }
}

/// Parse a graph file. Every malformed construct is reported with its
/// 1-based line number and a dedicated error variant.
pub fn parse_graph(text: &str) -> Result<ConvexBipartiteGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !is_skippable(l));

    let (line_no, header) = lines.next().ok_or(Error::UnexpectedEof {
        expected: "header `cbg 1`",
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields != ["cbg", "1"] {
        return Err(Error::BadHeader { line: line_no });
    }

    let (line_no, counts) = lines.next().ok_or(Error::UnexpectedEof {
        expected: "size line `<nU> <nW>`",
    })?;
    let (n_u, n_w) = two_fields(line_no, counts, "two integers `<nU> <nW>`")?;

    let mut intervals = Vec::with_capacity(n_u);
    for _ in 0..n_u {
        let (line_no, line) = lines.next().ok_or(Error::UnexpectedEof {
            expected: "interval line `<left> <right>`",
        })?;
        let (left, right) = two_fields(line_no, line, "two integers `<left> <right>`")?;
        if left == 0 || left > right || right > n_w {
            return Err(Error::IntervalOutOfRangeAt {
                line: line_no,
                left,
                right,
                n_w,
            });
        }
        intervals.push((left, right));
    }

    if let Some((line_no, _)) = lines.next() {
        return Err(Error::TrailingContent { line: line_no });
    }

    ConvexBipartiteGraph::new(n_u, n_w, &intervals)
}

/// Canonical serialisation; `parse_graph(serialize_graph(g)) == g`.
pub fn serialize_graph(g: &ConvexBipartiteGraph) -> String {
    let mut out = String::new();
    out.push_str("cbg 1\n");
    out.push_str(&format!("{} {}\n", g.n_u(), g.n_w()));
    for iv in g.intervals() {
        out.push_str(&format!("{} {}\n", iv.left(), iv.right()));
    }
    out
}

/// Render a solution family: sorted solution lines, then `count <N>`.
pub fn solution_file(sols: &SolutionSet) -> String {
    let mut lines: Vec<String> = sols.iter().map(|d| d.to_string()).collect();
    lines.sort();
    let mut out = String::new();
    for line in &lines {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("count {}\n", lines.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_convex_graph, RandomParams};
    use crate::graph::Interval;
    use crate::oracle::enumerate_mcds_bruteforce;
    use proptest::prelude::*;

    #[test]
    fn parses_k23() {
        let g = parse_graph("cbg 1\n2 3\n1 3\n1 3\n").unwrap();
        assert_eq!(g.n_u(), 2);
        assert_eq!(g.n_w(), 3);
        assert_eq!(g.interval(1), Interval::new(1, 3));
    }

    #[test]
    fn parses_path_fixture() {
        let g = parse_graph("cbg 1\n2 2\n1 1\n1 2\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.interval(2), Interval::new(1, 2));
    }

    #[test]
    fn comments_and_blanks_anywhere() {
        let text = "# fixture\n\ncbg 1\n# sizes\n2 3\n1 3\n# last\n1 3\n\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.n(), 5);
    }

    #[test]
    fn distinct_parse_errors() {
        assert_eq!(
            parse_graph("cbg 2\n1 1\n1 1\n").unwrap_err(),
            Error::BadHeader { line: 1 }
        );
        assert!(matches!(
            parse_graph("cbg 1\nx y\n").unwrap_err(),
            Error::NonInteger { line: 2, .. }
        ));
        assert_eq!(
            parse_graph("cbg 1\n1 2\n3 1\n").unwrap_err(),
            Error::IntervalOutOfRangeAt {
                line: 3,
                left: 3,
                right: 1,
                n_w: 2
            }
        );
        assert!(matches!(
            parse_graph("cbg 1\n2 3\n1 3\n").unwrap_err(),
            Error::UnexpectedEof { .. }
        ));
        assert_eq!(
            parse_graph("cbg 1\n1 2\n1 2\n9 9\n").unwrap_err(),
            Error::TrailingContent { line: 4 }
        );
        assert!(matches!(
            parse_graph("").unwrap_err(),
            Error::UnexpectedEof { .. }
        ));
    }

    #[test]
    fn solution_file_layout() {
        let g = parse_graph("cbg 1\n2 3\n1 3\n1 3\n").unwrap();
        let sols = enumerate_mcds_bruteforce(&g, 24).unwrap();
        let text = solution_file(&sols);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "u1 w1");
        assert_eq!(lines[6], "count 6");
        let mut sorted = lines[..6].to_vec();
        sorted.sort();
        assert_eq!(sorted, lines[..6]);
    }

    proptest! {
        #[test]
        fn roundtrip_random_graphs(n_u in 2usize..9, n_w in 2usize..9, seed in 0u64..500) {
            let p = RandomParams::new(n_u, n_w, seed);
            if let Ok(g) = random_convex_graph(&p) {
                let text = serialize_graph(&g);
                let back = parse_graph(&text).unwrap();
                prop_assert_eq!(&back, &g);
                prop_assert_eq!(serialize_graph(&back), text);
            }
        }
    }
}
