//! Plain-text hypergraph format.
//!
//! ```text
//! # optional comment lines
//! 6 3
//! 1 3 5
//! 2 4 6
//! ```
//!
//! The first data line is `n r`; every further line is one edge given as
//! `r` 1-based labels. Edge and label order are irrelevant; a repeated
//! edge is an error.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::{VertexSet, MAX_VERTICES};

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<VertexSet> = Vec::new();
    let mut seen = std::collections::HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<usize> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("not a non-negative integer: {tok:?}"),
                })
            })
            .collect::<Result<_>>()?;

        let Some((n, r)) = header else {
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "header must be `n r`".into(),
                });
            }
            if fields[0] > MAX_VERTICES {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("n = {} exceeds {MAX_VERTICES}", fields[0]),
                });
            }
            if fields[1] < 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("uniformity must be at least 2, got {}", fields[1]),
                });
            }
            header = Some((fields[0], fields[1]));
            continue;
        };

        if fields.len() != r {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {r} labels, found {}", fields.len()),
            });
        }
        let mut e = VertexSet::EMPTY;
        for &label in &fields {
            if label == 0 || label > n {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("label {label} outside 1..{n}"),
                });
            }
            e.insert(label - 1);
        }
        if e.len() != r {
            return Err(Error::Parse {
                line: line_no,
                message: "repeated label within an edge".into(),
            });
        }
        if let Some(first) = seen.insert(e, line_no) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate edge (first seen on line {first})"),
            });
        }
        edges.push(e);
    }

    let (n, r) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing `n r` header".into(),
    })?;
    Hypergraph::new(n, r, edges)
}

pub fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path)?;
    parse_hypergraph(&text)
}

/// Canonical text rendering: header, then edges in colex order.
pub fn to_text(h: &Hypergraph) -> String {
    h.to_string()
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.r())?;
        for e in self.edges() {
            let labels: Vec<String> = e.labels().iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", labels.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments_and_whitespace() {
        let text = "# a triangle\n\n  3   2 \n 2 1\n3\t1\n  # trailing comment\n2 3\n";
        let g = parse_hypergraph(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.r(), 2);
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_hypergraph("").is_err());
        assert!(parse_hypergraph("3\n").is_err());
        assert!(parse_hypergraph("3 2\n1 2 3\n").is_err());
        assert!(parse_hypergraph("3 2\n1 4\n").is_err());
        assert!(parse_hypergraph("3 2\n0 1\n").is_err());
        assert!(parse_hypergraph("3 2\n1 1\n").is_err());
        assert!(parse_hypergraph("3 2\n1 x\n").is_err());
        let dup = parse_hypergraph("3 2\n1 2\n2 1\n");
        assert!(matches!(dup, Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn edgeless_file() {
        let g = parse_hypergraph("5 3\n").unwrap();
        assert_eq!(g.n(), 5);
        assert!(g.is_empty());
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 3usize..10, bits in proptest::collection::vec(any::<bool>(), 120)) {
            let triples = crate::vertex_set::k_subsets(n, 3);
            let edges: Vec<VertexSet> = triples
                .iter()
                .zip(bits.iter())
                .filter(|(_, &keep)| keep)
                .map(|(e, _)| *e)
                .collect();
            let h = Hypergraph::new(n, 3, edges).unwrap();
            let back = parse_hypergraph(&to_text(&h)).unwrap();
            prop_assert_eq!(back, h);
        }
    }
}
