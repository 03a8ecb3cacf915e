//! The `.uhg` text format.
//!
//! ```text
//! # optional comments
//! k n m
//! v1 v2 ... vk      (m lines, 1-based ids)
//! ```
//!
//! Blank lines and `#` lines are skipped anywhere. Vertex lists may be in any
//! order on input; output is canonical and ends with a newline.

use std::fmt::Write;

use super::Hypergraph;
use crate::error::{Error, Result};

pub fn read_uhg(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing header line \"k n m\"".into(),
    })?;
    let fields = parse_ints(header_line, header)?;
    let [k, n, m] = fields[..] else {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header needs 3 integers \"k n m\", found {}", fields.len()),
        });
    };

    let mut edges = Vec::with_capacity(m);
    let mut edge_lines = Vec::with_capacity(m);
    for (line, text) in lines {
        if edges.len() == m {
            return Err(Error::Parse {
                line,
                message: format!("more than the declared {m} edge lines"),
            });
        }
        let edge = parse_ints(line, text)?;
        if edge.len() != k {
            return Err(Error::Parse {
                line,
                message: format!("edge has {} vertices, expected {k}", edge.len()),
            });
        }
        edges.push(edge);
        edge_lines.push(line);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: edge_lines.last().copied().unwrap_or(header_line),
            message: format!("declared {m} edges, found {}", edges.len()),
        });
    }

    Hypergraph::build(k, n, &edges).map_err(|e| {
        let line = match &e {
            Error::VertexOutOfRange { index, .. } | Error::RepeatedVertex { index, .. } => {
                edge_lines[*index]
            }
            _ => header_line,
        };
        Error::Parse {
            line,
            message: e.to_string(),
        }
    })
}

fn parse_ints(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("expected a nonnegative integer, found {tok:?}"),
            })
        })
        .collect()
}

pub fn write_uhg(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", h.k(), h.n(), h.m()).unwrap();
    for e in h.edges() {
        let mut first = true;
        for v in e {
            if !first {
                out.push(' ');
            }
            write!(out, "{}", v + 1).unwrap();
            first = false;
        }
        out.push('\n');
    }
    out
}
