//! graph6 codec (one graph per line, ASCII), restricted to sub-cubic graphs.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{CubicGraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    Empty,
    BadChar(u8),
    Truncated,
    TrailingData,
    TooLarge,
    Graph(GraphError),
    /// Cubic mode was requested and some vertex exceeds degree 3 or the
    /// sealed graph is not 3-regular.
    NotCubic,
}

impl fmt::Display for Graph6Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Graph6Error::Empty => write!(f, "empty graph6 line"),
            Graph6Error::BadChar(c) => write!(f, "invalid graph6 byte {c}"),
            Graph6Error::Truncated => write!(f, "truncated graph6 body"),
            Graph6Error::TrailingData => write!(f, "trailing bytes after graph6 body"),
            Graph6Error::TooLarge => write!(f, "graph6 order too large"),
            Graph6Error::Graph(e) => write!(f, "graph6 body: {e}"),
            Graph6Error::NotCubic => write!(f, "graph is not cubic"),
        }
    }
}

impl From<GraphError> for Graph6Error {
    fn from(e: GraphError) -> Self {
        Graph6Error::Graph(e)
    }
}

/// Parsing mode: `Construction` accepts any simple graph with max degree 3,
/// `Cubic` additionally requires 3-regularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Graph6Mode {
    Construction,
    Cubic,
}

pub fn parse_graph6(line: &str, mode: Graph6Mode) -> Result<CubicGraph, Graph6Error> {
    let bytes = line.trim().as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let (n, mut pos) = parse_order(bytes)?;
    let bits = n * (n.wrapping_sub(1)) / 2;
    let mut g = CubicGraph::new(n);
    let mut bit_index = 0usize;
    let mut cur: u8 = 0;
    let mut cur_left = 0u32;
    for j in 1..n {
        for i in 0..j {
            if cur_left == 0 {
                if pos >= bytes.len() {
                    return Err(Graph6Error::Truncated);
                }
                let c = bytes[pos];
                pos += 1;
                if !(63..=126).contains(&c) {
                    return Err(Graph6Error::BadChar(c));
                }
                cur = c - 63;
                cur_left = 6;
            }
            let bit = (cur >> (cur_left - 1)) & 1;
            cur_left -= 1;
            bit_index += 1;
            if bit == 1 {
                g.add_edge(i as u32, j as u32).map_err(|e| match e {
                    GraphError::DegreeOverflow(_) if mode == Graph6Mode::Cubic => {
                        Graph6Error::NotCubic
                    }
                    other => Graph6Error::Graph(other),
                })?;
            }
        }
    }
    debug_assert_eq!(bit_index, bits);
    if pos < bytes.len() {
        return Err(Graph6Error::TrailingData);
    }
    if mode == Graph6Mode::Cubic {
        g.check_sealed().map_err(|_| Graph6Error::NotCubic)?;
    }
    Ok(g)
}

fn parse_order(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let c = bytes[0];
    if c == 126 {
        if bytes.len() < 4 {
            return Err(Graph6Error::Truncated);
        }
        if bytes[1] == 126 {
            return Err(Graph6Error::TooLarge);
        }
        let mut n = 0usize;
        for &b in &bytes[1..4] {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::BadChar(b));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        Ok((n, 4))
    } else if (63..=126).contains(&c) {
        Ok(((c - 63) as usize, 1))
    } else {
        Err(Graph6Error::BadChar(c))
    }
}

pub fn encode_graph6(g: &CubicGraph) -> Result<String, Graph6Error> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else if n <= 258_047 {
        out.push(126);
        out.push(63 + ((n >> 12) & 0x3f) as u8);
        out.push(63 + ((n >> 6) & 0x3f) as u8);
        out.push(63 + (n & 0x3f) as u8);
    } else {
        return Err(Graph6Error::TooLarge);
    }
    let mut cur = 0u8;
    let mut filled = 0u32;
    for j in 1..n {
        for i in 0..j {
            cur <<= 1;
            if g.adjacent(i as u32, j as u32) {
                cur |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(63 + cur);
                cur = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        cur <<= 6 - filled;
        out.push(63 + cur);
    }
    Ok(String::from_utf8(out).unwrap())
}

/// Parse a multi-line graph6 document, skipping blank lines and an optional
/// `>>graph6<<` header.
pub fn parse_graph6_lines(text: &str, mode: Graph6Mode) -> Result<Vec<CubicGraph>, Graph6Error> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim().trim_start_matches(">>graph6<<");
        if line.is_empty() {
            continue;
        }
        out.push(parse_graph6(line, mode)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{k4, petersen, triangle};

    #[test]
    fn k4_roundtrip() {
        // Frozen with a hand-checked reference encoding: n=4 -> 'C',
        // all six upper-triangle bits set -> 111111 -> '~'.
        assert_eq!(encode_graph6(&k4()).unwrap(), "C~");
        let g = parse_graph6("C~", Graph6Mode::Cubic).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_cubic());
    }

    #[test]
    fn triangle_accepted_in_construction_mode() {
        // n=3 -> 'B', bits 111 padded -> 111000 -> 'w'.
        assert_eq!(encode_graph6(&triangle()).unwrap(), "Bw");
        let g = parse_graph6("Bw", Graph6Mode::Construction).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.neighbors(0).count() == 2);
        assert_eq!(
            parse_graph6("Bw", Graph6Mode::Cubic),
            Err(Graph6Error::NotCubic)
        );
    }

    #[test]
    fn truncated_body_is_an_error() {
        assert_eq!(
            parse_graph6("I", Graph6Mode::Construction),
            Err(Graph6Error::Truncated)
        );
    }

    #[test]
    fn petersen_roundtrip() {
        let g = petersen();
        let s = encode_graph6(&g).unwrap();
        let h = parse_graph6(&s, Graph6Mode::Cubic).unwrap();
        assert_eq!(g.adjacency_lists(), h.adjacency_lists());
    }

    #[test]
    fn degree_four_rejected() {
        // Star K_{1,4}: vertex 0 adjacent to 1,2,3,4.
        let mut g = CubicGraph::new(5);
        for v in 1..4 {
            g.add_edge(0, v).unwrap();
        }
        // encode a K_{1,4} by hand: n=5 'D', bits x01 x02 x12 x03 x13 x23 x04 x14 x24 x34
        // = 1 1 0 1 0 0 | 1 0 0 0 -> 52+63='s', 32+63='_'
        let r = parse_graph6("Ds_", Graph6Mode::Construction);
        assert!(matches!(r, Err(Graph6Error::Graph(_))));
    }
}
