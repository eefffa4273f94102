//! Hexagon graph of a cubic graph: each vertex becomes a 6-cycle of blue
//! edges with red antipodal chords, each edge becomes a pair of white
//! edges; plus the brace test.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{CubicGraph, EdgeId, VertexId};
use crate::matching::max_matching;

/// Vertex of a hexagon graph: `6 * v + i` for hexagon `v`, corner `i` in Z6.
pub type HVertex = u32;

#[inline]
pub fn hv(v: VertexId, corner: u8) -> HVertex {
    6 * v + corner as u32
}

#[inline]
pub fn hexagon_of(x: HVertex) -> VertexId {
    x / 6
}

#[inline]
pub fn corner_of(x: HVertex) -> u8 {
    (x % 6) as u8
}

/// Antipodal corner: the other end of the red chord at `x`.
#[inline]
pub fn bar(x: HVertex) -> HVertex {
    let v = x / 6;
    6 * v + (x % 6 + 3) % 6
}

/// Bipartition class: even corners form X, odd corners form Y.
#[inline]
pub fn in_class_x(x: HVertex) -> bool {
    x % 2 == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhiteEdge {
    pub a: HVertex,
    pub b: HVertex,
    /// The G-edge this white edge represents.
    pub g_edge: EdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HexagonError {
    NotCubic,
    Unbalanced,
    NoPerfectMatching,
}

impl fmt::Display for HexagonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HexagonError::NotCubic => write!(f, "hexagon graphs need a simple cubic graph"),
            HexagonError::Unbalanced => write!(f, "bipartition classes are unbalanced"),
            HexagonError::NoPerfectMatching => write!(f, "graph has no perfect matching"),
        }
    }
}

/// Hexagon graph of a cubic graph.
///
/// White edges come in partner pairs: index `2e` holds `e_uv` and `2e + 1`
/// holds the antipodal partner for G-edge `e`.
#[derive(Debug, Clone)]
pub struct HexagonGraph {
    source: CubicGraph,
    /// `index_assignment[v]` lists v's neighbors in index order 0,1,2.
    index_assignment: Vec<[VertexId; 3]>,
    whites: Vec<WhiteEdge>,
    /// H-vertex -> index into `whites`.
    white_at: Vec<u32>,
}

impl HexagonGraph {
    /// Build with the deterministic index assignment: neighbors sorted by id
    /// receive indices 0, 1, 2.
    pub fn build(g: &CubicGraph) -> Result<Self, HexagonError> {
        let orders: Vec<[VertexId; 3]> = (0..g.vertex_count() as u32)
            .map(|v| {
                let ns = g.sorted_neighbors(v);
                if ns.len() != 3 {
                    [u32::MAX; 3]
                } else {
                    [ns[0], ns[1], ns[2]]
                }
            })
            .collect();
        if orders.iter().any(|o| o[0] == u32::MAX) {
            return Err(HexagonError::NotCubic);
        }
        Self::build_with_orders(g, orders)
    }

    /// Build under an explicit neighbor ordering per vertex (any bijection
    /// onto {0,1,2}); hexagon graphs of the same G are isomorphic
    /// regardless of the choice.
    pub fn build_with_orders(
        g: &CubicGraph,
        orders: Vec<[VertexId; 3]>,
    ) -> Result<Self, HexagonError> {
        if !g.is_cubic() || orders.len() != g.vertex_count() {
            return Err(HexagonError::NotCubic);
        }
        let index_of = |v: VertexId, u: VertexId| -> u8 {
            orders[v as usize]
                .iter()
                .position(|&w| w == u)
                .expect("neighbor order must list all neighbors") as u8
        };
        let mut whites = Vec::with_capacity(2 * g.edge_count());
        let mut white_at = vec![u32::MAX; 6 * g.vertex_count()];
        for e in 0..g.edge_count() as u32 {
            let (v, u) = g.edge_endpoints(e);
            let i = index_of(v, u);
            let j = index_of(u, v);
            // Same class iff the corner indices share parity.
            let (ea, eb, ba, bb) = if i % 2 == j % 2 {
                (hv(v, i), hv(u, j + 3), hv(v, i + 3), hv(u, j))
            } else {
                (hv(v, i), hv(u, j), hv(v, i + 3), hv(u, j + 3))
            };
            let id = whites.len() as u32;
            whites.push(WhiteEdge { a: ea, b: eb, g_edge: e });
            whites.push(WhiteEdge { a: ba, b: bb, g_edge: e });
            for (x, w) in [(ea, id), (eb, id), (ba, id + 1), (bb, id + 1)] {
                debug_assert_eq!(white_at[x as usize], u32::MAX);
                white_at[x as usize] = w;
            }
        }
        debug_assert!(white_at.iter().all(|&w| w != u32::MAX));
        Ok(HexagonGraph {
            source: g.clone(),
            index_assignment: orders,
            whites,
            white_at,
        })
    }

    pub fn source(&self) -> &CubicGraph {
        &self.source
    }

    pub fn hexagon_count(&self) -> usize {
        self.source.vertex_count()
    }

    pub fn vertex_count(&self) -> usize {
        6 * self.source.vertex_count()
    }

    pub fn index_assignment(&self) -> &[[VertexId; 3]] {
        &self.index_assignment
    }

    /// Neighbor of `v` holding index `i` at `v`.
    pub fn neighbor_at(&self, v: VertexId, i: u8) -> VertexId {
        self.index_assignment[v as usize][i as usize]
    }

    pub fn whites(&self) -> &[WhiteEdge] {
        &self.whites
    }

    /// The unique white edge at an H-vertex.
    pub fn white_at(&self, x: HVertex) -> &WhiteEdge {
        &self.whites[self.white_at[x as usize] as usize]
    }

    pub fn white_index_at(&self, x: HVertex) -> u32 {
        self.white_at[x as usize]
    }

    /// The two white edges of a G-edge: `(e_uv, partner)`.
    pub fn white_pair(&self, e: EdgeId) -> (&WhiteEdge, &WhiteEdge) {
        (&self.whites[2 * e as usize], &self.whites[2 * e as usize + 1])
    }

    pub fn blue_edges(&self) -> impl Iterator<Item = (HVertex, HVertex)> + '_ {
        (0..self.hexagon_count() as u32).flat_map(|v| {
            (0..6u8).map(move |i| (hv(v, i), hv(v, (i + 1) % 6)))
        })
    }

    pub fn red_edges(&self) -> impl Iterator<Item = (HVertex, HVertex)> + '_ {
        (0..self.hexagon_count() as u32).flat_map(|v| (0..3u8).map(move |i| (hv(v, i), hv(v, i + 3))))
    }

    pub fn white_edges(&self) -> impl Iterator<Item = (HVertex, HVertex)> + '_ {
        self.whites.iter().map(|w| (w.a, w.b))
    }

    pub fn all_edges(&self) -> Vec<(HVertex, HVertex)> {
        self.blue_edges()
            .chain(self.red_edges())
            .chain(self.white_edges())
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        6 * self.hexagon_count() + 3 * self.hexagon_count() + self.whites.len()
    }

    /// DOT rendering with color attributes.
    pub fn to_dot(&self) -> String {
        use core::fmt::Write;
        let mut s = String::from("graph hexagon {\n");
        for x in 0..self.vertex_count() as u32 {
            let _ = writeln!(
                s,
                "  {x} [label=\"{}_{}\"];",
                hexagon_of(x),
                corner_of(x)
            );
        }
        for (a, b) in self.blue_edges() {
            let _ = writeln!(s, "  {a} -- {b} [color=blue];");
        }
        for (a, b) in self.red_edges() {
            let _ = writeln!(s, "  {a} -- {b} [color=red];");
        }
        for (a, b) in self.white_edges() {
            let _ = writeln!(s, "  {a} -- {b} [color=black];");
        }
        s.push_str("}\n");
        s
    }
}

/// Brace test for an arbitrary bipartite graph: connected and every
/// matching of size at most two extends to a perfect matching.
pub fn is_brace(n: usize, edges: &[(u32, u32)]) -> Result<bool, HexagonError> {
    // 2-coloring; also collects the classes.
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut color = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    color[0] = 0;
    queue.push_back(0u32);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v as usize] {
            if color[u as usize] == u8::MAX {
                color[u as usize] = 1 - color[v as usize];
                reached += 1;
                queue.push_back(u);
            } else if color[u as usize] == color[v as usize] {
                return Err(HexagonError::Unbalanced);
            }
        }
    }
    if reached != n {
        return Ok(false);
    }
    let left: Vec<u32> = (0..n as u32).filter(|&v| color[v as usize] == 0).collect();
    let right: Vec<u32> = (0..n as u32).filter(|&v| color[v as usize] == 1).collect();
    if left.len() != right.len() {
        return Err(HexagonError::Unbalanced);
    }
    let lpos = index_map(&left, n);
    let rpos = index_map(&right, n);
    let half = left.len();
    let pm_size = |removed: &[u32]| -> usize {
        let es: Vec<(usize, usize)> = edges
            .iter()
            .filter(|&&(a, b)| !removed.contains(&a) && !removed.contains(&b))
            .map(|&(a, b)| {
                if color[a as usize] == 0 {
                    (lpos[a as usize], rpos[b as usize])
                } else {
                    (lpos[b as usize], rpos[a as usize])
                }
            })
            .collect();
        max_matching(half, half, &es)
    };
    if pm_size(&[]) != half {
        return Ok(false);
    }
    for &(a, b) in edges {
        if pm_size(&[a, b]) != half - 1 {
            return Ok(false);
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if pm_size(&[a, b, c, d]) != half - 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn index_map(side: &[u32], n: usize) -> Vec<usize> {
    let mut m = vec![usize::MAX; n];
    for (i, &v) in side.iter().enumerate() {
        m[v as usize] = i;
    }
    m
}

/// Brace test specialized to a hexagon graph.
pub fn hexagon_is_brace(h: &HexagonGraph) -> Result<bool, HexagonError> {
    is_brace(h.vertex_count(), &h.all_edges())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bridged_cubic, k4, petersen};

    #[test]
    fn counts_for_small_graphs() {
        // Triangle is not cubic; use K4 and Petersen for the counting rules.
        let h = HexagonGraph::build(&k4()).unwrap();
        assert_eq!(h.vertex_count(), 24);
        assert_eq!(h.edge_count(), 24 + 12 + 12);
        let h = HexagonGraph::build(&petersen()).unwrap();
        assert_eq!(h.vertex_count(), 60);
        assert_eq!(h.edge_count(), 120);
    }

    #[test]
    fn bipartite_by_corner_parity() {
        let h = HexagonGraph::build(&petersen()).unwrap();
        for (a, b) in h.all_edges() {
            assert_ne!(in_class_x(a), in_class_x(b), "edge {a}-{b} inside a class");
        }
    }

    #[test]
    fn bar_is_an_involution_crossing_classes() {
        let h = HexagonGraph::build(&petersen()).unwrap();
        for x in 0..h.vertex_count() as u32 {
            assert_eq!(bar(bar(x)), x);
            assert_ne!(in_class_x(bar(x)), in_class_x(x));
        }
        assert_eq!(bar(hv(0, 0)), hv(0, 3));
    }

    #[test]
    fn whites_form_a_perfect_matching() {
        let h = HexagonGraph::build(&petersen()).unwrap();
        let mut hit = alloc::vec![0u8; h.vertex_count()];
        for w in h.whites() {
            hit[w.a as usize] += 1;
            hit[w.b as usize] += 1;
        }
        assert!(hit.iter().all(|&c| c == 1));
        // partner structure: whites 2e and 2e+1 are antipodal images
        for e in 0..h.source().edge_count() as u32 {
            let (w, wb) = h.white_pair(e);
            assert_eq!(bar(w.a), wb.a);
            assert_eq!(bar(w.b), wb.b);
        }
    }

    #[test]
    fn brace_on_hexagon_graphs() {
        let h = HexagonGraph::build(&k4()).unwrap();
        assert_eq!(hexagon_is_brace(&h), Ok(true));
        let h = HexagonGraph::build(&bridged_cubic()).unwrap();
        assert_eq!(hexagon_is_brace(&h), Ok(false));
    }

    #[test]
    fn c6_is_not_a_brace() {
        let edges: Vec<(u32, u32)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        assert_eq!(is_brace(6, &edges), Ok(false));
    }
}
