//! Cubic (and sub-cubic) graph substrate: half-edge darts, connectivity,
//! ear decompositions and the Y-Delta / Delta-Y transforms.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub type VertexId = u32;
pub type EdgeId = u32;

/// A dart is one of the two half-edges of an edge: a vertex plus the local
/// slot (0..3) of the incident edge at that vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub vertex: VertexId,
    pub slot: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    DegreeOverflow(VertexId),
    Loop(VertexId),
    ParallelEdge(VertexId, VertexId),
    NotCubic(VertexId),
    NotSimple,
    TooFewVertices,
    NotTwoConnected,
    BadVertex(VertexId),
    BadTriangle,
    WouldCreateParallel,
    SizeLimit(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::DegreeOverflow(v) => write!(f, "degree of vertex {v} would exceed 3"),
            GraphError::Loop(v) => write!(f, "loop at vertex {v}"),
            GraphError::ParallelEdge(u, v) => write!(f, "parallel edge {u}-{v}"),
            GraphError::NotCubic(v) => write!(f, "vertex {v} does not have degree 3"),
            GraphError::NotSimple => write!(f, "graph is not simple"),
            GraphError::TooFewVertices => write!(f, "operation needs at least 3 vertices"),
            GraphError::NotTwoConnected => write!(f, "graph is not 2-connected"),
            GraphError::BadVertex(v) => write!(f, "vertex {v} out of range or unusable"),
            GraphError::BadTriangle => write!(f, "vertices do not form a contractible triangle"),
            GraphError::WouldCreateParallel => {
                write!(f, "contraction would create a parallel edge or loop")
            }
            GraphError::SizeLimit(n) => write!(f, "size limit exceeded ({n})"),
        }
    }
}

/// Simple graph with maximum degree 3. Degree bounds 0..=3 hold during
/// construction; a *sealed* graph is 3-regular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicGraph {
    /// `adj[v]` lists `(neighbor, edge id)` in slot order.
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    /// Edge endpoints, lower vertex first.
    edges: Vec<(VertexId, VertexId)>,
}

impl CubicGraph {
    pub fn new(n: usize) -> Self {
        CubicGraph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = CubicGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        (self.adj.len() - 1) as VertexId
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let n = self.adj.len() as u32;
        if u >= n || v >= n {
            return Err(GraphError::BadVertex(u.max(v)));
        }
        if self.adjacent(u, v) {
            return Err(GraphError::ParallelEdge(u, v));
        }
        if self.degree(u) >= 3 {
            return Err(GraphError::DegreeOverflow(u));
        }
        if self.degree(v) >= 3 {
            return Err(GraphError::DegreeOverflow(v));
        }
        let id = self.edges.len() as EdgeId;
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.push((a, b));
        self.adj[u as usize].push((v, id));
        self.adj[v as usize].push((u, id));
        Ok(id)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].iter().any(|&(w, _)| w == v)
    }

    /// Neighbors of `v` in slot order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v as usize].iter().map(|&(w, _)| w)
    }

    /// Neighbors of `v` sorted by id. Used for deterministic index
    /// assignments.
    pub fn sorted_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut ns: Vec<VertexId> = self.neighbors(v).collect();
        ns.sort_unstable();
        ns
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.adj[v as usize].iter().map(|&(_, e)| e)
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e as usize]
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.adj[u as usize]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
    }

    /// The other endpoint of `e` seen from `v`.
    pub fn edge_other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e as usize];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn is_cubic(&self) -> bool {
        self.adj.iter().all(|a| a.len() == 3)
    }

    pub fn check_sealed(&self) -> Result<(), GraphError> {
        for v in 0..self.vertex_count() as u32 {
            if self.degree(v) != 3 {
                return Err(GraphError::NotCubic(v));
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Bridges by a lowlink DFS; linear in the graph size.
    pub fn find_bridges(&self) -> Vec<EdgeId> {
        let n = self.vertex_count();
        let mut ord = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut bridges = Vec::new();
        let mut timer = 0usize;
        // Iterative DFS: stack of (vertex, parent edge, next slot index).
        for start in 0..n as u32 {
            if ord[start as usize] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(start, None, 0)];
            ord[start as usize] = timer;
            low[start as usize] = timer;
            timer += 1;
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[v as usize].len() {
                    let (u, e) = self.adj[v as usize][*idx];
                    *idx += 1;
                    if Some(e) == pe {
                        continue;
                    }
                    if ord[u as usize] == usize::MAX {
                        ord[u as usize] = timer;
                        low[u as usize] = timer;
                        timer += 1;
                        stack.push((u, Some(e), 0));
                    } else {
                        low[v as usize] = low[v as usize].min(ord[u as usize]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p as usize] = low[p as usize].min(low[v as usize]);
                        if low[v as usize] > ord[p as usize] {
                            bridges.push(pe.expect("non-root frame has a parent edge"));
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    pub fn is_bridgeless(&self) -> bool {
        self.find_bridges().is_empty()
    }

    /// Connected with no cut vertex. Requires at least 3 vertices.
    pub fn is_two_connected(&self) -> Result<bool, GraphError> {
        let n = self.vertex_count();
        if n < 3 {
            return Err(GraphError::TooFewVertices);
        }
        if !self.is_connected() {
            return Ok(false);
        }
        for v in 0..n as u32 {
            if self.is_cut_vertex(v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn is_cut_vertex(&self, v: VertexId) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        seen[v as usize] = true;
        let start = (0..n as u32).find(|&u| u != v);
        let Some(start) = start else { return false };
        let mut stack = vec![start];
        seen[start as usize] = true;
        let mut count = 1;
        while let Some(w) = stack.pop() {
            for u in self.neighbors(w) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count != n - 1
    }

    /// Replace vertex `v` by a triangle. The three new vertices take over
    /// `v`'s incident edges in sorted-neighbor order; `v`'s id is reused for
    /// the first triangle vertex and two fresh vertices are appended.
    pub fn y_delta(&self, v: VertexId) -> Result<(CubicGraph, [VertexId; 3]), GraphError> {
        if v as usize >= self.vertex_count() || self.degree(v) != 3 {
            return Err(GraphError::BadVertex(v));
        }
        let nbrs = self.sorted_neighbors(v);
        let mut g = CubicGraph::new(self.vertex_count() + 2);
        for &(a, b) in &self.edges {
            if a != v && b != v {
                g.add_edge(a, b)?;
            }
        }
        let t = [
            v,
            self.vertex_count() as VertexId,
            self.vertex_count() as VertexId + 1,
        ];
        for i in 0..3 {
            g.add_edge(t[i], nbrs[i])?;
        }
        g.add_edge(t[0], t[1])?;
        g.add_edge(t[1], t[2])?;
        g.add_edge(t[0], t[2])?;
        Ok((g, t))
    }

    /// Contract a triangle to a single vertex (inverse of [`y_delta`] up to
    /// isomorphism). The contracted vertex reuses the smallest triangle id;
    /// ids above the removed pair shift down by two.
    pub fn delta_y(&self, tri: [VertexId; 3]) -> Result<(CubicGraph, VertexId), GraphError> {
        let mut t = tri;
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return Err(GraphError::BadTriangle);
        }
        for &v in &t {
            if v as usize >= self.vertex_count() || self.degree(v) != 3 {
                return Err(GraphError::BadTriangle);
            }
        }
        if !(self.adjacent(t[0], t[1]) && self.adjacent(t[1], t[2]) && self.adjacent(t[0], t[2])) {
            return Err(GraphError::BadTriangle);
        }
        // Each triangle vertex has exactly one external neighbor.
        let mut ext = [0u32; 3];
        for (i, &v) in t.iter().enumerate() {
            let e: Vec<VertexId> = self.neighbors(v).filter(|u| !t.contains(u)).collect();
            if e.len() != 1 {
                return Err(GraphError::BadTriangle);
            }
            ext[i] = e[0];
        }
        if ext[0] == ext[1] || ext[1] == ext[2] || ext[0] == ext[2] {
            return Err(GraphError::WouldCreateParallel);
        }
        // Rename: t[0] stays (the merged vertex), t[1], t[2] removed.
        let remap = |u: VertexId| -> VertexId {
            let mut x = u;
            let mut shift = 0;
            if u == t[1] || u == t[2] {
                return t[0];
            }
            if x > t[1] {
                shift += 1;
            }
            if x > t[2] {
                shift += 1;
            }
            x -= shift;
            x
        };
        let merged = remap(t[0]);
        let mut g = CubicGraph::new(self.vertex_count() - 2);
        for &(a, b) in &self.edges {
            if t.contains(&a) && t.contains(&b) {
                continue;
            }
            let (ra, rb) = (remap(a), remap(b));
            if ra == rb {
                return Err(GraphError::WouldCreateParallel);
            }
            g.add_edge(ra, rb)
                .map_err(|_| GraphError::WouldCreateParallel)?;
        }
        Ok((g, merged))
    }

    /// Ear decomposition of a 2-connected graph: a base cycle plus open ears.
    pub fn ear_decomposition(&self) -> Result<EarDecomposition, GraphError> {
        if !self.is_two_connected()? {
            return Err(GraphError::NotTwoConnected);
        }
        // Base cycle: walk from vertex 0 until a vertex repeats.
        let base = self.find_cycle().ok_or(GraphError::NotTwoConnected)?;
        let mut in_sub: BTreeSet<VertexId> = base.iter().copied().collect();
        let mut used: BTreeSet<EdgeId> = BTreeSet::new();
        for i in 0..base.len() {
            let u = base[i];
            let v = base[(i + 1) % base.len()];
            used.insert(self.edge_between(u, v).unwrap());
        }
        let mut ears: Vec<Vec<VertexId>> = Vec::new();
        while used.len() < self.edge_count() {
            let ear = self
                .find_ear(&in_sub, &used)
                .ok_or(GraphError::NotTwoConnected)?;
            for w in &ear {
                in_sub.insert(*w);
            }
            for i in 0..ear.len() - 1 {
                used.insert(self.edge_between(ear[i], ear[i + 1]).unwrap());
            }
            ears.push(ear);
        }
        Ok(EarDecomposition { base, ears })
    }

    fn find_cycle(&self) -> Option<Vec<VertexId>> {
        // Ancestor-tracking DFS: a back edge to a vertex on the current path
        // closes a cycle.
        let n = self.vertex_count();
        let start = (0..n as u32).find(|&v| self.degree(v) >= 2)?;
        let mut depth = vec![usize::MAX; n];
        let mut path: Vec<VertexId> = Vec::new();
        // stack frames: (vertex, parent edge, next slot)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(start, None, 0)];
        depth[start as usize] = 0;
        path.push(start);
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            if *idx < self.adj[v as usize].len() {
                let (u, e) = self.adj[v as usize][*idx];
                *idx += 1;
                if Some(e) == pe {
                    continue;
                }
                const FINISHED: usize = usize::MAX - 1;
                match depth[u as usize] {
                    usize::MAX => {
                        depth[u as usize] = path.len();
                        path.push(u);
                        stack.push((u, Some(e), 0));
                    }
                    FINISHED => {}
                    du if du < depth[v as usize] => {
                        // back edge to an ancestor: cycle = path segment u..v
                        return Some(path[du..=depth[v as usize]].to_vec());
                    }
                    _ => {}
                }
            } else {
                stack.pop();
                path.pop();
                depth[v as usize] = usize::MAX - 1;
            }
        }
        None
    }

    /// One open ear: a path whose endpoints lie in the current subgraph,
    /// interior outside it, edges unused.
    fn find_ear(&self, in_sub: &BTreeSet<VertexId>, used: &BTreeSet<EdgeId>) -> Option<Vec<VertexId>> {
        // A chord between two subgraph vertices is a length-1 ear.
        for &u in in_sub {
            for (v, e) in self.adj[u as usize].iter().copied() {
                if used.contains(&e) {
                    continue;
                }
                if in_sub.contains(&v) {
                    return Some(vec![u, v]);
                }
            }
        }
        // Otherwise grow a path from an unused boundary edge; BFS through
        // outside vertices back to the subgraph (2-connectivity guarantees a
        // return point distinct from the start).
        for &u in in_sub {
            for (v, e) in self.adj[u as usize].iter().copied() {
                if used.contains(&e) || in_sub.contains(&v) {
                    continue;
                }
                let mut prev: Vec<Option<VertexId>> = vec![None; self.vertex_count()];
                let mut queue = alloc::collections::VecDeque::new();
                prev[v as usize] = Some(u);
                queue.push_back(v);
                while let Some(w) = queue.pop_front() {
                    for x in self.sorted_neighbors(w) {
                        if x == u && w == v {
                            continue;
                        }
                        if in_sub.contains(&x) {
                            if x == u {
                                continue;
                            }
                            let mut path = vec![x, w];
                            let mut y = w;
                            while let Some(p) = prev[y as usize] {
                                path.push(p);
                                y = p;
                            }
                            path.reverse();
                            return Some(path);
                        }
                        if prev[x as usize].is_none() && x != u {
                            prev[x as usize] = Some(w);
                            queue.push_back(x);
                        }
                    }
                }
            }
        }
        None
    }

    /// Adjacency-list JSON-ish dump used by the CLI; deterministic order.
    pub fn adjacency_lists(&self) -> Vec<Vec<VertexId>> {
        (0..self.vertex_count() as u32)
            .map(|v| self.sorted_neighbors(v))
            .collect()
    }

    /// DOT rendering of the graph.
    pub fn to_dot(&self) -> String {
        use core::fmt::Write;
        let mut s = String::from("graph g {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  {v};");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  {a} -- {b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Base cycle plus open ears reconstructing a 2-connected graph.
#[derive(Debug, Clone)]
pub struct EarDecomposition {
    /// Vertices of the base cycle in cyclic order.
    pub base: Vec<VertexId>,
    /// Each ear as a vertex path; both endpoints lie in the previous graph,
    /// interior vertices are new.
    pub ears: Vec<Vec<VertexId>>,
}

impl EarDecomposition {
    /// Total number of edges covered by base cycle and ears.
    pub fn edge_total(&self) -> usize {
        self.base.len() + self.ears.iter().map(|e| e.len() - 1).sum::<usize>()
    }
}

/// The Petersen graph with its standard labeling: outer cycle 0..5, inner
/// pentagram 5..10, spokes i -(i+5).
pub fn petersen() -> CubicGraph {
    let mut g = CubicGraph::new(10);
    for i in 0..5u32 {
        g.add_edge(i, (i + 1) % 5).unwrap();
        g.add_edge(i, i + 5).unwrap();
        g.add_edge(i + 5, (i + 2) % 5 + 5).unwrap();
    }
    g
}

/// K4 on 4 vertices.
pub fn k4() -> CubicGraph {
    CubicGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// K_{3,3} with parts {0,1,2} and {3,4,5}.
pub fn k33() -> CubicGraph {
    let mut g = CubicGraph::new(6);
    for u in 0..3u32 {
        for v in 3..6u32 {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Triangle (2-regular; accepted in construction mode).
pub fn triangle() -> CubicGraph {
    CubicGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
}

/// The 3-prism (K3 x K2).
pub fn prism() -> CubicGraph {
    CubicGraph::from_edges(
        6,
        &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
    )
    .unwrap()
}

/// Two K4-with-a-subdivided-edge blocks joined by a single edge: the
/// smallest cubic graph with a bridge (10 vertices).
pub fn bridged_cubic() -> CubicGraph {
    CubicGraph::from_edges(
        10,
        &[
            // block A: K4 on {0,1,2,3} with edge (2,3) subdivided by 4
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 4),
            (3, 4),
            // block B: K4 on {5,6,7,8} with edge (7,8) subdivided by 9
            (5, 6),
            (5, 7),
            (5, 8),
            (6, 7),
            (6, 8),
            (7, 9),
            (8, 9),
            // the bridge
            (4, 9),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force bridge oracle: delete each edge and test connectivity.
    fn bridge_oracle(g: &CubicGraph) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for e in 0..g.edge_count() as u32 {
            let mut h = CubicGraph::new(g.vertex_count());
            for f in 0..g.edge_count() as u32 {
                if f != e {
                    let (a, b) = g.edge_endpoints(f);
                    h.add_edge(a, b).unwrap();
                }
            }
            // Same component before, split after?
            let (a, b) = g.edge_endpoints(e);
            if !connected_between(&h, a, b) {
                out.push(e);
            }
        }
        out
    }

    fn connected_between(g: &CubicGraph, a: VertexId, b: VertexId) -> bool {
        let mut seen = alloc::vec![false; g.vertex_count()];
        let mut stack = alloc::vec![a];
        seen[a as usize] = true;
        while let Some(v) = stack.pop() {
            if v == b {
                return true;
            }
            for u in g.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        false
    }

    #[test]
    fn triangle_has_no_bridge() {
        assert!(triangle().find_bridges().is_empty());
    }

    #[test]
    fn joined_triangles_have_the_joining_bridge() {
        // two triangles joined by one edge
        let g = CubicGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)],
        )
        .unwrap();
        let b = g.find_bridges();
        assert_eq!(b.len(), 1);
        assert_eq!(g.edge_endpoints(b[0]), (0, 3));
    }

    #[test]
    fn petersen_is_bridgeless_vs_oracle() {
        let g = petersen();
        assert_eq!(g.find_bridges(), bridge_oracle(&g));
        assert!(g.is_bridgeless());
        let h = bridged_cubic();
        assert_eq!(h.find_bridges(), bridge_oracle(&h));
        assert_eq!(h.find_bridges().len(), 1);
    }

    #[test]
    fn two_connectivity() {
        assert!(triangle().is_two_connected().unwrap());
        let path3 = CubicGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!path3.is_two_connected().unwrap());
        assert!(petersen().is_two_connected().unwrap());
        let two = CubicGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(two.is_two_connected(), Err(GraphError::TooFewVertices));
    }

    #[test]
    fn ear_decomposition_reconstructs() {
        for g in [k4(), petersen(), k33(), prism()] {
            let ed = g.ear_decomposition().unwrap();
            assert_eq!(ed.edge_total(), g.edge_count());
            for ear in &ed.ears {
                assert!(ear.len() >= 2);
                assert_ne!(ear[0], *ear.last().unwrap());
            }
        }
        // A plain cycle is its own decomposition with zero ears.
        let c5 = CubicGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let ed = c5.ear_decomposition().unwrap();
        assert_eq!(ed.base.len(), 5);
        assert!(ed.ears.is_empty());
    }

    #[test]
    fn y_delta_then_delta_y_roundtrips() {
        let g = k4();
        let (h, t) = g.y_delta(0).unwrap();
        assert!(h.is_cubic());
        assert_eq!(h.vertex_count(), 6);
        let (back, _) = h.delta_y(t).unwrap();
        assert!(crate::iso::is_isomorphic(&back, &g).unwrap());
        // y_delta on K4 gives the prism
        assert!(crate::iso::is_isomorphic(&h, &prism()).unwrap());
    }

    #[test]
    fn delta_y_rejects_shared_external_neighbor() {
        // K4: any triangle's externals coincide in the remaining vertex.
        let g = k4();
        assert!(g.delta_y([1, 2, 3]).is_err());
    }
}
