//! Mixed graphs (vertices, edges, arcs, forbidden arc pairs) and the
//! vertex-set wiring machinery: cut obstacles and safe reductions.
//!
//! A reduction of S wires the edges and arcs at S: every edge incident to S
//! splits into two opposite arcs, and together with the incident arcs these
//! are partitioned into directed paths (both ends outside S, turning only
//! inside S) and directed cycles (meeting only inside S). Paths and cycles
//! are vertex-simple; an object is safe when it carries at most one
//! pre-existing arc and is not the 2-cycle formed by the two copies of a
//! single edge. Chosen paths contract to new arcs carrying concatenated
//! provenance; cycles are emitted as closed directed walks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::graph::{CubicGraph, EdgeId, VertexId};

/// One traversal of an original edge, `from -> to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
}

/// A directed edge of a mixed graph carrying the walk of original edges it
/// replaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub provenance: Vec<Step>,
}

/// Mixed graph over a fixed original cubic graph. Edges reference original
/// edges; arcs carry provenance walks. The forbidden-pair relation R is
/// retained for conversion fidelity but never consulted by safe reductions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedGraph {
    original: CubicGraph,
    present: BTreeSet<VertexId>,
    edges: BTreeSet<EdgeId>,
    arcs: Vec<Arc>,
    pub r_pairs: BTreeSet<(u32, u32)>,
}

/// Outcome of a successful safe reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: MixedGraph,
    /// Closed directed walks emitted by cycles of the partition.
    pub cycles: Vec<Vec<Step>>,
}

impl MixedGraph {
    /// The mixed graph of a whole cubic graph: no arcs yet.
    pub fn from_cubic(g: &CubicGraph) -> Self {
        MixedGraph {
            present: (0..g.vertex_count() as u32).collect(),
            edges: (0..g.edge_count() as u32).collect(),
            original: g.clone(),
            arcs: Vec::new(),
            r_pairs: BTreeSet::new(),
        }
    }

    pub fn original(&self) -> &CubicGraph {
        &self.original
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.present.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.present.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn edge_degree(&self, v: VertexId) -> usize {
        self.original
            .incident_edges(v)
            .filter(|e| self.edges.contains(e))
            .count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.head == v).count()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.tail == v).count()
    }

    /// Invariants of mid-wiring states reachable from cubic graphs: arcs
    /// balance the edge deficiency (edge-degree + in = edge-degree + out =
    /// 3), provenance walks chain head-to-tail and use only consumed edges.
    pub fn check_balance(&self) -> Result<(), &'static str> {
        for &v in &self.present {
            let d = self.edge_degree(v);
            if d + self.in_degree(v) != 3 || d + self.out_degree(v) != 3 {
                return Err("vertex arc balance broken");
            }
        }
        for a in &self.arcs {
            if !self.present.contains(&a.tail) || !self.present.contains(&a.head) {
                return Err("arc endpoint not present");
            }
            check_walk(&a.provenance, a.tail, a.head)?;
            for s in &a.provenance {
                if self.edges.contains(&s.edge) {
                    return Err("provenance uses a live edge");
                }
            }
        }
        Ok(())
    }

    /// Strict degree conditions: every vertex has edge-degree 2 or 3 and
    /// each degree-2 vertex is the tail of exactly one arc and the head of
    /// exactly one arc.
    pub fn is_standard(&self) -> bool {
        self.present.iter().all(|&v| {
            let d = self.edge_degree(v);
            (d == 3 && self.in_degree(v) == 0 && self.out_degree(v) == 0)
                || (d == 2 && self.in_degree(v) == 1 && self.out_degree(v) == 1)
        })
    }

    /// Edges with exactly one endpoint in `s` (the cut-obstacle boundary).
    pub fn boundary_edges(&self, s: &BTreeSet<VertexId>) -> Vec<EdgeId> {
        self.edges
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = self.original.edge_endpoints(e);
                s.contains(&a) != s.contains(&b)
            })
            .collect()
    }

    /// Arcs with exactly one endpoint in `s`.
    pub fn boundary_arcs(&self, s: &BTreeSet<VertexId>) -> Vec<usize> {
        (0..self.arcs.len())
            .filter(|&i| s.contains(&self.arcs[i].tail) != s.contains(&self.arcs[i].head))
            .collect()
    }
}

pub fn check_walk(steps: &[Step], tail: VertexId, head: VertexId) -> Result<(), &'static str> {
    if steps.is_empty() {
        return Err("empty provenance walk");
    }
    if steps[0].from != tail || steps.last().unwrap().to != head {
        return Err("walk endpoints do not match arc");
    }
    for w in steps.windows(2) {
        if w[0].to != w[1].from {
            return Err("walk steps do not chain");
        }
    }
    Ok(())
}

/// Decide whether `s` is a cut-obstacle: no pairing of the boundary
/// edge/arc incidence slots exists in which every edge lies in exactly two
/// pairs, every arc in exactly one, and no pair joins two arcs. Pairs are
/// unordered, may repeat as a multiset, and never contain the same element
/// twice. Decided by exact search over slot pairings.
pub fn cut_obstacle(m: &MixedGraph, s: &BTreeSet<VertexId>) -> bool {
    let edges = m.boundary_edges(s);
    let arcs = m.boundary_arcs(s);
    let mut slots: Vec<(u32, bool)> = Vec::new();
    for i in 0..edges.len() {
        slots.push((i as u32, false));
        slots.push((i as u32, false));
    }
    for i in 0..arcs.len() {
        slots.push((edges.len() as u32 + i as u32, true));
    }
    if slots.len() % 2 != 0 {
        return true;
    }
    if slots.is_empty() {
        return false;
    }
    let mut used = vec![false; slots.len()];
    !pair_slots(&slots, &mut used)
}

fn pair_slots(slots: &[(u32, bool)], used: &mut Vec<bool>) -> bool {
    let first = match used.iter().position(|&u| !u) {
        None => return true,
        Some(i) => i,
    };
    used[first] = true;
    for j in first + 1..slots.len() {
        if used[j] {
            continue;
        }
        // no arc-arc pair, no element paired with itself
        if (slots[first].1 && slots[j].1) || slots[first].0 == slots[j].0 {
            continue;
        }
        used[j] = true;
        if pair_slots(slots, used) {
            used[first] = false;
            used[j] = false;
            return true;
        }
        used[j] = false;
    }
    used[first] = false;
    false
}

/// An item of the partition space: a pre-existing arc or one of the two
/// directed copies of an edge incident to S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Old(usize),
    /// (edge id, forward?): forward runs from the lower endpoint.
    EdgeCopy(EdgeId, bool),
}

struct Searcher<'a> {
    m: &'a MixedGraph,
    s: &'a BTreeSet<VertexId>,
    items: Vec<Item>,
    ends: Vec<(VertexId, VertexId)>,
    out_at: BTreeMap<VertexId, Vec<usize>>,
    assigned: Vec<bool>,
    orbits: Vec<(Vec<usize>, bool)>,
}

/// Exhaustive backtracking search for a safe reduction of `s`. Returns the
/// reduced mixed graph plus emitted closed walks, or `None` when no safe
/// partition exists. Deterministic: the first partition in item order wins.
pub fn safe_reduce_mixed(m: &MixedGraph, s: &BTreeSet<VertexId>) -> Option<Reduction> {
    if s.iter().any(|v| !m.present.contains(v)) {
        return None;
    }
    if s.is_empty() {
        return Some(Reduction {
            reduced: m.clone(),
            cycles: Vec::new(),
        });
    }
    let mut items: Vec<Item> = Vec::new();
    for i in 0..m.arcs.len() {
        if s.contains(&m.arcs[i].tail) || s.contains(&m.arcs[i].head) {
            items.push(Item::Old(i));
        }
    }
    let mut split_edges: Vec<EdgeId> = Vec::new();
    for &e in &m.edges {
        let (a, b) = m.original.edge_endpoints(e);
        if s.contains(&a) || s.contains(&b) {
            split_edges.push(e);
            items.push(Item::EdgeCopy(e, true));
            items.push(Item::EdgeCopy(e, false));
        }
    }
    let ends: Vec<(VertexId, VertexId)> = items
        .iter()
        .map(|&it| match it {
            Item::Old(i) => (m.arcs[i].tail, m.arcs[i].head),
            Item::EdgeCopy(e, fwd) => {
                let (a, b) = m.original.edge_endpoints(e);
                if fwd {
                    (a, b)
                } else {
                    (b, a)
                }
            }
        })
        .collect();
    let mut out_at: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (idx, &(t, _)) in ends.iter().enumerate() {
        if s.contains(&t) {
            out_at.entry(t).or_default().push(idx);
        }
    }
    let n_items = items.len();
    let mut searcher = Searcher {
        m,
        s,
        items,
        ends,
        out_at,
        assigned: vec![false; n_items],
        orbits: Vec::new(),
    };
    if !searcher.search() {
        return None;
    }

    let mut reduced = m.clone();
    reduced.present = m.present.difference(s).copied().collect();
    for e in &split_edges {
        reduced.edges.remove(e);
    }
    let expand = |it: Item| -> Vec<Step> {
        match it {
            Item::Old(i) => m.arcs[i].provenance.clone(),
            Item::EdgeCopy(e, fwd) => {
                let (a, b) = m.original.edge_endpoints(e);
                let (from, to) = if fwd { (a, b) } else { (b, a) };
                vec![Step { edge: e, from, to }]
            }
        }
    };
    let mut new_arcs: Vec<Arc> = m
        .arcs
        .iter()
        .filter(|a| !s.contains(&a.tail) && !s.contains(&a.head))
        .cloned()
        .collect();
    let mut cycles = Vec::new();
    for (orbit, closed) in &searcher.orbits {
        let mut walk: Vec<Step> = Vec::new();
        for &idx in orbit {
            walk.extend(expand(searcher.items[idx]));
        }
        if *closed {
            cycles.push(walk);
        } else {
            let tail = searcher.ends[orbit[0]].0;
            let head = searcher.ends[*orbit.last().unwrap()].1;
            new_arcs.push(Arc {
                tail,
                head,
                provenance: walk,
            });
        }
    }
    reduced.arcs = new_arcs;
    // R indices reference consumed arcs; safe reductions never read R.
    reduced.r_pairs = BTreeSet::new();
    Some(Reduction { reduced, cycles })
}

impl<'a> Searcher<'a> {
    fn search(&mut self) -> bool {
        // Paths are forced: an item whose tail lies outside S can only open
        // a path, and every path opens with such an item. Build those first
        // in index order, then cover the leftovers by cycles anchored at
        // their minimal item.
        let path_start = (0..self.items.len())
            .find(|&i| !self.assigned[i] && !self.s.contains(&self.ends[i].0));
        let start = match path_start {
            Some(i) => i,
            None => match self.assigned.iter().position(|&a| !a) {
                None => return true,
                Some(i) => i,
            },
        };
        let is_path = path_start.is_some();
        self.assigned[start] = true;
        let mut orbit = vec![start];
        let ok = self.extend(start, start, &mut orbit, is_path);
        self.assigned[start] = false;
        ok
    }

    fn extend(&mut self, start: usize, last: usize, orbit: &mut Vec<usize>, is_path: bool) -> bool {
        let head = self.ends[last].1;
        if !self.s.contains(&head) {
            if !is_path {
                return false;
            }
            if self.orbit_valid(orbit, false) {
                self.orbits.push((orbit.clone(), false));
                if self.search() {
                    return true;
                }
                self.orbits.pop();
            }
            return false;
        }
        let succs = match self.out_at.get(&head) {
            Some(v) => v.clone(),
            None => return false,
        };
        for nxt in succs {
            if nxt == start {
                if is_path {
                    continue;
                }
                if self.twins(last, nxt) {
                    continue;
                }
                if self.orbit_valid(orbit, true) {
                    self.orbits.push((orbit.clone(), true));
                    if self.search() {
                        return true;
                    }
                    self.orbits.pop();
                }
                continue;
            }
            if self.assigned[nxt] || self.twins(last, nxt) {
                continue;
            }
            if !is_path && nxt < start {
                // canonical cycles start at their minimal item
                continue;
            }
            self.assigned[nxt] = true;
            orbit.push(nxt);
            if self.quick_ok(orbit) && self.extend(start, nxt, orbit, is_path) {
                return true;
            }
            orbit.pop();
            self.assigned[nxt] = false;
        }
        false
    }

    /// Consecutive twin edge copies: the immediate bounce along one edge.
    fn twins(&self, a: usize, b: usize) -> bool {
        match (self.items[a], self.items[b]) {
            (Item::EdgeCopy(e1, d1), Item::EdgeCopy(e2, d2)) => e1 == e2 && d1 != d2,
            _ => false,
        }
    }

    /// At most one pre-existing arc; interior meet vertices pairwise
    /// distinct (vertex-simplicity).
    fn quick_ok(&self, orbit: &[usize]) -> bool {
        let mut old = 0;
        for &i in orbit {
            if matches!(self.items[i], Item::Old(_)) {
                old += 1;
                if old > 1 {
                    return false;
                }
            }
        }
        let mut meets = BTreeSet::new();
        for w in orbit.windows(2) {
            if !meets.insert(self.ends[w[0]].1) {
                return false;
            }
        }
        true
    }

    fn orbit_valid(&self, orbit: &[usize], closed: bool) -> bool {
        if !self.quick_ok(orbit) {
            return false;
        }
        let first_tail = self.ends[orbit[0]].0;
        let last_head = self.ends[*orbit.last().unwrap()].1;
        if closed {
            if last_head != first_tail {
                return false;
            }
            // the closing meet must not repeat an interior meet
            for w in orbit.windows(2) {
                if self.ends[w[0]].1 == last_head {
                    return false;
                }
            }
            // not the 2-cycle of one edge's two copies
            !(orbit.len() == 2 && self.twins(orbit[0], orbit[1]))
        } else {
            first_tail != last_head
        }
    }
}

/// All subsets of the present vertex set, for exhaustive desk-scale tests.
pub fn vertex_subsets(m: &MixedGraph) -> Vec<BTreeSet<VertexId>> {
    let vs: Vec<VertexId> = m.vertices().collect();
    (0u32..(1 << vs.len()))
        .map(|mask| {
            vs.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::k4;

    fn set(vs: &[u32]) -> BTreeSet<u32> {
        vs.iter().copied().collect()
    }

    #[test]
    fn wiring_one_vertex_of_k4_makes_a_directed_triangle() {
        let g = k4();
        let m = MixedGraph::from_cubic(&g);
        let r = safe_reduce_mixed(&m, &set(&[0])).expect("K4 vertex is reducible");
        assert!(r.cycles.is_empty());
        assert_eq!(r.reduced.arcs().len(), 3);
        let mut heads = BTreeMap::new();
        for a in r.reduced.arcs() {
            assert_eq!(a.provenance.len(), 2);
            heads.insert(a.tail, a.head);
        }
        // the arcs close into a directed triangle on {1,2,3}
        let mut v = 1u32;
        for _ in 0..3 {
            v = heads[&v];
        }
        assert_eq!(v, 1);
        assert!(r.reduced.check_balance().is_ok());
        assert!(r.reduced.is_standard());
    }

    #[test]
    fn empty_set_reduces_to_identity() {
        let m = MixedGraph::from_cubic(&k4());
        let r = safe_reduce_mixed(&m, &BTreeSet::new()).unwrap();
        assert!(r.cycles.is_empty());
        assert_eq!(r.reduced.vertex_count(), 4);
    }

    #[test]
    fn reducing_all_of_k4_emits_a_double_cover() {
        let g = k4();
        let m = MixedGraph::from_cubic(&g);
        let r = safe_reduce_mixed(&m, &set(&[0, 1, 2, 3])).expect("K4 fully wires");
        assert_eq!(r.reduced.vertex_count(), 0);
        let mut tally: BTreeMap<(u32, bool), u32> = BTreeMap::new();
        for c in &r.cycles {
            assert_eq!(c.first().unwrap().from, c.last().unwrap().to);
            for s in c {
                let (a, _) = g.edge_endpoints(s.edge);
                *tally.entry((s.edge, s.from == a)).or_default() += 1;
            }
        }
        for e in 0..g.edge_count() as u32 {
            assert_eq!(tally.get(&(e, true)), Some(&1), "edge {e} forward");
            assert_eq!(tally.get(&(e, false)), Some(&1), "edge {e} backward");
        }
    }

    #[test]
    fn bridge_side_is_an_obstacle_and_irreducible() {
        let g = crate::graph::bridged_cubic();
        let m = MixedGraph::from_cubic(&g);
        let side = set(&[0, 1, 2, 3, 4]);
        assert_eq!(m.boundary_edges(&side).len(), 1);
        assert!(cut_obstacle(&m, &side));
        assert!(safe_reduce_mixed(&m, &side).is_none());
    }

    #[test]
    fn no_safe_reduction_of_a_whole_bridged_graph() {
        let g = crate::graph::bridged_cubic();
        let m = MixedGraph::from_cubic(&g);
        let all: BTreeSet<u32> = m.vertices().collect();
        assert!(safe_reduce_mixed(&m, &all).is_none());
    }

    #[test]
    fn edge_only_boundaries_with_partners_are_never_obstacles() {
        let m = MixedGraph::from_cubic(&k4());
        assert!(!cut_obstacle(&m, &set(&[0])));
        assert!(!cut_obstacle(&m, &set(&[0, 1])));
    }

    #[test]
    fn obstacle_verdict_matches_slot_feasibility_on_derived_instances() {
        let g = crate::graph::prism();
        let m0 = MixedGraph::from_cubic(&g);
        let r = safe_reduce_mixed(&m0, &set(&[0])).unwrap();
        let m = r.reduced;
        assert!(m.check_balance().is_ok());
        for s in vertex_subsets(&m) {
            if s.is_empty() {
                continue;
            }
            let es = m.boundary_edges(&s).len();
            let ars = m.boundary_arcs(&s).len();
            let feasible = ars % 2 == 0 && ars <= 2 * es && !(es == 1 && ars == 0);
            assert_eq!(cut_obstacle(&m, &s), !feasible, "S = {s:?}");
        }
    }
}
