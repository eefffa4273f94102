//! Embeddings of cubic graphs through blue perfect matchings: rotation
//! systems, face tracing, dual loops, genus and directed cycle double
//! covers, plus exhaustive and pruned searches over all embeddings.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{CubicGraph, VertexId};
use crate::hexagon::{bar, corner_of, hexagon_of, hv, in_class_x, HVertex, HexagonGraph};
use crate::mixed::Step;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbedError {
    CapExceeded(usize, usize),
    BridgeDetected,
    NotCubic,
    DualLoopPresent,
    NonIntegralGenus,
}

impl fmt::Display for EmbedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbedError::CapExceeded(n, cap) => write!(f, "{n} vertices exceed the search cap {cap}"),
            EmbedError::BridgeDetected => write!(f, "graph has a bridge"),
            EmbedError::NotCubic => write!(f, "graph is not cubic"),
            EmbedError::DualLoopPresent => write!(f, "embedding has a dual loop"),
            EmbedError::NonIntegralGenus => write!(f, "Euler relation gave a non-integral genus"),
        }
    }
}

/// A blue perfect matching: one bit per hexagon choosing between the two
/// perfect matchings of its blue 6-cycle ({01,23,45} for 0, {12,34,50}
/// for 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlueMatching {
    pub bits: u64,
    pub n: usize,
}

impl BlueMatching {
    pub fn new(bits: u64, n: usize) -> Self {
        debug_assert!(n <= 63);
        BlueMatching { bits: bits & mask(n), n }
    }

    #[inline]
    pub fn bit(&self, hexagon: VertexId) -> bool {
        self.bits >> hexagon & 1 == 1
    }

    /// Partner of a corner under this hexagon's chosen blue matching.
    #[inline]
    pub fn blue_partner(&self, x: HVertex) -> HVertex {
        let h = hexagon_of(x);
        let c = corner_of(x);
        let p = if self.bit(h) {
            if c % 2 == 1 {
                (c + 1) % 6
            } else {
                (c + 5) % 6
            }
        } else {
            c ^ 1
        };
        hv(h, p)
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumOrder {
    Lexicographic,
    Gray,
}

/// Lazy enumeration of all 2^n blue perfect matchings.
pub struct BlueMatchings {
    n: usize,
    next: u64,
    total: u64,
    order: EnumOrder,
}

impl BlueMatchings {
    pub fn new(h: &HexagonGraph, order: EnumOrder, cap: usize) -> Result<Self, EmbedError> {
        let n = h.hexagon_count();
        if n > cap || n > 63 {
            return Err(EmbedError::CapExceeded(n, cap.min(63)));
        }
        Ok(BlueMatchings {
            n,
            next: 0,
            total: 1u64 << n,
            order,
        })
    }
}

impl Iterator for BlueMatchings {
    type Item = BlueMatching;

    fn next(&mut self) -> Option<BlueMatching> {
        if self.next >= self.total {
            return None;
        }
        let i = self.next;
        self.next += 1;
        let bits = match self.order {
            EnumOrder::Lexicographic => i,
            EnumOrder::Gray => i ^ (i >> 1),
        };
        Some(BlueMatching::new(bits, self.n))
    }
}

/// Per-vertex cyclic order of the three incident edges, relative to the
/// deterministic neighbor indexing (sorted neighbor ids get 0, 1, 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rot {
    /// neighbor index cycle 0 -> 1 -> 2 -> 0
    Forward,
    /// neighbor index cycle 0 -> 2 -> 1 -> 0
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    pub rots: Vec<Rot>,
}

/// Natural bijection from blue perfect matchings to rotation systems: a
/// face entering a hexagon at its odd-class corner exits through the chosen
/// blue edge, which turns the incoming edge index i into the outgoing
/// index; matching {01,23,45} realizes the backward cycle and {12,34,50}
/// the forward one.
pub fn rotation_of_matching(m: &BlueMatching) -> RotationSystem {
    RotationSystem {
        rots: (0..m.n as u32)
            .map(|v| if m.bit(v) { Rot::Forward } else { Rot::Backward })
            .collect(),
    }
}

pub fn matching_of_rotation(r: &RotationSystem) -> BlueMatching {
    let mut bits = 0u64;
    for (v, rot) in r.rots.iter().enumerate() {
        if *rot == Rot::Forward {
            bits |= 1 << v;
        }
    }
    BlueMatching::new(bits, r.rots.len())
}

/// Face structure of an embedding: the closed directed walks induced in G,
/// one per face, each a chained sequence of edge traversals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSet {
    pub walks: Vec<Vec<Step>>,
}

impl FaceSet {
    pub fn face_count(&self) -> usize {
        self.walks.len()
    }

    /// Total edge traversals; always 2|E(G)|.
    pub fn traversal_count(&self) -> usize {
        self.walks.iter().map(|w| w.len()).sum()
    }

    /// Canonical form for comparing face partitions exactly: every walk
    /// rotated to its minimal phase, walks sorted.
    pub fn canonical(&self) -> Vec<Vec<Step>> {
        let mut ws: Vec<Vec<Step>> = self.walks.iter().map(|w| canonical_rotation(w)).collect();
        ws.sort_by(|a, b| {
            a.iter()
                .map(|s| (s.edge, s.from))
                .cmp(b.iter().map(|s| (s.edge, s.from)))
        });
        ws
    }
}

fn canonical_rotation(walk: &[Step]) -> Vec<Step> {
    let n = walk.len();
    let key = |rot: usize| walk.iter().cycle().skip(rot).take(n).map(|s| (s.edge, s.from));
    let best = (0..n).min_by(|&a, &b| key(a).cmp(key(b))).unwrap_or(0);
    walk.iter().cycle().skip(best).take(n).cloned().collect()
}

/// Cycles of M union W in the hexagon graph (both are perfect matchings of
/// H, so their union is 2-regular). Each cycle is listed from its minimal
/// vertex, oriented so white edges are traversed from class X to class Y.
pub fn h_cycles(h: &HexagonGraph, m: &BlueMatching) -> Vec<Vec<HVertex>> {
    let total = h.vertex_count() as u32;
    let mut seen = vec![false; total as usize];
    let mut cycles = Vec::new();
    for x0 in 0..total {
        if seen[x0 as usize] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = x0;
        // Alternate white and blue steps; start so the first white step
        // leaves a class-X vertex.
        let mut take_white = in_class_x(x0);
        loop {
            seen[x as usize] = true;
            cycle.push(x);
            let next = if take_white {
                let w = h.white_at(x);
                if w.a == x {
                    w.b
                } else {
                    w.a
                }
            } else {
                m.blue_partner(x)
            };
            take_white = !take_white;
            x = next;
            if x == x0 {
                break;
            }
        }
        cycles.push(cycle);
    }
    cycles
}

/// Faces of the embedding encoded by a blue perfect matching: the M union W
/// cycles mapped to their induced closed walks in G.
pub fn faces_of_matching(h: &HexagonGraph, m: &BlueMatching) -> FaceSet {
    let g = h.source();
    let walks = h_cycles(h, m)
        .into_iter()
        .map(|cycle| {
            let mut walk = Vec::with_capacity(cycle.len() / 2);
            for (i, &x) in cycle.iter().enumerate() {
                // white steps leave at even positions when the cycle starts
                // in X, odd positions otherwise; equivalently: emit when x
                // is an X vertex (whites always go X -> Y).
                let first_white = in_class_x(cycle[0]);
                let is_white_start = if first_white { i % 2 == 0 } else { i % 2 == 1 };
                if !is_white_start {
                    continue;
                }
                let w = h.white_at(x);
                debug_assert!(in_class_x(x));
                let other = if w.a == x { w.b } else { w.a };
                let (a, b) = g.edge_endpoints(w.g_edge);
                let from = hexagon_of(x);
                let to = hexagon_of(other);
                debug_assert!((from, to) == (a, b) || (from, to) == (b, a));
                walk.push(Step {
                    edge: w.g_edge,
                    from,
                    to,
                });
            }
            walk
        })
        .collect();
    FaceSet { walks }
}

/// Edmonds face tracing over darts: the walk arriving at a vertex along an
/// edge continues along the rotation's image of that edge. Every directed
/// edge is used exactly once across all faces.
pub fn trace_faces(g: &CubicGraph, r: &RotationSystem) -> FaceSet {
    let n = g.vertex_count();
    debug_assert!(g.is_cubic());
    let sorted: Vec<Vec<VertexId>> = (0..n as u32).map(|v| g.sorted_neighbors(v)).collect();
    let idx_of = |v: VertexId, u: VertexId| -> usize {
        sorted[v as usize].iter().position(|&w| w == u).unwrap()
    };
    // directed edge key: 3*v + index of u at v  (the dart v -> u)
    let mut used = vec![false; 3 * n];
    let mut walks = Vec::new();
    for start in 0..3 * n {
        if used[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut dart = start;
        loop {
            used[dart] = true;
            let v = (dart / 3) as u32;
            let u = sorted[v as usize][dart % 3];
            walk.push(Step {
                edge: g.edge_between(v, u).unwrap(),
                from: v,
                to: u,
            });
            // next: at u, incoming edge {v,u}; apply rotation at u
            let i = idx_of(u, v);
            let j = match r.rots[u as usize] {
                Rot::Forward => (i + 1) % 3,
                Rot::Backward => (i + 2) % 3,
            };
            dart = 3 * u as usize + j;
            if dart == start {
                break;
            }
            debug_assert!(!used[dart]);
        }
        walks.push(walk);
    }
    FaceSet { walks }
}

/// True iff some M union W cycle contains both end-vertices of a red edge,
/// i.e. an antipodal corner pair; equivalently the encoded embedding has a
/// dual loop.
pub fn has_dual_loop(h: &HexagonGraph, m: &BlueMatching) -> bool {
    for cycle in h_cycles(h, m) {
        let set: BTreeSet<HVertex> = cycle.iter().copied().collect();
        for &x in &cycle {
            if x < bar(x) && set.contains(&bar(x)) {
                return true;
            }
        }
    }
    false
}

/// Genus from the Euler relation |V| - |E| + |F| = 2 - 2g.
pub fn genus_of(g: &CubicGraph, faces: &FaceSet) -> Result<u32, EmbedError> {
    let v = g.vertex_count() as i64;
    let e = g.edge_count() as i64;
    let f = faces.face_count() as i64;
    let two_g = 2 - v + e - f;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(EmbedError::NonIntegralGenus);
    }
    Ok((two_g / 2) as u32)
}

/// A directed cycle double cover: closed walks covering every edge exactly
/// once in each direction, with the face/genus statistics of the embedding
/// it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedCycleCover {
    pub walks: Vec<Vec<Step>>,
    pub faces: usize,
    pub genus: u32,
}

/// Verifier outcome with the first violation when invalid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub violation: Option<String>,
}

/// Check the double cover contract: every walk closed and chained, every
/// edge traversed exactly once in each direction.
pub fn verify_dcdc(g: &CubicGraph, walks: &[Vec<Step>]) -> VerifyReport {
    use core::fmt::Write;
    let mut fail = |msg: String| VerifyReport {
        valid: false,
        violation: Some(msg),
    };
    let mut tally = vec![[0u32; 2]; g.edge_count()];
    for (wi, walk) in walks.iter().enumerate() {
        if walk.is_empty() {
            return fail({
                let mut s = String::new();
                let _ = write!(s, "walk {wi} is empty");
                s
            });
        }
        if walk[0].from != walk.last().unwrap().to {
            return fail({
                let mut s = String::new();
                let _ = write!(s, "walk {wi} is not closed");
                s
            });
        }
        for (si, pair) in walk.windows(2).enumerate() {
            if pair[0].to != pair[1].from {
                return fail({
                    let mut s = String::new();
                    let _ = write!(s, "walk {wi} breaks at step {si}");
                    s
                });
            }
        }
        for s in walk {
            if s.edge as usize >= g.edge_count() {
                return fail({
                    let mut t = String::new();
                    let _ = write!(t, "walk {wi} references unknown edge {}", s.edge);
                    t
                });
            }
            let (a, b) = g.edge_endpoints(s.edge);
            if (s.from, s.to) != (a, b) && (s.from, s.to) != (b, a) {
                return fail({
                    let mut t = String::new();
                    let _ = write!(t, "walk {wi} misuses edge {}", s.edge);
                    t
                });
            }
            let dir = usize::from(s.from != a);
            tally[s.edge as usize][dir] += 1;
        }
    }
    for (e, t) in tally.iter().enumerate() {
        if t[0] != 1 || t[1] != 1 {
            return fail({
                let mut s = String::new();
                let _ = write!(s, "edge {e} covered {}/{} instead of 1/1", t[0], t[1]);
                s
            });
        }
    }
    VerifyReport {
        valid: true,
        violation: None,
    }
}

/// Extract the directed cycle double cover encoded by a dual-loop-free blue
/// perfect matching. Faces are traced as dart cycles, which yields the two
/// directions of every edge automatically.
pub fn extract_dcdc(h: &HexagonGraph, m: &BlueMatching) -> Result<DirectedCycleCover, EmbedError> {
    if has_dual_loop(h, m) {
        return Err(EmbedError::DualLoopPresent);
    }
    let g = h.source();
    let faces = trace_faces(g, &rotation_of_matching(m));
    debug_assert_eq!(
        faces.canonical(),
        faces_of_matching(h, m).canonical(),
        "dual face pipelines disagree"
    );
    let genus = genus_of(g, &faces)?;
    let cover = DirectedCycleCover {
        faces: faces.face_count(),
        genus,
        walks: faces.walks,
    };
    debug_assert!(verify_dcdc(g, &cover.walks).valid);
    Ok(cover)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    Exhaustive,
    Pruned,
}

pub const DEFAULT_SEARCH_CAP: usize = 26;

/// Search all blue perfect matchings for a dual-loop-free one and return
/// its verified cover; `None` when every embedding has a dual loop.
pub fn search_dcdc(
    g: &CubicGraph,
    strategy: Strategy,
    cap: usize,
) -> Result<Option<DirectedCycleCover>, EmbedError> {
    if !g.is_cubic() {
        return Err(EmbedError::NotCubic);
    }
    if g.vertex_count() > cap || g.vertex_count() > 63 {
        return Err(EmbedError::CapExceeded(g.vertex_count(), cap.min(63)));
    }
    if !g.is_bridgeless() {
        return Err(EmbedError::BridgeDetected);
    }
    let h = HexagonGraph::build(g).map_err(|_| EmbedError::NotCubic)?;
    let m = match strategy {
        Strategy::Exhaustive => search_exhaustive(&h),
        Strategy::Pruned => search_pruned(&h),
    };
    match m {
        None => Ok(None),
        Some(m) => extract_dcdc(&h, &m).map(Some),
    }
}

/// Dual-loop-free matching with the lexicographically smallest bits, if any.
pub fn search_exhaustive(h: &HexagonGraph) -> Option<BlueMatching> {
    let n = h.hexagon_count();
    (0..1u64 << n)
        .map(|bits| BlueMatching::new(bits, n))
        .find(|m| !has_dual_loop(h, m))
}

/// Depth-first search assigning hexagon bits in BFS order from vertex 0,
/// abandoning a prefix as soon as a completed M union W cycle (one that
/// never touches an unassigned hexagon) contains an antipodal pair.
/// Completed cycles never reopen, so the pruning is sound.
pub fn search_pruned(h: &HexagonGraph) -> Option<BlueMatching> {
    let g = h.source();
    let n = g.vertex_count();
    // BFS order from vertex 0
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut q = VecDeque::new();
    q.push_back(0u32);
    seen[0] = true;
    while let Some(v) = q.pop_front() {
        order.push(v);
        for u in g.sorted_neighbors(v) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                q.push_back(u);
            }
        }
    }
    debug_assert_eq!(order.len(), n);
    let mut bits = 0u64;
    let mut assigned = vec![false; n];
    dfs_pruned(h, &order, 0, &mut bits, &mut assigned)
}

fn dfs_pruned(
    h: &HexagonGraph,
    order: &[VertexId],
    depth: usize,
    bits: &mut u64,
    assigned: &mut Vec<bool>,
) -> Option<BlueMatching> {
    let n = order.len();
    if depth == n {
        let m = BlueMatching::new(*bits, n);
        debug_assert!(!has_dual_loop(h, &m));
        return Some(m);
    }
    let v = order[depth];
    for bit in [false, true] {
        if bit {
            *bits |= 1 << v;
        } else {
            *bits &= !(1 << v);
        }
        assigned[v as usize] = true;
        let m = BlueMatching::new(*bits, n);
        if !closed_cycle_has_red_pair(h, &m, assigned, v) {
            if let Some(found) = dfs_pruned(h, order, depth + 1, bits, assigned) {
                return Some(found);
            }
        }
    }
    assigned[order[depth] as usize] = false;
    None
}

/// Walk the M union W cycles through the just-assigned hexagon; a cycle
/// that closes within assigned hexagons and holds an antipodal pair kills
/// the whole prefix.
fn closed_cycle_has_red_pair(
    h: &HexagonGraph,
    m: &BlueMatching,
    assigned: &[bool],
    v: VertexId,
) -> bool {
    for c in 0..6u8 {
        let x0 = hv(v, c);
        let mut x = x0;
        let mut take_white = true;
        let mut visited: BTreeSet<HVertex> = BTreeSet::new();
        visited.insert(x0);
        let closed = loop {
            let next = if take_white {
                let w = h.white_at(x);
                if w.a == x {
                    w.b
                } else {
                    w.a
                }
            } else {
                m.blue_partner(x)
            };
            if !assigned[hexagon_of(next) as usize] {
                break false;
            }
            if next == x0 && !take_white {
                // wait: the cycle closes on either parity; detect plainly
                break true;
            }
            if next == x0 {
                break true;
            }
            visited.insert(next);
            take_white = !take_white;
            x = next;
        };
        if closed {
            for &y in &visited {
                if visited.contains(&bar(y)) {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{k33, k4, petersen};

    #[test]
    fn matching_counts() {
        let h = HexagonGraph::build(&k4()).unwrap();
        assert_eq!(
            BlueMatchings::new(&h, EnumOrder::Lexicographic, 26)
                .unwrap()
                .count(),
            16
        );
        let h = HexagonGraph::build(&petersen()).unwrap();
        assert_eq!(
            BlueMatchings::new(&h, EnumOrder::Gray, 26).unwrap().count(),
            1024
        );
    }

    #[test]
    fn bijection_roundtrip_and_locality() {
        let h = HexagonGraph::build(&petersen()).unwrap();
        let mut images = BTreeSet::new();
        for m in BlueMatchings::new(&h, EnumOrder::Lexicographic, 26).unwrap() {
            let r = rotation_of_matching(&m);
            assert_eq!(matching_of_rotation(&r), m);
            images.insert(r.rots.clone());
        }
        assert_eq!(images.len(), 1024);
        // flipping one bit flips exactly one rotation
        let m0 = BlueMatching::new(0, 10);
        let m1 = BlueMatching::new(1, 10);
        let r0 = rotation_of_matching(&m0);
        let r1 = rotation_of_matching(&m1);
        let diff = r0
            .rots
            .iter()
            .zip(&r1.rots)
            .filter(|(a, b)| a != b)
            .count();
        assert_eq!(diff, 1);
    }

    #[test]
    fn face_pipelines_agree_on_all_petersen_matchings() {
        let g = petersen();
        let h = HexagonGraph::build(&g).unwrap();
        for m in BlueMatchings::new(&h, EnumOrder::Lexicographic, 26).unwrap() {
            let a = faces_of_matching(&h, &m);
            let b = trace_faces(&g, &rotation_of_matching(&m));
            assert_eq!(a.canonical(), b.canonical());
            assert_eq!(a.traversal_count(), 30);
        }
    }

    #[test]
    fn h_cycle_lengths_are_even_and_at_least_four() {
        let g = k33();
        let h = HexagonGraph::build(&g).unwrap();
        for m in BlueMatchings::new(&h, EnumOrder::Lexicographic, 26).unwrap() {
            for c in h_cycles(&h, &m) {
                assert!(c.len() >= 4 && c.len() % 2 == 0);
            }
        }
    }

    #[test]
    fn k4_has_a_planar_rotation_with_four_triangles() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        let mut found_planar = false;
        let mut found_torus = false;
        let mut found_loop_free = false;
        for m in BlueMatchings::new(&h, EnumOrder::Lexicographic, 26).unwrap() {
            let faces = faces_of_matching(&h, &m);
            let g2 = genus_of(&g, &faces).unwrap();
            if faces.face_count() == 4 {
                assert_eq!(g2, 0);
                assert!(faces.walks.iter().all(|w| w.len() == 3));
                found_planar = true;
            }
            if faces.face_count() == 2 {
                assert_eq!(g2, 1);
                found_torus = true;
            }
            if !has_dual_loop(&h, &m) {
                found_loop_free = true;
            }
        }
        assert!(found_planar && found_torus && found_loop_free);
    }

    #[test]
    fn single_face_always_has_a_dual_loop() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        for m in BlueMatchings::new(&h, EnumOrder::Lexicographic, 26).unwrap() {
            if faces_of_matching(&h, &m).face_count() == 1 {
                assert!(has_dual_loop(&h, &m));
            }
        }
    }

    #[test]
    fn extract_and_verify_on_k4_and_petersen() {
        for g in [k4(), petersen()] {
            let cover = search_dcdc(&g, Strategy::Exhaustive, 26).unwrap().unwrap();
            assert!(verify_dcdc(&g, &cover.walks).valid);
            let pruned = search_dcdc(&g, Strategy::Pruned, 26).unwrap().unwrap();
            assert!(verify_dcdc(&g, &pruned.walks).valid);
        }
    }

    #[test]
    fn petersen_loop_free_matchings_exist_and_give_genus_one() {
        let g = petersen();
        let h = HexagonGraph::build(&g).unwrap();
        let m = search_exhaustive(&h).expect("Petersen has a loop-free embedding");
        let cover = extract_dcdc(&h, &m).unwrap();
        // Euler: 10 - 15 + F = 2 - 2g; Petersen is not planar, so g >= 1.
        assert!(cover.genus >= 1);
        if cover.genus == 1 {
            assert_eq!(cover.faces, 5);
        }
    }

    #[test]
    fn broken_covers_are_rejected() {
        let g = k4();
        let cover = search_dcdc(&g, Strategy::Exhaustive, 26).unwrap().unwrap();
        // duplicate one walk
        let mut dup = cover.walks.clone();
        dup.push(dup[0].clone());
        assert!(!verify_dcdc(&g, &dup).valid);
        // reverse one walk: some edge gets covered twice one way
        let mut rev = cover.walks.clone();
        rev[0] = rev[0]
            .iter()
            .rev()
            .map(|s| Step {
                edge: s.edge,
                from: s.to,
                to: s.from,
            })
            .collect();
        assert!(!verify_dcdc(&g, &rev).valid);
    }

    #[test]
    fn dual_loop_extraction_is_an_error() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        let m = BlueMatchings::new(&h, EnumOrder::Lexicographic, 26)
            .unwrap()
            .find(|m| has_dual_loop(&h, m))
            .unwrap();
        assert_eq!(extract_dcdc(&h, &m), Err(EmbedError::DualLoopPresent));
    }

    #[test]
    fn bridge_and_cap_errors() {
        let g = crate::graph::bridged_cubic();
        assert_eq!(
            search_dcdc(&g, Strategy::Exhaustive, 26),
            Err(EmbedError::BridgeDetected)
        );
        let g = petersen();
        assert_eq!(
            search_dcdc(&g, Strategy::Exhaustive, 8),
            Err(EmbedError::CapExceeded(10, 8))
        );
    }
}
