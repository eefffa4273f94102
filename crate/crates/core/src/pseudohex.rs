//! Pseudohexes: the hexagon-graph representation of mixed graphs, with
//! hexagon reductions, joint reductions, safety and correctness verdicts,
//! the exhaustive safe-reduction oracle, and theorem-guided reducers for
//! the fork-collection members.
//!
//! A pseudohex is a tri-colored bipartite graph: blue edges form disjoint
//! hexagons covering all vertices, red edges include every antipodal chord
//! (plus extras accumulated by reductions), and the white edges form a
//! perfect matching. White edges are real (they encode edges of the
//! underlying mixed graph) or derived (they encode arcs, carrying walk
//! provenance). Reducing a hexagon by one of its two blue matchings
//! contracts the three alternating paths through it; a joint reduction of
//! several hexagons contracts transitively and emits the closed cycles that
//! form entirely inside the reduced set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{CubicGraph, VertexId};
use crate::hexagon::{bar, corner_of, hexagon_of, hv, in_class_x, HVertex, HexagonGraph};
use crate::mixed::Step;

pub mod guided;
pub mod synth;
pub mod templates;

pub type HexId = u32;
pub type WhiteId = u32;

/// White edge of a pseudohex. Endpoint `a` is the class-X end and `b` the
/// class-Y end; the provenance walk runs from `a`'s hexagon to `b`'s.
/// Synthetic test instances may carry empty provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct White {
    pub a: HVertex,
    pub b: HVertex,
    pub real: bool,
    pub provenance: Vec<Step>,
}

impl White {
    pub fn other(&self, x: HVertex) -> HVertex {
        if self.a == x {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, x: HVertex) -> bool {
        self.a == x || self.b == x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PseudohexError {
    DeadHexagon(HexId),
    BrokenMatching(HVertex),
    ClassViolation,
    FlagMismatch(WhiteId),
    BadProvenance(WhiteId),
    RedLoop,
    OracleCap(usize),
    TemplateMismatch(String),
}

impl fmt::Display for PseudohexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PseudohexError::DeadHexagon(h) => write!(f, "hexagon {h} is not alive"),
            PseudohexError::BrokenMatching(x) => write!(f, "vertex {x} lacks a unique white edge"),
            PseudohexError::ClassViolation => write!(f, "edge inside one bipartition class"),
            PseudohexError::FlagMismatch(w) => write!(f, "white {w} flag differs from structure"),
            PseudohexError::BadProvenance(w) => write!(f, "white {w} provenance does not chain"),
            PseudohexError::RedLoop => write!(f, "red loop"),
            PseudohexError::OracleCap(n) => write!(f, "oracle cap exceeded ({n} hexagons)"),
            PseudohexError::TemplateMismatch(s) => write!(f, "member template mismatch: {s}"),
        }
    }
}

/// Tri-colored pseudohex state. Antipodal red chords are implicit; only the
/// extra red edges accumulated by reductions are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pseudohex {
    hexes: BTreeSet<HexId>,
    whites: BTreeMap<WhiteId, White>,
    white_at: BTreeMap<HVertex, WhiteId>,
    red_extras: BTreeSet<(HVertex, HVertex)>,
    next_white: WhiteId,
}

impl Pseudohex {
    pub fn hexagons(&self) -> impl Iterator<Item = HexId> + '_ {
        self.hexes.iter().copied()
    }

    pub fn hexagon_count(&self) -> usize {
        self.hexes.len()
    }

    pub fn is_alive(&self, h: HexId) -> bool {
        self.hexes.contains(&h)
    }

    pub fn whites(&self) -> impl Iterator<Item = (WhiteId, &White)> + '_ {
        self.whites.iter().map(|(&i, w)| (i, w))
    }

    pub fn white(&self, id: WhiteId) -> &White {
        &self.whites[&id]
    }

    pub fn white_id_at(&self, x: HVertex) -> WhiteId {
        self.white_at[&x]
    }

    pub fn white_edge_at(&self, x: HVertex) -> &White {
        &self.whites[&self.white_at[&x]]
    }

    pub fn red_extras(&self) -> impl Iterator<Item = (HVertex, HVertex)> + '_ {
        self.red_extras.iter().copied()
    }

    /// Red adjacency test covering the implicit antipodal chords.
    pub fn is_red(&self, x: HVertex, y: HVertex) -> bool {
        (hexagon_of(x) == hexagon_of(y) && bar(x) == y) || self.red_extras.contains(&norm(x, y))
    }

    /// All red edges incident to `x`.
    pub fn red_neighbors(&self, x: HVertex) -> Vec<HVertex> {
        let mut out = vec![bar(x)];
        for &(p, q) in &self.red_extras {
            if p == x {
                out.push(q);
            } else if q == x {
                out.push(p);
            }
        }
        out
    }

    /// Build the pseudohex of a hexagon graph: all whites real, provenance
    /// one step per white edge.
    pub fn from_hexagon_graph(h: &HexagonGraph) -> Self {
        let g = h.source();
        let mut k = Pseudohex {
            hexes: (0..g.vertex_count() as u32).collect(),
            whites: BTreeMap::new(),
            white_at: BTreeMap::new(),
            red_extras: BTreeSet::new(),
            next_white: 0,
        };
        for w in h.whites() {
            let (a, b) = if in_class_x(w.a) { (w.a, w.b) } else { (w.b, w.a) };
            k.insert_white(White {
                a,
                b,
                real: true,
                provenance: vec![Step {
                    edge: w.g_edge,
                    from: hexagon_of(a) as VertexId,
                    to: hexagon_of(b) as VertexId,
                }],
            });
        }
        k.recompute_flags();
        k
    }

    /// Assemble a pseudohex from parts (the synthetic-instance generator
    /// and the JSON loader). Flags are recomputed from structure.
    pub fn from_parts(
        hexes: BTreeSet<HexId>,
        whites: Vec<White>,
        red_extras: BTreeSet<(HVertex, HVertex)>,
    ) -> Result<Self, PseudohexError> {
        let mut k = Pseudohex {
            hexes,
            whites: BTreeMap::new(),
            white_at: BTreeMap::new(),
            red_extras,
            next_white: 0,
        };
        for w in whites {
            k.insert_white(w);
        }
        k.recompute_flags();
        k.check_invariants()?;
        Ok(k)
    }

    fn insert_white(&mut self, mut w: White) -> WhiteId {
        if !in_class_x(w.a) {
            core::mem::swap(&mut w.a, &mut w.b);
            w.provenance = reverse_walk(&w.provenance);
        }
        let id = self.next_white;
        self.next_white += 1;
        let old_a = self.white_at.insert(w.a, id);
        let old_b = self.white_at.insert(w.b, id);
        debug_assert!(old_a.is_none() && old_b.is_none(), "white matching clash");
        self.whites.insert(id, w);
        id
    }

    /// Structural realness: the partner edge exists and the only red edges
    /// adjacent to either are the two antipodal chords.
    pub fn structurally_real(&self, id: WhiteId) -> bool {
        let w = &self.whites[&id];
        let (pa, pb) = (bar(w.b), bar(w.a));
        match self.white_at.get(&pa) {
            Some(&pid) => {
                let p = &self.whites[&pid];
                if !(p.a == pa && p.b == pb) {
                    return false;
                }
            }
            None => return false,
        }
        for x in [w.a, w.b, pa, pb] {
            for &(p, q) in &self.red_extras {
                if p == x || q == x {
                    return false;
                }
            }
        }
        true
    }

    /// Refresh every stored flag from structure.
    pub fn recompute_flags(&mut self) {
        let ids: Vec<WhiteId> = self.whites.keys().copied().collect();
        for id in ids {
            let real = self.structurally_real(id);
            self.whites.get_mut(&id).unwrap().real = real;
        }
    }

    /// Full invariant recomputation: blue cover, perfect white matching,
    /// class crossings, flag agreement, provenance chaining.
    pub fn check_invariants(&self) -> Result<(), PseudohexError> {
        for &h in &self.hexes {
            for c in 0..6u8 {
                let x = hv(h, c);
                match self.white_at.get(&x) {
                    None => return Err(PseudohexError::BrokenMatching(x)),
                    Some(id) => {
                        if !self.whites[id].touches(x) {
                            return Err(PseudohexError::BrokenMatching(x));
                        }
                    }
                }
            }
        }
        for (&id, w) in &self.whites {
            if !in_class_x(w.a) || in_class_x(w.b) {
                return Err(PseudohexError::ClassViolation);
            }
            for x in [w.a, w.b] {
                if !self.hexes.contains(&hexagon_of(x)) {
                    return Err(PseudohexError::DeadHexagon(hexagon_of(x)));
                }
            }
            if w.real != self.structurally_real(id) {
                return Err(PseudohexError::FlagMismatch(id));
            }
            if !w.provenance.is_empty()
                && crate::mixed::check_walk(
                    &w.provenance,
                    hexagon_of(w.a) as VertexId,
                    hexagon_of(w.b) as VertexId,
                )
                .is_err()
            {
                return Err(PseudohexError::BadProvenance(id));
            }
        }
        for &(p, q) in &self.red_extras {
            if p == q {
                return Err(PseudohexError::RedLoop);
            }
            if in_class_x(p) == in_class_x(q) {
                return Err(PseudohexError::ClassViolation);
            }
            for x in [p, q] {
                if !self.hexes.contains(&hexagon_of(x)) {
                    return Err(PseudohexError::DeadHexagon(hexagon_of(x)));
                }
            }
        }
        Ok(())
    }

    /// The skeleton graph on the alive hexagons: an edge per pair of real
    /// white edges joining two hexagons. Returns the graph over dense
    /// indices plus the hexagon order used.
    pub fn skeleton(&self) -> (CubicGraph, Vec<HexId>) {
        let order: Vec<HexId> = self.hexes.iter().copied().collect();
        let pos: BTreeMap<HexId, u32> = order
            .iter()
            .enumerate()
            .map(|(i, &h)| (h, i as u32))
            .collect();
        let mut g = CubicGraph::new(order.len());
        let mut seen_pairs: BTreeSet<(HexId, HexId)> = BTreeSet::new();
        for w in self.whites.values() {
            if !w.real {
                continue;
            }
            let (h1, h2) = (hexagon_of(w.a), hexagon_of(w.b));
            if h1 == h2 {
                continue;
            }
            let key = (h1.min(h2), h1.max(h2));
            if seen_pairs.insert(key) {
                // multiplicity violations surface through properness
                let _ = g.add_edge(pos[&h1], pos[&h2]);
            }
        }
        (g, order)
    }

    /// Real-white pair multiplicity between two hexagons.
    pub fn real_multiplicity(&self, h1: HexId, h2: HexId) -> usize {
        self.whites
            .values()
            .filter(|w| {
                w.real && {
                    let (a, b) = (hexagon_of(w.a), hexagon_of(w.b));
                    (a, b) == (h1, h2) || (a, b) == (h2, h1)
                }
            })
            .count()
            / 2
    }

    /// End detection: a red edge parallel to a white edge.
    pub fn has_end(&self) -> bool {
        self.whites.values().any(|w| self.is_red(w.a, w.b))
    }

    /// Properness: no end, skeleton 2-connected, loop-free, no parallel
    /// skeleton edges.
    pub fn properness_report(&self) -> Properness {
        let has_end = self.has_end();
        let mut simple = true;
        let order: Vec<HexId> = self.hexes.iter().copied().collect();
        for w in self.whites.values() {
            if w.real && hexagon_of(w.a) == hexagon_of(w.b) {
                simple = false;
            }
        }
        'outer: for (i, &h1) in order.iter().enumerate() {
            for &h2 in &order[i + 1..] {
                if self.real_multiplicity(h1, h2) > 1 {
                    simple = false;
                    break 'outer;
                }
            }
        }
        let (g, _) = self.skeleton();
        let two_connected = g.vertex_count() >= 3 && g.is_two_connected().unwrap_or(false);
        Properness {
            has_end,
            proper: !has_end && simple && two_connected,
        }
    }

    /// Two white edges are red-connected when some red edge is adjacent to
    /// both.
    pub fn red_connected(&self, e: WhiteId, f: WhiteId) -> bool {
        let we = &self.whites[&e];
        let wf = &self.whites[&f];
        for x in [we.a, we.b] {
            for y in self.red_neighbors(x) {
                if wf.touches(y) {
                    return true;
                }
            }
        }
        false
    }

    pub fn to_dto(&self) -> PseudohexDto {
        PseudohexDto {
            schema: 1,
            hexagons: self.hexes.iter().copied().collect(),
            whites: self
                .whites
                .values()
                .map(|w| WhiteDto {
                    a: w.a,
                    b: w.b,
                    real: w.real,
                    provenance: w.provenance.clone(),
                })
                .collect(),
            red_extras: self.red_extras.iter().copied().collect(),
        }
    }

    pub fn from_dto(dto: &PseudohexDto) -> Result<Self, PseudohexError> {
        Pseudohex::from_parts(
            dto.hexagons.iter().copied().collect(),
            dto.whites
                .iter()
                .map(|w| White {
                    a: w.a,
                    b: w.b,
                    real: w.real,
                    provenance: w.provenance.clone(),
                })
                .collect(),
            dto.red_extras.iter().copied().collect(),
        )
    }
}

fn norm(x: HVertex, y: HVertex) -> (HVertex, HVertex) {
    (x.min(y), x.max(y))
}

fn reverse_walk(w: &[Step]) -> Vec<Step> {
    w.iter()
        .rev()
        .map(|s| Step {
            edge: s.edge,
            from: s.to,
            to: s.from,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Properness {
    pub has_end: bool,
    pub proper: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudohexDto {
    pub schema: u32,
    pub hexagons: Vec<HexId>,
    pub whites: Vec<WhiteDto>,
    pub red_extras: Vec<(HVertex, HVertex)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WhiteDto {
    pub a: HVertex,
    pub b: HVertex,
    pub real: bool,
    pub provenance: Vec<Step>,
}

/// Choice of blue perfect matching per reduced hexagon: `false` picks
/// {01,23,45}, `true` picks {12,34,50}.
pub type ReductionPlan = BTreeMap<HexId, bool>;

pub fn blue_partner_of(bit: bool, x: HVertex) -> HVertex {
    let h = hexagon_of(x);
    let c = corner_of(x);
    let p = if bit {
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

/// One contracted component of a joint reduction.
#[derive(Debug, Clone)]
pub struct Component {
    /// White edge ids along the component in traversal order.
    pub whites: Vec<WhiteId>,
    /// Interior K-vertices: the reduced-hexagon vertices in traversal
    /// order (entry, exit alternating per hexagon visit).
    pub interior: Vec<HVertex>,
    /// Path endpoints (outside vertices), X end first; `None` for cycles.
    pub ends: Option<(HVertex, HVertex)>,
    /// Number of derived whites of K on this component.
    pub derived: usize,
}

#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub result: Pseudohex,
    pub components: Vec<Component>,
    /// Every contracted path and cycle carries at most one derived white
    /// edge, and no contracted 2-cycle consists of a real white edge.
    pub safe: bool,
    /// The resulting pseudohex has no end.
    pub correct: bool,
    /// Closed directed walks emitted by the contracted cycles.
    pub emitted: Vec<Vec<Step>>,
    /// Ids of the white edges created in `result`.
    pub created: Vec<WhiteId>,
}

/// Reduce one hexagon by one of its two blue matchings.
pub fn reduce_hexagon(
    k: &Pseudohex,
    h: HexId,
    bit: bool,
) -> Result<ReductionOutcome, PseudohexError> {
    let mut plan = ReductionPlan::new();
    plan.insert(h, bit);
    joint_reduce(k, &plan)
}

/// Joint reduction of a hexagon set: contracted paths and cycles are
/// computed transitively across all reduced hexagons; red edges attached to
/// interior vertices rewire to the same-class endpoint of the contracted
/// edge, or dissolve when the component is absorbed as a cycle.
pub fn joint_reduce(
    k: &Pseudohex,
    plan: &ReductionPlan,
) -> Result<ReductionOutcome, PseudohexError> {
    for &h in plan.keys() {
        if !k.hexes.contains(&h) {
            return Err(PseudohexError::DeadHexagon(h));
        }
    }
    let reduced: BTreeSet<HexId> = plan.keys().copied().collect();
    let in_reduced = |x: HVertex| reduced.contains(&hexagon_of(x));

    let mut visited_w: BTreeSet<WhiteId> = BTreeSet::new();
    let mut components: Vec<Component> = Vec::new();
    let mut interior_of: BTreeMap<HVertex, usize> = BTreeMap::new();

    // Paths start at terminal whites (exactly one end inside).
    let mut terminals: Vec<(WhiteId, HVertex)> = Vec::new();
    for (&id, w) in &k.whites {
        let ia = in_reduced(w.a);
        let ib = in_reduced(w.b);
        if ia != ib {
            terminals.push((id, if ia { w.b } else { w.a }));
        }
    }
    terminals.sort_unstable();

    for &(start_w, outside) in &terminals {
        if visited_w.contains(&start_w) {
            continue;
        }
        let ci = components.len();
        let mut whites = vec![start_w];
        visited_w.insert(start_w);
        let mut interior = Vec::new();
        let mut x = k.whites[&start_w].other(outside);
        loop {
            debug_assert!(in_reduced(x));
            interior.push(x);
            interior_of.insert(x, ci);
            let y = blue_partner_of(plan[&hexagon_of(x)], x);
            interior.push(y);
            interior_of.insert(y, ci);
            let next_w = k.white_at[&y];
            debug_assert!(!visited_w.contains(&next_w));
            visited_w.insert(next_w);
            whites.push(next_w);
            let z = k.whites[&next_w].other(y);
            if !in_reduced(z) {
                let (e1, e2) = (outside, z);
                let ends = if in_class_x(e1) { (e1, e2) } else { (e2, e1) };
                let derived = whites.iter().filter(|w| !k.whites[w].real).count();
                components.push(Component {
                    whites,
                    interior,
                    ends: Some(ends),
                    derived,
                });
                break;
            }
            x = z;
        }
    }

    // Remaining whites incident to reduced vertices form cycles.
    for (&id, w) in &k.whites {
        if visited_w.contains(&id) || !(in_reduced(w.a) || in_reduced(w.b)) {
            continue;
        }
        let ci = components.len();
        let mut whites = vec![id];
        visited_w.insert(id);
        let mut interior = Vec::new();
        let mut x = w.a;
        loop {
            debug_assert!(in_reduced(x));
            interior.push(x);
            interior_of.insert(x, ci);
            let y = blue_partner_of(plan[&hexagon_of(x)], x);
            interior.push(y);
            interior_of.insert(y, ci);
            let next_w = k.white_at[&y];
            if next_w == whites[0] {
                break;
            }
            debug_assert!(!visited_w.contains(&next_w));
            visited_w.insert(next_w);
            whites.push(next_w);
            let z = k.whites[&next_w].other(y);
            debug_assert!(in_reduced(z));
            x = z;
        }
        let derived = whites.iter().filter(|w| !k.whites[w].real).count();
        components.push(Component {
            whites,
            interior,
            ends: None,
            derived,
        });
    }

    // Safety verdict.
    let mut safe = true;
    for c in &components {
        if c.derived > 1 {
            safe = false;
        }
        if c.ends.is_none() && c.whites.len() == 1 && k.whites[&c.whites[0]].real {
            safe = false;
        }
    }

    // Build the result pseudohex.
    let mut result = k.clone();
    for &h in &reduced {
        result.hexes.remove(&h);
    }
    for c in &components {
        for wid in &c.whites {
            if let Some(w) = result.whites.remove(wid) {
                result.white_at.remove(&w.a);
                result.white_at.remove(&w.b);
            }
        }
    }

    let mut created = Vec::new();
    let mut comp_ends: Vec<Option<(HVertex, HVertex)>> = components.iter().map(|c| c.ends).collect();
    let mut emitted = Vec::new();
    for (ci, c) in components.iter().enumerate() {
        let ordered_start = match c.ends {
            Some((ax, _)) => ax,
            None => k.whites[&c.whites[0]].a,
        };
        let ordered = order_whites(k, c, ordered_start);
        let mut prov: Vec<Step> = Vec::new();
        let mut have_prov = true;
        for wid in &ordered {
            let w = &k.whites[wid];
            if w.provenance.is_empty() {
                have_prov = false;
                break;
            }
            prov.extend(w.provenance.iter().copied());
        }
        match c.ends {
            Some((ax, by)) => {
                let id = result.insert_white(White {
                    a: ax,
                    b: by,
                    real: false,
                    provenance: if have_prov { prov } else { Vec::new() },
                });
                created.push(id);
                comp_ends[ci] = Some((ax, by));
            }
            None => {
                if have_prov && !prov.is_empty() {
                    debug_assert_eq!(prov.first().unwrap().from, prov.last().unwrap().to);
                    emitted.push(prov);
                }
            }
        }
    }

    // Red rewiring through component images.
    let image = |x: HVertex| -> Option<HVertex> {
        match interior_of.get(&x) {
            None => Some(x),
            Some(&ci) => comp_ends[ci].map(|(ax, by)| if in_class_x(x) { ax } else { by }),
        }
    };
    let mut new_extras: BTreeSet<(HVertex, HVertex)> = BTreeSet::new();
    let consider = |x: HVertex, y: HVertex, out: &mut BTreeSet<(HVertex, HVertex)>| {
        if let (Some(p), Some(q)) = (image(x), image(y)) {
            debug_assert_ne!(in_class_x(p), in_class_x(q));
            let antipodal = hexagon_of(p) == hexagon_of(q) && bar(p) == q;
            if !antipodal
                && result.hexes.contains(&hexagon_of(p))
                && result.hexes.contains(&hexagon_of(q))
            {
                out.insert(norm(p, q));
            }
        }
    };
    for &(p, q) in &k.red_extras {
        if interior_of.contains_key(&p) || interior_of.contains_key(&q) {
            consider(p, q, &mut new_extras);
        } else {
            new_extras.insert(norm(p, q));
        }
    }
    for &h in &reduced {
        for c in 0..3u8 {
            consider(hv(h, c), hv(h, c + 3), &mut new_extras);
        }
    }
    result.red_extras = new_extras;
    result.recompute_flags();

    let correct = !result.has_end();
    Ok(ReductionOutcome {
        result,
        components,
        safe,
        correct,
        emitted,
        created,
    })
}

/// Whites of a component in traversal order from `from` (the X endpoint
/// for paths, any X vertex on the component for cycles). The interior
/// vector alternates entry/exit vertices in trace order, which recovers the
/// N-edge pairing without re-deriving plan bits.
fn order_whites(k: &Pseudohex, c: &Component, from: HVertex) -> Vec<WhiteId> {
    if c.whites.len() <= 1 {
        return c.whites.clone();
    }
    let mut exit_of: BTreeMap<HVertex, HVertex> = BTreeMap::new();
    for pair in c.interior.chunks(2) {
        exit_of.insert(pair[0], pair[1]);
        exit_of.insert(pair[1], pair[0]);
    }
    let mut out = Vec::with_capacity(c.whites.len());
    let mut x = from;
    loop {
        let wid = k.white_at[&x];
        out.push(wid);
        if out.len() == c.whites.len() {
            break;
        }
        let y = k.whites[&wid].other(x);
        let exit = exit_of[&y];
        x = exit;
    }
    debug_assert_eq!(out.len(), c.whites.len());
    out
}

/// Exhaustive oracle over all 2^|hexset| plans: the first plan in
/// lexicographic order whose joint reduction is safe and correct. Hexagons
/// are ordered ascending; bit i of the mask drives hexagon i, low masks
/// first. Backtracking prunes a prefix once some contracted segment through
/// the assigned hexagons already carries two derived whites (or a real
/// white closes a 2-cycle); such segments sit on one component of every
/// completion, so the pruning preserves the first-found plan.
pub fn find_safe_reduction(
    k: &Pseudohex,
    hexset: &BTreeSet<HexId>,
) -> Result<Option<ReductionPlan>, PseudohexError> {
    if hexset.len() > 20 {
        return Err(PseudohexError::OracleCap(hexset.len()));
    }
    for &h in hexset {
        if !k.hexes.contains(&h) {
            return Err(PseudohexError::DeadHexagon(h));
        }
    }
    let order: Vec<HexId> = hexset.iter().copied().collect();
    let mut plan = ReductionPlan::new();
    oracle_dfs(k, hexset, &order, 0, &mut plan)
}

fn oracle_dfs(
    k: &Pseudohex,
    hexset: &BTreeSet<HexId>,
    order: &[HexId],
    depth: usize,
    plan: &mut ReductionPlan,
) -> Result<Option<ReductionPlan>, PseudohexError> {
    if depth == order.len() {
        let out = joint_reduce(k, plan)?;
        if out.safe && out.correct {
            return Ok(Some(plan.clone()));
        }
        return Ok(None);
    }
    let h = order[depth];
    for bit in [false, true] {
        plan.insert(h, bit);
        if segments_safe(k, hexset, plan, h) {
            if let Some(found) = oracle_dfs(k, hexset, order, depth + 1, plan)? {
                return Ok(Some(found));
            }
        }
    }
    plan.remove(&h);
    Ok(None)
}

/// Check the contracted segments through the just-assigned hexagon: every
/// maximal alternating segment through assigned hexagons must carry at most
/// one derived white, and no real white may close a 2-cycle with its chosen
/// N-edge.
fn segments_safe(k: &Pseudohex, hexset: &BTreeSet<HexId>, plan: &ReductionPlan, h: HexId) -> bool {
    for c in 0..6u8 {
        let x0 = hv(h, c);
        let y0 = blue_partner_of(plan[&h], x0);
        let w0 = &k.whites[&k.white_at[&x0]];
        if w0.other(x0) == y0 && w0.real {
            return false; // real white parallel to the chosen N-edge
        }
        let (d_fwd, closed) = seg_walk(k, hexset, plan, x0);
        if closed {
            if d_fwd >= 2 {
                return false;
            }
            continue;
        }
        let (d_bwd, _) = seg_walk(k, hexset, plan, y0);
        if d_fwd + d_bwd >= 2 {
            return false;
        }
    }
    true
}

/// Walk whites and chosen N-edges starting with the white at `start`;
/// stops at an unassigned or outside hexagon, or when the segment closes.
/// Returns the number of derived whites seen and whether it closed.
fn seg_walk(
    k: &Pseudohex,
    hexset: &BTreeSet<HexId>,
    plan: &ReductionPlan,
    start: HVertex,
) -> (usize, bool) {
    let mut derived = 0usize;
    let mut x = start;
    loop {
        let w = &k.whites[&k.white_at[&x]];
        if !w.real {
            derived += 1;
        }
        let z = w.other(x);
        let hz = hexagon_of(z);
        if !hexset.contains(&hz) || !plan.contains_key(&hz) {
            return (derived, false);
        }
        let y = blue_partner_of(plan[&hz], z);
        if y == start {
            return (derived, true);
        }
        x = y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{k4, petersen};

    #[test]
    fn from_hexagon_graph_is_all_real() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        let k = Pseudohex::from_hexagon_graph(&h);
        k.check_invariants().unwrap();
        assert!(k.whites().all(|(_, w)| w.real));
        assert_eq!(k.whites().count(), 2 * g.edge_count());
        let rep = k.properness_report();
        assert!(rep.proper && !rep.has_end);
    }

    #[test]
    fn skeleton_recovers_the_source_graph() {
        for g in [k4(), petersen(), crate::graph::prism()] {
            let h = HexagonGraph::build(&g).unwrap();
            let k = Pseudohex::from_hexagon_graph(&h);
            let (s, _) = k.skeleton();
            assert!(crate::iso::is_isomorphic(&s, &g).unwrap());
        }
    }

    #[test]
    fn red_connected_partner_pair() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        let k = Pseudohex::from_hexagon_graph(&h);
        let (id0, w0) = k.whites().next().unwrap();
        let partner = k.white_id_at(bar(w0.a));
        assert!(k.red_connected(id0, partner));
        assert!(k.red_connected(partner, id0));
        let w0a = w0.a;
        let w0b = w0.b;
        let far = k
            .whites()
            .find(|(id, w)| {
                *id != id0
                    && hexagon_of(w.a) != hexagon_of(w0a)
                    && hexagon_of(w.a) != hexagon_of(w0b)
                    && hexagon_of(w.b) != hexagon_of(w0a)
                    && hexagon_of(w.b) != hexagon_of(w0b)
            })
            .map(|(id, _)| id);
        if let Some(f) = far {
            assert!(!k.red_connected(id0, f));
        }
    }

    #[test]
    fn single_hexagon_reduction_structure() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        let k = Pseudohex::from_hexagon_graph(&h);
        let out = reduce_hexagon(&k, 0, false).unwrap();
        assert!(out.safe);
        assert_eq!(out.components.len(), 3);
        for c in &out.components {
            assert_eq!(c.whites.len(), 2);
            assert_eq!(c.derived, 0);
            assert!(c.ends.is_some());
        }
        assert_eq!(out.created.len(), 3);
        out.result.check_invariants().unwrap();
        for id in &out.created {
            assert!(!out.result.white(*id).real);
        }
        assert!(out.correct);
        // flags recomputed from scratch equal stored flags
        let mut copy = out.result.clone();
        copy.recompute_flags();
        assert_eq!(copy, out.result);
    }

    #[test]
    fn joint_singleton_equals_reduce_hexagon() {
        let g = petersen();
        let h = HexagonGraph::build(&g).unwrap();
        let k = Pseudohex::from_hexagon_graph(&h);
        for bit in [false, true] {
            let a = reduce_hexagon(&k, 3, bit).unwrap();
            let mut plan = ReductionPlan::new();
            plan.insert(3, bit);
            let b = joint_reduce(&k, &plan).unwrap();
            assert_eq!(a.result, b.result);
            assert_eq!(a.safe, b.safe);
        }
    }

    #[test]
    fn oracle_finds_plans_on_fresh_pseudohexes() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        let k = Pseudohex::from_hexagon_graph(&h);
        let plan = find_safe_reduction(&k, &[0u32].into_iter().collect())
            .unwrap()
            .expect("a fresh hexagon reduces safely");
        let out = joint_reduce(&k, &plan).unwrap();
        assert!(out.safe && out.correct);
    }

    #[test]
    fn sequential_reductions_emit_a_full_double_cover_of_k4() {
        let g = k4();
        let h = HexagonGraph::build(&g).unwrap();
        let mut k = Pseudohex::from_hexagon_graph(&h);
        let mut walks: Vec<Vec<Step>> = Vec::new();
        for hx in 0..4u32 {
            let set: BTreeSet<u32> = [hx].into_iter().collect();
            let plan = find_safe_reduction(&k, &set)
                .unwrap()
                .unwrap_or_else(|| [(hx, false)].into_iter().collect());
            let out = joint_reduce(&k, &plan).unwrap();
            walks.extend(out.emitted.clone());
            k = out.result;
        }
        assert_eq!(k.hexagon_count(), 0);
        let report = crate::embedding::verify_dcdc(&g, &walks);
        assert!(report.valid, "{:?}", report.violation);
    }
}
