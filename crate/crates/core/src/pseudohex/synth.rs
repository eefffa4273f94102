//! Seeded synthetic pseudohex instances for the oracle-vs-guided harness:
//! a member occurrence wired into a ring context with randomized corner
//! layouts, derived-edge identifications and extra red edges.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fork::{member_template, MemberKind};
use crate::hexagon::{bar, hv, in_class_x, HVertex};

use super::{HexId, Pseudohex, White};

pub struct MemberInstance {
    pub k: Pseudohex,
    pub member: Vec<HexId>,
}

/// Generate a proper pseudohex containing one member occurrence. The
/// context is a hexagon ring; the member's bold half-edges attach to
/// distinct ring hexagons; free corner pairs carry derived whites wired
/// partly inside the member (`internal_idents` many) and otherwise into
/// the context. Returns `None` when the dice produce an improper state.
pub fn gen_member_instance<R: Rng>(
    kind: &MemberKind,
    rng: &mut R,
    internal_idents: usize,
    extra_reds: usize,
) -> Option<MemberInstance> {
    let t = member_template(kind);
    let n_m = t.graph.vertex_count();
    // attachments: mandatory anchors (dots draw 2 or 3), plus fixes for
    // any member vertex that would stay below degree 2
    let mut anchors: Vec<u32> = match kind {
        MemberKind::Dot => {
            let c = if rng.gen_bool(0.5) { 3 } else { 2 };
            alloc::vec![0; c]
        }
        _ => t.anchors.clone(),
    };
    let mut deg: Vec<usize> = alloc::vec![0; n_m];
    for &(a, b) in t.graph.edges() {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    for &a in &anchors {
        deg[a as usize] += 1;
    }
    for v in 0..n_m {
        while deg[v] < 2 {
            anchors.push(v as u32);
            deg[v] += 1;
        }
    }
    let attach_count = anchors.len();
    // member free pairs
    let member_free: Vec<usize> = (0..n_m).filter(|&v| deg[v] == 2).collect();
    let f_m = member_free.len();
    let idents = internal_idents.min(f_m / 2);
    let dangling = f_m - 2 * idents;
    // context ring: attachment targets are saturated, the rest carry one
    // free pair each; avoid a single leftover pair (it would force an end)
    let mut extra = *[0usize, 2, 3].choose(rng).unwrap();
    if dangling == 0 && extra == 0 {
        extra = 3;
    }
    let c = attach_count + dangling + extra;
    if c < 3 {
        return None;
    }
    let member_ids: Vec<HexId> = (0..n_m as u32).collect();
    let ctx_ids: Vec<HexId> = (n_m as u32..(n_m + c) as u32).collect();

    // skeleton edges: member internal, ring, attachments
    let mut skeleton: Vec<(HexId, HexId)> = Vec::new();
    for &(a, b) in t.graph.edges() {
        skeleton.push((a, b));
    }
    for i in 0..c {
        skeleton.push((ctx_ids[i], ctx_ids[(i + 1) % c]));
    }
    // attachment targets: a random distinct subset of the ring
    let mut targets = ctx_ids.clone();
    targets.shuffle(rng);
    let targets = &targets[..attach_count];
    for (a, &tgt) in anchors.iter().zip(targets) {
        skeleton.push((*a, tgt));
    }

    // corner pair assignment per hexagon: shuffle pairs among incident
    // skeleton edges
    let all: usize = n_m + c;
    let mut pair_of: BTreeMap<(HexId, usize), u8> = BTreeMap::new(); // (hex, edge idx) -> pair
    let mut used_pairs: Vec<Vec<u8>> = alloc::vec![Vec::new(); all];
    for (ei, &(h1, h2)) in skeleton.iter().enumerate() {
        for h in [h1, h2] {
            let mut options: Vec<u8> = (0..3u8)
                .filter(|p| !used_pairs[h as usize].contains(p))
                .collect();
            if options.is_empty() {
                return None;
            }
            options.shuffle(rng);
            used_pairs[h as usize].push(options[0]);
            pair_of.insert((h, ei), options[0]);
        }
    }

    // whites for skeleton edges: pick a corner on one side, the opposite
    // parity corner on the other, plus the antipodal partner pair
    let mut whites: Vec<White> = Vec::new();
    for (ei, &(h1, h2)) in skeleton.iter().enumerate() {
        let p1 = pair_of[&(h1, ei)];
        let p2 = pair_of[&(h2, ei)];
        let c1 = if rng.gen_bool(0.5) { p1 } else { p1 + 3 };
        let c2 = if (c1 % 2) == (p2 % 2) { p2 + 3 } else { p2 };
        debug_assert_ne!(c1 % 2, c2 % 2);
        whites.push(White {
            a: hv(h1, c1),
            b: hv(h2, c2),
            real: true,
            provenance: Vec::new(),
        });
        whites.push(White {
            a: hv(h1, (c1 + 3) % 6),
            b: hv(h2, (c2 + 3) % 6),
            real: true,
            provenance: Vec::new(),
        });
    }

    // free corners
    let mut free_x: Vec<HVertex> = Vec::new();
    let mut free_y: Vec<HVertex> = Vec::new();
    for h in 0..all as u32 {
        for p in 0..3u8 {
            if used_pairs[h as usize].contains(&p) {
                continue;
            }
            let (u, v) = (hv(h, p), hv(h, p + 3));
            if in_class_x(u) {
                free_x.push(u);
                free_y.push(v);
            } else {
                free_x.push(v);
                free_y.push(u);
            }
        }
    }
    // wire derived whites: member internal idents first
    let mut taken_x: BTreeSet<HVertex> = BTreeSet::new();
    let mut taken_y: BTreeSet<HVertex> = BTreeSet::new();
    let mut wires: Vec<(HVertex, HVertex)> = Vec::new();
    let is_member = |v: HVertex| (v / 6) < n_m as u32;
    let mut wire = |x: HVertex, y: HVertex, wires: &mut Vec<(HVertex, HVertex)>, tx: &mut BTreeSet<HVertex>, ty: &mut BTreeSet<HVertex>| {
        debug_assert!(in_class_x(x) && !in_class_x(y));
        wires.push((x, y));
        tx.insert(x);
        ty.insert(y);
    };
    let mx: Vec<HVertex> = free_x.iter().copied().filter(|&v| is_member(v)).collect();
    let my: Vec<HVertex> = free_y.iter().copied().filter(|&v| is_member(v)).collect();
    let mut mx_pool = mx.clone();
    let mut my_pool = my.clone();
    mx_pool.shuffle(rng);
    my_pool.shuffle(rng);
    for _ in 0..idents {
        let x = mx_pool.pop()?;
        // avoid same-hexagon antipodal wiring and accidental mirror pairs
        let pos = my_pool.iter().position(|&y| {
            y != bar(x)
                && !wires
                    .iter()
                    .any(|&(wx, wy)| wx == bar(y) && wy == bar(x))
        })?;
        let y = my_pool.remove(pos);
        wire(x, y, &mut wires, &mut taken_x, &mut taken_y);
    }
    // remaining frees wire across the whole instance
    let mut rest_x: Vec<HVertex> = free_x
        .iter()
        .copied()
        .filter(|v| !taken_x.contains(v))
        .collect();
    let mut rest_y: Vec<HVertex> = free_y
        .iter()
        .copied()
        .filter(|v| !taken_y.contains(v))
        .collect();
    rest_x.shuffle(rng);
    rest_y.shuffle(rng);
    // prefer pairing member danglers into the context
    rest_x.sort_by_key(|&v| usize::from(!is_member(v)));
    while let Some(x) = rest_x.pop() {
        let pos = rest_y.iter().position(|&y| {
            y != bar(x)
                && !(is_member(x) && is_member(y) && idents < f_m / 2 && false)
                && !wires
                    .iter()
                    .any(|&(wx, wy)| wx == bar(y) && wy == bar(x))
        })?;
        let y = rest_y.remove(pos);
        wire(x, y, &mut wires, &mut taken_x, &mut taken_y);
    }
    for (x, y) in wires {
        whites.push(White {
            a: x,
            b: y,
            real: false,
            provenance: Vec::new(),
        });
    }

    // extra reds between derived endpoints
    let mut red_extras: BTreeSet<(HVertex, HVertex)> = BTreeSet::new();
    let derived_ends: Vec<HVertex> = whites
        .iter()
        .filter(|w| !w.real)
        .flat_map(|w| [w.a, w.b])
        .collect();
    for _ in 0..extra_reds {
        for _try in 0..8 {
            let p = *derived_ends.choose(rng)?;
            let q = *derived_ends.choose(rng)?;
            if in_class_x(p) == in_class_x(q) || q == bar(p) {
                continue;
            }
            // never parallel to a white edge
            let parallel = whites.iter().any(|w| w.touches(p) && w.touches(q));
            if parallel {
                continue;
            }
            red_extras.insert((p.min(q), p.max(q)));
            break;
        }
    }

    let hexes: BTreeSet<HexId> = (0..all as u32).collect();
    let k = Pseudohex::from_parts(hexes, whites, red_extras).ok()?;
    if !k.properness_report().proper {
        return None;
    }
    // the generator must not have disturbed the member shape
    if super::templates::match_member(&k, &member_ids, kind).is_err() {
        return None;
    }
    Some(MemberInstance {
        k,
        member: member_ids,
    })
}

/// Retry wrapper with a seeded stream of configurations.
pub fn gen_proper_instance<R: Rng>(kind: &MemberKind, rng: &mut R) -> MemberInstance {
    loop {
        let t = member_template(kind);
        let max_idents = t.graph.vertex_count(); // loose upper bound
        let idents = rng.gen_range(0..=max_idents.min(3));
        let reds = rng.gen_range(0..=2);
        if let Some(inst) = gen_member_instance(kind, rng, idents, reds) {
            return inst;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generator_makes_proper_matching_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for kind in [
            MemberKind::Dot,
            MemberKind::Subfork,
            MemberKind::ThreeEar,
            MemberKind::StarFork,
            MemberKind::Fork,
            MemberKind::PFork,
        ] {
            for _ in 0..5 {
                let inst = gen_proper_instance(&kind, &mut rng);
                inst.k.check_invariants().unwrap();
                assert!(inst.k.properness_report().proper);
            }
        }
    }
}
