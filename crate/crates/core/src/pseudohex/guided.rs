//! Configuration classification and theorem-guided member reductions.
//!
//! The guided reducers gate on the obstacle predicates (an all-dangling
//! derived inventory makes a safe reduction impossible by a terminal-count
//! argument, matching the cut-obstacle notion), then walk the case-ordered
//! candidate plans, certifying each through a joint reduction until one is
//! safe and correct. Big-forks are reduced in stages: the outermost star
//! first, then the inner member, with an exhaustive fallback.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::fork::{member_template, BigForkAttachment, MemberKind};
use crate::hexagon::{hexagon_of, hv, in_class_x, HVertex};

use super::templates::{candidate_plans, match_member, member_shape, RoleMap};
use super::{
    find_safe_reduction, joint_reduce, HexId, Pseudohex, PseudohexError, ReductionPlan, WhiteId,
};

/// Structural flags of a member occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationFlags {
    /// every derived white at the member has exactly one end inside
    /// (the fork / 3-ear obstacle; for big-forks see `b_obstacle`)
    pub l_obstacle: bool,
    pub p_danger: bool,
    pub p_bad: bool,
    pub f_abad: bool,
    pub f_bbad: bool,
    /// 2(4+j) distinct derived whites at a j-big-fork
    pub b_obstacle: bool,
    /// dangling no-edge pairs whose member ends lie in different classes,
    /// with their red-connectivity
    pub potential_pairs: Vec<(WhiteId, WhiteId, bool)>,
    /// all derived whites with at least one end at the member
    pub no_edges: Vec<WhiteId>,
    pub roles: RoleMap,
}

/// Derived-white inventory relative to a member vertex set.
struct Inventory {
    /// (white id, member ends (1 or 2), a member endpoint)
    entries: Vec<(WhiteId, u8, HVertex)>,
}

fn inventory(k: &Pseudohex, member_vertices: &BTreeSet<HVertex>) -> Inventory {
    let mut entries = Vec::new();
    for (id, w) in k.whites() {
        if w.real {
            continue;
        }
        let ia = member_vertices.contains(&w.a);
        let ib = member_vertices.contains(&w.b);
        if ia || ib {
            let ends = u8::from(ia) + u8::from(ib);
            let inside = if ia { w.a } else { w.b };
            entries.push((id, ends, inside));
        }
    }
    Inventory { entries }
}

fn member_vertex_set(member: &[HexId]) -> BTreeSet<HVertex> {
    member
        .iter()
        .flat_map(|&h| (0..6u8).map(move |c| hv(h, c)))
        .collect()
}

/// Compute all flags of the spec'd taxonomy for a member occurrence.
pub fn classify_configuration(
    k: &Pseudohex,
    member: &[HexId],
    kind: &MemberKind,
) -> Result<ConfigurationFlags, PseudohexError> {
    let roles = match_member(k, member, kind)?;
    let verts = member_vertex_set(member);
    let inv = inventory(k, &verts);
    let no_edges: Vec<WhiteId> = inv.entries.iter().map(|e| e.0).collect();
    let l_obstacle = !inv.entries.is_empty() && inv.entries.iter().all(|e| e.1 == 1);

    // potential pairs over the dangling no-edges
    let mut potential_pairs = Vec::new();
    let dangling: Vec<&(WhiteId, u8, HVertex)> =
        inv.entries.iter().filter(|e| e.1 == 1).collect();
    for (i, a) in dangling.iter().enumerate() {
        for b in &dangling[i + 1..] {
            if in_class_x(a.2) != in_class_x(b.2) {
                potential_pairs.push((a.0, b.0, k.red_connected(a.0, b.0)));
            }
        }
    }

    let mut p_danger = false;
    let mut p_bad = false;
    if matches!(kind, MemberKind::ThreeEar) {
        (p_danger, p_bad) = three_ear_danger(k, &roles, &inv);
    }
    let mut f_abad = false;
    let mut f_bbad = false;
    if matches!(kind, MemberKind::Fork) {
        (f_abad, f_bbad) = fork_bads(k, &roles, &inv);
    }
    let mut b_obstacle = false;
    if let MemberKind::BigFork { j, .. } = kind {
        let distinct = inv.entries.len();
        b_obstacle = l_obstacle && distinct == 2 * (4 + *j as usize);
    }
    Ok(ConfigurationFlags {
        l_obstacle,
        p_danger,
        p_bad,
        f_abad,
        f_bbad,
        b_obstacle,
        potential_pairs,
        no_edges,
        roles,
    })
}

/// 3-ear danger: one no-edge inside the leaf hexagons, one from a leaf
/// hexagon to the center, one dangling at the center, one dangling at a
/// leaf; bad when the inside edge is red-connected to the center dangler.
fn three_ear_danger(k: &Pseudohex, roles: &RoleMap, inv: &Inventory) -> (bool, bool) {
    let hx = roles[0];
    let hz = roles[1];
    let hy = roles[2];
    let side = |v: HVertex| -> u8 {
        let h = hexagon_of(v);
        if h == hx || h == hy {
            1 // leaf side
        } else if h == hz {
            2
        } else {
            0
        }
    };
    let mut in_xy = Vec::new();
    let mut xy_z = 0;
    let mut dangle_z = Vec::new();
    let mut dangle_xy = 0;
    for &(id, ends, _) in &inv.entries {
        let w = k.white(id);
        let (sa, sb) = (side(w.a), side(w.b));
        match ends {
            2 => match (sa.min(sb), sa.max(sb)) {
                (1, 1) => in_xy.push(id),
                (1, 2) => xy_z += 1,
                _ => {}
            },
            1 => {
                if sa == 2 || sb == 2 {
                    dangle_z.push(id);
                } else {
                    dangle_xy += 1;
                }
            }
            _ => {}
        }
    }
    let danger = in_xy.len() == 1
        && xy_z == 1
        && dangle_z.len() == 1
        && dangle_xy == 1
        && inv.entries.len() == 4;
    let bad = danger && k.red_connected(in_xy[0], dangle_z[0]);
    (danger, bad)
}

/// Fork bads: some no-edge lies inside the leaf hexagons, one of the two
/// lower hexagons (a for the first kind, b for the second) has both of its
/// derived slots wired into the leaf side, and the other dangles out.
fn fork_bads(k: &Pseudohex, roles: &RoleMap, inv: &Inventory) -> (bool, bool) {
    let hx = roles[0];
    let hy = roles[1];
    let ha = roles[3];
    let hb = roles[4];
    let in_leaves = |v: HVertex| hexagon_of(v) == hx || hexagon_of(v) == hy;
    let mut edge_inside_leaves = false;
    // per lower hexagon: (wired-to-leaf-side count, dangling count)
    let mut a_in = 0;
    let mut a_out = 0;
    let mut b_in = 0;
    let mut b_out = 0;
    for &(id, ends, _) in &inv.entries {
        let w = k.white(id);
        if ends == 2 && in_leaves(w.a) && in_leaves(w.b) {
            edge_inside_leaves = true;
        }
        for (this, other) in [(w.a, w.b), (w.b, w.a)] {
            let h = hexagon_of(this);
            if h == ha {
                if in_leaves(other) {
                    a_in += 1;
                } else if ends == 1 {
                    a_out += 1;
                }
            } else if h == hb {
                if in_leaves(other) {
                    b_in += 1;
                } else if ends == 1 {
                    b_out += 1;
                }
            }
        }
    }
    let abad = edge_inside_leaves && a_in == 2 && b_out == 2;
    let bbad = edge_inside_leaves && b_in == 2 && a_out == 2;
    (abad, bbad)
}

/// Outcome of a guided reduction, with table bookkeeping for the pipeline's
/// defect log.
#[derive(Debug, Clone)]
pub struct GuidedOutcome {
    pub plan: Option<ReductionPlan>,
    /// the case tables missed and the exhaustive fallback answered
    pub table_miss: bool,
    pub flags: ConfigurationFlags,
}

pub fn guided_reduce_member(
    k: &Pseudohex,
    member: &[HexId],
    kind: &MemberKind,
) -> Result<Option<ReductionPlan>, PseudohexError> {
    guided_reduce_member_detailed(k, member, kind).map(|o| o.plan)
}

pub fn guided_reduce_member_detailed(
    k: &Pseudohex,
    member: &[HexId],
    kind: &MemberKind,
) -> Result<GuidedOutcome, PseudohexError> {
    let flags = classify_configuration(k, member, kind)?;
    // Obstacle gates: an all-dangling inventory never reduces safely (the
    // terminal-count argument), so the verdict matches the oracle.
    let gated = match kind {
        MemberKind::Fork | MemberKind::ThreeEar => flags.l_obstacle,
        MemberKind::BigFork { .. } => flags.b_obstacle,
        _ => false,
    };
    if gated {
        return Ok(GuidedOutcome {
            plan: None,
            table_miss: false,
            flags,
        });
    }
    let verts = member_vertex_set(member);
    let internal_derived = k
        .whites()
        .any(|(_, w)| !w.real && verts.contains(&w.a) && verts.contains(&w.b));

    if let MemberKind::BigFork { j, .. } = kind {
        return big_fork_staged(k, member, *j, &flags, internal_derived);
    }

    for plan in candidate_plans(kind, &flags.roles, internal_derived) {
        let out = joint_reduce(k, &plan)?;
        if out.safe && out.correct {
            return Ok(GuidedOutcome {
                plan: Some(plan),
                table_miss: false,
                flags,
            });
        }
    }
    Ok(GuidedOutcome {
        plan: None,
        table_miss: false,
        flags,
    })
}

/// Staged big-fork reduction: reduce the outermost star by each of its 16
/// matchings (one-odd patterns first); when the stage is safe and clean,
/// recurse on the inner member; certify the combined plan; fall back to the
/// exhaustive oracle when the staging tables miss.
fn big_fork_staged(
    k: &Pseudohex,
    member: &[HexId],
    j: u8,
    flags: &ConfigurationFlags,
    _internal_derived: bool,
) -> Result<GuidedOutcome, PseudohexError> {
    let roles = &flags.roles;
    // template layout: fork 0..5, then stars of 4; outermost star is the
    // last block
    let star_base = 5 + 4 * (j as usize - 1);
    let star_roles: Vec<HexId> = roles[star_base..star_base + 4].to_vec();
    let inner_roles: Vec<HexId> = roles[..star_base].to_vec();
    let inner_kind = if j == 1 {
        MemberKind::Fork
    } else {
        MemberKind::BigFork {
            j: j - 1,
            attachment: BigForkAttachment::XB,
        }
    };
    let mut star_order: Vec<u8> = alloc::vec![0b0010, 0b0100, 0b1000, 0b0001];
    for m in 0u8..16 {
        if !star_order.contains(&m) {
            star_order.push(m);
        }
    }
    for mask in star_order {
        let star_plan: ReductionPlan = star_roles
            .iter()
            .enumerate()
            .map(|(i, &h)| (h, mask >> i & 1 == 1))
            .collect();
        let stage = joint_reduce(k, &star_plan)?;
        if !stage.safe || !stage.correct {
            continue;
        }
        // the inner member must still match its template after the stage
        let inner = match guided_reduce_member_detailed(&stage.result, &inner_roles, &inner_kind) {
            Ok(o) => o,
            Err(PseudohexError::TemplateMismatch(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Some(inner_plan) = inner.plan {
            let mut full = star_plan.clone();
            full.extend(inner_plan);
            let out = joint_reduce(k, &full)?;
            if out.safe && out.correct {
                return Ok(GuidedOutcome {
                    plan: Some(full),
                    table_miss: false,
                    flags: flags.clone(),
                });
            }
        }
    }
    // exhaustive fallback
    let set: BTreeSet<HexId> = member.iter().copied().collect();
    let plan = find_safe_reduction(k, &set)?;
    let miss = plan.is_some();
    Ok(GuidedOutcome {
        plan,
        table_miss: miss,
        flags: flags.clone(),
    })
}

/// Reduce the terminal state: the initial triangle (three mutually joined
/// hexagons) or its Delta-Y image (a single hexagon whose derived whites
/// pair its own corners). All plans are enumerated; safe-and-correct wins,
/// with a relaxed fallback that accepts any plan that closes every
/// component (the emission stays a valid double cover by the provenance
/// partition).
pub fn reduce_terminal(
    k: &Pseudohex,
) -> Result<Option<(ReductionPlan, super::ReductionOutcome)>, PseudohexError> {
    let hexes: BTreeSet<HexId> = k.hexagons().collect();
    if hexes.is_empty() || hexes.len() > 3 {
        return Err(PseudohexError::TemplateMismatch(alloc::format!(
            "terminal state has {} hexagons",
            hexes.len()
        )));
    }
    if let Some(plan) = find_safe_reduction(k, &hexes)? {
        let out = joint_reduce(k, &plan)?;
        return Ok(Some((plan, out)));
    }
    // relaxed: all components must close (no paths remain)
    let order: Vec<HexId> = hexes.iter().copied().collect();
    for mask in 0u32..(1u32 << order.len()) {
        let plan: ReductionPlan = order
            .iter()
            .enumerate()
            .map(|(i, &h)| (h, mask >> i & 1 == 1))
            .collect();
        let out = joint_reduce(k, &plan)?;
        if out.components.iter().all(|c| c.ends.is_none()) {
            return Ok(Some((plan, out)));
        }
    }
    Ok(None)
}

use crate::fork::member_template as _mt_check; // template layout cross-check below

#[allow(dead_code)]
fn template_star_layout_matches(j: u8) {
    // the staged reducer relies on the big-fork template putting the
    // outermost star at the tail of the label order
    let t = _mt_check(&MemberKind::BigFork {
        j,
        attachment: BigForkAttachment::XB,
    });
    debug_assert_eq!(t.graph.vertex_count(), 5 + 4 * j as usize);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::petersen;
    use crate::hexagon::HexagonGraph;
    use crate::pseudohex::Pseudohex;

    #[test]
    fn dot_member_on_petersen_reduces() {
        // Any Petersen vertex looks like a dot with three attachments once
        // the rest of the graph is intact.
        let g = petersen();
        let h = HexagonGraph::build(&g).unwrap();
        let k = Pseudohex::from_hexagon_graph(&h);
        let plan = guided_reduce_member(&k, &[0], &MemberKind::Dot)
            .unwrap()
            .expect("fresh dot reduces");
        let out = joint_reduce(&k, &plan).unwrap();
        assert!(out.safe && out.correct);
    }

    #[test]
    fn classification_requires_a_matching_template() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let inst = crate::pseudohex::synth::gen_proper_instance(&MemberKind::Subfork, &mut rng);
        assert!(classify_configuration(&inst.k, &inst.member, &MemberKind::Subfork).is_ok());
        // a fresh saturated vertex pair is not a subfork occurrence
        let g = petersen();
        let h = HexagonGraph::build(&g).unwrap();
        let k = Pseudohex::from_hexagon_graph(&h);
        assert!(matches!(
            classify_configuration(&k, &[0, 1], &MemberKind::Subfork),
            Err(PseudohexError::TemplateMismatch(_))
        ));
    }
}
