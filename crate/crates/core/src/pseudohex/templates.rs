//! Member templates at the pseudohex level: role identification against the
//! member graphs, and the candidate plan orderings used by the guided
//! reducers.
//!
//! The plan orderings reconstruct the case analyses that drive each
//! member's reduction: they are keyed on where the derived white edges land
//! (inside the member, between which hexagons, or dangling out). Every
//! candidate is certified through an actual joint reduction before use, so
//! the orderings steer which certified plan is returned first; the obstacle
//! gates and the exhaustive fallback carry the correctness burden.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::fork::{member_template, MemberKind};
use crate::hexagon::hexagon_of;

use super::{HexId, Pseudohex, PseudohexError, ReductionPlan};

/// Assignment of template vertices to pseudohex hexagons: `roles[t]` is the
/// hexagon playing template vertex `t`.
pub type RoleMap = Vec<HexId>;

/// Internal skeleton data of a member occurrence.
pub struct MemberShape {
    pub internal: BTreeSet<(usize, usize)>,
    pub attachments: Vec<usize>,
    pub free_pairs: Vec<usize>,
}

pub fn member_shape(k: &Pseudohex, member: &[HexId]) -> Result<MemberShape, PseudohexError> {
    let pos: BTreeMap<HexId, usize> = member.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    for &h in member {
        if !k.is_alive(h) {
            return Err(PseudohexError::DeadHexagon(h));
        }
    }
    let mut internal = BTreeSet::new();
    let mut attachments = vec![0usize; member.len()];
    let mut derived_slots = vec![0usize; member.len()];
    for (_, w) in k.whites() {
        let (h1, h2) = (hexagon_of(w.a), hexagon_of(w.b));
        let p1 = pos.get(&h1).copied();
        let p2 = pos.get(&h2).copied();
        if w.real {
            match (p1, p2) {
                (Some(i), Some(j)) if i != j => {
                    internal.insert((i.min(j), i.max(j)));
                }
                (Some(i), None) => attachments[i] += 1,
                (None, Some(j)) => attachments[j] += 1,
                _ => {}
            }
        } else {
            if let Some(i) = p1 {
                derived_slots[i] += 1;
            }
            if let Some(j) = p2 {
                derived_slots[j] += 1;
            }
        }
    }
    // real pairs double-count each skeleton edge
    let attachments: Vec<usize> = attachments.iter().map(|&a| a / 2).collect();
    let free_pairs: Vec<usize> = derived_slots.iter().map(|&d| d / 2).collect();
    Ok(MemberShape {
        internal,
        attachments,
        free_pairs,
    })
}

/// Match the member hexagons onto the template graph by backtracking.
/// Non-big members must match adjacency and attachment counts exactly;
/// big-forks may carry extra internal edges and extra attachments.
pub fn match_member(
    k: &Pseudohex,
    member: &[HexId],
    kind: &MemberKind,
) -> Result<RoleMap, PseudohexError> {
    let t = member_template(kind);
    let n = t.graph.vertex_count();
    if member.len() != n {
        return Err(PseudohexError::TemplateMismatch(format!(
            "expected {n} hexagons, got {}",
            member.len()
        )));
    }
    let shape = member_shape(k, member)?;
    if let MemberKind::Dot = kind {
        if !(2..=3).contains(&shape.attachments[0]) {
            return Err(PseudohexError::TemplateMismatch(format!(
                "dot with {} attachments",
                shape.attachments[0]
            )));
        }
        return Ok(vec![member[0]]);
    }
    let big = matches!(kind, MemberKind::BigFork { .. });
    let mut t_adj = vec![BTreeSet::new(); n];
    for &(a, b) in t.graph.edges() {
        t_adj[a as usize].insert(b as usize);
        t_adj[b as usize].insert(a as usize);
    }
    let mandatory: Vec<usize> = (0..n)
        .map(|v| usize::from(t.anchors.contains(&(v as u32))))
        .collect();
    let mut m_adj = vec![BTreeSet::new(); n];
    for &(i, j) in &shape.internal {
        m_adj[i].insert(j);
        m_adj[j].insert(i);
    }
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !match_rec(MatchCtx {
        n,
        big,
        t_adj: &t_adj,
        m_adj: &m_adj,
        mandatory: &mandatory,
        shape: &shape,
    }, 0, &mut assign, &mut used)
    {
        return Err(PseudohexError::TemplateMismatch(format!(
            "{kind:?} does not match the member skeleton"
        )));
    }
    Ok(assign.iter().map(|&mi| member[mi]).collect())
}

struct MatchCtx<'a> {
    n: usize,
    big: bool,
    t_adj: &'a [BTreeSet<usize>],
    m_adj: &'a [BTreeSet<usize>],
    mandatory: &'a [usize],
    shape: &'a MemberShape,
}

fn match_rec(ctx: MatchCtx<'_>, tv: usize, assign: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    if tv == ctx.n {
        return true;
    }
    for mi in 0..ctx.n {
        if used[mi] {
            continue;
        }
        let deg_ok = if ctx.big {
            ctx.m_adj[mi].len() >= ctx.t_adj[tv].len()
        } else {
            ctx.m_adj[mi].len() == ctx.t_adj[tv].len()
        };
        let att_ok = if ctx.big {
            ctx.shape.attachments[mi] >= ctx.mandatory[tv]
        } else {
            ctx.shape.attachments[mi] == ctx.mandatory[tv]
        };
        if !deg_ok || !att_ok {
            continue;
        }
        let mut ok = true;
        for prev in 0..tv {
            let want = ctx.t_adj[tv].contains(&prev);
            let have = ctx.m_adj[mi].contains(&assign[prev]);
            if (want && !have) || (!ctx.big && !want && have) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        assign[tv] = mi;
        used[mi] = true;
        if match_rec(
            MatchCtx {
                n: ctx.n,
                big: ctx.big,
                t_adj: ctx.t_adj,
                m_adj: ctx.m_adj,
                mandatory: ctx.mandatory,
                shape: ctx.shape,
            },
            tv + 1,
            assign,
            used,
        ) {
            return true;
        }
        used[mi] = false;
        assign[tv] = usize::MAX;
    }
    false
}

/// Candidate plans for the non-staged kinds, in case-informed order.
/// `internal_derived` reports whether some derived white has both ends in
/// the member; the subfork and fork orderings branch on it.
pub fn candidate_plans(
    kind: &MemberKind,
    roles: &RoleMap,
    internal_derived: bool,
) -> Vec<ReductionPlan> {
    let bits_to_plan = |bits: &[u8]| -> ReductionPlan {
        roles
            .iter()
            .zip(bits)
            .map(|(&h, &b)| (h, b == 1))
            .collect()
    };
    match kind {
        MemberKind::Dot => vec![bits_to_plan(&[0]), bits_to_plan(&[1])],
        MemberKind::Subfork => {
            // roles: z, b — mixed pairs first when a derived edge joins them
            let cases: &[[u8; 2]] = if internal_derived {
                &[[1, 0], [0, 1], [0, 0], [1, 1]]
            } else {
                &[[0, 0], [1, 1], [0, 1], [1, 0]]
            };
            cases.iter().map(|c| bits_to_plan(c)).collect()
        }
        MemberKind::ThreeEar => (0u8..8).map(|m| bits_to_plan(&unpack(m, 3))).collect(),
        MemberKind::StarFork => {
            // roles: z', x', y', b' — one-odd-hexagon patterns first
            let mut order: Vec<u8> = vec![0b0010, 0b0100, 0b1000, 0b0001];
            for m in 0u8..16 {
                if !order.contains(&m) {
                    order.push(m);
                }
            }
            order.iter().map(|&m| bits_to_plan(&unpack(m, 4))).collect()
        }
        MemberKind::Fork => {
            // roles: x, y, z, a, b — stage over (a, b) first
            let ab_order: &[[u8; 2]] = if internal_derived {
                &[[0, 0], [1, 1], [0, 1], [1, 0]]
            } else {
                &[[0, 1], [1, 0], [0, 0], [1, 1]]
            };
            let mut out = Vec::with_capacity(32);
            for ab in ab_order {
                for m in 0u8..8 {
                    let xyz = unpack(m, 3);
                    out.push(bits_to_plan(&[xyz[0], xyz[1], xyz[2], ab[0], ab[1]]));
                }
            }
            out
        }
        MemberKind::PFork => (0u16..256)
            .map(|m| {
                let bits: Vec<u8> = (0..8).map(|i| (m >> i & 1) as u8).collect();
                bits_to_plan(&bits)
            })
            .collect(),
        MemberKind::BigFork { .. } => Vec::new(), // staged in the guided reducer
    }
}

fn unpack(mask: u8, n: usize) -> Vec<u8> {
    (0..n).map(|i| mask >> i & 1).collect()
}
