// Probe: oracle-vs-guided agreement rates and timing per member kind.
use dcdc_core::fork::{BigForkAttachment, MemberKind};
use dcdc_core::pseudohex::guided::{classify_configuration, guided_reduce_member_detailed};
use dcdc_core::pseudohex::synth::gen_proper_instance;
use dcdc_core::pseudohex::find_safe_reduction;
use rand::SeedableRng;

fn main() {
    let kinds = [
        MemberKind::Dot,
        MemberKind::Subfork,
        MemberKind::ThreeEar,
        MemberKind::StarFork,
        MemberKind::Fork,
        MemberKind::PFork,
        MemberKind::BigFork { j: 1, attachment: BigForkAttachment::XB },
        MemberKind::BigFork { j: 2, attachment: BigForkAttachment::XB },
    ];
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    for kind in kinds {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let t0 = std::time::Instant::now();
        let (mut some, mut none, mut disagree, mut miss, mut gated, mut hypo_fail) = (0, 0, 0, 0, 0, 0);
        for _ in 0..n {
            let inst = gen_proper_instance(&kind, &mut rng);
            let flags = classify_configuration(&inst.k, &inst.member, &kind).unwrap();
            let guided = guided_reduce_member_detailed(&inst.k, &inst.member, &kind).unwrap();
            let set: std::collections::BTreeSet<u32> = inst.member.iter().copied().collect();
            let oracle = find_safe_reduction(&inst.k, &set).unwrap();
            if guided.plan.is_some() != oracle.is_some() { disagree += 1; }
            if guided.plan.is_some() { some += 1 } else { none += 1 }
            if guided.table_miss { miss += 1 }
            let g = match kind {
                MemberKind::Fork | MemberKind::ThreeEar => flags.l_obstacle,
                MemberKind::BigFork { .. } => flags.b_obstacle,
                _ => false,
            };
            if g { gated += 1 }
            if flags.p_danger || flags.f_abad || flags.f_bbad { hypo_fail += 1 }
        }
        println!(
            "{kind:?}: some={some} none={none} disagree={disagree} miss={miss} gated={gated} danger/bad={hypo_fail} in {:?}",
            t0.elapsed()
        );
    }
}
