//! Canonical forms for small graphs (refinement plus individualization
//! backtracking) and exact isomorphism testing.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{CubicGraph, GraphError};

const MAX_N: usize = 64;

/// Canonical form: adjacency bit-rows under the canonical labeling.
/// Two graphs are isomorphic iff their canonical forms are equal.
pub fn canonical_form(g: &CubicGraph) -> Result<Vec<u64>, GraphError> {
    let n = g.vertex_count();
    if n > MAX_N {
        return Err(GraphError::SizeLimit(n));
    }
    let mut rows = vec![0u64; n];
    for &(a, b) in g.edges() {
        rows[a as usize] |= 1u64 << b;
        rows[b as usize] |= 1u64 << a;
    }
    Ok(canonical_rows(&rows))
}

pub fn is_isomorphic(g: &CubicGraph, h: &CubicGraph) -> Result<bool, GraphError> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let mut dg: Vec<usize> = (0..g.vertex_count() as u32).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.vertex_count() as u32).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

/// Canonical adjacency rows for an arbitrary bitmask adjacency.
pub fn canonical_rows(rows: &[u64]) -> Vec<u64> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let mut colors = initial_colors(rows);
    refine(rows, &mut colors);
    let mut best: Option<Vec<u64>> = None;
    search(rows, &colors, &mut best);
    best.expect("individualization search always reaches a discrete leaf")
}

fn initial_colors(rows: &[u64]) -> Vec<u32> {
    // Color by degree.
    let degs: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let mut uniq: Vec<u32> = degs.clone();
    uniq.sort_unstable();
    uniq.dedup();
    degs.iter()
        .map(|d| uniq.iter().position(|x| x == d).unwrap() as u32)
        .collect()
}

/// Iterated neighborhood-color refinement; deterministic renumbering.
///
/// Signatures pack (own color, up to 4 sorted neighbor colors) into a u128;
/// colors stay below 2^24 and degrees below 5 for every graph this crate
/// builds.
fn refine(rows: &[u64], colors: &mut Vec<u32>) {
    let n = rows.len();
    let mut sigs: Vec<u128> = vec![0; n];
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        for v in 0..n {
            let mut ns = [0u32; 4];
            let mut k = 0;
            let mut m = rows[v];
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                debug_assert!(k < 4);
                ns[k] = colors[u] + 1;
                k += 1;
            }
            ns.sort_unstable();
            let mut sig = colors[v] as u128;
            for c in ns {
                sig = (sig << 25) | c as u128;
            }
            sigs[v] = sig;
        }
        order.sort_unstable_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut changed = false;
        let mut c = 0u32;
        let mut prev_sig = sigs[order[0]];
        for (i, &v) in order.iter().enumerate() {
            if i > 0 && sigs[v] != prev_sig {
                c += 1;
                prev_sig = sigs[v];
            }
            if colors[v] != c {
                changed = true;
            }
            colors[v] = c;
        }
        if !changed {
            return;
        }
    }
}

fn search(rows: &[u64], colors: &[u32], best: &mut Option<Vec<u64>>) {
    let n = rows.len();
    // Find the smallest non-singleton color class.
    let mut cell: Option<(u32, Vec<usize>)> = None;
    let max_color = colors.iter().copied().max().unwrap_or(0);
    for c in 0..=max_color {
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == c).collect();
        if members.len() > 1 {
            cell = Some((c, members));
            break;
        }
    }
    match cell {
        None => {
            // Discrete: vertex with color c gets label c.
            let mut perm = vec![0usize; n];
            for v in 0..n {
                perm[v] = colors[v] as usize;
            }
            let form = relabel(rows, &perm);
            match best {
                Some(b) if *b <= form => {}
                _ => *best = Some(form),
            }
        }
        Some((_, members)) => {
            for &v in &members {
                let mut c2 = colors.to_vec();
                c2[v] = max_color + 1;
                refine(rows, &mut c2);
                // Renumber so refine's invariant (colors dense) holds.
                search(rows, &c2, best);
            }
        }
    }
}

fn relabel(rows: &[u64], perm: &[usize]) -> Vec<u64> {
    let n = rows.len();
    let mut out = vec![0u64; n];
    for v in 0..n {
        let mut m = rows[v];
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            out[perm[v]] |= 1u64 << perm[u];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{k33, k4, petersen, prism, CubicGraph};
    use alloc::collections::BTreeMap;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn permuted(g: &CubicGraph, seed: u64) -> CubicGraph {
        let n = g.vertex_count();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut rng);
        let mut h = CubicGraph::new(n);
        for &(a, b) in g.edges() {
            h.add_edge(perm[a as usize], perm[b as usize]).unwrap();
        }
        h
    }

    #[test]
    fn relabeled_graphs_are_isomorphic() {
        for seed in 0..20 {
            let g = petersen();
            let h = permuted(&g, seed);
            assert!(is_isomorphic(&g, &h).unwrap());
        }
    }

    #[test]
    fn different_graphs_are_not() {
        assert!(!is_isomorphic(&petersen(), &prism()).unwrap());
        assert!(!is_isomorphic(&k33(), &prism()).unwrap());
        assert!(!is_isomorphic(&k4(), &k33()).unwrap());
    }

    /// Brute-force permutation oracle on small graphs.
    fn iso_oracle(g: &CubicGraph, h: &CubicGraph) -> bool {
        let n = g.vertex_count();
        if n != h.vertex_count() || g.edge_count() != h.edge_count() {
            return false;
        }
        let mut perm: Vec<u32> = (0..n as u32).collect();
        loop {
            let ok = g
                .edges()
                .iter()
                .all(|&(a, b)| h.adjacent(perm[a as usize], perm[b as usize]));
            if ok {
                return true;
            }
            // next permutation
            let mut i = n.wrapping_sub(1);
            while i > 0 && perm[i - 1] >= perm[i] {
                i -= 1;
            }
            if i == 0 {
                return false;
            }
            let mut j = n - 1;
            while perm[j] <= perm[i - 1] {
                j -= 1;
            }
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }

    #[test]
    fn matches_permutation_oracle_on_small_graphs() {
        // same degree sequence, different girth: C6 vs two triangles
        let c6 =
            CubicGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        let tt = CubicGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap();
        assert!(!is_isomorphic(&c6, &tt).unwrap());
        assert_eq!(iso_oracle(&c6, &tt), false);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let g = crate::catalog::random_cubic_connected(8, &mut rng);
            let h = crate::catalog::random_cubic_connected(8, &mut rng);
            assert_eq!(is_isomorphic(&g, &h).unwrap(), iso_oracle(&g, &h));
        }
    }

    #[test]
    fn canonical_form_is_invariant_under_relabeling() {
        let mut forms = BTreeMap::new();
        for seed in 0..30u64 {
            let h = permuted(&k33(), seed);
            forms.insert(canonical_form(&h).unwrap(), ());
        }
        assert_eq!(forms.len(), 1);
    }
}
