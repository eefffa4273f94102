//! Bipartite maximum matching (Hopcroft-Karp).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Maximum matching size for a bipartite graph given as edges between
/// `left` 0-based indices and `right` 0-based indices.
pub fn max_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
    if left == 0 || right == 0 || edges.is_empty() {
        return 0;
    }
    let mut g = vec![Vec::new(); left];
    for &(a, b) in edges {
        g[a].push(b);
    }
    let mut match_r = vec![usize::MAX; right];
    let mut match_l = vec![usize::MAX; left];
    let mut result = 0;
    loop {
        // BFS layering from free left vertices.
        let mut dist = vec![usize::MAX; left];
        let mut queue = VecDeque::new();
        for l in 0..left {
            if match_l[l] == usize::MAX {
                dist[l] = 0;
                queue.push_back(l);
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &g[l] {
                let nl = match_r[r];
                if nl == usize::MAX {
                    found = true;
                } else if dist[nl] == usize::MAX {
                    dist[nl] = dist[l] + 1;
                    queue.push_back(nl);
                }
            }
        }
        if !found {
            break;
        }
        let mut augmented = 0;
        for l in 0..left {
            if match_l[l] == usize::MAX && augment(l, &g, &mut match_l, &mut match_r, &mut dist) {
                augmented += 1;
            }
        }
        if augmented == 0 {
            break;
        }
        result += augmented;
    }
    result
}

fn augment(
    l: usize,
    g: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &r in &g[l] {
        let nl = match_r[r];
        if nl == usize::MAX || (dist[nl] == dist[l] + 1 && augment(nl, g, match_l, match_r, dist)) {
            match_l[l] = r;
            match_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_matching_of_k33() {
        let edges: Vec<(usize, usize)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        assert_eq!(max_matching(3, 3, &edges), 3);
    }

    #[test]
    fn path_matching() {
        // path L0 - R0 - L1 - R1: edges (0,0),(1,0),(1,1)
        assert_eq!(max_matching(2, 2, &[(0, 0), (1, 0), (1, 1)]), 2);
        assert_eq!(max_matching(2, 1, &[(0, 0), (1, 0)]), 1);
    }
}
