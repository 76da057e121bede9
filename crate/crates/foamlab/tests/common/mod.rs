//! Independent oracles used by the acceptance suite. These deliberately
//! avoid the library's own cell complex and closure machinery: they work
//! on raw image arrays and certify their own termination.

use foamlab::permcore::{ElementTuple, Permutation};

/// Counts fixed circles of a lifted involution by flood fill over a
/// refined model of the fixed set: each fixed arc contributes a midpoint
/// node joined to the (necessarily fixed) branch-cycle nodes at its two
/// ends. Everything is recomputed from the raw monodromy images.
pub fn oval_count_oracle(degree: usize, monodromy: &[Permutation], t: &Permutation) -> usize {
    let n = monodromy.len();
    if n == 0 {
        assert_eq!(degree, 1, "only the trivial cover exists over the bare circle");
        return 1;
    }
    // Partial products as raw image tables: c[i][s-1] = C_i(s).
    let mut c: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
    c.push((1..=degree).collect());
    for p in monodromy {
        let prev = c.last().unwrap().clone();
        c.push(prev.into_iter().map(|x| p.apply(x)).collect());
    }

    // Cycle id of point s under p_j, computed by direct orbit walks.
    let cycle_ids: Vec<Vec<usize>> = monodromy
        .iter()
        .map(|p| {
            let mut id = vec![usize::MAX; degree];
            let mut next = 0;
            for start in 1..=degree {
                if id[start - 1] != usize::MAX {
                    continue;
                }
                let mut x = start;
                loop {
                    id[x - 1] = next;
                    x = p.apply(x);
                    if x == start {
                        break;
                    }
                }
                next += 1;
            }
            id
        })
        .collect();

    // Fixed arcs: t(s) = C_i^-1(s), i.e. C_i(t(s)) = s.
    let mut fixed_arcs = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for i in 1..=n {
        for s in 1..=degree {
            if c[i][t.apply(s) - 1] == s {
                fixed_arcs.push((i, s));
            }
        }
    }
    // Fixed branch cycles: the cycle of p_j containing a maps to the one
    // containing C_j(t(a)).
    let vertex_fixed = |j: usize, s: usize| -> bool {
        let image = c[j][t.apply(s) - 1];
        cycle_ids[j - 1][image - 1] == cycle_ids[j - 1][s - 1]
    };

    // Nodes: midpoints (one per fixed arc) then fixed vertices (j, cycle).
    let mut vertex_nodes: Vec<(usize, usize)> = Vec::new();
    let mut node_of_vertex = std::collections::HashMap::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); fixed_arcs.len()];
    for (m, &(i, s)) in fixed_arcs.iter().enumerate() {
        for j in [i, i % n + 1] {
            assert!(
                vertex_fixed(j, s),
                "fixed arc with a moving endpoint cycle"
            );
            let key = (j, cycle_ids[j - 1][s - 1]);
            let v = *node_of_vertex.entry(key).or_insert_with(|| {
                vertex_nodes.push(key);
                fixed_arcs.len() + vertex_nodes.len() - 1
            });
            adj[m].push(v);
        }
    }
    let total = fixed_arcs.len() + vertex_nodes.len();
    let mut vertex_adj: Vec<Vec<usize>> = vec![Vec::new(); vertex_nodes.len()];
    for (m, vs) in adj.iter().enumerate() {
        for &v in vs {
            vertex_adj[v - fixed_arcs.len()].push(m);
        }
    }

    // Flood fill.
    let mut seen = vec![false; total];
    let mut components = 0;
    for start in 0..total {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            let neighbours: &[usize] = if x < fixed_arcs.len() {
                &adj[x]
            } else {
                &vertex_adj[x - fixed_arcs.len()]
            };
            for &y in neighbours {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    components
}

/// Truncated coset-table oracle for the order of the group generated by
/// image tuples: scans products by word length over raw image arrays and
/// certifies closure (every discovered state times every generator is a
/// discovered state). Returns `None` when the table has not closed by
/// `max_len`.
pub fn group_order_oracle(gens: &[ElementTuple], max_len: usize) -> Option<usize> {
    fn key(t: &[Vec<usize>]) -> Vec<usize> {
        t.iter().flatten().copied().collect()
    }
    fn apply_gen(state: &[Vec<usize>], gen: &ElementTuple) -> Vec<Vec<usize>> {
        state
            .iter()
            .zip(gen.iter())
            .map(|(block, p)| block.iter().map(|&x| p.apply(x)).collect())
            .collect()
    }
    if gens.is_empty() {
        return Some(1);
    }
    let identity: Vec<Vec<usize>> = gens[0]
        .iter()
        .map(|p| (1..=p.degree()).collect())
        .collect();
    let mut states = std::collections::HashSet::new();
    states.insert(key(&identity));
    let mut layer = vec![identity];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for state in &layer {
            for g in gens {
                let image = apply_gen(state, g);
                if states.insert(key(&image)) {
                    next.push(image);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    if !layer.is_empty() {
        // Certify closure: the last layer may still have been growing.
        let mut frontier = false;
        for state in &layer {
            for g in gens {
                if !states.contains(&key(&apply_gen(state, g))) {
                    frontier = true;
                }
            }
        }
        if frontier {
            return None;
        }
    }
    Some(states.len())
}
