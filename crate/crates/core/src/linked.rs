//! Enumeration of connected vertex subsets of a graph with at most 64
//! vertices, each subset produced exactly once.
//!
//! Every branch decides one frontier vertex: include it (and widen the
//! frontier by its neighbors) or ban it for the remaining siblings.

/// Calls `visit(set, size)` for every connected set that contains `root`,
/// avoids `banned`, and has at most `max_size` members. When `visit` returns
/// `false` no superset of `set` is explored.
pub fn for_each_connected<F>(adj: &[u64], root: u32, banned: u64, max_size: u32, mut visit: F)
where
    F: FnMut(u64, u32) -> bool,
{
    debug_assert!(banned >> root & 1 == 0);
    if max_size == 0 {
        return;
    }
    let start = 1u64 << root;
    extend(
        adj,
        start,
        adj[root as usize] & !banned & !start,
        banned,
        1,
        max_size,
        &mut visit,
    );
}

fn extend<F>(
    adj: &[u64],
    set: u64,
    mut cand: u64,
    mut banned: u64,
    size: u32,
    max_size: u32,
    visit: &mut F,
) where
    F: FnMut(u64, u32) -> bool,
{
    if !visit(set, size) || size == max_size {
        return;
    }
    while cand != 0 {
        let v = cand.trailing_zeros();
        let bit = 1u64 << v;
        cand &= !bit;
        let next = (cand | adj[v as usize]) & !set & !bit & !banned;
        extend(adj, set | bit, next, banned, size + 1, max_size, visit);
        banned |= bit;
    }
}

/// Connected sets whose smallest vertex is `root`.
pub fn for_each_connected_with_min<F>(adj: &[u64], root: u32, max_size: u32, visit: F)
where
    F: FnMut(u64, u32) -> bool,
{
    let below = (1u64 << root) - 1;
    for_each_connected(adj, root, below, max_size, visit);
}

/// Distance-at-most-`k` adjacency over all `2^d` vertices, for `d <= 6`.
pub fn cube_adjacency(d: u32, k: u32) -> Vec<u64> {
    assert!(d <= 6);
    let n = 1u32 << d;
    (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && (u ^ v).count_ones() <= k)
                .fold(0u64, |m, u| m | 1 << u)
        })
        .collect()
}
