use std::collections::BTreeSet;

/// Minimum-degree elimination ordering of a symmetric sparsity pattern.
///
/// `adj[v]` lists the neighbors of `v`. Returns `perm` with `perm[k]` the
/// original index eliminated at step `k`. Ties go to the lowest index, so the
/// ordering is deterministic.
pub fn minimum_degree(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut graph: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, nb)| {
            let mut nb: Vec<usize> = nb.iter().copied().filter(|&u| u != v).collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (graph[v].len(), v)).collect();
    let mut perm = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        perm.push(v);
        let clique = std::mem::take(&mut graph[v]);
        for &u in &clique {
            queue.remove(&(graph[u].len(), u));
            let merged = merge_excluding(&graph[u], &clique, v, u);
            graph[u] = merged;
            queue.insert((graph[u].len(), u));
        }
    }
    perm
}

/// Sorted union of `a` and `b`, without `drop` and `me`.
fn merge_excluding(a: &[usize], b: &[usize], drop: usize, me: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if x != drop && x != me {
            out.push(x);
        }
    }
    out
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![usize::MAX; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_permutation(p: &[usize]) -> bool {
        let mut s = p.to_vec();
        s.sort_unstable();
        s.iter().enumerate().all(|(i, &x)| i == x)
    }

    #[test]
    fn star_eliminates_leaves_first() {
        let n = 6;
        let mut adj = vec![Vec::new(); n];
        for leaf in 1..n {
            adj[0].push(leaf);
            adj[leaf].push(0);
        }
        let perm = minimum_degree(&adj);
        assert!(is_permutation(&perm));
        assert_eq!(perm[0], 1);
        assert!(perm[..n - 2].iter().all(|&v| v != 0));
    }

    #[test]
    fn path_graph_is_permutation() {
        let n = 10;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let mut v = Vec::new();
                if i > 0 {
                    v.push(i - 1);
                }
                if i + 1 < n {
                    v.push(i + 1);
                }
                v
            })
            .collect();
        let perm = minimum_degree(&adj);
        assert!(is_permutation(&perm));
        assert_eq!(perm[0], 0);
        let inv = invert_permutation(&perm);
        for (k, &p) in perm.iter().enumerate() {
            assert_eq!(inv[p], k);
        }
    }
}
