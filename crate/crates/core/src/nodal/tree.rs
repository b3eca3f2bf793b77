//! Canonical codes for rooted and unrooted trees (AHU encoding).

fn is_tree(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return false;
    }
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>();
    if edges != 2 * (n - 1) {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut children: Vec<String> =
        adj[v].iter().filter(|&&w| w != parent).map(|&w| encode(adj, w, v)).collect();
    children.sort();
    let mut s = String::with_capacity(2 + children.iter().map(String::len).sum::<usize>());
    s.push('(');
    for c in children {
        s.push_str(&c);
    }
    s.push(')');
    s
}

/// Canonical code of the tree rooted at `root`; `None` if `adj` is not a
/// tree.
pub fn rooted_code(adj: &[Vec<usize>], root: usize) -> Option<String> {
    is_tree(adj).then(|| encode(adj, root, usize::MAX))
}

/// Canonical code of an unrooted tree: the smallest rooted code over its
/// centres. `None` if `adj` is not a tree.
pub fn unrooted_code(adj: &[Vec<usize>]) -> Option<String> {
    if !is_tree(adj) {
        return None;
    }
    let n = adj.len();
    if n <= 2 {
        return Some(encode(adj, 0, usize::MAX));
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                if degree[w] > 1 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            degree[v] = 0;
        }
        layer = next;
    }
    layer.iter().map(|&c| encode(adj, c, usize::MAX)).min()
}

/// Adjacency lists from an edge list.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_codes_agree_under_relabeling() {
        let a = adjacency(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = adjacency(4, &[(3, 0), (0, 2), (2, 1)]);
        assert_eq!(unrooted_code(&a), unrooted_code(&b));
        let star = adjacency(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_ne!(unrooted_code(&a), unrooted_code(&star));
    }

    #[test]
    fn rejects_non_trees() {
        let cycle = adjacency(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(unrooted_code(&cycle).is_none());
        let split = adjacency(4, &[(0, 1), (2, 3)]);
        assert!(rooted_code(&split, 0).is_none());
    }

    #[test]
    fn single_node() {
        assert_eq!(unrooted_code(&[vec![]]).unwrap(), "()");
    }
}
