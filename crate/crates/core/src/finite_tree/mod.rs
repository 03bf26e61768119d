//! Explicit finite trees, rooted and unrooted.

mod code;
mod embed;

pub use code::{ahu_code, iso_rooted, iso_unrooted, CanonicalCode, CodeInterner};
pub use embed::{embed_rooted, embed_unrooted, enumerate_root_self_embeddings, remove_leaf, VertexMap};

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("expected exactly one parentless vertex, found {0}")]
    RootCount(usize),
    #[error("vertex {vertex} has parent {parent} out of range")]
    ParentOutOfRange { vertex: usize, parent: usize },
    #[error("vertex {0} does not reach the root")]
    Disconnected(usize),
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge ({0}, {1}) is out of range or a loop")]
    BadEdge(usize, usize),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("cannot remove the last vertex")]
    LastVertex,
    #[error("more than {0} self-embeddings")]
    CapExceeded(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

/// A finite tree with a distinguished root, stored as a parent array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedFiniteTree {
    parent: Vec<Option<usize>>,
    root: usize,
    children: Vec<Vec<usize>>,
}

impl RootedFiniteTree {
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(TreeError::RootCount(roots.len()));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(TreeError::ParentOutOfRange { vertex: v, parent: p });
                }
                children[p].push(v);
            }
        }
        let tree = RootedFiniteTree { parent, root, children };
        let reached = tree.bfs_order().len();
        if reached != n {
            let depth = tree.depths_partial();
            let lost = (0..n).find(|&v| depth[v].is_none()).unwrap_or(0);
            return Err(TreeError::Disconnected(lost));
        }
        Ok(tree)
    }

    /// Builds from per-vertex child lists with vertex 0 as the root.
    pub fn from_children(children: &[Vec<usize>]) -> Result<Self, TreeError> {
        let mut parent = vec![None; children.len()];
        for (p, cs) in children.iter().enumerate() {
            for &c in cs {
                if c >= children.len() {
                    return Err(TreeError::VertexOutOfRange(c));
                }
                parent[c] = Some(p);
            }
        }
        Self::new(parent)
    }

    pub fn single() -> Self {
        Self::new(vec![None]).expect("single vertex")
    }

    /// Path on `n` vertices rooted at an end.
    pub fn path(n: usize) -> Self {
        assert!(n >= 1);
        let parent = (0..n).map(|v| v.checked_sub(1)).collect();
        Self::new(parent).expect("path")
    }

    /// Root with `k` leaf children.
    pub fn star(k: usize) -> Self {
        let parent = (0..=k).map(|v| if v == 0 { None } else { Some(0) }).collect();
        Self::new(parent).expect("star")
    }

    /// Complete `d`-ary tree of the given depth.
    pub fn complete(d: usize, depth: usize) -> Self {
        let mut parent = vec![None];
        let mut level = vec![0usize];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &p in &level {
                for _ in 0..d {
                    parent.push(Some(p));
                    next.push(parent.len() - 1);
                }
            }
            level = next;
        }
        Self::new(parent).expect("complete tree")
    }

    /// Root with one path per entry of `legs`, of that many vertices each.
    pub fn spider(legs: &[usize]) -> Self {
        let mut parent = vec![None];
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                parent.push(Some(prev));
                prev = parent.len() - 1;
            }
        }
        Self::new(parent).expect("spider")
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.children[v] {
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
        order
    }

    fn depths_partial(&self) -> Vec<Option<usize>> {
        let mut depth = vec![None; self.len()];
        depth[self.root] = Some(0);
        for v in self.bfs_order() {
            for &c in &self.children[v] {
                depth[c] = depth[v].map(|d| d + 1);
            }
        }
        depth
    }

    pub fn depths(&self) -> Vec<usize> {
        self.depths_partial()
            .into_iter()
            .map(|d| d.expect("valid tree"))
            .collect()
    }

    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Subtree spanned by `v` and its descendants, rooted at `v`, together
    /// with the original index of each new vertex.
    pub fn subtree(&self, v: usize) -> (RootedFiniteTree, Vec<usize>) {
        let mut order = vec![v];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            order.extend(self.children[u].iter().copied());
            i += 1;
        }
        let mut index = vec![usize::MAX; self.len()];
        for (k, &u) in order.iter().enumerate() {
            index[u] = k;
        }
        let parent = order
            .iter()
            .map(|&u| if u == v { None } else { self.parent[u].map(|p| index[p]) })
            .collect();
        (RootedFiniteTree::new(parent).expect("subtree"), order)
    }

    /// One rooted subtree per child of the root.
    pub fn branches(&self) -> Vec<RootedFiniteTree> {
        self.children[self.root].iter().map(|&c| self.subtree(c).0).collect()
    }

    /// Subtree spanned by the vertices at depth at most `n`.
    pub fn truncate(&self, n: usize) -> RootedFiniteTree {
        let depth = self.depths();
        let keep: Vec<usize> = self.bfs_order().into_iter().filter(|&v| depth[v] <= n).collect();
        let mut index = vec![usize::MAX; self.len()];
        for (k, &v) in keep.iter().enumerate() {
            index[v] = k;
        }
        let parent = keep.iter().map(|&v| self.parent[v].map(|p| index[p])).collect();
        RootedFiniteTree::new(parent).expect("truncation")
    }

    pub fn unrooted(&self) -> FiniteTree {
        let edges = (0..self.len()).filter_map(|v| self.parent[v].map(|p| (p, v))).collect();
        FiniteTree::new(self.len(), edges).expect("rooted tree is a tree")
    }

    /// Number of neighbours of `v` in the underlying unrooted tree.
    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }
}

/// A finite unrooted tree given by its edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl FiniteTree {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() != n - 1 {
            return Err(TreeError::EdgeCount {
                expected: n - 1,
                found: edges.len(),
            });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(TreeError::BadEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let tree = FiniteTree { n, edges, adj };
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &tree.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if let Some(lost) = seen.iter().position(|s| !s) {
            return Err(TreeError::Disconnected(lost));
        }
        Ok(tree)
    }

    pub fn path(n: usize) -> Self {
        RootedFiniteTree::path(n).unrooted()
    }

    pub fn star(k: usize) -> Self {
        RootedFiniteTree::star(k).unrooted()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Same vertex indices, rooted at `r`.
    pub fn rooted_at(&self, r: usize) -> RootedFiniteTree {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([r]);
        seen[r] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        RootedFiniteTree::new(parent).expect("connected")
    }

    /// The one or two vertices minimizing eccentricity, found by peeling leaves.
    pub fn centers(&self) -> Vec<usize> {
        if self.n <= 2 {
            return (0..self.n).collect();
        }
        let mut degree: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut layer: Vec<usize> = (0..self.n).filter(|&v| degree[v] == 1).collect();
        let mut remaining = self.n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for &w in &self.adj[leaf] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }
}

/// Every parent array with `parent[v] < v` on `n` vertices, rooted at 0.
///
/// Each rooted shape on `n` vertices occurs at least once.
pub fn recursive_trees(n: usize) -> impl Iterator<Item = RootedFiniteTree> {
    assert!(n >= 1);
    let mut choice = vec![0usize; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let parent = (0..n).map(|v| if v == 0 { None } else { Some(choice[v]) }).collect();
        let tree = RootedFiniteTree::new(parent).expect("recursive tree");
        // odometer with digit v ranging over [0, v)
        let mut v = n;
        loop {
            if v <= 1 {
                done = true;
                break;
            }
            v -= 1;
            if choice[v] + 1 < v {
                choice[v] += 1;
                break;
            }
            choice[v] = 0;
        }
        Some(tree)
    })
}

/// One representative per isomorphism class of rooted trees on `n` vertices,
/// sorted by canonical code.
pub fn rooted_shapes(n: usize) -> Vec<RootedFiniteTree> {
    let mut seen = std::collections::BTreeMap::new();
    for t in recursive_trees(n) {
        seen.entry(ahu_code(&t)).or_insert(t);
    }
    seen.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles_and_forests() {
        assert_eq!(
            RootedFiniteTree::new(vec![None, Some(2), Some(1)]),
            Err(TreeError::Disconnected(1))
        );
        assert_eq!(RootedFiniteTree::new(vec![None, None]), Err(TreeError::RootCount(2)));
        assert!(FiniteTree::new(3, vec![(0, 1)]).is_err());
        assert!(FiniteTree::new(4, vec![(0, 1), (1, 0), (2, 3)]).is_err());
    }

    #[test]
    fn branches_of_small_trees() {
        assert!(RootedFiniteTree::single().branches().is_empty());
        let b = RootedFiniteTree::path(3).branches();
        assert_eq!(b.len(), 1);
        assert!(iso_rooted(&b[0], &RootedFiniteTree::path(2)));
        let b = RootedFiniteTree::star(3).branches();
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|t| t.len() == 1));
    }

    #[test]
    fn branches_partition_the_vertices() {
        let t = RootedFiniteTree::spider(&[3, 1, 2]);
        let total: usize = t.branches().iter().map(|b| b.len()).sum();
        assert_eq!(total + 1, t.len());
    }

    #[test]
    fn centers_of_paths() {
        assert_eq!(FiniteTree::path(5).centers(), vec![2]);
        assert_eq!(FiniteTree::path(4).centers(), vec![1, 2]);
        assert_eq!(RootedFiniteTree::single().unrooted().centers(), vec![0]);
    }

    #[test]
    fn truncate_keeps_shallow_vertices() {
        let t = RootedFiniteTree::complete(2, 3);
        assert_eq!(t.len(), 15);
        assert_eq!(t.truncate(1).len(), 3);
        assert_eq!(t.truncate(9).len(), 15);
    }
}
