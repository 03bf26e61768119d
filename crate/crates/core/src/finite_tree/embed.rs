//! Embeddings (injective homomorphisms) between explicit finite trees.

use super::{FiniteTree, RootedFiniteTree, TreeError};
use crate::matching;

/// Partial map from source vertices to target vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexMap {
    map: Vec<Option<usize>>,
}

impl VertexMap {
    pub fn new(map: Vec<Option<usize>>) -> Self {
        VertexMap { map }
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.map.get(v).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn is_injective(&self) -> bool {
        let mut images: Vec<usize> = self.map.iter().flatten().copied().collect();
        let n = images.len();
        images.sort_unstable();
        images.dedup();
        images.len() == n
    }

    /// Total, injective, root to root, and parent links map to parent links.
    pub fn is_rooted_embedding(&self, s: &RootedFiniteTree, t: &RootedFiniteTree) -> bool {
        if self.map.len() != s.len() || !self.is_total() || !self.is_injective() {
            return false;
        }
        if self.get(s.root()) != Some(t.root()) {
            return false;
        }
        (0..s.len()).all(|v| match (s.parent(v), self.get(v)) {
            (Some(p), Some(img)) => img < t.len() && t.parent(img) == self.get(p),
            (None, Some(img)) => img < t.len(),
            _ => false,
        })
    }

    /// Every mapped vertex keeps its distance from the root.
    pub fn preserves_depth(&self, s: &RootedFiniteTree, t: &RootedFiniteTree) -> bool {
        let ds = s.depths();
        let dt = t.depths();
        (0..s.len()).all(|v| self.get(v).is_none_or(|w| ds[v] == dt[w]))
    }

    /// Total, injective, and every edge of `s` lands on an edge of `t`.
    pub fn is_embedding(&self, s: &FiniteTree, t: &FiniteTree) -> bool {
        self.map.len() == s.len()
            && self.is_total()
            && self.is_injective()
            && self.map.iter().flatten().all(|&w| w < t.len())
            && s.edges()
                .iter()
                .all(|&(u, v)| t.has_edge(self.get(u).unwrap(), self.get(v).unwrap()))
    }

    pub fn is_bijective_onto(&self, n: usize) -> bool {
        self.map.len() == n && self.is_total() && self.is_injective()
    }
}

/// `table[u][v]`: the subtree at `u` embeds into the subtree at `v` with
/// `u ↦ v`. Only pairs at equal depth are filled in.
fn feasibility(s: &RootedFiniteTree, t: &RootedFiniteTree) -> Vec<Vec<bool>> {
    let ds = s.depths();
    let dt = t.depths();
    let mut by_depth: Vec<Vec<usize>> = vec![Vec::new(); dt.iter().max().map_or(1, |d| d + 1)];
    for v in 0..t.len() {
        by_depth[dt[v]].push(v);
    }
    let mut table = vec![vec![false; t.len()]; s.len()];
    for u in s.bfs_order().into_iter().rev() {
        let Some(level) = by_depth.get(ds[u]) else { continue };
        for &v in level {
            let cu = s.children(u);
            let cv = t.children(v);
            if cu.len() > cv.len() {
                continue;
            }
            let adj: Vec<Vec<usize>> = cu
                .iter()
                .map(|&x| (0..cv.len()).filter(|&j| table[x][cv[j]]).collect())
                .collect();
            table[u][v] = matching::saturates_left(&adj, cv.len());
        }
    }
    table
}

/// Root-preserving embedding of `s` into `t`, if any.
///
/// Feasibility is decided bottom-up by bipartite matching of child subtrees;
/// the witness takes, child by child, the lowest-indexed target child that
/// still completes.
pub fn embed_rooted(s: &RootedFiniteTree, t: &RootedFiniteTree) -> Option<VertexMap> {
    let table = feasibility(s, t);
    if !table[s.root()][t.root()] {
        return None;
    }
    let mut map = vec![None; s.len()];
    let mut stack = vec![(s.root(), t.root())];
    while let Some((u, v)) = stack.pop() {
        map[u] = Some(v);
        let cu = s.children(u);
        let mut cv = t.children(v).to_vec();
        cv.sort_unstable();
        let adj: Vec<Vec<usize>> = cu
            .iter()
            .map(|&x| (0..cv.len()).filter(|&j| table[x][cv[j]]).collect())
            .collect();
        let picks = matching::lex_min_saturating(&adj, cv.len()).expect("feasible pair");
        for (&x, j) in cu.iter().zip(picks) {
            stack.push((x, cv[j]));
        }
    }
    Some(VertexMap::new(map))
}

/// Embedding of `s` into `t`: roots `s` at vertex 0 and tries every image.
pub fn embed_unrooted(s: &FiniteTree, t: &FiniteTree) -> Option<VertexMap> {
    if s.len() > t.len() {
        return None;
    }
    let rs = s.rooted_at(0);
    (0..t.len()).find_map(|w| embed_rooted(&rs, &t.rooted_at(w)))
}

/// All root-preserving self-embeddings, or `CapExceeded` when there are more
/// than `cap` of them.
pub fn enumerate_root_self_embeddings(t: &RootedFiniteTree, cap: usize) -> Result<Vec<VertexMap>, TreeError> {
    let table = feasibility(t, t);
    let order = t.bfs_order();
    let mut out = Vec::new();
    let mut map = vec![None; t.len()];
    let mut used = vec![false; t.len()];
    map[t.root()] = Some(t.root());
    used[t.root()] = true;
    extend(t, &table, &order, 1, &mut map, &mut used, &mut out, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    t: &RootedFiniteTree,
    table: &[Vec<bool>],
    order: &[usize],
    k: usize,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<VertexMap>,
    cap: usize,
) -> Result<(), TreeError> {
    if k == order.len() {
        if out.len() == cap {
            return Err(TreeError::CapExceeded(cap));
        }
        out.push(VertexMap::new(map.clone()));
        return Ok(());
    }
    let v = order[k];
    let parent_image = map[t.parent(v).expect("non-root")].expect("parent mapped first");
    for &w in t.children(parent_image) {
        if used[w] || !table[v][w] {
            continue;
        }
        map[v] = Some(w);
        used[w] = true;
        extend(t, table, order, k + 1, map, used, out, cap)?;
        used[w] = false;
        map[v] = None;
    }
    Ok(())
}

/// Deletes leaf `v`; surviving vertices keep their relative order.
pub fn remove_leaf(t: &FiniteTree, v: usize) -> Result<FiniteTree, TreeError> {
    if t.len() == 1 {
        return Err(TreeError::LastVertex);
    }
    if v >= t.len() {
        return Err(TreeError::VertexOutOfRange(v));
    }
    if t.degree(v) != 1 {
        return Err(TreeError::NotALeaf(v));
    }
    let shift = |u: usize| if u > v { u - 1 } else { u };
    let edges = t
        .edges()
        .iter()
        .filter(|&&(a, b)| a != v && b != v)
        .map(|&(a, b)| (shift(a), shift(b)))
        .collect();
    FiniteTree::new(t.len() - 1, edges)
}
