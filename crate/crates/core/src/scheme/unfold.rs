//! Truncation and materialization of unfoldings.

use std::collections::{HashMap, VecDeque};

use super::{Entry, RawScheme, Scheme, SchemeError, StateId};
use crate::finite_tree::{CanonicalCode, RootedFiniteTree};
use crate::multiplicity::Multiplicity;

/// Largest explicit tree [`materialize`] and [`unfold_to_depth`] will build.
pub const MATERIALIZE_LIMIT: usize = 2_000_000;

/// Acyclic scheme whose unfolding is the depth-`n` truncation of `s`.
///
/// States are pairs (original state, remaining depth), named `q_d`, and are
/// numbered in breadth-first discovery order from `(root, n)`.
pub fn truncate(s: &Scheme, n: usize) -> Scheme {
    let mut index: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut order = vec![(s.root(), n)];
    index.insert((s.root(), n), 0);
    let mut children: Vec<Vec<Entry>> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let (q, d) = order[i];
        let mut entries = Vec::new();
        if d > 0 {
            for e in s.children(q) {
                let key = (e.state, d - 1);
                let id = *index.entry(key).or_insert_with(|| {
                    order.push(key);
                    order.len() - 1
                });
                entries.push(Entry::new(id, e.mult));
            }
        }
        children.push(entries);
        i += 1;
    }
    let names = order.iter().map(|&(q, d)| format!("{}_{d}", s.name(q))).collect();
    RawScheme {
        names,
        root: 0,
        children,
    }
    .into_scheme()
    .expect("truncation of a valid scheme")
}

/// Explicit unfolding of a scheme down to some depth.
///
/// Vertices are numbered breadth-first; the children of a vertex are
/// consecutive, grouped by entry in stored order, copies in order.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub tree: RootedFiniteTree,
    pub state_of: Vec<StateId>,
    pub first_child: Vec<usize>,
    pub depth: usize,
}

impl Unfolding {
    /// Vertex for copy `copy` of entry `entry` below vertex `v`.
    pub fn child(&self, s: &Scheme, v: usize, entry: usize, copy: u64) -> usize {
        let q = self.state_of[v];
        let offset: u64 = s.children(q)[..entry]
            .iter()
            .map(|e| e.mult.finite().expect("finite multiplicities"))
            .sum();
        self.first_child[v] + (offset + copy) as usize
    }
}

/// Unfolds `s` down to depth `n`. Fails on an `ω` multiplicity met above
/// depth `n`, or when the result would exceed [`MATERIALIZE_LIMIT`].
pub fn unfold_to_depth(s: &Scheme, n: usize) -> Result<Unfolding, SchemeError> {
    unfold_limited(s, n, MATERIALIZE_LIMIT)
}

pub(crate) fn unfold_limited(s: &Scheme, n: usize, limit: usize) -> Result<Unfolding, SchemeError> {
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut state_of = vec![s.root()];
    let mut depth = vec![0usize];
    let mut first_child = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        first_child.push(parent.len());
        if depth[v] == n {
            continue;
        }
        for e in s.children(state_of[v]) {
            let k = e.mult.finite().ok_or(SchemeError::InfiniteUnfolding)?;
            for _ in 0..k {
                if parent.len() >= limit {
                    return Err(SchemeError::TooLarge(limit));
                }
                parent.push(Some(v));
                state_of.push(e.state);
                depth.push(depth[v] + 1);
                queue.push_back(parent.len() - 1);
            }
        }
    }
    Ok(Unfolding {
        tree: RootedFiniteTree::new(parent).expect("unfolding is a tree"),
        state_of,
        first_child,
        depth: n,
    })
}

/// Explicit unfolding of a finite scheme (no reachable cycle, no `ω`).
pub fn materialize(s: &Scheme) -> Result<RootedFiniteTree, SchemeError> {
    if s.has_omega() || s.cyclic_states().iter().any(|&c| c) {
        return Err(SchemeError::InfiniteUnfolding);
    }
    Ok(unfold_to_depth(s, s.len())?.tree)
}

impl Scheme {
    /// Canonical code of the unfolding of an acyclic scheme. Groups may carry
    /// `ω`. The code is written out in full, so keep this to small schemes.
    pub fn canonical_code(&self) -> Result<CanonicalCode, SchemeError> {
        if self.cyclic_states().iter().any(|&c| c) {
            return Err(SchemeError::InfiniteUnfolding);
        }
        let mut memo: Vec<Option<CanonicalCode>> = vec![None; self.len()];
        fn code(s: &Scheme, q: StateId, memo: &mut Vec<Option<CanonicalCode>>) -> CanonicalCode {
            if let Some(c) = &memo[q] {
                return c.clone();
            }
            let kids: Vec<(CanonicalCode, Multiplicity)> =
                s.children(q).iter().map(|e| (code(s, e.state, memo), e.mult)).collect();
            let c = CanonicalCode::from_children(kids);
            memo[q] = Some(c.clone());
            c
        }
        Ok(code(self, self.root(), &mut memo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make, TreeKind};
    use crate::finite_tree::{ahu_code, iso_rooted};
    use Multiplicity::{Finite, Omega};

    #[test]
    fn truncation_examples() {
        let ray = make(&TreeKind::Ray).unwrap();
        let t = materialize(&truncate(&ray, 3)).unwrap();
        assert!(iso_rooted(&t, &RootedFiniteTree::path(4)));
        let t = materialize(&truncate(&ray, 2)).unwrap();
        assert!(iso_rooted(&t, &RootedFiniteTree::path(3)));

        let binary = make(&TreeKind::DAry(2)).unwrap();
        assert_eq!(materialize(&truncate(&binary, 2)).unwrap().len(), 7);

        // root{leaf, v1}, v1{leaf, v2}
        let cat = make(&TreeKind::Caterpillar).unwrap();
        let t = materialize(&truncate(&cat, 2)).unwrap();
        let hand = RootedFiniteTree::from_children(&[vec![1, 2], vec![], vec![3, 4], vec![], vec![]]).unwrap();
        assert_eq!(t.len(), 5);
        assert!(iso_rooted(&t, &hand));
    }

    #[test]
    fn truncation_names_are_state_and_depth() {
        let ray = make(&TreeKind::Ray).unwrap();
        let t = truncate(&ray, 2);
        let names: Vec<&str> = t.names().iter().map(String::as_str).collect();
        assert_eq!(names, vec!["R_2", "R_1", "R_0"]);
    }

    #[test]
    fn truncation_keeps_omega() {
        let s = Scheme::from_rules("A", &[("A", &[("A", Omega)])]).unwrap();
        let t = truncate(&s, 2);
        assert!(t.has_omega());
        assert_eq!(materialize(&t), Err(SchemeError::InfiniteUnfolding));
        let code = t.canonical_code().unwrap();
        assert_eq!(code.to_string(), "((()^w)^w)");
    }

    #[test]
    fn materialize_examples() {
        let star = Scheme::from_rules("R", &[("R", &[("L", Finite(3))]), ("L", &[])]).unwrap();
        assert!(iso_rooted(&materialize(&star).unwrap(), &RootedFiniteTree::star(3)));
        let ray = make(&TreeKind::Ray).unwrap();
        assert_eq!(materialize(&ray), Err(SchemeError::InfiniteUnfolding));
    }

    #[test]
    fn materialize_is_breadth_first_in_stored_order() {
        let s = Scheme::from_rules(
            "R",
            &[
                ("R", &[("A", Finite(1)), ("B", Finite(2))]),
                ("A", &[("B", Finite(1))]),
                ("B", &[]),
            ],
        )
        .unwrap();
        let u = unfold_to_depth(&s, 5).unwrap();
        assert_eq!(u.state_of, vec![0, 1, 2, 2, 2]);
        assert_eq!(u.tree.parents(), &[None, Some(0), Some(0), Some(0), Some(1)]);
        assert_eq!(u.child(&s, 0, 1, 1), 3);
    }

    #[test]
    fn canonical_code_matches_materialization() {
        let cat = make(&TreeKind::Caterpillar).unwrap();
        for n in 0..6 {
            let t = truncate(&cat, n);
            assert_eq!(t.canonical_code().unwrap(), ahu_code(&materialize(&t).unwrap()));
        }
    }

    #[test]
    fn truncations_nest() {
        let cat = make(&TreeKind::Caterpillar).unwrap();
        for n in 0..5 {
            for m in 0..5 {
                let twice = truncate(&truncate(&cat, n), m);
                let once = truncate(&cat, n.min(m));
                assert_eq!(twice.canonical_code(), once.canonical_code());
            }
        }
    }
}
