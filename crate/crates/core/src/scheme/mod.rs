//! Finite presentations of (possibly infinite) rooted trees.
//!
//! A [`Scheme`] is a finite set of states with a root state; each state lists
//! its child states with multiplicities in `ℕ₊ ∪ {ω}`. Its unfolding is the
//! rooted tree whose root has the root state and where a vertex of state `q`
//! has, for every entry `(q′, m)` of `q`, exactly `m` children of state `q′`.

mod classify;
mod reroot;
mod unfold;

pub use classify::{classify, ClassificationReport, CombWitness};
pub use reroot::{reroot, reroot_with_inverse, Rerooted, VertexAddress};
pub(crate) use unfold::unfold_limited;
pub use unfold::{materialize, truncate, unfold_to_depth, Unfolding, MATERIALIZE_LIMIT};

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::decide;
use crate::finite_tree::RootedFiniteTree;
use crate::multiplicity::Multiplicity;

pub type StateId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("scheme has no states")]
    NoStates,
    #[error("root state {0} does not exist")]
    RootOutOfRange(StateId),
    #[error("state count {states} does not match {names} names")]
    NameCount { states: usize, names: usize },
    #[error("state name `{0}` is used twice")]
    DuplicateName(String),
    #[error("state `{state}` refers to missing state {target}")]
    TargetOutOfRange { state: String, target: StateId },
    #[error("state `{state}` lists `{target}` with multiplicity 0")]
    ZeroMultiplicity { state: String, target: String },
    #[error("state `{state}` lists `{target}` more than once")]
    DuplicateTarget { state: String, target: String },
    #[error("children of state `{0}` are not sorted by state index")]
    Unsorted(String),
    #[error("state `{0}` is not reachable from the root")]
    Unreachable(String),
    #[error("the unfolding is infinite")]
    InfiniteUnfolding,
    #[error("the unfolding has more than {0} vertices")]
    TooLarge(usize),
    #[error("address step {step} does not name a child of the current vertex")]
    BadAddress { step: usize },
}

/// One child slot of a state: `mult` children of state `state`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub state: StateId,
    pub mult: Multiplicity,
}

impl Entry {
    pub fn new(state: StateId, mult: Multiplicity) -> Self {
        Entry { state, mult }
    }
}

/// Unchecked scheme data, as produced by a parser or a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawScheme {
    pub names: Vec<String>,
    pub root: StateId,
    pub children: Vec<Vec<Entry>>,
}

impl RawScheme {
    /// Checks every scheme invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), SchemeError> {
        let n = self.children.len();
        if n == 0 {
            return Err(SchemeError::NoStates);
        }
        if self.names.len() != n {
            return Err(SchemeError::NameCount {
                states: n,
                names: self.names.len(),
            });
        }
        let mut seen = HashMap::new();
        for name in &self.names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(SchemeError::DuplicateName(name.clone()));
            }
        }
        if self.root >= n {
            return Err(SchemeError::RootOutOfRange(self.root));
        }
        for (q, entries) in self.children.iter().enumerate() {
            let state = || self.names[q].clone();
            for e in entries {
                if e.state >= n {
                    return Err(SchemeError::TargetOutOfRange {
                        state: state(),
                        target: e.state,
                    });
                }
                if e.mult.is_zero() {
                    return Err(SchemeError::ZeroMultiplicity {
                        state: state(),
                        target: self.names[e.state].clone(),
                    });
                }
            }
            for w in entries.windows(2) {
                if w[0].state == w[1].state {
                    return Err(SchemeError::DuplicateTarget {
                        state: state(),
                        target: self.names[w[0].state].clone(),
                    });
                }
            }
            let mut targets: Vec<StateId> = entries.iter().map(|e| e.state).collect();
            targets.sort_unstable();
            if let Some(w) = targets.windows(2).find(|w| w[0] == w[1]) {
                return Err(SchemeError::DuplicateTarget {
                    state: state(),
                    target: self.names[w[0]].clone(),
                });
            }
            if entries.windows(2).any(|w| w[0].state > w[1].state) {
                return Err(SchemeError::Unsorted(state()));
            }
        }
        let reach = reachable(self.root, &self.children);
        if let Some(q) = reach.iter().position(|r| !r) {
            return Err(SchemeError::Unreachable(self.names[q].clone()));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Sorts every child list and validates.
    pub fn into_scheme(mut self) -> Result<Scheme, SchemeError> {
        for entries in &mut self.children {
            entries.sort_by_key(|e| e.state);
        }
        self.validate()?;
        Ok(Scheme {
            names: self.names,
            root: self.root,
            children: self.children,
        })
    }

    /// Drops states unreachable from the root, keeping the relative order of
    /// the rest, then sorts and validates.
    pub fn prune(self) -> Result<Scheme, SchemeError> {
        let n = self.children.len();
        if self.root >= n {
            return Err(SchemeError::RootOutOfRange(self.root));
        }
        for (q, entries) in self.children.iter().enumerate() {
            if let Some(e) = entries.iter().find(|e| e.state >= n) {
                return Err(SchemeError::TargetOutOfRange {
                    state: self.names.get(q).cloned().unwrap_or_default(),
                    target: e.state,
                });
            }
        }
        let reach = reachable(self.root, &self.children);
        let mut index = vec![usize::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if reach[q] {
                index[q] = next;
                next += 1;
            }
        }
        let mut names = Vec::with_capacity(next);
        let mut children = Vec::with_capacity(next);
        for q in 0..n {
            if reach[q] {
                names.push(self.names[q].clone());
                children.push(
                    self.children[q]
                        .iter()
                        .map(|e| Entry::new(index[e.state], e.mult))
                        .collect(),
                );
            }
        }
        RawScheme {
            names,
            root: index[self.root],
            children,
        }
        .into_scheme()
    }
}

fn reachable(root: StateId, children: &[Vec<Entry>]) -> Vec<bool> {
    let mut seen = vec![false; children.len()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(q) = queue.pop_front() {
        for e in &children[q] {
            if e.state < children.len() && !seen[e.state] {
                seen[e.state] = true;
                queue.push_back(e.state);
            }
        }
    }
    seen
}

/// A validated scheme. Child lists are sorted by state index and every state
/// is reachable from the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scheme {
    names: Vec<String>,
    root: StateId,
    children: Vec<Vec<Entry>>,
}

impl Scheme {
    pub fn new(names: Vec<String>, root: StateId, children: Vec<Vec<Entry>>) -> Result<Scheme, SchemeError> {
        RawScheme { names, root, children }.into_scheme()
    }

    /// Builds from named rules; state order is rule order.
    ///
    /// ```
    /// use twintree::scheme::Scheme;
    /// use twintree::Multiplicity;
    ///
    /// let cat = Scheme::from_rules(
    ///     "S",
    ///     &[("S", &[("S", Multiplicity::ONE), ("L", Multiplicity::ONE)]), ("L", &[])],
    /// )
    /// .unwrap();
    /// assert_eq!(cat.len(), 2);
    /// ```
    pub fn from_rules(root: &str, rules: &[(&str, &[(&str, Multiplicity)])]) -> Result<Scheme, SchemeError> {
        let names: Vec<String> = rules.iter().map(|(n, _)| n.to_string()).collect();
        let index: HashMap<&str, usize> = rules.iter().enumerate().map(|(i, (n, _))| (*n, i)).collect();
        let lookup = |n: &str| index.get(n).copied().unwrap_or(usize::MAX);
        let children = rules
            .iter()
            .map(|(_, entries)| entries.iter().map(|(c, m)| Entry::new(lookup(c), *m)).collect())
            .collect();
        Scheme::new(names, lookup(root), children)
    }

    /// Scheme whose unfolding is the given finite tree: one state per vertex.
    pub fn from_rooted_tree(t: &RootedFiniteTree) -> Scheme {
        let order = t.bfs_order();
        let mut index = vec![0; t.len()];
        for (k, &v) in order.iter().enumerate() {
            index[v] = k;
        }
        let names = order.iter().map(|v| format!("v{v}")).collect();
        let children = order
            .iter()
            .map(|&v| {
                t.children(v)
                    .iter()
                    .map(|&c| Entry::new(index[c], Multiplicity::ONE))
                    .collect()
            })
            .collect();
        Scheme::new(names, 0, children).expect("tree presentation")
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn root(&self) -> StateId {
        self.root
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn children(&self, q: StateId) -> &[Entry] {
        &self.children[q]
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.children.len()
    }

    /// Total number of children of a vertex of state `q`.
    pub fn out_degree(&self, q: StateId) -> Multiplicity {
        self.children[q].iter().map(|e| e.mult).sum()
    }

    pub fn has_omega(&self) -> bool {
        self.children.iter().flatten().any(|e| e.mult.is_omega())
    }

    /// Always `Ok` for a constructed scheme; kept for symmetry with
    /// [`RawScheme::validate`].
    pub fn validate(&self) -> Result<(), SchemeError> {
        self.to_raw().validate()
    }

    pub fn to_raw(&self) -> RawScheme {
        RawScheme {
            names: self.names.clone(),
            root: self.root,
            children: self.children.clone(),
        }
    }

    /// Same states, re-rooted at state `q` and pruned to what `q` reaches.
    /// This is the branch hanging below any vertex of state `q`.
    pub fn rooted_at_state(&self, q: StateId) -> Scheme {
        RawScheme {
            root: q,
            ..self.to_raw()
        }
        .prune()
        .expect("sub-scheme of a valid scheme")
    }

    /// States on some cycle of the state graph.
    pub fn cyclic_states(&self) -> Vec<bool> {
        self.states()
            .map(|q| {
                let succ: Vec<StateId> = self.children[q].iter().map(|e| e.state).collect();
                let mut seen = vec![false; self.len()];
                let mut stack = succ;
                while let Some(p) = stack.pop() {
                    if p == q {
                        return true;
                    }
                    if !seen[p] {
                        seen[p] = true;
                        stack.extend(self.children[p].iter().map(|e| e.state));
                    }
                }
                false
            })
            .collect()
    }

    /// A name not yet used by this scheme, derived from `base`.
    pub(crate) fn fresh_name(taken: &[String], base: &str) -> String {
        if !taken.iter().any(|n| n == base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|c| !taken.iter().any(|n| n == c))
            .expect("unbounded supply of names")
    }
}

/// Outcome of comparing truncations depth by depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalIso {
    Pass,
    FailsAt(usize),
}

/// Smallest `n ≤ max_depth` at which the depth-`n` truncations are not
/// rooted-isomorphic.
pub fn local_iso_up_to(a: &Scheme, b: &Scheme, max_depth: usize) -> LocalIso {
    for n in 0..=max_depth {
        let verdict = decide::scheme_iso_rooted(&truncate(a, n), &truncate(b, n)).verdict;
        if verdict != decide::Verdict::Yes {
            return LocalIso::FailsAt(n);
        }
    }
    LocalIso::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make, TreeKind};
    use Multiplicity::{Finite, Omega};

    fn raw(names: &[&str], root: usize, children: Vec<Vec<(usize, Multiplicity)>>) -> RawScheme {
        RawScheme {
            names: names.iter().map(|s| s.to_string()).collect(),
            root,
            children: children
                .into_iter()
                .map(|es| es.into_iter().map(|(s, m)| Entry::new(s, m)).collect())
                .collect(),
        }
    }

    #[test]
    fn validate_examples() {
        assert!(raw(&["A"], 0, vec![vec![(0, Finite(1))]]).is_valid());
        let unreachable = raw(&["A", "B"], 0, vec![vec![], vec![]]);
        assert_eq!(unreachable.validate(), Err(SchemeError::Unreachable("B".into())));
        let dup = raw(&["A", "B"], 0, vec![vec![(1, Finite(1)), (1, Finite(2))], vec![]]);
        assert_eq!(
            dup.validate(),
            Err(SchemeError::DuplicateTarget {
                state: "A".into(),
                target: "B".into()
            })
        );
        let zero = raw(&["A", "B"], 0, vec![vec![(1, Finite(0))], vec![]]);
        assert!(matches!(zero.validate(), Err(SchemeError::ZeroMultiplicity { .. })));
        let unsorted = raw(
            &["A", "B", "C"],
            0,
            vec![vec![(2, Omega), (1, Finite(1))], vec![], vec![]],
        );
        assert_eq!(unsorted.validate(), Err(SchemeError::Unsorted("A".into())));
        assert!(unsorted.into_scheme().is_ok());
    }

    #[test]
    fn prune_drops_unreachable_states() {
        let s = raw(&["X", "A", "B"], 1, vec![vec![], vec![(2, Finite(2))], vec![]])
            .prune()
            .unwrap();
        assert_eq!(s.names(), &["A".to_string(), "B".to_string()]);
        assert_eq!(s.root(), 0);
    }

    #[test]
    fn local_iso_examples() {
        let ray = make(&TreeKind::Ray).unwrap();
        let binary = make(&TreeKind::DAry(2)).unwrap();
        let cat = make(&TreeKind::Caterpillar).unwrap();
        let cat1 = make(&TreeKind::CaterpillarMinus(1)).unwrap();
        assert_eq!(local_iso_up_to(&ray, &ray, 10), LocalIso::Pass);
        assert_eq!(local_iso_up_to(&ray, &binary, 10), LocalIso::FailsAt(1));
        assert_eq!(local_iso_up_to(&cat, &cat1, 10), LocalIso::FailsAt(1));
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let taken = vec!["A".to_string(), "A_1".to_string()];
        assert_eq!(Scheme::fresh_name(&taken, "A"), "A_2");
        assert_eq!(Scheme::fresh_name(&taken, "B"), "B");
    }
}
