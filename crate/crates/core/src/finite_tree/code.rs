//! AHU canonical codes.

use std::collections::HashMap;
use std::fmt;

use super::{FiniteTree, RootedFiniteTree};
use crate::multiplicity::Multiplicity;

/// Canonical form of a rooted tree of finite depth.
///
/// Children are grouped by identical sub-code and the groups are kept sorted,
/// so equal codes mean isomorphic rooted trees. Group sizes live in `ℕ₊ ∪ {ω}`,
/// which lets the same type describe truncations of infinite-degree trees.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    groups: Vec<(CanonicalCode, Multiplicity)>,
}

impl CanonicalCode {
    pub fn leaf() -> Self {
        CanonicalCode::default()
    }

    /// Normalizes an arbitrary list of child codes: sorts, merges equal codes
    /// with saturating addition and drops zero counts.
    pub fn from_children(children: impl IntoIterator<Item = (CanonicalCode, Multiplicity)>) -> Self {
        let mut all: Vec<(CanonicalCode, Multiplicity)> = children.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        all.sort_by(|a, b| a.0.cmp(&b.0));
        let mut groups: Vec<(CanonicalCode, Multiplicity)> = Vec::with_capacity(all.len());
        for (code, m) in all {
            match groups.last_mut() {
                Some((last, count)) if *last == code => *count = *count + m,
                _ => groups.push((code, m)),
            }
        }
        CanonicalCode { groups }
    }

    pub fn groups(&self) -> &[(CanonicalCode, Multiplicity)] {
        &self.groups
    }

    /// Total number of children of the root.
    pub fn degree(&self) -> Multiplicity {
        self.groups.iter().map(|(_, m)| *m).sum()
    }
}

impl fmt::Display for CanonicalCode {
    /// Balanced parentheses; finite groups are written out in full and an
    /// `ω` group is written once followed by `^w`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (child, m) in &self.groups {
            match m {
                Multiplicity::Finite(k) => {
                    for _ in 0..*k {
                        write!(f, "{child}")?;
                    }
                }
                Multiplicity::Omega => write!(f, "{child}^w")?,
            }
        }
        f.write_str(")")
    }
}

pub fn ahu_code(t: &RootedFiniteTree) -> CanonicalCode {
    let mut codes: Vec<Option<CanonicalCode>> = vec![None; t.len()];
    for v in t.bfs_order().into_iter().rev() {
        let children = t
            .children(v)
            .iter()
            .map(|&c| (codes[c].take().expect("children first"), Multiplicity::ONE));
        codes[v] = Some(CanonicalCode::from_children(children.collect::<Vec<_>>()));
    }
    codes[t.root()].take().expect("root coded")
}

pub fn iso_rooted(a: &RootedFiniteTree, b: &RootedFiniteTree) -> bool {
    a.len() == b.len() && ahu_code(a) == ahu_code(b)
}

/// Roots both trees at their centers and compares codes.
pub fn iso_unrooted(a: &FiniteTree, b: &FiniteTree) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ca = a.centers();
    let cb = b.centers();
    if ca.len() != cb.len() {
        return false;
    }
    let code_a = ahu_code(&a.rooted_at(ca[0]));
    cb.iter().any(|&c| ahu_code(&b.rooted_at(c)) == code_a)
}

/// Hash-consing table for codes: each distinct normalized child multiset gets
/// a dense integer label. Labels from one table are comparable across trees.
#[derive(Debug, Default)]
pub struct CodeInterner {
    table: HashMap<Vec<(u32, Multiplicity)>, u32>,
}

impl CodeInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, children: impl IntoIterator<Item = (u32, Multiplicity)>) -> u32 {
        let mut all: Vec<(u32, Multiplicity)> = children.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        all.sort_by_key(|&(label, _)| label);
        let mut key: Vec<(u32, Multiplicity)> = Vec::with_capacity(all.len());
        for (label, m) in all {
            match key.last_mut() {
                Some((last, count)) if *last == label => *count = *count + m,
                _ => key.push((label, m)),
            }
        }
        let next = self.table.len() as u32;
        *self.table.entry(key).or_insert(next)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Label of the root of an explicit tree.
    pub fn label_tree(&mut self, t: &RootedFiniteTree) -> u32 {
        let mut labels = vec![0u32; t.len()];
        for v in t.bfs_order().into_iter().rev() {
            let children: Vec<(u32, Multiplicity)> =
                t.children(v).iter().map(|&c| (labels[c], Multiplicity::ONE)).collect();
            labels[v] = self.intern(children);
        }
        labels[t.root()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All bijections `a -> b` that preserve the root and parent links.
    fn brute_iso(a: &RootedFiniteTree, b: &RootedFiniteTree) -> bool {
        if a.len() != b.len() {
            return false;
        }
        perms::all(a.len())
            .into_iter()
            .any(|p| p[a.root()] == b.root() && (0..a.len()).all(|v| a.parent(v).map(|x| p[x]) == b.parent(p[v])))
    }

    fn brute_iso_unrooted(a: &FiniteTree, b: &FiniteTree) -> bool {
        a.len() == b.len()
            && perms::all(a.len())
                .into_iter()
                .any(|p| a.edges().iter().all(|&(u, v)| b.has_edge(p[u], p[v])))
    }

    mod perms {
        pub fn all(n: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur: Vec<usize> = (0..n).collect();
            heap(n, &mut cur, &mut out);
            out
        }

        fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(cur.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, cur, out);
                if k.is_multiple_of(2) {
                    cur.swap(i, k - 1);
                } else {
                    cur.swap(0, k - 1);
                }
            }
        }
    }

    #[test]
    fn code_strings() {
        assert_eq!(ahu_code(&RootedFiniteTree::single()).to_string(), "()");
        assert_eq!(ahu_code(&RootedFiniteTree::path(3)).to_string(), "((()))");
        assert_eq!(ahu_code(&RootedFiniteTree::star(2)).to_string(), "(()())");
    }

    #[test]
    fn omega_groups_render_once() {
        let c = CanonicalCode::from_children([
            (CanonicalCode::leaf(), Multiplicity::Omega),
            (CanonicalCode::leaf(), Multiplicity::Finite(3)),
        ]);
        assert_eq!(c.to_string(), "(()^w)");
        assert_eq!(c.degree(), Multiplicity::Omega);
    }

    #[test]
    fn three_vertex_rooted_trees() {
        let path = RootedFiniteTree::path(3);
        let cherry = RootedFiniteTree::star(2);
        assert!(iso_rooted(&path, &path));
        assert!(!iso_rooted(&cherry, &path));
        assert_eq!(brute_iso(&cherry, &path), iso_rooted(&cherry, &path));
        assert!(brute_iso(&path, &path));
    }

    #[test]
    fn five_vertex_unrooted_trees_are_distinct() {
        let trees = [
            FiniteTree::path(5),
            FiniteTree::star(4),
            FiniteTree::new(5, vec![(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap(),
        ];
        for i in 0..3 {
            for j in 0..3 {
                let expected = brute_iso_unrooted(&trees[i], &trees[j]);
                assert_eq!(expected, i == j);
                assert_eq!(iso_unrooted(&trees[i], &trees[j]), expected);
            }
        }
        assert!(iso_unrooted(&FiniteTree::path(4), &FiniteTree::path(4)));
        assert!(!iso_unrooted(&FiniteTree::path(4), &FiniteTree::star(3)));
    }

    #[test]
    fn iso_matches_brute_force_on_small_shapes() {
        for n in 1..=6usize {
            let trees: Vec<RootedFiniteTree> = super::super::recursive_trees(n).collect();
            // sample pairs to keep the factorial search cheap
            for (i, a) in trees.iter().enumerate().step_by(7) {
                for b in trees.iter().skip(i % 5).step_by(11) {
                    assert_eq!(iso_rooted(a, b), brute_iso(a, b));
                }
            }
        }
    }

    #[test]
    fn shape_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| super::super::rooted_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115]);
    }

    #[test]
    fn interner_agrees_with_codes() {
        let mut table = CodeInterner::new();
        let a = table.label_tree(&RootedFiniteTree::spider(&[1, 2]));
        let b = table.label_tree(&RootedFiniteTree::spider(&[2, 1]));
        let c = table.label_tree(&RootedFiniteTree::spider(&[3]));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
