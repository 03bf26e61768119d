use std::fmt;

use super::{Entry, RawScheme, Scheme, SchemeError, StateId};
use crate::multiplicity::Multiplicity;

/// Path from the root of an unfolding: each step picks a child entry (by
/// its state) and a copy index below that entry's multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddress {
    pub steps: Vec<(StateId, u64)>,
}

impl VertexAddress {
    pub fn root() -> Self {
        VertexAddress::default()
    }

    pub fn new(steps: Vec<(StateId, u64)>) -> Self {
        VertexAddress { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Walks the address and returns the visited states, root first.
    pub fn resolve(&self, s: &Scheme) -> Result<Vec<StateId>, SchemeError> {
        let mut path = vec![s.root()];
        for (step, &(child, copy)) in self.steps.iter().enumerate() {
            let cur = *path.last().expect("nonempty");
            let entry = s
                .children(cur)
                .iter()
                .find(|e| e.state == child)
                .ok_or(SchemeError::BadAddress { step })?;
            if Multiplicity::Finite(copy) >= entry.mult {
                return Err(SchemeError::BadAddress { step });
            }
            path.push(child);
        }
        Ok(path)
    }

    /// `name:copy/name:copy`, the form the CLI accepts.
    pub fn display_with<'a>(&'a self, s: &'a Scheme) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a VertexAddress, &'a Scheme);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for (i, (q, c)) in self.0.steps.iter().enumerate() {
                    if i > 0 {
                        f.write_str("/")?;
                    }
                    write!(f, "{}:{c}", self.1.name(*q))?;
                }
                Ok(())
            }
        }
        Show(self, s)
    }
}

/// A re-rooted scheme together with the address that leads back to the old
/// root.
#[derive(Clone, Debug)]
pub struct Rerooted {
    pub scheme: Scheme,
    pub inverse: VertexAddress,
}

/// Scheme whose unfolding is `unfold(s)` re-rooted at the addressed vertex.
pub fn reroot(s: &Scheme, a: &VertexAddress) -> Result<Scheme, SchemeError> {
    reroot_with_inverse(s, a).map(|r| r.scheme)
}

/// Builds the re-rooted scheme.
///
/// Each ancestor `p_i` of the new root becomes a context state: `p_i`'s own
/// children with the used slot decremented (the entry is dropped at zero,
/// `ω` stays `ω`), plus the context of its own parent. The new root gets the
/// addressed state's children plus the context of its parent.
pub fn reroot_with_inverse(s: &Scheme, a: &VertexAddress) -> Result<Rerooted, SchemeError> {
    let path = a.resolve(s)?;
    if a.is_empty() {
        return Ok(Rerooted {
            scheme: s.clone(),
            inverse: VertexAddress::root(),
        });
    }
    let k = a.len();
    let base = s.len();
    let mut names: Vec<String> = s.names().to_vec();
    let mut children: Vec<Vec<Entry>> = s.states().map(|q| s.children(q).to_vec()).collect();
    // contexts C_0..C_{k-1} get ids base..base+k, the new root base+k
    for (i, &p) in path[..k].iter().enumerate() {
        let next = path[i + 1];
        let mut entries: Vec<Entry> = s
            .children(p)
            .iter()
            .filter_map(|e| {
                if e.state != next {
                    return Some(*e);
                }
                let m = e.mult.decrement();
                (!m.is_zero()).then(|| Entry::new(e.state, m))
            })
            .collect();
        if i > 0 {
            entries.push(Entry::new(base + i - 1, Multiplicity::ONE));
        }
        let name = Scheme::fresh_name(&names, &format!("{}_up{}", s.name(p), k - i));
        names.push(name);
        children.push(entries);
    }
    let mut root_entries = s.children(path[k]).to_vec();
    root_entries.push(Entry::new(base + k - 1, Multiplicity::ONE));
    let root_name = Scheme::fresh_name(&names, &format!("{}_at", s.name(path[k])));
    names.push(root_name);
    children.push(root_entries);

    let context_names: Vec<String> = names[base..base + k].to_vec();
    let scheme = RawScheme {
        names,
        root: base + k,
        children,
    }
    .prune()?;
    let inverse = VertexAddress::new(
        context_names
            .iter()
            .rev()
            .map(|n| (scheme.state(n).expect("contexts stay reachable"), 0))
            .collect(),
    );
    Ok(Rerooted { scheme, inverse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make, TreeKind};
    use crate::decide::{scheme_iso_rooted, Verdict};
    use crate::finite_tree::{ahu_code, iso_rooted};
    use crate::scheme::{materialize, truncate, unfold_to_depth};

    #[test]
    fn reroot_ray_at_depth_one() {
        let ray = make(&TreeKind::Ray).unwrap();
        let r = reroot(&ray, &VertexAddress::new(vec![(0, 0)])).unwrap();
        // ray plus a single extra leaf at the root
        let expected = Scheme::from_rules(
            "X",
            &[
                ("X", &[("R", Multiplicity::ONE), ("L", Multiplicity::ONE)]),
                ("R", &[("R", Multiplicity::ONE)]),
                ("L", &[]),
            ],
        )
        .unwrap();
        assert_eq!(scheme_iso_rooted(&r, &expected).verdict, Verdict::Yes);
    }

    #[test]
    fn empty_address_is_identity() {
        let cat = make(&TreeKind::Caterpillar).unwrap();
        let r = reroot(&cat, &VertexAddress::root()).unwrap();
        assert_eq!(scheme_iso_rooted(&r, &cat).verdict, Verdict::Yes);
    }

    #[test]
    fn bad_addresses() {
        let cat = make(&TreeKind::Caterpillar).unwrap();
        let leaf = cat.state("L").unwrap();
        let spine = cat.state("S").unwrap();
        assert_eq!(
            reroot(&cat, &VertexAddress::new(vec![(spine, 1)])).unwrap_err(),
            SchemeError::BadAddress { step: 0 }
        );
        assert_eq!(
            reroot(&cat, &VertexAddress::new(vec![(leaf, 0), (leaf, 0)])).unwrap_err(),
            SchemeError::BadAddress { step: 1 }
        );
    }

    #[test]
    fn binary_tree_rerooted_matches_explicit_rerooting() {
        let binary = make(&TreeKind::DAry(2)).unwrap();
        let r = reroot(&binary, &VertexAddress::new(vec![(0, 1)])).unwrap();
        // old root keeps one binary child
        assert_eq!(r.len(), 3);
        let big = unfold_to_depth(&binary, 7).unwrap();
        // vertex 2 is the second child of the root
        let explicit = big.tree.unrooted().rooted_at(2);
        for d in 0..=5 {
            let lhs = materialize(&truncate(&r, d)).unwrap();
            assert!(iso_rooted(&lhs, &explicit.truncate(d)), "depth {d}");
        }
        assert_eq!(
            ahu_code(&materialize(&truncate(&r, 3)).unwrap()),
            ahu_code(&explicit.truncate(3))
        );
    }

    #[test]
    fn inverse_address_restores_the_root() {
        let cat = make(&TreeKind::CaterpillarMinus(2)).unwrap();
        let a = VertexAddress::new(vec![(1, 0), (2, 0), (3, 0)]);
        let there = reroot_with_inverse(&cat, &a).unwrap();
        let back = reroot(&there.scheme, &there.inverse).unwrap();
        assert_eq!(scheme_iso_rooted(&back, &cat).verdict, Verdict::Yes);
    }

    #[test]
    fn omega_slot_stays_omega() {
        let s = Scheme::from_rules("R", &[("R", &[("L", Multiplicity::Omega)]), ("L", &[])]).unwrap();
        let r = reroot(&s, &VertexAddress::new(vec![(1, 41)])).unwrap();
        let ctx = r.children(r.root()).iter().find(|e| e.state != r.root()).unwrap().state;
        assert_eq!(r.out_degree(ctx), Multiplicity::Omega);
    }
}
