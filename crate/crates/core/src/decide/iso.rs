use std::collections::HashMap;

use super::Verdict;
use crate::multiplicity::Multiplicity;
use crate::scheme::{Scheme, StateId};

/// Result of rooted isomorphism on unfoldings.
///
/// `classes_a[q]` and `classes_b[q]` give the class of each state in the
/// stable partition of the disjoint union. On `No`, `failure_depth` is the
/// smallest `n` whose depth-`n` truncations differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate {
    pub verdict: Verdict,
    pub classes_a: Vec<usize>,
    pub classes_b: Vec<usize>,
    pub failure_depth: Option<usize>,
    pub rounds: usize,
}

/// Per-class child totals of one state under a given class assignment.
fn signature(s: &Scheme, q: StateId, class: impl Fn(StateId) -> usize) -> Vec<(usize, Multiplicity)> {
    let mut sig: Vec<(usize, Multiplicity)> = Vec::new();
    for e in s.children(q) {
        let c = class(e.state);
        match sig.iter_mut().find(|(k, _)| *k == c) {
            Some((_, m)) => *m = *m + e.mult,
            None => sig.push((c, e.mult)),
        }
    }
    sig.sort();
    sig
}

/// Coarsest stable partition by child-class totals.
///
/// After round `k`, two states share a class iff their depth-`k` truncations
/// are isomorphic, so the round that first separates the roots is the exact
/// failure depth.
pub fn scheme_iso_rooted(a: &Scheme, b: &Scheme) -> IsoCertificate {
    let na = a.len();
    let total = na + b.len();
    let mut class = vec![0usize; total];
    let mut count = 1;
    let mut failure_depth = None;
    let mut rounds = 0;
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, Multiplicity)>), usize> = HashMap::new();
        let mut next = vec![0usize; total];
        for u in 0..total {
            let sig = if u < na {
                signature(a, u, |q| class[q])
            } else {
                signature(b, u - na, |q| class[na + q])
            };
            let fresh = ids.len();
            next[u] = *ids.entry((class[u], sig)).or_insert(fresh);
        }
        rounds += 1;
        let new_count = ids.len();
        class = next;
        if failure_depth.is_none() && class[a.root()] != class[na + b.root()] {
            failure_depth = Some(rounds);
        }
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let verdict = Verdict::from_bool(failure_depth.is_none());
    IsoCertificate {
        verdict,
        classes_a: class[..na].to_vec(),
        classes_b: class[na..].to_vec(),
        failure_depth,
        rounds,
    }
}

impl IsoCertificate {
    /// Re-checks a `Yes` certificate: roots share a class and all states of
    /// a class have equal per-class child totals. `No` certificates are
    /// checked against truncations by the oracle suites instead.
    pub fn check(&self, a: &Scheme, b: &Scheme) -> Result<(), String> {
        if self.verdict != Verdict::Yes {
            return Ok(());
        }
        if self.classes_a.len() != a.len() || self.classes_b.len() != b.len() {
            return Err("partition does not cover both state sets".into());
        }
        if self.classes_a[a.root()] != self.classes_b[b.root()] {
            return Err("roots are in different classes".into());
        }
        let mut seen: HashMap<usize, Vec<(usize, Multiplicity)>> = HashMap::new();
        let sides = [(a, &self.classes_a), (b, &self.classes_b)];
        for (s, classes) in sides {
            for q in s.states() {
                let sig = signature(s, q, |p| classes[p]);
                match seen.get(&classes[q]) {
                    Some(existing) if *existing != sig => {
                        return Err(format!("class {} is not stable at `{}`", classes[q], s.name(q)))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(classes[q], sig);
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make, star_of_paths_truncation, TreeKind};
    use crate::decide::oracle::truncation_iso;

    #[test]
    fn two_presentations_of_the_binary_tree() {
        let one = make(&TreeKind::DAry(2)).unwrap();
        let two = Scheme::from_rules(
            "X",
            &[
                ("X", &[("Y", Multiplicity::Finite(2))]),
                ("Y", &[("X", Multiplicity::Finite(1)), ("Y", Multiplicity::Finite(1))]),
            ],
        )
        .unwrap();
        let cert = scheme_iso_rooted(&one, &two);
        assert_eq!(cert.verdict, Verdict::Yes);
        assert_eq!(cert.check(&one, &two), Ok(()));
    }

    #[test]
    fn caterpillar_leaf_removal_fails_at_depth_one() {
        let cat = make(&TreeKind::Caterpillar).unwrap();
        let minus = make(&TreeKind::CaterpillarMinus(1)).unwrap();
        let cert = scheme_iso_rooted(&cat, &minus);
        assert_eq!(cert.verdict, Verdict::No);
        assert_eq!(cert.failure_depth, Some(1));
        assert!(!truncation_iso(&cat, &minus, 1));
        assert!(truncation_iso(&cat, &minus, 0));
    }

    #[test]
    fn star_of_paths_truncations_agree() {
        let a = star_of_paths_truncation(5, false).unwrap();
        let b = star_of_paths_truncation(5, true).unwrap();
        let cert = scheme_iso_rooted(&a, &b);
        assert_eq!(cert.verdict, Verdict::Yes);
        assert_eq!(cert.check(&a, &b), Ok(()));
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let ray = make(&TreeKind::Ray).unwrap();
        let binary = make(&TreeKind::DAry(2)).unwrap();
        let mut cert = scheme_iso_rooted(&ray, &ray);
        assert_eq!(cert.check(&ray, &ray), Ok(()));
        cert.classes_b = vec![cert.classes_a[0]];
        assert!(cert.check(&ray, &binary).is_err());
    }
}
