use std::collections::VecDeque;

use serde::Serialize;

use super::{Scheme, StateId};
use crate::multiplicity::Multiplicity;

/// A cycle of the state graph through a state with at least two children.
/// Following the cycle gives a ray; every pass through `branching` leaves a
/// spare child, which is a tooth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombWitness {
    pub cycle: Vec<StateId>,
    pub branching: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub finite: bool,
    pub locally_finite: bool,
    pub rayless: bool,
    pub contains_comb: bool,
    pub nearly_finite: bool,
    /// A reachable cycle, when the unfolding contains a ray.
    pub ray_witness: Option<Vec<StateId>>,
    pub comb_witness: Option<CombWitness>,
    /// A state with an `ω` entry, when the unfolding is not locally finite.
    pub omega_witness: Option<StateId>,
}

/// Shortest cycle `q → … → q` in the state graph, listed from `q`.
fn cycle_through(s: &Scheme, q: StateId) -> Option<Vec<StateId>> {
    let mut prev = vec![usize::MAX; s.len()];
    let mut queue = VecDeque::new();
    for e in s.children(q) {
        if prev[e.state] == usize::MAX {
            prev[e.state] = q;
            queue.push_back(e.state);
        }
    }
    while let Some(p) = queue.pop_front() {
        if p == q {
            let mut cycle = vec![q];
            let mut cur = prev[q];
            while cur != q {
                cycle.push(cur);
                cur = prev[cur];
            }
            cycle[1..].reverse();
            return Some(cycle);
        }
        for e in s.children(p) {
            if prev[e.state] == usize::MAX {
                prev[e.state] = p;
                queue.push_back(e.state);
            }
        }
    }
    None
}

pub fn classify(s: &Scheme) -> ClassificationReport {
    let cyclic = s.cyclic_states();
    let omega_witness = s.states().find(|&q| s.children(q).iter().any(|e| e.mult.is_omega()));
    let ray_witness = s.states().find(|&q| cyclic[q]).and_then(|q| cycle_through(s, q));
    let comb_witness = s
        .states()
        .find(|&q| cyclic[q] && s.out_degree(q) >= Multiplicity::Finite(2))
        .map(|q| CombWitness {
            cycle: cycle_through(s, q).expect("cyclic state"),
            branching: q,
        });
    let locally_finite = omega_witness.is_none();
    let rayless = ray_witness.is_none();
    let contains_comb = comb_witness.is_some();
    ClassificationReport {
        finite: rayless && locally_finite,
        locally_finite,
        rayless,
        contains_comb,
        nearly_finite: locally_finite && !contains_comb,
        ray_witness,
        comb_witness,
        omega_witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make, TreeKind};
    use crate::scheme::{materialize, truncate, Scheme};

    #[test]
    fn library_trees() {
        let ray = classify(&make(&TreeKind::Ray).unwrap());
        assert!(!ray.rayless && ray.locally_finite && !ray.contains_comb && ray.nearly_finite);
        assert_eq!(ray.ray_witness, Some(vec![0]));

        let cat = classify(&make(&TreeKind::Caterpillar).unwrap());
        assert!(cat.contains_comb && !cat.nearly_finite);

        let binary = classify(&make(&TreeKind::DAry(2)).unwrap());
        assert!(binary.contains_comb);
        assert_eq!(binary.comb_witness.unwrap().branching, 0);
    }

    #[test]
    fn single_vertex_is_finite() {
        let s = Scheme::from_rules("A", &[("A", &[])]).unwrap();
        let r = classify(&s);
        assert!(r.finite && r.rayless && r.nearly_finite && !r.contains_comb);
    }

    #[test]
    fn omega_off_cycle_is_not_a_comb() {
        let s = Scheme::from_rules(
            "R",
            &[
                ("R", &[("R", Multiplicity::ONE), ("H", Multiplicity::ONE)]),
                ("H", &[("L", Multiplicity::Omega)]),
                ("L", &[]),
            ],
        )
        .unwrap();
        let r = classify(&s);
        assert!(!r.locally_finite && r.contains_comb && !r.nearly_finite);
        assert_eq!(r.omega_witness, Some(1));
    }

    #[test]
    fn rayless_iff_truncation_saturates() {
        let path = Scheme::from_rules("A", &[("A", &[("B", Multiplicity::ONE)]), ("B", &[])]).unwrap();
        let ray = make(&TreeKind::Ray).unwrap();
        for s in [path, ray] {
            let n = s.len() + 1;
            let deep = crate::scheme::unfold_to_depth(&truncate(&s, n), n).unwrap();
            let reaches_bottom = deep.tree.depths().contains(&n);
            assert_eq!(classify(&s).rayless, !reaches_bottom);
            let _ = materialize(&truncate(&s, n)).unwrap();
        }
    }
}
