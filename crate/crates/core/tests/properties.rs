use proptest::prelude::*;

use twintree::decide::oracle::truncation_iso;
use twintree::decide::{
    addresses_up_to, oracle_embed_trunc, replay_embedding, scheme_embed_rooted, scheme_iso_rooted, Verdict,
};
use twintree::dsl::{parse_scheme, serialize_scheme};
use twintree::finite_tree::{ahu_code, embed_rooted, iso_rooted, RootedFiniteTree};
use twintree::matching::{saturates_left, transport_assign, transport_feasible};
use twintree::random::{augment, random_rooted_tree, random_scheme, rng};
use twintree::scheme::{reroot, reroot_with_inverse, truncate, Scheme};
use twintree::Multiplicity;

fn scheme(states: usize, omega: f64, seed: u64) -> Scheme {
    random_scheme(states, 3, omega, seed).unwrap()
}

fn mult() -> impl Strategy<Value = Multiplicity> {
    prop_oneof![4 => (0u64..4).prop_map(Multiplicity::Finite), 1 => Just(Multiplicity::Omega)]
}

/// Feasibility by expanding every entry into unit copies. An `ω` demand is
/// stood in for by more copies than all finite capacities hold, so only an
/// `ω` capacity can absorb it.
fn unit_feasible(demands: &[Multiplicity], caps: &[Multiplicity], allowed: &[Vec<bool>]) -> bool {
    let finite: u64 = demands.iter().chain(caps).filter_map(|d| d.finite()).sum();
    let big = finite + 1;
    let size = |m: Multiplicity| m.finite().unwrap_or(big) as usize;
    let mut right = Vec::new();
    for (j, &c) in caps.iter().enumerate() {
        let n = if c.is_omega() {
            big as usize * (demands.len() + 1)
        } else {
            size(c)
        };
        right.extend(std::iter::repeat_n(j, n));
    }
    let mut adj = Vec::new();
    for (i, &d) in demands.iter().enumerate() {
        for _ in 0..size(d) {
            adj.push((0..right.len()).filter(|&k| allowed[i][right[k]]).collect::<Vec<_>>());
        }
    }
    saturates_left(&adj, right.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(states in 1usize..7, seed in any::<u64>()) {
        let s = scheme(states, 0.2, seed);
        let text = serialize_scheme("s", &s);
        let back = parse_scheme(&text).unwrap();
        prop_assert_eq!(scheme_iso_rooted(&s, &back).verdict, Verdict::Yes);
        prop_assert_eq!(serialize_scheme("s", &back), text);
    }

    #[test]
    fn reroot_then_back_is_the_same_tree(states in 1usize..6, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let s = scheme(states, 0.1, seed);
        let addrs = addresses_up_to(&s, 3);
        let a = pick.get(&addrs);
        let r = reroot_with_inverse(&s, a).unwrap();
        let back = reroot(&r.scheme, &r.inverse).unwrap();
        prop_assert_eq!(scheme_iso_rooted(&s, &back).verdict, Verdict::Yes);
    }

    #[test]
    fn truncations_nest(states in 1usize..6, seed in any::<u64>(), n in 0usize..6, m in 0usize..6) {
        let s = scheme(states, 0.2, seed);
        let nested = truncate(&truncate(&s, n), m);
        let direct = truncate(&s, n.min(m));
        prop_assert_eq!(scheme_iso_rooted(&nested, &direct).verdict, Verdict::Yes);
        prop_assert!(truncation_iso(&s, &direct, n.min(m)));
    }

    #[test]
    fn transport_matches_unit_matching(
        demands in prop::collection::vec(mult(), 0..4),
        caps in prop::collection::vec(mult(), 0..4),
        bits in prop::collection::vec(any::<bool>(), 16),
    ) {
        let allowed: Vec<Vec<bool>> = (0..demands.len())
            .map(|i| (0..caps.len()).map(|j| bits[i * 4 + j]).collect())
            .collect();
        let ok = transport_feasible(&demands, &caps, |i, j| allowed[i][j]);
        prop_assert_eq!(ok, unit_feasible(&demands, &caps, &allowed));
        let assigned = transport_assign(&demands, &caps, |i, j| allowed[i][j]);
        prop_assert_eq!(assigned.is_some(), ok);
        if let Some(ts) = assigned {
            let mut sent = vec![Multiplicity::ZERO; demands.len()];
            let mut load = vec![Multiplicity::ZERO; caps.len()];
            for t in &ts {
                prop_assert!(allowed[t.source][t.target]);
                prop_assert!(!t.amount.is_omega() || caps[t.target].is_omega());
                sent[t.source] = sent[t.source] + t.amount;
                load[t.target] = load[t.target] + t.amount;
            }
            prop_assert_eq!(&sent, &demands);
            for (j, c) in caps.iter().enumerate() {
                prop_assert!(c.is_omega() || load[j] <= *c);
            }
        }
    }

    #[test]
    fn embeddings_replay_level_by_level(states in 1usize..5, seed in any::<u64>()) {
        let a = scheme(states, 0.0, seed);
        let b = augment(&a, 3, &mut rng(seed ^ 1));
        let cert = scheme_embed_rooted(&a, &b);
        prop_assert_eq!(cert.verdict, Verdict::Yes);
        prop_assert_eq!(cert.check(&a, &b), Ok(()));
        if let Ok((ua, ub, map)) = replay_embedding(&a, &b, &cert, 3) {
            prop_assert!(map.is_rooted_embedding(&ua.tree, &ub.tree));
            prop_assert!(map.preserves_depth(&ua.tree, &ub.tree));
        }
    }

    #[test]
    fn embedding_survives_adding_children(states in 1usize..5, seed in any::<u64>(), other in any::<u64>()) {
        let a = scheme(states, 0.0, seed);
        let b = scheme(states, 0.0, other);
        let bigger = augment(&b, 3, &mut rng(other));
        if scheme_embed_rooted(&a, &b).verdict == Verdict::Yes {
            prop_assert_eq!(scheme_embed_rooted(&a, &bigger).verdict, Verdict::Yes);
        }
        prop_assert_eq!(scheme_embed_rooted(&b, &bigger).verdict, Verdict::Yes);
    }

    #[test]
    fn failure_depth_is_exact(states in 1usize..5, seed in any::<u64>(), other in any::<u64>()) {
        let a = scheme(states, 0.0, seed);
        let b = scheme(states, 0.0, other);
        let cert = scheme_embed_rooted(&a, &b);
        if let Some(d) = cert.failure_depth {
            prop_assert!(!oracle_embed_trunc(&a, &b, d).unwrap());
            prop_assert!(oracle_embed_trunc(&a, &b, d - 1).unwrap());
        }
    }

    #[test]
    fn iso_is_symmetric_and_implies_mutual_embedding(states in 1usize..5, seed in any::<u64>(), other in any::<u64>()) {
        let a = scheme(states, 0.2, seed);
        let b = scheme(states, 0.2, other);
        let ab = scheme_iso_rooted(&a, &b).verdict;
        prop_assert_eq!(ab, scheme_iso_rooted(&b, &a).verdict);
        if ab == Verdict::Yes {
            prop_assert_eq!(scheme_embed_rooted(&a, &b).verdict, Verdict::Yes);
            prop_assert_eq!(scheme_embed_rooted(&b, &a).verdict, Verdict::Yes);
        }
    }

    #[test]
    fn branches_partition_the_vertices(n in 1usize..30, seed in any::<u64>()) {
        let t = random_rooted_tree(n, seed).unwrap();
        let bs = t.branches();
        prop_assert_eq!(bs.len(), t.children(t.root()).len());
        prop_assert_eq!(bs.iter().map(RootedFiniteTree::len).sum::<usize>() + 1, n);
    }

    #[test]
    fn finite_mutual_embedding_is_iso(n in 1usize..10, seed in any::<u64>(), other in any::<u64>()) {
        let s = random_rooted_tree(n, seed).unwrap();
        let t = random_rooted_tree(n, other).unwrap();
        let both = embed_rooted(&s, &t).is_some() && embed_rooted(&t, &s).is_some();
        prop_assert_eq!(both, iso_rooted(&s, &t));
        prop_assert_eq!(iso_rooted(&s, &t), ahu_code(&s) == ahu_code(&t));
    }
}
