use std::collections::{BTreeSet, VecDeque};

use super::Verdict;
use crate::finite_tree::VertexMap;
use crate::matching::{transport_assign, transport_feasible, Transfer};
use crate::multiplicity::Multiplicity;
use crate::scheme::{reroot, unfold_to_depth, Scheme, SchemeError, StateId, Unfolding, VertexAddress};

/// How the children of a source state are sent into the children of a target
/// state. Entries are referred to by position in the stored child lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMatching {
    pub source: StateId,
    pub target: StateId,
    pub transfers: Vec<Transfer>,
}

/// Result of an embedding decision.
///
/// For unrooted questions `target_root` addresses the vertex of `b` that
/// receives the root of `a`; the relation and matchings then refer to
/// `reroot(b, target_root)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedCertificate {
    pub verdict: Verdict,
    pub target_root: VertexAddress,
    pub relation: Vec<(StateId, StateId)>,
    pub matchings: Vec<PairMatching>,
    pub failure_depth: Option<usize>,
    pub rounds: usize,
    pub note: Option<String>,
}

impl EmbedCertificate {
    pub(crate) fn unresolved(verdict: Verdict, note: String) -> Self {
        EmbedCertificate {
            verdict,
            target_root: VertexAddress::root(),
            relation: Vec::new(),
            matchings: Vec::new(),
            failure_depth: None,
            rounds: 0,
            note: Some(note),
        }
    }

    pub fn matching(&self, source: StateId, target: StateId) -> Option<&PairMatching> {
        self.matchings.iter().find(|m| m.source == source && m.target == target)
    }

    /// Re-checks a `Yes` certificate without rerunning the fixpoint: every
    /// pair reachable from the root pair has a matching that covers each
    /// source entry exactly, stays within target capacities and only uses
    /// related pairs.
    pub fn check(&self, a: &Scheme, b: &Scheme) -> Result<(), String> {
        if self.verdict != Verdict::Yes {
            return Ok(());
        }
        let b = reroot(b, &self.target_root).map_err(|e| e.to_string())?;
        let related = |p: (StateId, StateId)| self.relation.contains(&p);
        if !related((a.root(), b.root())) {
            return Err("root pair missing from relation".into());
        }
        let mut queue = VecDeque::from([(a.root(), b.root())]);
        let mut done = Vec::new();
        while let Some((q, r)) = queue.pop_front() {
            if done.contains(&(q, r)) {
                continue;
            }
            done.push((q, r));
            let m = self
                .matching(q, r)
                .ok_or_else(|| format!("no matching for ({}, {})", a.name(q), b.name(r)))?;
            let src = a.children(q);
            let tgt = b.children(r);
            let mut sent = vec![Multiplicity::ZERO; src.len()];
            let mut load = vec![Multiplicity::ZERO; tgt.len()];
            for t in &m.transfers {
                if t.source >= src.len() || t.target >= tgt.len() {
                    return Err("transfer names a missing entry".into());
                }
                let pair = (src[t.source].state, tgt[t.target].state);
                if !related(pair) {
                    return Err(format!(
                        "transfer uses unrelated pair ({}, {})",
                        a.name(pair.0),
                        b.name(pair.1)
                    ));
                }
                if t.amount.is_omega() && !tgt[t.target].mult.is_omega() {
                    return Err("ω copies sent into a finite entry".into());
                }
                sent[t.source] = sent[t.source] + t.amount;
                load[t.target] = load[t.target] + t.amount;
                queue.push_back(pair);
            }
            for (i, e) in src.iter().enumerate() {
                if sent[i] != e.mult {
                    return Err(format!("entry {i} of `{}` is not covered exactly", a.name(q)));
                }
            }
            for (j, e) in tgt.iter().enumerate() {
                if !e.mult.is_omega() && load[j] > e.mult {
                    return Err(format!("entry {j} of `{}` is over capacity", b.name(r)));
                }
            }
        }
        Ok(())
    }
}

fn pair_feasible(a: &Scheme, b: &Scheme, q: StateId, r: StateId, rel: &[Vec<bool>]) -> bool {
    let src = a.children(q);
    let tgt = b.children(r);
    let demands: Vec<Multiplicity> = src.iter().map(|e| e.mult).collect();
    let caps: Vec<Multiplicity> = tgt.iter().map(|e| e.mult).collect();
    transport_feasible(&demands, &caps, |i, j| rel[src[i].state][tgt[j].state])
}

/// Greatest fixpoint of "every child entry of `q` can be injected into the
/// children of `r` along surviving pairs", computed in synchronous rounds.
///
/// The relation after round `k` is exactly the set of pairs whose depth-`k`
/// truncations embed, so the round that removes the root pair is the exact
/// failure depth.
pub fn scheme_embed_rooted(a: &Scheme, b: &Scheme) -> EmbedCertificate {
    let mut rel = vec![vec![true; b.len()]; a.len()];
    let mut failure_depth = None;
    let mut rounds = 0;
    loop {
        let mut next = rel.clone();
        let mut changed = false;
        for q in a.states() {
            for r in b.states() {
                if rel[q][r] && !pair_feasible(a, b, q, r, &rel) {
                    next[q][r] = false;
                    changed = true;
                }
            }
        }
        rounds += 1;
        rel = next;
        if failure_depth.is_none() && !rel[a.root()][b.root()] {
            failure_depth = Some(rounds);
        }
        if !changed {
            break;
        }
    }
    let verdict = Verdict::from_bool(rel[a.root()][b.root()]);
    let relation: Vec<(StateId, StateId)> = a
        .states()
        .flat_map(|q| b.states().map(move |r| (q, r)))
        .filter(|&(q, r)| rel[q][r])
        .collect();
    let mut matchings = Vec::new();
    if verdict == Verdict::Yes {
        let mut built = BTreeSet::new();
        let mut queue = VecDeque::from([(a.root(), b.root())]);
        while let Some((q, r)) = queue.pop_front() {
            if !built.insert((q, r)) {
                continue;
            }
            let src = a.children(q);
            let tgt = b.children(r);
            let demands: Vec<Multiplicity> = src.iter().map(|e| e.mult).collect();
            let caps: Vec<Multiplicity> = tgt.iter().map(|e| e.mult).collect();
            let transfers = transport_assign(&demands, &caps, |i, j| rel[src[i].state][tgt[j].state])
                .expect("surviving pair is feasible");
            for t in &transfers {
                queue.push_back((src[t.source].state, tgt[t.target].state));
            }
            matchings.push(PairMatching {
                source: q,
                target: r,
                transfers,
            });
        }
        matchings.sort_by_key(|m| (m.source, m.target));
    }
    EmbedCertificate {
        verdict,
        target_root: VertexAddress::root(),
        relation,
        matchings,
        failure_depth,
        rounds,
        note: None,
    }
}

/// Unfolds a `Yes` certificate for `depth` levels into an explicit map from
/// the truncation of `a` into the truncation of the (re-rooted) target.
pub fn replay_embedding(
    a: &Scheme,
    b: &Scheme,
    cert: &EmbedCertificate,
    depth: usize,
) -> Result<(Unfolding, Unfolding, VertexMap), SchemeError> {
    let b = reroot(b, &cert.target_root)?;
    let ua = unfold_to_depth(a, depth)?;
    let ub = unfold_to_depth(&b, depth)?;
    let mut map = vec![None; ua.tree.len()];
    let mut queue = VecDeque::from([(ua.tree.root(), ub.tree.root())]);
    let depths = ua.tree.depths();
    while let Some((va, vb)) = queue.pop_front() {
        map[va] = Some(vb);
        if depths[va] == depth {
            continue;
        }
        let (q, r) = (ua.state_of[va], ub.state_of[vb]);
        let Some(m) = cert.matching(q, r) else { continue };
        // next free copy on each side
        let mut sent = vec![0u64; a.children(q).len()];
        let mut used = vec![0u64; b.children(r).len()];
        for t in &m.transfers {
            let amount = t.amount.finite().ok_or(SchemeError::InfiniteUnfolding)?;
            for _ in 0..amount {
                let child_a = ua.child(a, va, t.source, sent[t.source]);
                let child_b = ub.child(&b, vb, t.target, used[t.target]);
                sent[t.source] += 1;
                used[t.target] += 1;
                queue.push_back((child_a, child_b));
            }
        }
    }
    Ok((ua, ub, VertexMap::new(map)))
}
