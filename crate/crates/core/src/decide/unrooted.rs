use std::collections::BTreeSet;

use super::{scheme_embed_rooted, scheme_iso_rooted, EmbedCertificate, IsoCertificate, Mode, TwinCertificate, Verdict};
use crate::finite_tree::{embed_unrooted, iso_unrooted};
use crate::multiplicity::Multiplicity;
use crate::scheme::{classify, materialize, reroot, Scheme, VertexAddress};

/// Addresses of depth at most `bound`, one per path of entries, always
/// taking copy 0. Sibling copies of one entry are swapped by an
/// automorphism, so this covers every rooting up to symmetry.
pub fn addresses_up_to(s: &Scheme, bound: usize) -> Vec<VertexAddress> {
    let mut out = vec![(VertexAddress::root(), s.root())];
    let mut i = 0;
    while i < out.len() {
        let (addr, q) = out[i].clone();
        if addr.len() < bound {
            for e in s.children(q) {
                let mut steps = addr.steps.clone();
                steps.push((e.state, 0));
                out.push((VertexAddress::new(steps), e.state));
            }
        }
        i += 1;
    }
    out.into_iter().map(|(a, _)| a).collect()
}

/// Set of vertex degrees occurring in the unfolding, read as an unrooted
/// tree. The root contributes its out-degree, every other vertex one more.
pub fn degree_profile(s: &Scheme) -> BTreeSet<Multiplicity> {
    let mut below = vec![false; s.len()];
    let mut stack: Vec<usize> = s.children(s.root()).iter().map(|e| e.state).collect();
    while let Some(q) = stack.pop() {
        if !below[q] {
            below[q] = true;
            stack.extend(s.children(q).iter().map(|e| e.state));
        }
    }
    let mut set = BTreeSet::from([s.out_degree(s.root())]);
    for q in s.states().filter(|&q| below[q]) {
        set.insert(s.out_degree(q) + Multiplicity::ONE);
    }
    set
}

fn is_finite(s: &Scheme) -> bool {
    classify(s).finite
}

/// Invariant-based reason why `a` cannot embed into `b` at all.
fn embed_refutation(a: &Scheme, b: &Scheme) -> Option<String> {
    let ca = classify(a);
    let cb = classify(b);
    if !ca.finite && cb.finite {
        return Some("source is infinite, target is finite".into());
    }
    if !ca.locally_finite && cb.locally_finite {
        return Some("source has a vertex of infinite degree, target does not".into());
    }
    if !ca.rayless && cb.rayless {
        return Some("source contains a ray, target is rayless".into());
    }
    if ca.contains_comb && !cb.contains_comb {
        return Some("source contains a comb, target does not".into());
    }
    let da = degree_profile(a).last().copied().expect("nonempty");
    let db = degree_profile(b).last().copied().expect("nonempty");
    if da > db {
        return Some(format!("maximum degree {da} exceeds {db}"));
    }
    None
}

/// Is `unfold(a)` a subgraph of `unfold(b)`, roots ignored?
///
/// `Yes` comes with the address in `b` that receives the root of `a`, found
/// among rootings of depth at most `bound`. `No` comes from an invariant, or
/// from an exact search when both unfoldings are finite.
pub fn scheme_embed_unrooted(a: &Scheme, b: &Scheme, bound: usize) -> EmbedCertificate {
    if let Some(reason) = embed_refutation(a, b) {
        return EmbedCertificate::unresolved(Verdict::No, reason);
    }
    if is_finite(a) && is_finite(b) {
        let ta = materialize(a).expect("finite").unrooted();
        let tb = materialize(b).expect("finite").unrooted();
        if embed_unrooted(&ta, &tb).is_none() {
            return EmbedCertificate::unresolved(Verdict::No, "exhaustive search on finite trees".into());
        }
    }
    for addr in addresses_up_to(b, bound) {
        let rb = reroot(b, &addr).expect("enumerated address");
        let mut cert = scheme_embed_rooted(a, &rb);
        if cert.verdict == Verdict::Yes {
            cert.target_root = addr;
            return cert;
        }
    }
    EmbedCertificate::unresolved(Verdict::Unknown, format!("no rooting of depth ≤ {bound} works"))
}

/// Unrooted mutual embeddability, three-valued.
pub fn twin_unrooted(a: &Scheme, b: &Scheme, bound: usize) -> TwinCertificate {
    let forward = scheme_embed_unrooted(a, b, bound);
    let backward = scheme_embed_unrooted(b, a, bound);
    let verdict = forward.verdict.and(backward.verdict);
    TwinCertificate {
        mode: Mode::Unrooted,
        forward,
        backward,
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnrootedIsoCertificate {
    pub verdict: Verdict,
    pub target_root: Option<VertexAddress>,
    pub iso: Option<IsoCertificate>,
    pub refutation: Option<String>,
}

impl UnrootedIsoCertificate {
    fn refuted(verdict: Verdict, reason: String) -> Self {
        UnrootedIsoCertificate {
            verdict,
            target_root: None,
            iso: None,
            refutation: Some(reason),
        }
    }
}

/// Unrooted isomorphism: `Yes` if some rooting of `b` of depth at most
/// `bound` is rooted-isomorphic to `a`.
pub fn scheme_iso_unrooted(a: &Scheme, b: &Scheme, bound: usize) -> UnrootedIsoCertificate {
    let ca = classify(a);
    let cb = classify(b);
    let flags = |c: &crate::scheme::ClassificationReport| (c.finite, c.locally_finite, c.rayless, c.contains_comb);
    if flags(&ca) != flags(&cb) {
        return UnrootedIsoCertificate::refuted(Verdict::No, "classifications differ".into());
    }
    if degree_profile(a) != degree_profile(b) {
        return UnrootedIsoCertificate::refuted(Verdict::No, "degree sets differ".into());
    }
    if ca.finite {
        let ta = materialize(a).expect("finite").unrooted();
        let tb = materialize(b).expect("finite").unrooted();
        if !iso_unrooted(&ta, &tb) {
            return UnrootedIsoCertificate::refuted(Verdict::No, "finite trees are not isomorphic".into());
        }
    }
    for addr in addresses_up_to(b, bound) {
        let rb = reroot(b, &addr).expect("enumerated address");
        let cert = scheme_iso_rooted(a, &rb);
        if cert.verdict == Verdict::Yes {
            return UnrootedIsoCertificate {
                verdict: Verdict::Yes,
                target_root: Some(addr),
                iso: Some(cert),
                refutation: None,
            };
        }
    }
    UnrootedIsoCertificate::refuted(Verdict::Unknown, format!("no rooting of depth ≤ {bound} matches"))
}
