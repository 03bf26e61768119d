//! Decision procedures on scheme unfoldings.
//!
//! Rooted isomorphism and rooted embedding are decided exactly: the first by
//! partition refinement over the disjoint union of both state sets, the second
//! by a greatest fixpoint over state pairs with capacitated matching. Unrooted
//! questions are answered by searching re-rootings up to a depth bound and
//! refuting with invariants, so they may come back [`Verdict::Unknown`].
//!
//! Every decision returns a certificate that can be re-checked on its own.

mod embed;
mod iso;
pub mod oracle;
mod unrooted;

pub use embed::{replay_embedding, scheme_embed_rooted, EmbedCertificate, PairMatching};
pub use iso::{scheme_iso_rooted, IsoCertificate};
pub use oracle::oracle_embed_trunc;
pub use unrooted::{
    addresses_up_to, degree_profile, scheme_embed_unrooted, scheme_iso_unrooted, twin_unrooted, UnrootedIsoCertificate,
};

use std::fmt;

use serde::Serialize;

use crate::scheme::Scheme;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    /// Three-valued conjunction: any `No` wins, then any `Unknown`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        }
    }

    /// Process exit code: 0 yes, 1 no, 2 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 1,
            Verdict::Unknown => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Whether roots must map to roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rooted,
    Unrooted,
}

/// Embeddings in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinCertificate {
    pub mode: Mode,
    pub forward: EmbedCertificate,
    pub backward: EmbedCertificate,
    pub verdict: Verdict,
}

/// Exact rooted mutual embeddability.
pub fn twin_rooted(a: &Scheme, b: &Scheme) -> TwinCertificate {
    let forward = scheme_embed_rooted(a, b);
    let backward = scheme_embed_rooted(b, a);
    let verdict = forward.verdict.and(backward.verdict);
    TwinCertificate {
        mode: Mode::Rooted,
        forward,
        backward,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make, TreeKind};
    use crate::multiplicity::Multiplicity::{Finite, Omega};

    #[test]
    fn twin_rooted_examples() {
        let ray = make(&TreeKind::Ray).unwrap();
        let binary = make(&TreeKind::DAry(2)).unwrap();
        let t = twin_rooted(&ray, &binary);
        assert_eq!(t.forward.verdict, Verdict::Yes);
        assert_eq!(t.backward.verdict, Verdict::No);
        assert_eq!(t.verdict, Verdict::No);
        let cat = make(&TreeKind::Caterpillar).unwrap();
        assert_eq!(twin_rooted(&cat, &cat).verdict, Verdict::Yes);
    }

    #[test]
    fn locally_finite_rooted_twins_are_isomorphic() {
        // the caterpillar and its leaf removals are twins only as unrooted trees
        let cat = make(&TreeKind::Caterpillar).unwrap();
        for k in 1..=3 {
            let minus = make(&TreeKind::CaterpillarMinus(k)).unwrap();
            assert_eq!(twin_rooted(&cat, &minus).verdict, Verdict::No);
            assert_eq!(twin_unrooted(&cat, &minus, 4).verdict, Verdict::Yes);
        }
    }

    #[test]
    fn rooted_twins_need_infinite_degree() {
        // root{ω cherries} and root{ω cherries, leaf}
        let x = Scheme::from_rules("R", &[("R", &[("C", Omega)]), ("C", &[("L", Finite(2))]), ("L", &[])]).unwrap();
        let y = Scheme::from_rules(
            "R",
            &[
                ("R", &[("C", Omega), ("L", Finite(1))]),
                ("C", &[("L", Finite(2))]),
                ("L", &[]),
            ],
        )
        .unwrap();
        assert_eq!(twin_rooted(&x, &y).verdict, Verdict::Yes);
        let iso = scheme_iso_rooted(&x, &y);
        assert_eq!(iso.verdict, Verdict::No);
        assert_eq!(iso.failure_depth, Some(2));
    }

    #[test]
    fn verdict_conjunction() {
        assert_eq!(Verdict::Yes.and(Verdict::Unknown), Verdict::Unknown);
        assert_eq!(Verdict::Unknown.and(Verdict::No), Verdict::No);
        assert_eq!(Verdict::Yes.and(Verdict::Yes), Verdict::Yes);
    }
}
