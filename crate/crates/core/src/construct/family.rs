use super::{lcm, make, Assembly, ConstructError, ToothPattern, TreeKind};
use crate::decide::{scheme_iso_rooted, twin_unrooted, IsoCertificate, TwinCertificate, Verdict};
use crate::multiplicity::Multiplicity;
use crate::scheme::{Scheme, StateId};

/// Certificates for one unordered pair of members, `i < j`.
#[derive(Clone, Debug)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub twin: TwinCertificate,
    pub iso: IsoCertificate,
}

/// Members that are pairwise twinned, as unrooted trees, with their pairwise
/// rooted isomorphism verdicts. `failure_depths[k]` is recorded for member
/// `k + 1`: the deepest level at which it first differs from an earlier
/// member.
#[derive(Clone, Debug)]
pub struct TwinFamily {
    pub members: Vec<Scheme>,
    pub labels: Vec<String>,
    pub pairs: Vec<PairRecord>,
    pub failure_depths: Option<Vec<usize>>,
    pub bound: usize,
}

impl TwinFamily {
    fn build(members: Vec<Scheme>, labels: Vec<String>, bound: usize) -> TwinFamily {
        let mut pairs = Vec::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                pairs.push(PairRecord {
                    i,
                    j,
                    twin: twin_unrooted(&members[i], &members[j], bound),
                    iso: scheme_iso_rooted(&members[i], &members[j]),
                });
            }
        }
        TwinFamily {
            members,
            labels,
            pairs,
            failure_depths: None,
            bound,
        }
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairRecord> {
        let (i, j) = (i.min(j), i.max(j));
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }

    /// Twin verdicts all yes; with `distinct`, iso verdicts all no; recorded
    /// failure depths strictly increasing.
    pub fn validate(&self, distinct: bool) -> Result<(), ConstructError> {
        let fail = |p: &PairRecord, detail: String| ConstructError::CertificateFailure { i: p.i, j: p.j, detail };
        for p in &self.pairs {
            if p.twin.verdict != Verdict::Yes {
                return Err(fail(p, format!("twin verdict {}", p.twin.verdict)));
            }
            if distinct && p.iso.verdict != Verdict::No {
                return Err(fail(p, format!("iso verdict {}", p.iso.verdict)));
            }
        }
        if let Some(depths) = &self.failure_depths {
            if let Some(k) = depths.windows(2).position(|w| w[0] >= w[1]) {
                return Err(ConstructError::CertificateFailure {
                    i: k + 1,
                    j: k + 2,
                    detail: format!("failure depths {depths:?} not increasing"),
                });
            }
        }
        Ok(())
    }
}

fn family_bound(k: usize) -> usize {
    k.max(4)
}

/// `caterpillar_minus(0..k)`, checked pairwise twinned and non-isomorphic.
pub fn caterpillar_family(k: usize) -> Result<TwinFamily, ConstructError> {
    if k < 2 {
        return Err(ConstructError::BadParams("family needs at least two members".into()));
    }
    let members = (0..k)
        .map(|i| make(&TreeKind::CaterpillarMinus(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let labels = (0..k).map(|i| format!("caterpillar-minus:{i}")).collect();
    let family = TwinFamily::build(members, labels, family_bound(k));
    family.validate(true)?;
    Ok(family)
}

/// Root with two branches: the host (a ray carrying a copy of `full` at
/// every vertex) and `variant`. Whenever `variant` embeds in `full` with
/// roots kept, the result sits between the host and itself, so all such
/// trees over one `full` are twins.
pub fn hosted(full: &Scheme, variant: &Scheme) -> Result<Scheme, ConstructError> {
    let mut asm = Assembly::default();
    let f = asm.import(full)[full.root()];
    let v = asm.import(variant)[variant.root()];
    let host = asm.add("H");
    asm.link(host, host, Multiplicity::ONE);
    asm.link(host, f, Multiplicity::ONE);
    let root = asm.add("X");
    asm.link(root, host, Multiplicity::ONE);
    asm.link(root, v, Multiplicity::ONE);
    Ok(asm.finish(root)?)
}

/// One hosted comb per pattern, over the full comb. Twin verdicts are
/// validated; iso verdicts are only recorded, since different patterns can
/// still give isomorphic trees.
pub fn comb_tooth_family(patterns: &[ToothPattern]) -> Result<TwinFamily, ConstructError> {
    for (i, p) in patterns.iter().enumerate() {
        if !p.period.contains(&true) {
            return Err(ConstructError::BadParams(format!("pattern {p} has no teeth")));
        }
        if patterns[..i].iter().any(|q| q.same_sequence(p)) {
            return Err(ConstructError::BadParams(format!("pattern {p} repeats an earlier one")));
        }
    }
    let full = make(&TreeKind::Comb(ToothPattern::periodic("1")?))?;
    let members = patterns
        .iter()
        .map(|p| hosted(&full, &make(&TreeKind::Comb(p.clone()))?))
        .collect::<Result<Vec<_>, _>>()?;
    let labels = patterns.iter().map(|p| format!("comb:{p}")).collect();
    let family = TwinFamily::build(members, labels, family_bound(patterns.len()));
    family.validate(false)?;
    Ok(family)
}

/// The ray followed by always taking the first child that leads to a
/// cycle: `(prefix length, cycle length, states)`, states covering one
/// prefix and one cycle.
fn spine_ray(s: &Scheme) -> Option<(usize, usize, Vec<(StateId, usize)>)> {
    let cyclic = s.cyclic_states();
    let mut leads = cyclic.clone();
    // states from which a cyclic state is reachable
    loop {
        let mut changed = false;
        for q in s.states() {
            if !leads[q] && s.children(q).iter().any(|e| leads[e.state]) {
                leads[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !leads[s.root()] {
        return None;
    }
    // (state, index of the entry taken)
    let mut path: Vec<(StateId, usize)> = Vec::new();
    let mut q = s.root();
    loop {
        if let Some(a) = path.iter().position(|&(p, _)| p == q) {
            let c = path.len() - a;
            return Some((a, c, path));
        }
        let k = s
            .children(q)
            .iter()
            .position(|e| leads[e.state])
            .expect("leads to a cycle");
        path.push((q, k));
        q = s.children(q)[k].state;
    }
}

/// `spine` with a copy of `component` hung by one edge from every vertex of
/// its chosen ray at positions `≡ 0 (mod q)`.
fn attach(spine: &Scheme, component: &Scheme, q: usize) -> Result<Scheme, ConstructError> {
    let (a, c, path) = spine_ray(spine).ok_or_else(|| ConstructError::BadParams("spine has no ray".into()))?;
    let len = a + lcm(c, q);
    let mut asm = Assembly::default();
    let old = asm.import(spine);
    let comp = asm.import(component)[component.root()];
    let pos: Vec<StateId> = (0..len)
        .map(|i| {
            let (st, _) = path[if i < a { i } else { a + (i - a) % c }];
            asm.add(&format!("{}_p{i}", spine.name(st)))
        })
        .collect();
    for i in 0..len {
        let (st, k) = path[if i < a { i } else { a + (i - a) % c }];
        for (idx, e) in spine.children(st).iter().enumerate() {
            let m = if idx == k { e.mult.decrement() } else { e.mult };
            if !m.is_zero() {
                asm.link(pos[i], old[e.state], m);
            }
        }
        let next = if i + 1 < len { i + 1 } else { a };
        asm.link(pos[i], pos[next], Multiplicity::ONE);
        if i % q == 0 {
            asm.link(pos[i], comp, Multiplicity::ONE);
        }
    }
    Ok(asm.finish(pos[0])?)
}

/// `T` is `spine` with `component` at every `period`-th ray position;
/// member `m` (for `m = 1..=k`) keeps only every `(period·m)`-th, so it lies
/// between the spine and `T`. Members are hosted over `T` to make them
/// twins. The failure depth of member `m ≥ 2` is the largest depth at which
/// it first differs from an earlier member; these must strictly increase.
pub fn sandwich_family(
    spine: &Scheme,
    period: usize,
    component: &Scheme,
    k: usize,
) -> Result<TwinFamily, ConstructError> {
    if period == 0 {
        return Err(ConstructError::BadParams("attach period must be at least 1".into()));
    }
    if k < 2 {
        return Err(ConstructError::BadParams("family needs at least two members".into()));
    }
    let full = attach(spine, component, period)?;
    let members = (1..=k)
        .map(|m| hosted(&full, &attach(spine, component, period * m)?))
        .collect::<Result<Vec<_>, _>>()?;
    let labels = (1..=k).map(|m| format!("sandwich:{m}")).collect();
    let mut family = TwinFamily::build(members, labels, family_bound(k));
    let depths = (1..k)
        .map(|j| {
            (0..j)
                .filter_map(|i| family.pair(i, j).and_then(|p| p.iso.failure_depth))
                .max()
                .unwrap_or(0)
        })
        .collect();
    family.failure_depths = Some(depths);
    family.validate(true)?;
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::oracle::truncation_iso;
    use crate::decide::{oracle_embed_trunc, scheme_embed_rooted};
    use crate::scheme::reroot;

    fn cherry() -> Scheme {
        Scheme::from_rules("C", &[("C", &[("L", Multiplicity::Finite(2))]), ("L", &[])]).unwrap()
    }

    #[test]
    fn small_caterpillar_families() {
        assert!(caterpillar_family(1).is_err());
        let two = caterpillar_family(2).unwrap();
        assert_eq!(two.pairs.len(), 1);
        let six = caterpillar_family(6).unwrap();
        assert_eq!(six.pairs.len(), 15);
    }

    #[test]
    fn twin_witnesses_replay_on_truncations() {
        let fam = caterpillar_family(4).unwrap();
        for p in &fam.pairs {
            let (a, b) = (&fam.members[p.i], &fam.members[p.j]);
            let fwd = reroot(b, &p.twin.forward.target_root).unwrap();
            let bwd = reroot(a, &p.twin.backward.target_root).unwrap();
            assert!(oracle_embed_trunc(a, &fwd, 6).unwrap());
            assert!(oracle_embed_trunc(b, &bwd, 6).unwrap());
            let d = p.iso.failure_depth.unwrap();
            assert!(!truncation_iso(a, b, d));
        }
    }

    #[test]
    fn ray_with_points_gives_hosted_combs() {
        let point = Scheme::from_rules("P", &[("P", &[])]).unwrap();
        let ray = make(&TreeKind::Ray).unwrap();
        let fam = sandwich_family(&ray, 1, &point, 3).unwrap();
        let full = make(&TreeKind::Comb(ToothPattern::periodic("1").unwrap())).unwrap();
        for (m, pat) in ["1", "10", "100"].iter().enumerate() {
            let comb = make(&TreeKind::Comb(ToothPattern::periodic(pat).unwrap())).unwrap();
            let expected = hosted(&full, &comb).unwrap();
            assert_eq!(scheme_iso_rooted(&fam.members[m], &expected).verdict, Verdict::Yes);
        }
    }

    #[test]
    fn cherry_sandwich_depths_increase() {
        let ray = make(&TreeKind::Ray).unwrap();
        let fam = sandwich_family(&ray, 1, &cherry(), 5).unwrap();
        assert_eq!(fam.failure_depths, Some(vec![3, 4, 5, 6]));
        let two = sandwich_family(&ray, 1, &cherry(), 2).unwrap();
        let d = two.pairs[0].iso.failure_depth.unwrap();
        assert!(!truncation_iso(&two.members[0], &two.members[1], d));
        assert!(truncation_iso(&two.members[0], &two.members[1], d - 1));
    }

    #[test]
    fn members_sit_inside_the_host() {
        let ray = make(&TreeKind::Ray).unwrap();
        let full = attach(&ray, &cherry(), 1).unwrap();
        for m in 1..4 {
            let part = attach(&ray, &cherry(), m).unwrap();
            assert_eq!(scheme_embed_rooted(&ray, &part).verdict, Verdict::Yes);
            assert_eq!(scheme_embed_rooted(&part, &full).verdict, Verdict::Yes);
        }
    }

    #[test]
    fn attach_on_a_branching_spine() {
        let binary = make(&TreeKind::DAry(2)).unwrap();
        let out = attach(&binary, &cherry(), 2).unwrap();
        // root: one spine child, one other binary child, one cherry
        assert_eq!(out.out_degree(out.root()), Multiplicity::Finite(3));
        let fam = sandwich_family(&binary, 1, &cherry(), 2).unwrap();
        assert_eq!(fam.members.len(), 2);
    }

    #[test]
    fn bare_combs_are_not_twins() {
        // the full comb's spine has degree 3 throughout, which {10} lacks
        let a = make(&TreeKind::Comb(ToothPattern::periodic("1").unwrap())).unwrap();
        let b = make(&TreeKind::Comb(ToothPattern::periodic("10").unwrap())).unwrap();
        assert_ne!(twin_unrooted(&a, &b, 4).verdict, Verdict::Yes);
    }

    #[test]
    fn tooth_family_rejects_repeats() {
        let ps = vec![ToothPattern::periodic("10").unwrap(), "1010+10".parse().unwrap()];
        assert!(matches!(comb_tooth_family(&ps), Err(ConstructError::BadParams(_))));
    }

    #[test]
    fn tooth_family_records_iso() {
        let ps = vec![
            ToothPattern::periodic("1").unwrap(),
            "0+1".parse().unwrap(),
            ToothPattern::periodic("10").unwrap(),
        ];
        let fam = comb_tooth_family(&ps).unwrap();
        let p = fam.pair(0, 1).unwrap();
        assert_eq!(p.twin.verdict, Verdict::Yes);
        assert_eq!(p.iso.verdict, Verdict::No);
        // one level below the host root
        assert_eq!(p.iso.failure_depth, Some(2));
    }
}
