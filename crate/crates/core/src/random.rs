//! Seeded generators for trees, schemes and scheme pairs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::finite_tree::RootedFiniteTree;
use crate::multiplicity::Multiplicity;
use crate::scheme::{Entry, RawScheme, Scheme};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RandomError {
    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each vertex after the first, in a random order, picks a uniform parent
/// among the vertices before it.
pub fn random_rooted_tree(n: usize, seed: u64) -> Result<RootedFiniteTree, RandomError> {
    if n == 0 {
        return Err(RandomError::BadParams("a tree needs a vertex".into()));
    }
    let mut r = rng(seed);
    Ok(tree_with(&mut r, n))
}

pub(crate) fn tree_with(r: &mut impl Rng, n: usize) -> RootedFiniteTree {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let mut parent = vec![None; n];
    for k in 1..n {
        parent[order[k]] = Some(order[r.gen_range(0..k)]);
    }
    RootedFiniteTree::new(parent).expect("random parent assignment is a tree")
}

fn random_mult(r: &mut impl Rng, max_mult: u64, omega_prob: f64) -> Multiplicity {
    if omega_prob > 0.0 && r.gen_bool(omega_prob) {
        Multiplicity::Omega
    } else {
        Multiplicity::Finite(r.gen_range(1..=max_mult))
    }
}

/// Random reachable scheme on exactly `states` states: a random spanning
/// tree from the root, then up to two extra entries per state.
pub fn random_scheme(states: usize, max_mult: u64, omega_prob: f64, seed: u64) -> Result<Scheme, RandomError> {
    let mut r = rng(seed);
    scheme_with(&mut r, states, max_mult, omega_prob)
}

pub(crate) fn scheme_with(
    r: &mut impl Rng,
    states: usize,
    max_mult: u64,
    omega_prob: f64,
) -> Result<Scheme, RandomError> {
    if states == 0 {
        return Err(RandomError::BadParams("a scheme needs a state".into()));
    }
    if max_mult == 0 {
        return Err(RandomError::BadParams("max multiplicity must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&omega_prob) {
        return Err(RandomError::BadParams("ω probability must lie in [0, 1]".into()));
    }
    let mut children: Vec<Vec<Entry>> = vec![Vec::new(); states];
    for q in 1..states {
        let p = r.gen_range(0..q);
        children[p].push(Entry::new(q, random_mult(r, max_mult, omega_prob)));
    }
    for q in 0..states {
        let extra = r.gen_range(0..=2);
        for _ in 0..extra {
            let t = r.gen_range(0..states);
            if children[q].iter().all(|e| e.state != t) {
                children[q].push(Entry::new(t, random_mult(r, max_mult, omega_prob)));
            }
        }
    }
    let names = (0..states).map(|q| format!("s{q}")).collect();
    Ok(RawScheme {
        names,
        root: 0,
        children,
    }
    .into_scheme()
    .expect("spanning tree keeps every state reachable"))
}

fn renumber(s: &RawScheme, perm: &[usize]) -> RawScheme {
    // perm[old] = new
    let n = s.children.len();
    let mut names = vec![String::new(); n];
    let mut children = vec![Vec::new(); n];
    for q in 0..n {
        names[perm[q]] = s.names[q].clone();
        children[perm[q]] = s.children[q]
            .iter()
            .map(|e| Entry::new(perm[e.state], e.mult))
            .collect();
    }
    RawScheme {
        names,
        root: perm[s.root],
        children,
    }
}

/// A different presentation of the same unfolding: possibly splits one
/// state in two (sharing its incoming multiplicity), then shuffles the
/// state order and renames. `max_states` caps the result size.
pub fn re_present(s: &Scheme, max_states: usize, r: &mut impl Rng) -> Scheme {
    let mut raw = s.to_raw();
    let n = raw.children.len();
    if n < max_states {
        let q = r.gen_range(0..n);
        let copy = n;
        raw.names.push(format!("{}_copy", raw.names[q]));
        raw.children.push(raw.children[q].clone());
        // move part of each incoming entry to the copy
        for p in 0..=n {
            let mut moved = Vec::new();
            for e in raw.children[p].iter_mut() {
                if e.state != q || !r.gen_bool(0.5) {
                    continue;
                }
                match e.mult {
                    Multiplicity::Finite(m) if m >= 2 => {
                        let k = r.gen_range(1..m);
                        e.mult = Multiplicity::Finite(m - k);
                        moved.push(Entry::new(copy, Multiplicity::Finite(k)));
                    }
                    m => {
                        e.state = copy;
                        e.mult = m;
                    }
                }
            }
            raw.children[p].extend(moved);
        }
        if raw.root == q && r.gen_bool(0.5) {
            raw.root = copy;
        }
    }
    let n = raw.children.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let mut raw = renumber(&raw, &perm);
    for (i, name) in raw.names.iter_mut().enumerate() {
        *name = format!("t{i}");
    }
    raw.prune().expect("re-presentation stays valid")
}

/// Adds children: raises some multiplicities and adds new entries. The
/// original unfolding embeds into the result with roots kept.
pub fn augment(s: &Scheme, max_mult: u64, r: &mut impl Rng) -> Scheme {
    let mut raw = s.to_raw();
    let n = raw.children.len();
    let changes = r.gen_range(1..=2);
    for _ in 0..changes {
        let q = r.gen_range(0..n);
        let t = r.gen_range(0..n);
        match raw.children[q].iter_mut().find(|e| e.state == t) {
            Some(e) => e.mult = e.mult + Multiplicity::ONE,
            None => raw.children[q].push(Entry::new(t, Multiplicity::Finite(r.gen_range(1..=max_mult)))),
        }
    }
    raw.into_scheme().expect("only entries were added")
}

/// Removes one child somewhere: lowers a multiplicity or drops an entry.
pub fn perturb(s: &Scheme, r: &mut impl Rng) -> Scheme {
    let mut raw = s.to_raw();
    let with_kids: Vec<usize> = (0..raw.children.len())
        .filter(|&q| !raw.children[q].is_empty())
        .collect();
    let Some(&q) = with_kids.choose(r) else {
        return s.clone();
    };
    let i = r.gen_range(0..raw.children[q].len());
    match raw.children[q][i].mult {
        Multiplicity::Finite(m) if m >= 2 => raw.children[q][i].mult = Multiplicity::Finite(m - 1),
        _ => {
            raw.children[q].remove(i);
        }
    }
    raw.prune().expect("root survives")
}

/// How a random pair was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Independent,
    RePresented,
    Augmented,
    Perturbed,
}

/// Pairs on at most `max_states` states with finite multiplicities at most
/// `max_mult`, cycling through the four kinds so that yes and no answers
/// both occur often.
pub fn random_pair(index: usize, max_states: usize, max_mult: u64, seed: u64) -> (PairKind, Scheme, Scheme) {
    let mut r = rng(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let states = r.gen_range(1..=max_states);
    let a = scheme_with(&mut r, states, max_mult, 0.0).expect("valid parameters");
    let kind = [
        PairKind::Independent,
        PairKind::RePresented,
        PairKind::Augmented,
        PairKind::Perturbed,
    ][index % 4];
    let b = match kind {
        PairKind::Independent => {
            let states = r.gen_range(1..=max_states);
            scheme_with(&mut r, states, max_mult, 0.0).expect("valid parameters")
        }
        PairKind::RePresented => re_present(&a, max_states, &mut r),
        PairKind::Augmented => augment(&re_present(&a, max_states, &mut r), max_mult, &mut r),
        PairKind::Perturbed => perturb(&re_present(&a, max_states, &mut r), &mut r),
    };
    (kind, a, b)
}
