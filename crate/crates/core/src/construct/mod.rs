//! Generators for the named trees and twin families.

mod family;

pub use family::{caterpillar_family, comb_tooth_family, hosted, sandwich_family, PairRecord, TwinFamily};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::decide::{twin_rooted, Verdict};
use crate::multiplicity::Multiplicity;
use crate::scheme::{Entry, RawScheme, Scheme, SchemeError, StateId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("root entry {0} does not exist")]
    BadIndex(usize),
    #[error("members {i} and {j}: {detail}")]
    CertificateFailure { i: usize, j: usize, detail: String },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Eventually periodic 0/1 sequence: `preperiod` once, then `period`
/// forever. Written `pre+period`, or just `period`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToothPattern {
    pub preperiod: Vec<bool>,
    pub period: Vec<bool>,
}

impl ToothPattern {
    pub fn new(preperiod: Vec<bool>, period: Vec<bool>) -> Result<Self, ConstructError> {
        if !period.contains(&true) {
            return Err(ConstructError::BadParams("tooth period needs a 1".into()));
        }
        Ok(ToothPattern { preperiod, period })
    }

    pub fn periodic(period: &str) -> Result<Self, ConstructError> {
        format!("+{period}").parse()
    }

    pub fn bit(&self, i: usize) -> bool {
        match i.checked_sub(self.preperiod.len()) {
            None => self.preperiod[i],
            Some(k) => self.period[k % self.period.len()],
        }
    }

    /// Same infinite sequence?
    pub fn same_sequence(&self, other: &ToothPattern) -> bool {
        let pre = self.preperiod.len().max(other.preperiod.len());
        let span = lcm(self.period.len(), other.period.len());
        (0..pre + span).all(|i| self.bit(i) == other.bit(i))
    }
}

impl FromStr for ToothPattern {
    type Err = ConstructError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = |t: &str| -> Result<Vec<bool>, ConstructError> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(ConstructError::BadParams(format!("`{c}` in tooth pattern"))),
                })
                .collect()
        };
        match s.split_once('+') {
            Some((pre, period)) => ToothPattern::new(bits(pre)?, bits(period)?),
            None => ToothPattern::new(Vec::new(), bits(s)?),
        }
    }
}

impl fmt::Display for ToothPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: &[bool]| b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
        if self.preperiod.is_empty() {
            write!(f, "{}", show(&self.period))
        } else {
            write!(f, "{}+{}", show(&self.preperiod), show(&self.period))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeKind {
    Ray,
    DAry(u64),
    Caterpillar,
    /// Caterpillar whose first `k` spine vertices have no leaf.
    CaterpillarMinus(usize),
    Comb(ToothPattern),
}

impl FromStr for TreeKind {
    type Err = ConstructError;

    /// `ray`, `dary:D`, `caterpillar`, `caterpillar-minus:K`, `comb:PATTERN`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let number = |a: Option<&str>| -> Result<u64, ConstructError> {
            a.and_then(|a| a.parse().ok())
                .ok_or_else(|| ConstructError::BadParams(format!("`{s}` needs a numeric argument")))
        };
        match head {
            "ray" => Ok(TreeKind::Ray),
            "caterpillar" => Ok(TreeKind::Caterpillar),
            "dary" => Ok(TreeKind::DAry(number(arg)?)),
            "caterpillar-minus" => Ok(TreeKind::CaterpillarMinus(number(arg)? as usize)),
            "comb" => Ok(TreeKind::Comb(
                arg.ok_or_else(|| ConstructError::BadParams("comb needs a pattern".into()))?
                    .parse()?,
            )),
            _ => Err(ConstructError::BadParams(format!("unknown tree kind `{s}`"))),
        }
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

pub fn make(kind: &TreeKind) -> Result<Scheme, ConstructError> {
    use Multiplicity::Finite;
    let one = Multiplicity::ONE;
    let s = match kind {
        TreeKind::Ray => Scheme::from_rules("R", &[("R", &[("R", one)])])?,
        TreeKind::DAry(0) => return Err(ConstructError::BadParams("d must be at least 1".into())),
        TreeKind::DAry(d) => Scheme::from_rules("T", &[("T", &[("T", Finite(*d))])])?,
        TreeKind::Caterpillar => Scheme::from_rules("S", &[("S", &[("S", one), ("L", one)]), ("L", &[])])?,
        TreeKind::CaterpillarMinus(k) => {
            let mut names: Vec<String> = (0..*k).map(|i| format!("P{i}")).collect();
            names.push("S".into());
            names.push("L".into());
            let (s, l) = (*k, k + 1);
            let mut children: Vec<Vec<Entry>> = (0..*k).map(|i| vec![Entry::new(i + 1, one)]).collect();
            children.push(vec![Entry::new(s, one), Entry::new(l, one)]);
            children.push(Vec::new());
            Scheme::new(names, 0, children)?
        }
        TreeKind::Comb(p) => {
            let n = p.preperiod.len() + p.period.len();
            let leaf = n;
            let mut names: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
            names.push("L".into());
            let mut children: Vec<Vec<Entry>> = (0..n)
                .map(|i| {
                    let next = if i + 1 < n { i + 1 } else { p.preperiod.len() };
                    let mut es = vec![Entry::new(next, one)];
                    if p.bit(i) {
                        es.push(Entry::new(leaf, one));
                    }
                    es
                })
                .collect();
            children.push(Vec::new());
            Scheme::new(names, 0, children)?
        }
    };
    Ok(s)
}

/// Root with `ω` paths of every length `1..=n`; with `with_ray`, one more
/// path of length `n` on its own chain, standing in for the cut-off ray.
pub fn star_of_paths_truncation(n: usize, with_ray: bool) -> Result<Scheme, ConstructError> {
    if n == 0 {
        return Err(ConstructError::BadParams("n must be at least 1".into()));
    }
    // P{l} starts a path with l vertices, Y{l} is the ray's chain
    let mut names = vec!["R".to_string()];
    names.extend((1..=n).map(|l| format!("P{l}")));
    let mut children = vec![(1..=n).map(|l| Entry::new(l, Multiplicity::Omega)).collect::<Vec<_>>()];
    children.extend((1..=n).map(|l| {
        if l > 1 {
            vec![Entry::new(l - 1, Multiplicity::ONE)]
        } else {
            vec![]
        }
    }));
    if with_ray {
        let base = names.len();
        names.extend((1..=n).map(|l| format!("Y{l}")));
        children[0].push(Entry::new(base + n - 1, Multiplicity::ONE));
        children.extend((1..=n).map(|l| {
            if l > 1 {
                vec![Entry::new(base + l - 2, Multiplicity::ONE)]
            } else {
                vec![]
            }
        }));
    }
    Ok(Scheme::new(names, 0, children)?)
}

/// Incremental assembly of a scheme from pieces of other schemes.
#[derive(Default)]
pub(crate) struct Assembly {
    names: Vec<String>,
    children: Vec<Vec<Entry>>,
}

impl Assembly {
    /// Copies all states of `s`; returns the new id of each.
    pub fn import(&mut self, s: &Scheme) -> Vec<StateId> {
        let base = self.names.len();
        for q in s.states() {
            let name = Scheme::fresh_name(&self.names, s.name(q));
            self.names.push(name);
            self.children.push(
                s.children(q)
                    .iter()
                    .map(|e| Entry::new(base + e.state, e.mult))
                    .collect(),
            );
        }
        (base..base + s.len()).collect()
    }

    pub fn add(&mut self, name: &str) -> StateId {
        let name = Scheme::fresh_name(&self.names, name);
        self.names.push(name);
        self.children.push(Vec::new());
        self.names.len() - 1
    }

    /// Adds `mult` children of state `child` below `q`, merging with an
    /// existing entry for the same state.
    pub fn link(&mut self, q: StateId, child: StateId, mult: Multiplicity) {
        let es = &mut self.children[q];
        match es.iter_mut().find(|e| e.state == child) {
            Some(e) => e.mult = e.mult + mult,
            None => es.push(Entry::new(child, mult)),
        }
    }

    pub fn finish(self, root: StateId) -> Result<Scheme, SchemeError> {
        RawScheme {
            names: self.names,
            root,
            children: self.children,
        }
        .prune()
    }
}

/// Replaces every root branch of `t` that is rooted-twinned with the branch
/// at root entry `pivot` by a copy of `replacement`. Other branches stay.
pub fn replace_twin_branches(t: &Scheme, pivot: usize, replacement: &Scheme) -> Result<Scheme, ConstructError> {
    let entries = t.children(t.root());
    let pivot_state = entries.get(pivot).ok_or(ConstructError::BadIndex(pivot))?.state;
    let pivot_branch = t.rooted_at_state(pivot_state);
    let mut asm = Assembly::default();
    let ids = asm.import(t);
    let rep = asm.import(replacement);
    let root = asm.add(t.name(t.root()));
    for e in entries {
        let twin =
            e.state == pivot_state || twin_rooted(&t.rooted_at_state(e.state), &pivot_branch).verdict == Verdict::Yes;
        let target = if twin { rep[replacement.root()] } else { ids[e.state] };
        asm.link(root, target, e.mult);
    }
    Ok(asm.finish(root)?)
}
