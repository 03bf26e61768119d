//! Named batteries that cross-check the decision procedures against
//! brute-force oracles and regenerate the twin families.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::construct::{
    caterpillar_family, comb_tooth_family, make, sandwich_family, star_of_paths_truncation, ToothPattern, TreeKind,
    TwinFamily,
};
use crate::decide::oracle::{comb_by_growth, truncation_iso};
use crate::decide::{oracle_embed_trunc, replay_embedding, scheme_embed_rooted, scheme_iso_rooted, Verdict};
use crate::dsl::{serialize_rooted_tree, serialize_scheme};
use crate::finite_tree::{
    ahu_code, embed_rooted, enumerate_root_self_embeddings, iso_rooted, recursive_trees, RootedFiniteTree,
};
use crate::random::{random_pair, rng, scheme_with, tree_with};
use crate::scheme::{classify, reroot, Scheme, SchemeError};

pub const SUITES: [&str; 9] = [
    "lemma6",
    "mutual-finite",
    "iso-oracle",
    "embed-oracle",
    "comb-oracle",
    "lemma7-example",
    "caterpillar-family",
    "tooth-family",
    "sandwich-family",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("unknown suite `{0}` (known: {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub inputs: Vec<String>,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub kind: &'static str,
    pub suite: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub cases: usize,
    pub failures: Vec<CheckFailure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// Knobs shared by the suites. `None` picks the suite's own default.
#[derive(Clone, Debug)]
pub struct CheckParams {
    pub seed: u64,
    /// Largest tree size for `lemma6`, largest `n` for `lemma7-example`.
    pub max_n: usize,
    /// Truncation depth for oracle comparisons.
    pub depth: usize,
    /// Number of random cases, or family size.
    pub count: Option<usize>,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            seed: 0,
            max_n: 8,
            depth: 8,
            count: None,
        }
    }
}

struct Run {
    cases: usize,
    failures: Vec<CheckFailure>,
}

impl Run {
    fn new() -> Self {
        Run {
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, inputs: impl FnOnce() -> Vec<String>, expected: &str, got: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(CheckFailure {
                inputs: inputs(),
                expected: expected.to_string(),
                got: got(),
            });
        }
    }

    fn fail(&mut self, inputs: Vec<String>, expected: &str, got: String) {
        self.failures.push(CheckFailure {
            inputs,
            expected: expected.to_string(),
            got,
        });
    }
}

pub fn run_suite(name: &str, params: &CheckParams) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let run = match name {
        "lemma6" => self_embeddings(params),
        "mutual-finite" => mutual_finite(params),
        "iso-oracle" => iso_oracle(params),
        "embed-oracle" => embed_oracle(params),
        "comb-oracle" => comb_oracle(params),
        "lemma7-example" => star_of_paths(params),
        "caterpillar-family" => caterpillar(params),
        "tooth-family" => tooth(params),
        "sandwich-family" => sandwich(params),
        _ => return Err(CheckError::UnknownSuite(name.to_string())),
    };
    Ok(CheckReport {
        kind: "check",
        suite: name.to_string(),
        seed: params.seed,
        verdict: Verdict::from_bool(run.failures.is_empty()),
        cases: run.cases,
        failures: run.failures,
        elapsed: start.elapsed(),
    })
}

/// Number of rooted trees on `n` unlabeled vertices, `n = 1..=8`.
const ROOTED_COUNTS: [usize; 8] = [1, 1, 2, 4, 9, 20, 48, 115];

fn self_embeddings(p: &CheckParams) -> Run {
    let mut run = Run::new();
    let mut r = rng(p.seed);
    for n in 1..=p.max_n {
        let mut seen = BTreeSet::new();
        let mut shapes = Vec::new();
        let mut add = |t: RootedFiniteTree, shapes: &mut Vec<RootedFiniteTree>| {
            if seen.insert(ahu_code(&t).to_string()) {
                shapes.push(t);
            }
        };
        for t in recursive_trees(n) {
            add(t, &mut shapes);
        }
        for _ in 0..200 {
            add(tree_with(&mut r, n), &mut shapes);
        }
        if let Some(&want) = ROOTED_COUNTS.get(n - 1) {
            if shapes.len() != want {
                run.fail(
                    vec![format!("n = {n}")],
                    &format!("{want} shapes"),
                    format!("{} shapes", shapes.len()),
                );
            }
        }
        for t in shapes {
            match enumerate_root_self_embeddings(&t, 100_000) {
                Ok(maps) => {
                    let bad = maps.iter().find(|m| !m.is_bijective_onto(t.len()));
                    run.case(
                        bad.is_none() && !maps.is_empty(),
                        || vec![serialize_rooted_tree("t", &t)],
                        "every self-embedding bijective",
                        || match bad {
                            Some(m) => format!("{:?}", m.as_slice()),
                            None => "no self-embeddings".into(),
                        },
                    );
                }
                Err(e) => run.fail(vec![serialize_rooted_tree("t", &t)], "enumeration", e.to_string()),
            }
        }
    }
    run
}

fn mutual_finite(p: &CheckParams) -> Run {
    let mut run = Run::new();
    let mut r = rng(p.seed);
    for i in 0..p.count.unwrap_or(1000) {
        let n = r.gen_range(2..=10);
        let m = if i % 2 == 0 { r.gen_range(2..=10) } else { n };
        let (s, t) = (tree_with(&mut r, n), tree_with(&mut r, m));
        let fwd = embed_rooted(&s, &t);
        let bwd = embed_rooted(&t, &s);
        for (map, a, b) in [(&fwd, &s, &t), (&bwd, &t, &s)] {
            if let Some(map) = map {
                if !map.is_rooted_embedding(a, b) || !map.preserves_depth(a, b) {
                    run.fail(
                        vec![serialize_rooted_tree("s", a), serialize_rooted_tree("t", b)],
                        "valid embedding",
                        format!("{:?}", map.as_slice()),
                    );
                }
            }
        }
        let both = fwd.is_some() && bwd.is_some();
        run.case(
            !both || iso_rooted(&s, &t),
            || vec![serialize_rooted_tree("s", &s), serialize_rooted_tree("t", &t)],
            "isomorphic",
            || "mutually embeddable but not isomorphic".into(),
        );
    }
    run
}

fn pair_inputs(a: &Scheme, b: &Scheme) -> Vec<String> {
    vec![serialize_scheme("a", a), serialize_scheme("b", b)]
}

fn iso_oracle(p: &CheckParams) -> Run {
    let mut run = Run::new();
    for i in 0..p.count.unwrap_or(500) {
        let (_, a, b) = random_pair(i, 5, 3, p.seed);
        let cert = scheme_iso_rooted(&a, &b);
        let depth = a.len() + b.len() + 1;
        let truth = truncation_iso(&a, &b, depth);
        run.case(
            (cert.verdict == Verdict::Yes) == truth,
            || pair_inputs(&a, &b),
            if truth { "yes" } else { "no" },
            || cert.verdict.to_string(),
        );
        if let Err(e) = cert.check(&a, &b) {
            run.fail(pair_inputs(&a, &b), "certificate checks", e);
        }
        if let Some(d) = cert.failure_depth {
            let exact = !truncation_iso(&a, &b, d) && (d == 0 || truncation_iso(&a, &b, d - 1));
            if !exact {
                run.fail(
                    pair_inputs(&a, &b),
                    "truncations differ first at the failure depth",
                    format!("failure depth {d}"),
                );
            }
        }
    }
    run
}

fn embed_oracle(p: &CheckParams) -> Run {
    let mut run = Run::new();
    for i in 0..p.count.unwrap_or(300) {
        let (_, a, b) = random_pair(i, 5, 3, p.seed);
        let cert = scheme_embed_rooted(&a, &b);
        let oracle = |n: usize| oracle_embed_trunc(&a, &b, n).expect("finite multiplicities");
        match (cert.verdict, cert.failure_depth) {
            (Verdict::Yes, _) => {
                let bad = (1..=p.depth).find(|&n| !oracle(n));
                run.case(
                    bad.is_none(),
                    || pair_inputs(&a, &b),
                    "truncations embed",
                    || format!("oracle fails at depth {}", bad.unwrap_or(0)),
                );
                if let Err(e) = cert.check(&a, &b) {
                    run.fail(pair_inputs(&a, &b), "certificate checks", e);
                }
                match replay_embedding(&a, &b, &cert, 4) {
                    Ok((ua, ub, map)) => {
                        if !map.is_rooted_embedding(&ua.tree, &ub.tree) || !map.preserves_depth(&ua.tree, &ub.tree) {
                            run.fail(
                                pair_inputs(&a, &b),
                                "replayed map is an embedding",
                                format!("{:?}", map.as_slice()),
                            );
                        }
                    }
                    Err(SchemeError::TooLarge(_)) => {}
                    Err(e) => run.fail(pair_inputs(&a, &b), "replay", e.to_string()),
                }
            }
            (_, Some(d)) => {
                let exact = !oracle(d) && (d == 0 || oracle(d - 1));
                run.case(
                    exact,
                    || pair_inputs(&a, &b),
                    "truncations stop embedding at the failure depth",
                    || format!("failure depth {d}"),
                );
            }
            (v, None) => run.fail(pair_inputs(&a, &b), "failure depth on no", v.to_string()),
        }
    }
    run
}

fn comb_oracle(p: &CheckParams) -> Run {
    let mut run = Run::new();
    let mut r = rng(p.seed);
    for _ in 0..p.count.unwrap_or(200) {
        let states = r.gen_range(1..=6);
        let s = scheme_with(&mut r, states, 3, 0.0).expect("valid parameters");
        let rule = classify(&s).contains_comb;
        let growth = comb_by_growth(&s).expect("locally finite");
        run.case(
            rule == growth,
            || vec![serialize_scheme("s", &s)],
            &growth.to_string(),
            || rule.to_string(),
        );
    }
    run
}

fn star_of_paths(p: &CheckParams) -> Run {
    let mut run = Run::new();
    for n in 1..=p.max_n {
        let a = star_of_paths_truncation(n, false).expect("n ≥ 1");
        let b = star_of_paths_truncation(n, true).expect("n ≥ 1");
        let cert = scheme_iso_rooted(&a, &b);
        run.case(
            cert.verdict == Verdict::Yes && truncation_iso(&a, &b, n + 1),
            || pair_inputs(&a, &b),
            "isomorphic",
            || cert.verdict.to_string(),
        );
    }
    run
}

/// Pairwise verdicts plus oracle replays of `sampled` pairs at `depth`.
fn family_cases(run: &mut Run, fam: &TwinFamily, distinct: bool, sampled: &[usize], depth: usize) {
    for (k, pair) in fam.pairs.iter().enumerate() {
        let (a, b) = (&fam.members[pair.i], &fam.members[pair.j]);
        let inputs = || vec![fam.labels[pair.i].clone(), fam.labels[pair.j].clone()];
        run.case(pair.twin.verdict == Verdict::Yes, inputs, "twins", || {
            pair.twin.verdict.to_string()
        });
        if distinct {
            run.case(pair.iso.verdict == Verdict::No, inputs, "not isomorphic", || {
                pair.iso.verdict.to_string()
            });
        }
        if !sampled.contains(&k) {
            continue;
        }
        if pair.twin.verdict == Verdict::Yes {
            let fwd = reroot(b, &pair.twin.forward.target_root).expect("certified address");
            let bwd = reroot(a, &pair.twin.backward.target_root).expect("certified address");
            let ok = oracle_embed_trunc(a, &fwd, depth) == Ok(true) && oracle_embed_trunc(b, &bwd, depth) == Ok(true);
            run.case(ok, inputs, "truncations embed both ways", || "oracle disagrees".into());
        }
        if let Some(d) = pair.iso.failure_depth {
            let ok = !truncation_iso(a, b, d) && truncation_iso(a, b, d - 1);
            run.case(ok, inputs, "truncations differ first at the failure depth", || {
                format!("failure depth {d}")
            });
        }
    }
}

fn sample_pairs(seed: u64, total: usize, k: usize) -> Vec<usize> {
    let mut r = rng(seed);
    sample(&mut r, total, k.min(total)).into_vec()
}

fn family_result(
    run: &mut Run,
    what: &str,
    fam: Result<TwinFamily, crate::construct::ConstructError>,
    distinct: bool,
    sampled: usize,
    depth: usize,
    seed: u64,
) -> Option<TwinFamily> {
    match fam {
        Ok(fam) => {
            let picks = sample_pairs(seed, fam.pairs.len(), sampled);
            family_cases(run, &fam, distinct, &picks, depth);
            Some(fam)
        }
        Err(e) => {
            run.fail(vec![what.to_string()], "family builds", e.to_string());
            None
        }
    }
}

fn caterpillar(p: &CheckParams) -> Run {
    let mut run = Run::new();
    let k = p.count.unwrap_or(6);
    family_result(
        &mut run,
        "caterpillar family",
        caterpillar_family(k),
        true,
        3,
        p.depth,
        p.seed,
    );
    run
}

fn tooth(p: &CheckParams) -> Run {
    let mut run = Run::new();
    let k = p.count.unwrap_or(5);
    let patterns: Vec<ToothPattern> = (0..k)
        .map(|i| ToothPattern::periodic(&format!("1{}", "0".repeat(i))).expect("has a tooth"))
        .collect();
    let total = k * k.saturating_sub(1) / 2;
    family_result(
        &mut run,
        "tooth family",
        comb_tooth_family(&patterns),
        true,
        total,
        p.depth,
        p.seed,
    );
    run
}

fn sandwich(p: &CheckParams) -> Run {
    let mut run = Run::new();
    let k = p.count.unwrap_or(5);
    let ray = make(&TreeKind::Ray).expect("ray");
    let cherry =
        Scheme::from_rules("C", &[("C", &[("L", crate::Multiplicity::Finite(2))]), ("L", &[])]).expect("cherry");
    let total = k * k.saturating_sub(1) / 2;
    let fam = family_result(
        &mut run,
        "sandwich family",
        sandwich_family(&ray, 1, &cherry, k),
        true,
        total,
        p.depth,
        p.seed,
    );
    if let Some(fam) = fam {
        let depths = fam.failure_depths.clone().unwrap_or_default();
        run.case(
            depths.len() + 1 == k && depths.windows(2).all(|w| w[0] < w[1]),
            || vec!["sandwich family".into()],
            "strictly increasing failure depths",
            || format!("{depths:?}"),
        );
    }
    run
}
