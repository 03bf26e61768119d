//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use twintree::checks::{run_suite, CheckParams};
use twintree::construct::{make, TreeKind};
use twintree::decide::{scheme_iso_rooted, Verdict};
use twintree::dsl::{parse_scheme, serialize_scheme};
use twintree::random::random_scheme;
use twintree::scheme::classify;

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(name: &str, params: CheckParams) -> Outcome {
    let r = run_suite(name, &params).expect("known suite");
    Outcome {
        ok: r.passed(),
        detail: format!(
            "{} cases, {} failures{}",
            r.cases,
            r.failures.len(),
            r.failures
                .first()
                .map(|f| format!("; first: expected {}, got {}", f.expected, f.got))
                .unwrap_or_default()
        ),
    }
}

fn with_count(count: usize) -> CheckParams {
    CheckParams {
        count: Some(count),
        ..CheckParams::default()
    }
}

fn classification() -> Outcome {
    let c = |k: TreeKind| classify(&make(&k).expect("library tree"));
    let checks = [
        ("ray nearly finite", c(TreeKind::Ray).nearly_finite),
        ("caterpillar has a comb", c(TreeKind::Caterpillar).contains_comb),
        ("binary has a comb", c(TreeKind::DAry(2)).contains_comb),
        ("binary not nearly finite", !c(TreeKind::DAry(2)).nearly_finite),
        ("ternary has a comb", c(TreeKind::DAry(3)).contains_comb),
        ("ternary not nearly finite", !c(TreeKind::DAry(3)).nearly_finite),
    ];
    let bad: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            "6 checks".into()
        } else {
            format!("failed: {}", bad.join(", "))
        },
    }
}

fn round_trip() -> Outcome {
    let mut bad = Vec::new();
    for seed in 0..100 {
        let states = 1 + (seed as usize % 6);
        let s = random_scheme(states, 4, 0.2, seed).expect("valid parameters");
        let text = serialize_scheme("s", &s);
        match parse_scheme(&text) {
            Ok(back) => {
                let iso = scheme_iso_rooted(&s, &back).verdict == Verdict::Yes;
                if !iso || serialize_scheme("s", &back) != text {
                    bad.push(seed);
                }
            }
            Err(_) => bad.push(seed),
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            "100 schemes".into()
        } else {
            format!("seeds {bad:?}")
        },
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, &str, u64, Box<dyn Fn() -> Outcome>)> = vec![
        (
            "A1",
            "self-embeddings of rooted trees up to 8 vertices are bijective",
            60,
            Box::new(|| suite("lemma6", CheckParams::default())),
        ),
        (
            "A2",
            "finite mutual embedding implies isomorphism",
            30,
            Box::new(|| suite("mutual-finite", with_count(1000))),
        ),
        (
            "A3",
            "rooted iso agrees with the truncation oracle",
            60,
            Box::new(|| suite("iso-oracle", with_count(500))),
        ),
        (
            "A4",
            "rooted embed agrees with the truncation oracle",
            120,
            Box::new(|| suite("embed-oracle", with_count(300))),
        ),
        (
            "A5",
            "comb rule agrees with branching growth",
            60,
            Box::new(|| suite("comb-oracle", with_count(200))),
        ),
        (
            "A6",
            "caterpillar family of 6",
            10,
            Box::new(|| suite("caterpillar-family", with_count(6))),
        ),
        (
            "A7",
            "star-of-paths truncations are isomorphic, n = 1..8",
            5,
            Box::new(|| suite("lemma7-example", CheckParams::default())),
        ),
        (
            "A8",
            "tooth family 1, 10, 100, 1000, 10000",
            20,
            Box::new(|| suite("tooth-family", with_count(5))),
        ),
        (
            "A9",
            "sandwich family over the ray with cherries, 5 members",
            30,
            Box::new(|| suite("sandwich-family", with_count(5))),
        ),
        ("A10", "classification of library trees", 1, Box::new(classification)),
        ("A11", "scheme text round trip", 10, Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (id, what, limit, f) in &criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let ok = out.ok && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{id} {} {what}: {} ({:.2}s of {limit}s{})",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            if in_time { "" } else { ", too slow" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
