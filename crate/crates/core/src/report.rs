//! JSON certificates and reports.
//!
//! Every report is an object with `kind`, `verdict`, `witness`,
//! `failure_depth` and `inputs`; each input carries its name, the SHA-256 of
//! its canonical text and the text itself.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::construct::TwinFamily;
use crate::decide::{EmbedCertificate, IsoCertificate, TwinCertificate, UnrootedIsoCertificate, Verdict};
use crate::dsl::serialize_scheme;
use crate::scheme::{reroot, ClassificationReport, LocalIso, Scheme};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Input {
    pub name: String,
    pub sha256: String,
    pub dsl: String,
}

impl Input {
    pub fn new(name: &str, s: &Scheme) -> Input {
        let dsl = serialize_scheme(name, s);
        Input {
            name: name.to_string(),
            sha256: sha256_hex(dsl.as_bytes()),
            dsl,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub kind: String,
    pub verdict: Verdict,
    pub witness: Value,
    pub failure_depth: Option<usize>,
    pub inputs: Vec<Input>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

fn partition(s: &Scheme, classes: &[usize]) -> Value {
    let m: Map<String, Value> = s.states().map(|q| (s.name(q).to_string(), json!(classes[q]))).collect();
    Value::Object(m)
}

pub fn iso_witness(a: &Scheme, b: &Scheme, cert: &IsoCertificate) -> Value {
    json!({
        "partition": { "a": partition(a, &cert.classes_a), "b": partition(b, &cert.classes_b) },
        "rounds": cert.rounds,
    })
}

pub fn iso_report(a: (&str, &Scheme), b: (&str, &Scheme), cert: &IsoCertificate) -> Report {
    Report {
        kind: "iso".into(),
        verdict: cert.verdict,
        witness: iso_witness(a.1, b.1, cert),
        failure_depth: cert.failure_depth,
        inputs: vec![Input::new(a.0, a.1), Input::new(b.0, b.1)],
    }
}

/// State names in relation and matchings refer to `b` re-rooted at
/// `target_root`.
pub fn embed_witness(a: &Scheme, b: &Scheme, cert: &EmbedCertificate) -> Value {
    let rb = reroot(b, &cert.target_root).unwrap_or_else(|_| b.clone());
    let relation: Vec<Value> = cert
        .relation
        .iter()
        .map(|&(q, r)| json!([a.name(q), rb.name(r)]))
        .collect();
    let matchings: Vec<Value> = cert
        .matchings
        .iter()
        .map(|m| {
            let src = a.children(m.source);
            let tgt = rb.children(m.target);
            let transfers: Vec<Value> = m
                .transfers
                .iter()
                .map(|t| {
                    json!({
                        "from": a.name(src[t.source].state),
                        "to": rb.name(tgt[t.target].state),
                        "amount": t.amount.dsl_token(),
                    })
                })
                .collect();
            json!({ "source": a.name(m.source), "target": rb.name(m.target), "transfers": transfers })
        })
        .collect();
    json!({
        "verdict": cert.verdict,
        "target_root": cert.target_root.display_with(b).to_string(),
        "relation": relation,
        "matchings": matchings,
        "rounds": cert.rounds,
        "failure_depth": cert.failure_depth,
        "note": cert.note,
    })
}

pub fn embed_report(a: (&str, &Scheme), b: (&str, &Scheme), cert: &EmbedCertificate, unrooted: bool) -> Report {
    Report {
        kind: if unrooted { "embed-unrooted" } else { "embed" }.into(),
        verdict: cert.verdict,
        witness: embed_witness(a.1, b.1, cert),
        failure_depth: cert.failure_depth,
        inputs: vec![Input::new(a.0, a.1), Input::new(b.0, b.1)],
    }
}

pub fn twin_witness(a: &Scheme, b: &Scheme, cert: &TwinCertificate) -> Value {
    json!({
        "mode": cert.mode,
        "forward": embed_witness(a, b, &cert.forward),
        "backward": embed_witness(b, a, &cert.backward),
    })
}

pub fn twin_report(a: (&str, &Scheme), b: (&str, &Scheme), cert: &TwinCertificate) -> Report {
    let failure_depth = match (cert.forward.failure_depth, cert.backward.failure_depth) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    Report {
        kind: "twin".into(),
        verdict: cert.verdict,
        witness: twin_witness(a.1, b.1, cert),
        failure_depth,
        inputs: vec![Input::new(a.0, a.1), Input::new(b.0, b.1)],
    }
}

pub fn iso_unrooted_report(a: (&str, &Scheme), b: (&str, &Scheme), cert: &UnrootedIsoCertificate) -> Report {
    let mut witness = json!({
        "target_root": cert.target_root.as_ref().map(|t| t.display_with(b.1).to_string()),
        "refutation": cert.refutation,
    });
    if let (Some(iso), Some(t)) = (&cert.iso, &cert.target_root) {
        let rb = reroot(b.1, t).expect("certified address");
        witness["partition"] = iso_witness(a.1, &rb, iso)["partition"].clone();
    }
    Report {
        kind: "iso-unrooted".into(),
        verdict: cert.verdict,
        witness,
        failure_depth: None,
        inputs: vec![Input::new(a.0, a.1), Input::new(b.0, b.1)],
    }
}

pub fn classify_report(name: &str, s: &Scheme, c: &ClassificationReport) -> Report {
    let names = |qs: &[usize]| qs.iter().map(|&q| s.name(q).to_string()).collect::<Vec<_>>();
    Report {
        kind: "classify".into(),
        verdict: Verdict::Yes,
        witness: json!({
            "finite": c.finite,
            "locally_finite": c.locally_finite,
            "rayless": c.rayless,
            "contains_comb": c.contains_comb,
            "nearly_finite": c.nearly_finite,
            "ray": c.ray_witness.as_deref().map(names),
            "comb": c.comb_witness.as_ref().map(|w| json!({
                "cycle": names(&w.cycle),
                "branching": s.name(w.branching),
            })),
            "omega": c.omega_witness.map(|q| s.name(q).to_string()),
        }),
        failure_depth: None,
        inputs: vec![Input::new(name, s)],
    }
}

pub fn localiso_report(a: (&str, &Scheme), b: (&str, &Scheme), max_depth: usize, r: LocalIso) -> Report {
    let (verdict, failure_depth) = match r {
        LocalIso::Pass => (Verdict::Yes, None),
        LocalIso::FailsAt(n) => (Verdict::No, Some(n)),
    };
    Report {
        kind: "localiso".into(),
        verdict,
        witness: json!({ "max_depth": max_depth }),
        failure_depth,
        inputs: vec![Input::new(a.0, a.1), Input::new(b.0, b.1)],
    }
}

pub fn family_report(kind: &str, fam: &TwinFamily) -> Report {
    let verdict = fam.pairs.iter().fold(Verdict::Yes, |v, p| v.and(p.twin.verdict));
    let pairs: Vec<Value> = fam
        .pairs
        .iter()
        .map(|p| {
            let (a, b) = (&fam.members[p.i], &fam.members[p.j]);
            json!({
                "i": p.i,
                "j": p.j,
                "twin": p.twin.verdict,
                "forward_root": p.twin.forward.target_root.display_with(b).to_string(),
                "backward_root": p.twin.backward.target_root.display_with(a).to_string(),
                "iso": p.iso.verdict,
                "iso_failure_depth": p.iso.failure_depth,
            })
        })
        .collect();
    Report {
        kind: format!("family:{kind}"),
        verdict,
        witness: json!({
            "members": fam.labels,
            "bound": fam.bound,
            "pairs": pairs,
            "failure_depths": fam.failure_depths,
        }),
        failure_depth: None,
        inputs: fam
            .members
            .iter()
            .enumerate()
            .map(|(i, s)| Input::new(&format!("m{i}"), s))
            .collect(),
    }
}
