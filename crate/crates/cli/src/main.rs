use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use twintree::checks::{run_suite, CheckParams, SUITES};
use twintree::construct::{
    caterpillar_family, comb_tooth_family, make, sandwich_family, ToothPattern, TreeKind, TwinFamily,
};
use twintree::decide::oracle::{comb_by_growth, truncation_iso};
use twintree::decide::{
    oracle_embed_trunc, scheme_embed_rooted, scheme_embed_unrooted, scheme_iso_rooted, scheme_iso_unrooted,
    twin_rooted, twin_unrooted, Verdict,
};
use twintree::dsl::{parse, parse_address, serialize_scheme};
use twintree::report::{
    classify_report, embed_report, family_report, iso_report, iso_unrooted_report, localiso_report, twin_report, Report,
};
use twintree::scheme::{classify, local_iso_up_to, reroot, truncate, Scheme};
use twintree::Multiplicity;

const USAGE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "twintree",
    version,
    about = "Isomorphism, embedding and twin questions for regular rooted trees"
)]
struct Cli {
    /// Print the full JSON report instead of a one-line summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Are the two trees isomorphic?
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Ignore roots; searches roots of `b` up to `--bound` levels deep.
        #[arg(long)]
        unrooted: bool,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Does the first tree embed into the second?
    Embed {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        unrooted: bool,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Does each tree embed into the other? Unrooted unless `--rooted`.
    Twin {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        rooted: bool,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Finiteness, rays, combs and ω children.
    Classify { a: PathBuf },
    /// Print the depth-N truncation as a scheme.
    Truncate {
        a: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Print the tree re-rooted at an address such as `S:0/L:0`.
    Reroot { a: PathBuf, address: String },
    /// Compare truncations level by level up to `--depth`.
    Localiso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Build a twin family and certify every pair.
    Family {
        kind: FamilyKind,
        /// Tooth patterns such as `1` or `0+10`; overrides `--count` for `tooth`.
        patterns: Vec<String>,
        /// Number of members.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Run a named check suite.
    Check {
        suite: String,
        #[arg(long, env = "TWINTREE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Brute-force answers on truncations.
    Oracle {
        #[command(subcommand)]
        question: OracleQuestion,
    },
    /// Print a library tree: ray, dary:D, caterpillar, caterpillar-minus:K, comb:P.
    Make {
        kind: String,
        #[arg(long, default_value = "t")]
        name: String,
    },
}

#[derive(Subcommand)]
enum OracleQuestion {
    /// Are the depth-N truncations isomorphic?
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Does the depth-N truncation of `a` embed into that of `b`?
    Embed {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Does the number of branching vertices keep growing?
    Comb { a: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Caterpillar,
    Tooth,
    Sandwich,
}

/// A failure that ends the command with the usage exit code.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Loaded {
    name: String,
    scheme: Scheme,
}

fn load(path: &Path) -> Result<Loaded, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let doc = parse(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        name: doc.name().to_string(),
        scheme: doc.into_scheme(),
    })
}

fn load_pair(a: &Path, b: &Path) -> Result<(Loaded, Loaded), Usage> {
    let a = load(a)?;
    let mut b = load(b)?;
    if b.name == a.name {
        b.name.push_str("_2");
    }
    Ok((a, b))
}

fn summary(r: &Report) -> String {
    match r.failure_depth {
        Some(d) => format!("{} (fails at depth {d})", r.verdict),
        None => r.verdict.to_string(),
    }
}

fn emit(r: &Report, json: bool) -> Verdict {
    if json {
        print!("{}", r.to_json());
    } else {
        println!("{}", summary(r));
    }
    r.verdict
}

fn family(kind: FamilyKind, patterns: &[String], count: Option<usize>) -> Result<(&'static str, TwinFamily), Usage> {
    Ok(match kind {
        FamilyKind::Caterpillar => ("caterpillar", caterpillar_family(count.unwrap_or(6))?),
        FamilyKind::Tooth => {
            let patterns: Vec<ToothPattern> = if patterns.is_empty() {
                (0..count.unwrap_or(5))
                    .map(|i| ToothPattern::periodic(&format!("1{}", "0".repeat(i))))
                    .collect::<Result<_, _>>()?
            } else {
                patterns.iter().map(|p| p.parse()).collect::<Result<_, _>>()?
            };
            ("tooth", comb_tooth_family(&patterns)?)
        }
        FamilyKind::Sandwich => {
            let ray = make(&TreeKind::Ray)?;
            let cherry = Scheme::from_rules("C", &[("C", &[("L", Multiplicity::Finite(2))]), ("L", &[])])?;
            ("sandwich", sandwich_family(&ray, 1, &cherry, count.unwrap_or(5))?)
        }
    })
}

fn run(cli: Cli) -> Result<Verdict, Usage> {
    let json = cli.json;
    let verdict = match cli.command {
        Command::Iso { a, b, unrooted, bound } => {
            let (a, b) = load_pair(&a, &b)?;
            let (pa, pb) = ((a.name.as_str(), &a.scheme), (b.name.as_str(), &b.scheme));
            let r = if unrooted {
                iso_unrooted_report(pa, pb, &scheme_iso_unrooted(&a.scheme, &b.scheme, bound))
            } else {
                iso_report(pa, pb, &scheme_iso_rooted(&a.scheme, &b.scheme))
            };
            emit(&r, json)
        }
        Command::Embed { a, b, unrooted, bound } => {
            let (a, b) = load_pair(&a, &b)?;
            let cert = if unrooted {
                scheme_embed_unrooted(&a.scheme, &b.scheme, bound)
            } else {
                scheme_embed_rooted(&a.scheme, &b.scheme)
            };
            emit(
                &embed_report((&a.name, &a.scheme), (&b.name, &b.scheme), &cert, unrooted),
                json,
            )
        }
        Command::Twin { a, b, rooted, bound } => {
            let (a, b) = load_pair(&a, &b)?;
            let cert = if rooted {
                twin_rooted(&a.scheme, &b.scheme)
            } else {
                twin_unrooted(&a.scheme, &b.scheme, bound)
            };
            emit(&twin_report((&a.name, &a.scheme), (&b.name, &b.scheme), &cert), json)
        }
        Command::Classify { a } => {
            let a = load(&a)?;
            let c = classify(&a.scheme);
            let r = classify_report(&a.name, &a.scheme, &c);
            if json {
                print!("{}", r.to_json());
            } else {
                println!(
                    "finite={} locally_finite={} rayless={} contains_comb={} nearly_finite={}",
                    c.finite, c.locally_finite, c.rayless, c.contains_comb, c.nearly_finite
                );
            }
            Verdict::Yes
        }
        Command::Truncate { a, depth } => {
            let a = load(&a)?;
            print!("{}", serialize_scheme(&a.name, &truncate(&a.scheme, depth)));
            Verdict::Yes
        }
        Command::Reroot { a, address } => {
            let a = load(&a)?;
            let addr = parse_address(&a.scheme, &address)?;
            print!("{}", serialize_scheme(&a.name, &reroot(&a.scheme, &addr)?));
            Verdict::Yes
        }
        Command::Localiso { a, b, depth } => {
            let (a, b) = load_pair(&a, &b)?;
            let r = local_iso_up_to(&a.scheme, &b.scheme, depth);
            emit(
                &localiso_report((&a.name, &a.scheme), (&b.name, &b.scheme), depth, r),
                json,
            )
        }
        Command::Family { kind, patterns, count } => {
            let (label, fam) = family(kind, &patterns, count)?;
            let r = family_report(label, &fam);
            if json {
                print!("{}", r.to_json());
            } else {
                for p in &fam.pairs {
                    println!(
                        "{} ~ {}: twin {}, iso {}",
                        fam.labels[p.i], fam.labels[p.j], p.twin.verdict, p.iso.verdict
                    );
                }
                if let Some(ds) = &fam.failure_depths {
                    println!("failure depths {ds:?}");
                }
                println!("{}", r.verdict);
            }
            r.verdict
        }
        Command::Check {
            suite,
            seed,
            max_n,
            depth,
            count,
        } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Usage(format!("unknown suite `{suite}`; one of {}", SUITES.join(", "))));
            }
            let params = CheckParams {
                seed,
                max_n,
                depth,
                count,
            };
            let start = Instant::now();
            let report = run_suite(&suite, &params)?;
            eprintln!("{suite}: {:.2?}", start.elapsed());
            if json {
                print!("{}", report.to_json());
            } else {
                println!("{suite}: {} cases, {} failures", report.cases, report.failures.len());
                for f in &report.failures {
                    println!("  expected {}, got {}", f.expected, f.got);
                    for input in &f.inputs {
                        println!("    {}", input.replace('\n', "\n    "));
                    }
                }
            }
            report.verdict
        }
        Command::Oracle { question } => {
            let yes = match question {
                OracleQuestion::Iso { a, b, depth } => {
                    let (a, b) = load_pair(&a, &b)?;
                    truncation_iso(&a.scheme, &b.scheme, depth)
                }
                OracleQuestion::Embed { a, b, depth } => {
                    let (a, b) = load_pair(&a, &b)?;
                    oracle_embed_trunc(&a.scheme, &b.scheme, depth)?
                }
                OracleQuestion::Comb { a } => comb_by_growth(&load(&a)?.scheme)?,
            };
            let v = Verdict::from_bool(yes);
            println!("{v}");
            v
        }
        Command::Make { kind, name } => {
            let kind: TreeKind = kind.parse()?;
            print!("{}", serialize_scheme(&name, &make(&kind)?));
            Verdict::Yes
        }
    };
    Ok(verdict)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    match run(cli) {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
