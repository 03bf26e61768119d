//! Text format for schemes and finite trees.
//!
//! ```text
//! # the caterpillar
//! scheme cat {
//!   root S;
//!   S -> [S, L];
//!   L -> [];
//! }
//!
//! tree cherry { edges (0,1) (0,2); root 0; }
//! ```
//!
//! Entries are `state`, `state*3` or `state*w` (countably many). A referenced
//! state must have its own rule somewhere in the block.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::finite_tree::{FiniteTree, RootedFiniteTree, TreeError};
use crate::multiplicity::Multiplicity;
use crate::scheme::{Entry, RawScheme, Scheme, SchemeError, VertexAddress};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid scheme: {0}")]
    Validation(#[from] SchemeError),
    #[error("invalid tree: {0}")]
    Tree(#[from] TreeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Arrow,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Semi,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Arrow => "`->`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Parse {
        line,
        col,
        msg: msg.into(),
    })
}

fn lex(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut bump = |i: &mut usize, n: usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => bump(&mut i, 1),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                bump(&mut i, 2);
                out.push(Spanned {
                    tok: Tok::Arrow,
                    line: l0,
                    col: c0,
                });
            }
            '{' | '}' | '[' | ']' | '(' | ')' | ',' | ';' | '*' => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    _ => Tok::Star,
                };
                bump(&mut i, 1);
                out.push(Spanned { tok, line: l0, col: c0 });
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                col += i - start;
                let Ok(n) = digits.parse() else {
                    return err(l0, c0, format!("number `{digits}` is too large"));
                };
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: l0,
                    col: c0,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: l0,
                    col: c0,
                });
            }
            _ => return err(l0, c0, format!("unexpected character `{c}`")),
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// A parsed document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Scheme {
        name: String,
        scheme: Scheme,
    },
    Tree {
        name: String,
        tree: FiniteTree,
        root: usize,
    },
}

impl Document {
    pub fn name(&self) -> &str {
        match self {
            Document::Scheme { name, .. } | Document::Tree { name, .. } => name,
        }
    }

    /// Trees become one-state-per-vertex schemes rooted at their root.
    pub fn into_scheme(self) -> Scheme {
        match self {
            Document::Scheme { scheme, .. } => scheme,
            Document::Tree { tree, root, .. } => Scheme::from_rooted_tree(&tree.rooted_at(root)),
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Spanned, DslError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            err(
                t.line,
                t.col,
                format!("expected {}, found {}", want.describe(), t.tok.describe()),
            )
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), DslError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.line, t.col)),
            other => err(t.line, t.col, format!("expected {what}, found {}", other.describe())),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        let (s, line, col) = self.ident(&format!("`{kw}`"))?;
        if s == kw {
            Ok(())
        } else {
            err(line, col, format!("expected `{kw}`, found `{s}`"))
        }
    }

    fn int(&mut self) -> Result<(u64, usize, usize), DslError> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok((n, t.line, t.col)),
            other => err(t.line, t.col, format!("expected a number, found {}", other.describe())),
        }
    }

    fn document(&mut self) -> Result<Document, DslError> {
        let (kind, line, col) = self.ident("`scheme` or `tree`")?;
        match kind.as_str() {
            "scheme" => self.scheme_body(),
            "tree" => self.tree_body(),
            _ => err(line, col, format!("expected `scheme` or `tree`, found `{kind}`")),
        }
    }

    fn scheme_body(&mut self) -> Result<Document, DslError> {
        let (name, ..) = self.ident("a scheme name")?;
        self.expect(Tok::LBrace)?;
        self.keyword("root")?;
        let (root, root_line, root_col) = self.ident("the root state")?;
        self.expect(Tok::Semi)?;
        // (head, entries as (target, mult, line, col))
        type Refs = Vec<(String, Multiplicity, usize, usize)>;
        let mut rules: Vec<(String, Refs)> = Vec::new();
        loop {
            if self.peek().tok == Tok::RBrace {
                if rules.is_empty() {
                    let t = self.peek();
                    return err(t.line, t.col, "a scheme needs at least one rule");
                }
                self.next();
                break;
            }
            let (head, line, col) = self.ident("a state name or `}`")?;
            if rules.iter().any(|(h, _)| *h == head) {
                return err(line, col, format!("state `{head}` has two rules"));
            }
            self.expect(Tok::Arrow)?;
            self.expect(Tok::LBrack)?;
            let mut entries = Vec::new();
            if self.peek().tok != Tok::RBrack {
                loop {
                    let (target, tl, tc) = self.ident("a state name")?;
                    let mut mult = Multiplicity::ONE;
                    if self.peek().tok == Tok::Star {
                        self.next();
                        let t = self.next();
                        mult = match t.tok {
                            Tok::Int(n) => Multiplicity::Finite(n),
                            Tok::Ident(ref w) if w == "w" => Multiplicity::Omega,
                            other => {
                                return err(
                                    t.line,
                                    t.col,
                                    format!("expected a number or `w`, found {}", other.describe()),
                                )
                            }
                        };
                    }
                    entries.push((target, mult, tl, tc));
                    if self.peek().tok == Tok::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RBrack)?;
            self.expect(Tok::Semi)?;
            rules.push((head, entries));
        }
        let index: HashMap<&str, usize> = rules.iter().enumerate().map(|(i, (h, _))| (h.as_str(), i)).collect();
        let Some(&root_id) = index.get(root.as_str()) else {
            return err(root_line, root_col, format!("root state `{root}` has no rule"));
        };
        let mut children = Vec::with_capacity(rules.len());
        for (_, entries) in &rules {
            let mut es = Vec::with_capacity(entries.len());
            for (target, mult, line, col) in entries {
                let Some(&id) = index.get(target.as_str()) else {
                    return err(*line, *col, format!("state `{target}` has no rule"));
                };
                es.push(Entry::new(id, *mult));
            }
            children.push(es);
        }
        let raw = RawScheme {
            names: rules.into_iter().map(|(h, _)| h).collect(),
            root: root_id,
            children,
        };
        Ok(Document::Scheme {
            name,
            scheme: raw.into_scheme()?,
        })
    }

    fn tree_body(&mut self) -> Result<Document, DslError> {
        let (name, ..) = self.ident("a tree name")?;
        self.expect(Tok::LBrace)?;
        self.keyword("edges")?;
        let mut edges = Vec::new();
        while self.peek().tok == Tok::LParen {
            self.next();
            let (u, ..) = self.int()?;
            self.expect(Tok::Comma)?;
            let (v, ..) = self.int()?;
            self.expect(Tok::RParen)?;
            edges.push((u as usize, v as usize));
            if self.peek().tok == Tok::Comma {
                self.next();
            }
        }
        self.expect(Tok::Semi)?;
        self.keyword("root")?;
        let (root, line, col) = self.int()?;
        self.expect(Tok::Semi)?;
        self.expect(Tok::RBrace)?;
        let n = edges
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .chain([root as usize + 1])
            .max()
            .unwrap_or(1);
        let tree = FiniteTree::new(n, edges)?;
        if root as usize >= tree.len() {
            return err(line, col, "root is not a vertex");
        }
        Ok(Document::Tree {
            name,
            tree,
            root: root as usize,
        })
    }
}

/// Parses every document in `text`.
pub fn parse_all(text: &str) -> Result<Vec<Document>, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut docs = Vec::new();
    while p.peek().tok != Tok::Eof {
        docs.push(p.document()?);
    }
    Ok(docs)
}

/// Parses exactly one document.
pub fn parse(text: &str) -> Result<Document, DslError> {
    let mut docs = parse_all(text)?;
    match docs.len() {
        1 => Ok(docs.pop().expect("one")),
        0 => err(1, 1, "no document found"),
        _ => err(1, 1, format!("expected one document, found {}", docs.len())),
    }
}

/// Parses one document and returns it as a scheme.
pub fn parse_scheme(text: &str) -> Result<Scheme, DslError> {
    parse(text).map(Document::into_scheme)
}

pub fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Canonical text of a scheme: rules in state order, entries in stored
/// order, multiplicity 1 left implicit.
pub fn serialize_scheme(name: &str, s: &Scheme) -> String {
    let mut out = String::new();
    writeln!(out, "scheme {name} {{").unwrap();
    writeln!(out, "  root {};", s.name(s.root())).unwrap();
    for q in s.states() {
        let entries: Vec<String> = s
            .children(q)
            .iter()
            .map(|e| match e.mult {
                Multiplicity::Finite(1) => s.name(e.state).to_string(),
                m => format!("{}*{}", s.name(e.state), m.dsl_token()),
            })
            .collect();
        writeln!(out, "  {} -> [{}];", s.name(q), entries.join(", ")).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn serialize_tree(name: &str, t: &FiniteTree, root: usize) -> String {
    let edges: Vec<String> = t.edges().iter().map(|(u, v)| format!("({u},{v})")).collect();
    format!("tree {name} {{\n  edges {};\n  root {root};\n}}\n", edges.join(" "))
}

pub fn serialize_rooted_tree(name: &str, t: &RootedFiniteTree) -> String {
    serialize_tree(name, &t.unrooted(), t.root())
}

/// `name:copy/name:copy/...`; empty or `.` is the root.
pub fn parse_address(s: &Scheme, text: &str) -> Result<VertexAddress, DslError> {
    let text = text.trim();
    if text.is_empty() || text == "." {
        return Ok(VertexAddress::root());
    }
    let mut steps = Vec::new();
    let mut col = 1;
    for part in text.split('/') {
        let (name, copy) = part.split_once(':').unwrap_or((part, "0"));
        let Some(q) = s.state(name) else {
            return err(1, col, format!("no state named `{name}`"));
        };
        let Ok(copy) = copy.parse::<u64>() else {
            return err(1, col + name.len() + 1, format!("bad copy index `{copy}`"));
        };
        steps.push((q, copy));
        col += part.len() + 1;
    }
    let addr = VertexAddress::new(steps);
    addr.resolve(s)?;
    Ok(addr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make, TreeKind};
    use crate::decide::{scheme_iso_rooted, Verdict};
    use crate::finite_tree::iso_unrooted;

    #[test]
    fn parses_the_ray_and_the_caterpillar() {
        let ray = parse_scheme("scheme ray { root A; A -> [A]; }").unwrap();
        assert_eq!(ray.len(), 1);
        let cat = parse_scheme("scheme cat { root S; S -> [S, L]; L -> []; }").unwrap();
        let lib = make(&TreeKind::Caterpillar).unwrap();
        assert_eq!(scheme_iso_rooted(&cat, &lib).verdict, Verdict::Yes);
    }

    #[test]
    fn undeclared_state_is_an_error_with_position() {
        let e = parse_scheme("scheme bad { root A; A -> [B]; }").unwrap_err();
        assert_eq!(
            e,
            DslError::Parse {
                line: 1,
                col: 28,
                msg: "state `B` has no rule".into()
            }
        );
    }

    #[test]
    fn multiplicities_and_comments() {
        let text =
            "# a star of paths\nscheme s {\n  root R; # root first\n  R -> [P*w, Q*3];\n  P -> [];\n  Q -> [P];\n}\n";
        let s = parse_scheme(text).unwrap();
        assert_eq!(s.out_degree(s.root()), Multiplicity::Omega);
        assert_eq!(s.children(s.root())[1].mult, Multiplicity::Finite(3));
    }

    #[test]
    fn diagnostics_carry_line_and_column() {
        let e = parse_scheme("scheme s {\n  root R;\n  R -> [R*];\n}").unwrap_err();
        assert!(matches!(e, DslError::Parse { line: 3, col: 11, .. }), "{e}");
        let e = parse_scheme("scheme s { root R; R -> [R] }").unwrap_err();
        assert!(matches!(e, DslError::Parse { line: 1, col: 29, .. }), "{e}");
        let e = parse_scheme("scheme s { root R; R -> [R]; R -> []; }").unwrap_err();
        assert!(e.to_string().contains("two rules"));
        let e = parse_scheme("scheme s { root R; R -> [R] ; } $").unwrap_err();
        assert!(e.to_string().contains("unexpected character"));
    }

    #[test]
    fn validation_errors_are_separate() {
        let e = parse_scheme("scheme s { root R; R -> [L*0]; L -> []; }").unwrap_err();
        assert!(matches!(e, DslError::Validation(SchemeError::ZeroMultiplicity { .. })));
        let e = parse_scheme("scheme s { root R; R -> []; L -> []; }").unwrap_err();
        assert!(matches!(e, DslError::Validation(SchemeError::Unreachable(_))));
        let e = parse_scheme("scheme s { root R; R -> [L, L]; L -> []; }").unwrap_err();
        assert!(matches!(e, DslError::Validation(SchemeError::DuplicateTarget { .. })));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let s = Scheme::from_rules(
            "R",
            &[
                ("R", &[("P", Multiplicity::Omega), ("R", Multiplicity::ONE)]),
                ("P", &[("P", Multiplicity::Finite(2))]),
            ],
        )
        .unwrap();
        let text = serialize_scheme("x", &s);
        assert_eq!(text, "scheme x {\n  root R;\n  R -> [R, P*w];\n  P -> [P*2];\n}\n");
        let back = parse_scheme(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serialize_scheme("x", &back), text);
    }

    #[test]
    fn trees() {
        let doc = parse("tree cherry { edges (0,1) (0,2); root 0; }").unwrap();
        let Document::Tree { tree, root, .. } = &doc else {
            panic!()
        };
        assert!(iso_unrooted(tree, &FiniteTree::path(3)));
        assert_eq!(*root, 0);
        let text = serialize_tree("cherry", tree, *root);
        assert_eq!(parse(&text).unwrap(), doc);
        let single = parse("tree one { edges ; root 0; }").unwrap().into_scheme();
        assert_eq!(single.len(), 1);
        assert!(matches!(
            parse("tree t { edges (0,1) (1,0); root 0; }"),
            Err(DslError::Tree(_))
        ));
    }

    #[test]
    fn several_documents() {
        let docs = parse_all("scheme a { root A; A -> []; }\nscheme b { root B; B -> [B]; }").unwrap();
        assert_eq!(docs.len(), 2);
        assert!(parse("scheme a { root A; A -> []; } scheme b { root B; B -> []; }").is_err());
    }

    #[test]
    fn addresses() {
        let cat = make(&TreeKind::Caterpillar).unwrap();
        let a = parse_address(&cat, "S:0/S/L:0").unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.display_with(&cat).to_string(), "S:0/S:0/L:0");
        assert!(parse_address(&cat, "L:1").is_err());
        assert!(parse_address(&cat, "Q:0").is_err());
        assert!(parse_address(&cat, ".").unwrap().is_empty());
    }
}
