//! Brute-force ground truth for the decision procedures, working on finite
//! truncations only.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::finite_tree::{embed_rooted, CodeInterner, RootedFiniteTree};
use crate::matching::saturates_left;
use crate::multiplicity::Multiplicity;
use crate::scheme::{materialize, truncate, Scheme, SchemeError, StateId};

/// Trees up to this size are materialized and compared explicitly.
pub const EXPLICIT_LIMIT: usize = 400;

/// Both sides this small also go through plain backtracking.
const BACKTRACK_LIMIT: usize = 24;

fn label(s: &Scheme, q: StateId, table: &mut CodeInterner, memo: &mut HashMap<StateId, u32>) -> u32 {
    if let Some(&l) = memo.get(&q) {
        return l;
    }
    let kids: Vec<(u32, Multiplicity)> = s
        .children(q)
        .iter()
        .map(|e| (label(s, e.state, table, memo), e.mult))
        .collect();
    let l = table.intern(kids);
    memo.insert(q, l);
    l
}

/// Are the depth-`n` truncations rooted-isomorphic? Bottom-up hash-consed
/// codes over the truncated presentations; `ω` groups are fine.
pub fn truncation_iso(a: &Scheme, b: &Scheme, n: usize) -> bool {
    let (ta, tb) = (truncate(a, n), truncate(b, n));
    let mut table = CodeInterner::new();
    let la = label(&ta, ta.root(), &mut table, &mut HashMap::new());
    let lb = label(&tb, tb.root(), &mut table, &mut HashMap::new());
    la == lb
}

/// Root-preserving embedding of explicit trees by plain backtracking:
/// vertices of `s` in breadth-first order, each tried on every unused child
/// of its parent's image. Pruned only by subtree size and height.
pub fn backtrack_embed(s: &RootedFiniteTree, t: &RootedFiniteTree) -> bool {
    fn measures(t: &RootedFiniteTree) -> (Vec<usize>, Vec<usize>) {
        let mut size = vec![1; t.len()];
        let mut height = vec![0; t.len()];
        for v in t.bfs_order().into_iter().rev() {
            if let Some(p) = t.parent(v) {
                size[p] += size[v];
                height[p] = height[p].max(height[v] + 1);
            }
        }
        (size, height)
    }
    let (ss, hs) = measures(s);
    let (st, ht) = measures(t);
    let fits = |v: usize, w: usize| ss[v] <= st[w] && hs[v] <= ht[w];
    if !fits(s.root(), t.root()) {
        return false;
    }
    let order = s.bfs_order();
    let mut map = vec![usize::MAX; s.len()];
    let mut used = vec![false; t.len()];
    map[s.root()] = t.root();
    used[t.root()] = true;

    fn go(
        k: usize,
        s: &RootedFiniteTree,
        t: &RootedFiniteTree,
        order: &[usize],
        map: &mut [usize],
        used: &mut [bool],
        fits: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        let img = map[s.parent(v).expect("non-root")];
        for &w in t.children(img) {
            if used[w] || !fits(v, w) {
                continue;
            }
            used[w] = true;
            map[v] = w;
            if go(k + 1, s, t, order, map, used, fits) {
                return true;
            }
            used[w] = false;
        }
        false
    }
    go(1, s, t, &order, &mut map, &mut used, &fits)
}

/// Embedding of depth-`d` truncations from states `(q, r)`, by recursion on
/// depth with memoization. Each entry is expanded into its copies and the
/// copies are matched by augmenting paths.
struct Memo<'a> {
    a: &'a Scheme,
    b: &'a Scheme,
    seen: HashMap<(StateId, StateId, usize), bool>,
}

impl Memo<'_> {
    fn embeds(&mut self, q: StateId, r: StateId, d: usize) -> bool {
        if d == 0 {
            return true;
        }
        if let Some(&x) = self.seen.get(&(q, r, d)) {
            return x;
        }
        let src: Vec<StateId> = self
            .a
            .children(q)
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.state, e.mult.finite().expect("finite") as usize))
            .collect();
        let want = src.len() as u64;
        let tgt: Vec<StateId> = self
            .b
            .children(r)
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.state, e.mult.clamp_to(want) as usize))
            .collect();
        let ok = src.len() <= tgt.len() && {
            let mut adj = Vec::with_capacity(src.len());
            for &x in &src {
                let row: Vec<usize> = (0..tgt.len()).filter(|&j| self.embeds(x, tgt[j], d - 1)).collect();
                adj.push(row);
            }
            saturates_left(&adj, tgt.len())
        };
        self.seen.insert((q, r, d), ok);
        ok
    }
}

/// Ground truth for rooted embedding at depth `n`. Small truncations are
/// materialized and embedded explicitly, with the witness map checked and,
/// for tiny ones, the answer compared against backtracking. Larger ones use
/// the memoized recursion. The source truncation must be locally finite.
pub fn oracle_embed_trunc(a: &Scheme, b: &Scheme, n: usize) -> Result<bool, SchemeError> {
    let ta = truncate(a, n);
    let tb = truncate(b, n);
    if ta.has_omega() {
        return Err(SchemeError::InfiniteUnfolding);
    }
    if !tb.has_omega() {
        let small = |s: &Scheme| crate::scheme::unfold_limited(s, n, EXPLICIT_LIMIT).ok().map(|u| u.tree);
        if let (Some(sa), Some(sb)) = (small(&ta), small(&tb)) {
            let found = match embed_rooted(&sa, &sb) {
                Some(map) => {
                    assert!(
                        map.is_rooted_embedding(&sa, &sb),
                        "explicit witness is not an embedding"
                    );
                    true
                }
                None => false,
            };
            if sa.len().max(sb.len()) <= BACKTRACK_LIMIT {
                assert_eq!(found, backtrack_embed(&sa, &sb), "explicit searches disagree");
            }
            return Ok(found);
        }
    }
    let mut memo = Memo {
        a,
        b,
        seen: HashMap::new(),
    };
    Ok(memo.embeds(a.root(), b.root(), n))
}

/// Number of vertices of degree at least 3 in the depth-`n` truncation,
/// counting state occurrences level by level. Needs finite multiplicities.
pub fn branching_count(s: &Scheme, n: usize) -> Result<BigUint, SchemeError> {
    if s.has_omega() {
        return Err(SchemeError::InfiniteUnfolding);
    }
    let wide = |q: StateId, root: bool| {
        let deg = s.out_degree(q).finite().expect("finite") + u64::from(!root);
        deg >= 3
    };
    let mut level = vec![BigUint::ZERO; s.len()];
    level[s.root()] = BigUint::from(1u32);
    let mut total = BigUint::ZERO;
    for d in 0..n {
        let mut next = vec![BigUint::ZERO; s.len()];
        for q in s.states() {
            if level[q] == BigUint::ZERO {
                continue;
            }
            if wide(q, d == 0) {
                total += &level[q];
            }
            for e in s.children(q) {
                next[e.state] += &level[q] * e.mult.finite().expect("finite");
            }
        }
        level = next;
    }
    Ok(total)
}

/// Comb oracle: does the number of branching vertices keep growing between
/// depth `2·|states|` and `6·|states|`?
pub fn comb_by_growth(s: &Scheme) -> Result<bool, SchemeError> {
    let k = s.len();
    Ok(branching_count(s, 6 * k)? > branching_count(s, 2 * k)?)
}

/// Explicit comparison of materialized truncations, for cross-checking the
/// other oracles on small inputs.
pub fn materialized_iso(a: &Scheme, b: &Scheme, n: usize) -> Result<bool, SchemeError> {
    let ta = materialize(&truncate(a, n))?;
    let tb = materialize(&truncate(b, n))?;
    Ok(crate::finite_tree::iso_rooted(&ta, &tb))
}
