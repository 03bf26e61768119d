//! Bipartite matching and capacitated assignment.
//!
//! Unit matching (Kuhn's augmenting paths) backs the explicit-tree embedding
//! search. The capacitated variant backs scheme embedding, where each side of
//! the bipartite graph is a list of child entries carrying multiplicities.

use crate::multiplicity::Multiplicity;

/// Maximum matching from the left side into the right side.
///
/// `adj[i]` lists right vertices admissible for left vertex `i`, tried in the
/// given order. Returns `left -> right`.
pub fn max_matching(adj: &[Vec<usize>], right_n: usize) -> Vec<Option<usize>> {
    let mut match_right: Vec<Option<usize>> = vec![None; right_n];
    for i in 0..adj.len() {
        let mut seen = vec![false; right_n];
        augment(i, adj, &mut match_right, &mut seen);
    }
    let mut match_left = vec![None; adj.len()];
    for (j, m) in match_right.iter().enumerate() {
        if let Some(i) = *m {
            match_left[i] = Some(j);
        }
    }
    match_left
}

fn augment(i: usize, adj: &[Vec<usize>], match_right: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match match_right[j] {
            None => true,
            Some(k) => augment(k, adj, match_right, seen),
        };
        if free {
            match_right[j] = Some(i);
            return true;
        }
    }
    false
}

/// True iff every left vertex can be matched.
pub fn saturates_left(adj: &[Vec<usize>], right_n: usize) -> bool {
    max_matching(adj, right_n).iter().all(Option::is_some)
}

/// Left-saturating matching that is lexicographically smallest when read
/// left to right (each left vertex gets the lowest right index that still
/// admits a completion).
pub fn lex_min_saturating(adj: &[Vec<usize>], right_n: usize) -> Option<Vec<usize>> {
    let mut used = vec![false; right_n];
    let mut chosen = Vec::with_capacity(adj.len());
    for i in 0..adj.len() {
        let mut options: Vec<usize> = adj[i].iter().copied().filter(|&j| !used[j]).collect();
        options.sort_unstable();
        let pick = options.into_iter().find(|&j| {
            used[j] = true;
            let rest: Vec<Vec<usize>> = adj[i + 1..]
                .iter()
                .map(|row| row.iter().copied().filter(|&k| !used[k]).collect())
                .collect();
            let ok = saturates_left(&rest, right_n);
            used[j] = false;
            ok
        })?;
        used[pick] = true;
        chosen.push(pick);
    }
    Some(chosen)
}

/// One cell of a capacitated assignment: `amount` copies of source entry
/// `source` are sent to target entry `target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transfer {
    pub source: usize,
    pub target: usize,
    pub amount: Multiplicity,
}

/// Decides whether demands can be injected into capacities along allowed
/// cells.
///
/// An `ω` demand can only be served by an allowed `ω` capacity, and one `ω`
/// capacity serves any number of `ω` demands together with any finite load.
/// Finite demands reduce to a max-flow where `ω` capacities are clamped to the
/// total finite demand.
pub fn transport_feasible(
    demands: &[Multiplicity],
    caps: &[Multiplicity],
    allowed: impl Fn(usize, usize) -> bool,
) -> bool {
    for (i, d) in demands.iter().enumerate() {
        if d.is_omega() && !(0..caps.len()).any(|j| caps[j].is_omega() && allowed(i, j)) {
            return false;
        }
    }
    let net = FlowProblem::new(demands, caps, &allowed, &[], None);
    net.max_flow() == net.total_demand
}

/// Lexicographically greedy assignment: cells are visited in `(source,
/// target)` order and each receives the largest amount that keeps the rest
/// feasible.
pub fn transport_assign(
    demands: &[Multiplicity],
    caps: &[Multiplicity],
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<Vec<Transfer>> {
    if !transport_feasible(demands, caps, &allowed) {
        return None;
    }
    let mut transfers = Vec::new();
    for (i, d) in demands.iter().enumerate() {
        if d.is_omega() {
            let j = (0..caps.len()).find(|&j| caps[j].is_omega() && allowed(i, j))?;
            transfers.push(Transfer {
                source: i,
                target: j,
                amount: Multiplicity::Omega,
            });
        }
    }
    let mut fixed: Vec<(usize, usize, u64)> = Vec::new();
    for (i, d) in demands.iter().enumerate() {
        let Some(demand) = d.finite() else { continue };
        let mut remaining = demand;
        for j in 0..caps.len() {
            if remaining == 0 {
                break;
            }
            if !allowed(i, j) {
                continue;
            }
            // largest x in [0, remaining] with the residual still feasible
            let (mut lo, mut hi) = (0u64, remaining.min(caps[j].clamp_to(remaining)));
            while lo < hi {
                let mid = lo + (hi - lo).div_ceil(2);
                let net = FlowProblem::new(demands, caps, &allowed, &fixed, Some((i, j, mid)));
                if net.feasible_with_fixed() {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            if lo > 0 {
                fixed.push((i, j, lo));
                remaining -= lo;
                transfers.push(Transfer {
                    source: i,
                    target: j,
                    amount: Multiplicity::Finite(lo),
                });
            }
        }
        debug_assert_eq!(remaining, 0);
    }
    transfers.sort();
    Some(transfers)
}

/// Source -> demand nodes -> capacity nodes -> sink, finite part only.
struct FlowProblem {
    n: usize,
    cap: Vec<Vec<u64>>,
    total_demand: u64,
    fixed_total: u64,
}

impl FlowProblem {
    fn new(
        demands: &[Multiplicity],
        caps: &[Multiplicity],
        allowed: &impl Fn(usize, usize) -> bool,
        fixed: &[(usize, usize, u64)],
        at_least: Option<(usize, usize, u64)>,
    ) -> Self {
        let left = demands.len();
        let right = caps.len();
        let n = left + right + 2;
        let (s, t) = (left + right, left + right + 1);
        let total_demand: u64 = demands.iter().filter_map(|d| d.finite()).sum();
        let mut cap = vec![vec![0u64; n]; n];
        let mut fixed_out = vec![0u64; left];
        let mut fixed_in = vec![0u64; right];
        let mut fixed_total = 0;
        for &(i, j, x) in fixed.iter().chain(&at_least) {
            fixed_out[i] += x;
            fixed_in[j] += x;
            fixed_total += x;
        }
        for (i, d) in demands.iter().enumerate() {
            if let Some(d) = d.finite() {
                cap[s][i] = d.saturating_sub(fixed_out[i]);
                if fixed_out[i] > d {
                    cap[s][i] = 0;
                    fixed_total = u64::MAX;
                }
            }
        }
        for (j, c) in caps.iter().enumerate() {
            let c = c.clamp_to(total_demand);
            if fixed_in[j] > c {
                fixed_total = u64::MAX;
            }
            cap[left + j][t] = c.saturating_sub(fixed_in[j]);
        }
        // a fixed cell is exact, so a source only keeps the targets after it;
        // the cell under trial is a lower bound and stays open
        let mut frontier = vec![0usize; left];
        for &(i, j, _) in fixed {
            frontier[i] = frontier[i].max(j + 1);
        }
        if let Some((i, j, _)) = at_least {
            frontier[i] = frontier[i].max(j);
        }
        for i in 0..left {
            if demands[i].is_omega() {
                continue;
            }
            for j in 0..right {
                if allowed(i, j) && j >= frontier[i] {
                    cap[i][left + j] = total_demand;
                }
            }
        }
        FlowProblem {
            n,
            cap,
            total_demand,
            fixed_total,
        }
    }

    fn feasible_with_fixed(&self) -> bool {
        if self.fixed_total == u64::MAX {
            return false;
        }
        self.max_flow() + self.fixed_total == self.total_demand
    }

    /// Edmonds–Karp on a dense matrix; the graphs here have a handful of nodes.
    fn max_flow(&self) -> u64 {
        let (s, t) = (self.n - 2, self.n - 1);
        let mut residual = self.cap.clone();
        let mut flow = 0u64;
        loop {
            let mut prev = vec![usize::MAX; self.n];
            prev[s] = s;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..self.n {
                    if prev[v] == usize::MAX && residual[u][v] > 0 {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                return flow;
            }
            let mut bottleneck = u64::MAX;
            let mut v = t;
            while v != s {
                let u = prev[v];
                bottleneck = bottleneck.min(residual[u][v]);
                v = u;
            }
            let mut v = t;
            while v != s {
                let u = prev[v];
                residual[u][v] -= bottleneck;
                residual[v][u] += bottleneck;
                v = u;
            }
            flow += bottleneck;
        }
    }
}
