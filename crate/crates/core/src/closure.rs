//! Minimum-weight closure of a DAG via max-flow (project selection).
//!
//! An arc `(a, b)` means "`b` selected implies `a` selected". The optimizer
//! returns the inclusion-minimal closed set of least total weight that
//! contains every forced node and avoids every forbidden one.

use std::collections::VecDeque;

/// Dinic max-flow on integer capacities.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), level: vec![0; n], iter: vec![0; n] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize, c: i64) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &e in &self.head[v] {
                let t = self.to[e];
                if self.cap[e] > 0 && self.level[t] < 0 {
                    self.level[t] = self.level[v] + 1;
                    q.push_back(t);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.head[v].len() {
            let e = self.head[v][self.iter[v]];
            let u = self.to[e];
            if self.cap[e] > 0 && self.level[v] < self.level[u] {
                let d = self.dfs(u, t, f.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `s` in the residual graph.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.head[v] {
                let t = self.to[e];
                if self.cap[e] > 0 && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// Nodes reachable from `start` along `arcs` (forward direction), including `start`.
pub(crate) fn reach(n: usize, arcs: &[(usize, usize)], start: &[usize], forward: bool) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in arcs {
        if forward {
            adj[a].push(b);
        } else {
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &t in &adj[v] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Minimum-weight closed subset of `0..n` under `arcs`, or `None` when the
/// forced nodes cannot be selected without a forbidden one.
pub fn min_weight_closure(
    n: usize,
    weights: &[i64],
    arcs: &[(usize, usize)],
    forced: &[usize],
    forbidden: &[usize],
) -> Option<Vec<bool>> {
    assert_eq!(weights.len(), n);
    let deleted = reach(n, arcs, forbidden, true);
    let needed = reach(n, arcs, forced, false);
    if (0..n).any(|v| deleted[v] && needed[v]) {
        return None;
    }

    let (s, t) = (n, n + 1);
    let inf: i64 = weights.iter().map(|w| w.abs()).sum::<i64>() + 1;
    let mut net = FlowNetwork::new(n + 2);
    for v in (0..n).filter(|&v| !deleted[v]) {
        let profit = -weights[v];
        if needed[v] {
            net.add_edge(s, v, inf);
        } else if profit > 0 {
            net.add_edge(s, v, profit);
        }
        if profit < 0 {
            net.add_edge(v, t, -profit);
        }
    }
    for &(a, b) in arcs {
        if !deleted[a] && !deleted[b] {
            net.add_edge(b, a, inf);
        }
    }
    net.max_flow(s, t);
    let side = net.source_side(s);
    Some((0..n).map(|v| side[v] && !deleted[v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(n: usize, arcs: &[(usize, usize)], set: &[bool]) -> bool {
        let _ = n;
        arcs.iter().all(|&(a, b)| !set[b] || set[a])
    }

    fn brute(n: usize, w: &[i64], arcs: &[(usize, usize)], forced: &[usize], forbidden: &[usize]) -> Option<i64> {
        (0u32..1 << n)
            .filter_map(|mask| {
                let set: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let ok = closed(n, arcs, &set) && forced.iter().all(|&f| set[f]) && forbidden.iter().all(|&f| !set[f]);
                ok.then(|| (0..n).filter(|&i| set[i]).map(|i| w[i]).sum())
            })
            .min()
    }

    #[test]
    fn max_flow_small() {
        let mut g = FlowNetwork::new(4);
        g.add_edge(0, 1, 3);
        g.add_edge(0, 2, 2);
        g.add_edge(1, 2, 5);
        g.add_edge(1, 3, 2);
        g.add_edge(2, 3, 3);
        assert_eq!(g.max_flow(0, 3), 5);
    }

    #[test]
    fn nonnegative_weights_give_empty_set() {
        let r = min_weight_closure(3, &[1, 0, 2], &[(0, 1), (1, 2)], &[], &[]).unwrap();
        assert_eq!(r, vec![false; 3]);
    }

    #[test]
    fn forced_node_pulls_in_predecessors() {
        let r = min_weight_closure(3, &[0, 0, 0], &[(0, 1), (1, 2)], &[1], &[]).unwrap();
        assert_eq!(r, vec![true, true, false]);
    }

    #[test]
    fn forced_with_forbidden_ancestor_is_infeasible() {
        assert!(min_weight_closure(3, &[0, 0, 0], &[(0, 1), (1, 2)], &[2], &[0]).is_none());
    }

    #[test]
    fn negative_weight_pays_for_predecessor() {
        let r = min_weight_closure(2, &[3, -5], &[(0, 1)], &[], &[]).unwrap();
        assert_eq!(r, vec![true, true]);
        let r = min_weight_closure(2, &[6, -5], &[(0, 1)], &[], &[]).unwrap();
        assert_eq!(r, vec![false, false]);
    }

    #[test]
    fn random_instances_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            let mut arcs = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) {
                        arcs.push((a, b));
                    }
                }
            }
            let forced: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.1)).collect();
            let forbidden: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.1)).collect();
            let got = min_weight_closure(n, &w, &arcs, &forced, &forbidden);
            let expect = brute(n, &w, &arcs, &forced, &forbidden);
            match (got, expect) {
                (None, None) => {}
                (Some(set), Some(best)) => {
                    assert!(closed(n, &arcs, &set));
                    assert!(forced.iter().all(|&f| set[f]));
                    assert!(forbidden.iter().all(|&f| !set[f]));
                    let total: i64 = (0..n).filter(|&i| set[i]).map(|i| w[i]).sum();
                    assert_eq!(total, best);
                }
                other => panic!("feasibility mismatch: {other:?}"),
            }
        }
    }
}
