//! Rotations, the rotation digraph and the closed-subset view of the
//! stable-matching lattice.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use crate::classic::{u_optimal, w_optimal};
use crate::closure;
use crate::error::{Error, Result};
use crate::matching::{egalitarian_cost_unchecked, is_stable_unchecked, Matching};
use crate::profile::{AgentId, Profile};

/// A cyclic sequence of `(u, w)` pairs, rotated so the smallest `u` is first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation {
    pairs: Vec<(usize, usize)>,
}

impl Rotation {
    /// Canonicalizes the cycle. Requires at least two pairs with distinct agents.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::InvalidInput("a rotation needs at least two pairs".into()));
        }
        let us: BTreeSet<_> = pairs.iter().map(|p| p.0).collect();
        let ws: BTreeSet<_> = pairs.iter().map(|p| p.1).collect();
        if us.len() != pairs.len() || ws.len() != pairs.len() {
            return Err(Error::InvalidInput("rotation agents must be distinct".into()));
        }
        let first = (0..pairs.len()).min_by_key(|&i| pairs[i].0).unwrap();
        pairs.rotate_left(first);
        Ok(Rotation { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(u_i, w_i, w_{i+1})`: each `u_i` moves from `w_i` to `w_{i+1}`.
    pub fn moves(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let r = self.pairs.len();
        (0..r).map(move |i| (self.pairs[i].0, self.pairs[i].1, self.pairs[(i + 1) % r].1))
    }

    pub fn display(&self, p: &Profile) -> String {
        let parts: Vec<String> =
            self.pairs.iter().map(|&(u, w)| format!("({},{})", p.name(AgentId::u(u)), p.name(AgentId::w(w)))).collect();
        format!("({})", parts.join(","))
    }
}

/// First agent after `M(u)` in `u`'s list that is matched and prefers `u`
/// to its partner.
pub fn successor(p: &Profile, m: &Matching, u: usize) -> Result<Option<usize>> {
    let cur = m.u_mate(u).ok_or(Error::NoSuccessorDefined(AgentId::u(u)))?;
    Ok(successor_of(p, m, &Matching::empty(p.n_u(), p.n_w()), u, cur))
}

/// Successor restricted to entries up to `u`'s partner in `mz` (the whole
/// list when `u` is single there). Rotations are cycles of this restricted
/// successor: entries past the `W`-optimal partner never form a stable
/// pair with `u`, and cycles through them are not rotations.
fn successor_of(p: &Profile, m: &Matching, mz: &Matching, u: usize, cur: usize) -> Option<usize> {
    let list = p.u_list(u);
    let last = mz.u_mate(u).map_or(list.len(), |w| p.rank_u(u, w) + 1);
    list[(p.rank_u(u, cur) + 1).min(last)..last]
        .iter()
        .copied()
        .find(|&w| matches!(m.w_mate(w), Some(v) if p.rank_w(w, u) < p.rank_w(w, v)))
}

/// Cycles of `u -> M(succ(u))`, sorted by canonical form.
pub fn exposed_rotations(p: &Profile, m: &Matching) -> Result<Vec<Rotation>> {
    m.validate(p)?;
    if !is_stable_unchecked(p, m) {
        return Err(Error::InvalidInput("matching is not stable".into()));
    }
    Ok(exposed_unchecked(p, m, &w_optimal(p)))
}

fn exposed_unchecked(p: &Profile, m: &Matching, mz: &Matching) -> Vec<Rotation> {
    let n = p.n_u();
    let next: Vec<Option<usize>> = (0..n)
        .map(|u| {
            let cur = m.u_mate(u)?;
            let s = successor_of(p, m, mz, u, cur)?;
            m.w_mate(s)
        })
        .collect();
    // 0 unvisited, 1 on current path, 2 done
    let mut state = vec![0u8; n];
    let mut out = Vec::new();
    for start in 0..n {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(u) = cur {
            if state[u] != 0 {
                if state[u] == 1 {
                    let pos = path.iter().position(|&x| x == u).unwrap();
                    let cycle: Vec<(usize, usize)> = path[pos..].iter().map(|&x| (x, m.u_mate(x).unwrap())).collect();
                    out.push(Rotation::new(cycle).expect("successor cycle is a rotation"));
                }
                break;
            }
            state[u] = 1;
            path.push(u);
            cur = next[u];
        }
        for u in path {
            state[u] = 2;
        }
    }
    out.sort();
    out
}

/// Replaces each `(u_i, w_i)` with `(u_i, w_{i+1})`.
pub fn eliminate(m: &Matching, rho: &Rotation) -> Result<Matching> {
    if rho.pairs.iter().any(|&(u, w)| u >= m.n_u() || w >= m.n_w() || !m.contains(u, w)) {
        return Err(Error::InvalidInput("rotation is not contained in the matching".into()));
    }
    let mut out = m.clone();
    for (u, _, next) in rho.moves() {
        out.set_pair(u, next);
    }
    Ok(out)
}

/// Rotations of a profile with their precedence relation.
#[derive(Clone, Debug)]
pub struct RotationDigraph {
    rotations: Vec<Rotation>,
    arcs: Vec<(usize, usize)>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    // below[a][b]: a strictly precedes b
    below: Vec<Vec<bool>>,
    topo: Vec<usize>,
    u_opt: Matching,
    w_opt: Matching,
}

pub fn rotation_digraph(p: &Profile) -> RotationDigraph {
    let m0 = u_optimal(p);
    let mz = w_optimal(p);

    // one maximal chain visits every rotation exactly once
    let mut found = Vec::new();
    let mut m = m0.clone();
    loop {
        let exposed = exposed_unchecked(p, &m, &mz);
        let Some(rho) = exposed.into_iter().next() else { break };
        m = eliminate(&m, &rho).expect("exposed rotation is contained");
        found.push(rho);
    }
    debug_assert_eq!(m, mz);
    found.sort();
    let k = found.len();

    // producer: (u_i, w_{i+1}) -> rotation creating it
    let mut producer: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, rho) in found.iter().enumerate() {
        for (u, _, next) in rho.moves() {
            producer.insert((u, next), i);
        }
    }
    // for each w: rotations moving w's partner, as (old partner, new partner, rotation)
    let mut raises: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); p.n_w()];
    for (i, rho) in found.iter().enumerate() {
        let r = rho.pairs.len();
        for j in 0..r {
            let (uj, wj) = rho.pairs[j];
            let prev = rho.pairs[(j + r - 1) % r].0;
            raises[wj].push((uj, prev, i));
        }
    }

    let mut raw = BTreeSet::new();
    for (i, rho) in found.iter().enumerate() {
        for &(u, w) in &rho.pairs {
            if let Some(&j) = producer.get(&(u, w)) {
                if j != i {
                    raw.insert((j, i));
                }
            }
        }
        for (u, from, to) in rho.moves() {
            let list = p.u_list(u);
            for &w in &list[p.rank_u(u, from) + 1..p.rank_u(u, to)] {
                let r_u = p.rank_w(w, u);
                for &(old, new, j) in &raises[w] {
                    if p.rank_w(w, new) < r_u && r_u < p.rank_w(w, old) && j != i {
                        raw.insert((j, i));
                    }
                }
            }
        }
    }

    let raw: Vec<(usize, usize)> = raw.into_iter().collect();
    let below: Vec<Vec<bool>> = (0..k)
        .map(|a| {
            let mut r = closure::reach(k, &raw, &[a], true);
            r[a] = false;
            r
        })
        .collect();
    let mut arcs = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if below[a][b] && !(0..k).any(|c| below[a][c] && below[c][b]) {
                arcs.push((a, b));
            }
        }
    }
    let mut preds = vec![Vec::new(); k];
    let mut succs = vec![Vec::new(); k];
    for &(a, b) in &arcs {
        preds[b].push(a);
        succs[a].push(b);
    }

    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<Reverse<usize>> = (0..k).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut topo = Vec::with_capacity(k);
    while let Some(Reverse(v)) = heap.pop() {
        topo.push(v);
        for &s in &succs[v] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                heap.push(Reverse(s));
            }
        }
    }
    assert_eq!(topo.len(), k, "rotation digraph has a cycle");

    RotationDigraph { rotations: found, arcs, preds, succs, below, topo, u_opt: m0, w_opt: mz }
}

impl RotationDigraph {
    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// Hasse arcs `(a, b)`: `a` must be eliminated before `b`.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn preds(&self, v: usize) -> &[usize] {
        &self.preds[v]
    }

    pub fn succs(&self, v: usize) -> &[usize] {
        &self.succs[v]
    }

    /// Whether `a` strictly precedes `b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.below[a][b]
    }

    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn u_optimal(&self) -> &Matching {
        &self.u_opt
    }

    pub fn w_optimal(&self) -> &Matching {
        &self.w_opt
    }

    pub fn index_of(&self, rho: &Rotation) -> Option<usize> {
        self.rotations.binary_search(rho).ok()
    }

    pub fn is_closed(&self, s: &BTreeSet<usize>) -> bool {
        s.iter().all(|&v| v < self.len() && self.preds[v].iter().all(|a| s.contains(a)))
    }

    /// Eliminates `s` from the `U`-optimal matching in topological order.
    pub fn matching_of(&self, s: &BTreeSet<usize>) -> Result<Matching> {
        if !self.is_closed(s) {
            return Err(Error::NotClosed);
        }
        let mut m = self.u_opt.clone();
        for &v in self.topo.iter().filter(|v| s.contains(v)) {
            m = eliminate(&m, &self.rotations[v])?;
        }
        Ok(m)
    }

    /// All predecessor-closed subsets paired with their matchings.
    pub fn closed_subsets(&self) -> Vec<(BTreeSet<usize>, Matching)> {
        let mut out = Vec::new();
        let mut chosen = vec![false; self.len()];
        self.dfs(0, &mut chosen, self.u_opt.clone(), &mut out);
        out
    }

    fn dfs(&self, i: usize, chosen: &mut Vec<bool>, m: Matching, out: &mut Vec<(BTreeSet<usize>, Matching)>) {
        if i == self.topo.len() {
            let set = (0..self.len()).filter(|&v| chosen[v]).collect();
            out.push((set, m));
            return;
        }
        let v = self.topo[i];
        self.dfs(i + 1, chosen, m.clone(), out);
        if self.preds[v].iter().all(|&a| chosen[a]) {
            chosen[v] = true;
            let next = eliminate(&m, &self.rotations[v]).expect("exposed rotation is contained");
            self.dfs(i + 1, chosen, next, out);
            chosen[v] = false;
        }
    }

    /// DOT rendering: nodes labelled by their cycles, arcs by precedence.
    pub fn to_dot(&self, p: &Profile) -> String {
        let mut s = String::from("digraph rotations {\n");
        for (i, rho) in self.rotations.iter().enumerate() {
            let _ = writeln!(s, "  r{i} [label=\"{}\"];", rho.display(p));
        }
        for &(a, b) in &self.arcs {
            let _ = writeln!(s, "  r{a} -> r{b};");
        }
        s.push_str("}\n");
        s
    }
}

pub fn enumerate_stable_matchings(p: &Profile) -> Vec<Matching> {
    rotation_digraph(p).closed_subsets().into_iter().map(|(_, m)| m).collect()
}

/// Pairs occurring in some stable matching.
pub fn stable_pairs(p: &Profile) -> BTreeSet<(usize, usize)> {
    let d = rotation_digraph(p);
    let mut out: BTreeSet<_> = d.w_opt.pairs().collect();
    for rho in &d.rotations {
        out.extend(rho.pairs.iter().copied());
    }
    out
}

/// Change in egalitarian cost caused by eliminating each rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationWeights(pub Vec<i64>);

impl RotationWeights {
    /// Weights with ranks taken from `p`, which may differ from the profile
    /// the digraph was built on as long as all pairs stay acceptable.
    pub fn new(p: &Profile, d: &RotationDigraph) -> Self {
        let r = |x: usize| x as i64;
        RotationWeights(
            d.rotations
                .iter()
                .map(|rho| {
                    let k = rho.pairs.len();
                    (0..k)
                        .map(|i| {
                            let (ui, wi) = rho.pairs[i];
                            let (un, wn) = rho.pairs[(i + 1) % k];
                            r(p.rank_u(ui, wn)) - r(p.rank_u(ui, wi)) + r(p.rank_w(wn, ui)) - r(p.rank_w(wn, un))
                        })
                        .sum()
                })
                .collect(),
        )
    }

    pub fn total(&self, s: &BTreeSet<usize>) -> i64 {
        s.iter().map(|&v| self.0[v]).sum()
    }
}

/// Least-weight closed subset containing `forced` and avoiding `forbidden`.
pub fn min_weight_closure(
    d: &RotationDigraph,
    w: &RotationWeights,
    forced: &BTreeSet<usize>,
    forbidden: &BTreeSet<usize>,
) -> Option<BTreeSet<usize>> {
    let f: Vec<usize> = forced.iter().copied().collect();
    let g: Vec<usize> = forbidden.iter().copied().collect();
    let set = closure::min_weight_closure(d.len(), &w.0, &d.arcs, &f, &g)?;
    Some((0..d.len()).filter(|&v| set[v]).collect())
}

/// A minimum egalitarian-cost stable matching.
pub fn egalitarian_optimal(p: &Profile) -> (Matching, u64) {
    let d = rotation_digraph(p);
    let w = RotationWeights::new(p, &d);
    let s = min_weight_closure(&d, &w, &BTreeSet::new(), &BTreeSet::new()).expect("unconstrained closure exists");
    let m = d.matching_of(&s).expect("optimizer returns closed sets");
    let c = egalitarian_cost_unchecked(p, &m);
    (m, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example1_fixture, gen_example2, gen_example3, gen_random};
    use crate::matching::{egalitarian_cost, is_stable};
    use crate::oracle::enumerate_stable_bf;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn example2_successors_and_no_rotations() {
        for n in 2..=5 {
            let p = gen_example2(n).unwrap();
            let m = u_optimal(&p);
            let a0 = p.agent("a0").unwrap().index;
            let b1 = p.agent("b1").unwrap().index;
            let last = p.agent(&format!("a{}", n - 1)).unwrap().index;
            assert_eq!(successor(&p, &m, a0).unwrap(), Some(b1));
            assert_eq!(successor(&p, &m, last).unwrap(), None);
            assert!(exposed_rotations(&p, &m).unwrap().is_empty());
            assert!(rotation_digraph(&p).is_empty());
        }
    }

    #[test]
    fn successor_of_unmatched_is_error() {
        let p = gen_example3();
        let m = u_optimal(&p);
        let a1 = p.agent("a1").unwrap().index;
        assert_eq!(successor(&p, &m, a1), Err(Error::NoSuccessorDefined(AgentId::u(a1))));
    }

    #[test]
    fn last_entry_has_no_successor() {
        let p = Profile::from_lists(vec![vec![0]], vec![vec![0]]).unwrap();
        let m = u_optimal(&p);
        assert_eq!(successor(&p, &m, 0).unwrap(), None);
    }

    #[test]
    fn example3_single_matching() {
        let p = gen_example3();
        let d = rotation_digraph(&p);
        assert!(d.is_empty());
        assert_eq!(enumerate_stable_matchings(&p), vec![Matching::from_names(&p, &[("a2", "b1")]).unwrap()]);
        let a2 = p.agent("a2").unwrap().index;
        let b1 = p.agent("b1").unwrap().index;
        assert_eq!(stable_pairs(&p), BTreeSet::from([(a2, b1)]));
    }

    #[test]
    fn w_optimal_exposes_nothing() {
        for seed in 0..30 {
            let p = gen_random(5, 5, 0.8, seed).unwrap();
            assert!(exposed_rotations(&p, &w_optimal(&p)).unwrap().is_empty());
        }
    }

    #[test]
    fn length_two_rotation_twice_restores_pairing() {
        let p = Profile::from_lists(vec![vec![0, 1], vec![1, 0]], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let m = u_optimal(&p);
        let rho = exposed_rotations(&p, &m).unwrap().remove(0);
        assert_eq!(rho.len(), 2);
        let once = eliminate(&m, &rho).unwrap();
        assert_eq!(once, w_optimal(&p));
        let back = Rotation::new(rho.moves().map(|(u, _, next)| (u, next)).collect()).unwrap();
        assert_eq!(eliminate(&once, &back).unwrap(), m);
        assert!(eliminate(&once, &rho).is_err());
    }

    #[test]
    fn fixture_rotations() {
        let Some(p) = gen_example1_fixture() else { return };
        let d = rotation_digraph(&p);
        let names = |rho: &Rotation| rho.display(&p);
        assert_eq!(d.len(), 3);
        assert_eq!(names(&d.rotations()[0]), "((u1,w2),(u2,w3),(u3,w4),(u4,w1))");
        assert_eq!(names(&d.rotations()[1]), "((u1,w3),(u3,w1))");
        assert_eq!(names(&d.rotations()[2]), "((u2,w4),(u4,w2))");
        assert_eq!(d.arcs(), &[(0, 1), (0, 2)]);

        let m1 = u_optimal(&p);
        assert_eq!(exposed_rotations(&p, &m1).unwrap(), vec![d.rotations()[0].clone()]);
        let m3 = Matching::from_names(&p, &[("u1", "w3"), ("u2", "w4"), ("u3", "w1"), ("u4", "w2")]).unwrap();
        let m4 = Matching::from_names(&p, &[("u1", "w1"), ("u2", "w4"), ("u3", "w3"), ("u4", "w2")]).unwrap();
        assert_eq!(eliminate(&m1, &d.rotations()[0]).unwrap(), m3);
        assert_eq!(eliminate(&m3, &d.rotations()[1]).unwrap(), m4);
        assert_eq!(d.matching_of(&set(&[0, 1])).unwrap(), m4);
        assert_eq!(d.matching_of(&set(&[1])), Err(Error::NotClosed));
        assert_eq!(enumerate_stable_matchings(&p).len(), 5);
        assert_eq!(stable_pairs(&p).len(), 12);
    }

    #[test]
    fn empty_and_full_subsets() {
        for seed in 0..30 {
            let p = gen_random(5, 5, 1.0, seed).unwrap();
            let d = rotation_digraph(&p);
            assert_eq!(&d.matching_of(&BTreeSet::new()).unwrap(), d.u_optimal());
            let all: BTreeSet<usize> = (0..d.len()).collect();
            assert_eq!(d.matching_of(&all).unwrap(), w_optimal(&p));
        }
    }

    #[test]
    fn lattice_bijection_and_weights() {
        for seed in 0..80 {
            let size = 3 + (seed as usize % 4);
            let density = if seed % 2 == 0 { 1.0 } else { 0.7 };
            let p = gen_random(size, size, density, seed).unwrap();
            let d = rotation_digraph(&p);
            let n = p.n() as usize;
            assert!(d.len() <= n * (n - 1) / 2 + 1);
            let subsets = d.closed_subsets();
            let fast: BTreeSet<Matching> = subsets.iter().map(|(_, m)| m.clone()).collect();
            let slow: BTreeSet<Matching> = enumerate_stable_bf(&p).unwrap().into_iter().collect();
            assert_eq!(subsets.len(), fast.len());
            assert_eq!(fast, slow, "seed {seed}");
            let w = RotationWeights::new(&p, &d);
            let base = egalitarian_cost(&p, d.u_optimal()).unwrap() as i64;
            for (s, m) in &subsets {
                assert_eq!(d.matching_of(s).unwrap(), *m);
                assert_eq!(egalitarian_cost(&p, m).unwrap() as i64, base + w.total(s));
                for rho in exposed_rotations(&p, m).unwrap() {
                    assert!(is_stable(&p, &eliminate(m, &rho).unwrap()).unwrap());
                }
            }
            let pairs: BTreeSet<(usize, usize)> = slow.iter().flat_map(|m| m.pairs().collect::<Vec<_>>()).collect();
            assert_eq!(stable_pairs(&p), pairs);
        }
    }

    #[test]
    fn egalitarian_optimum_matches_enumeration() {
        for seed in 0..40 {
            let p = gen_random(5, 5, 0.8, seed).unwrap();
            let best = enumerate_stable_bf(&p).unwrap().iter().map(|m| egalitarian_cost(&p, m).unwrap()).min().unwrap();
            assert_eq!(egalitarian_optimal(&p).1, best);
        }
    }

    #[test]
    fn forced_rotation_closure() {
        let Some(p) = gen_example1_fixture() else { return };
        let d = rotation_digraph(&p);
        let zero = RotationWeights(vec![0; d.len()]);
        let s = min_weight_closure(&d, &zero, &set(&[2]), &BTreeSet::new()).unwrap();
        assert_eq!(s, set(&[0, 2]));
        assert!(min_weight_closure(&d, &zero, &set(&[2]), &set(&[0])).is_none());
        let pos = RotationWeights(vec![1; d.len()]);
        assert!(min_weight_closure(&d, &pos, &BTreeSet::new(), &BTreeSet::new()).unwrap().is_empty());
    }

    #[test]
    fn dot_output_lists_nodes_and_arcs() {
        let Some(p) = gen_example1_fixture() else { return };
        let dot = rotation_digraph(&p).to_dot(&p);
        assert!(dot.contains("r0 -> r1;"));
        assert!(dot.contains("r0 -> r2;"));
        assert!(dot.contains("label=\"((u1,w3),(u3,w1))\""));
    }
}
