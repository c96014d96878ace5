//! Locally and globally nearly stable matchings.
//!
//! A matching is globally d-nearly stable if some profile within total swap
//! distance `d` makes it stable, and locally d-nearly stable if some profile
//! within distance `d` of every single list does.

use std::collections::{BTreeMap, HashSet};

use crate::classic::{matched_partition, u_optimal};
use crate::closure;
use crate::error::{Error, Result};
use crate::matching::{
    blocking_pairs_unchecked, egalitarian_cost_unchecked, is_stable_unchecked, BlockingPair, Matching,
};
use crate::profile::{AgentId, Profile, Side, SwapDistance, SwapOp};
use crate::query::{Mode, Objective};
use crate::rotation::{min_weight_closure, rotation_digraph, RotationWeights};

/// Largest number of profiles the global solver will visit.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// How far `x` must move its partner forward to stop preferring `y`;
/// infinite when `x` is unmatched.
fn side_cost(p: &Profile, m: &Matching, x: AgentId, y: usize) -> SwapDistance {
    match (x.side, m.mate(x)) {
        (_, None) => SwapDistance::Infinite,
        (Side::U, Some(cur)) => SwapDistance::Finite((p.rank_u(x.index, cur.index) - p.rank_u(x.index, y)) as u64),
        (Side::W, Some(cur)) => SwapDistance::Finite((p.rank_w(x.index, cur.index) - p.rank_w(x.index, y)) as u64),
    }
}

fn pair_costs(p: &Profile, m: &Matching, bp: BlockingPair) -> (SwapDistance, SwapDistance) {
    (side_cost(p, m, AgentId::u(bp.u), bp.w), side_cost(p, m, AgentId::w(bp.w), bp.u))
}

/// Largest, over blocking pairs, of the cheaper side's rank improvement.
pub fn local_instability(p: &Profile, m: &Matching) -> Result<SwapDistance> {
    m.validate(p)?;
    Ok(blocking_pairs_unchecked(p, m)
        .into_iter()
        .map(|bp| {
            let (cu, cw) = pair_costs(p, m, bp);
            cu.min(cw)
        })
        .max()
        .unwrap_or(SwapDistance::Finite(0)))
}

pub fn is_locally_d_nearly_stable(p: &Profile, m: &Matching, dl: usize) -> Result<bool> {
    Ok(local_instability(p, m)? <= SwapDistance::Finite(dl as u64))
}

/// Moves each agent's partner forward by the given number of positions.
fn shift_partners(p: &Profile, m: &Matching, shifts: &BTreeMap<AgentId, usize>) -> (Profile, Vec<SwapOp>) {
    let mut out = p.clone();
    let mut swaps = Vec::new();
    for (&x, &t) in shifts {
        if t == 0 {
            continue;
        }
        let mate = m.mate(x).expect("only matched agents shift").index;
        let mut list = out.list(x).to_vec();
        let mut i = list.iter().position(|&y| y == mate).unwrap();
        for _ in 0..t {
            swaps.push(SwapOp::new(x, list[i], list[i - 1]));
            list.swap(i, i - 1);
            i -= 1;
        }
        out = out.with_list(x, list);
    }
    (out, swaps)
}

/// A profile within per-list distance `dl` in which `m` is stable. Each
/// blocking pair is settled on its cheaper side (ties go to `W`).
pub fn witness_profile_local(p: &Profile, m: &Matching, dl: usize) -> Result<(Profile, Vec<SwapOp>)> {
    if !is_locally_d_nearly_stable(p, m, dl)? {
        return Err(Error::NotNearlyStable(dl));
    }
    let mut shifts: BTreeMap<AgentId, usize> = BTreeMap::new();
    for bp in blocking_pairs_unchecked(p, m) {
        let (cu, cw) = pair_costs(p, m, bp);
        let (x, c) = if cw <= cu { (AgentId::w(bp.w), cw) } else { (AgentId::u(bp.u), cu) };
        let c = c.finite().expect("bounded by dl") as usize;
        let e = shifts.entry(x).or_insert(0);
        *e = (*e).max(c);
    }
    Ok(shift_partners(p, m, &shifts))
}

/// Minimal total distance to a profile where `m` is stable, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalCost {
    pub cost: SwapDistance,
    pub witness: Option<Profile>,
    pub swaps: Vec<SwapOp>,
}

/// Exact global cost by minimum cut.
///
/// Settling blocking pair `{u, w}` at `u` means moving `M(u)` ahead of `w`,
/// which costs at least `rk_u(M(u)) - rk_u(w)` swaps in `u`'s list and
/// exactly that many when `M(u)` is moved forward. Each agent therefore
/// picks a threshold `t_x`; every blocking pair needs one side's threshold to
/// reach its cost. The thresholds are unary chains of booleans, with the `W`
/// chains complemented so every pair constraint becomes an implication, and
/// the sum is minimized as a closure problem.
pub fn global_stabilization_cost(p: &Profile, m: &Matching) -> Result<GlobalCost> {
    m.validate(p)?;
    let bps = blocking_pairs_unchecked(p, m);
    if bps.is_empty() {
        return Ok(GlobalCost { cost: SwapDistance::Finite(0), witness: Some(p.clone()), swaps: Vec::new() });
    }

    let mut levels: BTreeMap<AgentId, Vec<u64>> = BTreeMap::new();
    for &bp in &bps {
        let (cu, cw) = pair_costs(p, m, bp);
        if !cu.is_finite() && !cw.is_finite() {
            return Ok(GlobalCost { cost: SwapDistance::Infinite, witness: None, swaps: Vec::new() });
        }
        if let Some(c) = cu.finite() {
            levels.entry(AgentId::u(bp.u)).or_default().push(c);
        }
        if let Some(c) = cw.finite() {
            levels.entry(AgentId::w(bp.w)).or_default().push(c);
        }
    }
    // node per (agent, distinct level)
    let mut node: BTreeMap<(AgentId, u64), usize> = BTreeMap::new();
    let mut weights = Vec::new();
    let mut arcs = Vec::new();
    let mut constant: i64 = 0;
    for (x, ls) in levels.iter_mut() {
        ls.sort_unstable();
        ls.dedup();
        let mut prev = 0u64;
        let mut prev_node: Option<usize> = None;
        for &l in ls.iter() {
            let id = weights.len();
            let delta = (l - prev) as i64;
            node.insert((*x, l), id);
            match x.side {
                Side::U => {
                    weights.push(delta);
                    if let Some(a) = prev_node {
                        arcs.push((a, id));
                    }
                }
                Side::W => {
                    // complement: selected means threshold below l
                    weights.push(-delta);
                    constant += delta;
                    if let Some(a) = prev_node {
                        arcs.push((id, a));
                    }
                }
            }
            prev = l;
            prev_node = Some(id);
        }
    }
    let mut forced = Vec::new();
    let mut forbidden = Vec::new();
    for &bp in &bps {
        let (cu, cw) = pair_costs(p, m, bp);
        let yu = cu.finite().map(|c| node[&(AgentId::u(bp.u), c)]);
        let zw = cw.finite().map(|c| node[&(AgentId::w(bp.w), c)]);
        match (yu, zw) {
            (Some(y), Some(z)) => arcs.push((y, z)),
            (Some(y), None) => forced.push(y),
            (None, Some(z)) => forbidden.push(z),
            (None, None) => unreachable!(),
        }
    }
    let set = closure::min_weight_closure(weights.len(), &weights, &arcs, &forced, &forbidden)
        .ok_or_else(|| Error::Internal("threshold closure is infeasible".into()))?;
    let total: i64 = constant + (0..weights.len()).filter(|&v| set[v]).map(|v| weights[v]).sum::<i64>();

    let mut shifts: BTreeMap<AgentId, usize> = BTreeMap::new();
    for (&(x, l), &id) in &node {
        let reached = match x.side {
            Side::U => set[id],
            Side::W => !set[id],
        };
        if reached {
            let e = shifts.entry(x).or_insert(0);
            *e = (*e).max(l as usize);
        }
    }
    let (witness, swaps) = shift_partners(p, m, &shifts);
    debug_assert_eq!(swaps.len() as i64, total);
    Ok(GlobalCost { cost: SwapDistance::Finite(total as u64), witness: Some(witness), swaps })
}

pub fn is_globally_d_nearly_stable(p: &Profile, m: &Matching, dg: usize) -> Result<bool> {
    Ok(global_stabilization_cost(p, m)?.cost <= SwapDistance::Finite(dg as u64))
}

/// Both near-stability measures of one matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearStabilityReport {
    pub local_bound: SwapDistance,
    pub global_cost: SwapDistance,
    pub witness_local: Option<Profile>,
    pub witness_global: Option<Profile>,
}

pub fn near_stability_report(p: &Profile, m: &Matching) -> Result<NearStabilityReport> {
    let local_bound = local_instability(p, m)?;
    let witness_local = match local_bound {
        SwapDistance::Finite(d) => Some(witness_profile_local(p, m, d as usize)?.0),
        SwapDistance::Infinite => None,
    };
    let g = global_stabilization_cost(p, m)?;
    Ok(NearStabilityReport { local_bound, global_cost: g.cost, witness_local, witness_global: g.witness })
}

/// A nearly stable matching with the profile that makes it stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearSolution {
    pub matching: Matching,
    pub witness: Profile,
    pub swaps: Vec<SwapOp>,
    /// Egalitarian cost in the input profile.
    pub cost: u64,
}

/// Exact search over every profile within total distance `dg`.
pub fn solve_global_near(p: &Profile, dg: usize, objective: Objective) -> Result<Option<NearSolution>> {
    solve_global_near_capped(p, dg, objective, DEFAULT_BALL_CAP)
}

pub fn solve_global_near_capped(
    p: &Profile,
    dg: usize,
    objective: Objective,
    cap: usize,
) -> Result<Option<NearSolution>> {
    if objective == Objective::Perfect && !perfect_possible(p, dg) {
        return Ok(None);
    }
    let mut best: Option<NearSolution> = None;
    let mut seen: HashSet<Profile> = HashSet::from([p.clone()]);
    let mut frontier = vec![(p.clone(), Vec::<SwapOp>::new())];
    let mut depth = 0;
    loop {
        for (q, path) in &frontier {
            let candidate = match objective {
                Objective::Any => Some(u_optimal(q)),
                Objective::Perfect => matched_partition(q).unmatched.is_empty().then(|| u_optimal(q)),
                Objective::Egalitarian { .. } => Some(cheapest_in(p, q)),
            };
            let Some(m) = candidate else { continue };
            let cost = egalitarian_cost_unchecked(p, &m);
            let better = best.as_ref().is_none_or(|b| cost < b.cost);
            if better {
                best = Some(NearSolution { matching: m, witness: q.clone(), swaps: path.clone(), cost });
            }
            if !matches!(objective, Objective::Egalitarian { .. }) {
                return Ok(best);
            }
        }
        if depth == dg {
            break;
        }
        depth += 1;
        let mut next = Vec::new();
        for (q, path) in &frontier {
            for s in q.adjacent_swaps() {
                let r = q.apply_swap(&s)?;
                if seen.contains(&r) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::TooLarge(format!("swap ball of radius {dg} exceeds {cap} profiles")));
                }
                seen.insert(r.clone());
                let mut path = path.clone();
                path.push(s);
                next.push((r, path));
            }
        }
        frontier = next;
    }
    if let (Objective::Egalitarian { eta: Some(h) }, Some(b)) = (objective, &best) {
        if b.cost > h {
            return Ok(None);
        }
    }
    Ok(best)
}

/// Cheapest stable matching of `q`, with costs measured in `p`.
fn cheapest_in(p: &Profile, q: &Profile) -> Matching {
    let d = rotation_digraph(q);
    let w = RotationWeights::new(p, &d);
    let s = min_weight_closure(&d, &w, &Default::default(), &Default::default()).expect("unconstrained closure exists");
    d.matching_of(&s).expect("optimizer returns closed sets")
}

/// Necessary conditions for a perfect matching reachable within `dg`
/// swaps: equal sides, enough budget to match everyone left out, and
/// enough matched partners for the unmatched agents.
pub fn perfect_possible(p: &Profile, dg: usize) -> bool {
    if p.n_u() != p.n_w() {
        return false;
    }
    let part = matched_partition(p);
    let unmatched_u = part.unmatched.iter().filter(|x| x.side == Side::U).count();
    let unmatched_w = part.n_unmatched() - unmatched_u;
    let matched_u = p.n_u() - unmatched_u;
    let matched_w = p.n_w() - unmatched_w;
    if unmatched_u > matched_w || unmatched_w > matched_u {
        return false;
    }
    dg >= part.n_unmatched().div_ceil(2)
}

/// Backtracking over `U` agents in index order, partners in preference
/// order and then "unmatched", pruning every pair whose improvement bound
/// already exceeds `dl` once both endpoints are fixed.
pub fn solve_local_near(p: &Profile, dl: usize, objective: Objective) -> Result<Option<Matching>> {
    if objective == Objective::Perfect && p.n_u() != p.n_w() {
        return Ok(None);
    }
    let mut s = LocalSearch {
        p,
        dl: dl as u64,
        objective,
        m: Matching::empty(p.n_u(), p.n_w()),
        best: None,
        best_cost: u64::MAX,
    };
    s.rec(0, 0);
    Ok(s.best)
}

struct LocalSearch<'a> {
    p: &'a Profile,
    dl: u64,
    objective: Objective,
    m: Matching,
    best: Option<Matching>,
    best_cost: u64,
}

impl LocalSearch<'_> {
    fn ok_pair(&self, u: usize, w: usize) -> bool {
        let p = self.p;
        let m = &self.m;
        if m.u_mate(u) == Some(w) {
            return true;
        }
        let cu = m.u_mate(u).map(|c| p.rank_u(u, c) as i64 - p.rank_u(u, w) as i64);
        let cw = m.w_mate(w).map(|c| p.rank_w(w, c) as i64 - p.rank_w(w, u) as i64);
        // a side that does not want the pair ends the check
        if cu.is_some_and(|c| c <= 0) || cw.is_some_and(|c| c <= 0) {
            return true;
        }
        let lim = self.dl as i64;
        cu.is_some_and(|c| c <= lim) || cw.is_some_and(|c| c <= lim)
    }

    /// Checks pairs of `u` (decided) with matched `W` agents.
    fn consistent_after(&self, u: usize) -> bool {
        let p = self.p;
        (0..=u).all(|v| p.u_list(v).iter().all(|&w| self.m.w_mate(w).is_none() || self.ok_pair(v, w)))
    }

    fn rec(&mut self, u: usize, partial: u64) {
        let p = self.p;
        if let Objective::Egalitarian { eta } = self.objective {
            let bound = eta.map_or(self.best_cost, |h| self.best_cost.min(h + 1));
            if partial >= bound {
                return;
            }
        } else if self.best.is_some() {
            return;
        }
        if u == p.n_u() {
            let full = (0..p.n_u()).all(|v| p.u_list(v).iter().all(|&w| self.ok_pair(v, w)));
            if !full {
                return;
            }
            if self.objective == Objective::Perfect && self.m.len() != p.n_w() {
                return;
            }
            let cost = egalitarian_cost_unchecked(p, &self.m);
            if let Objective::Egalitarian { eta } = self.objective {
                if eta.is_some_and(|h| cost > h) || cost >= self.best_cost {
                    return;
                }
            }
            self.best_cost = cost;
            self.best = Some(self.m.clone());
            return;
        }
        for &w in p.u_list(u) {
            if self.m.w_mate(w).is_some() {
                continue;
            }
            self.m.set_pair(u, w);
            if self.consistent_after(u) {
                let add = (p.rank_u(u, w) + p.rank_w(w, u)) as u64;
                self.rec(u + 1, partial + add);
            }
            self.m.unmatch(AgentId::u(u));
        }
        if self.objective != Objective::Perfect && self.consistent_after(u) {
            let add = p.u_list(u).len() as u64;
            self.rec(u + 1, partial + add);
        }
    }
}

/// Turns a stable matching of `p1` into one of the profile after swap `s`,
/// changing the set of unmatched agents by at most two.
pub fn repair_after_swap(p1: &Profile, m1: &Matching, s: &SwapOp) -> Result<Matching> {
    m1.validate(p1)?;
    if !is_stable_unchecked(p1, m1) {
        return Err(Error::InvalidInput("matching is not stable in the original profile".into()));
    }
    let p2 = p1.apply_swap(s)?;
    let bps = blocking_pairs_unchecked(&p2, m1);
    let Some(&cand) = bps.first() else { return Ok(m1.clone()) };
    if bps.len() > 1 {
        return Err(Error::Internal("one swap created several blocking pairs".into()));
    }
    let mut m = m1.clone();
    let mut box_u = m.w_mate(cand.w);
    let mut box_w = m.u_mate(cand.u);
    m.set_pair(cand.u, cand.w);

    // Every blocking pair involves a box agent. A box agent takes its best
    // blocking partner, so it blocks with no one afterwards, and whoever it
    // displaces enters the box. The U box is served first.
    let limit = 4 * (p2.n_u() + 1) * (p2.n_w() + 1) * (p2.max_list_len() + 1);
    for _ in 0..limit {
        if let Some(u) = box_u {
            if let Some(w) = p2.u_list(u).iter().copied().find(|&w| blocks_now(&p2, &m, u, w)) {
                box_u = m.w_mate(w);
                m.set_pair(u, w);
                continue;
            }
        }
        let Some(w) = box_w else { return Ok(m) };
        match p2.w_list(w).iter().copied().find(|&u| blocks_now(&p2, &m, u, w)) {
            Some(u) => {
                box_w = m.u_mate(u);
                box_u = m.w_mate(w);
                m.set_pair(u, w);
            }
            None => return Ok(m),
        }
    }
    Err(Error::Internal("repair did not settle".into()))
}

fn blocks_now(p: &Profile, m: &Matching, u: usize, w: usize) -> bool {
    crate::matching::blocks(p, m, u, w)
}

/// Best value reachable at each budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TradeoffValue {
    /// Minimum egalitarian cost, `None` if nothing qualifies.
    Cost(Option<u64>),
    /// Whether a perfect matching qualifies.
    Feasible(bool),
}

pub fn tradeoff_curve(
    p: &Profile,
    mode: Mode,
    d_max: usize,
    objective: Objective,
) -> Result<Vec<(usize, TradeoffValue)>> {
    let mut out = Vec::new();
    for d in 0..=d_max {
        let value = match (mode, objective) {
            (Mode::Global, Objective::Perfect) => {
                TradeoffValue::Feasible(solve_global_near(p, d, objective)?.is_some())
            }
            (Mode::Local, Objective::Perfect) => TradeoffValue::Feasible(solve_local_near(p, d, objective)?.is_some()),
            (Mode::Global, _) => {
                TradeoffValue::Cost(solve_global_near(p, d, Objective::Egalitarian { eta: None })?.map(|s| s.cost))
            }
            (Mode::Local, _) => TradeoffValue::Cost(
                solve_local_near(p, d, Objective::Egalitarian { eta: None })?
                    .map(|m| egalitarian_cost_unchecked(p, &m)),
            ),
        };
        out.push((d, value));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example2, gen_example3, gen_random, gen_random_latin};
    use crate::matching::{egalitarian_cost, is_stable};
    use crate::oracle::{brute_global_cost, brute_local_stable, brute_solve_near};
    use crate::profile::{swap_distance, swap_distance_per_agent};

    fn rotated(p: &Profile, n: usize) -> Matching {
        let mut pairs = Vec::new();
        for i in 0..n {
            pairs.push((format!("a{i}"), format!("b{}", (i + 1) % n)));
        }
        let mut idx = Vec::new();
        for (a, b) in &pairs {
            idx.push((p.agent(a).unwrap().index, p.agent(b).unwrap().index));
        }
        for i in 1..=n {
            idx.push((p.agent(&format!("x{i}")).unwrap().index, p.agent(&format!("y{i}")).unwrap().index));
        }
        Matching::in_profile(p, &idx).unwrap()
    }

    #[test]
    fn example2_rotated_matching() {
        for n in 3..=6 {
            let p = gen_example2(n).unwrap();
            let m = rotated(&p, n);
            assert_eq!(local_instability(&p, &m).unwrap(), SwapDistance::Finite(1));
            let g = global_stabilization_cost(&p, &m).unwrap();
            assert_eq!(g.cost, SwapDistance::Finite(1));
            let shown: Vec<String> = g.swaps.iter().map(|s| p.display_swap(s)).collect();
            assert_eq!(shown, [format!("(b0,{{a0,a{}}})", n - 1)]);
            let (w, swaps) = witness_profile_local(&p, &m, 1).unwrap();
            assert_eq!(swaps, g.swaps);
            assert!(is_stable(&w, &m).unwrap());
        }
    }

    #[test]
    fn example3_perfect_matching_costs() {
        let p = gen_example3();
        let m = Matching::from_names(&p, &[("a1", "b1"), ("a2", "b2")]).unwrap();
        assert_eq!(local_instability(&p, &m).unwrap(), SwapDistance::Finite(1));
        assert!(!is_locally_d_nearly_stable(&p, &m, 0).unwrap());
        assert!(is_locally_d_nearly_stable(&p, &m, 1).unwrap());
        assert_eq!(global_stabilization_cost(&p, &m).unwrap().cost, SwapDistance::Finite(1));
        let (w, _) = witness_profile_local(&p, &m, 1).unwrap();
        assert!(is_stable(&w, &m).unwrap());
        assert_eq!(witness_profile_local(&p, &m, 0), Err(Error::NotNearlyStable(0)));
    }

    #[test]
    fn stable_matching_has_zero_costs() {
        let p = gen_example3();
        let m = u_optimal(&p);
        assert_eq!(local_instability(&p, &m).unwrap(), SwapDistance::Finite(0));
        let g = global_stabilization_cost(&p, &m).unwrap();
        assert_eq!((g.cost, g.witness), (SwapDistance::Finite(0), Some(p.clone())));
        assert_eq!(witness_profile_local(&p, &m, 0).unwrap().0, p);
    }

    #[test]
    fn unmatched_blocking_agents_cannot_be_settled() {
        // two mutually acceptable agents left single
        let p = Profile::from_lists(vec![vec![0]], vec![vec![0]]).unwrap();
        let m = Matching::empty(1, 1);
        assert_eq!(local_instability(&p, &m).unwrap(), SwapDistance::Infinite);
        assert_eq!(global_stabilization_cost(&p, &m).unwrap().cost, SwapDistance::Infinite);
    }

    #[test]
    fn solvers_on_example3() {
        let p = gen_example3();
        let perfect = Matching::from_names(&p, &[("a1", "b1"), ("a2", "b2")]).unwrap();
        let g = solve_global_near(&p, 1, Objective::Perfect).unwrap().unwrap();
        assert_eq!(g.matching, perfect);
        assert!(is_stable(&g.witness, &g.matching).unwrap());
        assert_eq!(solve_global_near(&p, 0, Objective::Perfect).unwrap(), None);
        assert_eq!(solve_local_near(&p, 1, Objective::Perfect).unwrap(), Some(perfect));
        assert_eq!(solve_local_near(&p, 0, Objective::Perfect).unwrap(), None);
    }

    #[test]
    fn example2_global_egalitarian() {
        let p = gen_example2(3).unwrap();
        let s = solve_global_near(&p, 1, Objective::Egalitarian { eta: Some(4) }).unwrap().unwrap();
        assert_eq!(s.cost, 4);
        assert_eq!(s.matching, rotated(&p, 3));
        assert!(solve_global_near(&p, 1, Objective::Egalitarian { eta: Some(3) }).unwrap().is_none());
        let s0 = solve_global_near(&p, 0, Objective::Egalitarian { eta: None }).unwrap().unwrap();
        assert_eq!(s0.cost, 8);
    }

    #[test]
    fn tradeoff_examples() {
        let p = gen_example2(3).unwrap();
        let curve = tradeoff_curve(&p, Mode::Global, 1, Objective::Egalitarian { eta: None }).unwrap();
        assert_eq!(curve, vec![(0, TradeoffValue::Cost(Some(8))), (1, TradeoffValue::Cost(Some(4)))]);
        let e3 = gen_example3();
        let curve = tradeoff_curve(&e3, Mode::Global, 1, Objective::Perfect).unwrap();
        assert_eq!(curve, vec![(0, TradeoffValue::Feasible(false)), (1, TradeoffValue::Feasible(true))]);
        let flat = Profile::from_lists(vec![vec![0], vec![1]], vec![vec![0], vec![1]]).unwrap();
        let curve = tradeoff_curve(&flat, Mode::Local, 2, Objective::Perfect).unwrap();
        assert!(curve.iter().all(|&(_, v)| v == TradeoffValue::Feasible(true)));
    }

    #[test]
    fn repair_example3() {
        let p = gen_example3();
        let m1 = u_optimal(&p);
        let a2 = p.agent("a2").unwrap();
        let (b1, b2) = (p.agent("b1").unwrap().index, p.agent("b2").unwrap().index);
        let s = SwapOp::new(a2, b1, b2);
        let m2 = repair_after_swap(&p, &m1, &s).unwrap();
        assert_eq!(m2, Matching::from_names(&p, &[("a1", "b1"), ("a2", "b2")]).unwrap());
        let diff: Vec<_> = m1.unmatched().symmetric_difference(&m2.unmatched()).copied().collect();
        assert_eq!(diff.len(), 2);
    }

    #[test]
    fn repair_keeps_unaffected_matching() {
        let p = Profile::from_lists(vec![vec![0, 1]], vec![vec![0], vec![0]]).unwrap();
        let m = u_optimal(&p);
        let s = SwapOp::new(AgentId::w(0), 0, 0);
        assert!(repair_after_swap(&p, &m, &s).is_err());
        let q = Profile::from_lists(vec![vec![0], vec![0]], vec![vec![0, 1]]).unwrap();
        let m = u_optimal(&q);
        // w1 gains nothing from reordering below its partner... swap brings u2 ahead
        let out = repair_after_swap(&q, &m, &SwapOp::new(AgentId::w(0), 0, 1)).unwrap();
        assert!(is_stable(&q.apply_swap(&SwapOp::new(AgentId::w(0), 0, 1)).unwrap(), &out).unwrap());
    }

    #[test]
    fn repair_random_trials() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for seed in 0..3000 {
            let p = gen_random(5 + seed as usize % 3, 5, 0.6, seed).unwrap();
            let swaps = p.adjacent_swaps();
            if swaps.is_empty() {
                continue;
            }
            let s = swaps[rng.gen_range(0..swaps.len())];
            let m1 = u_optimal(&p);
            let m2 = repair_after_swap(&p, &m1, &s).unwrap();
            let p2 = p.apply_swap(&s).unwrap();
            assert!(is_stable(&p2, &m2).unwrap(), "seed {seed}");
            assert!(m1.unmatched().symmetric_difference(&m2.unmatched()).count() <= 2);
        }
    }

    #[test]
    fn local_and_global_agree_with_brute_force() {
        for seed in 0..40 {
            let p = if seed % 2 == 0 {
                gen_random(3, 3, 0.8, seed).unwrap()
            } else {
                gen_random_latin(3, 1, 0.9, seed).unwrap()
            };
            for m in crate::oracle::enumerate_matchings(&p).unwrap() {
                for dl in 0..=1 {
                    assert_eq!(
                        is_locally_d_nearly_stable(&p, &m, dl).unwrap(),
                        brute_local_stable(&p, &m, dl).unwrap(),
                        "seed {seed} {m}"
                    );
                }
                let g = global_stabilization_cost(&p, &m).unwrap();
                let slow = brute_global_cost(&p, &m, 3).unwrap();
                match slow {
                    Some(c) => assert_eq!(g.cost, SwapDistance::Finite(c as u64), "seed {seed} {m}"),
                    None => assert!(g.cost > SwapDistance::Finite(3)),
                }
                if let Some(w) = &g.witness {
                    assert!(is_stable(w, &m).unwrap());
                    assert_eq!(swap_distance(&p, w).unwrap(), g.cost);
                }
                let l = local_instability(&p, &m).unwrap();
                assert!(l <= g.cost);
                if let SwapDistance::Finite(d) = l {
                    let (w, _) = witness_profile_local(&p, &m, d as usize).unwrap();
                    assert!(is_stable(&w, &m).unwrap());
                    let per = swap_distance_per_agent(&p, &w).unwrap();
                    assert!(per.values().all(|&x| x <= SwapDistance::Finite(d)));
                }
            }
        }
    }

    #[test]
    fn solvers_agree_with_brute_force() {
        for seed in 0..40 {
            let p = if seed % 2 == 0 {
                gen_random(3, 3, 0.7, seed).unwrap()
            } else {
                gen_random_latin(3, 2, 0.8, seed).unwrap()
            };
            for budget in 0..=1 {
                for mode in [Mode::Global, Mode::Local] {
                    let slow_p = brute_solve_near(&p, budget, mode, Objective::Perfect).unwrap();
                    let slow_e = brute_solve_near(&p, budget, mode, Objective::Egalitarian { eta: None }).unwrap();
                    let (fast_p, fast_e) = match mode {
                        Mode::Global => (
                            solve_global_near(&p, budget, Objective::Perfect).unwrap().map(|s| s.matching),
                            solve_global_near(&p, budget, Objective::Egalitarian { eta: None })
                                .unwrap()
                                .map(|s| s.matching),
                        ),
                        Mode::Local => (
                            solve_local_near(&p, budget, Objective::Perfect).unwrap(),
                            solve_local_near(&p, budget, Objective::Egalitarian { eta: None }).unwrap(),
                        ),
                    };
                    assert_eq!(fast_p.is_some(), slow_p.is_some(), "seed {seed} {mode:?} {budget}");
                    let cost = |m: &Option<Matching>| m.as_ref().map(|m| egalitarian_cost(&p, m).unwrap());
                    assert_eq!(cost(&fast_e), cost(&slow_e), "seed {seed} {mode:?} {budget}");
                }
            }
        }
    }

    #[test]
    fn zero_budget_is_classic_stability() {
        for seed in 0..20 {
            let p = gen_random(4, 4, 0.7, seed).unwrap();
            let best = crate::rotation::egalitarian_optimal(&p).1;
            let g = solve_global_near(&p, 0, Objective::Egalitarian { eta: None }).unwrap().unwrap();
            assert_eq!(g.cost, best);
            let l = solve_local_near(&p, 0, Objective::Egalitarian { eta: None }).unwrap().unwrap();
            assert!(is_stable(&p, &l).unwrap());
            assert_eq!(egalitarian_cost(&p, &l).unwrap(), best);
        }
    }
}
