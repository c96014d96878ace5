//! Stable quadruples, swap sets and d-robust matchings.
//!
//! A matching is d-robust when it stays stable in every profile within swap
//! distance `d`. Only the profiles reached by shifting one agent forward in
//! each of two lists matter; they are indexed by stable quadruples
//! `(u*, w*, u, w)` where `{u*, w}` and `{u, w*}` occur together in a stable
//! matching. With incomplete lists an agent unmatched in every stable matching
//! takes part through a missing `u` or `w`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::classic::matched_partition;
use crate::closure;
use crate::error::{Error, Result};
use crate::matching::{
    blocking_pairs_unchecked, egalitarian_cost_unchecked, is_stable_unchecked, BlockingPair, Matching,
};
use crate::profile::{AgentId, Profile, SwapOp};
use crate::query::Objective;
use crate::rotation::{rotation_digraph, RotationDigraph, RotationWeights};

/// `(u*, w*, u, w)`. `w = None` means `u*` is unmatched in every stable
/// matching; `u = None` means the same for `w*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableQuadruple {
    pub u_star: usize,
    pub w_star: usize,
    pub u: Option<usize>,
    pub w: Option<usize>,
}

impl StableQuadruple {
    pub fn new(u_star: usize, w_star: usize, u: usize, w: usize) -> Self {
        StableQuadruple { u_star, w_star, u: Some(u), w: Some(w) }
    }

    pub fn display(&self, p: &Profile) -> String {
        let u = self.u.map_or("-".to_string(), |u| p.name(AgentId::u(u)).to_string());
        let w = self.w.map_or("-".to_string(), |w| p.name(AgentId::w(w)).to_string());
        format!("({},{},{},{})", p.name(AgentId::u(self.u_star)), p.name(AgentId::w(self.w_star)), u, w)
    }
}

impl fmt::Display for StableQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(U[{}],W[{}],{:?},{:?})", self.u_star, self.w_star, self.u, self.w)
    }
}

/// Swaps moving `w*` just ahead of `w` in `u*`'s list and `u*` just ahead of
/// `u` in `w*`'s list, in application order, with the resulting lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapSet {
    pub swaps: Vec<SwapOp>,
    pub shifted_u: Vec<usize>,
    pub shifted_w: Vec<usize>,
}

impl SwapSet {
    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }
}

/// The six rotation families indexed by `(u, w)` (sigma) and `(w, u)` (tau).
#[derive(Clone, Debug)]
pub struct RotationTables {
    n_w: usize,
    sigma: [Vec<Option<usize>>; 3],
    tau: [Vec<Option<usize>>; 3],
}

impl RotationTables {
    fn slot(&self, u: usize, w: usize) -> usize {
        u * self.n_w + w
    }

    /// Rotation moving `u`'s partner from above `w` to `w`.
    pub fn sigma1(&self, u: usize, w: usize) -> Option<usize> {
        self.sigma[0][self.slot(u, w)]
    }

    /// Rotation moving `u`'s partner from above `w` to below `w`.
    pub fn sigma2(&self, u: usize, w: usize) -> Option<usize> {
        self.sigma[1][self.slot(u, w)]
    }

    /// Rotation moving `u`'s partner from `w` to below `w`.
    pub fn sigma3(&self, u: usize, w: usize) -> Option<usize> {
        self.sigma[2][self.slot(u, w)]
    }

    /// Rotation moving `w`'s partner from below `u` to `u`.
    pub fn tau1(&self, w: usize, u: usize) -> Option<usize> {
        self.tau[0][self.slot(u, w)]
    }

    /// Rotation moving `w`'s partner from below `u` to above `u`.
    pub fn tau2(&self, w: usize, u: usize) -> Option<usize> {
        self.tau[1][self.slot(u, w)]
    }

    /// Rotation moving `w`'s partner from `u` to above `u`.
    pub fn tau3(&self, w: usize, u: usize) -> Option<usize> {
        self.tau[2][self.slot(u, w)]
    }
}

fn put(table: &mut [Option<usize>], slot: usize, r: usize, what: &str) -> Result<()> {
    match table[slot] {
        Some(old) if old != r => {
            Err(Error::Internal(format!("{what} entry {slot} claimed by rotations {old} and {r}")))
        }
        _ => {
            table[slot] = Some(r);
            Ok(())
        }
    }
}

pub fn build_rotation_tables(p: &Profile, d: &RotationDigraph) -> Result<RotationTables> {
    let size = p.n_u() * p.n_w();
    let mut t = RotationTables {
        n_w: p.n_w(),
        sigma: [vec![None; size], vec![None; size], vec![None; size]],
        tau: [vec![None; size], vec![None; size], vec![None; size]],
    };
    for (r, rho) in d.rotations().iter().enumerate() {
        let pairs = rho.pairs();
        let k = pairs.len();
        for i in 0..k {
            let (ui, wi) = pairs[i];
            let (un, wn) = pairs[(i + 1) % k];
            let s = t.slot(ui, wi);
            put(&mut t.sigma[2], s, r, "sigma3")?;
            put(&mut t.tau[2], s, r, "tau3")?;
            let s = t.slot(ui, wn);
            put(&mut t.sigma[0], s, r, "sigma1")?;
            put(&mut t.tau[0], s, r, "tau1")?;
            let list = p.u_list(ui);
            for &y in &list[p.rank_u(ui, wi) + 1..p.rank_u(ui, wn)] {
                let s = t.slot(ui, y);
                put(&mut t.sigma[1], s, r, "sigma2")?;
            }
            // w_{i+1} moves from u_{i+1} up to u_i
            let list = p.w_list(wn);
            for &x in &list[p.rank_w(wn, ui) + 1..p.rank_w(wn, un)] {
                let s = t.slot(x, wn);
                put(&mut t.tau[1], s, r, "tau2")?;
            }
        }
    }
    for s in 0..size {
        if t.sigma[1][s].is_some() && (t.sigma[0][s].is_some() || t.sigma[2][s].is_some()) {
            return Err(Error::Internal(format!("sigma2 entry {s} overlaps sigma1/sigma3")));
        }
        if t.tau[1][s].is_some() && (t.tau[0][s].is_some() || t.tau[2][s].is_some()) {
            return Err(Error::Internal(format!("tau2 entry {s} overlaps tau1/tau3")));
        }
    }
    Ok(t)
}

/// Everything needed to reason about robustness of one profile.
#[derive(Clone, Debug)]
pub struct RobustnessAnalysis {
    profile: Profile,
    digraph: RotationDigraph,
    tables: RotationTables,
    // stable pair -> (producer, consumer)
    live: BTreeMap<(usize, usize), (Option<usize>, Option<usize>)>,
    u_partners: Vec<Vec<usize>>,
    w_partners: Vec<Vec<usize>>,
    u_matched: Vec<bool>,
    w_matched: Vec<bool>,
}

impl RobustnessAnalysis {
    pub fn new(p: &Profile) -> Result<Self> {
        let digraph = rotation_digraph(p);
        let tables = build_rotation_tables(p, &digraph)?;
        let mut live = BTreeMap::new();
        for (u, w) in digraph.u_optimal().pairs().chain(digraph.w_optimal().pairs()) {
            live.insert((u, w), (None, None));
        }
        for rho in digraph.rotations() {
            for &(u, w) in rho.pairs() {
                live.insert((u, w), (None, None));
            }
        }
        for (&(u, w), entry) in live.iter_mut() {
            *entry = (tables.sigma1(u, w), tables.sigma3(u, w));
        }
        let mut u_partners = vec![Vec::new(); p.n_u()];
        let mut w_partners = vec![Vec::new(); p.n_w()];
        for &(u, w) in live.keys() {
            u_partners[u].push(w);
            w_partners[w].push(u);
        }
        for l in w_partners.iter_mut() {
            l.sort_unstable();
        }
        let m0 = digraph.u_optimal();
        let u_matched = (0..p.n_u()).map(|u| m0.u_mate(u).is_some()).collect();
        let w_matched = (0..p.n_w()).map(|w| m0.w_mate(w).is_some()).collect();
        Ok(RobustnessAnalysis {
            profile: p.clone(),
            digraph,
            tables,
            live,
            u_partners,
            w_partners,
            u_matched,
            w_matched,
        })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn digraph(&self) -> &RotationDigraph {
        &self.digraph
    }

    pub fn tables(&self) -> &RotationTables {
        &self.tables
    }

    fn ancestor_or_equal(&self, a: usize, b: usize) -> bool {
        a == b || self.digraph.precedes(a, b)
    }

    /// Whether some stable matching contains every listed stable pair.
    fn co_stable(&self, pairs: &[(usize, usize)]) -> bool {
        let mut producers = Vec::new();
        let mut consumers = Vec::new();
        for pr in pairs {
            let Some(&(a, b)) = self.live.get(pr) else { return false };
            producers.extend(a);
            consumers.extend(b);
        }
        !consumers.iter().any(|&b| producers.iter().any(|&a| self.ancestor_or_equal(b, a)))
    }

    fn pair_ok(&self, u: usize, w: Option<usize>, matched: &[bool]) -> bool {
        match w {
            None => !matched[u],
            Some(_) => true,
        }
    }

    /// Validates the structure and co-stability of `q`.
    pub fn is_quadruple(&self, q: &StableQuadruple) -> bool {
        let p = &self.profile;
        if q.u_star >= p.n_u() || q.w_star >= p.n_w() {
            return false;
        }
        if q.u == Some(q.u_star) || q.w == Some(q.w_star) || (q.u.is_none() && q.w.is_none()) {
            return false;
        }
        if q.u.is_some_and(|u| u >= p.n_u()) || q.w.is_some_and(|w| w >= p.n_w()) {
            return false;
        }
        if !p.acceptable(q.u_star, q.w_star) {
            return false;
        }
        if !self.pair_ok(q.u_star, q.w, &self.u_matched) || !self.pair_ok(q.w_star, q.u, &self.w_matched) {
            return false;
        }
        let mut pairs = Vec::new();
        pairs.extend(q.w.map(|w| (q.u_star, w)));
        pairs.extend(q.u.map(|u| (u, q.w_star)));
        self.co_stable(&pairs)
    }

    /// `|SH(q)|` from ranks alone.
    pub fn swap_set_size(&self, q: &StableQuadruple) -> usize {
        let p = &self.profile;
        let ru = |w: Option<usize>| w.map_or(p.u_list(q.u_star).len(), |w| p.rank_u(q.u_star, w));
        let rw = |u: Option<usize>| u.map_or(p.w_list(q.w_star).len(), |u| p.rank_w(q.w_star, u));
        ru(Some(q.w_star)).saturating_sub(ru(q.w)) + rw(Some(q.u_star)).saturating_sub(rw(q.u))
    }

    /// All stable quadruples in lexicographic order, optionally limited by
    /// swap-set size.
    pub fn quadruples(&self, max_swaps: Option<usize>) -> Vec<StableQuadruple> {
        let p = &self.profile;
        let mut out = Vec::new();
        for u_star in 0..p.n_u() {
            let ws: Vec<Option<usize>> = if self.u_matched[u_star] {
                self.u_partners[u_star].iter().map(|&w| Some(w)).collect()
            } else {
                vec![None]
            };
            let mut wstars: Vec<usize> = p.u_list(u_star).to_vec();
            wstars.sort_unstable();
            for w_star in wstars {
                let us: Vec<Option<usize>> = if self.w_matched[w_star] {
                    self.w_partners[w_star].iter().map(|&u| Some(u)).collect()
                } else {
                    vec![None]
                };
                for &u in &us {
                    for &w in &ws {
                        let q = StableQuadruple { u_star, w_star, u, w };
                        if max_swaps.is_some_and(|m| self.swap_set_size(&q) > m) {
                            continue;
                        }
                        if self.is_quadruple(&q) {
                            out.push(q);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn swap_set(&self, q: &StableQuadruple) -> Result<SwapSet> {
        if !self.is_quadruple(q) {
            return Err(Error::InvalidInput(format!("{} is not a stable quadruple", q.display(&self.profile))));
        }
        Ok(self.swap_set_unchecked(q))
    }

    fn swap_set_unchecked(&self, q: &StableQuadruple) -> SwapSet {
        let p = &self.profile;
        let mut swaps = Vec::new();
        let shifted_u = shift_forward(p.u_list(q.u_star), q.w_star, q.w, AgentId::u(q.u_star), &mut swaps);
        let shifted_w = shift_forward(p.w_list(q.w_star), q.u_star, q.u, AgentId::w(q.w_star), &mut swaps);
        SwapSet { swaps, shifted_u, shifted_w }
    }

    pub fn shifted_profile(&self, q: &StableQuadruple) -> Result<Profile> {
        let sh = self.swap_set(q)?;
        Ok(self.apply(q, &sh))
    }

    fn apply(&self, q: &StableQuadruple, sh: &SwapSet) -> Profile {
        self.profile
            .with_list(AgentId::u(q.u_star), sh.shifted_u.clone())
            .with_list(AgentId::w(q.w_star), sh.shifted_w.clone())
    }

    pub fn pi_of(&self, q: &StableQuadruple) -> Option<usize> {
        let p = &self.profile;
        let t = &self.tables;
        let ahead = q.w.is_none_or(|w| p.rank_u(q.u_star, q.w_star) < p.rank_u(q.u_star, w));
        if ahead {
            t.sigma2(q.u_star, q.w_star).or(t.sigma3(q.u_star, q.w_star))
        } else {
            t.sigma1(q.u_star, q.w.unwrap())
        }
    }

    pub fn rho_of(&self, q: &StableQuadruple) -> Option<usize> {
        let p = &self.profile;
        let t = &self.tables;
        let ahead = q.u.is_none_or(|u| p.rank_w(q.w_star, q.u_star) < p.rank_w(q.w_star, u));
        if ahead {
            t.tau1(q.w_star, q.u_star).or(t.tau2(q.w_star, q.u_star))
        } else {
            t.tau3(q.w_star, q.u.unwrap())
        }
    }

    /// Checks every quadruple with swap set at most `d`; the witness is the
    /// first violation in lexicographic order.
    pub fn check(&self, m: &Matching, d: usize) -> Result<RobustReport> {
        let p = &self.profile;
        m.validate(p)?;
        if let Some(&bp) = blocking_pairs_unchecked(p, m).first() {
            return Ok(RobustReport {
                robust: false,
                witness: Some(RobustWitness {
                    quadruple: None,
                    swaps: Vec::new(),
                    profile: p.clone(),
                    blocking_pair: bp,
                }),
            });
        }
        for q in self.quadruples(Some(d)) {
            let sh = self.swap_set_unchecked(&q);
            let r_u = |w: usize| position(&sh.shifted_u, w);
            let r_w = |u: usize| position(&sh.shifted_w, u);
            let u_wants = m.u_mate(q.u_star).is_none_or(|cur| r_u(q.w_star) < r_u(cur));
            let w_wants = m.w_mate(q.w_star).is_none_or(|cur| r_w(q.u_star) < r_w(cur));
            if u_wants && w_wants && m.u_mate(q.u_star) != Some(q.w_star) {
                let profile = self.apply(&q, &sh);
                return Ok(RobustReport {
                    robust: false,
                    witness: Some(RobustWitness {
                        quadruple: Some(q),
                        swaps: sh.swaps,
                        profile,
                        blocking_pair: BlockingPair { u: q.u_star, w: q.w_star },
                    }),
                });
            }
        }
        Ok(RobustReport { robust: true, witness: None })
    }

    /// Implication arcs, forbidden and forced rotations for budget `d`, or
    /// `None` when some quadruple has neither rotation.
    fn constraints(&self, d: usize) -> Option<Constraints> {
        let mut extra = BTreeSet::new();
        let mut forbidden = BTreeSet::new();
        let mut forced = BTreeSet::new();
        for q in self.quadruples(Some(d)) {
            match (self.pi_of(&q), self.rho_of(&q)) {
                (None, None) => return None,
                (Some(pi), Some(rho)) => {
                    // pi selected implies rho selected
                    if pi != rho {
                        extra.insert((rho, pi));
                    }
                }
                (Some(pi), None) => {
                    forbidden.insert(pi);
                }
                (None, Some(rho)) => {
                    forced.insert(rho);
                }
            }
        }
        let mut arcs: Vec<(usize, usize)> = self.digraph.arcs().to_vec();
        arcs.extend(extra);
        Some(Constraints { arcs, forbidden, forced })
    }

    /// Rotations that must be left out (`D`) and kept (`A`) for budget `d`,
    /// with the implication arcs between them, or `None` when some quadruple
    /// has neither rotation.
    pub fn requirements(&self, d: usize) -> Option<RobustRequirements> {
        let c = self.constraints(d)?;
        let k = self.digraph.arcs().len();
        Some(RobustRequirements { forbidden: c.forbidden, forced: c.forced, implications: c.arcs[k..].to_vec() })
    }

    /// The closed rotation set chosen by the d-robust construction.
    pub fn robust_closed_set(&self, d: usize) -> Option<BTreeSet<usize>> {
        let k = self.digraph.len();
        let c = self.constraints(d)?;
        let forbidden: Vec<usize> = c.forbidden.iter().copied().collect();
        let forced: Vec<usize> = c.forced.iter().copied().collect();
        let deleted = closure::reach(k, &c.arcs, &forbidden, true);
        if forced.iter().any(|&a| deleted[a]) {
            return None;
        }
        let t = closure::reach(k, &c.arcs, &forced, false);
        Some((0..k).filter(|&v| t[v]).collect())
    }

    pub fn find(&self, d: usize) -> Option<Matching> {
        let t = self.robust_closed_set(d)?;
        Some(self.digraph.matching_of(&t).expect("closure of a closed digraph is closed"))
    }

    /// Egalitarian returns the cheapest d-robust matching, or `None` if even
    /// that exceeds `eta`.
    pub fn find_optimal(&self, d: usize, objective: Objective) -> Option<Matching> {
        match objective {
            Objective::Any => self.find(d),
            Objective::Perfect => {
                let m = self.find(d)?;
                matched_partition(&self.profile).unmatched.is_empty().then_some(m)
            }
            Objective::Egalitarian { eta } => {
                let c = self.constraints(d)?;
                let w = RotationWeights::new(&self.profile, &self.digraph);
                let forced: Vec<usize> = c.forced.iter().copied().collect();
                let forbidden: Vec<usize> = c.forbidden.iter().copied().collect();
                let set = closure::min_weight_closure(self.digraph.len(), &w.0, &c.arcs, &forced, &forbidden)?;
                let s: BTreeSet<usize> = (0..self.digraph.len()).filter(|&v| set[v]).collect();
                let m = self.digraph.matching_of(&s).expect("optimizer returns closed sets");
                let cost = egalitarian_cost_unchecked(&self.profile, &m);
                eta.is_none_or(|h| cost <= h).then_some(m)
            }
        }
    }
}

/// Constraints a d-robust closed set must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustRequirements {
    pub forbidden: BTreeSet<usize>,
    pub forced: BTreeSet<usize>,
    /// `(a, b)`: selecting `b` requires `a`.
    pub implications: Vec<(usize, usize)>,
}

struct Constraints {
    arcs: Vec<(usize, usize)>,
    forbidden: BTreeSet<usize>,
    forced: BTreeSet<usize>,
}

fn position(list: &[usize], x: usize) -> usize {
    list.iter().position(|&y| y == x).unwrap_or(list.len())
}

/// Moves `mover` forward one step at a time until it is right in front of
/// `target` (or stays put if already ahead, or `target` is absent).
fn shift_forward(
    list: &[usize],
    mover: usize,
    target: Option<usize>,
    owner: AgentId,
    swaps: &mut Vec<SwapOp>,
) -> Vec<usize> {
    let mut l = list.to_vec();
    let Some(target) = target else { return l };
    let mut i = position(&l, mover);
    let t = position(&l, target);
    while i > t {
        swaps.push(SwapOp::new(owner, l[i], l[i - 1]));
        l.swap(i, i - 1);
        i -= 1;
    }
    l
}

/// A profile within the budget where the matching is blocked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustWitness {
    /// `None` when the matching is already unstable in the input profile.
    pub quadruple: Option<StableQuadruple>,
    pub swaps: Vec<SwapOp>,
    pub profile: Profile,
    pub blocking_pair: BlockingPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustReport {
    pub robust: bool,
    pub witness: Option<RobustWitness>,
}

pub fn stable_quadruples(p: &Profile, max_swaps: Option<usize>) -> Result<Vec<StableQuadruple>> {
    Ok(RobustnessAnalysis::new(p)?.quadruples(max_swaps))
}

pub fn swap_set(p: &Profile, q: &StableQuadruple) -> Result<SwapSet> {
    RobustnessAnalysis::new(p)?.swap_set(q)
}

pub fn shifted_profile(p: &Profile, q: &StableQuadruple) -> Result<Profile> {
    RobustnessAnalysis::new(p)?.shifted_profile(q)
}

pub fn is_d_robust(p: &Profile, m: &Matching, d: usize) -> Result<RobustReport> {
    m.validate(p)?;
    if !is_stable_unchecked(p, m) {
        let bp = blocking_pairs_unchecked(p, m)[0];
        return Ok(RobustReport {
            robust: false,
            witness: Some(RobustWitness { quadruple: None, swaps: Vec::new(), profile: p.clone(), blocking_pair: bp }),
        });
    }
    RobustnessAnalysis::new(p)?.check(m, d)
}

pub fn find_d_robust(p: &Profile, d: usize) -> Result<Option<Matching>> {
    Ok(RobustnessAnalysis::new(p)?.find(d))
}

pub fn find_d_robust_optimal(p: &Profile, d: usize, objective: Objective) -> Result<Option<Matching>> {
    Ok(RobustnessAnalysis::new(p)?.find_optimal(d, objective))
}

/// Largest `d <= cap` admitting a d-robust matching (default cap: `n`).
pub fn max_robustness(p: &Profile, cap: Option<usize>) -> Result<Option<(usize, Matching)>> {
    let a = RobustnessAnalysis::new(p)?;
    let cap = cap.unwrap_or(p.n());
    let mut best = None;
    for d in 0..=cap {
        match a.find(d) {
            Some(m) => best = Some((d, m)),
            None => break,
        }
    }
    Ok(best)
}
