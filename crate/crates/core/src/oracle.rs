//! Brute-force reference implementations. Slow on purpose; every fast
//! checker and solver is tested against these.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matching::{egalitarian_cost_unchecked, is_perfect, is_stable_unchecked, Matching};
use crate::profile::{AgentId, Profile, Side};
use crate::query::{Mode, Objective};

/// Largest side size accepted by the matching enumerators by default.
pub const DEFAULT_SIDE_CAP: usize = 6;
/// Largest number of profiles a ball enumeration may produce.
pub const DEFAULT_BALL_CAP: usize = 500_000;

fn check_sides(p: &Profile, cap: usize) -> Result<()> {
    if p.n_u() > cap || p.n_w() > cap {
        return Err(Error::TooLarge(format!("sides {}x{} exceed cap {cap}", p.n_u(), p.n_w())));
    }
    Ok(())
}

pub fn enumerate_matchings(p: &Profile) -> Result<Vec<Matching>> {
    enumerate_matchings_capped(p, DEFAULT_SIDE_CAP)
}

/// Every matching over mutually acceptable pairs, each exactly once.
pub fn enumerate_matchings_capped(p: &Profile, side_cap: usize) -> Result<Vec<Matching>> {
    check_sides(p, side_cap)?;
    let mut out = Vec::new();
    let mut m = Matching::empty(p.n_u(), p.n_w());
    rec_matchings(p, 0, &mut m, &mut out);
    Ok(out)
}

fn rec_matchings(p: &Profile, u: usize, m: &mut Matching, out: &mut Vec<Matching>) {
    if u == p.n_u() {
        out.push(m.clone());
        return;
    }
    rec_matchings(p, u + 1, m, out);
    for &w in p.u_list(u) {
        if m.w_mate(w).is_none() {
            m.set_pair(u, w);
            rec_matchings(p, u + 1, m, out);
            m.unmatch(AgentId::u(u));
        }
    }
}

pub fn enumerate_stable_bf(p: &Profile) -> Result<Vec<Matching>> {
    enumerate_stable_bf_capped(p, DEFAULT_SIDE_CAP)
}

pub fn enumerate_stable_bf_capped(p: &Profile, side_cap: usize) -> Result<Vec<Matching>> {
    Ok(enumerate_matchings_capped(p, side_cap)?.into_iter().filter(|m| is_stable_unchecked(p, m)).collect())
}

/// Lists reachable from `list` with at most `d` adjacent swaps.
fn lists_within(list: &[usize], d: usize) -> Vec<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::from([list.to_vec()]);
    let mut frontier = vec![list.to_vec()];
    let mut out = vec![list.to_vec()];
    for _ in 0..d {
        let mut next = Vec::new();
        for l in &frontier {
            for i in 0..l.len().saturating_sub(1) {
                let mut s = l.clone();
                s.swap(i, i + 1);
                if seen.insert(s.clone()) {
                    out.push(s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    out
}

fn neighbours(p: &Profile) -> Vec<Profile> {
    p.adjacent_swaps().iter().map(|s| p.apply_swap(s).expect("swap is applicable")).collect()
}

/// Profiles within distance `d`, deduplicated, in breadth-first order.
pub fn profiles_within(p: &Profile, d: usize, mode: Mode) -> Result<Vec<Profile>> {
    profiles_within_capped(p, d, mode, DEFAULT_BALL_CAP)
}

pub fn profiles_within_capped(p: &Profile, d: usize, mode: Mode, cap: usize) -> Result<Vec<Profile>> {
    match mode {
        Mode::Global => {
            let mut out = Vec::new();
            global_ball(p, d, cap, |q| {
                out.push(q.clone());
                true
            })?;
            Ok(out)
        }
        Mode::Local => {
            let choices: Vec<(AgentId, Vec<Vec<usize>>)> =
                p.agents().map(|x| (x, lists_within(p.list(x), d))).collect();
            let size = choices.iter().try_fold(1usize, |acc, (_, c)| acc.checked_mul(c.len()).filter(|&s| s <= cap));
            if size.is_none() {
                return Err(Error::TooLarge(format!("local ball of radius {d} exceeds {cap} profiles")));
            }
            let mut out = vec![p.clone()];
            for (x, opts) in choices {
                out = out.iter().flat_map(|q| opts.iter().map(move |l| q.with_list(x, l.clone()))).collect();
            }
            Ok(out)
        }
    }
}

/// Breadth-first walk over the global ball; `visit` returns false to stop.
/// Returns the radius at which the walk stopped, if it did.
fn global_ball(p: &Profile, d: usize, cap: usize, mut visit: impl FnMut(&Profile) -> bool) -> Result<Option<usize>> {
    let mut seen: HashSet<Profile> = HashSet::from([p.clone()]);
    if !visit(p) {
        return Ok(Some(0));
    }
    let mut frontier = vec![p.clone()];
    for radius in 1..=d {
        let mut next = Vec::new();
        for q in &frontier {
            for r in neighbours(q) {
                if seen.contains(&r) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::TooLarge(format!("global ball of radius {d} exceeds {cap} profiles")));
                }
                seen.insert(r.clone());
                if !visit(&r) {
                    return Ok(Some(radius));
                }
                next.push(r);
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// Stability of `m` in every profile within swap distance `d`.
pub fn brute_is_d_robust(p: &Profile, m: &Matching, d: usize) -> Result<bool> {
    m.validate(p)?;
    Ok(global_ball(p, d, DEFAULT_BALL_CAP, |q| is_stable_unchecked(q, m))?.is_none())
}

/// Smallest total distance to a profile where `m` is stable, searching up to
/// `max_radius`.
pub fn brute_global_cost(p: &Profile, m: &Matching, max_radius: usize) -> Result<Option<usize>> {
    m.validate(p)?;
    global_ball(p, max_radius, DEFAULT_BALL_CAP, |q| !is_stable_unchecked(q, m))
}

/// Whether some profile with per-list distance at most `dl` makes `m`
/// stable. Exhaustive over list choices, checking each pair once both of its
/// lists are fixed.
pub fn brute_local_stable(p: &Profile, m: &Matching, dl: usize) -> Result<bool> {
    m.validate(p)?;
    let mut order = Vec::new();
    for i in 0..p.n_u().max(p.n_w()) {
        if i < p.n_u() {
            order.push(AgentId::u(i));
        }
        if i < p.n_w() {
            order.push(AgentId::w(i));
        }
    }
    let options: Vec<Vec<Vec<usize>>> = order.iter().map(|&x| lists_within(p.list(x), dl)).collect();
    let mut u_rank: Vec<Option<Vec<usize>>> = vec![None; p.n_u()];
    let mut w_rank: Vec<Option<Vec<usize>>> = vec![None; p.n_w()];
    Ok(local_rec(p, m, &order, &options, 0, &mut u_rank, &mut w_rank))
}

fn rank_vec(list: &[usize], size: usize) -> Vec<usize> {
    let mut r = vec![list.len(); size];
    for (i, &y) in list.iter().enumerate() {
        r[y] = i;
    }
    r
}

fn local_rec(
    p: &Profile,
    m: &Matching,
    order: &[AgentId],
    options: &[Vec<Vec<usize>>],
    i: usize,
    u_rank: &mut Vec<Option<Vec<usize>>>,
    w_rank: &mut Vec<Option<Vec<usize>>>,
) -> bool {
    if i == order.len() {
        return true;
    }
    let x = order[i];
    for list in &options[i] {
        let ok = match x.side {
            Side::U => {
                let r = rank_vec(list, p.n_w());
                let ok = list.iter().all(|&w| {
                    let Some(rw) = &w_rank[w] else { return true };
                    !blocks_with(m, x.index, w, &r, rw)
                });
                if ok {
                    u_rank[x.index] = Some(r);
                }
                ok
            }
            Side::W => {
                let r = rank_vec(list, p.n_u());
                let ok = list.iter().all(|&u| {
                    let Some(ru) = &u_rank[u] else { return true };
                    !blocks_with(m, u, x.index, ru, &r)
                });
                if ok {
                    w_rank[x.index] = Some(r);
                }
                ok
            }
        };
        if ok && local_rec(p, m, order, options, i + 1, u_rank, w_rank) {
            return true;
        }
    }
    match x.side {
        Side::U => u_rank[x.index] = None,
        Side::W => w_rank[x.index] = None,
    }
    false
}

fn blocks_with(m: &Matching, u: usize, w: usize, ru: &[usize], rw: &[usize]) -> bool {
    if m.u_mate(u) == Some(w) {
        return false;
    }
    let u_wants = m.u_mate(u).is_none_or(|c| ru[w] < ru[c]);
    let w_wants = m.w_mate(w).is_none_or(|c| rw[u] < rw[c]);
    u_wants && w_wants
}

/// Smallest per-list budget that makes `m` stable, searching up to `max`.
pub fn brute_local_bound(p: &Profile, m: &Matching, max: usize) -> Result<Option<usize>> {
    for d in 0..=max {
        if brute_local_stable(p, m, d)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Exhaustive search over all matchings for one that is nearly stable within
/// `budget` and meets the objective. Egalitarian picks the cheapest.
pub fn brute_solve_near(p: &Profile, budget: usize, mode: Mode, objective: Objective) -> Result<Option<Matching>> {
    let near = |m: &Matching| -> Result<bool> {
        Ok(match mode {
            Mode::Global => brute_global_cost(p, m, budget)?.is_some(),
            Mode::Local => brute_local_stable(p, m, budget)?,
        })
    };
    let mut candidates = enumerate_matchings(p)?;
    match objective {
        Objective::Any => {}
        Objective::Perfect => candidates.retain(is_perfect),
        Objective::Egalitarian { eta } => {
            candidates.retain(|m| eta.is_none_or(|h| egalitarian_cost_unchecked(p, m) <= h));
            candidates.sort_by_key(|m| egalitarian_cost_unchecked(p, m));
        }
    }
    for m in candidates {
        if near(&m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example2, gen_example3};

    #[test]
    fn matching_counts() {
        let complete = Profile::from_lists(vec![vec![0, 1], vec![0, 1]], vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(enumerate_matchings(&complete).unwrap().len(), 7);
        // acceptable pairs a1b1, a2b1, a2b2
        assert_eq!(enumerate_matchings(&gen_example3()).unwrap().len(), 5);
        let empty = Profile::from_lists(vec![], vec![]).unwrap();
        assert_eq!(enumerate_matchings(&empty).unwrap().len(), 1);
        let big = Profile::from_lists(vec![vec![]; 7], vec![]).unwrap();
        assert!(matches!(enumerate_matchings(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn stable_enumeration() {
        let p = gen_example3();
        assert_eq!(enumerate_stable_bf(&p).unwrap(), vec![Matching::from_names(&p, &[("a2", "b1")]).unwrap()]);
        assert_eq!(enumerate_stable_bf(&gen_example2(2).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn ball_sizes() {
        let p = gen_example3();
        assert_eq!(profiles_within(&p, 0, Mode::Global).unwrap(), vec![p.clone()]);
        // a2 and b1 each have one adjacent pair
        assert_eq!(profiles_within(&p, 1, Mode::Global).unwrap().len(), 3);
        assert_eq!(profiles_within(&p, 1, Mode::Local).unwrap().len(), 4);
        let q = gen_example2(2).unwrap();
        let sizes: Vec<usize> = (0..3).map(|d| profiles_within(&q, d, Mode::Global).unwrap().len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        assert!(matches!(profiles_within_capped(&q, 3, Mode::Global, 10), Err(Error::TooLarge(_))));
    }

    #[test]
    fn brute_examples() {
        let p = gen_example2(3).unwrap();
        let m = crate::classic::u_optimal(&p);
        assert!(!brute_is_d_robust(&p, &m, 1).unwrap());
        assert!(brute_is_d_robust(&p, &m, 0).unwrap());

        let e3 = gen_example3();
        let perfect = Matching::from_names(&e3, &[("a1", "b1"), ("a2", "b2")]).unwrap();
        assert_eq!(brute_global_cost(&e3, &perfect, 3).unwrap(), Some(1));
        assert_eq!(brute_local_bound(&e3, &perfect, 3).unwrap(), Some(1));
        assert_eq!(brute_solve_near(&e3, 1, Mode::Global, Objective::Perfect).unwrap(), Some(perfect.clone()));
        assert_eq!(brute_solve_near(&e3, 0, Mode::Global, Objective::Perfect).unwrap(), None);
        assert_eq!(brute_solve_near(&e3, 1, Mode::Local, Objective::Perfect).unwrap(), Some(perfect));
    }
}
