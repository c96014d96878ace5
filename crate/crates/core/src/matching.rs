//! Matchings, blocking pairs, stability and egalitarian cost.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{AgentId, Profile, Side};

/// A set of disjoint `U`-`W` pairs, stored as two mate arrays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    u_mate: Vec<Option<usize>>,
    w_mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n_u: usize, n_w: usize) -> Self {
        Matching { u_mate: vec![None; n_u], w_mate: vec![None; n_w] }
    }

    /// Builds a matching from `(u, w)` index pairs; rejects shared agents and
    /// out-of-range indices. Acceptability is checked by [`Matching::validate`].
    pub fn from_pairs(n_u: usize, n_w: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(n_u, n_w);
        for &(u, w) in pairs {
            if u >= n_u || w >= n_w {
                return Err(Error::InvalidMatching(format!("pair ({u},{w}) out of range")));
            }
            if m.u_mate[u].is_some() || m.w_mate[w].is_some() {
                return Err(Error::InvalidMatching(format!("pair ({u},{w}) reuses an agent")));
            }
            m.u_mate[u] = Some(w);
            m.w_mate[w] = Some(u);
        }
        Ok(m)
    }

    /// Like [`Matching::from_pairs`] but also checks acceptability in `p`.
    pub fn in_profile(p: &Profile, pairs: &[(usize, usize)]) -> Result<Self> {
        let m = Matching::from_pairs(p.n_u(), p.n_w(), pairs)?;
        m.validate(p)?;
        Ok(m)
    }

    /// Builds a matching from name pairs.
    pub fn from_names(p: &Profile, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut idx = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let (x, y) = (p.agent(a)?, p.agent(b)?);
            match (x.side, y.side) {
                (Side::U, Side::W) => idx.push((x.index, y.index)),
                (Side::W, Side::U) => idx.push((y.index, x.index)),
                _ => return Err(Error::SameSide(x, y)),
            }
        }
        Matching::in_profile(p, &idx)
    }

    pub fn validate(&self, p: &Profile) -> Result<()> {
        if self.u_mate.len() != p.n_u() || self.w_mate.len() != p.n_w() {
            return Err(Error::InvalidMatching("side sizes differ from the profile".into()));
        }
        for (u, w) in self.pairs() {
            if !p.acceptable(u, w) {
                return Err(Error::InvalidMatching(format!(
                    "{} and {} are not mutually acceptable",
                    p.name(AgentId::u(u)),
                    p.name(AgentId::w(w))
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn u_mate(&self, u: usize) -> Option<usize> {
        self.u_mate[u]
    }

    #[inline]
    pub fn w_mate(&self, w: usize) -> Option<usize> {
        self.w_mate[w]
    }

    pub fn mate(&self, x: AgentId) -> Option<AgentId> {
        match x.side {
            Side::U => self.u_mate[x.index].map(AgentId::w),
            Side::W => self.w_mate[x.index].map(AgentId::u),
        }
    }

    pub fn n_u(&self) -> usize {
        self.u_mate.len()
    }

    pub fn n_w(&self) -> usize {
        self.w_mate.len()
    }

    pub fn contains(&self, u: usize, w: usize) -> bool {
        self.u_mate.get(u).copied().flatten() == Some(w)
    }

    /// Pairs in ascending `u` order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.u_mate.iter().enumerate().filter_map(|(u, w)| w.map(|w| (u, w)))
    }

    pub fn len(&self) -> usize {
        self.u_mate.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds a pair, unmatching any previous partners of both agents.
    pub fn set_pair(&mut self, u: usize, w: usize) {
        if let Some(old) = self.u_mate[u].take() {
            self.w_mate[old] = None;
        }
        if let Some(old) = self.w_mate[w].take() {
            self.u_mate[old] = None;
        }
        self.u_mate[u] = Some(w);
        self.w_mate[w] = Some(u);
    }

    pub fn unmatch(&mut self, x: AgentId) {
        match x.side {
            Side::U => {
                if let Some(w) = self.u_mate[x.index].take() {
                    self.w_mate[w] = None;
                }
            }
            Side::W => {
                if let Some(u) = self.w_mate[x.index].take() {
                    self.u_mate[u] = None;
                }
            }
        }
    }

    /// Agents without a partner.
    pub fn unmatched(&self) -> BTreeSet<AgentId> {
        let us = self.u_mate.iter().enumerate().filter(|(_, m)| m.is_none()).map(|(i, _)| AgentId::u(i));
        let ws = self.w_mate.iter().enumerate().filter(|(_, m)| m.is_none()).map(|(i, _)| AgentId::w(i));
        us.chain(ws).collect()
    }

    pub fn display(&self, p: &Profile) -> String {
        let parts: Vec<String> =
            self.pairs().map(|(u, w)| format!("{{{},{}}}", p.name(AgentId::u(u)), p.name(AgentId::w(w)))).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|(u, w)| format!("(U[{u}],W[{w}])")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockingPair {
    pub u: usize,
    pub w: usize,
}

/// True if `u` strictly prefers `w` to its situation in `m`.
#[inline]
pub(crate) fn u_prefers(p: &Profile, m: &Matching, u: usize, w: usize) -> bool {
    match m.u_mate(u) {
        None => true,
        Some(cur) => p.rank_u(u, w) < p.rank_u(u, cur),
    }
}

#[inline]
pub(crate) fn w_prefers(p: &Profile, m: &Matching, w: usize, u: usize) -> bool {
    match m.w_mate(w) {
        None => true,
        Some(cur) => p.rank_w(w, u) < p.rank_w(w, cur),
    }
}

#[inline]
pub(crate) fn blocks(p: &Profile, m: &Matching, u: usize, w: usize) -> bool {
    p.acceptable(u, w) && m.u_mate(u) != Some(w) && u_prefers(p, m, u, w) && w_prefers(p, m, w, u)
}

/// Blocking pairs sorted by `(u, w)`; skips validation.
pub(crate) fn blocking_pairs_unchecked(p: &Profile, m: &Matching) -> Vec<BlockingPair> {
    let mut out = Vec::new();
    for u in 0..p.n_u() {
        for &w in p.u_list(u) {
            if m.u_mate(u) == Some(w) {
                // everything after the partner is worse for u
                break;
            }
            if w_prefers(p, m, w, u) {
                out.push(BlockingPair { u, w });
            }
        }
    }
    out
}

pub(crate) fn is_stable_unchecked(p: &Profile, m: &Matching) -> bool {
    (0..p.n_u()).all(|u| p.u_list(u).iter().take_while(|&&w| m.u_mate(u) != Some(w)).all(|&w| !w_prefers(p, m, w, u)))
}

pub fn blocking_pairs(p: &Profile, m: &Matching) -> Result<Vec<BlockingPair>> {
    m.validate(p)?;
    Ok(blocking_pairs_unchecked(p, m))
}

pub fn is_stable(p: &Profile, m: &Matching) -> Result<bool> {
    m.validate(p)?;
    Ok(is_stable_unchecked(p, m))
}

/// Sum of partner ranks over all agents; an unmatched agent adds its list length.
pub fn egalitarian_cost(p: &Profile, m: &Matching) -> Result<u64> {
    m.validate(p)?;
    Ok(egalitarian_cost_unchecked(p, m))
}

pub(crate) fn egalitarian_cost_unchecked(p: &Profile, m: &Matching) -> u64 {
    let mut total = 0u64;
    for u in 0..p.n_u() {
        total += match m.u_mate(u) {
            Some(w) => p.rank_u(u, w),
            None => p.u_list(u).len(),
        } as u64;
    }
    for w in 0..p.n_w() {
        total += match m.w_mate(w) {
            Some(u) => p.rank_w(w, u),
            None => p.w_list(w).len(),
        } as u64;
    }
    total
}

pub fn is_perfect(m: &Matching) -> bool {
    m.u_mate.iter().all(Option::is_some) && m.w_mate.iter().all(Option::is_some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example2, gen_example3};

    #[test]
    fn example3_blocking_pairs() {
        let p = gen_example3();
        let stable = Matching::from_names(&p, &[("a2", "b1")]).unwrap();
        assert!(blocking_pairs(&p, &stable).unwrap().is_empty());
        assert!(is_stable(&p, &stable).unwrap());

        let perfect = Matching::from_names(&p, &[("a1", "b1"), ("a2", "b2")]).unwrap();
        let a2 = p.agent("a2").unwrap().index;
        let b1 = p.agent("b1").unwrap().index;
        assert_eq!(blocking_pairs(&p, &perfect).unwrap(), vec![BlockingPair { u: a2, w: b1 }]);
        assert!(!is_stable(&p, &perfect).unwrap());
        assert!(is_perfect(&perfect));
        assert!(!is_perfect(&stable));
    }

    #[test]
    fn empty_matching_with_one_acceptable_pair_blocks() {
        let p = Profile::from_lists(vec![vec![0]], vec![vec![0]]).unwrap();
        let m = Matching::empty(1, 1);
        assert_eq!(blocking_pairs(&p, &m).unwrap(), vec![BlockingPair { u: 0, w: 0 }]);
        assert!(!is_stable(&p, &m).unwrap());
    }

    #[test]
    fn example2_costs() {
        for n in 3..=8 {
            let p = gen_example2(n).unwrap();
            let mut pairs = Vec::new();
            let mut rotated = Vec::new();
            for i in 0..n {
                let a = p.agent(&format!("a{i}")).unwrap().index;
                let b = p.agent(&format!("b{i}")).unwrap().index;
                let b_next = p.agent(&format!("b{}", (i + 1) % n)).unwrap().index;
                pairs.push((a, b));
                rotated.push((a, b_next));
            }
            for i in 1..=n {
                let x = p.agent(&format!("x{i}")).unwrap().index;
                let y = p.agent(&format!("y{i}")).unwrap().index;
                pairs.push((x, y));
                rotated.push((x, y));
            }
            let m = Matching::in_profile(&p, &pairs).unwrap();
            let r = Matching::in_profile(&p, &rotated).unwrap();
            let n64 = n as u64;
            assert_eq!(egalitarian_cost(&p, &m).unwrap(), n64 * n64 - 1);
            assert_eq!(egalitarian_cost(&p, &r).unwrap(), n64 + 1);
            assert!(is_perfect(&m));
        }
    }

    #[test]
    fn mutual_first_choices_cost_nothing() {
        let p = Profile::from_lists(vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let m = Matching::in_profile(&p, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(egalitarian_cost(&p, &m).unwrap(), 0);
    }

    #[test]
    fn unmatched_agent_contributes_list_length() {
        let p = gen_example3();
        let m = Matching::from_names(&p, &[("a2", "b1")]).unwrap();
        // a2: 0, b1: 0, a1: |b1| = 1, b2: |a2| = 1
        assert_eq!(egalitarian_cost(&p, &m).unwrap(), 2);
    }

    #[test]
    fn empty_profile_matching_is_perfect() {
        assert!(is_perfect(&Matching::empty(0, 0)));
    }

    #[test]
    fn invalid_matchings_rejected() {
        let p = gen_example3();
        assert!(Matching::from_names(&p, &[("a1", "b2")]).is_err());
        assert!(Matching::from_names(&p, &[("a2", "b1"), ("a2", "b2")]).is_err());
        assert!(Matching::from_names(&p, &[("a1", "a2")]).is_err());
    }
}
