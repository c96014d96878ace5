//! Agents, preference lists, swaps and the swap (Kendall tau) distance.
//!
//! A [`Profile`] holds two disjoint sides `U` and `W`. Every agent owns a
//! strict preference list over a subset of the opposite side; acceptability
//! is mutual. Ranks are 0-based: the rank of `y` in `x`'s list is the number
//! of agents `x` prefers to `y`, and an unacceptable agent gets the length of
//! the list.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    U,
    W,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::U => Side::W,
            Side::W => Side::U,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentId {
    pub side: Side,
    pub index: usize,
}

impl AgentId {
    pub const fn u(index: usize) -> Self {
        AgentId { side: Side::U, index }
    }

    pub const fn w(index: usize) -> Self {
        AgentId { side: Side::W, index }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::U => write!(f, "U[{}]", self.index),
            Side::W => write!(f, "W[{}]", self.index),
        }
    }
}

/// A reason a raw profile was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    /// `from` lists `to`, but `to` does not list `from`.
    AsymmetricAcceptability {
        from: AgentId,
        to: AgentId,
    },
    DuplicateEntry {
        owner: AgentId,
        agent: AgentId,
    },
    /// An entry refers to an index outside the opposite side.
    UnknownAgent {
        owner: AgentId,
        index: usize,
    },
    /// The number of lists or names does not match the side size.
    SideSizeMismatch {
        side: Side,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AsymmetricAcceptability { from, to } => {
                write!(f, "{from} lists {to}, but {to} does not list {from}")
            }
            Violation::DuplicateEntry { owner, agent } => {
                write!(f, "{owner} lists {agent} more than once")
            }
            Violation::UnknownAgent { owner, index } => {
                write!(f, "{owner} lists unknown agent index {index}")
            }
            Violation::SideSizeMismatch { side, expected, found } => {
                write!(f, "side {side:?} has {expected} agents but {found} entries")
            }
        }
    }
}

/// Unvalidated input: names and lists by index into the opposite side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawProfile {
    pub u_names: Vec<String>,
    pub w_names: Vec<String>,
    pub u_lists: Vec<Vec<usize>>,
    pub w_lists: Vec<Vec<usize>>,
}

impl RawProfile {
    /// Default names `u1..`, `w1..` for the given lists.
    pub fn from_lists(u_lists: Vec<Vec<usize>>, w_lists: Vec<Vec<usize>>) -> Self {
        RawProfile {
            u_names: default_names("u", u_lists.len()),
            w_names: default_names("w", w_lists.len()),
            u_lists,
            w_lists,
        }
    }

    /// Drops every entry whose acceptability is not mutual and returns the
    /// dropped entries as warnings.
    pub fn prune_asymmetric(&self) -> (RawProfile, Vec<Violation>) {
        let mut warnings = Vec::new();
        let mut out = self.clone();
        let (nu, nw) = (self.u_lists.len(), self.w_lists.len());
        let lists_u = |w: usize| self.w_lists.get(w).map(|l| l.as_slice()).unwrap_or(&[]);
        let lists_w = |u: usize| self.u_lists.get(u).map(|l| l.as_slice()).unwrap_or(&[]);
        for (u, list) in out.u_lists.iter_mut().enumerate() {
            list.retain(|&w| {
                let keep = w < nw && lists_u(w).contains(&u);
                if !keep && w < nw {
                    warnings.push(Violation::AsymmetricAcceptability { from: AgentId::u(u), to: AgentId::w(w) });
                }
                keep || w >= nw
            });
        }
        for (w, list) in out.w_lists.iter_mut().enumerate() {
            list.retain(|&u| {
                let keep = u < nu && lists_w(u).contains(&w);
                if !keep && u < nu {
                    warnings.push(Violation::AsymmetricAcceptability { from: AgentId::w(w), to: AgentId::u(u) });
                }
                keep || u >= nu
            });
        }
        (out, warnings)
    }
}

pub(crate) fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Checks duplicates, index bounds and mutual acceptability, reporting every
/// violation at once.
pub fn validate_profile(raw: &RawProfile) -> Result<Profile> {
    let nu = raw.u_names.len();
    let nw = raw.w_names.len();
    let mut violations = Vec::new();
    if raw.u_lists.len() != nu {
        violations.push(Violation::SideSizeMismatch { side: Side::U, expected: nu, found: raw.u_lists.len() });
    }
    if raw.w_lists.len() != nw {
        violations.push(Violation::SideSizeMismatch { side: Side::W, expected: nw, found: raw.w_lists.len() });
    }
    if !violations.is_empty() {
        return Err(Error::InvalidProfile(violations));
    }

    check_lists(Side::U, &raw.u_lists, nw, &mut violations);
    check_lists(Side::W, &raw.w_lists, nu, &mut violations);

    for (u, list) in raw.u_lists.iter().enumerate() {
        for &w in list.iter().filter(|&&w| w < nw) {
            if !raw.w_lists[w].contains(&u) {
                violations.push(Violation::AsymmetricAcceptability { from: AgentId::u(u), to: AgentId::w(w) });
            }
        }
    }
    for (w, list) in raw.w_lists.iter().enumerate() {
        for &u in list.iter().filter(|&&u| u < nu) {
            if !raw.u_lists[u].contains(&w) {
                violations.push(Violation::AsymmetricAcceptability { from: AgentId::w(w), to: AgentId::u(u) });
            }
        }
    }

    if !violations.is_empty() {
        violations.sort();
        violations.dedup();
        return Err(Error::InvalidProfile(violations));
    }

    Ok(Profile::build(
        Arc::new(raw.u_names.clone()),
        Arc::new(raw.w_names.clone()),
        raw.u_lists.clone(),
        raw.w_lists.clone(),
    ))
}

fn check_lists(side: Side, lists: &[Vec<usize>], other: usize, out: &mut Vec<Violation>) {
    for (x, list) in lists.iter().enumerate() {
        let owner = AgentId { side, index: x };
        let mut seen = vec![false; other];
        for &y in list {
            if y >= other {
                out.push(Violation::UnknownAgent { owner, index: y });
            } else if seen[y] {
                out.push(Violation::DuplicateEntry { owner, agent: AgentId { side: side.other(), index: y } });
            } else {
                seen[y] = true;
            }
        }
    }
}

/// A validated preference profile. Immutable; operations return new values.
#[derive(Clone, Debug)]
pub struct Profile {
    u_names: Arc<Vec<String>>,
    w_names: Arc<Vec<String>>,
    u_lists: Vec<Vec<usize>>,
    w_lists: Vec<Vec<usize>>,
    // rank tables, `len` for unacceptable
    u_rank: Vec<Vec<usize>>,
    w_rank: Vec<Vec<usize>>,
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        self.u_lists == other.u_lists
            && self.w_lists == other.w_lists
            && self.u_names == other.u_names
            && self.w_names == other.w_names
    }
}

impl Eq for Profile {}

impl Hash for Profile {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.u_lists.hash(state);
        self.w_lists.hash(state);
    }
}

impl Profile {
    fn build(
        u_names: Arc<Vec<String>>,
        w_names: Arc<Vec<String>>,
        u_lists: Vec<Vec<usize>>,
        w_lists: Vec<Vec<usize>>,
    ) -> Profile {
        let u_rank = rank_table(&u_lists, w_lists.len());
        let w_rank = rank_table(&w_lists, u_lists.len());
        Profile { u_names, w_names, u_lists, w_lists, u_rank, w_rank }
    }

    /// Validates lists given by index, with default names.
    pub fn from_lists(u_lists: Vec<Vec<usize>>, w_lists: Vec<Vec<usize>>) -> Result<Profile> {
        validate_profile(&RawProfile::from_lists(u_lists, w_lists))
    }

    /// Validates lists given by agent name.
    pub fn from_named(u_names: &[&str], w_names: &[&str], u_lists: &[&[&str]], w_lists: &[&[&str]]) -> Result<Profile> {
        let lookup = |names: &[&str], n: &str| {
            names.iter().position(|x| *x == n).ok_or_else(|| Error::UnknownAgent(n.to_string()))
        };
        let u_idx = u_lists
            .iter()
            .map(|l| l.iter().map(|n| lookup(w_names, n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let w_idx = w_lists
            .iter()
            .map(|l| l.iter().map(|n| lookup(u_names, n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        validate_profile(&RawProfile {
            u_names: u_names.iter().map(|s| s.to_string()).collect(),
            w_names: w_names.iter().map(|s| s.to_string()).collect(),
            u_lists: u_idx,
            w_lists: w_idx,
        })
    }

    pub fn n_u(&self) -> usize {
        self.u_lists.len()
    }

    pub fn n_w(&self) -> usize {
        self.w_lists.len()
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::U => self.n_u(),
            Side::W => self.n_w(),
        }
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        (0..self.n_u()).map(AgentId::u).chain((0..self.n_w()).map(AgentId::w))
    }

    pub fn u_list(&self, u: usize) -> &[usize] {
        &self.u_lists[u]
    }

    pub fn w_list(&self, w: usize) -> &[usize] {
        &self.w_lists[w]
    }

    pub fn u_lists(&self) -> &[Vec<usize>] {
        &self.u_lists
    }

    pub fn w_lists(&self) -> &[Vec<usize>] {
        &self.w_lists
    }

    pub fn list(&self, x: AgentId) -> &[usize] {
        match x.side {
            Side::U => &self.u_lists[x.index],
            Side::W => &self.w_lists[x.index],
        }
    }

    /// Rank of `w` in `u`'s list.
    #[inline]
    pub fn rank_u(&self, u: usize, w: usize) -> usize {
        self.u_rank[u][w]
    }

    /// Rank of `u` in `w`'s list.
    #[inline]
    pub fn rank_w(&self, w: usize, u: usize) -> usize {
        self.w_rank[w][u]
    }

    #[inline]
    pub fn acceptable(&self, u: usize, w: usize) -> bool {
        self.u_rank[u][w] < self.u_lists[u].len()
    }

    pub fn contains(&self, x: AgentId) -> bool {
        x.index < self.side_len(x.side)
    }

    /// Rank of `y` in `x`'s list; `x` and `y` must be on opposite sides.
    pub fn rank(&self, x: AgentId, y: AgentId) -> Result<usize> {
        if x.side == y.side {
            return Err(Error::SameSide(x, y));
        }
        if !self.contains(x) {
            return Err(Error::UnknownAgent(x.to_string()));
        }
        if !self.contains(y) {
            return Err(Error::UnknownAgent(y.to_string()));
        }
        Ok(match x.side {
            Side::U => self.rank_u(x.index, y.index),
            Side::W => self.rank_w(x.index, y.index),
        })
    }

    pub fn u_names(&self) -> &[String] {
        &self.u_names
    }

    pub fn w_names(&self) -> &[String] {
        &self.w_names
    }

    pub fn name(&self, x: AgentId) -> &str {
        match x.side {
            Side::U => &self.u_names[x.index],
            Side::W => &self.w_names[x.index],
        }
    }

    pub fn find(&self, name: &str) -> Option<AgentId> {
        if let Some(i) = self.u_names.iter().position(|n| n == name) {
            return Some(AgentId::u(i));
        }
        self.w_names.iter().position(|n| n == name).map(AgentId::w)
    }

    /// Looks an agent up by name, failing with [`Error::UnknownAgent`].
    pub fn agent(&self, name: &str) -> Result<AgentId> {
        self.find(name).ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    /// Largest side size; the `n` of the robustness bounds.
    pub fn n(&self) -> usize {
        self.n_u().max(self.n_w())
    }

    pub fn max_list_len(&self) -> usize {
        self.u_lists.iter().chain(self.w_lists.iter()).map(Vec::len).max().unwrap_or(0)
    }

    /// Replaces the list of one agent by a permutation of the same entries.
    pub(crate) fn with_list(&self, owner: AgentId, list: Vec<usize>) -> Profile {
        let mut out = self.clone();
        match owner.side {
            Side::U => {
                for (r, &w) in list.iter().enumerate() {
                    out.u_rank[owner.index][w] = r;
                }
                out.u_lists[owner.index] = list;
            }
            Side::W => {
                for (r, &u) in list.iter().enumerate() {
                    out.w_rank[owner.index][u] = r;
                }
                out.w_lists[owner.index] = list;
            }
        }
        out
    }

    /// Exchanges two adjacent agents in the owner's list.
    pub fn apply_swap(&self, s: &SwapOp) -> Result<Profile> {
        if !self.contains(s.owner) {
            return Err(Error::UnknownAgent(s.owner.to_string()));
        }
        let list = self.list(s.owner);
        let pos = |y: usize| list.iter().position(|&z| z == y);
        let (Some(a), Some(b)) = (pos(s.pair[0]), pos(s.pair[1])) else {
            return Err(Error::UnknownAgent(self.display_swap(s)));
        };
        if a.abs_diff(b) != 1 {
            return Err(Error::NonAdjacentSwap(self.display_swap(s)));
        }
        let mut list = list.to_vec();
        list.swap(a, b);
        Ok(self.with_list(s.owner, list))
    }

    /// All swaps applicable to this profile, ordered by owner then position.
    pub fn adjacent_swaps(&self) -> Vec<SwapOp> {
        let mut out = Vec::new();
        for x in self.agents() {
            for pair in self.list(x).windows(2) {
                out.push(SwapOp::new(x, pair[0], pair[1]));
            }
        }
        out
    }

    pub fn display_swap(&self, s: &SwapOp) -> String {
        let other = s.owner.side.other();
        let name = |i: usize| {
            let y = AgentId { side: other, index: i };
            if self.contains(y) {
                self.name(y).to_string()
            } else {
                y.to_string()
            }
        };
        let owner = if self.contains(s.owner) { self.name(s.owner).to_string() } else { s.owner.to_string() };
        format!("({owner},{{{},{}}})", name(s.pair[0]), name(s.pair[1]))
    }

    pub(crate) fn same_universe(&self, other: &Profile) -> bool {
        self.n_u() == other.n_u() && self.n_w() == other.n_w()
    }
}

fn rank_table(lists: &[Vec<usize>], other: usize) -> Vec<Vec<usize>> {
    lists
        .iter()
        .map(|list| {
            let mut r = vec![list.len(); other];
            for (i, &y) in list.iter().enumerate() {
                r[y] = i;
            }
            r
        })
        .collect()
}

/// A swap `(owner, {x, y})`: reversing two consecutive entries of `owner`'s
/// list. The pair is stored sorted, so the swap is unordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwapOp {
    pub owner: AgentId,
    pub pair: [usize; 2],
}

impl SwapOp {
    pub fn new(owner: AgentId, x: usize, y: usize) -> Self {
        SwapOp { owner, pair: [x.min(y), x.max(y)] }
    }
}

/// Swap distance, `Infinite` when acceptable sets differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SwapDistance {
    Finite(u64),
    Infinite,
}

impl SwapDistance {
    pub fn finite(self) -> Option<u64> {
        match self {
            SwapDistance::Finite(v) => Some(v),
            SwapDistance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, SwapDistance::Finite(_))
    }
}

impl std::ops::Add for SwapDistance {
    type Output = SwapDistance;

    fn add(self, rhs: SwapDistance) -> SwapDistance {
        match (self, rhs) {
            (SwapDistance::Finite(a), SwapDistance::Finite(b)) => SwapDistance::Finite(a + b),
            _ => SwapDistance::Infinite,
        }
    }
}

impl fmt::Display for SwapDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwapDistance::Finite(v) => write!(f, "{v}"),
            SwapDistance::Infinite => write!(f, "inf"),
        }
    }
}

/// Number of pairs ordered differently in the two lists.
pub fn kendall_tau(a: &[usize], b: &[usize]) -> SwapDistance {
    if a.len() != b.len() {
        return SwapDistance::Infinite;
    }
    let size = a.iter().chain(b.iter()).copied().max().map_or(0, |m| m + 1);
    let mut pos_b = vec![usize::MAX; size];
    for (i, &y) in b.iter().enumerate() {
        pos_b[y] = i;
    }
    if a.iter().any(|&y| pos_b[y] == usize::MAX) {
        return SwapDistance::Infinite;
    }
    let mut discordant = 0u64;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if pos_b[a[i]] > pos_b[a[j]] {
                discordant += 1;
            }
        }
    }
    SwapDistance::Finite(discordant)
}

pub fn swap_distance_per_agent(p1: &Profile, p2: &Profile) -> Result<BTreeMap<AgentId, SwapDistance>> {
    if !p1.same_universe(p2) {
        return Err(Error::UnknownAgent(format!(
            "profiles have sides {}x{} and {}x{}",
            p1.n_u(),
            p1.n_w(),
            p2.n_u(),
            p2.n_w()
        )));
    }
    Ok(p1.agents().map(|x| (x, kendall_tau(p1.list(x), p2.list(x)))).collect())
}

pub fn swap_distance(p1: &Profile, p2: &Profile) -> Result<SwapDistance> {
    Ok(swap_distance_per_agent(p1, p2)?.into_values().fold(SwapDistance::Finite(0), |acc, d| acc + d))
}
