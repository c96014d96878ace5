//! Deferred acceptance and the matched/unmatched partition.

use std::collections::BTreeSet;

use crate::matching::Matching;
use crate::profile::{AgentId, Profile};

/// Agents matched in every stable matching (`matched`) and in none (`unmatched`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    pub matched: BTreeSet<AgentId>,
    pub unmatched: BTreeSet<AgentId>,
}

impl PartitionResult {
    pub fn n_matched(&self) -> usize {
        self.matched.len()
    }

    pub fn n_unmatched(&self) -> usize {
        self.unmatched.len()
    }
}

/// Proposers are given as lists over receivers; `recv_rank[r][p]` is the
/// rank of proposer `p` for receiver `r`.
fn deferred_acceptance(prop_lists: &[Vec<usize>], recv_rank: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n_recv = recv_rank.len();
    let mut next = vec![0usize; prop_lists.len()];
    let mut held: Vec<Option<usize>> = vec![None; n_recv];
    let mut prop_mate: Vec<Option<usize>> = vec![None; prop_lists.len()];
    // free proposers, lowest index proposes first
    let mut free: Vec<usize> = (0..prop_lists.len()).rev().collect();
    while let Some(x) = free.pop() {
        let list = &prop_lists[x];
        while next[x] < list.len() {
            let r = list[next[x]];
            next[x] += 1;
            match held[r] {
                None => {
                    held[r] = Some(x);
                    prop_mate[x] = Some(r);
                    break;
                }
                Some(y) if recv_rank[r][x] < recv_rank[r][y] => {
                    held[r] = Some(x);
                    prop_mate[x] = Some(r);
                    prop_mate[y] = None;
                    free.push(y);
                    break;
                }
                Some(_) => {}
            }
        }
    }
    prop_mate
}

fn rank_rows(p: &Profile, side_u: bool) -> Vec<Vec<usize>> {
    if side_u {
        (0..p.n_u()).map(|u| (0..p.n_w()).map(|w| p.rank_u(u, w)).collect()).collect()
    } else {
        (0..p.n_w()).map(|w| (0..p.n_u()).map(|u| p.rank_w(w, u)).collect()).collect()
    }
}

/// The stable matching best for every `U` agent.
pub fn u_optimal(p: &Profile) -> Matching {
    let mates = deferred_acceptance(p.u_lists(), &rank_rows(p, false));
    let pairs: Vec<(usize, usize)> = mates.iter().enumerate().filter_map(|(u, w)| w.map(|w| (u, w))).collect();
    Matching::from_pairs(p.n_u(), p.n_w(), &pairs).expect("deferred acceptance yields a matching")
}

/// The stable matching best for every `W` agent.
pub fn w_optimal(p: &Profile) -> Matching {
    let mates = deferred_acceptance(p.w_lists(), &rank_rows(p, true));
    let pairs: Vec<(usize, usize)> = mates.iter().enumerate().filter_map(|(w, u)| u.map(|u| (u, w))).collect();
    Matching::from_pairs(p.n_u(), p.n_w(), &pairs).expect("deferred acceptance yields a matching")
}

pub fn matched_partition(p: &Profile) -> PartitionResult {
    let m = u_optimal(p);
    let unmatched = m.unmatched();
    let matched = p.agents().filter(|x| !unmatched.contains(x)).collect();
    PartitionResult { matched, unmatched }
}
