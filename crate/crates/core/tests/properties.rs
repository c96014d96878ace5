use proptest::prelude::*;

use stabmatch::classic::{matched_partition, u_optimal, w_optimal};
use stabmatch::generators::gen_random;
use stabmatch::io::{parse_matching, parse_profile, serialize_matching, serialize_profile};
use stabmatch::matching::{egalitarian_cost, is_stable};
use stabmatch::near::{global_stabilization_cost, local_instability, repair_after_swap, witness_profile_local};
use stabmatch::oracle::enumerate_stable_bf;
use stabmatch::profile::{kendall_tau, swap_distance, swap_distance_per_agent};
use stabmatch::robust::is_d_robust;
use stabmatch::rotation::{rotation_digraph, RotationWeights};
use stabmatch::{Profile, SwapDistance};

fn profile(max_side: usize) -> impl Strategy<Value = Profile> {
    (1..=max_side, 1..=max_side, 0.2f64..=1.0, any::<u64>())
        .prop_map(|(nu, nw, d, seed)| gen_random(nu, nw, d, seed).unwrap())
}

/// A profile and a walk of random adjacent swaps from it.
fn walk(max_side: usize, max_len: usize) -> impl Strategy<Value = (Profile, Vec<Profile>)> {
    (profile(max_side), prop::collection::vec(any::<prop::sample::Index>(), 0..=max_len)).prop_map(|(p, picks)| {
        let mut steps = Vec::new();
        let mut cur = p.clone();
        for i in picks {
            let swaps = cur.adjacent_swaps();
            if swaps.is_empty() {
                break;
            }
            cur = cur.apply_swap(&swaps[i.index(swaps.len())]).unwrap();
            steps.push(cur.clone());
        }
        (p, steps)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn swap_is_an_involution(p in profile(5), i in any::<prop::sample::Index>()) {
        let swaps = p.adjacent_swaps();
        prop_assume!(!swaps.is_empty());
        let s = swaps[i.index(swaps.len())];
        let q = p.apply_swap(&s).unwrap();
        prop_assert_eq!(swap_distance(&p, &q).unwrap(), SwapDistance::Finite(1));
        prop_assert_eq!(q.apply_swap(&s).unwrap(), p);
    }

    #[test]
    fn swap_distance_is_a_metric((p, steps) in walk(4, 6)) {
        prop_assert_eq!(swap_distance(&p, &p).unwrap(), SwapDistance::Finite(0));
        for (k, q) in steps.iter().enumerate() {
            let d = swap_distance(&p, q).unwrap();
            prop_assert_eq!(d, swap_distance(q, &p).unwrap());
            prop_assert!(d <= SwapDistance::Finite(k as u64 + 1));
            for r in &steps {
                prop_assert!(swap_distance(&p, r).unwrap() <= d + swap_distance(q, r).unwrap());
            }
            let total = swap_distance_per_agent(&p, q).unwrap().into_values().fold(SwapDistance::Finite(0), |a, b| a + b);
            prop_assert_eq!(total, d);
        }
    }

    #[test]
    fn kendall_tau_counts_inversions(v in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
        let id: Vec<usize> = (0..6).collect();
        let inversions = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).filter(|&(i, j)| v[i] > v[j]).count();
        prop_assert_eq!(kendall_tau(&id, &v), SwapDistance::Finite(inversions as u64));
        prop_assert_eq!(kendall_tau(&id, &v[1..]), SwapDistance::Infinite);
    }

    #[test]
    fn profile_text_round_trips(p in profile(7)) {
        let text = serialize_profile(&p);
        let q = parse_profile(&text).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(serialize_profile(&q), text);
        let m = u_optimal(&p);
        prop_assert_eq!(parse_matching(&serialize_matching(&m, &p), &p).unwrap(), m);
    }

    #[test]
    fn optimal_matchings_bracket_the_lattice(p in profile(5)) {
        let m0 = u_optimal(&p);
        let mz = w_optimal(&p);
        prop_assert!(is_stable(&p, &m0).unwrap());
        prop_assert!(is_stable(&p, &mz).unwrap());
        // same agents matched in every stable matching
        prop_assert_eq!(m0.unmatched(), mz.unmatched());
        prop_assert_eq!(matched_partition(&p).unmatched, m0.unmatched());
        let d = rotation_digraph(&p);
        let all = d.closed_subsets();
        let mut ms: Vec<_> = all.iter().map(|(_, m)| m.clone()).collect();
        ms.sort();
        let mut bf = enumerate_stable_bf(&p).unwrap();
        bf.sort();
        prop_assert_eq!(ms, bf);
        let w = RotationWeights::new(&p, &d);
        let base = egalitarian_cost(&p, &m0).unwrap() as i64;
        for (s, m) in &all {
            prop_assert_eq!(base + w.total(s), egalitarian_cost(&p, m).unwrap() as i64);
        }
    }

    #[test]
    fn robustness_is_monotone(p in profile(4)) {
        for m in enumerate_stable_bf(&p).unwrap() {
            let mut prev = true;
            for d in 0..=3 {
                let r = is_d_robust(&p, &m, d).unwrap();
                prop_assert!(prev || !r.robust);
                if let Some(w) = &r.witness {
                    prop_assert!(!is_stable(&w.profile, &m).unwrap());
                    let mut replay = p.clone();
                    for s in &w.swaps {
                        replay = replay.apply_swap(s).unwrap();
                    }
                    prop_assert_eq!(&replay, &w.profile);
                    prop_assert!(w.swaps.len() <= d);
                }
                prev = r.robust;
            }
        }
    }

    #[test]
    fn near_witnesses_replay(p in profile(4), i in any::<prop::sample::Index>()) {
        let ms = stabmatch::oracle::enumerate_matchings(&p).unwrap();
        let m = &ms[i.index(ms.len())];
        let l = local_instability(&p, m).unwrap();
        let g = global_stabilization_cost(&p, m).unwrap();
        prop_assert!(l <= g.cost);
        if let Some(w) = &g.witness {
            let mut replay = p.clone();
            for s in &g.swaps {
                replay = replay.apply_swap(s).unwrap();
            }
            prop_assert_eq!(&replay, w);
            prop_assert!(is_stable(w, m).unwrap());
        }
        if let SwapDistance::Finite(b) = l {
            let (w, _) = witness_profile_local(&p, m, b as usize).unwrap();
            prop_assert!(is_stable(&w, m).unwrap());
        }
    }

    #[test]
    fn repair_yields_stable_matching(p in profile(6), i in any::<prop::sample::Index>()) {
        let swaps = p.adjacent_swaps();
        prop_assume!(!swaps.is_empty());
        let s = swaps[i.index(swaps.len())];
        for m1 in [u_optimal(&p), w_optimal(&p)] {
            let m2 = repair_after_swap(&p, &m1, &s).unwrap();
            prop_assert!(is_stable(&p.apply_swap(&s).unwrap(), &m2).unwrap());
            prop_assert!(m1.unmatched().symmetric_difference(&m2.unmatched()).count() <= 2);
        }
    }
}
