//! Cross-check the fast engines against exhaustive search on random
//! instances.

use stabmatch::generators::gen_random;
use stabmatch::near::global_stabilization_cost;
use stabmatch::oracle::{brute_global_cost, brute_is_d_robust, enumerate_matchings, enumerate_stable_bf};
use stabmatch::robust::is_d_robust;
use stabmatch::SwapDistance;

fn main() -> stabmatch::Result<()> {
    let (mut robust, mut global) = (0, 0);
    for seed in 0..30 {
        let p = gen_random(4, 4, 0.8, seed)?;
        for m in enumerate_stable_bf(&p)? {
            for d in 0..=2 {
                assert_eq!(is_d_robust(&p, &m, d)?.robust, brute_is_d_robust(&p, &m, d)?);
                robust += 1;
            }
        }
        for m in enumerate_matchings(&p)?.iter().take(25) {
            if let Some(c) = brute_global_cost(&p, m, 2)? {
                assert_eq!(global_stabilization_cost(&p, m)?.cost, SwapDistance::Finite(c as u64));
                global += 1;
            }
        }
    }
    println!("{robust} robustness and {global} global-cost checks agree");
    Ok(())
}
