//! Cheapest d-robust matching for growing `d`, solved as a minimum-weight
//! closure over the rotation digraph.

use stabmatch::generators::gen_random;
use stabmatch::matching::egalitarian_cost;
use stabmatch::robust::find_d_robust_optimal;
use stabmatch::Objective;

fn main() -> stabmatch::Result<()> {
    // complete 4x4 instance where robustness costs one rank
    let p = gen_random(4, 4, 1.0, 2673)?;
    for d in 0..=2 {
        match find_d_robust_optimal(&p, d, Objective::Egalitarian { eta: None })? {
            Some(m) => println!("d={d}: {} cost {}", m.display(&p), egalitarian_cost(&p, &m)?),
            None => println!("d={d}: no robust matching"),
        }
    }
    Ok(())
}
