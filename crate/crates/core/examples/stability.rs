//! Parse a profile, run deferred acceptance from both sides and inspect
//! blocking pairs of a hand-written matching.

use stabmatch::classic::{matched_partition, u_optimal, w_optimal};
use stabmatch::io::{parse_matching, parse_profile};
use stabmatch::matching::{blocking_pairs, egalitarian_cost};
use stabmatch::AgentId;

const PROFILE: &str = "\
profile v1
side U: ann bob cy
side W: xia yan zoe
# ann and bob both want xia first
ann: xia yan zoe
bob: xia zoe
cy: yan xia
xia: cy bob ann
yan: ann cy
zoe: bob ann
";

fn main() -> stabmatch::Result<()> {
    let p = parse_profile(PROFILE)?;
    let m0 = u_optimal(&p);
    let mz = w_optimal(&p);
    println!("U-optimal {} cost {}", m0.display(&p), egalitarian_cost(&p, &m0)?);
    println!("W-optimal {} cost {}", mz.display(&p), egalitarian_cost(&p, &mz)?);

    let part = matched_partition(&p);
    let names: Vec<&str> = part.unmatched.iter().map(|&x| p.name(x)).collect();
    println!("unmatched in every stable matching: {names:?}");

    let m = parse_matching("ann xia\nbob zoe\ncy yan\n", &p)?;
    for bp in blocking_pairs(&p, &m)? {
        println!("{} blocks with {}", p.name(AgentId::u(bp.u)), p.name(AgentId::w(bp.w)));
    }
    Ok(())
}
