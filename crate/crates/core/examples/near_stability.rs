//! How many swaps a matching needs to become stable, counted per list and
//! in total, with the witness profiles.

use stabmatch::generators::gen_example2;
use stabmatch::near::{global_stabilization_cost, local_instability, witness_profile_local};
use stabmatch::Matching;

fn main() -> stabmatch::Result<()> {
    let n = 4;
    let p = gen_example2(n)?;
    let mut pairs: Vec<(String, String)> = (0..n).map(|i| (format!("a{i}"), format!("b{}", (i + 1) % n))).collect();
    pairs.extend((1..=n).map(|i| (format!("x{i}"), format!("y{i}"))));
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let m = Matching::from_names(&p, &refs)?;

    println!("local bound {}", local_instability(&p, &m)?);
    let g = global_stabilization_cost(&p, &m)?;
    let swaps: Vec<String> = g.swaps.iter().map(|s| p.display_swap(s)).collect();
    println!("global cost {} via {swaps:?}", g.cost);
    let (_, local) = witness_profile_local(&p, &m, 1)?;
    println!("local witness swaps: {}", local.len());
    Ok(())
}
