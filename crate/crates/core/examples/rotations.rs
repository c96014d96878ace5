//! Rotations of a profile, the lattice of stable matchings they generate,
//! and the DOT export of their precedence digraph.

use stabmatch::generators::gen_random_latin;
use stabmatch::matching::egalitarian_cost;
use stabmatch::rotation::{egalitarian_optimal, rotation_digraph};

fn main() -> stabmatch::Result<()> {
    let p = gen_random_latin(4, 2, 1.0, 14)?;
    let d = rotation_digraph(&p);
    for (i, r) in d.rotations().iter().enumerate() {
        println!("r{i} = {}", r.display(&p));
    }
    println!("precedence arcs: {:?}", d.arcs());

    for (set, m) in d.closed_subsets() {
        println!("{set:?} -> {} (cost {})", m.display(&p), egalitarian_cost(&p, &m)?);
    }
    let (best, cost) = egalitarian_optimal(&p);
    println!("egalitarian optimum {} with cost {cost}", best.display(&p));
    print!("{}", d.to_dot(&p));
    Ok(())
}
