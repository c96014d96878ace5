//! Trading stability for cost: the best nearly stable matching at each
//! budget, globally and per list.

use stabmatch::generators::{gen_example2, gen_example3};
use stabmatch::near::{solve_global_near, solve_local_near, tradeoff_curve};
use stabmatch::{Mode, Objective};

fn main() -> stabmatch::Result<()> {
    let p = gen_example2(3)?;
    let egal = Objective::Egalitarian { eta: None };
    for mode in [Mode::Global, Mode::Local] {
        println!("{mode:?}: {:?}", tradeoff_curve(&p, mode, 2, egal)?);
    }
    if let Some(s) = solve_global_near(&p, 1, egal)? {
        let swaps: Vec<String> = s.swaps.iter().map(|x| p.display_swap(x)).collect();
        println!("global d=1: {} cost {} after {swaps:?}", s.matching.display(&p), s.cost);
    }

    let q = gen_example3();
    println!("perfect, global: {:?}", tradeoff_curve(&q, Mode::Global, 1, Objective::Perfect)?);
    if let Some(m) = solve_local_near(&q, 1, Objective::Perfect)? {
        println!("perfect within one swap per list: {}", m.display(&q));
    }
    Ok(())
}
