//! The four-by-four instance with five stable matchings and a single
//! 1-robust one, found by a small constraint search.

use stabmatch::generators::gen_example1_fixture;
use stabmatch::io::serialize_profile;
use stabmatch::robust::RobustnessAnalysis;

fn main() -> stabmatch::Result<()> {
    let Some(p) = gen_example1_fixture() else {
        println!("no profile satisfies the constraints");
        return Ok(());
    };
    print!("{}", serialize_profile(&p));
    let a = RobustnessAnalysis::new(&p)?;
    for (i, r) in a.digraph().rotations().iter().enumerate() {
        println!("r{i} = {}", r.display(&p));
    }
    for (_, m) in a.digraph().closed_subsets() {
        println!("{} 1-robust: {}", m.display(&p), a.check(&m, 1)?.robust);
    }
    if let Some(req) = a.requirements(1) {
        println!("forced {:?}, forbidden {:?}", req.forced, req.forbidden);
    }
    println!("chosen rotations {:?}", a.robust_closed_set(1));
    Ok(())
}
