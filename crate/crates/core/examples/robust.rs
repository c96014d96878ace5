//! Which stable matchings survive any `d` swaps, with a replayable witness
//! when one does not.

use stabmatch::generators::gen_example2;
use stabmatch::robust::{find_d_robust, is_d_robust, max_robustness, RobustnessAnalysis};

fn main() -> stabmatch::Result<()> {
    let p = gen_example2(3)?;
    let m = stabmatch::classic::u_optimal(&p);
    println!("unique stable matching {}", m.display(&p));

    let a = RobustnessAnalysis::new(&p)?;
    for q in a.quadruples(Some(1)) {
        println!("quadruple {} needs {} swap(s)", q.display(&p), a.swap_set_size(&q));
    }

    let report = is_d_robust(&p, &m, 1)?;
    println!("1-robust: {}", report.robust);
    if let Some(w) = report.witness {
        let swaps: Vec<String> = w.swaps.iter().map(|s| p.display_swap(s)).collect();
        println!("after {swaps:?} the matching is blocked");
    }
    println!("0-robust matching: {:?}", find_d_robust(&p, 0)?.map(|m| m.display(&p)));
    println!("max robustness: {:?}", max_robustness(&p, None)?.map(|(d, _)| d));
    Ok(())
}
