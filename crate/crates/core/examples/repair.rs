//! Fix a stable matching after one swap, moving at most two agents in or
//! out of the matching.

use stabmatch::classic::u_optimal;
use stabmatch::generators::gen_random;
use stabmatch::matching::is_stable;
use stabmatch::near::repair_after_swap;

fn main() -> stabmatch::Result<()> {
    let p = gen_random(6, 6, 0.5, 21)?;
    let m1 = u_optimal(&p);
    println!("before: {}", m1.display(&p));
    for s in p.adjacent_swaps().into_iter().take(8) {
        let p2 = p.apply_swap(&s)?;
        let m2 = repair_after_swap(&p, &m1, &s)?;
        let moved = m1.unmatched().symmetric_difference(&m2.unmatched()).count();
        println!(
            "{}: {} (stable {}, {moved} agents changed status)",
            p.display_swap(&s),
            m2.display(&p2),
            is_stable(&p2, &m2)?
        );
    }
    Ok(())
}
