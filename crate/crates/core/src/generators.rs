//! Named fixtures and seeded random instances.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::profile::{validate_profile, Profile, RawProfile};
use crate::robust::is_d_robust;
use crate::rotation::{rotation_digraph, Rotation};

/// The cycle-of-pairs family: `a_i: b_i b_{i+1}`, `b_i: a_{i-1} x_1..x_n a_i`,
/// `x_i: y_i b_1..b_{n-1}`, `y_i: x_i`, with `b_0: a_0 a_{n-1}`.
///
/// Its unique stable matching pairs `a_i` with `b_i`; one swap in `b_0`'s
/// list makes the rotated matching `{a_i, b_{i+1}}` stable.
pub fn gen_example2(n: usize) -> Result<Profile> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("family needs n >= 2, got {n}")));
    }
    // U: a_0..a_{n-1} then x_1..x_n; W: b_0..b_{n-1} then y_1..y_n
    let a = |i: usize| i % n;
    let x = |i: usize| n + i - 1;
    let b = |i: usize| i % n;
    let y = |i: usize| n + i - 1;

    let mut u_lists = vec![Vec::new(); 2 * n];
    let mut w_lists = vec![Vec::new(); 2 * n];
    for i in 0..n {
        u_lists[a(i)] = vec![b(i), b(i + 1)];
    }
    for i in 1..=n {
        u_lists[x(i)] = std::iter::once(y(i)).chain((1..n).map(b)).collect();
        w_lists[y(i)] = vec![x(i)];
    }
    w_lists[b(0)] = vec![a(0), a(n - 1)];
    for i in 1..n {
        let mut l = vec![a(i - 1)];
        l.extend((1..=n).map(x));
        l.push(a(i));
        w_lists[b(i)] = l;
    }
    let u_names = (0..n).map(|i| format!("a{i}")).chain((1..=n).map(|i| format!("x{i}"))).collect();
    let w_names = (0..n).map(|i| format!("b{i}")).chain((1..=n).map(|i| format!("y{i}"))).collect();
    validate_profile(&RawProfile { u_names, w_names, u_lists, w_lists })
}

/// `a1: b1; a2: b1 b2; b1: a2 a1; b2: a2`.
pub fn gen_example3() -> Profile {
    Profile::from_named(&["a1", "a2"], &["b1", "b2"], &[&["b1"], &["b1", "b2"]], &[&["a2", "a1"], &["a2"]])
        .expect("fixture is valid")
}

/// `u_i` ranks `w_{i+k}` at position `k`; `w_j` ranks `u_{j+k}` at position `k`.
pub fn gen_cyclic_latin(n: usize) -> Result<Profile> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let lists: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|k| (i + k) % n).collect()).collect();
    Profile::from_lists(lists.clone(), lists)
}

/// Each cross pair is mutually acceptable with probability `density`; lists
/// are uniform orders of the acceptable sets.
#[allow(clippy::needless_range_loop)]
pub fn gen_random(n_u: usize, n_w: usize, density: f64, seed: u64) -> Result<Profile> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidInput(format!("density {density} is outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u_lists = vec![Vec::new(); n_u];
    let mut w_lists = vec![Vec::new(); n_w];
    for u in 0..n_u {
        for w in 0..n_w {
            if density >= 1.0 || rng.gen_bool(density) {
                u_lists[u].push(w);
                w_lists[w].push(u);
            }
        }
    }
    for l in u_lists.iter_mut().chain(w_lists.iter_mut()) {
        l.shuffle(&mut rng);
    }
    Profile::from_lists(u_lists, w_lists)
}

/// A random Latin square profile with many stable matchings.
///
/// `u_i` lists the `W` agents in row `i` of a random Latin square, and each
/// `w` ranks the `U` agents by how late `w` appears in their lists, so every
/// column of the square is a stable matching. Then `noise` random adjacent
/// swaps are applied and each pair is kept with probability `density`.
#[allow(clippy::needless_range_loop)]
pub fn gen_random_latin(n: usize, noise: usize, density: f64, seed: u64) -> Result<Profile> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidInput(format!("density {density} is outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perm = |rng: &mut ChaCha8Rng| {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        v
    };
    let (rows, cols, syms) = (perm(&mut rng), perm(&mut rng), perm(&mut rng));
    let mut u_lists: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).map(|k| syms[(rows[i] + cols[k]) % n]).collect()).collect();
    let mut w_lists: Vec<Vec<usize>> = (0..n)
        .map(|w| {
            let mut us: Vec<usize> = (0..n).collect();
            us.sort_by_key(|&u| std::cmp::Reverse(u_lists[u].iter().position(|&x| x == w)));
            us
        })
        .collect();
    for _ in 0..noise {
        let l = if rng.gen_bool(0.5) { &mut u_lists[rng.gen_range(0..n)] } else { &mut w_lists[rng.gen_range(0..n)] };
        if l.len() > 1 {
            let i = rng.gen_range(0..l.len() - 1);
            l.swap(i, i + 1);
        }
    }
    for u in 0..n {
        for w in 0..n {
            if density < 1.0 && !rng.gen_bool(density) {
                u_lists[u].retain(|&x| x != w);
                w_lists[w].retain(|&x| x != u);
            }
        }
    }
    Profile::from_lists(u_lists, w_lists)
}

/// A complete 4x4 profile with five stable matchings, three rotations
/// `((u1,w2),(u2,w3),(u3,w4),(u4,w1))`, `((u1,w3),(u3,w1))`,
/// `((u2,w4),(u4,w2))` and the `W`-optimal matching as its only 1-robust
/// stable matching. `None` if no such profile exists.
///
/// The profile is found by search: `u3: w4 w1 w3 w2` and
/// `w2: u2 u3 u4 u1` are fixed, the order of every other agent's stable
/// partners is forced by the five matchings, and the remaining entry is
/// placed at each position in turn.
pub fn gen_example1_fixture() -> Option<Profile> {
    static CACHE: OnceLock<Option<Profile>> = OnceLock::new();
    CACHE.get_or_init(search_example1).clone()
}

fn search_example1() -> Option<Profile> {
    // partner orders (0-based) and the one agent left to place
    let u_base: [(&[usize], usize); 4] = [
        (&[1, 2, 0], 3), // u1: w2 w3 w1, place w4
        (&[2, 3, 1], 0), // u2: w3 w4 w2, place w1
        (&[3, 0, 2, 1], usize::MAX),
        (&[0, 1, 3], 2), // u4: w1 w2 w4, place w3
    ];
    let w_base: [(&[usize], usize); 4] = [
        (&[0, 2, 3], 1), // w1: u1 u3 u4, place u2
        (&[1, 2, 3, 0], usize::MAX),
        (&[2, 0, 1], 3), // w3: u3 u1 u2, place u4
        (&[3, 1, 2], 0), // w4: u4 u2 u3, place u1
    ];
    let options = |(base, extra): (&[usize], usize)| -> Vec<Vec<usize>> {
        if extra == usize::MAX {
            return vec![base.to_vec()];
        }
        (0..=base.len())
            .map(|pos| {
                let mut l = base.to_vec();
                l.insert(pos, extra);
                l
            })
            .collect()
    };
    let u_opts: Vec<Vec<Vec<usize>>> = u_base.iter().map(|&b| options(b)).collect();
    let w_opts: Vec<Vec<Vec<usize>>> = w_base.iter().map(|&b| options(b)).collect();

    let expected_rotations = [vec![(0, 1), (1, 2), (2, 3), (3, 0)], vec![(0, 2), (2, 0)], vec![(1, 3), (3, 1)]]
        .map(|c| Rotation::new(c).expect("valid cycle"));

    let pick = |opts: &[Vec<Vec<usize>>], mut code: usize| -> Vec<Vec<usize>> {
        opts.iter()
            .map(|o| {
                let l = o[code % o.len()].clone();
                code /= o.len();
                l
            })
            .collect()
    };
    let u_total: usize = u_opts.iter().map(Vec::len).product();
    let w_total: usize = w_opts.iter().map(Vec::len).product();
    for code in 0..u_total * w_total {
        let u_lists = pick(&u_opts, code % u_total);
        let w_lists = pick(&w_opts, code / u_total);
        let p = Profile::from_lists(u_lists, w_lists).ok()?;
        let d = rotation_digraph(&p);
        if d.rotations() != expected_rotations || d.arcs() != [(0, 1), (0, 2)] {
            continue;
        }
        let matchings: Vec<Matching> = d.closed_subsets().into_iter().map(|(_, m)| m).collect();
        if matchings.len() != 5 {
            continue;
        }
        let robust: Vec<&Matching> =
            matchings.iter().filter(|m| is_d_robust(&p, m, 1).map(|r| r.robust).unwrap_or(false)).collect();
        if robust == [d.w_optimal()] {
            return Some(p);
        }
    }
    None
}
