//! Case generators and small exhaustive helpers shared by the suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cantor::{all_words, grid, BasicSet, CantorPoint, Digit, Tail, Word};
use crate::group::{Cover, GroupElement};

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| if rng.gen() { Digit::Two } else { Digit::Zero })
        .collect()
}

/// A tail-zero point on the grid of the given depth.
pub fn random_grid_point<R: Rng>(rng: &mut R, max_len: usize) -> CantorPoint {
    CantorPoint::new(random_word(rng, max_len), Tail::Zeros)
}

pub fn random_point<R: Rng>(rng: &mut R, max_len: usize) -> CantorPoint {
    let tail = if rng.gen() { Tail::Twos } else { Tail::Zeros };
    CantorPoint::new(random_word(rng, max_len), tail)
}

pub fn random_basic_set<R: Rng>(rng: &mut R, max_len: usize) -> BasicSet {
    BasicSet::new(random_word(rng, max_len))
}

/// A random point of `u`: its prefix, a few more digits, and a random tail.
pub fn random_point_in<R: Rng>(rng: &mut R, u: &BasicSet, extra: usize) -> CantorPoint {
    let mut w: Word = u.prefix().iter().copied().collect();
    w.extend(random_word(rng, extra));
    let tail = if rng.gen() { Tail::Twos } else { Tail::Zeros };
    CantorPoint::new(w, tail)
}

/// `size` distinct grid points (fewer if the grid is smaller).
pub fn random_element<R: Rng>(rng: &mut R, size: usize, max_len: usize) -> GroupElement {
    let available = 1usize << max_len.min(20);
    let size = size.min(available);
    let mut points: Vec<CantorPoint> = Vec::with_capacity(size);
    while points.len() < size {
        let p = random_grid_point(rng, max_len);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    GroupElement::from_points(points)
}

/// Size drawn uniformly among the odd numbers in `[1, max_size]`.
pub fn random_odd_element<R: Rng>(rng: &mut R, max_size: usize, max_len: usize) -> GroupElement {
    let top = (1usize << max_len.min(20)).min(max_size.max(1));
    let choices = top.div_ceil(2);
    let size = 2 * rng.gen_range(0..choices) + 1;
    random_element(rng, size, max_len)
}

/// Splits random parts of the trivial cover until it has the drawn number
/// of parts (at most `max_parts`) or nothing shorter than `max_len` remains.
pub fn random_cover<R: Rng>(rng: &mut R, max_parts: usize, max_len: usize) -> Cover {
    let target = rng.gen_range(1..=max_parts.max(1));
    let mut parts = vec![BasicSet::whole()];
    while parts.len() < target {
        let splittable: Vec<usize> = (0..parts.len())
            .filter(|&i| parts[i].len() < max_len)
            .collect();
        let Some(&i) = splittable.choose(rng) else {
            break;
        };
        let u = parts.swap_remove(i);
        parts.push(u.child(Digit::Zero));
        parts.push(u.child(Digit::Two));
    }
    Cover::new(parts).expect("splitting preserves the partition")
}

/// Every cover whose parts have length at most `max_len`.
pub fn all_covers(max_len: usize) -> Vec<Cover> {
    fn go(max_len: usize) -> Vec<Vec<Word>> {
        let mut out = vec![vec![Word::new()]];
        if max_len == 0 {
            return out;
        }
        let below = go(max_len - 1);
        for left in &below {
            for right in &below {
                let mut parts = Vec::new();
                for (d, side) in [(Digit::Zero, left), (Digit::Two, right)] {
                    for w in side {
                        let mut p = Word::new();
                        p.push(d);
                        p.extend(w.iter().copied());
                        parts.push(p);
                    }
                }
                out.push(parts);
            }
        }
        out
    }
    go(max_len)
        .into_iter()
        .map(|ws| Cover::new(ws.into_iter().map(BasicSet::new)).expect("complete by construction"))
        .collect()
}

/// A random element of `H_Γ` on the grid of the given depth: the sum of up
/// to `max_pairs` random pairs, each inside one part.
pub fn random_subgroup_element<R: Rng>(
    rng: &mut R,
    gamma: &Cover,
    depth: usize,
    max_pairs: usize,
) -> GroupElement {
    let g = grid(depth);
    let mut by_part: Vec<Vec<CantorPoint>> = vec![Vec::new(); gamma.parts().len()];
    for p in g {
        let k = gamma.part_index(&p);
        by_part[k].push(p);
    }
    by_part.retain(|ps| ps.len() >= 2);
    let mut h = GroupElement::empty();
    if by_part.is_empty() {
        return h;
    }
    for _ in 0..rng.gen_range(0..=max_pairs) {
        let ps = by_part.choose(rng).expect("nonempty");
        let pair: Vec<CantorPoint> = ps.choose_multiple(rng, 2).cloned().collect();
        h = h.symmetric_difference(&GroupElement::from_points(pair));
    }
    h
}

/// All `k`-element subsets of `items`, lexicographic by index.
pub fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, from: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every pair `(F, U)` with `F` an odd subset of the grid of `grid_depth`
/// whose size is in `sizes`, and `U` a prefix of `r(F)` of length at most
/// `max_u_len`.
pub fn witness_cases(
    grid_depth: usize,
    sizes: &[usize],
    max_u_len: usize,
) -> Vec<(GroupElement, BasicSet)> {
    let g = grid(grid_depth);
    let mut out = Vec::new();
    for &k in sizes {
        for pts in combinations(&g, k) {
            let f = GroupElement::from_points(pts);
            let Ok(x) = crate::retraction::retract(&f) else {
                continue;
            };
            for len in 0..=max_u_len {
                out.push((f.clone(), x.prefix(len)));
            }
        }
    }
    out
}

/// Every word of length `max_len` followed by either tail, canonicalized.
pub fn all_points(max_len: usize) -> Vec<CantorPoint> {
    let mut out: Vec<CantorPoint> = all_words(max_len)
        .filter(|w| w.len() == max_len)
        .flat_map(|w| {
            [
                CantorPoint::new(w.clone(), Tail::Zeros),
                CantorPoint::new(w, Tail::Twos),
            ]
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Exact real value of a point as `(numerator, exponent)` with value
/// `numerator / 3^exponent`; only for words short enough to fit in `u128`.
pub fn exact_value(p: &CantorPoint) -> (u128, u32) {
    let n = p.word().len() as u32;
    let w = p.word().iter().fold(0u128, |acc, d| {
        acc * 3
            + match d {
                Digit::Zero => 0,
                Digit::Two => 2,
            }
    });
    // 0.w222… = (w + 1) / 3^n
    let t = match p.tail() {
        Tail::Zeros => 0,
        Tail::Twos => 1,
    };
    (w + t, n)
}

/// Order of the exact rational values of two points.
pub fn real_order(a: &CantorPoint, b: &CantorPoint) -> std::cmp::Ordering {
    let (na, ea) = exact_value(a);
    let (nb, eb) = exact_value(b);
    let e = ea.max(eb);
    (na * 3u128.pow(e - ea)).cmp(&(nb * 3u128.pow(e - eb)))
}
