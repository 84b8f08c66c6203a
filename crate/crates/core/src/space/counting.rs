//! Packing and covering numbers of finite point sets.
//!
//! `Pack(B, r)` is the largest subset with pairwise distances `> r`;
//! `Cov(B, r)` is the least number of closed `r`-balls centered in `B` that cover `B`.
//! Both are exact up to [`EXACT_LIMIT`] points and greedy (flagged) above.

use serde::Serialize;

pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub value: usize,
    pub exact: bool,
}

/// `close[i]` has bit `j` set iff `d(i, j) ≤ r` (including `i` itself).
fn closeness<D, T>(n: usize, dist: &D, r: &T) -> Vec<u64>
where
    D: Fn(usize, usize) -> T,
    T: PartialOrd,
{
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| i == j || dist(i, j) <= *r)
                .fold(0u64, |m, j| m | (1 << j))
        })
        .collect()
}

pub fn packing_number<D, T>(n: usize, dist: D, r: T) -> CountResult
where
    D: Fn(usize, usize) -> T,
    T: PartialOrd,
{
    if n == 0 {
        return CountResult { value: 0, exact: true };
    }
    if n > EXACT_LIMIT {
        return CountResult {
            value: greedy_separated(n, &dist, &r).len(),
            exact: false,
        };
    }
    let close = closeness(n, &dist, &r);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    CountResult {
        value: max_independent(all, &close),
        exact: true,
    }
}

fn max_independent(candidates: u64, close: &[u64]) -> usize {
    if candidates == 0 {
        return 0;
    }
    let v = candidates.trailing_zeros() as usize;
    let rest = candidates & !(1 << v);
    let with = 1 + max_independent(rest & !close[v], close);
    if with > rest.count_ones() as usize {
        return with;
    }
    with.max(max_independent(rest, close))
}

pub fn covering_number<D, T>(n: usize, dist: D, r: T) -> CountResult
where
    D: Fn(usize, usize) -> T,
    T: PartialOrd,
{
    if n == 0 {
        return CountResult { value: 0, exact: true };
    }
    let close = closeness(n, &dist, &r);
    if n > EXACT_LIMIT {
        return CountResult {
            value: greedy_cover(n, &dist, &r).len(),
            exact: false,
        };
    }
    let all = (1u64 << n) - 1;
    let mut best = n;
    min_cover(all, &close, 0, &mut best);
    CountResult { value: best, exact: true }
}

fn min_cover(uncovered: u64, close: &[u64], used: usize, best: &mut usize) {
    if uncovered == 0 {
        *best = (*best).min(used);
        return;
    }
    if used + 1 >= *best {
        return;
    }
    // Some ball must cover the lowest uncovered point; branch on which one.
    let v = uncovered.trailing_zeros() as usize;
    let mut options: Vec<usize> = (0..close.len()).filter(|&c| close[c] >> v & 1 == 1).collect();
    options.sort_by_key(|&c| std::cmp::Reverse((close[c] & uncovered).count_ones()));
    for c in options {
        min_cover(uncovered & !close[c], close, used + 1, best);
    }
}

/// Maximal `r`-separated subset chosen greedily in index order.
pub fn greedy_separated<D, T>(n: usize, dist: &D, r: &T) -> Vec<usize>
where
    D: Fn(usize, usize) -> T,
    T: PartialOrd,
{
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..n {
        if chosen.iter().all(|&j| dist(i, j) > *r) {
            chosen.push(i);
        }
    }
    chosen
}

/// Greedy cover by closed `r`-balls: centers form a maximal `r`-separated set,
/// so every point lies within `r` of some center.
pub fn greedy_cover<D, T>(n: usize, dist: &D, r: &T) -> Vec<usize>
where
    D: Fn(usize, usize) -> T,
    T: PartialOrd,
{
    greedy_separated(n, dist, r)
}
