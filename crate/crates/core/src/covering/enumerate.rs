//! Row counting by walking every reduced fraction in the row's level range.

use super::grid::WindowGrid;
use crate::numtheory::SpfSieve;
use crate::par;

/// Above this many visited points a single row is split across workers.
const SPLIT_ROW_POINTS: f64 = (1u64 << 20) as f64;

#[derive(Debug, Clone)]
pub(crate) struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(bits: u64) -> Self {
        Self {
            words: vec![0; bits.div_ceil(64) as usize],
        }
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn union_with(mut self, other: Self) -> Self {
        for (a, b) in self.words.iter_mut().zip(other.words) {
            *a |= b;
        }
        self
    }
}

/// Calls `f(col)` for every reduced `m/q` in the window's x-range. Repeats of
/// the same column from consecutive numerators are collapsed.
#[inline]
pub(crate) fn visit_level(grid: &WindowGrid, sieve: &SpfSieve, q: u64, mut f: impl FnMut(u64)) {
    let Some((lo, hi)) = grid.m_range(q) else {
        return;
    };
    let mut primes = [0u64; 16];
    let k = sieve.distinct_primes_into(q, &mut primes);
    let primes = &primes[..k];
    let mut res = [0u64; 16];
    for (r, &p) in res.iter_mut().zip(primes) {
        *r = lo % p;
    }
    let res = &mut res[..k];
    let mut walker = grid.column_walker(q, lo);
    let mut last = u64::MAX;
    for _ in lo..=hi {
        if res.iter().all(|&r| r != 0) {
            let c = walker.current();
            if c != last {
                f(c);
                last = c;
            }
        }
        walker.advance();
        for (r, &p) in res.iter_mut().zip(primes) {
            *r += 1;
            if *r == p {
                *r = 0;
            }
        }
    }
}

/// Distinct occupied columns over levels `qa..=qb`.
pub(crate) fn count_row(grid: &WindowGrid, sieve: &SpfSieve, qa: u64, qb: u64) -> u64 {
    let ncols = grid.ncols();
    let est = grid.enumeration_cost(qa, qb);
    if est * 64.0 < ncols as f64 {
        let mut cols = Vec::with_capacity(est as usize + 1);
        for q in qa..=qb {
            visit_level(grid, sieve, q, |c| cols.push(c));
        }
        cols.sort_unstable();
        cols.dedup();
        return cols.len() as u64;
    }
    if est > SPLIT_ROW_POINTS && qb > qa {
        return par::fold_reduce(
            qa..qb + 1,
            || Bitset::new(ncols),
            |mut bits, q| {
                visit_level(grid, sieve, q, |c| bits.set(c));
                bits
            },
            Bitset::union_with,
        )
        .count();
    }
    let mut bits = Bitset::new(ncols);
    for q in qa..=qb {
        visit_level(grid, sieve, q, |c| bits.set(c));
    }
    bits.count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::ReducedFraction;
    use crate::numtheory::gcd_u64;

    #[test]
    fn bitset_counts_and_merges() {
        let mut a = Bitset::new(130);
        a.set(0);
        a.set(129);
        let mut b = Bitset::new(130);
        b.set(129);
        b.set(64);
        assert_eq!(a.union_with(b).count(), 3);
    }

    #[test]
    fn visit_level_sees_reduced_numerators_only() {
        let grid = WindowGrid::new(
            ReducedFraction::ZERO,
            ReducedFraction::ZERO,
            ReducedFraction::ONE,
            ReducedFraction::new(1, 1000).unwrap(),
        )
        .unwrap();
        let sieve = SpfSieve::new(1000).unwrap();
        for q in [2u64, 12, 30, 97, 210, 999] {
            let mut got = Vec::new();
            visit_level(&grid, &sieve, q, |c| got.push(c));
            let want: Vec<u64> = (1..q).filter(|&m| gcd_u64(m, q) == 1).map(|m| m * 1000 / q).collect();
            let mut want = want;
            want.dedup();
            assert_eq!(got, want, "q={q}");
        }
    }
}
