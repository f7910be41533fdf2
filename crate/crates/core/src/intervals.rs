//! Exact unions of closed subintervals of `[0, 1]` with rational endpoints.
//!
//! Houses the Diophantine neighbourhoods `E_n` (all reduced fractions with
//! denominator `n`, thickened by a half-width) and the collapsed-line covers
//! `F_l`, together with Lebesgue measure, intersection and the
//! Chung-Erdos lower bound for the measure of a union.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;
use crate::numtheory::{check_open_unit, coprime_residues, gcd_u64};
use crate::par;

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(PopcornError::MalformedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    /// `[center - half_width, center + half_width]`.
    pub fn around(center: BigRational, half_width: &BigRational) -> Self {
        Self {
            lo: &center - half_width,
            hi: center + half_width,
        }
    }

    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Sorted, pairwise strictly disjoint closed intervals inside `[0, 1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Exact Lebesgue measure.
    pub fn measure(&self) -> BigRational {
        self.parts
            .iter()
            .fold(BigRational::zero(), |acc, p| acc + (&p.hi - &p.lo))
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        intersect(self, other)
    }

    /// Set union of two normalized unions.
    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut all = Vec::with_capacity(self.len() + other.len());
        all.extend(self.parts.iter().cloned());
        all.extend(other.parts.iter().cloned());
        merge_sorted_or_not(all)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let idx = self.parts.partition_point(|p| &p.hi < x);
        self.parts.get(idx).is_some_and(|p| &p.lo <= x)
    }
}

/// Merges overlapping or touching intervals and clips to `[0, 1]`.
pub fn normalize(intervals: Vec<Interval>) -> Result<IntervalUnion> {
    if let Some(bad) = intervals.iter().find(|iv| iv.lo > iv.hi) {
        return Err(PopcornError::MalformedInterval {
            lo: bad.lo.to_string(),
            hi: bad.hi.to_string(),
        });
    }
    Ok(merge_sorted_or_not(intervals))
}

fn merge_sorted_or_not(mut intervals: Vec<Interval>) -> IntervalUnion {
    let zero = BigRational::zero();
    let one = BigRational::one();
    intervals.retain(|iv| iv.hi >= zero && iv.lo <= one);
    for iv in intervals.iter_mut() {
        if iv.lo < zero {
            iv.lo = zero.clone();
        }
        if iv.hi > one {
            iv.hi = one.clone();
        }
    }
    if !intervals.windows(2).all(|w| w[0].lo <= w[1].lo) {
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
    }
    let mut parts: Vec<Interval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match parts.last_mut() {
            // closed intervals: a shared endpoint merges
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => parts.push(iv),
        }
    }
    IntervalUnion { parts }
}

/// `sum (hi - lo)`.
pub fn measure(u: &IntervalUnion) -> BigRational {
    u.measure()
}

/// Set intersection by a two-pointer sweep.
pub fn intersect(a: &IntervalUnion, b: &IntervalUnion) -> IntervalUnion {
    let mut parts = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.parts.len() && j < b.parts.len() {
        let (x, y) = (&a.parts[i], &b.parts[j]);
        let lo = if x.lo >= y.lo { &x.lo } else { &y.lo };
        let hi = if x.hi <= y.hi { &x.hi } else { &y.hi };
        if lo <= hi {
            parts.push(Interval {
                lo: lo.clone(),
                hi: hi.clone(),
            });
        }
        if x.hi <= y.hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    IntervalUnion { parts }
}

/// `measure(intersect(a, b))` without materializing the pieces.
pub fn intersection_measure(a: &IntervalUnion, b: &IntervalUnion) -> BigRational {
    let mut total = BigRational::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.parts.len() && j < b.parts.len() {
        let (x, y) = (&a.parts[i], &b.parts[j]);
        let lo = if x.lo >= y.lo { &x.lo } else { &y.lo };
        let hi = if x.hi <= y.hi { &x.hi } else { &y.hi };
        if lo < hi {
            total += hi - lo;
        }
        if x.hi <= y.hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    total
}

/// `E_n`: the union of `[m/n - w, m/n + w]` over `1 <= m <= n - 1` with
/// `gcd(m, n) = 1`, clipped to `[0, 1]`. With `w = delta` this is the
/// neighbourhood set for `psi(n) = n * delta`.
pub fn build_e_n(n: u64, half_width: ReducedFraction) -> Result<IntervalUnion> {
    if n < 2 {
        return Err(PopcornError::Range {
            what: "E_n level",
            detail: format!("n = {n} < 2"),
        });
    }
    check_open_unit(half_width, "half-width")?;
    let w = half_width.to_big();
    let intervals = (1..n)
        .filter(|&m| gcd_u64(m, n) == 1)
        .map(|m| Interval::around(ReducedFraction::new(m, n).expect("n >= 2").to_big(), &w))
        .collect();
    Ok(merge_sorted_or_not(intervals))
}

/// `F_l`: the union of `[l/(ln+i) - delta, l/(ln+i) + delta]` over the
/// residues `1 <= i <= l - 1` coprime to `l`.
pub fn build_f_l(l: u64, n: u64, delta: ReducedFraction) -> Result<IntervalUnion> {
    if l < 2 {
        return Err(PopcornError::Range {
            what: "collapsed line slope",
            detail: format!("l = {l} < 2"),
        });
    }
    if n == 0 {
        return Err(PopcornError::Range {
            what: "collapsed line index",
            detail: "n must be at least 1".into(),
        });
    }
    check_open_unit(delta, "delta")?;
    let w = delta.to_big();
    // i ascending gives centres descending; reverse to keep the merge linear.
    let mut intervals: Vec<Interval> = coprime_residues(l)?
        .into_iter()
        .map(|i| {
            let q = l * n + i;
            Interval::around(ReducedFraction::new(l, q).expect("q > 0").to_big(), &w)
        })
        .collect();
    intervals.reverse();
    Ok(merge_sorted_or_not(intervals))
}

/// `(sum_i mu(A_i))^2 / sum_i sum_j mu(A_i ∩ A_j)`, diagonal included.
pub fn chung_erdos_bound(events: &[IntervalUnion]) -> Result<BigRational> {
    if events.is_empty() {
        return Err(PopcornError::NoEvents);
    }
    let measures: Vec<BigRational> = par::map_slice(events, |e| e.measure());
    if let Some(index) = measures.iter().position(|m| m.is_zero()) {
        return Err(PopcornError::NonPositiveEvent { index });
    }
    let total = measures.iter().fold(BigRational::zero(), |acc, m| acc + m);
    let m = events.len() as u64;
    // Row i holds sum_{j > i} mu(A_i ∩ A_j); rows are summed in order.
    let rows: Vec<BigRational> = par::map_collect(0..m, |i| {
        let i = i as usize;
        events[i + 1..]
            .iter()
            .fold(BigRational::zero(), |acc, b| acc + intersection_measure(&events[i], b))
    });
    let off_diag = rows.into_iter().fold(BigRational::zero(), |acc, r| acc + r);
    let two = BigRational::from_integer(2.into());
    let denom = &total + two * off_diag;
    Ok(&total * &total / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::big;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(big(a.0, a.1), big(b.0, b.1)).unwrap()
    }

    fn frac(n: u64, d: u64) -> ReducedFraction {
        ReducedFraction::new(n, d).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let u = normalize(vec![iv((0, 1), (1, 2)), iv((1, 4), (3, 4))]).unwrap();
        assert_eq!(u.parts(), &[iv((0, 1), (3, 4))]);
        assert!(normalize(vec![]).unwrap().is_empty());
        let p = normalize(vec![iv((1, 3), (1, 3))]).unwrap();
        assert_eq!(p.parts(), &[iv((1, 3), (1, 3))]);
        assert_eq!(p.measure(), BigRational::zero());
    }

    #[test]
    fn normalize_rejects_reversed_and_merges_touching() {
        let bad = Interval {
            lo: big(1, 2),
            hi: big(1, 3),
        };
        assert!(matches!(
            normalize(vec![bad]),
            Err(PopcornError::MalformedInterval { .. })
        ));
        let u = normalize(vec![iv((1, 2), (3, 4)), iv((0, 1), (1, 2))]).unwrap();
        assert_eq!(u.parts(), &[iv((0, 1), (3, 4))]);
        // clipping
        let c = normalize(vec![iv((-1, 2), (1, 4)), iv((7, 8), (3, 2))]).unwrap();
        assert_eq!(c.parts(), &[iv((0, 1), (1, 4)), iv((7, 8), (1, 1))]);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(normalize(vec![iv((0, 1), (3, 4))]).unwrap().measure(), big(3, 4));
        assert_eq!(IntervalUnion::empty().measure(), BigRational::zero());
        let u = normalize(vec![iv((0, 1), (1, 2)), iv((1, 4), (3, 4))]).unwrap();
        assert_eq!(measure(&u), big(3, 4));
    }

    #[test]
    fn intersect_examples() {
        let a = normalize(vec![iv((0, 1), (1, 2))]).unwrap();
        let b = normalize(vec![iv((1, 4), (3, 4))]).unwrap();
        assert_eq!(intersect(&a, &b).parts(), &[iv((1, 4), (1, 2))]);
        assert!(intersect(&a, &IntervalUnion::empty()).is_empty());
        let two = normalize(vec![iv((0, 1), (1, 3)), iv((2, 3), (1, 1))]).unwrap();
        assert_eq!(intersect(&two, &b).parts(), &[iv((1, 4), (1, 3)), iv((2, 3), (3, 4))]);
        assert_eq!(intersection_measure(&two, &b), big(1, 6));
    }

    #[test]
    fn touching_intersection_is_a_point() {
        let a = normalize(vec![iv((0, 1), (1, 2))]).unwrap();
        let b = normalize(vec![iv((1, 2), (1, 1))]).unwrap();
        let c = intersect(&a, &b);
        assert_eq!(c.parts(), &[iv((1, 2), (1, 2))]);
        assert!(c.contains(&big(1, 2)));
        assert!(!c.contains(&big(1, 3)));
    }

    #[test]
    fn e_n_examples() {
        let e5 = build_e_n(5, frac(1, 1000)).unwrap();
        assert_eq!(e5.len(), 4);
        assert_eq!(e5.measure(), big(1, 125));
        let e2 = build_e_n(2, frac(1, 4)).unwrap();
        assert_eq!(e2.parts(), &[iv((1, 4), (3, 4))]);
        assert_eq!(e2.measure(), big(1, 2));
        let e6 = build_e_n(6, frac(1, 2)).unwrap();
        assert_eq!(e6.parts(), &[iv((0, 1), (1, 1))]);
        assert!(build_e_n(1, frac(1, 4)).is_err());
    }

    #[test]
    fn f_l_examples() {
        let f = build_f_l(2, 1, frac(1, 100)).unwrap();
        assert_eq!(f.parts(), &[Interval::around(big(2, 3), &big(1, 100))]);
        assert_eq!(f.measure(), big(1, 50));
        let g = build_f_l(3, 2, frac(1, 1000)).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&big(3, 7)) && g.contains(&big(3, 8)));
        // centres 5/51..5/54 lie within 2*delta of each other
        let h = build_f_l(5, 10, frac(1, 10)).unwrap();
        assert_eq!(h.len(), 1);
        assert!(build_f_l(1, 3, frac(1, 10)).is_err());
    }

    #[test]
    fn chung_erdos_examples() {
        let a = normalize(vec![iv((0, 1), (1, 10))]).unwrap();
        let b = normalize(vec![iv((2, 10), (3, 10))]).unwrap();
        let c = normalize(vec![iv((5, 10), (6, 10))]).unwrap();
        assert_eq!(chung_erdos_bound(&[a, b, c]).unwrap(), big(3, 10));
        let h = normalize(vec![iv((0, 1), (1, 2))]).unwrap();
        assert_eq!(chung_erdos_bound(&[h.clone(), h]).unwrap(), big(1, 2));
        let e2 = build_e_n(2, frac(1, 1000)).unwrap();
        let e3 = build_e_n(3, frac(1, 1000)).unwrap();
        let bound = chung_erdos_bound(&[e2.clone(), e3.clone()]).unwrap();
        assert!(bound <= e2.union(&e3).measure());
        assert_eq!(chung_erdos_bound(&[]), Err(PopcornError::NoEvents));
        let point = normalize(vec![iv((1, 3), (1, 3))]).unwrap();
        assert_eq!(
            chung_erdos_bound(&[e2, point]),
            Err(PopcornError::NonPositiveEvent { index: 1 })
        );
    }
}
