//! Exact checks of the overlap estimates, the strip-counting lemma and the
//! strip lower-bound chain.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::covering::grid_count_strip;
use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;
use crate::intervals::{build_e_n, build_f_l, chung_erdos_bound, intersection_measure, IntervalUnion};
use crate::numtheory::{check_open_unit, strip_index_l};
use crate::par;
use crate::popcorn::strip_spec;

/// Largest pairwise overlap ratio found by a scan; `ratio <= 1` means the
/// estimate held everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    #[serde(with = "big_string")]
    pub worst: BigRational,
    /// Pair attaining the maximum (smallest such pair when tied); `None`
    /// when every overlap is empty.
    pub argmax: Option<(u64, u64)>,
    pub pairs: u64,
}

impl OverlapReport {
    pub fn holds(&self) -> bool {
        self.worst <= BigRational::from_integer(1.into())
    }
}

mod big_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn big_u(x: u64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Max of `overlap(i, j) / scale(i, j)` over `lo <= i < j <= hi`.
fn scan_pairs<S>(lo: u64, hi: u64, events: &[IntervalUnion], scale: S) -> OverlapReport
where
    S: Fn(u64, u64) -> BigRational + Sync + Send,
{
    let rows: Vec<(BigRational, Option<(u64, u64)>)> = par::map_collect(lo..hi, |i| {
        let a = &events[(i - lo) as usize];
        let mut best = (BigRational::zero(), None);
        for j in i + 1..=hi {
            let m = intersection_measure(a, &events[(j - lo) as usize]);
            if m.is_zero() {
                continue;
            }
            let ratio = m / scale(i, j);
            if best.1.is_none() || ratio > best.0 {
                best = (ratio, Some((i, j)));
            }
        }
        best
    });
    // rows arrive in order of i, so the first maximum is the smallest pair
    let mut worst = BigRational::zero();
    let mut argmax = None;
    for (ratio, at) in rows {
        if at.is_some() && (argmax.is_none() || ratio > worst) {
            worst = ratio;
            argmax = at;
        }
    }
    let span = hi - lo + 1;
    OverlapReport {
        worst,
        argmax,
        pairs: span * (span - 1) / 2,
    }
}

/// `max mu(E_n ∩ E_m) / (4 (n delta)(m delta))` over `2 <= n < m <= n_max`.
pub fn verify_duffin_schaeffer(n_max: u64, delta: ReducedFraction) -> Result<OverlapReport> {
    if n_max < 3 {
        return Err(PopcornError::Range {
            what: "n_max",
            detail: format!("{n_max} < 3"),
        });
    }
    check_open_unit(delta, "delta")?;
    let events: Vec<IntervalUnion> = par::map_collect(2..n_max + 1, |n| build_e_n(n, delta))
        .into_iter()
        .collect::<Result<_>>()?;
    let d2 = delta.to_big() * delta.to_big();
    Ok(scan_pairs(2, n_max, &events, |n, m| big_u(4 * n * m) * &d2))
}

/// `max mu(F_l ∩ F_l') / (8 l l' delta^2 (n+1)^2)` over `2 <= l < l' <= l_max`.
pub fn verify_local_ds(l_max: u64, n: u64, delta: ReducedFraction) -> Result<OverlapReport> {
    if l_max < 3 {
        return Err(PopcornError::Range {
            what: "l_max",
            detail: format!("{l_max} < 3"),
        });
    }
    check_open_unit(delta, "delta")?;
    let events: Vec<IntervalUnion> = par::map_collect(2..l_max + 1, |l| build_f_l(l, n, delta))
        .into_iter()
        .collect::<Result<_>>()?;
    let n1 = big_u(n + 1);
    let c = delta.to_big() * delta.to_big() * &n1 * &n1;
    Ok(scan_pairs(2, l_max, &events, |l, lp| big_u(8 * l * lp) * &c))
}

/// Whether `k <= delta^(-e)` for a rational exponent `e = p/q >= 0`.
fn k_below_power(k: u64, delta: ReducedFraction, p: u32, q: u32) -> bool {
    // k^q <= (b/a)^p  <=>  k^q a^p <= b^p
    let a = BigUint::from(delta.num());
    let b = BigUint::from(delta.den());
    let k = BigUint::from(k);
    Pow::pow(&k, q) * Pow::pow(&a, p) <= Pow::pow(&b, p)
}

/// Integers `k` with `delta^(-lo) <= k <= delta^(-hi)`, exponents given as
/// `(p, q)` pairs meaning `p/q`. Computed exactly.
pub fn power_range(delta: ReducedFraction, lo: (u32, u32), hi: (u32, u32)) -> std::ops::RangeInclusive<u64> {
    let approx = |e: (u32, u32)| (delta.to_f64().recip()).powf(e.0 as f64 / e.1 as f64);
    // k >= delta^(-lo)  <=>  not (k < delta^(-lo))
    let mut k_lo = (approx(lo).floor() as u64).max(1);
    while k_lo > 1 && !k_below_power(k_lo - 1, delta, lo.0, lo.1) {
        k_lo -= 1;
    }
    while k_below_power(k_lo, delta, lo.0, lo.1) && !is_exact_power(k_lo, delta, lo) {
        k_lo += 1;
    }
    let mut k_hi = approx(hi).ceil() as u64 + 1;
    while k_hi > 0 && !k_below_power(k_hi, delta, hi.0, hi.1) {
        k_hi -= 1;
    }
    while k_below_power(k_hi + 1, delta, hi.0, hi.1) {
        k_hi += 1;
    }
    k_lo..=k_hi
}

/// `k = delta^(-e)` exactly.
fn is_exact_power(k: u64, delta: ReducedFraction, e: (u32, u32)) -> bool {
    let a = BigUint::from(delta.num());
    let b = BigUint::from(delta.den());
    Pow::pow(&BigUint::from(k), e.1) * Pow::pow(&a, e.0) == Pow::pow(&b, e.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripWitness {
    pub k: u64,
    /// `L(k) - L(k+1)`
    pub difference: u64,
    /// `1/(2 k^2 delta)` as `p/q`
    pub lower: String,
    /// `1/(k^2 delta)` as `p/q`
    pub upper: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripLemmaReport {
    pub checked: u64,
    pub passed: bool,
    /// Number of `k` where either bound fails.
    pub violations: u64,
    pub first_violation: Option<StripWitness>,
    /// `floor(delta^(-(1/2 - epsilon)))`
    pub k_limit: u64,
}

/// Default `epsilon` of the strip-lemma range: `1/20`.
pub const DEFAULT_STRIP_EPSILON: (u64, u64) = (1, 20);

pub fn verify_strip_lemma(delta: ReducedFraction, k_max: u64) -> Result<StripLemmaReport> {
    let (p, q) = DEFAULT_STRIP_EPSILON;
    verify_strip_lemma_with(delta, k_max, ReducedFraction::new(p, q)?)
}

/// Checks `1/(2 k^2 delta) <= L(k) - L(k+1) <= 1/(k^2 delta)` exactly for
/// `1 <= k <= k_max`, where `L(k) = floor(1/(k delta))`.
pub fn verify_strip_lemma_with(
    delta: ReducedFraction,
    k_max: u64,
    epsilon: ReducedFraction,
) -> Result<StripLemmaReport> {
    check_open_unit(delta, "delta")?;
    // epsilon in [0, 1/2)
    if epsilon.num() as u128 * 2 >= epsilon.den() as u128 {
        return Err(PopcornError::Range {
            what: "epsilon",
            detail: format!("{epsilon} is not below 1/2"),
        });
    }
    if k_max < 1 {
        return Err(PopcornError::Range {
            what: "k_max",
            detail: "must be at least 1".into(),
        });
    }
    let (ep, eq) = (epsilon.num() as u32, epsilon.den() as u32);
    // 1/2 - p/q = (q - 2p) / (2q)
    let exp = (eq - 2 * ep, 2 * eq);
    let k_limit = *power_range(delta, (0, 1), exp).end();
    if k_max > k_limit {
        return Err(PopcornError::Precondition(format!(
            "k_max = {k_max} exceeds floor(delta^-(1/2 - {epsilon})) = {k_limit}"
        )));
    }
    let (a, b) = (delta.num() as u128, delta.den() as u128);
    let witnesses: Vec<StripWitness> = par::map_collect(1..k_max + 1, |k| {
        let diff = strip_index_l(k, delta).ok()? - strip_index_l(k + 1, delta).ok()?;
        let k2a = (k as u128) * (k as u128) * a;
        let ok = b <= 2 * k2a * diff as u128 && diff as u128 * k2a <= b;
        (!ok).then(|| StripWitness {
            k,
            difference: diff,
            lower: format!("{}", BigRational::new(b.into(), (2 * k2a).into())),
            upper: format!("{}", BigRational::new(b.into(), k2a.into())),
        })
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(StripLemmaReport {
        checked: k_max,
        passed: witnesses.is_empty(),
        violations: witnesses.len() as u64,
        first_violation: witnesses.into_iter().next(),
        k_limit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripLowerBound {
    pub k: u64,
    #[serde(with = "big_string")]
    pub bound: BigRational,
    /// The strip holds no level, so the bound is zero by convention.
    pub empty: bool,
}

/// `chung_erdos_bound({E_q : q in strip k}) / (4 delta)`, a certified lower
/// bound for the number of `delta`-cells met by row `k`.
pub fn lower_bound_strip(k: u64, delta: ReducedFraction) -> Result<StripLowerBound> {
    let spec = strip_spec(k, delta)?;
    if spec.levels().is_empty() {
        return Ok(StripLowerBound {
            k,
            bound: BigRational::zero(),
            empty: true,
        });
    }
    let levels: Vec<u64> = spec.levels().collect();
    let events = par::map_slice(&levels, |&q| build_e_n(q, delta))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let ce = chung_erdos_bound(&events)?;
    Ok(StripLowerBound {
        k,
        bound: ce / (big_u(4) * delta.to_big()),
        empty: false,
    })
}

/// One strip of the lower-bound chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRow {
    pub lower: StripLowerBound,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub delta: ReducedFraction,
    pub k_lo: u64,
    pub k_hi: u64,
    pub rows: Vec<ChainRow>,
    /// Strips where the bound exceeded the count.
    pub violations: Vec<u64>,
    /// Sum of the bounds over the range.
    #[serde(with = "big_string")]
    pub aggregate: BigRational,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares [`lower_bound_strip`] with the strip count for every
/// `delta^(-1/3) <= k <= delta^(-9/20)`.
pub fn verify_chung_erdos_chain(delta: ReducedFraction) -> Result<ChainReport> {
    let ks = power_range(delta, (1, 3), (9, 20));
    let (k_lo, k_hi) = (*ks.start(), *ks.end());
    let ks: Vec<u64> = ks.collect();
    let rows = par::map_slice(&ks, |&k| -> Result<ChainRow> {
        Ok(ChainRow {
            lower: lower_bound_strip(k, delta)?,
            count: grid_count_strip(k, delta)?.count,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let violations = rows
        .iter()
        .filter(|r| r.lower.bound > big_u(r.count))
        .map(|r| r.lower.k)
        .collect();
    let aggregate = rows.iter().fold(BigRational::zero(), |acc, r| acc + &r.lower.bound);
    Ok(ChainReport {
        delta,
        k_lo,
        k_hi,
        rows,
        violations,
        aggregate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: u64, d: u64) -> ReducedFraction {
        ReducedFraction::new(n, d).unwrap()
    }

    #[test]
    fn ds_small_case_is_disjoint() {
        let r = verify_duffin_schaeffer(3, frac(1, 1000)).unwrap();
        assert!(r.worst.is_zero());
        assert_eq!(r.argmax, None);
        assert_eq!(r.pairs, 1);
        assert!(verify_duffin_schaeffer(2, frac(1, 1000)).is_err());
    }

    #[test]
    fn ds_holds_for_moderate_n() {
        let r = verify_duffin_schaeffer(50, frac(1, 10_000_000)).unwrap();
        assert!(r.holds());
        let coarse = verify_duffin_schaeffer(40, frac(1, 500)).unwrap();
        assert!(coarse.holds());
        assert!(coarse.argmax.is_some());
    }

    #[test]
    fn local_ds_small_case_is_disjoint() {
        let r = verify_local_ds(3, 2, frac(1, 1000)).unwrap();
        assert!(r.worst.is_zero());
        let r = verify_local_ds(30, 5, frac(1, 20_000)).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn strip_lemma_examples() {
        let d = frac(1, 1_000_000);
        // k = 10: L(10) - L(11) = 100000 - 90909
        assert_eq!(strip_index_l(10, d).unwrap() - strip_index_l(11, d).unwrap(), 9091);
        let r = verify_strip_lemma(d, 134).unwrap();
        assert!(r.passed);
        assert_eq!(r.k_limit, 501);
        assert!(verify_strip_lemma(frac(1, 100), 3).unwrap().passed);
        assert!(verify_strip_lemma(frac(1, 100), 8).is_err());
    }

    #[test]
    fn strip_upper_bound_fails_past_the_cube_root() {
        // The upper bound needs k^2 (k+1) <= 1/delta; at k = 135 the floors
        // give 7407 - 7352 = 55 > 10^6 / 135^2.
        let r = verify_strip_lemma(frac(1, 1_000_000), 500).unwrap();
        assert!(!r.passed);
        let w = r.first_violation.unwrap();
        assert_eq!((w.k, w.difference), (135, 55));
        assert_eq!(r.violations, 151);
        assert_eq!(w.upper, "40000/729");
    }

    #[test]
    fn power_ranges_are_exact() {
        assert_eq!(power_range(frac(1, 1 << 10), (1, 3), (9, 20)), 11..=22);
        assert_eq!(power_range(frac(1, 1 << 12), (1, 3), (9, 20)), 16..=42);
        assert_eq!(power_range(frac(1, 1 << 14), (1, 3), (9, 20)), 26..=78);
        // 1/8: cube root is exactly 2
        assert_eq!(*power_range(frac(1, 8), (1, 3), (1, 1)).start(), 2);
        assert_eq!(power_range(frac(1, 100), (0, 1), (9, 20)), 1..=7);
    }

    #[test]
    fn lower_bound_examples() {
        let d = frac(1, 64);
        let lb = lower_bound_strip(2, d).unwrap();
        assert!(lb.bound <= big_u(grid_count_strip(2, d).unwrap().count));
        let lb = lower_bound_strip(1, frac(1, 4)).unwrap();
        assert!(lb.bound <= big_u(3));
        // a single-level strip: q = 2 only at k = 2, delta = 1/4
        let single = lower_bound_strip(2, frac(1, 4)).unwrap();
        let e2 = build_e_n(2, frac(1, 4)).unwrap();
        assert_eq!(single.bound, e2.measure() / big_u(4) / frac(1, 4).to_big());
        let empty = lower_bound_strip(3, frac(1, 4)).unwrap();
        assert!(empty.empty && empty.bound.is_zero());
    }
}
