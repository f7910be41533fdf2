//! Integer kernels: gcd, the totient sieve, coprime residues and the
//! floor-based strip indices used to slice the popcorn set into rows.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;

/// Largest sieve limit accepted by [`totient_sieve`].
pub const TOTIENT_LIMIT_CAP: u64 = 100_000_000;

/// Largest `l` accepted by [`coprime_residues`].
pub const RESIDUE_LIMIT_CAP: u64 = 1_000_000;

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Greatest common divisor. `gcd(0, 0)` is rejected.
pub fn gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(PopcornError::UndefinedGcd);
    }
    Ok(gcd_u64(a, b))
}

/// Euler totient values for `1..=limit`, with smallest prime factors kept
/// alongside so that level enumerators can factor denominators cheaply.
///
/// `phi(1)` is stored as 1 (the usual convention) so that divisor sums work;
/// every other entry counts `1 <= m <= n - 1` with `gcd(m, n) = 1`.
#[derive(Debug, Clone)]
pub struct TotientTable {
    limit: u64,
    phi: Vec<u64>,
    spf: Vec<u32>,
}

impl TotientTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `phi(n)` for `1 <= n <= limit`.
    pub fn get(&self, n: u64) -> Option<u64> {
        if n == 0 || n > self.limit {
            None
        } else {
            Some(self.phi[n as usize])
        }
    }

    /// Smallest prime factor of `2 <= n <= limit`.
    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    /// Distinct prime factors of `n`, ascending.
    pub fn distinct_primes(&self, mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        out
    }

    /// `sum_{q=lo}^{hi} phi(q)` over the table range.
    pub fn sum_range(&self, lo: u64, hi: u64) -> u64 {
        let hi = hi.min(self.limit);
        if lo > hi {
            return 0;
        }
        self.phi[lo.max(1) as usize..=hi as usize].iter().sum()
    }
}

/// Linear sieve for `phi(n)`, `1 <= n <= limit`.
pub fn totient_sieve(limit: u64) -> Result<TotientTable> {
    if limit < 2 {
        return Err(PopcornError::Range {
            what: "totient sieve limit",
            detail: format!("{limit} < 2"),
        });
    }
    if limit > TOTIENT_LIMIT_CAP {
        return Err(PopcornError::Range {
            what: "totient sieve limit",
            detail: format!("{limit} > {TOTIENT_LIMIT_CAP}"),
        });
    }
    let n = limit as usize;
    let mut phi = vec![0u64; n + 1];
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    phi[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            phi[i] = (i - 1) as u64;
            primes.push(i as u32);
        }
        for &p in &primes {
            let p = p as usize;
            let ip = i * p;
            if p > spf[i] as usize || ip > n {
                break;
            }
            spf[ip] = p as u32;
            phi[ip] = if i % p == 0 {
                phi[i] * p as u64
            } else {
                phi[i] * (p as u64 - 1)
            };
        }
    }
    Ok(TotientTable { limit, phi, spf })
}

/// Smallest-prime-factor table without the totients, for callers that only
/// need to factor denominators.
#[derive(Debug, Clone)]
pub(crate) struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > TOTIENT_LIMIT_CAP {
            return Err(PopcornError::Range {
                what: "factor sieve limit",
                detail: format!("{limit} > {TOTIENT_LIMIT_CAP}"),
            });
        }
        let n = limit.max(2) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si || i * p as usize > n {
                    break;
                }
                spf[i * p as usize] = p;
            }
        }
        Ok(Self { spf })
    }

    /// Writes the distinct primes of `n` into `out`, returning how many.
    #[inline]
    pub fn distinct_primes_into(&self, mut n: u64, out: &mut [u64; 16]) -> usize {
        let mut k = 0;
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            out[k] = p;
            k += 1;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        k
    }
}

/// All `1 <= i <= l - 1` with `gcd(i, l) = 1`, ascending.
pub fn coprime_residues(l: u64) -> Result<Vec<u64>> {
    if l < 2 {
        return Err(PopcornError::Range {
            what: "coprime residue modulus",
            detail: format!("{l} < 2"),
        });
    }
    if l > RESIDUE_LIMIT_CAP {
        return Err(PopcornError::Range {
            what: "coprime residue modulus",
            detail: format!("{l} > {RESIDUE_LIMIT_CAP}"),
        });
    }
    Ok((1..l).filter(|&i| gcd_u64(i, l) == 1).collect())
}

/// `floor(1 / (k * delta))`: the highest denominator level whose height
/// `1/q` still reaches row `k` of a mesh-`delta` grid.
pub fn strip_index_l(k: u64, delta: ReducedFraction) -> Result<u64> {
    floor_recip_scaled(k, delta, "strip index")
}

/// `floor(1 / (k * (n + 1) * delta))`, the collapsed-view analogue of
/// [`strip_index_l`].
pub fn collapsed_index_lp(k: u64, n: u64, delta: ReducedFraction) -> Result<u64> {
    let scale = k.checked_mul(n.checked_add(1).ok_or_else(|| overflow("n + 1"))?);
    let scale = scale.ok_or_else(|| overflow("k * (n + 1)"))?;
    floor_recip_scaled(scale, delta, "collapsed strip index")
}

fn overflow(what: &str) -> PopcornError {
    PopcornError::Range {
        what: "integer",
        detail: format!("{what} overflows u64"),
    }
}

fn floor_recip_scaled(scale: u64, delta: ReducedFraction, what: &'static str) -> Result<u64> {
    check_open_unit(delta, "delta")?;
    if scale == 0 {
        return Err(PopcornError::Range {
            what,
            detail: "strip index must be at least 1".into(),
        });
    }
    // floor(den / (scale * num)); empty when scale * delta > 1.
    let denom = scale as u128 * delta.num() as u128;
    if denom > delta.den() as u128 {
        return Err(PopcornError::EmptyStrip {
            k: scale,
            delta: delta.to_string(),
        });
    }
    Ok((delta.den() as u128 / denom) as u64)
}

pub(crate) fn check_open_unit(x: ReducedFraction, name: &'static str) -> Result<()> {
    if x.is_zero() || x >= ReducedFraction::ONE {
        return Err(PopcornError::Range {
            what: name,
            detail: format!("{x} is not in (0, 1)"),
        });
    }
    Ok(())
}

/// `(floor(a)^2 - ceil(b)^2) / (a^2 - b^2)` for rationals `a > b > 1` with
/// `a - b >= 3`. Always lies in `[1/3, 1]`.
pub fn square_estimate_ratio(a: &BigRational, b: &BigRational) -> Result<BigRational> {
    let one = BigRational::one();
    let three = BigRational::from_integer(3.into());
    if !(*b > one && *a > *b && a - b >= three) {
        return Err(PopcornError::Range {
            what: "square estimate",
            detail: format!("need a > b > 1 and a - b >= 3, got a = {a}, b = {b}"),
        });
    }
    let fa = a.floor();
    let cb = b.ceil();
    Ok((&fa * &fa - &cb * &cb) / (a * a - b * b))
}

/// Result of scanning `phi(n) * log log n / n` over a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotientBound {
    pub min_ratio: f64,
    pub argmin: u64,
}

/// Minimum of `phi(n) log(log n) / n` over `lo <= n <= hi`.
///
/// The log-log factor is a floating point diagnostic; `phi` itself is exact.
pub fn verify_totient_bound(lo: u64, hi: u64) -> Result<TotientBound> {
    if lo < 3 || hi <= lo {
        return Err(PopcornError::Range {
            what: "totient bound range",
            detail: format!("need 3 <= lo < hi, got [{lo}, {hi}]"),
        });
    }
    let table = totient_sieve(hi)?;
    let mut best = TotientBound {
        min_ratio: f64::INFINITY,
        argmin: lo,
    };
    for n in lo..=hi {
        let phi = table.phi[n as usize] as f64;
        let ratio = phi * (n as f64).ln().ln() / n as f64;
        if ratio < best.min_ratio {
            best = TotientBound {
                min_ratio: ratio,
                argmin: n,
            };
        }
    }
    Ok(best)
}
