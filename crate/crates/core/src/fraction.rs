use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{PopcornError, Result};
use crate::numtheory::gcd_u64;

/// A non-negative rational `num/den` kept in lowest terms.
///
/// Used for popcorn coordinates, meshes, window corners and spectrum
/// parameters. Arithmetic-heavy code (interval unions, measures) works on
/// [`BigRational`] instead; convert with [`ReducedFraction::to_big`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedFraction {
    num: u64,
    den: u64,
}

impl ReducedFraction {
    pub const ZERO: ReducedFraction = ReducedFraction { num: 0, den: 1 };
    pub const ONE: ReducedFraction = ReducedFraction { num: 1, den: 1 };

    /// Builds `num/den` and reduces it.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(PopcornError::ZeroDenominator { num, den });
        }
        if num == 0 {
            return Ok(Self::ZERO);
        }
        let g = gcd_u64(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// `1/den`; panics on a zero denominator.
    pub fn recip_of(den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Self { num: 1, den }
    }

    pub fn from_integer(n: u64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// `floor(1 / self)`, or `None` for zero.
    pub fn floor_recip(&self) -> Option<u64> {
        self.den.checked_div(self.num)
    }

    /// `ceil(1 / self)`, or `None` for zero.
    pub fn ceil_recip(&self) -> Option<u64> {
        if self.num == 0 {
            None
        } else {
            Some(self.den.div_ceil(self.num))
        }
    }

    /// Exact product with a positive integer.
    pub fn mul_int(&self, k: u64) -> Result<Self> {
        let g = gcd_u64(k, self.den);
        let num = (self.num as u128) * ((k / g) as u128);
        let num = u64::try_from(num).map_err(|_| PopcornError::Range {
            what: "fraction numerator",
            detail: format!("{}*{} overflows u64", self, k),
        })?;
        Self::new(num, self.den / g)
    }
}

impl Ord for ReducedFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        ((self.num as u128) * (other.den as u128)).cmp(&((other.num as u128) * (self.den as u128)))
    }
}

impl PartialOrd for ReducedFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parses `p/q` or a bare integer. Decimal notation is rejected.
impl FromStr for ReducedFraction {
    type Err = PopcornError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| -> Result<u64> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(PopcornError::Parse(s.to_string()));
            }
            t.parse::<u64>().map_err(|_| PopcornError::Parse(s.to_string()))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (parse(p)?, parse(q)?);
                if q == 0 {
                    return Err(PopcornError::Parse(s.to_string()));
                }
                Self::new(p, q)
            }
            None => Ok(Self::from_integer(parse(s)?)),
        }
    }
}

/// `BigRational` from a pair of machine integers.
pub fn big(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
