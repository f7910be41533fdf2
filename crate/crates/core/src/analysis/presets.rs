//! Named mesh sequences.

use crate::error::{PopcornError, Result};
use crate::fraction::ReducedFraction;

/// `2^-k` for `k_min <= k <= k_max`, coarsest first.
pub fn pow2_meshes(k_min: u32, k_max: u32) -> Result<Vec<ReducedFraction>> {
    if k_min < 1 || k_max < k_min || k_max > 30 {
        return Err(PopcornError::Range {
            what: "pow2 preset",
            detail: format!("need 1 <= kmin <= kmax <= 30, got [{k_min}, {k_max}]"),
        });
    }
    (k_min..=k_max).map(|k| ReducedFraction::new(1, 1 << k)).collect()
}

/// Largest index accepted by [`proof_sequence_meshes`].
pub const PROOF_SEQUENCE_MAX: u64 = 3;

/// `delta_n = (1/(n(n+1)))^6` for `1 <= n <= n_max`; both `delta^(-1/2)` and
/// `delta^(-1/3)` are integers. Only `n_max <= 3` is offered because
/// `n = 4` already needs meshes near `1.6e-8`.
pub fn proof_sequence_meshes(n_max: u64) -> Result<Vec<ReducedFraction>> {
    if !(1..=PROOF_SEQUENCE_MAX).contains(&n_max) {
        return Err(PopcornError::Range {
            what: "proof-sequence preset",
            detail: format!("n_max must be in [1, {PROOF_SEQUENCE_MAX}], got {n_max}"),
        });
    }
    (1..=n_max)
        .map(|n| ReducedFraction::new(1, (n * (n + 1)).pow(6)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let p = pow2_meshes(8, 10).unwrap();
        assert_eq!(p.iter().map(|d| d.den()).collect::<Vec<_>>(), vec![256, 512, 1024]);
        assert!(pow2_meshes(5, 4).is_err());
        let s = proof_sequence_meshes(3).unwrap();
        assert_eq!(
            s.iter().map(|d| d.den()).collect::<Vec<_>>(),
            vec![64, 46_656, 2_985_984]
        );
        assert!(proof_sequence_meshes(4).is_err());
    }
}
