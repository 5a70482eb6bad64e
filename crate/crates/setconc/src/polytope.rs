//! The constraint set `Delta_k` of measure vectors and its merge stability.
//!
//! `Delta_k` is the set of `(a_1,...,a_k)` in `[0,1]^k` with
//! `sum a_j <= 1` and `a_i + sum a_j >= 1` for every `i`. Summing blocks of
//! a vector in `Delta_k` over any partition lands in `Delta_n` again, which
//! is what lets the one-step concentration bound be iterated after sets
//! coalesce. `Delta_1 = [1/2, 1]`, the classical "mu(A) >= 1/2" condition.

use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Membership tolerance; the polytope is treated as closed and boundary
/// cases within this margin are accepted.
pub const DELTA_TOL: f64 = 1e-12;

/// Outcome of a `Delta_k` membership test with a signed margin.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMembership {
    pub inside: bool,
    /// Smallest signed slack over all constraints (negative iff outside).
    pub margin: f64,
    /// Index of the violated constraint when outside: `i < k` is the
    /// constraint `a_i + sum >= 1`, `k` is the constraint `sum <= 1`.
    pub violated: Option<usize>,
}

/// Tests `a` against both linear constraint families of `Delta_k`.
pub fn in_delta_k(a: &[f64]) -> Result<DeltaMembership> {
    if a.is_empty() {
        return Err(Error::DimensionMismatch);
    }
    for (index, &ai) in a.iter().enumerate() {
        if !(0.0..=1.0 + DELTA_TOL).contains(&ai) || !ai.is_finite() {
            return Err(Error::OutOfRangeEntry { index });
        }
    }
    let sum: f64 = a.iter().sum();
    let mut margin = 1.0 - sum;
    let mut violated = (margin < -DELTA_TOL).then_some(a.len());
    for (i, &ai) in a.iter().enumerate() {
        let slack = ai + sum - 1.0;
        if slack < margin {
            margin = slack;
            if slack < -DELTA_TOL && violated.is_none() {
                violated = Some(i);
            }
        }
    }
    if margin >= -DELTA_TOL {
        violated = None;
    }
    Ok(DeltaMembership { inside: margin >= -DELTA_TOL, margin, violated })
}

/// Convenience wrapper returning `NotInDeltaK` when outside.
pub fn require_delta_k(a: &[f64]) -> Result<()> {
    let m = in_delta_k(a)?;
    if m.inside {
        Ok(())
    } else {
        Err(Error::NotInDeltaK { constraint: m.violated.unwrap_or(0) })
    }
}

/// Block sums of `a` over a partition of `{0..k-1}`. If `a` lies in
/// `Delta_k` the result lies in `Delta_n`.
pub fn merge(a: &[f64], partition: &[Vec<usize>]) -> Result<Vec<f64>> {
    let k = a.len();
    let mut seen = alloc::vec![false; k];
    let mut covered = 0usize;
    for block in partition {
        if block.is_empty() {
            return Err(Error::BadPartition);
        }
        for &j in block {
            if j >= k || seen[j] {
                return Err(Error::BadPartition);
            }
            seen[j] = true;
            covered += 1;
        }
    }
    if covered != k {
        return Err(Error::BadPartition);
    }
    Ok(partition.iter().map(|block| block.iter().map(|&j| a[j]).sum()).collect())
}
