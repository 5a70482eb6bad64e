//! Model spectra for benchmark spaces: round spheres, Gaussian space, and a
//! generic log-concave lower bound.
//!
//! These give closed-form eigenvalue data to sanity-check the discrete
//! estimators against. Counting is exact: multiplicities and cumulative
//! counts are binomial expressions evaluated in 128-bit integers with
//! overflow checks, so no floating-point rounding enters the lookups.

use crate::error::Error;
use crate::Result;

/// Which normalization the eigenvalue column uses. The two conventions in
/// circulation are mutually inconsistent, so both are exposed and the
/// choice is always explicit; multiplicity structure is unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingConvention {
    /// Standard geometric operator on the sphere of radius
    /// `R = sqrt((n-1)/rho)`: level `l` maps to `l (l + n - 1) / R^2 =
    /// rho l (l + n - 1) / (n - 1)`; Ornstein-Uhlenbeck on Gaussian space:
    /// level `q` maps to `rho q`.
    Geometric,
    /// Literal printed prefactors some sources use: sphere level `l` maps
    /// to `rho^{-2} (n-1)^2 l (l + n - 1)`, Gaussian level `q` to
    /// `rho^{-2} q`.
    PaperPrinted,
}

/// Exact binomial coefficient in `u128`; errors on overflow.
pub fn binom(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::BadParameters)?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Dimension of the space of degree-`l` spherical harmonics on `S^n`
/// (an `n`-dimensional sphere, so functions of `n + 1` ambient variables):
/// `dim H_l = ((2l + n - 1)/l) C(l + n - 2, l - 1)` for `l >= 1`, `1` for
/// `l = 0`.
pub fn sphere_eigenspace_dim(n: u64, l: u64) -> Result<u128> {
    if n < 1 {
        return Err(Error::BadParameters);
    }
    if l == 0 {
        return Ok(1);
    }
    let c = binom(l + n - 2, l - 1)?;
    // (2l + n - 1) C(l+n-2, l-1) / l is an integer; multiply first.
    let num = c.checked_mul((2 * l + n - 1) as u128).ok_or(Error::BadParameters)?;
    Ok(num / l as u128)
}

/// Cumulative count `D_l = sum_{j <= l} dim H_j` on `S^n`, in closed form
/// `C(n + l, l) + C(n + l - 1, l - 1)`.
pub fn sphere_cumulative_dim(n: u64, l: u64) -> Result<u128> {
    if n < 1 {
        return Err(Error::BadParameters);
    }
    let first = binom(n + l, l)?;
    let second = if l == 0 { 0 } else { binom(n + l - 1, l - 1)? };
    first.checked_add(second).ok_or(Error::BadParameters)
}

/// Dimension of the degree-`q` Hermite eigenspace of the Ornstein-Uhlenbeck
/// operator on Gaussian `R^n`: `C(n + q - 1, q)`.
pub fn gaussian_eigenspace_dim(n: u64, q: u64) -> Result<u128> {
    if n < 1 {
        return Err(Error::BadParameters);
    }
    binom(n + q - 1, q)
}

/// Cumulative count `D_q = sum_{j <= q} dim = C(n + q, q)` on Gaussian `R^n`.
pub fn gaussian_cumulative_dim(n: u64, q: u64) -> Result<u128> {
    if n < 1 {
        return Err(Error::BadParameters);
    }
    binom(n + q, q)
}

/// One row of a model spectrum lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelLevel {
    /// Degree of the eigenspace (`l` for the sphere, `q` for Gaussian).
    pub level: u64,
    /// Eigenvalue under the requested scaling.
    pub eigenvalue: f64,
    /// Dimension of the eigenspace.
    pub multiplicity: u128,
    /// Number of eigenvalues (with multiplicity) up to and including this
    /// level, counting the constant.
    pub cumulative: u128,
}

/// Smallest level whose cumulative eigenvalue count exceeds `k`, i.e. the
/// level of `lambda^{(k)}` in the ordered spectrum, together with the exact
/// counting data. `rho > 0` scales the eigenvalue column.
pub fn sphere_lookup(n: u64, k: u128, rho: f64, scaling: ScalingConvention) -> Result<ModelLevel> {
    if n < 2 || !(rho > 0.0) {
        return Err(Error::BadParameters);
    }
    let mut l = 0u64;
    loop {
        let cumulative = sphere_cumulative_dim(n, l)?;
        if cumulative > k {
            let eigenvalue = sphere_eigenvalue(n, l, rho, scaling);
            return Ok(ModelLevel {
                level: l,
                eigenvalue,
                multiplicity: sphere_eigenspace_dim(n, l)?,
                cumulative,
            });
        }
        l += 1;
        if l > 1_000_000 {
            return Err(Error::BadParameters);
        }
    }
}

/// Gaussian analogue of [`sphere_lookup`]: level of `lambda^{(k)}` for the
/// Ornstein-Uhlenbeck spectrum on `R^n`.
pub fn gaussian_lookup(n: u64, k: u128, rho: f64, scaling: ScalingConvention) -> Result<ModelLevel> {
    if n < 1 || !(rho > 0.0) {
        return Err(Error::BadParameters);
    }
    let mut q = 0u64;
    loop {
        let cumulative = gaussian_cumulative_dim(n, q)?;
        if cumulative > k {
            let eigenvalue = gaussian_eigenvalue(q, rho, scaling);
            return Ok(ModelLevel {
                level: q,
                eigenvalue,
                multiplicity: gaussian_eigenspace_dim(n, q)?,
                cumulative,
            });
        }
        q += 1;
        if q > 1_000_000 {
            return Err(Error::BadParameters);
        }
    }
}

/// Eigenvalue comparison for `rho`-log-concave measures on `R^n`:
/// `lambda^{(k)} >= lambda^{(k)}` of the Gaussian model with the same
/// curvature, so this is exactly the Gaussian lookup value, labeled as a
/// lower bound.
pub fn logconcave_lower(n: u64, k: u128, rho: f64, scaling: ScalingConvention) -> Result<ModelLevel> {
    gaussian_lookup(n, k, rho, scaling)
}

fn sphere_eigenvalue(n: u64, l: u64, rho: f64, scaling: ScalingConvention) -> f64 {
    let raw = (l * (l + n - 1)) as f64;
    match scaling {
        ScalingConvention::Geometric => rho * raw / (n - 1) as f64,
        ScalingConvention::PaperPrinted => ((n - 1) * (n - 1)) as f64 * raw / (rho * rho),
    }
}

fn gaussian_eigenvalue(q: u64, rho: f64, scaling: ScalingConvention) -> f64 {
    match scaling {
        ScalingConvention::Geometric => rho * q as f64,
        ScalingConvention::PaperPrinted => q as f64 / (rho * rho),
    }
}

/// Model eigenvalue table for levels `0..=max_level`.
pub fn sphere_table(n: u64, max_level: u64, rho: f64, scaling: ScalingConvention) -> Result<alloc::vec::Vec<ModelLevel>> {
    if n < 2 || !(rho > 0.0) {
        return Err(Error::BadParameters);
    }
    let mut out = alloc::vec::Vec::with_capacity(max_level as usize + 1);
    for l in 0..=max_level {
        out.push(ModelLevel {
            level: l,
            eigenvalue: sphere_eigenvalue(n, l, rho, scaling),
            multiplicity: sphere_eigenspace_dim(n, l)?,
            cumulative: sphere_cumulative_dim(n, l)?,
        });
    }
    Ok(out)
}

/// Model eigenvalue table for Gaussian levels `0..=max_level`.
pub fn gaussian_table(n: u64, max_level: u64, rho: f64, scaling: ScalingConvention) -> Result<alloc::vec::Vec<ModelLevel>> {
    if n < 1 || !(rho > 0.0) {
        return Err(Error::BadParameters);
    }
    let mut out = alloc::vec::Vec::with_capacity(max_level as usize + 1);
    for q in 0..=max_level {
        out.push(ModelLevel {
            level: q,
            eigenvalue: gaussian_eigenvalue(q, rho, scaling),
            multiplicity: gaussian_eigenspace_dim(n, q)?,
            cumulative: gaussian_cumulative_dim(n, q)?,
        });
    }
    Ok(out)
}
