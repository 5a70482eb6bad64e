//! Functional forms of multi-set concentration: sublevel bounds for minima
//! of Lipschitz functions, pushforward (quantile) deviation bounds, and
//! McShane-Whitney extension error certification.
//!
//! All three propositions are generic over a concentration profile
//! `(alpha_k, beta_k)`: the measure bound reads
//! `mu(...) >= 1 - beta_k(a) alpha_k(r)`. `alpha` can come from the
//! continuous bound (`c`- or `Psi`-exponent) or from the Markov one-step
//! theorem; `beta` is one of the three forms of the closing remark
//! (the `Delta_k` indicator form `1 - sum a_i`, and the two correction-term
//! forms that need no `Delta_k` assumption).

use alloc::vec::Vec;

use crate::error::Error;
use crate::fmath;
use crate::polytope::{in_delta_k, require_delta_k};
use crate::profile::{phi_small, psi_big, universal_c, CERT_TOL};
use crate::space::{set_distance, Ambient, SetFamily};
use crate::Result;

/// Tolerance used when checking Lipschitz constants and extension equality.
pub const LIP_TOL: f64 = 1e-12;

/// A real function on the points of a finite space, with its derived
/// Lipschitz constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFunction {
    values: Vec<f64>,
    lipschitz_constant: f64,
    worst_pair: Option<(usize, usize)>,
}

impl DiscreteFunction {
    pub fn new<S: Ambient + ?Sized>(space: &S, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.n() {
            return Err(Error::DimensionMismatch);
        }
        let mut lip = 0.0f64;
        let mut worst = None;
        for x in 0..values.len() {
            for y in 0..x {
                let ratio = fmath::abs(values[x] - values[y]) / space.dist(x, y);
                if ratio > lip {
                    lip = ratio;
                    worst = Some((y, x));
                }
            }
        }
        Ok(Self { values, lipschitz_constant: lip, worst_pair: worst })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn lipschitz_constant(&self) -> f64 {
        self.lipschitz_constant
    }

    /// The pair attaining the Lipschitz constant, if the space has >= 2
    /// points.
    pub fn worst_pair(&self) -> Option<(usize, usize)> {
        self.worst_pair
    }
}

/// True iff the derived Lipschitz constant is at most `bound + 1e-12`;
/// returns the attaining pair for diagnostics.
pub fn check_lipschitz(f: &DiscreteFunction, bound: f64) -> (bool, Option<(usize, usize)>) {
    (f.lipschitz_constant <= bound + LIP_TOL, f.worst_pair)
}

fn require_one_lipschitz(f: &DiscreteFunction) -> Result<()> {
    let (ok, worst) = check_lipschitz(f, 1.0);
    if ok {
        Ok(())
    } else {
        let (i, j) = worst.unwrap_or((0, 0));
        Err(Error::NotLipschitzOnA { i, j })
    }
}

/// Concentration profile `alpha_k(r)`, non-increasing in `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaProfile {
    /// `exp(-c min(r^2 lambda, r sqrt(lambda)))` with `c = log(5)/4`.
    MainC { lambda: f64 },
    /// `exp(-Psi(lambda r^2))`, the sharper continuous profile.
    MainPsi { lambda: f64 },
    /// `(1 + lambda)^{-(ceil(r) - 1)}`: the profile the Markov one-step
    /// theorem yields for strict enlargements on graphs (mass at distance
    /// >= r survives `ceil(r) - 1` certified steps).
    Markov { lambda: f64 },
}

impl AlphaProfile {
    pub fn alpha(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 1.0;
        }
        match *self {
            AlphaProfile::MainC { lambda } => {
                fmath::exp(-universal_c() * phi_small(r * fmath::sqrt(fmath::max(lambda, 0.0))))
            }
            AlphaProfile::MainPsi { lambda } => {
                fmath::exp(-psi_big(fmath::max(lambda, 0.0) * r * r).unwrap_or(0.0))
            }
            AlphaProfile::Markov { lambda } => {
                let steps = fmath::max(fmath::ceil(r) - 1.0, 0.0);
                fmath::powf(1.0 + fmath::max(lambda, 0.0), -steps)
            }
        }
    }
}

/// The three `beta_k` prefactor forms of the closing remark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaKind {
    /// `1 - sum a_i` on `Delta_k`, `+inf` outside.
    DeltaK,
    /// `(1 - sum a_i) / prod a_i`; no `Delta_k` assumption.
    Product,
    /// `(1 - mu(A)) mu(A)^{-mu(A)/a_(1)}`; no `Delta_k` assumption.
    Power,
}

/// A full profile: `mu(...) >= 1 - beta_k(a) alpha_k(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralProfile {
    pub alpha: AlphaProfile,
    pub beta: BetaKind,
}

impl GeneralProfile {
    /// Evaluates `beta_k` on the measure vector; `NotInDeltaK` for the
    /// indicator form outside the polytope.
    pub fn beta(&self, measures: &[f64]) -> Result<f64> {
        let mu_a: f64 = measures.iter().sum();
        match self.beta {
            BetaKind::DeltaK => {
                require_delta_k(measures)?;
                Ok(1.0 - mu_a)
            }
            BetaKind::Product => {
                let prod: f64 = measures.iter().product();
                Ok((1.0 - mu_a) / prod)
            }
            BetaKind::Power => {
                let a1 = measures.iter().copied().fold(f64::INFINITY, fmath::min);
                Ok((1.0 - mu_a) * fmath::powf(mu_a, -mu_a / a1))
            }
        }
    }

    pub fn bound(&self, measures: &[f64], r: f64) -> Result<f64> {
        Ok(1.0 - self.beta(measures)? * self.alpha.alpha(r))
    }
}

/// A certified functional inequality: the profile bound against the exact
/// measure computed by enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedBound {
    pub bound: f64,
    pub exact: f64,
    pub slack: f64,
    pub certified: bool,
}

fn certified(bound: f64, exact: f64) -> CertifiedBound {
    let slack = exact - bound;
    CertifiedBound { bound, exact, slack, certified: slack >= -CERT_TOL }
}

/// Lower bound on `mu(min_i f_i < r)` for 1-Lipschitz `f_i` with sublevel
/// sets `A_i = {f_i <= 0}`:
/// `mu(f* < r) >= 1 - beta_k(a) alpha_k(r)` for `r <= half the sublevel
/// separation`. The equivalence with the set form is certified by
/// instantiating `f_i(x) = d(x, A_i)` and checking exact agreement.
pub fn min_sublevel_bound<S: Ambient + ?Sized>(
    space: &S,
    fs: &[DiscreteFunction],
    profile: &GeneralProfile,
    r: f64,
) -> Result<CertifiedBound> {
    if fs.is_empty() {
        return Err(Error::EmptySet);
    }
    for f in fs {
        require_one_lipschitz(f)?;
        if f.values.len() != space.n() {
            return Err(Error::DimensionMismatch);
        }
    }
    let sublevels: Vec<Vec<usize>> = fs
        .iter()
        .map(|f| (0..space.n()).filter(|&x| f.value(x) <= 0.0).collect())
        .collect();
    if sublevels.iter().any(|a| a.is_empty()) {
        return Err(Error::EmptySet);
    }
    let mut half_sep = f64::INFINITY;
    for i in 0..sublevels.len() {
        for j in 0..i {
            half_sep = fmath::min(half_sep, set_distance(space, &sublevels[i], &sublevels[j])? / 2.0);
        }
    }
    if !(r > 0.0) || r > half_sep {
        return Err(Error::RadiusTooLarge);
    }
    let measures: Vec<f64> = sublevels.iter().map(|a| space.mu_of_set(a)).collect();
    let bound = profile.bound(&measures, r)?;
    // exact mu(f* < r)
    let exact: f64 = (0..space.n())
        .filter(|&x| fs.iter().map(|f| f.value(x)).fold(f64::INFINITY, fmath::min) < r)
        .map(|x| space.mu(x))
        .sum();
    // equivalence certification: the distance instantiation f_i = d(., A_i)
    // has the same sublevels, hence bitwise the same bound
    let dist_fs: Vec<DiscreteFunction> = sublevels
        .iter()
        .map(|a| DiscreteFunction::new(space, space.dist_to_set(a)))
        .collect::<Result<_>>()?;
    let dist_measures: Vec<f64> = dist_fs
        .iter()
        .map(|f| {
            (0..space.n())
                .filter(|&x| f.value(x) <= 0.0)
                .map(|x| space.mu(x))
                .sum()
        })
        .collect();
    let dist_bound = profile.bound(&dist_measures, r)?;
    if dist_bound != bound {
        return Err(Error::DimensionMismatch);
    }
    Ok(certified(bound, exact))
}

/// Lower bound on `mu(f in union of r-enlarged intervals)` for a
/// 1-Lipschitz `f` and `k` disjoint closed intervals, via the pushforward
/// of `mu` under `f` (a metric measure space on the line, where the
/// interval enlargements are open intervals).
pub fn quantile_bound<S: Ambient + ?Sized>(
    space: &S,
    f: &DiscreteFunction,
    intervals: &[(f64, f64)],
    profile: &GeneralProfile,
    r: f64,
) -> Result<CertifiedBound> {
    if intervals.is_empty() {
        return Err(Error::EmptySet);
    }
    require_one_lipschitz(f)?;
    for &(lo, hi) in intervals {
        if !(lo <= hi) {
            return Err(Error::OverlappingIntervals);
        }
    }
    let mut gap = f64::INFINITY;
    for i in 0..intervals.len() {
        for j in 0..i {
            let (a, b) = intervals[i];
            let (c, d) = intervals[j];
            // gap between [a,b] and [c,d] on the line
            let g = fmath::max(fmath::max(c - b, a - d), 0.0);
            if g == 0.0 {
                return Err(Error::OverlappingIntervals);
            }
            gap = fmath::min(gap, g);
        }
    }
    if !(r > 0.0) || r > gap / 2.0 {
        return Err(Error::RadiusTooLarge);
    }
    let measures: Vec<f64> = intervals
        .iter()
        .map(|&(lo, hi)| {
            (0..space.n())
                .filter(|&x| f.value(x) >= lo && f.value(x) <= hi)
                .map(|x| space.mu(x))
                .sum()
        })
        .collect();
    let bound = profile.bound(&measures, r)?;
    let exact: f64 = (0..space.n())
        .filter(|&x| {
            intervals
                .iter()
                .any(|&(lo, hi)| f.value(x) > lo - r && f.value(x) < hi + r)
        })
        .map(|x| space.mu(x))
        .sum();
    Ok(certified(bound, exact))
}

/// Which McShane-Whitney extension to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionSide {
    /// `g_+(x) = min_{y in A} (f(y) + d(x,y))`, the largest 1-Lipschitz
    /// extension.
    Upper,
    /// `g_-(x) = max_{y in A} (f(y) - d(x,y))`, the smallest.
    Lower,
}

/// McShane-Whitney extension of a 1-Lipschitz partial function given only
/// on `a` (values in `f_on_a`, parallel to `a`). Never reads values off `a`.
pub fn extend<S: Ambient + ?Sized>(
    space: &S,
    a: &[usize],
    f_on_a: &[f64],
    side: ExtensionSide,
) -> Result<DiscreteFunction> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.len() != f_on_a.len() || a.iter().any(|&x| x >= space.n()) {
        return Err(Error::DimensionMismatch);
    }
    for i in 0..a.len() {
        for j in 0..i {
            if a[i] == a[j] {
                return Err(Error::DimensionMismatch);
            }
            if fmath::abs(f_on_a[i] - f_on_a[j]) > space.dist(a[i], a[j]) + LIP_TOL {
                return Err(Error::NotLipschitzOnA { i: j, j: i });
            }
        }
    }
    let values: Vec<f64> = (0..space.n())
        .map(|x| match side {
            ExtensionSide::Upper => a
                .iter()
                .zip(f_on_a)
                .map(|(&y, &fy)| fy + space.dist(x, y))
                .fold(f64::INFINITY, fmath::min),
            ExtensionSide::Lower => a
                .iter()
                .zip(f_on_a)
                .map(|(&y, &fy)| fy - space.dist(x, y))
                .fold(f64::NEG_INFINITY, fmath::max),
        })
        .collect();
    DiscreteFunction::new(space, values)
}

/// Certifies `mu(|f - g| >= r) <= (1 - mu(A)) alpha_k(r/2)` for a
/// 1-Lipschitz `f`, a 1-Lipschitz `g` agreeing with `f` on the family's
/// union, and `0 < r <= min_{i != j} d(A_i, A_j)`. Both sides are evaluated
/// exactly. For the `Delta_k` beta form the prefactor is `1 - mu(A)`
/// by construction; the other forms substitute their own prefactor.
pub fn extension_error_bound<S: Ambient + ?Sized>(
    space: &S,
    family: &SetFamily,
    f: &DiscreteFunction,
    g: &DiscreteFunction,
    profile: &GeneralProfile,
    r: f64,
) -> Result<CertifiedBound> {
    require_one_lipschitz(f)?;
    require_one_lipschitz(g)?;
    for &x in &family.union() {
        if fmath::abs(f.value(x) - g.value(x)) > LIP_TOL {
            return Err(Error::NotAnExtension { index: x });
        }
    }
    if !(r > 0.0) || r > family.separation() {
        return Err(Error::RadiusTooLarge);
    }
    if profile.beta == BetaKind::DeltaK {
        require_delta_k(family.measures())?;
    }
    let rhs = profile.beta(family.measures())? * profile.alpha.alpha(r / 2.0);
    let lhs: f64 = (0..space.n())
        .filter(|&x| fmath::abs(f.value(x) - g.value(x)) >= r)
        .map(|x| space.mu(x))
        .sum();
    let slack = rhs - lhs;
    Ok(CertifiedBound { bound: rhs, exact: lhs, slack, certified: slack >= -CERT_TOL })
}

/// Sanity helper exposed for tests: membership report of the measure
/// vector, shared with the polytope module.
pub fn sublevel_measures_in_delta_k(measures: &[f64]) -> Result<bool> {
    Ok(in_delta_k(measures)?.inside)
}
