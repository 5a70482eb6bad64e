//! Scalar profile functions and the concentration-bound evaluators and
//! certifiers built on them.
//!
//! The profile `Psi(x) = sup { floor(t) * log(1 + x/t^2) : t >= 1 }` governs
//! the sharpest form of the multi-set concentration bound; the universal
//! constant `c = log(5)/4` comes from `Psi(x) >= c * min(x, sqrt(x))`. The
//! supremum is attained near `t = sqrt(x)/a` where `a` maximizes
//! `log(1+u^2)/u`, which pins the asymptote `Psi(x) ~ (log(1+a^2)/a) sqrt(x)`
//! (about `0.8 sqrt(x)`, so `c = 1` is out of reach for this profile).

use alloc::vec::Vec;

use crate::error::Error;
use crate::fmath;
use crate::polytope::require_delta_k;
use crate::space::{enlarge, Ambient, EnlargeMode, ReversibleChain, SetFamily};
use crate::spectral::spectrum;
use crate::Result;

/// Slack below which a certificate is considered violated.
pub const CERT_TOL: f64 = 1e-9;

/// The universal constant `c = log(5)/4`.
pub fn universal_c() -> f64 {
    fmath::ln(5.0) / 4.0
}

/// The unique maximizer `a` of `u -> log(1+u^2)/u` on `(0, inf)`, found by
/// bisection on the stationarity equation `2u^2/(1+u^2) = log(1+u^2)`.
pub fn psi_maximizer() -> f64 {
    let g = |u: f64| 2.0 * u * u / (1.0 + u * u) - fmath::ln(1.0 + u * u);
    let mut lo = 1.0f64; // g(1) > 0
    let mut hi = 2.0f64; // g(2) < 0
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The two universal profile constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileConstants {
    /// `log(5)/4`.
    pub c: f64,
    /// Maximizer of `log(1+u^2)/u`; the asymptotic slope of `Psi(x)/sqrt(x)`
    /// is `log(1+a^2)/a`.
    pub a: f64,
}

impl ProfileConstants {
    pub fn compute() -> Self {
        Self { c: universal_c(), a: psi_maximizer() }
    }

    /// `log(1+a^2)/a`, the large-`x` slope of `Psi(x)/sqrt(x)`.
    pub fn asymptotic_slope(&self) -> f64 {
        fmath::ln(1.0 + self.a * self.a) / self.a
    }
}

/// `Psi(x) = sup { floor(t) log(1 + x/t^2) : t >= 1 }`, evaluated exactly:
/// for integer `m = floor(t)` the supremum over `[m, m+1)` sits at `t = m`,
/// and the integer maximizer is `floor(sqrt(x)/a)` or the next integer up.
pub fn psi_big(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::NegativeInput);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let a = psi_maximizer();
    let m = fmath::floor(fmath::sqrt(x) / a);
    let upper = m + 1.0;
    let mut best = upper * fmath::ln(1.0 + x / (upper * upper));
    if m >= 1.0 {
        let lower = m * fmath::ln(1.0 + x / (m * m));
        best = fmath::max(best, lower);
    }
    Ok(best)
}

/// `phi(x) = min(x, x^2)`.
pub fn phi_small(x: f64) -> f64 {
    fmath::min(x, x * x)
}

/// `psi(x) = max(x, x^2)`, the inverse profile of `phi`.
pub fn psi_small(x: f64) -> f64 {
    fmath::max(x, x * x)
}

/// Smooth cutoff `chi_p(x) = (1 - x^p)^p` on `[0,1]`, zero beyond.
pub fn chi_p(x: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::BadExponent);
    }
    if !(x >= 0.0) {
        return Err(Error::NegativeInput);
    }
    if x > 1.0 {
        return Ok(0.0);
    }
    Ok(fmath::powf(1.0 - fmath::powf(x, p), p))
}

/// Right-hand side of the main bound:
/// `1 - (1 - mu(A)) exp(-c min(r^2 lambda, r sqrt(lambda)))`.
pub fn main_bound_value(mu_a: f64, lambda: f64, r: f64) -> f64 {
    1.0 - (1.0 - mu_a) * fmath::exp(-universal_c() * phi_small(r * fmath::sqrt(lambda)))
}

/// The sharper pre-lemma form `1 - (1 - mu(A)) exp(-Psi(lambda r^2))`.
pub fn main_bound_psi_value(mu_a: f64, lambda: f64, r: f64) -> f64 {
    1.0 - (1.0 - mu_a) * fmath::exp(-psi_big(lambda * r * r).unwrap_or(0.0))
}

/// Markov-chain bound `1 - (1 - mu(B)) (1 + lambda)^{-n}`.
pub fn markov_bound_value(mu_b: f64, lambda: f64, n: u32) -> f64 {
    1.0 - (1.0 - mu_b) * fmath::powf(1.0 + lambda, -(n as f64))
}

/// Both evaluated forms of the main multi-set bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainBound {
    /// `c`-exponent form with `c = log(5)/4`.
    pub c_form: f64,
    /// Sharper `Psi`-exponent form; always >= `c_form`.
    pub psi_form: f64,
}

/// Main multi-set concentration bound for a validated family.
/// Requires `(mu(A_1),...,mu(A_k))` in `Delta_k` and `0 < r <= separation/2`.
pub fn bound_main(family: &SetFamily, lambda_k: f64, r: f64) -> Result<MainBound> {
    if !(lambda_k >= 0.0) {
        return Err(Error::NegativeInput);
    }
    require_delta_k(family.measures())?;
    if !(r > 0.0) || r > family.separation() / 2.0 {
        return Err(Error::RadiusTooLarge);
    }
    let mu_a = family.union_measure();
    Ok(MainBound {
        c_form: main_bound_value(mu_a, lambda_k, r),
        psi_form: main_bound_psi_value(mu_a, lambda_k, r),
    })
}

/// Markov bound for a family on a chain (graph units): requires `Delta_k`
/// and `1 <= n <= separation/2`.
pub fn bound_markov(family: &SetFamily, lambda_k: f64, n: u32) -> Result<f64> {
    if !(lambda_k >= 0.0) {
        return Err(Error::NegativeInput);
    }
    require_delta_k(family.measures())?;
    if n < 1 || (n as f64) > family.separation() / 2.0 {
        return Err(Error::RadiusTooLarge);
    }
    Ok(markov_bound_value(family.union_measure(), lambda_k, n))
}

/// The two bounds that hold without the `Delta_k` assumption. Values are
/// clamped to `[0,1]`; a vacuous flag marks a raw value below zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternativeBounds {
    pub product_form: f64,
    pub power_form: f64,
    pub product_vacuous: bool,
    pub power_vacuous: bool,
}

/// Raw (unclamped) alternative lower bounds from the set measures alone.
pub fn alternative_bound_values(measures: &[f64], lambda: f64, r: f64) -> (f64, f64) {
    let mu_a: f64 = measures.iter().sum();
    let a1 = measures.iter().copied().fold(f64::INFINITY, fmath::min);
    let decay = fmath::exp(-universal_c() * phi_small(r * fmath::sqrt(lambda)));
    let product: f64 = measures.iter().product();
    let first = 1.0 - (1.0 - mu_a) * decay / product;
    let second = 1.0 - (1.0 - mu_a) * decay / fmath::powf(mu_a, mu_a / a1);
    (first, second)
}

/// Alternative multi-set bounds for a family: no `Delta_k` requirement,
/// only `0 < r <= separation/2`.
pub fn bound_alternative(family: &SetFamily, lambda_k: f64, r: f64) -> Result<AlternativeBounds> {
    if !(lambda_k >= 0.0) {
        return Err(Error::NegativeInput);
    }
    if !(r > 0.0) || r > family.separation() / 2.0 {
        return Err(Error::RadiusTooLarge);
    }
    let (first, second) = alternative_bound_values(family.measures(), lambda_k, r);
    Ok(AlternativeBounds {
        product_form: fmath::max(first, 0.0),
        power_form: fmath::max(second, 0.0),
        product_vacuous: first < 0.0,
        power_vacuous: second < 0.0,
    })
}

/// Coalescence structure of a family: the radii at which enlarged sets stop
/// being separated, the component-count step function `N(r)`, and the
/// iteration thresholds `r_1 <= ... <= r_k` (`+inf` once everything merged,
/// in particular `r_k = +inf` always).
#[derive(Debug, Clone, PartialEq)]
pub struct CoalescenceGraph {
    mode: EnlargeMode,
    k: usize,
    /// Radii of successful merges, ascending (at most `k - 1` of them).
    events: Vec<f64>,
    thresholds: Vec<f64>,
}

impl CoalescenceGraph {
    pub fn mode(&self) -> EnlargeMode {
        self.mode
    }

    /// Merge event radii, ascending.
    pub fn events(&self) -> &[f64] {
        &self.events
    }

    /// `r_i = sup { r > 0 : N(r) >= k - i + 1 }`, 1-indexed as
    /// `thresholds()[i-1]`.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Number of connected components of the coalescence graph at radius
    /// `r`. In strict mode an edge is active once `r` exceeds its event
    /// radius; in closed mode once `r` reaches it.
    pub fn n_components(&self, r: f64) -> usize {
        let merged = match self.mode {
            EnlargeMode::Strict => self.events.iter().filter(|&&e| e < r).count(),
            EnlargeMode::Closed => self.events.iter().filter(|&&e| e <= r).count(),
        };
        self.k - merged
    }
}

/// Radius at which the enlargements of two sets coalesce. Strict mode is
/// continuous-faithful: the enlargements of `A_i` and `A_j` reach distance
/// zero at half their set distance. Closed mode on graphs is the smallest
/// integer radius at which the closed enlargements intersect.
fn pair_event_radius<S: Ambient + ?Sized>(space: &S, a: &[usize], b: &[usize], mode: EnlargeMode) -> f64 {
    match mode {
        EnlargeMode::Strict => {
            let mut best = f64::INFINITY;
            for x in 0..space.n() {
                let da = a.iter().map(|&p| space.dist(x, p)).fold(f64::INFINITY, fmath::min);
                let db = b.iter().map(|&p| space.dist(x, p)).fold(f64::INFINITY, fmath::min);
                best = fmath::min(best, 0.5 * (da + db));
            }
            best
        }
        EnlargeMode::Closed => {
            let mut best = f64::INFINITY;
            for x in 0..space.n() {
                let da = a.iter().map(|&p| space.dist(x, p)).fold(f64::INFINITY, fmath::min);
                let db = b.iter().map(|&p| space.dist(x, p)).fold(f64::INFINITY, fmath::min);
                best = fmath::min(best, fmath::max(da, db));
            }
            best
        }
    }
}

/// Computes the coalescence graph of a family: exact event radii from the
/// finite distance data, components via union-find.
pub fn coalescence<S: Ambient + ?Sized>(space: &S, family: &SetFamily, mode: EnlargeMode) -> CoalescenceGraph {
    let k = family.k();
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..k {
        for j in 0..i {
            edges.push((pair_event_radius(space, family.set(i), family.set(j), mode), i, j));
        }
    }
    edges.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut events = Vec::new();
    for (radius, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            events.push(radius);
        }
    }
    let mut thresholds = Vec::with_capacity(k);
    for i in 1..=k {
        thresholds.push(events.get(i - 1).copied().unwrap_or(f64::INFINITY));
    }
    CoalescenceGraph { mode, k, events, thresholds }
}

/// Staged bound of the iteration corollary:
/// `mu(A_r) >= 1 - (1-mu(A)) exp(-c sum_i phi([r /\ r_i - r_{i-1}]_+ sqrt(lambda^{(k-i+1)})))`,
/// valid for every `r > 0`. `eigenvalues` is the full ascending spectrum;
/// indices `1..=k` are consumed. Reduces to the main bound for `r <= r_1`.
pub fn bound_iterated(
    family: &SetFamily,
    coal: &CoalescenceGraph,
    eigenvalues: &[f64],
    r: f64,
) -> Result<f64> {
    let k = family.k();
    require_delta_k(family.measures())?;
    if !(r > 0.0) {
        return Err(Error::RadiusTooLarge);
    }
    if eigenvalues.len() <= k || coal.thresholds().len() != k {
        return Err(Error::DimensionMismatch);
    }
    let c = universal_c();
    let mut exponent = 0.0;
    let mut prev = 0.0f64;
    for i in 1..=k {
        let ri = coal.thresholds()[i - 1];
        let step = fmath::max(fmath::min(r, ri) - prev, 0.0);
        let lam = eigenvalues[k - i + 1];
        exponent += phi_small(step * fmath::sqrt(fmath::max(lam, 0.0)));
        if ri.is_finite() {
            prev = ri;
        } else {
            break; // remaining thresholds are +inf: later terms are zero
        }
    }
    Ok(1.0 - (1.0 - family.union_measure()) * fmath::exp(-c * exponent))
}

/// One enlargement step of the certification trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub n: u32,
    /// `mu(B_n)` computed exactly by BFS enlargement.
    pub mu_enlarged: f64,
    /// `(1 - mu(B_{n-1})) - (1 + lambda)(1 - mu(B_n))`.
    pub step_slack: f64,
    /// `(1 - mu(B)) - (1 + lambda)^n (1 - mu(B_n))`.
    pub iterated_slack: f64,
}

/// Machine check that the one-step inequality
/// `(1 + lambda^(k))(1 - mu(B_1)) <= 1 - mu(B)` and its n-fold iteration
/// hold exactly on the instance. The theorem is unconditional, so a failed
/// certificate signals an implementation bug.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCertificate {
    pub lambda: f64,
    pub n_max: u32,
    pub steps: Vec<StepRecord>,
    pub min_slack: f64,
    pub pass: bool,
}

/// Certifies the Markov-chain theorem on a concrete instance using closed
/// integer enlargements. For `k >= 2` the certified horizon is
/// `floor(separation/2)`; for `k = 1` it is the graph diameter.
pub fn certify_step(chain: &ReversibleChain, family: &SetFamily) -> Result<StepCertificate> {
    require_delta_k(family.measures())?;
    let k = family.k();
    let n_max = if family.separation().is_finite() {
        fmath::floor(family.separation() / 2.0) as u32
    } else {
        chain.diameter() as u32
    };
    if n_max < 1 {
        return Err(Error::RadiusTooLarge);
    }
    let sp = spectrum(chain)?;
    let lambda = sp.lambda(k);
    let union = family.union();
    let mu_b = family.union_measure();
    let mut steps = Vec::with_capacity(n_max as usize);
    let mut prev = mu_b;
    let mut min_slack = f64::INFINITY;
    for n in 1..=n_max {
        let bn = enlarge(chain, &union, n as f64, EnlargeMode::Closed)?;
        let mu_bn = chain.mu_of_set(&bn);
        let step_slack = (1.0 - prev) - (1.0 + lambda) * (1.0 - mu_bn);
        let iterated_slack = (1.0 - mu_b) - fmath::powf(1.0 + lambda, n as f64) * (1.0 - mu_bn);
        min_slack = fmath::min(min_slack, fmath::min(step_slack, iterated_slack));
        steps.push(StepRecord { n, mu_enlarged: mu_bn, step_slack, iterated_slack });
        prev = mu_bn;
    }
    Ok(StepCertificate { lambda, n_max, steps, min_slack, pass: min_slack >= -CERT_TOL })
}

/// Which bound a report curve evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCurveKind {
    Main,
    MainPsi,
    Markov,
    AlternativeProduct,
    AlternativePower,
    Iterated,
}

impl BoundCurveKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundCurveKind::Main => "main",
            BoundCurveKind::MainPsi => "main-psi",
            BoundCurveKind::Markov => "markov",
            BoundCurveKind::AlternativeProduct => "alt-product",
            BoundCurveKind::AlternativePower => "alt-power",
            BoundCurveKind::Iterated => "iterated",
        }
    }
}

/// One sample of a bound curve against the exactly computed enlargement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub r: f64,
    pub bound: f64,
    pub exact: f64,
    pub slack: f64,
}

/// Evaluated bound curve with its validity window and certificate status.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundCurveKind,
    pub mode: EnlargeMode,
    pub used_lambda: f64,
    /// Radius interval on which the bound statement applies.
    pub validity: (f64, f64),
    pub curve: Vec<CurvePoint>,
    /// True iff `bound <= exact + CERT_TOL` at every sampled radius.
    pub certified: bool,
}

fn build_report<S: Ambient + ?Sized>(
    space: &S,
    family: &SetFamily,
    lambda: f64,
    kind: BoundCurveKind,
    radii: &[f64],
    mode: EnlargeMode,
    bound_at: impl Fn(f64) -> f64,
) -> Result<BoundReport> {
    let union = family.union();
    let mut curve = Vec::with_capacity(radii.len());
    let mut certified = true;
    for &r in radii {
        let bound = bound_at(r);
        let exact = space.mu_of_set(&enlarge(space, &union, r, mode)?);
        let slack = exact - bound;
        if slack < -CERT_TOL {
            certified = false;
        }
        curve.push(CurvePoint { r, bound, exact, slack });
    }
    let validity = (radii.first().copied().unwrap_or(0.0), radii.last().copied().unwrap_or(0.0));
    Ok(BoundReport { kind, mode, used_lambda: lambda, validity, curve, certified })
}

/// Samples the main bound over `(0, separation/2]` against exact
/// enlargement measures.
pub fn report_main<S: Ambient + ?Sized>(
    space: &S,
    family: &SetFamily,
    lambda: f64,
    samples: usize,
    use_psi_form: bool,
    mode: Option<EnlargeMode>,
) -> Result<BoundReport> {
    let r_max = report_radius_cap(space, family);
    let radii = linspace_radii(r_max, samples);
    // validate preconditions once at the largest radius
    bound_main(family, lambda, r_max)?;
    let mu_a = family.union_measure();
    let mode = mode.unwrap_or_else(|| space.default_mode());
    let (kind, f): (_, alloc::boxed::Box<dyn Fn(f64) -> f64>) = if use_psi_form {
        (BoundCurveKind::MainPsi, alloc::boxed::Box::new(move |r| main_bound_psi_value(mu_a, lambda, r)))
    } else {
        (BoundCurveKind::Main, alloc::boxed::Box::new(move |r| main_bound_value(mu_a, lambda, r)))
    };
    build_report(space, family, lambda, kind, &radii, mode, f)
}

/// Samples the Markov bound at every integer `n` in `[1, floor(sep/2)]`.
pub fn report_markov(chain: &ReversibleChain, family: &SetFamily, lambda: f64) -> Result<BoundReport> {
    let n_max = if family.separation().is_finite() {
        fmath::floor(family.separation() / 2.0) as u32
    } else {
        chain.diameter() as u32
    };
    bound_markov(family, lambda, 1)?;
    let radii: Vec<f64> = (1..=n_max.max(1)).map(|n| n as f64).collect();
    let mu_b = family.union_measure();
    build_report(chain, family, lambda, BoundCurveKind::Markov, &radii, EnlargeMode::Closed, |r| {
        markov_bound_value(mu_b, lambda, r as u32)
    })
}

/// Samples the two alternative bounds (clamped to `[0,1]`).
pub fn report_alternative<S: Ambient + ?Sized>(
    space: &S,
    family: &SetFamily,
    lambda: f64,
    samples: usize,
    mode: Option<EnlargeMode>,
) -> Result<(BoundReport, BoundReport)> {
    let r_max = report_radius_cap(space, family);
    let radii = linspace_radii(r_max, samples);
    bound_alternative(family, lambda, r_max)?;
    let mode = mode.unwrap_or_else(|| space.default_mode());
    let measures = family.measures().to_vec();
    let m2 = measures.clone();
    let product = build_report(space, family, lambda, BoundCurveKind::AlternativeProduct, &radii, mode, move |r| {
        fmath::max(alternative_bound_values(&measures, lambda, r).0, 0.0)
    })?;
    let power = build_report(space, family, lambda, BoundCurveKind::AlternativePower, &radii, mode, move |r| {
        fmath::max(alternative_bound_values(&m2, lambda, r).1, 0.0)
    })?;
    Ok((product, power))
}

/// Samples the iterated (staged) bound over `(0, r_max]`.
pub fn report_iterated<S: Ambient + ?Sized>(
    space: &S,
    family: &SetFamily,
    eigenvalues: &[f64],
    r_max: f64,
    samples: usize,
    mode: Option<EnlargeMode>,
) -> Result<BoundReport> {
    let mode = mode.unwrap_or_else(|| space.default_mode());
    let coal = coalescence(space, family, mode);
    let radii = linspace_radii(r_max, samples);
    let lambda = eigenvalues.get(family.k()).copied().unwrap_or(0.0);
    bound_iterated(family, &coal, eigenvalues, r_max)?;
    build_report(space, family, lambda, BoundCurveKind::Iterated, &radii, mode, |r| {
        bound_iterated(family, &coal, eigenvalues, r).unwrap_or(0.0)
    })
}

fn report_radius_cap<S: Ambient + ?Sized>(space: &S, family: &SetFamily) -> f64 {
    let half = family.separation() / 2.0;
    if half.is_finite() {
        half
    } else {
        fmath::max(space.diameter(), 1.0)
    }
}

fn linspace_radii(r_max: f64, samples: usize) -> Vec<f64> {
    let samples = samples.max(1);
    (1..=samples).map(|i| r_max * i as f64 / samples as f64).collect()
}
